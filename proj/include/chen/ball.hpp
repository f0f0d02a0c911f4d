// Copyright 2026 The chen-explicit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Midpoint-radius enclosures of real numbers.
//
// Every operation returns a Ball that contains the exact result of the same
// operation applied to any reals inside the operand Balls. Radii are
// propagated by worst-case accumulation: each floating-point step adds a
// relative slack of a few ulps, and the radius itself is rounded upward by
// a (1 + 4 eps) factor. This is coarser than directed rounding but never
// shrinks an enclosure.

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <ostream>
#include <string>
#include <type_traits>

#include "chen/errors.hpp"

namespace chen {

namespace detail {

template <class T>
T unit_roundoff() {
  return std::numeric_limits<T>::epsilon();
}

// Slack covering one correctly-rounded (or faithfully rounded libm) result.
template <class T>
T rounding_slack(const T& v) {
  using std::abs;
  return T(2) * unit_roundoff<T>() * abs(v) + std::numeric_limits<T>::denorm_min();
}

template <class T>
T round_up(const T& r) {
  return r * (T(1) + T(4) * unit_roundoff<T>());
}

}  // namespace detail

/// Parses a decimal literal into T at T's full precision.
template <class T>
T parse_real(const char* text) {
  if constexpr (std::is_same_v<T, double>) {
    return std::strtod(text, nullptr);
  } else if constexpr (std::is_same_v<T, long double>) {
    return std::strtold(text, nullptr);
  } else {
    return T(text);
  }
}

template <class T = double>
class Ball {
 public:
  using value_type = T;

  Ball() : mid_(0), rad_(0) {}
  Ball(T mid, T rad) : mid_(mid), rad_(rad) {
    using std::isnan;
    if (rad_ < T(0) || isnan(rad_)) throw domain_error("Ball radius must be >= 0");
  }
  // Implicit from exactly representable values (integers, dyadic literals).
  Ball(T exact_value) : mid_(exact_value), rad_(0) {}  // NOLINT
  template <class I, class = std::enable_if_t<std::is_integral_v<I>>>
  Ball(I exact_value) : mid_(T(exact_value)), rad_(0) {  // NOLINT
    if (static_cast<I>(mid_) != exact_value) rad_ = detail::rounding_slack(mid_);
  }

  /// A value produced by one rounding step (a literal, a libm call).
  static Ball rounded(T value) { return Ball(value, detail::rounding_slack(value)); }

  /// Parses a decimal literal; the radius covers the conversion error.
  static Ball literal(const char* text) { return rounded(parse_real<T>(text)); }

  static Ball from_interval(T lo, T hi) {
    if (hi < lo) throw domain_error("Ball::from_interval: hi < lo");
    T mid = lo / 2 + hi / 2;
    using std::max;
    T rad = max(T(hi - mid), T(mid - lo));
    return Ball(mid, detail::round_up(T(rad + detail::rounding_slack(mid))));
  }

  const T& mid() const { return mid_; }
  const T& rad() const { return rad_; }
  T lower() const { return mid_ - detail::round_up(rad_); }
  T upper() const { return mid_ + detail::round_up(rad_); }

  bool contains(const T& x) const {
    using std::abs;
    return abs(T(x - mid_)) <= rad_;
  }
  bool contains(const Ball& other) const {
    using std::abs;
    return abs(T(other.mid_ - mid_)) + other.rad_ <= rad_;
  }
  bool excludes_zero() const { return lower() > T(0) || upper() < T(0); }
  bool certainly_positive() const { return lower() > T(0); }
  bool certainly_less_than(const T& bound) const { return upper() < bound; }
  bool certainly_greater_than(const T& bound) const { return lower() > bound; }

  Ball operator-() const { return Ball(-mid_, rad_); }

  Ball& operator+=(const Ball& o) { return *this = *this + o; }
  Ball& operator-=(const Ball& o) { return *this = *this - o; }
  Ball& operator*=(const Ball& o) { return *this = *this * o; }
  Ball& operator/=(const Ball& o) { return *this = *this / o; }

  friend Ball operator+(const Ball& a, const Ball& b) {
    T m = a.mid_ + b.mid_;
    return Ball(m, detail::round_up(T(a.rad_ + b.rad_ + detail::rounding_slack(m))));
  }
  friend Ball operator-(const Ball& a, const Ball& b) {
    T m = a.mid_ - b.mid_;
    return Ball(m, detail::round_up(T(a.rad_ + b.rad_ + detail::rounding_slack(m))));
  }
  friend Ball operator*(const Ball& a, const Ball& b) {
    using std::abs;
    T m = a.mid_ * b.mid_;
    T r = abs(a.mid_) * b.rad_ + abs(b.mid_) * a.rad_ + a.rad_ * b.rad_;
    return Ball(m, detail::round_up(T(r + detail::rounding_slack(m))));
  }
  friend Ball operator/(const Ball& a, const Ball& b) {
    using std::abs;
    if (!b.excludes_zero()) throw domain_error("Ball division by a ball containing zero");
    T m = a.mid_ / b.mid_;
    // |a/b - am/bm| <= (ar + |m| br) / (|bm| - br)
    T denom = abs(b.mid_) - detail::round_up(b.rad_);
    T r = (a.rad_ + abs(m) * b.rad_) / denom;
    return Ball(m, detail::round_up(T(detail::round_up(r) + detail::rounding_slack(m))));
  }

  friend std::ostream& operator<<(std::ostream& os, const Ball& b) {
    return os << b.mid_ << " +/- " << b.rad_;
  }

 private:
  T mid_;
  T rad_;
};

namespace detail {

// Image of a ball under a monotone function f defined on [lo, hi].
template <class T, class F>
Ball<T> monotone_image(const Ball<T>& x, F&& f) {
  using std::abs;
  using std::max;
  T lo = x.lower() - rounding_slack(x.mid());
  T hi = x.upper() + rounding_slack(x.mid());
  if (x.rad() == T(0)) lo = hi = x.mid();
  T flo = f(lo);
  T fhi = f(hi);
  T fm = f(x.mid());
  T spread = max(abs(T(fhi - fm)), abs(T(fm - flo)));
  T slack = T(4) * unit_roundoff<T>() * max(abs(fm), max(abs(flo), abs(fhi)));
  return Ball<T>(fm, round_up(T(spread + slack + std::numeric_limits<T>::denorm_min())));
}

}  // namespace detail

template <class T>
Ball<T> log(const Ball<T>& x) {
  if (!(x.lower() > T(0))) throw domain_error("log of a ball not strictly positive");
  return detail::monotone_image(x, [](const T& v) {
    using std::log;
    return T(log(v));
  });
}

template <class T>
Ball<T> exp(const Ball<T>& x) {
  return detail::monotone_image(x, [](const T& v) {
    using std::exp;
    return T(exp(v));
  });
}

template <class T>
Ball<T> sqrt(const Ball<T>& x) {
  if (x.lower() < T(0)) throw domain_error("sqrt of a ball with negative part");
  return detail::monotone_image(x, [](const T& v) {
    using std::sqrt;
    return T(sqrt(v));
  });
}

/// x^e for a strictly positive ball and a real exponent.
template <class T>
Ball<T> pow(const Ball<T>& x, const Ball<T>& e) {
  return exp(e * log(x));
}

template <class T>
Ball<T> square(const Ball<T>& x) {
  return x * x;
}

/// Hull of two balls.
template <class T>
Ball<T> hull(const Ball<T>& a, const Ball<T>& b) {
  using std::max;
  using std::min;
  return Ball<T>::from_interval(min(a.lower(), b.lower()), max(a.upper(), b.upper()));
}

namespace constants {

// 40 significant digits; validated against Brent-McMillan in the constants ledger.
inline constexpr const char* kEulerGammaDigits = "0.5772156649015328606065120900824024310422";
inline constexpr const char* kPiDigits = "3.141592653589793238462643383279502884197";
inline constexpr const char* kLog2Digits = "0.6931471805599453094172321214581765680755";

template <class T = double>
Ball<T> euler_gamma() {
  return Ball<T>::literal(kEulerGammaDigits);
}

template <class T = double>
Ball<T> pi() {
  return Ball<T>::literal(kPiDigits);
}

/// e^gamma.
template <class T = double>
Ball<T> exp_gamma() {
  return exp(euler_gamma<T>());
}

}  // namespace constants

}  // namespace chen
