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

// Adaptive 7/15-point Gauss-Kronrod quadrature returning a Ball.
//
// The per-interval error estimate is the raw |K15 - G7| difference (no
// QUADPACK-style rescaling, which can under-report for coarse partitions).
// Bisection always splits the interval with the largest estimate, so the
// partition produced for a tighter tolerance refines the looser one.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <queue>
#include <vector>

#include "chen/ball.hpp"
#include "chen/errors.hpp"

namespace chen {

struct QuadratureOptions {
  double abs_tol = 1e-12;
  std::size_t max_intervals = 4096;
};

template <class T = double>
struct QuadratureResult {
  Ball<T> value;
  T error_estimate{};
  std::size_t evaluations = 0;
  std::size_t intervals = 0;
  bool converged = false;
};

namespace detail {

template <class T>
struct Kronrod15 {
  std::array<T, 8> x;
  std::array<T, 8> wk;
  std::array<T, 4> wg;

  static const Kronrod15& get() {
    static const Kronrod15 rule = [] {
      Kronrod15 r;
      const char* xs[8] = {"0.991455371120812639206854697526329", "0.949107912342758524526189684047851",
                           "0.864864423359769072789712788640926", "0.741531185599394439863864773280788",
                           "0.586087235467691130294144845693013", "0.405845151377397166906606412076961",
                           "0.207784955007898467600689403773245", "0"};
      const char* wks[8] = {"0.022935322010529224963732008058970", "0.063092092629978553290700663189204",
                            "0.104790010322250183839876322541518", "0.140653259715525918745189590510238",
                            "0.169004726639267902826583426598550", "0.190350578064785409913256402421014",
                            "0.204432940075298892414161999234649", "0.209482141084727828012999174891714"};
      const char* wgs[4] = {"0.129484966168869693270611432679082", "0.279705391489276667901467771423780",
                            "0.381830050505118944950369775488975", "0.417959183673469387755102040816327"};
      for (int i = 0; i < 8; ++i) {
        r.x[i] = parse_real<T>(xs[i]);
        r.wk[i] = parse_real<T>(wks[i]);
      }
      for (int i = 0; i < 4; ++i) r.wg[i] = parse_real<T>(wgs[i]);
      return r;
    }();
    return rule;
  }
};

template <class T>
struct Panel {
  T a, b;
  T kronrod;
  T error;     // |K15 - G7|
  T rounding;  // floating-point slack of the panel sum
  bool operator<(const Panel& o) const { return error < o.error; }
};

template <class T, class F>
Panel<T> gk15(F& f, const T& a, const T& b) {
  using std::abs;
  const auto& rule = Kronrod15<T>::get();
  T center = (a + b) / 2;
  T half = (b - a) / 2;
  T fc = f(center);
  T resk = fc * rule.wk[7];
  T resg = fc * rule.wg[3];
  T absk = abs(resk);
  for (int j = 0; j < 7; ++j) {
    T dx = half * rule.x[j];
    T f1 = f(T(center - dx));
    T f2 = f(T(center + dx));
    resk += rule.wk[j] * (f1 + f2);
    absk += rule.wk[j] * (abs(f1) + abs(f2));
    if (j % 2 == 1) resg += rule.wg[j / 2] * (f1 + f2);
  }
  Panel<T> p;
  p.a = a;
  p.b = b;
  p.kronrod = resk * half;
  p.error = abs(T((resk - resg) * half));
  p.rounding = T(32) * unit_roundoff<T>() * absk * abs(half);
  return p;
}

}  // namespace detail

/// Integrates f over [a, b]. The Ball radius is the summed |K15 - G7|
/// estimate plus accumulated rounding slack. If `max_intervals` is reached
/// first, the result is still returned with its (larger) honest radius.
template <class T = double, class F>
QuadratureResult<T> integrate(F&& f, const T& a, const T& b, const QuadratureOptions& opts = {}) {
  using std::abs;
  QuadratureResult<T> out;
  if (a == b) {
    out.converged = true;
    return out;
  }
  if (b < a) {
    auto r = integrate<T>(f, b, a, opts);
    r.value = -r.value;
    return r;
  }
  std::priority_queue<detail::Panel<T>> heap;
  heap.push(detail::gk15<T>(f, a, b));
  out.evaluations = 15;
  T total_err = heap.top().error;
  const T tol = T(opts.abs_tol);
  while (total_err > tol && heap.size() < opts.max_intervals) {
    auto worst = heap.top();
    heap.pop();
    T mid = (worst.a + worst.b) / 2;
    if (!(worst.a < mid && mid < worst.b)) {
      heap.push(worst);  // cannot split further at this precision
      break;
    }
    auto left = detail::gk15<T>(f, worst.a, mid);
    auto right = detail::gk15<T>(f, mid, worst.b);
    out.evaluations += 30;
    heap.push(left);
    heap.push(right);
    total_err += left.error + right.error - worst.error;
  }
  // Deterministic summation: ascending left endpoint.
  std::vector<detail::Panel<T>> panels;
  panels.reserve(heap.size());
  while (!heap.empty()) {
    panels.push_back(heap.top());
    heap.pop();
  }
  std::sort(panels.begin(), panels.end(), [](const auto& l, const auto& r) { return l.a < r.a; });
  T sum = 0, err = 0, rnd = 0, abs_sum = 0;
  for (const auto& p : panels) {
    sum += p.kronrod;
    err += p.error;
    rnd += p.rounding;
    abs_sum += abs(p.kronrod);
  }
  rnd += T(2) * detail::unit_roundoff<T>() * T(panels.size()) * abs_sum;
  out.value = Ball<T>(sum, detail::round_up(T(err + rnd + std::numeric_limits<T>::denorm_min())));
  out.error_estimate = err;
  out.intervals = panels.size();
  out.converged = err <= tol;
  return out;
}

}  // namespace chen
