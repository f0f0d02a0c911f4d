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

// The linear-sieve functions f1(s), F1(s).
//
//   F1(s) = 2e^gamma - s                  on [0, 3]
//   f1(s) = s                             on (0, 2]
//   f1'(s) = -F1(s - 1) / (s - 1)         for s >= 2
//   F1'(s) = -f1(s - 1) / (s - 1)         for s >= 3
//
// With f1 = s(1 - f) and F1 = s(F - 1) this is the classical linear-sieve
// pair. The delay system is solved by the method of steps: each unit
// interval [k, k+1] is resolved into a Chebyshev interpolant whose node
// values come from adaptive Gauss-Kronrod integrals of the previous unit
// interval. Every piece carries a uniform radius that accumulates the
// inherited radius, the quadrature error estimates, the interpolation tail
// and rounding.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

#include "chen/ball.hpp"
#include "chen/errors.hpp"
#include "chen/quadrature.hpp"

namespace chen {

inline constexpr double kSieveMaxS = 12.0;

class SieveFunctions {
 public:
  struct Options {
    double s_max = kSieveMaxS;
    double abs_tol = 1e-13;  // per unit interval
    int degree = 40;
  };

  SieveFunctions() : SieveFunctions(Options{}) {}
  explicit SieveFunctions(Options opts) : opts_(opts), exp_gamma_(constants::exp_gamma()) {
    if (!(opts_.s_max > 0) || opts_.s_max > kSieveMaxS)
      throw config_error("sieve functions: s_max must lie in (0, 12]");
    if (!(opts_.abs_tol > 0)) throw config_error("sieve functions: abs_tol must be positive");
    if (opts_.degree < 8 || opts_.degree > 256) throw config_error("sieve functions: degree must lie in [8, 256]");
    solve();
  }

  double s_max() const { return opts_.s_max; }
  const Options& options() const { return opts_; }

  Ball<> F1(double s) const {
    if (!(s >= 0) || s > opts_.s_max) throw domain_error("F1: s outside [0, s_max]");
    if (s <= 3.0) return closed_F1(s);
    return eval_piece(F1_pieces_, 3, s);
  }

  Ball<> f1(double s) const {
    if (!(s > 0) || s > opts_.s_max) throw domain_error("f1: s outside (0, s_max]");
    if (s <= 2.0) return Ball<>(s);
    return eval_piece(f1_pieces_, 2, s);
  }

  /// f1'(s); at the kink s = 2 the right derivative is returned unless
  /// `left` is set.
  Ball<> df1(double s, bool left = false) const {
    if (s < 2.0 || (s == 2.0 && left)) return Ball<>(1.0);
    return -F1(s - 1.0) / Ball<>(s - 1.0);
  }

  Ball<> dF1(double s) const {
    if (s <= 3.0) return Ball<>(-1.0);
    return -f1(s - 1.0) / Ball<>(s - 1.0);
  }

 private:
  struct Piece {
    double a = 0;                 // interval [a, a + 1]
    std::vector<double> coeffs;   // Chebyshev coefficients in t = 2(s - a) - 1
    double radius = 0;            // uniform bound on |piece - true function|
    Ball<> end_value;             // value at a + 1 with node-level radius
  };

  Ball<> closed_F1(double s) const { return Ball<>(2.0) * exp_gamma_ - Ball<>(s); }

  static double clenshaw(const std::vector<double>& c, double t) {
    double b1 = 0, b2 = 0;
    for (std::size_t k = c.size(); k-- > 1;) {
      double b0 = 2 * t * b1 - b2 + c[k];
      b2 = b1;
      b1 = b0;
    }
    return t * b1 - b2 + c[0];
  }

  Ball<> eval_piece(const std::vector<Piece>& pieces, int first, double s) const {
    auto idx = static_cast<std::size_t>(std::floor(s)) - static_cast<std::size_t>(first);
    if (idx >= pieces.size()) idx = pieces.size() - 1;  // s == right end
    const Piece& p = pieces[idx];
    double t = std::clamp(2.0 * (s - p.a) - 1.0, -1.0, 1.0);
    double v = clenshaw(p.coeffs, t);
    return Ball<>(v, detail::round_up(p.radius + detail::rounding_slack(v)));
  }

  double point_value(const std::vector<Piece>& pieces, int first, double s) const {
    auto idx = static_cast<std::size_t>(std::floor(s)) - static_cast<std::size_t>(first);
    if (idx >= pieces.size()) idx = pieces.size() - 1;
    const Piece& p = pieces[idx];
    return clenshaw(p.coeffs, std::clamp(2.0 * (s - p.a) - 1.0, -1.0, 1.0));
  }

  // Resolves v(x) = start - int_a^x g(t) dt on [a, a+1], where g carries a
  // uniform radius g_radius.
  template <class G>
  Piece make_piece(double a, const Ball<>& start, G&& g, double g_radius) const {
    const int n = opts_.degree;
    const double pi = constants::pi().mid();
    std::vector<double> x(n + 1), v(n + 1);
    std::vector<double> node_rad(n + 1);
    // Ascending Chebyshev-Lobatto nodes: t_j = -cos(j pi / n).
    for (int j = 0; j <= n; ++j) x[j] = a + 0.5 * (1.0 - std::cos(j * pi / n));
    x[0] = a;
    x[n] = a + 1.0;
    QuadratureOptions q;
    q.abs_tol = opts_.abs_tol / n;
    Ball<> acc = start;
    v[0] = acc.mid();
    node_rad[0] = acc.rad();
    for (int j = 1; j <= n; ++j) {
      auto r = integrate<double>(g, x[j - 1], x[j], q);
      acc = acc - r.value;
      v[j] = acc.mid();
      node_rad[j] = acc.rad() + g_radius * (x[j] - a);
    }
    // Coefficients for t_j = -cos(j pi/n)  <=>  T_k(t_j) = (-1)^k cos(k j pi / n).
    std::vector<double> c(n + 1, 0.0);
    for (int k = 0; k <= n; ++k) {
      double sum = 0;
      for (int j = 0; j <= n; ++j) {
        double w = (j == 0 || j == n) ? 0.5 : 1.0;
        sum += w * v[j] * std::cos(static_cast<double>(k) * j * pi / n);
      }
      c[k] = (k % 2 ? -1.0 : 1.0) * 2.0 * sum / n;
    }
    c[0] *= 0.5;
    c[n] *= 0.5;
    double abs_c = 0;
    for (double ck : c) abs_c += std::abs(ck);
    double tail = 2.0 * (std::abs(c[n]) + std::abs(c[n - 1]) + std::abs(c[n - 2]));
    double rounding = 4.0 * (n + 1) * detail::unit_roundoff<double>() * abs_c;
    Piece p;
    p.a = a;
    p.coeffs = std::move(c);
    p.radius = detail::round_up(*std::max_element(node_rad.begin(), node_rad.end()) + tail + rounding);
    p.end_value = Ball<>(v[n], detail::round_up(node_rad[n] + rounding));
    return p;
  }

  void solve() {
    const int last = static_cast<int>(std::ceil(opts_.s_max - 1e-12));
    const double eg2 = 2.0 * exp_gamma_.mid();
    const double eg2_rad = 2.0 * exp_gamma_.rad() + detail::rounding_slack(eg2);
    // f1 on [k, k+1] for k = 2 .. last-1, F1 on [k+1, k+2] as soon as f1 on [k, k+1] exists.
    for (int k = 2; k < last; ++k) {
      const double a = k;
      if (k <= 3) {
        // F1(t - 1) closed form for t - 1 <= 3.
        auto g = [eg2](double t) { return (eg2 - (t - 1.0)) / (t - 1.0); };
        Ball<> start = (k == 2) ? Ball<>(2.0) : f1_pieces_.back().end_value;
        f1_pieces_.push_back(make_piece(a, start, g, eg2_rad / (a - 1.0)));
      } else {
        const Piece& src = F1_pieces_[static_cast<std::size_t>(k - 4)];  // F1 on [k-1, k]
        auto g = [this, &src](double t) {
          double u = t - 1.0;
          return clenshaw(src.coeffs, std::clamp(2.0 * (u - src.a) - 1.0, -1.0, 1.0)) / u;
        };
        f1_pieces_.push_back(make_piece(a, f1_pieces_.back().end_value, g, src.radius / (a - 1.0)));
      }
      if (k + 1 < last) {
        const Piece& src = f1_pieces_.back();  // f1 on [k, k+1]
        auto g = [&src](double t) {
          double u = t - 1.0;
          return clenshaw(src.coeffs, std::clamp(2.0 * (u - src.a) - 1.0, -1.0, 1.0)) / u;
        };
        Ball<> start = (k == 2) ? closed_F1(3.0) : F1_pieces_.back().end_value;
        F1_pieces_.push_back(make_piece(a + 1.0, start, g, src.radius / a));
      }
    }
  }

  Options opts_;
  Ball<> exp_gamma_;
  std::vector<Piece> f1_pieces_;  // [2,3], [3,4], ...
  std::vector<Piece> F1_pieces_;  // [3,4], [4,5], ...
};

/// Shared solver at the default options.
inline const SieveFunctions& default_sieve_functions() {
  static const SieveFunctions instance;
  return instance;
}

inline Ball<> eval_F1(double s) { return default_sieve_functions().F1(s); }
inline Ball<> eval_f1(double s) { return default_sieve_functions().f1(s); }

// ---------------------------------------------------------------------------
// Tabulation.

struct SieveGridNode {
  double s = 0;
  Ball<> f1;
  Ball<> F1;
  double df1_left = 0;
  double df1_right = 0;
  double dF1 = 0;
};

class SieveFunctionGrid {
 public:
  SieveFunctionGrid(double s_min, double s_max, double step, std::vector<SieveGridNode> nodes)
      : s_min_(s_min), s_max_(s_max), step_(step), nodes_(std::move(nodes)) {}

  double s_min() const { return s_min_; }
  double s_max() const { return s_max_; }
  double step() const { return step_; }
  const std::vector<SieveGridNode>& nodes() const { return nodes_; }

  /// Node index nearest to s (for on-grid lookups).
  std::size_t index_of(double s) const {
    double i = std::round((s - s_min_) / step_);
    if (i < 0 || i >= static_cast<double>(nodes_.size())) throw domain_error("grid lookup outside tabulated range");
    return static_cast<std::size_t>(i);
  }

  Ball<> f1(double s) const { return interpolate(s, true); }
  Ball<> F1(double s) const { return interpolate(s, false); }

  /// CSV: s,f1,f1_radius,F1,F1_radius at 17 significant digits.
  void write_csv(std::ostream& os) const {
    os << "s,f1,f1_radius,F1,F1_radius\n";
    char buf[160];
    for (const auto& n : nodes_) {
      std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g\n", n.s, n.f1.mid(), n.f1.rad(), n.F1.mid(),
                    n.F1.rad());
      os << buf;
    }
  }

 private:
  // Cubic Hermite with derivatives supplied by the delay equations, limited
  // (Fritsch-Carlson) to preserve monotonicity of the node data. The radius
  // adds the node radii, a fourth-derivative interpolation bound estimated
  // from third differences of the derivative data, and any limiter change.
  Ball<> interpolate(double s, bool lower_fn) const {
    if (!(s >= s_min_) || s > nodes_.back().s + 1e-12) throw domain_error("grid interpolation outside tabulated range");
    auto value = [&](std::size_t i) -> const Ball<>& { return lower_fn ? nodes_[i].f1 : nodes_[i].F1; };
    auto dright = [&](std::size_t i) { return lower_fn ? nodes_[i].df1_right : nodes_[i].dF1; };
    auto dleft = [&](std::size_t i) { return lower_fn ? nodes_[i].df1_left : nodes_[i].dF1; };
    double pos = (s - s_min_) / step_;
    auto i = static_cast<std::size_t>(std::floor(pos));
    if (i + 1 >= nodes_.size()) i = nodes_.size() - 2;
    const double h = nodes_[i + 1].s - nodes_[i].s;
    const double t = (s - nodes_[i].s) / h;
    if (t <= 0) return value(i);
    if (t >= 1) return value(i + 1);
    const double y0 = value(i).mid(), y1 = value(i + 1).mid();
    double m0 = dright(i) * h, m1 = dleft(i + 1) * h;
    const double m0_exact = m0, m1_exact = m1;
    const double delta = y1 - y0;
    if (delta == 0) {
      m0 = m1 = 0;
    } else {
      double a = m0 / delta, b = m1 / delta;
      if (a < 0) m0 = 0, a = 0;
      if (b < 0) m1 = 0, b = 0;
      double r2 = a * a + b * b;
      if (r2 > 9) {
        double tau = 3 / std::sqrt(r2);
        m0 = tau * a * delta;
        m1 = tau * b * delta;
      }
    }
    const double t2 = t * t, t3 = t2 * t;
    const double h00 = 2 * t3 - 3 * t2 + 1, h10 = t3 - 2 * t2 + t, h01 = -2 * t3 + 3 * t2, h11 = t3 - t2;
    const double v = h00 * y0 + h10 * m0 + h01 * y1 + h11 * m1;
    // Fourth derivative from third differences of derivative data around the interval.
    std::size_t lo = i >= 1 ? i - 1 : 0;
    std::size_t hi = std::min(lo + 3, nodes_.size() - 1);
    lo = hi >= 3 ? hi - 3 : 0;
    double d4 = 0;
    if (hi - lo == 3) {
      double third = dright(lo + 3) - 3 * dright(lo + 2) + 3 * dright(lo + 1) - dright(lo);
      d4 = std::abs(third) / (h * h * h);
    }
    const double interp = 4.0 * d4 * h * h * h * h / 384.0;
    const double limiter = 0.25 * (std::abs(m0 - m0_exact) + std::abs(m1 - m1_exact));
    const double rad = std::max(value(i).rad(), value(i + 1).rad()) + interp + limiter;
    return Ball<>(v, detail::round_up(rad + 8 * detail::rounding_slack(std::max(std::abs(y0), std::abs(y1)))));
  }

  double s_min_, s_max_, step_;
  std::vector<SieveGridNode> nodes_;
};

/// Tabulates f1, F1 at s_min + i*step up to s_max.
inline SieveFunctionGrid build_grid(double s_max, double step, double s_min = 1.0,
                                    const SieveFunctions& fns = default_sieve_functions()) {
  if (!(step >= 1e-4 && step <= 0.1)) throw config_error("grid step must lie in [1e-4, 0.1]");
  if (!(s_max <= fns.s_max())) throw config_error("grid s_max exceeds the solver range");
  if (!(s_min > 0) || !(s_min < s_max)) throw config_error("grid needs 0 < s_min < s_max");
  const auto count = static_cast<std::size_t>(std::floor((s_max - s_min) / step + 1e-9)) + 1;
  std::vector<SieveGridNode> nodes;
  nodes.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    SieveGridNode n;
    n.s = s_min + static_cast<double>(i) * step;
    if (n.s > s_max) n.s = s_max;
    n.f1 = fns.f1(n.s);
    n.F1 = fns.F1(n.s);
    n.df1_left = fns.df1(n.s, true).mid();
    n.df1_right = fns.df1(n.s, false).mid();
    n.dF1 = fns.dF1(n.s).mid();
    nodes.push_back(n);
  }
  return SieveFunctionGrid(s_min, s_max, step, std::move(nodes));
}

}  // namespace chen
