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

// Explicit constants as Balls, collected into an auditable ledger.

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <string>

#include "chen/ball.hpp"
#include "chen/errors.hpp"
#include "chen/primes.hpp"
#include "chen/quadrature.hpp"
#include "chen/sievefun.hpp"

namespace chen {

// ---------------------------------------------------------------------------
// Zeta values.

/// zeta(s) for integer s >= 2 by Borwein's accelerated eta series.
/// Truncation: |error| <= 3 / (3 + sqrt 8)^n / |1 - 2^{1-s}|.
template <class T = double>
Ball<T> zeta(int s, int n = 40) {
  using std::pow;
  using std::sqrt;
  if (s < 2) throw domain_error("zeta: integer s >= 2 required");
  if (n < 1) throw domain_error("zeta: n >= 1 required");
  std::vector<Ball<T>> d(n + 1);
  Ball<T> term(T(1));
  d[0] = term;
  for (int i = 1; i <= n; ++i) {
    term = term * Ball<T>(T(4) * T(n + i - 1) * T(n - i + 1)) / Ball<T>(T(2 * i) * T(2 * i - 1));
    d[i] = d[i - 1] + term;
  }
  Ball<T> sum(T(0));
  for (int k = 0; k < n; ++k) {
    Ball<T> kp = Ball<T>(T(1));
    for (int e = 0; e < s; ++e) kp = kp * Ball<T>(T(k + 1));
    Ball<T> t = (d[k] - d[n]) / kp;
    sum = (k % 2 == 0) ? sum + t : sum - t;
  }
  Ball<T> two_pow = Ball<T>(T(1));
  for (int e = 0; e < s - 1; ++e) two_pow = two_pow * Ball<T>(T(2));
  Ball<T> factor = Ball<T>(T(1)) - Ball<T>(T(1)) / two_pow;  // 1 - 2^{1-s}
  Ball<T> value = -sum / (d[n] * factor);
  T trunc = T(3) / pow(T(3) + sqrt(T(8)), n) / factor.lower();
  return Ball<T>(value.mid(), detail::round_up(T(value.rad() + trunc)));
}

// ---------------------------------------------------------------------------
// Euler's constant check.

using Float50 = boost::multiprecision::cpp_bin_float_50;

/// Euler's constant by the Brent-McMillan (Bessel-function) formula at
/// 50 digits; truncation error about pi e^{-4n}.
inline Float50 euler_gamma_brent_mcmillan(int n = 16) {
  using boost::multiprecision::log;
  Float50 nn = n;
  Float50 A = -log(nn), B = 1, U = A, V = 1;
  const Float50 n2 = nn * nn;
  for (int k = 1; k <= 6 * n; ++k) {
    Float50 kk = k;
    B = B * n2 / (kk * kk);
    A = (A * n2 / kk + B) / kk;
    U += A;
    V += B;
  }
  return U / V;
}

/// |literal - Brent-McMillan| at 50 digits.
inline double euler_gamma_literal_discrepancy() {
  Float50 lit(constants::kEulerGammaDigits);
  Float50 diff = lit - euler_gamma_brent_mcmillan();
  return static_cast<double>(boost::multiprecision::abs(diff));
}

// ---------------------------------------------------------------------------
// Named constants.

/// c0 = 2^{13/2}/(9 pi log 2) (1/3 + 3/(2 log 2)) ((2 + log(log 2 / log(4/3))) / log 2) sqrt(psi(113)/113).
template <class T = double>
Ball<T> c0_from_psi(const Ball<T>& psi113) {
  const Ball<T> one(T(1)), two(T(2)), three(T(3));
  const Ball<T> log2 = log(two);
  const Ball<T> pi = constants::pi<T>();
  const Ball<T> lead = exp(Ball<T>(T(13)) / two * log2) / (Ball<T>(T(9)) * pi * log2);
  const Ball<T> second = one / three + three / (two * log2);
  const Ball<T> third = (two + log(log2 / log(Ball<T>(T(4)) / three))) / log2;
  return lead * second * third * sqrt(psi113 / Ball<T>(T(113)));
}

inline Ball<> compute_c0(const PrimeTable& table) {
  if (table.limit() < 113) throw capacity_error("compute_c0 needs a prime table up to 113");
  return c0_from_psi(chebyshev_ball(113, ChebyshevKind::psi, table));
}

/// c1 = zeta(2) zeta(3) / zeta(6).
template <class T = double>
Ball<T> compute_c1() {
  return zeta<T>(2) * zeta<T>(3) / zeta<T>(6);
}

inline constexpr double kC2Pad = 1e-8;

/// The integral part of c2: int_{1/8}^{1/3} log(2 - 3b) / (b (1 - b)) db.
template <class T = double>
Ball<T> c2_integral(double abs_tol = 1e-13) {
  auto f = [](const T& b) {
    using std::log;
    return T(log(T(2) - T(3) * b) / (b * (T(1) - b)));
  };
  const T lo = T(1) / T(8);
  const T hi = T(1) / T(3);
  QuadratureOptions q;
  q.abs_tol = abs_tol;
  auto r = integrate<T>(f, lo, hi, q);
  // hi is 1/3 rounded; the integrand vanishes there, so moving the endpoint
  // by one rounding changes the integral by at most |f'| * slack^2.
  T endpoint = detail::rounding_slack(hi) * detail::rounding_slack(hi) * T(16);
  return Ball<T>(r.value.mid(), detail::round_up(T(r.value.rad() + endpoint)));
}

/// c2 = c2_integral + 1e-8 (the pad is part of the definition).
template <class T = double>
Ball<T> compute_c2(double abs_tol = 1e-13) {
  return c2_integral<T>(abs_tol) + Ball<T>::literal("1e-8");
}

/// eps0(N) = 1 / max{57, log log N}, from log log N directly.
inline double eps0(double loglog_N) {
  if (!(loglog_N > 0)) throw domain_error("eps0 requires loglog N > 0");
  return 1.0 / std::max(57.0, loglog_N);
}

inline Ball<> eps0_ball(double loglog_N) {
  return Ball<>(1.0) / Ball<>(std::max(57.0, loglog_N));
}

// ---------------------------------------------------------------------------
// Ledger.

struct LedgerEntry {
  Ball<> value;
  std::optional<double> paper_bound;  // upper bound claimed in the source
  std::string provenance;
  bool pass = true;
};

struct ConstantsLedger {
  std::map<std::string, LedgerEntry> entries;  // sorted by name
  bool pass() const {
    for (const auto& [name, e] : entries)
      if (!e.pass) return false;
    return true;
  }
};

struct LedgerOptions {
  double precision_target = 1e-12;  // quadrature tolerance for integral constants
  std::uint64_t un_truncation = 1'000'000;
};

/// Builds every constant. The table must reach 113 and `un_truncation`.
inline ConstantsLedger ledger(const PrimeTable& table, const LedgerOptions& opts = {}) {
  if (!(opts.precision_target >= 1e-15 && opts.precision_target <= 1e-6))
    throw config_error("precision target must lie in [1e-15, 1e-6]");
  ConstantsLedger L;
  auto add = [&](const std::string& name, Ball<> v, std::optional<double> bound, std::string prov) {
    LedgerEntry e{v, bound, std::move(prov), true};
    if (bound) e.pass = v.upper() < *bound;
    L.entries.emplace(name, std::move(e));
  };
  auto add_checked = [&](const std::string& name, const auto& compute, std::optional<double> bound, std::string prov) {
    try {
      add(name, compute(), bound, std::move(prov));
    } catch (const std::exception& ex) {
      throw std::runtime_error("constant '" + name + "': " + ex.what());
    }
  };

  const double gamma_gap = euler_gamma_literal_discrepancy();
  {
    LedgerEntry e{constants::euler_gamma(), std::nullopt,
                  "40-digit literal; Brent-McMillan check at 50 digits", gamma_gap < 1e-20};
    L.entries.emplace("euler_gamma", e);
  }
  add_checked("exp_gamma", [] { return constants::exp_gamma(); }, std::nullopt, "exp of euler_gamma");
  add_checked("psi(113)", [&] { return chebyshev_ball(113, ChebyshevKind::psi, table); }, std::nullopt,
              "prime-power sum over the prime table");
  add_checked("c0", [&] { return compute_c0(table); }, 48.83215, "closed form with exact psi(113)");
  add_checked("zeta(2)", [] { return zeta(2); }, std::nullopt, "Borwein eta acceleration, n = 40");
  add_checked("zeta(3)", [] { return zeta(3); }, std::nullopt, "Borwein eta acceleration, n = 40");
  add_checked("zeta(6)", [] { return zeta(6); }, std::nullopt, "Borwein eta acceleration, n = 40");
  add_checked("c1", [] { return compute_c1(); }, 1.9436, "zeta(2) zeta(3) / zeta(6)");
  add_checked("c2", [&] { return compute_c2(opts.precision_target); }, 0.36309,
              "adaptive Gauss-Kronrod integral + 1e-8 pad");
  add_checked("U_4", [&] { return singular_series_UN(4, opts.un_truncation, table); }, std::nullopt,
              "2 e^-gamma x twin-prime product, primes <= " + std::to_string(opts.un_truncation) +
                  " plus telescoping tail");
  add_checked("eps0(loglogN=36)", [] { return eps0_ball(36.0); }, std::nullopt, "1 / max{57, loglog N}");
  add_checked("f1(4)", [] { return eval_f1(4.0); }, 0.0866, "delay-equation solver");
  add_checked("F1(4)", [] { return eval_F1(4.0); }, 0.0866, "delay-equation solver");

  // Literal constants carried over without re-derivation.
  const char* literals[] = {"255.84406", "298.87013", "767.7471", "496.6254", "430.0815", "993.2507",
                            "860.16295", "845.33239", "736.33191", "0.5198",   "0.007"};
  for (const char* lit : literals) add(std::string("literal:") + lit, Ball<>::literal(lit), std::nullopt, "published literal");
  return L;
}

}  // namespace chen
