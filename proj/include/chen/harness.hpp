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

// Desk-scale sifted sets, pi_2(N), and the identities relating them.

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "chen/ball.hpp"
#include "chen/bounds.hpp"
#include "chen/errors.hpp"
#include "chen/primes.hpp"

namespace chen {

enum class SetBase { A, A_sub_q, B, B_window_j, explicit_list };

inline std::string to_string(SetBase b) {
  switch (b) {
    case SetBase::A: return "A";
    case SetBase::A_sub_q: return "A_sub_q";
    case SetBase::B: return "B";
    case SetBase::B_window_j: return "B_window_j";
    case SetBase::explicit_list: return "explicit_list";
  }
  return "?";
}

struct SiftedSetSpec {
  SetBase base = SetBase::A;
  std::uint64_t N = 0;
  double z = 0;  // 0 -> N^{1/8}
  double y = 0;  // 0 -> N^{1/3}
  /// Elements are further restricted to multiples of q (A_q, A_d, B_d). 1 = no restriction.
  std::uint64_t q = 1;
  /// Sieve primes p < sift_level; 0 -> z for A-type sets, y for B-type sets.
  double sift_level = 0;
  std::vector<std::uint64_t> excluded_primes;
  std::optional<std::pair<double, double>> window;  // [w_j, (1+eps) w_j)
  std::vector<std::int64_t> elements;               // explicit_list only

  static SiftedSetSpec for_N(std::uint64_t N, SetBase base = SetBase::A) {
    SiftedSetSpec s;
    s.base = base;
    s.N = N;
    return s;
  }
  double z_value() const { return z > 0 ? z : std::pow(static_cast<double>(N), 1.0 / 8.0); }
  double y_value() const { return y > 0 ? y : std::cbrt(static_cast<double>(N)); }
  double level() const {
    if (sift_level > 0) return sift_level;
    return (base == SetBase::B || base == SetBase::B_window_j) ? y_value() : z_value();
  }
};

struct SiftResult {
  std::uint64_t count = 0;
  std::vector<std::int64_t> survivors_sample;
  SiftedSetSpec spec;
};

inline constexpr std::size_t kSurvivorSample = 32;

namespace detail {

inline void check_even_N(std::uint64_t N, const PrimeTable& table, std::uint64_t min_N = 4) {
  if (N % 2 != 0) throw domain_error("N must be even (got " + std::to_string(N) + ")");
  if (N < min_N) throw domain_error("N must be at least " + std::to_string(min_N));
  if (N > table.limit()) throw capacity_error("N = " + std::to_string(N) + " exceeds table limit " + std::to_string(table.limit()));
}

inline void check_spec(const SiftedSetSpec& s) {
  if (s.q == 0) throw domain_error("modulus q must be positive");
  std::set<std::uint64_t> seen;
  for (auto p : s.excluded_primes) {
    if (!seen.insert(p).second) throw domain_error("excluded primes must be distinct");
    if (p < 2 || omega(p) != 1 || factorize(p)[0].second != 1) throw domain_error("excluded entry " + std::to_string(p) + " is not prime");
  }
  if (s.base == SetBase::B_window_j && !s.window) throw domain_error("B_window_j requires a window");
  if (s.window && !(s.window->first > 0 && s.window->first < s.window->second)) throw domain_error("window must satisfy 0 < w < w'");
}

inline std::uint64_t gcd(std::uint64_t a, std::uint64_t b) { return std::gcd(a, b); }

/// Whether m survives sifting by {p < level : p !| N, p not excluded}.
inline bool survives(std::int64_t m, double level, std::uint64_t N, const std::vector<std::uint64_t>& excluded,
                     const PrimeTable& table) {
  auto sifts = [&](std::uint64_t p) {
    return static_cast<double>(p) < level && N % p != 0 &&
           std::find(excluded.begin(), excluded.end(), p) == excluded.end();
  };
  if (m == 0) {
    // 0 lies in every class 0 mod p.
    bool any = false;
    table.for_each_prime(2, static_cast<std::uint64_t>(std::max(2.0, std::ceil(level))) - 1, [&](std::uint64_t p) {
      if (!any && sifts(p)) any = true;
    });
    return !any;
  }
  std::uint64_t a = static_cast<std::uint64_t>(m < 0 ? -m : m);
  for (std::uint64_t p : table.prime_factors(a))
    if (sifts(p)) return false;
  return true;
}

/// Unordered p2 <= p3 (or p2 < p3 when strict) prime pairs with y <= p2, bound(p2 p3) true.
template <class Fn>
void for_each_p2p3(double y, std::uint64_t max_product, bool strict, const PrimeTable& table, Fn&& fn) {
  std::uint64_t lo = static_cast<std::uint64_t>(std::ceil(y));
  if (lo < 2) lo = 2;
  for (std::uint64_t p2 = lo; p2 * p2 <= max_product; ++p2) {
    if (!table.is_prime(p2)) continue;
    std::uint64_t start = strict ? p2 + 1 : p2;
    std::uint64_t stop = max_product / p2;
    if (start > stop) continue;
    table.for_each_prime(start, stop, [&](std::uint64_t p3) { fn(p2, p3); });
  }
}

}  // namespace detail

/// Elements of the set described by `spec`, in ascending order of the generating primes.
/// B-type elements may be negative when a window relaxes p1 p2 p3 < N.
inline std::vector<std::int64_t> enumerate_set(const SiftedSetSpec& spec, const PrimeTable& table) {
  detail::check_spec(spec);
  std::vector<std::int64_t> out;
  auto keep = [&](std::int64_t m) {
    std::uint64_t a = static_cast<std::uint64_t>(m < 0 ? -m : m);
    if (a % spec.q == 0) out.push_back(m);
  };
  if (spec.base == SetBase::explicit_list) {
    for (auto m : spec.elements) keep(m);
    return out;
  }
  detail::check_even_N(spec.N, table, 2);
  const std::uint64_t N = spec.N;
  const auto sN = static_cast<std::int64_t>(N);
  switch (spec.base) {
    case SetBase::A:
    case SetBase::A_sub_q:
      table.for_each_prime(2, N, [&](std::uint64_t p) {
        if (N % p != 0) keep(sN - static_cast<std::int64_t>(p));
      });
      break;
    case SetBase::B: {
      const double z = spec.z_value(), y = spec.y_value();
      std::uint64_t p1_lo = static_cast<std::uint64_t>(std::max(2.0, std::ceil(z)));
      std::uint64_t p1_hi = y > 2 ? static_cast<std::uint64_t>(std::ceil(y)) - 1 : 0;
      if (p1_hi >= p1_lo) {
        table.for_each_prime(p1_lo, std::min(p1_hi, N), [&](std::uint64_t p1) {
          if (static_cast<double>(p1) >= y) return;
          detail::for_each_p2p3(y, (N - 1) / p1, false, table, [&](std::uint64_t p2, std::uint64_t p3) {
            std::uint64_t n = p1 * p2 * p3;
            if (n < N && std::gcd(n, N) == 1) keep(sN - static_cast<std::int64_t>(n));
          });
        });
      }
      break;
    }
    case SetBase::B_window_j: {
      const double z = spec.z_value(), y = spec.y_value();
      const auto [w, w_hi] = *spec.window;
      // w p2 p3 < N  <=>  p2 p3 <= ceil(N / w) - 1
      double cap = std::ceil(static_cast<double>(N) / w) - 1;
      if (cap < 4) break;
      std::uint64_t max_prod = static_cast<std::uint64_t>(cap);
      if (static_cast<double>(max_prod) * w >= static_cast<double>(N)) --max_prod;
      std::vector<std::uint64_t> p1s;
      std::uint64_t p1_lo = static_cast<std::uint64_t>(std::max({2.0, std::ceil(z), std::ceil(w)}));
      double p1_end = std::min(y, w_hi);
      if (p1_end > 2) {
        std::uint64_t p1_hi = static_cast<std::uint64_t>(std::ceil(p1_end)) - 1;
        if (p1_hi >= p1_lo)
          table.for_each_prime(p1_lo, p1_hi, [&](std::uint64_t p) {
            if (static_cast<double>(p) < p1_end) p1s.push_back(p);
          });
      }
      for (auto p1 : p1s)
        detail::for_each_p2p3(y, max_prod, false, table, [&](std::uint64_t p2, std::uint64_t p3) {
          if (std::gcd(p2 * p3, N) == 1) keep(sN - static_cast<std::int64_t>(p1 * p2 * p3));
        });
      break;
    }
    case SetBase::explicit_list: break;
  }
  return out;
}

/// S(set, P(level)) with P running over primes not dividing N and not excluded.
inline SiftResult sift_count(const SiftedSetSpec& spec, const PrimeTable& table) {
  SiftResult r;
  r.spec = spec;
  const double level = spec.level();
  for (std::int64_t m : enumerate_set(spec, table)) {
    if (detail::survives(m, level, spec.N, spec.excluded_primes, table)) {
      ++r.count;
      if (r.survivors_sample.size() < kSurvivorSample) r.survivors_sample.push_back(m);
    }
  }
  return r;
}

/// #{p < N : N - p >= 2 and Omega(N - p) <= 2}.
inline std::uint64_t pi2_bruteforce(std::uint64_t N, const PrimeTable& table) {
  detail::check_even_N(N, table, 4);
  std::uint64_t count = 0;
  table.for_each_prime(2, N - 2, [&](std::uint64_t p) {
    if (table.big_omega(N - p) <= 2) ++count;
  });
  return count;
}

// ---------------------------------------------------------------------------

struct Lemma41Report {
  std::uint64_t N = 0;
  double z = 0, y = 0;
  std::uint64_t pi2 = 0;
  std::uint64_t A_size = 0;
  std::uint64_t S_A = 0;       // S(A, P(z))
  std::uint64_t Sum_S_Aq = 0;  // sum_{z <= q < y} S(A_q, P(z))
  std::uint64_t S_B = 0;       // S(B, P(y))
  double rhs = 0;
  double margin = 0;  // pi2 - rhs
  bool holds = false;
};

/// Both sides of pi_2(N) > S(A,P(z)) - S_q/2 - S(B,P(y))/2 - 2N^{7/8} - 2N^{1/3}.
/// Informative: small-N violations are reported, not thrown.
inline Lemma41Report check_lemma41(std::uint64_t N, const PrimeTable& table, double z_exp = 1.0 / 8.0,
                                   double y_exp = 1.0 / 3.0) {
  detail::check_even_N(N, table, 4);
  if (!(z_exp > 0 && z_exp < y_exp && y_exp < 1)) throw domain_error("exponents must satisfy 0 < z_exp < y_exp < 1");
  Lemma41Report r;
  r.N = N;
  const double dN = static_cast<double>(N);
  r.z = std::pow(dN, z_exp);
  r.y = std::pow(dN, y_exp);
  r.pi2 = pi2_bruteforce(N, table);

  SiftedSetSpec a = SiftedSetSpec::for_N(N);
  a.z = r.z;
  a.y = r.y;
  std::vector<std::uint64_t> qs;
  {
    std::uint64_t q_lo = static_cast<std::uint64_t>(std::max(2.0, std::ceil(r.z)));
    std::uint64_t q_hi = static_cast<std::uint64_t>(std::ceil(r.y)) - 1;
    if (q_hi >= q_lo)
      table.for_each_prime(q_lo, std::min(q_hi, N), [&](std::uint64_t q) {
        if (static_cast<double>(q) >= r.z && static_cast<double>(q) < r.y) qs.push_back(q);
      });
  }
  // One pass over A: each element sifted by P(z) contributes to S(A) and to
  // S(A_q) for every q in [z, y) dividing it (such q are never in P(z)).
  for (std::int64_t m : enumerate_set(a, table)) {
    ++r.A_size;
    if (!detail::survives(m, r.z, N, {}, table)) continue;
    ++r.S_A;
    for (auto q : qs)
      if (static_cast<std::uint64_t>(m) % q == 0) ++r.Sum_S_Aq;
  }
  SiftedSetSpec b = a;
  b.base = SetBase::B;
  r.S_B = sift_count(b, table).count;
  r.rhs = static_cast<double>(r.S_A) - 0.5 * static_cast<double>(r.Sum_S_Aq) - 0.5 * static_cast<double>(r.S_B) -
          2.0 * std::pow(dN, 7.0 / 8.0) - 2.0 * std::cbrt(dN);
  r.margin = static_cast<double>(r.pi2) - r.rhs;
  r.holds = r.margin > 0;
  return r;
}

struct InclusionExclusionReport {
  std::int64_t lhs = 0;
  std::int64_t rhs = 0;
  std::vector<std::int64_t> terms;  // signed terms of the right side, in order
  bool holds = false;
};

/// S(A,P(z)) = sum_{i<l} (-1)^i S(A^{(i)}, P^{(i+1)}(z)) + (-1)^l S(A^{(l)}, P^{(l)}(z)),
/// A^{(i)} = A_{q_1...q_i}, P^{(i)} omitting q_1..q_i.
inline InclusionExclusionReport inclusion_exclusion_check(std::uint64_t N, double z, const std::vector<std::uint64_t>& q_list,
                                                          const PrimeTable& table) {
  detail::check_even_N(N, table, 4);
  std::set<std::uint64_t> seen;
  for (auto q : q_list) {
    if (!table.is_prime(q)) throw domain_error("q_list entry " + std::to_string(q) + " is not prime");
    if (!(static_cast<double>(q) < z)) throw domain_error("q_list entries must be < z");
    if (N % q == 0) throw domain_error("q_list entries must not divide N");
    if (!seen.insert(q).second) throw domain_error("q_list entries must be distinct");
  }
  auto S = [&](std::size_t i, std::size_t omit) {
    SiftedSetSpec s = SiftedSetSpec::for_N(N, i == 0 ? SetBase::A : SetBase::A_sub_q);
    s.sift_level = z;
    s.q = 1;
    for (std::size_t k = 0; k < i; ++k) s.q *= q_list[k];
    s.excluded_primes.assign(q_list.begin(), q_list.begin() + static_cast<std::ptrdiff_t>(omit));
    return static_cast<std::int64_t>(sift_count(s, table).count);
  };
  InclusionExclusionReport r;
  const std::size_t l = q_list.size();
  r.lhs = S(0, 0);
  for (std::size_t i = 0; i < l; ++i) r.terms.push_back((i % 2 ? -1 : 1) * S(i, i + 1));
  r.terms.push_back((l % 2 ? -1 : 1) * S(l, l));
  r.rhs = std::accumulate(r.terms.begin(), r.terms.end(), std::int64_t{0});
  r.holds = r.lhs == r.rhs;
  return r;
}

// ---------------------------------------------------------------------------

using Rational = boost::multiprecision::cpp_rational;

struct RemainderResult {
  Rational exact;  // |A_{kd}| - |A_k| / phi(d)
  double value = 0;
  std::uint64_t A_kd = 0, A_k = 0;
  bool d_squarefree = true;
  bool d_coprime_2N = true;
};

/// r(d) = |A_d| - |A|/phi(d), or r_k(d) = |A_{kd}| - |A_k|/phi(d) when k is given.
inline RemainderResult remainder_r(std::uint64_t N, std::uint64_t d, std::optional<std::uint64_t> k,
                                   const PrimeTable& table) {
  if (d == 0) throw domain_error("remainder_r: d must be positive");
  if (k && *k == 0) throw domain_error("remainder_r: k must be positive");
  detail::check_even_N(N, table, 2);
  const std::uint64_t kk = k.value_or(1);
  RemainderResult r;
  r.d_squarefree = is_squarefree(d);
  r.d_coprime_2N = std::gcd(d, 2 * N) == 1;
  SiftedSetSpec s = SiftedSetSpec::for_N(N, SetBase::A_sub_q);
  for (std::int64_t m : enumerate_set(s, table)) {
    auto u = static_cast<std::uint64_t>(m);
    if (u % kk != 0) continue;
    ++r.A_k;
    if ((u / kk) % d == 0) ++r.A_kd;
  }
  r.exact = Rational(r.A_kd) - Rational(r.A_k) / Rational(euler_phi(d));
  r.value = static_cast<double>(r.exact);
  return r;
}

// ---------------------------------------------------------------------------

struct BilinearOptions {
  double y = 0;             // lower end for p2 in a(n); 0 -> N^{1/3}
  bool strict_p2_p3 = true;  // a(n) uses y <= p2 < p3
};

struct BilinearResult {
  Rational exact;
  double value = 0;
  std::uint64_t support = 0;  // #{n < X : a(n) = 1}
  RhsValue rhs_context;       // e^-144 XY / log^4 Y, per XY
};

/// a(n) for 1 <= n < X.
inline std::vector<std::uint8_t> bilinear_weights(double X, std::uint64_t N, double y, bool strict, const PrimeTable& table) {
  std::uint64_t n_end = X > 1 ? static_cast<std::uint64_t>(std::ceil(X)) : 1;  // n < X  <=>  n < n_end
  std::vector<std::uint8_t> a(n_end, 0);
  if (n_end < 2) return a;
  detail::for_each_p2p3(y, n_end - 1, strict, table, [&](std::uint64_t p2, std::uint64_t p3) {
    if (std::gcd(p2 * p3, N) == 1) a[p2 * p3] = 1;
  });
  return a;
}

/// sum_{d < D*} max_{(a,d)=1} | sum_{n<X, Z<=p<Y, np=a (d)} a(n) - (1/phi(d)) sum_{(np,d)=1} a(n) |,
/// exactly. The exceptional-modulus condition q1 !| d is vacuous at desk scale.
inline BilinearResult bilinear_discrepancy(double X, double Y, double Z, double Dstar, std::uint64_t N,
                                           const PrimeTable& table, const BilinearOptions& opts = {}) {
  if (!(X >= 0 && Y >= 0 && Z >= 0 && Dstar >= 0)) throw domain_error("bilinear_discrepancy: parameters must be non-negative");
  const double lim = static_cast<double>(table.limit());
  if (X > lim || Y > lim || static_cast<double>(N) > lim) throw capacity_error("bilinear_discrepancy: parameters exceed table limit");
  if (Dstar > 1e5) throw capacity_error("bilinear_discrepancy: D* above 1e5 is not supported");
  const double y = opts.y > 0 ? opts.y : std::cbrt(static_cast<double>(N));
  BilinearResult res;
  auto a = bilinear_weights(X, N, y, opts.strict_p2_p3, table);
  std::vector<std::uint64_t> ns;
  for (std::uint64_t n = 1; n < a.size(); ++n)
    if (a[n]) ns.push_back(n);
  res.support = ns.size();
  std::vector<std::uint64_t> ps;
  if (Y > 2) {
    std::uint64_t p_lo = static_cast<std::uint64_t>(std::max(2.0, std::ceil(Z)));
    std::uint64_t p_hi = static_cast<std::uint64_t>(std::ceil(Y)) - 1;
    if (p_hi >= p_lo) ps = table.primes_upto(p_hi, p_lo);
  }
  std::uint64_t d_end = Dstar > 1 ? static_cast<std::uint64_t>(std::ceil(Dstar)) : 1;  // d < D*
  Rational total = 0;
  for (std::uint64_t d = 1; d < d_end; ++d) {
    std::vector<std::int64_t> hn(d, 0), hp(d, 0), h(d, 0);
    for (auto n : ns) ++hn[n % d];
    for (auto p : ps) ++hp[p % d];
    for (std::uint64_t r1 = 0; r1 < d; ++r1) {
      if (!hn[r1]) continue;
      for (std::uint64_t r2 = 0; r2 < d; ++r2)
        if (hp[r2]) h[(r1 * r2) % d] += hn[r1] * hp[r2];
    }
    std::int64_t coprime_total = 0;
    for (std::uint64_t r = 0; r < d; ++r)
      if (std::gcd(r, d) == 1) coprime_total += h[r];
    const auto phi = static_cast<std::int64_t>(euler_phi(d));
    // |h[a] - T/phi| = |phi h[a] - T| / phi
    std::int64_t best = 0;
    for (std::uint64_t r = 0; r < d; ++r)
      if (std::gcd(r, d) == 1) best = std::max(best, std::abs(phi * h[r] - coprime_total));
    total += Rational(best) / Rational(phi);
  }
  res.exact = total;
  res.value = static_cast<double>(total);
  if (Y > std::exp(1.0)) res.rhs_context = lemma_rhs_evaluators(std::log(std::log(Y)), LemmaRhs::lemma61);
  return res;
}

// ---------------------------------------------------------------------------

struct ScanRow {
  std::uint64_t N = 0;
  std::uint64_t pi2 = 0;
  Ball<> UN;
  double ratio = 0;  // pi2 log^2 N / (U_N N)
};

struct ScanReport {
  std::uint64_t N_max = 0;
  std::uint64_t count = 0;  // even N in [6, N_max]
  std::uint64_t min_pi2 = 0, argmin_pi2 = 0;
  double min_ratio = 0;
  std::uint64_t argmin_ratio = 0;
  std::vector<ScanRow> rows;  // filled when requested
};

namespace detail {

/// 2 e^{-gamma} prod_{p>2}(1 - (p-1)^{-2}), from a private table to 1e6.
inline const Ball<>& twice_twin_constant() {
  static const Ball<> v = [] {
    PrimeTable t = PrimeTable::build(1'000'000);
    return Ball<>(2.0) * exp(-constants::euler_gamma()) * twin_prime_product(1'000'000, t);
  }();
  return v;
}

/// P2 flags for 0 <= m <= n_max: m >= 2 and Omega(m) <= 2. Chunks are disjoint.
inline std::vector<double> p2_indicator(std::uint64_t n_max, const PrimeTable& table, unsigned threads) {
  std::vector<double> f(n_max + 1, 0.0);
  if (n_max >= 2) (void)table.spf(2);  // materialize before spawning
  auto work = [&](std::uint64_t lo, std::uint64_t hi) {
    for (std::uint64_t m = std::max<std::uint64_t>(lo, 2); m < hi; ++m) f[m] = table.big_omega(m) <= 2 ? 1.0 : 0.0;
  };
  threads = std::max(1u, threads);
  if (threads == 1 || n_max < 4096) {
    work(0, n_max + 1);
  } else {
    std::vector<std::thread> pool;
    std::uint64_t chunk = (n_max + threads) / threads;
    for (unsigned t = 0; t < threads; ++t) {
      std::uint64_t lo = t * chunk, hi = std::min<std::uint64_t>(n_max + 1, lo + chunk);
      if (lo < hi) pool.emplace_back(work, lo, hi);
    }
    for (auto& th : pool) th.join();
  }
  return f;
}

}  // namespace detail

/// pi_2(N) for every 0 <= N <= n_max via one exact convolution of the prime and
/// P2 indicators (counts are < 2^52, so rounding the FFT result is exact; the
/// rounding residue is checked).
inline std::vector<std::uint64_t> pi2_all(std::uint64_t n_max, const PrimeTable& table, unsigned threads = 1) {
  if (n_max > table.limit()) throw capacity_error("pi2_all: N_max exceeds table limit");
  if (n_max > 100'000'000) throw capacity_error("pi2_all: N_max above 1e8 is not supported");
  std::vector<double> f = detail::p2_indicator(n_max, table, threads);
  std::size_t len = 1;
  while (len < 2 * (n_max + 1)) len <<= 1;
  const std::size_t nc = len / 2 + 1;
  double* in = fftw_alloc_real(len);
  fftw_complex* fp = fftw_alloc_complex(nc);
  fftw_complex* fq = fftw_alloc_complex(nc);
  fftw_plan fwd_p = fftw_plan_dft_r2c_1d(static_cast<int>(len), in, fp, FFTW_ESTIMATE);
  fftw_plan fwd_q = fftw_plan_dft_r2c_1d(static_cast<int>(len), in, fq, FFTW_ESTIMATE);
  fftw_plan inv = fftw_plan_dft_c2r_1d(static_cast<int>(len), fp, in, FFTW_ESTIMATE);
  std::fill(in, in + len, 0.0);
  table.for_each_prime(2, n_max, [&](std::uint64_t p) { in[p] = 1.0; });
  fftw_execute(fwd_p);
  std::fill(in, in + len, 0.0);
  std::copy(f.begin(), f.end(), in);
  fftw_execute(fwd_q);
  for (std::size_t i = 0; i < nc; ++i) {
    double re = fp[i][0] * fq[i][0] - fp[i][1] * fq[i][1];
    double im = fp[i][0] * fq[i][1] + fp[i][1] * fq[i][0];
    fp[i][0] = re;
    fp[i][1] = im;
  }
  fftw_execute(inv);
  std::vector<std::uint64_t> out(n_max + 1);
  double worst = 0;
  for (std::uint64_t n = 0; n <= n_max; ++n) {
    double v = in[n] / static_cast<double>(len);
    double r = std::nearbyint(v);
    worst = std::max(worst, std::abs(v - r));
    out[n] = static_cast<std::uint64_t>(r);
  }
  fftw_destroy_plan(fwd_p);
  fftw_destroy_plan(fwd_q);
  fftw_destroy_plan(inv);
  fftw_free(in);
  fftw_free(fp);
  fftw_free(fq);
  if (worst > 0.25) throw format_error("pi2_all: convolution rounding residue too large");
  return out;
}

inline Ball<> UN_value(std::uint64_t N) {
  if (N < 4 || N % 2) throw domain_error("U_N requires even N >= 4");
  return detail::twice_twin_constant() * singular_series_local_factor(N);
}

inline double pi2_ratio(std::uint64_t N, std::uint64_t pi2, const Ball<>& UN) {
  const double L = std::log(static_cast<double>(N));
  return static_cast<double>(pi2) * L * L / (UN.mid() * static_cast<double>(N));
}

/// pi_2 and the normalized ratio over all even 6 <= N <= N_max.
inline ScanReport goldbach_chen_scan(std::uint64_t N_max, const PrimeTable& table, unsigned threads = 1,
                                     bool keep_rows = false) {
  if (N_max > table.limit()) throw capacity_error("scan: N_max exceeds table limit");
  ScanReport rep;
  rep.N_max = N_max;
  if (N_max < 6) return rep;
  auto all = pi2_all(N_max, table, threads);
  bool first = true;
  for (std::uint64_t N = 6; N <= N_max; N += 2) {
    ScanRow row{N, all[N], UN_value(N), 0};
    row.ratio = pi2_ratio(N, row.pi2, row.UN);
    ++rep.count;
    if (first || row.pi2 < rep.min_pi2) rep.min_pi2 = row.pi2, rep.argmin_pi2 = N;
    if (first || row.ratio < rep.min_ratio) rep.min_ratio = row.ratio, rep.argmin_ratio = N;
    first = false;
    if (keep_rows) rep.rows.push_back(row);
  }
  return rep;
}

}  // namespace chen
