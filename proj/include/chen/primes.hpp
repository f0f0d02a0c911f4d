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

// Exact prime tables and the arithmetic functions built on them.
//
// A PrimeTable stores primality of odd numbers as a bitset (bit i <-> 3+2i),
// built by a segmented sieve whose segments may be processed on several
// threads. Segments write disjoint words, so the table is bit-identical for
// every thread count. Smallest-prime-factor data is materialized lazily on
// first use and shared by copies of the table.

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <memory>
#include <mutex>
#include <numeric>
#include <span>
#include <sstream>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "chen/ball.hpp"
#include "chen/errors.hpp"

namespace chen {

/// Largest supported table limit.
inline constexpr std::uint64_t kMaxTableLimit = 4'000'000'000ULL;

/// Bits per sieve segment (odd numbers); 2^21 bits = 256 KiB, about one L2.
inline constexpr std::uint64_t kSegmentBits = std::uint64_t{1} << 21;

inline constexpr char kCacheMagic[] = "CHEN-PT1\n";

class PrimeTable {
 public:
  PrimeTable() = default;

  std::uint64_t limit() const { return limit_; }

  bool is_prime(std::uint64_t n) const {
    if (n > limit_) throw capacity_error("is_prime: " + std::to_string(n) + " exceeds table limit " + std::to_string(limit_));
    if (n < 2) return false;
    if (n == 2) return true;
    if ((n & 1) == 0) return false;
    return test_bit((n - 3) / 2);
  }

  /// pi(n) for an integer n <= limit.
  std::uint64_t count_upto(std::uint64_t n) const {
    if (n > limit_) throw capacity_error("prime count: " + std::to_string(n) + " exceeds table limit " + std::to_string(limit_));
    if (n < 2) return 0;
    if (n < 3) return 1;
    std::uint64_t bit = (n - 3) / 2;
    std::uint64_t w = bit / 64;
    std::uint64_t b = bit % 64;
    std::uint64_t mask = (b == 63) ? ~std::uint64_t{0} : ((std::uint64_t{1} << (b + 1)) - 1);
    return 1 + prefix_[w] + static_cast<std::uint64_t>(std::popcount(words_[w] & mask));
  }

  /// Calls fn(p) for every prime lo <= p <= hi in ascending order.
  template <class Fn>
  void for_each_prime(std::uint64_t lo, std::uint64_t hi, Fn&& fn) const {
    if (hi > limit_) throw capacity_error("prime range end " + std::to_string(hi) + " exceeds table limit " + std::to_string(limit_));
    if (hi < 2 || lo > hi) return;
    if (lo <= 2) fn(std::uint64_t{2});
    if (hi < 3) return;
    std::uint64_t first = lo <= 3 ? 0 : (lo - 3 + 1) / 2;  // first odd >= lo
    std::uint64_t last = (hi - 3) / 2;
    if (first > last) return;
    for (std::uint64_t w = first / 64; w <= last / 64; ++w) {
      std::uint64_t word = words_[w];
      if (w == first / 64) word &= ~std::uint64_t{0} << (first % 64);
      if (w == last / 64 && last % 64 != 63) word &= (std::uint64_t{1} << (last % 64 + 1)) - 1;
      while (word) {
        int t = std::countr_zero(word);
        fn(3 + 2 * (w * 64 + static_cast<std::uint64_t>(t)));
        word &= word - 1;
      }
    }
  }

  std::vector<std::uint64_t> primes_upto(std::uint64_t hi, std::uint64_t lo = 2) const {
    std::vector<std::uint64_t> out;
    for_each_prime(lo, hi, [&](std::uint64_t p) { out.push_back(p); });
    return out;
  }

  /// Smallest prime factor of 2 <= n <= limit (materializes the spf array).
  std::uint32_t spf(std::uint64_t n) const {
    if (n < 2) throw domain_error("spf undefined for n < 2");
    if (n > limit_) throw capacity_error("spf: " + std::to_string(n) + " exceeds table limit " + std::to_string(limit_));
    return spf_array()[n];
  }

  /// Distinct prime factors of 1 <= n <= limit, ascending.
  std::vector<std::uint64_t> prime_factors(std::uint64_t n) const {
    std::vector<std::uint64_t> out;
    if (n == 0) throw domain_error("prime_factors of 0");
    const auto& s = spf_array_checked(n);
    while (n > 1) {
      std::uint64_t p = s[n];
      out.push_back(p);
      while (n % p == 0) n /= p;
    }
    return out;
  }

  /// Omega(n): prime factors counted with multiplicity.
  int big_omega(std::uint64_t n) const {
    if (n == 0) throw domain_error("big_omega of 0");
    const auto& s = spf_array_checked(n);
    int k = 0;
    while (n > 1) {
      n /= s[n];
      ++k;
    }
    return k;
  }

  std::span<const std::uint64_t> words() const { return words_; }

  static PrimeTable build(std::uint64_t limit, unsigned threads = 1);
  static PrimeTable from_words(std::uint64_t limit, std::vector<std::uint64_t> words);

  void save(const std::string& path) const;
  static PrimeTable load(const std::string& path, std::uint64_t expected_limit = 0);

  friend bool operator==(const PrimeTable& a, const PrimeTable& b) {
    return a.limit_ == b.limit_ && a.words_ == b.words_;
  }

 private:
  struct LazySpf {
    std::once_flag once;
    std::vector<std::uint32_t> values;
  };

  bool test_bit(std::uint64_t i) const { return (words_[i / 64] >> (i % 64)) & 1U; }

  const std::vector<std::uint32_t>& spf_array_checked(std::uint64_t n) const {
    if (n > limit_) throw capacity_error("factorization: " + std::to_string(n) + " exceeds table limit " + std::to_string(limit_));
    return spf_array();
  }

  const std::vector<std::uint32_t>& spf_array() const;
  void finish();

  std::uint64_t limit_ = 0;
  std::vector<std::uint64_t> words_;
  std::vector<std::uint32_t> prefix_;  // odd primes in words before index w
  std::shared_ptr<LazySpf> spf_ = std::make_shared<LazySpf>();
};

inline std::uint64_t odd_bit_count(std::uint64_t limit) { return limit >= 3 ? (limit - 1) / 2 : 0; }

inline void PrimeTable::finish() {
  std::uint64_t nbits = odd_bit_count(limit_);
  if (nbits % 64 != 0 && !words_.empty()) words_.back() &= (std::uint64_t{1} << (nbits % 64)) - 1;
  prefix_.assign(words_.size() + 1, 0);
  for (std::size_t w = 0; w < words_.size(); ++w)
    prefix_[w + 1] = prefix_[w] + static_cast<std::uint32_t>(std::popcount(words_[w]));
  spf_ = std::make_shared<LazySpf>();
}

inline PrimeTable PrimeTable::build(std::uint64_t limit, unsigned threads) {
  if (limit < 2 || limit > kMaxTableLimit)
    throw capacity_error("prime table limit " + std::to_string(limit) + " outside [2, " + std::to_string(kMaxTableLimit) + "]");
  if (threads == 0) threads = 1;
  PrimeTable t;
  t.limit_ = limit;
  const std::uint64_t nbits = odd_bit_count(limit);
  t.words_.assign((nbits + 63) / 64, ~std::uint64_t{0});

  // Odd base primes up to sqrt(limit) by a plain sieve.
  std::uint64_t root = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(limit)));
  while (root * root > limit) --root;
  while ((root + 1) * (root + 1) <= limit) ++root;
  std::vector<std::uint32_t> base;
  {
    std::vector<bool> composite(root + 1, false);
    for (std::uint64_t i = 3; i <= root; i += 2) {
      if (composite[i]) continue;
      base.push_back(static_cast<std::uint32_t>(i));
      for (std::uint64_t j = i * i; j <= root; j += 2 * i) composite[j] = true;
    }
  }

  const std::uint64_t nsegments = (nbits + kSegmentBits - 1) / kSegmentBits;
  auto sieve_segment = [&](std::uint64_t seg) {
    const std::uint64_t bit_lo = seg * kSegmentBits;
    const std::uint64_t bit_hi = std::min(nbits, bit_lo + kSegmentBits);
    const std::uint64_t n_lo = 3 + 2 * bit_lo;
    const std::uint64_t n_hi = 3 + 2 * (bit_hi - 1);
    std::uint64_t* w = t.words_.data();
    for (std::uint32_t p : base) {
      std::uint64_t pp = std::uint64_t{p} * p;
      if (pp > n_hi) break;
      std::uint64_t start = pp;
      if (start < n_lo) {
        start = ((n_lo + p - 1) / p) * p;
        if ((start & 1) == 0) start += p;
      }
      for (std::uint64_t m = start; m <= n_hi; m += 2 * std::uint64_t{p}) {
        std::uint64_t bit = (m - 3) / 2;
        w[bit / 64] &= ~(std::uint64_t{1} << (bit % 64));
      }
    }
  };

  if (threads == 1 || nsegments < 2) {
    for (std::uint64_t s = 0; s < nsegments; ++s) sieve_segment(s);
  } else {
    std::vector<std::thread> pool;
    const unsigned nthreads = static_cast<unsigned>(std::min<std::uint64_t>(threads, nsegments));
    for (unsigned k = 0; k < nthreads; ++k) {
      pool.emplace_back([&, k] {
        for (std::uint64_t s = k; s < nsegments; s += nthreads) sieve_segment(s);
      });
    }
    for (auto& th : pool) th.join();
  }
  t.finish();
  return t;
}

inline PrimeTable PrimeTable::from_words(std::uint64_t limit, std::vector<std::uint64_t> words) {
  if (limit < 2 || limit > kMaxTableLimit) throw capacity_error("prime table limit out of range");
  if (words.size() != (odd_bit_count(limit) + 63) / 64) throw format_error("bitset size does not match limit");
  PrimeTable t;
  t.limit_ = limit;
  t.words_ = std::move(words);
  t.finish();
  return t;
}

inline const std::vector<std::uint32_t>& PrimeTable::spf_array() const {
  std::call_once(spf_->once, [this] {
    if (limit_ > 0xFFFFFFFFULL) throw capacity_error("spf table requires limit < 2^32");
    auto& s = spf_->values;
    s.assign(limit_ + 1, 0);
    if (limit_ >= 1) s[1] = 1;
    for (std::uint64_t n = 2; n <= limit_; n += 2) s[n] = 2;
    for_each_prime(3, limit_, [&](std::uint64_t p) {
      if (s[p] == 0) s[p] = static_cast<std::uint32_t>(p);
      if (p * p > limit_) return;
      for (std::uint64_t m = p * p; m <= limit_; m += 2 * p)
        if (s[m] == 0) s[m] = static_cast<std::uint32_t>(p);
    });
  });
  return spf_->values;
}

namespace detail {

/// FNV-1a over the little-endian bytes of the bitset.
inline std::uint64_t words_checksum(std::span<const std::uint64_t> words) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (std::uint64_t w : words)
    for (int i = 0; i < 8; ++i) h = (h ^ ((w >> (8 * i)) & 0xff)) * 0x100000001b3ULL;
  return h;
}

inline void put_u64(std::ostream& out, std::uint64_t w) {
  unsigned char bytes[8];
  for (int i = 0; i < 8; ++i) bytes[i] = static_cast<unsigned char>(w >> (8 * i));
  out.write(reinterpret_cast<const char*>(bytes), 8);
}

inline bool get_u64(std::istream& in, std::uint64_t& w) {
  unsigned char bytes[8];
  if (!in.read(reinterpret_cast<char*>(bytes), 8)) return false;
  w = 0;
  for (int i = 0; i < 8; ++i) w |= std::uint64_t{bytes[i]} << (8 * i);
  return true;
}

}  // namespace detail

// Layout: magic line, decimal limit line, 8-byte checksum, bitset words (all little-endian).
inline void PrimeTable::save(const std::string& path) const {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw format_error("cannot open cache file for writing: " + path);
  out << kCacheMagic << limit_ << '\n';
  detail::put_u64(out, detail::words_checksum(words_));
  for (std::uint64_t w : words_) detail::put_u64(out, w);
  if (!out) throw format_error("failed writing cache file: " + path);
}

inline PrimeTable PrimeTable::load(const std::string& path, std::uint64_t expected_limit) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw format_error("cannot open cache file: " + path);
  std::string magic(sizeof(kCacheMagic) - 1, '\0');
  in.read(magic.data(), static_cast<std::streamsize>(magic.size()));
  if (!in || magic != kCacheMagic) throw format_error("bad cache magic in " + path);
  std::string line;
  if (!std::getline(in, line) || line.empty() || line.size() > 20 ||
      !std::all_of(line.begin(), line.end(), [](char c) { return c >= '0' && c <= '9'; }))
    throw format_error("bad cache limit line in " + path);
  std::uint64_t limit = std::stoull(line);
  if (limit < 2 || limit > kMaxTableLimit) throw format_error("cache limit out of range in " + path);
  if (expected_limit != 0 && limit != expected_limit)
    throw format_error("cache limit " + std::to_string(limit) + " != expected " + std::to_string(expected_limit));
  std::uint64_t checksum = 0;
  if (!detail::get_u64(in, checksum)) throw format_error("missing checksum in " + path);
  std::vector<std::uint64_t> words((odd_bit_count(limit) + 63) / 64);
  for (auto& w : words)
    if (!detail::get_u64(in, w)) throw format_error("truncated cache bitset in " + path);
  if (in.peek() != std::char_traits<char>::eof()) throw format_error("trailing bytes in cache file " + path);
  if (detail::words_checksum(words) != checksum) throw format_error("checksum mismatch in " + path);
  std::uint64_t nbits = odd_bit_count(limit);
  if (nbits % 64 != 0 && !words.empty() && (words.back() >> (nbits % 64)) != 0)
    throw format_error("nonzero padding bits in cache file " + path);
  return from_words(limit, std::move(words));
}

inline PrimeTable build_prime_table(std::uint64_t limit, unsigned threads = 1) {
  return PrimeTable::build(limit, threads);
}

// ---------------------------------------------------------------------------
// Counting in arithmetic progressions.

/// A query for pi(x; k, l), theta(x; k, l) and friends.
struct APCountQuery {
  double x = 0;
  std::uint64_t k = 1;
  std::uint64_t l = 0;

  void validate() const {
    if (k < 1) throw domain_error("modulus k must be >= 1");
    if (l >= k) throw domain_error("residue l must satisfy 0 <= l < k");
  }
};

namespace detail {

inline std::uint64_t floor_arg(double x, const PrimeTable& table) {
  if (!(x <= static_cast<double>(table.limit())))
    throw capacity_error("argument " + std::to_string(x) + " exceeds table limit " + std::to_string(table.limit()));
  if (x < 0) return 0;
  auto n = static_cast<std::uint64_t>(std::floor(x));
  return std::min(n, table.limit());
}

}  // namespace detail

inline std::uint64_t prime_pi(double x, const PrimeTable& table) {
  return table.count_upto(detail::floor_arg(x, table));
}

inline std::uint64_t prime_pi_ap(const APCountQuery& q, const PrimeTable& table) {
  q.validate();
  std::uint64_t n_max = detail::floor_arg(q.x, table);
  if (q.k == 1) return table.count_upto(n_max);
  std::uint64_t count = 0;
  for (std::uint64_t n = q.l; n <= n_max; n += q.k)
    if (table.is_prime(n)) ++count;
  return count;
}

enum class ChebyshevKind { theta, psi };

/// theta(x) or psi(x) as a Ball; summation in ascending p.
inline Ball<> chebyshev_ball(double x, ChebyshevKind kind, const PrimeTable& table) {
  std::uint64_t n = detail::floor_arg(x, table);
  Ball<> sum(0.0);
  table.for_each_prime(2, n, [&](std::uint64_t p) {
    std::uint64_t mult = 1;
    if (kind == ChebyshevKind::psi) {
      std::uint64_t pk = p;
      while (pk <= n / p) {
        pk *= p;
        ++mult;
      }
    }
    sum += Ball<>::rounded(std::log(static_cast<double>(p))) * Ball<>(mult);
  });
  return sum;
}

inline double chebyshev(double x, ChebyshevKind kind, const PrimeTable& table) {
  return chebyshev_ball(x, kind, table).mid();
}

// ---------------------------------------------------------------------------
// Elementary multiplicative functions (trial division; no table needed).

inline std::vector<std::pair<std::uint64_t, int>> factorize(std::uint64_t n) {
  if (n == 0) throw domain_error("factorize(0)");
  std::vector<std::pair<std::uint64_t, int>> out;
  for (std::uint64_t p = 2; p <= n / p; p += (p == 2 ? 1 : 2)) {
    if (n % p) continue;
    int e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    out.emplace_back(p, e);
  }
  if (n > 1) out.emplace_back(n, 1);
  return out;
}

inline int omega(std::uint64_t n) {
  if (n == 0) throw domain_error("omega(0) is undefined");
  return static_cast<int>(factorize(n).size());
}

/// Number of distinct prime factors p of n with p == a (mod q).
inline int omega_ap(std::uint64_t n, std::uint64_t q, std::int64_t a) {
  if (n == 0) throw domain_error("omega_ap(0) is undefined");
  if (q == 0) throw domain_error("omega_ap: modulus must be >= 1");
  auto qq = static_cast<std::int64_t>(q);
  std::uint64_t r = static_cast<std::uint64_t>(((a % qq) + qq) % qq);
  int k = 0;
  for (auto [p, e] : factorize(n))
    if (p % q == r) ++k;
  return k;
}

inline std::uint64_t euler_phi(std::uint64_t n) {
  if (n == 0) throw domain_error("euler_phi(0)");
  std::uint64_t phi = n;
  for (auto [p, e] : factorize(n)) phi = phi / p * (p - 1);
  return phi;
}

inline int mobius(std::uint64_t n) {
  if (n == 0) throw domain_error("mobius(0)");
  int mu = 1;
  for (auto [p, e] : factorize(n)) {
    if (e > 1) return 0;
    mu = -mu;
  }
  return mu;
}

inline bool is_squarefree(std::uint64_t n) { return mobius(n) != 0; }

/// E_pi(x; k, l) = pi(x; k, l) - pi(x)/phi(k), for gcd(l, k) = 1.
/// Computed as (phi(k) pi(x;k,l) - pi(x)) / phi(k): exact integer numerator,
/// one rounding in the division.
inline double error_pi(const APCountQuery& q, const PrimeTable& table) {
  q.validate();
  if (std::gcd(q.l, q.k) != 1) throw domain_error("error_pi requires gcd(l, k) = 1");
  std::uint64_t phi = euler_phi(q.k);
  auto num = static_cast<std::int64_t>(phi * prime_pi_ap(q, table)) - static_cast<std::int64_t>(prime_pi(q.x, table));
  return static_cast<double>(num) / static_cast<double>(phi);
}

// ---------------------------------------------------------------------------
// Mertens-type products and sums.

/// prod_{p <= x} (1 - 1/p).
inline Ball<> mertens_product(double x, const PrimeTable& table) {
  if (x < 2) throw domain_error("mertens_product requires x >= 2");
  std::uint64_t n = detail::floor_arg(x, table);
  Ball<> prod(1.0);
  table.for_each_prime(2, n, [&](std::uint64_t p) { prod *= Ball<>(p - 1) / Ball<>(p); });
  return prod;
}

/// sum_{a <= p < b} 1/p.
inline Ball<> recip_prime_sum(double a, double b, const PrimeTable& table) {
  if (!(a > 1) || b < a) throw domain_error("recip_prime_sum requires 1 < a <= b");
  if (b > static_cast<double>(table.limit())) throw capacity_error("recip_prime_sum: b exceeds table limit");
  auto lo = static_cast<std::uint64_t>(std::ceil(a));
  auto hi_excl = static_cast<std::uint64_t>(std::ceil(b));  // p < b  <=>  p <= ceil(b) - 1
  Ball<> sum(0.0);
  if (hi_excl == 0 || hi_excl - 1 < lo) return sum;
  table.for_each_prime(lo, hi_excl - 1, [&](std::uint64_t p) { sum += Ball<>(1.0) / Ball<>(p); });
  return sum;
}

/// prod_{p > 2} (1 - 1/(p-1)^2), primes up to `truncation` multiplied exactly
/// and the tail enclosed by sum_{p > P} 1/(p-1)^2 <= sum_{m >= P} 1/(m(m-1)) = 1/(P-1).
inline Ball<> twin_prime_product(std::uint64_t truncation, const PrimeTable& table) {
  if (truncation < 3) throw domain_error("twin_prime_product truncation must be >= 3");
  if (truncation > table.limit()) throw capacity_error("twin_prime_product: truncation exceeds table limit");
  Ball<> prod(1.0);
  table.for_each_prime(3, truncation, [&](std::uint64_t p) {
    prod *= Ball<>(p * (p - 2)) / Ball<>((p - 1) * (p - 1));
  });
  Ball<> tail = Ball<>::from_interval(1.0 - 1.0 / static_cast<double>(truncation - 1), 1.0);
  return prod * tail;
}

/// prod_{p > 2, p | N} (p-1)/(p-2).
inline Ball<> singular_series_local_factor(std::uint64_t N) {
  Ball<> f(1.0);
  for (auto [p, e] : factorize(N))
    if (p > 2) f *= Ball<>(p - 1) / Ball<>(p - 2);
  return f;
}

/// U_N = 2 e^{-gamma} prod_{p>2}(1 - 1/(p-1)^2) prod_{p>2, p|N} (p-1)/(p-2).
inline Ball<> singular_series_UN(std::uint64_t N, std::uint64_t truncation_limit, const PrimeTable& table) {
  if (N < 4 || N % 2 != 0) throw domain_error("singular_series_UN requires even N >= 4");
  if (truncation_limit < 100000) throw domain_error("singular_series_UN requires truncation_limit >= 1e5");
  Ball<> two_exp_minus_gamma = Ball<>(2.0) * exp(-constants::euler_gamma());
  return two_exp_minus_gamma * twin_prime_product(truncation_limit, table) * singular_series_local_factor(N);
}

}  // namespace chen
