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

#include <gtest/gtest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numeric>

#include "chen/primes.hpp"
#include "oracles.hpp"

using namespace chen;

namespace {

const PrimeTable& table6() {
  static const PrimeTable t = build_prime_table(1'000'000);
  return t;
}

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("chen_test_" + name)).string();
}

}  // namespace

TEST(PrimeTable, SmallLimits) {
  auto t = build_prime_table(10);
  EXPECT_EQ(t.primes_upto(10), (std::vector<std::uint64_t>{2, 3, 5, 7}));
  auto h = build_prime_table(100);
  EXPECT_EQ(h.count_upto(100), 25u);
  for (std::uint64_t n = 0; n <= 100; ++n) EXPECT_EQ(h.is_prime(n), oracle::is_prime(n)) << n;
  auto two = build_prime_table(2);
  EXPECT_EQ(two.primes_upto(2), std::vector<std::uint64_t>{2});
  EXPECT_FALSE(build_prime_table(3).is_prime(1));
}

TEST(PrimeTable, MillionMatchesSecondSieve) {
  const auto& t = table6();
  EXPECT_EQ(t.count_upto(1'000'000), 78498u);
  EXPECT_EQ(t.primes_upto(1'000'000), oracle::primes(1'000'000));
}

TEST(PrimeTable, LimitOutOfRange) {
  EXPECT_THROW(build_prime_table(1), capacity_error);
  EXPECT_THROW(build_prime_table(kMaxTableLimit + 1), capacity_error);
  EXPECT_THROW(table6().is_prime(1'000'001), capacity_error);
}

TEST(PrimeTable, ChunkingDoesNotChangeResult) {
  // 1e7 spans several segments.
  auto a = build_prime_table(10'000'000, 1);
  auto b = build_prime_table(10'000'000, 3);
  auto c = build_prime_table(10'000'000, 8);
  EXPECT_TRUE(a == b);
  EXPECT_TRUE(a == c);
  EXPECT_EQ(a.count_upto(10'000'000), 664579u);
}

TEST(PrimeTable, SmallestPrimeFactor) {
  auto t = build_prime_table(100'000);
  for (std::uint64_t n = 2; n <= 100'000; ++n) {
    std::uint64_t p = t.spf(n);
    ASSERT_EQ(n % p, 0u) << n;
    ASSERT_TRUE(oracle::is_prime(p)) << n;
    for (std::uint64_t d = 2; d < p && d * d <= n; ++d) ASSERT_NE(n % d, 0u) << n;
    if (oracle::is_prime(n)) ASSERT_EQ(p, n);
  }
  EXPECT_THROW(t.spf(1), domain_error);
  EXPECT_THROW(t.spf(100'001), capacity_error);
  EXPECT_EQ(t.prime_factors(360), (std::vector<std::uint64_t>{2, 3, 5}));
  EXPECT_EQ(t.big_omega(360), 6);
}

TEST(PrimeTable, IsPrimeAgainstTrialDivisionSample) {
  auto g = oracle::rng(11);
  const auto& t = table6();
  for (int i = 0; i < 2000; ++i) {
    auto n = oracle::uniform(g, 0, 1'000'000);
    ASSERT_EQ(t.is_prime(n), oracle::is_prime(n)) << n;
  }
}

TEST(PrimePi, Examples) {
  const auto& t = table6();
  EXPECT_EQ(prime_pi(2, t), 1u);
  EXPECT_EQ(prime_pi(100, t), 25u);
  EXPECT_EQ(prime_pi(1.5, t), 0u);
  EXPECT_EQ(prime_pi(-3, t), 0u);
  EXPECT_EQ(prime_pi(100.9, t), 25u);
  EXPECT_THROW(prime_pi(1'000'000.5, t), capacity_error);
}

TEST(PrimePiAP, Examples) {
  const auto& t = table6();
  EXPECT_EQ(prime_pi_ap({100, 4, 1}, t), 11u);
  EXPECT_EQ(prime_pi_ap({100, 1, 0}, t), 25u);
  EXPECT_EQ(prime_pi_ap({10, 2, 0}, t), 1u);
  EXPECT_THROW(prime_pi_ap({100, 0, 0}, t), domain_error);
  EXPECT_THROW(prime_pi_ap({100, 4, 4}, t), domain_error);
  EXPECT_THROW(prime_pi_ap({2e6, 4, 1}, t), capacity_error);
}

TEST(PrimePiAP, ResiduesPartitionPrimes) {
  const auto& t = table6();
  auto g = oracle::rng(5);
  for (std::uint64_t k = 1; k <= 50; ++k) {
    for (int rep = 0; rep < 4; ++rep) {
      double x = oracle::uniform_real(g, 2, 100'000);
      std::uint64_t total = 0;
      for (std::uint64_t l = 0; l < k; ++l) total += prime_pi_ap({x, k, l}, t);
      ASSERT_EQ(total, prime_pi(x, t)) << "k=" << k << " x=" << x;
    }
  }
}

TEST(Chebyshev, Examples) {
  const auto& t = table6();
  EXPECT_NEAR(chebyshev(2, ChebyshevKind::theta, t), std::log(2.0), 1e-15);
  double psi10 = 3 * std::log(2.0) + 2 * std::log(3.0) + std::log(5.0) + std::log(7.0);
  EXPECT_NEAR(chebyshev(10, ChebyshevKind::psi, t), psi10, 1e-13);
  // psi(113) by descending prime powers.
  double desc = 0;
  for (std::uint64_t n = 113; n >= 2; --n) {
    std::uint64_t m = n, p = 0;
    for (std::uint64_t d = 2; d <= m; ++d)
      if (m % d == 0) {
        p = d;
        while (m % d == 0) m /= d;
        break;
      }
    if (m == 1) desc += std::log(static_cast<double>(p));
  }
  Ball<> psi = chebyshev_ball(113, ChebyshevKind::psi, t);
  EXPECT_NEAR(psi.mid(), desc, 1e-12);
  EXPECT_TRUE(psi.contains(desc) || std::abs(psi.mid() - desc) < 1e-12);
}

TEST(Chebyshev, PsiMinusThetaIdentity) {
  const auto& t = table6();
  auto g = oracle::rng(7);
  for (int i = 0; i < 40; ++i) {
    double x = oracle::uniform_real(g, 2, 1'000'000);
    double th = chebyshev(x, ChebyshevKind::theta, t);
    double ps = chebyshev(x, ChebyshevKind::psi, t);
    ASSERT_LE(th, ps);
    double rhs = 0;
    for (int a = 2; std::pow(x, 1.0 / a) >= 2; ++a) {
      // floor of x^{1/a}, corrected for rounding in pow
      auto r = static_cast<std::uint64_t>(std::pow(x, 1.0 / a));
      while (std::pow(static_cast<double>(r + 1), a) <= x) ++r;
      while (r > 0 && std::pow(static_cast<double>(r), a) > x) --r;
      rhs += chebyshev(static_cast<double>(r), ChebyshevKind::theta, t);
    }
    ASSERT_NEAR(ps - th, rhs, 1e-8 * ps) << x;
  }
}

TEST(Omega, Examples) {
  EXPECT_EQ(omega(12), 2);
  EXPECT_EQ(omega(1), 0);
  EXPECT_EQ(omega_ap(30, 4, 1), 1);
  EXPECT_EQ(omega_ap(30, 4, 3), 1);
  EXPECT_EQ(omega_ap(30, 4, -1), 1);  // -1 = 3 mod 4
  EXPECT_THROW(omega(0), domain_error);
  EXPECT_THROW(omega_ap(0, 4, 1), domain_error);
}

TEST(Omega, MatchesTrialDivisionAndRobinBound) {
  const auto& t = table6();
  for (std::uint64_t n = 3; n <= 1'000'000; ++n) {
    auto w = t.prime_factors(n).size();
    const double ln = std::log(static_cast<double>(n));
    ASSERT_LT(static_cast<double>(w), 1.3841 * ln / std::log(ln)) << n;
  }
  auto g = oracle::rng(3);
  for (int i = 0; i < 2000; ++i) {
    auto n = oracle::uniform(g, 1, 10'000'000);
    ASSERT_EQ(omega(n), oracle::small_omega(n)) << n;
  }
}

TEST(ArithmeticFunctions, PhiMobius) {
  EXPECT_EQ(euler_phi(1), 1u);
  EXPECT_EQ(euler_phi(36), 12u);
  EXPECT_EQ(mobius(1), 1);
  EXPECT_EQ(mobius(30), -1);
  EXPECT_EQ(mobius(12), 0);
  EXPECT_TRUE(is_squarefree(105));
  for (std::uint64_t n = 1; n < 500; ++n) {
    std::uint64_t c = 0;
    for (std::uint64_t k = 1; k <= n; ++k) c += std::gcd(k, n) == 1;
    ASSERT_EQ(euler_phi(n), c);
  }
}

TEST(ErrorPi, Examples) {
  const auto& t = table6();
  EXPECT_DOUBLE_EQ(error_pi({100, 4, 1}, t), 11.0 - 25.0 / 2.0);
  EXPECT_DOUBLE_EQ(error_pi({100, 1, 0}, t), 0.0);
  EXPECT_THROW(error_pi({100, 4, 2}, t), domain_error);
  // Independent recount with a byte sieve.
  auto s = oracle::sieve(100'000);
  std::int64_t all = 0, res = 0;
  for (std::uint64_t n = 2; n <= 100'000; ++n)
    if (s[n]) {
      ++all;
      if (n % 3 == 2) ++res;
    }
  EXPECT_DOUBLE_EQ(error_pi({1e5, 3, 2}, t), static_cast<double>(res) - static_cast<double>(all) / 2.0);
}

TEST(Mertens, Examples) {
  const auto& t = table6();
  Ball<> m3 = mertens_product(3, t);
  EXPECT_TRUE(m3.contains(1.0 / 3.0));
  EXPECT_LE(m3.rad(), 1e-15);
  EXPECT_NEAR(m3.mid(), 1.0 / 3.0, 1e-16);
  // Log-domain oracle.
  double lsum = 0;
  for (auto p : oracle::primes(1'000'000)) lsum += std::log1p(-1.0 / static_cast<double>(p));
  EXPECT_NEAR(mertens_product(1e6, t).mid(), std::exp(lsum), 1e-12);
  EXPECT_THROW(mertens_product(1.5, t), domain_error);
}

TEST(Mertens, DusartEnclosure) {
  const auto& t = table6();
  const double emg = std::exp(-0.57721566490153286);
  auto check = [&](double x) {
    Ball<> m = mertens_product(x, t);
    double L = std::log(x);
    double lo = emg / L * (1 - 1 / (5 * L * L)), hi = emg / L * (1 + 1 / (5 * L * L));
    EXPECT_GT(m.lower(), lo) << x;
    EXPECT_LT(m.upper(), hi) << x;
  };
  check(2973);
  auto g = oracle::rng(22);
  for (int i = 0; i < 50; ++i) check(oracle::uniform_real(g, 2973, 1e6));
}

TEST(RecipPrimeSum, Examples) {
  const auto& t = table6();
  EXPECT_TRUE(recip_prime_sum(2, 3, t).contains(0.5));
  Ball<> s = recip_prime_sum(2, 11, t);
  EXPECT_NEAR(s.mid(), 0.5 + 1.0 / 3 + 0.2 + 1.0 / 7, 1e-15);
  EXPECT_EQ(recip_prime_sum(24, 28, t).mid(), 0.0);
  EXPECT_THROW(recip_prime_sum(1, 10, t), domain_error);
  EXPECT_THROW(recip_prime_sum(10, 2e6, t), capacity_error);
}

TEST(RecipPrimeSum, DusartUpperBound) {
  const auto& t = table6();
  auto bound = [](double a, double b) {
    double la = std::log(a);
    return std::log(std::log(b)) - std::log(la) + 1 / (5 * la * la) + 8 / (15 * la * la * la);
  };
  EXPECT_LT(recip_prime_sum(100, 1e5, t).upper(), bound(100, 1e5));
  auto g = oracle::rng(23);
  for (int i = 0; i < 50; ++i) {
    double b = oracle::uniform_real(g, 10372.5, 1e6);
    double a = oracle::uniform_real(g, 1.01, b);
    ASSERT_LT(recip_prime_sum(a, b, t).upper(), bound(a, b)) << a << " " << b;
  }
}

TEST(SingularSeries, HighTruncationOracle) {
  const auto& t = table6();
  Ball<> u4 = singular_series_UN(4, 1'000'000, t);
  // Product over primes up to 1e7 in long double.
  long double prod = 1;
  for (auto p : oracle::primes(10'000'000)) {
    if (p == 2) continue;
    long double q = static_cast<long double>(p - 1);
    prod *= 1 - 1 / (q * q);
  }
  double oracle_u4 = static_cast<double>(2 * std::exp(-0.577215664901532860606512090082402431L) * prod);
  EXPECT_TRUE(u4.contains(oracle_u4)) << u4 << " vs " << oracle_u4;
  EXPECT_LT(u4.rad(), 1e-6);
}

TEST(SingularSeries, LocalFactorRatios) {
  const auto& t = table6();
  Ball<> u4 = singular_series_UN(4, 100'000, t);
  Ball<> r6 = singular_series_UN(6, 100'000, t) / u4;
  Ball<> r30 = singular_series_UN(30, 100'000, t) / u4;
  EXPECT_TRUE(r6.contains(2.0));
  EXPECT_TRUE(r30.contains(8.0 / 3.0));
  EXPECT_TRUE(singular_series_local_factor(2 * 9 * 25 * 7).contains(2.0 * 4.0 / 3.0 * 6.0 / 5.0));
  EXPECT_THROW(singular_series_UN(7, 100'000, t), domain_error);
  EXPECT_THROW(singular_series_UN(2, 100'000, t), domain_error);
  EXPECT_THROW(singular_series_UN(4, 1000, t), domain_error);
  EXPECT_THROW(singular_series_UN(4, 2'000'000, t), capacity_error);
}

TEST(Cache, RoundTrip) {
  auto t = build_prime_table(100'003);
  auto path = temp_path("roundtrip.bin");
  t.save(path);
  auto u = PrimeTable::load(path, 100'003);
  EXPECT_TRUE(t == u);
  EXPECT_EQ(u.count_upto(100'003), t.count_upto(100'003));
  std::ifstream in(path, std::ios::binary);
  std::string head(9, '\0');
  in.read(head.data(), 9);
  EXPECT_EQ(head, "CHEN-PT1\n");
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "100003");
  std::filesystem::remove(path);
}

TEST(Cache, RejectsCorruptFiles) {
  auto t = build_prime_table(1000);
  auto path = temp_path("corrupt.bin");
  t.save(path);
  std::string good;
  {
    std::ifstream in(path, std::ios::binary);
    good.assign(std::istreambuf_iterator<char>(in), {});
  }
  auto write = [&](const std::string& s) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out << s;
  };
  EXPECT_THROW(PrimeTable::load(path, 999), format_error);
  write("CHEN-PT2\n" + good.substr(9));
  EXPECT_THROW(PrimeTable::load(path), format_error);
  write(good.substr(0, good.size() - 3));
  EXPECT_THROW(PrimeTable::load(path), format_error);
  write(good + "x");
  EXPECT_THROW(PrimeTable::load(path), format_error);
  write("CHEN-PT1\n1e3\n" + good.substr(14));
  EXPECT_THROW(PrimeTable::load(path), format_error);
  std::string pad = good;
  pad.back() = static_cast<char>(0x80);  // bit beyond the last odd number <= 1000
  write(pad);
  EXPECT_THROW(PrimeTable::load(path), format_error);
  std::string flipped = good;
  flipped[good.size() - 20] ^= 0x10;  // inside the bitset
  write(flipped);
  EXPECT_THROW(PrimeTable::load(path), format_error);
  std::filesystem::remove(path);
  EXPECT_THROW(PrimeTable::load(path), format_error);
}
