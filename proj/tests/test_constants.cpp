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

#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <cmath>
#include <functional>

#include "chen/constants.hpp"
#include "chen/quadrature.hpp"
#include "oracles.hpp"

using namespace chen;
using boost::multiprecision::cpp_bin_float_50;

namespace {

const PrimeTable& table6() {
  static const PrimeTable t = build_prime_table(1'000'000);
  return t;
}

const ConstantsLedger& default_ledger() {
  static const ConstantsLedger L = ledger(table6());
  return L;
}

}  // namespace

// ---------------------------------------------------------------------------
// Ball arithmetic.

TEST(Ball, Construction) {
  Ball<> b(1.0, 0.5);
  EXPECT_LE(b.lower(), 0.5);
  EXPECT_GT(b.lower(), 0.5 - 1e-15);
  EXPECT_GE(b.upper(), 1.5);
  EXPECT_THROW(Ball<>(1.0, -1.0), domain_error);
  EXPECT_THROW(Ball<>::from_interval(2, 1), domain_error);
  EXPECT_TRUE(Ball<>::literal("0.1").contains(cpp_bin_float_50("0.1").convert_to<double>()));
  EXPECT_GT(Ball<>::literal("0.1").rad(), 0.0);
  Ball<> i = Ball<>::from_interval(1, 3);
  EXPECT_TRUE(i.contains(1.0));
  EXPECT_TRUE(i.contains(3.0));
  EXPECT_TRUE(i.contains(Ball<>(2.0, 0.5)));
  EXPECT_FALSE(i.contains(Ball<>(2.0, 1.5)));
  EXPECT_EQ(Ball<>(7).rad(), 0.0);
  EXPECT_GT(Ball<>((std::uint64_t{1} << 60) + 1).rad(), 0.0);  // not representable
}

TEST(Ball, ErrorPaths) {
  EXPECT_THROW(Ball<>(1.0) / Ball<>(0.0, 0.1), domain_error);
  EXPECT_THROW(log(Ball<>(0.0)), domain_error);
  EXPECT_THROW(log(Ball<>(0.5, 1.0)), domain_error);
  EXPECT_THROW(sqrt(Ball<>(-1.0)), domain_error);
}

TEST(Ball, RandomExpressionSoundness) {
  // Random expression trees over ledger entries, evaluated in Ball<double>
  // and in 50-digit arithmetic on the leaf midpoints.
  using F = cpp_bin_float_50;
  const auto& L = default_ledger();
  std::vector<Ball<>> leaves;
  for (const auto& [name, e] : L.entries)
    if (e.value.mid() > 0) leaves.push_back(e.value);
  auto g = oracle::rng(31);
  std::function<std::pair<Ball<>, F>(int)> gen = [&](int depth) -> std::pair<Ball<>, F> {
    if (depth == 0 || oracle::uniform(g, 0, 3) == 0) {
      Ball<> b = leaves[oracle::uniform(g, 0, leaves.size() - 1)];
      return {b, F(b.mid())};
    }
    auto [a, fa] = gen(depth - 1);
    switch (oracle::uniform(g, 0, 6)) {
      case 0: {
        auto [b, fb] = gen(depth - 1);
        return {a + b, fa + fb};
      }
      case 1: {
        auto [b, fb] = gen(depth - 1);
        return {a - b, fa - fb};
      }
      case 2: {
        auto [b, fb] = gen(depth - 1);
        return {a * b, fa * fb};
      }
      case 3: {
        auto [b, fb] = gen(depth - 1);
        if (!b.excludes_zero()) return {a, fa};
        return {a / b, fa / fb};
      }
      case 4:
        if (!a.certainly_positive()) return {a, fa};
        return {log(a), boost::multiprecision::log(fa)};
      case 5:
        if (!(a.upper() < 50)) return {a, fa};
        return {exp(a), boost::multiprecision::exp(fa)};
      default:
        if (!a.certainly_positive()) return {a, fa};
        return {sqrt(a), boost::multiprecision::sqrt(fa)};
    }
  };
  for (int i = 0; i < 2000; ++i) {
    auto [b, f] = gen(5);
    double hi = f.convert_to<double>();
    ASSERT_TRUE(b.contains(hi)) << i << ": " << b << " vs " << hi;
  }
}

TEST(Quadrature, AgreesWithTanhSinh) {
  boost::math::quadrature::tanh_sinh<double> ts;
  struct Case {
    std::function<double(double)> f;
    double a, b;
  };
  std::vector<Case> cases = {
      {[](double x) { return std::sin(x); }, 0, 3},
      {[](double x) { return std::exp(-x * x); }, -2, 2},
      {[](double x) { return std::log(x + 1) / (x + 0.5); }, 0, 4},
      {[](double x) { return 1 / (1 + 25 * x * x); }, -1, 1},
  };
  for (const auto& c : cases) {
    auto r = integrate<double>(c.f, c.a, c.b, {1e-13, 4096});
    double ref = ts.integrate(c.f, c.a, c.b, 1e-15);
    EXPECT_TRUE(r.converged);
    EXPECT_NEAR(r.value.mid(), ref, 1e-12);
    EXPECT_LE(std::abs(r.value.mid() - ref), r.value.rad() + 1e-15);
  }
  EXPECT_EQ(integrate<double>([](double) { return 1.0; }, 2, 2).value.mid(), 0.0);
}

// ---------------------------------------------------------------------------
// Constants.

TEST(Zeta, ClosedForms) {
  const double pi = 3.14159265358979323846;
  EXPECT_NEAR(zeta(2).mid(), pi * pi / 6, 1e-12);
  EXPECT_TRUE(zeta(2).contains(pi * pi / 6));
  EXPECT_TRUE(zeta(6).contains(std::pow(pi, 6) / 945));
  EXPECT_TRUE(zeta(3).contains(1.2020569031595942854));
  auto z50 = zeta<cpp_bin_float_50>(3, 60);
  EXPECT_LT(boost::multiprecision::abs(z50.mid() - cpp_bin_float_50("1.2020569031595942853997381615114499907650")),
            cpp_bin_float_50("1e-40"));
  EXPECT_THROW(zeta(1), domain_error);
}

TEST(EulerGamma, LiteralMatchesBrentMcMillan) {
  EXPECT_LT(euler_gamma_literal_discrepancy(), 1e-20);
  // e^gamma self-consistency: 2 e^{-gamma} e^{2 gamma} / 2.
  Ball<> g = constants::euler_gamma();
  Ball<> v = Ball<>(2.0) * exp(-g) * exp(Ball<>(2.0) * g) / Ball<>(2.0);
  EXPECT_NEAR(v.mid(), constants::exp_gamma().mid(), 1e-14);
}

TEST(C0, BoundAndDelegation) {
  Ball<> c0 = compute_c0(table6());
  EXPECT_LT(c0.upper(), 48.83215);
  EXPECT_LT(c0.rad(), 1e-8);
  Ball<> psi = chebyshev_ball(113, ChebyshevKind::psi, table6());
  double direct = 0;
  for (std::uint64_t n = 2; n <= 113; ++n) {
    std::uint64_t m = n, p = 0;
    for (std::uint64_t d = 2; d <= m; ++d)
      if (m % d == 0) {
        p = d;
        while (m % d == 0) m /= d;
        break;
      }
    if (m == 1) direct += std::log(static_cast<double>(p));
  }
  EXPECT_NEAR(psi.mid(), direct, 1e-12);
  // 50-digit recomputation lands inside the double Ball.
  using F = cpp_bin_float_50;
  F psi50 = 0;
  for (std::uint64_t n = 2; n <= 113; ++n) {
    std::uint64_t m = n, p = 0;
    for (std::uint64_t d = 2; d <= m; ++d)
      if (m % d == 0) {
        p = d;
        while (m % d == 0) m /= d;
        break;
      }
    if (m == 1) psi50 += boost::multiprecision::log(F(p));
  }
  using boost::multiprecision::log;
  using boost::multiprecision::pow;
  using boost::multiprecision::sqrt;
  const F l2 = log(F(2)), pi = boost::math::constants::pi<F>();
  F c0_50 = pow(F(2), F(13) / 2) / (9 * pi * l2) * (F(1) / 3 + 3 / (2 * l2)) * ((2 + log(l2 / log(F(4) / 3))) / l2) *
            sqrt(psi50 / 113);
  EXPECT_TRUE(c0.contains(c0_50.convert_to<double>())) << c0 << " " << c0_50;
  EXPECT_THROW(compute_c0(build_prime_table(100)), capacity_error);
}

TEST(C1, BoundAndEulerProduct) {
  Ball<> c1 = compute_c1();
  EXPECT_LT(c1.upper(), 1.9436);
  EXPECT_LT(c1.rad(), 1e-8);
  // prod_p (1 + 1/(p(p-1))) over p <= P, tail in [1, exp(1/P)].
  const std::uint64_t P = 10'000'000;
  long double prod = 1;
  for (auto p : oracle::primes(P)) {
    long double q = static_cast<long double>(p);
    prod *= 1 + 1 / (q * (q - 1));
  }
  const double lo = static_cast<double>(prod);
  const double hi = static_cast<double>(prod * std::exp(1.0L / P));
  EXPECT_GT(c1.upper(), lo);
  EXPECT_LT(c1.lower(), hi);
  EXPECT_LT(std::abs(c1.mid() - lo), 1e-7);
}

TEST(C2, BoundAndSimpsonOracle) {
  Ball<> c2 = compute_c2();
  EXPECT_LT(c2.upper(), 0.36309);
  EXPECT_LT(c2.rad(), 1e-8);
  auto f = [](double b) { return std::log(2 - 3 * b) / (b * (1 - b)); };
  EXPECT_EQ(f(1.0 / 3.0) == 0 || std::abs(f(1.0 / 3.0)) < 1e-15, true);
  const int n = 1'000'000;
  const double a = 0.125, b = 1.0 / 3.0, h = (b - a) / n;
  long double s = f(a) + f(b);
  for (int i = 1; i < n; ++i) s += (i % 2 ? 4.0L : 2.0L) * f(a + i * h);
  double simpson = static_cast<double>(s * h / 3);
  EXPECT_NEAR(c2.mid() - kC2Pad, simpson, 1e-9);
  auto c2_50 = c2_integral<cpp_bin_float_50>(1e-25);
  EXPECT_TRUE(c2_integral().contains(c2_50.mid().convert_to<double>()));
}

TEST(Eps0, Examples) {
  EXPECT_DOUBLE_EQ(eps0(36), 1.0 / 57);
  EXPECT_DOUBLE_EQ(eps0(57), 1.0 / 57);
  EXPECT_DOUBLE_EQ(eps0(100), 1.0 / 100);
  EXPECT_TRUE(eps0_ball(36).contains(1.0 / 57));
  EXPECT_THROW(eps0(0), domain_error);
}

TEST(Ledger, AllPublishedBoundsHold) {
  const auto& L = default_ledger();
  EXPECT_TRUE(L.pass());
  for (const auto& [name, e] : L.entries) {
    if (e.paper_bound) EXPECT_LT(e.value.upper(), *e.paper_bound) << name;
    EXPECT_FALSE(e.provenance.empty()) << name;
  }
  for (const char* key : {"c0", "c1", "c2", "U_4", "euler_gamma", "exp_gamma", "f1(4)", "F1(4)", "literal:0.007",
                          "literal:255.84406", "literal:993.2507", "literal:860.16295"})
    EXPECT_TRUE(L.entries.count(key)) << key;
}

TEST(Ledger, DeterministicAndMonotoneInPrecision) {
  auto a = ledger(table6());
  auto b = ledger(table6());
  ASSERT_EQ(a.entries.size(), b.entries.size());
  for (const auto& [name, e] : a.entries) {
    EXPECT_EQ(e.value.mid(), b.entries.at(name).value.mid()) << name;
    EXPECT_EQ(e.value.rad(), b.entries.at(name).value.rad()) << name;
  }
  LedgerOptions loose;
  loose.precision_target = 1e-7;
  auto l = ledger(table6(), loose);
  for (const auto& [name, e] : a.entries) EXPECT_LE(e.value.rad(), l.entries.at(name).value.rad()) << name;
  EXPECT_LT(a.entries.at("c2").value.rad(), l.entries.at("c2").value.rad());
  LedgerOptions bad;
  bad.precision_target = 1e-3;
  EXPECT_THROW(ledger(table6(), bad), config_error);
  bad.precision_target = 1e-16;
  EXPECT_THROW(ledger(table6(), bad), config_error);
}
