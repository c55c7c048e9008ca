#include <doctest.h>

#include <cmath>
#include <random>

#include "configs.hpp"
#include "hardy/oracle.hpp"

using namespace hardy;
using namespace hardy::testing;

namespace {

OracleOptions quick() {
  OracleOptions o;
  o.atoms = 32;
  o.levels = 2;
  o.restarts = 4;
  return o;
}

// (int (U(min(t,z))/U(t))^{q/p} w dt)^{1/q}, computed directly.
double one_atom_lhs(const InequalitySpec& s, double z) {
  const CumulativeWeight U(s.u);
  const double e = s.ex.q / s.ex.p;
  auto f = [&](double t) { return std::pow(U(std::min(t, z)) / U(t), e) * s.w(t); };
  auto bps = s.w.breakpoints();
  bps.push_back(z);
  return std::pow(quad::integrate_value(f, 0, kInf, bps), 1 / s.ex.q);
}

}  // namespace

TEST_CASE("one-atom left-hand side") {
  for (const auto& s : {R1v(), R3(), spec(InequalityKind::IteratedHardy, 0.5, 0.5, one(), vq(), wr(1))})
    for (double z : {0.01, 1.0, 30.0})
      CHECK(lhs_31(s, TestFunction::atoms({z}, {1})) == doctest::Approx(one_atom_lhs(s, z)).epsilon(1e-8));
}

TEST_CASE("zero test function") {
  CHECK(lhs_31(R1v(), TestFunction::atoms({1, 2}, {0, 0})) == 0);
  CHECK(lhs_32(R2(), TestFunction::atoms({1}, {0})) == 0);
}

TEST_CASE("linearity at p = q = 1") {
  auto s = spec(InequalityKind::IteratedHardy, 1, 1, one(), vq(), wr(1));
  const double a = lhs_31(s, TestFunction::atoms({0.5}, {1}));
  const double b = lhs_31(s, TestFunction::atoms({4}, {1}));
  CHECK(lhs_31(s, TestFunction::atoms({0.5, 4}, {1, 1})) == doctest::Approx(a + b).epsilon(1e-9));
}

TEST_CASE("sup form with one atom") {
  auto s = spec(InequalityKind::IteratedHardySup, 1, kInf, one(), one(), one());
  CHECK(lhs_32(s, TestFunction::atoms({2}, {1})) == doctest::Approx(1).epsilon(1e-9));
  // w = sqrt(t) up to 4, then 2: sup_t w(t) min(t,z)/t at z = 1 is attained at t = 1
  auto w = WeightFunction::piecewise_power({{0, 4, 1, 0.5}, {4, kInf, 2, 0}});
  auto s2 = spec(InequalityKind::IteratedHardySup, 1, kInf, one(), one(), w);
  CHECK(lhs_32(s2, TestFunction::atoms({1}, {1})) == doctest::Approx(1).epsilon(1e-9));
}

TEST_CASE("exact kernel constant at the corner") {
  auto s = corner();
  for (double z : {0.1, 1.0, 10.0})
    CHECK(kernel_phi(s, z) == doctest::Approx(z * std::log1p(1 / z)).epsilon(1e-4));
  auto k = exact_kernel_constant(s);
  CHECK(k.value == doctest::Approx(1).epsilon(1e-3));
  auto zero = spec(InequalityKind::IteratedHardy, 1, 1, one(), one(), WeightFunction());
  CHECK(exact_kernel_constant(zero).value == 0);
  auto scaled = spec(InequalityKind::IteratedHardy, 1, 1, one(), one().scaled(4), s.w);
  CHECK(exact_kernel_constant(scaled).value == doctest::Approx(k.value / 4).epsilon(1e-9));
}

TEST_CASE("ascent reaches the exact corner") {
  auto s = corner();
  auto e = maximize_ratio(s, quick());
  CHECK(e.c_lo >= 0.99 * exact_kernel_constant(s).value);
  CHECK(e.c_lo <= exact_kernel_constant(s).value * (1 + 1e-6));
}

TEST_CASE("lower-bound soundness and grid monotonicity") {
  for (const auto& s : {R1v(), R3(), R2(), R4(), R5()}) {
    auto e = estimate_best_constant(s, quick());
    CAPTURE(inequality_id(s.kind));
    REQUIRE(e.c_lo > 0);
    if (s.kind == InequalityKind::IteratedHardy || s.kind == InequalityKind::IteratedHardySup) {
      auto r = test_ratio(s, e.maximizer);
      CHECK(r.ratio == doctest::Approx(e.c_lo).epsilon(1e-9));
    }
    for (std::size_t i = 1; i < e.level_values.size(); ++i) CHECK(e.level_values[i] >= e.level_values[i - 1] - 1e-12);
  }
}

TEST_CASE("homogeneity") {
  auto s = R3();
  const double base = maximize_ratio(s, quick()).c_lo;
  auto v3 = spec(s.kind, 2, 2, s.u, s.v.scaled(3), s.w);
  CHECK(maximize_ratio(v3, quick()).c_lo == doctest::Approx(base / 3).epsilon(1e-9));
  auto w4 = spec(s.kind, 2, 2, s.u, s.v, s.w.scaled(4));
  CHECK(maximize_ratio(w4, quick()).c_lo == doctest::Approx(base * 2).epsilon(1e-9));
}

TEST_CASE("monotone reduction") {
  auto f = TestFunction::monotone({1}, {1});
  auto h = monotone_to_atoms(f, 2);
  REQUIRE(h.kind == TestFunction::Kind::Atoms);
  REQUIRE(h.z.size() == 1);
  CHECK(h.z[0] == doctest::Approx(1));
  CHECK(h.m[0] == doctest::Approx(1));
  auto back = atoms_to_monotone(h, 2);
  CHECK(back.m[0] == doctest::Approx(1));
  auto r = reduce_monotone(R4());
  CumulativeWeight V(r.v);
  CHECK(V(3) == doctest::Approx(3));
  CHECK(r.P == doctest::Approx(0.5));
  CHECK(r.Q == doctest::Approx(1));
}

TEST_CASE("round trip of monotone test functions") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> d(0, 1);
  for (double p : {0.5, 1.0, 2.0, 3.0}) {
    std::vector<double> z, m;
    for (int i = 0; i < 6; ++i) {
      z.push_back(std::pow(10.0, 4 * d(rng) - 2));
      m.push_back(d(rng));
    }
    std::sort(z.begin(), z.end());
    auto f = TestFunction::monotone(z, m);
    auto g = atoms_to_monotone(monotone_to_atoms(f, p), p);
    for (std::size_t i = 0; i < m.size(); ++i) CHECK(g.m[i] == doctest::Approx(m[i]).epsilon(1e-12));
  }
}

TEST_CASE("reduced and direct sides agree") {
  auto s = R4();
  auto r = reduce_monotone(s);
  auto f = TestFunction::monotone({0.5, 2, 9}, {1, 0.5, 0.25});
  auto h = monotone_to_atoms(f, s.ex.p);
  const double C = reduced_lhs(r, h) / reduced_rhs(r, h);
  const double c = lhs_value(s, f) / rhs_value(s, f);
  CHECK(C == doctest::Approx(std::pow(c, s.ex.p)).epsilon(1e-8));
}

TEST_CASE("Fubini example") {
  auto h = TestFunction::steps({0, 1}, {1});
  auto c = fubini_check(one(), h, 2);
  CHECK(c.fubini_lhs == doctest::Approx(0.5).epsilon(1e-10));
  CHECK(c.fubini_rhs == doctest::Approx(0.5).epsilon(1e-10));
  CHECK(c.kernel == doctest::Approx(2 - 4 * std::log(1.5)).epsilon(1e-9));
  CHECK(c.kernel_ratio >= 0.5);
  CHECK(c.kernel_ratio <= 1);
  auto zero = fubini_check(one(), TestFunction::atoms({1}, {0}), 2);
  CHECK(zero.fubini_lhs == 0);
  CHECK(zero.fubini_rhs == 0);
}

TEST_CASE("Fubini battery") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> d(0, 1);
  for (int trial = 0; trial < 30; ++trial) {
    std::vector<PowerPiece> pieces;
    double from = 0;
    for (int i = 0; i < 3; ++i) {
      const double to = i == 2 ? kInf : from + std::pow(10.0, 2 * d(rng) - 1);
      pieces.push_back({from, to, 0.5 + d(rng), 2 * d(rng) - 0.5});
      from = to;
    }
    auto u = WeightFunction::piecewise_power(pieces);
    std::vector<double> z, m;
    for (int i = 0; i < 4; ++i) {
      z.push_back(std::pow(10.0, 4 * d(rng) - 2));
      m.push_back(d(rng));
    }
    std::sort(z.begin(), z.end());
    const double x = std::pow(10.0, 4 * d(rng) - 2);
    auto c = fubini_check(u, TestFunction::atoms(z, m), x);
    CHECK(c.residual < 1e-8);
    CHECK(c.kernel_ratio >= 0.5 - 1e-12);
    CHECK(c.kernel_ratio <= 1 + 1e-12);
  }
}

TEST_CASE("Stieltjes reduction") {
  auto r = reduce_stieltjes(R5());
  CHECK(r.p == 2);
  CHECK(r.q == 2);
  CHECK_THROWS_AS(reduce_stieltjes(R4()), Error);
}

TEST_CASE("dispatch") {
  CHECK(estimate_best_constant(corner(), quick()).method == "exact kernel");
  CHECK(estimate_best_constant(R1v(), quick()).method != "exact kernel");
}

TEST_CASE("window edge flag") {
  // v = 1: the supremum escapes to infinity
  auto open = spec(InequalityKind::IteratedHardy, 2, 2, one(), one(), wr(1));
  CHECK(estimate_best_constant(open, quick()).window_edge);
  CHECK_FALSE(estimate_best_constant(R3(), quick()).window_edge);
}
