#include <doctest.h>

#include <cmath>

#include "configs.hpp"

using namespace hardy;
using namespace hardy::testing;

namespace {

bool warned(const ConditionReport& r, const std::string& prefix) {
  for (auto& w : r.warnings)
    if (w.rfind(prefix, 0) == 0) return true;
  return false;
}

}  // namespace

TEST_CASE("spec validation") {
  CHECK_THROWS_AS(spec(InequalityKind::IteratedHardySup, 1, 2, one(), one(), one()), Error);
  CHECK_THROWS_AS(spec(InequalityKind::IteratedHardy, 1, kInf, one(), one(), one()), Error);
  CHECK_NOTHROW(spec(InequalityKind::Stieltjes, kInf, 1, one(), one(), one()));
  CHECK(parse_inequality_id("5.3") == InequalityKind::MonotoneConeSup);
  CHECK_THROWS_AS(parse_inequality_id("4.1"), Error);
}

TEST_CASE("local constants") {
  CHECK(local_B(one(), vq(), 0, 2, 1) == doctest::Approx(1).epsilon(1e-9));
  CHECK(local_B(one(), one(), 0, 1, 0.5) == doctest::Approx(0.5).epsilon(1e-9));
  auto gap = WeightFunction::piecewise_power({{0, 1, 1, 0}, {1, 2, 0, 0}, {2, kInf, 1, 0}});
  CHECK(std::isinf(local_B(one(), gap, 0, 3, 1)));
  CHECK(local_C(vq(), 2, 4) == doctest::Approx(0.25));
  CHECK(local_C(one(), 3, 9) == doctest::Approx(1));
  CHECK(std::isinf(local_C(WeightFunction::power(1, 1), 0, 1)));
}

TEST_CASE("condition I examples") {
  auto avg = condition_I(spec(InequalityKind::IteratedHardy, 1, 1, one(), one(), one()));
  CHECK(avg.formula == "I3");
  CHECK(std::isinf(avg.value));
  auto c = condition_I(corner());
  CHECK(c.formula == "I3");
  CHECK(c.value == doctest::Approx(1).epsilon(5e-3));
  CHECK(warned(c, "tail divergence"));
  auto r1 = condition_I(R1());
  CHECK(r1.formula == "I1");
  CHECK(std::isfinite(r1.value));
  CHECK(r1.value > 0);
  auto r1v = condition_I(R1v());
  CHECK(r1v.warnings.empty());
  CHECK(r1v.value > 0);
}

TEST_CASE("regime dispatch") {
  CHECK(condition_I(spec(InequalityKind::IteratedHardy, 0.5, 0.5, one(), vq(), wr(1))).formula == "I2");
  CHECK(condition_I(spec(InequalityKind::IteratedHardy, 2, 0.5, one(), vq(), wr(0.25))).formula == "I4");
  CHECK(condition_I(R2()).formula == "I5");
  CHECK(condition_I(spec(InequalityKind::IteratedHardySup, 2, kInf, one(), vq(), wr(2))).formula == "I6");
  CHECK(condition_C(R4()).formula == "C3");
  CHECK(condition_C(spec(InequalityKind::MonotoneCone, 0.5, 1, one(), one(), wr(1))).formula == "C1");
  CHECK(condition_C(spec(InequalityKind::MonotoneCone, 2, 1, one(), one(), wr(1))).formula == "C4");
  CHECK(condition_C(spec(InequalityKind::MonotoneConeSup, 2, kInf, one(), one(), wr(1))).formula == "C6");
  CHECK(condition_S(R5()).formula == "S3");
  CHECK(compute_condition(R5()).formula == "S3");
}

TEST_CASE("condition C and S examples") {
  auto r4 = condition_C(R4());
  CHECK(std::isfinite(r4.value));
  CHECK(r4.value > 0);
  auto hole = WeightFunction::piecewise_power({{0, 1, 0, 0}, {1, kInf, 1, 0}});
  CHECK(std::isinf(condition_C(spec(InequalityKind::MonotoneCone, 2, 2, one(), hole, wr(2))).value));
  auto s5 = condition_S(spec(InequalityKind::Stieltjes, kInf, 1, one(), one(), wr(1)));
  CHECK(s5.formula == "S5");
  CHECK(std::isinf(s5.value));
  // U(s) v(s) = 1
  auto s1 = condition_S(spec(InequalityKind::Stieltjes, 1, 1, one(), WeightFunction::power(1, -1), one_plus_t_sq()));
  CHECK(s1.formula == "S1");
  CHECK(s1.value == doctest::Approx(1).epsilon(5e-3));
}

TEST_CASE("scaling laws") {
  const std::vector<InequalitySpec> specs{R1v(), R3(), spec(InequalityKind::IteratedHardy, 0.5, 0.5, one(), vq(), wr(1)),
                                          R2()};
  for (const auto& s : specs) {
    const double base = condition_I(s).value;
    const double q = s.ex.q;
    auto u2 = spec(s.kind, s.ex.p, q, s.u.scaled(2), s.v, s.w);
    auto v2 = spec(s.kind, s.ex.p, q, s.u, s.v.scaled(2), s.w);
    auto w2 = spec(s.kind, s.ex.p, q, s.u, s.v, s.w.scaled(2));
    CHECK(condition_I(u2).value == doctest::Approx(base).epsilon(1e-8));
    CHECK(condition_I(v2).value == doctest::Approx(base / 2).epsilon(1e-8));
    const double wf = std::isinf(q) ? 2 : std::pow(2.0, 1 / q);
    CHECK(condition_I(w2).value == doctest::Approx(base * wf).epsilon(1e-8));
  }
}

TEST_CASE("monotonicity in w and v") {
  auto s = R3();
  const double base = condition_I(s).value;
  auto bigger_w = WeightFunction::piecewise_power({{0, 1, 1, 0}, {1, 4, 2, -0.5}, {4, kInf, 1, -0.5}});
  CHECK(condition_I(spec(s.kind, 2, 2, one(), vq(), bigger_w)).value >= base * (1 - 1e-9));
  auto bigger_v = WeightFunction::piecewise_power({{0, 1, 1, 0}, {1, kInf, 1, 3}});
  CHECK(condition_I(spec(s.kind, 2, 2, one(), bigger_v, wr(1))).value <= base * (1 + 1e-9));
}

TEST_CASE("discrete conditions and chains") {
  auto s = R1v();
  auto phi = discretization_phi(s);
  auto seq = build_discretizing_sequence(phi, 2);
  const double I = condition_I(s).value;
  const double A = discrete_A(s, seq, phi).value;
  CHECK(A / I >= 1.0 / 16);
  CHECK(A / I <= 16);
  auto ca = chain_A(s, seq, phi);
  CHECK(ca.values.size() == 6);
  CHECK(ca.max_adjacent_ratio <= 8);
  CHECK_THROWS_AS(chain_B(s, seq, phi), Error);

  auto s3 = R3();
  auto phi3 = discretization_phi(s3);
  auto seq3 = build_discretizing_sequence(phi3, 2);
  auto cb = chain_B(s3, seq3, phi3);
  CHECK(cb.values.size() == 5);
  CHECK(cb.max_adjacent_ratio <= 8);

  auto s2 = R2();
  auto phi2 = discretization_phi(s2);
  auto seq2 = build_discretizing_sequence(phi2, 2);
  const double D = discrete_D(s2, seq2, phi2).value;
  const double I5 = condition_I(s2).value;
  CHECK(D / I5 >= 1.0 / 16);
  CHECK(D / I5 <= 16);
}

TEST_CASE("zero weight gives zero") {
  auto s = spec(InequalityKind::IteratedHardy, 0.5, 1, one(), vq(), WeightFunction());
  CHECK(condition_I(s).value == 0);
}

TEST_CASE("v-bar limit is flagged") {
  auto r = condition_I(spec(InequalityKind::IteratedHardy, 1, 1, one(), one(), WeightFunction::piecewise_power(
                                                                                   {{0, 1, 1, 0}, {1, kInf, 1, -0.5}})));
  CHECK(warned(r, "v-bar limit"));
}
