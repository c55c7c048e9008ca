#include <doctest.h>

#include <cmath>

#include "hardy/measures.hpp"

using namespace hardy;

namespace {

WeightFunction max1_sq() { return WeightFunction::piecewise_power({{0, 1, 1, 0}, {1, kInf, 1, 2}}); }
const Interval kAll{0, kInf, true, false};

}  // namespace

TEST_CASE("envelope powers") {
  auto g = envelope_power(max1_sq(), 1);
  CHECK(g(0.5) == doctest::Approx(1));
  CHECK(g(4) == doctest::Approx(1.0 / 16));
  CHECK(g.jumps().empty());
  auto g2 = envelope_power(max1_sq(), 2);
  CHECK(g2(3) == doctest::Approx(std::pow(3.0, -4)));
  auto step = envelope_power(WeightFunction::piecewise_power({{0, 1, 1, 0}, {1, kInf, 2, 0}}), 1);
  CHECK(step(0.5) == doctest::Approx(1));
  CHECK(step(2) == doctest::Approx(0.5));
  CHECK(step.left(1) == doctest::Approx(1));
  CHECK(step(1) == doctest::Approx(0.5));
}

TEST_CASE("envelope measures") {
  EnvelopeMeasure mu(envelope_power(WeightFunction::piecewise_power({{0, 1, 1, 0}, {1, kInf, 1, 1}}), 1));
  CHECK(mu.atoms().empty());
  CHECK(mu.density(2) == doctest::Approx(0.25));
  CHECK(mu.density(0.5) == doctest::Approx(0));
  EnvelopeMeasure step(envelope_power(WeightFunction::piecewise_power({{0, 1, 1, 0}, {1, kInf, 2, 0}}), 1));
  REQUIRE(step.atoms().size() == 1);
  CHECK(step.atoms()[0].t == doctest::Approx(1));
  CHECK(step.atoms()[0].mass == doctest::Approx(0.5));
  EnvelopeMeasure flat(envelope_power(WeightFunction::constant(1), 1));
  CHECK(flat.is_zero());
  CHECK(flat.mass_at_infinity() == doctest::Approx(1));
}

TEST_CASE("mass consistency") {
  auto g = envelope_power(WeightFunction::piecewise_power({{0, 1, 1, 0}, {1, 3, 2, 1}, {3, kInf, 1, 3}}), 1.5);
  EnvelopeMeasure mu(g);
  const std::vector<double> pts{0.2, 0.9, 1.0, 2.0, 3.0, 7.0};
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j) {
      const double a = pts[i], b = pts[j];
      CHECK(mu.mass({a, b, true, false}) == doctest::Approx(g.left(a) - g.left(b)).epsilon(1e-10));
    }
}

TEST_CASE("stieltjes integrals") {
  EnvelopeMeasure mu(envelope_power(WeightFunction::piecewise_power({{0, 1, 1, 0}, {1, kInf, 1, 1}}), 1));
  CHECK(stieltjes_value([](double) { return 1.0; }, mu, kAll) == doctest::Approx(1).epsilon(1e-10));
  EnvelopeMeasure step(envelope_power(WeightFunction::piecewise_power({{0, 1, 1, 0}, {1, kInf, 2, 0}}), 1));
  CHECK(stieltjes_value([](double t) { return t; }, step, kAll) == doctest::Approx(0.5));
  // f = (1/(t+1))^2 against d(-min(1, t^-2)): int_1^inf 2 t^-3 (t+1)^-2 dt
  EnvelopeMeasure mu2(envelope_power(WeightFunction::piecewise_power({{0, 1, 1, 0}, {1, kInf, 1, 2}}), 1));
  const double got = stieltjes_value([](double t) { return std::pow(t + 1, -2); }, mu2, kAll);
  // 1/(t^3 (t+1)^2) = 1/t^3 - 2/t^2 + 3/t - 3/(t+1) - 1/(t+1)^2; on (1, inf) this integrates to
  // 1/2 - 2 + 3 ln 2 - 1/2 = 3 ln 2 - 2
  CHECK(got == doctest::Approx(2 * (3 * std::log(2.0) - 2)).epsilon(1e-9));
  // splitting at a breakpoint
  auto f = [](double t) { return 1 / (1 + t * t); };
  const double whole = stieltjes_value(f, mu2, kAll);
  const double left = stieltjes_value(f, mu2, {0, 3, true, true});
  const double right = stieltjes_value(f, mu2, {3, kInf, false, false});
  CHECK(left + right == doctest::Approx(whole).epsilon(1e-9));
}

TEST_CASE("integration by parts battery") {
  NondecreasingFunction id{[](double t) { return t; }, [](double) { return 1.0; }, {}};
  CHECK(integration_by_parts_check(id, [](double t) { return t; }, [](double) { return 1.0; }, 0, 1) < 1e-8);
  NondecreasingFunction jump{[](double) { return 0.0; }, [](double) { return 0.0; }, {{0.5, 1.0}}};
  CHECK(integration_by_parts_check(jump, [](double t) { return t; }, [](double) { return 1.0; }, 0, 1) < 1e-10);
  NondecreasingFunction sq{[](double t) { return t * t; }, [](double t) { return 2 * t; }, {}};
  CHECK(integration_by_parts_check(sq, [](double t) { return std::exp(-t); }, [](double t) { return -std::exp(-t); },
                                   0, 2) < 1e-7);
}
