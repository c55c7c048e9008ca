#include <doctest.h>

#include <cmath>
#include <random>

#include "hardy/weights.hpp"

using namespace hardy;

namespace {

WeightFunction max1_sq() { return WeightFunction::piecewise_power({{0, 1, 1, 0}, {1, kInf, 1, 2}}); }

bool has_failure(const CheckReport& r, const std::string& prefix) {
  for (auto& f : r.failures())
    if (f.rfind(prefix, 0) == 0) return true;
  return false;
}

}  // namespace

TEST_CASE("density evaluation") {
  CHECK(WeightFunction::constant(1)(7) == 1);
  CHECK(WeightFunction::power(1, 2)(3) == doctest::Approx(9));
  auto tab = WeightFunction::tabulated({1, 2}, {2, 4}, Interp::Linear);
  CHECK(tab(1.5) == doctest::Approx(3));
  CHECK_THROWS_AS(WeightFunction::constant(1)(0), Error);
}

TEST_CASE("integrals") {
  CHECK(WeightFunction::constant(1).integral(1, 3) == doctest::Approx(2));
  auto t = WeightFunction::piecewise_power({{0, 1, 1, 1}, {1, kInf, 1, 0}});
  CHECK(t.integral(0, 1) == doctest::Approx(0.5));
  auto inv = WeightFunction::piecewise_power({{0, 1, 1, -1}, {1, kInf, 1, 0}});
  CHECK(std::isinf(inv.integral(0, 1)));
  // additivity
  auto w = max1_sq();
  CHECK(w.integral(0.3, 2) + w.integral(2, 5) == doctest::Approx(w.integral(0.3, 5)).epsilon(1e-12));
}

TEST_CASE("cumulative weights") {
  CHECK(CumulativeWeight(WeightFunction::constant(1))(3) == doctest::Approx(3));
  CHECK(CumulativeWeight(WeightFunction::power(2, 1))(2) == doctest::Approx(4));
  std::vector<double> t, y;
  for (int i = -80; i <= 30; ++i) {
    t.push_back(std::pow(10.0, i / 20.0));
    y.push_back(std::exp(-t.back()));
  }
  CumulativeWeight E(WeightFunction::tabulated(t, y, Interp::Linear));
  // trapezoid error of the linear table is about 2e-3
  CHECK(E(1e4) == doctest::Approx(1).epsilon(5e-3));
  // scaling is exact on closed-form pieces
  auto u = max1_sq();
  CumulativeWeight U(u), U3(u.scaled(3));
  for (double x : {0.1, 1.0, 7.0}) CHECK(U3(x) == doctest::Approx(3 * U(x)).epsilon(1e-14));
}

TEST_CASE("calligraphic U") {
  CumulativeWeight U;
  CHECK(calligraphic_u(U, 2, 2) == doctest::Approx(0.5));
  CHECK(calligraphic_u(U, 1, 3) == doctest::Approx(0.25));
  CHECK(calligraphic_u(U, 1e300, 1) == doctest::Approx(1));
}

TEST_CASE("calligraphic U properties") {
  CumulativeWeight U(max1_sq());
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> e(-6, 6);
  for (int i = 0; i < 200; ++i) {
    const double x = std::pow(10.0, e(rng)), t = std::pow(10.0, e(rng));
    const double k = calligraphic_u(U, x, t);
    CHECK(k > 0);
    CHECK(k <= 1);
    CHECK(k + calligraphic_u(U, t, x) == doctest::Approx(1).epsilon(1e-12));
    const double m = std::min(1.0, U(x) / U(t));
    CHECK(k <= m * (1 + 1e-12));
    CHECK(k >= m / 2 * (1 - 1e-12));
    CHECK(calligraphic_u(U, 2 * x, t) >= k);
    CHECK(calligraphic_u(U, x, 2 * t) <= k);
  }
}

TEST_CASE("reciprocal envelope") {
  auto v = max1_sq();
  CHECK(reciprocal_envelope(v, 2, kInf) == doctest::Approx(0.25));
  CHECK(reciprocal_envelope(v, 0.5, kInf) == doctest::Approx(1));
  CHECK(std::isinf(reciprocal_envelope(WeightFunction::power(1, 2), 0, 1)));
  // set monotonicity
  CHECK(reciprocal_envelope(v, 3, 10) <= reciprocal_envelope(v, 2, 10));
  CHECK(reciprocal_envelope(v, 0.5, 3) <= reciprocal_envelope(v, 0.5, 10) + 1e-15);
}

TEST_CASE("admissibility") {
  CHECK(check_admissible(WeightFunction::constant(1)).ok());
  std::vector<double> t, y;
  for (int i = -40; i <= 40; ++i) {
    t.push_back(std::pow(10.0, i / 10.0));
    y.push_back(std::exp(-t.back()));
  }
  CHECK_FALSE(check_admissible(WeightFunction::tabulated(t, y, Interp::LogLinear)).ok());
  CHECK_FALSE(check_admissible(WeightFunction::piecewise_power({{0, 1, 1, -2}, {1, kInf, 1, 0}})).ok());
}

TEST_CASE("non-degeneracy") {
  CumulativeWeight U;
  const double r = 2, b = 0.5;
  auto w = WeightFunction::piecewise_power({{0, 1, 1, r - 1}, {1, kInf, 1, b - 1}});
  CHECK(check_nondegenerate(w, U, r, max1_sq()).ok());
  // (1+t)^-2 has finite tail mass
  std::vector<double> t, y;
  for (int i = -90; i <= 90; ++i) {
    t.push_back(std::pow(10.0, i / 10.0));
    y.push_back(std::pow(1 + t.back(), -2));
  }
  auto deg = check_nondegenerate(WeightFunction::tabulated(t, y, Interp::LogLinear), U, 1, max1_sq());
  CHECK_FALSE(deg.ok());
  CHECK(has_failure(deg, "tail divergence"));
  auto vone = check_nondegenerate(w, U, r, WeightFunction::constant(1));
  CHECK(has_failure(vone, "v-bar limit"));
}
