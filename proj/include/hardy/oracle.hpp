#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hardy/conditions.hpp"

namespace hardy {

// Test functions.
//   Atoms:         h = sum m_i delta_{z_i}                      (inequalities 3.1, 3.2 and the reduced forms)
//   MonotoneSteps: f = sum m_i chi_(0, z_i), nonincreasing        (5.1, 5.3)
//   Steps:         h = m_i on (z_i, z_{i+1}], z has one more entry (5.5, 5.7)
struct TestFunction {
  enum class Kind { Atoms, MonotoneSteps, Steps };
  Kind kind = Kind::Atoms;
  std::vector<double> z;
  std::vector<double> m;

  static TestFunction atoms(std::vector<double> z, std::vector<double> m);
  static TestFunction monotone(std::vector<double> z, std::vector<double> m);
  static TestFunction steps(std::vector<double> edges, std::vector<double> heights);
  void validate() const;
  bool is_zero() const;
};

struct OracleOptions {
  Window window;
  int atoms = 64;    // grid points at level 0; each further level doubles the cells
  int levels = 2;
  int restarts = 6;  // ascent starts per level
  std::uint64_t seed = 1;
  int max_iterations = 300;
};

struct OracleEstimate {
  std::string inequality;
  std::string method;  // "exact kernel", "single atom", "ascent", "dual", "reduced"
  double c_lo = 0;
  double lhs = 0, rhs = 0;  // for the stored maximizer
  TestFunction maximizer;
  std::vector<double> level_values;  // certified value after each grid level
  std::vector<int> level_points;
  int restarts = 0;
  bool stable = true;  // last grid doubling moved c_lo by less than 5%
  bool unbounded = false;
  bool window_edge = false;  // maximizer carries mass next to the window boundary
  std::vector<std::string> trace;
};

// Left and right sides of each inequality for a concrete test function.
double lhs_31(const InequalitySpec& spec, const TestFunction& h);
double lhs_32(const InequalitySpec& spec, const TestFunction& h);
double lhs_value(const InequalitySpec& spec, const TestFunction& h);
double rhs_value(const InequalitySpec& spec, const TestFunction& h);

struct Ratio {
  double lhs = 0, rhs = 0, ratio = 0;
};
Ratio test_ratio(const InequalitySpec& spec, const TestFunction& h);

// Exact best constants at (p, q) = (1, 1) for 3.1 and (1, inf) for 3.2.
struct KernelConstant {
  double value = 0;
  double argmax = 0;
};
double kernel_phi(const InequalitySpec& spec, double z);
KernelConstant exact_kernel_constant(const InequalitySpec& spec, const Window& window = {});

OracleEstimate maximize_ratio(const InequalitySpec& spec, const OracleOptions& opt = {});

// Reduction of the monotone-cone inequalities to the iterated form: inner
// power 1/p, outer exponent q/p (or the sup form with weight w^p) and
// right-hand side int h V.  Best constants satisfy C = c^p.
struct ReducedMonotone {
  WeightFunction u, v, w;
  double P = 1, Q = 1;  // Q = inf for the sup form
  double p = 1;         // c = C^{1/p}
  bool sup = false;
};
ReducedMonotone reduce_monotone(const InequalitySpec& spec);
TestFunction monotone_to_atoms(const TestFunction& f, double p);
TestFunction atoms_to_monotone(const TestFunction& h, double p);
double reduced_lhs(const ReducedMonotone& r, const TestFunction& h);
double reduced_rhs(const ReducedMonotone& r, const TestFunction& h);
// Best constant C of the reduced form by ascent over atoms.
OracleEstimate maximize_reduced(const ReducedMonotone& r, const OracleOptions& opt = {});

// Stieltjes reduction diagnostics at a point x:
//   fubini_lhs = int_0^x (int_t^inf h) u dt
//   fubini_rhs = int min(U(x), U(s)) h(s) ds
//   kernel     = U(x) S(hU)(x), with fubini_rhs / 2 <= kernel <= fubini_rhs
struct FubiniCheck {
  double fubini_lhs = 0, fubini_rhs = 0, kernel = 0;
  double residual = 0;      // |lhs - rhs| / max(|rhs|, tiny)
  double kernel_ratio = 1;  // kernel / fubini_rhs
};
FubiniCheck fubini_check(const WeightFunction& u, const TestFunction& h, double x);

struct ReducedStieltjes {
  WeightFunction u, v, w;
  double p = 1, q = 1;
  // the reduced inequality reads ||H_u(int_t^inf h)||_{q,w} <= c ||h U||_{p,v}
};
ReducedStieltjes reduce_stieltjes(const InequalitySpec& spec);

OracleEstimate estimate_best_constant(const InequalitySpec& spec, const OracleOptions& opt = {});

}  // namespace hardy
