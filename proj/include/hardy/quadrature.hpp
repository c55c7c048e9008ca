#pragma once

#include <functional>
#include <vector>

#include "hardy/extended.hpp"

namespace hardy::quad {

using Fn = std::function<double(double)>;

struct Options {
  double rel_tol = 1e-11;
  double abs_tol = 1e-300;
  int max_intervals = 4000;
  // Initial truncation of (0, inf); the tails are pushed further out until the
  // local power-law exponent settles, then extrapolated analytically.
  double window_lo = 1e-8;
  double window_hi = 1e8;
  double slope_tol = 1e-7;
  // A tail exponent within this margin of -1 counts as divergent.
  double divergence_margin = 1e-6;
};

struct Result {
  double value = 0;
  double error = 0;
  bool converged = true;
  bool divergent = false;
  long evaluations = 0;

  Result& operator+=(const Result& o);
};

// Global adaptive Gauss-Kronrod (7/15) on a finite interval; f must be finite.
Result kronrod(const Fn& f, double a, double b, const Options& opt = {});

// Integral of a nonnegative f over (a, b), 0 <= a < b <= inf.  Breakpoints
// inside (a, b) split the range; every piece is integrated in logarithmic
// variables so that power singularities at its ends are resolved, with power
// tails extrapolated and divergence reported through Result::divergent.
Result integrate(const Fn& f, double a, double b, const std::vector<double>& breakpoints = {},
                 const Options& opt = {});

// Value or throw when the adaptive scheme did not converge.
double integrate_value(const Fn& f, double a, double b, const std::vector<double>& breakpoints = {},
                       const Options& opt = {});

struct SupResult {
  double value = 0;
  double argmax = 0;
  bool at_lower = false;
  bool at_upper = false;
};

// Supremum of f over [lo, hi] by a log-spaced scan of n points followed by a
// golden-section refinement around the best interior sample.
SupResult sup_scan(const Fn& f, double lo, double hi, int n = 256);

// Golden-section maximization of f in log variables on [lo, hi].
SupResult golden_max(const Fn& f, double lo, double hi, int iterations = 80);

// Gauss-Legendre nodes and weights on [-1, 1].
void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights);

}  // namespace hardy::quad
