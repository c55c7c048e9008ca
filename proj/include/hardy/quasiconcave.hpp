#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "hardy/quadrature.hpp"
#include "hardy/weights.hpp"

namespace hardy {

struct Window {
  double lo = 1e-8;
  double hi = 1e8;
  int per_decade = 16;
};

// Running suprema of a function that is smooth between known breakpoints:
// sup over (0, t) and over (t, inf), with one-sided limits at t included.
// The function is sampled on a log grid and every interior local maximum is
// refined, so between two stored points it is monotone.
class RunningSup {
 public:
  RunningSup() = default;
  RunningSup(quad::Fn left, quad::Fn right, std::vector<double> breakpoints, double lo, double hi,
             int per_decade = 24);

  double below(double t) const;
  double above(double t) const;
  double global() const { return global_; }

 private:
  struct Entry {
    double x;
    int type;  // 0: left limit at x, 1: value at x, 2: right limit at x
    double value;
  };
  quad::Fn left_, right_;
  std::vector<Entry> entries_;
  std::vector<double> prefix_, suffix_;
  double global_ = 0;
};

// A U^r-quasiconcave function with a cached log grid.
class FundamentalFunction {
 public:
  enum class Source { Measure, Majorant, Analytic };

  struct Flags {
    bool finite = true;
    bool zero_at_origin = true;         // phi(0+) = 0
    bool infinite_at_infinity = true;   // phi(inf) = inf
    bool ratio_infinite_at_origin = true;  // phi/U^r (0+) = inf
    bool ratio_zero_at_infinity = true;    // phi/U^r (inf) = 0
    bool all() const;
    std::vector<std::string> failures() const;
  };

  FundamentalFunction(Source source, quad::Fn phi, CumulativeWeight U, double r, Window window = {});

  double operator()(double x) const;
  double ratio(double x) const;  // phi(x) / U(x)^r

  Source source() const;
  double r() const;
  const CumulativeWeight& U() const;
  const Window& window() const;
  const std::vector<double>& grid() const;
  const std::vector<double>& raw_values() const;
  const std::vector<double>& values() const;        // running max of phi
  const std::vector<double>& ratio_values() const;  // running min of phi/U^r
  double correction() const;  // largest relative monotone correction
  const Flags& flags() const;

 private:
  struct Impl;
  std::shared_ptr<const Impl> impl_;
};

// phi(x) = int U(x)/(U(s)+U(x))^r w(s) ds.
FundamentalFunction fundamental_function(const WeightFunction& w, const CumulativeWeight& U, double r,
                                         Window window = {});
double fundamental_value(const WeightFunction& w, const CumulativeWeight& U, double r, double x);

FundamentalFunction analytic_function(quad::Fn phi, const CumulativeWeight& U, double r, Window window = {});

struct SplitForm {
  double split = 0;  // int_0^x w + U(x)^r int_x^inf U^-r w
  double lower = 0;  // split / 2^r <= phi(x)
  double upper = 0;  // phi(x) <= split
};
SplitForm split_form_bounds(const WeightFunction& w, const CumulativeWeight& U, double r, double x);

// Pointwise weight together with its one-sided limits.
struct PointwiseWeight {
  quad::Fn value, left, right;
  std::vector<double> breakpoints;

  static PointwiseWeight from(const WeightFunction& w);
  static PointwiseWeight from(quad::Fn f, std::vector<double> breakpoints = {});
};

// Least U^{1/p}-quasiconcave majorant of w.
class MajorantEvaluator {
 public:
  MajorantEvaluator(PointwiseWeight w, CumulativeWeight U, double p, Window window = {});
  MajorantEvaluator(const MajorantEvaluator&) = delete;
  MajorantEvaluator& operator=(const MajorantEvaluator&) = delete;

  double min_form(double t) const;   // sup_tau w(tau) min(1, (U(t)/U(tau))^{1/p})
  double definition(double t) const;  // sup_{s<t} U(s)^{1/p} sup_{tau>s} w/U^{1/p}
  double dual_form(double t) const;  // U(t)^{1/p} sup_{s>t} U(s)^{-1/p} sup_{tau<s} w
  double kernel_form(double t) const;  // sup_s w(s) (U(t)/(U(s)+U(t)))^{1/p}

 private:
  PointwiseWeight w_;
  CumulativeWeight U_;
  double p_;
  Window window_;
  std::shared_ptr<RunningSup> wsup_, hsup_, gsup_, ksup_;
};

FundamentalFunction least_majorant(const WeightFunction& w, const CumulativeWeight& U, double p, Window window = {});
FundamentalFunction least_majorant(const PointwiseWeight& w, const CumulativeWeight& U, double p, Window window = {});

enum class Label { Z1, Z2 };
const char* label_name(Label l);

struct DiscretizingSequence {
  double a = 2;
  int k_min = 0;
  std::vector<double> knots;   // x_{k_min}, x_{k_min+1}, ...
  std::vector<Label> labels;   // label of [x_k, x_{k+1}]
  double min_u_ratio = 0;      // min U^r(x_{k+1}) / U^r(x_k)
  double min_phi_ratio = 0;
  double max_ratio_ratio = 0;  // max (phi/U^r)(x_{k+1}) / (phi/U^r)(x_k)
  double max_cover = 0;        // largest covering constant over all intervals

  int k_max() const { return k_min + static_cast<int>(knots.size()) - 1; }
  double x(int k) const { return knots.at(static_cast<std::size_t>(k - k_min)); }
};

DiscretizingSequence build_discretizing_sequence(const FundamentalFunction& phi, double a = 2);

struct SequenceReport {
  CheckReport report;
  double min_u_ratio = 0, min_phi_ratio = 0, max_ratio_ratio = 0;
  double max_cover_z1 = 0, max_cover_z2 = 0;
};
SequenceReport verify_sequence(const DiscretizingSequence& seq, const FundamentalFunction& phi,
                               int samples_per_interval = 64);

struct SideRatio {
  double continuous = 0, discrete = 0, ratio = 1;
};

// (int_{x_first}^{x_last} (f/U)^q w)^{1/q} against (sum (f(x_k)/U(x_k))^q phi(x_k))^{1/q}
// for phi the fundamental function of w dt with respect to U^q.
SideRatio norm_discretization_sides(const quad::Fn& f, const WeightFunction& w, const FundamentalFunction& phi, double q,
                        const DiscretizingSequence& seq);
// sup phi^{1/q} / g^{1/p} over the knot span against the sup over knots.
SideRatio sup_discretization_sides(const FundamentalFunction& phi, const quad::Fn& g, double p, double q,
                        const DiscretizingSequence& seq);
// int phi^{r/q-1} sigma^{-r/p} w against sum phi(x_k)^{r/q} sigma(x_k)^{-r/p}.
SideRatio power_discretization_sides(const FundamentalFunction& phi, const WeightFunction& w, const quad::Fn& sigma, double p,
                          double q, double r, const DiscretizingSequence& seq);

// ||tau_k sum_{m<=k} a_m||_q / ||tau_k a_k||_q with tau_k = sigma^k (or the
// sup variant), on the finite index range of a.
double geometric_hardy_ratio(const std::vector<double>& a, double sigma, double q, bool sup_form);

}  // namespace hardy
