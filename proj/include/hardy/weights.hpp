#pragma once

#include <string>
#include <vector>

#include "hardy/extended.hpp"

namespace hardy {

enum class Interp { Linear, LogLinear };

// Density c * t^alpha on (from, to]; to = +inf for the last piece.
struct PowerPiece {
  double from = 0;
  double to = kInf;
  double c = 1;
  double alpha = 0;
};

// A nonnegative density on (0, inf).  Internally every weight is a list of
// right-closed segments that are either pure powers or affine, so that all
// primitives are available in closed form.  Tabulated data is converted at
// construction: "linear" interpolates (t, y) linearly, "loglinear" linearly in
// (log t, log y); outside the table the end segments continue as power laws.
class WeightFunction {
 public:
  enum class Kind { PiecewisePower, Tabulated };

  struct Segment {
    double from = 0, to = kInf;
    bool affine = false;
    double c = 0, alpha = 0;  // c * t^alpha
    double a = 0, b = 0;      // a + b * t

    double density(double t) const;
    double integral(double x0, double x1) const;
  };

  WeightFunction();  // the zero weight
  static WeightFunction piecewise_power(std::vector<PowerPiece> pieces);
  static WeightFunction power(double c, double alpha);
  static WeightFunction constant(double c) { return power(c, 0); }
  static WeightFunction tabulated(std::vector<double> t, std::vector<double> y, Interp interp);

  Kind kind() const { return kind_; }
  bool closed_form() const { return kind_ == Kind::PiecewisePower; }

  double operator()(double t) const;
  double left(double t) const;   // limit from the left
  double right(double t) const;  // limit from the right
  double integral(double a, double b) const;

  std::vector<double> breakpoints() const;
  const std::vector<Segment>& segments() const { return segs_; }
  std::size_t segment_index(double t) const;  // segment containing t (right-closed)
  bool is_zero() const;
  bool integrable_at_zero() const;

  // lambda * w
  WeightFunction scaled(double lambda) const;
  // Push-forward of w(t) dt under t -> k t, i.e. the density w(t/k)/k.
  WeightFunction dilated(double k) const;

  // Source description (for serialization).
  const std::vector<PowerPiece>& pieces() const { return pieces_; }
  const std::vector<double>& table_t() const { return tab_t_; }
  const std::vector<double>& table_y() const { return tab_y_; }
  Interp interp() const { return interp_; }

 private:
  Kind kind_ = Kind::PiecewisePower;
  std::vector<Segment> segs_;
  std::vector<PowerPiece> pieces_;
  std::vector<double> tab_t_, tab_y_;
  Interp interp_ = Interp::Linear;
};

// U(t) = int_0^t u.
class CumulativeWeight {
 public:
  CumulativeWeight() : CumulativeWeight(WeightFunction::constant(1)) {}
  explicit CumulativeWeight(WeightFunction u);

  double operator()(double t) const;
  double total() const { return total_; }
  const WeightFunction& source() const { return u_; }

 private:
  WeightFunction u_;
  std::vector<double> prefix_;
  double total_ = 0;
};

inline CumulativeWeight cumulative(const WeightFunction& u) { return CumulativeWeight(u); }

// U(x) / (U(t) + U(x)).
double calligraphic_u(const CumulativeWeight& U, double x, double t);
inline double calligraphic_u_values(double Ux, double Ut) {
  if (std::isinf(Ux)) return std::isinf(Ut) ? 0.5 : 1.0;
  return xdiv(Ux, Ut + Ux);
}

// Limit of 1/density at t within one segment (t may be 0 or inf).
double reciprocal_at(const WeightFunction::Segment& s, double t);

// ess sup of 1/v over (a, b).
double reciprocal_envelope(const WeightFunction& v, double a, double b);

// t -> vbar(t, inf), right-continuous, with its left limits.
class TailEnvelope {
 public:
  TailEnvelope() = default;
  explicit TailEnvelope(const WeightFunction& v);

  double operator()(double t) const;
  double left(double t) const;
  double limit() const { return limit_; }
  const WeightFunction& weight() const { return v_; }

 private:
  WeightFunction v_;
  std::vector<double> suffix_;  // sup of 1/v over segments i.. end
  double limit_ = 0;
};

struct Clause {
  std::string name;
  bool holds = true;
  bool definite = true;
  std::string detail;
};

struct CheckReport {
  std::vector<Clause> clauses;
  bool ok() const;
  std::vector<std::string> failures() const;
};

CheckReport check_admissible(const WeightFunction& u);
CheckReport check_admissible(const CumulativeWeight& U);
CheckReport check_nondegenerate(const WeightFunction& w, const CumulativeWeight& U, double r,
                                const WeightFunction& v);

}  // namespace hardy
