#pragma once

#include <functional>
#include <string>
#include <vector>

#include "hardy/quadrature.hpp"
#include "hardy/weights.hpp"

namespace hardy {

// A nonincreasing function g on (0, inf), smooth between breakpoints.  The
// stored representative is right-continuous; left limits are kept explicitly.
class MonotoneEnvelope {
 public:
  struct Segment {
    enum class Kind { Constant, Power, AffinePower, Custom };
    double from = 0, to = kInf;  // g is given by this segment on [from, to)
    Kind kind = Kind::Constant;
    double A = 0, B = 0, gamma = 0;  // A; A t^gamma; (A + B t)^gamma
    std::function<double(double)> value, slope;

    double operator()(double t) const;
    double derivative(double t) const;
  };
  struct Jump {
    double t, left, right;
  };

  MonotoneEnvelope();
  MonotoneEnvelope(std::vector<Segment> segments, std::string tag);

  double operator()(double t) const;
  double left(double t) const;
  double right(double t) const { return (*this)(t); }
  double at_zero() const;
  double at_infinity() const;

  const std::vector<Segment>& segments() const { return segs_; }
  const std::vector<Jump>& jumps() const { return jumps_; }
  std::vector<double> breakpoints() const;
  const std::string& tag() const { return tag_; }

 private:
  std::size_t index(double t) const;
  std::vector<Segment> segs_;
  std::vector<Jump> jumps_;
  std::string tag_;
};

// t -> vbar(t, inf)^exponent in closed form.
MonotoneEnvelope envelope_power(const WeightFunction& v, double exponent);

struct Interval {
  double lo = 0, hi = kInf;
  bool lo_closed = true, hi_closed = false;
};

// mu = d(-g(t-)): atoms at the jumps of g plus the density -g'.
class EnvelopeMeasure {
 public:
  struct Atom {
    double t, mass;
  };

  EnvelopeMeasure() = default;
  explicit EnvelopeMeasure(MonotoneEnvelope g);

  const std::vector<Atom>& atoms() const { return atoms_; }
  double density(double t) const;
  double mass(const Interval& I) const;
  // g(inf): the part of the total variation that sits at infinity and is not
  // charged by integrals over [0, inf).
  double mass_at_infinity() const { return g_.at_infinity(); }
  const MonotoneEnvelope& envelope() const { return g_; }
  bool is_zero() const;

 private:
  MonotoneEnvelope g_;
  std::vector<Atom> atoms_;
};

inline EnvelopeMeasure stieltjes_measure(const MonotoneEnvelope& g) { return EnvelopeMeasure(g); }

// int_I f dmu for f >= 0.  Points where f changes scale (e.g. the x of a
// kernel U(t,x)) should be passed as extra breakpoints.
quad::Result stieltjes_integral(const quad::Fn& f, const EnvelopeMeasure& mu, const Interval& I,
                                const quad::Options& opt = {}, const std::vector<double>& extra = {});
double stieltjes_value(const quad::Fn& f, const EnvelopeMeasure& mu, const Interval& I,
                       const quad::Options& opt = {}, const std::vector<double>& extra = {});

// f(t) = smooth(t) + sum of the jumps at points <= t (right-continuous).
struct NondecreasingFunction {
  std::function<double(double)> smooth;
  std::function<double(double)> slope;
  std::vector<std::pair<double, double>> jumps;  // (location, size > 0)

  double operator()(double t) const;
  double left(double t) const;
};

// |LHS - RHS| of the Lebesgue-Stieltjes integration by parts formula
//   int_[a,b) f dg = f(b-)g(b) - f(a-)g(a) + int_[a,b) g d(-f(t-))
// for nondecreasing f and continuously differentiable g.
double integration_by_parts_check(const NondecreasingFunction& f, const std::function<double(double)>& g,
                                  const std::function<double(double)>& dg, double a, double b);

}  // namespace hardy
