#pragma once

#include "hardy/extended.hpp"

namespace hardy {

// The pair (p, q) with the derived exponents p', p*, q*, rho.
// p and q live in (0, +inf]; the right-hand side is always L^1 (theta = 1).
struct Exponents {
  double p = 1.0;
  double q = 1.0;

  Exponents() = default;
  Exponents(double p_, double q_) : p(p_), q(q_) {
    if (!(p_ > 0) || !(q_ > 0)) fail(ErrorKind::InvalidArgument, "exponents must be positive");
  }

  static constexpr double theta = 1.0;

  // 1/p + 1/p' = 1, defined for p >= 1.
  static double conjugate(double p) {
    if (p < 1) fail(ErrorKind::Domain, "conjugate exponent needs p >= 1");
    if (p == 1) return kInf;
    if (std::isinf(p)) return 1.0;
    return p / (p - 1);
  }

  // p* = p/(1-p) for p < 1, +inf at p = 1.
  static double star(double p) {
    if (p > 1) fail(ErrorKind::Domain, "star exponent needs p <= 1");
    if (p == 1) return kInf;
    return p / (1 - p);
  }

  double p_prime() const { return conjugate(p); }
  double q_prime() const { return conjugate(q); }
  double p_star() const { return star(p); }
  double q_star() const { return star(q); }

  // 1/rho = (1/q - 1)_+
  double rho() const { return q >= 1 ? kInf : q / (1 - q); }

  bool q_infinite() const { return std::isinf(q); }
  bool p_infinite() const { return std::isinf(p); }
};

// l^rho (quasi)norm of a nonnegative sequence; rho = inf gives the sup-norm.
template <class Range>
double lrho_norm(const Range& xs, double rho) {
  if (std::isinf(rho)) {
    double m = 0;
    for (double x : xs) m = x > m ? x : m;
    return m;
  }
  double s = 0;
  for (double x : xs) {
    if (std::isinf(x)) return kInf;
    s += xpow(x, rho);
  }
  return xpow(s, 1 / rho);
}

}  // namespace hardy
