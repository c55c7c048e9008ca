#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace hardy {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Library errors carry a category so the C layer can map them to codes.
enum class ErrorKind { InvalidArgument, Domain, Numerical, Degenerate, Internal };

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

// Extended arithmetic on [0, +inf]: 0 * inf = 0, 1 / inf = 0, 0 / 0 = 0.
inline double xmul(double a, double b) {
  if (a == 0.0 || b == 0.0) return 0.0;
  return a * b;
}

inline double xdiv(double a, double b) {
  if (a == 0.0) return 0.0;
  if (b == 0.0) return kInf;
  if (std::isinf(b)) return std::isinf(a) ? kInf : 0.0;
  return a / b;
}

// x^e for x in [0, +inf] and any real e, with 0^e = inf for e < 0 and x^0 = 1.
inline double xpow(double x, double e) {
  if (e == 0.0) return 1.0;
  if (x == 0.0) return e > 0 ? 0.0 : kInf;
  if (std::isinf(x)) return e > 0 ? kInf : 0.0;
  if (e == 1.0) return x;
  return std::pow(x, e);
}

inline bool is_finite_positive(double x) { return std::isfinite(x) && x > 0; }

}  // namespace hardy
