#include "hardy/weights.hpp"

#include <algorithm>
#include <cmath>

#include "hardy/quadrature.hpp"

namespace hardy {

namespace {

double power_integral(double c, double alpha, double x0, double x1) {
  if (c == 0 || !(x1 > x0)) return 0;
  const double be = alpha + 1;
  if (x0 == 0) {
    if (be <= 0 || std::isinf(x1)) return kInf;
    return c * std::pow(x1, be) / be;
  }
  if (std::isinf(x1)) {
    if (be >= 0) return kInf;
    return c * std::pow(x0, be) / (-be);
  }
  const double L = std::log(x1 / x0);
  if (be == 0) return c * L;
  return c * std::pow(x0, be) * std::expm1(be * L) / be;
}

}  // namespace

double reciprocal_at(const WeightFunction::Segment& s, double t) {
  if (s.affine) {
    if (std::isinf(t)) return s.b > 0 ? 0.0 : (s.b == 0 && s.a > 0 ? 1 / s.a : kInf);
    double y = s.a + s.b * t;
    return y > 0 ? 1 / y : kInf;
  }
  if (s.c == 0) return kInf;
  if (t == 0) return s.alpha > 0 ? kInf : (s.alpha < 0 ? 0.0 : 1 / s.c);
  if (std::isinf(t)) return s.alpha < 0 ? kInf : (s.alpha > 0 ? 0.0 : 1 / s.c);
  return 1 / (s.c * std::pow(t, s.alpha));
}

namespace {

WeightFunction::Segment power_seg(double from, double to, double c, double alpha) {
  WeightFunction::Segment s;
  s.from = from;
  s.to = to;
  s.c = c;
  s.alpha = alpha;
  return s;
}

WeightFunction::Segment affine_seg(double from, double to, double a, double b) {
  WeightFunction::Segment s;
  s.from = from;
  s.to = to;
  s.affine = true;
  s.a = a;
  s.b = b;
  return s;
}

std::string idx(const char* field, std::size_t i, const char* sub) {
  return std::string(field) + "[" + std::to_string(i) + "]." + sub;
}

}  // namespace

double WeightFunction::Segment::density(double t) const {
  if (affine) return std::max(0.0, a + b * t);
  if (c == 0) return 0;
  return c * std::pow(t, alpha);
}

double WeightFunction::Segment::integral(double x0, double x1) const {
  if (!(x1 > x0)) return 0;
  if (!affine) return power_integral(c, alpha, x0, x1);
  if (std::isinf(x1)) return (a == 0 && b == 0) ? 0.0 : kInf;
  return a * (x1 - x0) + 0.5 * b * (x1 - x0) * (x1 + x0);
}

WeightFunction::WeightFunction() {
  segs_.push_back(power_seg(0, kInf, 0, 0));
  pieces_.push_back({0, kInf, 0, 0});
}

WeightFunction WeightFunction::piecewise_power(std::vector<PowerPiece> pieces) {
  if (pieces.empty()) fail(ErrorKind::InvalidArgument, "pieces: at least one piece required");
  WeightFunction w;
  w.segs_.clear();
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    const auto& p = pieces[i];
    double expect_from = i == 0 ? 0.0 : pieces[i - 1].to;
    if (!(p.from == expect_from))
      fail(ErrorKind::InvalidArgument, idx("pieces", i, "from") + ": pieces must partition (0,inf) without gaps");
    if (!(p.to > p.from)) fail(ErrorKind::InvalidArgument, idx("pieces", i, "to") + ": must exceed from");
    if (std::isinf(p.to) && i + 1 != pieces.size())
      fail(ErrorKind::InvalidArgument, idx("pieces", i, "to") + ": only the last piece may extend to infinity");
    if (!(p.c >= 0) || std::isinf(p.c)) fail(ErrorKind::InvalidArgument, idx("pieces", i, "c") + ": must be finite and >= 0");
    if (!std::isfinite(p.alpha)) fail(ErrorKind::InvalidArgument, idx("pieces", i, "alpha") + ": must be finite");
    w.segs_.push_back(power_seg(p.from, p.to, p.c, p.alpha));
  }
  if (!std::isinf(pieces.back().to))
    fail(ErrorKind::InvalidArgument, idx("pieces", pieces.size() - 1, "to") + ": last piece must extend to infinity (null)");
  w.pieces_ = std::move(pieces);
  w.kind_ = Kind::PiecewisePower;
  return w;
}

WeightFunction WeightFunction::power(double c, double alpha) { return piecewise_power({{0, kInf, c, alpha}}); }

WeightFunction WeightFunction::tabulated(std::vector<double> t, std::vector<double> y, Interp interp) {
  if (t.size() != y.size()) fail(ErrorKind::InvalidArgument, "y: length must match t");
  if (t.size() < 2) fail(ErrorKind::InvalidArgument, "t: at least two samples required");
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (!(t[i] > 0) || std::isinf(t[i])) fail(ErrorKind::InvalidArgument, "t[" + std::to_string(i) + "]: must be finite and > 0");
    if (i > 0 && !(t[i] > t[i - 1])) fail(ErrorKind::InvalidArgument, "t[" + std::to_string(i) + "]: abscissae must increase strictly");
    if (!(y[i] >= 0) || std::isinf(y[i])) fail(ErrorKind::InvalidArgument, "y[" + std::to_string(i) + "]: must be finite and >= 0");
  }
  WeightFunction w;
  w.segs_.clear();
  const std::size_t n = t.size();
  auto tail_power = [&](std::size_t i, std::size_t j, double from, double to) {
    if (y[i] > 0 && y[j] > 0) {
      double al = std::log(y[j] / y[i]) / std::log(t[j] / t[i]);
      return power_seg(from, to, y[i] / std::pow(t[i], al), al);
    }
    return power_seg(from, to, 0, 0);
  };
  w.segs_.push_back(tail_power(0, 1, 0, t[0]));
  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (interp == Interp::LogLinear && y[i] > 0 && y[i + 1] > 0) {
      w.segs_.push_back(tail_power(i, i + 1, t[i], t[i + 1]));
    } else {
      double b = (y[i + 1] - y[i]) / (t[i + 1] - t[i]);
      w.segs_.push_back(affine_seg(t[i], t[i + 1], y[i] - b * t[i], b));
    }
  }
  w.segs_.push_back(tail_power(n - 2, n - 1, t[n - 1], kInf));
  w.kind_ = Kind::Tabulated;
  w.tab_t_ = std::move(t);
  w.tab_y_ = std::move(y);
  w.interp_ = interp;
  w.pieces_.clear();
  return w;
}

std::size_t WeightFunction::segment_index(double t) const {
  auto it = std::lower_bound(segs_.begin(), segs_.end(), t, [](const Segment& s, double x) { return s.to < x; });
  if (it == segs_.end()) return segs_.size() - 1;
  return static_cast<std::size_t>(it - segs_.begin());
}

double WeightFunction::operator()(double t) const {
  if (!(t > 0)) fail(ErrorKind::Domain, "density evaluated at t <= 0");
  return segs_[segment_index(t)].density(t);
}

double WeightFunction::left(double t) const { return segs_[segment_index(t)].density(t); }

double WeightFunction::right(double t) const {
  auto it = std::upper_bound(segs_.begin(), segs_.end(), t, [](double x, const Segment& s) { return x < s.to; });
  if (it == segs_.end()) --it;
  return it->density(t);
}

double WeightFunction::integral(double a, double b) const {
  if (!(a >= 0)) fail(ErrorKind::Domain, "integral lower limit must be >= 0");
  if (!(b > a)) return 0;
  double s = 0;
  for (const auto& seg : segs_) {
    double lo = std::max(a, seg.from), hi = std::min(b, seg.to);
    if (hi > lo) s += seg.integral(lo, hi);
    if (std::isinf(s)) return kInf;
  }
  return s;
}

std::vector<double> WeightFunction::breakpoints() const {
  std::vector<double> out;
  for (std::size_t i = 0; i + 1 < segs_.size(); ++i) out.push_back(segs_[i].to);
  return out;
}

bool WeightFunction::is_zero() const {
  for (const auto& s : segs_) {
    if (s.affine ? (s.a != 0 || s.b != 0) : s.c != 0) return false;
  }
  return true;
}

bool WeightFunction::integrable_at_zero() const {
  const auto& s = segs_.front();
  return std::isfinite(s.integral(0, std::min(s.to, 1.0)));
}

WeightFunction WeightFunction::scaled(double lambda) const {
  if (!(lambda >= 0) || std::isinf(lambda)) fail(ErrorKind::InvalidArgument, "scale factor must be finite and >= 0");
  if (kind_ == Kind::Tabulated) {
    auto y = tab_y_;
    for (double& v : y) v *= lambda;
    return tabulated(tab_t_, y, interp_);
  }
  auto p = pieces_;
  for (auto& x : p) x.c *= lambda;
  return piecewise_power(p);
}

WeightFunction WeightFunction::dilated(double k) const {
  if (!(k > 0) || std::isinf(k)) fail(ErrorKind::InvalidArgument, "dilation factor must be finite and > 0");
  if (kind_ == Kind::Tabulated) {
    auto t = tab_t_;
    auto y = tab_y_;
    for (double& v : t) v *= k;
    for (double& v : y) v /= k;
    return tabulated(t, y, interp_);
  }
  auto p = pieces_;
  for (auto& x : p) {
    x.from *= k;
    x.to *= k;
    x.c *= std::pow(k, -x.alpha - 1);
  }
  return piecewise_power(p);
}

CumulativeWeight::CumulativeWeight(WeightFunction u) : u_(std::move(u)) {
  const auto& segs = u_.segments();
  if (!u_.integrable_at_zero()) fail(ErrorKind::Domain, "weight is not integrable near 0 (U(0+) = inf)");
  prefix_.resize(segs.size() + 1);
  prefix_[0] = 0;
  for (std::size_t i = 0; i < segs.size(); ++i) prefix_[i + 1] = prefix_[i] + segs[i].integral(segs[i].from, segs[i].to);
  total_ = prefix_.back();
}

double CumulativeWeight::operator()(double t) const {
  if (!(t > 0)) return 0;
  if (std::isinf(t)) return total_;
  std::size_t i = u_.segment_index(t);
  const auto& s = u_.segments()[i];
  return prefix_[i] + s.integral(s.from, t);
}

double calligraphic_u(const CumulativeWeight& U, double x, double t) {
  if (!(x > 0) || !(t > 0)) fail(ErrorKind::Domain, "kernel arguments must be positive");
  return calligraphic_u_values(U(x), U(t));
}

double reciprocal_envelope(const WeightFunction& v, double a, double b) {
  if (!(a >= 0) || !(b > a)) fail(ErrorKind::Domain, "reciprocal envelope needs 0 <= a < b");
  double m = 0;
  for (const auto& s : v.segments()) {
    double lo = std::max(a, s.from), hi = std::min(b, s.to);
    if (!(hi > lo)) continue;
    m = std::max({m, reciprocal_at(s, lo), reciprocal_at(s, hi)});
    if (std::isinf(m)) return kInf;
  }
  return m;
}

TailEnvelope::TailEnvelope(const WeightFunction& v) : v_(v) {
  const auto& segs = v_.segments();
  suffix_.assign(segs.size() + 1, 0.0);
  for (std::size_t i = segs.size(); i-- > 0;)
    suffix_[i] = std::max({suffix_[i + 1], reciprocal_at(segs[i], segs[i].from), reciprocal_at(segs[i], segs[i].to)});
  limit_ = reciprocal_at(segs.back(), kInf);
}

double TailEnvelope::operator()(double t) const {
  const auto& segs = v_.segments();
  auto it = std::upper_bound(segs.begin(), segs.end(), t,
                             [](double x, const WeightFunction::Segment& s) { return x < s.to; });
  if (it == segs.end()) return limit_;
  std::size_t i = static_cast<std::size_t>(it - segs.begin());
  return std::max({reciprocal_at(segs[i], t), reciprocal_at(segs[i], segs[i].to), suffix_[i + 1]});
}

double TailEnvelope::left(double t) const {
  const auto& segs = v_.segments();
  std::size_t i = v_.segment_index(t);
  return std::max((*this)(t), reciprocal_at(segs[i], t));
}

bool CheckReport::ok() const {
  return std::all_of(clauses.begin(), clauses.end(), [](const Clause& c) { return c.holds; });
}

std::vector<std::string> CheckReport::failures() const {
  std::vector<std::string> out;
  for (const auto& c : clauses)
    if (!c.holds) out.push_back(c.name + (c.detail.empty() ? "" : ": " + c.detail));
  return out;
}

CheckReport check_admissible(const WeightFunction& u) {
  CheckReport r;
  const bool def = u.closed_form();
  bool zero_ok = u.integrable_at_zero();
  r.clauses.push_back({"U(0+)=0", zero_ok, true, zero_ok ? "" : "u is not integrable near 0"});
  bool strict = true;
  for (const auto& s : u.segments())
    if (s.affine ? (s.a == 0 && s.b == 0) : s.c == 0) strict = false;
  r.clauses.push_back({"U strictly increasing", strict, def, strict ? "" : "u vanishes on an interval"});
  bool unbounded = std::isinf(u.integral(1, kInf));
  r.clauses.push_back({"U(inf)=inf", unbounded, def, unbounded ? "" : "u has finite total mass"});
  return r;
}

CheckReport check_admissible(const CumulativeWeight& U) { return check_admissible(U.source()); }

CheckReport check_nondegenerate(const WeightFunction& w, const CumulativeWeight& U, double r,
                                const WeightFunction& v) {
  CheckReport rep;
  const bool def = w.closed_form() && U.source().closed_form();
  auto bps = w.breakpoints();
  for (double b : U.source().breakpoints()) bps.push_back(b);
  const double U1r = xpow(U(1.0), r);
  auto k = [&](double s) { return xdiv(w(s), xpow(U(s), r) + U1r); };
  quad::Result ri = quad::integrate(k, 0, kInf, bps);
  bool c1 = !ri.divergent && ri.converged;
  rep.clauses.push_back({"kernel integrable", c1, def, c1 ? "" : "int w/(U^r+U(1)^r) diverges"});
  auto k0 = [&](double s) { return xdiv(w(s), xpow(U(s), r)); };
  quad::Result r0 = quad::integrate(k0, 0, 1, bps);
  bool c2 = r0.divergent;
  rep.clauses.push_back({"origin divergence", c2, def, c2 ? "" : "int_0^1 w/U^r is finite"});
  bool c3 = std::isinf(w.integral(1, kInf));
  rep.clauses.push_back({"tail divergence", c3, w.closed_form(), c3 ? "" : "int_1^inf w is finite"});
  TailEnvelope env(v);
  bool c4 = env.limit() == 0;
  rep.clauses.push_back({"v-bar limit", c4, v.closed_form(), c4 ? "" : "v-bar limit not zero"});
  return rep;
}

}  // namespace hardy
