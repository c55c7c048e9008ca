#include "hardy/measures.hpp"

#include <algorithm>
#include <cmath>

namespace hardy {

namespace {

bool same_value(double a, double b) {
  if (std::isinf(a) || std::isinf(b)) return a == b;
  return std::fabs(a - b) <= 1e-14 * std::max(std::fabs(a), std::fabs(b));
}

MonotoneEnvelope::Segment constant_seg(double from, double to, double value) {
  MonotoneEnvelope::Segment s;
  s.from = from;
  s.to = to;
  s.kind = MonotoneEnvelope::Segment::Kind::Constant;
  s.A = value;
  return s;
}

}  // namespace

double MonotoneEnvelope::Segment::operator()(double t) const {
  switch (kind) {
    case Kind::Constant:
      return A;
    case Kind::Power:
      if (A == 0) return 0;
      if (t == 0) return gamma < 0 ? kInf : (gamma > 0 ? 0.0 : A);
      if (std::isinf(t)) return gamma < 0 ? 0.0 : (gamma > 0 ? kInf : A);
      return A * std::pow(t, gamma);
    case Kind::AffinePower:
      if (std::isinf(t)) return B > 0 ? (gamma < 0 ? 0.0 : kInf) : xpow(A, gamma);
      return xpow(std::max(0.0, A + B * t), gamma);
    case Kind::Custom:
      return value(t);
  }
  return 0;
}

double MonotoneEnvelope::Segment::derivative(double t) const {
  switch (kind) {
    case Kind::Constant:
      return 0;
    case Kind::Power:
      if (A == 0) return 0;
      return A * gamma * std::pow(t, gamma - 1);
    case Kind::AffinePower:
      return gamma * B * xpow(std::max(0.0, A + B * t), gamma - 1);
    case Kind::Custom:
      return slope(t);
  }
  return 0;
}

MonotoneEnvelope::MonotoneEnvelope() { segs_.push_back(constant_seg(0, kInf, 0)); }

MonotoneEnvelope::MonotoneEnvelope(std::vector<Segment> segments, std::string tag)
    : segs_(std::move(segments)), tag_(std::move(tag)) {
  if (segs_.empty()) fail(ErrorKind::InvalidArgument, "envelope needs at least one segment");
  if (segs_.front().from != 0 || !std::isinf(segs_.back().to))
    fail(ErrorKind::InvalidArgument, "envelope segments must cover (0, inf)");
  for (std::size_t i = 0; i + 1 < segs_.size(); ++i) {
    if (segs_[i].to != segs_[i + 1].from || !(segs_[i].to > segs_[i].from))
      fail(ErrorKind::InvalidArgument, "envelope segments must be contiguous");
    double b = segs_[i].to;
    double l = segs_[i](b), r = segs_[i + 1](b);
    if (r > l && !same_value(l, r)) fail(ErrorKind::InvalidArgument, "envelope must be nonincreasing");
    if (!same_value(l, r)) jumps_.push_back({b, l, r});
  }
}

std::size_t MonotoneEnvelope::index(double t) const {
  auto it = std::upper_bound(segs_.begin(), segs_.end(), t, [](double x, const Segment& s) { return x < s.to; });
  if (it == segs_.end()) --it;
  return static_cast<std::size_t>(it - segs_.begin());
}

double MonotoneEnvelope::operator()(double t) const {
  if (std::isinf(t)) return at_infinity();
  return segs_[index(t)](t);
}

double MonotoneEnvelope::left(double t) const {
  if (t <= 0) return at_zero();
  auto it = std::lower_bound(segs_.begin(), segs_.end(), t, [](const Segment& s, double x) { return s.to < x; });
  if (it == segs_.end()) --it;
  return (*it)(t);
}

double MonotoneEnvelope::at_zero() const {
  const auto& s = segs_.front();
  if (s.kind == Segment::Kind::Custom) return s.value(0.0);
  return s(0.0);
}

double MonotoneEnvelope::at_infinity() const {
  const auto& s = segs_.back();
  if (s.kind == Segment::Kind::Custom) return s.value(1e300);
  return s(kInf);
}

std::vector<double> MonotoneEnvelope::breakpoints() const {
  std::vector<double> out;
  for (std::size_t i = 0; i + 1 < segs_.size(); ++i) out.push_back(segs_[i].to);
  return out;
}

MonotoneEnvelope envelope_power(const WeightFunction& v, double e) {
  if (!(e > 0) || std::isinf(e)) fail(ErrorKind::InvalidArgument, "envelope exponent must be finite and > 0");
  const auto& ws = v.segments();
  const std::size_t n = ws.size();
  std::vector<double> S(n + 1, 0.0);
  for (std::size_t i = n; i-- > 0;)
    S[i] = std::max({S[i + 1], reciprocal_at(ws[i], ws[i].from), reciprocal_at(ws[i], ws[i].to)});

  using Seg = MonotoneEnvelope::Segment;
  std::vector<Seg> out;
  auto push = [&](Seg s) {
    if (!(s.to > s.from)) return;
    if (!out.empty() && out.back().kind == Seg::Kind::Constant && s.kind == Seg::Kind::Constant &&
        same_value(out.back().A, s.A)) {
      out.back().to = s.to;
      return;
    }
    out.push_back(std::move(s));
  };

  for (std::size_t i = 0; i < n; ++i) {
    const auto& w = ws[i];
    const double from = w.from, to = w.to, snext = S[i + 1];
    // 1/v is monotone on the segment; decreasing means sup over (t, to] sits at t+.
    bool decreasing = w.affine ? w.b > 0 : (w.c > 0 && w.alpha > 0);
    if (!decreasing) {
      double L = reciprocal_at(w, to);
      if (w.affine && w.b == 0) L = reciprocal_at(w, from);
      push(constant_seg(from, to, xpow(std::max(L, snext), e)));
      continue;
    }
    double tc;
    if (std::isinf(snext)) {
      tc = from;
    } else if (snext == 0) {
      tc = to;
    } else if (w.affine) {
      tc = (1 / snext - w.a) / w.b;
    } else {
      tc = std::pow(1 / (w.c * snext), 1 / w.alpha);
    }
    tc = std::clamp(tc, from, to);
    Seg s;
    s.from = from;
    s.to = tc;
    if (w.affine) {
      s.kind = Seg::Kind::AffinePower;
      s.A = w.a;
      s.B = w.b;
      s.gamma = -e;
    } else {
      s.kind = Seg::Kind::Power;
      s.A = std::pow(w.c, -e);
      s.gamma = -w.alpha * e;
    }
    push(s);
    push(constant_seg(tc, to, xpow(snext, e)));
  }
  return MonotoneEnvelope(std::move(out), "vbar(t,inf)^" + std::to_string(e));
}

EnvelopeMeasure::EnvelopeMeasure(MonotoneEnvelope g) : g_(std::move(g)) {
  for (const auto& j : g_.jumps()) {
    double m = std::isinf(j.left) ? (std::isinf(j.right) ? 0.0 : kInf) : j.left - j.right;
    if (m > 0) atoms_.push_back({j.t, m});
  }
}

double EnvelopeMeasure::density(double t) const {
  const auto& segs = g_.segments();
  auto it = std::upper_bound(segs.begin(), segs.end(), t,
                             [](double x, const MonotoneEnvelope::Segment& s) { return x < s.to; });
  if (it == segs.end()) --it;
  if (it->kind == MonotoneEnvelope::Segment::Kind::Constant) return 0;
  double d = -it->derivative(t);
  return d > 0 ? d : 0.0;
}

double EnvelopeMeasure::mass(const Interval& I) const {
  double start = I.lo <= 0 ? g_.at_zero() : (I.lo_closed ? g_.left(I.lo) : g_(I.lo));
  double end = std::isinf(I.hi) ? g_.at_infinity() : (I.hi_closed ? g_(I.hi) : g_.left(I.hi));
  if (std::isinf(start)) return std::isinf(end) ? 0.0 : kInf;
  return std::max(0.0, start - end);
}

bool EnvelopeMeasure::is_zero() const {
  if (!atoms_.empty()) return false;
  for (const auto& s : g_.segments())
    if (s.kind != MonotoneEnvelope::Segment::Kind::Constant) return false;
  return true;
}

quad::Result stieltjes_integral(const quad::Fn& f, const EnvelopeMeasure& mu, const Interval& I,
                                const quad::Options& opt, const std::vector<double>& extra) {
  quad::Result r;
  for (const auto& a : mu.atoms()) {
    bool in_lo = a.t > I.lo || (a.t == I.lo && I.lo_closed);
    bool in_hi = a.t < I.hi || (a.t == I.hi && I.hi_closed);
    if (in_lo && in_hi) r.value += xmul(f(a.t), a.mass);
  }
  if (std::isinf(r.value)) {
    r.divergent = true;
    return r;
  }
  auto integrand = [&](double t) { return xmul(f(t), mu.density(t)); };
  auto bps = mu.envelope().breakpoints();
  bps.insert(bps.end(), extra.begin(), extra.end());
  r += quad::integrate(integrand, I.lo, I.hi, bps, opt);
  return r;
}

double stieltjes_value(const quad::Fn& f, const EnvelopeMeasure& mu, const Interval& I, const quad::Options& opt,
                       const std::vector<double>& extra) {
  quad::Result r = stieltjes_integral(f, mu, I, opt, extra);
  if (r.divergent) return kInf;
  if (!r.converged) fail(ErrorKind::Numerical, "Stieltjes quadrature did not converge");
  return r.value;
}

double NondecreasingFunction::operator()(double t) const {
  double s = smooth(t);
  for (const auto& [b, h] : jumps)
    if (b <= t) s += h;
  return s;
}

double NondecreasingFunction::left(double t) const {
  double s = smooth(t);
  for (const auto& [b, h] : jumps)
    if (b < t) s += h;
  return s;
}

double integration_by_parts_check(const NondecreasingFunction& f, const std::function<double(double)>& g,
                                  const std::function<double(double)>& dg, double a, double b) {
  if (!(b > a) || !(a >= 0) || std::isinf(b)) fail(ErrorKind::Domain, "integration by parts needs 0 <= a < b < inf");
  // Represent -f as a nonincreasing envelope so that d(-env(t-)) = d(f(t-)).
  std::vector<double> cuts;
  for (const auto& [t, h] : f.jumps)
    if (t > 0) cuts.push_back(t);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  std::vector<MonotoneEnvelope::Segment> segs;
  double from = 0;
  for (std::size_t i = 0; i <= cuts.size(); ++i) {
    double to = i < cuts.size() ? cuts[i] : kInf;
    double jsum = 0;
    for (const auto& [t, h] : f.jumps)
      if (t <= from) jsum += h;
    MonotoneEnvelope::Segment s;
    s.from = from;
    s.to = to;
    s.kind = MonotoneEnvelope::Segment::Kind::Custom;
    auto smooth = f.smooth;
    auto slope = f.slope;
    s.value = [smooth, jsum](double t) { return -(smooth(t) + jsum); };
    s.slope = [slope](double t) { return -slope(t); };
    segs.push_back(s);
    from = to;
  }
  EnvelopeMeasure mu(MonotoneEnvelope(std::move(segs), "-f"));

  std::vector<double> pts{a};
  for (double c : cuts)
    if (c > a && c < b) pts.push_back(c);
  pts.push_back(b);
  double lhs = 0;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    auto r = quad::kronrod([&](double t) { return f(t) * dg(t); }, pts[i], pts[i + 1]);
    if (!r.converged) fail(ErrorKind::Numerical, "integration by parts: quadrature did not converge");
    lhs += r.value;
  }
  Interval I{a, b, true, false};
  double pos = stieltjes_value([&](double t) { return std::max(0.0, g(t)); }, mu, I);
  double neg = stieltjes_value([&](double t) { return std::max(0.0, -g(t)); }, mu, I);
  double rhs = f.left(b) * g(b) - f.left(a) * g(a) - (pos - neg);
  return std::fabs(lhs - rhs);
}

}  // namespace hardy
