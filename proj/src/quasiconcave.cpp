#include "hardy/quasiconcave.hpp"

#include <algorithm>
#include <cmath>

#include "hardy/exponents.hpp"

namespace hardy {

namespace {

std::vector<double> merged_breakpoints(std::vector<double> a, const std::vector<double>& b) {
  a.insert(a.end(), b.begin(), b.end());
  std::sort(a.begin(), a.end());
  a.erase(std::unique(a.begin(), a.end()), a.end());
  std::vector<double> out;
  for (double x : a)
    if (x > 0 && std::isfinite(x)) out.push_back(x);
  return out;
}

// d log v / d log x between two samples; 0 when both vanish.
double log_slope(double x1, double v1, double x2, double v2) {
  if (v1 == v2) return 0;
  if (v1 == 0 || std::isinf(v2)) return kInf;
  if (v2 == 0 || std::isinf(v1)) return -kInf;
  return std::log(v2 / v1) / std::log(x2 / x1);
}

double nan_max(double a, double b) { return std::isnan(b) ? a : (b > a ? b : a); }

// Limit of h along x0, x0*f, x0*f^2, ...: +inf (or 0) when the log-growth
// (or log-decay) per step does not slow down, otherwise the last samples.
double tail_limit(const quad::Fn& h, double x0, double f) {
  double ha = h(x0), hb = h(x0 * f), hc = h(x0 * f * f);
  if (std::isinf(hc) || std::isinf(hb)) return kInf;
  if (hc == 0) return 0;
  if (!(ha > 0) || !(hb > 0) || !(hc > 0)) return nan_max(nan_max(0, hb), hc);
  double g1 = std::log(hb / ha), g2 = std::log(hc / hb);
  if (g2 > 1e-9 && g2 >= 0.5 * g1) return kInf;
  if (g2 < -1e-9 && g2 <= 0.5 * g1) return 0;
  return std::max(hb, hc);
}

}  // namespace

RunningSup::RunningSup(quad::Fn left, quad::Fn right, std::vector<double> breakpoints, double lo, double hi,
                       int per_decade)
    : left_(std::move(left)), right_(std::move(right)) {
  std::vector<double> cuts{0.0};
  for (double b : merged_breakpoints(std::move(breakpoints), {})) cuts.push_back(b);
  cuts.push_back(kInf);
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double c = cuts[i], d = cuts[i + 1];
    if (c > 0) entries_.push_back({c, 2, right_(c)});
    if (std::isfinite(d)) entries_.push_back({d, 0, left_(d)});
    if (c == 0) entries_.push_back({0, 2, tail_limit(right_, std::min(lo, d / 10), 1e-3)});
    if (std::isinf(d)) entries_.push_back({kInf, 0, tail_limit(right_, std::max(hi, 10 * c), 1e3)});
    const double a = std::max(c, lo), b = std::min(d, hi);
    if (!(b > a)) continue;
    const int n = std::max(8, static_cast<int>(std::ceil(per_decade * std::log10(b / a))));
    std::vector<double> xs(static_cast<std::size_t>(n + 1)), vs(xs.size());
    for (int j = 0; j <= n; ++j) {
      double x = j == 0 ? a : (j == n ? b : a * std::pow(b / a, static_cast<double>(j) / n));
      xs[j] = x;
      if (j == 0 && a == c)
        vs[j] = right_(c);
      else if (j == n && b == d)
        vs[j] = left_(d);
      else {
        vs[j] = right_(x);
        entries_.push_back({x, 1, vs[j]});
      }
    }
    for (int j = 1; j < n; ++j) {
      bool peak = vs[j] >= vs[j - 1] && vs[j] >= vs[j + 1] && (vs[j] > vs[j - 1] || vs[j] > vs[j + 1]);
      if (!peak || std::isinf(vs[j])) continue;
      auto g = quad::golden_max(right_, xs[j - 1], xs[j + 1], 100);
      if (g.argmax > c && g.argmax < d) entries_.push_back({g.argmax, 1, g.value});
    }
  }
  std::sort(entries_.begin(), entries_.end(),
            [](const Entry& x, const Entry& y) { return x.x < y.x || (x.x == y.x && x.type < y.type); });
  const std::size_t m = entries_.size();
  prefix_.assign(m, 0.0);
  suffix_.assign(m + 1, 0.0);
  double run = 0;
  for (std::size_t i = 0; i < m; ++i) prefix_[i] = run = nan_max(run, entries_[i].value);
  run = 0;
  for (std::size_t i = m; i-- > 0;) suffix_[i] = run = nan_max(run, entries_[i].value);
  global_ = m ? prefix_.back() : 0.0;
}

double RunningSup::below(double t) const {
  auto it = std::partition_point(entries_.begin(), entries_.end(),
                                 [t](const Entry& e) { return e.x < t || (e.x == t && e.type == 0); });
  std::size_t n = static_cast<std::size_t>(it - entries_.begin());
  double r = n ? prefix_[n - 1] : 0.0;
  return nan_max(r, left_(t));
}

double RunningSup::above(double t) const {
  auto it = std::partition_point(entries_.begin(), entries_.end(),
                                 [t](const Entry& e) { return e.x < t || (e.x == t && e.type < 2); });
  std::size_t n = static_cast<std::size_t>(it - entries_.begin());
  return nan_max(suffix_[n], right_(t));
}

bool FundamentalFunction::Flags::all() const {
  return finite && zero_at_origin && infinite_at_infinity && ratio_infinite_at_origin && ratio_zero_at_infinity;
}

std::vector<std::string> FundamentalFunction::Flags::failures() const {
  std::vector<std::string> out;
  if (!finite) out.push_back("phi is not finite");
  if (!zero_at_origin) out.push_back("phi(0+) != 0");
  if (!infinite_at_infinity) out.push_back("phi(inf) != inf");
  if (!ratio_infinite_at_origin) out.push_back("phi/U^r (0+) != inf");
  if (!ratio_zero_at_infinity) out.push_back("phi/U^r (inf) != 0");
  return out;
}

struct FundamentalFunction::Impl {
  Source source;
  quad::Fn phi;
  CumulativeWeight U;
  double r;
  Window window;
  std::vector<double> grid, raw, values, ratios;
  double correction = 0;
  Flags flags;
};

FundamentalFunction::FundamentalFunction(Source source, quad::Fn phi, CumulativeWeight U, double r, Window window) {
  if (!(r > 0) || std::isinf(r)) fail(ErrorKind::InvalidArgument, "r must be finite and > 0");
  if (!(window.lo > 0) || !(window.hi > window.lo) || std::isinf(window.hi) || window.per_decade < 2)
    fail(ErrorKind::InvalidArgument, "window must satisfy 0 < lo < hi < inf");
  auto im = std::make_shared<Impl>();
  im->source = source;
  im->phi = std::move(phi);
  im->U = std::move(U);
  im->r = r;
  im->window = window;
  const int n = static_cast<int>(std::ceil(window.per_decade * std::log10(window.hi / window.lo)));
  for (int i = 0; i <= n; ++i) im->grid.push_back(window.lo * std::pow(window.hi / window.lo, double(i) / n));
  std::vector<double> rat;
  for (double x : im->grid) {
    double v = im->phi(x);
    im->raw.push_back(v);
    rat.push_back(xdiv(v, xpow(im->U(x), r)));
  }
  double mx = 0, mn = kInf;
  for (std::size_t i = 0; i < im->grid.size(); ++i) {
    mx = std::max(mx, im->raw[i]);
    mn = std::min(mn, rat[i]);
    im->values.push_back(mx);
    im->ratios.push_back(mn);
    if (std::isfinite(mx) && mx > 0) im->correction = std::max(im->correction, (mx - im->raw[i]) / mx);
    if (std::isfinite(rat[i]) && rat[i] > 0) im->correction = std::max(im->correction, (rat[i] - mn) / rat[i]);
  }
  Flags& f = im->flags;
  const auto& g = im->grid;
  const auto& v = im->raw;
  const std::size_t last = g.size() - 1, d = std::min<std::size_t>(static_cast<std::size_t>(window.per_decade), last);
  const double eps = 1e-3;
  f.finite = std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
  f.zero_at_origin = v[0] == 0 || log_slope(g[0], v[0], g[d], v[d]) > eps;
  f.infinite_at_infinity = log_slope(g[last - d], v[last - d], g[last], v[last]) > eps;
  f.ratio_infinite_at_origin = std::isinf(rat[0]) || log_slope(g[0], rat[0], g[d], rat[d]) < -eps;
  f.ratio_zero_at_infinity = rat[last] == 0 || log_slope(g[last - d], rat[last - d], g[last], rat[last]) < -eps;
  if (!f.finite) {
    f.zero_at_origin = f.zero_at_origin && std::isfinite(v[0]);
    f.ratio_zero_at_infinity = f.ratio_zero_at_infinity && std::isfinite(rat[last]);
  }
  impl_ = std::move(im);
}

double FundamentalFunction::operator()(double x) const { return impl_->phi(x); }
double FundamentalFunction::ratio(double x) const { return xdiv(impl_->phi(x), xpow(impl_->U(x), impl_->r)); }
FundamentalFunction::Source FundamentalFunction::source() const { return impl_->source; }
double FundamentalFunction::r() const { return impl_->r; }
const CumulativeWeight& FundamentalFunction::U() const { return impl_->U; }
const Window& FundamentalFunction::window() const { return impl_->window; }
const std::vector<double>& FundamentalFunction::grid() const { return impl_->grid; }
const std::vector<double>& FundamentalFunction::raw_values() const { return impl_->raw; }
const std::vector<double>& FundamentalFunction::values() const { return impl_->values; }
const std::vector<double>& FundamentalFunction::ratio_values() const { return impl_->ratios; }
double FundamentalFunction::correction() const { return impl_->correction; }
const FundamentalFunction::Flags& FundamentalFunction::flags() const { return impl_->flags; }

double fundamental_value(const WeightFunction& w, const CumulativeWeight& U, double r, double x) {
  if (!(x > 0)) fail(ErrorKind::Domain, "phi evaluated at x <= 0");
  if (w.is_zero()) return 0;
  const double Ux = U(x);
  if (Ux == 0) return 0;
  auto f = [&](double s) { return xmul(w(s), xpow(calligraphic_u_values(Ux, U(s)), r)); };
  auto bps = merged_breakpoints(w.breakpoints(), U.source().breakpoints());
  bps.push_back(x);
  quad::Result res = quad::integrate(f, 0, kInf, bps);
  if (res.divergent) return kInf;
  if (!res.converged) fail(ErrorKind::Numerical, "fundamental function quadrature did not converge");
  return res.value;
}

FundamentalFunction fundamental_function(const WeightFunction& w, const CumulativeWeight& U, double r,
                                         Window window) {
  auto phi = [w, U, r](double x) { return fundamental_value(w, U, r, x); };
  return FundamentalFunction(FundamentalFunction::Source::Measure, phi, U, r, window);
}

FundamentalFunction analytic_function(quad::Fn phi, const CumulativeWeight& U, double r, Window window) {
  return FundamentalFunction(FundamentalFunction::Source::Analytic, std::move(phi), U, r, window);
}

SplitForm split_form_bounds(const WeightFunction& w, const CumulativeWeight& U, double r, double x) {
  if (!(x > 0)) fail(ErrorKind::Domain, "split form evaluated at x <= 0");
  SplitForm s;
  double head = w.integral(0, x);
  double tail = 0;
  if (!w.is_zero()) {
    auto f = [&](double t) { return xmul(w(t), xpow(U(t), -r)); };
    auto bps = merged_breakpoints(w.breakpoints(), U.source().breakpoints());
    auto res = quad::integrate(f, x, kInf, bps);
    if (!res.converged && !res.divergent) fail(ErrorKind::Numerical, "split form quadrature did not converge");
    tail = res.divergent ? kInf : res.value;
  }
  s.split = head + xmul(xpow(U(x), r), tail);
  s.upper = s.split;
  s.lower = s.split / std::pow(2.0, r);
  return s;
}

PointwiseWeight PointwiseWeight::from(const WeightFunction& w) {
  PointwiseWeight p;
  p.value = [w](double t) { return w(t); };
  p.left = [w](double t) { return w.left(t); };
  p.right = [w](double t) { return w.right(t); };
  p.breakpoints = w.breakpoints();
  return p;
}

PointwiseWeight PointwiseWeight::from(quad::Fn f, std::vector<double> breakpoints) {
  PointwiseWeight p;
  p.value = f;
  p.left = f;
  p.right = f;
  p.breakpoints = std::move(breakpoints);
  return p;
}

MajorantEvaluator::MajorantEvaluator(PointwiseWeight w, CumulativeWeight U, double p, Window window)
    : w_(std::move(w)), U_(std::move(U)), p_(p), window_(window) {
  if (!(p > 0) || std::isinf(p)) fail(ErrorKind::InvalidArgument, "majorant exponent p must be finite and > 0");
  const double lo = window.lo * 1e-4, hi = window.hi * 1e4;
  auto bps = merged_breakpoints(w_.breakpoints, U_.source().breakpoints());
  const double e = 1 / p;
  auto Ue = [this, e](double t) { return xpow(U_(t), e); };
  wsup_ = std::make_shared<RunningSup>(w_.left, w_.right, bps, lo, hi);
  hsup_ = std::make_shared<RunningSup>([this, Ue](double t) { return xdiv(w_.left(t), Ue(t)); },
                                       [this, Ue](double t) { return xdiv(w_.right(t), Ue(t)); }, bps, lo, hi);
  auto hs = hsup_;
  gsup_ = std::make_shared<RunningSup>(
      [this, Ue, hs](double s) { return xmul(Ue(s), std::max(hs->above(s), xdiv(w_.left(s), Ue(s)))); },
      [Ue, hs](double s) { return xmul(Ue(s), hs->above(s)); }, bps, lo, hi);
  auto ws = wsup_;
  ksup_ = std::make_shared<RunningSup>([Ue, ws](double s) { return xdiv(ws->below(s), Ue(s)); },
                                       [this, Ue, ws](double s) {
                                         return xdiv(std::max(ws->below(s), w_.right(s)), Ue(s));
                                       },
                                       bps, lo, hi);
}

double MajorantEvaluator::min_form(double t) const {
  return std::max(wsup_->below(t), xmul(xpow(U_(t), 1 / p_), hsup_->above(t)));
}

double MajorantEvaluator::definition(double t) const { return gsup_->below(t); }

double MajorantEvaluator::dual_form(double t) const { return xmul(xpow(U_(t), 1 / p_), ksup_->above(t)); }

double MajorantEvaluator::kernel_form(double t) const {
  const double Ut = U_(t), e = 1 / p_;
  auto k = [this, Ut, e](double s, double ws) { return xmul(ws, xpow(calligraphic_u_values(Ut, U_(s)), e)); };
  auto bps = merged_breakpoints(w_.breakpoints, U_.source().breakpoints());
  RunningSup rs([&](double s) { return k(s, w_.left(s)); }, [&](double s) { return k(s, w_.right(s)); }, bps,
                window_.lo * 1e-4, window_.hi * 1e4);
  return rs.global();
}

FundamentalFunction least_majorant(const PointwiseWeight& w, const CumulativeWeight& U, double p, Window window) {
  auto ev = std::make_shared<MajorantEvaluator>(w, U, p, window);
  return FundamentalFunction(FundamentalFunction::Source::Majorant, [ev](double t) { return ev->min_form(t); }, U,
                             1 / p, window);
}

FundamentalFunction least_majorant(const WeightFunction& w, const CumulativeWeight& U, double p, Window window) {
  return least_majorant(PointwiseWeight::from(w), U, p, window);
}

const char* label_name(Label l) { return l == Label::Z1 ? "Z1" : "Z2"; }

namespace {

std::string join(const std::vector<std::string>& xs) {
  std::string s;
  for (const auto& x : xs) s += (s.empty() ? "" : "; ") + x;
  return s;
}

// inf{t > x : pred(t)} for a predicate that switches from false to true once.
template <class Pred>
double first_true_above(Pred pred, double x, double step, double hi) {
  double a = x, b = x * step;
  while (!pred(b)) {
    if (b >= hi) return std::nan("");
    a = b;
    b = std::min(b * step, hi);
  }
  for (int i = 0; i < 80 && b / a - 1 > 1e-14; ++i) {
    double m = std::sqrt(a * b);
    (pred(m) ? b : a) = m;
  }
  return b;
}

// sup{t < x : pred(t)} for a predicate that is true near 0 and switches once.
template <class Pred>
double last_true_below(Pred pred, double x, double step, double lo) {
  double b = x, a = x / step;
  while (!pred(a)) {
    if (a <= lo) return std::nan("");
    b = a;
    a = std::max(a / step, lo);
  }
  for (int i = 0; i < 80 && b / a - 1 > 1e-14; ++i) {
    double m = std::sqrt(a * b);
    (pred(m) ? a : b) = m;
  }
  return a;
}

bool tie(double x, double y) { return std::fabs(x / y - 1) <= 1e-9; }

}  // namespace

DiscretizingSequence build_discretizing_sequence(const FundamentalFunction& phi, double a) {
  if (!(a >= 2) || std::isinf(a)) fail(ErrorKind::InvalidArgument, "a must be >= 2");
  if (!phi.flags().all()) fail(ErrorKind::Degenerate, "phi is degenerate: " + join(phi.flags().failures()));
  const Window& win = phi.window();
  const double step = std::pow(10.0, 1.0 / win.per_decade);
  auto psi = [&](double t) { return phi.ratio(t); };

  std::vector<double> fwd{1.0}, bwd;
  std::vector<Label> fl, bl;
  for (;;) {
    double x = fwd.back(), p0 = phi(x), r0 = psi(x);
    double sp = first_true_above([&](double t) { return phi(t) >= a * p0; }, x, step, win.hi);
    double sr = first_true_above([&](double t) { return psi(t) <= r0 / a; }, x, step, win.hi);
    if (std::isnan(sp) || std::isnan(sr)) break;
    fl.push_back(sp >= sr || tie(sp, sr) ? Label::Z1 : Label::Z2);
    fwd.push_back(std::max(sp, sr));
  }
  for (double x = 1.0;;) {
    double p0 = phi(x), r0 = psi(x);
    double sp = last_true_below([&](double t) { return phi(t) <= p0 / a; }, x, step, win.lo);
    double sr = last_true_below([&](double t) { return psi(t) >= a * r0; }, x, step, win.lo);
    if (std::isnan(sp) || std::isnan(sr)) break;
    bl.push_back(sp <= sr || tie(sp, sr) ? Label::Z1 : Label::Z2);
    x = std::min(sp, sr);
    bwd.push_back(x);
  }
  DiscretizingSequence seq;
  seq.a = a;
  seq.k_min = -static_cast<int>(bwd.size());
  for (std::size_t i = bwd.size(); i-- > 0;) seq.knots.push_back(bwd[i]);
  for (double x : fwd) seq.knots.push_back(x);
  for (std::size_t i = bl.size(); i-- > 0;) seq.labels.push_back(bl[i]);
  for (Label l : fl) seq.labels.push_back(l);
  if (seq.knots.size() < 2) fail(ErrorKind::Degenerate, "window too small: no threshold crossing found from x0 = 1");

  seq.min_u_ratio = seq.min_phi_ratio = kInf;
  const double r = phi.r();
  for (std::size_t i = 0; i + 1 < seq.knots.size(); ++i) {
    double x0 = seq.knots[i], x1 = seq.knots[i + 1];
    seq.min_u_ratio = std::min(seq.min_u_ratio, xdiv(xpow(phi.U()(x1), r), xpow(phi.U()(x0), r)));
    seq.min_phi_ratio = std::min(seq.min_phi_ratio, phi(x1) / phi(x0));
    seq.max_ratio_ratio = std::max(seq.max_ratio_ratio, psi(x1) / psi(x0));
  }
  seq.max_cover = a;
  return seq;
}

SequenceReport verify_sequence(const DiscretizingSequence& seq, const FundamentalFunction& phi,
                               int samples_per_interval) {
  SequenceReport out;
  auto& rep = out.report;
  const auto& x = seq.knots;
  const double a = seq.a, r = phi.r();
  const double tol = 1e-9;
  bool has_x0 = seq.k_min <= 0 && seq.k_max() >= 0 && std::fabs(seq.x(0) - 1) <= 1e-12;
  rep.clauses.push_back({"(i) x_0 = 1", has_x0, true, has_x0 ? "" : "no knot with k = 0 at x = 1"});
  out.min_u_ratio = out.min_phi_ratio = kInf;
  for (std::size_t i = 0; i + 1 < x.size(); ++i) {
    out.min_u_ratio = std::min(out.min_u_ratio, xdiv(xpow(phi.U()(x[i + 1]), r), xpow(phi.U()(x[i]), r)));
    out.min_phi_ratio = std::min(out.min_phi_ratio, phi(x[i + 1]) / phi(x[i]));
    out.max_ratio_ratio = std::max(out.max_ratio_ratio, phi.ratio(x[i + 1]) / phi.ratio(x[i]));
  }
  bool inc = x.size() >= 2 && out.min_u_ratio > 1;
  rep.clauses.push_back(
      {"(i) U(x_k) increasing", inc, true, inc ? "" : (x.size() < 2 ? "fewer than two knots" : "U ratio <= 1")});
  bool ph = x.size() >= 2 && out.min_phi_ratio >= a * (1 - tol);
  rep.clauses.push_back({"(ii) phi(x_k) ratio >= a", ph, true,
                         ph ? "" : "min phi ratio " + std::to_string(out.min_phi_ratio)});
  bool ps = x.size() >= 2 && out.max_ratio_ratio <= (1 + tol) / a;
  rep.clauses.push_back({"(ii) phi/U^r ratio <= 1/a", ps, true,
                         ps ? "" : "max phi/U^r ratio " + std::to_string(out.max_ratio_ratio)});

  bool labels_ok = seq.labels.size() + 1 == x.size();
  bool cover = labels_ok && x.size() >= 2;
  for (std::size_t i = 0; labels_ok && i + 1 < x.size(); ++i) {
    const double p0 = phi(x[i]), r0 = phi.ratio(x[i]);
    double worst = 0;
    for (int j = 0; j <= samples_per_interval; ++j) {
      double t = x[i] * std::pow(x[i + 1] / x[i], double(j) / samples_per_interval);
      double c = seq.labels[i] == Label::Z1 ? phi(t) / p0 : r0 / phi.ratio(t);
      worst = std::max(worst, c);
    }
    if (seq.labels[i] == Label::Z1)
      out.max_cover_z1 = std::max(out.max_cover_z1, worst);
    else
      out.max_cover_z2 = std::max(out.max_cover_z2, worst);
    if (worst > 2 * a * (1 + tol)) cover = false;
  }
  rep.clauses.push_back({"(iii) covering", cover, false,
                         cover ? "" : (labels_ok ? "covering constant exceeds 2a" : "label count mismatch")});
  return out;
}

namespace {

SideRatio make_ratio(double c, double d) {
  SideRatio s{c, d, 1.0};
  if (c == 0 && d == 0) return s;
  s.ratio = xdiv(c, d);
  return s;
}

std::vector<double> span_breakpoints(const DiscretizingSequence& seq, const std::vector<double>& extra) {
  auto b = merged_breakpoints(seq.knots, extra);
  return b;
}

}  // namespace

SideRatio norm_discretization_sides(const quad::Fn& f, const WeightFunction& w, const FundamentalFunction& phi, double q,
                        const DiscretizingSequence& seq) {
  const auto& U = phi.U();
  auto g = [&](double t) { return xmul(xpow(xdiv(f(t), U(t)), q), w(t)); };
  auto res = quad::integrate(g, seq.knots.front(), seq.knots.back(), span_breakpoints(seq, w.breakpoints()));
  if (!res.converged && !res.divergent) fail(ErrorKind::Numerical, "anti-discretization quadrature did not converge");
  double cont = res.divergent ? kInf : res.value;
  double disc = 0;
  for (double x : seq.knots) disc += xmul(xpow(xdiv(f(x), U(x)), q), phi(x));
  return make_ratio(xpow(cont, 1 / q), xpow(disc, 1 / q));
}

SideRatio sup_discretization_sides(const FundamentalFunction& phi, const quad::Fn& g, double p, double q,
                        const DiscretizingSequence& seq) {
  auto h = [&](double t) { return xdiv(xpow(phi(t), 1 / q), xpow(g(t), 1 / p)); };
  double cont = 0, disc = 0;
  for (std::size_t i = 0; i + 1 < seq.knots.size(); ++i)
    cont = std::max(cont, quad::sup_scan(h, seq.knots[i], seq.knots[i + 1], 32).value);
  for (double x : seq.knots) disc = std::max(disc, h(x));
  cont = std::max(cont, disc);
  return make_ratio(cont, disc);
}

SideRatio power_discretization_sides(const FundamentalFunction& phi, const WeightFunction& w, const quad::Fn& sigma, double p,
                          double q, double r, const DiscretizingSequence& seq) {
  auto h = [&](double t) { return xmul(xdiv(xpow(phi(t), r / q - 1), xpow(sigma(t), r / p)), w(t)); };
  auto res = quad::integrate(h, seq.knots.front(), seq.knots.back(), span_breakpoints(seq, w.breakpoints()));
  if (!res.converged && !res.divergent) fail(ErrorKind::Numerical, "anti-discretization quadrature did not converge");
  double cont = res.divergent ? kInf : res.value;
  double disc = 0;
  for (double x : seq.knots) disc += xdiv(xpow(phi(x), r / q), xpow(sigma(x), r / p));
  return make_ratio(cont, disc);
}

double geometric_hardy_ratio(const std::vector<double>& a, double sigma, double q, bool sup_form) {
  if (!(sigma > 0) || !(sigma < 1)) fail(ErrorKind::InvalidArgument, "sigma must lie in (0, 1)");
  std::vector<double> lhs, rhs;
  double acc = 0, tau = 1;
  for (double x : a) {
    acc = sup_form ? std::max(acc, x) : acc + x;
    lhs.push_back(tau * acc);
    rhs.push_back(tau * x);
    tau *= sigma;
  }
  return xdiv(lrho_norm(lhs, q), lrho_norm(rhs, q));
}

}  // namespace hardy
