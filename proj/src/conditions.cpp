#include "hardy/conditions.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <memory>

namespace hardy {

const char* inequality_id(InequalityKind k) {
  switch (k) {
    case InequalityKind::IteratedHardy:
      return "3.1";
    case InequalityKind::IteratedHardySup:
      return "3.2";
    case InequalityKind::MonotoneCone:
      return "5.1";
    case InequalityKind::MonotoneConeSup:
      return "5.3";
    case InequalityKind::Stieltjes:
      return "5.5";
    case InequalityKind::StieltjesSup:
      return "5.7";
  }
  return "?";
}

InequalityKind parse_inequality_id(const std::string& id) {
  for (auto k : {InequalityKind::IteratedHardy, InequalityKind::IteratedHardySup, InequalityKind::MonotoneCone,
                 InequalityKind::MonotoneConeSup, InequalityKind::Stieltjes, InequalityKind::StieltjesSup})
    if (id == inequality_id(k)) return k;
  fail(ErrorKind::InvalidArgument, "unknown inequality id \"" + id + "\"");
}

bool is_sup_kind(InequalityKind k) {
  return k == InequalityKind::IteratedHardySup || k == InequalityKind::MonotoneConeSup ||
         k == InequalityKind::StieltjesSup;
}

InequalitySpec::InequalitySpec(InequalityKind kind_, double p, double q, WeightFunction u_, WeightFunction v_,
                               WeightFunction w_)
    : kind(kind_), ex(p, q), u(std::move(u_)), v(std::move(v_)), w(std::move(w_)) {
  validate();
}

void InequalitySpec::validate() const {
  const bool stieltjes = kind == InequalityKind::Stieltjes || kind == InequalityKind::StieltjesSup;
  if (is_sup_kind(kind) && !ex.q_infinite())
    fail(ErrorKind::InvalidArgument, std::string("inequality ") + inequality_id(kind) + " requires q = inf");
  if (!is_sup_kind(kind) && ex.q_infinite())
    fail(ErrorKind::InvalidArgument, std::string("inequality ") + inequality_id(kind) + " requires finite q");
  if (!stieltjes && ex.p_infinite())
    fail(ErrorKind::InvalidArgument, std::string("inequality ") + inequality_id(kind) + " requires finite p");
  if (stieltjes && ex.p < 1)
    fail(ErrorKind::InvalidArgument, std::string("inequality ") + inequality_id(kind) + " requires p >= 1");
}

namespace {

std::vector<double> merge(std::vector<double> a, const std::vector<double>& b) {
  a.insert(a.end(), b.begin(), b.end());
  std::vector<double> out;
  for (double x : a)
    if (x > 0 && std::isfinite(x)) out.push_back(x);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

bool vanishes_somewhere(const WeightFunction& v) {
  for (const auto& s : v.segments()) {
    if (!s.affine && s.c == 0) return true;
    if (s.affine) {
      double lo = s.a + s.b * s.from;
      double hi = std::isinf(s.to) ? (s.b < 0 ? -kInf : s.a) : s.a + s.b * s.to;
      if (lo < 0 || hi < 0 || (lo == 0 && hi == 0)) return true;
    }
  }
  return false;
}

struct Scan {
  double value = 0, argmax = 0, error = 0;
  bool boundary = false;
};

// Grid scan over the log window, then golden refinement around the best sample.
Scan scan_sup(const quad::Fn& f, const Window& win, int n) {
  n = std::max(n, 8);
  std::vector<double> xs(static_cast<std::size_t>(n)), vs(xs.size());
  std::size_t best = 0;
  for (int i = 0; i < n; ++i) {
    xs[i] = win.lo * std::pow(win.hi / win.lo, static_cast<double>(i) / (n - 1));
    vs[i] = f(xs[i]);
    if (std::isnan(vs[i])) fail(ErrorKind::Numerical, "condition functional evaluated to NaN");
    if (vs[i] > vs[best]) best = static_cast<std::size_t>(i);
  }
  Scan s{vs[best], xs[best], 0, best == 0 || best + 1 == xs.size()};
  if (std::isinf(s.value)) return s;
  const double a = xs[best == 0 ? 0 : best - 1], b = xs[std::min(best + 1, xs.size() - 1)];
  auto g = quad::golden_max(f, a, b, 60);
  if (g.value > s.value) {
    s.error = g.value - s.value;
    s.value = g.value;
    s.argmax = g.argmax;
  }
  return s;
}

const char* fmt_warn_boundary = "supremum over x attained at the window boundary";

// Shared state of one condition evaluation.
struct Ctx {
  const InequalitySpec& spec;
  ConditionOptions opt;
  CumulativeWeight U;
  TailEnvelope vb;
  std::vector<double> bps;
  quad::Options qo;

  Ctx(const InequalitySpec& s, const ConditionOptions& o) : spec(s), opt(o), U(s.u), vb(s.v) {
    bps = merge(merge(s.u.breakpoints(), s.v.breakpoints()), s.w.breakpoints());
    qo.window_lo = o.window.lo;
    qo.window_hi = o.window.hi;
  }

  double ext_lo() const { return opt.window.lo * 1e-4; }
  double ext_hi() const { return opt.window.hi * 1e4; }

  double phi(double r, double x) const { return fundamental_value(spec.w, U, r, x); }

  // integral over (0, inf); +inf on divergence, warning on non-convergence
  double integral(const quad::Fn& f, std::vector<std::string>& warnings, double& err,
                  const std::vector<double>& extra = {}) const {
    auto r = quad::integrate(f, 0, kInf, merge(bps, extra), qo);
    if (r.divergent) return kInf;
    if (!r.converged) warnings.emplace_back("outer quadrature did not reach its tolerance");
    err += r.error;
    return r.value;
  }

  double inner(const quad::Fn& f, const std::vector<double>& extra = {}) const {
    auto r = quad::integrate(f, 0, kInf, merge(bps, extra), qo);
    if (r.divergent) return kInf;
    if (!r.converged) fail(ErrorKind::Numerical, "inner quadrature did not converge");
    return r.value;
  }
};

ConditionReport sup_report(const Ctx& c, const char* formula, const char* regime, const quad::Fn& f) {
  ConditionReport rep;
  rep.formula = formula;
  rep.regime = regime;
  Scan s = scan_sup(f, c.opt.window, c.opt.scan_points);
  rep.value = s.value;
  rep.argmax = s.argmax;
  rep.error_est = s.error;
  if (s.boundary && s.value > 0 && std::isfinite(s.value)) rep.warnings.emplace_back(fmt_warn_boundary);
  return rep;
}

ConditionReport integral_report(const Ctx& c, const char* formula, const char* regime, const quad::Fn& f,
                                double outer_exponent) {
  ConditionReport rep;
  rep.formula = formula;
  rep.regime = regime;
  double err = 0;
  double val = c.integral(f, rep.warnings, err);
  rep.value = xpow(val, outer_exponent);
  if (std::isfinite(val) && val > 0) rep.error_est = rep.value * outer_exponent * err / val;
  return rep;
}

ConditionReport infinite_report(const char* formula, const char* regime, const std::string& why) {
  ConditionReport rep;
  rep.formula = formula;
  rep.regime = regime;
  rep.value = kInf;
  rep.warnings.push_back(why);
  return rep;
}

// Kernel sup ess sup_s w(s) U(x,s)^e.
std::shared_ptr<MajorantEvaluator> kernel_sup(const Ctx& c, double e) {
  return std::make_shared<MajorantEvaluator>(PointwiseWeight::from(c.spec.w), c.U, 1 / e, c.opt.window);
}

// (int_[0,inf) U(t,x)^{p*/p} d(-vbar(t-,inf)^{p*}))^{1/p*}
struct StieltjesFactor {
  EnvelopeMeasure mu;
  double pstar, p;
  quad::Options qo;

  StieltjesFactor(const WeightFunction& v, double p_, const quad::Options& o)
      : mu(envelope_power(v, Exponents::star(p_))), pstar(Exponents::star(p_)), p(p_), qo(o) {}

  double operator()(const CumulativeWeight& U, double x) const {
    const double Ux = U(x), e = pstar / p;
    auto f = [&](double t) { return xpow(calligraphic_u_values(U(t), Ux), e); };
    return xpow(stieltjes_value(f, mu, Interval{0, kInf, true, false}, qo, {x}), 1 / pstar);
  }
};

// U(x)^{-1/p} sup_{t<x} U(t)^{1/p} vbar(t,inf)
struct SupFactor {
  std::shared_ptr<RunningSup> rs;
  CumulativeWeight U;
  double p;

  SupFactor(const Ctx& c, double p_) : U(c.U), p(p_) {
    auto U_ = c.U;
    auto vb = c.vb;
    rs = std::make_shared<RunningSup>([U_, vb, p_](double t) { return xmul(xpow(U_(t), 1 / p_), vb.left(t)); },
                                      [U_, vb, p_](double t) { return xmul(xpow(U_(t), 1 / p_), vb(t)); }, c.bps,
                                      c.ext_lo(), c.ext_hi());
  }
  double operator()(double x) const { return xdiv(rs->below(x), xpow(U(x), 1 / p)); }
};

std::vector<std::string> dedupe(std::vector<std::string> xs) {
  std::vector<std::string> out;
  for (auto& x : xs)
    if (std::find(out.begin(), out.end(), x) == out.end()) out.push_back(std::move(x));
  return out;
}

ConditionReport finish(ConditionReport rep, const InequalitySpec& spec, const ConditionOptions& opt) {
  auto hw = hypothesis_warnings(spec, opt);
  rep.warnings.insert(rep.warnings.begin(), hw.begin(), hw.end());
  rep.warnings = dedupe(std::move(rep.warnings));
  return rep;
}

}  // namespace

std::vector<std::string> hypothesis_warnings(const InequalitySpec& spec, const ConditionOptions& opt) {
  std::vector<std::string> out;
  for (auto& f : check_admissible(spec.u).failures()) out.push_back("U not admissible: " + f);
  const auto& ex = spec.ex;
  const CumulativeWeight U(spec.u);
  switch (spec.kind) {
    case InequalityKind::IteratedHardy:
      for (auto& f : check_nondegenerate(spec.w, U, ex.q / ex.p, spec.v).failures()) out.push_back(f);
      break;
    case InequalityKind::MonotoneCone:
    case InequalityKind::Stieltjes:
      for (auto& f : check_nondegenerate(spec.w, U, ex.q, spec.v).failures())
        if (f.rfind("v-bar limit", 0) != 0) out.push_back(f);
      break;
    case InequalityKind::IteratedHardySup:
    case InequalityKind::MonotoneConeSup:
    case InequalityKind::StieltjesSup: {
      const double pm = spec.kind == InequalityKind::IteratedHardySup ? ex.p : 1.0;
      auto phi = least_majorant(spec.w, U, pm, opt.window);
      for (auto& f : phi.flags().failures()) out.push_back("majorant of w: " + f);
      if (spec.kind == InequalityKind::IteratedHardySup && TailEnvelope(spec.v).limit() != 0)
        out.emplace_back("v-bar limit: v-bar limit not zero");
      break;
    }
  }
  if (spec.kind == InequalityKind::MonotoneCone || spec.kind == InequalityKind::MonotoneConeSup) {
    if (CumulativeWeight(spec.v)(opt.window.lo) == 0) out.emplace_back("V vanishes on an initial interval");
  }
  return out;
}

double local_C(const WeightFunction& v, double a, double b) {
  if (!(b > a)) fail(ErrorKind::Domain, "local_C needs a < b");
  return reciprocal_envelope(v, a, b);
}

namespace {

// sup over t in (a, b) of a function given by its one-sided values.
double interval_sup(const quad::Fn& left, const quad::Fn& right, std::vector<double> bps, double a, double b) {
  auto hl = [&](double t) { return (t > a && t <= b) ? left(t) : 0.0; };
  auto hr = [&](double t) { return (t >= a && t < b) ? right(t) : 0.0; };
  if (a > 0) bps.push_back(a);
  if (std::isfinite(b)) bps.push_back(b);
  const double lo = a > 0 ? a : 1e-12, hi = std::isfinite(b) ? b : 1e12;
  RunningSup rs(hl, hr, bps, lo, std::max(hi, lo * 1.0000001), 32);
  return rs.global();
}

}  // namespace

double local_B(const WeightFunction& u, const WeightFunction& v, double a, double b, double p) {
  if (!(a >= 0) || !(b > a)) fail(ErrorKind::Domain, "local_B needs 0 <= a < b");
  if (!(p > 0) || std::isinf(p)) fail(ErrorKind::Domain, "local_B needs 0 < p < inf");
  CumulativeWeight U(u);
  const double Ua = U(a);
  auto F = [&](double t) { return std::max(0.0, U(t) - Ua); };
  auto bps = merge(u.breakpoints(), v.breakpoints());
  if (p >= 1) {
    // sup_t F(t)^{1/p} vbar(t,b) = ess sup_s F(s)^{1/p} / v(s) over (a, b)
    auto l = [&](double s) { return xmul(xpow(F(s), 1 / p), xdiv(1.0, v.left(s))); };
    auto r = [&](double s) { return xmul(xpow(F(s), 1 / p), xdiv(1.0, v.right(s))); };
    return interval_sup(l, r, bps, a, b);
  }
  const double ps = Exponents::star(p);
  auto g = [&](double t) { return xmul(xmul(xpow(F(t), ps), u(t)), xpow(reciprocal_envelope(v, t, b), ps)); };
  auto res = quad::integrate(g, a, b, bps);
  if (res.divergent) return kInf;
  if (!res.converged) fail(ErrorKind::Numerical, "local_B quadrature did not converge");
  return xpow(res.value, 1 / ps);
}

ConditionReport condition_I(const InequalitySpec& spec, const ConditionOptions& opt) {
  spec.validate();
  if (spec.kind != InequalityKind::IteratedHardy && spec.kind != InequalityKind::IteratedHardySup)
    fail(ErrorKind::InvalidArgument, "condition_I applies to inequalities 3.1 and 3.2");
  Ctx c(spec, opt);
  const double p = spec.ex.p, q = spec.ex.q;
  const bool sup = spec.kind == InequalityKind::IteratedHardySup;
  ConditionReport rep;
  const char* formula = sup ? (p < 1 ? "I5" : "I6") : (p < 1 ? (q >= 1 ? "I1" : "I2") : (q >= 1 ? "I3" : "I4"));
  const char* regime = sup ? (p < 1 ? "q = inf, 0 < p < 1" : "q = inf, p >= 1")
                           : (p < 1 ? (q >= 1 ? "0 < p < 1, 1 <= q < inf" : "0 < p < 1, 0 < q < 1")
                                    : (q >= 1 ? "p >= 1, 1 <= q < inf" : "p >= 1, 0 < q < 1"));
  if (spec.w.is_zero()) {
    rep.formula = formula;
    rep.regime = regime;
    return finish(rep, spec, opt);
  }
  if (std::isinf(c.vb.limit()))
    return finish(infinite_report(formula, regime, "v vanishes near infinity: v-bar is infinite"), spec, opt);

  const double r = q / p;
  if (p < 1) {
    StieltjesFactor M(spec.v, p, c.qo);
    if (sup) {
      auto ks = kernel_sup(c, 1 / p);
      rep = sup_report(c, formula, regime, [&](double x) { return xmul(ks->kernel_form(x), M(c.U, x)); });
    } else if (q >= 1) {
      rep = sup_report(c, formula, regime, [&](double x) { return xmul(xpow(c.phi(r, x), 1 / q), M(c.U, x)); });
    } else {
      const double qs = Exponents::star(q);
      auto f = [&](double x) {
        return xmul(xmul(xpow(c.phi(r, x), qs), xpow(M(c.U, x), qs)), spec.w(x));
      };
      rep = integral_report(c, formula, regime, f, 1 / qs);
    }
  } else {
    SupFactor G(c, p);
    if (sup) {
      auto ks = kernel_sup(c, 1 / p);
      rep = sup_report(c, formula, regime, [&](double x) { return xmul(ks->kernel_form(x), G(x)); });
    } else if (q >= 1) {
      rep = sup_report(c, formula, regime, [&](double x) { return xmul(xpow(c.phi(r, x), 1 / q), G(x)); });
    } else {
      const double qs = Exponents::star(q);
      auto f = [&](double x) { return xmul(xmul(xpow(c.phi(r, x), qs), xpow(G(x), qs)), spec.w(x)); };
      rep = integral_report(c, formula, regime, f, 1 / qs);
    }
  }
  return finish(rep, spec, opt);
}

ConditionReport condition_C(const InequalitySpec& spec, const ConditionOptions& opt) {
  spec.validate();
  if (spec.kind != InequalityKind::MonotoneCone && spec.kind != InequalityKind::MonotoneConeSup)
    fail(ErrorKind::InvalidArgument, "condition_C applies to inequalities 5.1 and 5.3");
  Ctx c(spec, opt);
  const double p = spec.ex.p, q = spec.ex.q;
  const bool sup = spec.kind == InequalityKind::MonotoneConeSup;
  const char* formula =
      sup ? (p <= 1 ? "C5" : "C6") : (p <= 1 ? (q >= p ? "C1" : "C2") : (q >= p ? "C3" : "C4"));
  const char* regime = sup ? (p <= 1 ? "q = inf, 0 < p <= 1" : "q = inf, 1 < p < inf")
                           : (p <= 1 ? (q >= p ? "0 < p <= 1, p <= q < inf" : "0 < p <= 1, 0 < q < p")
                                     : (q >= p ? "1 < p <= q < inf" : "1 < p < inf, 0 < q < p"));
  ConditionReport rep;
  if (spec.w.is_zero()) {
    rep.formula = formula;
    rep.regime = regime;
    return finish(rep, spec, opt);
  }
  const auto& U = c.U;
  const CumulativeWeight V(spec.v);
  std::shared_ptr<RunningSup> uv;  // sup_{t<x} U(t) V(t)^{-1/p}
  if (p <= 1) {
    auto h = [U, V, p](double t) { return xmul(U(t), xpow(V(t), -1 / p)); };
    uv = std::make_shared<RunningSup>(h, h, c.bps, c.ext_lo(), c.ext_hi());
  }
  auto N = [&](double x) {
    const double pp = Exponents::conjugate(p), Ux = U(x);
    auto f = [&](double t) {
      return xmul(xpow(calligraphic_u_values(U(t), Ux), pp), xdiv(spec.v(t), xpow(V(t), pp)));
    };
    return xpow(c.inner(f, {x}), 1 / pp);
  };
  if (sup) {
    auto ks = kernel_sup(c, 1.0);
    if (p <= 1)
      rep = sup_report(c, formula, regime,
                       [&](double x) { return xmul(ks->kernel_form(x), xdiv(uv->below(x), U(x))); });
    else
      rep = sup_report(c, formula, regime, [&](double x) { return xmul(ks->kernel_form(x), N(x)); });
    return finish(rep, spec, opt);
  }
  if (q >= p) {
    if (p <= 1)
      rep = sup_report(c, formula, regime,
                       [&](double x) { return xmul(xpow(c.phi(q, x), 1 / q), xdiv(uv->below(x), U(x))); });
    else
      rep = sup_report(c, formula, regime, [&](double x) { return xmul(xpow(c.phi(q, x), 1 / q), N(x)); });
    return finish(rep, spec, opt);
  }
  const double r = p * q / (p - q);
  if (p <= 1) {
    auto f = [&](double x) {
      double a = xpow(c.phi(q, x), q / (p - q));
      double b = xpow(U(x), -r);
      double s = xpow(uv->below(x), r);
      return xmul(xmul(xmul(a, b), s), spec.w(x));
    };
    rep = integral_report(c, formula, regime, f, 1 / r);
  } else {
    auto f = [&](double x) { return xmul(xmul(xpow(c.phi(q, x), q / (p - q)), xpow(N(x), r)), spec.w(x)); };
    rep = integral_report(c, formula, regime, f, 1 / r);
  }
  return finish(rep, spec, opt);
}

ConditionReport condition_S(const InequalitySpec& spec, const ConditionOptions& opt) {
  spec.validate();
  if (spec.kind != InequalityKind::Stieltjes && spec.kind != InequalityKind::StieltjesSup)
    fail(ErrorKind::InvalidArgument, "condition_S applies to inequalities 5.5 and 5.7");
  Ctx c(spec, opt);
  const double p = spec.ex.p, q = spec.ex.q;
  const bool sup = spec.kind == InequalityKind::StieltjesSup;
  const bool pinf = std::isinf(p);
  const char* formula;
  const char* regime;
  if (sup) {
    formula = p == 1 ? "S6" : (pinf ? "S8" : "S7");
    regime = p == 1 ? "q = inf, p = 1" : (pinf ? "q = inf, p = inf" : "q = inf, 1 < p < inf");
  } else if (p == 1) {
    formula = q >= 1 ? "S1" : "S2";
    regime = q >= 1 ? "p = 1, 1 <= q < inf" : "p = 1, 0 < q < 1";
  } else if (pinf) {
    formula = "S5";
    regime = "p = inf, 0 < q < inf";
  } else {
    formula = q >= p ? "S3" : "S4";
    regime = q >= p ? "1 < p <= q < inf" : "1 < p < inf, 0 < q < p";
  }
  ConditionReport rep;
  if (spec.w.is_zero()) {
    rep.formula = formula;
    rep.regime = regime;
    return finish(rep, spec, opt);
  }
  const auto& U = c.U;
  const auto& v = spec.v;
  if (p > 1 && vanishes_somewhere(v))
    return finish(infinite_report(formula, regime, "v vanishes on an interval"), spec, opt);

  // p = 1: sup_{t<x} U(t) ess sup_{s>t} (U(s) v(s))^{-1}
  std::shared_ptr<RunningSup> T, G;
  if (p == 1) {
    T = std::make_shared<RunningSup>([U, v](double s) { return xdiv(1.0, xmul(U(s), v.left(s))); },
                                     [U, v](double s) { return xdiv(1.0, xmul(U(s), v.right(s))); }, c.bps,
                                     c.ext_lo(), c.ext_hi());
    G = std::make_shared<RunningSup>(
        [U, v, T](double t) { return xmul(U(t), std::max(T->above(t), xdiv(1.0, xmul(U(t), v.left(t))))); },
        [U, T](double t) { return xmul(U(t), T->above(t)); }, c.bps, c.ext_lo(), c.ext_hi());
  }
  auto first_p1 = [&](double x) { return xdiv(G->below(x), U(x)); };
  // (int U(t,x)^{p'} U(t)^{-p'} v(t)^{1-p'} dt)^{1/p'}, using U(t,x)/U(t) = 1/(U(x)+U(t))
  auto NS = [&](double x) {
    const double pp = Exponents::conjugate(p), Ux = U(x);
    auto f = [&](double t) { return xmul(xpow(Ux + U(t), -pp), xpow(v(t), 1 - pp)); };
    return xpow(c.inner(f, {x}), 1 / pp);
  };
  auto L = [&](double x) {
    const double Ux = U(x);
    auto f = [&](double t) { return xdiv(1.0, xmul(Ux + U(t), v(t))); };
    return c.inner(f, {x});
  };

  if (sup) {
    auto ks = kernel_sup(c, 1.0);
    quad::Fn second = p == 1 ? quad::Fn(first_p1) : (pinf ? quad::Fn(L) : quad::Fn(NS));
    rep = sup_report(c, formula, regime, [&](double x) { return xmul(ks->kernel_form(x), second(x)); });
    return finish(rep, spec, opt);
  }
  if (pinf) {
    rep = integral_report(c, formula, regime, [&](double x) { return xmul(xpow(L(x), q), spec.w(x)); }, 1 / q);
    return finish(rep, spec, opt);
  }
  if (p == 1) {
    if (q >= 1) {
      rep = sup_report(c, formula, regime, [&](double x) { return xmul(xpow(c.phi(q, x), 1 / q), first_p1(x)); });
    } else {
      const double qs = Exponents::star(q);
      auto f = [&](double x) {
        return xmul(xmul(xpow(c.phi(q, x), qs), xpow(first_p1(x), qs)), spec.w(x));
      };
      rep = integral_report(c, formula, regime, f, 1 / qs);
    }
    return finish(rep, spec, opt);
  }
  if (q >= p) {
    rep = sup_report(c, formula, regime, [&](double x) { return xmul(xpow(c.phi(q, x), 1 / q), NS(x)); });
  } else {
    const double r = p * q / (p - q);
    auto f = [&](double x) { return xmul(xmul(xpow(c.phi(q, x), r / p), xpow(NS(x), r)), spec.w(x)); };
    rep = integral_report(c, formula, regime, f, 1 / r);
  }
  return finish(rep, spec, opt);
}

ConditionReport compute_condition(const InequalitySpec& spec, const ConditionOptions& opt) {
  switch (spec.kind) {
    case InequalityKind::IteratedHardy:
    case InequalityKind::IteratedHardySup:
      return condition_I(spec, opt);
    case InequalityKind::MonotoneCone:
    case InequalityKind::MonotoneConeSup:
      return condition_C(spec, opt);
    case InequalityKind::Stieltjes:
    case InequalityKind::StieltjesSup:
      return condition_S(spec, opt);
  }
  fail(ErrorKind::Internal, "unhandled inequality kind");
}

FundamentalFunction discretization_phi(const InequalitySpec& spec, const Window& window) {
  const CumulativeWeight U(spec.u);
  if (spec.kind == InequalityKind::IteratedHardy)
    return fundamental_function(spec.w, U, spec.ex.q / spec.ex.p, window);
  if (spec.kind == InequalityKind::IteratedHardySup) return least_majorant(spec.w, U, spec.ex.p, window);
  fail(ErrorKind::InvalidArgument, "discrete conditions apply to inequalities 3.1 and 3.2");
}

namespace {

struct Discrete {
  const InequalitySpec& spec;
  const DiscretizingSequence& seq;
  CumulativeWeight U;
  TailEnvelope vb;
  std::vector<double> f;  // phi(x_k)^{1/q}, or phi(x_k) for the sup kind
  double rho;
  std::vector<double> bps;

  Discrete(const InequalitySpec& s, const DiscretizingSequence& sq, const FundamentalFunction& phi)
      : spec(s), seq(sq), U(s.u), vb(s.v) {
    const bool sup = s.kind == InequalityKind::IteratedHardySup;
    if (s.kind != InequalityKind::IteratedHardy && !sup)
      fail(ErrorKind::InvalidArgument, "discrete conditions apply to inequalities 3.1 and 3.2");
    if (seq.knots.size() < 2) fail(ErrorKind::InvalidArgument, "discretizing sequence needs at least two knots");
    for (double x : seq.knots) f.push_back(sup ? phi(x) : xpow(phi(x), 1 / s.ex.q));
    rho = sup ? kInf : s.ex.rho();
    bps = merge(s.u.breakpoints(), s.v.breakpoints());
  }
  std::size_t n() const { return seq.knots.size(); }
  double x(std::size_t i) const { return seq.knots[i]; }
  double Up(std::size_t i) const { return xpow(U(x(i)), 1 / spec.ex.p); }
};

double max_adjacent(const std::vector<std::pair<std::string, double>>& vals) {
  double m = 1;
  for (std::size_t i = 0; i + 1 < vals.size(); ++i) {
    double a = vals[i].second, b = vals[i + 1].second;
    if (a == 0 && b == 0) continue;
    m = std::max({m, xdiv(a, b), xdiv(b, a)});
  }
  return m;
}

std::pair<double, double> discrete_terms(const Discrete& d) {
  std::vector<double> t1, t2;
  for (std::size_t i = 1; i < d.n(); ++i)
    t1.push_back(xmul(xdiv(d.f[i], d.Up(i)), local_B(d.spec.u, d.spec.v, d.x(i - 1), d.x(i), d.spec.ex.p)));
  for (std::size_t i = 0; i + 1 < d.n(); ++i) t2.push_back(xmul(d.f[i], local_C(d.spec.v, d.x(i), d.x(i + 1))));
  return {lrho_norm(t1, d.rho), lrho_norm(t2, d.rho)};
}

double edge_share(const Discrete& d, const std::vector<double>& terms) {
  if (terms.empty()) return 0;
  double total = lrho_norm(terms, d.rho);
  if (!(total > 0) || std::isinf(total)) return 0;
  std::vector<double> edges{terms.front(), terms.back()};
  return lrho_norm(edges, d.rho) / total;
}

}  // namespace

ConditionReport discrete_A(const InequalitySpec& spec, const DiscretizingSequence& seq,
                           const FundamentalFunction& phi) {
  if (spec.kind != InequalityKind::IteratedHardy) fail(ErrorKind::InvalidArgument, "condition A applies to 3.1");
  Discrete d(spec, seq, phi);
  auto [a, b] = discrete_terms(d);
  ConditionReport rep;
  rep.formula = "A";
  rep.regime = std::isinf(d.rho) ? "rho = inf (sup norm)" : "rho finite (window sums)";
  rep.value = a + b;
  std::vector<double> t2;
  for (std::size_t i = 0; i + 1 < d.n(); ++i) t2.push_back(xmul(d.f[i], local_C(spec.v, d.x(i), d.x(i + 1))));
  rep.error_est = edge_share(d, t2) * b;
  if (d.vb.limit() != 0) rep.warnings.emplace_back("v-bar limit: v-bar limit not zero");
  return rep;
}

ConditionReport discrete_D(const InequalitySpec& spec, const DiscretizingSequence& seq,
                           const FundamentalFunction& phi) {
  if (spec.kind != InequalityKind::IteratedHardySup) fail(ErrorKind::InvalidArgument, "condition D applies to 3.2");
  Discrete d(spec, seq, phi);
  auto [a, b] = discrete_terms(d);
  ConditionReport rep;
  rep.formula = "D";
  rep.regime = "sup norms";
  rep.value = a + b;
  if (d.vb.limit() != 0) rep.warnings.emplace_back("v-bar limit: v-bar limit not zero");
  return rep;
}

ChainReport chain_A(const InequalitySpec& spec, const DiscretizingSequence& seq, const FundamentalFunction& phi) {
  Discrete d(spec, seq, phi);
  const double p = spec.ex.p;
  if (!(p < 1)) fail(ErrorKind::Domain, "chain A needs 0 < p < 1");
  const double ps = Exponents::star(p), e = ps / p;
  const auto& U = d.U;
  EnvelopeMeasure mu(envelope_power(spec.v, ps));
  const auto& g = mu.envelope();
  auto bps = merge(d.bps, g.breakpoints());

  auto inner = [&](double a, double b, bool shifted) {
    const double Ua = shifted ? U(a) : 0.0;
    auto h = [&](double t) { return xmul(xmul(xpow(std::max(0.0, U(t) - Ua), ps), spec.u(t)), g(t)); };
    auto r = quad::integrate(h, a, b, bps);
    if (r.divergent) return kInf;
    if (!r.converged) fail(ErrorKind::Numerical, "chain quadrature did not converge");
    return xpow(r.value, 1 / ps);
  };
  auto block = [&](double a, double b) {
    auto h = [&](double t) { return xpow(U(t), e); };
    return xpow(stieltjes_value(h, mu, Interval{a, b, true, true}), 1 / ps);
  };

  std::vector<double> a1, a2, a3, a3b, a4b, a5;
  for (std::size_t i = 1; i < d.n(); ++i) {
    const double c = xdiv(d.f[i], d.Up(i));
    a1.push_back(xmul(c, inner(d.x(i - 1), d.x(i), true)));
    a2.push_back(xmul(c, inner(d.x(i - 1), d.x(i), false)));
    a3.push_back(xmul(c, block(d.x(i - 1), d.x(i))));
  }
  for (std::size_t i = 0; i < d.n(); ++i) {
    a3b.push_back(xmul(d.f[i], d.vb.left(d.x(i))));
    const double Ux = U(d.x(i));
    auto k = [&](double t) { return xpow(calligraphic_u_values(U(t), Ux), e); };
    a5.push_back(xmul(d.f[i], xpow(stieltjes_value(k, mu, Interval{0, kInf, true, false}, {}, {d.x(i)}), 1 / ps)));
  }
  for (std::size_t i = 0; i + 1 < d.n(); ++i)
    a4b.push_back(xmul(d.f[i], xpow(mu.mass(Interval{d.x(i), d.x(i + 1), true, true}), 1 / ps)));

  auto [ta, tb] = discrete_terms(d);
  ChainReport rep;
  rep.regime = "0 < p < 1";
  const double r = d.rho;
  rep.values = {{"A", ta + tb},
                {"A1", lrho_norm(a1, r)},
                {"A2", lrho_norm(a2, r)},
                {"A3", lrho_norm(a3, r) + lrho_norm(a3b, r)},
                {"A4", lrho_norm(a3, r) + lrho_norm(a4b, r)},
                {"A5", lrho_norm(a5, r)}};
  rep.max_adjacent_ratio = max_adjacent(rep.values);
  return rep;
}

ChainReport chain_B(const InequalitySpec& spec, const DiscretizingSequence& seq, const FundamentalFunction& phi) {
  Discrete d(spec, seq, phi);
  const double p = spec.ex.p;
  if (!(p >= 1)) fail(ErrorKind::Domain, "chain B needs p >= 1");
  const auto& U = d.U;
  const auto& vb = d.vb;

  auto local = [&](double a, double b, bool shifted) {
    const double Ua = shifted ? U(a) : 0.0;
    auto F = [&](double t) { return xpow(std::max(0.0, U(t) - Ua), 1 / p); };
    return interval_sup([&](double t) { return xmul(F(t), vb.left(t)); },
                        [&](double t) { return xmul(F(t), vb(t)); }, d.bps, a, b);
  };

  std::vector<double> b1, b2, b3b, b4;
  for (std::size_t i = 1; i < d.n(); ++i) {
    const double c = xdiv(d.f[i], d.Up(i));
    b1.push_back(xmul(c, local(d.x(i - 1), d.x(i), true)));
    b2.push_back(xmul(c, local(d.x(i - 1), d.x(i), false)));
  }
  for (std::size_t i = 0; i < d.n(); ++i) {
    b3b.push_back(xmul(d.f[i], vb(d.x(i))));
    const double Ux = U(d.x(i));
    auto k = [&](double t) { return xpow(calligraphic_u_values(U(t), Ux), 1 / p); };
    RunningSup rs([&](double t) { return xmul(k(t), vb.left(t)); }, [&](double t) { return xmul(k(t), vb(t)); },
                  d.bps, seq.knots.front() * 1e-4, seq.knots.back() * 1e4);
    b4.push_back(xmul(d.f[i], rs.global()));
  }

  auto [ta, tb] = discrete_terms(d);
  ChainReport rep;
  rep.regime = "p >= 1";
  const double r = d.rho;
  rep.values = {{"A", ta + tb},
                {"B1", lrho_norm(b1, r)},
                {"B2", lrho_norm(b2, r)},
                {"B3", lrho_norm(b2, r) + lrho_norm(b3b, r)},
                {"B4", lrho_norm(b4, r)}};
  rep.max_adjacent_ratio = max_adjacent(rep.values);
  return rep;
}

}  // namespace hardy
