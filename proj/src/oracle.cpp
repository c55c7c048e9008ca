#include "hardy/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

namespace hardy {

namespace {

constexpr double kUnbounded = 1e12;
constexpr double kFloor = 1e-250;  // smallest relative mass kept during ascent

std::vector<double> log_grid(double lo, double hi, int n) {
  std::vector<double> g(static_cast<std::size_t>(n));
  const double a = std::log(lo), b = std::log(hi);
  for (int i = 0; i < n; ++i) g[static_cast<std::size_t>(i)] = std::exp(a + (b - a) * i / (n - 1));
  g.front() = lo;
  g.back() = hi;
  return g;
}

struct GaussRule {
  std::vector<double> x, w;
  explicit GaussRule(int n) { quad::gauss_legendre(n, x, w); }
};

// Nodes of a Gauss rule in log t on (a, b); weights include the Jacobian.
void log_gauss(const GaussRule& r, double a, double b, std::vector<double>& t, std::vector<double>& w) {
  if (!(a > 0)) {  // a cell starting at 0: plain Gauss-Legendre
    for (std::size_t g = 0; g < r.x.size(); ++g) {
      t.push_back(0.5 * b * (1 + r.x[g]));
      w.push_back(0.5 * b * r.w[g]);
    }
    return;
  }
  const double la = std::log(a), lb = std::log(b), h = 0.5 * (lb - la), m = 0.5 * (lb + la);
  for (std::size_t g = 0; g < r.x.size(); ++g) {
    const double s = std::exp(m + h * r.x[g]);
    t.push_back(s);
    w.push_back(r.w[g] * h * s);
  }
}

// Splits (a, b) at the given sorted breakpoints.
std::vector<double> cut(double a, double b, const std::vector<double>& bps) {
  std::vector<double> c{a};
  for (double x : bps)
    if (x > a * (1 + 1e-12) && x < b * (1 - 1e-12)) c.push_back(x);
  c.push_back(b);
  return c;
}

std::vector<double> merged(std::vector<double> a, const std::vector<double>& b) {
  a.insert(a.end(), b.begin(), b.end());
  std::sort(a.begin(), a.end());
  a.erase(std::unique(a.begin(), a.end()), a.end());
  return a;
}

// ---------------------------------------------------------------------------
// Exact evaluation

// Iterated form: (int (J(t)/U(t))^{Q/P} W(t) dt)^{1/Q} or sup_t W(t) (J/U)^{1/P},
// with J(t) = int_0^t H^P u and H(s) = int_s^inf h for atomic h.
struct IterForm {
  CumulativeWeight U;
  PointwiseWeight W;
  double P = 1, Q = 1;
};

struct AtomicJ {
  std::vector<double> z, S, Uz, C;
  double P;

  AtomicJ(const CumulativeWeight& U, const TestFunction& h, double P_) : P(P_) {
    std::vector<std::size_t> idx(h.z.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](auto a, auto b) { return h.z[a] < h.z[b]; });
    std::vector<double> m;
    for (auto i : idx) {
      if (!z.empty() && z.back() == h.z[i]) {
        m.back() += h.m[i];
      } else {
        z.push_back(h.z[i]);
        m.push_back(h.m[i]);
      }
    }
    const std::size_t n = z.size();
    S.assign(n, 0);
    for (std::size_t i = n; i-- > 0;) S[i] = m[i] + (i + 1 < n ? S[i + 1] : 0);
    Uz.resize(n);
    for (std::size_t i = 0; i < n; ++i) Uz[i] = U(z[i]);
    C.assign(n + 1, 0);
    for (std::size_t i = 0; i < n; ++i) C[i + 1] = C[i] + xpow(S[i], P) * (Uz[i] - (i ? Uz[i - 1] : 0));
  }

  double operator()(double t, double Ut) const {
    const std::size_t k = static_cast<std::size_t>(std::lower_bound(z.begin(), z.end(), t) - z.begin());
    if (k == z.size()) return C[k];
    return C[k] + xpow(S[k], P) * (Ut - (k ? Uz[k - 1] : 0));
  }
};

double iter_lhs(const IterForm& f, const TestFunction& h) {
  if (h.is_zero()) return 0;
  AtomicJ J(f.U, h, f.P);
  auto bps = merged(J.z, f.W.breakpoints);
  bps = merged(bps, f.U.source().breakpoints());
  auto ratio = [&](double t) {
    const double Ut = f.U(t);
    return xdiv(J(t, Ut), Ut);
  };
  if (std::isinf(f.Q)) {
    auto g = [&](const quad::Fn& W) {
      return [&, W](double t) { return xmul(W(t), xpow(ratio(t), 1 / f.P)); };
    };
    RunningSup rs(g(f.W.left), g(f.W.right), bps, 1e-12, 1e12, 32);
    return rs.global();
  }
  const double e = f.Q / f.P;
  auto r = quad::integrate([&](double t) { return xmul(xpow(ratio(t), e), f.W.value(t)); }, 0, kInf, bps);
  if (r.divergent) return kInf;
  if (!r.converged) fail(ErrorKind::Numerical, "left-hand side quadrature did not converge");
  return xpow(r.value, 1 / f.Q);
}

IterForm form_of(const InequalitySpec& spec) {
  return {spec.U(), PointwiseWeight::from(spec.w), spec.ex.p, spec.ex.q};
}

IterForm form_of(const ReducedMonotone& r) {
  IterForm f{CumulativeWeight(r.u), PointwiseWeight::from(r.w), r.P, r.Q};
  if (r.sup) {
    const double p = r.p;
    const WeightFunction w = r.w;
    f.W.value = [w, p](double t) { return xpow(w(t), p); };
    f.W.left = [w, p](double t) { return xpow(w.left(t), p); };
    f.W.right = [w, p](double t) { return xpow(w.right(t), p); };
  }
  return f;
}

double atoms_rhs(const TestFunction& h, const quad::Fn& rho) {
  double s = 0;
  for (std::size_t i = 0; i < h.z.size(); ++i)
    if (h.m[i] > 0) s += xmul(h.m[i], rho(h.z[i]));
  return s;
}

// Monotone steps: F_i = sum_{j >= i} m_j over sorted jump points.
struct Monotone {
  std::vector<double> z, a, F, Pre, Uz;
  Monotone(const CumulativeWeight& U, const TestFunction& f) {
    std::vector<std::size_t> idx(f.z.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](auto x, auto y) { return f.z[x] < f.z[y]; });
    for (auto i : idx) {
      z.push_back(f.z[i]);
      a.push_back(f.m[i]);
    }
    const std::size_t n = z.size();
    F.assign(n + 1, 0);
    for (std::size_t i = n; i-- > 0;) F[i] = F[i + 1] + a[i];
    Uz.resize(n);
    Pre.assign(n + 1, 0);
    for (std::size_t i = 0; i < n; ++i) {
      Uz[i] = U(z[i]);
      Pre[i + 1] = Pre[i] + a[i] * Uz[i];
    }
  }
  // H_u f(x)
  double hardy(double x, double Ux) const {
    const std::size_t k = static_cast<std::size_t>(std::lower_bound(z.begin(), z.end(), x) - z.begin());
    return xdiv(Pre[k], Ux) + F[k];
  }
};

double monotone_lhs(const InequalitySpec& spec, const TestFunction& f) {
  const auto U = spec.U();
  Monotone M(U, f);
  auto bps = merged(M.z, spec.w.breakpoints());
  bps = merged(bps, spec.u.breakpoints());
  auto Hf = [&](double x) { return M.hardy(x, U(x)); };
  if (spec.ex.q_infinite()) {
    RunningSup rs([&](double x) { return xmul(spec.w.left(x), Hf(x)); },
                  [&](double x) { return xmul(spec.w.right(x), Hf(x)); }, bps, 1e-12, 1e12, 32);
    return rs.global();
  }
  const double q = spec.ex.q;
  auto r = quad::integrate([&](double x) { return xmul(xpow(Hf(x), q), spec.w(x)); }, 0, kInf, bps);
  if (r.divergent) return kInf;
  if (!r.converged) fail(ErrorKind::Numerical, "left-hand side quadrature did not converge");
  return xpow(r.value, 1 / q);
}

double monotone_rhs(const InequalitySpec& spec, const TestFunction& f) {
  if (f.is_zero()) return 0;
  if (!spec.v.integrable_at_zero()) return kInf;
  const auto V = spec.V();
  Monotone M(spec.U(), f);
  const double p = spec.ex.p;
  double s = 0, prev = 0;
  for (std::size_t i = 0; i < M.z.size(); ++i) {
    const double Vi = V(M.z[i]);
    s += xmul(xpow(M.F[i], p), Vi - prev);
    prev = Vi;
  }
  return xpow(s, 1 / p);
}

// Steps: h = m_i on (z_i, z_{i+1}].
struct StepKernel {
  const CumulativeWeight& U;
  std::vector<double> tg, wg, Ug;  // Gauss nodes per cell, flattened
  std::vector<std::size_t> off;
  std::vector<double> heights;

  StepKernel(const CumulativeWeight& U_, const TestFunction& h, int nodes = 16) : U(U_) {
    static const GaussRule rule16(16);
    const GaussRule local(nodes);
    const GaussRule& r = nodes == 16 ? rule16 : local;
    const auto ubps = U.source().breakpoints();
    off.push_back(0);
    for (std::size_t i = 0; i + 1 < h.z.size(); ++i) {
      if (h.m[i] > 0) {
        auto c = cut(h.z[i], h.z[i + 1], ubps);
        for (std::size_t j = 0; j + 1 < c.size(); ++j) log_gauss(r, c[j], c[j + 1], tg, wg);
      }
      off.push_back(tg.size());
      heights.push_back(h.m[i]);
    }
    Ug.resize(tg.size());
    for (std::size_t g = 0; g < tg.size(); ++g) Ug[g] = U(tg[g]);
  }

  // S h(x) = int h(t) / (U(x) + U(t)) dt
  double operator()(double Ux) const {
    double s = 0;
    for (std::size_t i = 0; i + 1 < off.size(); ++i) {
      if (!(heights[i] > 0)) continue;
      double k = 0;
      for (std::size_t g = off[i]; g < off[i + 1]; ++g) k += wg[g] / (Ux + Ug[g]);
      s += heights[i] * k;
    }
    return s;
  }
};

double steps_lhs(const InequalitySpec& spec, const TestFunction& h) {
  if (h.is_zero()) return 0;
  const auto U = spec.U();
  StepKernel K(U, h);
  auto bps = merged(spec.w.breakpoints(), spec.u.breakpoints());
  auto Sh = [&](double x) { return K(U(x)); };
  if (spec.ex.q_infinite()) {
    RunningSup rs([&](double x) { return xmul(spec.w.left(x), Sh(x)); },
                  [&](double x) { return xmul(spec.w.right(x), Sh(x)); }, bps, 1e-12, 1e12, 32);
    return rs.global();
  }
  const double q = spec.ex.q;
  auto r = quad::integrate([&](double x) { return xmul(xpow(Sh(x), q), spec.w(x)); }, 0, kInf, bps);
  if (r.divergent) return kInf;
  if (!r.converged) fail(ErrorKind::Numerical, "left-hand side quadrature did not converge");
  return xpow(r.value, 1 / q);
}

double sup_on_cell(const WeightFunction& v, double a, double b) {
  const double va = a > 0 ? v.right(a)
                 : v.segments().empty() ? 0.0
                                        : xdiv(1.0, reciprocal_at(v.segments().front(), 0));
  double m = std::max(va, v.left(b));
  for (double x : v.breakpoints())
    if (x > a && x < b) m = std::max({m, v.left(x), v.right(x)});
  return m;
}

double steps_rhs(const InequalitySpec& spec, const TestFunction& h) {
  const double p = spec.ex.p;
  double s = 0;
  for (std::size_t i = 0; i + 1 < h.z.size(); ++i) {
    if (!(h.m[i] > 0)) continue;
    if (std::isinf(p))
      s = std::max(s, xmul(h.m[i], sup_on_cell(spec.v, h.z[i], h.z[i + 1])));
    else
      s += xmul(xpow(h.m[i], p), spec.v.integral(h.z[i], h.z[i + 1]));
  }
  return std::isinf(p) ? s : xpow(s, 1 / p);
}

// ---------------------------------------------------------------------------
// Ascent in log coordinates for a scale-invariant log-ratio.

using LogObjective = std::function<double(const std::vector<double>& x, std::vector<double>* grad)>;

struct Ascent {
  std::vector<double> x;
  double value = -kInf;
  int iterations = 0;
};

void renormalize(std::vector<double>& x) {
  double mx = *std::max_element(x.begin(), x.end());
  if (!(mx > 0) || !std::isfinite(mx)) mx = 1;
  for (double& v : x) v = std::max(v / mx, kFloor);
}

Ascent ascend(const LogObjective& f, std::vector<double> x, int max_iter) {
  Ascent out;
  renormalize(x);
  const std::size_t n = x.size();
  std::vector<double> g(n), gn(n), xn(n);
  double val = f(x, &g);
  if (!std::isfinite(val)) return {x, val, 0};
  double eta = 0.5;
  int quiet = 0, it = 0;
  for (; it < max_iter; ++it) {
    double gmax = 0;
    for (std::size_t i = 0; i < n; ++i) gmax = std::max(gmax, std::abs(x[i] * g[i]));
    if (!(gmax > 1e-14)) break;
    bool accepted = false;
    double vn = val;
    while (eta > 1e-10) {
      for (std::size_t i = 0; i < n; ++i) xn[i] = x[i] * std::exp(eta * x[i] * g[i] / gmax);
      renormalize(xn);
      vn = f(xn, &gn);
      if (vn > val) {
        accepted = true;
        break;
      }
      eta *= 0.25;
    }
    if (!accepted) break;
    const double gain = vn - val;
    x.swap(xn);
    g.swap(gn);
    val = vn;
    eta = std::min(eta * 2, 16.0);
    if (!std::isfinite(val)) break;
    quiet = gain < 1e-12 ? quiet + 1 : 0;
    if (quiet >= 5) break;
  }
  return {x, val, it};
}

// Starting points shared by the ascent problems.
std::vector<std::vector<double>> starts(std::size_t n, const std::vector<double>& scale, std::size_t best_vertex,
                                        const std::vector<double>* warm, int count, std::mt19937_64& rng) {
  std::vector<std::vector<double>> out;
  if (warm) out.push_back(*warm);
  std::vector<double> v(n, 1e-8);
  v[best_vertex] = 1;
  out.push_back(v);
  std::vector<double> u(n);
  for (std::size_t i = 0; i < n; ++i) u[i] = scale[i];
  out.push_back(u);
  std::normal_distribution<double> nd(0, 2);
  while (static_cast<int>(out.size()) < std::max(count, 1)) {
    std::vector<double> r(n);
    for (std::size_t i = 0; i < n; ++i) r[i] = scale[i] * std::exp(nd(rng));
    out.push_back(r);
  }
  if (static_cast<int>(out.size()) > std::max(count, 1)) out.resize(static_cast<std::size_t>(std::max(count, 1)));
  return out;
}

std::size_t argmax(const std::vector<double>& v) {
  return static_cast<std::size_t>(std::max_element(v.begin(), v.end()) - v.begin());
}

// Integral of W over (a, b).
double w_integral(const PointwiseWeight& W, double a, double b) {
  auto r = quad::integrate(W.value, a, b, W.breakpoints);
  if (r.divergent) return kInf;
  return r.value;
}

// ---------------------------------------------------------------------------
// Atomic problem for the iterated form with Q < inf on fixed nodes.

class AtomicProblem {
 public:
  AtomicProblem(const IterForm& f, std::vector<double> z, const quad::Fn& rho) : f_(f), z_(std::move(z)) {
    static const GaussRule rule(6);
    const std::size_t n = z_.size();
    e_ = f.Q / f.P;
    Uz_.resize(n);
    rho_.resize(n);
    D_.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      Uz_[i] = f.U(z_[i]);
      rho_[i] = rho(z_[i]);
      D_[i] = Uz_[i] - (i ? Uz_[i - 1] : 0);
    }
    W0_ = w_integral(f.W, 0, z_[0]);
    auto tail = quad::integrate([&](double t) { return xmul(xpow(f.U(t), -e_), f.W.value(t)); }, z_.back(), kInf,
                                f.W.breakpoints);
    T_ = tail.divergent ? kInf : tail.value;
    off_.assign(n + 1, 0);
    for (std::size_t i = 1; i < n; ++i) {
      std::vector<double> t, w;
      auto c = cut(z_[i - 1], z_[i], merged(f.W.breakpoints, f.U.source().breakpoints()));
      for (std::size_t j = 0; j + 1 < c.size(); ++j) log_gauss(rule, c[j], c[j + 1], t, w);
      for (std::size_t g = 0; g < t.size(); ++g) {
        const double Ut = f.U(t[g]);
        Om_.push_back(w[g] * f.W.value(t[g]));
        Ut_.push_back(Ut);
        dU_.push_back(Ut - Uz_[i - 1]);
      }
      off_[i + 1] = Om_.size();
    }
    off_[1] = 0;
  }

  bool unbounded() const { return std::isinf(W0_) || std::isinf(T_); }
  std::size_t size() const { return z_.size(); }
  const std::vector<double>& rho() const { return rho_; }

  // log of the single-atom ratios
  std::vector<double> vertices() const {
    const std::size_t n = z_.size();
    std::vector<double> out(n);
    // int_0^{z_k} W via the nodes, then the decaying part beyond z_k
    std::vector<double> head(n);
    head[0] = W0_;
    for (std::size_t i = 1; i < n; ++i) {
      double s = 0;
      for (std::size_t g = off_[i]; g < off_[i + 1]; ++g) s += Om_[g];
      head[i] = head[i - 1] + s;
    }
    for (std::size_t k = 0; k < n; ++k) {
      double F = head[k];
      for (std::size_t g = off_[k + 1]; g < Om_.size(); ++g) F += Om_[g] * xpow(Uz_[k] / Ut_[g], e_);
      F += xmul(xpow(Uz_[k], e_), T_);
      out[k] = std::log(F) / f_.Q - std::log(rho_[k]);
    }
    return out;
  }

  double operator()(const std::vector<double>& m, std::vector<double>* grad) const {
    const std::size_t n = z_.size();
    const double P = f_.P, Q = f_.Q, e = e_;
    std::vector<double> S(n), y(n), C(n + 1, 0);
    for (std::size_t i = n; i-- > 0;) S[i] = m[i] + (i + 1 < n ? S[i + 1] : 0);
    for (std::size_t i = 0; i < n; ++i) {
      y[i] = std::pow(S[i], P);
      C[i + 1] = C[i] + y[i] * D_[i];
    }
    double F = std::pow(y[0], e) * W0_;
    std::vector<double> A(n + 1, 0), B(n, 0);
    for (std::size_t i = 1; i < n; ++i) {
      for (std::size_t g = off_[i]; g < off_[i + 1]; ++g) {
        const double r = (C[i] + y[i] * dU_[g]) / Ut_[g];
        const double re = std::pow(r, e);
        F += Om_[g] * re;
        const double d = Om_[g] * e * re / r / Ut_[g];
        A[i] += d;
        B[i] += d * dU_[g];
      }
    }
    const double Cn = C[n];
    F += xmul(std::pow(Cn, e), T_);
    const double At = T_ > 0 ? e * std::pow(Cn, e - 1) * T_ : 0;
    const double D = [&] {
      double s = 0;
      for (std::size_t i = 0; i < n; ++i) s += m[i] * rho_[i];
      return s;
    }();
    const double val = std::log(F) / Q - std::log(D);
    if (grad) {
      grad->assign(n, 0);
      double suffixA = At;
      std::vector<double> dS(n);
      for (std::size_t l = n; l-- > 0;) {
        double dy = D_[l] * suffixA + (l ? B[l] : e * std::pow(y[0], e - 1) * W0_);
        dS[l] = dy * P * std::pow(S[l], P - 1);
        suffixA += A[l];
      }
      double run = 0;
      for (std::size_t j = 0; j < n; ++j) {
        run += dS[j];
        (*grad)[j] = run / (Q * F) - rho_[j] / D;
      }
    }
    return val;
  }

 private:
  IterForm f_;
  std::vector<double> z_, Uz_, rho_, D_;
  double e_ = 1, W0_ = 0, T_ = 0;
  std::vector<std::size_t> off_;
  std::vector<double> Om_, Ut_, dU_;
};


// ---------------------------------------------------------------------------
// Atomic problem for the sup form.  For a fixed t only the atoms below t and
// the cheapest atom at or beyond t matter, so the supremum over t is taken
// outside: single atoms are scanned for every node and, when P < 1, the
// fixed-t problem is solved by ascent at the best nodes.

class AtomicSupProblem {
 public:
  AtomicSupProblem(const IterForm& f, std::vector<double> z, const quad::Fn& rho) : f_(f), z_(std::move(z)) {
    static const GaussRule rule(4);
    const std::size_t n = z_.size();
    Uz_.resize(n);
    rho_.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      Uz_[i] = f.U(z_[i]);
      rho_[i] = rho(z_[i]);
    }
    std::vector<double> w;
    auto edges = z_;
    edges.insert(edges.begin(), z_.front() * 1e-4);
    edges.push_back(z_.back() * 1e4);
    const auto bps = merged(f.W.breakpoints, f.U.source().breakpoints());
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
      auto c = cut(edges[i], edges[i + 1], bps);
      for (std::size_t j = 0; j + 1 < c.size(); ++j) log_gauss(rule, c[j], c[j + 1], t_, w);
    }
    for (double x : z_) t_.push_back(x);
    for (double x : bps) t_.push_back(x);
    // prefix best of U(z_i)^{1/P}/rho_i and suffix cheapest rho
    pre_.assign(n + 1, 0);
    pre_arg_.assign(n + 1, 0);
    for (std::size_t i = 0; i < n; ++i) {
      const double v = xdiv(xpow(Uz_[i], 1 / f.P), rho_[i]);
      pre_[i + 1] = std::max(pre_[i], v);
      pre_arg_[i + 1] = v >= pre_[i] ? i : pre_arg_[i];
    }
    suf_.assign(n + 1, kInf);
    suf_arg_.assign(n + 1, n);
    for (std::size_t i = n; i-- > 0;) {
      suf_[i] = std::min(suf_[i + 1], rho_[i]);
      suf_arg_[i] = rho_[i] <= suf_[i + 1] ? i : suf_arg_[i + 1];
    }
  }

  struct Best {
    double value = 0;
    TestFunction h;
  };

  Best solve(int restarts, int max_iter, std::mt19937_64& rng) const {
    const std::size_t n = z_.size();
    std::vector<std::pair<double, std::size_t>> scored;
    Best best;
    for (std::size_t j = 0; j < t_.size(); ++j) {
      const double t = t_[j];
      const double Ut = f_.U(t);
      const double W = std::max(f_.W.left(t), f_.W.right(t));
      const std::size_t k = node_cell(t);
      double v = xmul(W, xdiv(pre_[k], xpow(Ut, 1 / f_.P)));
      std::size_t at = pre_arg_[k];
      if (k < n) {
        const double b = xdiv(W, suf_[k]);
        if (b > v) {
          v = b;
          at = suf_arg_[k];
        }
      }
      scored.emplace_back(v, j);
      if (v > best.value) best = {v, TestFunction::atoms({z_[at]}, {1.0})};
    }
    if (f_.P >= 1 || std::isinf(best.value)) return best;
    std::sort(scored.begin(), scored.end(), std::greater<>());
    const std::size_t top = std::min<std::size_t>(scored.size(), 8);
    for (std::size_t s = 0; s < top; ++s) {
      auto cand = fixed_t(t_[scored[s].second], restarts, max_iter, rng);
      if (cand.value > best.value) best = std::move(cand);
    }
    return best;
  }

 private:
  std::size_t node_cell(double t) const {
    return static_cast<std::size_t>(std::lower_bound(z_.begin(), z_.end(), t) - z_.begin());
  }

  Best fixed_t(double t, int restarts, int max_iter, std::mt19937_64& rng) const {
    const std::size_t k = node_cell(t), n = z_.size();
    const double Ut = f_.U(t), W = std::max(f_.W.left(t), f_.W.right(t)), P = f_.P;
    std::vector<double> loc, rho, D;
    for (std::size_t i = 0; i < k; ++i) {
      loc.push_back(z_[i]);
      rho.push_back(rho_[i]);
      D.push_back(Uz_[i] - (i ? Uz_[i - 1] : 0));
    }
    if (k < n) {
      loc.push_back(z_[suf_arg_[k]]);
      rho.push_back(suf_[k]);
      D.push_back(Ut - (k ? Uz_[k - 1] : 0));
    }
    const std::size_t m = loc.size();
    if (m == 0 || !(W > 0)) return {};
    LogObjective obj = [&](const std::vector<double>& x, std::vector<double>* g) {
      std::vector<double> S(m);
      for (std::size_t i = m; i-- > 0;) S[i] = x[i] + (i + 1 < m ? S[i + 1] : 0);
      double J = 0, den = 0;
      for (std::size_t i = 0; i < m; ++i) {
        J += std::pow(S[i], P) * D[i];
        den += x[i] * rho[i];
      }
      if (g) {
        g->assign(m, 0);
        double run = 0;
        for (std::size_t i = 0; i < m; ++i) {
          run += P * std::pow(S[i], P - 1) * D[i];
          (*g)[i] = run / (P * J) - rho[i] / den;
        }
      }
      return std::log(J) / P - std::log(den);
    };
    std::vector<double> scale(m), vert(m);
    for (std::size_t i = 0; i < m; ++i) {
      scale[i] = 1 / rho[i];
      vert[i] = xpow(i + 1 < m || k == n ? Uz_[i] : Ut, 1 / P) / rho[i];
    }
    Best best;
    for (auto& x0 : starts(m, scale, argmax(vert), nullptr, restarts, rng)) {
      auto a = ascend(obj, x0, max_iter);
      const double v = W * std::exp(a.value) / std::pow(Ut, 1 / P);
      if (v > best.value) best = {v, TestFunction::atoms(loc, a.x)};
    }
    return best;
  }

  IterForm f_;
  std::vector<double> z_, Uz_, rho_, t_;
  std::vector<double> pre_, suf_;
  std::vector<std::size_t> pre_arg_, suf_arg_;
};

// ---------------------------------------------------------------------------
// Linear problems: maximize ||K a||_{q, Om} / ||L a||_{p, nu} over a >= 0,
// with L the identity (step densities) or suffix sums (monotone steps).

class LinearProblem {
 public:
  std::size_t n = 0, M = 0;
  std::vector<double> K;  // n x M
  std::vector<double> Om, nu;
  double p = 1, q = 1;
  bool suffix = false;
  bool unbounded = false;

  double operator()(const std::vector<double>& a, std::vector<double>* grad) const {
    std::vector<double> y(M, 0);
    for (std::size_t i = 0; i < n; ++i) {
      const double ai = a[i];
      const double* row = &K[i * M];
      for (std::size_t j = 0; j < M; ++j) y[j] += ai * row[j];
    }
    double F = 0;
    std::vector<double> dy(M);
    for (std::size_t j = 0; j < M; ++j) {
      const double yq = std::pow(y[j], q);
      F += Om[j] * yq;
      dy[j] = Om[j] * q * yq / y[j];
    }
    std::vector<double> Fi(n);
    double G = 0;
    if (suffix) {
      double s = 0;
      for (std::size_t i = n; i-- > 0;) Fi[i] = s += a[i];
    } else {
      Fi = a;
    }
    for (std::size_t i = 0; i < n; ++i) G += nu[i] * std::pow(Fi[i], p);
    if (grad) {
      grad->assign(n, 0);
      std::vector<double> dG(n);
      for (std::size_t i = 0; i < n; ++i) dG[i] = p * nu[i] * std::pow(Fi[i], p - 1);
      if (suffix)
        for (std::size_t i = 1; i < n; ++i) dG[i] += dG[i - 1];
      for (std::size_t i = 0; i < n; ++i) {
        const double* row = &K[i * M];
        double d = 0;
        for (std::size_t j = 0; j < M; ++j) d += dy[j] * row[j];
        (*grad)[i] = d / (q * F) - dG[i] / (p * G);
      }
    }
    return std::log(F) / q - std::log(G) / p;
  }

  std::vector<double> vertices() const {
    std::vector<double> out(n);
    double cum = 0;
    for (std::size_t i = 0; i < n; ++i) {
      double F = 0;
      for (std::size_t j = 0; j < M; ++j) F += Om[j] * std::pow(K[i * M + j], q);
      cum += nu[i];
      out[i] = std::log(F) / q - std::log(suffix ? cum : nu[i]) / p;
    }
    return out;
  }
};

// x nodes for the outer norm: head node, Gauss nodes in log x, tail node.
struct OuterNodes {
  std::vector<double> x, om;  // om already includes w (and the tail factors)
  bool unbounded = false;
};

OuterNodes outer_nodes(const InequalitySpec& spec, const CumulativeWeight& U, double lo, double hi, int cells) {
  static const GaussRule rule(4);
  OuterNodes o;
  const double x0 = lo * 1e-3, x1 = hi * 1e3;
  const auto bps = merged(spec.w.breakpoints(), spec.u.breakpoints());
  const auto g = log_grid(x0, x1, cells + 1);
  std::vector<double> t, w;
  for (std::size_t i = 0; i + 1 < g.size(); ++i) {
    auto c = cut(g[i], g[i + 1], bps);
    for (std::size_t j = 0; j + 1 < c.size(); ++j) log_gauss(rule, c[j], c[j + 1], t, w);
  }
  const double q = spec.ex.q;
  const double head = spec.w.integral(0, x0);
  auto tail = quad::integrate([&](double s) { return xmul(xpow(U(s), -q), spec.w(s)); }, x1, kInf, bps);
  const double T = tail.divergent ? kInf : xmul(xpow(U(x1), q), tail.value);
  o.unbounded = std::isinf(head) || std::isinf(T);
  o.x.push_back(x0);
  o.om.push_back(head);
  for (std::size_t j = 0; j < t.size(); ++j) {
    o.x.push_back(t[j]);
    o.om.push_back(w[j] * spec.w(t[j]));
  }
  o.x.push_back(x1);
  o.om.push_back(T);
  return o;
}

// Per-cell Gauss nodes of the step kernel, reused for every x.
struct CellNodes {
  std::vector<double> Ut, wt;
  std::vector<std::size_t> off;
};

CellNodes cell_nodes(const CumulativeWeight& U, const std::vector<double>& edges) {
  static const GaussRule rule(8);
  CellNodes c;
  const auto ubps = U.source().breakpoints();
  std::vector<double> t;
  c.off.push_back(0);
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    auto cs = cut(edges[i], edges[i + 1], ubps);
    for (std::size_t j = 0; j + 1 < cs.size(); ++j) log_gauss(rule, cs[j], cs[j + 1], t, c.wt);
    c.off.push_back(t.size());
  }
  for (double s : t) c.Ut.push_back(U(s));
  return c;
}

double cell_kernel(const CellNodes& c, std::size_t i, double Ux) {
  double k = 0;
  for (std::size_t g = c.off[i]; g < c.off[i + 1]; ++g) k += c.wt[g] / (Ux + c.Ut[g]);
  return k;
}

LinearProblem stieltjes_problem(const InequalitySpec& spec, const std::vector<double>& edges) {
  LinearProblem lp;
  const auto U = spec.U();
  const std::size_t n = edges.size() - 1;
  auto o = outer_nodes(spec, U, edges.front(), edges.back(), static_cast<int>(n) + 24);
  lp.n = n;
  lp.M = o.x.size();
  lp.Om = o.om;
  lp.p = spec.ex.p;
  lp.q = spec.ex.q;
  lp.unbounded = o.unbounded;
  const auto cells = cell_nodes(U, edges);
  std::vector<double> Ux(lp.M);
  for (std::size_t j = 0; j < lp.M; ++j) Ux[j] = U(o.x[j]);
  lp.K.resize(n * lp.M);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < lp.M; ++j) lp.K[i * lp.M + j] = cell_kernel(cells, i, Ux[j]);
  lp.nu.resize(n);
  for (std::size_t i = 0; i < n; ++i) lp.nu[i] = spec.v.integral(edges[i], edges[i + 1]);
  return lp;
}

LinearProblem monotone_problem(const InequalitySpec& spec, const std::vector<double>& z) {
  LinearProblem lp;
  const auto U = spec.U();
  const auto V = spec.V();
  auto o = outer_nodes(spec, U, z.front(), z.back(), static_cast<int>(z.size()) + 24);
  lp.n = z.size();
  lp.M = o.x.size();
  lp.Om = o.om;
  lp.p = spec.ex.p;
  lp.q = spec.ex.q;
  lp.suffix = true;
  lp.unbounded = o.unbounded;
  std::vector<double> Ux(lp.M), Uz(lp.n);
  for (std::size_t j = 0; j < lp.M; ++j) Ux[j] = U(o.x[j]);
  for (std::size_t i = 0; i < lp.n; ++i) Uz[i] = U(z[i]);
  lp.K.resize(lp.n * lp.M);
  for (std::size_t i = 0; i < lp.n; ++i)
    for (std::size_t j = 0; j < lp.M; ++j) lp.K[i * lp.M + j] = o.x[j] <= z[i] ? 1.0 : Uz[i] / Ux[j];
  lp.nu.resize(lp.n);
  double prev = 0;
  for (std::size_t i = 0; i < lp.n; ++i) {
    const double Vi = V(z[i]);
    lp.nu[i] = Vi - prev;
    prev = Vi;
  }
  return lp;
}

struct Solved {
  TestFunction h;
  std::string method;
  int restarts = 0;
  bool unbounded = false;
};

std::vector<double> ascend_all(const LogObjective& obj, std::size_t n, const std::vector<double>& scale,
                               const std::vector<double>& vert, const std::vector<double>* warm,
                               const OracleOptions& opt, std::mt19937_64& rng, int& used) {
  std::vector<double> best;
  double bv = -kInf;
  for (auto& x0 : starts(n, scale, argmax(vert), warm, opt.restarts, rng)) {
    auto a = ascend(obj, x0, opt.max_iterations);
    ++used;
    if (a.value > bv) {
      bv = a.value;
      best = a.x;
    }
  }
  return best;
}

Solved solve_linear(const LinearProblem& lp, const std::vector<double>* warm, const OracleOptions& opt,
                    std::mt19937_64& rng) {
  Solved s;
  s.unbounded = lp.unbounded;
  std::vector<double> scale(lp.n);
  for (std::size_t i = 0; i < lp.n; ++i) scale[i] = xpow(std::max(lp.nu[i], 1e-300), -1 / lp.p);
  const auto vert = lp.vertices();
  if (lp.p == 1 && lp.q >= 1 && !lp.suffix) {
    // convex ratio on a simplex: the best single cell is optimal
    s.h.m.assign(lp.n, 0);
    s.h.m[argmax(vert)] = 1;
    s.method = "single atom";
    return s;
  }
  LogObjective obj = [&lp](const std::vector<double>& a, std::vector<double>* g) { return lp(a, g); };
  s.h.m = ascend_all(obj, lp.n, scale, vert, warm, opt, rng, s.restarts);
  s.method = "ascent";
  return s;
}

// ---------------------------------------------------------------------------
// Grid levels

// Kinks of closed-form weights; tabulated weights are already resolved by the grid.
std::vector<double> weight_breakpoints(const WeightFunction& u, const WeightFunction& v, const WeightFunction& w) {
  std::vector<double> out;
  for (const WeightFunction* f : {&u, &v, &w})
    if (f->closed_form()) out = merged(out, f->breakpoints());
  return out;
}

// Log grid of the window plus the weight breakpoints inside it.
std::vector<double> level_grid(const OracleOptions& opt, int n, const std::vector<double>& bps) {
  auto g = log_grid(opt.window.lo, opt.window.hi, n);
  for (double b : bps)
    if (b > opt.window.lo && b < opt.window.hi) g.push_back(b);
  std::sort(g.begin(), g.end());
  std::vector<double> out;
  for (double x : g)
    if (out.empty() || x > out.back() * (1 + 1e-9)) out.push_back(x);
  return out;
}

using LevelSolver = std::function<Solved(const std::vector<double>& grid, const TestFunction* prev, std::mt19937_64&)>;
using Exact = std::function<Ratio(const TestFunction&)>;

// Drops masses that only carry the ascent floor.
void prune(TestFunction& h) {
  if (h.m.empty()) return;
  const double mx = *std::max_element(h.m.begin(), h.m.end());
  for (double& x : h.m)
    if (x < 1e-30 * mx) x = 0;
}

int points_at(const OracleOptions& opt, int level) { return (std::max(opt.atoms, 2) - 1) * (1 << level) + 1; }

OracleEstimate run_levels(const std::string& id, const OracleOptions& opt, const std::vector<double>& bps,
                          const LevelSolver& solve, const Exact& exact) {
  OracleEstimate est;
  est.inequality = id;
  std::mt19937_64 rng(opt.seed);
  TestFunction prev;
  bool have_prev = false;
  double prev_c = 0;
  const int levels = std::max(opt.levels, 1);
  for (int l = 0; l < levels; ++l) {
    const int n = points_at(opt, l);
    const auto grid = level_grid(opt, n, bps);
    Solved s = solve(grid, have_prev ? &prev : nullptr, rng);
    est.restarts += s.restarts;
    est.level_points.push_back(static_cast<int>(grid.size()));
    if (s.unbounded) {
      est.unbounded = true;
      est.c_lo = kInf;
      est.method = s.method.empty() ? "divergent tail" : s.method;
      est.level_values.push_back(kInf);
      est.trace.push_back("level " + std::to_string(l) + ": left-hand side infinite for every nonzero test function");
      est.stable = true;
      return est;
    }
    prune(s.h);
    const Ratio r = exact(s.h);
    std::ostringstream line;
    line << "level " << l << ": " << grid.size() << " points, " << s.method << ", ratio " << r.ratio;
    est.trace.push_back(line.str());
    if (r.ratio > est.c_lo || !have_prev) {
      est.c_lo = std::max(est.c_lo, r.ratio);
      est.lhs = r.lhs;
      est.rhs = r.rhs;
      est.maximizer = s.h;
      est.method = s.method;
    }
    est.level_values.push_back(est.c_lo);
    if (l > 0) est.stable = std::abs(est.c_lo - prev_c) <= 0.05 * est.c_lo;
    prev_c = est.c_lo;
    prev = s.h;
    have_prev = true;
    if (!(est.c_lo < kUnbounded)) {
      est.unbounded = true;
      est.c_lo = kInf;
      break;
    }
  }
  return est;
}

// Previous maximizer carried to a finer grid that contains the old one.
std::vector<double> warm_masses(const TestFunction* prev, const std::vector<double>& grid, bool steps) {
  if (!prev) return {};
  const std::size_t n = steps ? grid.size() - 1 : grid.size();
  std::vector<double> x(n, kFloor);
  if (!steps) {
    for (std::size_t k = 0; k < prev->m.size(); ++k) {
      auto it = std::lower_bound(grid.begin(), grid.end(), prev->z[k] * (1 - 1e-12));
      if (it != grid.end()) x[static_cast<std::size_t>(it - grid.begin())] += prev->m[k];
    }
    return x;
  }
  for (std::size_t j = 0; j < n; ++j) {
    const double mid = std::sqrt(grid[j] * grid[j + 1]);
    auto it = std::upper_bound(prev->z.begin(), prev->z.end(), mid);
    if (it == prev->z.begin() || it == prev->z.end()) continue;
    x[j] = std::max(prev->m[static_cast<std::size_t>(it - prev->z.begin()) - 1], kFloor);
  }
  return x;
}

LevelSolver atomic_solver(const IterForm& f, const quad::Fn& rho, const OracleOptions& opt) {
  return [f, rho, opt](const std::vector<double>& grid, const TestFunction* prev, std::mt19937_64& rng) {
    Solved s;
    if (std::isinf(f.Q)) {
      AtomicSupProblem sp(f, grid, rho);
      auto b = sp.solve(opt.restarts, opt.max_iterations, rng);
      s.h = b.h;
      s.method = f.P >= 1 ? "single atom" : "ascent";
      s.restarts = f.P >= 1 ? 0 : opt.restarts;
      s.unbounded = std::isinf(b.value);
      return s;
    }
    AtomicProblem ap(f, grid, rho);
    if (ap.unbounded()) {
      s.unbounded = true;
      return s;
    }
    const auto vert = ap.vertices();
    s.h = TestFunction::atoms(grid, std::vector<double>(grid.size(), 0));
    if (f.P >= 1 && f.Q >= 1) {
      s.h.m[argmax(vert)] = 1;
      s.method = "single atom";
      return s;
    }
    std::vector<double> scale(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) scale[i] = 1 / std::max(ap.rho()[i], 1e-300);
    auto warm = warm_masses(prev, grid, false);
    LogObjective obj = [&ap](const std::vector<double>& m, std::vector<double>* g) { return ap(m, g); };
    s.h.m = ascend_all(obj, grid.size(), scale, vert, prev ? &warm : nullptr, opt, rng, s.restarts);
    s.method = "ascent";
    return s;
  };
}

// Stieltjes with the sup norm on the left: for each x the best step density
// is explicit by duality.
Solved stieltjes_dual(const InequalitySpec& spec, const std::vector<double>& edges) {
  Solved s;
  s.method = "dual";
  const auto U = spec.U();
  const std::size_t n = edges.size() - 1;
  const double p = spec.ex.p;
  std::vector<double> nu(n);
  for (std::size_t i = 0; i < n; ++i)
    nu[i] = std::isinf(p) ? sup_on_cell(spec.v, edges[i], edges[i + 1]) : spec.v.integral(edges[i], edges[i + 1]);
  s.h = TestFunction::steps(edges, std::vector<double>(n, 0));
  if (std::isinf(p)) {
    for (std::size_t i = 0; i < n; ++i) {
      if (!(nu[i] > 0)) {
        s.unbounded = true;
        return s;
      }
      s.h.m[i] = 1 / nu[i];
    }
    return s;
  }
  auto o = outer_nodes(spec, U, edges.front(), edges.back(), static_cast<int>(n) + 24);
  const auto cells = cell_nodes(U, edges);
  double best = -1;
  std::vector<double> k(n);
  const double pp = p > 1 ? Exponents::conjugate(p) : kInf;
  for (std::size_t j = 1; j + 1 < o.x.size(); ++j) {
    const double W = spec.w(o.x[j]);
    if (!(W > 0)) continue;
    const double Ux = U(o.x[j]);
    for (std::size_t i = 0; i < n; ++i) k[i] = cell_kernel(cells, i, Ux);
    double val = 0;
    if (p == 1) {
      for (std::size_t i = 0; i < n; ++i) val = std::max(val, xdiv(k[i], nu[i]));
    } else {
      for (std::size_t i = 0; i < n; ++i) val += xmul(xpow(k[i], pp), xpow(nu[i], 1 - pp));
      val = xpow(val, 1 / pp);
    }
    val *= W;
    if (val > best) {
      best = val;
      if (std::isinf(val)) {
        s.unbounded = true;
        return s;
      }
      std::fill(s.h.m.begin(), s.h.m.end(), 0.0);
      if (p == 1) {
        std::size_t at = 0;
        for (std::size_t i = 1; i < n; ++i)
          if (xdiv(k[i], nu[i]) > xdiv(k[at], nu[at])) at = i;
        s.h.m[at] = 1;
      } else {
        for (std::size_t i = 0; i < n; ++i) s.h.m[i] = xpow(xdiv(k[i], nu[i]), pp - 1);
      }
    }
  }
  return s;
}

}  // namespace

// ---------------------------------------------------------------------------

TestFunction TestFunction::atoms(std::vector<double> z, std::vector<double> m) {
  TestFunction t{Kind::Atoms, std::move(z), std::move(m)};
  t.validate();
  return t;
}

TestFunction TestFunction::monotone(std::vector<double> z, std::vector<double> m) {
  TestFunction t{Kind::MonotoneSteps, std::move(z), std::move(m)};
  t.validate();
  return t;
}

TestFunction TestFunction::steps(std::vector<double> edges, std::vector<double> heights) {
  TestFunction t{Kind::Steps, std::move(edges), std::move(heights)};
  t.validate();
  return t;
}

void TestFunction::validate() const {
  const std::size_t want = kind == Kind::Steps ? m.size() + 1 : m.size();
  if (z.size() != want) fail(ErrorKind::InvalidArgument, "test function: location and mass counts do not match");
  for (std::size_t i = 0; i < z.size(); ++i) {
    const bool zero_ok = kind == Kind::Steps && i == 0 && z[i] == 0;  // a step on (0, z_1]
    if (!(z[i] > 0 || zero_ok) || !std::isfinite(z[i]))
      fail(ErrorKind::InvalidArgument, "test function locations must be in (0, inf)");
  }
  for (double x : m)
    if (!(x >= 0) || !std::isfinite(x)) fail(ErrorKind::InvalidArgument, "test function masses must be finite and >= 0");
  if (kind == Kind::Steps)
    for (std::size_t i = 0; i + 1 < z.size(); ++i)
      if (!(z[i] < z[i + 1])) fail(ErrorKind::InvalidArgument, "step edges must be increasing");
}

bool TestFunction::is_zero() const {
  return std::all_of(m.begin(), m.end(), [](double x) { return x == 0; });
}

namespace {

void require(const InequalitySpec& spec, const TestFunction& h) {
  h.validate();
  using K = InequalityKind;
  const auto want = [&] {
    switch (spec.kind) {
      case K::IteratedHardy:
      case K::IteratedHardySup:
        return TestFunction::Kind::Atoms;
      case K::MonotoneCone:
      case K::MonotoneConeSup:
        return TestFunction::Kind::MonotoneSteps;
      default:
        return TestFunction::Kind::Steps;
    }
  }();
  if (h.kind != want) fail(ErrorKind::InvalidArgument, "test function kind does not fit the inequality");
}

}  // namespace

double lhs_31(const InequalitySpec& spec, const TestFunction& h) {
  if (spec.kind != InequalityKind::IteratedHardy) fail(ErrorKind::InvalidArgument, "lhs_31 needs inequality 3.1");
  require(spec, h);
  return iter_lhs(form_of(spec), h);
}

double lhs_32(const InequalitySpec& spec, const TestFunction& h) {
  if (spec.kind != InequalityKind::IteratedHardySup) fail(ErrorKind::InvalidArgument, "lhs_32 needs inequality 3.2");
  require(spec, h);
  return iter_lhs(form_of(spec), h);
}

double lhs_value(const InequalitySpec& spec, const TestFunction& h) {
  require(spec, h);
  switch (spec.kind) {
    case InequalityKind::IteratedHardy:
    case InequalityKind::IteratedHardySup:
      return iter_lhs(form_of(spec), h);
    case InequalityKind::MonotoneCone:
    case InequalityKind::MonotoneConeSup:
      return h.is_zero() ? 0 : monotone_lhs(spec, h);
    default:
      return steps_lhs(spec, h);
  }
}

double rhs_value(const InequalitySpec& spec, const TestFunction& h) {
  require(spec, h);
  switch (spec.kind) {
    case InequalityKind::IteratedHardy:
    case InequalityKind::IteratedHardySup: {
      const WeightFunction& v = spec.v;
      return atoms_rhs(h, [&v](double z) { return v(z); });
    }
    case InequalityKind::MonotoneCone:
    case InequalityKind::MonotoneConeSup:
      return monotone_rhs(spec, h);
    default:
      return steps_rhs(spec, h);
  }
}

Ratio test_ratio(const InequalitySpec& spec, const TestFunction& h) {
  Ratio r;
  r.rhs = rhs_value(spec, h);
  r.lhs = r.rhs == 0 && h.is_zero() ? 0 : lhs_value(spec, h);
  r.ratio = xdiv(r.lhs, r.rhs);
  return r;
}

namespace {

// Phi(z) = int_0^z w + U(z) int_z^inf w/U from prefix tables on a fixed grid.
class KernelTable {
 public:
  explicit KernelTable(const InequalitySpec& spec) : w_(spec.w), U_(spec.U()) {
    auto pts = merged(spec.w.breakpoints(), spec.u.breakpoints());
    for (double x : log_grid(1e-14, 1e14, 28 * 8 + 1)) pts.push_back(x);
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    x_ = pts;
    const std::size_t n = x_.size();
    tail_.assign(n, 0);
    auto r = quad::integrate(wu(), x_.back(), kInf);
    tail_[n - 1] = r.divergent ? kInf : r.value;
    for (std::size_t i = n - 1; i-- > 0;) tail_[i] = tail_[i + 1] + quad::integrate_value(wu(), x_[i], x_[i + 1]);
  }

  double operator()(double z) const {
    const std::size_t k = static_cast<std::size_t>(std::lower_bound(x_.begin(), x_.end(), z) - x_.begin());
    double t;
    if (k == x_.size()) {
      auto r = quad::integrate(wu(), z, kInf);
      t = r.divergent ? kInf : r.value;
    } else {
      t = tail_[k] + (z < x_[k] ? quad::integrate_value(wu(), z, x_[k]) : 0);
    }
    return w_.integral(0, z) + xmul(U_(z), t);
  }

 private:
  quad::Fn wu() const {
    return [this](double t) { return xdiv(w_(t), U_(t)); };
  }
  WeightFunction w_;
  CumulativeWeight U_;
  std::vector<double> x_, tail_;
};

}  // namespace

double kernel_phi(const InequalitySpec& spec, double z) {
  if (!(z > 0)) fail(ErrorKind::Domain, "kernel point must be positive");
  const auto U = spec.U();
  const double Uz = U(z);
  auto bps = merged(spec.w.breakpoints(), spec.u.breakpoints());
  bps.push_back(z);
  auto r = quad::integrate([&](double t) { return xmul(std::min(1.0, xdiv(Uz, U(t))), spec.w(t)); }, 0, kInf, bps);
  if (r.divergent) return kInf;
  if (!r.converged) fail(ErrorKind::Numerical, "kernel integral did not converge");
  return r.value;
}

KernelConstant exact_kernel_constant(const InequalitySpec& spec, const Window& window) {
  const bool integral = spec.kind == InequalityKind::IteratedHardy && spec.ex.p == 1 && spec.ex.q == 1;
  const bool sup = spec.kind == InequalityKind::IteratedHardySup && spec.ex.p == 1;
  if (!integral && !sup) fail(ErrorKind::InvalidArgument, "exact kernel constant needs (p, q) = (1, 1) or (1, inf)");
  const auto U = spec.U();
  std::shared_ptr<MajorantEvaluator> maj;
  std::shared_ptr<KernelTable> table;
  if (sup)
    maj = std::make_shared<MajorantEvaluator>(PointwiseWeight::from(spec.w), U, 1.0, window);
  else
    table = std::make_shared<KernelTable>(spec);
  auto phi = [&](double z) { return integral ? (*table)(z) : maj->min_form(z); };
  auto bps = merged(spec.v.breakpoints(), spec.w.breakpoints());
  bps = merged(bps, spec.u.breakpoints());
  RunningSup rs([&](double z) { return xdiv(phi(z), spec.v.left(z)); },
                [&](double z) { return xdiv(phi(z), spec.v.right(z)); }, bps, window.lo * 1e-4, window.hi * 1e4, 24);
  KernelConstant k;
  k.value = rs.global();
  k.argmax = quad::sup_scan([&](double z) { return xdiv(phi(z), spec.v(z)); }, window.lo, window.hi, 128).argmax;
  return k;
}

ReducedMonotone reduce_monotone(const InequalitySpec& spec) {
  if (spec.kind != InequalityKind::MonotoneCone && spec.kind != InequalityKind::MonotoneConeSup)
    fail(ErrorKind::InvalidArgument, "reduction needs a monotone-cone inequality");
  ReducedMonotone r;
  r.u = spec.u;
  r.v = spec.v;
  r.w = spec.w;
  r.p = spec.ex.p;
  r.P = 1 / spec.ex.p;
  r.sup = spec.ex.q_infinite();
  r.Q = r.sup ? kInf : spec.ex.q / spec.ex.p;
  return r;
}

TestFunction monotone_to_atoms(const TestFunction& f, double p) {
  if (f.kind != TestFunction::Kind::MonotoneSteps) fail(ErrorKind::InvalidArgument, "expected monotone steps");
  Monotone M(CumulativeWeight(), f);
  std::vector<double> m(M.z.size());
  for (std::size_t i = 0; i < M.z.size(); ++i) m[i] = std::max(0.0, xpow(M.F[i], p) - xpow(M.F[i + 1], p));
  return TestFunction::atoms(M.z, m);
}

TestFunction atoms_to_monotone(const TestFunction& h, double p) {
  if (h.kind != TestFunction::Kind::Atoms) fail(ErrorKind::InvalidArgument, "expected atoms");
  AtomicJ J(CumulativeWeight(), h, 1);
  const std::size_t n = J.z.size();
  std::vector<double> a(n);
  for (std::size_t i = 0; i < n; ++i)
    a[i] = std::max(0.0, xpow(J.S[i], 1 / p) - (i + 1 < n ? xpow(J.S[i + 1], 1 / p) : 0));
  return TestFunction::monotone(J.z, a);
}

double reduced_lhs(const ReducedMonotone& r, const TestFunction& h) {
  if (h.kind != TestFunction::Kind::Atoms) fail(ErrorKind::InvalidArgument, "expected atoms");
  h.validate();
  return iter_lhs(form_of(r), h);
}

double reduced_rhs(const ReducedMonotone& r, const TestFunction& h) {
  if (h.kind != TestFunction::Kind::Atoms) fail(ErrorKind::InvalidArgument, "expected atoms");
  h.validate();
  if (h.is_zero()) return 0;
  if (!r.v.integrable_at_zero()) return kInf;
  const CumulativeWeight V(r.v);
  return atoms_rhs(h, [&V](double z) { return V(z); });
}

OracleEstimate maximize_reduced(const ReducedMonotone& r, const OracleOptions& opt) {
  if (!r.v.integrable_at_zero()) {
    OracleEstimate e;
    e.inequality = r.sup ? "5.3 reduced" : "5.1 reduced";
    e.method = "trivial";
    e.trace.push_back("V(0+) is infinite: the right-hand side is infinite for every nonzero test function");
    return e;
  }
  const CumulativeWeight V(r.v);
  quad::Fn rho = [V](double z) { return V(z); };
  auto est = run_levels(r.sup ? "5.3 reduced" : "5.1 reduced", opt, weight_breakpoints(r.u, r.v, r.w), atomic_solver(form_of(r), rho, opt), [&](const TestFunction& h) {
    Ratio x;
    x.lhs = reduced_lhs(r, h);
    x.rhs = reduced_rhs(r, h);
    x.ratio = xdiv(x.lhs, x.rhs);
    return x;
  });
  return est;
}

FubiniCheck fubini_check(const WeightFunction& u, const TestFunction& h, double x) {
  if (!(x > 0) || !std::isfinite(x)) fail(ErrorKind::Domain, "x must be in (0, inf)");
  if (h.kind == TestFunction::Kind::MonotoneSteps) fail(ErrorKind::InvalidArgument, "expected atoms or steps");
  h.validate();
  const CumulativeWeight U(u);
  const double Ux = U(x);
  const bool steps = h.kind == TestFunction::Kind::Steps;
  const std::size_t n = h.m.size();
  // H(t) = int_t^inf h
  auto H = [&](double t) {
    double s = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (steps) {
        const double a = std::max(t, h.z[i]), b = h.z[i + 1];
        if (b > a) s += h.m[i] * (b - a);
      } else if (h.z[i] > t) {
        s += h.m[i];
      }
    }
    return s;
  };
  auto bps = merged(h.z, u.breakpoints());
  FubiniCheck c;
  c.fubini_lhs = quad::integrate_value([&](double t) { return xmul(H(t), u(t)); }, 0, x, bps);
  auto against = [&](const std::function<double(double, double)>& k) {
    double s = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (!(h.m[i] > 0)) continue;
      if (steps) {
        auto cb = bps;
        cb.push_back(x);
        s += h.m[i] * quad::integrate_value([&](double t) { return k(t, U(t)); }, h.z[i], h.z[i + 1], cb);
      } else {
        s += h.m[i] * k(h.z[i], U(h.z[i]));
      }
    }
    return s;
  };
  c.fubini_rhs = against([&](double, double Us) { return std::min(Ux, Us); });
  c.kernel = Ux * against([&](double, double Us) { return Us / (Ux + Us); });
  c.residual = std::abs(c.fubini_lhs - c.fubini_rhs) / std::max(std::abs(c.fubini_rhs), 1e-300);
  c.kernel_ratio = xdiv(c.kernel, c.fubini_rhs);
  return c;
}

ReducedStieltjes reduce_stieltjes(const InequalitySpec& spec) {
  if (spec.kind != InequalityKind::Stieltjes && spec.kind != InequalityKind::StieltjesSup)
    fail(ErrorKind::InvalidArgument, "reduction needs a Stieltjes inequality");
  return {spec.u, spec.v, spec.w, spec.ex.p, spec.ex.q};
}

OracleEstimate maximize_ratio(const InequalitySpec& spec, const OracleOptions& opt) {
  spec.validate();
  const std::string id = inequality_id(spec.kind);
  Exact exact = [&spec](const TestFunction& h) { return test_ratio(spec, h); };
  switch (spec.kind) {
    case InequalityKind::IteratedHardy:
    case InequalityKind::IteratedHardySup: {
      const WeightFunction v = spec.v;
      quad::Fn rho = [v](double z) { return v(z); };
      return run_levels(id, opt, weight_breakpoints(spec.u, spec.v, spec.w), atomic_solver(form_of(spec), rho, opt), exact);
    }
    case InequalityKind::MonotoneCone: {
      if (!spec.v.integrable_at_zero()) {
        OracleEstimate e;
        e.inequality = id;
        e.method = "trivial";
        e.trace.push_back("V(0+) is infinite: every nonzero nonincreasing f has infinite norm");
        return e;
      }
      LevelSolver solve = [&spec, &opt](const std::vector<double>& grid, const TestFunction* prev, std::mt19937_64& rng) {
        const auto lp = monotone_problem(spec, grid);
        auto warm = warm_masses(prev, grid, false);
        Solved s = solve_linear(lp, prev ? &warm : nullptr, opt, rng);
        s.h = TestFunction::monotone(grid, s.h.m);
        return s;
      };
      return run_levels(id, opt, weight_breakpoints(spec.u, spec.v, spec.w), solve, exact);
    }
    case InequalityKind::MonotoneConeSup: {
      const auto r = reduce_monotone(spec);
      auto red = maximize_reduced(r, opt);
      OracleEstimate est;
      est.inequality = id;
      est.method = "reduced";
      est.restarts = red.restarts;
      est.level_points = red.level_points;
      est.trace = red.trace;
      if (red.unbounded) {
        est.unbounded = true;
        est.c_lo = kInf;
        return est;
      }
      if (red.maximizer.m.empty()) return est;
      est.maximizer = atoms_to_monotone(red.maximizer, spec.ex.p);
      const Ratio x = test_ratio(spec, est.maximizer);
      est.c_lo = x.ratio;
      est.lhs = x.lhs;
      est.rhs = x.rhs;
      for (double c : red.level_values) est.level_values.push_back(xpow(c, 1 / spec.ex.p));
      est.stable = red.stable;
      est.trace.push_back("reduced constant " + std::to_string(red.c_lo) + " maps to c = C^(1/p)");
      return est;
    }
    case InequalityKind::Stieltjes: {
      LevelSolver solve = [&spec, &opt](const std::vector<double>& grid, const TestFunction* prev, std::mt19937_64& rng) {
        Solved s;
        if (spec.ex.p_infinite()) {
          s = stieltjes_dual(spec, grid);
          s.method = "closed form";
          return s;
        }
        const auto lp = stieltjes_problem(spec, grid);
        auto warm = warm_masses(prev, grid, true);
        s = solve_linear(lp, prev ? &warm : nullptr, opt, rng);
        if (!s.unbounded) s.h = TestFunction::steps(grid, s.h.m);
        return s;
      };
      return run_levels(id, opt, weight_breakpoints(spec.u, spec.v, spec.w), solve, exact);
    }
    case InequalityKind::StieltjesSup: {
      LevelSolver solve = [&spec](const std::vector<double>& grid, const TestFunction*, std::mt19937_64&) {
        return stieltjes_dual(spec, grid);
      };
      return run_levels(id, opt, weight_breakpoints(spec.u, spec.v, spec.w), solve, exact);
    }
  }
  fail(ErrorKind::Internal, "unknown inequality");
}

namespace {

// Mass within 1% (in log scale) of either end of the window hints that the
// supremum lives outside it.
bool near_edge(const TestFunction& h, const Window& w) {
  const double lo = std::log(w.lo), span = std::log(w.hi) - lo;
  for (std::size_t i = 0; i < h.z.size(); ++i) {
    if (i < h.m.size() && h.m[i] == 0) continue;
    if (h.z[i] <= 0) continue;
    const double s = (std::log(h.z[i]) - lo) / span;
    if (s < 0.01 || s > 0.99) return true;
  }
  return false;
}

void mark_edge(OracleEstimate& e, const Window& w) {
  e.window_edge = near_edge(e.maximizer, w);
  if (e.window_edge) e.trace.push_back("maximizer at the window edge");
}

}  // namespace

OracleEstimate estimate_best_constant(const InequalitySpec& spec, const OracleOptions& opt) {
  spec.validate();
  const bool k31 = spec.kind == InequalityKind::IteratedHardy && spec.ex.p == 1 && spec.ex.q == 1;
  const bool k32 = spec.kind == InequalityKind::IteratedHardySup && spec.ex.p == 1;
  if (k31 || k32) {
    const auto k = exact_kernel_constant(spec, opt.window);
    OracleEstimate e;
    e.inequality = inequality_id(spec.kind);
    e.method = "exact kernel";
    e.c_lo = k.value;
    e.unbounded = std::isinf(k.value);
    e.maximizer = TestFunction::atoms({k.argmax}, {1.0});
    e.rhs = rhs_value(spec, e.maximizer);
    e.lhs = lhs_value(spec, e.maximizer);
    e.level_values = {k.value};
    e.trace.push_back("sup of the kernel function over the weight, attained near " + std::to_string(k.argmax));
    mark_edge(e, opt.window);
    return e;
  }
  auto est = maximize_ratio(spec, opt);
  if (spec.kind == InequalityKind::MonotoneCone && !est.unbounded && spec.v.integrable_at_zero()) {
    auto red = maximize_reduced(reduce_monotone(spec), opt);
    if (red.unbounded) {
      est.unbounded = true;
      est.c_lo = kInf;
      est.trace.push_back("reduced form unbounded");
    } else if (!red.maximizer.m.empty()) {
      const auto f = atoms_to_monotone(red.maximizer, spec.ex.p);
      const Ratio x = test_ratio(spec, f);
      est.trace.push_back("reduced form: C = " + std::to_string(red.c_lo) + ", mapped ratio " + std::to_string(x.ratio));
      if (x.ratio > est.c_lo) {
        est.c_lo = x.ratio;
        est.lhs = x.lhs;
        est.rhs = x.rhs;
        est.maximizer = f;
        est.method = "reduced";
      }
    }
  }
  mark_edge(est, opt.window);
  return est;
}

}  // namespace hardy
