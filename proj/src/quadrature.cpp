#include "hardy/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

namespace hardy::quad {

namespace {

constexpr double xgk[8] = {0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
                           0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
                           0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
                           0.207784955007898467600689403773245, 0.0};
constexpr double wgk[8] = {0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
                           0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
                           0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
                           0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double wg[4] = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                          0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
  double a, b, value, error;
  bool operator<(const Panel& o) const { return error < o.error; }
};

Panel qk15(const Fn& f, double a, double b, long& evals) {
  const double centr = 0.5 * (a + b);
  const double hl = 0.5 * (b - a);
  double fv1[7], fv2[7];
  const double fc = f(centr);
  double resg = fc * wg[3];
  double resk = fc * wgk[7];
  double resabs = std::fabs(resk);
  for (int j = 0; j < 3; ++j) {
    int jt = 2 * j + 1;
    double ab = hl * xgk[jt];
    double f1 = f(centr - ab), f2 = f(centr + ab);
    fv1[jt] = f1;
    fv2[jt] = f2;
    resg += wg[j] * (f1 + f2);
    resk += wgk[jt] * (f1 + f2);
    resabs += wgk[jt] * (std::fabs(f1) + std::fabs(f2));
  }
  for (int j = 0; j < 4; ++j) {
    int jt = 2 * j;
    double ab = hl * xgk[jt];
    double f1 = f(centr - ab), f2 = f(centr + ab);
    fv1[jt] = f1;
    fv2[jt] = f2;
    resk += wgk[jt] * (f1 + f2);
    resabs += wgk[jt] * (std::fabs(f1) + std::fabs(f2));
  }
  evals += 15;
  const double reskh = 0.5 * resk;
  double resasc = wgk[7] * std::fabs(fc - reskh);
  for (int j = 0; j < 7; ++j) resasc += wgk[j] * (std::fabs(fv1[j] - reskh) + std::fabs(fv2[j] - reskh));
  const double ahl = std::fabs(hl);
  double err = std::fabs((resk - resg) * hl);
  resasc *= ahl;
  resabs *= ahl;
  if (resasc != 0 && err != 0) err = resasc * std::min(1.0, std::pow(200 * err / resasc, 1.5));
  constexpr double eps = std::numeric_limits<double>::epsilon();
  if (resabs > std::numeric_limits<double>::min() / (50 * eps)) err = std::max(50 * eps * resabs, err);
  return {a, b, resk * hl, err};
}

Result finish(double value, double error, long evals, const Options& opt) {
  Result r;
  r.evaluations = evals;
  if (std::isnan(value)) {
    r.value = value;
    r.converged = false;
    return r;
  }
  if (std::isinf(value)) {
    r.value = kInf;
    r.divergent = true;
    return r;
  }
  r.value = value;
  r.error = error;
  r.converged = error <= std::max(opt.abs_tol, 1e-7 * std::fabs(value)) || error <= 1e-280;
  return r;
}

// Local power-law exponent of f at t from the ratio f(t*k)/f(t).
double log_slope(const Fn& f, double t, double k, long& evals) {
  double f0 = f(t), f1 = f(t * k);
  evals += 2;
  if (!(f0 > 0) || !(f1 > 0) || std::isinf(f0) || std::isinf(f1)) return std::nan("");
  return std::log(f1 / f0) / std::log(k);
}

// Integral of g over (0, h] where g may behave like s^beta as s -> 0.
// Integration runs in log(s) from s0 upward; the piece (0, s0) is extrapolated.
Result log_piece_from_zero(const Fn& g, double h, double s0, bool extend, const Options& opt) {
  long evals = 0;
  double s = std::min(s0, h * 1e-2);
  double beta = 0;
  bool zero_tail = false;
  for (int it = 0; it < 60; ++it) {
    double gs = g(s);
    ++evals;
    if (std::isinf(gs)) return finish(kInf, 0, evals, opt);
    if (!(gs > 0)) {
      zero_tail = true;
      break;
    }
    double b1 = log_slope(g, s, 10.0, evals);
    if (std::isnan(b1)) {
      zero_tail = true;
      break;
    }
    beta = b1;
    if (!extend || s < 1e-100) break;
    double b2 = log_slope(g, s * 1e-2, 10.0, evals);
    if (!std::isnan(b2) && std::fabs(b2 - b1) <= opt.slope_tol * std::max(1.0, std::fabs(b1))) {
      beta = b2;
      s *= 1e-2;
      break;
    }
    s *= 1e-2;
  }
  double tail = 0;
  if (!zero_tail) {
    if (beta <= -1 + opt.divergence_margin) return finish(kInf, 0, evals, opt);
    tail = g(s) * s / (beta + 1);
    ++evals;
  }
  auto ge = [&](double y) {
    double t = std::exp(y);
    return g(t) * t;
  };
  double la = std::log(s), lb = std::log(h);
  Result body = kronrod(ge, la, lb, opt);
  body.evaluations += evals;
  if (body.divergent || !body.converged) return body;
  body.value += tail;
  body.error += std::fabs(tail) * 1e-6;
  return body;
}

// Same for the tail (c, inf) in log(t).
Result log_piece_to_inf(const Fn& f, double c, double t0, const Options& opt) {
  long evals = 0;
  double t = std::max(t0, c * 1e2);
  double beta = 0;
  bool zero_tail = false;
  for (int it = 0; it < 60; ++it) {
    double ft = f(t);
    ++evals;
    if (std::isinf(ft)) return finish(kInf, 0, evals, opt);
    if (!(ft > 0)) {
      zero_tail = true;
      break;
    }
    double b1 = log_slope(f, t, 10.0, evals);
    if (std::isnan(b1)) {
      zero_tail = true;
      break;
    }
    beta = b1;
    if (t > 1e100) break;
    double b2 = log_slope(f, t * 1e2, 10.0, evals);
    if (!std::isnan(b2) && std::fabs(b2 - b1) <= opt.slope_tol * std::max(1.0, std::fabs(b1))) {
      beta = b2;
      t *= 1e2;
      break;
    }
    t *= 1e2;
  }
  double tail = 0;
  if (!zero_tail) {
    if (beta >= -1 - opt.divergence_margin) return finish(kInf, 0, evals, opt);
    tail = f(t) * t / (-1 - beta);
    ++evals;
  }
  auto ge = [&](double y) {
    double s = std::exp(y);
    return f(s) * s;
  };
  Result body = kronrod(ge, std::log(c), std::log(t), opt);
  body.evaluations += evals;
  if (body.divergent || !body.converged) return body;
  body.value += tail;
  body.error += std::fabs(tail) * 1e-6;
  return body;
}

// Finite piece [c, d] with c > 0: endpoint-singularity aware on both sides.
Result finite_piece(const Fn& f, double c, double d, const Options& opt) {
  if (d / c > 8) {
    Result r = finite_piece(f, c, 2 * c, opt);
    if (r.divergent || !r.converged) return r;
    double lo = 2 * c, hi = d / 2;
    auto ge = [&](double y) {
      double t = std::exp(y);
      return f(t) * t;
    };
    r += kronrod(ge, std::log(lo), std::log(hi), opt);
    if (r.divergent || !r.converged) return r;
    r += finite_piece(f, hi, d, opt);
    return r;
  }
  const double m = 0.5 * (c + d);
  const double h = m - c;
  auto left = [&](double tau) { return f(c + tau); };
  auto right = [&](double sig) { return f(d - sig); };
  Result r = log_piece_from_zero(left, h, h * 1e-10, false, opt);
  if (r.divergent || !r.converged) return r;
  r += log_piece_from_zero(right, d - m, (d - m) * 1e-10, false, opt);
  return r;
}

}  // namespace

Result& Result::operator+=(const Result& o) {
  value += o.value;
  error += o.error;
  converged = converged && o.converged;
  divergent = divergent || o.divergent;
  evaluations += o.evaluations;
  if (divergent) value = kInf;
  return *this;
}

Result kronrod(const Fn& f, double a, double b, const Options& opt) {
  long evals = 0;
  if (!(b > a)) return {};
  const double width = b - a;
  int n0 = std::clamp(static_cast<int>(std::ceil(width / 3.0)), 1, 64);
  std::priority_queue<Panel> heap;
  double total = 0, err = 0;
  for (int i = 0; i < n0; ++i) {
    double x0 = a + width * i / n0, x1 = (i + 1 == n0) ? b : a + width * (i + 1) / n0;
    Panel p = qk15(f, x0, x1, evals);
    total += p.value;
    err += p.error;
    heap.push(p);
  }
  if (!std::isfinite(total)) return finish(total, err, evals, opt);
  std::vector<Panel> frozen;
  int count = n0;
  while (err > std::max(opt.abs_tol, opt.rel_tol * std::fabs(total)) && !heap.empty() &&
         count < opt.max_intervals) {
    Panel p = heap.top();
    heap.pop();
    double mid = 0.5 * (p.a + p.b);
    if (!(mid > p.a && mid < p.b) || (p.b - p.a) < 1e-14 * std::max(1.0, std::fabs(mid))) {
      frozen.push_back(p);
      continue;
    }
    Panel l = qk15(f, p.a, mid, evals), r = qk15(f, mid, p.b, evals);
    total += l.value + r.value - p.value;
    err += l.error + r.error - p.error;
    heap.push(l);
    heap.push(r);
    ++count;
    if (!std::isfinite(total)) return finish(total, err, evals, opt);
  }
  // Resum to shed accumulated cancellation in the running totals.
  total = 0;
  err = 0;
  while (!heap.empty()) {
    total += heap.top().value;
    err += heap.top().error;
    heap.pop();
  }
  for (const auto& p : frozen) {
    total += p.value;
    err += p.error;
  }
  return finish(total, err, evals, opt);
}

Result integrate(const Fn& f, double a, double b, const std::vector<double>& breakpoints, const Options& opt) {
  if (!(a >= 0)) fail(ErrorKind::Domain, "integration lower limit must be >= 0");
  if (!(b > a)) return {};
  std::vector<double> pts;
  pts.push_back(a);
  for (double t : breakpoints)
    if (t > a && t < b && std::isfinite(t)) pts.push_back(t);
  pts.push_back(b);
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (a == 0 && std::isinf(b) && pts.size() == 2) pts.insert(pts.begin() + 1, 1.0);

  Result total;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    double c = pts[i], d = pts[i + 1];
    Result r;
    if (c == 0 && std::isinf(d)) {
      fail(ErrorKind::Internal, "unsplit infinite piece");
    } else if (c == 0) {
      r = log_piece_from_zero(f, d / 2, opt.window_lo, true, opt);
      if (!r.divergent && r.converged) r += finite_piece(f, d / 2, d, opt);
    } else if (std::isinf(d)) {
      r = finite_piece(f, c, 2 * c, opt);
      if (!r.divergent && r.converged) r += log_piece_to_inf(f, 2 * c, opt.window_hi, opt);
    } else {
      r = finite_piece(f, c, d, opt);
    }
    total += r;
    if (total.divergent || !total.converged) break;
  }
  return total;
}

double integrate_value(const Fn& f, double a, double b, const std::vector<double>& breakpoints,
                       const Options& opt) {
  Result r = integrate(f, a, b, breakpoints, opt);
  if (r.divergent) return kInf;
  if (!r.converged)
    fail(ErrorKind::Numerical, "adaptive quadrature did not converge (estimate " + std::to_string(r.value) +
                                   ", error " + std::to_string(r.error) + ")");
  return r.value;
}

SupResult golden_max(const Fn& f, double lo, double hi, int iterations) {
  const double g = 0.5 * (std::sqrt(5.0) - 1);
  double a = std::log(lo), b = std::log(hi);
  double x1 = b - g * (b - a), x2 = a + g * (b - a);
  double f1 = f(std::exp(x1)), f2 = f(std::exp(x2));
  SupResult best{std::max(f1, f2), f1 >= f2 ? std::exp(x1) : std::exp(x2), false, false};
  for (int i = 0; i < iterations && (b - a) > 1e-13; ++i) {
    if (f1 >= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - g * (b - a);
      f1 = f(std::exp(x1));
      if (f1 > best.value) best = {f1, std::exp(x1), false, false};
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + g * (b - a);
      f2 = f(std::exp(x2));
      if (f2 > best.value) best = {f2, std::exp(x2), false, false};
    }
  }
  return best;
}

SupResult sup_scan(const Fn& f, double lo, double hi, int n) {
  if (n < 2) n = 2;
  std::vector<double> xs(n), vs(n);
  const double la = std::log(lo), lb = std::log(hi);
  int best = -1;
  for (int i = 0; i < n; ++i) {
    xs[i] = std::exp(la + (lb - la) * i / (n - 1));
    vs[i] = f(xs[i]);
    if (std::isinf(vs[i])) return {kInf, xs[i], i == 0, i == n - 1};
    if (std::isnan(vs[i])) continue;
    if (best < 0 || vs[i] > vs[best]) best = i;
  }
  if (best < 0) return {std::nan(""), lo, false, false};
  SupResult r{vs[best], xs[best], best == 0, best == n - 1};
  if (best > 0 && best < n - 1) {
    SupResult g = golden_max(f, xs[best - 1], xs[best + 1]);
    if (g.value > r.value) r = {g.value, g.argmax, false, false};
  }
  return r;
}

void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights) {
  nodes.assign(n, 0);
  weights.assign(n, 0);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double dp = 0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1, p1 = x;
      for (int k = 2; k <= n; ++k) {
        double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) p0 = 1;
      dp = n * (x * p1 - p0) / (x * x - 1);
      double dx = p1 / dp;
      x -= dx;
      if (std::fabs(dx) < 1e-16) break;
    }
    double p0 = 1, p1 = x;
    for (int k = 2; k <= n; ++k) {
      double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = n * (x * p1 - p0) / (x * x - 1);
    nodes[i] = -x;
    nodes[n - 1 - i] = x;
    weights[i] = weights[n - 1 - i] = 2 / ((1 - x * x) * dp * dp);
  }
}

}  // namespace hardy::quad
