#include "qdunkl/bessel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace qdunkl {

namespace {

constexpr double kParityTol = 2e-12;

// Centered weighted cosine transform
//   t -> c int_0^inf G(l) cos(l t) l^{2a+1} d_ql
// used by the spectral inverse of R.
GridFunction cosine_transform(const AlphaParam& a, const GridFunction& G, const TailPolicy& policy) {
  const QGrid& g = G.grid();
  require_tail(G, 2.0 * a.alpha() + 1.0, policy, "spectral inverse");
  LatticeTrig trig(g.qp(), 2 * g.n_lo(), 2 * g.n_hi());
  trig.require_accuracy(kKernelTolerance, "spectral inverse");
  std::vector<cplx> wts(std::size_t(g.size()));
  cplx total = 0.0;
  for (int b = g.n_lo(); b <= g.n_hi(); ++b) {
    wts[g.index(b)] = a.c() * g.weight(b) * std::pow(g.point(b), 2.0 * a.alpha() + 1.0) * G(1, b);
    total += wts[g.index(b)];
  }
  std::vector<cplx> val(wts.size()), dev(wts.size());
  for (int e = g.n_lo(); e <= g.n_hi(); ++e) {
    cplx v = 0.0, d = 0.0;
    for (int b = g.n_lo(); b <= g.n_hi(); ++b) {
      v += trig.cos(e + b) * wts[g.index(b)];
      d += trig.cos_m1(e + b) * wts[g.index(b)];
    }
    val[g.index(e)] = v;
    dev[g.index(e)] = d;
  }
  return GridFunction::dual(g, total, val, val, dev, dev);
}

// Zeroes the outer values of G lying below floor, up to the first one above it.
GridFunction trim_outer_noise(GridFunction G, double floor) {
  const QGrid& g = G.grid();
  for (int n = g.n_lo(); n <= g.n_hi(); ++n) {
    if (std::abs(G(1, n)) > floor || std::abs(G(-1, n)) > floor) break;
    G.set(1, n, 0.0);
    G.set(-1, n, 0.0);
  }
  return G;
}

// R as the lower-triangular Toeplitz map d_e -> sum_n a_n d_{e+n} with the
// innermost value repeated below the window; coef[n] = a_n, tail[n] = sum_{m >= n} a_m.
struct RLCoefficients {
  std::vector<double> coef, tail;
};

RLCoefficients rl_coefficients(const AlphaParam& a, int size) {
  const int n_max = size + 150;
  MehlerWeight W(a, n_max);
  const double q = a.qp().q();
  RLCoefficients r;
  r.coef.resize(std::size_t(n_max + 1));
  for (int n = 0; n <= n_max; ++n) r.coef[std::size_t(n)] = a.C() * (1.0 - q) * std::pow(q, n) * W.value(n);
  r.tail.assign(std::size_t(n_max + 2), 0.0);
  for (int n = n_max; n >= 0; --n) r.tail[std::size_t(n)] = r.tail[std::size_t(n + 1)] + r.coef[std::size_t(n)];
  return r;
}

}  // namespace

// ------------------------------------------------------------ AlphaParam

AlphaParam::AlphaParam(double alpha, const QParameter& qp) : alpha_(alpha), qp_(qp) {
  if (!(alpha >= -0.5)) {
    std::ostringstream os;
    os << "alpha = " << alpha << " must be >= -1/2";
    throw Error(ErrorCode::invalid_argument, os.str());
  }
  strict_ = alpha > -0.5;
  const double q = qp.q(), p = qp.q2();
  c_ = std::pow(1.0 + q, -alpha) / q_gamma(alpha + 1.0, p);
  if (strict_) {
    C_ = (1.0 + q) * q_gamma(alpha + 1.0, p) / (q_gamma(0.5, p) * q_gamma(alpha + 0.5, p));
    M_ = std::pow(1.0 + q, 0.5 - alpha) / (2.0 * q_gamma(alpha + 0.5, p));
  }
}

double AlphaParam::C() const {
  require_strict("C(alpha; q^2)");
  return C_;
}

double AlphaParam::M() const {
  require_strict("M_{alpha,q}");
  return M_;
}

void AlphaParam::require_strict(const char* what) const {
  if (!strict_) throw Error(ErrorCode::alpha_not_strict, std::string(what) + " needs alpha > -1/2");
}

// ------------------------------------------------------------ MehlerWeight

MehlerWeight::MehlerWeight(const AlphaParam& a, int n_max) {
  a.require_strict("Mehler weight");
  if (n_max < 0) throw Error(ErrorCode::invalid_argument, "negative Mehler weight range");
  const double p = a.qp().q2(), aw = a.q_weight();
  val_.resize(std::size_t(n_max + 1));
  vm1_.resize(val_.size());
  for (int n = 0; n <= n_max; ++n) {
    // log W(q^n) = sum_j log(1 - p^{n+1+j}) - log(1 - aw p^{n+j})
    double L = 0.0;
    double pn = std::pow(p, n);
    for (int j = 0; j < 4000; ++j, pn *= p) {
      const double t = std::log1p(-pn * p) - std::log1p(-aw * pn);
      L += t;
      if (t == 0.0 || std::abs(t) <= 1e-18 * std::abs(L)) break;
    }
    val_[std::size_t(n)] = std::exp(L);
    vm1_[std::size_t(n)] = std::expm1(L);
  }
}

double MehlerWeight::value(int n) const {
  if (n < 0) return 0.0;
  if (n > n_max()) throw Error(ErrorCode::invalid_argument, "Mehler weight index beyond table");
  return val_[std::size_t(n)];
}

double MehlerWeight::minus_one(int n) const {
  if (n < 0) return -1.0;
  if (n > n_max()) throw Error(ErrorCode::invalid_argument, "Mehler weight index beyond table");
  return vm1_[std::size_t(n)];
}

std::vector<double> mehler_inverse_kernel(const AlphaParam& a, int n) {
  // omega_j = (1/A) prod_{i<j} (aw - p^i) / (1 - p^{i+1}), A = W(1), aw = q^{2a+1}.
  const double p = a.qp().q2(), aw = a.q_weight();
  std::vector<double> omega(std::size_t(std::max(n, 0)));
  double po = 1.0 / MehlerWeight(a, 0).value(0), pi = 1.0;
  for (auto& w : omega) {
    w = po;
    po *= (aw - pi) / (1.0 - pi * p);
    pi *= p;
  }
  return omega;
}

// ------------------------------------------------------------ j_alpha

SeriesResult j_alpha(const AlphaParam& a, cplx x, const SeriesConfig& cfg) {
  return bessel_series(a.alpha(), x, a.qp(), cfg);
}

SeriesResult j_alpha_third_jackson(const AlphaParam& a, cplx x, const SeriesConfig& cfg) {
  cfg.validate();
  const double p = a.qp().q2();
  const cplx z = p * std::pow((1.0 - a.qp().q()) * x, 2);
  const double b = std::pow(p, a.alpha() + 1.0);
  cplx sum = 1.0, zn = 1.0;
  double biggest = 1.0, last = 1.0;
  int n = 0;
  while (n < cfg.max_terms) {
    ++n;
    zn *= z;
    // (-1)^n p^{n(n-1)/2} z^n / ((b;p)_n (p;p)_n)
    const cplx t = (n % 2 ? -1.0 : 1.0) * std::pow(p, 0.5 * n * (n - 1.0)) * zn /
                   (q_pochhammer(b, n, p).real() * q_pochhammer(p, n, p).real());
    sum += t;
    last = std::abs(t);
    if (!std::isfinite(last)) throw Error(ErrorCode::non_convergence, "third Jackson series overflowed");
    biggest = std::max(biggest, last);
    if (last == 0.0 || (n >= cfg.min_terms && last <= cfg.rel_tol * 1e-2 * std::abs(sum))) break;
  }
  return {sum, last + 2.0 * std::numeric_limits<double>::epsilon() * biggest * std::sqrt(double(n)), n};
}

double j_alpha_bound(const AlphaParam& a) { return 2.0 / a.qp().qq_inf(); }

double j_alpha_decay_bound(const AlphaParam& a, int e) {
  if (!a.strict()) return std::numeric_limits<double>::infinity();
  const double q = a.qp().q(), p = a.qp().q2(), aw = a.q_weight();
  const double P = q_pochhammer_inf(-p, p).real() * q_pochhammer_inf(-aw, p).real() /
                   q_pochhammer_inf(aw, p).real();
  const double y = (1.0 - q) * std::pow(q, e);
  if (y <= 1.0) return P;
  const double s = std::log(y) / std::log(q);
  return P * std::exp(s * s * std::log(q));
}

GridFunction bessel_samples(const AlphaParam& a, int lambda_exp, const QGrid& grid) {
  LatticeBessel t(a.alpha(), grid.qp(), lambda_exp + grid.n_lo(), lambda_exp + grid.n_hi());
  t.require_accuracy(kKernelTolerance, "q-Bessel samples");
  std::vector<cplx> d(std::size_t(grid.size()));
  for (int n = grid.n_lo(); n <= grid.n_hi(); ++n) d[grid.index(n)] = t.minus_one(lambda_exp + n);
  return GridFunction::centered(grid, 1.0, d, d);
}

// ------------------------------------------------------------ operators

void require_even(const GridFunction& f, const char* what) {
  const double scale = f.sup_norm();
  if (f.odd_defect() > kParityTol * scale) {
    std::ostringstream os;
    os << what << " needs an even input (odd part " << 0.5 * f.odd_defect() << ")";
    throw Error(ErrorCode::not_even, os.str());
  }
}

GridFunction bessel_operator(const AlphaParam& a, const GridFunction& f) {
  require_even(f, "q-Bessel operator");
  if (f.grid().size() < 5) throw Error(ErrorCode::window_too_small, "q-Bessel operator needs 5 exponents");
  const double s = 2.0 * a.alpha() + 1.0;
  const double q = f.grid().q();
  GridFunction inner = multiply_by(dq_derivative(f), [&](int, int n) { return cplx(std::pow(q, s * n)); });
  return multiply_by(dq_derivative(inner), [&](int, int n) { return cplx(std::pow(q, -s * n)); });
}

GridFunction bessel_transform(const AlphaParam& a, const GridFunction& f, std::optional<QGrid> output,
                              const TailPolicy& policy) {
  const QGrid& in = f.grid();
  const QGrid out = output.value_or(in);
  if (!out.same_lattice(in)) throw Error(ErrorCode::invalid_argument, "output grid uses a different q");
  const double s = 2.0 * a.alpha() + 1.0;
  require_tail(f, s, policy, "q-Bessel transform");
  const auto supp = support(f);
  if (!supp) return GridFunction(out);
  const auto [b_lo, b_hi] = *supp;
  LatticeBessel J(a.alpha(), in.qp(), out.n_lo() + b_lo, out.n_hi() + b_hi);
  J.require_accuracy(kKernelTolerance, "q-Bessel transform");

  std::vector<cplx> wts(std::size_t(b_hi - b_lo + 1));
  cplx total = 0.0;
  for (int b = b_lo; b <= b_hi; ++b) {
    cplx v = a.c() * in.weight(b) * std::pow(in.point(b), s) * f(1, b);
    wts[std::size_t(b - b_lo)] = v;
    total += v;
  }
  std::vector<cplx> val(std::size_t(out.size())), dev(val.size());
  for (int l = out.n_lo(); l <= out.n_hi(); ++l) {
    cplx v = 0.0, d = 0.0;
    for (int b = b_lo; b <= b_hi; ++b) {
      const cplx w = wts[std::size_t(b - b_lo)];
      v += J.value(l + b) * w;
      d += J.minus_one(l + b) * w;
    }
    val[out.index(l)] = v;
    dev[out.index(l)] = d;
  }
  return GridFunction::dual(out, total, val, val, dev, dev);
}

GridFunction riemann_liouville(const AlphaParam& a, const GridFunction& f) {
  a.require_strict("Riemann-Liouville operator");
  require_even(f, "Riemann-Liouville operator");
  const QGrid& g = f.grid();
  const RLCoefficients r = rl_coefficients(a, g.size());
  const int hi = g.n_hi();
  const cplx d_hi = f.dev(1, hi);
  std::vector<cplx> out(std::size_t(g.size()));
  for (int e = g.n_lo(); e <= hi; ++e) {
    cplx s = d_hi * r.tail[std::size_t(hi - e)];
    for (int n = 0; n < hi - e; ++n) s += r.coef[std::size_t(n)] * f.dev(1, e + n);
    out[g.index(e)] = s;
  }
  return GridFunction::centered(g, f.baseline(), out, out);
}

GridFunction weyl_transpose(const AlphaParam& a, const GridFunction& f, const TailPolicy& policy) {
  a.require_strict("Weyl operator");
  require_even(f, "Weyl operator");
  const QGrid& g = f.grid();
  if (!policy.force) {
    TailReport t = weighted_tail(f, 2.0 * a.alpha());
    if (!t.converged(policy.rel_tol)) {
      std::ostringstream os;
      os << "Weyl operator: input is not compactly supported in the window (edge tail " << t.estimate
         << " vs scale " << t.scale << ")";
      throw Error(ErrorCode::not_compact, os.str());
    }
  }
  const int N = g.size();
  MehlerWeight W(a, N);
  const double s = 2.0 * a.alpha() + 1.0;
  std::vector<cplx> u(static_cast<std::size_t>(N));
  for (int m = g.n_lo(); m <= g.n_hi(); ++m) u[g.index(m)] = g.weight(m) * std::pow(g.point(m), s - 1.0) * f(1, m);
  // suffix[i] = sum of u over indices > i (points with |x| < |t|).
  std::vector<cplx> suffix(static_cast<std::size_t>(N) + 1, 0.0);
  for (int i = N - 1; i >= 0; --i) suffix[std::size_t(i)] = suffix[std::size_t(i) + 1] + u[std::size_t(i)];
  const double twoM = 2.0 * a.M();
  std::vector<cplx> val(static_cast<std::size_t>(N)), dev(val.size());
  for (int i = 0; i < N; ++i) {
    cplx v = 0.0, d = -suffix[std::size_t(i) + 1];
    for (int j = 0; j <= i; ++j) {
      v += W.value(i - j) * u[std::size_t(j)];
      d += W.minus_one(i - j) * u[std::size_t(j)];
    }
    val[std::size_t(i)] = twoM * v;
    dev[std::size_t(i)] = twoM * d;
  }
  return GridFunction::dual(g, twoM * suffix[0], val, val, dev, dev);
}

GridFunction riemann_liouville_inverse(const AlphaParam& a, const GridFunction& f, InverseMethod method,
                                       const TailPolicy& policy) {
  a.require_strict("inverse Riemann-Liouville operator");
  require_even(f, "inverse Riemann-Liouville operator");
  const QGrid& g = f.grid();
  if (method == InverseMethod::spectral) return cosine_transform(a, bessel_transform(a, f, g, policy), policy);

  const RLCoefficients r = rl_coefficients(a, g.size());
  const int lo = g.n_lo(), hi = g.n_hi();
  std::vector<cplx> h(std::size_t(g.size()));
  auto at = [&](int e) -> cplx& { return h[g.index(e)]; };
  at(hi) = f.dev(1, hi) / r.tail[0];
  for (int e = hi - 1; e >= lo; --e) {
    cplx s = f.dev(1, e) - at(hi) * r.tail[std::size_t(hi - e)];
    for (int n = 1; n < hi - e; ++n) s -= r.coef[std::size_t(n)] * at(e + n);
    at(e) = s / r.coef[0];
  }
  return GridFunction::centered(g, f.baseline(), h, h);
}

GridFunction weyl_transpose_inverse(const AlphaParam& a, const GridFunction& f, InverseMethod method,
                                    const TailPolicy& policy) {
  a.require_strict("inverse Weyl operator");
  require_even(f, "inverse Weyl operator");
  const QGrid& g = f.grid();
  if (method == InverseMethod::spectral) {
    // Rubin's transform of f is known only to about eps * int |f|; below that
    // level its large-lambda values are rounding noise.
    double mass = 0.0;
    for (int n = g.n_lo(); n <= g.n_hi(); ++n) mass += g.weight(n) * (std::abs(f(1, n)) + std::abs(f(-1, n)));
    const double floor = 64.0 * std::numeric_limits<double>::epsilon() * g.qp().K() * mass;
    return bessel_transform(a, trim_outer_noise(rubin_transform(f, g, policy), floor), g, policy);
  }

  // Partial sums of the inverse kernel:
  //   Omega_J = sum_{j<=J} omega_j = (1/A) prod_{i<J} (aw - p^{i+1}) / (1 - p^{i+1}).
  const int N = g.size();
  const double p = g.qp().q2(), aw = a.q_weight();
  const std::vector<double> omega = mehler_inverse_kernel(a, N);
  std::vector<double> Omega(static_cast<std::size_t>(N));
  double pO = omega[0], pi = 1.0;
  for (int j = 0; j < N; ++j) {
    Omega[std::size_t(j)] = pO;
    pO *= (aw - pi * p) / (1.0 - pi * p);
    pi *= p;
  }
  const double s = 2.0 * a.alpha() + 1.0;
  const double scale = 1.0 / (2.0 * a.M() * g.qp().one_minus_q());
  const cplx b = f.baseline();
  std::vector<cplx> h(static_cast<std::size_t>(N));
  for (int i = 0; i < N; ++i) {
    cplx acc = b * Omega[std::size_t(i)];
    for (int m = 0; m <= i; ++m) acc += omega[std::size_t(i - m)] * f.dev(1, g.n_lo() + m);
    h[std::size_t(i)] = acc * scale * std::pow(g.point(g.n_lo() + i), -s);
  }
  return GridFunction(g, h, h);
}

}  // namespace qdunkl
