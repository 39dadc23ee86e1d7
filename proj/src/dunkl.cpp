#include "qdunkl/dunkl.hpp"

#include <cmath>
#include <sstream>

namespace qdunkl {

namespace {

const cplx kI(0.0, 1.0);

// Sign and exponent of a real lattice value lambda = sign * q^l.
std::optional<std::pair<int, int>> lattice_exponent(cplx lambda, const QParameter& qp) {
  if (lambda.imag() != 0.0 || lambda.real() == 0.0 || !std::isfinite(lambda.real())) return std::nullopt;
  const double ax = std::abs(lambda.real());
  const long l = std::lround(std::log(ax) / std::log(qp.q()));
  if (std::abs(std::pow(qp.q(), double(l)) - ax) > 1e-12 * ax) return std::nullopt;
  return std::make_pair(lambda.real() > 0.0 ? 1 : -1, int(l));
}

std::pair<int, int> require_lattice_lambda(cplx lambda, const QParameter& qp, const char* what) {
  auto le = lattice_exponent(lambda, qp);
  if (!le) {
    std::ostringstream os;
    os << what << " needs a lattice lambda = +-q^l, got " << lambda;
    throw Error(ErrorCode::point_off_lattice, os.str());
  }
  return *le;
}

// Even and odd parts at +q^n, from the values.
cplx even_at(const GridFunction& f, int n) { return 0.5 * (f(1, n) + f(-1, n)); }
cplx odd_at(const GridFunction& f, int n) { return 0.5 * (f(1, n) - f(-1, n)); }

// Coefficients of V on the parity parts: V f(s q^n) = sum_m a_m [e(n+m) + s q^m o(n+m)],
// a_m = C (1-q) q^m W(q^m). Below the window e keeps its innermost value and o
// continues linearly; t0[M] = sum_{m>=M} a_m and t1[M] = sum_{m>=M} a_m q^m q^{m-M}
// carry those continuations.
struct VCoefficients {
  std::vector<double> a, qa, t0, t1;
};

VCoefficients v_coefficients(const AlphaParam& a, int size) {
  const int n_max = size + 150;
  MehlerWeight W(a, n_max);
  const double q = a.qp().q();
  VCoefficients v;
  v.a.resize(std::size_t(n_max + 1));
  v.qa.resize(v.a.size());
  for (int m = 0; m <= n_max; ++m) {
    v.a[std::size_t(m)] = a.C() * (1.0 - q) * std::pow(q, m) * W.value(m);
    v.qa[std::size_t(m)] = v.a[std::size_t(m)] * std::pow(q, m);
  }
  v.t0.assign(std::size_t(n_max + 2), 0.0);
  v.t1.assign(std::size_t(n_max + 2), 0.0);
  for (int m = n_max; m >= 0; --m) {
    v.t0[std::size_t(m)] = v.t0[std::size_t(m + 1)] + v.a[std::size_t(m)];
    v.t1[std::size_t(m)] = v.qa[std::size_t(m)] + q * v.t1[std::size_t(m + 1)];
  }
  return v;
}

void require_window(const GridFunction& f, int min_size, const char* what) {
  if (f.grid().size() < min_size) {
    std::ostringstream os;
    os << what << " needs a window of at least " << min_size << " exponents";
    throw Error(ErrorCode::window_too_small, os.str());
  }
}

// Even and odd parts as separate deviation arrays indexed like the grid.
struct ParityDevs {
  std::vector<cplx> e, o;
};

ParityDevs parity_devs(const GridFunction& f) {
  const QGrid& g = f.grid();
  ParityDevs p{std::vector<cplx>(std::size_t(g.size())), std::vector<cplx>(std::size_t(g.size()))};
  auto [fe, fo] = parity_split(f);
  for (int n = g.n_lo(); n <= g.n_hi(); ++n) {
    p.e[g.index(n)] = fe.dev(1, n);
    p.o[g.index(n)] = fo.dev(1, n);
  }
  return p;
}

GridFunction from_parity(const QGrid& g, cplx baseline, const std::vector<cplx>& e, const std::vector<cplx>& o) {
  std::vector<cplx> p(e.size()), m(e.size());
  for (std::size_t i = 0; i < e.size(); ++i) {
    p[i] = e[i] + o[i];
    m[i] = e[i] - o[i];
  }
  return GridFunction::centered(g, baseline, std::move(p), std::move(m));
}

}  // namespace

// ------------------------------------------------------------ operator

GridFunction dunkl_operator(const AlphaParam& a, const GridFunction& f) {
  require_window(f, 3, "q-Dunkl operator");
  auto [fe, fo] = parity_split(f);
  GridFunction d = dq_derivative(fe + cplx(a.q_weight()) * fo);
  const QGrid& t = d.grid();
  const double b1 = a.bracket1();
  if (b1 != 0.0) {
    for (int n = t.n_lo(); n <= t.n_hi(); ++n)
      for (int s : {1, -1}) d.set_dev(s, n, d.dev(s, n) + b1 * fo(s, n) / (s * t.point(n)));
  }
  return d;
}

// ------------------------------------------------------------ kernel

double dunkl_kernel_bound(const AlphaParam& a) { return 4.0 / a.qp().qq_inf(); }

GridFunction dunkl_kernel(const AlphaParam& a, cplx lambda, const QGrid& grid) {
  const std::size_t N = std::size_t(grid.size());
  if (lambda == 0.0) return GridFunction::centered(grid, 1.0, std::vector<cplx>(N), std::vector<cplx>(N));
  const double b2 = a.bracket2();
  const double q = grid.q();
  std::vector<cplx> vp(N), vm(N), dp(N), dm(N);
  if (auto le = lattice_exponent(lambda, grid.qp())) {
    const auto [sigma, l] = *le;
    LatticeBessel J0(a.alpha(), grid.qp(), l + grid.n_lo(), l + grid.n_hi());
    LatticeBessel J1(a.alpha() + 1.0, grid.qp(), l + grid.n_lo(), l + grid.n_hi());
    J0.require_accuracy(kKernelTolerance, "q-Dunkl kernel");
    J1.require_accuracy(kKernelTolerance, "q-Dunkl kernel");
    for (int n = grid.n_lo(); n <= grid.n_hi(); ++n) {
      const int e = l + n;
      const std::size_t i = grid.index(n);
      // lambda x = sigma s q^e.
      const cplx odd = kI * (sigma * std::pow(q, e) / b2) * J1.value(e);
      vp[i] = J0.value(e) + odd;
      vm[i] = J0.value(e) - odd;
      dp[i] = J0.minus_one(e) + odd;
      dm[i] = J0.minus_one(e) - odd;
    }
  } else {
    const AlphaParam a1(a.alpha() + 1.0, a.qp());
    for (int n = grid.n_lo(); n <= grid.n_hi(); ++n) {
      for (int s : {1, -1}) {
        const cplx z = lambda * (s * grid.point(n));
        const SeriesResult j0 = j_alpha(a, z), j1 = j_alpha(a1, z);
        if (j0.error > kKernelTolerance || j1.error > kKernelTolerance) {
          std::ostringstream os;
          os << "q-Dunkl kernel: series error " << std::max(j0.error, j1.error) << " at lambda x = " << z;
          throw Error(ErrorCode::non_convergence, os.str());
        }
        const cplx odd = kI * z / b2 * j1.value;
        (s > 0 ? vp : vm)[grid.index(n)] = j0.value + odd;
        (s > 0 ? dp : dm)[grid.index(n)] = (j0.value - 1.0) + odd;
      }
    }
  }
  return GridFunction::dual(grid, 1.0, std::move(vp), std::move(vm), std::move(dp), std::move(dm));
}

GridFunction dunkl_kernel_mehler(const AlphaParam& a, cplx lambda, const QGrid& grid, int order) {
  if (order < 0) throw Error(ErrorCode::invalid_argument, "negative derivative order");
  const std::size_t N = std::size_t(grid.size());
  const cplx ilam_k = std::pow(kI * lambda, order);
  if (lambda == 0.0) {
    const cplx b = order == 0 ? 1.0 : 0.0;
    return GridFunction::centered(grid, b, std::vector<cplx>(N), std::vector<cplx>(N));
  }
  const auto [sigma, l] = require_lattice_lambda(lambda, grid.qp(), "Mehler form of the q-Dunkl kernel");
  if (!a.strict()) return ilam_k * dunkl_kernel(a, lambda, grid);

  // (1+t) t^k e(izt) + (1-t) (-t)^k e(-izt) is 2 t^k [cos(zt) + i t sin(zt)] for
  // even k and 2 t^k [i sin(zt) + t cos(zt)] for odd k.
  const int m_max = 120;
  const double q = grid.q();
  const bool odd = order % 2 == 1;
  MehlerWeight W(a, m_max);
  std::vector<double> wm(std::size_t(m_max + 1)), tm(wm.size());
  double base = 0.0;
  for (int m = 0; m <= m_max; ++m) {
    tm[std::size_t(m)] = std::pow(q, m);
    wm[std::size_t(m)] = a.C() * (1.0 - q) * tm[std::size_t(m)] * W.value(m) * std::pow(tm[std::size_t(m)], order);
    base += wm[std::size_t(m)] * (odd ? tm[std::size_t(m)] : 1.0);
  }
  LatticeTrig trig(grid.qp(), l + grid.n_lo(), l + grid.n_hi() + m_max);
  trig.require_accuracy(kKernelTolerance, "Mehler form of the q-Dunkl kernel");
  // The kernel at lambda = 0 is exactly 1; the truncated weight sum is not.
  const double base_shift = order == 0 ? base - 1.0 : 0.0;
  std::vector<cplx> vp(N), vm(N), dp(N), dm(N);
  for (int n = grid.n_lo(); n <= grid.n_hi(); ++n) {
    const int e = l + n;
    // c: the cosine sum, s: the sine sum, both already carrying their t factors.
    double c = 0.0, cm1 = base_shift, s = 0.0;
    for (int m = 0; m <= m_max; ++m) {
      const double w = wm[std::size_t(m)], t = tm[std::size_t(m)];
      const double cw = odd ? w * t : w, sw = odd ? w : w * t;
      c += cw * trig.cos(e + m);
      cm1 += cw * trig.cos_m1(e + m);
      s += sw * trig.sin(sigma, e + m);
    }
    const std::size_t i = grid.index(n);
    // The sine is odd in x.
    vp[i] = ilam_k * cplx(c, s);
    vm[i] = ilam_k * cplx(c, -s);
    dp[i] = ilam_k * cplx(cm1, s);
    dm[i] = ilam_k * cplx(cm1, -s);
  }
  const cplx b = order == 0 ? cplx(1.0) : ilam_k * base;
  return GridFunction::dual(grid, b, std::move(vp), std::move(vm), std::move(dp), std::move(dm));
}

// ------------------------------------------------------------ V

GridFunction intertwiner_V(const AlphaParam& a, const GridFunction& f, Route route) {
  a.require_strict("q-Dunkl intertwining operator");
  const QGrid& g = f.grid();
  if (route == Route::decomposed) {
    require_window(f, 3, "q-Dunkl intertwining operator");
    auto [fe, fo] = parity_split(f);
    GridFunction odd = dq_derivative(riemann_liouville(a, antiderivative(fo, Antiderivative::I_q)));
    const QGrid& t = odd.grid();
    return riemann_liouville(a, fe).restricted(t.n_lo(), t.n_hi()) + odd;
  }

  const VCoefficients v = v_coefficients(a, g.size());
  const auto [e, o] = parity_devs(f);
  const int lo = g.n_lo(), hi = g.n_hi();
  const cplx e_hi = e[g.index(hi)], o_hi = o[g.index(hi)];
  const double q = g.q();
  std::vector<cplx> pos(e.size()), neg(e.size());
  for (int n = lo; n <= hi; ++n) {
    // Definition sum over t = +-q^m: a_m/2 [(1+q^m) f(s q^{n+m}) + (1-q^m) f(-s q^{n+m})].
    cplx sp = 0.0, sm = 0.0;
    for (int m = 0; m <= hi - n; ++m) {
      const std::size_t k = g.index(n + m);
      const cplx fp = e[k] + o[k], fm = e[k] - o[k];
      const double am = v.a[std::size_t(m)], qm = std::pow(q, m);
      sp += 0.5 * am * ((1.0 + qm) * fp + (1.0 - qm) * fm);
      sm += 0.5 * am * ((1.0 + qm) * fm + (1.0 - qm) * fp);
    }
    const std::size_t M = std::size_t(hi - n + 1);
    const cplx ext_e = e_hi * v.t0[M], ext_o = q * o_hi * v.t1[M];
    pos[g.index(n)] = sp + ext_e + ext_o;
    neg[g.index(n)] = sm + ext_e - ext_o;
  }
  return GridFunction::centered(g, f.baseline(), std::move(pos), std::move(neg));
}

GridFunction intertwiner_V_inverse(const AlphaParam& a, const GridFunction& f, Route route) {
  a.require_strict("inverse q-Dunkl intertwining operator");
  const QGrid& g = f.grid();
  if (route == Route::decomposed) {
    require_window(f, 3, "inverse q-Dunkl intertwining operator");
    auto [fe, fo] = parity_split(f);
    GridFunction odd = dq_derivative(riemann_liouville_inverse(a, antiderivative(fo, Antiderivative::I_q)));
    const QGrid& t = odd.grid();
    return riemann_liouville_inverse(a, fe).restricted(t.n_lo(), t.n_hi()) + odd;
  }

  // Back-substitution from the innermost exponent outwards.
  const VCoefficients v = v_coefficients(a, g.size());
  const auto [ge, go] = parity_devs(f);
  const int lo = g.n_lo(), hi = g.n_hi();
  const double q = g.q();
  std::vector<cplx> e(ge.size()), o(go.size());
  const std::size_t ih = g.index(hi);
  e[ih] = ge[ih] / v.t0[0];
  o[ih] = go[ih] / (v.a[0] + q * v.t1[1]);
  for (int n = hi - 1; n >= lo; --n) {
    const std::size_t M = std::size_t(hi - n + 1);
    cplx se = ge[g.index(n)] - e[ih] * v.t0[M];
    cplx so = go[g.index(n)] - q * o[ih] * v.t1[M];
    for (int m = 1; m <= hi - n; ++m) {
      se -= v.a[std::size_t(m)] * e[g.index(n + m)];
      so -= v.qa[std::size_t(m)] * o[g.index(n + m)];
    }
    e[g.index(n)] = se / v.a[0];
    o[g.index(n)] = so / v.a[0];
  }
  return from_parity(g, f.baseline(), e, o);
}

// ------------------------------------------------------------ tV

GridFunction transpose_tV(const AlphaParam& a, const GridFunction& f, Route route, const TailPolicy& policy) {
  a.require_strict("q-Dunkl transpose");
  const QGrid& g = f.grid();
  if (!policy.force) {
    TailReport t = weighted_tail(f, 2.0 * a.alpha());
    if (!t.converged(policy.rel_tol)) {
      std::ostringstream os;
      os << "q-Dunkl transpose: input is not compactly supported in the window (edge tail " << t.estimate
         << " vs scale " << t.scale << ")";
      throw Error(ErrorCode::not_compact, os.str());
    }
  }
  if (route == Route::decomposed) {
    require_window(f, 3, "q-Dunkl transpose");
    auto [fe, fo] = parity_split(f);
    GridFunction odd = dq_derivative(weyl_transpose(a, antiderivative(fo, Antiderivative::J_q, policy), policy));
    const QGrid& t = odd.grid();
    return weyl_transpose(a, fe, policy).restricted(t.n_lo(), t.n_hi()) + odd;
  }

  // Sum over x = +-q^m with m <= e (W vanishes for |t/x| > 1):
  //   M w_m q^{2am} W(q^{e-m}) [(1 + s q^{e-m}) f(q^m) + (1 - s q^{e-m}) f(-q^m)].
  const int N = g.size();
  MehlerWeight W(a, N);
  const double q = g.q(), M = a.M();
  std::vector<cplx> E(static_cast<std::size_t>(N)), O(E.size());
  for (int m = g.n_lo(); m <= g.n_hi(); ++m) {
    const double u = g.weight(m) * std::pow(g.point(m), 2.0 * a.alpha());
    E[g.index(m)] = u * (f(1, m) + f(-1, m));
    O[g.index(m)] = u * (f(1, m) - f(-1, m));
  }
  std::vector<cplx> suffix(E.size() + 1, 0.0);
  for (int i = N - 1; i >= 0; --i) suffix[std::size_t(i)] = suffix[std::size_t(i) + 1] + E[std::size_t(i)];
  std::vector<cplx> vp(E.size()), vm(E.size()), dp(E.size()), dm(E.size());
  for (int i = 0; i < N; ++i) {
    cplx ve = 0.0, de = -suffix[std::size_t(i) + 1], vo = 0.0;
    for (int j = 0; j <= i; ++j) {
      ve += W.value(i - j) * E[std::size_t(j)];
      de += W.minus_one(i - j) * E[std::size_t(j)];
      vo += W.value(i - j) * std::pow(q, i - j) * O[std::size_t(j)];
    }
    vp[std::size_t(i)] = M * (ve + vo);
    vm[std::size_t(i)] = M * (ve - vo);
    dp[std::size_t(i)] = M * (de + vo);
    dm[std::size_t(i)] = M * (de - vo);
  }
  return GridFunction::dual(g, M * suffix[0], std::move(vp), std::move(vm), std::move(dp), std::move(dm));
}

GridFunction transpose_tV_inverse(const AlphaParam& a, const GridFunction& f, Route route,
                                  const TailPolicy& policy) {
  a.require_strict("inverse q-Dunkl transpose");
  const QGrid& g = f.grid();
  auto [fe, fo] = parity_split(f);
  if (route == Route::decomposed) {
    require_window(f, 3, "inverse q-Dunkl transpose");
    GridFunction odd =
        dq_derivative(weyl_transpose_inverse(a, antiderivative(fo, Antiderivative::J_q, policy),
                                             InverseMethod::lattice, policy));
    const QGrid& t = odd.grid();
    return weyl_transpose_inverse(a, fe, InverseMethod::lattice, policy).restricted(t.n_lo(), t.n_hi()) + odd;
  }

  // The odd part of tV is the Toeplitz kernel W(q^j) q^j acting on
  // 2M (1-q) q^{(2a+1)m} f_o(q^m); its inverse kernel is omega_j q^j.
  const int N = g.size();
  const double q = g.q(), s = 2.0 * a.alpha() + 1.0;
  const std::vector<double> omega = mehler_inverse_kernel(a, N);
  const double scale = 1.0 / (2.0 * a.M() * g.qp().one_minus_q());
  std::vector<cplx> op(static_cast<std::size_t>(N)), om(op.size());
  for (int i = 0; i < N; ++i) {
    cplx acc = 0.0;
    for (int m = 0; m <= i; ++m) acc += omega[std::size_t(i - m)] * std::pow(q, i - m) * fo(1, g.n_lo() + m);
    op[std::size_t(i)] = acc * scale * std::pow(g.point(g.n_lo() + i), -s);
    om[std::size_t(i)] = -op[std::size_t(i)];
  }
  return weyl_transpose_inverse(a, fe, InverseMethod::lattice, policy) + GridFunction(g, op, om);
}

// ------------------------------------------------------------ transform

GridFunction dunkl_transform(const AlphaParam& a, const GridFunction& f, Direction direction,
                             std::optional<QGrid> output, const TailPolicy& policy) {
  const QGrid& in = f.grid();
  const QGrid out = output.value_or(in);
  if (!out.same_lattice(in)) throw Error(ErrorCode::invalid_argument, "output grid uses a different q");
  const double s = 2.0 * a.alpha() + 1.0;
  require_tail(f, s, policy, "q-Dunkl transform");
  const auto supp = support(f);
  if (!supp) return GridFunction(out);
  const auto [b_lo, b_hi] = *supp;
  LatticeBessel J0(a.alpha(), in.qp(), out.n_lo() + b_lo, out.n_hi() + b_hi);
  LatticeBessel J1(a.alpha() + 1.0, in.qp(), out.n_lo() + b_lo, out.n_hi() + b_hi);
  J0.require_accuracy(kKernelTolerance, "q-Dunkl transform");
  J1.require_accuracy(kKernelTolerance, "q-Dunkl transform");

  // (c/2) sum over x = +-q^b of f(x) psi_{-+lambda}(x) |x|^{2a+1} w_b
  //   = c sum_b w_b q^{(2a+1)b} [E_b j_a(q^{l+b}) -+ i sigma q^{l+b} O_b j_{a+1}(q^{l+b}) / [2a+2]_q].
  const double q = in.q(), b2 = a.bracket2();
  const double sign = direction == Direction::forward ? -1.0 : 1.0;
  const std::size_t nb = std::size_t(b_hi - b_lo + 1);
  std::vector<cplx> E(nb), O(nb);
  cplx total = 0.0;
  for (int b = b_lo; b <= b_hi; ++b) {
    const double w = a.c() * in.weight(b) * std::pow(in.point(b), s);
    E[std::size_t(b - b_lo)] = w * even_at(f, b);
    O[std::size_t(b - b_lo)] = w * odd_at(f, b);
    total += E[std::size_t(b - b_lo)];
  }
  const std::size_t N = std::size_t(out.size());
  std::vector<cplx> vp(N), vm(N), dp(N), dm(N);
  for (int l = out.n_lo(); l <= out.n_hi(); ++l) {
    cplx ev = 0.0, ed = 0.0, od = 0.0;
    for (int b = b_lo; b <= b_hi; ++b) {
      const std::size_t k = std::size_t(b - b_lo);
      ev += J0.value(l + b) * E[k];
      ed += J0.minus_one(l + b) * E[k];
      od += std::pow(q, l + b) * J1.value(l + b) * O[k];
    }
    const cplx odd = sign * kI * od / b2;
    const std::size_t i = out.index(l);
    vp[i] = ev + odd;
    vm[i] = ev - odd;
    dp[i] = ed + odd;
    dm[i] = ed - odd;
  }
  return GridFunction::dual(out, total, std::move(vp), std::move(vm), std::move(dp), std::move(dm));
}

}  // namespace qdunkl
