#include "qdunkl/verify.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <sstream>
#include <thread>

#include "json.hpp"

namespace qdunkl {
namespace {

constexpr cplx kI(0.0, 1.0);

struct Context {
  const QGrid& grid;
  const AlphaParam* a;
  const std::vector<GridFunction>& corpus;
  std::uint64_t seed;

  const AlphaParam& alpha() const { return *a; }
  double q() const { return grid.q(); }
  std::size_t size() const { return corpus.size(); }
  const GridFunction& f(std::size_t i) const { return corpus[i]; }
  /// The function paired with f(i) in bilinear identities.
  const GridFunction& partner(std::size_t i) const { return corpus[(i + 1) % corpus.size()]; }
};

using Check = double (*)(const Context&);

struct Identity {
  IdentitySpec spec;
  Check check;
};

// ------------------------------------------------------------ helpers

double rel_distance(const GridFunction& a, const GridFunction& b) {
  const double s = b.sup_norm();
  return s == 0.0 ? a.sup_norm() : sup_distance(a, b) / s;
}

GridFunction unit(const GridFunction& f) {
  const double s = f.sup_norm();
  return s == 0.0 ? f : (1.0 / s) * f;
}

GridFunction even_part(const GridFunction& f) { return unit(parity_split(f).first); }
GridFunction odd_part(const GridFunction& f) { return unit(parity_split(f).second); }

GridFunction constant(const QGrid& g, cplx c) {
  const std::size_t N = std::size_t(g.size());
  return GridFunction::centered(g, c, std::vector<cplx>(N), std::vector<cplx>(N));
}

GridFunction identity_function(const QGrid& g) {
  return sample([](double x) { return cplx(x); }, g);
}

GridFunction x_power(const QGrid& g, double s) {
  return multiply_by(constant(g, 1.0), [&](int, int n) { return cplx(std::pow(g.point(n), s)); });
}

/// cos(q^l x; q^2), centered at 1.
GridFunction cos_samples(const QGrid& g, int l) {
  LatticeTrig t(g.qp(), g.n_lo() + l, g.n_hi() + l);
  std::vector<cplx> d;
  for (int n = g.n_lo(); n <= g.n_hi(); ++n) d.push_back(t.cos_m1(n + l));
  return GridFunction::centered(g, 1.0, d, d);
}

/// sin(q^l x; q^2).
GridFunction sin_samples(const QGrid& g, int l) {
  LatticeTrig t(g.qp(), g.n_lo() + l, g.n_hi() + l);
  std::vector<cplx> p, m;
  for (int n = g.n_lo(); n <= g.n_hi(); ++n) {
    p.push_back(t.sin(1, n + l));
    m.push_back(t.sin(-1, n + l));
  }
  return GridFunction(g, p, m);
}

/// e(i sigma q^l x; q^2), centered at 1.
GridFunction exp_samples(const QGrid& g, int sigma, int l) {
  LatticeTrig t(g.qp(), g.n_lo() + l, g.n_hi() + l);
  std::vector<cplx> p, m;
  for (int n = g.n_lo(); n <= g.n_hi(); ++n) {
    p.push_back(t.exp_i_m1(sigma, n + l));
    m.push_back(t.exp_i_m1(-sigma, n + l));
  }
  return GridFunction::centered(g, 1.0, p, m);
}

GridFunction trimmed_to(const GridFunction& f, const GridFunction& like) {
  return f.restricted(like.grid().n_lo(), like.grid().n_hi());
}

cplx line_integral(const GridFunction& f) {
  return jackson_integral(f, JacksonDomain::RealLine()).value;
}

cplx half_integral(const GridFunction& f) {
  return jackson_integral(f, JacksonDomain::ZeroToInf()).value;
}

/// (c/2) int f h |x|^{2a+1} d_qx over the common window.
cplx weighted_pairing(const AlphaParam& a, const GridFunction& f, const GridFunction& h) {
  const QGrid& w = f.grid().size() <= h.grid().size() ? f.grid() : h.grid();
  GridFunction fr = f.restricted(w.n_lo(), w.n_hi()), hr = h.restricted(w.n_lo(), w.n_hi());
  return 0.5 * a.c() * line_integral(pointwise(pointwise(fr, hr), x_power(w, 2.0 * a.alpha() + 1.0)));
}

GridFunction times_x(const GridFunction& f, cplx c) {
  const QGrid& g = f.grid();
  return multiply_by(f, [&, c](int s, int n) { return c * double(s) * g.point(n); });
}

double uniform(std::mt19937_64& rng) { return double(rng() >> 11) * 0x1.0p-53; }

// ------------------------------------------------------------ qcore

double gamma_functional(const Context& c) {
  const QParameter& qp = c.grid.qp();
  double r = 0.0;
  for (double x : {0.5, 1.5, 2.5, 3.5})
    r = std::max(r, std::abs(q_gamma(x + 1.0, qp) - q_bracket(x, qp) * q_gamma(x, qp)));
  return r;
}

double exp_trig(const Context& c) {
  const QParameter& qp = c.grid.qp();
  double r = 0.0;
  for (int n = std::max(c.grid.n_lo(), -10); n <= c.grid.n_hi(); ++n) {
    for (int s : {1, -1}) {
      const double x = s * c.grid.point(n);
      const cplx e = q_trig(TrigKind::exp, cplx(0.0, x), qp);
      const cplx cs = q_trig(TrigKind::cos, x, qp) + kI * q_trig(TrigKind::sin, x, qp);
      r = std::max(r, std::abs(e - cs) / std::max(1.0, std::abs(cs)));
    }
  }
  return r;
}

double trig_bounds(const Context& c) {
  const QGrid& g = c.grid;
  LatticeTrig t(g.qp(), g.n_lo(), g.n_hi());
  const double b = 1.0 / g.qp().qq_inf();
  int violations = 0;
  for (int n = g.n_lo(); n <= g.n_hi(); ++n) {
    for (int s : {1, -1}) {
      if (std::abs(t.cos(n)) > b) ++violations;
      if (std::abs(t.sin(s, n)) > b) ++violations;
      if (std::abs(t.exp_i(s, n)) > 2.0 * b) ++violations;
    }
  }
  return violations;
}

double pochhammer_split(const Context& c) {
  std::mt19937_64 rng(c.seed ^ 0x5bd1e995u);
  const double q = c.q();
  double r = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const int m = int(rng() % 11), n = int(rng() % 11);
    const double re = 3.0 * uniform(rng) - 1.5;
    const double im = 3.0 * uniform(rng) - 1.5;
    const cplx x(re, im);
    const cplx lhs = q_pochhammer(x, m + n, q);
    const cplx rhs = q_pochhammer(x, m, q) * q_pochhammer(x * std::pow(q, m), n, q);
    r = std::max(r, std::abs(lhs - rhs) / std::max(1.0, std::abs(lhs)));
  }
  return r;
}

// ------------------------------------------------------------ lattice

double ibp_line(const Context& c) {
  double r = 0.0;
  for (std::size_t i = 0; i < c.size(); ++i) {
    const GridFunction &f = c.f(i), &h = c.partner(i);
    GridFunction df = dq_derivative(f), dh = dq_derivative(h);
    const cplx s = line_integral(pointwise(df, trimmed_to(h, df))) +
                   line_integral(pointwise(trimmed_to(f, dh), dh));
    r = std::max(r, std::abs(s) / (f.sup_norm() * h.sup_norm()));
  }
  return r;
}

double ibp_finite(const Context& c) {
  double r = 0.0;
  for (std::size_t i = 0; i < c.size(); ++i) {
    const GridFunction &f = c.f(i), &h = c.partner(i);
    GridFunction df = dq_derivative(f), dh = dq_derivative(h);
    GridFunction ft = trimmed_to(f, df), ht = trimmed_to(h, dh);
    auto [fe, fo] = parity_split(f);
    auto [he, ho] = parity_split(h);
    for (int a : {2, 7, 15}) {
      const JacksonDomain dom{JacksonDomain::symmetric, a, 0};
      const cplx lhs = jackson_integral(pointwise(df, ht), dom).value;
      const cplx rhs = 2.0 * (fe(1, a - 1) * ho(1, a) + fo(1, a) * he(1, a - 1)) -
                       jackson_integral(pointwise(ft, dh), dom).value;
      r = std::max(r, std::abs(lhs - rhs) / (f.sup_norm() * h.sup_norm()));
    }
  }
  return r;
}

double product_rules(const Context& c) {
  const double q = c.q();
  double r = 0.0;
  for (std::size_t i = 0; i < c.size(); ++i) {
    GridFunction f = even_part(c.f(i)), f2 = even_part(c.partner(i)), h = odd_part(c.f(i));
    GridFunction d_fh = dq_derivative(pointwise(f, h)), d_ff = dq_derivative(pointwise(f, f2));
    GridFunction df = dq_derivative(f), df2 = dq_derivative(f2), dh = dq_derivative(h);
    const double scale = std::max(1.0, df.sup_norm()) * std::max(1.0, std::max(dh.sup_norm(), df2.sup_norm()));
    const QGrid& g = c.grid;
    for (int n = g.n_lo() + 2; n <= g.n_hi() - 2; ++n) {
      for (int s : {1, -1}) {
        // f even, h odd: two forms of the rule.
        const cplx a = q * df(s, n + 1) * h(s, n) + f(s, n + 1) * dh(s, n);
        const cplx b = dh(s, n) * f(s, n) + q * h(s, n + 1) * df(s, n + 1);
        // Both even.
        const cplx e = df(s, n) * f2(s, n - 1) + f(s, n) * df2(s, n);
        r = std::max({r, std::abs(d_fh(s, n) - a) / scale, std::abs(d_fh(s, n) - b) / scale,
                      std::abs(d_ff(s, n) - e) / scale});
      }
    }
  }
  return r;
}

double dq_rules(const Context& c) {
  const QGrid& g = c.grid;
  GridFunction sn = sin_samples(g, 0), cs = cos_samples(g, 0);
  double r = sup_distance(dq_derivative(sn), cs);
  r = std::max(r, sup_distance(dq_derivative(cs), -1.0 * sn));
  GridFunction x = identity_function(g);
  r = std::max(r, sup_distance(dq_derivative(x), constant(g, 1.0)));
  r = std::max(r, dq_derivative(constant(g, 1.0)).sup_norm());
  auto [zp, zm] = dq_at_zero(x);
  return std::max({r, std::abs(zp - 1.0), std::abs(zm - 1.0)});
}

double iq_inverse(const Context& c) {
  double r = 0.0;
  for (std::size_t i = 0; i < c.size(); ++i) {
    GridFunction fo = odd_part(c.f(i));
    r = std::max(r, sup_distance(dq_derivative(antiderivative(fo, Antiderivative::I_q)), fo));
  }
  return r;
}

double jq_inverse(const Context& c) {
  double r = 0.0;
  for (std::size_t i = 0; i < c.size(); ++i) {
    GridFunction fe = even_part(c.f(i));
    r = std::max(r, sup_distance(antiderivative(dq_derivative(fe), Antiderivative::J_q), fe));
  }
  return r;
}

double parity_exact(const Context& c) {
  double r = 0.0;
  for (const GridFunction& f : c.corpus) {
    auto [fe, fo] = parity_split(f);
    const double s = f.sup_norm();
    r = std::max({r, sup_distance(fe + fo, f) / s, fe.odd_defect() / s, fo.even_defect() / s});
  }
  return r;
}

// ------------------------------------------------------------ fourier

double rubin_round_trip(const Context& c) {
  double r = 0.0;
  for (const GridFunction& f : c.corpus)
    r = std::max(r, rel_distance(rubin_transform(rubin_transform(f)).reflected(), f));
  return r;
}

double rubin_plancherel(const Context& c) {
  double r = 0.0;
  for (const GridFunction& f : c.corpus)
    r = std::max(r, std::abs(weighted_norm(rubin_transform(f), 2.0) / weighted_norm(f, 2.0) - 1.0));
  return r;
}

double rubin_derivative_exchange(const Context& c) {
  double r = 0.0;
  for (const GridFunction& f : c.corpus) {
    GridFunction lhs = rubin_transform(dq_derivative(f), c.grid);
    GridFunction rhs = times_x(rubin_transform(f), kI);
    r = std::max(r, rel_distance(lhs, rhs));
  }
  return r;
}

double rubin_multiplication_exchange(const Context& c) {
  double r = 0.0;
  for (const GridFunction& f : c.corpus) {
    GridFunction lhs = dq_derivative(rubin_transform(f));
    GridFunction rhs = rubin_transform(times_x(f, -kI), lhs.grid());
    r = std::max(r, rel_distance(lhs, rhs));
  }
  return r;
}

double rubin_parity(const Context& c) {
  const QGrid& g = c.grid;
  double r = 0.0;
  for (const GridFunction& f : c.corpus) {
    GridFunction e = even_part(f), o = odd_part(f);
    GridFunction re(g), ro(g);
    for (int n = g.n_lo(); n <= g.n_hi(); ++n) {
      for (int s : {1, -1}) {
        re.set(s, n, e(s, n).real());
        ro.set(s, n, o(s, n).real());
      }
    }
    GridFunction he = rubin_transform(re), ho = rubin_transform(ro);
    double imag_e = 0.0, real_o = 0.0;
    for (int n = g.n_lo(); n <= g.n_hi(); ++n) {
      for (int s : {1, -1}) {
        imag_e = std::max(imag_e, std::abs(he(s, n).imag()));
        real_o = std::max(real_o, std::abs(ho(s, n).real()));
      }
    }
    r = std::max({r, (he.odd_defect() + imag_e) / he.sup_norm(), (ho.even_defect() + real_o) / ho.sup_norm()});
  }
  return r;
}

// ------------------------------------------------------------ bessel

double bessel_orthogonality(const Context& c) {
  const QGrid& g = c.grid;
  const AlphaParam& a = c.alpha();
  const double al = a.alpha(), q = c.q();
  const double diag = std::pow(1.0 + q, 2.0 * al) * std::pow(q_gamma(al + 1.0, g.qp().q2()), 2) / (1.0 - q);
  LatticeBessel J(al, g.qp(), g.n_lo() - 2, g.n_hi() + 2);
  J.require_accuracy(kKernelTolerance, "orthogonality of j_alpha");
  double r = 0.0;
  for (int i = -2; i <= 2; ++i) {
    for (int k = -2; k <= 2; ++k) {
      double s = 0.0;
      for (int n = g.n_hi(); n >= g.n_lo(); --n)
        s += g.weight(n) * J.value(i + n) * J.value(k + n) * std::pow(g.point(n), 2.0 * al + 1.0);
      s *= std::pow(std::pow(q, i + k), al + 1.0);
      r = std::max(r, i == k ? std::abs(s / diag - 1.0) : std::abs(s) / diag);
    }
  }
  return r;
}

double bessel_derivative(const Context& c) {
  const QGrid& g = c.grid;
  const AlphaParam& a = c.alpha();
  GridFunction j = bessel_samples(a, 0, g);
  GridFunction j1 = bessel_samples(AlphaParam(a.alpha() + 1.0, g.qp()), 0, g);
  GridFunction d = dq_derivative(j);
  double r = 0.0;
  for (int n = d.grid().n_lo(); n <= d.grid().n_hi(); ++n)
    for (int s : {1, -1}) r = std::max(r, std::abs(d(s, n) + s * g.point(n) / a.bracket2() * j1(s, n)));
  return r;
}

double bessel_bound(const Context& c) {
  const QGrid& g = c.grid;
  GridFunction j = bessel_samples(c.alpha(), 0, g);
  const double b = j_alpha_bound(c.alpha());
  int violations = 0;
  for (int n = g.n_lo(); n <= g.n_hi(); ++n)
    for (int s : {1, -1})
      if (std::abs(j(s, n)) > b) ++violations;
  return violations;
}

double bessel_decay_bound(const Context& c) {
  const QGrid& g = c.grid;
  GridFunction j = bessel_samples(c.alpha(), 0, g);
  int violations = 0;
  for (int n = g.n_lo(); n <= g.n_hi(); ++n)
    if (std::abs(j(1, n)) > j_alpha_decay_bound(c.alpha(), n)) ++violations;
  return violations;
}

double bessel_plancherel(const Context& c) {
  const double al = c.alpha().alpha();
  double r = 0.0;
  for (const GridFunction& f : c.corpus) {
    GridFunction fe = even_part(f);
    GridFunction F = bessel_transform(c.alpha(), fe);
    r = std::max(r, std::abs(weighted_norm(F, 2.0, al, true) / weighted_norm(fe, 2.0, al, true) - 1.0));
  }
  return r;
}

double bessel_delta_exchange(const Context& c) {
  const QGrid& g = c.grid;
  const AlphaParam& a = c.alpha();
  double r = 0.0;
  for (const GridFunction& f : c.corpus) {
    GridFunction fe = even_part(f);
    GridFunction F = bessel_transform(a, fe);
    auto minus_x2 = [&](int, int n) { return -cplx(g.point(2 * n)); };
    GridFunction FD = bessel_transform(a, bessel_operator(a, fe), g);
    r = std::max(r, rel_distance(FD, multiply_by(F, minus_x2)));
    GridFunction DF = bessel_operator(a, F);
    r = std::max(r, rel_distance(DF, bessel_transform(a, multiply_by(fe, minus_x2), DF.grid())));
  }
  return r;
}

double bessel_eigen(const Context& c) {
  const AlphaParam& a = c.alpha();
  double r = 0.0;
  for (int l : {1, 0, -1}) {
    const double lam = std::pow(c.q(), l);
    GridFunction j = bessel_samples(a, l, c.grid);
    GridFunction lhs = bessel_operator(a, j);
    GridFunction rhs = -lam * lam * trimmed_to(j, lhs);
    r = std::max(r, sup_distance(lhs, rhs) / (lam * lam * j.sup_norm()));
  }
  return r;
}

double bessel_round_trip(const Context& c) {
  double r = 0.0;
  for (const GridFunction& f : c.corpus) {
    GridFunction fe = even_part(f);
    r = std::max(r, rel_distance(bessel_transform(c.alpha(), bessel_transform(c.alpha(), fe)), fe));
  }
  return r;
}

double bessel_exchange(const Context& c) {
  const AlphaParam& a = c.alpha();
  GridFunction xs = x_power(c.grid, 2.0 * a.alpha() + 1.0);
  double r = 0.0;
  for (std::size_t i = 0; i < c.size(); ++i) {
    GridFunction f = even_part(c.f(i)), h = even_part(c.partner(i));
    const cplx lhs = half_integral(pointwise(pointwise(f, bessel_transform(a, h)), xs));
    const cplx rhs = half_integral(pointwise(pointwise(bessel_transform(a, f), h), xs));
    r = std::max(r, std::abs(lhs - rhs));
  }
  return r;
}

double bessel_sup_bound(const Context& c) {
  const AlphaParam& a = c.alpha();
  int violations = 0;
  for (const GridFunction& f : c.corpus) {
    GridFunction fe = even_part(f);
    const double bound = 2.0 * a.c() / c.grid.qp().qq_inf() * weighted_norm(fe, 1.0, a.alpha(), true);
    if (bessel_transform(a, fe).sup_norm() > bound) ++violations;
  }
  return violations;
}

double R_round_trip(const Context& c) {
  const AlphaParam& a = c.alpha();
  double r = 0.0;
  for (const GridFunction& f : c.corpus) {
    GridFunction fe = even_part(f);
    r = std::max(r, rel_distance(riemann_liouville(a, riemann_liouville_inverse(a, fe)), fe));
    r = std::max(r, rel_distance(riemann_liouville_inverse(a, riemann_liouville(a, fe)), fe));
  }
  return r;
}

double tR_round_trip(const Context& c) {
  const AlphaParam& a = c.alpha();
  double r = 0.0;
  for (const GridFunction& f : c.corpus) {
    GridFunction fe = even_part(f);
    r = std::max(r, rel_distance(weyl_transpose(a, weyl_transpose_inverse(a, fe)), fe));
  }
  return r;
}

double bessel_factorization(const Context& c) {
  const AlphaParam& a = c.alpha();
  double r = 0.0;
  for (const GridFunction& f : c.corpus) {
    GridFunction fe = even_part(f);
    r = std::max(r, sup_distance(bessel_transform(a, fe), rubin_transform(weyl_transpose(a, fe))));
  }
  return r;
}

double transmutation_R(const Context& c) {
  const AlphaParam& a = c.alpha();
  double r = 0.0;
  for (const GridFunction& f : c.corpus) {
    GridFunction fe = even_part(f);
    GridFunction lhs = bessel_operator(a, riemann_liouville(a, fe));
    GridFunction rhs = riemann_liouville(a, dq_derivative(dq_derivative(fe)));
    r = std::max(r, rel_distance(lhs, rhs));
  }
  return r;
}

double transmutation_tR(const Context& c) {
  const AlphaParam& a = c.alpha();
  double r = 0.0;
  for (const GridFunction& f : c.corpus) {
    GridFunction fe = even_part(f);
    GridFunction lhs = weyl_transpose(a, bessel_operator(a, fe));
    GridFunction rhs = dq_derivative(dq_derivative(weyl_transpose(a, fe)));
    r = std::max(r, rel_distance(lhs, rhs));
  }
  return r;
}

double bessel_duality(const Context& c) {
  const AlphaParam& a = c.alpha();
  const double K = c.grid.qp().K();
  GridFunction xs = x_power(c.grid, 2.0 * a.alpha() + 1.0);
  double r = 0.0;
  for (std::size_t i = 0; i < c.size(); ++i) {
    GridFunction f = even_part(c.f(i)), h = even_part(c.partner(i));
    const cplx lhs = 0.5 * a.c() * line_integral(pointwise(pointwise(riemann_liouville(a, f), h), xs));
    const cplx rhs = K * line_integral(pointwise(f, weyl_transpose(a, h)));
    r = std::max(r, std::abs(lhs - rhs));
  }
  return r;
}

double bessel_mehler(const Context& c) {
  const AlphaParam& a = c.alpha();
  GridFunction one = constant(c.grid, 1.0);
  double r = sup_distance(riemann_liouville(a, one), one);
  for (int l : {1, 0, -1})
    r = std::max(r, sup_distance(riemann_liouville(a, cos_samples(c.grid, l)), bessel_samples(a, l, c.grid)));
  return r;
}

// ------------------------------------------------------------ dunkl

double kernel_orthogonality(const Context& c) {
  const QGrid& g = c.grid;
  const AlphaParam& a = c.alpha();
  const double al = a.alpha(), q = c.q();
  const double xs[] = {1.0, -1.0, q, -q, 1.0 / q, -1.0 / q};
  GridFunction w = x_power(g, 2.0 * al + 1.0);
  std::vector<GridFunction> k, kc;
  for (double x : xs) {
    k.push_back(dunkl_kernel(a, x, g));
    kc.push_back(dunkl_kernel(a, -x, g));
  }
  const double G = q_gamma(al + 1.0, g.qp().q2());
  double r = 0.0;
  for (int i = 0; i < 6; ++i) {
    const double diag = 4.0 * std::pow(1.0 + q, 2.0 * al) * G * G / ((1.0 - q) * std::pow(xs[i] * xs[i], al + 1.0));
    for (int j = 0; j < 6; ++j) {
      // conj psi_x(lambda) = psi_{-x}(lambda) for real lambda.
      const cplx v = line_integral(pointwise(pointwise(k[std::size_t(i)], kc[std::size_t(j)]), w));
      r = std::max(r, i == j ? std::abs(v - diag) / diag : std::abs(v) / diag);
    }
  }
  return r;
}

double dunkl_eigen(const Context& c) {
  const AlphaParam& a = c.alpha();
  const double q = c.q();
  double r = 0.0;
  for (double lam : {q, 1.0, 1.0 / q, -q, -1.0, -1.0 / q}) {
    GridFunction psi = dunkl_kernel(a, lam, c.grid);
    GridFunction lhs = dunkl_operator(a, psi);
    GridFunction rhs = cplx(0.0, lam) * trimmed_to(psi, lhs);
    r = std::max(r, sup_distance(lhs, rhs) / (std::abs(lam) * psi.sup_norm()));
  }
  return r;
}

double antisymmetry(const Context& c) {
  const AlphaParam& a = c.alpha();
  double r = 0.0;
  for (std::size_t i = 0; i < c.size(); ++i) {
    GridFunction f = c.f(i), h = c.partner(i), fe = even_part(f), fo = odd_part(h);
    for (const auto& [u, v] : {std::pair{f, h}, std::pair{fe, fo}, std::pair{fo, f}}) {
      const cplx l1 = weighted_pairing(a, dunkl_operator(a, u), v);
      const cplx l2 = weighted_pairing(a, u, dunkl_operator(a, v));
      r = std::max(r, std::abs(l1 + l2));
    }
  }
  return r;
}

double same_parity(const Context& c) {
  const AlphaParam& a = c.alpha();
  double r = 0.0;
  for (std::size_t i = 0; i < c.size(); ++i) {
    r = std::max(r, std::abs(weighted_pairing(a, dunkl_operator(a, even_part(c.f(i))), even_part(c.partner(i)))));
    r = std::max(r, std::abs(weighted_pairing(a, dunkl_operator(a, odd_part(c.f(i))), odd_part(c.partner(i)))));
  }
  return r;
}

double operator_parity(const Context& c) {
  const AlphaParam& a = c.alpha();
  double r = 0.0;
  for (const GridFunction& f : c.corpus) {
    GridFunction fe = even_part(f), fo = odd_part(f);
    r = std::max(r, rel_distance(dunkl_operator(a, fe), dq_derivative(fe)));
    GridFunction lo = dunkl_operator(a, fo);
    const QGrid& t = lo.grid();
    GridFunction expect = cplx(a.q_weight()) * dq_derivative(fo) +
                          multiply_by(trimmed_to(fo, lo), [&](int s, int n) { return cplx(a.bracket1() / (s * t.point(n))); });
    r = std::max(r, rel_distance(lo, expect));
  }
  return r;
}

double dunkl_eigen_exchange(const Context& c) {
  const AlphaParam& a = c.alpha();
  double r = 0.0;
  for (const GridFunction& f : c.corpus) {
    GridFunction lhs = dunkl_transform(a, dunkl_operator(a, f), Direction::forward, c.grid);
    GridFunction rhs = times_x(dunkl_transform(a, f, Direction::forward), kI);
    r = std::max(r, rel_distance(lhs, rhs));
  }
  return r;
}

double dunkl_parseval(const Context& c) {
  const AlphaParam& a = c.alpha();
  double r = 0.0;
  for (std::size_t i = 0; i < c.size(); ++i) {
    const GridFunction &f = c.f(i), &h = c.partner(i);
    const cplx p1 = weighted_pairing(a, dunkl_transform(a, f, Direction::forward), h);
    const cplx p2 = weighted_pairing(a, f, dunkl_transform(a, h, Direction::forward));
    r = std::max(r, std::abs(p1 - p2));
  }
  return r;
}

double dunkl_plancherel(const Context& c) {
  const AlphaParam& a = c.alpha();
  double r = 0.0;
  for (const GridFunction& f : c.corpus) {
    GridFunction F = dunkl_transform(a, f, Direction::forward);
    r = std::max(r, std::abs(weighted_norm(F, 2.0, a.alpha()) / weighted_norm(f, 2.0, a.alpha()) - 1.0));
  }
  return r;
}

double dunkl_round_trip(const Context& c) {
  const AlphaParam& a = c.alpha();
  double r = 0.0;
  for (const GridFunction& f : c.corpus) {
    GridFunction F = dunkl_transform(a, f, Direction::forward);
    r = std::max(r, rel_distance(dunkl_transform(a, F, Direction::inverse), f));
    GridFunction G = dunkl_transform(a, f, Direction::inverse);
    r = std::max(r, rel_distance(dunkl_transform(a, G, Direction::forward), f));
  }
  return r;
}

double dunkl_sup_bound(const Context& c) {
  const AlphaParam& a = c.alpha();
  int violations = 0;
  for (const GridFunction& f : c.corpus) {
    const double bound = 2.0 * a.c() / c.grid.qp().qq_inf() * weighted_norm(f, 1.0, a.alpha());
    if (dunkl_transform(a, f, Direction::forward).sup_norm() > bound) ++violations;
  }
  return violations;
}

double dunkl_even_reduction(const Context& c) {
  const AlphaParam& a = c.alpha();
  const QGrid& g = c.grid;
  double r = 0.0;
  for (const GridFunction& f : c.corpus) {
    GridFunction fe = even_part(f);
    GridFunction D = dunkl_transform(a, fe, Direction::forward), B = bessel_transform(a, fe);
    for (int n = g.n_lo(); n <= g.n_hi(); ++n) r = std::max(r, std::abs(D(1, n) - B(1, n)));
  }
  return r;
}

double dunkl_factorization(const Context& c) {
  const AlphaParam& a = c.alpha();
  double r = 0.0;
  for (const GridFunction& f : c.corpus) {
    GridFunction F = dunkl_transform(a, f, Direction::forward);
    r = std::max(r, sup_distance(F, rubin_transform(transpose_tV(a, f))) / f.sup_norm());
  }
  return r;
}

double kernel_bounds(const Context& c) {
  const AlphaParam& a = c.alpha();
  const double B = dunkl_kernel_bound(a);
  int violations = 0;
  for (int l = -12; l <= 24; ++l) {
    const double lam = std::pow(c.q(), l);
    for (int sigma : {1, -1})
      for (int k = 0; k <= 2; ++k)
        if (dunkl_kernel_mehler(a, sigma * lam, c.grid, k).sup_norm() > B * std::pow(lam, k)) ++violations;
  }
  return violations;
}

double kernel_mehler(const Context& c) {
  const AlphaParam& a = c.alpha();
  double r = 0.0;
  for (int l : {-3, 0, 2}) {
    for (int sigma : {1, -1}) {
      const double lam = sigma * std::pow(c.q(), l);
      r = std::max(r, sup_distance(dunkl_kernel(a, lam, c.grid), dunkl_kernel_mehler(a, lam, c.grid)));
    }
  }
  return r;
}

double V_kernel(const Context& c) {
  const AlphaParam& a = c.alpha();
  GridFunction one = constant(c.grid, 1.0);
  double r = sup_distance(intertwiner_V(a, one), one);
  for (int l : {1, 0, -1})
    r = std::max(r, sup_distance(intertwiner_V(a, exp_samples(c.grid, -1, l)), dunkl_kernel(a, -std::pow(c.q(), l), c.grid)));
  return r;
}

double V_round_trip(const Context& c) {
  const AlphaParam& a = c.alpha();
  double r = 0.0;
  for (const GridFunction& f : c.corpus) {
    r = std::max(r, rel_distance(intertwiner_V(a, intertwiner_V_inverse(a, f)), f));
    r = std::max(r, rel_distance(intertwiner_V_inverse(a, intertwiner_V(a, f)), f));
  }
  return r;
}

double tV_round_trip(const Context& c) {
  const AlphaParam& a = c.alpha();
  double r = 0.0;
  for (const GridFunction& f : c.corpus)
    r = std::max(r, rel_distance(transpose_tV(a, transpose_tV_inverse(a, f)), f));
  return r;
}

double transmutation_V(const Context& c) {
  const AlphaParam& a = c.alpha();
  double r = 0.0;
  for (const GridFunction& f : c.corpus) {
    GridFunction lhs = dunkl_operator(a, intertwiner_V(a, f));
    GridFunction rhs = intertwiner_V(a, dq_derivative(f));
    r = std::max(r, rel_distance(lhs, rhs));
  }
  return r;
}

double transmutation_tV(const Context& c) {
  const AlphaParam& a = c.alpha();
  double r = 0.0;
  for (const GridFunction& f : c.corpus) {
    GridFunction lhs = dq_derivative(transpose_tV(a, f));
    GridFunction rhs = transpose_tV(a, dunkl_operator(a, f));
    r = std::max(r, rel_distance(rhs, lhs));
  }
  return r;
}

double V_duality(const Context& c) {
  const AlphaParam& a = c.alpha();
  const double K = c.grid.qp().K();
  double r = 0.0;
  for (std::size_t i = 0; i < c.size(); ++i) {
    const GridFunction &f = c.f(i), &h = c.partner(i);
    const cplx lhs = weighted_pairing(a, intertwiner_V(a, f), h);
    const cplx rhs = K * line_integral(pointwise(f, transpose_tV(a, h)));
    r = std::max(r, std::abs(lhs - rhs));
  }
  return r;
}

double V_routes(const Context& c) {
  const AlphaParam& a = c.alpha();
  double r = 0.0;
  for (const GridFunction& f : c.corpus)
    r = std::max(r, rel_distance(intertwiner_V(a, f, Route::decomposed), intertwiner_V(a, f)));
  return r;
}

double tV_routes(const Context& c) {
  const AlphaParam& a = c.alpha();
  double r = 0.0;
  for (const GridFunction& f : c.corpus)
    r = std::max(r, rel_distance(transpose_tV(a, f, Route::decomposed), transpose_tV(a, f)));
  return r;
}

// ------------------------------------------------------------ registry

std::vector<Identity> build_registry() {
  // id, anchor, tolerance, criterion, per_alpha, strict_only, check
  std::vector<Identity> r = {
      {{"qcore.gamma_functional", "q-Gamma functional equation", 1e-12, 0, false, false}, gamma_functional},
      {{"qcore.exp_trig", "q-exponential equals q-cosine plus i q-sine", 1e-14, 0, false, false}, exp_trig},
      {{"qcore.trig_bounds", "lattice bounds of q-cosine, q-sine and q-exponential", 1.0, 10, false, false}, trig_bounds},
      {{"qcore.pochhammer_split", "q-shifted factorial splits across an index", 1e-13, 0, false, false}, pochhammer_split},

      {{"lattice.ibp_line", "integration by parts on the line", 1e-10, 9, false, false}, ibp_line},
      {{"lattice.ibp_finite", "integration by parts on [-a, a] with boundary term", 1e-10, 9, false, false}, ibp_finite},
      {{"lattice.product_rules", "product rules for d_q on even and odd factors", 1e-9, 9, false, false}, product_rules},
      {{"lattice.dq_rules", "d_q of 1, x, q-sine and q-cosine", 1e-9, 9, false, false}, dq_rules},
      {{"lattice.iq_inverse", "d_q I_q f_o = f_o", 1e-12, 0, false, false}, iq_inverse},
      {{"lattice.jq_inverse", "J_q d_q f_e = f_e", 1e-12, 0, false, false}, jq_inverse},
      {{"lattice.parity_split", "f_e + f_o = f with exact parities", 1e-15, 0, false, false}, parity_exact},

      {{"fourier.round_trip", "Rubin transform twice with reflection", 1e-7, 4, false, false}, rubin_round_trip},
      {{"fourier.plancherel", "Rubin transform Plancherel", 1e-9, 5, false, false}, rubin_plancherel},
      {{"fourier.derivative_exchange", "(d_q f)^ = i x f^", 1e-8, 0, false, false}, rubin_derivative_exchange},
      {{"fourier.multiplication_exchange", "d_q f^ = (-i u f)^", 1e-8, 0, false, false}, rubin_multiplication_exchange},
      {{"fourier.parity", "Rubin transform of real even and real odd input", 1e-15, 0, false, false}, rubin_parity},

      {{"bessel.orthogonality", "orthogonality of j_alpha", 1e-8, 1, true, false}, bessel_orthogonality},
      {{"bessel.derivative", "d_q j_alpha = -x j_{alpha+1} / [2 alpha + 2]_q", 1e-10, 9, true, false}, bessel_derivative},
      {{"bessel.bound", "uniform bound of j_alpha", 1.0, 10, true, false}, bessel_bound},
      {{"bessel.decay_bound", "superexponential decay bound of j_alpha", 1.0, 10, true, false}, bessel_decay_bound},
      {{"bessel.eigen", "q-Bessel operator eigen-equation", 1e-8, 3, true, false}, bessel_eigen},
      {{"bessel.plancherel", "q-Bessel transform Plancherel", 1e-9, 5, true, false}, bessel_plancherel},
      {{"bessel.delta_exchange", "q-Bessel transform exchanges Delta and -x^2", 1e-8, 0, true, false}, bessel_delta_exchange},
      {{"bessel.round_trip", "q-Bessel transform is an involution", 1e-7, 4, true, false}, bessel_round_trip},
      {{"bessel.exchange", "q-Bessel transform exchange formula", 1e-9, 0, true, false}, bessel_exchange},
      {{"bessel.sup_bound", "sup bound of the q-Bessel transform", 1.0, 0, true, false}, bessel_sup_bound},
      {{"bessel.mehler", "R maps 1 to 1 and q-cosine to j_alpha", 1e-8, 0, true, true}, bessel_mehler},
      {{"bessel.R_round_trip", "R R^{-1} = R^{-1} R = id", 1e-7, 4, true, true}, R_round_trip},
      {{"bessel.tR_round_trip", "tR (tR)^{-1} = id", 1e-7, 4, true, true}, tR_round_trip},
      {{"bessel.factorization", "q-Bessel transform is Rubin after tR", 1e-8, 6, true, true}, bessel_factorization},
      {{"bessel.transmutation_R", "Delta R = R d_q^2", 1e-8, 7, true, true}, transmutation_R},
      {{"bessel.transmutation_tR", "tR Delta = d_q^2 tR", 1e-8, 7, true, true}, transmutation_tR},
      {{"bessel.duality", "duality of R and tR", 1e-9, 8, true, true}, bessel_duality},

      {{"dunkl.kernel_orthogonality", "orthogonality of the q-Dunkl kernel", 1e-8, 2, true, false}, kernel_orthogonality},
      {{"dunkl.eigen", "q-Dunkl kernel eigen-equation", 1e-8, 3, true, false}, dunkl_eigen},
      {{"dunkl.antisymmetry", "antisymmetry of the q-Dunkl operator", 1e-10, 8, true, false}, antisymmetry},
      {{"dunkl.same_parity", "q-Dunkl pairing vanishes on equal parities", 1e-10, 0, true, false}, same_parity},
      {{"dunkl.operator_parity", "q-Dunkl operator on even and odd functions", 1e-12, 0, true, false}, operator_parity},
      {{"dunkl.eigen_exchange", "q-Dunkl transform of Lambda f is i lambda F_D f", 1e-8, 0, true, false}, dunkl_eigen_exchange},
      {{"dunkl.parseval", "q-Dunkl transform exchange formula", 1e-9, 0, true, false}, dunkl_parseval},
      {{"dunkl.plancherel", "q-Dunkl transform Plancherel", 1e-9, 5, true, false}, dunkl_plancherel},
      {{"dunkl.round_trip", "q-Dunkl inversion in both orders", 1e-7, 4, true, false}, dunkl_round_trip},
      {{"dunkl.sup_bound", "sup bound of the q-Dunkl transform", 1.0, 0, true, false}, dunkl_sup_bound},
      {{"dunkl.even_reduction", "q-Dunkl transform of even f is the q-Bessel transform", 1e-12, 0, true, false}, dunkl_even_reduction},
      {{"dunkl.kernel_bounds", "bounds of d_q^n psi_lambda for n = 0, 1, 2", 1.0, 10, true, false}, kernel_bounds},
      {{"dunkl.kernel_mehler", "Mehler form of the q-Dunkl kernel", 1e-9, 9, true, true}, kernel_mehler},
      {{"dunkl.factorization", "q-Dunkl transform is Rubin after tV", 1e-8, 6, true, true}, dunkl_factorization},
      {{"dunkl.V_kernel", "V maps 1 to 1 and e(-i lambda x) to psi_{-lambda}", 1e-8, 0, true, true}, V_kernel},
      {{"dunkl.V_round_trip", "V V^{-1} = V^{-1} V = id", 1e-7, 4, true, true}, V_round_trip},
      {{"dunkl.tV_round_trip", "tV (tV)^{-1} = id", 1e-7, 4, true, true}, tV_round_trip},
      {{"dunkl.transmutation_V", "Lambda V = V d_q", 1e-8, 7, true, true}, transmutation_V},
      {{"dunkl.transmutation_tV", "d_q tV = tV Lambda", 1e-8, 7, true, true}, transmutation_tV},
      {{"dunkl.duality", "duality of V and tV", 1e-9, 8, true, true}, V_duality},
      {{"dunkl.V_routes", "V = R f_e + d_q R I_q f_o", 1e-9, 9, true, true}, V_routes},
      {{"dunkl.tV_routes", "tV = tR f_e + d_q tR J_q f_o", 1e-9, 9, true, true}, tV_routes},
  };
  std::sort(r.begin(), r.end(), [](const Identity& x, const Identity& y) { return x.spec.id < y.spec.id; });
  return r;
}

const std::vector<Identity>& identities() {
  static const std::vector<Identity> r = build_registry();
  return r;
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + '"';
}

}  // namespace

const std::vector<IdentitySpec>& identity_registry() {
  static const std::vector<IdentitySpec> r = [] {
    std::vector<IdentitySpec> v;
    for (const Identity& i : identities()) v.push_back(i.spec);
    return v;
  }();
  return r;
}

const IdentitySpec& find_identity(const std::string& id) {
  for (const IdentitySpec& s : identity_registry())
    if (s.id == id) return s;
  throw Error(ErrorCode::invalid_argument, "unknown identity '" + id + "'");
}

int VerificationReport::failures() const {
  return int(std::count_if(entries.begin(), entries.end(), [](const ReportEntry& e) { return !e.pass; }));
}

std::vector<GridFunction> verification_corpus(const QGrid& grid, std::uint64_t seed) {
  const int lo = std::max(0, grid.n_lo()), hi = std::min(20, grid.n_hi());
  if (lo > hi) throw Error(ErrorCode::invalid_argument, "window does not meet the corpus support [0, 20]");
  std::mt19937_64 rng(seed);
  std::vector<GridFunction> out;
  for (int i = 0; i < 8; ++i) {
    GridFunction f(grid);
    for (int n = lo; n <= hi; ++n) {
      for (int s : {1, -1}) {
        const double re = 2.0 * uniform(rng) - 1.0;
        const double im = 2.0 * uniform(rng) - 1.0;
        f.set(s, n, cplx(re, im));
      }
    }
    out.push_back(unit(f));
  }
  return out;
}

VerificationReport run_verification(const VerifyConfig& config) {
  if (config.k < 1) throw Error(ErrorCode::invalid_argument, "k must be a positive integer");
  if (config.tol && !(*config.tol > 0.0)) throw Error(ErrorCode::invalid_argument, "tolerance must be positive");
  for (const std::string& id : config.only) find_identity(id);

  const QParameter qp = admissible_q(config.k);
  const QGrid grid = config.window ? QGrid(qp, config.window->first, config.window->second) : QGrid::standard(qp);
  const std::vector<GridFunction> corpus = verification_corpus(grid, config.seed);

  std::vector<double> alist = config.alphas;
  std::sort(alist.begin(), alist.end());
  alist.erase(std::unique(alist.begin(), alist.end()), alist.end());
  std::vector<AlphaParam> alphas;
  for (double al : alist) alphas.emplace_back(al, qp);

  struct Task {
    const Identity* identity;
    const AlphaParam* alpha;
  };
  std::vector<Task> tasks;
  for (const Identity& id : identities()) {
    if (!config.only.empty() && std::find(config.only.begin(), config.only.end(), id.spec.id) == config.only.end())
      continue;
    if (!id.spec.per_alpha) {
      tasks.push_back({&id, nullptr});
      continue;
    }
    for (const AlphaParam& a : alphas)
      if (a.strict() || !id.spec.strict_only) tasks.push_back({&id, &a});
  }

  VerificationReport report;
  report.q = qp.q();
  report.k = config.k;
  report.n_lo = grid.n_lo();
  report.n_hi = grid.n_hi();
  report.seed = config.seed;
  report.alpha_list = alist;
  report.entries.resize(tasks.size());

  auto run = [&](std::size_t i) {
    const Task& t = tasks[i];
    ReportEntry& e = report.entries[i];
    e.identity_id = t.identity->spec.id;
    e.anchor = t.identity->spec.anchor;
    if (t.alpha) e.alpha = t.alpha->alpha();
    e.tolerance = config.tol.value_or(t.identity->spec.tolerance);
    const auto start = std::chrono::steady_clock::now();
    try {
      e.residual = t.identity->check(Context{grid, t.alpha, corpus, config.seed});
    } catch (const std::exception& ex) {
      e.error = ex.what();
    }
    if (config.timings)
      e.runtime_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    e.pass = e.residual && *e.residual < e.tolerance;
  };

  unsigned threads = config.threads > 0 ? unsigned(config.threads) : std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, unsigned(tasks.size()));
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < threads; ++w)
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < tasks.size(); i = next++) run(i);
    });
  for (std::thread& th : pool) th.join();
  return report;
}

std::string report_json(const VerificationReport& report) {
  using json = nlohmann::ordered_json;
  json entries = json::array();
  for (const ReportEntry& e : report.entries) {
    json j;
    j["identity_id"] = e.identity_id;
    j["anchor"] = e.anchor;
    j["alpha"] = e.alpha ? json(*e.alpha) : json(nullptr);
    j["residual"] = e.residual ? json(*e.residual) : json(nullptr);
    j["tolerance"] = e.tolerance;
    j["pass"] = e.pass;
    j["runtime_ms"] = e.runtime_ms ? json(*e.runtime_ms) : json(nullptr);
    if (!e.error.empty()) j["error"] = e.error;
    entries.push_back(std::move(j));
  }
  json doc;
  doc["q"] = report.q;
  doc["k"] = report.k;
  doc["n_lo"] = report.n_lo;
  doc["n_hi"] = report.n_hi;
  doc["seed"] = report.seed;
  doc["alpha_list"] = report.alpha_list;
  doc["checks"] = report.entries.size();
  doc["failures"] = report.failures();
  doc["entries"] = std::move(entries);
  return doc.dump(2) + "\n";
}

std::string report_csv(const VerificationReport& report) {
  std::ostringstream os;
  os << "identity_id,anchor,alpha,residual,tolerance,pass,runtime_ms\n";
  for (const ReportEntry& e : report.entries) {
    os << e.identity_id << ',' << csv_field(e.anchor) << ',' << (e.alpha ? format_double(*e.alpha) : "") << ','
       << (e.residual ? format_double(*e.residual) : "") << ',' << format_double(e.tolerance) << ','
       << (e.pass ? "true" : "false") << ',' << (e.runtime_ms ? format_double(*e.runtime_ms) : "") << '\n';
  }
  return os.str();
}

}  // namespace qdunkl
