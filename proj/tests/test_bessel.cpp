#include <cmath>

#include "corpus.hpp"
#include "doctest.h"
#include "qdunkl/bessel.hpp"

using namespace qdunkl;
using testing::half_integral;
using testing::line_integral;
using testing::random_compact;
using testing::rel_sup;
using testing::x_power;

namespace {

const QParameter& golden() {
  static const QParameter qp = admissible_q(1);
  return qp;
}

const double kAlphas[] = {-0.5, 0.0, 0.5, 1.0, 1.5};
const double kStrict[] = {0.0, 0.5, 1.0, 1.5};

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

GridFunction cos_samples(const QGrid& g, int l) {
  LatticeTrig t(g.qp(), g.n_lo() + l, g.n_hi() + l);
  std::vector<cplx> d;
  for (int n = g.n_lo(); n <= g.n_hi(); ++n) d.push_back(t.cos_m1(n + l));
  return GridFunction::centered(g, 1.0, d, d);
}

}  // namespace

TEST_CASE("alpha constants against 60-digit values") {
  struct Ref {
    double alpha, c, C, M;
  };
  const Ref refs[] = {
      {0.0, 1.0, 0.7111230966040935107, 0.42164057460237786949},
      {0.5, 0.84328114920475573898, 1.0, 0.5},
      {1.0, 0.6180339887498948482, 1.1506213404904982268, 0.42164057460237786949},
      {1.5, 0.42164057460237786949, 1.2360679774997896964, 0.3090169943749474241},
  };
  for (const Ref& r : refs) {
    AlphaParam a(r.alpha, golden());
    CHECK(rel(a.c(), r.c) < 1e-13);
    CHECK(rel(a.C(), r.C) < 1e-13);
    CHECK(rel(a.M(), r.M) < 1e-13);
  }
  AlphaParam h(-0.5, golden());
  CHECK_FALSE(h.strict());
  CHECK(rel(h.c(), std::pow(1.0 + golden().q(), 0.5) / q_gamma(0.5, golden().q2())) < 1e-15);
  CHECK_THROWS_AS(h.C(), Error);
  CHECK_THROWS_AS(AlphaParam(-0.6, golden()), Error);
}

TEST_CASE("Mehler weight") {
  const double w0[] = {1.9187361063101656253, 1.0, 0.73289197716885167776, 0.6180339887498948482};
  const double w5[] = {1.0031196461286612013, 1.0, 0.99807897117015194144, 0.99689437998485814146};
  const double w40[] = {7.2948018488293581379e-18, 0.0, -4.5084354837721156281e-18, -7.2948018488293580609e-18};
  for (int i = 0; i < 4; ++i) {
    AlphaParam a(kStrict[i], golden());
    MehlerWeight W(a, 200);
    CHECK(rel(W.value(0), w0[i]) < 1e-14);
    CHECK(rel(W.value(5), w5[i]) < 1e-14);
    if (w40[i] == 0.0)
      CHECK(W.minus_one(40) == 0.0);
    else
      CHECK(rel(W.minus_one(40), w40[i]) < 1e-12);
    CHECK(W.value(-1) == 0.0);
    for (int n = 0; n <= 200; ++n) CHECK(W.value(n) > 0.0);
    // C int_0^1 W d_qt = 1.
    double s = 0.0;
    for (int n = 200; n >= 0; --n) s += (1.0 - golden().q()) * std::pow(golden().q(), n) * W.value(n);
    CHECK(std::abs(a.C() * s - 1.0) < 1e-14);
  }
  CHECK_THROWS_AS(MehlerWeight(AlphaParam(-0.5, golden()), 10), Error);
}

TEST_CASE("j_alpha special values and the third Jackson form") {
  const QParameter& qp = golden();
  for (double al : kAlphas) {
    AlphaParam a(al, qp);
    CHECK(j_alpha(a, 0.0).value == cplx(1.0));
    for (double x : {0.2, 1.0, 2.5, 4.0}) {
      SeriesResult s = j_alpha(a, x), t = j_alpha_third_jackson(a, x);
      CHECK(std::abs(s.value - t.value) < 1e-14);
    }
  }
  for (double x : {0.2, 1.0, 2.5}) {
    CHECK(std::abs(j_alpha(AlphaParam(-0.5, qp), x).value - q_trig(TrigKind::cos, x, qp)) < 1e-15);
    CHECK(std::abs(j_alpha(AlphaParam(0.5, qp), x).value - q_trig(TrigKind::sin, x, qp) / x) < 1e-15);
  }
}

TEST_CASE("derivative identity and bounds on the grid") {
  QGrid g = testing::standard_grid();
  for (double al : kAlphas) {
    AlphaParam a(al, g.qp());
    GridFunction j = bessel_samples(a, 0, g);
    GridFunction j1 = bessel_samples(AlphaParam(al + 1.0, g.qp()), 0, g);
    GridFunction d = dq_derivative(j);
    double err = 0.0;
    for (int n = d.grid().n_lo(); n <= d.grid().n_hi(); ++n)
      for (int s : {1, -1})
        err = std::max(err, std::abs(d(s, n) + s * g.point(n) / a.bracket2() * j1(s, n)));
    CHECK(err < 1e-10);

    int violations = 0;
    for (int n = g.n_lo(); n <= g.n_hi(); ++n) {
      const double v = std::abs(j(1, n));
      if (v > j_alpha_bound(a)) ++violations;
      if (v > j_alpha_decay_bound(a, n)) ++violations;
    }
    CHECK(violations == 0);
  }
  // The decay bound is superexponential beyond 1/(1-q).
  AlphaParam a(1.0, g.qp());
  // At golden q, (1-q) q^e = q^{e+2}, so the bound at q^e is P q^{(e+2)^2}.
  CHECK(j_alpha_decay_bound(a, -10) == doctest::Approx(j_alpha_decay_bound(a, 0) * std::pow(g.q(), 64)).epsilon(1e-10));
  CHECK(j_alpha_decay_bound(a, -20) < 1e-60);
  CHECK(j_alpha_decay_bound(a, -2) == j_alpha_decay_bound(a, 5));
}

TEST_CASE("orthogonality of j_alpha") {
  QGrid g = testing::standard_grid();
  const double q = g.q();
  for (double al : kAlphas) {
    AlphaParam a(al, g.qp());
    const double diag = std::pow(1.0 + q, 2.0 * al) * std::pow(q_gamma(al + 1.0, g.qp().q2()), 2) / (1.0 - q);
    LatticeBessel J(al, g.qp(), g.n_lo() - 2, g.n_hi() + 2);
    double off = 0.0, derr = 0.0;
    for (int i = -2; i <= 2; ++i) {
      for (int k = -2; k <= 2; ++k) {
        double s = 0.0;
        for (int n = g.n_hi(); n >= g.n_lo(); --n)
          s += g.weight(n) * J.value(i + n) * J.value(k + n) * std::pow(g.point(n), 2.0 * al + 1.0);
        s *= std::pow(std::pow(q, i + k), al + 1.0);
        if (i == k)
          derr = std::max(derr, std::abs(s / diag - 1.0));
        else
          off = std::max(off, std::abs(s) / diag);
      }
    }
    INFO("alpha = " << al);
    CHECK(derr < 1e-8);
    CHECK(off < 1e-8);
  }
}

TEST_CASE("q-Bessel operator") {
  QGrid g = testing::standard_grid();
  const double q = g.q();
  for (double al : kAlphas) {
    AlphaParam a(al, g.qp());
    CHECK(bessel_operator(a, sample([](double) { return cplx(2.0); }, g)).sup_norm() == 0.0);
    for (int l : {1, 0, -1}) {
      const double lam = std::pow(q, l);
      GridFunction j = bessel_samples(a, l, g);
      GridFunction lhs = bessel_operator(a, j);
      GridFunction rhs = -lam * lam * j.restricted(lhs.grid().n_lo(), lhs.grid().n_hi());
      INFO("alpha = " << al << ", lambda = q^" << l);
      CHECK(sup_distance(lhs, rhs) < 1e-8 * lam * lam * j.sup_norm());
    }
  }
  std::mt19937 rng(1);
  GridFunction f = random_compact(g, rng, 1);
  GridFunction d2 = dq_derivative(dq_derivative(f));
  CHECK(sup_distance(bessel_operator(AlphaParam(-0.5, g.qp()), f), d2) < 1e-13 * d2.sup_norm());
  CHECK_THROWS_AS(bessel_operator(AlphaParam(0.0, g.qp()), random_compact(g, rng, -1)), Error);
}

TEST_CASE("q-Bessel transform") {
  QGrid g = testing::standard_grid();
  std::mt19937 rng(7);
  for (double al : kAlphas) {
    AlphaParam a(al, g.qp());
    const double s = 2.0 * al + 1.0;
    INFO("alpha = " << al);
    for (int trial = 0; trial < 3; ++trial) {
      GridFunction f = random_compact(g, rng, 1);
      GridFunction F = bessel_transform(a, f);
      CHECK(rel_sup(bessel_transform(a, F), f) < 1e-8);

      const double n1 = weighted_norm(f, 2.0, al, true), n2 = weighted_norm(F, 2.0, al, true);
      CHECK(std::abs(n2 / n1 - 1.0) < 1e-9);

      CHECK(F.sup_norm() <= 2.0 * a.c() / g.qp().qq_inf() * weighted_norm(f, 1.0, al, true));

      GridFunction h = random_compact(g, rng, 1);
      GridFunction xs = x_power(g, s);
      cplx lhs = half_integral(pointwise(pointwise(f, bessel_transform(a, h)), xs));
      cplx rhs = half_integral(pointwise(pointwise(F, h), xs));
      CHECK(std::abs(lhs - rhs) < 1e-9);

      // F(Delta f) = -l^2 F(f) and Delta(F f) = -F(x^2 f).
      GridFunction Df = bessel_operator(a, f);
      GridFunction FD = bessel_transform(a, Df, g);
      GridFunction l2F = multiply_by(F, [&](int, int n) { return -cplx(g.point(2 * n)); });
      CHECK(sup_distance(FD, l2F) < 1e-8 * l2F.sup_norm());
      GridFunction x2f = multiply_by(f, [&](int, int n) { return -cplx(g.point(2 * n)); });
      GridFunction DF = bessel_operator(a, F);
      GridFunction Fx2 = bessel_transform(a, x2f, DF.grid());
      CHECK(sup_distance(DF, Fx2) < 1e-8 * Fx2.sup_norm());
    }
  }
  CHECK(bessel_transform(AlphaParam(0.0, g.qp()), GridFunction(g)).sup_norm() == 0.0);
  CHECK_THROWS_AS(bessel_transform(AlphaParam(0.0, g.qp()), sample([](double) { return cplx(1.0); }, g)),
                  Error);
}

TEST_CASE("Riemann-Liouville operator") {
  QGrid g = testing::standard_grid();
  const double q = g.q();
  std::mt19937 rng(11);
  for (double al : kStrict) {
    AlphaParam a(al, g.qp());
    INFO("alpha = " << al);
    GridFunction one = sample([](double) { return cplx(1.0); }, g);
    CHECK(sup_distance(riemann_liouville(a, one), one) < 1e-14);
    CHECK(sup_distance(riemann_liouville(a, GridFunction::centered(g, 1.0, std::vector<cplx>(g.size()),
                                                                   std::vector<cplx>(g.size()))),
                       one) == 0.0);

    for (int l : {1, 0, -1}) {
      GridFunction Rc = riemann_liouville(a, cos_samples(g, l));
      GridFunction j = bessel_samples(a, l, g);
      CHECK(sup_distance(Rc, j) < 1e-8);
      GridFunction back = riemann_liouville_inverse(a, j);
      CHECK(sup_distance(back, cos_samples(g, l)) < 1e-8);
    }

    for (int trial = 0; trial < 3; ++trial) {
      GridFunction f = random_compact(g, rng, 1);
      GridFunction lhs = bessel_operator(a, riemann_liouville(a, f));
      GridFunction rhs = riemann_liouville(a, dq_derivative(dq_derivative(f)));
      CHECK(sup_distance(lhs, rhs) < 1e-8 * rhs.sup_norm());

      CHECK(rel_sup(riemann_liouville_inverse(a, riemann_liouville(a, f)), f) < 1e-8);
      CHECK(rel_sup(riemann_liouville(a, riemann_liouville_inverse(a, f)), f) < 1e-8);
    }
    CHECK(sup_distance(riemann_liouville_inverse(a, one), one) < 1e-14);
  }
  (void)q;
  CHECK_THROWS_AS(riemann_liouville(AlphaParam(-0.5, g.qp()), GridFunction(g)), Error);
  CHECK_THROWS_AS(riemann_liouville(AlphaParam(0.0, g.qp()), random_compact(g, rng, 0)), Error);
}

TEST_CASE("Weyl operator") {
  QGrid g = testing::standard_grid();
  std::mt19937 rng(13);
  const double K = g.qp().K();
  for (double al : kStrict) {
    AlphaParam a(al, g.qp());
    INFO("alpha = " << al);
    CHECK(weyl_transpose(a, GridFunction(g)).sup_norm() == 0.0);
    for (int trial = 0; trial < 3; ++trial) {
      GridFunction f = random_compact(g, rng, 1);
      GridFunction h = random_compact(g, rng, 1);
      GridFunction tRh = weyl_transpose(a, h);

      GridFunction xs = x_power(g, 2.0 * al + 1.0);
      cplx lhs = 0.5 * a.c() * line_integral(pointwise(pointwise(riemann_liouville(a, f), h), xs));
      cplx rhs = K * line_integral(pointwise(f, tRh));
      CHECK(std::abs(lhs - rhs) < 1e-9);

      GridFunction F = bessel_transform(a, h);
      GridFunction R = rubin_transform(tRh);
      CHECK(sup_distance(F, R) < 1e-8 * F.sup_norm());

      GridFunction t1 = weyl_transpose(a, bessel_operator(a, h));
      GridFunction t2 = dq_derivative(dq_derivative(tRh));
      CHECK(sup_distance(t1, t2) < 1e-8 * t2.sup_norm());

      CHECK(rel_sup(weyl_transpose(a, weyl_transpose_inverse(a, h)), h) < 1e-8);
      // The reverse composition divides by |x|^{2a+1} near 0; it is
      // well conditioned on the whole window only for alpha <= 1/2.
      GridFunction back = weyl_transpose_inverse(a, tRh);
      if (al <= 0.5)
        CHECK(rel_sup(back, h) < 1e-8);
      else
        CHECK(rel_sup(back.restricted(g.n_lo(), 12), h.restricted(g.n_lo(), 12)) < 1e-8);

      // The spectral route resolves h where |x|^{2a+2} stays above the
      // rounding floor of the intermediate transform.
      GridFunction spec = weyl_transpose_inverse(a, tRh, InverseMethod::spectral);
      const int m = int(40.0 / (2.0 * al + 2.0));
      CHECK(rel_sup(spec.restricted(g.n_lo(), m), h.restricted(g.n_lo(), m)) < 1e-7);
    }
    CHECK(weyl_transpose_inverse(a, GridFunction(g)).sup_norm() == 0.0);
    CHECK_THROWS_AS(weyl_transpose(a, sample([](double) { return cplx(1.0); }, g)), Error);
  }
}

TEST_CASE("spectral and lattice inverses of R agree on compact input") {
  QGrid g = testing::standard_grid();
  std::mt19937 rng(19);
  for (double al : kStrict) {
    AlphaParam a(al, g.qp());
    GridFunction f = random_compact(g, rng, 1);
    GridFunction lat = riemann_liouville_inverse(a, f);
    GridFunction spec = riemann_liouville_inverse(a, f, InverseMethod::spectral);
    INFO("alpha = " << al);
    CHECK(sup_distance(lat, spec) < 1e-7 * lat.sup_norm());
  }
}
