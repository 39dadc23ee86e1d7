#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "doctest.h"
#include "qdunkl/lattice.hpp"

using namespace qdunkl;

namespace {

QGrid grid() { return QGrid::standard(admissible_q(1)); }

/// Random complex samples supported on exponents [lo, hi], with parity
/// +1 (even), -1 (odd) or 0 (none).
GridFunction random_compact(const QGrid& g, std::mt19937& rng, int parity, int lo = 0, int hi = 20) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  GridFunction f(g);
  for (int n = lo; n <= hi; ++n) {
    cplx a(u(rng), u(rng));
    f.set(1, n, a);
    f.set(-1, n, parity == 0 ? cplx(u(rng), u(rng)) : double(parity) * a);
  }
  return f;
}

cplx integral_symmetric(const GridFunction& f, int a_exp) {
  return jackson_integral(f, JacksonDomain{JacksonDomain::symmetric, a_exp, 0}).value;
}

cplx integral_line(const GridFunction& f) {
  return jackson_integral(f, JacksonDomain::RealLine()).value;
}

}  // namespace

TEST_CASE("grid geometry") {
  QGrid g = grid();
  CHECK(g.n_lo() == -28);
  CHECK(g.n_hi() == 80);
  CHECK(g.point(80) < 2e-16 * g.point(0));
  CHECK(g.exponent_of(g.point(13)) == 13);
  CHECK(g.exponent_of(-g.point(-5)) == -5);
  CHECK_THROWS_AS(g.exponent_of(0.7), Error);
  CHECK_THROWS_AS(QGrid(admissible_q(1), 3, 2), Error);
}

TEST_CASE("sampling") {
  QGrid g = grid();
  GridFunction one = sample([](double) { return cplx(1.0); }, g);
  GridFunction id = sample([](double x) { return cplx(x); }, g);
  for (int n = g.n_lo(); n <= g.n_hi(); ++n) {
    CHECK(one(1, n) == cplx(1.0));
    CHECK(one(-1, n) == cplx(1.0));
    CHECK(id(1, n) == cplx(g.point(n)));
    CHECK(id(-1, n) == cplx(-g.point(n)));
  }
  LatticeTrig t(g.qp(), g.n_lo(), g.n_hi());
  GridFunction c = sample([&](double x) { return cplx(t.cos(g.exponent_of(x))); }, g);
  CHECK(c.even_defect() > 0.0);
  CHECK(c.odd_defect() == 0.0);

  try {
    sample([](double x) -> cplx {
      if (x < -1.0) throw Error(ErrorCode::pole, "boom");
      return 0.0;
    }, g);
    FAIL("expected a failure");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::pole);
    CHECK(std::string(e.what()).find("evaluation failed at x = ") != std::string::npos);
  }
}

TEST_CASE("Jackson integrals") {
  QGrid g = grid();
  const double q = g.q();
  GridFunction one = sample([](double) { return cplx(1.0); }, g);
  GridFunction id = sample([](double x) { return cplx(x); }, g);
  CHECK(std::abs(jackson_integral(one, JacksonDomain::ZeroTo(g, 1.0)).value - 1.0) < 1e-15);
  CHECK(std::abs(jackson_integral(id, JacksonDomain::ZeroTo(g, 1.0)).value - 1.0 / (1.0 + q)) < 1e-15);
  CHECK(std::abs(jackson_integral(id, JacksonDomain::Symmetric(g, 1.0)).value) == 0.0);

  // int_{q^3}^{q} 1 = q - q^3.
  auto seg = jackson_integral(one, JacksonDomain::Segment(g, std::pow(q, 3), q));
  CHECK(std::abs(seg.value - (q - std::pow(q, 3))) < 1e-15);

  CHECK_THROWS_AS(JacksonDomain::ZeroTo(g, 0.7), Error);
  try {
    jackson_integral(one, JacksonDomain::ZeroToInf());
    FAIL("expected tail error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::tail_not_converged);
  }
  CHECK_NOTHROW(jackson_integral(one, JacksonDomain::ZeroToInf(), TailPolicy{1e-6, true}));

  // a_to_inf sums the points strictly beyond a.
  GridFunction f(g);
  f.set(1, 0, 2.0);
  f.set(1, -1, 3.0);
  auto r = jackson_integral(f, JacksonDomain::AToInf(g, 1.0));
  CHECK(std::abs(r.value - (1.0 - q) * 3.0 / q) < 1e-15);

  // Exponentially decaying integrand on the half line.
  GridFunction e = sample([](double x) { return cplx(std::exp(-std::abs(x))); }, g);
  double ref = 0.0;
  for (int n = g.n_lo(); n <= g.n_hi(); ++n) ref += (1.0 - q) * g.point(n) * std::exp(-g.point(n));
  CHECK(std::abs(jackson_integral(e, JacksonDomain::ZeroToInf()).value - ref) < 1e-15);
}

TEST_CASE("d_q on elementary functions") {
  QGrid g = grid();
  GridFunction one = sample([](double) { return cplx(1.0); }, g);
  GridFunction id = sample([](double x) { return cplx(x); }, g);
  GridFunction d1 = dq_derivative(one);
  GridFunction dx = dq_derivative(id);
  CHECK(d1.grid().n_lo() == g.n_lo() + 1);
  CHECK(d1.grid().n_hi() == g.n_hi() - 1);
  CHECK(d1.sup_norm() == 0.0);
  for (int n = dx.grid().n_lo(); n <= dx.grid().n_hi(); ++n)
    for (int s : {1, -1}) CHECK(std::abs(dx(s, n) - 1.0) < 1e-14);
  auto [zp, zm] = dq_at_zero(id);
  CHECK(std::abs(zp - 1.0) < 1e-14);
  CHECK(std::abs(zm - 1.0) < 1e-14);
  CHECK_THROWS_AS(dq_derivative(GridFunction(g.with_window(0, 1))), Error);
}

TEST_CASE("d_q maps the q-sine to the q-cosine") {
  QGrid g = grid();
  LatticeTrig t(g.qp(), g.n_lo(), g.n_hi());
  std::vector<cplx> sp, sn, cp;
  for (int n = g.n_lo(); n <= g.n_hi(); ++n) {
    sp.push_back(t.sin(1, n));
    sn.push_back(t.sin(-1, n));
    cp.push_back(t.cos_m1(n));
  }
  GridFunction sin_f(g, sp, sn);
  GridFunction cos_f = GridFunction::centered(g, 1.0, cp, cp);
  GridFunction ds = dq_derivative(sin_f);
  GridFunction dc = dq_derivative(cos_f);
  double err_s = 0.0, err_c = 0.0;
  for (int n = ds.grid().n_lo(); n <= ds.grid().n_hi(); ++n) {
    for (int s : {1, -1}) {
      err_s = std::max(err_s, std::abs(ds(s, n) - cos_f(s, n)));
      err_c = std::max(err_c, std::abs(dc(s, n) + sin_f(s, n)));
    }
  }
  CHECK(err_s < 1e-13);
  CHECK(err_c < 1e-13);
}

TEST_CASE("parity split") {
  QGrid g = grid();
  std::mt19937 rng(5);
  GridFunction f = random_compact(g, rng, 0);
  auto [fe, fo] = parity_split(f);
  CHECK(fe.odd_defect() == 0.0);
  CHECK(fo.even_defect() == 0.0);
  // One rounding of (a+b)/2 and (a-b)/2 each: at most an ulp of sup |f|.
  CHECK(sup_distance(fe + fo, f) <= std::numeric_limits<double>::epsilon() * f.sup_norm());

  GridFunction even = random_compact(g, rng, 1);
  auto [ee, eo] = parity_split(even);
  CHECK(sup_distance(ee, even) == 0.0);
  CHECK(eo.sup_norm() == 0.0);

  GridFunction odd = random_compact(g, rng, -1);
  auto [oe, oo] = parity_split(odd);
  CHECK(oe.sup_norm() == 0.0);
  CHECK(sup_distance(oo, odd) == 0.0);

  GridFunction lin = sample_centered(1.0, [](double x) { return cplx(x); }, g);
  auto [le, lo] = parity_split(lin);
  for (int n = g.n_lo(); n <= g.n_hi(); ++n) {
    CHECK(le(1, n) == cplx(1.0));
    CHECK(lo(1, n) == cplx(g.point(n)));
    CHECK(lo(-1, n) == cplx(-g.point(n)));
  }
}

TEST_CASE("antiderivatives") {
  QGrid g = grid();
  std::mt19937 rng(17);
  CHECK(antiderivative(GridFunction(g), Antiderivative::I_q).sup_norm() == 0.0);

  // d_q I_q f_o = f_o for f_o(x) = x.
  GridFunction id = sample([](double x) { return cplx(x); }, g).restricted(0, 80);
  GridFunction back = dq_derivative(antiderivative(id, Antiderivative::I_q, TailPolicy{1e-6, true}));
  CHECK(sup_distance(back, id) < 1e-12);

  for (int trial = 0; trial < 5; ++trial) {
    GridFunction fo = random_compact(g, rng, -1);
    GridFunction iq = antiderivative(fo, Antiderivative::I_q);
    CHECK(iq.odd_defect() == 0.0);
    CHECK(sup_distance(dq_derivative(iq), fo) < 1e-12);

    // J_q d_q f = f for even compactly supported f.
    GridFunction fe = random_compact(g, rng, 1);
    GridFunction jq = antiderivative(dq_derivative(fe), Antiderivative::J_q);
    CHECK(jq.odd_defect() == 0.0);
    CHECK(sup_distance(jq, fe) < 1e-12);
  }

  try {
    antiderivative(random_compact(g, rng, 0), Antiderivative::I_q);
    FAIL("expected not_odd");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::not_odd);
  }
  GridFunction slow = sample([](double x) { return cplx(x / (1.0 + x * x)); }, g);
  CHECK_THROWS_AS(antiderivative(slow, Antiderivative::J_q), Error);
}

TEST_CASE("integration by parts") {
  QGrid g = grid();
  std::mt19937 rng(23);
  for (int trial = 0; trial < 10; ++trial) {
    GridFunction f = random_compact(g, rng, 0);
    GridFunction h = random_compact(g, rng, 0);
    GridFunction df = dq_derivative(f), dh = dq_derivative(h);
    const QGrid& t = df.grid();
    GridFunction ft = f.restricted(t.n_lo(), t.n_hi()), ht = h.restricted(t.n_lo(), t.n_hi());
    const double scale = f.sup_norm() * h.sup_norm();

    cplx line = integral_line(pointwise(df, ht)) + integral_line(pointwise(ft, dh));
    CHECK(std::abs(line) < 1e-10 * scale);

    // Finite version on [-a, a] with the boundary term.
    auto [fe, fo] = parity_split(f);
    auto [he, ho] = parity_split(h);
    for (int a_exp : {2, 7, 15}) {
      cplx lhs = integral_symmetric(pointwise(df, ht), a_exp);
      cplx rhs = 2.0 * (fe(1, a_exp - 1) * ho(1, a_exp) + fo(1, a_exp) * he(1, a_exp - 1)) -
                 integral_symmetric(pointwise(ft, dh), a_exp);
      CHECK(std::abs(lhs - rhs) < 1e-10 * scale);
    }
  }
}

TEST_CASE("product rules") {
  QGrid g = grid();
  const double q = g.q();
  std::mt19937 rng(29);
  for (int trial = 0; trial < 5; ++trial) {
    GridFunction f = random_compact(g, rng, 1);
    GridFunction f2 = random_compact(g, rng, 1);
    GridFunction h = random_compact(g, rng, -1);
    GridFunction d_fh = dq_derivative(pointwise(f, h));
    GridFunction d_ff = dq_derivative(pointwise(f, f2));
    GridFunction df = dq_derivative(f), df2 = dq_derivative(f2), dh = dq_derivative(h);
    const double scale = std::max(1.0, dq_derivative(f).sup_norm()) * std::max(1.0, dh.sup_norm());
    for (int n = g.n_lo() + 2; n <= g.n_hi() - 2; ++n) {
      for (int s : {1, -1}) {
        // f even, h odd.
        cplx a = q * df(s, n + 1) * h(s, n) + f(s, n + 1) * dh(s, n);
        cplx b = dh(s, n) * f(s, n) + q * h(s, n + 1) * df(s, n + 1);
        CHECK(std::abs(d_fh(s, n) - a) < 1e-12 * scale);
        CHECK(std::abs(d_fh(s, n) - b) < 1e-12 * scale);
        // both even.
        cplx c = df(s, n) * f2(s, n - 1) + f(s, n) * df2(s, n);
        CHECK(std::abs(d_ff(s, n) - c) < 1e-12 * scale);
      }
    }
  }
}

TEST_CASE("weighted norms") {
  QGrid g = grid();
  const double q = g.q();
  CHECK(weighted_norm(GridFunction(g), 2.0) == 0.0);
  CHECK(weighted_norm(sample([](double) { return cplx(1.0); }, g), INFINITY) == 1.0);
  GridFunction f(g);
  for (int n = 0; n <= g.n_hi(); ++n) f.set(1, n, g.point(n));
  CHECK(std::abs(weighted_norm(f, 1.0, -0.5, true) - 1.0 / (1.0 + q)) < 1e-15);
  CHECK_THROWS_AS(weighted_norm(f, 0.5), Error);
}

TEST_CASE("function classes") {
  QGrid g = grid();
  std::mt19937 rng(3);
  CHECK(classify(random_compact(g, rng, 0)).tag == FunctionClass::compact_support);
  auto r = classify(sample([](double x) { return cplx(1.0 / (1.0 + x * x)); }, g));
  CHECK(r.tag == FunctionClass::rapid_decay);
  CHECK(r.decay_evidence > 0.0);
  CHECK(classify(sample([](double) { return cplx(1.0); }, g)).tag == FunctionClass::generic);
}

TEST_CASE("file round trip") {
  QGrid g = grid();
  std::mt19937 rng(41);
  std::uniform_real_distribution<double> u(-1e3, 1e3);
  GridFunction f(g);
  for (int n = g.n_lo(); n <= g.n_hi(); ++n)
    for (int s : {1, -1}) f.set(s, n, cplx(u(rng), u(rng) * 1e-9));
  std::stringstream ss;
  write_grid_function(ss, f);
  GridFunction back = read_grid_function(ss);
  CHECK(back.grid() == g);
  CHECK(back.grid().qp().k() == 1);
  CHECK(back.pos() == f.pos());
  CHECK(back.neg() == f.neg());

  std::ostringstream csv;
  write_csv(csv, f.restricted(0, 1));
  CHECK(csv.str().rfind("n,x,re,im,branch\n0,1,", 0) == 0);
}

TEST_CASE("file schema errors") {
  auto expect_schema = [](const std::string& text, const std::string& needle) {
    std::istringstream is(text);
    try {
      read_grid_function(is);
      FAIL("expected schema error for " << text);
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::schema);
      CHECK_MESSAGE(std::string(e.what()).find(needle) != std::string::npos, e.what());
    }
  };
  expect_schema(R"({"q":0.5,"n_lo":0,"n_hi":1,"pos":[[1,0]],"neg":[[1,0],[2,0]]})", "'pos' has length 1");
  expect_schema(R"({"q":1.5,"n_lo":0,"n_hi":0,"pos":[[1,0]],"neg":[[1,0]]})", "outside (0,1)");
  expect_schema(R"({"q":0.5,"k":1,"n_lo":0,"n_hi":0,"pos":[[1,0]],"neg":[[1,0]]})", "'q'/'k'");
  expect_schema("{\n\"q\": 0.5,\n\"n_lo\": 0,\n]", "line 4");
  expect_schema(R"({"q":0.5,"n_lo":0,"n_hi":0,"pos":[[1]],"neg":[[1,0]]})", "pos[0]");
  expect_schema(R"({"q":0.5,"n_hi":0,"pos":[],"neg":[]})", "missing field 'n_lo'");
}
