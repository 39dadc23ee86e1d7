#include "qdunkl/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace qdunkl {

namespace {

// u - v for two samples given as (value, deviation) pairs whose baselines
// differ by db: from the deviations where they are the smaller numbers (near
// the origin), from the values elsewhere.
cplx sample_difference(cplx vu, cplx du, cplx vv, cplx dv, cplx db) {
  const bool near_origin = std::max(std::abs(du), std::abs(dv)) < std::max(std::abs(vu), std::abs(vv));
  return near_origin ? db + du - dv : vu - vv;
}

void require_same_grid(const GridFunction& a, const GridFunction& b) {
  if (!(a.grid() == b.grid()))
    throw Error(ErrorCode::invalid_argument, "grid functions live on different grids");
}

}  // namespace

// ---------------------------------------------------------------- QGrid

QGrid::QGrid(QParameter qp, int n_lo, int n_hi) : qp_(qp), n_lo_(n_lo), n_hi_(n_hi) {
  if (n_lo > n_hi) {
    std::ostringstream os;
    os << "empty window [" << n_lo << ", " << n_hi << "]";
    throw Error(ErrorCode::invalid_argument, os.str());
  }
}

QGrid QGrid::standard(const QParameter& qp) {
  const double lq = std::log(qp.q());
  int hi = int(std::ceil(std::log(2e-17) / lq));
  int lo = int(std::floor(std::log(7e5) / lq));
  return QGrid(qp, lo, hi);
}

std::size_t QGrid::index(int n) const {
  if (!contains(n)) {
    std::ostringstream os;
    os << "exponent " << n << " outside window [" << n_lo_ << ", " << n_hi_ << "]";
    throw Error(ErrorCode::point_off_lattice, os.str());
  }
  return std::size_t(n - n_lo_);
}

double QGrid::point(int n) const { return std::pow(qp_.q(), n); }

int QGrid::exponent_of(double x) const {
  const double ax = std::abs(x);
  if (!(ax > 0.0) || !std::isfinite(ax)) {
    std::ostringstream os;
    os << x << " is not a lattice point";
    throw Error(ErrorCode::point_off_lattice, os.str());
  }
  const int n = int(std::lround(std::log(ax) / std::log(qp_.q())));
  if (std::abs(point(n) - ax) > 1e-12 * ax || !contains(n)) {
    std::ostringstream os;
    os << x << " is not a point of the lattice window [" << n_lo_ << ", " << n_hi_ << "]";
    throw Error(ErrorCode::point_off_lattice, os.str());
  }
  return n;
}

bool QGrid::same_lattice(const QGrid& other) const {
  return qp_.q() == other.qp_.q() && qp_.k() == other.qp_.k();
}

bool operator==(const QGrid& a, const QGrid& b) {
  return a.same_lattice(b) && a.n_lo() == b.n_lo() && a.n_hi() == b.n_hi();
}

// ---------------------------------------------------------- GridFunction

GridFunction::GridFunction(QGrid grid)
    : grid_(std::move(grid)),
      pos_(std::size_t(grid_.size())),
      neg_(std::size_t(grid_.size())),
      vpos_(pos_.size()),
      vneg_(pos_.size()) {}

GridFunction::GridFunction(QGrid grid, std::vector<cplx> pos, std::vector<cplx> neg)
    : grid_(std::move(grid)), pos_(std::move(pos)), neg_(std::move(neg)) {
  const std::size_t n = std::size_t(grid_.size());
  if (pos_.size() != n || neg_.size() != n) {
    std::ostringstream os;
    os << "branch lengths " << pos_.size() << "/" << neg_.size() << " do not match window size " << n;
    throw Error(ErrorCode::invalid_argument, os.str());
  }
  vpos_ = pos_;
  vneg_ = neg_;
}

GridFunction GridFunction::centered(QGrid grid, cplx baseline, std::vector<cplx> pos_dev,
                                    std::vector<cplx> neg_dev) {
  GridFunction f(std::move(grid), std::move(pos_dev), std::move(neg_dev));
  f.base_ = baseline;
  for (auto& x : f.vpos_) x += baseline;
  for (auto& x : f.vneg_) x += baseline;
  return f;
}

GridFunction GridFunction::dual(QGrid grid, cplx baseline, std::vector<cplx> pos, std::vector<cplx> neg,
                                std::vector<cplx> pos_dev, std::vector<cplx> neg_dev) {
  GridFunction f(std::move(grid), std::move(pos_dev), std::move(neg_dev));
  if (pos.size() != f.pos_.size() || neg.size() != f.pos_.size())
    throw Error(ErrorCode::invalid_argument, "value and deviation lengths differ");
  f.base_ = baseline;
  f.vpos_ = std::move(pos);
  f.vneg_ = std::move(neg);
  return f;
}

void GridFunction::set(int s, int n, cplx value) {
  const std::size_t i = grid_.index(n);
  (s > 0 ? vpos_ : vneg_)[i] = value;
  branch(s)[i] = value - base_;
}

void GridFunction::set_dev(int s, int n, cplx d) {
  const std::size_t i = grid_.index(n);
  branch(s)[i] = d;
  (s > 0 ? vpos_ : vneg_)[i] = base_ + d;
}

GridFunction GridFunction::reflected() const {
  GridFunction r(*this);
  std::swap(r.pos_, r.neg_);
  std::swap(r.vpos_, r.vneg_);
  return r;
}

GridFunction GridFunction::restricted(int n_lo, int n_hi) const {
  QGrid g = grid_.with_window(n_lo, n_hi);
  if (!grid_.contains(n_lo) || !grid_.contains(n_hi))
    throw Error(ErrorCode::invalid_argument, "restriction window leaves the grid");
  auto slice = [&](const std::vector<cplx>& v) {
    return std::vector<cplx>(v.begin() + long(grid_.index(n_lo)), v.begin() + long(grid_.index(n_hi)) + 1);
  };
  return dual(g, base_, slice(vpos_), slice(vneg_), slice(pos_), slice(neg_));
}

GridFunction GridFunction::flattened() const { return GridFunction(grid_, vpos_, vneg_); }

double GridFunction::sup_norm() const {
  double m = 0.0;
  for (std::size_t i = 0; i < pos_.size(); ++i) m = std::max({m, std::abs(vpos_[i]), std::abs(vneg_[i])});
  return m;
}

double GridFunction::odd_defect() const {
  double m = 0.0;
  for (std::size_t i = 0; i < pos_.size(); ++i)
    m = std::max(m, std::abs(sample_difference(vpos_[i], pos_[i], vneg_[i], neg_[i], 0.0)));
  return m;
}

double GridFunction::even_defect() const {
  double m = 2.0 * std::abs(base_);
  for (std::size_t i = 0; i < pos_.size(); ++i) m = std::max(m, std::abs(vpos_[i] + vneg_[i]));
  return m;
}

GridFunction& GridFunction::operator+=(const GridFunction& o) {
  require_same_grid(*this, o);
  base_ += o.base_;
  for (std::size_t i = 0; i < pos_.size(); ++i) {
    pos_[i] += o.pos_[i];
    neg_[i] += o.neg_[i];
    vpos_[i] += o.vpos_[i];
    vneg_[i] += o.vneg_[i];
  }
  return *this;
}

GridFunction& GridFunction::operator-=(const GridFunction& o) {
  require_same_grid(*this, o);
  base_ -= o.base_;
  for (std::size_t i = 0; i < pos_.size(); ++i) {
    pos_[i] -= o.pos_[i];
    neg_[i] -= o.neg_[i];
    vpos_[i] -= o.vpos_[i];
    vneg_[i] -= o.vneg_[i];
  }
  return *this;
}

GridFunction& GridFunction::operator*=(cplx c) {
  base_ *= c;
  for (auto* v : {&pos_, &neg_, &vpos_, &vneg_})
    for (auto& x : *v) x *= c;
  return *this;
}

GridFunction operator+(GridFunction a, const GridFunction& b) { return a += b; }
GridFunction operator-(GridFunction a, const GridFunction& b) { return a -= b; }
GridFunction operator*(cplx c, GridFunction a) { return a *= c; }

GridFunction pointwise(const GridFunction& a, const GridFunction& b) {
  require_same_grid(a, b);
  std::vector<cplx> p(a.pos_dev().size()), m(p.size()), vp(p.size()), vm(p.size());
  const cplx ba = a.baseline(), bb = b.baseline();
  for (std::size_t i = 0; i < p.size(); ++i) {
    p[i] = ba * b.pos_dev()[i] + a.pos_dev()[i] * bb + a.pos_dev()[i] * b.pos_dev()[i];
    m[i] = ba * b.neg_dev()[i] + a.neg_dev()[i] * bb + a.neg_dev()[i] * b.neg_dev()[i];
    vp[i] = a.pos()[i] * b.pos()[i];
    vm[i] = a.neg()[i] * b.neg()[i];
  }
  return GridFunction::dual(a.grid(), ba * bb, std::move(vp), std::move(vm), std::move(p), std::move(m));
}

GridFunction multiply_by(const GridFunction& f, const std::function<cplx(int, int)>& mult) {
  const QGrid& g = f.grid();
  GridFunction r(g);
  for (int n = g.n_lo(); n <= g.n_hi(); ++n)
    for (int s : {1, -1}) r.set(s, n, f(s, n) * mult(s, n));
  return r;
}

double sup_distance(const GridFunction& a, const GridFunction& b) {
  if (!a.grid().same_lattice(b.grid()))
    throw Error(ErrorCode::invalid_argument, "grid functions live on different lattices");
  const int lo = std::max(a.grid().n_lo(), b.grid().n_lo());
  const int hi = std::min(a.grid().n_hi(), b.grid().n_hi());
  const cplx db = a.baseline() - b.baseline();
  double m = 0.0;
  for (int n = lo; n <= hi; ++n)
    for (int s : {1, -1})
      m = std::max(m, std::abs(sample_difference(a(s, n), a.dev(s, n), b(s, n), b.dev(s, n), db)));
  return m;
}

std::optional<std::pair<int, int>> support(const GridFunction& f) {
  const QGrid& g = f.grid();
  if (f.baseline() != 0.0) return std::make_pair(g.n_lo(), g.n_hi());
  int lo = g.n_hi() + 1, hi = g.n_lo() - 1;
  for (int n = g.n_lo(); n <= g.n_hi(); ++n) {
    if (f.dev(1, n) != 0.0 || f.dev(-1, n) != 0.0) {
      lo = std::min(lo, n);
      hi = std::max(hi, n);
    }
  }
  if (lo > hi) return std::nullopt;
  return std::make_pair(lo, hi);
}

GridFunction sample(const std::function<cplx(double)>& f, const QGrid& grid) {
  return sample_centered(0.0, f, grid);
}

GridFunction sample_centered(cplx baseline, const std::function<cplx(double)>& dev,
                             const QGrid& grid) {
  std::vector<cplx> p(std::size_t(grid.size())), m(p.size());
  for (int n = grid.n_lo(); n <= grid.n_hi(); ++n) {
    for (int s : {1, -1}) {
      const double x = s * grid.point(n);
      cplx v;
      try {
        v = dev(x);
      } catch (const Error& e) {
        std::ostringstream os;
        os << "evaluation failed at x = " << x << " (n = " << n << "): " << e.message();
        throw Error(e.code(), os.str());
      } catch (const std::exception& e) {
        std::ostringstream os;
        os << "evaluation failed at x = " << x << " (n = " << n << "): " << e.what();
        throw Error(ErrorCode::invalid_argument, os.str());
      }
      (s > 0 ? p : m)[grid.index(n)] = v;
    }
  }
  return GridFunction::centered(grid, baseline, std::move(p), std::move(m));
}

// ------------------------------------------------------------ classify

FunctionClass classify(const GridFunction& f) {
  const QGrid& g = f.grid();
  const double sup = f.sup_norm();
  double edge = 0.0;
  for (int n = g.n_lo(); n <= std::min(g.n_lo() + 1, g.n_hi()); ++n)
    edge = std::max({edge, std::abs(f(1, n)), std::abs(f(-1, n))});
  const double evidence = sup > 0.0 ? edge / sup : 0.0;
  FunctionClass::Tag tag = FunctionClass::generic;
  if (evidence <= 1e-14) tag = FunctionClass::compact_support;
  else if (evidence <= 1e-8) tag = FunctionClass::rapid_decay;
  return {tag, evidence};
}

const char* to_string(FunctionClass::Tag tag) {
  switch (tag) {
    case FunctionClass::compact_support: return "compact_support";
    case FunctionClass::rapid_decay: return "rapid_decay";
    case FunctionClass::generic: return "generic";
  }
  return "unknown";
}

// ------------------------------------------------------------ Jackson

JacksonDomain JacksonDomain::ZeroTo(const QGrid& g, double a) {
  if (a <= 0.0) throw Error(ErrorCode::point_off_lattice, "upper limit must be in R_{q,+}");
  return {zero_to, g.exponent_of(a), 0};
}

JacksonDomain JacksonDomain::Segment(const QGrid& g, double a, double b) {
  if (a <= 0.0 || b <= 0.0) throw Error(ErrorCode::point_off_lattice, "limits must be in R_{q,+}");
  return {segment, g.exponent_of(a), g.exponent_of(b)};
}

JacksonDomain JacksonDomain::AToInf(const QGrid& g, double a) {
  if (a <= 0.0) throw Error(ErrorCode::point_off_lattice, "lower limit must be in R_{q,+}");
  return {a_to_inf, g.exponent_of(a), 0};
}

JacksonDomain JacksonDomain::Symmetric(const QGrid& g, double a) {
  if (a <= 0.0) throw Error(ErrorCode::point_off_lattice, "limit must be in R_{q,+}");
  return {symmetric, g.exponent_of(a), 0};
}

TailReport weighted_tail(const GridFunction& f, double power) {
  const QGrid& g = f.grid();
  auto term = [&](int n) {
    return g.weight(n) * std::pow(g.point(n), power) * std::max(std::abs(f(1, n)), std::abs(f(-1, n)));
  };
  double scale = 0.0;
  for (int n = g.n_lo(); n <= g.n_hi(); ++n) scale += term(n);
  const double t0 = term(g.n_lo());
  if (t0 == 0.0) return {0.0, scale};
  if (g.size() == 1) return {t0, scale};
  const double t1 = term(g.n_lo() + 1);
  const double r = t1 > 0.0 ? t0 / t1 : std::numeric_limits<double>::infinity();
  if (r < 1.0) return {t0 * r / (1.0 - r), scale};
  // Not decaying: only acceptable as rounding noise.
  if (t0 <= 1e-14 * scale) return {t0, scale};
  return {std::numeric_limits<double>::infinity(), scale};
}

void require_tail(const GridFunction& f, double power, const TailPolicy& policy, const char* what) {
  if (policy.force) return;
  TailReport t = weighted_tail(f, power);
  if (!t.converged(policy.rel_tol)) {
    std::ostringstream os;
    os << what << ": extrapolated tail " << t.estimate << " exceeds " << policy.rel_tol
       << " x scale " << t.scale << " at the outer window edge";
    throw Error(ErrorCode::tail_not_converged, os.str());
  }
}

JacksonResult jackson_integral(const GridFunction& f, const JacksonDomain& d, const TailPolicy& policy) {
  const QGrid& g = f.grid();
  auto half = [&](int from, int to, bool both) {
    cplx s = 0.0;
    for (int n = from; n <= to; ++n) s += g.weight(n) * (both ? f(1, n) + f(-1, n) : f(1, n));
    return s;
  };
  auto edge = [&](int n, bool both) {
    return g.weight(n) * (both ? std::abs(f(1, n)) + std::abs(f(-1, n)) : std::abs(f(1, n)));
  };
  auto need = [&](int n) {
    if (!g.contains(n)) throw Error(ErrorCode::point_off_lattice, "integration limit outside the window");
  };
  JacksonResult r{0.0, 0.0};
  switch (d.kind) {
    case JacksonDomain::zero_to:
      need(d.a_exp);
      r.value = half(d.a_exp, g.n_hi(), false);
      r.truncation_error = edge(g.n_hi(), false);
      break;
    case JacksonDomain::segment:
      need(d.a_exp);
      need(d.b_exp);
      r.value = half(d.b_exp, g.n_hi(), false) - half(d.a_exp, g.n_hi(), false);
      r.truncation_error = 0.0;
      break;
    case JacksonDomain::symmetric:
      need(d.a_exp);
      r.value = half(d.a_exp, g.n_hi(), true);
      r.truncation_error = edge(g.n_hi(), true);
      break;
    case JacksonDomain::zero_to_inf:
    case JacksonDomain::real_line: {
      const bool both = d.kind == JacksonDomain::real_line;
      require_tail(f, 0.0, policy, "Jackson integral");
      r.value = half(g.n_lo(), g.n_hi(), both);
      r.truncation_error = std::max(edge(g.n_lo(), both), edge(g.n_hi(), both));
      break;
    }
    case JacksonDomain::a_to_inf:
      need(d.a_exp);
      require_tail(f, 0.0, policy, "Jackson integral");
      r.value = half(g.n_lo(), d.a_exp - 1, false);
      r.truncation_error = edge(g.n_lo(), false);
      break;
  }
  return r;
}

// ------------------------------------------------------------ d_q

GridFunction dq_derivative(const GridFunction& f) {
  const QGrid& g = f.grid();
  if (g.size() < 3) throw Error(ErrorCode::window_too_small, "d_q needs at least 3 exponents");
  const double oq = g.qp().one_minus_q();
  QGrid out = g.with_window(g.n_lo() + 1, g.n_hi() - 1);
  GridFunction r(out);
  for (int n = out.n_lo(); n <= out.n_hi(); ++n) {
    for (int s : {1, -1}) {
      // [f(z/q) + f(-z/q) - f(qz) + f(-qz) - 2 f(-z)] / (2(1-q)z), z = s q^n
      cplx num = f.dev(s, n - 1) + f.dev(-s, n - 1) - f.dev(s, n + 1) + f.dev(-s, n + 1) -
                 2.0 * f.dev(-s, n);
      r.set_dev(s, n, num / (2.0 * oq * s * g.point(n)));
    }
  }
  return r;
}

std::pair<cplx, cplx> dq_at_zero(const GridFunction& f) {
  GridFunction d = dq_derivative(f);
  return {d(1, d.grid().n_hi()), d(-1, d.grid().n_hi())};
}

std::pair<GridFunction, GridFunction> parity_split(const GridFunction& f) {
  const QGrid& g = f.grid();
  const std::size_t N = std::size_t(g.size());
  std::vector<cplx> ed(N), ev(N), op(N), on(N);
  for (std::size_t i = 0; i < N; ++i) {
    ed[i] = 0.5 * (f.pos_dev()[i] + f.neg_dev()[i]);
    ev[i] = 0.5 * (f.pos()[i] + f.neg()[i]);
    op[i] = 0.5 * sample_difference(f.pos()[i], f.pos_dev()[i], f.neg()[i], f.neg_dev()[i], 0.0);
    on[i] = -op[i];
  }
  return {GridFunction::dual(g, f.baseline(), ev, ev, ed, ed), GridFunction(g, std::move(op), std::move(on))};
}

GridFunction antiderivative(const GridFunction& f_o, Antiderivative kind, const TailPolicy& policy) {
  const QGrid& g = f_o.grid();
  const double scale = f_o.sup_norm();
  if (f_o.even_defect() > 2e-12 * scale) {
    std::ostringstream os;
    os << "antiderivative needs an odd input (even part " << 0.5 * f_o.even_defect() << ")";
    throw Error(ErrorCode::not_odd, os.str());
  }
  if (kind == Antiderivative::J_q) require_tail(f_o, 0.0, policy, "J_q");
  // I(q^n) = sum_{m > n} (1-q) q^m f_o(q^m): lattice points u <= q|x|.
  std::vector<cplx> acc(std::size_t(g.size()));
  cplx run = 0.0;
  for (int n = g.n_hi(); n >= g.n_lo(); --n) {
    acc[g.index(n)] = run;
    run += g.weight(n) * f_o(1, n);
  }
  const cplx total = run;
  if (kind == Antiderivative::I_q) return GridFunction(g, acc, acc);
  // J_q(q^n) = -sum_{m <= n} (1-q) q^m f_o(q^m), accurate where it is small.
  std::vector<cplx> val(acc.size());
  run = 0.0;
  for (int n = g.n_lo(); n <= g.n_hi(); ++n) {
    run -= g.weight(n) * f_o(1, n);
    val[g.index(n)] = run;
  }
  return GridFunction::dual(g, -total, val, val, acc, acc);
}

double weighted_norm(const GridFunction& f, double p, std::optional<double> alpha, bool half_line) {
  const QGrid& g = f.grid();
  if (std::isinf(p)) {
    double m = 0.0;
    for (int n = g.n_lo(); n <= g.n_hi(); ++n) {
      m = std::max(m, std::abs(f(1, n)));
      if (!half_line) m = std::max(m, std::abs(f(-1, n)));
    }
    return m;
  }
  if (!(p >= 1.0)) throw Error(ErrorCode::invalid_argument, "norm exponent must be >= 1");
  double s = 0.0;
  for (int n = g.n_lo(); n <= g.n_hi(); ++n) {
    double w = g.weight(n);
    if (alpha) w *= std::pow(g.point(n), 2.0 * *alpha + 1.0);
    double v = std::pow(std::abs(f(1, n)), p);
    if (!half_line) v += std::pow(std::abs(f(-1, n)), p);
    s += w * v;
  }
  return std::pow(s, 1.0 / p);
}

}  // namespace qdunkl
