#include "qdunkl/qcore.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace qdunkl {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

bool is_nonpositive_integer(double x) { return x <= 0.0 && std::floor(x) == x; }

// Product of (1 - x b^j) for j >= 0 over real x with |x| < 1, as a logarithm.
// Used where the factors are close to 1 and a relative error near eps matters.
double log_pochhammer_inf_small(double x, double base) {
  double acc = 0.0;
  for (double t = x; std::abs(t) > 1e-20; t *= base) acc += std::log1p(-t);
  return acc;
}

}  // namespace

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::invalid_argument: return "invalid-argument";
    case ErrorCode::pole: return "pole-at-nonpositive-integer";
    case ErrorCode::non_convergence: return "non-convergence";
    case ErrorCode::point_off_lattice: return "point-off-lattice";
    case ErrorCode::tail_not_converged: return "tail-not-converged";
    case ErrorCode::window_too_small: return "window-too-small";
    case ErrorCode::not_even: return "not-even";
    case ErrorCode::not_odd: return "not-odd";
    case ErrorCode::not_compact: return "not-compact";
    case ErrorCode::alpha_not_strict: return "alpha-not-strict";
    case ErrorCode::schema: return "schema-violation";
  }
  return "unknown";
}

void SeriesConfig::validate() const {
  if (!(rel_tol > 0.0)) throw Error(ErrorCode::invalid_argument, "rel_tol must be positive");
  if (min_terms < 1 || max_terms < min_terms)
    throw Error(ErrorCode::invalid_argument, "need 1 <= min_terms <= max_terms");
}

QParameter::QParameter(double q, std::optional<int> k) : q_(q), k_(k) {
  if (!(q > 0.0 && q < 1.0)) {
    std::ostringstream os;
    os << "q must lie in (0,1), got " << q;
    throw Error(ErrorCode::invalid_argument, os.str());
  }
  if (k) {
    if (*k < 1) throw Error(ErrorCode::invalid_argument, "admissibility index k must be >= 1");
    double resid = std::pow(q, 2 * *k) + q - 1.0;
    if (std::abs(resid) >= 1e-12) {
      std::ostringstream os;
      os << "q = " << q << " is not admissible for k = " << *k << " (residual " << resid << ")";
      throw Error(ErrorCode::invalid_argument, os.str());
    }
  }
  qq_inf_ = q_pochhammer_inf(q, q).real();
  K_ = std::sqrt(1.0 + q) / (2.0 * q_gamma(0.5, q * q));
}

QParameter admissible_q(int k) {
  if (k < 1) throw Error(ErrorCode::invalid_argument, "k must be >= 1");
  double lo = 0.0, hi = 1.0;
  for (int it = 0; it < 200 && hi - lo > 1e-16; ++it) {
    double mid = 0.5 * (lo + hi);
    if (std::pow(mid, 2 * k) + mid - 1.0 < 0.0) lo = mid; else hi = mid;
  }
  return QParameter(0.5 * (lo + hi), k);
}

cplx q_pochhammer(cplx x, int n, double base) {
  if (n < 0) throw Error(ErrorCode::invalid_argument, "q_pochhammer needs n >= 0");
  cplx r = 1.0, t = x;
  for (int j = 0; j < n; ++j, t *= base) r *= 1.0 - t;
  return r;
}

cplx q_pochhammer(cplx x, int n, const QParameter& qp) { return q_pochhammer(x, n, qp.q()); }

ProductResult q_pochhammer_inf_detailed(cplx x, double base, const SeriesConfig& cfg) {
  cfg.validate();
  ProductResult out{1.0, 0.0, 0};
  cplx t = x;
  // Factors are exactly 1 in double once |t| < eps/2; the omitted tail then
  // contributes at most |t|/(1-base) to the logarithm.
  const double stop = std::min(cfg.rel_tol, kEps) * 0.25 * (1.0 - base);
  while (std::abs(t) >= stop) {
    out.value *= 1.0 - t;
    t *= base;
    if (++out.factors > 100000)
      throw Error(ErrorCode::non_convergence, "infinite product did not converge");
  }
  out.tail = std::abs(t) / (1.0 - base);
  return out;
}

cplx q_pochhammer_inf(cplx x, double base, const SeriesConfig& cfg) {
  return q_pochhammer_inf_detailed(x, base, cfg).value;
}

cplx q_pochhammer_inf(cplx x, const QParameter& qp) { return q_pochhammer_inf(x, qp.q()); }

double q_bracket(double x, double base) { return -std::expm1(x * std::log(base)) / (1.0 - base); }
double q_bracket(double x, const QParameter& qp) { return q_bracket(x, qp.q()); }

double q_factorial(int n, double base) {
  if (n < 0) throw Error(ErrorCode::invalid_argument, "q_factorial needs n >= 0");
  double r = 1.0;
  for (int j = 1; j <= n; ++j) r *= q_bracket(j, base);
  return r;
}
double q_factorial(int n, const QParameter& qp) { return q_factorial(n, qp.q()); }

double q_gamma(double x, double base) {
  if (is_nonpositive_integer(x)) {
    std::ostringstream os;
    os << "Gamma_q has a pole at x = " << x;
    throw Error(ErrorCode::pole, os.str());
  }
  double num = q_pochhammer_inf(base, base).real();
  double den = q_pochhammer_inf(std::pow(base, x), base).real();
  return num / den * std::pow(1.0 - base, 1.0 - x);
}
double q_gamma(double x, const QParameter& qp) { return q_gamma(x, qp.q()); }

SeriesResult bessel_series(double nu, cplx x, const QParameter& qp, const SeriesConfig& cfg,
                           bool minus_one) {
  cfg.validate();
  const double p = qp.q2();
  const cplx y = x / (1.0 + qp.q());
  const cplx y2 = y * y;
  cplx term = 1.0;
  cplx sum = minus_one ? cplx(0.0) : cplx(1.0);
  double biggest = 1.0;
  double prev_abs = 1.0;
  double pn = 1.0;  // p^n
  int n = 0;
  for (;;) {
    ++n;
    pn *= p;
    // t_n / t_{n-1} = -p^n y^2 / ([nu+n]_p [n]_p)
    term *= -pn * y2 / (q_bracket(nu + n, p) * q_bracket(n, p));
    sum += term;
    double a = std::abs(term);
    biggest = std::max(biggest, a);
    if (!std::isfinite(a)) throw Error(ErrorCode::non_convergence, "q-Bessel series overflowed");
    if (a == 0.0 || (n >= cfg.min_terms && a <= cfg.rel_tol * std::abs(sum) * 1e-2 && a < prev_abs)) break;
    if (n >= cfg.max_terms) {
      if (a >= prev_abs) throw Error(ErrorCode::non_convergence, "q-Bessel series terms still growing");
      break;
    }
    prev_abs = a;
  }
  double err = std::abs(term) + 2.0 * kEps * biggest * std::sqrt(double(n));
  return {sum, err, n};
}

namespace {

// (p^m; p)_inf for m = 1..size-1, filled by backward recurrence from a
// directly summed logarithm so every entry carries a relative error ~eps.
std::vector<double> shifted_tails(double p, int size) {
  std::vector<double> P(size + 1, 1.0);
  P[size] = std::exp(log_pochhammer_inf_small(std::pow(p, size), p));
  for (int m = size - 1; m >= 1; --m) P[m] = (1.0 - std::pow(p, m)) * P[m + 1];
  return P;
}

// Hahn-Exton form of j_nu at y = ((1-q)x)^2 = p^L, L < 0:
//   j = (p^{nu+1};p)_inf^{-1} sum_{n >= -L} (-1)^n p^{n(n-1)/2 + (nu+1)n}
//       (p^{n+1+L};p)_inf / (p;p)_n
// Terms with n < -L contain the factor (1 - p^0) and vanish.
double hahn_exton(double nu, int L, double p, const std::vector<double>& P) {
  const int n0 = std::max(0, -L);
  const double lp = std::log(p);
  double sum = 0.0;
  for (int n = n0;; ++n) {
    int m = n + 1 + L;
    if (m >= int(P.size()) - 1 || n + 1 >= int(P.size()) - 1) break;
    double e = 0.5 * n * (n - 1.0) + (nu + 1.0) * n;
    double logmag = e * lp + std::log(P[m]) - std::log(P[1] / P[n + 1]);
    if (logmag < -740.0) break;
    double t = std::exp(logmag);
    sum += (n % 2 == 0) ? t : -t;
    if (n > n0 + 2 && t < 1e-18 * std::abs(sum)) break;
  }
  return sum / std::exp(log_pochhammer_inf_small(std::pow(p, nu + 1.0), p));
}

}  // namespace

double bessel_lattice(double nu, int e, const QParameter& qp) {
  if (!qp.admissible())
    throw Error(ErrorCode::invalid_argument, "lattice evaluation needs an admissible q");
  const int L = 2 * *qp.k() + e;
  if (L >= 0) return bessel_series(nu, std::pow(qp.q(), e), qp).value.real();
  auto P = shifted_tails(qp.q2(), -L + 400);
  return hahn_exton(nu, L, qp.q2(), P);
}

LatticeBessel::LatticeBessel(double nu, const QParameter& qp, int e_lo, int e_hi,
                             const SeriesConfig& cfg)
    : nu_(nu), e_lo_(e_lo), e_hi_(e_hi) {
  if (e_hi < e_lo) throw Error(ErrorCode::invalid_argument, "empty exponent range");
  if (!(nu > -1.0)) throw Error(ErrorCode::invalid_argument, "q-Bessel order must exceed -1");
  const std::size_t n = std::size_t(e_hi - e_lo + 1);
  val_.resize(n);
  vm1_.resize(n);
  err_.resize(n);
  const int kk = qp.admissible() ? *qp.k() : 0;
  std::vector<double> P;
  if (qp.admissible() && 2 * kk + e_lo < 0) P = shifted_tails(qp.q2(), -(2 * kk + e_lo) + 400);
  for (int e = e_lo; e <= e_hi; ++e) {
    std::size_t i = std::size_t(e - e_lo);
    if (qp.admissible() && 2 * kk + e < 0) {
      double v = hahn_exton(nu, 2 * kk + e, qp.q2(), P);
      val_[i] = v;
      vm1_[i] = v - 1.0;
      err_[i] = 4.0 * kEps * std::max(std::abs(v), 1e-300);
    } else {
      SeriesResult r = bessel_series(nu, std::pow(qp.q(), e), qp, cfg, true);
      vm1_[i] = r.value.real();
      val_[i] = 1.0 + vm1_[i];
      err_[i] = r.error;
    }
  }
}

std::size_t LatticeBessel::index(int e) const {
  if (e < e_lo_ || e > e_hi_) {
    std::ostringstream os;
    os << "exponent " << e << " outside kernel table [" << e_lo_ << ", " << e_hi_ << "]";
    throw Error(ErrorCode::invalid_argument, os.str());
  }
  return std::size_t(e - e_lo_);
}

double LatticeBessel::max_error() const {
  double m = 0.0;
  for (double e : err_) m = std::max(m, e);
  return m;
}

void LatticeBessel::require_accuracy(double tol, const char* what) const {
  for (int e = e_lo_; e <= e_hi_; ++e) {
    if (err_[index(e)] > tol) {
      std::ostringstream os;
      os << what << ": kernel j_" << nu_ << " at exponent " << e << " has error estimate "
         << err_[index(e)] << "; use an admissible q or a narrower window";
      throw Error(ErrorCode::non_convergence, os.str());
    }
  }
}

void LatticeTrig::require_accuracy(double tol, const char* what) const {
  c_.require_accuracy(tol, what);
  s_.require_accuracy(tol, what);
}

LatticeTrig::LatticeTrig(const QParameter& qp, int e_lo, int e_hi)
    : q_(qp.q()), c_(-0.5, qp, e_lo, e_hi), s_(0.5, qp, e_lo, e_hi) {}

double LatticeTrig::pow_q(int e) const { return std::pow(q_, e); }

SeriesResult q_trig_detailed(TrigKind kind, cplx z, const QParameter& qp, const SeriesConfig& cfg) {
  cfg.validate();
  const double q = qp.q();
  auto series = [&](bool sine, cplx x) {
    // cos: t_n/t_{n-1} = -q^{2n} x^2 / ([2n]_q [2n-1]_q)
    // sin: t_n/t_{n-1} = -q^{2n} x^2 / ([2n+1]_q [2n]_q), t_0 = x
    cplx term = sine ? x : cplx(1.0);
    cplx sum = term;
    double biggest = std::abs(term), prev = biggest;
    const cplx x2 = x * x;
    int n = 0;
    double q2n = 1.0;
    for (;;) {
      ++n;
      q2n *= q * q;
      double den = sine ? q_bracket(2 * n + 1, q) * q_bracket(2 * n, q)
                        : q_bracket(2 * n, q) * q_bracket(2 * n - 1, q);
      term *= -q2n * x2 / den;
      sum += term;
      double a = std::abs(term);
      if (!std::isfinite(a)) throw Error(ErrorCode::non_convergence, "q-trigonometric series overflowed");
      biggest = std::max(biggest, a);
      if (a == 0.0 || (n >= cfg.min_terms && a < prev && a <= cfg.rel_tol * std::abs(sum) * 1e-2)) break;
      if (n >= cfg.max_terms) {
        if (a >= prev) throw Error(ErrorCode::non_convergence, "q-trigonometric series terms still growing");
        break;
      }
      prev = a;
    }
    return SeriesResult{sum, std::abs(term) + 2.0 * kEps * biggest * std::sqrt(double(n)), n};
  };
  switch (kind) {
    case TrigKind::cos: return series(false, z);
    case TrigKind::sin: return series(true, z);
    case TrigKind::exp: {
      const cplx w = cplx(0.0, -1.0) * z;
      SeriesResult c = series(false, w), s = series(true, w);
      return {c.value + cplx(0.0, 1.0) * s.value, c.error + s.error, c.terms + s.terms};
    }
  }
  throw Error(ErrorCode::invalid_argument, "unknown trigonometric kind");
}

cplx q_trig(TrigKind kind, cplx z, const QParameter& qp, const SeriesConfig& cfg) {
  return q_trig_detailed(kind, z, qp, cfg).value;
}

}  // namespace qdunkl
