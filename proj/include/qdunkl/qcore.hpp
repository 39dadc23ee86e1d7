#pragma once

#include <complex>
#include <optional>
#include <vector>

#include "qdunkl/error.hpp"

namespace qdunkl {

using cplx = std::complex<double>;

/// Truncation policy for the entire series and infinite products.
struct SeriesConfig {
  double rel_tol = 1e-15;
  int max_terms = 500;
  int min_terms = 8;

  void validate() const;
};

/// A truncated sum together with an estimate of its absolute error.
struct SeriesResult {
  cplx value;
  double error = 0.0;
  int terms = 0;
};

/// The base q in (0,1) with cached constants.
///
/// When k is set the parameter is admissible, q^{2k} + q = 1, so that
/// (1-q) q^n = q^{n+2k} stays on the lattice; kernels are then evaluated
/// at lattice points without cancellation.
class QParameter {
 public:
  explicit QParameter(double q, std::optional<int> k = std::nullopt);

  double q() const { return q_; }
  double q2() const { return q_ * q_; }
  double one_minus_q() const { return 1.0 - q_; }
  double qq_inf() const { return qq_inf_; }
  std::optional<int> k() const { return k_; }
  bool admissible() const { return k_.has_value(); }
  /// Rubin normalization (1+q)^{1/2} / (2 Gamma_{q^2}(1/2)).
  double K() const { return K_; }

 private:
  double q_;
  std::optional<int> k_;
  double qq_inf_;
  double K_;
};

/// Root in (0,1) of q^{2k} + q - 1 by bisection.
QParameter admissible_q(int k);

/// (x; base)_n for finite n >= 0.
cplx q_pochhammer(cplx x, int n, double base);
cplx q_pochhammer(cplx x, int n, const QParameter& qp);

struct ProductResult {
  cplx value;
  double tail = 0.0;  ///< bound on |log| of the omitted factors
  int factors = 0;
};

/// (x; base)_inf, truncated once the omitted tail is below rel_tol.
ProductResult q_pochhammer_inf_detailed(cplx x, double base, const SeriesConfig& cfg = {});
cplx q_pochhammer_inf(cplx x, double base, const SeriesConfig& cfg = {});
cplx q_pochhammer_inf(cplx x, const QParameter& qp);

/// [x]_base = (1 - base^x) / (1 - base).
double q_bracket(double x, double base);
double q_bracket(double x, const QParameter& qp);
/// [n]_base! = (base; base)_n / (1 - base)^n.
double q_factorial(int n, double base);
double q_factorial(int n, const QParameter& qp);

/// Gamma_base(x) = (base;base)_inf / (base^x;base)_inf * (1-base)^{1-x}.
/// Throws ErrorCode::pole at x = 0, -1, -2, ...
double q_gamma(double x, double base);
double q_gamma(double x, const QParameter& qp);

enum class TrigKind { cos, sin, exp };

/// cos(z;q^2), sin(z;q^2), e(z;q^2) by direct summation of their series.
/// The reported error includes the rounding carried by the largest term,
/// which dominates for large real |z| when q is not admissible.
SeriesResult q_trig_detailed(TrigKind kind, cplx z, const QParameter& qp,
                             const SeriesConfig& cfg = {});
cplx q_trig(TrigKind kind, cplx z, const QParameter& qp, const SeriesConfig& cfg = {});

/// Power series of the normalized q-Bessel function
///   j_nu(x;q^2) = sum_n (-1)^n Gamma(nu+1) q^{n(n+1)} / (Gamma(nu+n+1) Gamma(n+1)) (x/(1+q))^{2n}
/// with Gamma = Gamma_{q^2}. With minus_one set the n = 0 term is dropped.
SeriesResult bessel_series(double nu, cplx x, const QParameter& qp,
                           const SeriesConfig& cfg = {}, bool minus_one = false);

/// j_nu(q^e; q^2) for admissible q from the Hahn-Exton symmetric form, in
/// which every term has the sign pattern of a convergent alternating series.
double bessel_lattice(double nu, int e, const QParameter& qp);

/// Table of j_nu(q^e;q^2) and j_nu(q^e;q^2) - 1 over an exponent range.
///
/// Kernel values in every transform depend on x*lambda = +-q^{m+n} only,
/// so one table per order replaces a series evaluation per (x, lambda) pair.
class LatticeBessel {
 public:
  LatticeBessel(double nu, const QParameter& qp, int e_lo, int e_hi,
                const SeriesConfig& cfg = {});

  double nu() const { return nu_; }
  int e_lo() const { return e_lo_; }
  int e_hi() const { return e_hi_; }
  double value(int e) const { return val_[index(e)]; }
  double minus_one(int e) const { return vm1_[index(e)]; }
  double error(int e) const { return err_[index(e)]; }
  double max_error() const;
  /// Throws non_convergence when some entry's error estimate exceeds tol
  /// (series cancellation at large arguments for non-admissible q).
  void require_accuracy(double tol, const char* what) const;

 private:
  std::size_t index(int e) const;

  double nu_;
  int e_lo_, e_hi_;
  std::vector<double> val_, vm1_, err_;
};

/// q-cosine, q-sine and q-exponential at lattice points s*q^e.
class LatticeTrig {
 public:
  LatticeTrig(const QParameter& qp, int e_lo, int e_hi);

  double cos(int e) const { return c_.value(e); }
  double cos_m1(int e) const { return c_.minus_one(e); }
  double sin(int s, int e) const { return s * pow_q(e) * s_.value(e); }
  /// e(i s q^e; q^2) = cos + i sin.
  cplx exp_i(int s, int e) const { return {cos(e), sin(s, e)}; }
  cplx exp_i_m1(int s, int e) const { return {cos_m1(e), sin(s, e)}; }
  void require_accuracy(double tol, const char* what) const;

 private:
  double pow_q(int e) const;

  double q_;
  LatticeBessel c_, s_;
};

}  // namespace qdunkl
