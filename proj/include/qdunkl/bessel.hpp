#pragma once

#include <cmath>
#include <optional>
#include <vector>

#include "qdunkl/fourier.hpp"
#include "qdunkl/lattice.hpp"

namespace qdunkl {

/// Dunkl index alpha >= -1/2 with its normalizing constants.
class AlphaParam {
 public:
  AlphaParam(double alpha, const QParameter& qp);

  double alpha() const { return alpha_; }
  const QParameter& qp() const { return qp_; }
  /// alpha > -1/2: the Mehler weight and the transmutation operators exist.
  bool strict() const { return strict_; }

  /// c = (1+q)^{-alpha} / Gamma_{q^2}(alpha+1).
  double c() const { return c_; }
  /// C = (1+q) Gamma_{q^2}(alpha+1) / (Gamma_{q^2}(1/2) Gamma_{q^2}(alpha+1/2)); strict only.
  double C() const;
  /// M = (1+q)^{1/2-alpha} / (2 Gamma_{q^2}(alpha+1/2)); strict only.
  double M() const;
  /// [2 alpha + 1]_q and [2 alpha + 2]_q.
  double bracket1() const { return q_bracket(2.0 * alpha_ + 1.0, qp_); }
  double bracket2() const { return q_bracket(2.0 * alpha_ + 2.0, qp_); }
  /// q^{2 alpha + 1}.
  double q_weight() const { return std::pow(qp_.q(), 2.0 * alpha_ + 1.0); }

  void require_strict(const char* what) const;

 private:
  double alpha_;
  QParameter qp_;
  bool strict_;
  double c_, C_ = 0.0, M_ = 0.0;
};

/// W(q^n) = (q^{2n+2}; q^2)_inf / (q^{2n+2 alpha+1}; q^2)_inf for n in [0, n_max];
/// zero for n < 0 (|t| > 1).
class MehlerWeight {
 public:
  MehlerWeight(const AlphaParam& a, int n_max);

  int n_max() const { return int(val_.size()) - 1; }
  double value(int n) const;
  /// W - 1, accurate where W is close to 1.
  double minus_one(int n) const;

 private:
  std::vector<double> val_, vm1_;
};

/// omega_j, j in [0, n), with sum_{i<=j} omega_{j-i} W(q^i) = delta_{j0}: the
/// inverse of the Toeplitz kernel W(q^j), in closed form by the q-binomial theorem.
std::vector<double> mehler_inverse_kernel(const AlphaParam& a, int n);

/// Normalized q-Bessel function j_alpha(x; q^2) by its power series.
SeriesResult j_alpha(const AlphaParam& a, cplx x, const SeriesConfig& cfg = {});
/// The same function through Jackson's third q-Bessel function,
/// 1phi1(0; q^{2 alpha+2}; q^2, q^2 ((1-q)x)^2), as an independent check.
SeriesResult j_alpha_third_jackson(const AlphaParam& a, cplx x, const SeriesConfig& cfg = {});

/// Uniform bound |j_alpha| <= 2/(q;q)_inf on the lattice.
double j_alpha_bound(const AlphaParam& a);
/// Decay bound at |x| = q^e: P * (1 if |x| <= 1/(1-q), else q^{(log((1-q)|x|)/log q)^2}),
/// P = (-q^2;q^2)_inf (-q^{2a+1};q^2)_inf / (q^{2a+1};q^2)_inf (infinite at alpha = -1/2).
double j_alpha_decay_bound(const AlphaParam& a, int e);

/// x -> j_alpha(s q^l x) on the grid, centered at 1.
GridFunction bessel_samples(const AlphaParam& a, int lambda_exp, const QGrid& grid);

/// Delta f = |x|^{-(2a+1)} d_q[|x|^{2a+1} d_q f] for even f; two exponents
/// trimmed at each end.
GridFunction bessel_operator(const AlphaParam& a, const GridFunction& f);

/// lambda -> c int_0^inf f(x) j_alpha(lambda x) x^{2a+1} d_qx from the positive
/// branch of f; the output is even and centered at lambda = 0. Self-inverse.
GridFunction bessel_transform(const AlphaParam& a, const GridFunction& f,
                              std::optional<QGrid> output = std::nullopt,
                              const TailPolicy& policy = {});

/// R f(x) = (C/2) int_{-1}^{1} W(t) f(xt) d_qt for even f. Points below the
/// window take the innermost value.
GridFunction riemann_liouville(const AlphaParam& a, const GridFunction& f);

/// tR f(t) = 2M int_{q|t|}^inf W(t/x) f(x) x^{2a} d_qx for even compactly
/// supported f; centered at its limit at 0.
GridFunction weyl_transpose(const AlphaParam& a, const GridFunction& f,
                            const TailPolicy& policy = {});

enum class InverseMethod {
  /// Exact inverse of the discretized operator by triangular substitution.
  lattice,
  /// Through the transforms: R^{-1} f = c int F(f)(l) cos(l .) l^{2a+1} d_ql
  /// and tR^{-1} = F o (Rubin transform).
  spectral,
};

GridFunction riemann_liouville_inverse(const AlphaParam& a, const GridFunction& f,
                                       InverseMethod method = InverseMethod::lattice,
                                       const TailPolicy& policy = {});
GridFunction weyl_transpose_inverse(const AlphaParam& a, const GridFunction& f,
                                    InverseMethod method = InverseMethod::lattice,
                                    const TailPolicy& policy = {});

/// Throws not_even when f deviates from an even function beyond rounding.
void require_even(const GridFunction& f, const char* what);

}  // namespace qdunkl
