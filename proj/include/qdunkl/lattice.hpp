#pragma once

#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qdunkl/qcore.hpp"

namespace qdunkl {

/// Exponent window [n_lo, n_hi] of the truncated lattice {+-q^n}.
/// n_lo carries the largest magnitudes, n_hi the smallest.
class QGrid {
 public:
  QGrid(QParameter qp, int n_lo, int n_hi);

  /// Window whose outer points reach ~7e5 and whose inner points fall below
  /// 2e-17; for q = admissible_q(1) this is [-28, 80].
  static QGrid standard(const QParameter& qp);

  const QParameter& qp() const { return qp_; }
  double q() const { return qp_.q(); }
  int n_lo() const { return n_lo_; }
  int n_hi() const { return n_hi_; }
  int size() const { return n_hi_ - n_lo_ + 1; }
  bool contains(int n) const { return n >= n_lo_ && n <= n_hi_; }
  std::size_t index(int n) const;

  /// q^n.
  double point(int n) const;
  /// Jackson weight (1-q) q^n.
  double weight(int n) const { return qp_.one_minus_q() * point(n); }
  /// Exponent n with |x| = q^n; throws point_off_lattice otherwise.
  int exponent_of(double x) const;

  QGrid with_window(int n_lo, int n_hi) const { return QGrid(qp_, n_lo, n_hi); }
  bool same_lattice(const QGrid& other) const;

 private:
  QParameter qp_;
  int n_lo_, n_hi_;
};

bool operator==(const QGrid& a, const QGrid& b);

/// Complex samples on both branches of a QGrid.
///
/// Each point holds its value and its deviation from a baseline, the limit at
/// the origin when known (set by samplers and transforms that can compute it).
/// Difference operators act on deviations, so functions tending to a nonzero
/// constant keep relative accuracy near 0; values stay accurate where they are
/// small compared with the baseline, far from the origin. Producers that
/// compute only one of the two derive the other.
class GridFunction {
 public:
  explicit GridFunction(QGrid grid);
  GridFunction(QGrid grid, std::vector<cplx> pos, std::vector<cplx> neg);
  static GridFunction centered(QGrid grid, cplx baseline, std::vector<cplx> pos_dev,
                               std::vector<cplx> neg_dev);
  /// Values and deviations computed independently.
  static GridFunction dual(QGrid grid, cplx baseline, std::vector<cplx> pos, std::vector<cplx> neg,
                           std::vector<cplx> pos_dev, std::vector<cplx> neg_dev);

  const QGrid& grid() const { return grid_; }
  cplx baseline() const { return base_; }

  /// Value at s*q^n, s = +1 or -1.
  cplx operator()(int s, int n) const { return (s > 0 ? vpos_ : vneg_)[grid_.index(n)]; }
  cplx dev(int s, int n) const { return branch(s)[grid_.index(n)]; }
  void set(int s, int n, cplx value);
  void set_dev(int s, int n, cplx d);

  const std::vector<cplx>& pos() const { return vpos_; }
  const std::vector<cplx>& neg() const { return vneg_; }
  const std::vector<cplx>& pos_dev() const { return pos_; }
  const std::vector<cplx>& neg_dev() const { return neg_; }

  /// x -> f(-x).
  GridFunction reflected() const;
  /// Same values on a sub-window.
  GridFunction restricted(int n_lo, int n_hi) const;
  /// Plain samples (baseline folded into the values).
  GridFunction flattened() const;

  double sup_norm() const;
  /// max |f(x) - f(-x)| and max |f(x) + f(-x)| over the grid.
  double odd_defect() const;
  double even_defect() const;

  GridFunction& operator+=(const GridFunction& o);
  GridFunction& operator-=(const GridFunction& o);
  GridFunction& operator*=(cplx c);

 private:
  std::vector<cplx>& branch(int s) { return s > 0 ? pos_ : neg_; }
  const std::vector<cplx>& branch(int s) const { return s > 0 ? pos_ : neg_; }

  QGrid grid_;
  cplx base_ = 0.0;
  std::vector<cplx> pos_, neg_;
  std::vector<cplx> vpos_, vneg_;
};

GridFunction operator+(GridFunction a, const GridFunction& b);
GridFunction operator-(GridFunction a, const GridFunction& b);
GridFunction operator*(cplx c, GridFunction a);
/// Pointwise product; the baseline of the result is the product of baselines.
GridFunction pointwise(const GridFunction& a, const GridFunction& b);
/// Pointwise product with m(s, n), a multiplier vanishing at the origin
/// (such as x or |x|^{2a+1}); the result has zero baseline.
GridFunction multiply_by(const GridFunction& f, const std::function<cplx(int s, int n)>& m);
/// max |a - b| over the common window of the two grids, taking each point's
/// difference from the deviations near the origin and from the values elsewhere.
double sup_distance(const GridFunction& a, const GridFunction& b);

/// Smallest exponent range holding every nonzero value (the whole window when
/// the baseline is nonzero); nullopt for the zero function.
std::optional<std::pair<int, int>> support(const GridFunction& f);

/// f evaluated at every grid point; failures are rethrown with the point.
GridFunction sample(const std::function<cplx(double)>& f, const QGrid& grid);
/// Centered samples: f = baseline + dev(x).
GridFunction sample_centered(cplx baseline, const std::function<cplx(double)>& dev,
                             const QGrid& grid);

struct FunctionClass {
  enum Tag { compact_support, rapid_decay, generic };
  Tag tag;
  /// Largest |f| over the two outermost exponents, relative to sup |f|.
  double decay_evidence;
};
FunctionClass classify(const GridFunction& f);
const char* to_string(FunctionClass::Tag tag);

/// Integration domains; a and b are lattice points q^{a_exp}, q^{b_exp}.
struct JacksonDomain {
  enum Kind { zero_to, segment, zero_to_inf, real_line, a_to_inf, symmetric };
  Kind kind;
  int a_exp = 0;
  int b_exp = 0;

  static JacksonDomain ZeroTo(const QGrid& g, double a);
  static JacksonDomain Segment(const QGrid& g, double a, double b);
  static JacksonDomain ZeroToInf() { return {zero_to_inf}; }
  static JacksonDomain RealLine() { return {real_line}; }
  static JacksonDomain AToInf(const QGrid& g, double a);
  /// [-a, a].
  static JacksonDomain Symmetric(const QGrid& g, double a);
};

struct JacksonResult {
  cplx value;
  /// Magnitude of the last included term at each open end.
  double truncation_error = 0.0;
};

struct TailPolicy {
  /// Allowed extrapolated tail relative to the sum of |terms|.
  double rel_tol = 1e-6;
  bool force = false;
};

/// Jackson integral truncated to the window. Domains reaching infinity throw
/// tail_not_converged when the extrapolated tail exceeds the policy.
JacksonResult jackson_integral(const GridFunction& f, const JacksonDomain& domain,
                               const TailPolicy& policy = {});

/// Estimate of the part of sum (1-q)|x|^{1+power}|f(x)| lying beyond the
/// large-|x| edge, extrapolating the ratio of the two outermost terms.
struct TailReport {
  double estimate;
  double scale;
  bool converged(double rel_tol) const { return estimate <= rel_tol * scale; }
};
TailReport weighted_tail(const GridFunction& f, double power);
void require_tail(const GridFunction& f, double power, const TailPolicy& policy, const char* what);

/// Rubin's five-point operator on the window trimmed by one exponent at each end.
GridFunction dq_derivative(const GridFunction& f);
/// Derivative values at +q^{n_hi} and -q^{n_hi} of the trimmed window,
/// the reported stand-in for the limit at 0.
std::pair<cplx, cplx> dq_at_zero(const GridFunction& f);

/// (f_e, f_o); the baseline goes with the even part.
std::pair<GridFunction, GridFunction> parity_split(const GridFunction& f);

enum class Antiderivative { I_q, J_q };
/// I_q f_o(x) = int_0^{q|x|} f_o and J_q f_o(x) = int_{-inf}^{qx} f_o, both even.
/// J_q = I_q - int_0^inf f_o is held with that constant as its baseline.
GridFunction antiderivative(const GridFunction& f_o, Antiderivative kind,
                            const TailPolicy& policy = {});

/// (int |f|^p |x|^{2 alpha + 1} d_qx)^{1/p} over the real line (or over x > 0
/// with half_line), unweighted without alpha; p = infinity gives the sup over
/// grid points.
double weighted_norm(const GridFunction& f, double p, std::optional<double> alpha = std::nullopt,
                     bool half_line = false);

/// Lattice-function files: {"q", "k"?, "n_lo", "n_hi", "pos": [[re,im],...], "neg": [...]}.
void write_grid_function(std::ostream& os, const GridFunction& f);
GridFunction read_grid_function(std::istream& is);
void save_grid_function(const std::string& path, const GridFunction& f);
GridFunction load_grid_function(const std::string& path);
/// Columns n, x, re, im, branch.
void write_csv(std::ostream& os, const GridFunction& f);

}  // namespace qdunkl
