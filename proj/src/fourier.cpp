#include "qdunkl/fourier.hpp"

namespace qdunkl {

GridFunction rubin_transform(const GridFunction& f, std::optional<QGrid> output,
                             const TailPolicy& policy) {
  const QGrid& in = f.grid();
  const QGrid out = output.value_or(in);
  if (!out.same_lattice(in))
    throw Error(ErrorCode::invalid_argument, "output grid uses a different q");
  require_tail(f, 0.0, policy, "Rubin transform");
  const auto supp = support(f);
  if (!supp) return GridFunction(out);
  const auto [b_lo, b_hi] = *supp;

  // Only the kernel values at exponent sums a + b matter.
  LatticeTrig trig(in.qp(), out.n_lo() + b_lo, out.n_hi() + b_hi);
  trig.require_accuracy(kKernelTolerance, "Rubin transform");

  const std::size_t nb = std::size_t(b_hi - b_lo + 1);
  std::vector<cplx> even(nb), odd(nb);
  cplx total = 0.0;
  for (int b = b_lo; b <= b_hi; ++b) {
    const cplx p = f(1, b), m = f(-1, b);
    const double w = in.weight(b);
    even[std::size_t(b - b_lo)] = w * (p + m);
    odd[std::size_t(b - b_lo)] = w * (p - m);
    total += w * (p + m);
  }
  const double K = in.qp().K();
  std::vector<cplx> pos(std::size_t(out.size())), neg(pos.size()), vpos(pos.size()), vneg(pos.size());
  const cplx I(0.0, 1.0);
  for (int a = out.n_lo(); a <= out.n_hi(); ++a) {
    // e(-i lambda x) - 1 = cos_m1(lambda x) - i sin(lambda x); the sine is odd
    // in the sign of lambda.
    cplx c = 0.0, cm1 = 0.0, s = 0.0;
    for (int b = b_lo; b <= b_hi; ++b) {
      const cplx e = even[std::size_t(b - b_lo)];
      c += trig.cos(a + b) * e;
      cm1 += trig.cos_m1(a + b) * e;
      s += trig.sin(1, a + b) * odd[std::size_t(b - b_lo)];
    }
    const std::size_t i = out.index(a);
    pos[i] = K * (cm1 - I * s);
    neg[i] = K * (cm1 + I * s);
    vpos[i] = K * (c - I * s);
    vneg[i] = K * (c + I * s);
  }
  return GridFunction::dual(out, K * total, std::move(vpos), std::move(vneg), std::move(pos), std::move(neg));
}

}  // namespace qdunkl
