#pragma once

#include <optional>

#include "qdunkl/bessel.hpp"

namespace qdunkl {

/// Lambda f = d_q[H f] + [2a+1]_q (f(x) - f(-x)) / (2x) with H f = f_e + q^{2a+1} f_o,
/// on the window trimmed by one exponent at each end.
GridFunction dunkl_operator(const AlphaParam& a, const GridFunction& f);

/// psi_lambda(x) = j_a(lambda x) + i lambda x / [2a+2]_q j_{a+1}(lambda x), centered at 1.
/// Lattice lambda (+-q^l) uses the exact kernel tables; other lambda the power series.
GridFunction dunkl_kernel(const AlphaParam& a, cplx lambda, const QGrid& grid);
/// d_q^order psi_lambda from (C/2) (i lambda)^order int_{-1}^{1} W(t)(1+t) t^order e(i lambda x t; q^2) d_qt
/// for lattice lambda, centered at its limit at 0; order 0 is the kernel itself.
/// At alpha = -1/2 this is (i lambda)^order e(i lambda x; q^2).
GridFunction dunkl_kernel_mehler(const AlphaParam& a, cplx lambda, const QGrid& grid, int order = 0);
/// |d_q^n psi_lambda(x)| <= 4 |lambda|^n / (q;q)_inf; this returns 4/(q;q)_inf.
double dunkl_kernel_bound(const AlphaParam& a);

/// Two routes for the intertwiners: the defining kernel sum on the whole
/// window, or the decomposition into R / tR, which costs one exponent at
/// each end of the window.
enum class Route { direct, decomposed };

/// V f(x) = (C/2) int_{-1}^{1} W(t)(1+t) f(xt) d_qt; decomposed: R f_e + d_q R I_q f_o.
/// Points below the window continue the innermost even value and odd slope.
GridFunction intertwiner_V(const AlphaParam& a, const GridFunction& f, Route route = Route::direct);
/// Direct: exact inverse of the discretized V. Decomposed: R^{-1} f_e + d_q R^{-1} I_q f_o.
GridFunction intertwiner_V_inverse(const AlphaParam& a, const GridFunction& f,
                                   Route route = Route::direct);

/// tV f(t) = M int_{|x| >= q|t|} W(t/x)(1 + t/x) f(x) |x|^{2a} d_qx for compactly
/// supported f; decomposed: tR f_e + d_q tR J_q f_o.
GridFunction transpose_tV(const AlphaParam& a, const GridFunction& f, Route route = Route::direct,
                          const TailPolicy& policy = {});
/// Direct: exact inverse of the discretized tV. Decomposed: (tR)^{-1} f_e + d_q (tR)^{-1} J_q f_o.
GridFunction transpose_tV_inverse(const AlphaParam& a, const GridFunction& f,
                                  Route route = Route::direct, const TailPolicy& policy = {});

enum class Direction { forward, inverse };

/// lambda -> (c/2) int f(x) psi_{-+lambda}(x) |x|^{2a+1} d_qx (forward uses psi_{-lambda}),
/// centered at lambda = 0.
GridFunction dunkl_transform(const AlphaParam& a, const GridFunction& f, Direction direction,
                             std::optional<QGrid> output = std::nullopt, const TailPolicy& policy = {});

}  // namespace qdunkl
