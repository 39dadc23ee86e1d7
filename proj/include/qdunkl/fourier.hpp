#pragma once

#include <optional>

#include "qdunkl/lattice.hpp"

namespace qdunkl {

/// Kernel tables whose error estimate exceeds this are rejected.
inline constexpr double kKernelTolerance = 1e-10;

/// Rubin's transform lambda -> K int f(t) e(-i lambda t; q^2) d_qt on the
/// output grid (the input grid by default). The result is centered at its
/// value for lambda = 0. Applying it twice and reflecting recovers f.
GridFunction rubin_transform(const GridFunction& f, std::optional<QGrid> output = std::nullopt,
                             const TailPolicy& policy = {});

}  // namespace qdunkl
