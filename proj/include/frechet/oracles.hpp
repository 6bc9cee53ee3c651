#pragma once

#include "frechet/geometry.hpp"

#include <cstddef>

namespace frechet {

/// Discrete Frechet distance (vertices only), squared.
SquaredDistance discrete_frechet(const Curve& pi, const Curve& sigma);

/// Exact continuous decision: true iff the Frechet distance is at most sqrt(delta2).
bool decide_frechet(const Curve& pi, const Curve& sigma, const SquaredDistance& delta2);

/// Largest curve size accepted by brute_force_exact.
inline constexpr std::size_t kBruteForceLimit = 64;

/// Squared Frechet distance by enumerating every critical value and searching with the
/// exact decision procedure. Throws std::invalid_argument above kBruteForceLimit vertices.
SquaredDistance brute_force_exact(const Curve& pi, const Curve& sigma);

}  // namespace frechet
