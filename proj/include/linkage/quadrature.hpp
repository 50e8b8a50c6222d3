#pragma once

#include <cstdint>

#include <Eigen/Core>

namespace linkage {

struct GaussLegendre {
  Eigen::VectorXd nodes;    // on (-1, 1)
  Eigen::VectorXd weights;  // summing to 2
};

/// Gauss-Legendre rule of order n, computed by Newton iteration on the
/// Legendre recurrence and cached. Thread-safe.
const GaussLegendre& gauss_legendre(int n);

/// Radical-inverse Halton point, bases indexed by dimension (dim 0 -> base 2).
/// Supports up to 16 dimensions.
double halton(std::uint64_t index, int dim);

}  // namespace linkage
