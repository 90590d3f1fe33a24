#pragma once

#include "nlvortex/grid.hpp"

namespace nlv {

// Unitary continuous Fourier transform, kernel exp(-i q x)/sqrt(2 pi).
// Under this convention the width-1 Hermite-Gaussians at the waist are
// eigenfunctions with eigenvalue (-i)^n.

inline constexpr double kDefaultEdgeDecayTol = 1e-8;

// FFT-accelerated transform of a 1D field onto the conjugate axis, with the
// grid-offset phase corrections that make the discrete sum converge to the
// continuous transform.  Throws PhysicsError when the field has not decayed
// below edge_tol * max|f| at either boundary sample (aliasing risk).
FieldGrid fourier_transform_1d(const FieldGrid& field, double edge_tol = kDefaultEdgeDecayTol);

// Transform of a 2D field along one axis (every line), conjugating that axis.
// Edge decay is checked against the global maximum.
FieldGrid fourier_transform_axis(const FieldGrid& field, std::size_t axis,
                                 double edge_tol = kDefaultEdgeDecayTol);

// Direct quadrature of the transform integral at arbitrary target samples.
// O(N*M); independent of the FFT code path.
FieldGrid fourier_transform_to(const FieldGrid& field, const Axis& target,
                               double edge_tol = kDefaultEdgeDecayTol);

}  // namespace nlv
