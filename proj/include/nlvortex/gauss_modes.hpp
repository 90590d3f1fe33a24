#pragma once

#include <vector>

#include "nlvortex/beam.hpp"
#include "nlvortex/grid.hpp"

namespace nlv {

// Physicists' Hermite polynomial H_n(x) by the three-term recurrence.
double hermite_poly(unsigned n, double x);

// Normalization coefficient [w sqrt(pi) 2^n n!]^{-1/2} for the
// exp(-x^2/2w^2) envelope.
double hg_norm_coeff(unsigned n, double w);

// 1D Hermite-Gaussian field amplitude
//   u_n(x) = C_n H_n(x/w) exp(-x^2/2w^2) exp(-i [k x^2/(2R) - (n + 1/2) gouy]),
// unit L2 norm at every z.
cplx hg_1d(unsigned n, double x, const BeamGeometry& geom);

// Separable 2D mode u_k(x) u_l(y).
cplx hg_2d(unsigned k, unsigned l, double x, double y, const BeamGeometry& geom);

// First-order LG mode [u_1(x) u_0(y) + sign * i u_0(x) u_1(y)] / sqrt(2).
// At the waist this is proportional to (x + sign * i y) * gaussian, so the
// phase winds by sign * 2*pi around the axis.
cplx lg_first_order(int sign, double x, double y, const BeamGeometry& geom);

// Sample a mode on the given axes (1 axis for Hg1dMode, 2 otherwise).
FieldGrid sample_mode(const ModeSpec& mode, const std::vector<Axis>& axes,
                      const BeamGeometry& geom);

}  // namespace nlv
