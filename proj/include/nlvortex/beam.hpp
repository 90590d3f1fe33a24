#pragma once

#include <variant>

#include "nlvortex/common.hpp"

namespace nlv {

// Paraxial beam parameters in dimensionless internal units.  The envelope
// convention is exp(-x^2 / 2 w^2) with Hermite argument x/w, so the
// consistent Rayleigh range is z_R = k w0^2.  The default wavelength 2*pi
// gives k = 1 and z_R = w0^2.
struct BeamGeometry {
    double waist_w0 = 1.0;
    double wavelength = kTwoPi;
    double z = 0.0;

    BeamGeometry() = default;
    BeamGeometry(double w0, double lambda, double z_pos);

    double wavenumber() const { return kTwoPi / wavelength; }
    double rayleigh_range() const { return wavenumber() * waist_w0 * waist_w0; }

    double width() const;        // w(z) = w0 sqrt(1 + (z/z_R)^2)
    double inv_curvature() const;  // 1/R(z) = z / (z^2 + z_R^2), zero at z = 0
    double gouy_phase() const;   // atan(z / z_R)

    // Waist-only geometry at the beam focus.
    static BeamGeometry at_waist(double w0) { return BeamGeometry(w0, kTwoPi, 0.0); }
};

struct Hg1dMode {
    unsigned n = 0;
};

struct Hg2dMode {
    unsigned k = 0;
    unsigned l = 0;
};

// First-order Laguerre-Gaussian, p = 0, m = sign.
struct LgMode {
    int sign = +1;
};

using ModeSpec = std::variant<Hg1dMode, Hg2dMode, LgMode>;

}  // namespace nlv
