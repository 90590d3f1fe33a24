#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "nlvortex/grid.hpp"

namespace nlv {

// Two-photon wavefunction produced by down-conversion with a structured pump:
//   psi(rho1, rho2) = E(rho1 + rho2) * Gamma(rho1 - rho2),
// E the pump mode of width sigma, Gamma a Gaussian of width delta.
// All coordinates are dimensionless.

enum class PumpMode { Hg10, Gauss };

struct PumpSpec {
    PumpMode mode = PumpMode::Hg10;
    double width = 1.4142135623730951;  // sigma; sqrt(2) makes the mixed plane isotropic
};

struct PhaseMatchSpec {
    double width = 1.4142135623730951;  // delta
};

struct BiphotonState {
    PumpSpec pump;
    PhaseMatchSpec pm;

    double sigma() const { return pump.width; }
    double delta() const { return pm.width; }

    // The closed-form mixed representation exists only for sigma = delta.
    bool analytic_mixed_available() const {
        return std::abs(sigma() - delta()) <= 1e-9 * sigma();
    }

    void validate() const;
};

struct Point2 {
    double x = 0.0;
    double y = 0.0;
};

// Full 2D-transverse wavefunction in the position representation,
// normalized so that the 4D integral of |psi|^2 is 1.
cplx psi_position(const BiphotonState& state, Point2 rho1, Point2 rho2);

// Mixed position-momentum representation psi(rho1, q2), the partial Fourier
// transform of psi over rho2 (kernel exp(-i q x)/sqrt(2 pi)).  Requires
// sigma = delta; otherwise throws PhysicsError (use partial_fourier_numeric).
cplx psi_mixed(const BiphotonState& state, Point2 rho1, Point2 q2);

// x-sector (one transverse dimension per photon), unit-normalized on its own.
double psi_position_x(const BiphotonState& state, double x1, double x2);
cplx psi_mixed_x(const BiphotonState& state, double x1, double q2);

// Sampled x-sector position amplitude over (x1, x2).
FieldGrid position_amplitude_x(const BiphotonState& state, const Axis& x1_axis,
                               const Axis& x2_axis);

// Numeric mixed representation: discretize the x-sector position amplitude
// and Fourier-transform along x2.  The output q axis is the conjugate of
// x2_axis.  Works for any sigma, delta; serves as the independent check of
// psi_mixed.  Preconditions: x2 spacing <= min(sigma,delta)/8 and
// half-span >= 6*max(sigma,delta).
FieldGrid partial_fourier_numeric(const BiphotonState& state, const Axis& x1_axis,
                                  const Axis& x2_axis);

// As above but evaluated by direct quadrature on a requested q axis.
FieldGrid partial_fourier_numeric_at(const BiphotonState& state, const Axis& x1_axis,
                                     const Axis& q2_axis);

enum class Representation { Position, Wavevector };

struct MapAxisInfo {
    int photon = 1;  // 1 or 2
    Representation rep = Representation::Position;
    Axis axis;
};

// Joint detection probability over a non-local 2D plane, y integrated out.
struct CoincidenceMap {
    MapAxisInfo axis1, axis2;
    std::vector<double> values;  // row-major, axis1 major
    std::map<std::string, std::string> meta;

    double& at(std::size_t i, std::size_t j) { return values[i * axis2.axis.count + j]; }
    double at(std::size_t i, std::size_t j) const { return values[i * axis2.axis.count + j]; }
    double cell_area() const { return axis1.axis.spacing() * axis2.axis.spacing(); }
    double integral() const;
    double max_value() const;
};

enum class MapPlane { PositionPosition, PositionWavevector };

// Optional top-hat detector-aperture smoothing, full widths in axis units.
struct ApertureSpec {
    double width_axis1 = 0.0;
    double width_axis2 = 0.0;
};

CoincidenceMap prob_map(const BiphotonState& state, MapPlane plane, const Axis& axis1,
                        const Axis& axis2, const ApertureSpec* aperture = nullptr);

struct SchmidtTerm {
    double coefficient = 0.0;
    int mode1 = 0;  // HG order of the photon-1 mode (node count for numeric modes)
    int mode2 = 0;
};

struct SchmidtResult {
    std::vector<SchmidtTerm> terms;  // descending coefficients
    double entropy_bits = 0.0;
    double truncated_weight = 0.0;
    bool cutoff_too_small = false;  // truncated weight > 1e-6
    bool analytic = false;
};

// Schmidt decomposition of the x-sector amplitude.  Analytic two-term (or
// one-term) form when sigma = delta; otherwise SVD of the discretized
// amplitude matrix.
SchmidtResult schmidt_decompose(const BiphotonState& state, unsigned cutoff);

// Integer coincidence counts with independent per-cell Poisson statistics.
struct CountMap {
    MapAxisInfo axis1, axis2;
    std::vector<std::uint64_t> counts;
    std::map<std::string, std::string> meta;
};

CountMap sample_counts(const CoincidenceMap& map, std::uint64_t total_events,
                       std::uint64_t seed);

}  // namespace nlv
