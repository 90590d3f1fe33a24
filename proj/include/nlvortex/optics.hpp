#pragma once

#include <optional>
#include <variant>
#include <vector>

#include "nlvortex/biphoton.hpp"
#include "nlvortex/fringe_fit.hpp"
#include "nlvortex/grid.hpp"

namespace nlv {

// Single-photon channel stages, each acting on that photon's own transverse
// coordinate.  Everything is dimensionless; the CLI layer converts focal
// lengths and millimetres through the reference waist.

// Lens Fourier transform: output coordinate x' = scale * q where q is the
// conjugate of the input axis.  scale = f * lambda / (2 pi w_ref^2) in
// physical terms; scale = 1 leaves the axis in conjugate (wavevector) units.
struct FourierStage {
    double scale = 1.0;
};

struct ImagingStage {
    double magnification = 1.0;
    bool invert = false;
};

// Amplitude transmission exp(-x^2 / 2 width^2).
struct GaussianMask {
    double width = 1.0;
};

// Two identical slits centred at +-center_separation/2.
struct SlitGeometry {
    double slit_width = 0.0;
    double center_separation = 0.0;

    void validate() const;
};

using MaskSpec = std::variant<GaussianMask, SlitGeometry>;

struct MaskStage {
    MaskSpec mask;
};

using ChannelStage = std::variant<FourierStage, ImagingStage, MaskStage>;

struct OpticalChannel {
    std::vector<ChannelStage> stages;

    void validate() const;  // positive parameters, at most one slit mask
    bool imaging_only() const;
    // Net coordinate factor of an imaging-only channel (signed by inversions).
    double net_magnification() const;
};

FieldGrid apply_fourier_stage(const FieldGrid& field, const FourierStage& stage,
                              double edge_tol = 1e-8);
// Same transform evaluated by direct quadrature on a chosen output axis
// (already in output-plane units, i.e. q * scale).
FieldGrid apply_fourier_stage_to(const FieldGrid& field, const FourierStage& stage,
                                 const Axis& out_axis, double edge_tol = 1e-8);
FieldGrid apply_imaging_stage(const FieldGrid& field, const ImagingStage& stage);
// Pointwise multiplication by the transmission function.  Not renormalized;
// the surviving norm fraction lands in meta["surviving_norm"], with
// meta["mask_warning"] set when it drops below 1e-4.  Slit edges that fall
// inside a cell are weighted by their overlap fraction.
FieldGrid apply_mask(const FieldGrid& field, const MaskSpec& mask);

FieldGrid apply_channel(const FieldGrid& field, const OpticalChannel& channel);

// 1D intensity scan with the metadata needed for fitting and comparison.
struct FringeScan {
    std::vector<double> positions;
    std::vector<double> intensities;
    double detector1_position = 0.0;
    std::optional<FringeFit> fit;
    std::map<std::string, std::string> meta;
};

// Closed-form Fraunhofer two-slit pattern for given complex field values at
// the two slit centres (e_pos at +d/2, e_neg at -d/2):
//   I(s) = (a^2/2pi) sinc^2(a s / 2) [|E1|^2 + |E2|^2
//                                     + 2 |E1||E2| cos(d s - dphi)],
// dphi = arg E1 - arg E2.  The screen coordinate s is conjugate to the slit
// coordinate.
FringeScan fraunhofer_double_slit(cplx e_pos, cplx e_neg, const SlitGeometry& slits,
                                  const Axis& screen);

// Brute-force counterpart: mask the sampled input field with the slits and
// Fourier transform onto the screen axis.
FringeScan diffract_through_slits(const FieldGrid& input, const SlitGeometry& slits,
                                  const Axis& screen);

struct MapMeasurement {
    Axis axis1, axis2;  // input-plane axes for the two photons
};

struct FringeMeasurement {
    std::vector<double> detector1_positions;  // in photon-1 output-plane coordinates
    Axis screen;                              // photon-2 detection axis
    std::size_t quadrature_samples = 1024;    // internal photon-2 input grid
    std::size_t slit_plane_samples = 4096;    // resolution across the slits
};

// Propagate the joint amplitude through per-photon channels and produce the
// coincidence map at the output planes.
CoincidenceMap run_channel_pair_map(const BiphotonState& state, const OpticalChannel& ch1,
                                    const OpticalChannel& ch2, const MapMeasurement& m);

// Conditional fringe scans: photon 1 is detected at fixed positions behind an
// imaging-only channel, photon 2 goes through ch2 (e.g. Fourier + slits +
// Fourier) and is scanned across the screen axis.
std::vector<FringeScan> run_channel_pair_fringes(const BiphotonState& state,
                                                 const OpticalChannel& ch1,
                                                 const OpticalChannel& ch2,
                                                 const FringeMeasurement& m);

}  // namespace nlv
