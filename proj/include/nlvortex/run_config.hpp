#pragma once

#include <string>
#include <vector>

#include "nlvortex/biphoton.hpp"
#include "nlvortex/optics.hpp"

namespace nlv {

// Experiment configuration.  Internal physics is dimensionless; every
// physical quantity (mm, um, nm) is bridged through the reference waist.
struct RunConfig {
    // [pump]
    PumpMode pump_mode = PumpMode::Hg10;
    double pump_width = 1.4142135623730951;
    // [phasematch]
    double phasematch_width = 1.4142135623730951;
    // [grid]
    std::size_t grid_samples = 128;
    double grid_half_span = 6.0;
    // [optics] (mm / um)
    double f1_mm = 100.0;
    double f2_mm = 150.0;
    double f3_mm = 50.0;
    double f4_mm = 250.0;
    double slit_width_um = 100.0;
    double slit_separation_um = 200.0;
    // [detectors]
    std::vector<double> detector1_positions_mm = {-0.1, 0.1};
    double aperture_rho_um = 0.0;
    double aperture_q_um = 0.0;
    // [units]
    double reference_waist_mm = 0.25;
    double wavelength_nm = 884.0;
    // [fringes]
    std::size_t fringe_screen_samples = 512;
    double fringe_scan_periods = 3.0;
    // [noise]
    std::uint64_t noise_events = 0;
    std::uint64_t noise_seed = 0;
    bool noise_seed_set = false;
    // [output]
    std::string output_dir = "out";
    bool write_pgm = false;

    void validate() const;

    BiphotonState state() const;

    // ---- unit bridge ----
    double k_per_mm() const { return kTwoPi / (wavelength_nm * 1e-6); }
    // dimensionless Fourier-stage scale for a lens of focal length f (mm)
    double fourier_scale(double f_mm) const {
        return f_mm / (k_per_mm() * reference_waist_mm * reference_waist_mm);
    }
    // photon-1 imaging magnification (confocal f2-f3 pair, inverted)
    double imaging_magnification() const { return f3_mm / f2_mm; }
    double mm_to_dimensionless(double mm) const { return mm / reference_waist_mm; }

    SlitGeometry slit_geometry_dimensionless() const;
    OpticalChannel photon1_channel() const;
    OpticalChannel photon2_fringe_channel() const;

    // canonical key=value rendering (also the hash input)
    std::string canonical_text() const;
    std::string config_hash() const;

    void apply_override(const std::string& dotted_key, const std::string& value);
};

RunConfig parse_config_file(const std::string& path);
RunConfig parse_config_text(const std::string& text, const std::string& origin = "<text>");

}  // namespace nlv
