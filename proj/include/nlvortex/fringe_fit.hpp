#pragma once

#include <vector>

#include "nlvortex/common.hpp"

namespace nlv {

// Fit of intensity data to a Gaussian envelope times a raised cosine:
//   I(s) = amplitude * exp(-(s - env_center)^2 / (2 env_width^2))
//          * [1 + visibility * cos(2 pi s / period + phase)]
struct FringeFit {
    double period = 0.0;
    double phase = 0.0;  // in (-pi, pi]
    double visibility = 0.0;
    double env_center = 0.0;
    double env_width = 0.0;
    double amplitude = 0.0;
    double rms_residual = 0.0;  // relative to the data peak
    bool reliable = false;      // visibility >= 0.1 and fit converged
};

// Least-squares fit with the linear parameters solved exactly per trial of
// the nonlinear ones (period, envelope center/width), coarse-to-fine search
// plus local refinement.  Throws PhysicsError when the scan covers fewer
// than 3 fringe periods or the data is unusable.
FringeFit fit_fringes(const std::vector<double>& positions,
                      const std::vector<double>& intensities);

double fringe_model(const FringeFit& fit, double s);

}  // namespace nlv
