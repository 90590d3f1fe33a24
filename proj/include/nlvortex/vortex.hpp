#pragma once

#include <utility>
#include <vector>

#include "nlvortex/grid.hpp"
#include "nlvortex/optics.hpp"

namespace nlv {

// Closed path of grid nodes (i, j); the last node connects back to the first.
using GridLoop = std::vector<std::pair<std::size_t, std::size_t>>;

// Rectangular ring of nodes around [i0, i1] x [j0, j1] (inclusive), counterclockwise
// in (axis1, axis2) orientation.
GridLoop rect_loop(std::size_t i0, std::size_t i1, std::size_t j0, std::size_t j1);

// Nodes nearest to a circle of given radius about (cx, cy), counterclockwise,
// deduplicated.  Throws if the circle leaves the grid.
GridLoop circle_loop(const FieldGrid& field, double cx, double cy, double radius,
                     std::size_t min_nodes = 64);

// Topological charge: sum of wrapped phase differences around the loop over
// 2 pi.  The wrapping keeps each step in (-pi, pi], so the result is an
// integer by construction.  Throws PhysicsError when |field| <= null_floor
// anywhere on the loop.
long winding_number(const FieldGrid& field, const GridLoop& loop, double null_floor);

struct Singularity {
    double x = 0.0, y = 0.0;   // sub-grid refined location
    long charge = 0;
    double core_ratio = 0.0;   // |field| at the core node / peak
};

struct SingularityReport {
    std::vector<Singularity> items;
    double null_threshold = 0.0;  // relative to peak
    double peak = 0.0;
};

// Find modulus minima below null_threshold * peak, keep the ones with nonzero
// winding on a small surrounding loop, refine locations by quadratic
// interpolation of |field|^2.
SingularityReport locate_singularities(const FieldGrid& field, double null_threshold = 1e-3);

struct SeparabilityEvidence {
    bool entangled = false;
    std::vector<double> schmidt_coefficients;  // descending, squares sum to ~1
    int schmidt_number = 0;                    // coefficients above tolerance
    bool singularity_found = false;            // isolated nonzero-charge point
    bool consistent = true;   // singularity implies schmidt_number >= 2
    bool converged = true;    // singular values stable under subsampling
};

// Schmidt-rank test of a joint amplitude over (photon-1 coordinate) x
// (photon-2 coordinate): entangled when the second singular value exceeds
// svd_tol.  Also reports whether an isolated nonzero-charge singularity
// exists, and cross-checks the implication singularity => entangled.
SeparabilityEvidence separability_test(const FieldGrid& field, double svd_tol = 1e-6,
                                       double null_threshold = 1e-3);

// Relative fringe displacement (phase offset A - phase offset B) in periods,
// wrapped into (-1/2, 1/2].  Requires both fits reliable with periods equal
// within 2%.
double fringe_shift(const FringeScan& a, const FringeScan& b);

// Circular distance between two shifts expressed in periods.
double shift_distance(double a, double b);

}  // namespace nlv
