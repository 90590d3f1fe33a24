#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "nlvortex/common.hpp"

namespace nlv {

// Uniformly sampled coordinate axis with inclusive endpoints.
struct Axis {
    double min = 0.0;
    double max = 0.0;
    std::size_t count = 0;

    double spacing() const { return (max - min) / static_cast<double>(count - 1); }
    double operator[](std::size_t i) const { return min + static_cast<double>(i) * spacing(); }

    // x_j = (j - floor(n/2)) * dx with dx = 2*half_span/n.  Always contains x = 0.
    static Axis centered(double half_span, std::size_t n);

    // DFT-conjugate axis: dq = 2*pi/(n*dx), centered the same way.
    Axis conjugate() const;

    // Index of the sample closest to x; throws if x is farther than tol from it.
    std::size_t index_of(double x, double tol) const;

    void validate() const;
    bool operator==(const Axis&) const = default;
};

// Complex scalar field sampled over one or two axes, row-major
// (index = i * axes[1].count + j for 2D).
struct FieldGrid {
    std::vector<Axis> axes;
    std::vector<cplx> values;
    std::map<std::string, std::string> meta;

    std::size_t dim() const { return axes.size(); }
    std::size_t size() const { return values.size(); }

    cplx& at(std::size_t i) { return values[i]; }
    const cplx& at(std::size_t i) const { return values[i]; }
    cplx& at(std::size_t i, std::size_t j) { return values[i * axes[1].count + j]; }
    const cplx& at(std::size_t i, std::size_t j) const { return values[i * axes[1].count + j]; }

    double cell_measure() const;  // product of axis spacings
    double max_abs() const;
    double l2_norm() const;  // sqrt(sum |v|^2 * cell_measure)

    void validate() const;

    static FieldGrid zeros(std::vector<Axis> axes);
};

}  // namespace nlv
