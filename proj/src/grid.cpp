#include "nlvortex/grid.hpp"

#include <cmath>

namespace nlv {

Axis Axis::centered(double half_span, std::size_t n) {
    if (n < 2) throw ConfigError("axis needs at least 2 samples");
    if (!(half_span > 0.0)) throw ConfigError("axis half_span must be positive");
    const double dx = 2.0 * half_span / static_cast<double>(n);
    const double lo = -static_cast<double>(n / 2) * dx;
    Axis a{lo, lo + static_cast<double>(n - 1) * dx, n};
    return a;
}

Axis Axis::conjugate() const {
    validate();
    const double dq = kTwoPi / (static_cast<double>(count) * spacing());
    const double lo = -static_cast<double>(count / 2) * dq;
    return Axis{lo, lo + static_cast<double>(count - 1) * dq, count};
}

std::size_t Axis::index_of(double x, double tol) const {
    validate();
    const double t = (x - min) / spacing();
    const double r = std::round(t);
    if (r < 0.0 || r >= static_cast<double>(count) || std::abs(t - r) * spacing() > tol)
        throw PhysicsError("requested coordinate does not lie on the grid");
    return static_cast<std::size_t>(r);
}

void Axis::validate() const {
    if (count < 2) throw ConfigError("axis needs at least 2 samples");
    if (!(max > min) || !std::isfinite(min) || !std::isfinite(max))
        throw ConfigError("axis range must be finite with max > min");
}

double FieldGrid::cell_measure() const {
    double m = 1.0;
    for (const Axis& a : axes) m *= a.spacing();
    return m;
}

double FieldGrid::max_abs() const {
    double m = 0.0;
    for (const cplx& v : values) m = std::max(m, std::abs(v));
    return m;
}

double FieldGrid::l2_norm() const {
    double s = 0.0;
    for (const cplx& v : values) s += std::norm(v);
    return std::sqrt(s * cell_measure());
}

void FieldGrid::validate() const {
    if (axes.empty() || axes.size() > 2) throw ConfigError("field grid must be 1D or 2D");
    std::size_t n = 1;
    for (const Axis& a : axes) {
        a.validate();
        n *= a.count;
    }
    if (values.size() != n) throw ConfigError("field grid value count does not match axes");
}

FieldGrid FieldGrid::zeros(std::vector<Axis> axes) {
    FieldGrid g;
    g.axes = std::move(axes);
    std::size_t n = 1;
    for (const Axis& a : g.axes) n *= a.count;
    g.values.assign(n, cplx{0.0, 0.0});
    g.validate();
    return g;
}

}  // namespace nlv
