#include "nlvortex/gauss_modes.hpp"

#include <cmath>

namespace nlv {

BeamGeometry::BeamGeometry(double w0, double lambda, double z_pos)
    : waist_w0(w0), wavelength(lambda), z(z_pos) {
    if (!(waist_w0 > 0.0)) throw ConfigError("beam waist must be positive");
    if (!(wavelength > 0.0)) throw ConfigError("wavelength must be positive");
    if (!std::isfinite(z)) throw ConfigError("axial position must be finite");
}

double BeamGeometry::width() const {
    const double t = z / rayleigh_range();
    return waist_w0 * std::sqrt(1.0 + t * t);
}

double BeamGeometry::inv_curvature() const {
    const double zr = rayleigh_range();
    return z / (z * z + zr * zr);
}

double BeamGeometry::gouy_phase() const { return std::atan(z / rayleigh_range()); }

double hermite_poly(unsigned n, double x) {
    double hm = 1.0;  // H_0
    if (n == 0) return hm;
    double h = 2.0 * x;  // H_1
    for (unsigned k = 1; k < n; ++k) {
        const double next = 2.0 * x * h - 2.0 * static_cast<double>(k) * hm;
        hm = h;
        h = next;
    }
    return h;
}

double hg_norm_coeff(unsigned n, double w) {
    // exp/lgamma form stays finite for large n
    const double log_c2 = std::log(w) + 0.5 * std::log(kPi) +
                          static_cast<double>(n) * std::log(2.0) +
                          std::lgamma(static_cast<double>(n) + 1.0);
    return std::exp(-0.5 * log_c2);
}

cplx hg_1d(unsigned n, double x, const BeamGeometry& geom) {
    const double w = geom.width();
    const double envelope = hg_norm_coeff(n, w) * hermite_poly(n, x / w) *
                            std::exp(-x * x / (2.0 * w * w));
    const double phase = geom.wavenumber() * x * x * 0.5 * geom.inv_curvature() -
                         (static_cast<double>(n) + 0.5) * geom.gouy_phase();
    return envelope * std::exp(cplx{0.0, -phase});
}

cplx hg_2d(unsigned k, unsigned l, double x, double y, const BeamGeometry& geom) {
    return hg_1d(k, x, geom) * hg_1d(l, y, geom);
}

cplx lg_first_order(int sign, double x, double y, const BeamGeometry& geom) {
    if (sign != 1 && sign != -1) throw ConfigError("LG sign must be +1 or -1");
    const cplx a = hg_1d(1, x, geom) * hg_1d(0, y, geom);
    const cplx b = hg_1d(0, x, geom) * hg_1d(1, y, geom);
    return (a + cplx{0.0, static_cast<double>(sign)} * b) / std::sqrt(2.0);
}

FieldGrid sample_mode(const ModeSpec& mode, const std::vector<Axis>& axes,
                      const BeamGeometry& geom) {
    if (axes.empty()) throw ConfigError("sample_mode: no axes given");
    const std::size_t want = std::holds_alternative<Hg1dMode>(mode) ? 1 : 2;
    if (axes.size() != want) throw ConfigError("sample_mode: axis count does not match mode");

    FieldGrid g = FieldGrid::zeros(axes);
    if (want == 1) {
        const unsigned n = std::get<Hg1dMode>(mode).n;
        for (std::size_t i = 0; i < axes[0].count; ++i) g.at(i) = hg_1d(n, axes[0][i], geom);
        return g;
    }
    for (std::size_t i = 0; i < axes[0].count; ++i) {
        const double x = axes[0][i];
        for (std::size_t j = 0; j < axes[1].count; ++j) {
            const double y = axes[1][j];
            if (const auto* hg = std::get_if<Hg2dMode>(&mode))
                g.at(i, j) = hg_2d(hg->k, hg->l, x, y, geom);
            else
                g.at(i, j) = lg_first_order(std::get<LgMode>(mode).sign, x, y, geom);
        }
    }
    return g;
}

}  // namespace nlv
