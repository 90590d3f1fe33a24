#include "nlvortex/biphoton.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>

#include "nlvortex/fourier.hpp"
#include "nlvortex/gauss_modes.hpp"

namespace nlv {

namespace {

constexpr double kSqrt2 = 1.4142135623730951;
constexpr double kSqrtPi = 1.7724538509055160;

unsigned pump_order(const BiphotonState& s) { return s.pump.mode == PumpMode::Hg10 ? 1u : 0u; }

double u_waist(unsigned n, double x, double w) {
    return hg_norm_coeff(n, w) * hermite_poly(n, x / w) * std::exp(-x * x / (2.0 * w * w));
}

// ---- counter-based RNG for reproducible parallel-safe Poisson draws ----

std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

struct CellRng {
    std::uint64_t state;
    CellRng(std::uint64_t seed, std::uint64_t cell) {
        std::uint64_t s = seed;
        std::uint64_t a = splitmix64(s);
        s = a ^ (cell * 0xD1B54A32D192ED03ULL + 0x8CB92BA72F3D8DD7ULL);
        state = splitmix64(s);
    }
    double u01() {  // (0, 1]
        std::uint64_t z = splitmix64(state);
        return (static_cast<double>(z >> 11) + 1.0) * 0x1.0p-53;
    }
};

// Knuth multiplication for small means, Hormann's PTRS transformed
// rejection for large ones.  Both consume only u01() draws.
std::uint64_t poisson_draw(double lambda, CellRng& rng) {
    if (!(lambda > 0.0)) return 0;
    if (lambda < 30.0) {
        const double limit = std::exp(-lambda);
        double p = 1.0;
        std::uint64_t k = 0;
        do {
            ++k;
            p *= rng.u01();
        } while (p > limit);
        return k - 1;
    }
    const double b = 0.931 + 2.53 * std::sqrt(lambda);
    const double a = -0.059 + 0.02483 * b;
    const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
    const double v_r = 0.9277 - 3.6224 / (b - 2.0);
    const double log_lambda = std::log(lambda);
    for (;;) {
        double u = rng.u01() - 0.5;
        double v = rng.u01();
        const double us = 0.5 - std::abs(u);
        const double kf = std::floor((2.0 * a / us + b) * u + lambda + 0.43);
        if (us >= 0.07 && v <= v_r) return static_cast<std::uint64_t>(kf);
        if (kf < 0.0 || (us < 0.013 && v > us)) continue;
        if (std::log(v * inv_alpha / (a / (us * us) + b)) <=
            kf * log_lambda - lambda - std::lgamma(kf + 1.0))
            return static_cast<std::uint64_t>(kf);
    }
}

void box_blur_axis(CoincidenceMap& map, std::size_t axis, double width) {
    if (!(width > 0.0)) return;
    const Axis& ax = axis == 0 ? map.axis1.axis : map.axis2.axis;
    std::size_t cells = static_cast<std::size_t>(std::llround(width / ax.spacing()));
    if (cells < 2) return;  // narrower than a cell: no-op
    if (cells % 2 == 0) ++cells;
    const std::size_t half = cells / 2;
    const std::size_t n1 = map.axis1.axis.count, n2 = map.axis2.axis.count;
    std::vector<double> out(map.values.size(), 0.0);
    for (std::size_t i = 0; i < n1; ++i) {
        for (std::size_t j = 0; j < n2; ++j) {
            const std::size_t c = axis == 0 ? i : j;
            const std::size_t nax = axis == 0 ? n1 : n2;
            const std::size_t lo = c > half ? c - half : 0;
            const std::size_t hi = std::min(c + half, nax - 1);
            double acc = 0.0;
            for (std::size_t t = lo; t <= hi; ++t)
                acc += axis == 0 ? map.at(t, j) : map.at(i, t);
            out[i * n2 + j] = acc / static_cast<double>(hi - lo + 1);
        }
    }
    map.values = std::move(out);
}

int count_sign_changes(const Eigen::VectorXd& v) {
    const double floor_abs = 1e-6 * v.cwiseAbs().maxCoeff();
    int changes = 0;
    double prev = 0.0;
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        const double x = v[i];
        if (std::abs(x) <= floor_abs) continue;
        if (prev != 0.0 && std::signbit(x) != std::signbit(prev)) ++changes;
        prev = x;
    }
    return changes;
}

Axis schmidt_grid_axis(const BiphotonState& state) {
    const double wmax = std::max(state.sigma(), state.delta());
    const double wmin = std::min(state.sigma(), state.delta());
    const double half_span = 6.0 * wmax;
    std::size_t n = 256;
    while (2.0 * half_span / static_cast<double>(n) > wmin / 8.0) n *= 2;
    return Axis::centered(half_span, n);
}

}  // namespace

void BiphotonState::validate() const {
    if (!(pump.width > 0.0)) throw ConfigError("pump width must be positive");
    if (!(pm.width > 0.0)) throw ConfigError("phase-matching width must be positive");
}

double psi_position_x(const BiphotonState& state, double x1, double x2) {
    state.validate();
    return kSqrt2 * u_waist(pump_order(state), x1 + x2, state.sigma()) *
           u_waist(0, x1 - x2, state.delta());
}

cplx psi_position(const BiphotonState& state, Point2 rho1, Point2 rho2) {
    state.validate();
    const double y = kSqrt2 * u_waist(0, rho1.y + rho2.y, state.sigma()) *
                     u_waist(0, rho1.y - rho2.y, state.delta());
    return cplx{psi_position_x(state, rho1.x, rho2.x) * y, 0.0};
}

cplx psi_mixed_x(const BiphotonState& state, double x1, double q2) {
    state.validate();
    if (!state.analytic_mixed_available())
        throw PhysicsError(
            "analytic mixed representation requires sigma = delta; "
            "use partial_fourier_numeric");
    const double w = state.sigma();
    const double env = std::exp(-x1 * x1 / (w * w) - q2 * q2 * w * w / 4.0);
    if (pump_order(state) == 0) return cplx{env / kSqrtPi, 0.0};
    return kSqrt2 / (w * kSqrtPi) * env * cplx{x1, -q2 * w * w / 2.0};
}

cplx psi_mixed(const BiphotonState& state, Point2 rho1, Point2 q2) {
    const double w = state.sigma();
    const double env_y = std::exp(-rho1.y * rho1.y / (w * w) - q2.y * q2.y * w * w / 4.0);
    return psi_mixed_x(state, rho1.x, q2.x) * (env_y / kSqrtPi);
}

FieldGrid position_amplitude_x(const BiphotonState& state, const Axis& x1_axis,
                               const Axis& x2_axis) {
    state.validate();
    FieldGrid g = FieldGrid::zeros({x1_axis, x2_axis});
    for (std::size_t i = 0; i < x1_axis.count; ++i)
        for (std::size_t j = 0; j < x2_axis.count; ++j)
            g.at(i, j) = cplx{psi_position_x(state, x1_axis[i], x2_axis[j]), 0.0};
    return g;
}

namespace {

void check_partial_ft_grid(const BiphotonState& state, const Axis& x2_axis) {
    const double wmin = std::min(state.sigma(), state.delta());
    const double wmax = std::max(state.sigma(), state.delta());
    if (x2_axis.spacing() > wmin / 8.0)
        throw PhysicsError("partial Fourier grid too coarse: need >= 8 samples per width");
    if (std::min(-x2_axis.min, x2_axis.max + x2_axis.spacing()) < 6.0 * wmax)
        throw PhysicsError("partial Fourier grid too narrow: need half-span >= 6 widths");
}

}  // namespace

FieldGrid partial_fourier_numeric(const BiphotonState& state, const Axis& x1_axis,
                                  const Axis& x2_axis) {
    check_partial_ft_grid(state, x2_axis);
    FieldGrid pos = position_amplitude_x(state, x1_axis, x2_axis);
    FieldGrid out = fourier_transform_axis(pos, 1);
    out.meta["path"] = "numeric";
    return out;
}

FieldGrid partial_fourier_numeric_at(const BiphotonState& state, const Axis& x1_axis,
                                     const Axis& q2_axis) {
    const double wmax = std::max(state.sigma(), state.delta());
    const double wmin = std::min(state.sigma(), state.delta());
    const double q_max = std::max(std::abs(q2_axis.min), std::abs(q2_axis.max));
    // quadrature step must resolve both the state and the fastest phase factor
    const double dx = std::min(wmin / 16.0, kPi / (4.0 * std::max(q_max, 1.0 / wmin)));
    const double half_span = 8.0 * wmax;
    std::size_t n = static_cast<std::size_t>(std::ceil(2.0 * half_span / dx));
    n += n % 2;
    const Axis x2_axis = Axis::centered(half_span, n);

    FieldGrid out = FieldGrid::zeros({x1_axis, q2_axis});
    std::vector<cplx> line(n);
    for (std::size_t i = 0; i < x1_axis.count; ++i) {
        FieldGrid row = FieldGrid::zeros({x2_axis});
        for (std::size_t j = 0; j < n; ++j)
            row.at(j) = cplx{psi_position_x(state, x1_axis[i], x2_axis[j]), 0.0};
        FieldGrid trow = fourier_transform_to(row, q2_axis);
        for (std::size_t m = 0; m < q2_axis.count; ++m) out.at(i, m) = trow.at(m);
    }
    out.meta["path"] = "numeric";
    return out;
}

double CoincidenceMap::integral() const {
    double s = 0.0;
    for (double v : values) s += v;
    return s * cell_area();
}

double CoincidenceMap::max_value() const {
    double m = 0.0;
    for (double v : values) m = std::max(m, v);
    return m;
}

CoincidenceMap prob_map(const BiphotonState& state, MapPlane plane, const Axis& axis1,
                        const Axis& axis2, const ApertureSpec* aperture) {
    state.validate();
    axis1.validate();
    axis2.validate();

    CoincidenceMap map;
    map.axis1 = {1, Representation::Position, axis1};
    map.axis2 = {2,
                 plane == MapPlane::PositionPosition ? Representation::Position
                                                     : Representation::Wavevector,
                 axis2};
    map.values.assign(axis1.count * axis2.count, 0.0);

    if (plane == MapPlane::PositionPosition) {
        for (std::size_t i = 0; i < axis1.count; ++i)
            for (std::size_t j = 0; j < axis2.count; ++j) {
                const double a = psi_position_x(state, axis1[i], axis2[j]);
                map.at(i, j) = a * a;
            }
        map.meta["path"] = "analytic";
    } else if (state.analytic_mixed_available()) {
        for (std::size_t i = 0; i < axis1.count; ++i)
            for (std::size_t j = 0; j < axis2.count; ++j)
                map.at(i, j) = std::norm(psi_mixed_x(state, axis1[i], axis2[j]));
        map.meta["path"] = "analytic";
    } else {
        FieldGrid amp = partial_fourier_numeric_at(state, axis1, axis2);
        for (std::size_t i = 0; i < axis1.count; ++i)
            for (std::size_t j = 0; j < axis2.count; ++j)
                map.at(i, j) = std::norm(amp.at(i, j));
        map.meta["path"] = "numeric";
    }

    if (aperture) {
        box_blur_axis(map, 0, aperture->width_axis1);
        box_blur_axis(map, 1, aperture->width_axis2);
    }

    const double raw = map.integral();
    if (!(raw > 0.0)) throw PhysicsError("probability map integrates to zero");
    for (double& v : map.values) v /= raw;
    map.meta["normalization_rescale"] = std::to_string(1.0 / raw);
    return map;
}

SchmidtResult schmidt_decompose(const BiphotonState& state, unsigned cutoff) {
    state.validate();
    if (cutoff < 2) throw ConfigError("schmidt_decompose: basis cutoff must be >= 2");

    SchmidtResult res;
    if (state.analytic_mixed_available()) {
        res.analytic = true;
        if (pump_order(state) == 1) {
            // equal two-term superposition of u1 x u0 and u0 x u1
            const double c = 1.0 / kSqrt2;
            res.terms = {{c, 1, 0}, {c, 0, 1}};
            res.entropy_bits = 1.0;
        } else {
            res.terms = {{1.0, 0, 0}};
            res.entropy_bits = 0.0;
        }
        if (res.terms.size() > cutoff) {
            for (std::size_t k = cutoff; k < res.terms.size(); ++k)
                res.truncated_weight += res.terms[k].coefficient * res.terms[k].coefficient;
            res.terms.resize(cutoff);
        }
        res.cutoff_too_small = res.truncated_weight > 1e-6;
        return res;
    }

    const Axis ax = schmidt_grid_axis(state);
    const Eigen::Index n = static_cast<Eigen::Index>(ax.count);
    Eigen::MatrixXd a(n, n);
    const double measure = ax.spacing();
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j)
            a(i, j) = psi_position_x(state, ax[static_cast<std::size_t>(i)],
                                     ax[static_cast<std::size_t>(j)]) *
                      measure;

    Eigen::BDCSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Eigen::VectorXd& sv = svd.singularValues();

    double total = 0.0;
    for (Eigen::Index k = 0; k < sv.size(); ++k) total += sv[k] * sv[k];

    double kept = 0.0;
    for (Eigen::Index k = 0; k < sv.size() && k < static_cast<Eigen::Index>(cutoff); ++k) {
        if (sv[k] <= 0.0) break;
        SchmidtTerm t;
        t.coefficient = sv[k];
        t.mode1 = count_sign_changes(svd.matrixU().col(k));
        t.mode2 = count_sign_changes(svd.matrixV().col(k));
        res.terms.push_back(t);
        kept += sv[k] * sv[k];
    }
    res.truncated_weight = std::max(0.0, total - kept);
    res.cutoff_too_small = res.truncated_weight > 1e-6;
    for (Eigen::Index k = 0; k < sv.size(); ++k) {
        const double p = sv[k] * sv[k];
        if (p > 1e-300) res.entropy_bits -= p * std::log2(p);
    }
    return res;
}

CountMap sample_counts(const CoincidenceMap& map, std::uint64_t total_events,
                       std::uint64_t seed) {
    if (total_events == 0) throw ConfigError("sample_counts: total_events must be positive");
    CountMap out;
    out.axis1 = map.axis1;
    out.axis2 = map.axis2;
    out.meta = map.meta;
    out.meta["noise_events"] = std::to_string(total_events);
    out.meta["noise_seed"] = std::to_string(seed);
    out.counts.resize(map.values.size());
    const double scale = static_cast<double>(total_events) * map.cell_area();
    for (std::size_t i = 0; i < map.values.size(); ++i) {
        CellRng rng(seed, static_cast<std::uint64_t>(i));
        out.counts[i] = poisson_draw(map.values[i] * scale, rng);
    }
    return out;
}

}  // namespace nlv
