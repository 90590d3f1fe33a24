#include "nlvortex/vortex.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>

#include "nlvortex/fringe_fit.hpp"

namespace nlv {

namespace {

double wrap_pi(double a) {
    a = std::remainder(a, kTwoPi);
    if (a <= -kPi) a += kTwoPi;
    return a;
}

// Quadratic refinement of a minimum of |f|^2 from the 3x3 neighborhood.
// Separable parabola fit per axis, clamped to one cell.
std::pair<double, double> refine_minimum(const FieldGrid& f, std::size_t i, std::size_t j) {
    auto mag2 = [&](std::size_t a, std::size_t b) { return std::norm(f.at(a, b)); };
    double di = 0.0, dj = 0.0;
    if (i > 0 && i + 1 < f.axes[0].count) {
        const double a = mag2(i - 1, j), b = mag2(i, j), c = mag2(i + 1, j);
        const double den = a - 2.0 * b + c;
        if (den > 0.0) di = std::clamp(0.5 * (a - c) / den, -1.0, 1.0);
    }
    if (j > 0 && j + 1 < f.axes[1].count) {
        const double a = mag2(i, j - 1), b = mag2(i, j), c = mag2(i, j + 1);
        const double den = a - 2.0 * b + c;
        if (den > 0.0) dj = std::clamp(0.5 * (a - c) / den, -1.0, 1.0);
    }
    return {f.axes[0][i] + di * f.axes[0].spacing(), f.axes[1][j] + dj * f.axes[1].spacing()};
}

Eigen::VectorXd stable_singular_values(const FieldGrid& f, std::size_t stride) {
    const std::size_t n1 = (f.axes[0].count + stride - 1) / stride;
    const std::size_t n2 = (f.axes[1].count + stride - 1) / stride;
    Eigen::MatrixXcd a(n1, n2);
    const double measure = std::sqrt(f.axes[0].spacing() * f.axes[1].spacing()) *
                           static_cast<double>(stride);
    for (std::size_t i = 0; i < n1; ++i)
        for (std::size_t j = 0; j < n2; ++j)
            a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                f.at(i * stride, j * stride) * measure;
    Eigen::BDCSVD<Eigen::MatrixXcd> svd(a);
    return svd.singularValues();
}

}  // namespace

GridLoop rect_loop(std::size_t i0, std::size_t i1, std::size_t j0, std::size_t j1) {
    if (i1 <= i0 || j1 <= j0) throw ConfigError("rect_loop: empty rectangle");
    GridLoop loop;
    for (std::size_t j = j0; j < j1; ++j) loop.emplace_back(i0, j);
    for (std::size_t i = i0; i < i1; ++i) loop.emplace_back(i, j1);
    for (std::size_t j = j1; j > j0; --j) loop.emplace_back(i1, j);
    for (std::size_t i = i1; i > i0; --i) loop.emplace_back(i, j0);
    return loop;
}

GridLoop circle_loop(const FieldGrid& field, double cx, double cy, double radius,
                     std::size_t min_nodes) {
    field.validate();
    if (field.dim() != 2) throw ConfigError("circle_loop expects a 2D field");
    if (!(radius > 0.0)) throw ConfigError("circle_loop: radius must be positive");
    const Axis& ax = field.axes[0];
    const Axis& ay = field.axes[1];
    const std::size_t steps =
        std::max<std::size_t>(min_nodes,
                              static_cast<std::size_t>(8.0 * radius / ax.spacing()));
    GridLoop loop;
    for (std::size_t k = 0; k < steps; ++k) {
        const double th = kTwoPi * static_cast<double>(k) / static_cast<double>(steps);
        const double x = cx + radius * std::cos(th);
        const double y = cy + radius * std::sin(th);
        const double fi = (x - ax.min) / ax.spacing();
        const double fj = (y - ay.min) / ay.spacing();
        if (fi < 0.0 || fj < 0.0 || fi > static_cast<double>(ax.count - 1) ||
            fj > static_cast<double>(ay.count - 1))
            throw ConfigError("circle_loop: circle leaves the grid");
        const auto i = static_cast<std::size_t>(std::llround(fi));
        const auto j = static_cast<std::size_t>(std::llround(fj));
        if (loop.empty() || loop.back() != std::make_pair(i, j)) loop.emplace_back(i, j);
    }
    while (loop.size() > 1 && loop.front() == loop.back()) loop.pop_back();
    if (loop.size() < 3) throw ConfigError("circle_loop: loop degenerate at this resolution");
    return loop;
}

long winding_number(const FieldGrid& field, const GridLoop& loop, double null_floor) {
    field.validate();
    if (field.dim() != 2) throw ConfigError("winding_number expects a 2D field");
    if (loop.size() < 3) throw ConfigError("winding_number: loop too short");

    double total = 0.0;
    double prev_arg = 0.0;
    for (std::size_t k = 0; k <= loop.size(); ++k) {
        const auto& [i, j] = loop[k % loop.size()];
        const cplx v = field.at(i, j);
        if (!(std::abs(v) > null_floor))
            throw PhysicsError("winding_number: loop touches a null of the field");
        const double a = std::arg(v);
        if (k > 0) total += wrap_pi(a - prev_arg);
        prev_arg = a;
    }
    return std::lround(total / kTwoPi);
}

SingularityReport locate_singularities(const FieldGrid& field, double null_threshold) {
    field.validate();
    if (field.dim() != 2) throw ConfigError("locate_singularities expects a 2D field");

    SingularityReport report;
    report.null_threshold = null_threshold;
    report.peak = field.max_abs();
    if (!(report.peak > 0.0)) return report;

    const std::size_t n1 = field.axes[0].count, n2 = field.axes[1].count;
    const double cut = null_threshold * report.peak;
    const std::size_t ring = 2;  // loop two cells out from the candidate core

    for (std::size_t i = ring; i + ring < n1; ++i) {
        for (std::size_t j = ring; j + ring < n2; ++j) {
            const double m = std::abs(field.at(i, j));
            if (m >= cut) continue;
            bool is_min = true;
            for (int di = -1; di <= 1 && is_min; ++di)
                for (int dj = -1; dj <= 1; ++dj) {
                    if (di == 0 && dj == 0) continue;
                    if (std::abs(field.at(i + static_cast<std::size_t>(di),
                                          j + static_cast<std::size_t>(dj))) < m) {
                        is_min = false;
                        break;
                    }
                }
            if (!is_min) continue;

            long charge = 0;
            try {
                charge = winding_number(field, rect_loop(i - ring, i + ring, j - ring, j + ring),
                                        cut);
            } catch (const PhysicsError&) {
                continue;  // ring dips below the floor: cannot certify, skip
            }
            if (charge == 0) continue;

            const auto [x, y] = refine_minimum(field, i, j);
            // merge with an existing entry when within two cells
            bool merged = false;
            for (const Singularity& s : report.items) {
                if (std::abs(s.x - x) <= 2.0 * field.axes[0].spacing() &&
                    std::abs(s.y - y) <= 2.0 * field.axes[1].spacing()) {
                    merged = true;
                    break;
                }
            }
            if (merged) continue;
            report.items.push_back({x, y, charge, m / report.peak});
        }
    }
    return report;
}

SeparabilityEvidence separability_test(const FieldGrid& field, double svd_tol,
                                       double null_threshold) {
    field.validate();
    if (field.dim() != 2) throw ConfigError("separability_test expects a 2D field");

    SeparabilityEvidence ev;

    const Eigen::VectorXd sv = stable_singular_values(field, 1);
    const double total = std::sqrt(sv.squaredNorm());
    if (!(total > 0.0)) throw PhysicsError("separability_test: zero field");

    const int keep = static_cast<int>(std::min<Eigen::Index>(sv.size(), 8));
    for (int k = 0; k < keep; ++k) ev.schmidt_coefficients.push_back(sv[k] / total);
    for (Eigen::Index k = 0; k < sv.size(); ++k)
        if (sv[k] / total > svd_tol) ++ev.schmidt_number;
    ev.entangled = ev.schmidt_number >= 2;

    // convergence probe: singular values from the 2x-subsampled grid
    if (field.axes[0].count >= 32 && field.axes[1].count >= 32) {
        const Eigen::VectorXd coarse = stable_singular_values(field, 2);
        const double ctotal = std::sqrt(coarse.squaredNorm());
        const int nc = static_cast<int>(std::min<Eigen::Index>(
            {sv.size(), coarse.size(), Eigen::Index{4}}));
        for (int k = 0; k < nc; ++k)
            if (std::abs(sv[k] / total - coarse[k] / ctotal) > 1e-4) ev.converged = false;
    }

    const SingularityReport sing = locate_singularities(field, null_threshold);
    ev.singularity_found = !sing.items.empty();
    ev.consistent = !ev.singularity_found || ev.entangled;
    return ev;
}

double shift_distance(double a, double b) {
    double d = std::remainder(a - b, 1.0);
    return std::abs(d);
}

double fringe_shift(const FringeScan& a, const FringeScan& b) {
    if (!a.fit || !b.fit) throw PhysicsError("fringe_shift: scans must be fitted first");
    if (!a.fit->reliable || !b.fit->reliable)
        throw PhysicsError("fringe_shift: unreliable fit (low visibility or short scan)");
    const double rel = std::abs(a.fit->period - b.fit->period) /
                       std::max(a.fit->period, b.fit->period);
    if (rel > 0.02)
        throw PhysicsError("fringe_shift: fitted periods differ by more than 2%");
    double s = (a.fit->phase - b.fit->phase) / kTwoPi;
    s = std::remainder(s, 1.0);
    if (s <= -0.5) s += 1.0;
    return s;
}

}  // namespace nlv
