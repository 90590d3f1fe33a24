#include "nlvortex/fringe_fit.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

namespace nlv {

namespace {

struct LinearSolution {
    double b0 = 0.0, bc = 0.0, bs = 0.0;  // coefficients of g, g*cos, g*sin
    double sse = std::numeric_limits<double>::infinity();
};

// Exact least-squares solve of the three linear coefficients for fixed
// nonlinear parameters (envelope center c, width s, angular frequency omega).
LinearSolution solve_linear(const std::vector<double>& x, const std::vector<double>& y,
                            double c, double s, double omega) {
    double m[3][3] = {{0}};
    double rhs[3] = {0};
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double t = x[i] - c;
        const double g = std::exp(-t * t / (2.0 * s * s));
        const double basis[3] = {g, g * std::cos(omega * x[i]), g * std::sin(omega * x[i])};
        for (int a = 0; a < 3; ++a) {
            rhs[a] += basis[a] * y[i];
            for (int b = a; b < 3; ++b) m[a][b] += basis[a] * basis[b];
        }
    }
    for (int a = 1; a < 3; ++a)
        for (int b = 0; b < a; ++b) m[a][b] = m[b][a];

    // Gaussian elimination with partial pivoting on the 3x3 system
    double aug[3][4];
    for (int a = 0; a < 3; ++a) {
        for (int b = 0; b < 3; ++b) aug[a][b] = m[a][b];
        aug[a][3] = rhs[a];
    }
    for (int col = 0; col < 3; ++col) {
        int piv = col;
        for (int r = col + 1; r < 3; ++r)
            if (std::abs(aug[r][col]) > std::abs(aug[piv][col])) piv = r;
        if (std::abs(aug[piv][col]) < 1e-300) return {};
        if (piv != col)
            for (int b = 0; b < 4; ++b) std::swap(aug[piv][b], aug[col][b]);
        for (int r = 0; r < 3; ++r) {
            if (r == col) continue;
            const double f = aug[r][col] / aug[col][col];
            for (int b = col; b < 4; ++b) aug[r][b] -= f * aug[col][b];
        }
    }
    LinearSolution sol;
    sol.b0 = aug[0][3] / aug[0][0];
    sol.bc = aug[1][3] / aug[1][1];
    sol.bs = aug[2][3] / aug[2][2];

    sol.sse = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double t = x[i] - c;
        const double g = std::exp(-t * t / (2.0 * s * s));
        const double model =
            g * (sol.b0 + sol.bc * std::cos(omega * x[i]) + sol.bs * std::sin(omega * x[i]));
        const double r = model - y[i];
        sol.sse += r * r;
    }
    return sol;
}

double wrap_pi(double a) {
    a = std::remainder(a, kTwoPi);
    if (a <= -kPi) a += kTwoPi;
    return a;
}

}  // namespace

double fringe_model(const FringeFit& fit, double s) {
    const double t = s - fit.env_center;
    const double g = std::exp(-t * t / (2.0 * fit.env_width * fit.env_width));
    return fit.amplitude * g *
           (1.0 + fit.visibility * std::cos(kTwoPi * s / fit.period + fit.phase));
}

FringeFit fit_fringes(const std::vector<double>& positions,
                      const std::vector<double>& intensities) {
    const std::size_t n = positions.size();
    if (n < 8 || intensities.size() != n)
        throw PhysicsError("fringe fit needs at least 8 matching samples");
    double peak = 0.0, mean = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        if (!std::isfinite(positions[i]) || !std::isfinite(intensities[i]) ||
            intensities[i] < 0.0)
            throw PhysicsError("fringe fit: intensities must be finite and nonnegative");
        peak = std::max(peak, intensities[i]);
        mean += intensities[i];
    }
    mean /= static_cast<double>(n);
    if (!(peak > 0.0)) throw PhysicsError("fringe fit: all-zero scan");

    const auto [it_lo, it_hi] = std::minmax_element(positions.begin(), positions.end());
    const double range = *it_hi - *it_lo;
    if (!(range > 0.0)) throw PhysicsError("fringe fit: degenerate position range");

    // moment estimates of the envelope
    double wsum = 0.0, c0 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        wsum += intensities[i];
        c0 += intensities[i] * positions[i];
    }
    c0 /= wsum;
    double var = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        var += intensities[i] * (positions[i] - c0) * (positions[i] - c0);
    var /= wsum;
    const double s0 = std::max(std::sqrt(var), 1e-3 * range);

    // periodogram of the mean-removed data pins the starting frequency
    const double f_lo = 1.5 / range;
    const double f_hi = 0.45 * static_cast<double>(n - 1) / range;  // near Nyquist
    const std::size_t nf = 40 * n / 2;
    double best_f = 3.0 / range, best_p = -1.0;
    for (std::size_t k = 0; k < nf; ++k) {
        const double f = f_lo + (f_hi - f_lo) * static_cast<double>(k) /
                                    static_cast<double>(nf - 1);
        double re = 0.0, im = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double ph = kTwoPi * f * positions[i];
            re += (intensities[i] - mean) * std::cos(ph);
            im += (intensities[i] - mean) * std::sin(ph);
        }
        const double p = re * re + im * im;
        if (p > best_p) {
            best_p = p;
            best_f = f;
        }
    }

    // coarse grid over (center, width, frequency)
    double bc = c0, bs_ = s0, bw = kTwoPi * best_f;
    LinearSolution best;
    for (const double cc : {c0 - 0.5 * s0, c0 - 0.25 * s0, c0, c0 + 0.25 * s0, c0 + 0.5 * s0})
        for (const double ss : {0.5 * s0, 0.75 * s0, s0, 1.5 * s0, 2.5 * s0})
            for (int dk = -10; dk <= 10; ++dk) {
                const double f = best_f * (1.0 + 0.01 * dk);
                const LinearSolution sol = solve_linear(positions, intensities, cc, ss,
                                                        kTwoPi * f);
                if (sol.sse < best.sse) {
                    best = sol;
                    bc = cc;
                    bs_ = ss;
                    bw = kTwoPi * f;
                }
            }

    // Levenberg-Marquardt on (center, log width, log frequency) with the
    // linear coefficients re-solved at every evaluation
    double theta[3] = {bc, std::log(bs_), std::log(bw)};
    auto eval = [&](const double* th) {
        return solve_linear(positions, intensities, th[0], std::exp(th[1]), std::exp(th[2]));
    };
    LinearSolution cur = eval(theta);
    double lambda = 1e-3;
    for (int iter = 0; iter < 200; ++iter) {
        // numeric Jacobian of the residual vector
        const double h[3] = {1e-7 * std::max(1.0, std::abs(theta[0])), 1e-7, 1e-7};
        std::vector<std::array<double, 3>> jac(n);
        std::vector<double> res(n);
        {
            const double s = std::exp(theta[1]), w = std::exp(theta[2]);
            for (std::size_t i = 0; i < n; ++i) {
                const double t = positions[i] - theta[0];
                const double g = std::exp(-t * t / (2.0 * s * s));
                res[i] = g * (cur.b0 + cur.bc * std::cos(w * positions[i]) +
                              cur.bs * std::sin(w * positions[i])) -
                         intensities[i];
            }
        }
        for (int a = 0; a < 3; ++a) {
            double thp[3] = {theta[0], theta[1], theta[2]};
            thp[a] += h[a];
            const LinearSolution sp = eval(thp);
            const double s = std::exp(thp[1]), w = std::exp(thp[2]);
            for (std::size_t i = 0; i < n; ++i) {
                const double t = positions[i] - thp[0];
                const double g = std::exp(-t * t / (2.0 * s * s));
                const double ri = g * (sp.b0 + sp.bc * std::cos(w * positions[i]) +
                                       sp.bs * std::sin(w * positions[i])) -
                                  intensities[i];
                jac[i][a] = (ri - res[i]) / h[a];
            }
        }
        double jtj[3][3] = {{0}};
        double jtr[3] = {0};
        for (std::size_t i = 0; i < n; ++i)
            for (int a = 0; a < 3; ++a) {
                jtr[a] += jac[i][a] * res[i];
                for (int b = 0; b < 3; ++b) jtj[a][b] += jac[i][a] * jac[i][b];
            }
        bool improved = false;
        for (int attempt = 0; attempt < 12 && !improved; ++attempt) {
            double aug[3][4];
            for (int a = 0; a < 3; ++a) {
                for (int b = 0; b < 3; ++b) aug[a][b] = jtj[a][b];
                aug[a][a] *= 1.0 + lambda;
                aug[a][3] = -jtr[a];
            }
            // 3x3 solve
            bool singular = false;
            for (int col = 0; col < 3 && !singular; ++col) {
                int piv = col;
                for (int r = col + 1; r < 3; ++r)
                    if (std::abs(aug[r][col]) > std::abs(aug[piv][col])) piv = r;
                if (std::abs(aug[piv][col]) < 1e-300) {
                    singular = true;
                    break;
                }
                if (piv != col)
                    for (int b = 0; b < 4; ++b) std::swap(aug[piv][b], aug[col][b]);
                for (int r = 0; r < 3; ++r) {
                    if (r == col) continue;
                    const double f = aug[r][col] / aug[col][col];
                    for (int b = col; b < 4; ++b) aug[r][b] -= f * aug[col][b];
                }
            }
            if (singular) break;
            double thn[3];
            for (int a = 0; a < 3; ++a) thn[a] = theta[a] + aug[a][3] / aug[a][a];
            const LinearSolution nsol = eval(thn);
            if (nsol.sse < cur.sse) {
                improved = true;
                lambda = std::max(lambda * 0.3, 1e-12);
                const double gain = (cur.sse - nsol.sse) / std::max(cur.sse, 1e-300);
                for (int a = 0; a < 3; ++a) theta[a] = thn[a];
                cur = nsol;
                if (gain < 1e-14) iter = 200;
            } else {
                lambda *= 10.0;
            }
        }
        if (!improved) break;
    }

    FringeFit fit;
    fit.env_center = theta[0];
    fit.env_width = std::exp(theta[1]);
    const double omega = std::exp(theta[2]);
    fit.period = kTwoPi / omega;
    fit.amplitude = cur.b0;
    if (cur.b0 > 0.0) {
        fit.visibility = std::hypot(cur.bc, cur.bs) / cur.b0;
        fit.phase = wrap_pi(std::atan2(-cur.bs, cur.bc));
    }
    fit.rms_residual = std::sqrt(cur.sse / static_cast<double>(n)) / peak;
    fit.reliable = cur.b0 > 0.0 && fit.visibility >= 0.1 && range >= 3.0 * fit.period;
    return fit;
}

}  // namespace nlv
