#include "nlvortex/validate.hpp"

#include <chrono>
#include <cmath>
#include <functional>

#include "nlvortex/fourier.hpp"
#include "nlvortex/fringe_fit.hpp"
#include "nlvortex/gauss_modes.hpp"
#include "nlvortex/vortex.hpp"

namespace nlv {

namespace {

cplx simpson(const std::function<cplx(double)>& f, double a, double b, std::size_t intervals) {
    if (intervals % 2) ++intervals;
    const double h = (b - a) / static_cast<double>(intervals);
    cplx acc = f(a) + f(b);
    for (std::size_t k = 1; k < intervals; ++k)
        acc += f(a + h * static_cast<double>(k)) * (k % 2 ? 4.0 : 2.0);
    return acc * (h / 3.0);
}

struct Timer {
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
    double stop() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    }
};

CheckResult run_check(const std::string& name, double tolerance,
                      const std::function<double(std::string&)>& body) {
    CheckResult r;
    r.name = name;
    r.tolerance = tolerance;
    Timer timer;
    try {
        r.metric = body(r.detail);
        r.pass = r.metric <= tolerance;
    } catch (const std::exception& e) {
        r.pass = false;
        r.metric = std::nan("");
        r.detail = e.what();
    }
    r.elapsed_s = timer.stop();
    return r;
}

FieldGrid mixed_amplitude_grid(const BiphotonState& state, const Axis& a1, const Axis& a2) {
    if (state.analytic_mixed_available()) {
        FieldGrid g = FieldGrid::zeros({a1, a2});
        for (std::size_t i = 0; i < a1.count; ++i)
            for (std::size_t j = 0; j < a2.count; ++j)
                g.at(i, j) = psi_mixed_x(state, a1[i], a2[j]);
        g.meta["path"] = "analytic";
        return g;
    }
    return partial_fourier_numeric_at(state, a1, a2);
}

std::uint64_t mix_u64(std::uint64_t x) {
    x ^= x >> 33;
    x *= 0xff51afd7ed558ccdULL;
    x ^= x >> 33;
    return x;
}

}  // namespace

std::vector<CheckResult> run_validation_checks(const RunConfig& cfg, bool quick) {
    cfg.validate();
    const BiphotonState state = cfg.state();
    const double sigma = state.sigma(), delta = state.delta();
    const double wmax = std::max(sigma, delta);
    const bool hg10 = cfg.pump_mode == PumpMode::Hg10;

    std::vector<CheckResult> results;

    results.push_back(run_check("hg-orthonormality", 1e-8, [&](std::string& detail) {
        double worst = 0.0;
        for (const double z : {0.0, 1.0}) {  // z = 0 and z = z_R for w0 = 1
            const BeamGeometry geom(1.0, kTwoPi, z);
            const double span = 10.0 * geom.width();
            for (unsigned mm = 0; mm <= 3; ++mm)
                for (unsigned nn = mm; nn <= 3; ++nn) {
                    const cplx ip = simpson(
                        [&](double x) { return std::conj(hg_1d(mm, x, geom)) * hg_1d(nn, x, geom); },
                        -span, span, 4000);
                    worst = std::max(worst, std::abs(ip - (mm == nn ? 1.0 : 0.0)));
                }
        }
        detail = "max |<u_m,u_n> - delta| over m,n <= 3 at z = 0 and z = z_R";
        return worst;
    }));

    results.push_back(run_check("ft-eigenproperty", 1e-6, [&](std::string& detail) {
        const BeamGeometry geom = BeamGeometry::at_waist(1.0);
        const Axis ax = Axis::centered(8.0, 256);
        double worst = 0.0;
        for (unsigned n = 0; n <= 5; ++n) {
            FieldGrid u = sample_mode(Hg1dMode{n}, {ax}, geom);
            FieldGridت = fourier_transform_1d(u);
            const Axis& q = ت.axes[0];
            const cplx eig = std::pow(cplx{0.0, -1.0}, static_cast<double>(n));
            double err2 = 0.0;
            for (std::size_t m = 0; m < q.count; ++m) {
                const cplx want = eig * hg_1d(n, q[m], geom);
                err2 += std::norm(ت.at(m) - want);
            }
            worst = std::max(worst, std::sqrt(err2 * q.spacing()));
        }
        detail = "max L2 error of FT(u_n) vs (-i)^n u_n, n <= 5";
        return worst;
    }));

    results.push_back(run_check("mixed-analytic-numeric", 1e-6, [&](std::string& detail) {
        const Axis a1 = Axis::centered(6.0 * wmax, cfg.grid_samples);
        const Axis a2 = Axis::centered(6.0 * wmax, cfg.grid_samples);
        const FieldGrid num = partial_fourier_numeric(state, a1, a2);
        const Axis& qax = num.axes[1];
        double peak = num.max_abs(), worst = 0.0;
        if (state.analytic_mixed_available()) {
            for (std::size_t i = 0; i < a1.count; ++i)
                for (std::size_t j = 0; j < qax.count; ++j)
                    worst = std::max(worst,
                                     std::abs(num.at(i, j) - psi_mixed_x(state, a1[i], qax[j])));
            detail = "max |closed form - partial FT| / peak on the config grid";
        } else {
            const FieldGrid quad = partial_fourier_numeric_at(state, a1, qax);
            for (std::size_t i = 0; i < num.size(); ++i)
                worst = std::max(worst, std::abs(num.values[i] - quad.values[i]));
            detail = "max |FFT route - quadrature route| / peak (sigma != delta)";
        }
        return worst / peak;
    }));

    results.push_back(run_check("map-normalization", 1e-6, [&](std::string& detail) {
        const Axis ax = Axis::centered(cfg.grid_half_span, cfg.grid_samples);
        double worst = 0.0;
        for (const MapPlane plane : {MapPlane::PositionPosition, MapPlane::PositionWavevector}) {
            const CoincidenceMap map = prob_map(state, plane, ax, ax);
            const double rescale = std::stod(map.meta.at("normalization_rescale"));
            worst = std::max(worst, std::abs(rescale - 1.0));
        }
        detail = "max |discrete integral - 1| before renormalization";
        return worst;
    }));

    if (hg10) {
        results.push_back(run_check("anti-sum-node", 1e-10, [&](std::string& detail) {
            const Axis ax = Axis::centered(cfg.grid_half_span, cfg.grid_samples);
            const CoincidenceMap map =
                prob_map(state, MapPlane::PositionPosition, ax, ax);
            const double peak = map.max_value();
            double worst = 0.0;
            for (std::size_t i = 1; i < ax.count; ++i)
                worst = std::max(worst, map.at(i, ax.count - i) / peak);
            detail = "max P on the line rho_x1 + rho_x2 = 0, relative to peak";
            return worst;
        }));

        results.push_back(run_check("vortex-core-null", 1e-10, [&](std::string& detail) {
            const Axis ax = Axis::centered(cfg.grid_half_span, cfg.grid_samples);
            const CoincidenceMap map =
                prob_map(state, MapPlane::PositionWavevector, ax, ax);
            const std::size_t i0 = ax.index_of(0.0, 1e-9 * ax.spacing());
            detail = "P(0,0) / peak on the mixed-plane map";
            return map.at(i0, i0) / map.max_value();
        }));

        results.push_back(run_check("winding-charge", 0.0, [&](std::string& detail) {
            const Axis ax = Axis::centered(cfg.grid_half_span, cfg.grid_samples);
            FieldGrid amp = mixed_amplitude_grid(state, ax, ax);
            const SingularityReport rep = locate_singularities(amp);
            if (rep.items.size() != 1) {
                detail = "expected exactly one singularity, found " +
                         std::to_string(rep.items.size());
                return 1.0;
            }
            const Singularity& s = rep.items[0];
            if (std::labs(s.charge) != 1 ||
                std::abs(s.x) > ax.spacing() || std::abs(s.y) > ax.spacing()) {
                detail = "singularity not a unit charge at the origin";
                return 1.0;
            }
            FieldGrid conj_amp = amp;
            for (cplx& v : conj_amp.values) v = std::conj(v);
            const SingularityReport rep2 = locate_singularities(conj_amp);
            if (rep2.items.size() != 1 || rep2.items[0].charge != -s.charge) {
                detail = "conjugation did not flip the charge";
                return 1.0;
            }
            detail = "one singularity at origin, charge " + std::to_string(s.charge) +
                     ", conjugation flips it";
            return 0.0;
        }));

        results.push_back(run_check("doughnut-isotropy", 1e-9, [&](std::string& detail) {
            // width-scaled coordinates: exact rotational symmetry for sigma = delta
            if (!state.analytic_mixed_available()) {
                detail = "sigma != delta: isotropy not applicable, trivially satisfied";
                return 0.0;
            }
            const double w_rho = sigma / std::sqrt(2.0);
            const double w_q = std::sqrt(2.0) / sigma;
            double peak = 0.0, worst = 0.0;
            std::uint64_t s = 12345;
            auto next01 = [&s]() {
                s = mix_u64(s + 0x9E3779B97F4A7C15ULL);
                return static_cast<double>(s >> 11) * 0x1.0p-53;
            };
            for (int t = 0; t < 200; ++t) {
                const double r = 0.2 + 2.8 * next01();
                const double th1 = kTwoPi * next01(), th2 = kTwoPi * next01();
                const double p1 = std::norm(
                    psi_mixed_x(state, w_rho * r * std::cos(th1), w_q * r * std::sin(th1)));
                const double p2 = std::norm(
                    psi_mixed_x(state, w_rho * r * std::cos(th2), w_q * r * std::sin(th2)));
                peak = std::max({peak, p1, p2});
                worst = std::max(worst, std::abs(p1 - p2));
            }
            detail = "max |P(r,th1) - P(r,th2)| / peak over matched radii";
            return worst / peak;
        }));
    } else {
        results.push_back(run_check("gauss-no-singularity", 0.0, [&](std::string& detail) {
            const Axis ax = Axis::centered(cfg.grid_half_span, cfg.grid_samples);
            FieldGrid amp = mixed_amplitude_grid(state, ax, ax);
            const SingularityReport rep = locate_singularities(amp);
            detail = "singularity count on the Gaussian-pump mixed plane";
            return static_cast<double>(rep.items.size());
        }));
    }

    results.push_back(run_check("schmidt-spectrum", 1e-6, [&](std::string& detail) {
        const SchmidtResult res = schmidt_decompose(state, 8);
        double sum2 = 0.0;
        for (const SchmidtTerm& t : res.terms) sum2 += t.coefficient * t.coefficient;
        double worst = std::abs(sum2 + res.truncated_weight - 1.0);
        if (state.analytic_mixed_available()) {
            if (hg10) {
                const double c = 1.0 / std::sqrt(2.0);
                worst = std::max({worst, std::abs(res.terms.at(0).coefficient - c),
                                  std::abs(res.terms.at(1).coefficient - c),
                                  std::abs(res.entropy_bits - 1.0)});
                detail = "two-term spectrum (1/sqrt2, 1/sqrt2), entropy 1 bit";
            } else {
                worst = std::max({worst, std::abs(res.terms.at(0).coefficient - 1.0),
                                  std::abs(res.entropy_bits)});
                detail = "single-coefficient spectrum, entropy 0";
            }
        } else {
            detail = "squares of coefficients sum to 1 (numeric spectrum)";
        }
        return worst;
    }));

    results.push_back(run_check("separability-verdict", 0.0, [&](std::string& detail) {
        const Axis ax = Axis::centered(cfg.grid_half_span,
                                       std::min<std::size_t>(cfg.grid_samples, 128));
        FieldGrid amp = mixed_amplitude_grid(state, ax, ax);
        const SeparabilityEvidence ev = separability_test(amp);
        if (!ev.consistent) {
            detail = "singularity found but Schmidt number < 2";
            return 1.0;
        }
        const bool want_entangled = hg10;
        detail = std::string("verdict: ") + (ev.entangled ? "entangled" : "separable") +
                 ", schmidt number " + std::to_string(ev.schmidt_number);
        return ev.entangled == want_entangled ? 0.0 : 1.0;
    }));

    results.push_back(run_check("fringe-analytic-vs-diffraction", 0.01, [&](std::string& detail) {
        // slit separation 4x the width so the constant-per-slit model applies
        const SlitGeometry cfg_slits = cfg.slit_geometry_dimensionless();
        SlitGeometry slits{0.25 * cfg_slits.center_separation, cfg_slits.center_separation};
        const double s2a = cfg.fourier_scale(cfg.f2_mm);
        const double p_G = 0.8 * sigma;

        const Axis in_axis = Axis::centered(8.0 * wmax, 1024);
        FieldGrid cond = FieldGrid::zeros({in_axis});
        for (std::size_t j = 0; j < in_axis.count; ++j)
            cond.at(j) = cplx{psi_position_x(state, p_G, in_axis[j]), 0.0};
        const double extent = 0.5 * (slits.center_separation + slits.slit_width);
        FieldGrid slit_plane = apply_fourier_stage_to(cond, FourierStage{s2a},
                                                      Axis::centered(1.5 * extent, 4096));

        const cplx e1 = slit_plane.at(slit_plane.axes[0].index_of(
            0.5 * slits.center_separation, slit_plane.axes[0].spacing()));
        const cplx e2 = slit_plane.at(slit_plane.axes[0].index_of(
            -0.5 * slits.center_separation, slit_plane.axes[0].spacing()));

        const double period = kTwoPi / slits.center_separation;
        const Axis screen = Axis::centered(1.5 * period, 512);
        const FringeScan analytic = fraunhofer_double_slit(e1, e2, slits, screen);
        const FringeScan numeric = diffract_through_slits(slit_plane, slits, screen);

        double pa = 0.0, pn = 0.0;
        for (std::size_t i = 0; i < screen.count; ++i) {
            pa = std::max(pa, analytic.intensities[i]);
            pn = std::max(pn, numeric.intensities[i]);
        }
        double worst = 0.0;
        for (std::size_t i = 0; i < screen.count; ++i)
            worst = std::max(worst, std::abs(analytic.intensities[i] / pa -
                                             numeric.intensities[i] / pn));
        detail = "max |analytic - numeric| / peak, separation = 4x slit width";
        return worst;
    }));

    if (!quick) {
        results.push_back(run_check("fringe-shift-end-to-end", hg10 ? 0.01 : 0.02,
                                    [&](std::string& detail) {
            const OpticalChannel ch1 = cfg.photon1_channel();
            const OpticalChannel ch2 = cfg.photon2_fringe_channel();
            const SlitGeometry slits = cfg.slit_geometry_dimensionless();
            const double s2a = cfg.fourier_scale(cfg.f2_mm);
            const double s2b = cfg.fourier_scale(cfg.f3_mm);
            const double period = kTwoPi / (slits.center_separation / s2a) * s2b;

            FringeMeasurement meas;
            for (const double p : cfg.detector1_positions_mm)
                meas.detector1_positions.push_back(cfg.mm_to_dimensionless(p));
            if (meas.detector1_positions.size() < 2)
                throw PhysicsError("need two detector-1 positions for a shift");
            meas.detector1_positions.resize(2);
            meas.screen = Axis::centered(0.5 * cfg.fringe_scan_periods * period,
                                         cfg.fringe_screen_samples);

            std::vector<FringeScan> scans = run_channel_pair_fringes(state, ch1, ch2, meas);
            for (FringeScan& s : scans) s.fit = fit_fringes(s.positions, s.intensities);
            const double measured = fringe_shift(scans[0], scans[1]);

            if (!hg10) {
                detail = "Gaussian pump control: |shift| in periods";
                return std::abs(measured);
            }
            // phase prediction from the mixed representation at the slit centres
            const double m1 = ch1.net_magnification();
            const double q_s = 0.5 * slits.center_separation / s2a;
            auto dphi = [&](double p_out) {
                const double p_in = p_out / m1;
                return std::arg(psi_mixed_x(state, p_in, +q_s)) -
                       std::arg(psi_mixed_x(state, p_in, -q_s));
            };
            const double predicted = -(dphi(meas.detector1_positions[0]) -
                                       dphi(meas.detector1_positions[1])) / kTwoPi;
            detail = "distance between fitted shift and slit-phase prediction (periods); "
                     "measured " + std::to_string(measured);
            return shift_distance(measured, predicted);
        }));
    }

    results.push_back(run_check("counts-determinism", 0.0, [&](std::string& detail) {
        const Axis ax = Axis::centered(cfg.grid_half_span, 32);
        const CoincidenceMap map = prob_map(state, MapPlane::PositionPosition, ax, ax);
        const std::uint64_t seed = cfg.noise_seed_set ? cfg.noise_seed : 7;
        const CountMap a = sample_counts(map, 100000, seed);
        const CountMap b = sample_counts(map, 100000, seed);
        detail = "identical seeds must give identical Poisson draws";
        return a.counts == b.counts ? 0.0 : 1.0;
    }));

    return results;
}

}  // namespace nlv
