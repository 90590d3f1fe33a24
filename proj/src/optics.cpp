#include "nlvortex/optics.hpp"

#include <algorithm>
#include <cmath>

#include "nlvortex/fourier.hpp"

namespace nlv {

namespace {

double sinc(double t) { return std::abs(t) < 1e-12 ? 1.0 : std::sin(t) / t; }

// Fraction of the cell [x - dx/2, x + dx/2] covered by the two slits.
double slit_cell_fraction(double x, double dx, const SlitGeometry& s) {
    const double lo = x - 0.5 * dx, hi = x + 0.5 * dx;
    double covered = 0.0;
    for (const double c : {+0.5 * s.center_separation, -0.5 * s.center_separation}) {
        const double a = c - 0.5 * s.slit_width, b = c + 0.5 * s.slit_width;
        covered += std::max(0.0, std::min(hi, b) - std::max(lo, a));
    }
    return covered / dx;
}

}  // namespace

void SlitGeometry::validate() const {
    if (!(slit_width > 0.0) || !(center_separation > 0.0))
        throw ConfigError("slit width and separation must be positive");
    if (!(center_separation > slit_width))
        throw ConfigError("slits overlap: center separation must exceed slit width");
}

void OpticalChannel::validate() const {
    int slit_masks = 0;
    for (const ChannelStage& st : stages) {
        if (const auto* f = std::get_if<FourierStage>(&st)) {
            if (!(f->scale > 0.0)) throw ConfigError("Fourier stage scale must be positive");
        } else if (const auto* im = std::get_if<ImagingStage>(&st)) {
            if (!(im->magnification > 0.0))
                throw ConfigError("imaging magnification must be positive");
        } else {
            const MaskStage& m = std::get<MaskStage>(st);
            if (const auto* g = std::get_if<GaussianMask>(&m.mask)) {
                if (!(g->width > 0.0)) throw ConfigError("mask width must be positive");
            } else {
                std::get<SlitGeometry>(m.mask).validate();
                ++slit_masks;
            }
        }
    }
    if (slit_masks > 1) throw ConfigError("at most one slit mask per channel");
}

bool OpticalChannel::imaging_only() const {
    for (const ChannelStage& st : stages)
        if (!std::holds_alternative<ImagingStage>(st)) return false;
    return true;
}

double OpticalChannel::net_magnification() const {
    double m = 1.0;
    for (const ChannelStage& st : stages) {
        const ImagingStage& im = std::get<ImagingStage>(st);
        m *= im.magnification * (im.invert ? -1.0 : 1.0);
    }
    return m;
}

FieldGrid apply_fourier_stage(const FieldGrid& field, const FourierStage& stage,
                              double edge_tol) {
    if (!(stage.scale > 0.0)) throw ConfigError("Fourier stage scale must be positive");
    FieldGrid out = fourier_transform_1d(field, edge_tol);
    out.axes[0].min *= stage.scale;
    out.axes[0].max *= stage.scale;
    // amplitude rescale keeps the L2 norm unchanged under the axis stretch
    const double amp = 1.0 / std::sqrt(stage.scale);
    for (cplx& v : out.values) v *= amp;
    out.meta["quadratic_phase_dropped"] = "true";
    return out;
}

FieldGrid apply_fourier_stage_to(const FieldGrid& field, const FourierStage& stage,
                                 const Axis& out_axis, double edge_tol) {
    if (!(stage.scale > 0.0)) throw ConfigError("Fourier stage scale must be positive");
    Axis q = out_axis;
    q.min /= stage.scale;
    q.max /= stage.scale;
    FieldGrid out = fourier_transform_to(field, q, edge_tol);
    out.axes[0] = out_axis;
    const double amp = 1.0 / std::sqrt(stage.scale);
    for (cplx& v : out.values) v *= amp;
    out.meta["quadratic_phase_dropped"] = "true";
    return out;
}

FieldGrid apply_imaging_stage(const FieldGrid& field, const ImagingStage& stage) {
    field.validate();
    if (field.dim() != 1) throw ConfigError("imaging stage expects a 1D field");
    if (!(stage.magnification > 0.0)) throw ConfigError("imaging magnification must be positive");
    const double m = stage.magnification * (stage.invert ? -1.0 : 1.0);
    const Axis& ax = field.axes[0];
    FieldGrid out;
    const double amp = 1.0 / std::sqrt(std::abs(m));
    if (m > 0.0) {
        out = FieldGrid::zeros({Axis{ax.min * m, ax.max * m, ax.count}});
        for (std::size_t j = 0; j < ax.count; ++j) out.at(j) = amp * field.at(j);
    } else {
        out = FieldGrid::zeros({Axis{ax.max * m, ax.min * m, ax.count}});
        for (std::size_t j = 0; j < ax.count; ++j) out.at(j) = amp * field.at(ax.count - 1 - j);
    }
    out.meta = field.meta;
    return out;
}

FieldGrid apply_mask(const FieldGrid& field, const MaskSpec& mask) {
    field.validate();
    if (field.dim() != 1) throw ConfigError("mask expects a 1D field");
    const Axis& ax = field.axes[0];
    FieldGrid out = field;
    double norm_in = 0.0, norm_out = 0.0;
    for (std::size_t j = 0; j < ax.count; ++j) {
        const double x = ax[j];
        double t;
        if (const auto* g = std::get_if<GaussianMask>(&mask))
            t = std::exp(-x * x / (2.0 * g->width * g->width));
        else
            t = slit_cell_fraction(x, ax.spacing(), std::get<SlitGeometry>(mask));
        norm_in += std::norm(field.at(j));
        out.at(j) = field.at(j) * t;
        norm_out += std::norm(out.at(j));
    }
    const double surviving = norm_in > 0.0 ? norm_out / norm_in : 0.0;
    out.meta["surviving_norm"] = std::to_string(surviving);
    if (surviving < 1e-4) out.meta["mask_warning"] = "surviving norm below 1e-4";
    return out;
}

FieldGrid apply_channel(const FieldGrid& field, const OpticalChannel& channel) {
    channel.validate();
    FieldGrid f = field;
    for (const ChannelStage& st : channel.stages) {
        if (const auto* fs = std::get_if<FourierStage>(&st))
            f = apply_fourier_stage(f, *fs);
        else if (const auto* im = std::get_if<ImagingStage>(&st))
            f = apply_imaging_stage(f, *im);
        else
            f = apply_mask(f, std::get<MaskStage>(st).mask);
    }
    return f;
}

FringeScan fraunhofer_double_slit(cplx e_pos, cplx e_neg, const SlitGeometry& slits,
                                  const Axis& screen) {
    slits.validate();
    screen.validate();
    const double a = slits.slit_width, d = slits.center_separation;
    const double i1 = std::norm(e_pos), i2 = std::norm(e_neg);
    const double cross = 2.0 * std::abs(e_pos) * std::abs(e_neg);
    const double dphi = std::arg(e_pos) - std::arg(e_neg);

    FringeScan scan;
    scan.positions.resize(screen.count);
    scan.intensities.resize(screen.count);
    for (std::size_t j = 0; j < screen.count; ++j) {
        const double s = screen[j];
        const double env = a * a / kTwoPi * sinc(0.5 * a * s) * sinc(0.5 * a * s);
        scan.positions[j] = s;
        scan.intensities[j] = env * (i1 + i2 + cross * std::cos(d * s - dphi));
    }
    scan.meta["model"] = "analytic";
    return scan;
}

FringeScan diffract_through_slits(const FieldGrid& input, const SlitGeometry& slits,
                                  const Axis& screen) {
    FieldGrid masked = apply_mask(input, MaskSpec{slits});
    FieldGrid far = fourier_transform_to(masked, screen);
    FringeScan scan;
    scan.positions.resize(screen.count);
    scan.intensities.resize(screen.count);
    for (std::size_t j = 0; j < screen.count; ++j) {
        scan.positions[j] = screen[j];
        scan.intensities[j] = std::norm(far.at(j));
    }
    scan.meta["model"] = "numeric";
    if (auto it = masked.meta.find("mask_warning"); it != masked.meta.end())
        scan.meta["mask_warning"] = it->second;
    return scan;
}

namespace {

Representation channel_output_rep(const OpticalChannel& ch) {
    int flips = 0;
    for (const ChannelStage& st : ch.stages)
        if (std::holds_alternative<FourierStage>(st)) ++flips;
    return flips % 2 == 0 ? Representation::Position : Representation::Wavevector;
}

// Apply a channel to every line of the joint amplitude along one axis.
FieldGrid apply_channel_along(const FieldGrid& joint, const OpticalChannel& ch,
                              std::size_t axis) {
    const std::size_t n = joint.axes[axis].count;
    const std::size_t other = joint.axes[1 - axis].count;

    // transform the first line to learn the output axis
    FieldGrid out;
    for (std::size_t i = 0; i < other; ++i) {
        FieldGrid line = FieldGrid::zeros({joint.axes[axis]});
        for (std::size_t j = 0; j < n; ++j)
            line.at(j) = axis == 1 ? joint.at(i, j) : joint.at(j, i);
        FieldGrid tline = apply_channel(line, ch);
        if (i == 0) {
            std::vector<Axis> axes = joint.axes;
            axes[axis] = tline.axes[0];
            out = FieldGrid::zeros(axes);
            out.meta = joint.meta;
            for (const auto& [k, v] : tline.meta) out.meta[k] = v;
        }
        for (std::size_t j = 0; j < tline.axes[0].count; ++j) {
            if (axis == 1)
                out.at(i, j) = tline.at(j);
            else
                out.at(j, i) = tline.at(j);
        }
    }
    return out;
}

}  // namespace

CoincidenceMap run_channel_pair_map(const BiphotonState& state, const OpticalChannel& ch1,
                                    const OpticalChannel& ch2, const MapMeasurement& m) {
    ch1.validate();
    ch2.validate();
    FieldGrid joint = position_amplitude_x(state, m.axis1, m.axis2);
    if (!ch1.stages.empty()) joint = apply_channel_along(joint, ch1, 0);
    if (!ch2.stages.empty()) joint = apply_channel_along(joint, ch2, 1);

    CoincidenceMap map;
    map.axis1 = {1, channel_output_rep(ch1), joint.axes[0]};
    map.axis2 = {2, channel_output_rep(ch2), joint.axes[1]};
    map.values.resize(joint.size());
    for (std::size_t i = 0; i < joint.size(); ++i) map.values[i] = std::norm(joint.values[i]);
    map.meta = joint.meta;

    const double raw = map.integral();
    if (!(raw > 0.0)) throw PhysicsError("channel output map integrates to zero");
    for (double& v : map.values) v /= raw;
    map.meta["normalization_rescale"] = std::to_string(1.0 / raw);
    return map;
}

std::vector<FringeScan> run_channel_pair_fringes(const BiphotonState& state,
                                                 const OpticalChannel& ch1,
                                                 const OpticalChannel& ch2,
                                                 const FringeMeasurement& m) {
    ch1.validate();
    ch2.validate();
    if (!ch1.imaging_only())
        throw PhysicsError("fringe measurement expects an imaging-only channel for photon 1");
    if (ch2.stages.empty() || !std::holds_alternative<FourierStage>(ch2.stages.back()))
        throw PhysicsError("fringe measurement expects a final Fourier stage for photon 2");
    m.screen.validate();
    if (m.detector1_positions.empty())
        throw ConfigError("fringe measurement needs at least one detector-1 position");

    const double m1 = ch1.net_magnification();
    const double wmax = std::max(state.sigma(), state.delta());
    const Axis input_axis = Axis::centered(8.0 * wmax, m.quadrature_samples);

    std::vector<FringeScan> scans;
    scans.reserve(m.detector1_positions.size());
    for (const double p : m.detector1_positions) {
        const double p_in = p / m1;
        FieldGrid f = FieldGrid::zeros({input_axis});
        for (std::size_t j = 0; j < input_axis.count; ++j)
            f.at(j) = cplx{psi_position_x(state, p_in, input_axis[j]), 0.0};

        // Fourier stages are targeted by quadrature: a stage feeding a slit
        // mask lands on a fine axis across the slits, the final stage lands
        // on the requested screen.  Everything else takes the generic path.
        for (std::size_t si = 0; si < ch2.stages.size(); ++si) {
            const ChannelStage& st = ch2.stages[si];
            if (const auto* fs = std::get_if<FourierStage>(&st)) {
                const SlitGeometry* next_slits = nullptr;
                if (si + 1 < ch2.stages.size())
                    if (const auto* ms = std::get_if<MaskStage>(&ch2.stages[si + 1]))
                        next_slits = std::get_if<SlitGeometry>(&ms->mask);
                if (si + 1 == ch2.stages.size()) {
                    f = apply_fourier_stage_to(f, *fs, m.screen);
                } else if (next_slits) {
                    const double extent =
                        0.5 * (next_slits->center_separation + next_slits->slit_width);
                    f = apply_fourier_stage_to(
                        f, *fs, Axis::centered(1.25 * extent, m.slit_plane_samples));
                } else {
                    f = apply_fourier_stage(f, *fs);
                }
            } else if (const auto* im = std::get_if<ImagingStage>(&st)) {
                f = apply_imaging_stage(f, *im);
            } else {
                f = apply_mask(f, std::get<MaskStage>(st).mask);
            }
        }

        FringeScan scan;
        scan.detector1_position = p;
        scan.positions.resize(m.screen.count);
        scan.intensities.resize(m.screen.count);
        for (std::size_t j = 0; j < m.screen.count; ++j) {
            scan.positions[j] = m.screen[j];
            scan.intensities[j] = std::norm(f.at(j));
        }
        scan.meta["detector1_input_plane"] = std::to_string(p_in);
        if (auto it = f.meta.find("surviving_norm"); it != f.meta.end())
            scan.meta["surviving_norm"] = it->second;
        scans.push_back(std::move(scan));
    }
    return scans;
}

}  // namespace nlv
