#include "nlvortex/fourier.hpp"

#include <fftw3.h>

#include <cmath>

namespace nlv {

namespace {

void check_edge_decay(const cplx& first, const cplx& last, double reference, double edge_tol) {
    const double edge = std::max(std::abs(first), std::abs(last));
    if (edge > edge_tol * reference)
        throw PhysicsError("aliasing risk: field has not decayed at the grid edge (edge/max = " +
                           std::to_string(edge / reference) + ", tolerance " +
                           std::to_string(edge_tol) + ")");
}

// Continuous FT of one line of samples via FFT plus pre/post phase twists:
//   F(q_m) = dx/sqrt(2 pi) * exp(-i q_m x_0) * FFT[f_j exp(2 pi i c j / N)]_m
// with q_m = (m - c) dq, dq = 2 pi/(N dx), c = floor(N/2).
void transform_line(const cplx* in, cplx* out, std::size_t n, double x0, double dx,
                    fftw_plan plan, cplx* buf) {
    const std::size_t c = n / 2;
    for (std::size_t j = 0; j < n; ++j) {
        const double ang = kTwoPi * static_cast<double>(c) * static_cast<double>(j) /
                           static_cast<double>(n);
        buf[j] = in[j] * std::exp(cplx{0.0, ang});
    }
    fftw_execute_dft(plan, reinterpret_cast<fftw_complex*>(buf),
                     reinterpret_cast<fftw_complex*>(buf));
    const double dq = kTwoPi / (static_cast<double>(n) * dx);
    const double scale = dx / std::sqrt(kTwoPi);
    for (std::size_t m = 0; m < n; ++m) {
        const double q = (static_cast<double>(m) - static_cast<double>(c)) * dq;
        out[m] = scale * std::exp(cplx{0.0, -q * x0}) * buf[m];
    }
}

struct PlanHolder {
    fftw_plan plan = nullptr;
    std::vector<cplx> buf;

    explicit PlanHolder(std::size_t n) : buf(n) {
        plan = fftw_plan_dft_1d(static_cast<int>(n), reinterpret_cast<fftw_complex*>(buf.data()),
                                reinterpret_cast<fftw_complex*>(buf.data()), FFTW_FORWARD,
                                FFTW_ESTIMATE);
        if (!plan) throw std::runtime_error("fftw plan creation failed");
    }
    ~PlanHolder() {
        if (plan) fftw_destroy_plan(plan);
    }
    PlanHolder(const PlanHolder&) = delete;
    PlanHolder& operator=(const PlanHolder&) = delete;
};

}  // namespace

FieldGrid fourier_transform_1d(const FieldGrid& field, double edge_tol) {
    field.validate();
    if (field.dim() != 1) throw ConfigError("fourier_transform_1d expects a 1D field");
    const Axis& ax = field.axes[0];
    check_edge_decay(field.values.front(), field.values.back(), field.max_abs(), edge_tol);

    FieldGrid out = FieldGrid::zeros({ax.conjugate()});
    PlanHolder ph(ax.count);
    transform_line(field.values.data(), out.values.data(), ax.count, ax.min, ax.spacing(),
                   ph.plan, ph.buf.data());
    out.meta = field.meta;
    return out;
}

FieldGrid fourier_transform_axis(const FieldGrid& field, std::size_t axis, double edge_tol) {
    field.validate();
    if (field.dim() == 1) {
        if (axis != 0) throw ConfigError("axis out of range");
        return fourier_transform_1d(field, edge_tol);
    }
    if (axis > 1) throw ConfigError("axis out of range");

    const Axis& ax = field.axes[axis];
    const std::size_t n = ax.count;
    const std::size_t other = field.axes[1 - axis].count;
    const double peak = field.max_abs();

    std::vector<Axis> out_axes = field.axes;
    out_axes[axis] = ax.conjugate();
    FieldGrid out = FieldGrid::zeros(out_axes);

    PlanHolder ph(n);
    std::vector<cplx> line(n), tline(n);
    for (std::size_t i = 0; i < other; ++i) {
        for (std::size_t j = 0; j < n; ++j)
            line[j] = (axis == 1) ? field.at(i, j) : field.at(j, i);
        check_edge_decay(line.front(), line.back(), peak, edge_tol);
        transform_line(line.data(), tline.data(), n, ax.min, ax.spacing(), ph.plan,
                       ph.buf.data());
        for (std::size_t j = 0; j < n; ++j) {
            if (axis == 1)
                out.at(i, j) = tline[j];
            else
                out.at(j, i) = tline[j];
        }
    }
    out.meta = field.meta;
    return out;
}

FieldGrid fourier_transform_to(const FieldGrid& field, const Axis& target, double edge_tol) {
    field.validate();
    target.validate();
    if (field.dim() != 1) throw ConfigError("fourier_transform_to expects a 1D field");
    const Axis& ax = field.axes[0];
    check_edge_decay(field.values.front(), field.values.back(), field.max_abs(), edge_tol);

    FieldGrid out = FieldGrid::zeros({target});
    const double scale = ax.spacing() / std::sqrt(kTwoPi);
    for (std::size_t m = 0; m < target.count; ++m) {
        const double q = target[m];
        cplx acc{0.0, 0.0};
        for (std::size_t j = 0; j < ax.count; ++j)
            acc += field.at(j) * std::exp(cplx{0.0, -q * ax[j]});
        out.at(m) = scale * acc;
    }
    out.meta = field.meta;
    return out;
}

}  // namespace nlv
