#include "lambda_cpt/integrator.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace lambda_cpt {

namespace {

constexpr int kConvergenceStreak = 10;
constexpr double kPsdWarnThreshold = -1e-6;
constexpr double kFinalTraceTol = 1e-9;

Matrix3c hermitian_part(const Matrix3c& m) {
    Matrix3c h = 0.5 * (m + m.adjoint());
    return h;
}

Matrix3c rk4_update(const SystemParams& params, const Matrix3c& rho, const Matrix3c& k1,
                    double h) {
    const Matrix3c k2 = apply_master_equation(params, rho + 0.5 * h * k1);
    const Matrix3c k3 = apply_master_equation(params, rho + 0.5 * h * k2);
    const Matrix3c k4 = apply_master_equation(params, rho + h * k3);
    return hermitian_part(rho + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4));
}

// Dormand-Prince 5(4) tableau.
namespace dp {
constexpr double a21 = 1.0 / 5.0;
constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0, a53 = 64448.0 / 6561.0,
                 a54 = -212.0 / 729.0;
constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0, a63 = 46732.0 / 5247.0,
                 a64 = 49.0 / 176.0, a65 = -5103.0 / 18656.0;
constexpr double b1 = 35.0 / 384.0, b3 = 500.0 / 1113.0, b4 = 125.0 / 192.0,
                 b5 = -2187.0 / 6784.0, b6 = 11.0 / 84.0;
// b - b* (fifth minus fourth order weights)
constexpr double e1 = 71.0 / 57600.0, e3 = -71.0 / 16695.0, e4 = 71.0 / 1920.0,
                 e5 = -17253.0 / 339200.0, e6 = 22.0 / 525.0, e7 = -1.0 / 40.0;
} // namespace dp

struct Rk45Result {
    Matrix3c state;
    Matrix3c derivative; // FSAL: rhs at `state`
    double error;
};

Rk45Result dp_update(const SystemParams& params, const Matrix3c& y, const Matrix3c& k1,
                     double h, const StepTolerances& tols) {
    using namespace dp;
    const Matrix3c k2 = apply_master_equation(params, y + h * (a21 * k1));
    const Matrix3c k3 = apply_master_equation(params, y + h * (a31 * k1 + a32 * k2));
    const Matrix3c k4 = apply_master_equation(params, y + h * (a41 * k1 + a42 * k2 + a43 * k3));
    const Matrix3c k5 =
        apply_master_equation(params, y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
    const Matrix3c k6 = apply_master_equation(
        params, y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
    const Matrix3c y5 =
        hermitian_part(y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6));
    const Matrix3c k7 = apply_master_equation(params, y5);
    const Matrix3c err = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);

    double scaled = 0.0;
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            const double scale =
                tols.abs_tol + tols.rel_tol * std::max(std::abs(y(i, j)), std::abs(y5(i, j)));
            scaled = std::max(scaled, std::abs(err(i, j)) / scale);
        }
    }
    return {y5, k7, scaled};
}

double next_step(double h, double error) {
    if (error == 0.0) {
        return 5.0 * h;
    }
    const double factor = 0.9 * std::pow(error, -0.2);
    return h * std::clamp(factor, 0.2, 5.0);
}

void require_finite(const Matrix3c& m, double t) {
    if (!m.allFinite()) {
        throw NumericError("non-finite state at t = " + std::to_string(t));
    }
}

class TrajectoryRecorder {
public:
    TrajectoryRecorder(const SystemParams& params, double unit)
        : degenerate_(params.symmetric_degenerate()) {
        traj_.time_unit = unit;
    }

    void record(double t_phys, const Matrix3c& rho) {
        const DensityMatrix state = DensityMatrix::unchecked(rho);
        SampleDiagnostics diag;
        diag.trace_error = state.trace_error();
        diag.hermiticity_error = state.hermiticity_error();
        diag.min_eigenvalue = state.min_eigenvalue();
        if (degenerate_) {
            diag.c0 = state.nondecaying_combination();
        }
        const double t = t_phys / traj_.time_unit;
        if (diag.min_eigenvalue < kPsdWarnThreshold && !psd_warned_) {
            traj_.warnings.push_back("density matrix lost positivity at t = " +
                                     std::to_string(t) +
                                     " (min eigenvalue " + std::to_string(diag.min_eigenvalue) +
                                     ")");
            psd_warned_ = true;
        }
        traj_.samples.push_back({t, state, observables(state), diag});
    }

    Trajectory& trajectory() noexcept { return traj_; }

private:
    Trajectory traj_;
    bool degenerate_;
    bool psd_warned_ = false;
};

// Tracks consecutive small-rhs steps.
class ConvergenceMonitor {
public:
    explicit ConvergenceMonitor(double tol) : tol_(tol) {}

    // Returns true when the streak is complete.
    bool observe(double t_phys, const Matrix3c& derivative) {
        if (derivative.cwiseAbs().maxCoeff() < tol_) {
            if (streak_ == 0) {
                start_ = t_phys;
            }
            ++streak_;
        } else {
            streak_ = 0;
        }
        if (streak_ >= kConvergenceStreak && !done_) {
            converged_ = start_;
            done_ = true;
        }
        return done_;
    }

    std::optional<double> converged_at() const noexcept {
        return done_ ? std::optional<double>(converged_) : std::nullopt;
    }

private:
    double tol_;
    int streak_ = 0;
    double start_ = 0.0;
    double converged_ = 0.0;
    bool done_ = false;
};

} // namespace

std::string_view to_string(Method method) noexcept {
    return method == Method::FixedRK4 ? "rk4" : "rk45";
}

void IntegratorConfig::validate() const {
    if (!(step > 0.0) || !std::isfinite(step)) {
        throw ValidationError("integrator step must be > 0");
    }
    if (!(horizon > 0.0) || !std::isfinite(horizon)) {
        throw ValidationError("integrator horizon must be > 0");
    }
    if (!(abs_tol > 0.0) || !(rel_tol > 0.0) || !(convergence_norm_tol > 0.0)) {
        throw ValidationError("integrator tolerances must be > 0");
    }
    if (sample_stride < 1) {
        throw ValidationError("sample_stride must be >= 1");
    }
}

double time_unit(const SystemParams& params) noexcept {
    if (params.gamma1() > 0.0) {
        return 1.0 / params.gamma1();
    }
    const double fastest = params.max_rate();
    return fastest > 0.0 ? 1.0 / fastest : 1.0;
}

double step_unit(const SystemParams& params) noexcept {
    return 1.0 / std::max(1.0, params.max_rate());
}

DensityMatrix step_rk4(const SystemParams& params, const DensityMatrix& rho, double h) {
    if (rho.basis() != Basis::Bare) {
        throw BasisMismatch("step_rk4 expects a bare-basis state");
    }
    if (!(h > 0.0)) {
        throw ValidationError("step must be > 0");
    }
    const Matrix3c k1 = apply_master_equation(params, rho.matrix());
    return DensityMatrix::unchecked(rk4_update(params, rho.matrix(), k1, h));
}

AdaptiveStep step_rk45(const SystemParams& params, const DensityMatrix& rho, double h,
                       const StepTolerances& tols) {
    if (rho.basis() != Basis::Bare) {
        throw BasisMismatch("step_rk45 expects a bare-basis state");
    }
    if (!(h > 0.0)) {
        throw ValidationError("step must be > 0");
    }
    const Matrix3c k1 = apply_master_equation(params, rho.matrix());
    const Rk45Result r = dp_update(params, rho.matrix(), k1, h, tols);
    const double h_next = next_step(h, r.error);
    if (r.error <= 1.0) {
        return {DensityMatrix::unchecked(r.state), r.error, h_next, true};
    }
    return {rho, r.error, std::min(h_next, 0.9 * h), false};
}

Trajectory integrate(const SystemParams& params, const DensityMatrix& initial,
                     const IntegratorConfig& config) {
    config.validate();
    if (initial.basis() != Basis::Bare) {
        throw BasisMismatch("integrate expects a bare-basis initial state");
    }
    const DensityMatrix checked = DensityMatrix::from_matrix(initial.matrix());

    const double unit = time_unit(params);
    const double t_end = config.horizon * unit;
    const double h0 = config.step * step_unit(params);

    TrajectoryRecorder recorder(params, unit);
    ConvergenceMonitor monitor(config.convergence_norm_tol);

    Matrix3c rho = checked.matrix();
    Matrix3c f = apply_master_equation(params, rho);
    recorder.record(0.0, rho);
    double t = 0.0;
    int since_sample = 0;
    std::size_t accepted = 0;
    std::size_t rejected = 0;
    bool recorded_last = true;

    auto after_step = [&](double t_new) {
        ++accepted;
        ++since_sample;
        recorded_last = false;
        if (since_sample >= config.sample_stride) {
            recorder.record(t_new, rho);
            since_sample = 0;
            recorded_last = true;
        }
    };

    bool stopped = false;
    if (config.method == Method::FixedRK4) {
        const auto n = static_cast<std::size_t>(std::max(1.0, std::ceil(t_end / h0 - 1e-9)));
        const double h = t_end / static_cast<double>(n);
        for (std::size_t k = 0; k < n; ++k) {
            t = static_cast<double>(k) * h;
            if (monitor.observe(t, f) && config.stop_at_convergence) {
                stopped = true;
                break;
            }
            rho = rk4_update(params, rho, f, h);
            t = (k + 1 == n) ? t_end : static_cast<double>(k + 1) * h;
            require_finite(rho, t);
            f = apply_master_equation(params, rho);
            after_step(t);
        }
    } else {
        const StepTolerances tols{config.abs_tol, config.rel_tol};
        const double h_min = 1e-12 * step_unit(params);
        double h = std::min(h0, t_end);
        while (t < t_end) {
            if (monitor.observe(t, f) && config.stop_at_convergence) {
                stopped = true;
                break;
            }
            bool last = false;
            if (t + h >= t_end) {
                h = t_end - t;
                last = true;
            }
            for (;;) {
                const Rk45Result r = dp_update(params, rho, f, h, tols);
                if (r.error <= 1.0) {
                    rho = r.state;
                    f = r.derivative;
                    t = last ? t_end : t + h;
                    require_finite(rho, t);
                    after_step(t);
                    h = next_step(h, r.error);
                    break;
                }
                ++rejected;
                last = false;
                h = std::min(next_step(h, r.error), 0.9 * h);
                if (h < h_min) {
                    throw NumericError("step-size underflow at t = " + std::to_string(t / unit) +
                                       "; the system may be stiff for these rates");
                }
            }
        }
    }
    if (!stopped) {
        monitor.observe(t, f);
    }
    if (!recorded_last) {
        recorder.record(t, rho);
    }

    Trajectory traj = std::move(recorder.trajectory());
    traj.accepted_steps = accepted;
    traj.rejected_steps = rejected;
    if (auto c = monitor.converged_at()) {
        traj.converged_at = *c / unit;
    }
    if (traj.final_sample().diag.trace_error > kFinalTraceTol) {
        throw NumericError("trace drifted by " +
                           std::to_string(traj.final_sample().diag.trace_error));
    }
    return traj;
}

std::optional<double> convergence_time(const Trajectory& traj, double epsilon) {
    if (traj.samples.empty()) {
        return std::nullopt;
    }
    const auto final_values = traj.final_sample().obs.values();
    std::ptrdiff_t last_outside = -1;
    for (std::size_t i = 0; i < traj.samples.size(); ++i) {
        const auto v = traj.samples[i].obs.values();
        for (std::size_t k = 0; k < v.size(); ++k) {
            if (std::abs(v[k] - final_values[k]) > epsilon) {
                last_outside = static_cast<std::ptrdiff_t>(i);
                break;
            }
        }
    }
    const auto first_inside = static_cast<std::size_t>(last_outside + 1);
    if (last_outside >= 0 && first_inside + 1 >= traj.samples.size()) {
        return std::nullopt;
    }
    return traj.samples[first_inside].t;
}

} // namespace lambda_cpt
