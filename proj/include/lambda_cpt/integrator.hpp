// integrator.hpp: time evolution of the master equation.
//
// Two clocks are involved. Reported times and `horizon` are in units of
// 1/gamma1 (falling back to 1/max rate when gamma1 == 0, and to 1 when every
// rate vanishes). The step size `step` is a numerical control expressed in
// units of 1/max(gamma1, gamma2, r1, r2, 1) so it stays stable for any scale.

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "lambda_cpt/core.hpp"

namespace lambda_cpt {

enum class Method { FixedRK4, AdaptiveRK45 };

std::string_view to_string(Method method) noexcept;

struct IntegratorConfig {
    Method method = Method::FixedRK4;
    double step = 1e-3;
    double abs_tol = 1e-10;
    double rel_tol = 1e-8;
    double horizon = 20.0;
    double convergence_norm_tol = 1e-10;
    int sample_stride = 1;
    bool stop_at_convergence = true;

    // Throws ValidationError when step, horizon or a tolerance is not positive.
    void validate() const;

    friend bool operator==(const IntegratorConfig&, const IntegratorConfig&) = default;
};

// Physical length of one reported time unit.
double time_unit(const SystemParams& params) noexcept;

// Physical length of one step unit.
double step_unit(const SystemParams& params) noexcept;

struct SampleDiagnostics {
    double trace_error = 0.0;
    double hermiticity_error = 0.0;
    double min_eigenvalue = 0.0;
    std::optional<double> c0; // only in the symmetric degenerate regime
};

struct Sample {
    double t = 0.0; // units of time_unit()
    DensityMatrix state;
    ObservableSet obs;
    SampleDiagnostics diag;
};

struct Trajectory {
    std::vector<Sample> samples;
    std::optional<double> converged_at;
    double time_unit = 1.0;
    std::size_t accepted_steps = 0;
    std::size_t rejected_steps = 0;
    std::vector<std::string> warnings;

    const Sample& final_sample() const { return samples.back(); }
};

/// Integrates from `initial` over [0, config.horizon].
///
/// Convergence is declared once the max-entry norm of the right-hand side
/// stays below `convergence_norm_tol` for 10 consecutive accepted steps;
/// `converged_at` records the start of that run. With
/// `stop_at_convergence` the trajectory ends there.
///
/// Throws NumericError on step-size underflow or a non-finite state.
Trajectory integrate(const SystemParams& params, const DensityMatrix& initial,
                     const IntegratorConfig& config = {});

// Single classical RK4 step of physical length h, re-symmetrized.
DensityMatrix step_rk4(const SystemParams& params, const DensityMatrix& rho, double h);

struct StepTolerances {
    double abs_tol = 1e-10;
    double rel_tol = 1e-8;
};

struct AdaptiveStep {
    DensityMatrix state;   // unchanged when rejected
    double error_estimate; // scaled; accepted when <= 1
    double h_next;         // < h on rejection
    bool accepted;
};

// Dormand-Prince 5(4) step of physical length h with error control.
AdaptiveStep step_rk45(const SystemParams& params, const DensityMatrix& rho, double h,
                       const StepTolerances& tols = {});

/// First sample time after which every observable stays within `epsilon` of
/// its value at the final sample. Empty when only the final sample qualifies.
std::optional<double> convergence_time(const Trajectory& traj, double epsilon);

} // namespace lambda_cpt
