// scenarios.hpp: named presets with expected outcomes, and parameter sweeps.

#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "lambda_cpt/core.hpp"
#include "lambda_cpt/integrator.hpp"
#include "lambda_cpt/steady.hpp"

namespace lambda_cpt {

enum class Observable { RhoAA, RhoBB, RhoCC, InvAB, InvAC, ReBC, ImBC };

std::string_view to_string(Observable o) noexcept;
double value_of(const ObservableSet& obs, Observable o) noexcept;

namespace expect {

// Final-sample observable within `tol` of `value`.
struct SteadyValue {
    Observable field;
    double value;
    double tol;
};

struct Classification {
    SteadyClass cls;
};

// Every sample equals the initial state to `tol` (max-entry norm).
struct ConstantState {
    double tol;
};

// Sign of both inversions (rho_aa - rho_bb, rho_aa - rho_cc) at the final sample.
struct InversionSign {
    bool positive;
};

// |C0(t) - value| <= tol at every sample.
struct ConservedC0 {
    double value;
    double tol;
};

// rho_DD(t_{k+1}) >= rho_DD(t_k) - slack for every consecutive sample pair.
struct DarkMonotone {
    double slack;
};

struct ConvergenceTime {
    double epsilon;
    double value;
    double tol;
};

// Integrated final state equals the closed-form prediction to `tol`.
struct MatchesPrediction {
    double tol;
};

// Max deviation from the initial state exceeds `min_deviation` by time `within`.
struct LeavesInitial {
    double min_deviation;
    double within;
};

} // namespace expect

using Expectation =
    std::variant<expect::SteadyValue, expect::Classification, expect::ConstantState,
                 expect::InversionSign, expect::ConservedC0, expect::DarkMonotone,
                 expect::ConvergenceTime, expect::MatchesPrediction, expect::LeavesInitial>;

std::string describe(const Expectation& e);

struct ScenarioSpec {
    std::string name;
    std::string description;
    SystemParams params;
    DensityMatrix initial = DensityMatrix::diagonal(0.0, 1.0, 0.0);
    double horizon = 20.0; // units of 1/gamma1
    std::optional<double> c0;
    std::vector<Expectation> expected;

    // Initial state valid; c0 (when present) equals rho_aa(0) + 2 Re rho_bc(0).
    void validate() const;
};

/// Initial conditions of the three symmetric-regime cases.
namespace initial_states {
DensityMatrix case1_b();     // rho_bb = 1
DensityMatrix case1_c();     // rho_cc = 1
DensityMatrix case1_mixed(); // rho_bb = rho_cc = 1/2, no coherence
DensityMatrix case2_weak();  // weak state, rho_bc = +1/2
DensityMatrix case2_upper(); // rho_aa = 1
DensityMatrix case3();       // robust state, rho_bc = -1/2

// Looks up one of the names above. Empty for unknown names.
std::optional<DensityMatrix> by_name(std::string_view name);
std::vector<std::string_view> names();
} // namespace initial_states

std::vector<ScenarioSpec> builtin_scenarios();
std::optional<ScenarioSpec> find_scenario(std::string_view name);

struct AssertionOutcome {
    std::string label;
    bool passed = false;
    std::string detail;
};

struct ScenarioResult {
    std::string name;
    Trajectory trajectory;
    SteadyStateReport integrated;
    std::optional<SteadyStateReport> predicted;
    std::optional<double> discrepancy; // max-entry |integrated - predicted|
    std::optional<double> convergence_time;
    std::vector<AssertionOutcome> outcomes;

    bool passed() const;
};

inline constexpr double kDefaultSettleEpsilon = 0.01;

/// Integrates the scenario over spec.horizon (config supplies method and
/// tolerances) and evaluates every expectation. Failed expectations are
/// reported, not thrown.
ScenarioResult run_scenario(const ScenarioSpec& spec, const IntegratorConfig& config = {});

struct SweepRow {
    SystemParams params;
    SteadyStateReport report;
    UniquenessReport uniqueness;
    bool multi_steady = false;
};

struct SweepOptions {
    unsigned max_workers = 0; // 0: hardware concurrency
};

/// One steady-state report per grid point, in grid order. Points without a
/// unique steady state are resolved from `initial` (degenerate closed form,
/// or integration to convergence) and flagged `multi_steady`.
std::vector<SweepRow> sweep(const std::vector<SystemParams>& grid, const DensityMatrix& initial,
                            const IntegratorConfig& config = {}, SweepOptions options = {});

// Cartesian product of per-parameter value lists, r1 varying slowest.
std::vector<SystemParams> make_grid(const std::vector<double>& r1, const std::vector<double>& r2,
                                    const std::vector<double>& gamma1,
                                    const std::vector<double>& gamma2, double p = 1.0,
                                    double delta = 0.0);

} // namespace lambda_cpt
