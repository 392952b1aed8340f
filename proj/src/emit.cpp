#include "lambda_cpt/emit.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <limits>
#include <ostream>

namespace lambda_cpt {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// JSON has no NaN; absent values become null.
nlohmann::json number_or_null(double x) {
    return std::isfinite(x) ? nlohmann::json(x) : nlohmann::json(nullptr);
}

nlohmann::json optional_number(const std::optional<double>& x) {
    return x ? number_or_null(*x) : nlohmann::json(nullptr);
}

} // namespace

std::string format_number(double x) {
    if (!std::isfinite(x)) return "nan";
    std::array<char, 48> buf{};
    auto [ptr, ec] =
        std::to_chars(buf.data(), buf.data() + buf.size(), x, std::chars_format::scientific, 11);
    return std::string(buf.data(), ptr);
}

void write_trajectory_csv(std::ostream& os, const SystemParams& params, const Trajectory& traj) {
    std::optional<DressedBasis> basis;
    if (params.r1() + params.r2() > 0.0) basis.emplace(params.r1(), params.r2());

    os << kTrajectoryHeader << '\n';
    for (const Sample& s : traj.samples) {
        double dd = kNaN, bb = kNaN;
        if (basis) {
            const Matrix3c d = to_dressed(*basis, s.state.matrix());
            dd = d(kDark, kDark).real();
            bb = d(kBright, kBright).real();
        }
        const ObservableSet& o = s.obs;
        const std::array<double, 13> row = {
            s.t,      o.rho_aa, o.rho_bb, o.rho_cc,
            o.re_bc,  o.im_bc,  o.inv_ab, o.inv_ac,
            dd,       bb,       s.diag.c0.value_or(kNaN),
            s.diag.trace_error, s.diag.min_eigenvalue};
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) os << ',';
            os << format_number(row[i]);
        }
        os << '\n';
    }
}

void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows) {
    os << kSweepHeader << '\n';
    for (const SweepRow& r : rows) {
        const SystemParams& p = r.params;
        const ObservableSet o = observables(r.report.state);
        os << format_number(p.r1()) << ',' << format_number(p.r2()) << ','
           << format_number(p.gamma1()) << ',' << format_number(p.gamma2()) << ','
           << format_number(p.p()) << ',' << format_number(p.delta()) << ','
           << format_number(r.uniqueness.discriminant) << ',' << r.uniqueness.null_space_dim
           << ',' << (r.multi_steady ? "true" : "false") << ','
           << to_string(r.report.provenance) << ',' << to_string(r.report.classification) << ','
           << format_number(o.rho_aa) << ',' << format_number(o.rho_bb) << ','
           << format_number(o.rho_cc) << ',' << format_number(o.re_bc) << ','
           << format_number(o.im_bc) << '\n';
    }
}

nlohmann::json to_json(const SystemParams& p) {
    return {{"r1", p.r1()},         {"r2", p.r2()}, {"gamma1", p.gamma1()},
            {"gamma2", p.gamma2()}, {"p", p.p()},   {"delta", p.delta()}};
}

nlohmann::json to_json(const DensityMatrix& rho) {
    nlohmann::json re = nlohmann::json::array();
    nlohmann::json im = nlohmann::json::array();
    for (int i = 0; i < 3; ++i) {
        nlohmann::json re_row = nlohmann::json::array();
        nlohmann::json im_row = nlohmann::json::array();
        for (int j = 0; j < 3; ++j) {
            re_row.push_back(rho(i, j).real());
            im_row.push_back(rho(i, j).imag());
        }
        re.push_back(re_row);
        im.push_back(im_row);
    }
    nlohmann::json out = {{"basis", std::string(to_string(rho.basis()))},
                          {"real", re},
                          {"imag", im},
                          {"trace_error", rho.trace_error()},
                          {"min_eigenvalue", rho.min_eigenvalue()}};
    // Observables are labelled by bare levels.
    if (rho.basis() == Basis::Bare) {
        const auto values = observables(rho).values();
        nlohmann::json obs;
        for (std::size_t i = 0; i < values.size(); ++i) {
            obs[std::string(ObservableSet::kNames[i])] = values[i];
        }
        out["observables"] = obs;
    }
    return out;
}

nlohmann::json to_json(const SteadyStateReport& r) {
    return {{"state", to_json(r.state)},
            {"provenance", std::string(to_string(r.provenance))},
            {"classification", std::string(to_string(r.classification))},
            {"c0", optional_number(r.c0)}};
}

nlohmann::json to_json(const UniquenessReport& u) {
    return {{"discriminant", u.discriminant},
            {"product", u.product},
            {"unique", u.unique},
            {"null_space_dim", u.null_space_dim},
            {"analytic_condition_applies", u.analytic_condition_applies},
            {"agrees", u.agrees},
            {"diagnostic", u.diagnostic}};
}

nlohmann::json to_json(const DressedRateSet& r) {
    return {{"dark", r.dark},
            {"bright", r.bright},
            {"upper", r.upper},
            {"dark_bright", {{"re", r.dark_bright.real()}, {"im", r.dark_bright.imag()}}}};
}

nlohmann::json to_json(const DressedDecayRates& r) {
    return {{"dark", r.dark},
            {"bright", r.bright},
            {"upper", r.upper},
            {"dark_bright", r.dark_bright}};
}

nlohmann::json trajectory_summary(const SystemParams& params, const Trajectory& traj) {
    const Sample& last = traj.final_sample();
    double worst_trace = 0.0, worst_herm = 0.0, min_eig = last.diag.min_eigenvalue;
    for (const Sample& s : traj.samples) {
        worst_trace = std::max(worst_trace, s.diag.trace_error);
        worst_herm = std::max(worst_herm, s.diag.hermiticity_error);
        min_eig = std::min(min_eig, s.diag.min_eigenvalue);
    }
    return {{"params", to_json(params)},
            {"time_unit", params.gamma1() > 0.0   ? "1/gamma1"
                           : params.max_rate() > 0.0 ? "1/max_rate"
                                                     : "1"},
            {"final_time", last.t},
            {"samples", traj.samples.size()},
            {"accepted_steps", traj.accepted_steps},
            {"rejected_steps", traj.rejected_steps},
            {"converged_at", optional_number(traj.converged_at)},
            {"convergence_time", optional_number(convergence_time(traj, kDefaultSettleEpsilon))},
            {"final_state", to_json(last.state)},
            {"classification", std::string(to_string(classify(last.state)))},
            {"diagnostics",
             {{"max_trace_error", worst_trace},
              {"max_hermiticity_error", worst_herm},
              {"min_eigenvalue", min_eig}}},
            {"warnings", traj.warnings}};
}

nlohmann::json to_json(const ScenarioResult& r) {
    nlohmann::json assertions = nlohmann::json::array();
    for (const AssertionOutcome& o : r.outcomes) {
        assertions.push_back({{"label", o.label}, {"passed", o.passed}, {"detail", o.detail}});
    }
    return {{"name", r.name},
            {"passed", r.passed()},
            {"steady_state", to_json(r.integrated)},
            {"predicted", r.predicted ? to_json(*r.predicted) : nlohmann::json(nullptr)},
            {"discrepancy", optional_number(r.discrepancy)},
            {"convergence_time", optional_number(r.convergence_time)},
            {"assertions", assertions},
            {"warnings", r.trajectory.warnings}};
}

} // namespace lambda_cpt
