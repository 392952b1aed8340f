// lambda_cpt: command-line front end.
//
//   lambda_cpt simulate  --config run.cfg [--out DIR]
//   lambda_cpt steady    --config run.cfg
//   lambda_cpt sweep     --config run.cfg [--out DIR]
//   lambda_cpt dressed   --config run.cfg
//   lambda_cpt scenarios --list | --run NAME|all [--out DIR]
//
// Exit codes: 0 ok, 1 assertion failure, 2 config or validation error,
// 3 numeric failure.

#include <CLI11.hpp>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include "lambda_cpt/config.hpp"
#include "lambda_cpt/dressed.hpp"
#include "lambda_cpt/emit.hpp"
#include "lambda_cpt/errors.hpp"
#include "lambda_cpt/scenarios.hpp"
#include "lambda_cpt/steady.hpp"

namespace fs = std::filesystem;
using namespace lambda_cpt;

namespace {

enum ExitCode { kOk = 0, kAssertionFailed = 1, kConfigError = 2, kNumericError = 3 };

std::ofstream open_output(const fs::path& path) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path);
    if (!out) throw ValidationError("cannot write '" + path.string() + "'");
    return out;
}

fs::path output_dir(const RunConfig& cfg, const std::string& override_dir) {
    return override_dir.empty() ? fs::path(cfg.output.dir) : fs::path(override_dir);
}

int run_simulate(const RunConfig& cfg, const std::string& out_dir) {
    const Trajectory traj = integrate(cfg.params, cfg.initial, cfg.integrator);
    const fs::path dir = output_dir(cfg, out_dir);
    {
        std::ofstream csv = open_output(dir / cfg.output.csv);
        write_trajectory_csv(csv, cfg.params, traj);
    }
    nlohmann::json summary = trajectory_summary(cfg.params, traj);
    summary["initial"] = cfg.initial_label;
    summary["uniqueness"] = to_json(uniqueness(cfg.params));
    {
        std::ofstream json = open_output(dir / cfg.output.json);
        json << summary.dump(2) << '\n';
    }
    for (const auto& w : traj.warnings) std::cerr << "warning: " << w << '\n';
    std::cout << "wrote " << (dir / cfg.output.csv).string() << " and "
              << (dir / cfg.output.json).string() << '\n';
    return kOk;
}

int run_steady(const RunConfig& cfg) {
    nlohmann::json out;
    out["params"] = to_json(cfg.params);
    out["uniqueness"] = to_json(uniqueness(cfg.params));
    if (auto predicted = predict_steady(cfg.params, cfg.initial)) {
        out["steady_state"] = to_json(*predicted);
    } else {
        IntegratorConfig ic = cfg.integrator;
        ic.stop_at_convergence = true;
        const Trajectory traj = integrate(cfg.params, cfg.initial, ic);
        SteadyStateReport report{traj.final_sample().state, Provenance::Integrated,
                                 classify(traj.final_sample().state), std::nullopt};
        out["steady_state"] = to_json(report);
        out["converged_at"] = traj.converged_at ? nlohmann::json(*traj.converged_at)
                                                : nlohmann::json(nullptr);
        out["warnings"] = traj.warnings;
    }
    std::cout << out.dump(2) << '\n';
    return kOk;
}

unsigned thread_cap() {
    if (const char* env = std::getenv("LAMBDA_CPT_THREADS")) {
        try {
            const int n = std::stoi(env);
            if (n > 0) return static_cast<unsigned>(n);
        } catch (const std::exception&) {
        }
        throw ValidationError("LAMBDA_CPT_THREADS must be a positive integer");
    }
    return 0;
}

int run_sweep(const RunConfig& cfg, const std::string& out_dir) {
    const auto rows = sweep(cfg.sweep_grid(), cfg.initial, cfg.integrator, {thread_cap()});
    const fs::path path = output_dir(cfg, out_dir) / "sweep.csv";
    {
        std::ofstream csv = open_output(path);
        write_sweep_csv(csv, rows);
    }
    const auto multi = std::count_if(rows.begin(), rows.end(),
                                     [](const SweepRow& r) { return r.multi_steady; });
    std::cout << "wrote " << path.string() << " (" << rows.size() << " points, " << multi
              << " without a unique steady state)\n";
    return kOk;
}

int run_dressed(const RunConfig& cfg) {
    const double r1 = cfg.dressed_r1.value_or(cfg.params.r1());
    const double r2 = cfg.dressed_r2.value_or(cfg.params.r2());
    const DressedBasis basis(r1, r2);
    nlohmann::json out;
    out["basis"] = {{"r1", r1}, {"r2", r2}};
    out["initial_dressed"] = to_json(to_dressed(basis, cfg.initial));
    if (cfg.params.parallel_resonant() && cfg.params.r1() + cfg.params.r2() > 0.0) {
        out["rates"] = to_json(dressed_rates(cfg.params, cfg.initial));
        out["decay_rates"] = to_json(dressed_decay_rates(cfg.params));
    }
    std::cout << out.dump(2) << '\n';
    return kOk;
}

int run_scenarios(bool list, const std::string& name, const std::string& out_dir,
                  const std::string& method) {
    const auto all = builtin_scenarios();
    if (list || name.empty()) {
        for (const auto& s : all) std::cout << s.name << "  " << s.description << '\n';
        return kOk;
    }
    IntegratorConfig ic;
    if (method == "rk45") ic.method = Method::AdaptiveRK45;

    std::vector<ScenarioSpec> chosen;
    if (name == "all") {
        chosen = all;
    } else if (auto spec = find_scenario(name)) {
        chosen.push_back(*spec);
    } else {
        throw ConfigError(0, 0, "unknown scenario '" + name + "'");
    }

    bool all_passed = true;
    nlohmann::json report = nlohmann::json::array();
    for (const auto& spec : chosen) {
        const ScenarioResult r = run_scenario(spec, ic);
        all_passed = all_passed && r.passed();
        std::cout << (r.passed() ? "PASS " : "FAIL ") << r.name << '\n';
        for (const auto& o : r.outcomes) {
            std::cout << "  " << (o.passed ? "ok   " : "FAIL ") << o.label;
            if (!o.detail.empty()) std::cout << "  (" << o.detail << ')';
            std::cout << '\n';
        }
        report.push_back(to_json(r));
        if (!out_dir.empty()) {
            std::ofstream csv = open_output(fs::path(out_dir) / (spec.name + ".csv"));
            write_trajectory_csv(csv, spec.params, r.trajectory);
        }
    }
    if (!out_dir.empty()) {
        std::ofstream json = open_output(fs::path(out_dir) / "scenarios.json");
        json << report.dump(2) << '\n';
    }
    return all_passed ? kOk : kAssertionFailed;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Three-level Lambda atom under incoherent pumping"};
    app.require_subcommand(1);

    std::string config_path, out_dir, scenario_name, method = "rk4";
    bool list = false;

    auto* simulate = app.add_subcommand("simulate", "integrate the master equation");
    simulate->add_option("--config", config_path, "config file")->required();
    simulate->add_option("--out", out_dir, "output directory (overrides output.dir)");

    auto* steady = app.add_subcommand("steady", "steady state and uniqueness report");
    steady->add_option("--config", config_path, "config file")->required();

    auto* sweep_cmd = app.add_subcommand("sweep", "steady states over a parameter grid");
    sweep_cmd->add_option("--config", config_path, "config file")->required();
    sweep_cmd->add_option("--out", out_dir, "output directory (overrides output.dir)");

    auto* dressed = app.add_subcommand("dressed", "dark/bright basis quantities");
    dressed->add_option("--config", config_path, "config file")->required();

    auto* scenarios = app.add_subcommand("scenarios", "list or run built-in scenarios");
    auto* list_flag = scenarios->add_flag("--list", list, "list scenario names");
    scenarios->add_option("--run", scenario_name, "scenario name or 'all'")->excludes(list_flag);
    scenarios->add_option("--out", out_dir, "write per-scenario CSV and a JSON report here");
    scenarios->add_option("--method", method, "integrator method")
        ->check(CLI::IsMember({"rk4", "rk45"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kConfigError;
    }

    try {
        if (scenarios->parsed()) return run_scenarios(list, scenario_name, out_dir, method);

        RunConfig cfg = load_config(config_path);
        if (simulate->parsed()) {
            cfg.command = Command::Simulate;
            return run_simulate(cfg, out_dir);
        }
        if (steady->parsed()) {
            cfg.command = Command::Steady;
            return run_steady(cfg);
        }
        if (sweep_cmd->parsed()) {
            cfg.command = Command::Sweep;
            return run_sweep(cfg, out_dir);
        }
        cfg.command = Command::Dressed;
        return run_dressed(cfg);
    } catch (const NumericError& e) {
        std::cerr << "numeric error: " << e.what() << '\n';
        return kNumericError;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kConfigError;
    } catch (const std::filesystem::filesystem_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kConfigError;
    }
}
