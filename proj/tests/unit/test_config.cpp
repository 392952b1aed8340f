#include <gtest/gtest.h>

#include "lambda_cpt/config.hpp"
#include "lambda_cpt/errors.hpp"
#include "lambda_cpt/scenarios.hpp"
#include "oracles.hpp"

using namespace lambda_cpt;

namespace {

// Expects ConfigError at the given position.
void expect_config_error(const std::string& text, int line, int column) {
    try {
        parse_config(text);
        FAIL() << "expected ConfigError for:\n" << text;
    } catch (const ConfigError& e) {
        EXPECT_EQ(e.line(), line) << e.what();
        EXPECT_EQ(e.column(), column) << e.what();
    }
}

} // namespace

TEST(Config, DefaultsFromEmptyText) {
    const RunConfig c = parse_config("# nothing\n\n");
    EXPECT_EQ(c.command, Command::Simulate);
    EXPECT_EQ(c.initial_label, "case1_b");
    EXPECT_EQ(c.integrator, IntegratorConfig{});
}

TEST(Config, ParsesEveryKey) {
    const RunConfig c = parse_config(R"(
command = sweep
params.r1 = 2.5      # pump
params.r2 = 2.5
params.gamma1 = 1
params.gamma2 = 1
params.p = 0.5
params.delta = 0.25
initial = case2_upper
integrator.method = rk45
integrator.step = 0.01
integrator.abs_tol = 1e-12
integrator.rel_tol = 1e-9
integrator.horizon = 40
integrator.convergence_tol = 1e-11
integrator.sample_stride = 10
integrator.stop_at_convergence = false
output.dir = out
output.csv = a.csv
output.json = b.json
sweep.r1 = 0.1, 1,2
sweep.gamma2 = 3
dressed.r1 = 1
dressed.r2 = 2
)");
    EXPECT_EQ(c.command, Command::Sweep);
    EXPECT_EQ(c.params, SystemParams(2.5, 2.5, 1, 1, 0.5, 0.25));
    EXPECT_EQ(c.initial_label, "case2_upper");
    EXPECT_EQ(c.integrator.method, Method::AdaptiveRK45);
    EXPECT_EQ(c.integrator.sample_stride, 10);
    EXPECT_FALSE(c.integrator.stop_at_convergence);
    EXPECT_EQ(c.output.dir, "out");
    EXPECT_EQ(c.sweep.r1, (std::vector<double>{0.1, 1, 2}));
    EXPECT_EQ(c.sweep_grid().size(), 3u);
    EXPECT_EQ(c.dressed_r2, 2.0);
}

TEST(Config, ScenarioPresetWithOverride) {
    const RunConfig c = parse_config("scenario = fig2b\nparams.gamma2 = 2\n");
    const ScenarioSpec spec = *find_scenario("fig2b");
    EXPECT_EQ(c.params.r1(), spec.params.r1());
    EXPECT_EQ(c.params.gamma2(), 2.0);
    EXPECT_EQ(c.integrator.horizon, spec.horizon);
    EXPECT_EQ(c.initial.matrix(), spec.initial.matrix());
}

TEST(Config, ExplicitInitialEntries) {
    const RunConfig c = parse_config(
        "initial.aa = 0\ninitial.bb = 0.5\ninitial.cc = 0.5\ninitial.bc_re = -0.5\n");
    EXPECT_EQ(c.initial_label, "case3");
    const RunConfig d = parse_config("initial.bb = 0.5\ninitial.cc = 0.5\ninitial.bc_im = 0.1\n");
    EXPECT_EQ(d.initial_label, "explicit");
    EXPECT_DOUBLE_EQ(d.initial(kC, kB).imag(), -0.1);
}

TEST(Config, SyntaxErrorsCarryPosition) {
    expect_config_error("params.r1 = 1\n  bogus line\n", 2, 3);
    expect_config_error("params.r1 = 1\nparams.r3 = 1\n", 2, 1);
    expect_config_error("params.r1 = 1\nparams.r1 = 2\n", 2, 1);
    expect_config_error("params.r1 = abc\n", 1, 13);
    expect_config_error("params.r1 =\n", 1, 12);
    expect_config_error("sweep.r1 = 1, x\n", 1, 15);
    expect_config_error("integrator.method = euler\n", 1, 21);
    expect_config_error("scenario = fig9\n", 1, 12);
    expect_config_error("integrator.stop_at_convergence = yes\n", 1, 34);
}

TEST(Config, InvariantViolationsNameTheInvariant) {
    try {
        parse_config("params.p = 2\n");
        FAIL();
    } catch (const ValidationError& e) {
        EXPECT_NE(std::string(e.what()).find("p ∈ [−1,1]"), std::string::npos);
    }
    try {
        parse_config("initial.bb = 0.5\n");
        FAIL();
    } catch (const ValidationError& e) {
        EXPECT_NE(std::string(e.what()).find("unit trace"), std::string::npos);
    }
    try {
        parse_config("initial.bb = 1.5\ninitial.cc = -0.5\n");
        FAIL();
    } catch (const ValidationError& e) {
        EXPECT_NE(std::string(e.what()).find("positive semidefinite"), std::string::npos);
    }
    EXPECT_THROW(parse_config("params.r1 = -1\n"), ValidationError);
    EXPECT_THROW(parse_config("integrator.step = 0\n"), ValidationError);
    EXPECT_THROW(parse_config("sweep.r2 = 1, -2\n"), ValidationError);
}

TEST(ConfigProperty, SerializeParseRoundTrip) {
    oracle::Rng rng(51);
    const auto presets = initial_states::names();
    const auto scenarios = builtin_scenarios();
    for (int n = 0; n < 200; ++n) {
        RunConfig c;
        c.command = static_cast<Command>(rng.integer(0, 4));
        if (rng.coin()) c.scenario = scenarios[rng.integer(0, int(scenarios.size()) - 1)].name;
        c.params = SystemParams(rng.uniform(0, 5), rng.uniform(0, 5), rng.uniform(0, 5),
                                rng.uniform(0, 5), rng.uniform(-1, 1), rng.uniform(-3, 3));
        if (rng.coin()) {
            c.initial = DensityMatrix::from_matrix(rng.density());
            c.initial_label = "explicit";
        } else {
            c.initial_label = std::string(presets[rng.integer(0, int(presets.size()) - 1)]);
            c.initial = *initial_states::by_name(c.initial_label);
        }
        c.integrator.method = rng.coin() ? Method::FixedRK4 : Method::AdaptiveRK45;
        c.integrator.step = rng.uniform(1e-4, 1e-1);
        c.integrator.abs_tol = rng.uniform(1e-13, 1e-8);
        c.integrator.rel_tol = rng.uniform(1e-12, 1e-6);
        c.integrator.horizon = rng.uniform(1, 100);
        c.integrator.convergence_norm_tol = rng.uniform(1e-13, 1e-8);
        c.integrator.sample_stride = rng.integer(1, 100);
        c.integrator.stop_at_convergence = rng.coin();
        c.output.dir = "dir" + std::to_string(n);
        for (int k = rng.integer(0, 3); k > 0; --k) c.sweep.r1.push_back(rng.uniform(0, 4));
        for (int k = rng.integer(0, 3); k > 0; --k) c.sweep.gamma2.push_back(rng.uniform(0, 4));
        if (rng.coin()) c.dressed_r1 = rng.uniform(0, 3);
        if (rng.coin()) c.dressed_r2 = rng.uniform(0, 3);

        const std::string text = serialize_config(c);
        const RunConfig back = parse_config(text);
        ASSERT_TRUE(semantically_equal(c, back)) << text;
        ASSERT_EQ(serialize_config(back), text);
    }
}

TEST(Config, CommandNames) {
    for (Command c : {Command::Simulate, Command::Steady, Command::Sweep, Command::Dressed,
                      Command::Scenarios}) {
        EXPECT_EQ(parse_command(to_string(c)), c);
    }
    EXPECT_FALSE(parse_command("run").has_value());
}

TEST(Config, MissingFile) {
    EXPECT_THROW(load_config("/nonexistent/run.cfg"), ConfigError);
}
