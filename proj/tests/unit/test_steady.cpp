#include <gtest/gtest.h>

#include <cmath>

#include "lambda_cpt/errors.hpp"
#include "lambda_cpt/integrator.hpp"
#include "lambda_cpt/steady.hpp"
#include "oracles.hpp"

using namespace lambda_cpt;

namespace {

oracle::Rates rates_of(const SystemParams& p) {
    return {p.r1(), p.r2(), p.gamma1(), p.gamma2(), p.p(), p.delta()};
}

// Parameters with a clearly unique steady state.
SystemParams unique_params(oracle::Rng& rng) {
    for (;;) {
        const SystemParams p(rng.uniform(0.2, 3), rng.uniform(0.2, 3), rng.uniform(0.2, 3),
                             rng.uniform(0.2, 3));
        if (uniqueness(p).discriminant > 0.05) return p;
    }
}

} // namespace

TEST(Coordinates, RoundTrip) {
    oracle::Rng rng(31);
    for (int n = 0; n < 20; ++n) {
        const Matrix3c rho = rng.density();
        EXPECT_LT(max_abs_difference(from_coordinates(to_coordinates(rho)), rho), 1e-15);
        EXPECT_LT((to_coordinates(rho) - oracle::coords(rho)).cwiseAbs().maxCoeff(), 1e-15);
    }
}

TEST(Liouvillian, MatchesProbedOracle) {
    oracle::Rng rng(32);
    for (int n = 0; n < 100; ++n) {
        const SystemParams p(rng.uniform(0, 3), rng.uniform(0, 3), rng.uniform(0, 3),
                             rng.uniform(0, 3), rng.uniform(-1, 1), rng.uniform(-2, 2));
        const Matrix9 diff = build_liouvillian(p).matrix - oracle::generator(rates_of(p));
        ASSERT_LT(diff.cwiseAbs().maxCoeff(), 1e-13) << "sample " << n;
    }
}

TEST(Uniqueness, DiscriminantIsPerfectSquare) {
    oracle::Rng rng(33);
    for (int n = 0; n < 100; ++n) {
        const SystemParams p(rng.uniform(0, 3), rng.uniform(0, 3), rng.uniform(0, 3),
                             rng.uniform(0, 3));
        const double expected = std::pow(std::sqrt(p.r2() * p.gamma1()) -
                                             std::sqrt(p.r1() * p.gamma2()), 2);
        const UniquenessReport u = uniqueness(p);
        ASSERT_NEAR(u.discriminant, expected, 1e-12);
        ASSERT_GE(u.discriminant, -1e-12);
    }
}

TEST(Uniqueness, SymmetricRatesAreDegenerate) {
    const UniquenessReport u = uniqueness(SystemParams::symmetric(1.5, 0.5));
    EXPECT_FALSE(u.unique);
    EXPECT_EQ(u.null_space_dim, 2);
    EXPECT_TRUE(u.agrees);
}

TEST(Uniqueness, ProportionalRatesAreDegenerate) {
    // r2 gamma1 = r1 gamma2 with unequal rates.
    const UniquenessReport u = uniqueness(SystemParams(1, 2, 1.5, 3));
    EXPECT_FALSE(u.unique);
    EXPECT_GE(u.null_space_dim, 2);
    EXPECT_TRUE(u.agrees);
}

TEST(Uniqueness, GenericRatesAreUnique) {
    const UniquenessReport u = uniqueness(SystemParams(1, 3, 2, 0.5));
    EXPECT_TRUE(u.unique);
    EXPECT_EQ(u.null_space_dim, 1);
    EXPECT_TRUE(u.agrees);
    EXPECT_TRUE(u.diagnostic.empty());
}

// One pump switched off: the analytic condition fails, yet the kernel is
// one-dimensional (everything ends in the unpumped level).
TEST(Uniqueness, SinglePumpDisagreementIsReported) {
    const SystemParams p(0, 1, 1, 1);
    const UniquenessReport u = uniqueness(p);
    EXPECT_FALSE(u.unique);
    EXPECT_EQ(u.null_space_dim, 1);
    EXPECT_FALSE(u.agrees);
    EXPECT_FALSE(u.diagnostic.empty());
    const NullSpaceResult ns = null_space_steady(p);
    EXPECT_NEAR(ns.unit_trace_state().bb(), 1.0, 1e-10);
}

TEST(Uniqueness, MisalignedDipolesSkipAnalyticVerdict) {
    const UniquenessReport u = uniqueness(SystemParams(1, 1, 1, 1, 0.5));
    EXPECT_FALSE(u.analytic_condition_applies);
    EXPECT_EQ(u.null_space_dim, 1);
}

TEST(AnalyticCpt, RegimeChecks) {
    EXPECT_THROW(analytic_cpt(SystemParams(1, 2, 1, 1, 0.5)), RegimeError);
    EXPECT_THROW(analytic_cpt(SystemParams(1, 2, 1, 1, 1, 0.1)), RegimeError);
    EXPECT_THROW(analytic_cpt(SystemParams::symmetric(1, 1)), UniquenessViolation);
    EXPECT_THROW(analytic_cpt(SystemParams(0, 1, 1, 1)), UniquenessViolation);
}

TEST(AnalyticCpt, IndependentOfDecayRates) {
    const auto a = analytic_cpt(SystemParams(1, 3, 2, 0.5)).state;
    const auto b = analytic_cpt(SystemParams(1, 3, 0.1, 2.9)).state;
    EXPECT_EQ(a.matrix(), b.matrix());
    EXPECT_DOUBLE_EQ(a.bb(), 0.75);
    EXPECT_DOUBLE_EQ(a.cc(), 0.25);
    EXPECT_NEAR(a.bc().real(), -std::sqrt(3.0) / 4.0, 1e-15);
}

TEST(SteadyProperty, AnalyticEqualsNullSpace) {
    oracle::Rng rng(34);
    for (int n = 0; n < 100; ++n) {
        const SystemParams p = unique_params(rng);
        const auto analytic = analytic_cpt(p);
        const auto ns = null_space_steady(p);
        ASSERT_EQ(ns.dimension, 1);
        ASSERT_LT(max_abs_difference(analytic.state.matrix(), ns.unit_trace_state().matrix()),
                  1e-10);
        ASSERT_TRUE(ns.contains(analytic.state));
        // Independent check: the oracle generator annihilates the state.
        const auto residual = oracle::generator(rates_of(p)) * oracle::coords(analytic.state.matrix());
        ASSERT_LT(residual.cwiseAbs().maxCoeff(), 1e-13);
        ASSERT_EQ(classify(analytic.state), SteadyClass::CPTGeneric);
    }
}

TEST(SteadyProperty, DegenerateLimitMatchesExponential) {
    oracle::Rng rng(35);
    for (int n = 0; n < 30; ++n) {
        const double r = rng.uniform(0.1, 3), gamma = rng.uniform(0.1, 3);
        const SystemParams p = SystemParams::symmetric(r, gamma);
        const Matrix3c rho0 = rng.density();
        const auto predicted = degenerate_steady(p, DensityMatrix::from_matrix(rho0));
        const double t = 60.0 / std::min(r, gamma);
        const Matrix3c limit = oracle::evolve(rates_of(p), rho0, t);
        ASSERT_LT(oracle::max_abs(predicted.state.matrix() - limit), 1e-9) << "sample " << n;
    }
}

TEST(SteadyProperty, DegenerateZeroPumpKeepsConservedParts) {
    oracle::Rng rng(36);
    for (int n = 0; n < 20; ++n) {
        const double gamma = rng.uniform(0.2, 3);
        const SystemParams p = SystemParams::symmetric(0, gamma);
        const Matrix3c rho0 = rng.density();
        const auto predicted = degenerate_steady(p, DensityMatrix::from_matrix(rho0));
        const Matrix3c limit = oracle::evolve(rates_of(p), rho0, 60.0 / gamma);
        ASSERT_LT(oracle::max_abs(predicted.state.matrix() - limit), 1e-9);
    }
}

TEST(Degenerate, SpotValues) {
    // C0 = 0, r = 2.5, gamma = 1: rho_aa = 2.5 / 12, Re rho_bc = -2.5 / 24.
    const auto s = degenerate_steady(SystemParams::symmetric(2.5, 1), DensityMatrix::diagonal(0, 1, 0));
    EXPECT_NEAR(s.state.aa(), 2.5 / 12.0, 1e-15);
    EXPECT_NEAR(s.state.bc().real(), -2.5 / 24.0, 1e-15);
    EXPECT_EQ(s.c0, 0.0);
    // C0 = -1 always gives the robust state.
    const auto robust = degenerate_steady(SystemParams::symmetric(0.3, 2), robust_state());
    EXPECT_EQ(robust.classification, SteadyClass::Robust);
    // C0 = 1 with r = 0 gives the weak state.
    const auto weak =
        degenerate_steady(SystemParams::symmetric(0, 1), DensityMatrix::diagonal(1, 0, 0));
    EXPECT_EQ(weak.classification, SteadyClass::Weak);
}

TEST(Degenerate, RequiresSymmetricRegime) {
    EXPECT_THROW(degenerate_steady(SystemParams(1, 2, 1, 1), robust_state()), RegimeError);
}

TEST(Classify, Labels) {
    EXPECT_EQ(classify(robust_state()), SteadyClass::Robust);
    EXPECT_EQ(classify(weak_state()), SteadyClass::Weak);
    EXPECT_EQ(classify(DensityMatrix::diagonal(0, 1, 0)), SteadyClass::CPTGeneric);
    EXPECT_EQ(classify(DensityMatrix::diagonal(1, 0, 0)), SteadyClass::Other);
}

TEST(NullSpace, ZeroGeneratorIsFullRank) {
    EXPECT_EQ(null_space_steady(SystemParams(0, 0, 0, 0)).dimension, 9);
}

TEST(Predict, ChoosesTheRightRoute) {
    const auto initial = DensityMatrix::diagonal(1, 0, 0);
    EXPECT_EQ(predict_steady(SystemParams::symmetric(1, 1), initial)->provenance,
              Provenance::DegenerateClosedForm);
    EXPECT_EQ(predict_steady(SystemParams(1, 3, 2, 0.5), initial)->provenance,
              Provenance::AnalyticCPT);
    EXPECT_EQ(predict_steady(SystemParams(1, 1, 1, 1, 0.5), initial)->provenance,
              Provenance::NullSpace);
    EXPECT_FALSE(predict_steady(SystemParams(1, 2, 1.5, 3), initial).has_value());
}
