#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "lambda_cpt/core.hpp"
#include "lambda_cpt/errors.hpp"
#include "oracles.hpp"

using namespace lambda_cpt;

namespace {

oracle::Rates rates_of(const SystemParams& p) {
    return {p.r1(), p.r2(), p.gamma1(), p.gamma2(), p.p(), p.delta()};
}

SystemParams random_params(oracle::Rng& rng) {
    return SystemParams(rng.uniform(0, 3), rng.uniform(0, 3), rng.uniform(0, 3),
                        rng.uniform(0, 3), rng.uniform(-1, 1), rng.uniform(-2, 2));
}

} // namespace

TEST(SystemParams, RejectsNegativeRates) {
    EXPECT_THROW(SystemParams(-1, 1, 1, 1), ValidationError);
    EXPECT_THROW(SystemParams(1, -0.1, 1, 1), ValidationError);
    EXPECT_THROW(SystemParams(1, 1, -1, 1), ValidationError);
    EXPECT_THROW(SystemParams(1, 1, 1, -1e-300), ValidationError);
}

TEST(SystemParams, RejectsNonFinite) {
    const double inf = std::numeric_limits<double>::infinity();
    const double nan = std::numeric_limits<double>::quiet_NaN();
    EXPECT_THROW(SystemParams(inf, 1, 1, 1), ValidationError);
    EXPECT_THROW(SystemParams(1, nan, 1, 1), ValidationError);
    EXPECT_THROW(SystemParams(1, 1, 1, 1, 1, inf), ValidationError);
}

TEST(SystemParams, AlignmentFactorOutOfRangeNamesTheInvariant) {
    try {
        SystemParams(1, 1, 1, 1, 1.5);
        FAIL() << "expected ValidationError";
    } catch (const ValidationError& e) {
        EXPECT_NE(std::string(e.what()).find("p ∈ [−1,1]"), std::string::npos) << e.what();
    }
    EXPECT_NO_THROW(SystemParams(1, 1, 1, 1, -1.0));
}

TEST(SystemParams, RegimePredicates) {
    EXPECT_TRUE(SystemParams::symmetric(0.5, 1).symmetric_degenerate());
    EXPECT_FALSE(SystemParams(1, 2, 1, 1).symmetric_degenerate());
    EXPECT_FALSE(SystemParams(1, 1, 1, 1, 0.9).symmetric_degenerate());
    EXPECT_FALSE(SystemParams(1, 1, 1, 1, 1, 0.1).parallel_resonant());
    EXPECT_DOUBLE_EQ(SystemParams(1, 4, 0.25, 1).pump_geometric_mean(), 2.0);
    EXPECT_DOUBLE_EQ(SystemParams(1, 4, 0.25, 1).decay_geometric_mean(), 0.5);
}

TEST(DensityMatrix, RejectsWrongTrace) {
    Matrix3c m = Matrix3c::Zero();
    m(0, 0) = 0.5;
    try {
        DensityMatrix::from_matrix(m);
        FAIL() << "expected ValidationError";
    } catch (const ValidationError& e) {
        EXPECT_NE(std::string(e.what()).find("unit trace"), std::string::npos) << e.what();
    }
}

TEST(DensityMatrix, RejectsNonHermitian) {
    Matrix3c m = Matrix3c::Zero();
    m(1, 1) = 1.0;
    m(0, 1) = 0.1;
    EXPECT_THROW(DensityMatrix::from_matrix(m), ValidationError);
}

TEST(DensityMatrix, RejectsNonFinite) {
    Matrix3c m = Matrix3c::Zero();
    m(1, 1) = 1.0;
    m(2, 2) = std::numeric_limits<double>::quiet_NaN();
    EXPECT_THROW(DensityMatrix::from_matrix(m), ValidationError);
}

TEST(DensityMatrix, NamedStates) {
    const DensityMatrix robust = robust_state();
    EXPECT_DOUBLE_EQ(robust.bc().real(), -0.5);
    EXPECT_DOUBLE_EQ(robust.nondecaying_combination(), -1.0);
    EXPECT_NEAR(robust.min_eigenvalue(), 0.0, 1e-15);
    EXPECT_DOUBLE_EQ(weak_state().nondecaying_combination(), 1.0);
}

TEST(Observables, InversionsAndCoherence) {
    const auto rho = DensityMatrix::from_lower_block(0.5, 0.3, 0.2, complex(0.1, -0.05));
    const ObservableSet o = observables(rho);
    EXPECT_DOUBLE_EQ(o.inv_ab, 0.2);
    EXPECT_DOUBLE_EQ(o.inv_ac, 0.3);
    EXPECT_DOUBLE_EQ(o.re_bc, 0.1);
    EXPECT_DOUBLE_EQ(o.im_bc, -0.05);
}

// Hand-evaluated: r1=1, r2=2, gamma1=0.5, gamma2=1.5, rho = |b><b|.
TEST(MasterEquation, FrozenExample) {
    const SystemParams p(1, 2, 0.5, 1.5);
    const DerivativeMatrix d = rhs(p, DensityMatrix::diagonal(0, 1, 0));
    EXPECT_NEAR(d(kA, kA).real(), 1.0, 1e-15);
    EXPECT_NEAR(d(kB, kB).real(), -1.0, 1e-15);
    EXPECT_NEAR(d(kC, kC).real(), 0.0, 1e-15);
    EXPECT_NEAR(d(kB, kC).real(), -std::sqrt(2.0) / 2.0, 1e-15);
    EXPECT_NEAR(d(kA, kB).real(), 0.0, 1e-15);
}

TEST(MasterEquation, DressedInputIsRejected) {
    const auto rho = DensityMatrix::unchecked(DensityMatrix::diagonal(0, 1, 0).matrix(),
                                              Basis::Dressed);
    EXPECT_THROW(rhs(SystemParams(1, 1, 1, 1), rho), BasisMismatch);
}

TEST(MasterEquationProperty, MatchesOracle) {
    oracle::Rng rng(11);
    for (int n = 0; n < 200; ++n) {
        const SystemParams p = random_params(rng);
        const Matrix3c m = rng.complex_matrix();
        const double diff =
            oracle::max_abs(apply_master_equation(p, m) - oracle::rhs(rates_of(p), m));
        ASSERT_LT(diff, 1e-13) << "sample " << n;
    }
}

TEST(MasterEquationProperty, TracelessAndHermitian) {
    oracle::Rng rng(12);
    for (int n = 0; n < 200; ++n) {
        const SystemParams p = random_params(rng);
        const auto rho = DensityMatrix::from_matrix(rng.density());
        const DerivativeMatrix d = rhs(p, rho);
        ASSERT_LT(std::abs(d.trace()), 1e-13);
        ASSERT_LT(d.hermiticity_error(), 1e-13);
    }
}

TEST(MasterEquationProperty, ComplexLinear) {
    oracle::Rng rng(13);
    for (int n = 0; n < 100; ++n) {
        const SystemParams p = random_params(rng);
        const Matrix3c x = rng.complex_matrix();
        const Matrix3c y = rng.complex_matrix();
        const complex a(rng.uniform(-2, 2), rng.uniform(-2, 2));
        const Matrix3c lhs = apply_master_equation(p, a * x + y);
        const Matrix3c rhs_ = a * apply_master_equation(p, x) + apply_master_equation(p, y);
        ASSERT_LT(max_abs_difference(lhs, rhs_), 1e-12);
    }
}

// rho_bc + rho_cb with p = 1 and no detuning only enters through
// Re rho_bc, so conjugating rho conjugates the derivative.
TEST(MasterEquationProperty, ConjugationSymmetry) {
    oracle::Rng rng(14);
    for (int n = 0; n < 100; ++n) {
        const SystemParams p(rng.uniform(0, 3), rng.uniform(0, 3), rng.uniform(0, 3),
                             rng.uniform(0, 3), rng.uniform(-1, 1));
        const Matrix3c rho = rng.density();
        const Matrix3c lhs = apply_master_equation(p, rho.conjugate());
        ASSERT_LT(max_abs_difference(lhs, apply_master_equation(p, rho).conjugate()), 1e-13);
    }
}

TEST(MasterEquationProperty, CptStateIsFixedPoint) {
    oracle::Rng rng(15);
    for (int n = 0; n < 100; ++n) {
        const double r1 = rng.uniform(0.01, 3), r2 = rng.uniform(0.01, 3);
        const SystemParams p(r1, r2, rng.uniform(0, 3), rng.uniform(0, 3));
        const double total = r1 + r2;
        const auto cpt = DensityMatrix::from_lower_block(0, r2 / total, r1 / total,
                                                         -std::sqrt(r1 * r2) / total);
        ASSERT_LT(rhs(p, cpt).max_norm(), 1e-14);
    }
}

TEST(MasterEquationProperty, RobustStateFixedInSymmetricRegime) {
    oracle::Rng rng(16);
    for (int n = 0; n < 50; ++n) {
        const SystemParams p = SystemParams::symmetric(rng.uniform(0, 3), rng.uniform(0, 3));
        ASSERT_LT(rhs(p, robust_state()).max_norm(), 1e-14);
    }
}

TEST(MasterEquationProperty, WeakStateFixedOnlyWithoutPump) {
    oracle::Rng rng(17);
    for (int n = 0; n < 50; ++n) {
        const double gamma = rng.uniform(0, 3);
        EXPECT_LT(rhs(SystemParams::symmetric(0, gamma), weak_state()).max_norm(), 1e-15);
        const double r = rng.uniform(0.01, 3);
        EXPECT_GT(rhs(SystemParams::symmetric(r, gamma), weak_state()).max_norm(), 1e-3);
    }
}

TEST(MasterEquationProperty, SymmetricRegimeConservesC0) {
    oracle::Rng rng(18);
    for (int n = 0; n < 100; ++n) {
        const SystemParams p = SystemParams::symmetric(rng.uniform(0, 3), rng.uniform(0, 3));
        const auto d = rhs(p, DensityMatrix::from_matrix(rng.density()));
        ASSERT_LT(std::abs(d(kA, kA).real() + 2.0 * d(kB, kC).real()), 1e-13);
    }
}
