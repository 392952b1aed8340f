#include "lambda_cpt/core.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace lambda_cpt {

namespace {

void require_rate(double value, const char* name) {
    if (!std::isfinite(value) || value < 0.0) {
        throw ValidationError(std::string(name) + " must be finite and non-negative, got " +
                              std::to_string(value));
    }
}

bool nearly_equal(double x, double y) noexcept {
    return std::abs(x - y) <= 1e-12 * std::max({1.0, std::abs(x), std::abs(y)});
}

} // namespace

std::string_view to_string(Basis basis) noexcept {
    return basis == Basis::Bare ? "bare" : "dressed";
}

SystemParams::SystemParams(double r1, double r2, double gamma1, double gamma2, double p,
                           double delta)
    : r1_(r1), r2_(r2), gamma1_(gamma1), gamma2_(gamma2), p_(p), delta_(delta) {
    require_rate(r1, "r1");
    require_rate(r2, "r2");
    require_rate(gamma1, "gamma1");
    require_rate(gamma2, "gamma2");
    if (!std::isfinite(p) || p < -1.0 || p > 1.0) {
        throw ValidationError("p ∈ [−1,1] violated: p = " + std::to_string(p));
    }
    if (!std::isfinite(delta)) {
        throw ValidationError("delta must be finite");
    }
}

SystemParams SystemParams::symmetric(double r, double gamma) {
    return SystemParams(r, r, gamma, gamma, 1.0, 0.0);
}

double SystemParams::pump_geometric_mean() const noexcept { return std::sqrt(r1_ * r2_); }

double SystemParams::decay_geometric_mean() const noexcept {
    return std::sqrt(gamma1_ * gamma2_);
}

double SystemParams::max_rate() const noexcept { return std::max({r1_, r2_, gamma1_, gamma2_}); }

bool SystemParams::symmetric_degenerate() const noexcept {
    return parallel_resonant() && nearly_equal(r1_, r2_) && nearly_equal(gamma1_, gamma2_);
}

DensityMatrix DensityMatrix::from_matrix(const Matrix3c& m, Basis basis) {
    if (!m.allFinite()) {
        throw ValidationError("density matrix has non-finite entries");
    }
    DensityMatrix rho(m, basis);
    if (rho.hermiticity_error() > kHermitianTol) {
        throw ValidationError("density matrix must be Hermitian (error " +
                              std::to_string(rho.hermiticity_error()) + ")");
    }
    if (rho.trace_error() > kTraceTol) {
        throw ValidationError("density matrix must have unit trace (trace " +
                              std::to_string(m.trace().real()) + ")");
    }
    return rho;
}

DensityMatrix DensityMatrix::from_lower_block(double aa, double bb, double cc, complex bc) {
    Matrix3c m = Matrix3c::Zero();
    m(kA, kA) = aa;
    m(kB, kB) = bb;
    m(kC, kC) = cc;
    m(kB, kC) = bc;
    m(kC, kB) = std::conj(bc);
    return from_matrix(m);
}

DensityMatrix DensityMatrix::diagonal(double aa, double bb, double cc) {
    return from_lower_block(aa, bb, cc, 0.0);
}

DensityMatrix DensityMatrix::unchecked(const Matrix3c& m, Basis basis) noexcept {
    return DensityMatrix(m, basis);
}

double DensityMatrix::trace_error() const noexcept { return std::abs(m_.trace() - 1.0); }

double DensityMatrix::hermiticity_error() const noexcept {
    return (m_ - m_.adjoint()).cwiseAbs().maxCoeff();
}

double DensityMatrix::min_eigenvalue() const {
    const Matrix3c h = 0.5 * (m_ + m_.adjoint());
    Eigen::SelfAdjointEigenSolver<Matrix3c> solver(h, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) {
        throw NumericError("eigenvalue solver failed on density matrix");
    }
    return solver.eigenvalues()(0);
}

double DensityMatrix::nondecaying_combination() const noexcept {
    return (m_(kA, kA) + m_(kB, kC) + m_(kC, kB)).real();
}

double DerivativeMatrix::hermiticity_error() const noexcept {
    return (m_ - m_.adjoint()).cwiseAbs().maxCoeff();
}

Matrix3c apply_master_equation(const SystemParams& params, const Matrix3c& rho) noexcept {
    const double r1 = params.r1();
    const double r2 = params.r2();
    const double g1 = params.gamma1();
    const double g2 = params.gamma2();
    const double sum_g = g1 + g2;
    const double pump_cross = params.p() * params.pump_geometric_mean();
    const double decay_cross = params.p() * params.decay_geometric_mean();
    const complex i_delta(0.0, params.delta());

    const complex aa = rho(kA, kA);
    const complex bb = rho(kB, kB);
    const complex cc = rho(kC, kC);
    const complex lower_sum = rho(kB, kC) + rho(kC, kB);

    Matrix3c d;
    d(kA, kA) = -(sum_g + r1 + r2) * aa + r1 * bb + r2 * cc + pump_cross * lower_sum;
    d(kC, kC) = g2 * aa + r2 * (aa - cc) - 0.5 * pump_cross * lower_sum;
    d(kB, kB) = g1 * aa + r1 * (aa - bb) - 0.5 * pump_cross * lower_sum;

    // The a-b / a-c pair couples through the pump only, as printed.
    const double ab_rate = 0.5 * (sum_g + 2.0 * r1 + r2);
    const double ac_rate = 0.5 * (sum_g + r1 + 2.0 * r2);
    d(kA, kB) = -ab_rate * rho(kA, kB) - 0.5 * pump_cross * rho(kA, kC);
    d(kA, kC) = -ac_rate * rho(kA, kC) - 0.5 * pump_cross * rho(kA, kB);
    d(kB, kA) = -ab_rate * rho(kB, kA) - 0.5 * pump_cross * rho(kC, kA);
    d(kC, kA) = -ac_rate * rho(kC, kA) - 0.5 * pump_cross * rho(kB, kA);

    const complex source = decay_cross * aa + 0.5 * pump_cross * (2.0 * aa - bb - cc);
    const double lower_rate = 0.5 * (r1 + r2);
    d(kB, kC) = -lower_rate * rho(kB, kC) + source + i_delta * rho(kB, kC);
    d(kC, kB) = -lower_rate * rho(kC, kB) + source - i_delta * rho(kC, kB);
    return d;
}

DerivativeMatrix rhs(const SystemParams& params, const DensityMatrix& rho) {
    if (rho.basis() != Basis::Bare) {
        throw BasisMismatch("rhs expects a bare-basis density matrix");
    }
    if (!rho.matrix().allFinite()) {
        throw ValidationError("density matrix has non-finite entries");
    }
    return DerivativeMatrix(apply_master_equation(params, rho.matrix()));
}

ObservableSet observables(const DensityMatrix& rho) {
    if (rho.basis() != Basis::Bare) {
        throw BasisMismatch("observables are defined on bare-basis states");
    }
    ObservableSet o;
    o.rho_aa = rho.aa();
    o.rho_bb = rho.bb();
    o.rho_cc = rho.cc();
    o.inv_ab = o.rho_aa - o.rho_bb;
    o.inv_ac = o.rho_aa - o.rho_cc;
    o.re_bc = rho.bc().real();
    o.im_bc = rho.bc().imag();
    return o;
}

DensityMatrix robust_state() { return DensityMatrix::from_lower_block(0.0, 0.5, 0.5, -0.5); }

DensityMatrix weak_state() { return DensityMatrix::from_lower_block(0.0, 0.5, 0.5, 0.5); }

double max_abs_difference(const Matrix3c& x, const Matrix3c& y) noexcept {
    return (x - y).cwiseAbs().maxCoeff();
}

} // namespace lambda_cpt
