// core.hpp: domain types for the incoherently pumped Lambda atom and the
// right-hand side of its reduced master equations.
//
// Level ordering is {a, b, c}: |a> is the upper level, |b> and |c> the lower
// doublet. Rates r1, gamma1 belong to the a-b transition, r2, gamma2 to a-c.

#pragma once

#include <Eigen/Dense>

#include <array>
#include <complex>
#include <optional>
#include <string_view>

#include "lambda_cpt/errors.hpp"

namespace lambda_cpt {

using complex = std::complex<double>;
using Matrix3c = Eigen::Matrix3cd;

// Matrix indices of the bare levels.
inline constexpr int kA = 0;
inline constexpr int kB = 1;
inline constexpr int kC = 2;

// Matrix indices in the dressed basis {a, D, B}.
inline constexpr int kDark = 1;
inline constexpr int kBright = 2;

enum class Basis { Bare, Dressed };

std::string_view to_string(Basis basis) noexcept;

/// The six reduced physical parameters. Rates are in inverse time, `p` is the
/// dipole alignment factor and `delta` the lower-doublet detuning.
///
/// Construction validates: rates finite and non-negative, p in [-1, 1],
/// delta finite. A default-constructed value has all rates zero, p = 1 and
/// delta = 0.
class SystemParams {
public:
    SystemParams() = default;
    SystemParams(double r1, double r2, double gamma1, double gamma2, double p = 1.0,
                 double delta = 0.0);

    // r1 = r2 = r, gamma1 = gamma2 = gamma, p = 1, delta = 0.
    static SystemParams symmetric(double r, double gamma);

    double r1() const noexcept { return r1_; }
    double r2() const noexcept { return r2_; }
    double gamma1() const noexcept { return gamma1_; }
    double gamma2() const noexcept { return gamma2_; }
    double p() const noexcept { return p_; }
    double delta() const noexcept { return delta_; }

    // sqrt(r1 r2) and sqrt(gamma1 gamma2); inputs are non-negative by construction.
    double pump_geometric_mean() const noexcept;
    double decay_geometric_mean() const noexcept;

    double max_rate() const noexcept;

    // p == 1 and delta == 0: the regime every closed-form result assumes.
    bool parallel_resonant() const noexcept { return p_ == 1.0 && delta_ == 0.0; }

    // parallel_resonant() with r1 == r2 and gamma1 == gamma2 (relative tolerance 1e-12).
    bool symmetric_degenerate() const noexcept;

    friend bool operator==(const SystemParams&, const SystemParams&) = default;

private:
    double r1_ = 0.0;
    double r2_ = 0.0;
    double gamma1_ = 0.0;
    double gamma2_ = 0.0;
    double p_ = 1.0;
    double delta_ = 0.0;
};

/// 3x3 Hermitian unit-trace density matrix with a basis tag.
///
/// `from_matrix` enforces Hermiticity and unit trace to 1e-12 and finite
/// entries. Positive semidefiniteness is not enforced; see `min_eigenvalue`.
class DensityMatrix {
public:
    static constexpr double kHermitianTol = 1e-12;
    static constexpr double kTraceTol = 1e-12;

    static DensityMatrix from_matrix(const Matrix3c& m, Basis basis = Basis::Bare);

    // Populations (aa, bb, cc) and the b-c coherence; a-b and a-c coherences zero.
    static DensityMatrix from_lower_block(double aa, double bb, double cc, complex bc);

    static DensityMatrix diagonal(double aa, double bb, double cc);

    // Skips validation. For integrator internals that track drift as diagnostics.
    static DensityMatrix unchecked(const Matrix3c& m, Basis basis = Basis::Bare) noexcept;

    const Matrix3c& matrix() const noexcept { return m_; }
    Basis basis() const noexcept { return basis_; }

    complex operator()(int i, int j) const noexcept { return m_(i, j); }

    double aa() const noexcept { return m_(kA, kA).real(); }
    double bb() const noexcept { return m_(kB, kB).real(); }
    double cc() const noexcept { return m_(kC, kC).real(); }
    complex bc() const noexcept { return m_(kB, kC); }

    double trace_error() const noexcept;
    double hermiticity_error() const noexcept;
    double min_eigenvalue() const;

    // rho_aa + rho_bc + rho_cb, real part. Conserved in the symmetric degenerate regime.
    double nondecaying_combination() const noexcept;

private:
    DensityMatrix(const Matrix3c& m, Basis basis) noexcept : m_(m), basis_(basis) {}

    Matrix3c m_ = Matrix3c::Zero();
    Basis basis_ = Basis::Bare;
};

/// d(rho)/dt for a bare-basis state.
class DerivativeMatrix {
public:
    explicit DerivativeMatrix(const Matrix3c& m) noexcept : m_(m) {}

    const Matrix3c& matrix() const noexcept { return m_; }
    complex operator()(int i, int j) const noexcept { return m_(i, j); }

    complex trace() const noexcept { return m_.trace(); }
    double max_norm() const noexcept { return m_.cwiseAbs().maxCoeff(); }
    double hermiticity_error() const noexcept;

private:
    Matrix3c m_;
};

/// Quantities plotted for the Lambda atom: populations, inversions, b-c coherence.
struct ObservableSet {
    double rho_aa = 0.0;
    double rho_bb = 0.0;
    double rho_cc = 0.0;
    double inv_ab = 0.0; // rho_aa - rho_bb
    double inv_ac = 0.0; // rho_aa - rho_cc
    double re_bc = 0.0;
    double im_bc = 0.0;

    static constexpr std::size_t kCount = 7;
    static constexpr std::array<std::string_view, kCount> kNames = {
        "rho_aa", "rho_bb", "rho_cc", "inv_ab", "inv_ac", "re_rho_bc", "im_rho_bc"};

    std::array<double, kCount> values() const noexcept {
        return {rho_aa, rho_bb, rho_cc, inv_ab, inv_ac, re_bc, im_bc};
    }
};

/// Evaluates the six printed equations (and their conjugate partners) on any
/// 3x3 matrix. No validation; the map is complex-linear in `rho`.
Matrix3c apply_master_equation(const SystemParams& params, const Matrix3c& rho) noexcept;

/// Validated right-hand side. Throws BasisMismatch for a Dressed input and
/// ValidationError for non-finite entries.
DerivativeMatrix rhs(const SystemParams& params, const DensityMatrix& rho);

ObservableSet observables(const DensityMatrix& rho);

// Named states.
DensityMatrix robust_state(); // rho_bb = rho_cc = 1/2, rho_bc = -1/2
DensityMatrix weak_state();   // rho_bb = rho_cc = 1/2, rho_bc = +1/2

double max_abs_difference(const Matrix3c& x, const Matrix3c& y) noexcept;

} // namespace lambda_cpt
