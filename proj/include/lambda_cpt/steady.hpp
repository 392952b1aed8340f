// steady.hpp: steady states of the Lambda master equation, computed three
// ways (closed-form CPT, Liouvillian kernel, symmetric-degenerate closed
// form), and their classification.

#pragma once

#include <Eigen/Dense>

#include <optional>
#include <string>
#include <vector>

#include "lambda_cpt/core.hpp"

namespace lambda_cpt {

using Vector9 = Eigen::Matrix<double, 9, 1>;
using Matrix9 = Eigen::Matrix<double, 9, 9>;

/// Real coordinates of a Hermitian 3x3 matrix:
/// (aa, bb, cc, Re ab, Im ab, Re ac, Im ac, Re bc, Im bc).
Vector9 to_coordinates(const Matrix3c& hermitian) noexcept;
Matrix3c from_coordinates(const Vector9& v) noexcept;

/// The master equation as a real linear map on `to_coordinates` vectors.
struct LinearGenerator {
    Matrix9 matrix;

    Vector9 apply(const Vector9& v) const { return matrix * v; }
};

LinearGenerator build_liouvillian(const SystemParams& params);

enum class Provenance { AnalyticCPT, NullSpace, DegenerateClosedForm, Integrated };
enum class SteadyClass { CPTGeneric, Robust, Weak, Other };

std::string_view to_string(Provenance provenance) noexcept;
std::string_view to_string(SteadyClass cls) noexcept;

struct SteadyStateReport {
    DensityMatrix state;
    Provenance provenance;
    SteadyClass classification;
    std::optional<double> c0;
};

struct UniquenessReport {
    double discriminant = 0.0; // r2 g1 + r1 g2 - 2 sqrt(r1 r2 g1 g2)
    double product = 0.0;      // r1 r2
    bool unique = false;       // analytic condition
    int null_space_dim = 0;    // numerical; -1 when the rank test was ambiguous
    bool analytic_condition_applies = true; // p == 1 and delta == 0
    bool agrees = true;        // analytic and numerical verdicts coincide
    std::string diagnostic;    // set when they disagree or the rank is ambiguous
};

inline constexpr double kDefaultRankTol = 1e-9;

UniquenessReport uniqueness(const SystemParams& params, double rank_tol = kDefaultRankTol);

/// rho_aa = 0, rho_bb = r2/(r1+r2), rho_cc = r1/(r1+r2), rho_bc = -sqrt(r1 r2)/(r1+r2).
/// Depends on the pump rates only. Throws RegimeError unless p == 1 and
/// delta == 0, and UniquenessViolation when the uniqueness condition fails.
SteadyStateReport analytic_cpt(const SystemParams& params);

struct NullSpaceResult {
    int dimension = 0;
    std::vector<Vector9> basis;      // orthonormal in coordinate space
    std::vector<Matrix3c> matrices;  // the same vectors as Hermitian matrices
    Vector9 singular_values;         // descending

    // True when `state` lies in the span of the kernel to within `tol`.
    bool contains(const DensityMatrix& state, double tol = 1e-8) const;

    // The unique unit-trace steady state. Requires dimension == 1.
    DensityMatrix unit_trace_state() const;
};

/// Kernel of the generator by SVD. Singular values at or below
/// rank_tol * sigma_max count as zero. Throws RankAmbiguity when a singular
/// value sits within a factor of 10 of that threshold.
NullSpaceResult null_space_steady(const SystemParams& params, double rank_tol = kDefaultRankTol);

/// Long-time limit in the symmetric degenerate regime, selected by the
/// initial state through C0 = rho_aa + 2 Re rho_bc and, when r == 0, the
/// conserved population difference and imaginary coherence.
/// Throws RegimeError outside that regime.
SteadyStateReport degenerate_steady(const SystemParams& params, const DensityMatrix& initial);

/// Robust / Weak compare the lower 2x2 block to [[1/2, -+1/2], [-+1/2, 1/2]];
/// CPTGeneric requires rho_aa = 0 and rho_bc = -sqrt(rho_bb rho_cc). All to 1e-6.
SteadyClass classify(const DensityMatrix& state);

/// Closed-form prediction appropriate for `params`: degenerate_steady in the
/// symmetric regime, analytic_cpt when unique, else the null-space state when
/// the kernel is one-dimensional. Empty otherwise.
std::optional<SteadyStateReport> predict_steady(const SystemParams& params,
                                                const DensityMatrix& initial);

} // namespace lambda_cpt
