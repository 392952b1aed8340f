// dressed.hpp: dark/bright superpositions of the lower doublet.
//
//   |D> = (sqrt(r2)|b> - sqrt(r1)|c>) / sqrt(r1 + r2)
//   |B> = (sqrt(r1)|b> + sqrt(r2)|c>) / sqrt(r1 + r2)
//
// Dressed matrices use the index order {a, D, B} (see kDark, kBright).

#pragma once

#include <Eigen/Dense>

#include "lambda_cpt/core.hpp"
#include "lambda_cpt/steady.hpp"

namespace lambda_cpt {

class DressedBasis {
public:
    // Throws ValidationError unless r1, r2 are finite, non-negative and r1 + r2 > 0.
    DressedBasis(double r1, double r2);
    explicit DressedBasis(const SystemParams& params) : DressedBasis(params.r1(), params.r2()) {}

    double r1() const noexcept { return r1_; }
    double r2() const noexcept { return r2_; }

    // Rows are <a|, <D|, <B| in bare components. Orthogonal.
    const Eigen::Matrix3d& change_of_basis() const noexcept { return u_; }

private:
    double r1_;
    double r2_;
    Eigen::Matrix3d u_;
};

DensityMatrix to_dressed(const DressedBasis& basis, const DensityMatrix& bare);
DensityMatrix to_bare(const DressedBasis& basis, const DensityMatrix& dressed);

// Same congruence applied to an arbitrary matrix (e.g. a derivative).
Matrix3c to_dressed(const DressedBasis& basis, const Matrix3c& bare) noexcept;

struct DressedRateSet {
    double dark = 0.0;   // d rho_DD / dt
    double bright = 0.0; // d rho_BB / dt
    double upper = 0.0;  // d rho_aa / dt
    complex dark_bright; // d rho_DB / dt
};

/// Evaluates the dressed-basis evolution equations at `rho` (a bare state, or
/// a dressed state already expressed in the basis defined by `params`).
/// Throws RegimeError unless p == 1, delta == 0 and r1 + r2 > 0.
DressedRateSet dressed_rates(const SystemParams& params, const DensityMatrix& rho);

/// The generator expressed in dressed real coordinates
/// (aa, DD, BB, Re aD, Im aD, Re aB, Im aB, Re DB, Im DB).
Matrix9 dressed_generator(const SystemParams& params);

/// Self-relaxation rates read off the dressed generator's diagonal.
struct DressedDecayRates {
    double dark = 0.0;        // 0: the dark state does not decay
    double bright = 0.0;      // r1 + r2
    double upper = 0.0;       // r1 + gamma1 + r2 + gamma2
    double dark_bright = 0.0; // (r1 + r2) / 2
};

DressedDecayRates dressed_decay_rates(const SystemParams& params);

} // namespace lambda_cpt
