#include "lambda_cpt/dressed.hpp"

#include <cmath>
#include <string>

namespace lambda_cpt {

namespace {

void require_dressed_regime(const SystemParams& params) {
    if (!params.parallel_resonant()) {
        throw RegimeError("dressed evolution equations require p = 1 and delta = 0");
    }
    if (!(params.r1() + params.r2() > 0.0)) {
        throw RegimeError("dressed basis requires r1 + r2 > 0");
    }
}

} // namespace

DressedBasis::DressedBasis(double r1, double r2) : r1_(r1), r2_(r2) {
    if (!std::isfinite(r1) || !std::isfinite(r2) || r1 < 0.0 || r2 < 0.0) {
        throw ValidationError("dressed basis rates must be finite and non-negative");
    }
    if (!(r1 + r2 > 0.0)) {
        throw ValidationError("dressed basis requires r1 + r2 > 0");
    }
    const double norm = std::sqrt(r1 + r2);
    const double sb = std::sqrt(r2) / norm;
    const double sc = std::sqrt(r1) / norm;
    u_ << 1.0, 0.0, 0.0,
          0.0, sb, -sc,
          0.0, sc, sb;
}

Matrix3c to_dressed(const DressedBasis& basis, const Matrix3c& bare) noexcept {
    const Eigen::Matrix3d& u = basis.change_of_basis();
    Matrix3c out = u.cast<complex>() * bare * u.transpose().cast<complex>();
    return out;
}

DensityMatrix to_dressed(const DressedBasis& basis, const DensityMatrix& bare) {
    if (bare.basis() != Basis::Bare) {
        throw BasisMismatch("to_dressed expects a bare-basis density matrix");
    }
    return DensityMatrix::unchecked(to_dressed(basis, bare.matrix()), Basis::Dressed);
}

DensityMatrix to_bare(const DressedBasis& basis, const DensityMatrix& dressed) {
    if (dressed.basis() != Basis::Dressed) {
        throw BasisMismatch("to_bare expects a dressed-basis density matrix");
    }
    const Eigen::Matrix3d& u = basis.change_of_basis();
    Matrix3c out = u.transpose().cast<complex>() * dressed.matrix() * u.cast<complex>();
    return DensityMatrix::unchecked(out, Basis::Bare);
}

DressedRateSet dressed_rates(const SystemParams& params, const DensityMatrix& rho) {
    require_dressed_regime(params);
    const DressedBasis basis(params);
    const DensityMatrix dressed =
        rho.basis() == Basis::Bare ? to_dressed(basis, rho) : rho;

    const double r1 = params.r1();
    const double r2 = params.r2();
    const double g1 = params.gamma1();
    const double g2 = params.gamma2();
    const double total = r1 + r2;
    const double aa = dressed(kA, kA).real();
    const double bright = dressed(kBright, kBright).real();
    const complex db = dressed(kDark, kBright);

    const double dark_feed = std::sqrt(r2 * g1) - std::sqrt(r1 * g2);
    const double bright_feed = std::sqrt(r1 * g1) + std::sqrt(r2 * g2);

    DressedRateSet rates;
    rates.dark = dark_feed * dark_feed * aa / total;
    rates.bright = (bright_feed * bright_feed + total * total) * aa / total - total * bright;
    rates.upper = -(r1 + g1 + r2 + g2) * aa + total * bright;
    rates.dark_bright = ((g1 - g2) * std::sqrt(r1 * r2) - (r1 - r2) * std::sqrt(g1 * g2)) / total *
                            aa -
                        0.5 * total * db;
    return rates;
}

Matrix9 dressed_generator(const SystemParams& params) {
    require_dressed_regime(params);
    const DressedBasis basis(params);
    const Eigen::Matrix3d& u = basis.change_of_basis();
    const Matrix9 bare = build_liouvillian(params).matrix;

    // Column k: dressed coordinate unit vector -> bare matrix -> generator -> dressed.
    Matrix9 out;
    for (int k = 0; k < 9; ++k) {
        const Matrix3c dressed_unit = from_coordinates(Vector9::Unit(k));
        const Matrix3c bare_unit =
            u.transpose().cast<complex>() * dressed_unit * u.cast<complex>();
        const Vector9 image = bare * to_coordinates(bare_unit);
        out.col(k) = to_coordinates(to_dressed(basis, from_coordinates(image)));
    }
    return out;
}

DressedDecayRates dressed_decay_rates(const SystemParams& params) {
    const Matrix9 g = dressed_generator(params);
    // Coordinate order: aa, DD, BB, Re aD, Im aD, Re aB, Im aB, Re DB, Im DB.
    return {-g(1, 1), -g(2, 2), -g(0, 0), -g(7, 7)};
}

} // namespace lambda_cpt
