#include "lambda_cpt/steady.hpp"

#include <cmath>
#include <sstream>

namespace lambda_cpt {

namespace {

enum Coord : int { AA = 0, BB, CC, RAB, IAB, RAC, IAC, RBC, IBC };

constexpr double kClassifyTol = 1e-6;

double discriminant_of(const SystemParams& params) {
    // (sqrt(r2 g1) - sqrt(r1 g2))^2, identical to r2 g1 + r1 g2 - 2 sqrt(r1 r2 g1 g2)
    // and exactly zero when r2 g1 == r1 g2.
    const double d = std::sqrt(params.r2() * params.gamma1()) -
                     std::sqrt(params.r1() * params.gamma2());
    return d * d;
}

bool near(complex x, complex y) { return std::abs(x - y) <= kClassifyTol; }

} // namespace

std::string_view to_string(Provenance provenance) noexcept {
    switch (provenance) {
    case Provenance::AnalyticCPT: return "analytic_cpt";
    case Provenance::NullSpace: return "null_space";
    case Provenance::DegenerateClosedForm: return "degenerate_closed_form";
    case Provenance::Integrated: return "integrated";
    }
    return "unknown";
}

std::string_view to_string(SteadyClass cls) noexcept {
    switch (cls) {
    case SteadyClass::CPTGeneric: return "cpt_generic";
    case SteadyClass::Robust: return "robust";
    case SteadyClass::Weak: return "weak";
    case SteadyClass::Other: return "other";
    }
    return "unknown";
}

Vector9 to_coordinates(const Matrix3c& m) noexcept {
    Vector9 v;
    v << m(kA, kA).real(), m(kB, kB).real(), m(kC, kC).real(), m(kA, kB).real(),
        m(kA, kB).imag(), m(kA, kC).real(), m(kA, kC).imag(), m(kB, kC).real(),
        m(kB, kC).imag();
    return v;
}

Matrix3c from_coordinates(const Vector9& v) noexcept {
    Matrix3c m;
    m(kA, kA) = v(AA);
    m(kB, kB) = v(BB);
    m(kC, kC) = v(CC);
    m(kA, kB) = complex(v(RAB), v(IAB));
    m(kA, kC) = complex(v(RAC), v(IAC));
    m(kB, kC) = complex(v(RBC), v(IBC));
    m(kB, kA) = std::conj(m(kA, kB));
    m(kC, kA) = std::conj(m(kA, kC));
    m(kC, kB) = std::conj(m(kB, kC));
    return m;
}

LinearGenerator build_liouvillian(const SystemParams& params) {
    const double r1 = params.r1();
    const double r2 = params.r2();
    const double g1 = params.gamma1();
    const double g2 = params.gamma2();
    const double pump = params.p() * params.pump_geometric_mean();
    const double decay = params.p() * params.decay_geometric_mean();
    const double delta = params.delta();
    const double ab_rate = 0.5 * (g1 + g2 + 2.0 * r1 + r2);
    const double ac_rate = 0.5 * (g1 + g2 + r1 + 2.0 * r2);
    const double bc_rate = 0.5 * (r1 + r2);

    Matrix9 L = Matrix9::Zero();
    L(AA, AA) = -(g1 + g2 + r1 + r2);
    L(AA, BB) = r1;
    L(AA, CC) = r2;
    L(AA, RBC) = 2.0 * pump;

    L(BB, AA) = g1 + r1;
    L(BB, BB) = -r1;
    L(BB, RBC) = -pump;

    L(CC, AA) = g2 + r2;
    L(CC, CC) = -r2;
    L(CC, RBC) = -pump;

    L(RAB, RAB) = -ab_rate;
    L(RAB, RAC) = -0.5 * pump;
    L(IAB, IAB) = -ab_rate;
    L(IAB, IAC) = -0.5 * pump;

    L(RAC, RAC) = -ac_rate;
    L(RAC, RAB) = -0.5 * pump;
    L(IAC, IAC) = -ac_rate;
    L(IAC, IAB) = -0.5 * pump;

    L(RBC, RBC) = -bc_rate;
    L(RBC, AA) = decay + pump;
    L(RBC, BB) = -0.5 * pump;
    L(RBC, CC) = -0.5 * pump;
    L(RBC, IBC) = -delta;

    L(IBC, IBC) = -bc_rate;
    L(IBC, RBC) = delta;

    return LinearGenerator{L};
}

UniquenessReport uniqueness(const SystemParams& params, double rank_tol) {
    UniquenessReport report;
    report.discriminant = discriminant_of(params);
    report.product = params.r1() * params.r2();
    report.unique = std::abs(report.discriminant) > rank_tol && report.product > rank_tol;
    report.analytic_condition_applies = params.parallel_resonant();

    std::ostringstream diag;
    try {
        report.null_space_dim = null_space_steady(params, rank_tol).dimension;
    } catch (const RankAmbiguity& e) {
        report.null_space_dim = -1;
        diag << "numerical rank ambiguous: " << e.what();
    }

    if (report.null_space_dim < 0) {
        report.agrees = false;
    } else if (report.analytic_condition_applies) {
        report.agrees = report.unique == (report.null_space_dim == 1);
        if (!report.agrees) {
            diag << "analytic condition says " << (report.unique ? "unique" : "not unique")
                 << " but the kernel dimension is " << report.null_space_dim;
        }
    } else {
        diag << "analytic condition assumes p = 1 and delta = 0; kernel dimension is "
             << report.null_space_dim;
    }
    report.diagnostic = diag.str();
    return report;
}

SteadyStateReport analytic_cpt(const SystemParams& params) {
    if (!params.parallel_resonant()) {
        throw RegimeError("analytic CPT solution requires p = 1 and delta = 0");
    }
    const double disc = discriminant_of(params);
    const double product = params.r1() * params.r2();
    if (!(disc > kDefaultRankTol) || !(product > kDefaultRankTol)) {
        std::ostringstream msg;
        msg << "steady state is not unique (discriminant " << disc << ", r1*r2 " << product
            << "); use degenerate_steady or null_space_steady";
        throw UniquenessViolation(msg.str());
    }
    const double total = params.r1() + params.r2();
    const double bb = params.r2() / total;
    const double cc = params.r1() / total;
    const double bc = -params.pump_geometric_mean() / total;
    DensityMatrix state = DensityMatrix::from_lower_block(0.0, bb, cc, bc);
    return {state, Provenance::AnalyticCPT, classify(state), std::nullopt};
}

bool NullSpaceResult::contains(const DensityMatrix& state, double tol) const {
    const Vector9 v = to_coordinates(state.matrix());
    Vector9 projected = Vector9::Zero();
    for (const auto& b : basis) {
        projected += b.dot(v) * b;
    }
    return (v - projected).cwiseAbs().maxCoeff() <= tol;
}

DensityMatrix NullSpaceResult::unit_trace_state() const {
    if (dimension != 1) {
        throw RegimeError("kernel has dimension " + std::to_string(dimension) +
                          "; no unique steady state");
    }
    const double trace = matrices.front().trace().real();
    if (std::abs(trace) < 1e-12) {
        throw NumericError("kernel vector is traceless and cannot be normalized");
    }
    return DensityMatrix::from_matrix(matrices.front() / trace);
}

NullSpaceResult null_space_steady(const SystemParams& params, double rank_tol) {
    const Matrix9 L = build_liouvillian(params).matrix;
    Eigen::JacobiSVD<Matrix9> svd(L, Eigen::ComputeFullV);

    NullSpaceResult result;
    result.singular_values = svd.singularValues();
    const double sigma_max = result.singular_values(0);
    const double threshold = rank_tol * sigma_max;

    int dimension = 0;
    for (int k = 0; k < 9; ++k) {
        const double sigma = result.singular_values(k);
        if (sigma_max > 0.0 && sigma > threshold / 10.0 && sigma < threshold * 10.0) {
            std::ostringstream msg;
            msg << "singular value " << sigma << " is within a factor of 10 of the rank threshold "
                << threshold;
            throw RankAmbiguity(msg.str());
        }
        if (sigma <= threshold) {
            ++dimension;
        }
    }
    result.dimension = dimension;
    const Matrix9& V = svd.matrixV();
    for (int k = 9 - dimension; k < 9; ++k) {
        const Vector9 column = V.col(k);
        result.basis.push_back(column);
        result.matrices.push_back(from_coordinates(column));
    }
    return result;
}

SteadyStateReport degenerate_steady(const SystemParams& params, const DensityMatrix& initial) {
    if (!params.symmetric_degenerate()) {
        throw RegimeError(
            "degenerate closed form requires r1 = r2, gamma1 = gamma2, p = 1 and delta = 0");
    }
    if (initial.basis() != Basis::Bare) {
        throw BasisMismatch("degenerate_steady expects a bare-basis initial state");
    }
    const double r = params.r1();
    const double g = params.gamma1();
    const double c0 = initial.nondecaying_combination();

    if (r == 0.0 && g == 0.0) {
        return {initial, Provenance::DegenerateClosedForm, classify(initial), c0};
    }

    // Written in (C0 + 1) so that C0 = -1 lands exactly on the robust state.
    const double aa = r * (c0 + 1.0) / (2.0 * g + 4.0 * r);
    const double re_bc = (c0 + 1.0) * (3.0 * r + 2.0 * g) / (4.0 * (2.0 * r + g)) - 0.5;
    // With r > 0 the b-c population difference and Im rho_bc decay at rate r;
    // at r == 0 both are conserved.
    const double diff = r > 0.0 ? 0.0 : initial.bb() - initial.cc();
    const double im_bc = r > 0.0 ? 0.0 : initial.bc().imag();
    const double bb = 0.5 * (1.0 - aa + diff);
    const double cc = 0.5 * (1.0 - aa - diff);

    DensityMatrix state = DensityMatrix::from_lower_block(aa, bb, cc, complex(re_bc, im_bc));
    return {state, Provenance::DegenerateClosedForm, classify(state), c0};
}

SteadyClass classify(const DensityMatrix& state) {
    const complex bb = state(kB, kB);
    const complex cc = state(kC, kC);
    const complex bc = state(kB, kC);
    if (near(bb, 0.5) && near(cc, 0.5) && near(bc, -0.5)) {
        return SteadyClass::Robust;
    }
    if (near(bb, 0.5) && near(cc, 0.5) && near(bc, 0.5)) {
        return SteadyClass::Weak;
    }
    const double product = std::max(0.0, state.bb() * state.cc());
    if (near(state(kA, kA), 0.0) && near(bc, -std::sqrt(product))) {
        return SteadyClass::CPTGeneric;
    }
    return SteadyClass::Other;
}

std::optional<SteadyStateReport> predict_steady(const SystemParams& params,
                                                const DensityMatrix& initial) {
    if (params.symmetric_degenerate()) {
        return degenerate_steady(params, initial);
    }
    if (params.parallel_resonant()) {
        const double disc = discriminant_of(params);
        const double product = params.r1() * params.r2();
        if (disc > kDefaultRankTol && product > kDefaultRankTol) {
            return analytic_cpt(params);
        }
    }
    try {
        const NullSpaceResult kernel = null_space_steady(params);
        if (kernel.dimension == 1) {
            DensityMatrix state = kernel.unit_trace_state();
            return SteadyStateReport{state, Provenance::NullSpace, classify(state), std::nullopt};
        }
    } catch (const RankAmbiguity&) {
    }
    return std::nullopt;
}

} // namespace lambda_cpt
