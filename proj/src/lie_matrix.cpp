#include "loopforge/lie_matrix.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <cmath>

namespace loopforge {

namespace {

double scaled(double tol, const MatC& m) {
    return tol * std::max(1.0, m.squaredNorm());
}

}  // namespace

double group_residual(const MatC& g, GroupKind kind) {
    if (g.rows() != g.cols()) return std::numeric_limits<double>::infinity();
    double r = unitarity_residual(g);
    switch (kind) {
        case GroupKind::Unitary:
            return r;
        case GroupKind::SpecialUnitary:
            return std::max(r, std::abs(g.determinant() - Complex(1.0, 0.0)));
        case GroupKind::SpecialOrthogonal: {
            r = std::max(r, g.imag().norm());
            return std::max(r, std::abs(g.determinant() - Complex(1.0, 0.0)));
        }
    }
    return r;
}

double algebra_residual(const MatC& xi, GroupKind kind) {
    if (xi.rows() != xi.cols()) return std::numeric_limits<double>::infinity();
    double r = (xi + xi.adjoint()).norm();
    switch (kind) {
        case GroupKind::Unitary:
            return r;
        case GroupKind::SpecialUnitary:
            return std::max(r, std::abs(xi.trace()));
        case GroupKind::SpecialOrthogonal:
            return std::max(r, xi.imag().norm());
    }
    return r;
}

GroupElement::GroupElement(MatC m, GroupKind k, double tol) : mat(std::move(m)), kind(k) {
    const double r = group_residual(mat, kind);
    if (r > tol)
        throw NotInGroup("group membership residual " + std::to_string(r));
}

AlgebraElement::AlgebraElement(MatC m, GroupKind k, double tol)
    : mat(std::move(m)), kind(k) {
    const double r = algebra_residual(mat, kind);
    if (r > tol)
        throw NotInAlgebra("algebra membership residual " + std::to_string(r));
}

MatC exp_skew(const MatC& xi, double t, double tol) {
    return spectral_apply(xi, scaled(tol, xi), kEigenvalueGroupTol,
                          [t](Complex lam) { return std::exp(t * lam); });
}

MatC log_sector(const MatC& g, Complex s, double tol) {
    if (std::abs(s.real()) > tol)
        throw Error("sector parameter must lie on the imaginary axis");
    const double sigma = s.imag();
    return spectral_apply(g, scaled(tol, g), kEigenvalueGroupTol,
                          [sigma](Complex lam) {
                              const double a = std::arg(lam);
                              const double cut_dist = wrap_angle(a - (sigma + kPi));
                              if (std::abs(cut_dist) < kCutTol)
                                  throw EigenvalueOnCut(
                                      "eigenvalue within cut tolerance of -e^s");
                              const double theta = sigma + wrap_angle(a - sigma);
                              return Complex(0.0, theta);
                          });
}

MatC commuting_log(const MatC& g, double tol) {
    return spectral_apply(g, scaled(tol, g), kEigenvalueGroupTol,
                          [](Complex lam) {
                              double a = std::arg(lam);  // (-pi, pi]
                              if (a <= -kPi + 1e-15) a = kPi;
                              return Complex(0.0, a);
                          });
}

UnitaryStructure::UnitaryStructure(MatR m, double tol) : j(std::move(m)) {
    if (residual() > tol)
        throw Error("matrix is not an orthogonal complex structure, residual " +
                    std::to_string(residual()));
}

double UnitaryStructure::residual() const {
    if (j.rows() != j.cols() || j.rows() == 0)
        return std::numeric_limits<double>::infinity();
    const double sq = (j * j + MatR::Identity(j.rows(), j.cols())).norm();
    return std::max(sq, orthogonality_residual(j));
}

UnitaryStructure unitary_structure_from(const MatR& xi, double tol) {
    if ((xi + xi.transpose()).norm() > scaled(tol, xi.cast<Complex>()))
        throw NotInAlgebra("unitary_structure_from needs real skew-symmetric input");
    // -i xi is Hermitian; its positive eigenvectors span the +i eigenspace.
    const MatC herm = Complex(0.0, -1.0) * xi.cast<Complex>();
    Eigen::SelfAdjointEigenSolver<MatC> es(herm);
    if (es.info() != Eigen::Success) throw Error("eigendecomposition failed");
    const VecR vals = es.eigenvalues();
    for (int i = 0; i < vals.size(); ++i)
        if (std::abs(vals(i)) <= tol)
            throw ZeroEigenvalue("xi has an eigenvalue within tol of zero");
    MatC jc = MatC::Zero(xi.rows(), xi.cols());
    for (int i = 0; i < vals.size(); ++i) {
        const Complex sgn(0.0, vals(i) > 0.0 ? 1.0 : -1.0);
        jc += sgn * es.eigenvectors().col(i) * es.eigenvectors().col(i).adjoint();
    }
    MatR j = jc.real();
    return UnitaryStructure(j, std::max(tol, 1e-10));
}

namespace {

// Orthonormal real basis of the real span of complex columns (which must be
// conjugation-stable).
MatR real_span_basis(const MatC& cols, int expected_dim) {
    MatR stacked(cols.rows(), 2 * cols.cols());
    stacked << cols.real(), cols.imag();
    Eigen::JacobiSVD<MatR> svd(stacked, Eigen::ComputeThinU);
    MatR basis(cols.rows(), expected_dim);
    int found = 0;
    for (int i = 0; i < svd.singularValues().size() && found < expected_dim; ++i)
        if (svd.singularValues()(i) > 1e-8) basis.col(found++) = svd.matrixU().col(i);
    if (found != expected_dim)
        throw Error("eigenspace is not conjugation-stable of expected dimension");
    return basis;
}

}  // namespace

SoLogDecomposition log_decompose_so(const MatR& g, double tol) {
    if (group_residual(g.cast<Complex>(), GroupKind::SpecialOrthogonal) > tol)
        throw NotInGroup("log_decompose_so needs a special orthogonal matrix");
    const MatC gc = g.cast<Complex>();
    const auto groups = spectral_groups(gc, scaled(tol, gc), kEigenvalueGroupTol);

    const int n = static_cast<int>(g.rows());
    MatC xi_c = MatC::Zero(n, n);
    MatC j_c = MatC::Zero(n, n);
    for (const auto& grp : groups) {
        const double a = std::arg(grp.value);
        if (std::abs(wrap_angle(a)) < kCutTol)
            throw EigenvalueOne("g has an eigenvalue at +1");
        if (std::abs(wrap_angle(a - kPi)) < kCutTol) {
            // Eigenvalue -1: split the real eigenspace with a chosen complex
            // structure, xi acts there as pi J_F.
            const int f = static_cast<int>(grp.basis.cols());
            if (f % 2 != 0) throw Error("odd -1 eigenspace in SO");
            const MatR fb = real_span_basis(grp.basis, f);
            const MatR jf = fb * standard_j0(f) * fb.transpose();
            xi_c += kPi * jf.cast<Complex>();
            j_c += jf.cast<Complex>();
        } else {
            const double theta = wrap_angle(a);  // in (-pi, pi), not 0
            const MatC proj = grp.basis * grp.basis.adjoint();
            xi_c += Complex(0.0, theta) * proj;
            j_c += Complex(0.0, theta > 0.0 ? 1.0 : -1.0) * proj;
        }
    }
    if (xi_c.imag().norm() > 1e-8 || j_c.imag().norm() > 1e-8)
        throw Error("realification failed in log_decompose_so");
    SoLogDecomposition dec;
    dec.xi = xi_c.real();
    dec.j = UnitaryStructure(j_c.real(), std::max(tol, 1e-9));
    return dec;
}

MatR random_unitary_structure(int dim, std::uint64_t seed) {
    if (dim % 2 != 0)
        throw OddDimension("unitary structures need even dimension");
    std::mt19937_64 rng(seed);
    const MatR q = random_special_orthogonal(dim, rng);
    return q * standard_j0(dim) * q.transpose();
}

int integer_mode_bound(const MatC& a, double slack) {
    const auto groups = spectral_groups(a, 1e-8 * std::max(1.0, a.squaredNorm()),
                                        kEigenvalueGroupTol);
    int bound = 0;
    for (const auto& grp : groups) {
        const double y = grp.value.imag() / kTwoPi;
        const int k = static_cast<int>(std::lround(y));
        if (std::abs(y - k) > slack || std::abs(grp.value.real()) > slack)
            throw Error("eigenvalue is not on the 2 pi i lattice");
        bound = std::max(bound, std::abs(k));
    }
    return bound;
}

int trace_winding(const MatC& xi, double slack) {
    const Complex tr = xi.trace();
    const double y = tr.imag() / kTwoPi;
    const int k = static_cast<int>(std::lround(y));
    if (std::abs(y - k) > slack || std::abs(tr.real()) > slack)
        throw Error("trace is not on the 2 pi i lattice");
    return k;
}

}  // namespace loopforge
