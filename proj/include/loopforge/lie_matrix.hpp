#pragma once

#include <cstdint>

#include "loopforge/linalg.hpp"
#include "loopforge/truncation.hpp"

namespace loopforge {

enum class GroupKind { Unitary, SpecialUnitary, SpecialOrthogonal };

// Residual of membership in the indicated matrix group (Frobenius).
double group_residual(const MatC& g, GroupKind kind);

// Residual of membership in u_n / su_n / so_n.
double algebra_residual(const MatC& xi, GroupKind kind);

struct GroupElement {
    MatC mat;
    GroupKind kind = GroupKind::Unitary;

    GroupElement() = default;
    GroupElement(MatC m, GroupKind k, double tol = 1e-9);
    int dim() const { return static_cast<int>(mat.rows()); }
};

struct AlgebraElement {
    MatC mat;
    GroupKind kind = GroupKind::Unitary;

    AlgebraElement() = default;
    AlgebraElement(MatC m, GroupKind k, double tol = 1e-9);
    int dim() const { return static_cast<int>(mat.rows()); }
};

// exp(t xi) through the spectral decomposition; xi must be normal
// (skew-Hermitian in all intended uses, so eigenvalues sit on i R).
MatC exp_skew(const MatC& xi, double t = 1.0, double tol = 1e-9);

// Sector logarithm: the unique normal log of unitary g with eigenvalues in
// the open strip (s - i pi, s + i pi), branch cut along the ray through -e^s.
// s must lie on the imaginary axis. Refuses eigenvalues within kCutTol
// (angular) of the cut.
MatC log_sector(const MatC& g, Complex s, double tol = 1e-9);

// Principal spectral logarithm, arguments in (-pi, pi] so that -1 maps to
// i pi; commutes with every normal logarithm of g.
MatC commuting_log(const MatC& g, double tol = 1e-9);

// Orthogonal complex structure: J^2 = -I, J^T J = I.
struct UnitaryStructure {
    MatR j;

    UnitaryStructure() = default;
    explicit UnitaryStructure(MatR m, double tol = 1e-9);
    int dim() const { return static_cast<int>(j.rows()); }
    double residual() const;  // max of orthogonality and square defects
};

// J_xi: +i on the eigenspaces of xi with eigenvalue i s, s > 0. xi must be
// real skew-symmetric with no eigenvalue within tol of zero.
UnitaryStructure unitary_structure_from(const MatR& xi, double tol = 1e-9);

struct SoLogDecomposition {
    MatR xi;             // exp(xi) = g, eigenvalue arguments in (0, pi]
    UnitaryStructure j;  // J_xi, so that log_0(-g) = xi - pi J_xi
};

// Splits the principal log of -g for g in SO_m with no +1 eigenvalue. On the
// (-1)-eigenspace of g the complex structure is chosen by pairing an
// orthonormal basis into standard blocks.
SoLogDecomposition log_decompose_so(const MatR& g, double tol = 1e-9);

// Seeded Haar-style draw: Q J0 Q^T for a random special orthogonal Q.
MatR random_unitary_structure(int dim, std::uint64_t seed);

// Largest |k| over eigenvalues 2 pi i k of a normal matrix whose spectrum
// lies in 2 pi i Z (up to `slack`); throws when an eigenvalue is not within
// slack of the lattice.
int integer_mode_bound(const MatC& a, double slack = 1e-6);

// Winding number k with tr(xi) = 2 pi i k; throws when the trace is not
// within slack of the lattice.
int trace_winding(const MatC& xi, double slack = 1e-6);

}  // namespace loopforge
