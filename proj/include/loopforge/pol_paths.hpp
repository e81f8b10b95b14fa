#pragma once

#include <functional>

#include "loopforge/fourier_loop.hpp"
#include "loopforge/lie_matrix.hpp"

namespace loopforge {

// Path of the form t -> exp(t xi) gamma(t) with gamma a 1-periodic polynomial
// loop valued in the group. The based-loop projection of such a path is
// exp(xi), independently of gamma.
struct PolynomialPath {
    AlgebraElement xi;
    FourierLoop gamma;  // matrix-valued, window carries the polynomial degree
    GroupKind kind = GroupKind::Unitary;

    MatC evaluate(double t) const;
    int degree() const;  // largest stored |mode| of gamma
};

// Uniform samples of a quasi-periodic path on [0, 1], endpoint included, with
// alpha(t + 1) = monodromy * alpha(t).
struct SampledPath {
    std::vector<MatC> samples;  // alpha(j / (size-1)), j = 0 .. size-1
    GroupKind kind = GroupKind::Unitary;

    static SampledPath from_function(const std::function<MatC(double)>& alpha,
                                     int grid, GroupKind kind);
    MatC monodromy() const;  // alpha(1) alpha(0)^{-1}
};

MatC project(const PolynomialPath& a);

// Left action g . alpha; conjugation action g . alpha . g^{-1}. Both send
// exp(t xi) gamma to exp(t Ad_g xi) (g gamma) resp. (g gamma g^{-1}).
PolynomialPath act_left(const MatC& g, const PolynomialPath& a, double tol = 1e-9);
PolynomialPath act_conj(const MatC& g, const PolynomialPath& a, double tol = 1e-9);

// Right multiplication by a polynomial loop; stays in the same fibre.
struct PathProduct {
    PolynomialPath path;
    double overflow_mass = 0.0;
};
PathProduct right_multiply(const PolynomialPath& a, const FourierLoop& loop);

// Largest polynomial degree of t -> exp(-t xi1) exp(t xi2) when exp(xi1) ==
// exp(xi2), derived from the integer spectral gaps to the commuting log.
int quotient_degree_bound(const MatC& xi1, const MatC& xi2, double tol = 1e-9);

struct QuotientResult {
    FourierLoop loop;  // gamma(t) = a(t)^{-1} b(t)
    int degree_bound = 0;
    double overflow_mass = 0.0;  // DFT mass beyond the requested window
};

// gamma = a^{-1} b for two paths over the same fibre (DifferentFibres when the
// projections disagree beyond tol). Sampled on a grid of at least
// 4 * degree_bound + 1 points.
QuotientResult fibre_quotient(const PolynomialPath& a, const PolynomialPath& b,
                              TruncationConfig cfg);

// Sections of the projection, one per group family.
PolynomialPath section_un(const MatC& g, Complex s, TruncationConfig cfg);

// beta(t) = exp(t log_s g) (1 + (z^{-k} - 1) v v*), k the trace winding of
// log_s g; v defaults to the first basis vector when empty.
PolynomialPath section_sun(const MatC& g, Complex s, TruncationConfig cfg,
                           VecC v = VecC());

// Orthonormal basis of the sum of eigenspaces of special orthogonal h with
// Re(eigenvalue) < r. Throws EigenvalueOnWall within wall_tol of the wall.
MatR wall_eigenspace(const MatR& h, double r, double wall_tol = 1e-8);

// Field of complex structures on E^r_{-1}(h), used by the SO section.
using JField = std::function<MatR(const MatR& h, const MatR& e_minus_basis)>;

// Reference frame on E^r_{-1}(g), transported to h by orthogonal projection
// followed by polar orthonormalization. Throws ProjectionDegenerate when the
// projection is singular beyond tol.
JField make_reference_jfield(const MatR& g, double r, double tol = 1e-9);

struct SonSection {
    PolynomialPath path;
    MatR j_h;        // the structure used on E^r_{-1}(h)
    int loop_degree_bound = 0;
};

// Chart section around basepoint g: h -> exp(t log_0(eps(h))) exp(t pi J_h)
// with eps(h) = h exp(-pi J_h).
SonSection section_son(const MatR& h, double r, const JField& field,
                       TruncationConfig cfg);

// Largest residual of group membership over `grid` samples of the path.
double path_membership_residual(const PolynomialPath& a, int grid = 32);

}  // namespace loopforge
