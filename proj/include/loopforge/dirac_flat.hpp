#pragma once

#include <map>
#include <vector>

#include "loopforge/fock.hpp"

namespace loopforge {

// Tangent directions of the flat truncated loop space. Points carry one
// complex coordinate per mode (j, k); the real tangent basis splits each
// into its real and imaginary parts, so direction ids are
// 2 * mode_id + (imaginary ? 1 : 0).
int direction_id(const ModeSpace& modes, int fibre, int level, bool imaginary);
int direction_mode(int direction);
bool direction_imaginary(int direction);

// The one-particle vector e or i e behind a direction.
VecC direction_vector(const ModeSpace& modes, int direction);

// Formal sum of (monomial, Fock coefficient) terms. A monomial is a sorted
// list of direction ids with repetition as power; total degree <= 3.
struct PolynomialSection {
    std::map<std::vector<int>, FockVector> terms;

    static PolynomialSection constant(FockVector coeff);
    static PolynomialSection monomial(std::vector<int> directions,
                                      FockVector coeff);

    PolynomialSection& accumulate(const PolynomialSection& other,
                                  Complex scale = 1.0);
    int degree() const;
};

FockVector evaluate(const PolynomialSection& s, const ModeSpace& modes,
                    const VecC& x);

// Exact partial derivative along one tangent direction.
PolynomialSection partial_derivative(const PolynomialSection& s,
                                     int direction);
// All nonzero partials, keyed by direction.
std::map<int, PolynomialSection> coordinate_derivatives(
    const PolynomialSection& s);

struct DiracConfig {
    int fibre_dim = 2;
    int mode_window = 6;
    int particle_cap = 6;
    // Tangent directions entering the mode sum; empty means all of them.
    std::vector<int> directions;

    ModeSpace make_modes() const;
    FockSpace make_space() const;
    std::vector<int> resolve_directions(const ModeSpace& modes) const;
};

// Dirac operator at a point: sum over directions of
// pi(e_alpha) (d_alpha s)(x), contracted through the finite-rank extension.
FockVector dirac(const PolynomialSection& s, const DiracConfig& cfg,
                 const VecC& x);
// Same sum with pi applied termwise, bypassing the extension.
FockVector dirac_naive(const PolynomialSection& s, const DiracConfig& cfg,
                       const VecC& x);
// The operator applied symbolically: coefficients are Clifford-multiplied,
// monomials differentiated. Iterating this gives the flat square.
PolynomialSection dirac_section(const PolynomialSection& s,
                                const DiracConfig& cfg);

// Circle action: coordinates of mode (j, k) rotate by lambda^k.
VecC rotate_point(const ModeSpace& modes, Complex lambda, const VecC& x);
// U_lambda s(R_lambda^{-1} y): cos/sin substitution in the monomials,
// implement_rotation on the coefficients.
PolynomialSection rotate_section(const ModeSpace& modes, Complex lambda,
                                 const PolynomialSection& s);

// || U_lambda (dirac s)(x) - (dirac (lambda . s))(lambda . x) ||.
double equivariance_check(const PolynomialSection& s, const DiracConfig& cfg,
                          Complex lambda, const VecC& x);

}  // namespace loopforge
