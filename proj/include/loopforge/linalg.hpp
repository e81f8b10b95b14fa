#pragma once

#include <Eigen/Dense>
#include <complex>
#include <functional>
#include <random>
#include <vector>

#include "loopforge/errors.hpp"

namespace loopforge {

using Complex = std::complex<double>;
using MatC = Eigen::MatrixXcd;
using MatR = Eigen::MatrixXd;
using VecC = Eigen::VectorXcd;
using VecR = Eigen::VectorXd;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

// Wraps an angle into (-pi, pi].
inline double wrap_angle(double a) {
    a = std::remainder(a, kTwoPi);  // lands in [-pi, pi]
    if (a <= -kPi) a += kTwoPi;
    return a;
}

inline double frob(const MatC& m) { return m.norm(); }
inline double frob(const MatR& m) { return m.norm(); }

inline MatC identity_c(int n) { return MatC::Identity(n, n); }

// ‖m m* - m* m‖, zero exactly when m is normal.
inline double normality_residual(const MatC& m) {
    return (m * m.adjoint() - m.adjoint() * m).norm();
}

// Gram residual ‖m* m - I‖; accepts rectangular frames with orthonormal columns.
inline double unitarity_residual(const MatC& m) {
    return (m.adjoint() * m - MatC::Identity(m.cols(), m.cols())).norm();
}

inline double orthogonality_residual(const MatR& m) {
    return (m.transpose() * m - MatR::Identity(m.cols(), m.cols())).norm();
}

// One spectral group of a normal matrix: a representative eigenvalue and the
// orthonormal columns spanning the grouped eigenspace.
struct SpectralGroup {
    Complex value;
    MatC basis;  // n x multiplicity, orthonormal
};

// Eigendecomposition of a normal matrix with eigenvalues clustered to
// `group_tol`. Throws NonNormalInput when the commutator residual exceeds
// `normal_tol`. Grouping keeps spectral functions single-valued on repeated
// eigenvalues that rounding has split.
std::vector<SpectralGroup> spectral_groups(const MatC& m, double normal_tol,
                                           double group_tol);

// Applies f eigenvalue-wise to a normal matrix through its spectral groups.
MatC spectral_apply(const MatC& m, double normal_tol, double group_tol,
                    const std::function<Complex(Complex)>& f);

// Nearest unitary (polar factor); used to arrest drift in long products.
MatC polar_unitary(const MatC& m);
MatR polar_orthogonal(const MatR& m);

// Haar-distributed unitary / special-unitary / special-orthogonal samples.
MatC random_unitary(int n, std::mt19937_64& rng);
MatC random_special_unitary(int n, std::mt19937_64& rng);
MatR random_special_orthogonal(int n, std::mt19937_64& rng);

// Random skew-Hermitian (u_n) and skew-symmetric (so_n) samples, entries O(scale).
MatC random_skew_hermitian(int n, std::mt19937_64& rng, double scale = 1.0);
MatR random_skew_symmetric(int n, std::mt19937_64& rng, double scale = 1.0);

/// Block-diagonal standard complex structure on R^{2m}: e_{2k} -> e_{2k-1},
// e_{2k-1} -> -e_{2k} (1-based pairs).
MatR standard_j0(int dim);

// FNV-1a on bytes; stable across platforms, used to derive per-check seeds.
std::uint64_t fnv1a(const std::string& text, std::uint64_t seed = 1469598103934665603ull);

}  // namespace loopforge
