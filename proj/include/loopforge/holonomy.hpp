#pragma once

#include <vector>

#include "loopforge/fourier_loop.hpp"
#include "loopforge/lie_matrix.hpp"

namespace loopforge {

// Connection data pulled back along a fixed base loop. Parallel transport
// solves psi' = -A psi, so the covariant derivative acts as alpha' + A alpha.
struct LoopConnection {
    FourierLoop a;  // matrix loop with skew-Hermitian (or real skew) values
    GroupKind kind = GroupKind::Unitary;
    int steps = 4096;  // RK4 steps per unit of loop parameter

    LoopConnection() = default;
    explicit LoopConnection(FourierLoop form, GroupKind kind = GroupKind::Unitary,
                            int steps = 4096);
    int dim() const { return a.rows(); }
};

// Fundamental-solution comparison Phi(t1) Phi(t0)^{-1}, integrated by
// classical RK4 with a polar projection back to the group every 64 steps.
GroupElement parallel_transport(const LoopConnection& conn, double t0, double t1);

GroupElement holonomy(const LoopConnection& conn);

// alpha' + A alpha at the truncation window; convolution overflow reported.
ProductResult covariant_derivative(const LoopConnection& conn,
                                   const FourierLoop& alpha);

// cosh(2 pi k) overflows doubles near k = 113, so mode tables stop here.
inline constexpr int kFibreModeCap = 100;

// Eigenbasis chi_{j,k}(t) = e^{2 pi i k t} e^{i s_j t} Phi(t) w_j of the
// covariant derivative, where w_j are holonomy eigenvectors and the exponents
// s_j in [0, 2 pi) make each section 1-periodic. The tabulated eigenvalue of
// chi_{j,k} is i (s_j + 2 pi k), and the sections are L2-orthonormal.
struct PolFibreBasis {
    GroupElement hol;
    std::vector<MatC> frame;  // Phi sampled at t = i/M for i in [0, M)
    MatC vectors;             // holonomy eigenvector columns w_j
    VecR exponents;           // s_j in [0, 2 pi)
    int mode_window = 0;      // tabulated |k| <= K
    TruncationConfig config;

    int grid() const { return static_cast<int>(frame.size()); }
    int fibre_dim() const { return static_cast<int>(vectors.cols()); }
    Complex eigenvalue(int j, int k) const;
    VecC section_sample(int j, int k, int i) const;  // chi_{j,k}(i/M)
    FourierLoop section(int j, int k, int window) const;
};

PolFibreBasis pol_fibre_basis(const LoopConnection& conn, int mode_window,
                              const TruncationConfig& cfg, int frame_grid = 321);

// L2 coordinates in the section basis, from a loop or from raw grid samples.
// Shape: fibre_dim x (2K+1), column k+K holding the z^k coordinates.
MatC basis_coords(const PolFibreBasis& basis, const FourierLoop& alpha);
MatC basis_coords_samples(const PolFibreBasis& basis,
                          const std::vector<VecC>& samples);

FourierLoop basis_synthesize(const PolFibreBasis& basis, const MatC& coords,
                             int window);

// L2 distance from the span of the tabulated sections.
double basis_residual(const PolFibreBasis& basis, const FourierLoop& alpha);
double basis_residual_samples(const PolFibreBasis& basis,
                              const std::vector<VecC>& samples);

// cos of the covariant derivative in eigencoordinates: the (j, k) coordinate
// is scaled by cosh(s_j + 2 pi k). Never applied to raw coefficient vectors.
MatC cos_d(const PolFibreBasis& basis, const MatC& coords);

// Cross-check route: project the covariant derivative onto the tabulated
// sections by quadrature and sum the even power series of the small matrix.
// terms > 0 keeps powers up to D^{2 terms}; terms == 0 extends the sum until
// it stops moving.
MatC cos_d_series(const LoopConnection& conn, const PolFibreBasis& basis,
                  const MatC& coords, int terms = 0);

struct Reparametrized {
    LoopConnection conn;
    FourierLoop alpha;
};

// Pulls the pair back along sigma(t) = t + phase(t): the connection form
// becomes A(sigma(t)) sigma'(t) and the section alpha becomes alpha of sigma,
// both resampled at `oversample` times the window rate. phase must be a real
// scalar loop keeping sigma' > 0.
Reparametrized reparametrize(const LoopConnection& conn, const FourierLoop& alpha,
                             const FourierLoop& phase, int oversample = 4);

struct SubbundleReport {
    double min_joint_tail = 0.0;
    int witness_mode = 0;  // candidate exponent attaining the minimum
    bool polynomial_preserved = false;
};

// Rank-1 subbundle of the trivial rank-2 bundle spanned by
// (1, exp(2 pi i (phase(t) + winding t))) / sqrt 2. Scans sections z^k u(t)
// for |k| <= max_mode and reports how far the best candidate is from keeping
// both components inside the window.
SubbundleReport subbundle_counterexample_check(int max_mode, double tol,
                                               const FourierLoop& phase,
                                               int winding);

// Default twist phase sin(2 pi t), winding 0.
SubbundleReport subbundle_counterexample_check(int max_mode, double tol);

}  // namespace loopforge
