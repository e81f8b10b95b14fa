#include "loopforge/holonomy.hpp"

#include <algorithm>
#include <cmath>

namespace loopforge {

namespace {

// One RK4 sweep of psi' = -A(t) psi over [t0, t1], projecting back to the
// group every 64 steps. `step_offset` continues the projection cadence across
// piecewise sweeps.
MatC rk4_sweep(const FourierLoop& a, double t0, double t1, int nsteps, MatC psi,
               long& step_offset) {
    const double h = (t1 - t0) / nsteps;
    for (int i = 0; i < nsteps; ++i) {
        const double t = t0 + i * h;
        const MatC a0 = -a.evaluate(t);
        const MatC am = -a.evaluate(t + 0.5 * h);
        const MatC a1 = -a.evaluate(t + h);
        const MatC k1 = a0 * psi;
        const MatC k2 = am * (psi + 0.5 * h * k1);
        const MatC k3 = am * (psi + 0.5 * h * k2);
        const MatC k4 = a1 * (psi + h * k3);
        psi += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        if (++step_offset % 64 == 0) psi = polar_unitary(psi);
    }
    return psi;
}

void check_connection_form(const FourierLoop& a, GroupKind kind) {
    if (a.cols() != a.rows())
        throw DimensionMismatch("connection form must be a square matrix loop");
    for (int i = 0; i < 16; ++i) {
        const MatC v = a.evaluate(i / 16.0);
        const double scale = std::max(1.0, v.norm());
        if (algebra_residual(v, kind) > 1e-8 * scale)
            throw NotInAlgebra("connection form leaves the Lie algebra at t = " +
                               std::to_string(i / 16.0));
    }
}

int flat_index(int j, int k, int n, int window) { return (k + window) * n + j; }

}  // namespace

LoopConnection::LoopConnection(FourierLoop form, GroupKind kind_, int steps_)
    : a(std::move(form)), kind(kind_), steps(steps_) {
    if (steps < 1) throw Error("integrator needs at least one step");
    check_connection_form(a, kind);
}

GroupElement parallel_transport(const LoopConnection& conn, double t0, double t1) {
    MatC psi = identity_c(conn.dim());
    if (t0 != t1) {
        const int nsteps = std::max(
            1, static_cast<int>(std::ceil(std::abs(t1 - t0) * conn.steps)));
        long offset = 0;
        psi = rk4_sweep(conn.a, t0, t1, nsteps, std::move(psi), offset);
    }
    return GroupElement(std::move(psi), conn.kind, 1e-6);
}

GroupElement holonomy(const LoopConnection& conn) {
    return parallel_transport(conn, 0.0, 1.0);
}

ProductResult covariant_derivative(const LoopConnection& conn,
                                   const FourierLoop& alpha) {
    if (alpha.rows() != conn.dim())
        throw DimensionMismatch("section dimension does not match the connection");
    const int window = std::max(conn.a.max_mode(), alpha.max_mode());
    ProductResult res =
        product(rewindow(conn.a, window), rewindow(alpha, window));
    res.loop = add(derivative(rewindow(alpha, window)), res.loop);
    return res;
}

Complex PolFibreBasis::eigenvalue(int j, int k) const {
    if (j < 0 || j >= fibre_dim() || std::abs(k) > mode_window)
        throw ModeOutsideWindow("mode (" + std::to_string(j) + ", " +
                                std::to_string(k) + ") is not tabulated");
    return Complex(0.0, exponents(j) + kTwoPi * k);
}

VecC PolFibreBasis::section_sample(int j, int k, int i) const {
    const double t = static_cast<double>(i) / grid();
    const double mu = exponents(j) + kTwoPi * k;
    return std::polar(1.0, mu * t) * (frame[i] * vectors.col(j));
}

FourierLoop PolFibreBasis::section(int j, int k, int window) const {
    eigenvalue(j, k);  // bounds check
    std::vector<MatC> samples;
    samples.reserve(frame.size());
    for (int i = 0; i < grid(); ++i) samples.push_back(section_sample(j, k, i));
    TruncationConfig cfg = config;
    cfg.max_mode = window;
    return from_samples(samples, cfg).loop;
}

PolFibreBasis pol_fibre_basis(const LoopConnection& conn, int mode_window,
                              const TruncationConfig& cfg, int frame_grid) {
    if (mode_window < 0 || mode_window > kFibreModeCap)
        throw ModeOutsideWindow("mode window must lie in [0, " +
                                std::to_string(kFibreModeCap) + "]");
    if (cfg.dim != conn.dim())
        throw DimensionMismatch("basis config dimension mismatch");
    if (frame_grid < 2) throw Error("frame grid too small");

    PolFibreBasis basis;
    basis.mode_window = mode_window;
    basis.config = cfg;
    basis.frame.reserve(frame_grid);

    // One pass over [0, 1], storing the fundamental solution at i/M.
    const int per_interval =
        std::max(1, (conn.steps + frame_grid - 1) / frame_grid);
    MatC psi = identity_c(conn.dim());
    long offset = 0;
    basis.frame.push_back(psi);
    for (int i = 0; i < frame_grid; ++i) {
        psi = rk4_sweep(conn.a, static_cast<double>(i) / frame_grid,
                        static_cast<double>(i + 1) / frame_grid, per_interval,
                        std::move(psi), offset);
        if (i + 1 < frame_grid) basis.frame.push_back(psi);
    }
    basis.hol = GroupElement(psi, conn.kind, 1e-6);

    const auto groups =
        spectral_groups(basis.hol.mat, 1e-6, kEigenvalueGroupTol);
    const int n = conn.dim();
    basis.vectors = MatC(n, n);
    basis.exponents = VecR(n);
    int col = 0;
    for (const auto& g : groups) {
        double s = -std::arg(g.value);
        if (s < 0.0) s += kTwoPi;
        if (s >= kTwoPi - cfg.tol) s = 0.0;  // ties at the seam go to 0
        for (int c = 0; c < g.basis.cols(); ++c, ++col) {
            basis.vectors.col(col) = g.basis.col(c);
            basis.exponents(col) = s;
        }
    }
    return basis;
}

MatC basis_coords_samples(const PolFibreBasis& basis,
                          const std::vector<VecC>& samples) {
    const int m = basis.grid();
    if (static_cast<int>(samples.size()) != m)
        throw WindowMismatch("sample count does not match the stored frame grid");
    const int n = basis.fibre_dim();
    const int window = basis.mode_window;
    MatC coords = MatC::Zero(n, 2 * window + 1);
    for (int i = 0; i < m; ++i) {
        if (samples[i].rows() != n)
            throw DimensionMismatch("sample has wrong fibre dimension");
        for (int j = 0; j < n; ++j)
            for (int k = -window; k <= window; ++k)
                coords(j, k + window) +=
                    basis.section_sample(j, k, i).dot(samples[i]) /
                    static_cast<double>(m);
    }
    return coords;
}

MatC basis_coords(const PolFibreBasis& basis, const FourierLoop& alpha) {
    if (alpha.rows() != basis.fibre_dim() || alpha.cols() != 1)
        throw DimensionMismatch("expected a vector loop over the fibre");
    std::vector<VecC> samples;
    samples.reserve(basis.grid());
    for (int i = 0; i < basis.grid(); ++i)
        samples.push_back(alpha.evaluate(static_cast<double>(i) / basis.grid()));
    return basis_coords_samples(basis, samples);
}

namespace {

std::vector<VecC> synth_samples(const PolFibreBasis& basis, const MatC& coords) {
    const int n = basis.fibre_dim();
    const int window = basis.mode_window;
    if (coords.rows() != n || coords.cols() != 2 * window + 1)
        throw ModeOutsideWindow("coordinate block does not match the mode table");
    std::vector<VecC> out(basis.grid(), VecC::Zero(n));
    for (int i = 0; i < basis.grid(); ++i)
        for (int j = 0; j < n; ++j)
            for (int k = -window; k <= window; ++k)
                out[i] += coords(j, k + window) * basis.section_sample(j, k, i);
    return out;
}

}  // namespace

FourierLoop basis_synthesize(const PolFibreBasis& basis, const MatC& coords,
                             int window) {
    const auto samples = synth_samples(basis, coords);
    std::vector<MatC> blocks(samples.begin(), samples.end());
    TruncationConfig cfg = basis.config;
    cfg.max_mode = window;
    return from_samples(blocks, cfg).loop;
}

double basis_residual_samples(const PolFibreBasis& basis,
                              const std::vector<VecC>& samples) {
    const auto fitted = synth_samples(basis, basis_coords_samples(basis, samples));
    double sq = 0.0;
    for (int i = 0; i < basis.grid(); ++i)
        sq += (samples[i] - fitted[i]).squaredNorm();
    return std::sqrt(sq / basis.grid());
}

double basis_residual(const PolFibreBasis& basis, const FourierLoop& alpha) {
    if (alpha.rows() != basis.fibre_dim() || alpha.cols() != 1)
        throw DimensionMismatch("expected a vector loop over the fibre");
    std::vector<VecC> samples;
    samples.reserve(basis.grid());
    for (int i = 0; i < basis.grid(); ++i)
        samples.push_back(alpha.evaluate(static_cast<double>(i) / basis.grid()));
    return basis_residual_samples(basis, samples);
}

MatC cos_d(const PolFibreBasis& basis, const MatC& coords) {
    const int n = basis.fibre_dim();
    const int window = basis.mode_window;
    if (coords.rows() != n || coords.cols() != 2 * window + 1)
        throw ModeOutsideWindow("coordinate block does not match the mode table");
    MatC out = coords;
    for (int j = 0; j < n; ++j)
        for (int k = -window; k <= window; ++k)
            out(j, k + window) *= std::cosh(basis.exponents(j) + kTwoPi * k);
    return out;
}

MatC cos_d_series(const LoopConnection& conn, const PolFibreBasis& basis,
                  const MatC& coords, int terms) {
    const int n = basis.fibre_dim();
    const int window = basis.mode_window;
    if (coords.rows() != n || coords.cols() != 2 * window + 1)
        throw ModeOutsideWindow("coordinate block does not match the mode table");

    // Matrix of D in the section basis piped through honest Fourier arithmetic:
    // synthesize each section wide enough that its tail is negligible, apply
    // alpha' + A alpha, and read the result back by quadrature.
    const int wide = std::min(window + 48, (basis.grid() - 1) / 2);
    const int dim = n * (2 * window + 1);
    MatC dmat(dim, dim);
    for (int j = 0; j < n; ++j) {
        for (int k = -window; k <= window; ++k) {
            const FourierLoop chi = basis.section(j, k, wide);
            const FourierLoop dchi = covariant_derivative(conn, chi).loop;
            std::vector<VecC> samples;
            samples.reserve(basis.grid());
            for (int i = 0; i < basis.grid(); ++i)
                samples.push_back(
                    dchi.evaluate(static_cast<double>(i) / basis.grid()));
            const MatC col = basis_coords_samples(basis, samples);
            for (int jj = 0; jj < n; ++jj)
                for (int kk = -window; kk <= window; ++kk)
                    dmat(flat_index(jj, kk, n, window),
                         flat_index(j, k, n, window)) = col(jj, kk + window);
        }
    }

    const MatC square = dmat * dmat;
    MatC sum = MatC::Identity(dim, dim);
    MatC term = MatC::Identity(dim, dim);
    const int cap = terms > 0 ? terms : 300;
    for (int m = 1; m <= cap; ++m) {
        term = -(term * square) / ((2.0 * m - 1.0) * (2.0 * m));
        sum += term;
        if (terms == 0 && term.norm() <= 1e-18 * sum.norm()) break;
    }

    VecC flat(dim);
    for (int j = 0; j < n; ++j)
        for (int k = -window; k <= window; ++k)
            flat(flat_index(j, k, n, window)) = coords(j, k + window);
    flat = sum * flat;
    MatC out(n, 2 * window + 1);
    for (int j = 0; j < n; ++j)
        for (int k = -window; k <= window; ++k)
            out(j, k + window) = flat(flat_index(j, k, n, window));
    return out;
}

Reparametrized reparametrize(const LoopConnection& conn, const FourierLoop& alpha,
                             const FourierLoop& phase, int oversample) {
    if (phase.rows() != 1 || phase.cols() != 1)
        throw DimensionMismatch("reparametrization phase must be scalar");
    if (oversample < 1) throw Error("oversample factor must be positive");
    const FourierLoop rate = derivative(phase);
    const auto sigma = [&](double t) {
        return t + phase.evaluate(t)(0, 0).real();
    };
    const auto speed = [&](double t) { return 1.0 + rate.evaluate(t)(0, 0).real(); };

    const FourierLoop form =
        from_function(
            [&](double t) { return MatC(conn.a.evaluate(sigma(t)) * speed(t)); },
            conn.a.config(), conn.a.cols(),
            oversample * (4 * conn.a.max_mode() + 1))
            .loop;
    const FourierLoop pulled =
        from_function([&](double t) { return alpha.evaluate(sigma(t)); },
                      alpha.config(), alpha.cols(),
                      oversample * (4 * alpha.max_mode() + 1))
            .loop;
    return Reparametrized{LoopConnection(form, conn.kind, conn.steps), pulled};
}

SubbundleReport subbundle_counterexample_check(int max_mode, double tol,
                                               const FourierLoop& phase,
                                               int winding) {
    if (phase.rows() != 1 || phase.cols() != 1)
        throw DimensionMismatch("twist phase must be scalar");
    if (max_mode < 1) throw Error("window must contain at least mode 1");

    const int m = 16 * max_mode + 1;
    std::vector<Complex> twist(m);
    for (int i = 0; i < m; ++i) {
        const double t = static_cast<double>(i) / m;
        twist[i] = std::polar(
            1.0, kTwoPi * (phase.evaluate(t)(0, 0).real() + winding * t));
    }

    TruncationConfig cfg;
    cfg.max_mode = max_mode;
    cfg.dim = 1;
    cfg.tol = tol;
    SubbundleReport report;
    bool first = true;
    for (int k = -max_mode; k <= max_mode; ++k) {
        std::vector<MatC> samples(m);
        for (int i = 0; i < m; ++i) {
            const double t = static_cast<double>(i) / m;
            samples[i] =
                MatC::Constant(1, 1, twist[i] * std::polar(1.0, kTwoPi * k * t));
        }
        const double tail = std::sqrt(from_samples(samples, cfg).out_of_window_mass);
        if (first || tail < report.min_joint_tail) {
            report.min_joint_tail = tail;
            report.witness_mode = k;
            first = false;
        }
    }
    report.polynomial_preserved = report.min_joint_tail <= tol;
    return report;
}

SubbundleReport subbundle_counterexample_check(int max_mode, double tol) {
    TruncationConfig cfg;
    cfg.max_mode = std::max(1, max_mode);
    cfg.dim = 1;
    cfg.tol = tol;
    FourierLoop phase(cfg, 1, true);
    phase.set_coeff(1, MatC::Constant(1, 1, Complex(0.0, -0.5)));
    phase.set_coeff(-1, MatC::Constant(1, 1, Complex(0.0, 0.5)));
    return subbundle_counterexample_check(max_mode, tol, phase, 0);
}

}  // namespace loopforge
