#include "loopforge/pol_paths.hpp"

#include <Eigen/SVD>

namespace loopforge {

MatC PolynomialPath::evaluate(double t) const {
    return exp_skew(xi.mat, t) * gamma.evaluate(t);
}

int PolynomialPath::degree() const {
    int d = 0;
    for (const auto& [k, c] : gamma.coefficients())
        if (c.norm() > 0.0) d = std::max(d, std::abs(k));
    return d;
}

SampledPath SampledPath::from_function(const std::function<MatC(double)>& alpha,
                                       int grid, GroupKind kind) {
    if (grid < 2) throw Error("sampled path needs at least two grid points");
    SampledPath p;
    p.kind = kind;
    p.samples.reserve(grid);
    for (int j = 0; j < grid; ++j)
        p.samples.push_back(alpha(static_cast<double>(j) / (grid - 1)));
    return p;
}

MatC SampledPath::monodromy() const {
    return samples.back() * samples.front().inverse();
}

MatC project(const PolynomialPath& a) { return exp_skew(a.xi.mat); }

namespace {

PolynomialPath acted(const MatC& g, const PolynomialPath& a, bool conjugate,
                     double tol) {
    if (group_residual(g, a.kind) > tol)
        throw NotInGroup("acting element fails the group membership check");
    PolynomialPath out;
    out.kind = a.kind;
    const MatC ginv = g.adjoint();
    out.xi = AlgebraElement(g * a.xi.mat * ginv, a.xi.kind, 1e-6);
    FourierLoop gamma(a.gamma.config(), a.gamma.cols(), a.gamma.real_valued());
    for (const auto& [k, c] : a.gamma.coefficients())
        gamma.set_coeff(k, conjugate ? MatC(g * c * ginv) : MatC(g * c));
    out.gamma = std::move(gamma);
    return out;
}

}  // namespace

PolynomialPath act_left(const MatC& g, const PolynomialPath& a, double tol) {
    return acted(g, a, /*conjugate=*/false, tol);
}

PolynomialPath act_conj(const MatC& g, const PolynomialPath& a, double tol) {
    return acted(g, a, /*conjugate=*/true, tol);
}

PathProduct right_multiply(const PolynomialPath& a, const FourierLoop& loop) {
    ProductResult r = product(a.gamma, loop);
    PathProduct out;
    out.path = PolynomialPath{a.xi, std::move(r.loop), a.kind};
    out.overflow_mass = r.overflow_mass;
    return out;
}

int quotient_degree_bound(const MatC& xi1, const MatC& xi2, double tol) {
    const MatC g1 = exp_skew(xi1, 1.0, tol);
    const MatC g2 = exp_skew(xi2, 1.0, tol);
    if ((g1 - g2).norm() > std::max(tol, 1e-7))
        throw DifferentFibres("exp(xi1) and exp(xi2) disagree");
    const MatC zeta = commuting_log(g1, tol);
    return integer_mode_bound(zeta - xi1) + integer_mode_bound(xi2 - zeta);
}

QuotientResult fibre_quotient(const PolynomialPath& a, const PolynomialPath& b,
                              TruncationConfig cfg) {
    if ((project(a) - project(b)).norm() > std::max(cfg.tol, 1e-7))
        throw DifferentFibres("paths project to different group elements");
    QuotientResult res;
    res.degree_bound = quotient_degree_bound(a.xi.mat, b.xi.mat, cfg.tol) +
                       a.degree() + b.degree();
    const int grid = std::max(4 * res.degree_bound + 1, 4 * cfg.max_mode + 1);
    SampleResult s = from_function(
        [&](double t) {
            const MatC av = a.evaluate(t);
            return MatC(av.adjoint() * b.evaluate(t));
        },
        cfg, cfg.dim, grid);
    res.loop = std::move(s.loop);
    res.overflow_mass = s.out_of_window_mass;
    return res;
}

PolynomialPath section_un(const MatC& g, Complex s, TruncationConfig cfg) {
    if (group_residual(g, GroupKind::Unitary) > cfg.tol)
        throw NotInGroup("section_un needs a unitary matrix");
    PolynomialPath p;
    p.kind = GroupKind::Unitary;
    p.xi = AlgebraElement(log_sector(g, s, cfg.tol), GroupKind::Unitary, 1e-7);
    cfg.dim = static_cast<int>(g.rows());
    p.gamma = FourierLoop::constant(MatC::Identity(g.rows(), g.cols()), cfg);
    return p;
}

PolynomialPath section_sun(const MatC& g, Complex s, TruncationConfig cfg, VecC v) {
    if (group_residual(g, GroupKind::SpecialUnitary) > cfg.tol)
        throw NotInGroup("section_sun needs a special unitary matrix");
    const int n = static_cast<int>(g.rows());
    if (v.size() == 0) {
        v = VecC::Zero(n);
        v(0) = 1.0;
    }
    if (std::abs(v.norm() - 1.0) > cfg.tol)
        throw NonUnitVector("twist direction must be a unit vector");

    const MatC xi = log_sector(g, s, cfg.tol);
    const int k = trace_winding(xi);
    if (std::abs(k) > cfg.max_mode)
        throw ModeOutsideWindow("winding " + std::to_string(k) +
                                " does not fit the mode window");
    PolynomialPath p;
    p.kind = GroupKind::SpecialUnitary;
    p.xi = AlgebraElement(xi, GroupKind::Unitary, 1e-7);
    cfg.dim = n;
    FourierLoop gamma(cfg, n);
    const MatC proj = v * v.adjoint();
    if (k == 0) {
        gamma.set_coeff(0, MatC::Identity(n, n));
    } else {
        gamma.set_coeff(0, MatC::Identity(n, n) - proj);
        gamma.set_coeff(-k, proj);
    }
    p.gamma = std::move(gamma);
    return p;
}

MatR wall_eigenspace(const MatR& h, double r, double wall_tol) {
    const MatC hc = h.cast<Complex>();
    const auto groups = spectral_groups(hc, 1e-8 * std::max(1.0, hc.squaredNorm()),
                                        kEigenvalueGroupTol);
    std::vector<const SpectralGroup*> below;
    int dim = 0;
    for (const auto& grp : groups) {
        if (std::abs(grp.value.real() - r) <= wall_tol)
            throw EigenvalueOnWall("eigenvalue real part within tol of the wall");
        if (grp.value.real() < r) {
            below.push_back(&grp);
            dim += static_cast<int>(grp.basis.cols());
        }
    }
    const int n = static_cast<int>(h.rows());
    if (dim == 0) return MatR::Zero(n, 0);
    MatC cols(n, dim);
    int at = 0;
    for (const auto* grp : below) {
        cols.middleCols(at, grp->basis.cols()) = grp->basis;
        at += static_cast<int>(grp->basis.cols());
    }
    // The collected eigenspaces are conjugation-stable, so their real span has
    // the same dimension.
    MatR stacked(n, 2 * dim);
    stacked << cols.real(), cols.imag();
    Eigen::JacobiSVD<MatR> svd(stacked, Eigen::ComputeThinU);
    MatR basis(n, dim);
    int found = 0;
    for (int i = 0; i < svd.singularValues().size() && found < dim; ++i)
        if (svd.singularValues()(i) > 1e-8) basis.col(found++) = svd.matrixU().col(i);
    if (found != dim) throw Error("wall eigenspace realification failed");
    return basis;
}

JField make_reference_jfield(const MatR& g, double r, double tol) {
    if (group_residual(g.cast<Complex>(), GroupKind::SpecialOrthogonal) > 1e-8)
        throw NotInGroup("reference point must be special orthogonal");
    const MatR base = wall_eigenspace(g, r);
    const int d = static_cast<int>(base.cols());
    if (d % 2 != 0) throw OddDimension("reference eigenspace has odd dimension");
    const MatR pattern = d > 0 ? standard_j0(d) : MatR::Zero(0, 0);
    return [base, pattern, d, tol](const MatR& h, const MatR& e_minus) -> MatR {
        (void)h;
        if (e_minus.cols() != d)
            throw ProjectionDegenerate(
                "chart eigenspace dimension differs from the basepoint");
        if (d == 0) return MatR::Zero(e_minus.rows(), e_minus.rows());
        const MatR x = e_minus.transpose() * base;
        Eigen::JacobiSVD<MatR> svd(x, Eigen::ComputeFullU | Eigen::ComputeFullV);
        if (svd.singularValues().minCoeff() <= tol)
            throw ProjectionDegenerate("projection onto the basepoint eigenspace "
                                       "is singular");
        const MatR frame = e_minus * (svd.matrixU() * svd.matrixV().transpose());
        return frame * pattern * frame.transpose();
    };
}

SonSection section_son(const MatR& h, double r, const JField& field,
                       TruncationConfig cfg) {
    if (group_residual(h.cast<Complex>(), GroupKind::SpecialOrthogonal) > cfg.tol)
        throw NotInGroup("section_son needs a special orthogonal matrix");
    const int n = static_cast<int>(h.rows());
    const MatR basis = wall_eigenspace(h, r);
    const int d = static_cast<int>(basis.cols());
    if (d % 2 != 0) throw OddDimension("chart eigenspace has odd dimension");

    const MatR jh = field(h, basis);
    const MatR pm = basis * basis.transpose();
    if ((jh - pm * jh * pm).norm() > 1e-8 ||
        (jh * jh + pm).norm() > 1e-7)
        throw Error("J field did not return a complex structure on the eigenspace");

    // eps(h) = h exp(-pi J_h); the exponential is the reflection 1 - 2 P_-.
    const MatR eps = h * (MatR::Identity(n, n) - 2.0 * pm);
    MatC log_eps;
    try {
        log_eps = log_sector(eps.cast<Complex>(), Complex(0.0, 0.0), cfg.tol);
    } catch (const EigenvalueOnCut&) {
        throw EigenvalueMinusOne("eps(h) has an eigenvalue at -1");
    }
    if (log_eps.imag().norm() > 1e-8)
        throw Error("principal log of eps(h) is not real");
    const MatR a = log_eps.real();

    // xi agrees with log_0(eps) off E_-, and on E_- splits h|_- by the
    // decomposition xi_- = zeta with log_0(-h|_-) = zeta - pi J_zeta.
    MatR xi = a;
    MatR jz = MatR::Zero(n, n);
    if (d > 0) {
        const MatR h_minus = basis.transpose() * h * basis;
        const SoLogDecomposition dec = log_decompose_so(h_minus, cfg.tol);
        xi = a - pm * a * pm + basis * dec.xi * basis.transpose();
        jz = basis * dec.j.j * basis.transpose();
    }

    SonSection out;
    out.j_h = jh;
    out.loop_degree_bound =
        d > 0 ? quotient_degree_bound((kPi * jz).cast<Complex>(),
                                      (kPi * jh).cast<Complex>(), cfg.tol)
              : 0;

    // gamma(t) = exp(-t pi J_zeta) exp(t pi J_h); both factors are rotations
    // supported on E_-, so the closed form avoids matrix exponentials.
    auto half_turn = [&pm, n](const MatR& j, double t) {
        return MatR(MatR::Identity(n, n) - pm + std::cos(kPi * t) * pm +
                    std::sin(kPi * t) * j);
    };
    cfg.dim = n;
    const int grid = std::max(4 * std::max(out.loop_degree_bound, 1) + 1,
                              4 * cfg.max_mode + 1);
    SampleResult s = from_function(
        [&](double t) {
            return MatC((half_turn(jz, -t) * half_turn(jh, t)).cast<Complex>());
        },
        cfg, n, grid);

    out.path.kind = GroupKind::SpecialOrthogonal;
    out.path.xi = AlgebraElement(xi.cast<Complex>(), GroupKind::SpecialOrthogonal,
                                 1e-7);
    out.path.gamma = std::move(s.loop);
    return out;
}

double path_membership_residual(const PolynomialPath& a, int grid) {
    double worst = 0.0;
    for (int j = 0; j < grid; ++j) {
        const MatC v = a.evaluate(static_cast<double>(j) / grid);
        worst = std::max(worst, group_residual(v, a.kind));
    }
    return worst;
}

}  // namespace loopforge
