#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "loopforge/pol_paths.hpp"

using namespace loopforge;

namespace {

TruncationConfig cfg(int n, int dim, double tol = 1e-9) {
    TruncationConfig c;
    c.max_mode = n;
    c.dim = dim;
    c.tol = tol;
    return c;
}

PolynomialPath plain_path(const MatC& xi, int window = 8) {
    PolynomialPath p;
    p.kind = GroupKind::Unitary;
    p.xi = AlgebraElement(xi, GroupKind::Unitary, 1e-7);
    p.gamma = FourierLoop::constant(MatC::Identity(xi.rows(), xi.cols()),
                                    cfg(window, static_cast<int>(xi.rows())));
    return p;
}

MatR rot2(double theta) {
    MatR r(2, 2);
    r << std::cos(theta), -std::sin(theta), std::sin(theta), std::cos(theta);
    return r;
}

}  // namespace

TEST_CASE("projection forgets the loop part") {
    std::mt19937_64 rng(11);
    const MatC xi = random_skew_hermitian(2, rng);
    PolynomialPath p = plain_path(xi);
    const MatC g = project(p);
    CHECK((g - p.evaluate(1.0) * p.evaluate(0.0).inverse()).norm() < 1e-12);

    // Right-multiplying by a unitary polynomial loop stays in the fibre.
    FourierLoop w(cfg(8, 2), 2);
    MatC e11 = MatC::Zero(2, 2), e22 = MatC::Zero(2, 2);
    e11(0, 0) = 1.0;
    e22(1, 1) = 1.0;
    w.set_coeff(1, e11);
    w.set_coeff(-1, e22);  // diag(z, z^{-1})
    const PathProduct q = right_multiply(p, w);
    CHECK(q.overflow_mass == 0.0);
    CHECK((project(q.path) - g).norm() < 1e-12);
    CHECK(path_membership_residual(q.path) < 1e-11);
}

TEST_CASE("actions conjugate the generator and evaluate pointwise") {
    std::mt19937_64 rng(19);
    const MatC xi = random_skew_hermitian(3, rng);
    const MatC g = random_unitary(3, rng);
    PolynomialPath p = plain_path(xi);

    const PolynomialPath lp = act_left(g, p);
    CHECK((lp.xi.mat - g * xi * g.adjoint()).norm() < 1e-12);
    for (double t : {0.0, 0.3, 0.8})
        CHECK((lp.evaluate(t) - g * p.evaluate(t)).norm() < 1e-11);
    CHECK((project(lp) - g * project(p) * g.adjoint()).norm() < 1e-11);

    const PolynomialPath cp = act_conj(g, p);
    for (double t : {0.1, 0.6})
        CHECK((cp.evaluate(t) - g * p.evaluate(t) * g.adjoint()).norm() < 1e-11);

    CHECK_THROWS_AS(act_left(2.0 * g, p), NotInGroup);
}

TEST_CASE("left action and right multiplication compose like g eta gamma h") {
    std::mt19937_64 rng(23);
    const MatC xi = random_skew_hermitian(2, rng);
    const MatC g = random_unitary(2, rng);
    const MatC h = random_unitary(2, rng);
    PolynomialPath p = plain_path(xi);
    const PolynomialPath moved =
        right_multiply(act_left(g, p), FourierLoop::constant(h, p.gamma.config()))
            .path;
    CHECK((moved.xi.mat - g * xi * g.adjoint()).norm() < 1e-12);
    for (double t : {0.2, 0.9})
        CHECK((moved.evaluate(t) - g * p.evaluate(t) * h).norm() < 1e-11);
}

TEST_CASE("fibre quotient of equal paths is the constant identity") {
    std::mt19937_64 rng(29);
    PolynomialPath p = plain_path(random_skew_hermitian(3, rng));
    const QuotientResult q = fibre_quotient(p, p, cfg(8, 3));
    CHECK(q.degree_bound == 0);
    CHECK(l2_distance(q.loop,
                      FourierLoop::constant(MatC::Identity(3, 3), cfg(8, 3))) <
          1e-12);
}

TEST_CASE("circle fibres quotient to integer modes") {
    for (int k : {1, 2, -3}) {
        PolynomialPath a = plain_path(MatC::Constant(1, 1, Complex(0, kTwoPi * k)), 8);
        PolynomialPath b = plain_path(MatC::Zero(1, 1), 8);
        const QuotientResult q = fibre_quotient(a, b, cfg(8, 1));
        CHECK(q.degree_bound == std::abs(k));
        CHECK(std::abs(q.loop.coeff(-k)(0, 0) - 1.0) < 1e-12);
        CHECK(q.loop.l2_norm() == doctest::Approx(1.0).epsilon(1e-12));

        const QuotientResult r = fibre_quotient(b, a, cfg(8, 1));
        CHECK(std::abs(r.loop.coeff(k)(0, 0) - 1.0) < 1e-12);
    }
}

TEST_CASE("non-commuting logs over one fibre give a polynomial quotient") {
    std::mt19937_64 rng(31);
    const double theta = 0.9;
    for (int trial = 0; trial < 20; ++trial) {
        // exp(xi) = e^{i theta} I in U_2 for both generators, different axes.
        const MatC v = random_unitary(2, rng);
        const MatC w = random_unitary(2, rng);
        MatC d1 = MatC::Zero(2, 2), d2 = MatC::Zero(2, 2);
        d1(0, 0) = Complex(0.0, theta + kTwoPi);
        d1(1, 1) = Complex(0.0, theta);
        d2(0, 0) = Complex(0.0, theta - kTwoPi);
        d2(1, 1) = Complex(0.0, theta);
        PolynomialPath a = plain_path(MatC(v * d1 * v.adjoint()), 8);
        PolynomialPath b = plain_path(MatC(w * d2 * w.adjoint()), 8);

        const QuotientResult q = fibre_quotient(a, b, cfg(8, 2));
        CHECK(q.degree_bound == 2);
        CHECK(fourier_tail_norm(q.loop, q.degree_bound) < 1e-9);
        CHECK(q.overflow_mass < 1e-18);

        // gamma reconstructs b from a pointwise.
        for (double t : {0.17, 0.52, 0.83}) {
            const MatC lhs = a.evaluate(t) * q.loop.evaluate(t);
            CHECK((lhs - b.evaluate(t)).norm() < 1e-10);
        }
    }
}

TEST_CASE("different fibres refuse to quotient") {
    PolynomialPath a = plain_path(MatC::Constant(1, 1, Complex(0, 0.5)));
    PolynomialPath b = plain_path(MatC::Constant(1, 1, Complex(0, 1.7)));
    CHECK_THROWS_AS(fibre_quotient(a, b, cfg(8, 1)), DifferentFibres);
}

TEST_CASE("unitary section round trips the projection") {
    std::mt19937_64 rng(37);
    for (int trial = 0; trial < 100; ++trial) {
        const MatC g = random_unitary(4, rng);
        PolynomialPath p;
        try {
            p = section_un(g, Complex(0.0, 0.0), cfg(4, 4));
        } catch (const EigenvalueOnCut&) {
            continue;
        }
        CHECK((project(p) - g).norm() < 1e-9);
        CHECK(p.degree() == 0);
        CHECK(path_membership_residual(p, 8) < 1e-10);
    }
    CHECK_THROWS_AS(section_un(-MatC::Identity(2, 2), Complex(0, 0), cfg(4, 2)),
                    EigenvalueOnCut);
}

TEST_CASE("special unitary section corrects the determinant winding") {
    SUBCASE("zero winding keeps the constant loop") {
        MatC g = MatC::Zero(2, 2);
        g(0, 0) = Complex(0, 1);
        g(1, 1) = Complex(0, -1);
        const PolynomialPath p = section_sun(g, Complex(0, 0), cfg(4, 2));
        CHECK(p.degree() == 0);
        CHECK((project(p) - g).norm() < 1e-12);
    }

    SUBCASE("scalar cube root of unity needs one twist") {
        const MatC g = std::polar(1.0, kTwoPi / 3.0) * MatC::Identity(3, 3);
        const PolynomialPath p = section_sun(g, Complex(0, 0), cfg(4, 3));
        CHECK(p.degree() == 1);
        CHECK(std::abs(p.gamma.coeff(-1)(0, 0) - 1.0) < 1e-12);
        CHECK((project(p) - g).norm() < 1e-11);
        CHECK(path_membership_residual(p, 64) < 1e-10);
        CHECK_THROWS_AS(section_sun(g, Complex(0, 0), cfg(0, 3)),
                        ModeOutsideWindow);
    }

    SUBCASE("random special unitaries stay special along the path") {
        std::mt19937_64 rng(41);
        int done = 0;
        while (done < 100) {
            const MatC g = random_special_unitary(3, rng);
            PolynomialPath p;
            try {
                p = section_sun(g, Complex(0.0, 0.0), cfg(4, 3));
            } catch (const EigenvalueOnCut&) {
                continue;
            }
            ++done;
            CHECK((project(p) - g).norm() < 1e-9);
            double worst_det = 0.0;
            for (int j = 0; j < 64; ++j) {
                const MatC v = p.evaluate(j / 64.0);
                worst_det = std::max(worst_det,
                                     std::abs(v.determinant() - Complex(1.0)));
            }
            CHECK(worst_det < 1e-10);
        }
    }

    SUBCASE("twist direction must be unit") {
        const MatC g = std::polar(1.0, kTwoPi / 3.0) * MatC::Identity(3, 3);
        VecC v = VecC::Zero(3);
        v(0) = 2.0;
        CHECK_THROWS_AS(section_sun(g, Complex(0, 0), cfg(4, 3), v),
                        NonUnitVector);
    }
}

TEST_CASE("wall eigenspace splits by real part") {
    MatR h = MatR::Zero(4, 4);
    h.block(0, 0, 2, 2) = rot2(2.6);
    h.block(2, 2, 2, 2) = rot2(0.3);
    const MatR basis = wall_eigenspace(h, 0.0);
    REQUIRE(basis.cols() == 2);
    // Span is the first coordinate plane.
    CHECK(basis.bottomRows(2).norm() < 1e-12);
    CHECK(orthogonality_residual(basis) < 1e-12);

    CHECK_THROWS_AS(wall_eigenspace(MatR(rot2(kPi / 2.0)), 0.0), EigenvalueOnWall);
}

TEST_CASE("special orthogonal section") {
    SUBCASE("identity point gives the constant path") {
        const MatR g = MatR::Identity(4, 4);
        const SonSection s = section_son(g, 0.0, make_reference_jfield(g, 0.0),
                                         cfg(4, 4));
        CHECK(s.path.degree() == 0);
        CHECK(s.path.xi.mat.norm() < 1e-12);
        CHECK((project(s.path) - g.cast<Complex>()).norm() < 1e-12);
    }

    SUBCASE("minus identity runs the half turn") {
        const MatR g = -MatR::Identity(2, 2);
        const SonSection s = section_son(g, 0.5, make_reference_jfield(g, 0.5),
                                         cfg(4, 2));
        CHECK((project(s.path) - g.cast<Complex>()).norm() < 1e-11);
        CHECK(s.loop_degree_bound <= 2);
        for (double t : {0.25, 0.75}) {
            const MatC expect =
                (std::cos(kPi * t) * MatR::Identity(2, 2) + std::sin(kPi * t) * s.j_h)
                    .cast<Complex>();
            CHECK((s.path.evaluate(t) - expect).norm() < 1e-10);
        }
    }

    SUBCASE("random points of a chart satisfy the residual gates") {
        std::mt19937_64 rng(53);
        int done = 0;
        while (done < 30) {
            const MatR g = random_special_orthogonal(4, rng);
            bool wall_clear = true;
            {
                Eigen::ComplexEigenSolver<MatC> es(g.cast<Complex>());
                for (int i = 0; i < 4; ++i)
                    if (std::abs(es.eigenvalues()(i).real()) < 0.1) wall_clear = false;
            }
            if (!wall_clear) continue;
            JField field;
            try {
                field = make_reference_jfield(g, 0.0);
            } catch (const Error&) {
                continue;
            }
            const MatR h = g * exp_skew(random_skew_symmetric(4, rng, 0.2)
                                            .cast<Complex>())
                                   .real();
            SonSection s;
            try {
                s = section_son(h, 0.0, field, cfg(6, 4));
            } catch (const Error&) {
                continue;
            }
            ++done;
            CHECK((project(s.path) - h.cast<Complex>()).norm() < 1e-8);
            CHECK(path_membership_residual(s.path, 64) < 1e-8);
            CHECK(fourier_tail_norm(s.path.gamma, s.loop_degree_bound) < 1e-7);
            CHECK(s.loop_degree_bound <= 2);
        }
    }

    SUBCASE("distant charts refuse through the projection") {
        MatR g = MatR::Zero(4, 4);
        g.block(0, 0, 2, 2) = rot2(2.8);
        g.block(2, 2, 2, 2) = rot2(0.2);
        MatR h = MatR::Zero(4, 4);
        h.block(0, 0, 2, 2) = rot2(0.2);
        h.block(2, 2, 2, 2) = rot2(2.8);
        CHECK_THROWS_AS(section_son(h, 0.0, make_reference_jfield(g, 0.0),
                                    cfg(4, 4)),
                        ProjectionDegenerate);
    }
}

TEST_CASE("sampled paths expose the monodromy") {
    std::mt19937_64 rng(61);
    const MatC xi = random_skew_hermitian(2, rng);
    const SampledPath sp = SampledPath::from_function(
        [&](double t) { return exp_skew(xi, t); }, 65, GroupKind::Unitary);
    CHECK((sp.monodromy() - exp_skew(xi)).norm() < 1e-12);
}
