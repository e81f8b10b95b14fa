#include "loopforge/suites.hpp"

#include "loopforge/dirac_flat.hpp"
#include "loopforge/holonomy.hpp"
#include "loopforge/loop_io.hpp"
#include "loopforge/pol_paths.hpp"
#include "loopforge/weighted_dual.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <iomanip>
#include <random>
#include <sstream>

namespace loopforge {

namespace {

// A check reports its worst residual; detail carries the offending data when
// the residual is going to fail, or the reason when the check is skipped.
struct CheckOutcome {
    double residual = 0.0;
    bool skipped = false;
    std::string detail;
};

using CheckFn = CheckOutcome (*)(const SuiteConfig&, std::mt19937_64&);

struct CheckDef {
    const char* name;
    const char* anchor;
    double fixed_tol;  // > 0 pins the tolerance; otherwise tol_scale * cfg.tol
    double tol_scale;
    CheckFn fn;
};

TruncationConfig trunc(int n, int dim, double tol = 1e-9) {
    TruncationConfig c;
    c.max_mode = n;
    c.dim = dim;
    c.tol = tol;
    return c;
}

std::string matrix_detail(const std::string& label, const MatC& m) {
    std::ostringstream out;
    out << std::setprecision(17) << label << " = [";
    for (int r = 0; r < m.rows(); ++r) {
        if (r) out << "; ";
        for (int c = 0; c < m.cols(); ++c) {
            if (c) out << ", ";
            out << m(r, c).real() << (m(r, c).imag() < 0 ? "-" : "+")
                << std::abs(m(r, c).imag()) << "i";
        }
    }
    out << "]";
    return out.str();
}

std::string loop_detail(const std::string& label, const FourierLoop& f) {
    return label + " = " + loop_to_json(f).dump();
}

Complex unit_phase(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> angle(0.0, kTwoPi);
    return std::polar(1.0, angle(rng));
}

FourierLoop random_loop(const TruncationConfig& c, int support, int cols,
                        std::mt19937_64& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    FourierLoop f(c, cols);
    for (int k = -support; k <= support; ++k) {
        MatC m(c.dim, cols);
        for (int r = 0; r < c.dim; ++r)
            for (int cc = 0; cc < cols; ++cc)
                m(r, cc) = Complex(gauss(rng), gauss(rng)) / (1.0 + k * k);
        f.set_coeff(k, m);
    }
    return f;
}

// Skew-Hermitian-valued loop, the shape every connection form takes.
FourierLoop random_skew_form(int dim, int support, double scale,
                             std::mt19937_64& rng, int window) {
    FourierLoop f(trunc(window, dim), dim);
    f.set_coeff(0, random_skew_hermitian(dim, rng, scale));
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (int k = 1; k <= support; ++k) {
        MatC c(dim, dim);
        for (int r = 0; r < dim; ++r)
            for (int cc = 0; cc < dim; ++cc)
                c(r, cc) = scale * Complex(gauss(rng), gauss(rng)) /
                           double(k * k);
        f.set_coeff(k, c);
        f.set_coeff(-k, MatC(-c.adjoint()));
    }
    return f;
}

FourierLoop scalar_loop(const std::map<int, Complex>& modes, int window) {
    FourierLoop f(trunc(window, 1), 1);
    for (const auto& [k, v] : modes) f.set_coeff(k, MatC::Constant(1, 1, v));
    return f;
}

// ---------------------------------------------------------------------------
// loops

CheckOutcome check_loops_leibniz(const SuiteConfig& cfg, std::mt19937_64& rng) {
    CheckOutcome out;
    const int half = std::max(1, cfg.modes / 2);
    for (int trial = 0; trial < 5; ++trial) {
        const FourierLoop f =
            random_loop(trunc(cfg.modes, cfg.dim), half, cfg.dim, rng);
        const FourierLoop g =
            random_loop(trunc(cfg.modes, cfg.dim), half, cfg.dim, rng);
        const FourierLoop lhs = derivative(product(f, g).loop);
        const FourierLoop rhs = add(product(derivative(f), g).loop,
                                    product(f, derivative(g)).loop);
        const double d = l2_distance(lhs, rhs);
        if (d > out.residual) {
            out.residual = d;
            out.detail = loop_detail("f", f) + "; " + loop_detail("g", g);
        }
    }
    return out;
}

CheckOutcome check_loops_rotate_product(const SuiteConfig& cfg,
                                        std::mt19937_64& rng) {
    CheckOutcome out;
    const int half = std::max(1, cfg.modes / 2);
    for (int trial = 0; trial < 5; ++trial) {
        const FourierLoop f =
            random_loop(trunc(cfg.modes, cfg.dim), half, cfg.dim, rng);
        const FourierLoop g =
            random_loop(trunc(cfg.modes, cfg.dim), half, cfg.dim, rng);
        const Complex lambda = unit_phase(rng);
        const double d = l2_distance(rotate(product(f, g).loop, lambda),
                                     product(rotate(f, lambda),
                                             rotate(g, lambda)).loop);
        if (d > out.residual) {
            out.residual = d;
            out.detail = loop_detail("f", f) + "; " + loop_detail("g", g);
        }
    }
    return out;
}

CheckOutcome check_loops_involution(const SuiteConfig& cfg,
                                    std::mt19937_64& rng) {
    CheckOutcome out;
    for (int trial = 0; trial < 5; ++trial) {
        const FourierLoop f =
            random_loop(trunc(cfg.modes, cfg.dim), cfg.modes, cfg.dim, rng);
        const double d = l2_distance(involute(involute(f)), f);
        if (d > out.residual) {
            out.residual = d;
            out.detail = loop_detail("f", f);
        }
    }
    return out;
}

CheckOutcome check_loops_rotate_compose(const SuiteConfig& cfg,
                                        std::mt19937_64& rng) {
    CheckOutcome out;
    for (int trial = 0; trial < 5; ++trial) {
        const FourierLoop f =
            random_loop(trunc(cfg.modes, cfg.dim), cfg.modes, cfg.dim, rng);
        const Complex lambda = unit_phase(rng);
        const Complex mu = unit_phase(rng);
        const double d = l2_distance(rotate(rotate(f, lambda), mu),
                                     rotate(f, lambda * mu));
        if (d > out.residual) {
            out.residual = d;
            out.detail = loop_detail("f", f);
        }
    }
    return out;
}

CheckOutcome check_loops_shift_compose(const SuiteConfig& cfg,
                                       std::mt19937_64& rng) {
    CheckOutcome out;
    const int room = std::max(1, cfg.modes / 4);
    std::uniform_int_distribution<int> pick(-room, room);
    for (int trial = 0; trial < 5; ++trial) {
        const FourierLoop f =
            random_loop(trunc(cfg.modes, cfg.dim), cfg.modes / 2, cfg.dim, rng);
        const int q = pick(rng);
        const int r = pick(rng);
        const ShiftResult two = shift(shift(f, q).loop, r);
        const ShiftResult one = shift(f, q + r);
        const double d = l2_distance(two.loop, one.loop);
        if (d > out.residual) {
            out.residual = d;
            out.detail = loop_detail("f", f);
        }
    }
    return out;
}

CheckOutcome check_loops_derivative_rotate(const SuiteConfig& cfg,
                                           std::mt19937_64& rng) {
    CheckOutcome out;
    for (int trial = 0; trial < 5; ++trial) {
        const FourierLoop f =
            random_loop(trunc(cfg.modes, cfg.dim), cfg.modes, cfg.dim, rng);
        const Complex lambda = unit_phase(rng);
        const double d = l2_distance(derivative(rotate(f, lambda)),
                                     rotate(derivative(f), lambda));
        if (d > out.residual) {
            out.residual = d;
            out.detail = loop_detail("f", f);
        }
    }
    return out;
}

CheckOutcome check_loops_real_flag(const SuiteConfig& cfg,
                                   std::mt19937_64& rng) {
    CheckOutcome out;
    std::normal_distribution<double> gauss(0.0, 1.0);
    FourierLoop f(trunc(std::max(2, cfg.modes), 1), 1, true);
    f.set_coeff(0, MatC::Constant(1, 1, Complex(gauss(rng), 0.0)));
    const Complex c(gauss(rng), gauss(rng));
    f.set_coeff(1, MatC::Constant(1, 1, c));
    f.set_coeff(-1, MatC::Constant(1, 1, std::conj(c)));

    bool flags_ok = f.real_valued() && derivative(f).real_valued() &&
                    involute(f).real_valued() &&
                    product(f, f).loop.real_valued() &&
                    rotate(f, Complex(-1.0, 0.0)).real_valued() &&
                    !rotate(f, Complex(0.0, 1.0)).real_valued();
    out.residual = std::max({f.reality_residual(),
                             derivative(f).reality_residual(),
                             involute(f).reality_residual(),
                             product(f, f).loop.reality_residual(),
                             rotate(f, Complex(-1.0, 0.0)).reality_residual()});
    if (!flags_ok) {
        out.residual = 1.0;
        out.detail = loop_detail("f", f) + "; real flag not closed";
    }
    return out;
}

// ---------------------------------------------------------------------------
// lie

CheckOutcome check_lie_sector_roundtrip(const SuiteConfig& cfg,
                                        std::mt19937_64& rng) {
    CheckOutcome out;
    std::uniform_real_distribution<double> angle(-kPi, kPi);
    for (int n = 2; n <= 4; ++n) {
        int done = 0;
        for (int attempt = 0; attempt < 4000 && done < 200; ++attempt) {
            const MatC g = random_unitary(n, rng);
            const Complex s(0.0, angle(rng));
            const Complex s2(0.0, angle(rng));
            try {
                for (const Complex sec : {s, s2}) {
                    const MatC xi = log_sector(g, sec, cfg.tol);
                    const double d = (exp_skew(xi) - g).norm();
                    if (d > out.residual) {
                        out.residual = d;
                        out.detail = matrix_detail("g", g);
                    }
                }
            } catch (const EigenvalueOnCut&) {
                continue;
            }
            ++done;
        }
    }
    return out;
}

CheckOutcome check_lie_sector_strip(const SuiteConfig& cfg,
                                    std::mt19937_64& rng) {
    CheckOutcome out;
    std::uniform_real_distribution<double> angle(-kPi, kPi);
    for (int n = 2; n <= 4; ++n) {
        int done = 0;
        for (int attempt = 0; attempt < 4000 && done < 100; ++attempt) {
            const MatC g = random_unitary(n, rng);
            const Complex s(0.0, angle(rng));
            MatC xi;
            try {
                xi = log_sector(g, s, cfg.tol);
            } catch (const EigenvalueOnCut&) {
                continue;
            }
            ++done;
            Eigen::ComplexEigenSolver<MatC> es(xi);
            for (int i = 0; i < n; ++i) {
                const Complex ev = es.eigenvalues()(i);
                const double off = std::max(
                    std::abs(ev.real() - s.real()),
                    std::max(0.0, std::abs(ev.imag() - s.imag()) - kPi));
                if (off > out.residual) {
                    out.residual = off;
                    out.detail = matrix_detail("g", g);
                }
            }
        }
    }
    return out;
}

CheckOutcome check_lie_sector_locally_constant(const SuiteConfig& cfg,
                                               std::mt19937_64& rng) {
    CheckOutcome out;
    for (int trial = 0; trial < 50; ++trial) {
        const MatC g = random_unitary(3, rng);
        Eigen::ComplexEigenSolver<MatC> es(g);
        std::vector<double> phases;
        for (int i = 0; i < 3; ++i)
            phases.push_back(std::arg(es.eigenvalues()(i)));
        std::sort(phases.begin(), phases.end());
        // Largest circular gap between adjacent eigenphases hosts both cuts.
        double best = 0.0, lo = 0.0;
        for (int i = 0; i < 3; ++i) {
            const double next = (i + 1 < 3) ? phases[i + 1] : phases[0] + kTwoPi;
            if (next - phases[i] > best) {
                best = next - phases[i];
                lo = phases[i];
            }
        }
        const Complex s1(0.0, lo + 0.25 * best - kPi);
        const Complex s2(0.0, lo + 0.75 * best - kPi);
        const double d =
            (log_sector(g, s1, cfg.tol) - log_sector(g, s2, cfg.tol)).norm();
        if (d > out.residual) {
            out.residual = d;
            out.detail = matrix_detail("g", g);
        }
    }
    return out;
}

CheckOutcome check_lie_sector_shift(const SuiteConfig& cfg,
                                    std::mt19937_64& rng) {
    CheckOutcome out;
    std::uniform_real_distribution<double> angle(-kPi, kPi);
    int done = 0;
    for (int attempt = 0; attempt < 4000 && done < 100; ++attempt) {
        const MatC g = random_unitary(3, rng);
        const Complex s(0.0, angle(rng));
        MatC base, moved;
        try {
            base = log_sector(g, s, cfg.tol);
            moved = log_sector(g, s + Complex(0.0, kTwoPi), cfg.tol);
        } catch (const EigenvalueOnCut&) {
            continue;
        }
        ++done;
        const double d =
            (moved - base - Complex(0.0, kTwoPi) * identity_c(3)).norm();
        if (d > out.residual) {
            out.residual = d;
            out.detail = matrix_detail("g", g);
        }
    }
    return out;
}

CheckOutcome check_lie_unitary_structure(const SuiteConfig& cfg,
                                         std::mt19937_64& rng) {
    CheckOutcome out;
    for (const int dim : {2, 4}) {
        int done = 0;
        for (int attempt = 0; attempt < 2000 && done < 25; ++attempt) {
            const MatR xi = random_skew_symmetric(dim, rng);
            UnitaryStructure j;
            try {
                j = unitary_structure_from(xi, cfg.tol);
            } catch (const Error&) {
                continue;  // skew draw too close to singular
            }
            ++done;
            const double d =
                std::max(j.residual(), (j.j * xi - xi * j.j).norm());
            if (d > out.residual) {
                out.residual = d;
                out.detail = matrix_detail("xi", xi.cast<Complex>());
            }
        }
    }
    return out;
}

CheckOutcome check_lie_so_log(const SuiteConfig& cfg, std::mt19937_64& rng) {
    CheckOutcome out;
    int done = 0;
    for (int attempt = 0; attempt < 4000 && done < 100; ++attempt) {
        const MatR g = random_special_orthogonal(4, rng);
        double rebuild = 0.0, split = 0.0;
        try {
            const SoLogDecomposition dec = log_decompose_so(g, cfg.tol);
            rebuild =
                (exp_skew(dec.xi.cast<Complex>()) - g.cast<Complex>()).norm();
            const MatC log0 =
                log_sector(-g.cast<Complex>(), Complex(0.0, 0.0), cfg.tol);
            split = (log0 - (dec.xi - kPi * dec.j.j).cast<Complex>()).norm();
        } catch (const Error&) {
            continue;  // draw sat on the +1 eigenvalue wall
        }
        ++done;
        const double d = std::max(rebuild, split);
        if (d > out.residual) {
            out.residual = d;
            out.detail = matrix_detail("g", g.cast<Complex>());
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// paths

PolynomialPath plain_path(const MatC& xi, int window, double tol) {
    PolynomialPath p;
    p.kind = GroupKind::Unitary;
    p.xi = AlgebraElement(xi, GroupKind::Unitary, std::max(tol, 1e-7));
    p.gamma = FourierLoop::constant(
        MatC::Identity(xi.rows(), xi.cols()),
        trunc(window, static_cast<int>(xi.rows())));
    return p;
}

CheckOutcome check_paths_section_roundtrip(const SuiteConfig& cfg,
                                           std::mt19937_64& rng) {
    CheckOutcome out;
    if (cfg.modes < 4) {
        out.skipped = true;
        out.detail = "window N < 4 cannot hold the section loop degree";
        return out;
    }
    const int window = std::min(cfg.modes, 8);

    int done = 0;
    for (int attempt = 0; attempt < 2000 && done < 20; ++attempt) {  // U_4
        const MatC g = random_unitary(4, rng);
        try {
            const PolynomialPath p =
                section_un(g, Complex(0.0, 0.0), trunc(window, 4));
            const double d = (project(p) - g).norm();
            if (d > out.residual) {
                out.residual = d;
                out.detail = matrix_detail("g", g);
            }
        } catch (const EigenvalueOnCut&) {
            continue;
        }
        ++done;
    }

    done = 0;
    for (int attempt = 0; attempt < 2000 && done < 20; ++attempt) {  // SU_3
        const MatC g = random_special_unitary(3, rng);
        try {
            const PolynomialPath p =
                section_sun(g, Complex(0.0, 0.0), trunc(window, 3));
            const double d = (project(p) - g).norm();
            if (d > out.residual) {
                out.residual = d;
                out.detail = matrix_detail("g", g);
            }
        } catch (const EigenvalueOnCut&) {
            continue;
        }
        ++done;
    }

    done = 0;
    for (int attempt = 0; attempt < 2000 && done < 10; ++attempt) {
        // SO_4 sections live in a chart around a wall-clear basepoint.
        const MatR g = random_special_orthogonal(4, rng);
        Eigen::ComplexEigenSolver<MatC> es(g.cast<Complex>());
        bool clear = true;
        for (int i = 0; i < 4; ++i)
            if (std::abs(es.eigenvalues()(i).real()) < 0.1) clear = false;
        if (!clear) continue;
        try {
            const JField field = make_reference_jfield(g, 0.0, cfg.tol);
            const MatR h =
                g *
                exp_skew(random_skew_symmetric(4, rng, 0.2).cast<Complex>())
                    .real();
            const SonSection s = section_son(h, 0.0, field, trunc(window, 4));
            const double d = std::max(
                (project(s.path) - h.cast<Complex>()).norm(),
                path_membership_residual(s.path, 32));
            if (d > out.residual) {
                out.residual = d;
                out.detail = matrix_detail("h", h.cast<Complex>());
            }
        } catch (const Error&) {
            continue;
        }
        ++done;
    }
    return out;
}

CheckOutcome check_paths_quotient(const SuiteConfig& cfg,
                                  std::mt19937_64& rng) {
    CheckOutcome out;
    if (cfg.modes < 8) {
        out.skipped = true;
        out.detail =
            "window N < 8 cannot resolve the derived degree bound (spreads "
            "up to 4)";
        return out;
    }
    std::uniform_real_distribution<double> angle(-2.5, 2.5);
    std::uniform_int_distribution<int> winding(-2, 2);
    for (int trial = 0; trial < 25; ++trial) {
        const double theta = angle(rng);
        const MatC v = random_unitary(3, rng);
        const MatC w = random_unitary(3, rng);
        MatC d1 = MatC::Zero(3, 3), d2 = MatC::Zero(3, 3);
        for (int i = 0; i < 3; ++i) {
            d1(i, i) = Complex(0.0, theta + kTwoPi * winding(rng));
            d2(i, i) = Complex(0.0, theta + kTwoPi * winding(rng));
        }
        const PolynomialPath a =
            plain_path(MatC(v * d1 * v.adjoint()), cfg.modes, cfg.tol);
        const PolynomialPath b =
            plain_path(MatC(w * d2 * w.adjoint()), cfg.modes, cfg.tol);
        const QuotientResult q = fibre_quotient(a, b, trunc(cfg.modes, 3));
        const double tail = fourier_tail_norm(q.loop, q.degree_bound);
        if (tail > out.residual) {
            out.residual = tail;
            out.detail = matrix_detail("xi1", MatC(v * d1 * v.adjoint())) +
                         "; " + matrix_detail("xi2", MatC(w * d2 * w.adjoint()));
        }
    }
    return out;
}

CheckOutcome check_paths_actions(const SuiteConfig& cfg,
                                 std::mt19937_64& rng) {
    CheckOutcome out;
    for (int trial = 0; trial < 20; ++trial) {
        const PolynomialPath p =
            plain_path(random_skew_hermitian(3, rng), std::max(4, cfg.modes),
                       cfg.tol);
        const MatC g = random_unitary(3, rng);
        const MatC base = project(p);
        const PolynomialPath left = act_left(g, p, cfg.tol);
        const PolynomialPath conj = act_conj(g, p, cfg.tol);
        double d = std::max(
            {(project(left) - g * base * g.adjoint()).norm(),
             (project(conj) - g * base * g.adjoint()).norm(),
             path_membership_residual(left, 16),
             path_membership_residual(conj, 16)});
        for (const double t : {0.0, 0.3, 0.8})
            d = std::max(
                {d, (left.evaluate(t) - g * p.evaluate(t)).norm(),
                 (conj.evaluate(t) - g * p.evaluate(t) * g.adjoint()).norm()});
        if (d > out.residual) {
            out.residual = d;
            out.detail = matrix_detail("g", g);
        }
    }
    return out;
}

CheckOutcome check_paths_fibre_action(const SuiteConfig& cfg,
                                      std::mt19937_64& rng) {
    CheckOutcome out;
    if (cfg.modes < 4) {
        out.skipped = true;
        out.detail = "window N < 4 cannot hold the twisting loop";
        return out;
    }
    std::uniform_int_distribution<int> winding(-2, 2);
    for (int trial = 0; trial < 20; ++trial) {
        const PolynomialPath p =
            plain_path(random_skew_hermitian(3, rng), cfg.modes, cfg.tol);
        // Unitary polynomial loop: conjugated diagonal of z powers.
        const MatC u = random_unitary(3, rng);
        FourierLoop diag(trunc(cfg.modes, 3), 3);
        for (int i = 0; i < 3; ++i) {
            MatC e = MatC::Zero(3, 3);
            e(i, i) = 1.0;
            diag.add_to_coeff(winding(rng), MatC(u * e * u.adjoint()));
        }
        const PathProduct q = right_multiply(p, diag);
        const double d = std::max({(project(q.path) - project(p)).norm(),
                                   path_membership_residual(q.path, 16),
                                   q.overflow_mass});
        if (d > out.residual) {
            out.residual = d;
            out.detail = loop_detail("loop", diag);
        }
    }
    return out;
}

CheckOutcome check_paths_u1(const SuiteConfig& cfg, std::mt19937_64& rng) {
    CheckOutcome out;
    (void)rng;
    if (cfg.modes < 6) {
        out.skipped = true;
        out.detail = "window N < 6 cannot hold the z^k witnesses";
        return out;
    }
    for (const int k : {1, 2, -3}) {
        const PolynomialPath a = plain_path(
            MatC::Constant(1, 1, Complex(0.0, kTwoPi * k)), cfg.modes,
            cfg.tol);
        const PolynomialPath b =
            plain_path(MatC::Zero(1, 1), cfg.modes, cfg.tol);
        const QuotientResult q = fibre_quotient(a, b, trunc(cfg.modes, 1));
        const double d =
            l2_distance(q.loop, FourierLoop::basis(-k, trunc(cfg.modes, 1)));
        if (d > out.residual) {
            out.residual = d;
            out.detail = loop_detail("quotient", q.loop);
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// holonomy

CheckOutcome check_hol_transport_unitary(const SuiteConfig& cfg,
                                         std::mt19937_64& rng) {
    CheckOutcome out;
    const int dim = std::max(2, cfg.dim);
    for (int trial = 0; trial < 3; ++trial) {
        const LoopConnection conn(
            random_skew_form(dim, 2, 1.0, rng, std::min(cfg.modes, 8)),
            GroupKind::Unitary, cfg.steps);
        const double d = std::max(
            unitarity_residual(parallel_transport(conn, 0.0, 1.0).mat),
            unitarity_residual(holonomy(conn).mat));
        if (d > out.residual) {
            out.residual = d;
            out.detail = loop_detail("A", conn.a);
        }
    }
    return out;
}

CheckOutcome check_hol_cocycle(const SuiteConfig& cfg, std::mt19937_64& rng) {
    CheckOutcome out;
    const int dim = std::max(2, cfg.dim);
    for (int trial = 0; trial < 3; ++trial) {
        const LoopConnection conn(
            random_skew_form(dim, 2, 0.8, rng, std::min(cfg.modes, 8)),
            GroupKind::Unitary, cfg.steps);
        const MatC whole = parallel_transport(conn, 0.0, 1.0).mat;
        for (const double t : {0.37, 0.61}) {
            const MatC split = parallel_transport(conn, t, 1.0).mat *
                               parallel_transport(conn, 0.0, t).mat;
            const double d = (whole - split).norm();
            if (d > out.residual) {
                out.residual = d;
                out.detail = loop_detail("A", conn.a);
            }
        }
    }
    return out;
}

CheckOutcome check_hol_blockwise(const SuiteConfig& cfg,
                                 std::mt19937_64& rng) {
    CheckOutcome out;
    const int window = std::max(4, std::min(cfg.modes, 8));
    const FourierLoop a1 = random_skew_form(1, 2, 0.9, rng, window);
    const FourierLoop a2 = random_skew_form(1, 2, 0.5, rng, window);
    FourierLoop blocks(trunc(window, 2), 2);
    for (int k = -window; k <= window; ++k) {
        MatC c = MatC::Zero(2, 2);
        c(0, 0) = a1.coeff(k)(0, 0);
        c(1, 1) = a2.coeff(k)(0, 0);
        if (c.norm() > 0) blocks.set_coeff(k, c);
    }
    const PolFibreBasis whole = pol_fibre_basis(
        LoopConnection(blocks, GroupKind::Unitary, cfg.steps), 2,
        trunc(window, 2));
    const PolFibreBasis p1 = pol_fibre_basis(
        LoopConnection(a1, GroupKind::Unitary, cfg.steps), 2,
        trunc(window, 1));
    const PolFibreBasis p2 = pol_fibre_basis(
        LoopConnection(a2, GroupKind::Unitary, cfg.steps), 2,
        trunc(window, 1));

    std::vector<double> got{whole.exponents(0), whole.exponents(1)};
    std::vector<double> expect{p1.exponents(0), p2.exponents(0)};
    std::sort(got.begin(), got.end());
    std::sort(expect.begin(), expect.end());
    out.residual = std::max(std::abs(got[0] - expect[0]),
                            std::abs(got[1] - expect[1]));
    for (int j = 0; j < 2; ++j)
        out.residual = std::max(out.residual,
                                std::min(std::abs(whole.vectors(0, j)),
                                         std::abs(whole.vectors(1, j))));
    if (out.residual > 1e-7) out.detail = loop_detail("A", blocks);
    return out;
}

CheckOutcome check_hol_cosh_sandwich(const SuiteConfig& cfg,
                                     std::mt19937_64& rng) {
    CheckOutcome out;
    (void)cfg;
    std::uniform_real_distribution<double> sample(0.0, kTwoPi);
    for (int trial = 0; trial < 16; ++trial) {
        const double s = sample(rng);
        for (int k = -6; k <= 6; ++k) {
            const double x = kTwoPi * k;
            const double mid = std::cosh(x + s) / std::exp(std::abs(x));
            const double upper = std::cosh(s) - mid;
            const double lower =
                mid - 0.5 * std::min(std::exp(s), std::exp(-s));
            const double viol = std::max(0.0, -std::min(upper, lower));
            if (viol > out.residual) {
                out.residual = viol;
                std::ostringstream os;
                os << std::setprecision(17) << "s=" << s << " k=" << k;
                out.detail = os.str();
            }
        }
    }
    return out;
}

CheckOutcome check_hol_rotation_reparam(const SuiteConfig& cfg,
                                        std::mt19937_64& rng) {
    CheckOutcome out;
    const int window = std::max(4, std::min(cfg.modes, 8));
    const LoopConnection conn(random_skew_form(2, 2, 0.7, rng, window),
                              GroupKind::Unitary, cfg.steps);
    const PolFibreBasis basis = pol_fibre_basis(conn, 2, trunc(window, 2));

    // Constant phase = rotation; sections follow the rotated connection.
    const double shift_by = 0.23;
    const FourierLoop const_phase =
        scalar_loop({{0, Complex(shift_by, 0.0)}}, window);
    const Reparametrized rot =
        reparametrize(conn, basis.section(0, 1, 5 * window), const_phase);
    const PolFibreBasis rotated =
        pol_fibre_basis(rot.conn, 2, trunc(window, 2));
    double worst_rot = 0.0;
    for (int j = 0; j < 2; ++j)
        for (int k = -2; k <= 2; ++k) {
            const FourierLoop wide = basis.section(j, k, 6 * window);
            std::vector<VecC> samples;
            samples.reserve(rotated.grid());
            for (int i = 0; i < rotated.grid(); ++i) {
                const double t = static_cast<double>(i) / rotated.grid();
                samples.push_back(wide.evaluate(t + shift_by));
            }
            worst_rot =
                std::max(worst_rot, basis_residual_samples(rotated, samples));
        }

    // Generic sine phase; the pulled-back sections leave every fibre.
    const double eps = 0.05;
    const FourierLoop sine_phase =
        scalar_loop({{1, Complex(0.0, -eps / 2.0 / kTwoPi)},
                     {-1, Complex(0.0, eps / 2.0 / kTwoPi)}},
                    window);
    const Reparametrized bentrep =
        reparametrize(conn, basis.section(0, 0, 5 * window), sine_phase);
    const PolFibreBasis bent = pol_fibre_basis(bentrep.conn, 2,
                                               trunc(window, 2));
    double escape = 0.0;
    for (int j = 0; j < 2; ++j)
        for (int k = -2; k <= 2; ++k) {
            const FourierLoop wide = basis.section(j, k, 6 * window);
            std::vector<VecC> samples;
            samples.reserve(bent.grid());
            for (int i = 0; i < bent.grid(); ++i) {
                const double t = static_cast<double>(i) / bent.grid();
                samples.push_back(
                    wide.evaluate(t + sine_phase.evaluate(t)(0, 0).real()));
            }
            escape = std::max(escape, basis_residual_samples(bent, samples));
        }

    out.residual = worst_rot;
    if (escape <= 1e-3) {
        out.residual = 1.0;
        std::ostringstream os;
        os << std::setprecision(17)
           << "reparametrized sections stayed polynomial, escape=" << escape;
        out.detail = os.str();
    } else if (worst_rot > 100.0 * cfg.tol) {
        out.detail = loop_detail("A", conn.a);
    }
    return out;
}

CheckOutcome check_hol_distinct_fibres(const SuiteConfig& cfg,
                                       std::mt19937_64& rng) {
    CheckOutcome out;
    const int window = std::max(4, std::min(cfg.modes, 8));
    const LoopConnection conn(random_skew_form(2, 2, 0.8, rng, window),
                              GroupKind::Unitary, cfg.steps);
    const FourierLoop phase =
        scalar_loop({{1, Complex(0.0, -0.2 / kTwoPi)},
                     {-1, Complex(0.0, 0.2 / kTwoPi)}},
                    window);
    const Reparametrized rep =
        reparametrize(conn, FourierLoop(trunc(window, 2), 1), phase);
    const PolFibreBasis original = pol_fibre_basis(conn, 1, trunc(window, 2));
    const PolFibreBasis pulled =
        pol_fibre_basis(rep.conn, 1, trunc(window, 2));
    double worst = 0.0;
    for (int j = 0; j < 2; ++j)
        for (int k = -1; k <= 1; ++k) {
            const FourierLoop wide = pulled.section(j, k, 6 * window);
            std::vector<VecC> samples;
            samples.reserve(original.grid());
            for (int i = 0; i < original.grid(); ++i)
                samples.push_back(
                    wide.evaluate(static_cast<double>(i) / original.grid()));
            worst =
                std::max(worst, basis_residual_samples(original, samples));
        }
    if (worst <= 1e-3) {
        out.residual = 1.0;
        std::ostringstream os;
        os << std::setprecision(17)
           << "pulled-back fibre matched the original, mismatch=" << worst;
        out.detail = os.str();
    }
    return out;
}

// ---------------------------------------------------------------------------
// weights

std::vector<WeightSequence> weight_families(const SuiteConfig& cfg) {
    const int n = std::max(1, cfg.modes);
    std::vector<WeightSequence> fams;
    fams.push_back(WeightSequence::geometric(2.0, n));
    fams.push_back(WeightSequence::cosh_squared(std::min(n, 40)));
    std::vector<double> vals(2 * n + 1);
    for (int p = -n; p <= n; ++p)
        vals[p + n] = 3.0 / std::pow(1.5, std::abs(p));
    fams.push_back(WeightSequence::custom(std::move(vals)));
    return fams;
}

DualVector random_dual(int n, std::mt19937_64& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    DualVector b(n);
    for (int p = -n; p <= n; ++p)
        b.set(p, Complex(gauss(rng), gauss(rng)) / (1.0 + p * p));
    return b;
}

CheckOutcome check_w_cone(const SuiteConfig& cfg, std::mt19937_64& rng) {
    CheckOutcome out;
    for (const WeightSequence& a : weight_families(cfg)) {
        const int n = a.max_mode();
        for (int trial = 0; trial < 10; ++trial) {
            const DualVector b = random_dual(n, rng);
            const DualVector c = random_dual(n, rng);
            const Complex lambda = unit_phase(rng);
            DualVector rb(n), rc(n), ib(n), ic(n);
            for (int p = -n; p <= n; ++p) {
                rb.set(p, std::pow(lambda, p) * b.at(p));
                rc.set(p, std::pow(lambda, p) * c.at(p));
                ib.set(p, std::conj(b.at(-p)));
                ic.set(p, std::conj(c.at(-p)));
            }
            const Complex base = inner_product(b, c, a);
            out.residual = std::max(
                {out.residual, std::abs(inner_product(rb, rc, a) - base),
                 std::abs(inner_product(ib, ic, a) - std::conj(base))});
        }
        // Diagonality and the converse: basis pairings recover the weights.
        for (const int p : {-n, 0, std::min(2, n)}) {
            const DualVector ep = DualVector::basis(p, n);
            const DualVector eq = DualVector::basis(std::max(-n + 1, p - 1), n);
            out.residual = std::max(out.residual,
                                    std::abs(inner_product(ep, eq, a)));
            out.residual = std::max(
                out.residual,
                std::abs(inner_product(ep, ep, a) - Complex(a.at(p), 0.0)));
        }
    }
    return out;
}

MatC weighted_shift_matrix(const WeightSequence& a, int q) {
    const int n = a.max_mode();
    MatC m = MatC::Zero(2 * n + 1, 2 * n + 1);
    for (int p = -n; p <= n; ++p)
        if (p + q >= -n && p + q <= n)
            m(p + q + n, p + n) = std::sqrt(a.at(p + q) / a.at(p));
    return m;
}

CheckOutcome check_w_znorm(const SuiteConfig& cfg, std::mt19937_64& rng) {
    CheckOutcome out;
    (void)rng;
    std::vector<WeightSequence> fams = weight_families(cfg);
    fams.push_back(
        WeightSequence::geometric(std::exp(kTwoPi), std::max(1, cfg.modes)));
    for (const WeightSequence& a : fams) {
        const int qmax = std::min(8, a.max_mode());
        for (int q = -qmax; q <= qmax; ++q) {
            const double formula = z_operator_norm(a, q);
            Eigen::JacobiSVD<MatC> svd(weighted_shift_matrix(a, q));
            const double top = svd.singularValues()(0);
            const double rel = std::abs(formula - top) / formula;
            if (rel > out.residual) {
                out.residual = rel;
                std::ostringstream os;
                os << std::setprecision(17) << "q=" << q
                   << " formula=" << formula << " svd=" << top;
                out.detail = os.str();
            }
        }
    }
    return out;
}

CheckOutcome check_w_diamond(const SuiteConfig& cfg, std::mt19937_64& rng) {
    CheckOutcome out;
    for (const WeightSequence& a : weight_families(cfg)) {
        const int n = a.max_mode();
        for (int trial = 0; trial < 20; ++trial) {
            const DualVector b = random_dual(n, rng);
            const DualVector c = random_dual(n, rng);
            const double d = std::abs(dual_pairing(b, diamond(c, a)) -
                                      inner_product(b, c, a));
            if (d > out.residual) out.residual = d;
        }
    }
    return out;
}

CheckOutcome check_w_polarisation(const SuiteConfig& cfg,
                                  std::mt19937_64& rng) {
    CheckOutcome out;
    std::uniform_int_distribution<int> degree(0, 3);
    for (const WeightSequence& a : weight_families(cfg)) {
        const int n = a.max_mode();
        for (int trial = 0; trial < 5; ++trial) {
            const DualVector x = random_dual(n, rng);
            DualVector jjx = polarisation_J(polarisation_J(x));
            double sq = 0.0;
            for (int p = -n; p <= n; ++p)
                sq = std::max(sq, std::abs(jjx.at(p) + x.at(p)));
            const double iso =
                std::abs(dual_norm(polarisation_J(x), a) - dual_norm(x, a));
            out.residual = std::max({out.residual, sq, iso});
        }
        // Finite-rank certificate for polynomial-loop commutators.
        const int d = degree(rng);
        FourierLoop op(trunc(n, 1), 1);
        std::normal_distribution<double> gauss(0.0, 1.0);
        for (int k = -d; k <= d; ++k)
            op.set_coeff(k, MatC::Constant(1, 1,
                                           Complex(gauss(rng), gauss(rng))));
        const CommutatorReport rep = polarisation_commutator(op, a);
        if (rep.rank > 2 * std::max(1, d)) {
            out.residual = 1.0;
            std::ostringstream os;
            os << "commutator rank " << rep.rank << " exceeds bound "
               << 2 * std::max(1, d);
            out.detail = os.str();
        }
    }
    return out;
}

CheckOutcome check_w_zeta(const SuiteConfig& cfg, std::mt19937_64& rng) {
    CheckOutcome out;
    (void)rng;
    for (const WeightSequence& a : weight_families(cfg)) {
        const int n = a.max_mode();
        const MatR z0 = zeta_homotopy(a, 0.0);
        out.residual = std::max(
            out.residual,
            (z0 - MatR::Identity(2 * n, 2 * n)).cwiseAbs().maxCoeff());

        // T z T^{-1} on the same index blocks, T = diag(sqrt a_p).
        MatR shift = MatR::Zero(2 * n + 1, 2 * n + 1);
        for (int p = -n + 1; p <= n; ++p)
            shift(p - 1 + n, p + n) = 1.0;
        MatR t = MatR::Zero(2 * n + 1, 2 * n + 1);
        for (int p = -n; p <= n; ++p) t(p + n, p + n) = std::sqrt(a.at(p));
        const MatR conj = t * shift * t.inverse();
        const MatR z1 = zeta_homotopy(a, 1.0);
        const double d =
            (z1 - conj.block(0, 1, 2 * n, 2 * n)).cwiseAbs().maxCoeff();
        if (d > out.residual) out.residual = d;
    }
    return out;
}

CheckOutcome check_w_growth(const SuiteConfig& cfg, std::mt19937_64& rng) {
    CheckOutcome out;
    (void)rng;
    for (const WeightSequence& a : weight_families(cfg)) {
        const int qmax = std::min(8, a.max_mode());
        if (qmax < 2) continue;
        const GrowthWitness w = unbounded_growth_witness(a, qmax);
        if (!w.strictly_increasing) {
            out.residual = 1.0;
            out.detail = "growth table not strictly increasing";
        }
    }
    const int qmax = std::min(8, std::max(2, cfg.modes));
    const GrowthWitness geo = unbounded_growth_witness(
        WeightSequence::geometric(2.0, std::max(qmax, cfg.modes)), qmax);
    for (int q = 0; q <= qmax; ++q)
        out.residual =
            std::max(out.residual,
                     std::abs(geo.norms[q] -
                              std::sqrt(std::exp2(static_cast<double>(q)))));
    return out;
}

// ---------------------------------------------------------------------------
// fock

CheckOutcome check_f_car(const SuiteConfig& cfg, std::mt19937_64& rng) {
    CheckOutcome out;
    (void)rng;
    const ModeSpace modes(std::max(1, cfg.dim), std::min(cfg.fock_window, 3));
    const FockSpace space{modes, std::min(cfg.particle_cap, 6)};
    for (int a = 0; a < modes.size(); ++a)
        for (int b = 0; b < modes.size(); ++b) {
            VecC u = VecC::Zero(modes.size());
            VecC v = VecC::Zero(modes.size());
            u(a) = 1.0;
            v(b) = 1.0;
            const CarResiduals r = car_check(space, u, v);
            const double d =
                std::max({r.mixed, r.double_create, r.double_annihilate});
            if (d > out.residual) {
                out.residual = d;
                std::ostringstream os;
                os << "basis pair (" << a << ", " << b << ")";
                out.detail = os.str();
            }
        }
    return out;
}

CheckOutcome check_f_clifford_square(const SuiteConfig& cfg,
                                     std::mt19937_64& rng) {
    CheckOutcome out;
    const ModeSpace modes(std::max(1, cfg.dim), std::min(cfg.fock_window, 3));
    const FockSpace space{modes, std::min(cfg.particle_cap, 6)};
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (int trial = 0; trial < 30; ++trial) {
        VecC v(modes.size());
        for (int m = 0; m < modes.size(); ++m)
            v(m) = Complex(gauss(rng), gauss(rng));
        FockVector psi = FockVector::vacuum();
        psi.accumulate(FockVector::basis({0}), Complex(0.3, -0.4));
        if (modes.size() > 2)
            psi.accumulate(FockVector::basis({1, 2}), Complex(-0.7, 0.1));
        const FockVector twice = clifford(space, v, clifford(space, v, psi));
        const FockVector want = scale(psi, modes.inner(v, v));
        const double d = fock_norm(modes, add(twice, scale(want, -1.0))) /
                         fock_norm(modes, want);
        if (d > out.residual) {
            out.residual = d;
            out.detail = matrix_detail("v", v);
        }
    }
    return out;
}

CheckOutcome check_f_grading(const SuiteConfig& cfg, std::mt19937_64& rng) {
    CheckOutcome out;
    const ModeSpace modes(std::max(1, cfg.dim), std::min(cfg.fock_window, 3));
    const FockSpace space{modes, std::min(cfg.particle_cap, 6)};
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (int trial = 0; trial < 20; ++trial) {
        VecC u(modes.size()), v(modes.size());
        for (int m = 0; m < modes.size(); ++m) {
            u(m) = Complex(gauss(rng), gauss(rng));
            v(m) = Complex(gauss(rng), gauss(rng));
        }
        FockVector even = FockVector::vacuum();
        if (modes.size() > 1)
            even.accumulate(FockVector::basis({0, 1}), Complex(0.4, 0.2));
        const FockVector once = clifford(space, u, even);
        const FockVector twice = clifford(space, v, once);
        double offmass = 0.0;
        for (const auto& [tuple, amp] : once.amps)
            if (tuple.size() % 2 == 0) offmass += std::norm(amp);
        for (const auto& [tuple, amp] : twice.amps)
            if (tuple.size() % 2 == 1) offmass += std::norm(amp);
        out.residual = std::max(out.residual, std::sqrt(offmass));
    }
    return out;
}

CheckOutcome check_f_polarisation_rank(const SuiteConfig& cfg,
                                       std::mt19937_64& rng) {
    CheckOutcome out;
    (void)rng;
    const int m = std::max(2, cfg.dim + (cfg.dim % 2));
    for (const int window : {1, 3, std::max(1, cfg.fock_window)}) {
        const PolarisationComparison cmp =
            polarisation_compare(standard_polarisation(m, window),
                                 standard_unitary_structure(m, window));
        const double d =
            std::max(std::abs(double(cmp.rank) - m / 2.0),
                     std::abs(cmp.hs_norm - 2.0 * std::sqrt(m / 2.0)));
        if (d > out.residual) {
            out.residual = d;
            std::ostringstream os;
            os << "window K=" << window << " rank=" << cmp.rank
               << " hs=" << std::setprecision(17) << cmp.hs_norm;
            out.detail = os.str();
        }
    }
    return out;
}

CheckOutcome check_f_rotation(const SuiteConfig& cfg, std::mt19937_64& rng) {
    CheckOutcome out;
    const ModeSpace modes(std::max(1, cfg.dim), std::min(cfg.fock_window, 4));
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (int trial = 0; trial < 15; ++trial) {
        const Complex lambda = unit_phase(rng);
        const Complex mu = unit_phase(rng);
        FockVector psi = FockVector::vacuum();
        psi.accumulate(FockVector::basis({0}), Complex(gauss(rng), gauss(rng)));
        if (modes.size() > 3)
            psi.accumulate(FockVector::basis({1, 3}),
                           Complex(gauss(rng), gauss(rng)));
        const FockVector split = implement_rotation(lambda).apply(
            modes, implement_rotation(mu).apply(modes, psi));
        const FockVector joint =
            implement_rotation(lambda * mu).apply(modes, psi);
        const double d = fock_norm(modes, add(split, scale(joint, -1.0)));
        if (d > out.residual) out.residual = d;
    }
    return out;
}

// ---------------------------------------------------------------------------
// dirac

DiracConfig dirac_config(const SuiteConfig& cfg) {
    DiracConfig d;
    d.fibre_dim = std::max(1, cfg.dim);
    d.mode_window = std::min(cfg.fock_window, 2);
    d.particle_cap = std::min(cfg.particle_cap, 5);
    return d;
}

FockVector random_fock(const ModeSpace& modes, std::mt19937_64& rng,
                       bool even_only) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<int> pool(modes.size());
    for (int i = 0; i < modes.size(); ++i) pool[i] = i;
    FockVector out;
    for (int t = 0; t < 3; ++t) {
        std::shuffle(pool.begin(), pool.end(), rng);
        const int len = even_only ? 2 * (t % 2) : t % 3;
        std::vector<int> tuple(pool.begin(), pool.begin() + len);
        std::sort(tuple.begin(), tuple.end());
        out.amps[tuple] += Complex(gauss(rng), gauss(rng));
    }
    return out.drop_zeros();
}

PolynomialSection random_dirac_section(const ModeSpace& modes,
                                       std::mt19937_64& rng, bool even_only) {
    std::uniform_int_distribution<int> dir(0, 2 * modes.size() - 1);
    std::uniform_int_distribution<int> deg(0, 2);
    PolynomialSection s;
    for (int t = 0; t < 3; ++t) {
        std::vector<int> mono(deg(rng));
        for (int& d : mono) d = dir(rng);
        s.accumulate(PolynomialSection::monomial(
            mono, random_fock(modes, rng, even_only)));
    }
    return s;
}

VecC random_dirac_point(const ModeSpace& modes, std::mt19937_64& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    VecC x(modes.size());
    for (int m = 0; m < modes.size(); ++m)
        x(m) = Complex(gauss(rng), gauss(rng));
    return x;
}

CheckOutcome check_d_linear(const SuiteConfig& cfg, std::mt19937_64& rng) {
    CheckOutcome out;
    const DiracConfig dc = dirac_config(cfg);
    const ModeSpace modes = dc.make_modes();
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (int trial = 0; trial < 10; ++trial) {
        const PolynomialSection s = random_dirac_section(modes, rng, false);
        const PolynomialSection t = random_dirac_section(modes, rng, false);
        const Complex a(gauss(rng), gauss(rng));
        const Complex b(gauss(rng), gauss(rng));
        PolynomialSection combo;
        combo.accumulate(s, a);
        combo.accumulate(t, b);
        const VecC x = random_dirac_point(modes, rng);
        const FockVector lhs = dirac(combo, dc, x);
        const FockVector rhs =
            add(scale(dirac(s, dc, x), a), scale(dirac(t, dc, x), b));
        out.residual = std::max(
            out.residual, fock_norm(modes, add(lhs, scale(rhs, -1.0))));

        const PolynomialSection c =
            PolynomialSection::constant(random_fock(modes, rng, false));
        out.residual =
            std::max(out.residual, fock_norm(modes, dirac(c, dc, x)));
    }
    return out;
}

CheckOutcome check_d_grading(const SuiteConfig& cfg, std::mt19937_64& rng) {
    CheckOutcome out;
    const DiracConfig dc = dirac_config(cfg);
    const ModeSpace modes = dc.make_modes();
    for (int trial = 0; trial < 50; ++trial) {
        const PolynomialSection s = random_dirac_section(modes, rng, true);
        const FockVector image = dirac(s, dc, random_dirac_point(modes, rng));
        double offmass = 0.0;
        for (const auto& [tuple, amp] : image.amps)
            if (tuple.size() % 2 == 0) offmass += std::norm(amp);
        out.residual = std::max(out.residual, std::sqrt(offmass));
    }
    return out;
}

CheckOutcome check_d_two_route(const SuiteConfig& cfg, std::mt19937_64& rng) {
    CheckOutcome out;
    const DiracConfig dc = dirac_config(cfg);
    const ModeSpace modes = dc.make_modes();
    for (int trial = 0; trial < 25; ++trial) {
        const PolynomialSection s = random_dirac_section(modes, rng, false);
        const VecC x = random_dirac_point(modes, rng);
        const FockVector direct = dirac(s, dc, x);
        const FockVector termwise = dirac_naive(s, dc, x);
        const FockVector symbolic = evaluate(dirac_section(s, dc), modes, x);
        const double d = std::max(
            fock_norm(modes, add(direct, scale(termwise, -1.0))),
            fock_norm(modes, add(direct, scale(symbolic, -1.0))));
        if (d > out.residual) out.residual = d;
    }
    return out;
}

CheckOutcome check_d_equivariance(const SuiteConfig& cfg,
                                  std::mt19937_64& rng) {
    CheckOutcome out;
    const DiracConfig dc = dirac_config(cfg);
    const ModeSpace modes = dc.make_modes();
    for (int trial = 0; trial < 20; ++trial) {
        const PolynomialSection s = random_dirac_section(modes, rng, false);
        const VecC x = random_dirac_point(modes, rng);
        const Complex lambda = unit_phase(rng);
        const double d = equivariance_check(s, dc, lambda, x);
        if (d > out.residual) {
            out.residual = d;
            std::ostringstream os;
            os << std::setprecision(17) << "lambda=" << lambda.real()
               << (lambda.imag() < 0 ? "-" : "+") << std::abs(lambda.imag())
               << "i";
            out.detail = os.str();
        }
    }
    return out;
}

CheckOutcome check_d_flat_square(const SuiteConfig& cfg,
                                 std::mt19937_64& rng) {
    CheckOutcome out;
    const DiracConfig dc = dirac_config(cfg);
    const ModeSpace modes = dc.make_modes();
    std::uniform_int_distribution<int> dir(0, 2 * modes.size() - 1);
    for (int trial = 0; trial < 5; ++trial) {
        const int a = dir(rng);
        const FockVector psi = random_fock(modes, rng, false);
        for (int d = 0; d <= 3; ++d) {
            const PolynomialSection s = PolynomialSection::monomial(
                std::vector<int>(d, a), psi);
            const PolynomialSection dd =
                dirac_section(dirac_section(s, dc), dc);
            PolynomialSection expect;
            if (d >= 2)
                expect.accumulate(PolynomialSection::monomial(
                    std::vector<int>(d - 2, a),
                    scale(psi, double(d) * (d - 1))));
            double worst = 0.0;
            const FockVector zero;
            for (const auto& [mono, coeff] : dd.terms) {
                const auto it = expect.terms.find(mono);
                const FockVector& want =
                    it == expect.terms.end() ? zero : it->second;
                worst = std::max(worst, fock_norm(modes,
                                                  add(coeff,
                                                      scale(want, -1.0))));
            }
            for (const auto& [mono, coeff] : expect.terms)
                if (!dd.terms.count(mono))
                    worst = std::max(worst, fock_norm(modes, coeff));
            out.residual = std::max(out.residual, worst);
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// registry

struct SuiteEntry {
    const char* name;
    std::vector<CheckDef> checks;
};

const std::vector<SuiteEntry>& registry() {
    static const std::vector<SuiteEntry> entries = {
        {"loops",
         {{"loops.leibniz_rule", "(fg)' = f'g + fg'", 0.0, 1.0,
           check_loops_leibniz},
          {"loops.rotate_multiplicative", "R_l(fg) = (R_l f)(R_l g)", 0.0, 1.0,
           check_loops_rotate_product},
          {"loops.involution_squared", "i(i(f)) = f", 0.0, 1.0,
           check_loops_involution},
          {"loops.rotate_compose", "R_l R_m = R_{lm}", 0.0, 1.0,
           check_loops_rotate_compose},
          {"loops.shift_compose", "S_q S_r = S_{q+r}", 0.0, 1.0,
           check_loops_shift_compose},
          {"loops.derivative_rotate_commute", "D R_l = R_l D", 0.0, 1.0,
           check_loops_derivative_rotate},
          {"loops.real_flag_closure",
           "real loops closed under product, D, i, R_{-1}", 0.0, 1.0,
           check_loops_real_flag}}},
        {"lie",
         {{"lie.sector_roundtrip", "exp(log_s g) = g", 0.0, 10.0,
           check_lie_sector_roundtrip},
          {"lie.sector_strip", "eigenvalues of log_s g in (s - i pi, s + i pi)", 0.0,
           1.0, check_lie_sector_strip},
          {"lie.sector_locally_constant",
           "log_s g constant between cut crossings", 0.0, 1.0,
           check_lie_sector_locally_constant},
          {"lie.sector_shift_2pi", "log_{s+2 pi i} g = log_s g + 2 pi i",
           0.0, 1.0, check_lie_sector_shift},
          {"lie.unitary_structure", "J^2 = -1, [J, xi] = 0", 0.0, 1.0,
           check_lie_unitary_structure},
          {"lie.so_log_decompose", "log_0(-g) = xi - pi J_xi", 0.0, 10.0,
           check_lie_so_log}}},
        {"paths",
         {{"paths.section_roundtrip", "project(section(g)) = g", 0.0, 10.0,
           check_paths_section_roundtrip},
          {"paths.quotient_polynomial",
           "exp(-t xi1) exp(t xi2) is a polynomial loop", 0.0, 10.0,
           check_paths_quotient},
          {"paths.action_equivariance",
           "project(g . a) = g project(a) (g^{-1})", 0.0, 10.0,
           check_paths_actions},
          {"paths.fibre_action", "a gamma stays in the fibre of a", 0.0, 10.0,
           check_paths_fibre_action},
          {"paths.u1_quotient", "circle fibre quotients are z^k", 0.0, 10.0,
           check_paths_u1}}},
        {"holonomy",
         {{"holonomy.transport_unitary", "transport stays in the group", 0.0,
           1.0, check_hol_transport_unitary},
          {"holonomy.transport_cocycle",
           "T(t1, t2) T(t0, t1) = T(t0, t2)", 0.0, 10.0, check_hol_cocycle},
          {"holonomy.blockwise_fibres",
           "fibres of direct sums are blockwise unions", 1e-7, 1.0,
           check_hol_blockwise},
          {"holonomy.cosh_sandwich",
           "cosh(s) >= cosh(x+s)/e^{|x|} >= min(e^s, e^{-s})/2", 0.0, 1.0,
           check_hol_cosh_sandwich},
          {"holonomy.rotation_vs_reparametrization",
           "rotations keep the polynomial fibre, generic maps break it", 0.0,
           100.0, check_hol_rotation_reparam},
          {"holonomy.distinct_fibres",
           "pulled-back connections have different fibres", 0.5, 1.0,
           check_hol_distinct_fibres}}},
        {"weights",
         {{"weights.cone_bijection",
           "diagonal positive symmetric forms = weight cone", 1e-12, 1.0,
           check_w_cone},
          {"weights.znorm_vs_svd", "|z^q| = sup_p sqrt(a_{p+q}/a_p)", 1e-12,
           1.0, check_w_znorm},
          {"weights.diamond_pairing", "b(diamond(c, a)) = <b, c>_a", 1e-12,
           1.0, check_w_diamond},
          {"weights.polarisation_j",
           "J^2 = -1, J isometric, [A, J] finite rank", 0.0, 1.0,
           check_w_polarisation},
          {"weights.zeta_endpoints", "zeta_0 = z, zeta_1 = T z T^{-1}", 1e-12,
           1.0, check_w_zeta},
          {"weights.growth_table", "|z^q| strictly increasing, 2^{q/2} for "
                                   "rho = 2",
           0.0, 1.0, check_w_growth}}},
        {"fock",
         {{"fock.car_basis_pairs",
           "{c(u), a(v)} = <u, v>, {c, c} = {a, a} = 0", 1e-12, 1.0,
           check_f_car},
          {"fock.clifford_square", "pi(v)^2 = <v, v>", 1e-12, 1.0,
           check_f_clifford_square},
          {"fock.grading", "pi flips parity, pi pi preserves it", 1e-12, 1.0,
           check_f_grading},
          {"fock.polarisation_rank", "rank(J_C - J_R) = n on constants", 0.0,
           10.0, check_f_polarisation_rank},
          {"fock.rotation_homomorphism", "U_l U_m = U_{lm}", 1e-12, 1.0,
           check_f_rotation}}},
        {"dirac",
         {{"dirac.linear_constant", "D is linear and kills constants", 0.0,
           1.0, check_d_linear},
          {"dirac.grading_flip", "D flips the Fock parity", 1e-12, 1.0,
           check_d_grading},
          {"dirac.two_route", "contraction route = termwise route", 1e-12,
           1.0, check_d_two_route},
          {"dirac.equivariance", "D(l . s)(R_l x) = U_l D(s)(x)", 1e-10, 1.0,
           check_d_equivariance},
          {"dirac.flat_square", "D^2 (x^d psi) = d(d-1) x^{d-2} psi", 0.0,
           1.0, check_d_flat_square}}}};
    return entries;
}

void run_into(SuiteReport& report, const SuiteEntry& entry,
              const SuiteConfig& cfg) {
    for (const CheckDef& def : entry.checks) {
        std::mt19937_64 rng(fnv1a(def.name, cfg.seed));
        const auto start = std::chrono::steady_clock::now();
        CheckOutcome outcome;
        try {
            outcome = def.fn(cfg, rng);
        } catch (const std::exception& err) {
            outcome.residual = 9e99;
            outcome.detail = std::string("check threw: ") + err.what();
        }
        const auto stop = std::chrono::steady_clock::now();

        CheckResult result;
        result.name = def.name;
        result.anchor = def.anchor;
        result.tolerance = def.fixed_tol > 0.0 ? def.fixed_tol
                                                : def.tol_scale * cfg.tol;
        result.residual = outcome.skipped ? 0.0 : outcome.residual;
        result.status = outcome.skipped
                            ? "skip"
                            : (result.residual <= result.tolerance ? "pass"
                                                                   : "fail");
        if (cfg.timings)
            result.runtime_ms =
                std::chrono::duration<double, std::milli>(stop - start)
                    .count();
        if (outcome.skipped || result.status == "fail")
            result.detail = outcome.detail;
        report.checks.push_back(std::move(result));
    }
}

}  // namespace

const std::vector<std::string>& suite_names() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> v;
        for (const SuiteEntry& e : registry()) v.push_back(e.name);
        v.push_back("all");
        return v;
    }();
    return names;
}

SuiteReport run_suite(const std::string& name, const SuiteConfig& cfg) {
    SuiteReport report;
    report.suite = name;
    report.config = cfg;
    if (name == "all") {
        for (const SuiteEntry& entry : registry()) run_into(report, entry, cfg);
        return report;
    }
    for (const SuiteEntry& entry : registry())
        if (name == entry.name) {
            run_into(report, entry, cfg);
            return report;
        }
    throw UnknownSuite("no suite named " + name);
}

}  // namespace loopforge
