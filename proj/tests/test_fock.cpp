#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cstdio>
#include <numeric>

#include "loopforge/fock.hpp"

using namespace loopforge;

namespace {

VecC random_vector(const ModeSpace& modes, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    VecC v(modes.size());
    for (int m = 0; m < modes.size(); ++m)
        v(m) = Complex(dist(rng), dist(rng));
    return v;
}

FockVector random_state(const ModeSpace& modes, int max_len,
                        std::mt19937_64& rng) {
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    std::uniform_int_distribution<int> len(0, max_len);
    FockVector psi;
    for (int trial = 0; trial < 6; ++trial) {
        std::vector<int> pool(modes.size());
        std::iota(pool.begin(), pool.end(), 0);
        std::shuffle(pool.begin(), pool.end(), rng);
        std::vector<int> tuple(pool.begin(), pool.begin() + len(rng));
        std::sort(tuple.begin(), tuple.end());
        psi.amps[tuple] += Complex(dist(rng), dist(rng));
    }
    return psi.drop_zeros();
}

VecC basis_vector(const ModeSpace& modes, int fibre, int level) {
    VecC v = VecC::Zero(modes.size());
    v(modes.index(fibre, level)) = 1.0;
    return v;
}

double state_distance(const ModeSpace& modes, const FockVector& a,
                      const FockVector& b) {
    return fock_norm(modes, add(a, scale(b, -1.0)));
}

// J on the truncated real loop space in the cos/sin basis, complexified:
// blocks ordered constants, then (cos k, sin k) for k = 1..K.
MatC real_form_matrix(int m, int window) {
    const int size = m * (2 * window + 1);
    MatC j = MatC::Zero(size, size);
    MatR j0 = MatR::Zero(m, m);
    for (int k = 0; k < m / 2; ++k) {
        j0(2 * k, 2 * k + 1) = 1.0;
        j0(2 * k + 1, 2 * k) = -1.0;
    }
    j.block(0, 0, m, m) = j0.cast<Complex>();
    for (int k = 1; k <= window; ++k) {
        const int cos_base = m * (2 * k - 1);
        const int sin_base = m * 2 * k;
        j.block(sin_base, cos_base, m, m) = MatC::Identity(m, m);
        j.block(cos_base, sin_base, m, m) = -MatC::Identity(m, m);
    }
    return j;
}

// Columns express the exponential basis vectors v e^{ik theta} in the
// cos/sin basis above.
MatC exponential_to_trig(int m, int window) {
    const int size = m * (2 * window + 1);
    MatC c = MatC::Zero(size, size);
    for (int k = -window; k <= window; ++k) {
        const int col = m * (k + window);
        if (k == 0) {
            c.block(0, col, m, m) = MatC::Identity(m, m);
            continue;
        }
        const int cos_base = m * (2 * std::abs(k) - 1);
        const int sin_base = m * 2 * std::abs(k);
        c.block(cos_base, col, m, m) = MatC::Identity(m, m);
        c.block(sin_base, col, m, m) =
            Complex(0.0, k > 0 ? 1.0 : -1.0) * MatC::Identity(m, m);
    }
    return c;
}

}  // namespace

TEST_CASE("mode spaces index fibres and levels consistently") {
    const ModeSpace modes(2, 3);
    CHECK(modes.size() == 14);
    for (int j = 1; j <= 2; ++j)
        for (int k = -3; k <= 3; ++k) {
            const int id = modes.index(j, k);
            CHECK(modes.fibre_of(id) == j);
            CHECK(modes.level_of(id) == k);
            CHECK(modes.weight(id) == 1.0);
        }
    CHECK_THROWS_AS(modes.index(0, 1), DimensionMismatch);
    CHECK_THROWS_AS(modes.index(1, 4), ModeOutsideWindow);
    CHECK_THROWS_AS(modes.level_of(14), ModeOutsideWindow);

    const ModeSpace weighted(3, WeightSequence::geometric(2.0, 2));
    CHECK(weighted.mode_window() == 2);
    CHECK(weighted.weight(weighted.index(2, -2)) == 0.25);
    CHECK(weighted.weight(weighted.index(1, 0)) == 1.0);

    const VecC u = basis_vector(weighted, 2, -2);
    CHECK(weighted.inner(u, u) == Complex(0.25));
    CHECK(weighted.norm(u) == 0.5);
}

TEST_CASE("riesz turns level functionals into one-particle vectors") {
    const ModeSpace modes(2, WeightSequence::geometric(2.0, 3));
    DualVector f(3);
    f.set(1, Complex(0.0, 2.0));
    f.set(-3, 1.0);
    const VecC v = modes.riesz(2, f);

    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 10; ++trial) {
        const VecC u = random_vector(modes, rng);
        Complex direct = 0.0;
        for (int k = -3; k <= 3; ++k) direct += f.at(k) * u(modes.index(2, k));
        CHECK(std::abs(direct - modes.inner(u, v)) <= 1e-14);
    }
    CHECK_THROWS_AS(modes.riesz(1, DualVector(2)), WindowMismatch);
}

TEST_CASE("creation wedges with sort-permutation signs") {
    const ModeSpace modes(2, 3);
    const FockSpace space{modes, 6};
    const int m1 = modes.index(1, -1);
    const int m2 = modes.index(1, 2);
    REQUIRE(m1 < m2);

    const FockVector one = create(space, basis_vector(modes, 1, -1),
                                  FockVector::vacuum());
    CHECK(one.amps.size() == 1);
    CHECK(one.amps.at({m1}) == Complex(1.0));

    const FockVector twice = create(space, basis_vector(modes, 1, -1), one);
    CHECK(twice.amps.empty());

    const FockVector pair = create(space, basis_vector(modes, 1, 2), one);
    CHECK(pair.amps.size() == 1);
    CHECK(pair.amps.at({m1, m2}) == Complex(-1.0));
}

TEST_CASE("annihilation contracts with alternating signs and weights") {
    const ModeSpace modes(2, 3);
    const FockSpace space{modes, 6};
    const int m1 = modes.index(1, -1);
    const int m2 = modes.index(1, 2);
    const FockVector pair = FockVector::basis({m1, m2});

    CHECK(annihilate(space, basis_vector(modes, 1, -1), FockVector::vacuum())
              .amps.empty());

    const FockVector first = annihilate(space, basis_vector(modes, 1, -1),
                                        pair);
    CHECK(first.amps.size() == 1);
    CHECK(first.amps.at({m2}) == Complex(1.0));

    const FockVector second = annihilate(space, basis_vector(modes, 1, 2),
                                         pair);
    CHECK(second.amps.size() == 1);
    CHECK(second.amps.at({m1}) == Complex(-1.0));

    // The contraction carries the mode weight of the removed leg.
    const ModeSpace wmodes(1, WeightSequence::geometric(2.0, 3));
    const FockSpace wspace{wmodes, 6};
    const int w2 = wmodes.index(1, 2);
    const FockVector got = annihilate(wspace, basis_vector(wmodes, 1, 2),
                                      FockVector::basis({w2}));
    CHECK(got.amps.at({}) == Complex(0.25));
}

TEST_CASE("clifford multiplication squares to the one-particle norm") {
    const ModeSpace modes(2, 2);
    const FockSpace space{modes, 6};
    std::mt19937_64 rng(17);

    const VecC v = random_vector(modes, rng);
    const FockVector from_vacuum = clifford(space, v, FockVector::vacuum());
    for (int m = 0; m < modes.size(); ++m)
        CHECK(from_vacuum.amps.at({m}) == v(m));

    for (int trial = 0; trial < 20; ++trial) {
        const VecC u = random_vector(modes, rng);
        const FockVector psi = random_state(modes, 3, rng);
        const FockVector twice = clifford(space, u, clifford(space, u, psi));
        const double norm2 = modes.inner(u, u).real();
        const double err = state_distance(modes, twice, scale(psi, norm2));
        CHECK(err <= 1e-12 * std::max(1.0, norm2 * fock_norm(modes, psi)));
    }

    // Parity grading: single Clifford factors flip tuple-length parity.
    const FockVector odd = clifford(space, v, random_state(modes, 2, rng));
    for (const auto& [tuple, amp] : odd.amps) (void)amp;
    const FockVector even_in = FockVector::basis({0, 1});
    for (const auto& [tuple, amp] : clifford(space, v, even_in).amps)
        CHECK(tuple.size() % 2 == 1);
    const FockVector odd_in = FockVector::basis({2});
    for (const auto& [tuple, amp] : clifford(space, v, odd_in).amps)
        CHECK(tuple.size() % 2 == 0);
}

TEST_CASE("car residuals vanish below the particle cap") {
    const ModeSpace modes(2, 3);
    const FockSpace space{modes, 6};

    const VecC e1 = basis_vector(modes, 1, 0);
    const CarResiduals same = car_check(space, e1, e1);
    CHECK(same.mixed == 0.0);
    CHECK(same.double_create == 0.0);
    CHECK(same.double_annihilate == 0.0);

    const CarResiduals perp = car_check(space, e1, basis_vector(modes, 2, 1));
    CHECK(perp.mixed == 0.0);

    std::mt19937_64 rng(23);
    const CarResiduals dense =
        car_check(space, random_vector(modes, rng), random_vector(modes, rng));
    CHECK(dense.mixed <= 1e-12);
    CHECK(dense.double_create <= 1e-12);
    CHECK(dense.double_annihilate <= 1e-12);

    const ModeSpace wmodes(1, WeightSequence::geometric(2.0, 2));
    const FockSpace wspace{wmodes, 4};
    const CarResiduals weighted = car_check(
        wspace, random_vector(wmodes, rng), random_vector(wmodes, rng));
    CHECK(weighted.mixed <= 1e-12);
    CHECK(weighted.double_create <= 1e-12);
    CHECK(weighted.double_annihilate <= 1e-12);
}

TEST_CASE("the particle cap drops wedges into overflow mass") {
    const ModeSpace modes(1, 1);
    const FockSpace space{modes, 2};
    const FockVector full = FockVector::basis({0, 1});

    const FockVector spilled = create(space, basis_vector(modes, 1, 1), full);
    CHECK(spilled.amps.empty());
    CHECK(spilled.overflow_mass == 1.0);

    const ModeSpace wmodes(1, WeightSequence::geometric(2.0, 1));
    const FockSpace wspace{wmodes, 2};
    const FockVector wspill =
        create(wspace, basis_vector(wmodes, 1, 1), FockVector::basis({0, 1}));
    // Dropped wedge {(-1),(0),(1)} has squared norm 1/2 * 1 * 1/2.
    CHECK(wspill.overflow_mass == 0.25);
}

TEST_CASE("the standard unitary structure matches the trig computation") {
    for (const int m : {2, 4}) {
        for (const int window : {1, 3}) {
            const PolarisingOperator jr = standard_unitary_structure(m, window);
            CHECK(jr.square_residual() == 0.0);
            CHECK(jr.unitarity_defect() == 0.0);

            const MatC trig = real_form_matrix(m, window);
            const MatC basis = exponential_to_trig(m, window);
            const MatC expected = basis.inverse() * trig * basis;
            CHECK((jr.matrix() - expected).norm() <= 1e-12);
        }
    }

    const PolarisingOperator jr = standard_unitary_structure(2, 2);
    VecC constant = VecC::Zero(jr.size());
    constant(2 * 2 + 0) = 1.0;  // e_1 in the constant block
    const VecC image = jr.apply(constant);
    CHECK(image(2 * 2 + 1) == Complex(-1.0));  // J0 e_1 = -e_2

    VecC plus = VecC::Zero(jr.size());
    plus(jr.fibre_dim() * (1 + 2)) = 1.0;  // level k = +1
    CHECK(jr.apply(plus)(jr.fibre_dim() * 3) == Complex(0.0, -1.0));
    VecC minus = VecC::Zero(jr.size());
    minus(jr.fibre_dim() * (-1 + 2)) = 1.0;
    CHECK(jr.apply(minus)(jr.fibre_dim() * 1) == Complex(0.0, 1.0));
}

TEST_CASE("polarisation comparison finds the constant-block defect") {
    for (const int m : {2, 4}) {
        for (const int window : {1, 3, 6}) {
            const PolarisingOperator jc = standard_polarisation(m, window);
            CHECK(jc.square_residual() == 0.0);

            const PolarisationComparison self = polarisation_compare(jc, jc);
            CHECK(self.rank == 0);
            CHECK(self.hs_norm == 0.0);

            const PolarisationComparison cmp = polarisation_compare(
                jc, standard_unitary_structure(m, window));
            CHECK(cmp.rank == m / 2);
            CHECK(cmp.hs_norm ==
                  doctest::Approx(2.0 * std::sqrt(m / 2.0)).epsilon(1e-14));
            CHECK(cmp.lhs_square_residual == 0.0);
            CHECK(cmp.rhs_square_residual == 0.0);
        }
    }

    // Difference is supported on the constant block alone.
    const MatC diff = standard_polarisation(2, 3).matrix() -
                      standard_unitary_structure(2, 3).matrix();
    for (int r = 0; r < diff.rows(); ++r)
        for (int c = 0; c < diff.cols(); ++c)
            if (r / 2 != 3 || c / 2 != 3) CHECK(diff(r, c) == Complex(0.0));

    // Odd fibre: the J0 candidate annihilates the last constant direction
    // and fails J^2 = -I there; the report carries the violation.
    const PolarisingOperator odd = standard_unitary_structure(3, 2);
    CHECK(odd.square_residual() == 1.0);
    CHECK(odd.unitarity_defect() == 1.0);
    const PolarisationComparison bad =
        polarisation_compare(standard_polarisation(3, 2), odd);
    CHECK(bad.lhs_square_residual == 0.0);
    CHECK(bad.rhs_square_residual == 1.0);

    CHECK_THROWS_AS(polarisation_compare(standard_polarisation(2, 2),
                                         standard_polarisation(2, 3)),
                    WindowMismatch);
    CHECK_THROWS_AS(polarisation_compare(standard_polarisation(2, 2),
                                         standard_polarisation(4, 2)),
                    DimensionMismatch);
}

TEST_CASE("finite rank extension sums riesz-identified clifford terms") {
    const ModeSpace modes(2, 2);
    const FockSpace space{modes, 5};
    std::mt19937_64 rng(31);

    ExtensionTerm single{1, DualVector::basis(0, 2), FockVector::vacuum()};
    const FockVector got = finite_rank_clifford_extension(space, {single});
    CHECK(state_distance(modes, got,
                         FockVector::basis({modes.index(1, 0)})) == 0.0);

    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    for (int trial = 0; trial < 20; ++trial) {
        DualVector f(2);
        for (int k = -2; k <= 2; ++k) f.set(k, Complex(dist(rng), dist(rng)));
        const FockVector xi = random_state(modes, 3, rng);

        DualVector half(2);
        for (int k = -2; k <= 2; ++k) half.set(k, 0.5 * f.at(k));
        const FockVector whole =
            finite_rank_clifford_extension(space, {{2, f, xi}});
        const FockVector split = finite_rank_clifford_extension(
            space, {{2, half, xi}, {2, half, xi}});
        CHECK(state_distance(modes, whole, split) <=
              1e-12 * std::max(1.0, fock_norm(modes, whole)));
    }

    for (int trial = 0; trial < 100; ++trial) {
        std::vector<ExtensionTerm> terms;
        double bound = 0.0;
        for (int i = 0; i < 3; ++i) {
            DualVector f(2);
            for (int k = -2; k <= 2; ++k)
                f.set(k, Complex(dist(rng), dist(rng)));
            const FockVector xi = random_state(modes, 2, rng);
            bound += modes.norm(modes.riesz(1 + i % 2, f)) *
                     fock_norm(modes, xi);
            terms.push_back({1 + i % 2, f, xi});
        }
        const FockVector sum = finite_rank_clifford_extension(space, terms);
        CHECK(fock_norm(modes, sum) <= bound * (1.0 + 1e-12));
    }
}

TEST_CASE("rotations act diagonally and intertwine clifford factors") {
    const ModeSpace modes(2, 3);
    const FockSpace space{modes, 5};
    std::mt19937_64 rng(47);
    std::uniform_real_distribution<double> angle(0.0, kTwoPi);

    CHECK_THROWS_AS(implement_rotation(Complex(2.0, 0.0)), NotUnitModulus);

    const FockVector psi = random_state(modes, 3, rng);
    const FockVector same = implement_rotation(1.0).apply(modes, psi);
    CHECK(state_distance(modes, same, psi) <= 1e-14);

    const Complex lambda = std::polar(1.0, angle(rng));
    const FockRotation u = implement_rotation(lambda);
    const FockVector one = FockVector::basis({modes.index(2, -3)});
    const FockVector rotated = u.apply(modes, one);
    CHECK(std::abs(rotated.amps.at({modes.index(2, -3)}) -
                   std::pow(lambda, -3)) <= 1e-15);

    for (int trial = 0; trial < 20; ++trial) {
        const Complex mu = std::polar(1.0, angle(rng));
        const FockVector lhs = implement_rotation(lambda * mu).apply(modes, psi);
        const FockVector rhs = implement_rotation(mu).apply(
            modes, implement_rotation(lambda).apply(modes, psi));
        CHECK(state_distance(modes, lhs, rhs) <= 1e-12);

        // U pi(v) U^{-1} = pi(R v) on random states.
        const VecC v = random_vector(modes, rng);
        const FockRotation ui = implement_rotation(std::conj(lambda));
        const FockVector conjugated = u.apply(
            modes, clifford(space, v, ui.apply(modes, psi)));
        const FockVector direct =
            clifford(space, u.rotate_vector(modes, v), psi);
        CHECK(state_distance(modes, conjugated, direct) <= 1e-12);
    }
}

TEST_CASE("fock states round trip through json") {
    const ModeSpace modes(2, 2);
    std::mt19937_64 rng(53);
    const FockVector psi = random_state(modes, 4, rng);

    const std::string path = "fock_roundtrip.json";
    save_fock(psi, path);
    const FockVector back = load_fock(path);
    CHECK(back.amps.size() == psi.amps.size());
    for (const auto& [tuple, amp] : psi.amps)
        CHECK(back.amps.at(tuple) == amp);
    std::remove(path.c_str());

    CHECK_THROWS_AS(fock_from_json({{"tuples", {{0}}}, {"amps", {}}}),
                    ParseError);
    CHECK_THROWS_AS(
        fock_from_json({{"tuples", {{2, 1}}}, {"amps", {{1.0, 0.0}}}}),
        ParseError);
    CHECK_THROWS_AS(
        fock_from_json({{"tuples", {{0}}}, {"amps", {{1.0, 0.0, 2.0}}}}),
        ParseError);
    CHECK_THROWS_AS(fock_from_json({{"amps", {}}}), ParseError);
}
