#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "loopforge/fourier_loop.hpp"
#include "loopforge/loop_io.hpp"

using namespace loopforge;

namespace {

MatC scalar(Complex v) { return MatC::Constant(1, 1, v); }

TruncationConfig cfg(int n, int dim = 1) {
    TruncationConfig c;
    c.max_mode = n;
    c.dim = dim;
    return c;
}

bool close(Complex a, Complex b, double eps = 1e-12) { return std::abs(a - b) <= eps; }

}  // namespace

TEST_CASE("evaluate sums stored modes") {
    FourierLoop f(cfg(4));
    f.set_coeff(-1, scalar(1.0));
    f.set_coeff(1, scalar(1.0));
    CHECK(close(f.evaluate(0.0)(0, 0), 2.0));
    CHECK(close(f.evaluate(0.25)(0, 0), 0.0));  // i + (-i)
    CHECK(close(f.evaluate(0.5)(0, 0), -2.0));
}

TEST_CASE("rotate scales mode k by lambda^k") {
    FourierLoop f(cfg(4));
    f.set_coeff(1, scalar(1.0));
    f.set_coeff(-1, scalar(1.0));
    const FourierLoop g = rotate(f, Complex(0.0, 1.0));
    CHECK(close(g.coeff(1)(0, 0), Complex(0.0, 1.0)));
    CHECK(close(g.coeff(-1)(0, 0), Complex(0.0, -1.0)));
    CHECK_THROWS_AS(rotate(f, Complex(2.0, 0.0)), NotUnitModulus);

    // Rotation is multiplicative in the parameter.
    const Complex a = std::polar(1.0, 0.37), b = std::polar(1.0, 1.91);
    CHECK(l2_distance(rotate(rotate(f, a), b), rotate(f, a * b)) < 1e-14);
}

TEST_CASE("rotate is an algebra map against the product") {
    FourierLoop f(cfg(8)), g(cfg(8));
    f.set_coeff(0, scalar(1.0));
    f.set_coeff(2, scalar({0.5, -0.25}));
    g.set_coeff(-1, scalar({0.0, 2.0}));
    g.set_coeff(3, scalar(1.5));
    const Complex lam = std::polar(1.0, 0.81);
    const FourierLoop lhs = rotate(product(f, g).loop, lam);
    const FourierLoop rhs = product(rotate(f, lam), rotate(g, lam)).loop;
    CHECK(l2_distance(lhs, rhs) < 1e-13);
}

TEST_CASE("involution swaps modes and squares to the identity") {
    FourierLoop f(cfg(3));
    f.set_coeff(2, scalar({1.0, 1.0}));
    f.set_coeff(-1, scalar(4.0));
    const FourierLoop g = involute(f);
    CHECK(close(g.coeff(-2)(0, 0), Complex(1.0, 1.0)));
    CHECK(close(g.coeff(1)(0, 0), 4.0));
    CHECK(l2_distance(involute(g), f) == 0.0);
}

TEST_CASE("shift moves modes and reports overflow") {
    const int n = 5;
    FourierLoop f = FourierLoop::basis(n, cfg(n));
    const ShiftResult pushed = shift(f, 1);
    CHECK(pushed.loop.coefficients().empty());
    CHECK(pushed.overflow_mass == doctest::Approx(1.0));

    FourierLoop g = FourierLoop::basis(2, cfg(n));
    const ShiftResult s = shift(g, -3);
    CHECK(close(s.loop.coeff(-1)(0, 0), 1.0));
    CHECK(s.overflow_mass == 0.0);

    // Composition of in-window shifts is the summed shift.
    const FourierLoop twice = shift(shift(g, 1).loop, -2).loop;
    CHECK(l2_distance(twice, shift(g, -1).loop) == 0.0);
}

TEST_CASE("derivative multiplies by 2 pi i k") {
    FourierLoop f(cfg(4));
    f.set_coeff(1, scalar(1.0));
    f.set_coeff(-2, scalar(1.0));
    const FourierLoop d = derivative(f);
    CHECK(close(d.coeff(1)(0, 0), Complex(0.0, kTwoPi)));
    CHECK(close(d.coeff(-2)(0, 0), Complex(0.0, -2.0 * kTwoPi)));
    CHECK(d.coeff(0).norm() == 0.0);

    const Complex lam = std::polar(1.0, 2.2);
    CHECK(l2_distance(derivative(rotate(f, lam)), rotate(derivative(f), lam)) < 1e-13);
}

TEST_CASE("product convolves coefficients") {
    FourierLoop f(cfg(4)), g(cfg(4));
    f.set_coeff(0, scalar(1.0));
    f.set_coeff(1, scalar(1.0));
    g.set_coeff(0, scalar(1.0));
    g.set_coeff(-1, scalar(1.0));
    const ProductResult r = product(f, g);
    CHECK(close(r.loop.coeff(-1)(0, 0), 1.0));
    CHECK(close(r.loop.coeff(0)(0, 0), 2.0));
    CHECK(close(r.loop.coeff(1)(0, 0), 1.0));
    CHECK(r.overflow_mass == 0.0);

    const ProductResult o = product(FourierLoop::basis(4, cfg(4)),
                                    FourierLoop::basis(1, cfg(4)));
    CHECK(o.loop.coefficients().empty());
    CHECK(o.overflow_mass == doctest::Approx(1.0));
}

TEST_CASE("product respects cancellation in the overflow mass") {
    FourierLoop f(cfg(2)), g(cfg(2));
    f.set_coeff(1, scalar(1.0));
    f.set_coeff(2, scalar(1.0));
    g.set_coeff(2, scalar(1.0));
    g.set_coeff(1, scalar(-1.0));
    // (z + z^2)(z^2 - z) = z^4 - z^2 ... the z^3 terms cancel exactly.
    const ProductResult r = product(f, g);
    CHECK(r.overflow_mass == doctest::Approx(1.0));  // only z^4 spills
    CHECK(close(r.loop.coeff(2)(0, 0), -1.0));
}

TEST_CASE("matrix and scalar products broadcast correctly") {
    TruncationConfig mc = cfg(3, 2);
    FourierLoop m(mc, 2);
    MatC a(2, 2);
    a << 0, 1, 1, 0;
    m.set_coeff(1, a);
    FourierLoop v(mc, 1);
    v.set_coeff(0, (MatC(2, 1) << 1.0, 2.0).finished());
    const ProductResult mv = product(m, v);
    CHECK(close(mv.loop.coeff(1)(0, 0), 2.0));
    CHECK(close(mv.loop.coeff(1)(1, 0), 1.0));

    FourierLoop s = FourierLoop::basis(1, cfg(3));
    const ProductResult sv = product(s, v);
    CHECK(close(sv.loop.coeff(1)(1, 0), 2.0));

    FourierLoop w(cfg(3, 3), 1);
    CHECK_THROWS_AS(product(m, w), DimensionMismatch);
}

TEST_CASE("Leibniz rule holds exactly inside the half window") {
    FourierLoop f(cfg(8)), g(cfg(8));
    f.set_coeff(-3, scalar({0.3, 0.1}));
    f.set_coeff(2, scalar(1.0));
    g.set_coeff(4, scalar({0.0, -1.0}));
    g.set_coeff(-1, scalar(0.7));
    const FourierLoop lhs = derivative(product(f, g).loop);
    const FourierLoop rhs = add(product(derivative(f), g).loop,
                                product(f, derivative(g)).loop);
    CHECK(l2_distance(lhs, rhs) < 1e-12);
}

TEST_CASE("real flag tracks the coefficient symmetry") {
    FourierLoop f(cfg(4), 1, true);
    f.set_coeff(0, scalar(2.0));
    f.set_coeff(1, scalar({0.5, 0.25}));
    f.set_coeff(-1, scalar({0.5, -0.25}));
    CHECK(f.reality_residual() == 0.0);

    CHECK(derivative(f).real_valued());
    CHECK(derivative(f).reality_residual() < 1e-15);
    CHECK(involute(f).real_valued());
    CHECK(product(f, f).loop.real_valued());
    CHECK(product(f, f).loop.reality_residual() < 1e-15);
    CHECK(rotate(f, Complex(-1.0, 0.0)).real_valued());
    CHECK_FALSE(rotate(f, Complex(0.0, 1.0)).real_valued());
    CHECK_FALSE(shift(f, 1).loop.real_valued());
}

TEST_CASE("fourier_tail_norm counts mass beyond the cutoff") {
    FourierLoop f = FourierLoop::basis(2, cfg(4));
    CHECK(fourier_tail_norm(f, 1) == doctest::Approx(1.0));
    CHECK(fourier_tail_norm(f, 2) == 0.0);

    // A sampled degree-3 exponential has no tail beyond 3.
    const SampleResult s = from_function(
        [](double t) { return scalar(std::polar(1.0, kTwoPi * 3.0 * t)); }, cfg(4));
    CHECK(fourier_tail_norm(s.loop, 3) < 1e-12);
    CHECK(close(s.loop.coeff(3)(0, 0), 1.0, 1e-12));
}

TEST_CASE("from_samples recovers band-limited loops") {
    const SampleResult c = from_function(
        [](double) { return scalar(5.0); }, cfg(4));
    CHECK(close(c.loop.coeff(0)(0, 0), 5.0, 1e-13));
    CHECK(c.loop.coefficients().size() == 1);

    std::vector<MatC> samples;
    for (int j = 0; j < 16; ++j)
        samples.push_back(scalar(std::polar(1.0, kTwoPi * j / 16.0)));
    const SampleResult e1 = from_samples(samples, cfg(4));
    CHECK(close(e1.loop.coeff(1)(0, 0), 1.0, 1e-13));
    CHECK(e1.out_of_window_mass < 1e-24);
    CHECK_FALSE(e1.aliasing_suspected);

    // 3 + 2 cos(2 pi t) has coefficients {0: 3, 1: 1, -1: 1}.
    const SampleResult tri = from_function(
        [](double t) { return scalar(3.0 + 2.0 * std::cos(kTwoPi * t)); }, cfg(4));
    CHECK(close(tri.loop.coeff(0)(0, 0), 3.0, 1e-13));
    CHECK(close(tri.loop.coeff(1)(0, 0), 1.0, 1e-13));
    CHECK(close(tri.loop.coeff(-1)(0, 0), 1.0, 1e-13));

    // Round trip: evaluate then re-transform.
    FourierLoop f(cfg(5));
    f.set_coeff(-4, scalar({0.2, -1.0}));
    f.set_coeff(5, scalar({0.0, 0.3}));
    const SampleResult rt = from_function([&](double t) { return f.evaluate(t); },
                                          f.config());
    CHECK(l2_distance(rt.loop, f) < 1e-13);

    CHECK_THROWS_AS(from_samples(std::vector<MatC>(8, scalar(0.0)), cfg(4)),
                    TooFewSamples);
}

TEST_CASE("aliasing is reported when the resolution boundary is occupied") {
    auto tone6 = [](int m) {
        std::vector<MatC> s;
        for (int j = 0; j < m; ++j)
            s.push_back(scalar(std::polar(1.0, kTwoPi * 6.0 * j / m)));
        return s;
    };
    CHECK(from_samples(tone6(11), cfg(4)).aliasing_suspected);
    CHECK(from_samples(tone6(12), cfg(4)).aliasing_suspected);

    const SampleResult wide = from_samples(tone6(16), cfg(4));
    CHECK_FALSE(wide.aliasing_suspected);
    // Out-of-window energy is truncation overflow, visible and reported.
    CHECK(wide.out_of_window_mass == doctest::Approx(1.0));
    CHECK(wide.loop.l2_norm() < 1e-12);
}

TEST_CASE("mode window is enforced") {
    FourierLoop f(cfg(2));
    CHECK_THROWS_AS(f.set_coeff(3, scalar(1.0)), ModeOutsideWindow);
    CHECK_THROWS_AS(f.set_coeff(0, MatC::Zero(2, 1)), DimensionMismatch);
}

TEST_CASE("loop files round trip bit-exactly") {
    FourierLoop f(cfg(6, 2), 2, false);
    MatC c(2, 2);
    c << Complex(1.0 / 3.0, -std::sqrt(2.0)), Complex(0.1, 0.2),
        Complex(-7.0 / 11.0, 1e-17), Complex(2.0 / 3.0, 0.0);
    f.set_coeff(-5, c);
    f.set_coeff(0, MatC::Identity(2, 2));

    const nlohmann::json j = loop_to_json(f);
    const std::string text = j.dump();
    const FourierLoop g = loop_from_json(nlohmann::json::parse(text));

    REQUIRE(g.rows() == 2);
    REQUIRE(g.cols() == 2);
    for (const auto& [k, cf] : f.coefficients()) {
        const MatC cg = g.coeff(k);
        for (int r = 0; r < 2; ++r)
            for (int col = 0; col < 2; ++col) {
                CHECK(cf(r, col).real() == cg(r, col).real());
                CHECK(cf(r, col).imag() == cg(r, col).imag());
            }
    }

    FourierLoop real_loop(cfg(2), 1, true);
    real_loop.set_coeff(1, scalar({0.5, 0.5}));
    real_loop.set_coeff(-1, scalar({0.5, -0.5}));
    const FourierLoop rl = loop_from_json(loop_to_json(real_loop));
    CHECK(rl.real_valued());

    nlohmann::json bad = loop_to_json(real_loop);
    bad["modes"]["1"][0][0] = 0.75;  // break the symmetry
    CHECK_THROWS_AS(loop_from_json(bad), ParseError);
}
