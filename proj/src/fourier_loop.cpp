#include "loopforge/fourier_loop.hpp"

#include <cmath>

namespace loopforge {

void FourierLoop::set_coeff(int k, MatC value) {
    if (std::abs(k) > cfg_.max_mode)
        throw ModeOutsideWindow("mode " + std::to_string(k) + " outside [-" +
                                std::to_string(cfg_.max_mode) + ", " +
                                std::to_string(cfg_.max_mode) + "]");
    if (value.rows() != cfg_.dim || value.cols() != cols_)
        throw DimensionMismatch("coefficient block has wrong shape");
    coeffs_[k] = std::move(value);
}

void FourierLoop::add_to_coeff(int k, const MatC& value) {
    auto it = coeffs_.find(k);
    if (it == coeffs_.end())
        set_coeff(k, value);
    else
        it->second += value;
}

void FourierLoop::prune(double eps) {
    for (auto it = coeffs_.begin(); it != coeffs_.end();) {
        if (it->second.norm() <= eps)
            it = coeffs_.erase(it);
        else
            ++it;
    }
}

MatC FourierLoop::evaluate(double t) const {
    MatC out = MatC::Zero(cfg_.dim, cols_);
    for (const auto& [k, c] : coeffs_)
        out += c * std::polar(1.0, kTwoPi * static_cast<double>(k) * t);
    return out;
}

double FourierLoop::reality_residual() const {
    double sq = 0.0;
    for (const auto& [k, c] : coeffs_) sq += (coeff(-k).conjugate() - c).squaredNorm();
    return std::sqrt(sq);
}

double FourierLoop::l2_norm() const {
    double sq = 0.0;
    for (const auto& [k, c] : coeffs_) sq += c.squaredNorm();
    return std::sqrt(sq);
}

FourierLoop FourierLoop::constant(const MatC& value, TruncationConfig cfg) {
    cfg.dim = static_cast<int>(value.rows());
    FourierLoop f(cfg, static_cast<int>(value.cols()));
    f.set_coeff(0, value);
    return f;
}

FourierLoop FourierLoop::basis(int k, TruncationConfig cfg) {
    cfg.dim = 1;
    FourierLoop f(cfg, 1);
    f.set_coeff(k, MatC::Constant(1, 1, 1.0));
    return f;
}

FourierLoop rotate(const FourierLoop& f, Complex lambda) {
    if (std::abs(std::abs(lambda) - 1.0) > f.config().tol)
        throw NotUnitModulus("rotation parameter must have unit modulus");
    FourierLoop out(f.config(), f.cols(),
                    f.real_valued() && std::abs(lambda.imag()) == 0.0);
    for (const auto& [k, c] : f.coefficients())
        out.set_coeff(k, c * std::pow(lambda, k));
    return out;
}

FourierLoop involute(const FourierLoop& f) {
    FourierLoop out(f.config(), f.cols(), f.real_valued());
    for (const auto& [k, c] : f.coefficients()) out.set_coeff(-k, c);
    return out;
}

ShiftResult shift(const FourierLoop& f, int q) {
    ShiftResult res{FourierLoop(f.config(), f.cols(),
                                f.real_valued() && q == 0),
                    0.0};
    const int n = f.max_mode();
    for (const auto& [k, c] : f.coefficients()) {
        const int target = k + q;
        if (std::abs(target) <= n)
            res.loop.set_coeff(target, c);
        else
            res.overflow_mass += c.squaredNorm();
    }
    return res;
}

FourierLoop derivative(const FourierLoop& f) {
    FourierLoop out(f.config(), f.cols(), f.real_valued());
    for (const auto& [k, c] : f.coefficients())
        out.set_coeff(k, Complex(0.0, kTwoPi * static_cast<double>(k)) * c);
    return out;
}

FourierLoop rewindow(const FourierLoop& f, int max_mode) {
    TruncationConfig cfg = f.config();
    cfg.max_mode = max_mode;
    FourierLoop out(cfg, f.cols(), f.real_valued());
    for (const auto& [k, c] : f.coefficients()) out.set_coeff(k, c);
    return out;
}

ProductResult product(const FourierLoop& lhs, const FourierLoop& rhs) {
    const bool scalar_lhs = lhs.rows() == 1 && lhs.cols() == 1;
    if (!scalar_lhs && lhs.cols() != rhs.rows())
        throw DimensionMismatch("product needs lhs.cols == rhs.rows or scalar lhs");
    if (lhs.config().max_mode != rhs.config().max_mode)
        throw WindowMismatch("product needs matching mode windows");

    TruncationConfig cfg = rhs.config();
    cfg.dim = scalar_lhs ? rhs.rows() : lhs.rows();
    ProductResult res{FourierLoop(cfg, rhs.cols(),
                                  lhs.real_valued() && rhs.real_valued()),
                      0.0};
    const int n = cfg.max_mode;
    std::map<int, MatC> spill;
    for (const auto& [ka, ca] : lhs.coefficients()) {
        for (const auto& [kb, cb] : rhs.coefficients()) {
            const int k = ka + kb;
            MatC term = scalar_lhs ? MatC(ca(0, 0) * cb) : MatC(ca * cb);
            if (std::abs(k) <= n) {
                res.loop.add_to_coeff(k, term);
            } else {
                auto it = spill.find(k);
                if (it == spill.end())
                    spill.emplace(k, std::move(term));
                else
                    it->second += term;
            }
        }
    }
    for (const auto& [k, c] : spill) res.overflow_mass += c.squaredNorm();
    res.loop.prune();
    return res;
}

FourierLoop add(const FourierLoop& a, const FourierLoop& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw DimensionMismatch("add needs matching shapes");
    if (a.max_mode() != b.max_mode())
        throw WindowMismatch("add needs matching mode windows");
    FourierLoop out(a.config(), a.cols(), a.real_valued() && b.real_valued());
    for (const auto& [k, c] : a.coefficients()) out.set_coeff(k, c);
    for (const auto& [k, c] : b.coefficients()) out.add_to_coeff(k, c);
    out.prune();
    return out;
}

FourierLoop scale(const FourierLoop& f, Complex s) {
    FourierLoop out(f.config(), f.cols(),
                    f.real_valued() && std::abs(s.imag()) == 0.0);
    for (const auto& [k, c] : f.coefficients()) out.set_coeff(k, s * c);
    return out;
}

double l2_distance(const FourierLoop& a, const FourierLoop& b) {
    double sq = 0.0;
    std::map<int, MatC> diff;
    for (const auto& [k, c] : a.coefficients()) diff[k] = c;
    for (const auto& [k, c] : b.coefficients()) {
        auto it = diff.find(k);
        if (it == diff.end())
            diff[k] = -c;
        else
            it->second -= c;
    }
    for (const auto& [k, c] : diff) sq += c.squaredNorm();
    return std::sqrt(sq);
}

double fourier_tail_norm(const FourierLoop& f, int K) {
    double sq = 0.0;
    for (const auto& [k, c] : f.coefficients())
        if (std::abs(k) > K) sq += c.squaredNorm();
    return std::sqrt(sq);
}

SampleResult from_samples(const std::vector<MatC>& samples, TruncationConfig cfg,
                          int cols) {
    cfg.validate();
    const int m = static_cast<int>(samples.size());
    const int n = cfg.max_mode;
    if (m < 2 * n + 1)
        throw TooFewSamples("need at least 2N+1 = " + std::to_string(2 * n + 1) +
                            " samples, got " + std::to_string(m));
    for (const auto& s : samples)
        if (s.rows() != cfg.dim || s.cols() != cols)
            throw DimensionMismatch("sample block has wrong shape");

    SampleResult res{FourierLoop(cfg, cols), 0.0, false};
    const int lo = -(m / 2);
    const int hi = (m - 1) / 2;
    double edge_mass = 0.0;
    double scale = 0.0;
    for (const auto& s : samples) scale = std::max(scale, s.norm());
    for (int b = lo; b <= hi; ++b) {
        MatC c = MatC::Zero(cfg.dim, cols);
        for (int j = 0; j < m; ++j)
            c += samples[j] *
                 std::polar(1.0 / m, -kTwoPi * static_cast<double>(b) * j / m);
        const double mass = c.squaredNorm();
        if (std::abs(b) <= n) {
            if (mass > 0.0) res.loop.set_coeff(b, std::move(c));
        } else {
            res.out_of_window_mass += mass;
        }
        if (2 * std::abs(b) + 1 >= m) edge_mass += mass;
    }
    res.aliasing_suspected = std::sqrt(edge_mass) > cfg.tol;
    // Coefficients below the DFT rounding floor are unrecoverable noise.
    res.loop.prune(1e-15 * m * scale);
    return res;
}

SampleResult from_function(const std::function<MatC(double)>& fn,
                           TruncationConfig cfg, int cols, int min_samples) {
    const int m = std::max(4 * cfg.max_mode + 1, min_samples);
    std::vector<MatC> samples;
    samples.reserve(m);
    for (int j = 0; j < m; ++j)
        samples.push_back(fn(static_cast<double>(j) / m));
    return from_samples(samples, cfg, cols);
}

}  // namespace loopforge
