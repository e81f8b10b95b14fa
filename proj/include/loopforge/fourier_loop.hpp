#pragma once

#include <map>
#include <vector>

#include "loopforge/linalg.hpp"
#include "loopforge/truncation.hpp"

namespace loopforge {

// Truncated Fourier (Laurent) loop with sparse coefficients on [-N, N].
// Coefficients are dim x cols complex blocks: cols == 1 for vector loops,
// cols == dim for matrix loops, dim == cols == 1 for scalars. A loop flagged
// real_valued keeps coeff(-k) == conj(coeff(k)).
class FourierLoop {
  public:
    FourierLoop() = default;
    FourierLoop(TruncationConfig cfg, int cols = 1, bool real_valued = false)
        : cfg_(cfg), cols_(cols), real_(real_valued) {
        cfg_.validate();
        if (cols_ < 1) throw Error("cols must be positive");
    }

    const TruncationConfig& config() const { return cfg_; }
    int max_mode() const { return cfg_.max_mode; }
    int rows() const { return cfg_.dim; }
    int cols() const { return cols_; }
    bool real_valued() const { return real_; }
    void clear_real_flag() { real_ = false; }

    bool has_mode(int k) const { return coeffs_.count(k) != 0; }
    const std::map<int, MatC>& coefficients() const { return coeffs_; }

    MatC coeff(int k) const {
        auto it = coeffs_.find(k);
        if (it == coeffs_.end()) return MatC::Zero(cfg_.dim, cols_);
        return it->second;
    }

    void set_coeff(int k, MatC value);
    void add_to_coeff(int k, const MatC& value);

    // Drops stored coefficients with norm <= eps; keeps the window sparse.
    void prune(double eps = 0.0);

    MatC evaluate(double t) const;

    // Residual of the real-valuedness symmetry coeff(-k) = conj(coeff(k)).
    double reality_residual() const;

    double l2_norm() const;

    static FourierLoop constant(const MatC& value, TruncationConfig cfg);
    static FourierLoop basis(int k, TruncationConfig cfg);  // scalar e^k

  private:
    TruncationConfig cfg_{};
    int cols_ = 1;
    bool real_ = false;
    std::map<int, MatC> coeffs_;
};

struct ShiftResult {
    FourierLoop loop;
    double overflow_mass = 0.0;  // sum of squared norms pushed past the window
};

struct ProductResult {
    FourierLoop loop;
    double overflow_mass = 0.0;
};

struct SampleResult {
    FourierLoop loop;
    // Energy seen at resolvable frequencies outside [-N, N]; truncated, not
    // folded into the window.
    double out_of_window_mass = 0.0;
    // True when energy occupies bins at the resolution boundary (2|b|+1 >= M),
    // where folded out-of-band content lands first.
    bool aliasing_suspected = false;
};

// (R_lambda f)(t) = f applied to rotated parameter; coeff(k) *= lambda^k.
FourierLoop rotate(const FourierLoop& f, Complex lambda);

// (iota f)(t) = f(-t); coeff(k) <- coeff(-k).
FourierLoop involute(const FourierLoop& f);

// Multiplication by z^q: coeff(k) = old coeff(k - q).
ShiftResult shift(const FourierLoop& f, int q);

// d/dt; coeff(k) *= 2 pi i k.
FourierLoop derivative(const FourierLoop& f);

// Lossless window change; throws ModeOutsideWindow if a stored coefficient
// would fall outside the new window.
FourierLoop rewindow(const FourierLoop& f, int max_mode);

// Pointwise (Cauchy) product; lhs may be scalar-valued or matrix-valued with
// lhs.cols == rhs.rows. Out-of-window modes are summed before their mass is
// reported so cancellations are respected.
ProductResult product(const FourierLoop& lhs, const FourierLoop& rhs);

FourierLoop add(const FourierLoop& a, const FourierLoop& b);
FourierLoop scale(const FourierLoop& f, Complex s);
double l2_distance(const FourierLoop& a, const FourierLoop& b);

// sqrt of the coefficient mass strictly beyond modes [-K, K].
double fourier_tail_norm(const FourierLoop& f, int K);

// Discrete Fourier coefficients from M >= 2N+1 equispaced samples at t = j/M.
SampleResult from_samples(const std::vector<MatC>& samples, TruncationConfig cfg,
                          int cols = 1);

// Samples `fn` at 4N+1 points (or `min_samples` if larger) and transforms.
SampleResult from_function(const std::function<MatC(double)>& fn,
                           TruncationConfig cfg, int cols = 1,
                           int min_samples = 0);

}  // namespace loopforge
