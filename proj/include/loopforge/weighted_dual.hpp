#pragma once

#include <nlohmann/json.hpp>
#include <string>
#include <vector>

#include "loopforge/fourier_loop.hpp"

namespace loopforge {

enum class WeightFamily { Geometric, CoshSquared, Custom };

// Positive symmetric weight sequence a_p on modes p in [-N, N], the diagonal
// of a circle- and involution-invariant inner product. The family tag is the
// decay certificate: window values alone cannot certify tail behaviour.
class WeightSequence {
  public:
    // a_p = rho^{-|p|}, rho > 1.
    static WeightSequence geometric(double rho, int max_mode);
    // a_p = 1 / cosh(2 pi p)^2, the weight pattern behind cos of the
    // covariant derivative.
    static WeightSequence cosh_squared(int max_mode);
    // Window-only data; decay_degree m records the certificate
    // sup_p a_p (1+|p|)^m over the window.
    static WeightSequence custom(std::vector<double> values, int decay_degree = 8);

    int max_mode() const { return n_; }
    WeightFamily family() const { return family_; }
    double ratio() const;  // geometric rho; Error for other families
    double at(int p) const;
    const std::vector<double>& values() const { return values_; }

    int decay_degree() const { return decay_degree_; }
    double decay_bound() const;  // sup over the window of a_p (1+|p|)^m

  private:
    WeightSequence() = default;
    std::vector<double> values_;  // index p + N
    WeightFamily family_ = WeightFamily::Custom;
    double rho_ = 0.0;
    int n_ = 0;
    int decay_degree_ = 8;
};

// Finitely supported element of the dual space, b = (b^p) on [-N, N].
struct DualVector {
    VecC b;
    int max_mode = 0;

    explicit DualVector(int max_mode);
    static DualVector basis(int p, int max_mode);  // e_p

    Complex at(int p) const;
    void set(int p, Complex value);
    // Smallest m >= 0 with |b^p| <= bound (1+|p|)^m across the window.
    int growth_certificate(double bound = 1.0) const;
};

// Sum of b^p conj(c^p) a_p; the diagonal positive form the weights classify.
Complex inner_product(const DualVector& b, const DualVector& c,
                      const WeightSequence& a);
double dual_norm(const DualVector& b, const WeightSequence& a);

struct EquivalenceReport {
    double sup_ratio = 0.0;          // sup over the window of a_p / b_p
    double sup_ratio_reverse = 0.0;  // sup of b_p / a_p
    bool equivalent = false;
    // True when both families extend beyond the window (geometric pairs);
    // otherwise the verdict is the window-only one.
    bool extrapolated = false;
};

EquivalenceReport equivalence_check(const WeightSequence& a,
                                    const WeightSequence& b);

// sqrt of sup a_p / a_{p+q} over p with both ends in-window. Geometric
// families evaluate the sup in closed form; |q| <= 2N.
double z_operator_norm(const WeightSequence& a, int q);

// s a + t b with s, t >= 0, not both zero.
WeightSequence cone_combine(const WeightSequence& a, const WeightSequence& b,
                            double s, double t);

// The loop lambda -> c(R_{lambda^{-1}} gamma_a): mode k carries
// conj(c^{-k}) a_k, so e_q lands on a_q e^{-q}.
FourierLoop diamond(const DualVector& c, const WeightSequence& a);

// Pairing b(f) = sum of b^p f_{-p} against a scalar loop; together with
// diamond it reproduces the weighted inner product.
Complex dual_pairing(const DualVector& b, const FourierLoop& f);

// J e_p = -i e_p for p >= 0 and +i e_p for p < 0; J^2 = -1, isometric for
// every weight.
DualVector polarisation_J(const DualVector& x);

// Commutator of a polynomial-loop operator (acting by truncated convolution
// on the weighted window) with the polarisation J.
struct CommutatorReport {
    MatC matrix;         // weighted-orthonormal coordinates
    double hs_norm = 0;  // Hilbert-Schmidt norm on the weighted space
    int rank = 0;
};

CommutatorReport polarisation_commutator(const FourierLoop& op,
                                         const WeightSequence& a);
double commutator_hs_norm(const FourierLoop& op, const WeightSequence& a);

// zeta_t e_p = (a_{p-1}/a_p)^{t/2} e_{p-1} truncated to in-window ratios:
// columns are domain modes [-N+1, N], rows are target modes [-N, N-1], both
// increasing, so the matrix is diagonal in these coordinates. t = 0 is the
// restricted down-shift and t = 1 conjugates it by diag(sqrt a_p).
MatR zeta_homotopy(const WeightSequence& a, double t);

struct GrowthWitness {
    std::vector<double> norms;  // norms[q] for q = 0..qmax
    bool strictly_increasing = false;
};

// Table of z^q operator norms; rapid decay forces strict growth.
GrowthWitness unbounded_growth_witness(const WeightSequence& a, int qmax);

// Weight file layout: {"family": "geometric"|"custom", "rho": float?,
// "N": int, "values": [a_{-N} ... a_N]}. The cosh^2 family serializes as
// custom values.
nlohmann::json weights_to_json(const WeightSequence& a);
WeightSequence weights_from_json(const nlohmann::json& j);
void save_weights(const WeightSequence& a, const std::string& path);
WeightSequence load_weights(const std::string& path);

}  // namespace loopforge
