#pragma once

#include <map>
#include <nlohmann/json.hpp>
#include <string>
#include <vector>

#include "loopforge/weighted_dual.hpp"

namespace loopforge {

// One-particle modes (j, k): fibre component j in 1..n, Fourier level k in
// [-K, K]. The basis is orthogonal and mode (j, k) has norm^2 given by the
// level weight, either identically 1 or a WeightSequence entry.
class ModeSpace {
  public:
    ModeSpace(int fibre_dim, int mode_window);          // a == 1
    ModeSpace(int fibre_dim, const WeightSequence& a);  // window from a

    int fibre_dim() const { return fibre_dim_; }
    int mode_window() const { return window_; }
    int size() const { return fibre_dim_ * (2 * window_ + 1); }

    int index(int fibre, int level) const;  // flat mode id
    int fibre_of(int id) const;
    int level_of(int id) const;
    double weight(int id) const;

    // Hermitian form sum_m u_m conj(v_m) w_m, linear in the first slot.
    Complex inner(const VecC& u, const VecC& v) const;
    double norm(const VecC& u) const;

    // One-particle vector v with f(u) = <u, v> for the level functional
    // u -> sum_k f^k u_{(fibre, k)}.
    VecC riesz(int fibre, const DualVector& f) const;

  private:
    int fibre_dim_;
    int window_;
    std::vector<double> level_weights_;  // index k + K
};

// Sparse exterior-algebra state: amplitudes on strictly increasing mode-id
// tuples of length <= the particle cap. Mass dropped at the cap is reported
// as weighted squared norm in overflow_mass.
struct FockVector {
    std::map<std::vector<int>, Complex> amps;
    double overflow_mass = 0.0;

    static FockVector vacuum();
    static FockVector basis(std::vector<int> tuple);  // validates ordering

    FockVector& accumulate(const FockVector& other, Complex scale = 1.0);
    FockVector& drop_zeros();
};

FockVector add(const FockVector& a, const FockVector& b);
FockVector scale(const FockVector& a, Complex s);
Complex fock_inner(const ModeSpace& modes, const FockVector& a,
                   const FockVector& b);
double fock_norm(const ModeSpace& modes, const FockVector& a);

struct FockSpace {
    ModeSpace modes;
    int particle_cap = 8;
};

// Wedge by v with sort-permutation signs; results above the cap are dropped
// into overflow_mass.
FockVector create(const FockSpace& space, const VecC& v, const FockVector& psi);
// Contraction sum_j (-1)^{j-1} <e_{T_j}, v> with the ModeSpace inner product.
FockVector annihilate(const FockSpace& space, const VecC& v,
                      const FockVector& psi);
// Clifford multiplication create + annihilate; odd for the parity grading.
FockVector clifford(const FockSpace& space, const VecC& v,
                    const FockVector& psi);

struct CarResiduals {
    double mixed = 0.0;                // ||{c(u), a(v)} - <u,v>|| on the set
    double double_create = 0.0;        // ||{c(u), c(v)}||
    double double_annihilate = 0.0;    // ||{a(u), a(v)}||
};

// Residuals maximized over all normalized basis tuples of length below the
// cap, so no anticommutator leaves the truncation. Cost grows with
// C(size, cap - 1); keep the space small.
CarResiduals car_check(const FockSpace& space, const VecC& u, const VecC& v);

// Operator on the truncated complexified loop space L^2(S^1, C^m): diagonal
// phase -i on levels k > 0 and +i on k < 0, an m x m matrix on the constant
// block. Candidates that fail J^2 = -I are representable; the residuals
// report the defect.
class PolarisingOperator {
  public:
    PolarisingOperator(int fibre_dim, int mode_window, MatC constant_block);

    int fibre_dim() const { return fibre_dim_; }
    int mode_window() const { return window_; }
    int size() const { return fibre_dim_ * (2 * window_ + 1); }
    Complex phase(int level) const;  // levels k != 0
    const MatC& constant_block() const { return block_; }

    VecC apply(const VecC& x) const;
    MatC matrix() const;
    double square_residual() const;    // ||J^2 + I||
    double unitarity_defect() const;   // ||J* J - I||

  private:
    int fibre_dim_;
    int window_;
    MatC block_;
};

// J_C: -i on all levels k >= 0 including the constant block, +i on k < 0.
PolarisingOperator standard_polarisation(int fibre_dim, int mode_window);
// J_R extended complex-linearly: J0 on the constant block. Odd fibre
// dimensions build the degenerate candidate with the last constant direction
// sent to zero; it fails J^2 = -I and the residuals say so.
PolarisingOperator standard_unitary_structure(int fibre_dim, int mode_window);

struct PolarisationComparison {
    int rank = 0;          // exact rank of J1 - J2 on the truncation
    double hs_norm = 0.0;  // Hilbert-Schmidt norm of the difference
    double lhs_square_residual = 0.0;
    double rhs_square_residual = 0.0;
};

PolarisationComparison polarisation_compare(const PolarisingOperator& j1,
                                            const PolarisingOperator& j2);

// One finite-rank term: the level functional riesz-identified inside the
// given fibre, paired with the state it multiplies.
struct ExtensionTerm {
    int fibre = 1;
    DualVector functional;
    FockVector state;
};

// Sum of pi(riesz(f_i)) xi_i over the terms.
FockVector finite_rank_clifford_extension(const FockSpace& space,
                                          const std::vector<ExtensionTerm>& terms);

// Second-quantized rotation: basis tuple T picks up prod_{(j,k) in T}
// lambda^k; one-particle vectors rotate mode-wise by lambda^k.
struct FockRotation {
    Complex lambda{1.0, 0.0};

    FockVector apply(const ModeSpace& modes, const FockVector& psi) const;
    VecC rotate_vector(const ModeSpace& modes, const VecC& v) const;
};

FockRotation implement_rotation(Complex lambda);  // NotUnitModulus off S^1

// State file layout: {"tuples": [[...mode ids...]], "amps": [[re, im]]}.
nlohmann::json fock_to_json(const FockVector& psi);
FockVector fock_from_json(const nlohmann::json& j);
void save_fock(const FockVector& psi, const std::string& path);
FockVector load_fock(const std::string& path);

}  // namespace loopforge
