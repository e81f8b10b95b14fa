#pragma once

#include "loopforge/errors.hpp"

namespace loopforge {

// Shared numerical conventions for the truncated-mode algebra.
//
//   max_mode  N: coefficients live on modes k in [-N, N]
//   dim       n: fibre dimension (rows of each coefficient)
//   tol:         default residual tolerance for membership checks
struct TruncationConfig {
    int max_mode = 16;
    int dim = 2;
    double tol = 1e-9;

    void validate() const {
        if (max_mode < 0) throw Error("max_mode must be nonnegative");
        if (dim < 1) throw Error("dim must be positive");
        if (tol <= 0.0) throw Error("tol must be positive");
    }

    bool operator==(const TruncationConfig&) const = default;
};

// Eigenvalues closer than this are treated as one spectral group.
inline constexpr double kEigenvalueGroupTol = 1e-7;

// Angular distance (radians) to a branch cut below which sector logs refuse.
inline constexpr double kCutTol = 1e-8;

}  // namespace loopforge
