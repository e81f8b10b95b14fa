#pragma once

#include <nlohmann/json.hpp>
#include <string>

#include "loopforge/fourier_loop.hpp"

namespace loopforge {

// Loop file layout:
//   {"dim": n, "max_mode": N, "real": bool, "cols": c,
//    "modes": {"<k>": [[re, im], ...]}}
// Mode entries are row-major over the dim x cols block; "cols" is omitted when
// it equals 1. Doubles survive the round trip bit-exactly.
nlohmann::json loop_to_json(const FourierLoop& f);
FourierLoop loop_from_json(const nlohmann::json& j, double tol = 1e-9);

void save_loop(const FourierLoop& f, const std::string& path);
FourierLoop load_loop(const std::string& path, double tol = 1e-9);

}  // namespace loopforge
