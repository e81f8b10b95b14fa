#pragma once

#include "loopforge/errors.hpp"
#include "loopforge/report_io.hpp"

#include <string>
#include <vector>

namespace loopforge {

// Module property suites: loops, lie, paths, holonomy, weights, fock, dirac,
// plus "all" for the concatenation in that order.
const std::vector<std::string>& suite_names();

// Runs every check of the named suite with per-check seeds derived from
// cfg.seed and the check name. Throws UnknownSuite for anything else.
SuiteReport run_suite(const std::string& name, const SuiteConfig& cfg);

}  // namespace loopforge
