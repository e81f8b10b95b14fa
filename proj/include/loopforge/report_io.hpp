#pragma once

#include <nlohmann/json.hpp>

#include <cstdint>
#include <string>
#include <vector>

namespace loopforge {

// Shared knobs for the verification suites. The seed feeds per-check
// generators through fnv1a(check name, seed), so check order never matters.
struct SuiteConfig {
    int modes = 16;          // Fourier window N
    int dim = 2;             // matrix / fibre dimension n
    int fock_window = 6;     // Fock level window K
    int particle_cap = 6;    // exterior algebra cap P
    double tol = 1e-9;       // generic tolerance for "to tol" checks
    std::uint64_t seed = 42;
    int steps = 4096;        // RK4 steps per loop
    bool timings = false;    // wall-clock ms break byte-identical reports
};

struct CheckResult {
    std::string name;
    std::string anchor;  // the formula the check exercises
    std::string status;  // "pass" | "fail" | "skip"
    double residual = 0.0;
    double tolerance = 0.0;
    double runtime_ms = 0.0;
    std::string detail;  // skip reason, or offending data on failure
};

struct SuiteReport {
    std::string suite;
    SuiteConfig config;
    std::vector<CheckResult> checks;

    bool all_passed() const;  // no "fail" entries; skips do not count
};

nlohmann::json report_to_json(const SuiteReport& report);
std::string report_to_csv(const SuiteReport& report);

void save_report(const SuiteReport& report, const std::string& path,
                 bool as_csv);

}  // namespace loopforge
