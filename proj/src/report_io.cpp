#include "loopforge/report_io.hpp"

#include "loopforge/errors.hpp"

#include <fstream>
#include <sstream>

namespace loopforge {

bool SuiteReport::all_passed() const {
    for (const auto& check : checks)
        if (check.status == "fail") return false;
    return true;
}

nlohmann::json report_to_json(const SuiteReport& report) {
    nlohmann::json out;
    out["suite"] = report.suite;
    out["config"] = {{"modes", report.config.modes},
                     {"dim", report.config.dim},
                     {"fock_window", report.config.fock_window},
                     {"particle_cap", report.config.particle_cap},
                     {"tol", report.config.tol},
                     {"seed", report.config.seed},
                     {"steps", report.config.steps}};
    out["checks"] = nlohmann::json::array();
    for (const auto& check : report.checks) {
        nlohmann::json j = {{"name", check.name},
                            {"anchor", check.anchor},
                            {"status", check.status},
                            {"residual", check.residual},
                            {"tolerance", check.tolerance},
                            {"runtime_ms", check.runtime_ms}};
        if (!check.detail.empty()) j["detail"] = check.detail;
        out["checks"].push_back(std::move(j));
    }
    return out;
}

namespace {

// RFC 4180 quoting; details may carry commas and newlines.
std::string csv_field(const std::string& text) {
    if (text.find_first_of(",\"\n") == std::string::npos) return text;
    std::string quoted = "\"";
    for (char c : text) {
        quoted += c;
        if (c == '"') quoted += '"';
    }
    quoted += '"';
    return quoted;
}

}  // namespace

std::string report_to_csv(const SuiteReport& report) {
    std::ostringstream out;
    out << "# suite=" << report.suite << " modes=" << report.config.modes
        << " dim=" << report.config.dim
        << " fock_window=" << report.config.fock_window
        << " particle_cap=" << report.config.particle_cap
        << " tol=" << report.config.tol << " seed=" << report.config.seed
        << " steps=" << report.config.steps << "\n";
    out << "name,anchor,status,residual,tolerance,runtime_ms,detail\n";
    for (const auto& check : report.checks) {
        out << csv_field(check.name) << ',' << csv_field(check.anchor) << ','
            << check.status << ','
            << nlohmann::json(check.residual).dump() << ','
            << nlohmann::json(check.tolerance).dump() << ','
            << nlohmann::json(check.runtime_ms).dump() << ','
            << csv_field(check.detail) << "\n";
    }
    return out.str();
}

void save_report(const SuiteReport& report, const std::string& path,
                 bool as_csv) {
    std::ofstream out(path);
    if (!out) throw Error("cannot open report file: " + path);
    if (as_csv)
        out << report_to_csv(report);
    else
        out << report_to_json(report).dump(2) << "\n";
}

}  // namespace loopforge
