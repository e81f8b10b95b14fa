#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>
#include <string>

#include "loopforge/report_io.hpp"
#include "loopforge/suites.hpp"

namespace {

std::string suite_list() {
    std::string joined;
    for (const std::string& name : loopforge::suite_names()) {
        if (!joined.empty()) joined += ", ";
        joined += name;
    }
    return joined;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"loopforge: checks for the polynomial loop space toolkit"};
    app.require_subcommand(1);

    loopforge::SuiteConfig cfg;
    std::string suite;
    std::string format = "json";
    std::string out_path;

    CLI::App* verify =
        app.add_subcommand("verify", "run a verification suite");
    verify->add_option("suite", suite, "one of: " + suite_list())->required();
    verify->add_option("--modes", cfg.modes, "Fourier window N")
        ->capture_default_str();
    verify->add_option("--dim", cfg.dim, "fibre dimension n")
        ->capture_default_str();
    verify
        ->add_option("--fock-window", cfg.fock_window,
                     "one-particle level window K")
        ->capture_default_str();
    verify
        ->add_option("--particle-cap", cfg.particle_cap,
                     "exterior-algebra particle cap P")
        ->capture_default_str();
    verify->add_option("--tol", cfg.tol, "base tolerance")
        ->capture_default_str();
    verify->add_option("--seed", cfg.seed, "root seed for per-check RNGs")
        ->capture_default_str();
    verify
        ->add_option("--steps", cfg.steps,
                     "RK4 steps per unit of loop parameter")
        ->capture_default_str();
    verify->add_option("--report", format, "report format")
        ->check(CLI::IsMember({"json", "csv"}))
        ->capture_default_str();
    verify->add_option("--out", out_path,
                       "write the report to this path instead of stdout");
    verify->add_flag("--timings", cfg.timings,
                     "record wall-clock runtimes (reports stop being "
                     "byte-identical across runs)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    // The environment wins over the flag so wrapper scripts can pin runs.
    if (const char* env_seed = std::getenv("LOOPFORGE_SEED")) {
        try {
            cfg.seed = std::stoull(env_seed);
        } catch (const std::exception&) {
            std::cerr << "LOOPFORGE_SEED must be an integer, got: " << env_seed
                      << "\n";
            return 2;
        }
    }

    try {
        const loopforge::SuiteReport report = loopforge::run_suite(suite, cfg);
        const bool as_csv = format == "csv";
        if (out_path.empty()) {
            if (as_csv)
                std::cout << loopforge::report_to_csv(report);
            else
                std::cout << loopforge::report_to_json(report).dump(2) << "\n";
        } else {
            loopforge::save_report(report, out_path, as_csv);
        }
        return report.all_passed() ? 0 : 1;
    } catch (const loopforge::UnknownSuite& e) {
        std::cerr << e.what() << "; suites are: " << suite_list() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << e.what() << "\n";
        return 2;
    }
}
