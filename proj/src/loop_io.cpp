#include "loopforge/loop_io.hpp"

#include <fstream>

namespace loopforge {

nlohmann::json loop_to_json(const FourierLoop& f) {
    nlohmann::json j;
    j["dim"] = f.rows();
    j["max_mode"] = f.max_mode();
    j["real"] = f.real_valued();
    if (f.cols() != 1) j["cols"] = f.cols();
    nlohmann::json modes = nlohmann::json::object();
    for (const auto& [k, c] : f.coefficients()) {
        nlohmann::json entries = nlohmann::json::array();
        for (int r = 0; r < c.rows(); ++r)
            for (int col = 0; col < c.cols(); ++col)
                entries.push_back({c(r, col).real(), c(r, col).imag()});
        modes[std::to_string(k)] = std::move(entries);
    }
    j["modes"] = std::move(modes);
    return j;
}

FourierLoop loop_from_json(const nlohmann::json& j, double tol) {
    try {
        TruncationConfig cfg;
        cfg.dim = j.at("dim").get<int>();
        cfg.max_mode = j.at("max_mode").get<int>();
        cfg.tol = tol;
        const int cols = j.value("cols", 1);
        FourierLoop f(cfg, cols, j.at("real").get<bool>());
        for (const auto& [key, entries] : j.at("modes").items()) {
            const int k = std::stoi(key);
            if (entries.size() != static_cast<size_t>(cfg.dim) * cols)
                throw ParseError("mode " + key + " has wrong entry count");
            MatC c(cfg.dim, cols);
            size_t idx = 0;
            for (int r = 0; r < cfg.dim; ++r)
                for (int col = 0; col < cols; ++col, ++idx)
                    c(r, col) = Complex(entries[idx][0].get<double>(),
                                        entries[idx][1].get<double>());
            f.set_coeff(k, std::move(c));
        }
        if (f.real_valued() && f.reality_residual() > tol)
            throw ParseError("loop flagged real violates coefficient symmetry");
        return f;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("bad loop file: ") + e.what());
    }
}

void save_loop(const FourierLoop& f, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot open " + path + " for writing");
    out << loop_to_json(f).dump(2) << "\n";
}

FourierLoop load_loop(const std::string& path, double tol) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open " + path);
    nlohmann::json j;
    in >> j;
    return loop_from_json(j, tol);
}

}  // namespace loopforge
