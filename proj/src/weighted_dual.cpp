#include "loopforge/weighted_dual.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

namespace loopforge {

namespace {

void check_window(int got, int want, const char* what) {
    if (got != want)
        throw WindowMismatch(std::string(what) + ": window " +
                             std::to_string(got) + " does not match " +
                             std::to_string(want));
}

void validate_values(const std::vector<double>& v) {
    if (v.empty() || v.size() % 2 == 0)
        throw InvalidWeights("need values for all modes in [-N, N]");
    const int n = (static_cast<int>(v.size()) - 1) / 2;
    for (double x : v)
        if (!(x > 0.0) || !std::isfinite(x))
            throw InvalidWeights("weights must be positive and finite");
    for (int p = 1; p <= n; ++p)
        if (v[n + p] != v[n - p])
            throw InvalidWeights("weights must satisfy a_p = a_{-p}");
}

}  // namespace

WeightSequence WeightSequence::geometric(double rho, int max_mode) {
    if (!(rho > 1.0)) throw InvalidWeights("geometric ratio must exceed 1");
    if (max_mode < 1) throw InvalidWeights("window must contain mode 1");
    WeightSequence a;
    a.family_ = WeightFamily::Geometric;
    a.rho_ = rho;
    a.n_ = max_mode;
    a.values_.resize(2 * max_mode + 1);
    for (int p = -max_mode; p <= max_mode; ++p)
        a.values_[p + max_mode] = std::pow(rho, -std::abs(p));
    return a;
}

WeightSequence WeightSequence::cosh_squared(int max_mode) {
    if (max_mode < 1) throw InvalidWeights("window must contain mode 1");
    WeightSequence a;
    a.family_ = WeightFamily::CoshSquared;
    a.n_ = max_mode;
    a.values_.resize(2 * max_mode + 1);
    for (int p = -max_mode; p <= max_mode; ++p) {
        const double c = std::cosh(kTwoPi * p);
        a.values_[p + max_mode] = 1.0 / (c * c);
    }
    return a;
}

WeightSequence WeightSequence::custom(std::vector<double> values,
                                      int decay_degree) {
    validate_values(values);
    if (decay_degree < 0) throw InvalidWeights("decay degree must be >= 0");
    WeightSequence a;
    a.family_ = WeightFamily::Custom;
    a.n_ = (static_cast<int>(values.size()) - 1) / 2;
    a.values_ = std::move(values);
    a.decay_degree_ = decay_degree;
    return a;
}

double WeightSequence::ratio() const {
    if (family_ != WeightFamily::Geometric)
        throw Error("only geometric families carry a ratio");
    return rho_;
}

double WeightSequence::at(int p) const {
    if (std::abs(p) > n_)
        throw ModeOutsideWindow("weight index " + std::to_string(p) +
                                " outside [-N, N]");
    return values_[p + n_];
}

double WeightSequence::decay_bound() const {
    double bound = 0.0;
    for (int p = -n_; p <= n_; ++p)
        bound = std::max(bound,
                         at(p) * std::pow(1.0 + std::abs(p), decay_degree_));
    return bound;
}

DualVector::DualVector(int max_mode_) : max_mode(max_mode_) {
    if (max_mode < 0) throw Error("window must be nonnegative");
    b = VecC::Zero(2 * max_mode + 1);
}

DualVector DualVector::basis(int p, int max_mode) {
    DualVector v(max_mode);
    v.set(p, 1.0);
    return v;
}

Complex DualVector::at(int p) const {
    if (std::abs(p) > max_mode)
        throw ModeOutsideWindow("dual index outside the window");
    return b(p + max_mode);
}

void DualVector::set(int p, Complex value) {
    if (std::abs(p) > max_mode)
        throw ModeOutsideWindow("dual index outside the window");
    b(p + max_mode) = value;
}

int DualVector::growth_certificate(double bound) const {
    // No power of (1 + 0) can absorb the constant mode.
    if (std::abs(at(0)) > bound)
        throw Error("no polynomial certificate at this bound");
    for (int m = 0;; ++m) {
        bool ok = true;
        for (int p = -max_mode; p <= max_mode && ok; ++p)
            ok = std::abs(at(p)) <= bound * std::pow(1.0 + std::abs(p), m);
        if (ok) return m;
    }
}

Complex inner_product(const DualVector& b, const DualVector& c,
                      const WeightSequence& a) {
    check_window(b.max_mode, a.max_mode(), "inner_product lhs");
    check_window(c.max_mode, a.max_mode(), "inner_product rhs");
    Complex sum = 0.0;
    for (int p = -a.max_mode(); p <= a.max_mode(); ++p)
        sum += b.at(p) * std::conj(c.at(p)) * a.at(p);
    return sum;
}

double dual_norm(const DualVector& b, const WeightSequence& a) {
    return std::sqrt(std::abs(inner_product(b, b, a).real()));
}

EquivalenceReport equivalence_check(const WeightSequence& a,
                                    const WeightSequence& b) {
    check_window(b.max_mode(), a.max_mode(), "equivalence_check");
    EquivalenceReport rep;
    for (int p = -a.max_mode(); p <= a.max_mode(); ++p) {
        rep.sup_ratio = std::max(rep.sup_ratio, a.at(p) / b.at(p));
        rep.sup_ratio_reverse =
            std::max(rep.sup_ratio_reverse, b.at(p) / a.at(p));
    }
    if (a.family() == WeightFamily::Geometric &&
        b.family() == WeightFamily::Geometric) {
        rep.extrapolated = true;
        rep.equivalent = a.ratio() == b.ratio();
    } else {
        // The window itself can only certify window boundedness.
        rep.extrapolated = false;
        rep.equivalent = true;
    }
    return rep;
}

double z_operator_norm(const WeightSequence& a, int q) {
    const int n = a.max_mode();
    if (std::abs(q) > 2 * n)
        throw ModeOutsideWindow("shift exceeds the 2N reach of the window");
    if (q == 0) return 1.0;
    if (a.family() == WeightFamily::Geometric)
        return std::sqrt(std::pow(a.ratio(), std::abs(q)));
    double sup = 0.0;
    for (int p = -n; p <= n; ++p) {
        if (std::abs(p + q) > n) continue;
        sup = std::max(sup, a.at(p) / a.at(p + q));
    }
    return std::sqrt(sup);
}

WeightSequence cone_combine(const WeightSequence& a, const WeightSequence& b,
                            double s, double t) {
    check_window(b.max_mode(), a.max_mode(), "cone_combine");
    if (s < 0.0 || t < 0.0 || (s == 0.0 && t == 0.0))
        throw InvalidWeights("cone coefficients must be >= 0 and not both zero");
    std::vector<double> combined(2 * a.max_mode() + 1);
    for (int p = -a.max_mode(); p <= a.max_mode(); ++p)
        combined[p + a.max_mode()] = s * a.at(p) + t * b.at(p);
    return WeightSequence::custom(std::move(combined),
                                  std::max(a.decay_degree(), b.decay_degree()));
}

FourierLoop diamond(const DualVector& c, const WeightSequence& a) {
    check_window(c.max_mode, a.max_mode(), "diamond");
    TruncationConfig cfg;
    cfg.max_mode = a.max_mode();
    cfg.dim = 1;
    FourierLoop f(cfg, 1);
    for (int k = -a.max_mode(); k <= a.max_mode(); ++k) {
        const Complex v = std::conj(c.at(-k)) * a.at(k);
        if (v != Complex(0.0)) f.set_coeff(k, MatC::Constant(1, 1, v));
    }
    return f;
}

Complex dual_pairing(const DualVector& b, const FourierLoop& f) {
    if (f.rows() != 1 || f.cols() != 1)
        throw DimensionMismatch("pairing expects a scalar loop");
    check_window(b.max_mode, f.max_mode(), "dual_pairing");
    Complex sum = 0.0;
    for (int p = -b.max_mode; p <= b.max_mode; ++p)
        sum += b.at(p) * f.coeff(-p)(0, 0);
    return sum;
}

DualVector polarisation_J(const DualVector& x) {
    DualVector out(x.max_mode);
    for (int p = -x.max_mode; p <= x.max_mode; ++p)
        out.set(p, (p >= 0 ? Complex(0.0, -1.0) : Complex(0.0, 1.0)) * x.at(p));
    return out;
}

CommutatorReport polarisation_commutator(const FourierLoop& op,
                                         const WeightSequence& a) {
    if (op.cols() != op.rows())
        throw DimensionMismatch("operator loop must be matrix-valued");
    const int n = a.max_mode();
    if (op.max_mode() != n)
        throw WindowMismatch("operator window must match the weight window");
    const int d = op.rows();
    const int size = (2 * n + 1) * d;
    const auto jphase = [](int p) {
        return p >= 0 ? Complex(0.0, -1.0) : Complex(0.0, 1.0);
    };

    // [A, J] entry at (p, q) is A_{p-q} (J(q) - J(p)); rescaling by
    // sqrt(a_p / a_q) expresses it in the weighted orthonormal basis.
    CommutatorReport rep;
    rep.matrix = MatC::Zero(size, size);
    for (int p = -n; p <= n; ++p) {
        for (int q = -n; q <= n; ++q) {
            if (std::abs(p - q) > n || !op.has_mode(p - q)) continue;
            const Complex factor = jphase(q) - jphase(p);
            if (factor == Complex(0.0)) continue;
            const double w = std::sqrt(a.at(p) / a.at(q));
            rep.matrix.block((p + n) * d, (q + n) * d, d, d) =
                w * factor * op.coeff(p - q);
        }
    }
    rep.hs_norm = rep.matrix.norm();
    Eigen::JacobiSVD<MatC> svd(rep.matrix);
    const double top = svd.singularValues().size() > 0
                           ? svd.singularValues()(0)
                           : 0.0;
    for (int i = 0; i < svd.singularValues().size(); ++i)
        if (svd.singularValues()(i) > 1e-10 * std::max(1.0, top)) ++rep.rank;
    return rep;
}

double commutator_hs_norm(const FourierLoop& op, const WeightSequence& a) {
    return polarisation_commutator(op, a).hs_norm;
}

MatR zeta_homotopy(const WeightSequence& a, double t) {
    const int n = a.max_mode();
    MatR z = MatR::Zero(2 * n, 2 * n);
    // Column i is domain mode p = i - N + 1; row i is target mode p - 1.
    for (int i = 0; i < 2 * n; ++i) {
        const int p = i - n + 1;
        z(i, i) = std::pow(a.at(p - 1) / a.at(p), 0.5 * t);
    }
    return z;
}

GrowthWitness unbounded_growth_witness(const WeightSequence& a, int qmax) {
    if (qmax < 0 || qmax > 2 * a.max_mode())
        throw ModeOutsideWindow("growth table exceeds the window reach");
    GrowthWitness w;
    w.norms.reserve(qmax + 1);
    for (int q = 0; q <= qmax; ++q) w.norms.push_back(z_operator_norm(a, q));
    w.strictly_increasing = true;
    for (int q = 1; q < qmax; ++q)
        if (!(w.norms[q + 1] > w.norms[q])) w.strictly_increasing = false;
    return w;
}

nlohmann::json weights_to_json(const WeightSequence& a) {
    nlohmann::json j;
    j["N"] = a.max_mode();
    if (a.family() == WeightFamily::Geometric) {
        j["family"] = "geometric";
        j["rho"] = a.ratio();
    } else {
        j["family"] = "custom";
    }
    j["values"] = a.values();
    return j;
}

WeightSequence weights_from_json(const nlohmann::json& j) {
    try {
        const std::string family = j.at("family").get<std::string>();
        const int n = j.at("N").get<int>();
        if (family == "geometric")
            return WeightSequence::geometric(j.at("rho").get<double>(), n);
        if (family == "custom") {
            auto values = j.at("values").get<std::vector<double>>();
            if (static_cast<int>(values.size()) != 2 * n + 1)
                throw ParseError("value count does not match the window");
            return WeightSequence::custom(std::move(values));
        }
        throw ParseError("unknown weight family: " + family);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("malformed weight file: ") + e.what());
    }
}

void save_weights(const WeightSequence& a, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot open " + path + " for writing");
    out << weights_to_json(a).dump(2) << '\n';
}

WeightSequence load_weights(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("malformed weight file: ") + e.what());
    }
    return weights_from_json(j);
}

}  // namespace loopforge
