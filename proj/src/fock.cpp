#include "loopforge/fock.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>

namespace loopforge {

namespace {

double tuple_weight(const ModeSpace& modes, const std::vector<int>& tuple) {
    double w = 1.0;
    for (int id : tuple) w *= modes.weight(id);
    return w;
}

MatR j0_block(int dim) {
    MatR j = MatR::Zero(dim, dim);
    for (int k = 0; k < dim / 2; ++k) {
        j(2 * k, 2 * k + 1) = 1.0;
        j(2 * k + 1, 2 * k) = -1.0;
    }
    return j;
}

}  // namespace

ModeSpace::ModeSpace(int fibre_dim, int mode_window)
    : fibre_dim_(fibre_dim), window_(mode_window) {
    if (fibre_dim < 1) throw DimensionMismatch("fibre dimension must be >= 1");
    if (mode_window < 0) throw ModeOutsideWindow("mode window must be >= 0");
    level_weights_.assign(2 * window_ + 1, 1.0);
}

ModeSpace::ModeSpace(int fibre_dim, const WeightSequence& a)
    : ModeSpace(fibre_dim, a.max_mode()) {
    for (int k = -window_; k <= window_; ++k)
        level_weights_[k + window_] = a.at(k);
}

int ModeSpace::index(int fibre, int level) const {
    if (fibre < 1 || fibre > fibre_dim_)
        throw DimensionMismatch("fibre index outside 1..n");
    if (std::abs(level) > window_)
        throw ModeOutsideWindow("level outside the mode window");
    return (level + window_) * fibre_dim_ + (fibre - 1);
}

int ModeSpace::fibre_of(int id) const {
    if (id < 0 || id >= size()) throw ModeOutsideWindow("bad mode id");
    return id % fibre_dim_ + 1;
}

int ModeSpace::level_of(int id) const {
    if (id < 0 || id >= size()) throw ModeOutsideWindow("bad mode id");
    return id / fibre_dim_ - window_;
}

double ModeSpace::weight(int id) const {
    return level_weights_[level_of(id) + window_];
}

Complex ModeSpace::inner(const VecC& u, const VecC& v) const {
    if (u.size() != size() || v.size() != size())
        throw DimensionMismatch("one-particle vector has the wrong size");
    Complex sum = 0.0;
    for (int m = 0; m < size(); ++m)
        sum += u(m) * std::conj(v(m)) * weight(m);
    return sum;
}

double ModeSpace::norm(const VecC& u) const {
    return std::sqrt(std::abs(inner(u, u).real()));
}

VecC ModeSpace::riesz(int fibre, const DualVector& f) const {
    if (f.max_mode != window_)
        throw WindowMismatch("functional window does not match the modes");
    VecC v = VecC::Zero(size());
    for (int k = -window_; k <= window_; ++k)
        v(index(fibre, k)) = std::conj(f.at(k)) / level_weights_[k + window_];
    return v;
}

FockVector FockVector::vacuum() {
    FockVector psi;
    psi.amps[{}] = 1.0;
    return psi;
}

FockVector FockVector::basis(std::vector<int> tuple) {
    for (std::size_t i = 0; i + 1 < tuple.size(); ++i)
        if (tuple[i] >= tuple[i + 1])
            throw Error("basis tuples must be strictly increasing");
    if (!tuple.empty() && tuple.front() < 0)
        throw ModeOutsideWindow("bad mode id");
    FockVector psi;
    psi.amps[std::move(tuple)] = 1.0;
    return psi;
}

FockVector& FockVector::accumulate(const FockVector& other, Complex s) {
    for (const auto& [tuple, amp] : other.amps) amps[tuple] += s * amp;
    overflow_mass += std::norm(s) * other.overflow_mass;
    return *this;
}

FockVector& FockVector::drop_zeros() {
    for (auto it = amps.begin(); it != amps.end();)
        it = (it->second == Complex(0.0)) ? amps.erase(it) : std::next(it);
    return *this;
}

FockVector add(const FockVector& a, const FockVector& b) {
    FockVector out = a;
    out.accumulate(b);
    return out;
}

FockVector scale(const FockVector& a, Complex s) {
    FockVector out;
    for (const auto& [tuple, amp] : a.amps) out.amps[tuple] = s * amp;
    out.overflow_mass = std::norm(s) * a.overflow_mass;
    return out;
}

Complex fock_inner(const ModeSpace& modes, const FockVector& a,
                   const FockVector& b) {
    Complex sum = 0.0;
    for (const auto& [tuple, amp] : a.amps) {
        auto it = b.amps.find(tuple);
        if (it == b.amps.end()) continue;
        sum += amp * std::conj(it->second) * tuple_weight(modes, tuple);
    }
    return sum;
}

double fock_norm(const ModeSpace& modes, const FockVector& a) {
    return std::sqrt(std::abs(fock_inner(modes, a, a).real()));
}

FockVector create(const FockSpace& space, const VecC& v,
                  const FockVector& psi) {
    if (v.size() != space.modes.size())
        throw DimensionMismatch("one-particle vector has the wrong size");
    FockVector out;
    out.overflow_mass = psi.overflow_mass;
    for (const auto& [tuple, amp] : psi.amps) {
        for (int m = 0; m < v.size(); ++m) {
            if (v(m) == Complex(0.0)) continue;
            const auto pos =
                std::lower_bound(tuple.begin(), tuple.end(), m);
            if (pos != tuple.end() && *pos == m) continue;  // v wedge v = 0
            std::vector<int> wedge(tuple);
            wedge.insert(wedge.begin() + (pos - tuple.begin()), m);
            const double sign = (pos - tuple.begin()) % 2 == 0 ? 1.0 : -1.0;
            const Complex term = sign * v(m) * amp;
            if (static_cast<int>(tuple.size()) >= space.particle_cap) {
                out.overflow_mass +=
                    std::norm(term) * tuple_weight(space.modes, wedge);
                continue;
            }
            out.amps[std::move(wedge)] += term;
        }
    }
    return out.drop_zeros();
}

FockVector annihilate(const FockSpace& space, const VecC& v,
                      const FockVector& psi) {
    if (v.size() != space.modes.size())
        throw DimensionMismatch("one-particle vector has the wrong size");
    FockVector out;
    out.overflow_mass = psi.overflow_mass;
    for (const auto& [tuple, amp] : psi.amps) {
        for (std::size_t j = 0; j < tuple.size(); ++j) {
            const int m = tuple[j];
            if (v(m) == Complex(0.0)) continue;
            const double sign = j % 2 == 0 ? 1.0 : -1.0;
            std::vector<int> rest(tuple);
            rest.erase(rest.begin() + j);
            out.amps[std::move(rest)] +=
                sign * space.modes.weight(m) * std::conj(v(m)) * amp;
        }
    }
    return out.drop_zeros();
}

FockVector clifford(const FockSpace& space, const VecC& v,
                    const FockVector& psi) {
    FockVector out = create(space, v, psi);
    // Both halves carry psi's overflow; count it once.
    out.overflow_mass -= psi.overflow_mass;
    return out.accumulate(annihilate(space, v, psi)).drop_zeros();
}

CarResiduals car_check(const FockSpace& space, const VecC& u, const VecC& v) {
    const Complex uv = space.modes.inner(u, v);
    CarResiduals res;

    const auto probe = [&](const std::vector<int>& tuple) {
        const FockVector psi = FockVector::basis(tuple);
        const double scale = std::sqrt(tuple_weight(space.modes, tuple));

        const FockVector cu = create(space, u, psi);
        const FockVector cv = create(space, v, psi);
        const FockVector au = annihilate(space, u, psi);
        const FockVector av = annihilate(space, v, psi);

        FockVector mixed = create(space, u, av);
        mixed.accumulate(annihilate(space, v, cu));
        mixed.accumulate(psi, -uv);
        res.mixed = std::max(res.mixed,
                             fock_norm(space.modes, mixed) / scale);

        FockVector cc = create(space, u, cv);
        cc.accumulate(create(space, v, cu));
        res.double_create = std::max(res.double_create,
                                     fock_norm(space.modes, cc) / scale);

        FockVector aa = annihilate(space, u, av);
        aa.accumulate(annihilate(space, v, au));
        res.double_annihilate = std::max(
            res.double_annihilate, fock_norm(space.modes, aa) / scale);
    };

    // Every strictly increasing tuple short enough that no anticommutator
    // term leaves the truncation.
    std::vector<int> tuple;
    const std::function<void(int)> walk = [&](int start) {
        probe(tuple);
        if (static_cast<int>(tuple.size()) >= space.particle_cap - 1) return;
        for (int m = start; m < space.modes.size(); ++m) {
            tuple.push_back(m);
            walk(m + 1);
            tuple.pop_back();
        }
    };
    walk(0);
    return res;
}

PolarisingOperator::PolarisingOperator(int fibre_dim, int mode_window,
                                       MatC constant_block)
    : fibre_dim_(fibre_dim), window_(mode_window),
      block_(std::move(constant_block)) {
    if (fibre_dim < 1) throw DimensionMismatch("fibre dimension must be >= 1");
    if (mode_window < 0) throw ModeOutsideWindow("mode window must be >= 0");
    if (block_.rows() != fibre_dim || block_.cols() != fibre_dim)
        throw DimensionMismatch("constant block must match the fibre");
}

Complex PolarisingOperator::phase(int level) const {
    if (level == 0) throw Error("the constant block is not a phase");
    if (std::abs(level) > window_)
        throw ModeOutsideWindow("level outside the mode window");
    return level > 0 ? Complex(0.0, -1.0) : Complex(0.0, 1.0);
}

VecC PolarisingOperator::apply(const VecC& x) const {
    if (x.size() != size())
        throw DimensionMismatch("vector does not match the truncation");
    VecC y(size());
    for (int k = -window_; k <= window_; ++k) {
        const int base = (k + window_) * fibre_dim_;
        if (k == 0)
            y.segment(base, fibre_dim_) = block_ * x.segment(base, fibre_dim_);
        else
            y.segment(base, fibre_dim_) = phase(k) * x.segment(base, fibre_dim_);
    }
    return y;
}

MatC PolarisingOperator::matrix() const {
    MatC m = MatC::Zero(size(), size());
    for (int k = -window_; k <= window_; ++k) {
        const int base = (k + window_) * fibre_dim_;
        if (k == 0)
            m.block(base, base, fibre_dim_, fibre_dim_) = block_;
        else
            m.block(base, base, fibre_dim_, fibre_dim_) =
                phase(k) * MatC::Identity(fibre_dim_, fibre_dim_);
    }
    return m;
}

double PolarisingOperator::square_residual() const {
    const MatC j = matrix();
    return (j * j + MatC::Identity(size(), size())).norm();
}

double PolarisingOperator::unitarity_defect() const {
    const MatC j = matrix();
    return (j.adjoint() * j - MatC::Identity(size(), size())).norm();
}

PolarisingOperator standard_polarisation(int fibre_dim, int mode_window) {
    return PolarisingOperator(
        fibre_dim, mode_window,
        Complex(0.0, -1.0) * MatC::Identity(fibre_dim, fibre_dim));
}

PolarisingOperator standard_unitary_structure(int fibre_dim, int mode_window) {
    return PolarisingOperator(fibre_dim, mode_window,
                              j0_block(fibre_dim).cast<Complex>());
}

PolarisationComparison polarisation_compare(const PolarisingOperator& j1,
                                            const PolarisingOperator& j2) {
    if (j1.fibre_dim() != j2.fibre_dim())
        throw DimensionMismatch("polarising operators on different fibres");
    if (j1.mode_window() != j2.mode_window())
        throw WindowMismatch("polarising operators on different windows");
    PolarisationComparison cmp;
    const MatC diff = j1.matrix() - j2.matrix();
    cmp.hs_norm = diff.norm();
    Eigen::JacobiSVD<MatC> svd(diff);
    const double top =
        svd.singularValues().size() > 0 ? svd.singularValues()(0) : 0.0;
    for (int i = 0; i < svd.singularValues().size(); ++i)
        if (svd.singularValues()(i) > 1e-10 * std::max(1.0, top)) ++cmp.rank;
    cmp.lhs_square_residual = j1.square_residual();
    cmp.rhs_square_residual = j2.square_residual();
    return cmp;
}

FockVector finite_rank_clifford_extension(
    const FockSpace& space, const std::vector<ExtensionTerm>& terms) {
    FockVector out;
    for (const auto& term : terms) {
        const VecC v = space.modes.riesz(term.fibre, term.functional);
        out.accumulate(clifford(space, v, term.state));
    }
    return out.drop_zeros();
}

FockVector FockRotation::apply(const ModeSpace& modes,
                               const FockVector& psi) const {
    FockVector out;
    out.overflow_mass = psi.overflow_mass;
    for (const auto& [tuple, amp] : psi.amps) {
        int total = 0;
        for (int id : tuple) total += modes.level_of(id);
        out.amps[tuple] = std::pow(lambda, total) * amp;
    }
    return out;
}

VecC FockRotation::rotate_vector(const ModeSpace& modes, const VecC& v) const {
    if (v.size() != modes.size())
        throw DimensionMismatch("one-particle vector has the wrong size");
    VecC out(v.size());
    for (int m = 0; m < v.size(); ++m)
        out(m) = std::pow(lambda, modes.level_of(m)) * v(m);
    return out;
}

FockRotation implement_rotation(Complex lambda) {
    if (std::abs(std::abs(lambda) - 1.0) > 1e-9)
        throw NotUnitModulus("rotation parameter must lie on the circle");
    return FockRotation{lambda};
}

nlohmann::json fock_to_json(const FockVector& psi) {
    nlohmann::json tuples = nlohmann::json::array();
    nlohmann::json amps = nlohmann::json::array();
    for (const auto& [tuple, amp] : psi.amps) {
        tuples.push_back(tuple);
        amps.push_back({amp.real(), amp.imag()});
    }
    return {{"tuples", tuples}, {"amps", amps}};
}

FockVector fock_from_json(const nlohmann::json& j) {
    try {
        const auto& tuples = j.at("tuples");
        const auto& amps = j.at("amps");
        if (tuples.size() != amps.size())
            throw ParseError("tuple and amplitude counts differ");
        FockVector psi;
        for (std::size_t i = 0; i < tuples.size(); ++i) {
            auto tuple = tuples[i].get<std::vector<int>>();
            const auto pair = amps[i].get<std::vector<double>>();
            if (pair.size() != 2)
                throw ParseError("amplitudes must be [re, im] pairs");
            if (!tuple.empty() && tuple.front() < 0)
                throw ParseError("mode ids must be nonnegative");
            for (std::size_t t = 0; t + 1 < tuple.size(); ++t)
                if (tuple[t] >= tuple[t + 1])
                    throw ParseError("tuples must be strictly increasing");
            psi.accumulate(FockVector::basis(std::move(tuple)),
                           Complex(pair[0], pair[1]));
        }
        return psi;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("malformed state file: ") + e.what());
    }
}

void save_fock(const FockVector& psi, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot open " + path + " for writing");
    out << fock_to_json(psi).dump(2) << '\n';
}

FockVector load_fock(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("malformed state file: ") + e.what());
    }
    return fock_from_json(j);
}

}  // namespace loopforge
