#include "loopforge/dirac_flat.hpp"

#include <algorithm>
#include <cmath>

namespace loopforge {

namespace {

constexpr int kMaxDegree = 3;

void check_direction(const ModeSpace& modes, int direction) {
    if (direction < 0 || direction_mode(direction) >= modes.size())
        throw ModeOutsideWindow("tangent direction outside the window");
}

}  // namespace

int direction_id(const ModeSpace& modes, int fibre, int level,
                 bool imaginary) {
    return 2 * modes.index(fibre, level) + (imaginary ? 1 : 0);
}

int direction_mode(int direction) { return direction / 2; }

bool direction_imaginary(int direction) { return direction % 2 == 1; }

VecC direction_vector(const ModeSpace& modes, int direction) {
    check_direction(modes, direction);
    VecC v = VecC::Zero(modes.size());
    v(direction_mode(direction)) =
        direction_imaginary(direction) ? Complex(0.0, 1.0) : Complex(1.0);
    return v;
}

PolynomialSection PolynomialSection::constant(FockVector coeff) {
    PolynomialSection s;
    s.terms[{}] = std::move(coeff);
    return s;
}

PolynomialSection PolynomialSection::monomial(std::vector<int> directions,
                                              FockVector coeff) {
    if (static_cast<int>(directions.size()) > kMaxDegree)
        throw Error("polynomial sections stop at degree 3");
    for (int d : directions)
        if (d < 0) throw ModeOutsideWindow("bad tangent direction");
    std::sort(directions.begin(), directions.end());
    PolynomialSection s;
    s.terms[std::move(directions)] = std::move(coeff);
    return s;
}

PolynomialSection& PolynomialSection::accumulate(const PolynomialSection& other,
                                                 Complex scale) {
    for (const auto& [mono, coeff] : other.terms)
        terms[mono].accumulate(coeff, scale);
    for (auto it = terms.begin(); it != terms.end();) {
        it->second.drop_zeros();
        it = it->second.amps.empty() ? terms.erase(it) : std::next(it);
    }
    return *this;
}

int PolynomialSection::degree() const {
    int deg = 0;
    for (const auto& [mono, coeff] : terms)
        deg = std::max(deg, static_cast<int>(mono.size()));
    return deg;
}

FockVector evaluate(const PolynomialSection& s, const ModeSpace& modes,
                    const VecC& x) {
    if (x.size() != modes.size())
        throw DimensionMismatch("point does not match the mode space");
    FockVector out;
    for (const auto& [mono, coeff] : s.terms) {
        double value = 1.0;
        for (int d : mono) {
            check_direction(modes, d);
            const Complex c = x(direction_mode(d));
            value *= direction_imaginary(d) ? c.imag() : c.real();
        }
        out.accumulate(coeff, value);
    }
    return out.drop_zeros();
}

PolynomialSection partial_derivative(const PolynomialSection& s,
                                     int direction) {
    PolynomialSection out;
    for (const auto& [mono, coeff] : s.terms) {
        const auto range = std::equal_range(mono.begin(), mono.end(), direction);
        const int power = static_cast<int>(range.second - range.first);
        if (power == 0) continue;
        std::vector<int> reduced(mono);
        reduced.erase(reduced.begin() + (range.first - mono.begin()));
        out.accumulate(PolynomialSection::monomial(std::move(reduced), coeff),
                       static_cast<double>(power));
    }
    return out;
}

std::map<int, PolynomialSection> coordinate_derivatives(
    const PolynomialSection& s) {
    std::map<int, PolynomialSection> out;
    for (const auto& [mono, coeff] : s.terms)
        for (int d : mono)
            if (!out.count(d)) {
                PolynomialSection ds = partial_derivative(s, d);
                if (!ds.terms.empty()) out.emplace(d, std::move(ds));
            }
    return out;
}

ModeSpace DiracConfig::make_modes() const {
    return ModeSpace(fibre_dim, mode_window);
}

FockSpace DiracConfig::make_space() const {
    return FockSpace{make_modes(), particle_cap};
}

std::vector<int> DiracConfig::resolve_directions(const ModeSpace& modes) const {
    if (directions.empty()) {
        std::vector<int> all(2 * modes.size());
        for (std::size_t i = 0; i < all.size(); ++i)
            all[i] = static_cast<int>(i);
        return all;
    }
    for (int d : directions) check_direction(modes, d);
    return directions;
}

namespace {

// The level functional whose riesz vector is the direction's one-particle
// vector e or i e.
DualVector direction_functional(const ModeSpace& modes, int direction) {
    const int mode = direction_mode(direction);
    const double w = modes.weight(mode);
    DualVector f(modes.mode_window());
    f.set(modes.level_of(mode), direction_imaginary(direction)
                                    ? Complex(0.0, -w)
                                    : Complex(w, 0.0));
    return f;
}

}  // namespace

FockVector dirac(const PolynomialSection& s, const DiracConfig& cfg,
                 const VecC& x) {
    const FockSpace space = cfg.make_space();
    const auto derivs = coordinate_derivatives(s);
    std::vector<ExtensionTerm> terms;
    for (int d : cfg.resolve_directions(space.modes)) {
        const auto it = derivs.find(d);
        if (it == derivs.end()) continue;
        FockVector state = evaluate(it->second, space.modes, x);
        if (state.amps.empty()) continue;
        const int mode = direction_mode(d);
        terms.push_back({space.modes.fibre_of(mode),
                         direction_functional(space.modes, d),
                         std::move(state)});
    }
    return finite_rank_clifford_extension(space, terms);
}

FockVector dirac_naive(const PolynomialSection& s, const DiracConfig& cfg,
                       const VecC& x) {
    const FockSpace space = cfg.make_space();
    const auto derivs = coordinate_derivatives(s);
    FockVector out;
    for (int d : cfg.resolve_directions(space.modes)) {
        const auto it = derivs.find(d);
        if (it == derivs.end()) continue;
        const FockVector state = evaluate(it->second, space.modes, x);
        if (state.amps.empty()) continue;
        out.accumulate(
            clifford(space, direction_vector(space.modes, d), state));
    }
    return out.drop_zeros();
}

PolynomialSection dirac_section(const PolynomialSection& s,
                                const DiracConfig& cfg) {
    const FockSpace space = cfg.make_space();
    PolynomialSection out;
    for (int d : cfg.resolve_directions(space.modes)) {
        const PolynomialSection ds = partial_derivative(s, d);
        if (ds.terms.empty()) continue;
        const VecC v = direction_vector(space.modes, d);
        PolynomialSection lifted;
        for (const auto& [mono, coeff] : ds.terms)
            lifted.terms[mono] = clifford(space, v, coeff);
        out.accumulate(lifted);
    }
    return out;
}

VecC rotate_point(const ModeSpace& modes, Complex lambda, const VecC& x) {
    if (x.size() != modes.size())
        throw DimensionMismatch("point does not match the mode space");
    VecC y(x.size());
    for (int m = 0; m < x.size(); ++m)
        y(m) = std::pow(lambda, modes.level_of(m)) * x(m);
    return y;
}

PolynomialSection rotate_section(const ModeSpace& modes, Complex lambda,
                                 const PolynomialSection& s) {
    const FockRotation rot = implement_rotation(lambda);
    PolynomialSection out;
    for (const auto& [mono, coeff] : s.terms) {
        const FockVector turned = rot.apply(modes, coeff);
        // Substitute each variable by its value on the unrotated point:
        // mode (j, k) coordinates pick up lambda^{-k}.
        std::vector<std::pair<std::vector<int>, double>> expansion = {{{}, 1.0}};
        for (int d : mono) {
            check_direction(modes, d);
            const int mode = direction_mode(d);
            const Complex lk =
                std::pow(lambda, -modes.level_of(mode));
            const int re_var = 2 * mode;
            const int im_var = 2 * mode + 1;
            const double re_factor =
                direction_imaginary(d) ? lk.imag() : lk.real();
            const double im_factor =
                direction_imaginary(d) ? lk.real() : -lk.imag();
            std::vector<std::pair<std::vector<int>, double>> next;
            for (const auto& [vars, weight] : expansion) {
                if (re_factor != 0.0) {
                    auto grown = vars;
                    grown.push_back(re_var);
                    next.emplace_back(std::move(grown), weight * re_factor);
                }
                if (im_factor != 0.0) {
                    auto grown = vars;
                    grown.push_back(im_var);
                    next.emplace_back(std::move(grown), weight * im_factor);
                }
            }
            expansion = std::move(next);
        }
        for (auto& [vars, weight] : expansion) {
            std::sort(vars.begin(), vars.end());
            out.terms[vars].accumulate(turned, weight);
        }
    }
    PolynomialSection cleaned;
    cleaned.accumulate(out);
    return cleaned;
}

double equivariance_check(const PolynomialSection& s, const DiracConfig& cfg,
                          Complex lambda, const VecC& x) {
    const ModeSpace modes = cfg.make_modes();
    const FockRotation rot = implement_rotation(lambda);
    const FockVector left = rot.apply(modes, dirac(s, cfg, x));
    const FockVector right = dirac(rotate_section(modes, lambda, s), cfg,
                                   rotate_point(modes, lambda, x));
    return fock_norm(modes, add(left, scale(right, -1.0)));
}

}  // namespace loopforge
