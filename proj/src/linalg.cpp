#include "loopforge/linalg.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <Eigen/SVD>
#include <algorithm>
#include <numeric>

namespace loopforge {

std::vector<SpectralGroup> spectral_groups(const MatC& m, double normal_tol,
                                           double group_tol) {
    const double res = normality_residual(m);
    if (res > normal_tol)
        throw NonNormalInput("matrix is not normal, commutator residual " +
                             std::to_string(res));

    Eigen::ComplexSchur<MatC> schur(m, /*computeU=*/true);
    if (schur.info() != Eigen::Success)
        throw Error("Schur decomposition failed");
    const MatC& q = schur.matrixU();
    const MatC& t = schur.matrixT();
    const int n = static_cast<int>(m.rows());

    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        const Complex la = t(a, a), lb = t(b, b);
        if (la.real() != lb.real()) return la.real() < lb.real();
        return la.imag() < lb.imag();
    });

    std::vector<SpectralGroup> groups;
    int i = 0;
    while (i < n) {
        int j = i;
        Complex anchor = t(order[i], order[i]);
        std::vector<int> members;
        while (j < n && std::abs(t(order[j], order[j]) - anchor) <= group_tol) {
            members.push_back(order[j]);
            anchor = t(order[j], order[j]);  // chain clusters
            ++j;
        }
        Complex mean = 0.0;
        MatC basis(n, static_cast<int>(members.size()));
        for (size_t c = 0; c < members.size(); ++c) {
            mean += t(members[c], members[c]);
            basis.col(static_cast<int>(c)) = q.col(members[c]);
        }
        mean /= static_cast<double>(members.size());
        groups.push_back({mean, std::move(basis)});
        i = j;
    }
    return groups;
}

MatC spectral_apply(const MatC& m, double normal_tol, double group_tol,
                    const std::function<Complex(Complex)>& f) {
    const auto groups = spectral_groups(m, normal_tol, group_tol);
    MatC out = MatC::Zero(m.rows(), m.cols());
    for (const auto& g : groups) out += f(g.value) * (g.basis * g.basis.adjoint());
    return out;
}

MatC polar_unitary(const MatC& m) {
    Eigen::JacobiSVD<MatC> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
    return svd.matrixU() * svd.matrixV().adjoint();
}

MatR polar_orthogonal(const MatR& m) {
    Eigen::JacobiSVD<MatR> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
    return svd.matrixU() * svd.matrixV().transpose();
}

namespace {

MatC ginibre(int n, std::mt19937_64& rng) {
    std::normal_distribution<double> g(0.0, 1.0);
    MatC z(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) z(i, j) = Complex(g(rng), g(rng));
    return z;
}

}  // namespace

MatC random_unitary(int n, std::mt19937_64& rng) {
    Eigen::HouseholderQR<MatC> qr(ginibre(n, rng));
    MatC q = qr.householderQ();
    MatC r = qr.matrixQR().triangularView<Eigen::Upper>();
    // Fix the phase ambiguity so the distribution is Haar.
    for (int j = 0; j < n; ++j) {
        Complex d = r(j, j);
        q.col(j) *= (std::abs(d) > 0.0) ? d / std::abs(d) : Complex(1.0, 0.0);
    }
    return q;
}

MatC random_special_unitary(int n, std::mt19937_64& rng) {
    MatC u = random_unitary(n, rng);
    const Complex det = u.determinant();
    const double theta = std::arg(det);
    return u * std::polar(1.0, -theta / static_cast<double>(n));
}

MatR random_special_orthogonal(int n, std::mt19937_64& rng) {
    std::normal_distribution<double> g(0.0, 1.0);
    MatR z(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) z(i, j) = g(rng);
    Eigen::HouseholderQR<MatR> qr(z);
    MatR q = qr.householderQ();
    MatR r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int j = 0; j < n; ++j)
        if (r(j, j) < 0.0) q.col(j) = -q.col(j);
    if (q.determinant() < 0.0) q.col(0) = -q.col(0);
    return q;
}

MatC random_skew_hermitian(int n, std::mt19937_64& rng, double scale) {
    MatC z = ginibre(n, rng);
    MatC s = 0.5 * (z - z.adjoint());
    return scale * s;
}

MatR random_skew_symmetric(int n, std::mt19937_64& rng, double scale) {
    std::normal_distribution<double> g(0.0, 1.0);
    MatR z(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) z(i, j) = g(rng);
    return scale * 0.5 * (z - z.transpose());
}

MatR standard_j0(int dim) {
    if (dim % 2 != 0) throw OddDimension("standard_j0 needs even dimension");
    MatR j = MatR::Zero(dim, dim);
    for (int k = 0; k < dim / 2; ++k) {
        j(2 * k, 2 * k + 1) = 1.0;
        j(2 * k + 1, 2 * k) = -1.0;
    }
    return j;
}

std::uint64_t fnv1a(const std::string& text, std::uint64_t seed) {
    std::uint64_t h = seed;
    for (unsigned char c : text) {
        h ^= static_cast<std::uint64_t>(c);
        h *= 1099511628211ull;
    }
    return h;
}

}  // namespace loopforge
