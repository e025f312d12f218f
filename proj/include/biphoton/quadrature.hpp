#ifndef BIPHOTON_QUADRATURE_HPP
#define BIPHOTON_QUADRATURE_HPP

#include <Eigen/Dense>
#include <cmath>
#include <map>
#include <mutex>
#include <vector>

#include "biphoton/constants.hpp"
#include "biphoton/errors.hpp"

// Gauss-Hermite rules for weight exp(-x^2): sum_i w_i g(x_i) ~ integral of
// exp(-x^2) g(x). Nodes are the eigenvalues of the symmetric tridiagonal
// Jacobi matrix of the Hermite recurrence, polished by Newton steps on the
// orthonormal three-term recurrence; weights come from the polished nodes.

namespace biphoton {

struct GaussHermite {
    int n = 0;
    std::vector<double> nodes;    // ascending, symmetric about 0
    std::vector<double> weights;  // sum = sqrt(pi)
};

namespace detail {

// Orthonormal Hermite values at x with overflow control. The raw values grow
// like exp(x^2/2), far past double range in the tails of large rules, so the
// pair is renormalized by 2^-512 whenever either component exceeds 2^512 and
// the shift count is carried separately. Newton only ever needs the ratio
// p_n / p_n', which the shift cancels out of; the weight needs log|p_{n-1}|,
// which the shift re-enters additively.
struct HermiteEval {
    double p_n;    // scaled orthonormal H~_n(x)
    double p_nm1;  // scaled orthonormal H~_{n-1}(x), same scale
    long shift;    // true value = scaled value * 2^(512*shift)
};

inline HermiteEval hermite_ortho(int n, double x) {
    constexpr double kBig = 0x1p512;
    constexpr double kSmall = 0x1p-512;
    double pm1 = 0.0;
    double p = 0.75112554446494248286;  // pi^(-1/4)
    long shift = 0;
    for (int k = 0; k < n; ++k) {
        const double next =
            x * std::sqrt(2.0 / (k + 1)) * p - std::sqrt(static_cast<double>(k) / (k + 1)) * pm1;
        pm1 = p;
        p = next;
        if (std::fabs(p) > kBig || std::fabs(pm1) > kBig) {
            p *= kSmall;
            pm1 *= kSmall;
            ++shift;
        }
    }
    return {p, pm1, shift};
}

}

inline GaussHermite make_gauss_hermite(int n) {
    if (n < 1) throw contract_error("gauss_hermite: need n >= 1");
    GaussHermite rule;
    rule.n = n;
    rule.nodes.assign(n, 0.0);
    rule.weights.assign(n, 0.0);

    // Jacobi matrix of the monic recurrence: zero diagonal, off-diagonal
    // sqrt(k/2). Its eigenvalues are the nodes; an eigenvalues-only
    // tridiagonal solve keeps this O(n^2).
    Eigen::VectorXd diag = Eigen::VectorXd::Zero(n);
    Eigen::VectorXd sub(n > 1 ? n - 1 : 1);
    for (int k = 1; k < n; ++k) sub[k - 1] = std::sqrt(0.5 * k);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
    es.computeFromTridiagonal(diag, sub.head(n > 1 ? n - 1 : 0), Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success)
        throw numeric_error("gauss_hermite: tridiagonal eigenvalue iteration failed");
    const Eigen::VectorXd& ev = es.eigenvalues();  // ascending

    const bool odd = (n % 2) != 0;
    const int mid = n / 2;
    const double ln2_512 = 512.0 * 0.69314718055994530942;

    // polish the non-negative half and mirror; H_n is odd or even, so the
    // spectrum is exactly symmetric and the center root of odd n is 0
    for (int i = mid; i < n; ++i) {
        double z = ev[i];
        if (odd && i == mid) {
            z = 0.0;
        } else {
            for (int it = 0; it < 20; ++it) {
                const detail::HermiteEval h = detail::hermite_ortho(n, z);
                const double delta = h.p_n / (std::sqrt(2.0 * n) * h.p_nm1);
                z -= delta;
                if (std::fabs(delta) <= 1e-15 * std::max(1.0, std::fabs(z))) break;
            }
        }
        const detail::HermiteEval h = detail::hermite_ortho(n, z);
        // w = 2 / (H~_n'(x))^2 with H~_n' = sqrt(2n) H~_{n-1}; assembled in
        // logs so far-out nodes underflow cleanly to zero
        const double lnw = 0.69314718055994530942 - std::log(2.0 * n) -
                           2.0 * (std::log(std::fabs(h.p_nm1)) + h.shift * ln2_512);
        const double w = std::exp(lnw);
        rule.nodes[i] = z;
        rule.weights[i] = w;
        rule.nodes[n - 1 - i] = -z;
        rule.weights[n - 1 - i] = w;
    }
    return rule;
}

// process-wide cache; rules for large n are expensive to build
inline const GaussHermite& gauss_hermite(int n) {
    static std::map<int, GaussHermite> cache;
    static std::mutex mutex;
    std::lock_guard<std::mutex> lock(mutex);
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, make_gauss_hermite(n)).first;
    return it->second;
}

}

#endif
