#ifndef BIPHOTON_SCHMIDT_HPP
#define BIPHOTON_SCHMIDT_HPP

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <vector>

#include "biphoton/errors.hpp"
#include "biphoton/spectral.hpp"

// Schmidt decomposition of a normalized joint spectral amplitude:
//   f(ws, wi) = sum_n sqrt(lambda_n) psi_n(ws) phi_n(wi)
// with the modes orthonormal under the grid's trapezoid inner product. The
// discrete problem is the SVD of B = W^(1/2) F W^(1/2); a second route
// diagonalizes the two reduced one-photon kernels instead and serves as the
// cross-check oracle.

namespace biphoton {

struct SchmidtModes {
    std::vector<double> lambdas;  // descending, truncated at the threshold
    Eigen::MatrixXcd psi;         // grid.n x modes: signal mode samples
    Eigen::MatrixXcd phi;         // grid.n x modes: idler mode samples
    std::vector<double> axis;     // grid carried along for mode profiles
    std::vector<double> weights;
};

namespace detail {

// Rotate each mode pair so the largest-magnitude sample of psi_n is real and
// positive; phi_n absorbs the opposite phase, leaving every product
// psi_n(j) phi_n(k) unchanged. Without this the SVD phase is arbitrary per
// run, which would break bitwise reproducibility.
inline void anchor_phases(Eigen::MatrixXcd& psi, Eigen::MatrixXcd& phi) {
    for (Eigen::Index n = 0; n < psi.cols(); ++n) {
        Eigen::Index jmax = 0;
        double best = -1.0;
        for (Eigen::Index j = 0; j < psi.rows(); ++j) {
            const double a = std::abs(psi(j, n));
            if (a > best) {
                best = a;
                jmax = j;
            }
        }
        if (best <= 0.0) continue;
        const std::complex<double> rot = std::abs(psi(jmax, n)) / psi(jmax, n);
        psi.col(n) *= rot;
        if (n < phi.cols()) phi.col(n) *= std::conj(rot);
    }
}

// independently anchor one mode family (used by the kernel oracle, whose two
// eigenproblems cannot share a pairwise phase)
inline void anchor_phases_single(Eigen::MatrixXcd& m) {
    Eigen::MatrixXcd none(m.rows(), 0);
    anchor_phases(m, none);
}

}

inline SchmidtModes schmidt_decompose(const SpectralMatrix& m, double threshold = 1e-12) {
    if (!(threshold >= 0.0)) throw contract_error("schmidt_decompose: threshold must be >= 0");
    const int n = m.grid.n;
    Eigen::VectorXd sqw(n);
    for (int j = 0; j < n; ++j) sqw[j] = std::sqrt(m.weights[j]);
    const Eigen::VectorXcd sqwc = sqw.cast<std::complex<double>>();
    Eigen::MatrixXcd B = sqwc.asDiagonal() * m.f * sqwc.asDiagonal();

    Eigen::BDCSVD<Eigen::MatrixXcd> svd(B, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Eigen::VectorXd& s = svd.singularValues();

    int keep = 0;
    for (int k = 0; k < s.size(); ++k)
        if (s[k] * s[k] >= threshold) ++keep;
    if (keep == 0) keep = 1;

    SchmidtModes out;
    out.axis = m.axis;
    out.weights = m.weights;
    out.lambdas.resize(keep);
    out.psi.resize(n, keep);
    out.phi.resize(n, keep);
    for (int k = 0; k < keep; ++k) {
        out.lambdas[k] = s[k] * s[k];
        for (int j = 0; j < n; ++j) {
            out.psi(j, k) = svd.matrixU()(j, k) / sqw[j];
            out.phi(j, k) = std::conj(svd.matrixV()(j, k)) / sqw[j];
        }
    }
    detail::anchor_phases(out.psi, out.phi);
    return out;
}

// Independent route: diagonalize the two reduced kernels
//   K1(j,j') = sum_k w_k F(j,k) conj(F(j',k))   (signal side)
//   K2(k,k') = sum_j w_j F(j,k) conj(F(j,k'))   (idler side)
// Both weighted kernels are Hermitian with the same spectrum lambda_n; the
// weighted eigenvectors are psi_n and phi_n. O(n^3) with dense kernels, so
// the grid is capped; this exists to check the SVD route, not to replace it.
inline SchmidtModes kernel_eig_oracle(const SpectralMatrix& m, double threshold = 1e-12) {
    const int n = m.grid.n;
    if (n > 128) throw contract_error("kernel_eig_oracle: grid larger than 128 points per axis");
    Eigen::VectorXd sqw(n);
    for (int j = 0; j < n; ++j) sqw[j] = std::sqrt(m.weights[j]);
    Eigen::VectorXcd wc(n), sqwc(n);
    for (int j = 0; j < n; ++j) {
        wc[j] = m.weights[j];
        sqwc[j] = sqw[j];
    }

    const Eigen::MatrixXcd K1 = m.f * wc.asDiagonal() * m.f.adjoint();
    // K2(k,k') = sum_j w_j F(j,k) conj(F(j,k')) is the conjugate of
    // F^H W F, which is Hermitian, so transposition does the conjugation
    const Eigen::MatrixXcd K2 = (m.f.adjoint() * wc.asDiagonal() * m.f).transpose();
    const Eigen::MatrixXcd B1 = sqwc.asDiagonal() * K1 * sqwc.asDiagonal();
    const Eigen::MatrixXcd B2 = sqwc.asDiagonal() * K2 * sqwc.asDiagonal();

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es1(B1), es2(B2);
    if (es1.info() != Eigen::Success || es2.info() != Eigen::Success)
        throw numeric_error("kernel_eig_oracle: eigen decomposition failed");

    int keep = 0;  // eigenvalues ascending; count the retained tail
    for (int k = 0; k < n; ++k)
        if (es1.eigenvalues()[n - 1 - k] >= threshold)
            ++keep;
        else
            break;
    if (keep == 0) keep = 1;

    SchmidtModes out;
    out.axis = m.axis;
    out.weights = m.weights;
    out.lambdas.resize(keep);
    out.psi.resize(n, keep);
    out.phi.resize(n, keep);
    for (int k = 0; k < keep; ++k) {
        out.lambdas[k] = es1.eigenvalues()[n - 1 - k];
        for (int j = 0; j < n; ++j) {
            out.psi(j, k) = es1.eigenvectors()(j, n - 1 - k) / sqw[j];
            out.phi(j, k) = es2.eigenvectors()(j, n - 1 - k) / sqw[j];
        }
    }
    detail::anchor_phases_single(out.psi);
    detail::anchor_phases_single(out.phi);
    return out;
}

// Von Neumann entropy of the Schmidt spectrum, in bits.
inline double entropy_bits(const std::vector<double>& lambdas) {
    double s = 0.0;
    for (double l : lambdas) {
        if (l < 0.0 && l > -1e-14) continue;  // eigensolver rounding
        if (l < 0.0) throw contract_error("entropy_bits: negative eigenvalue");
        if (l > 0.0) s -= l * std::log2(l);
    }
    return s;
}

// |mode(w)|^2 samples for one Schmidt mode, signal or idler side.
inline std::vector<double> mode_abs2(const SchmidtModes& modes, int mode, bool signal_side) {
    const Eigen::MatrixXcd& m = signal_side ? modes.psi : modes.phi;
    if (mode < 0 || mode >= m.cols()) throw contract_error("mode_abs2: mode index out of range");
    std::vector<double> out(m.rows());
    for (Eigen::Index j = 0; j < m.rows(); ++j) out[j] = std::norm(m(j, mode));
    return out;
}

// Count local maxima above rel_floor * max; grid endpoints count when they
// dominate their single neighbor.
inline int count_peaks(const std::vector<double>& profile, double rel_floor = 1e-3) {
    if (profile.size() < 3) return 0;
    double top = 0.0;
    for (double v : profile) top = std::max(top, v);
    const double floor = rel_floor * top;
    int peaks = 0;
    const std::size_t n = profile.size();
    if (profile[0] > floor && profile[0] > profile[1]) ++peaks;
    for (std::size_t j = 1; j + 1 < n; ++j)
        if (profile[j] > floor && profile[j] > profile[j - 1] && profile[j] >= profile[j + 1])
            ++peaks;
    if (profile[n - 1] > floor && profile[n - 1] > profile[n - 2]) ++peaks;
    return peaks;
}

}

#endif
