#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>

#include "biphoton/errors.hpp"
#include "biphoton/params.hpp"
#include "biphoton/schmidt.hpp"
#include "biphoton/spectral.hpp"

using namespace biphoton;
using std::complex;

namespace {

// Gaussian with unequal diagonal widths; its Schmidt spectrum is the
// geometric family lambda_n = (1 - mu^2) mu^(2n) and its modes are the
// standard Hermite functions. mu = 0.6 here:
//   f ~ exp(-(x+y)^2/16 - (x-y)^2)
SpectralMatrix two_gaussian_matrix(int n, double range = 10.0) {
    return build_matrix_from(
        [](double x, double y) {
            const double u = x + y, v = x - y;
            return complex<double>(std::exp(-u * u / 16.0 - v * v), 0.0);
        },
        SpectralGridSpec{range, n});
}

DerivedParams co300() {
    PhysicalParams p;
    return derive(p);
}

double overlap_mod(const SchmidtModes& a, const SchmidtModes& b, int mode, bool signal) {
    const Eigen::MatrixXcd& ma = signal ? a.psi : a.phi;
    const Eigen::MatrixXcd& mb = signal ? b.psi : b.phi;
    complex<double> acc(0.0, 0.0);
    for (Eigen::Index j = 0; j < ma.rows(); ++j)
        acc += a.weights[j] * ma(j, mode) * std::conj(mb(j, mode));
    return std::abs(acc);
}

}

TEST_CASE("geometric Schmidt spectrum of the two-Gaussian amplitude") {
    const SpectralMatrix m = two_gaussian_matrix(256);
    const SchmidtModes modes = schmidt_decompose(m);

    REQUIRE(modes.lambdas.size() >= 5);
    const double mu2 = 0.36;
    double expect = 1.0 - mu2;
    for (int k = 0; k < 5; ++k) {
        INFO("k = " << k);
        CHECK(modes.lambdas[k] == Catch::Approx(expect).epsilon(1e-6));
        expect *= mu2;
    }

    double sum = 0.0;
    for (double l : modes.lambdas) {
        CHECK(l >= 0.0);
        sum += l;
    }
    CHECK(sum == Catch::Approx(1.0).margin(1e-9));
    for (std::size_t k = 1; k < modes.lambdas.size(); ++k)
        CHECK(modes.lambdas[k] <= modes.lambdas[k - 1]);

    // closed form: -log2(1-q) - q log2(q)/(1-q) at q = 0.36
    CHECK(entropy_bits(modes.lambdas) == Catch::Approx(1.4729424816137001).epsilon(1e-6));
}

TEST_CASE("Hermite mode shapes: mode n has n+1 peaks") {
    const SpectralMatrix m = two_gaussian_matrix(256);
    const SchmidtModes modes = schmidt_decompose(m);
    for (int n = 0; n < 5; ++n) {
        INFO("mode " << n);
        CHECK(count_peaks(mode_abs2(modes, n, true)) == n + 1);
        CHECK(count_peaks(mode_abs2(modes, n, false)) == n + 1);
    }
}

TEST_CASE("modes are orthonormal and reconstruct the amplitude") {
    const SpectralMatrix m =
        build_spectral_matrix(co300(), SpectralGridSpec{150.0, 64}, Evaluator::Analytic);
    const SchmidtModes modes = schmidt_decompose(m, 0.0);

    const int nm = static_cast<int>(modes.lambdas.size());
    REQUIRE(nm == 64);
    for (int a = 0; a < 6; ++a) {
        for (int b = 0; b <= a; ++b) {
            complex<double> ps(0.0, 0.0), ph(0.0, 0.0);
            for (int j = 0; j < 64; ++j) {
                ps += m.weights[j] * modes.psi(j, a) * std::conj(modes.psi(j, b));
                ph += m.weights[j] * modes.phi(j, a) * std::conj(modes.phi(j, b));
            }
            const double want = a == b ? 1.0 : 0.0;
            INFO("modes " << a << ", " << b);
            CHECK(std::abs(ps - complex<double>(want, 0.0)) < 1e-10);
            CHECK(std::abs(ph - complex<double>(want, 0.0)) < 1e-10);
        }
    }

    Eigen::MatrixXcd rec = Eigen::MatrixXcd::Zero(64, 64);
    for (int k = 0; k < nm; ++k)
        rec += std::sqrt(modes.lambdas[k]) * modes.psi.col(k) * modes.phi.col(k).transpose();
    const double scale = m.f.cwiseAbs().maxCoeff();
    CHECK((rec - m.f).cwiseAbs().maxCoeff() < 1e-10 * scale);
}

TEST_CASE("phase anchoring makes the decomposition reproducible") {
    const SpectralMatrix m =
        build_spectral_matrix(co300(), SpectralGridSpec{150.0, 64}, Evaluator::Analytic);
    const SchmidtModes a = schmidt_decompose(m);
    const SchmidtModes b = schmidt_decompose(m);
    for (int k = 0; k < 3; ++k) {
        // the anchored sample attains the max modulus; mirror samples can tie
        // within rounding, so scan every sample at the top for the real one
        double best = 0.0;
        for (Eigen::Index j = 0; j < a.psi.rows(); ++j)
            best = std::max(best, std::abs(a.psi(j, k)));
        bool anchored = false;
        for (Eigen::Index j = 0; j < a.psi.rows(); ++j) {
            const complex<double> v = a.psi(j, k);
            if (std::abs(v) >= best * (1.0 - 1e-12) && v.real() > 0.0 &&
                std::fabs(v.imag()) < 1e-12 * v.real())
                anchored = true;
        }
        CHECK(anchored);
        for (int j = 0; j < 64; ++j) {
            REQUIRE(a.psi(j, k) == b.psi(j, k));
            REQUIRE(a.phi(j, k) == b.phi(j, k));
        }
    }
}

TEST_CASE("SVD route and kernel eigendecomposition agree") {
    const SpectralMatrix m =
        build_spectral_matrix(co300(), SpectralGridSpec{150.0, 64}, Evaluator::Analytic);
    const SchmidtModes svd = schmidt_decompose(m);
    const SchmidtModes ker = kernel_eig_oracle(m);

    const std::size_t shared = std::min(svd.lambdas.size(), ker.lambdas.size());
    REQUIRE(shared >= 5);
    for (std::size_t k = 0; k < shared; ++k) {
        INFO("k = " << k);
        CHECK(std::fabs(svd.lambdas[k] - ker.lambdas[k]) < 1e-8);
    }
    // leading modes are non-degenerate; overlap modulus is phase-blind
    for (int k = 0; k < 3; ++k) {
        CHECK(overlap_mod(svd, ker, k, true) == Catch::Approx(1.0).margin(1e-8));
        CHECK(overlap_mod(svd, ker, k, false) == Catch::Approx(1.0).margin(1e-8));
    }

    const SpectralMatrix big =
        build_spectral_matrix(co300(), SpectralGridSpec{150.0, 256}, Evaluator::Analytic);
    CHECK_THROWS_AS(kernel_eig_oracle(big), contract_error);
}

TEST_CASE("entropy of simple spectra") {
    CHECK(entropy_bits({1.0}) == 0.0);
    CHECK(entropy_bits({0.5, 0.5}) == Catch::Approx(1.0).epsilon(1e-15));
    CHECK(entropy_bits({0.25, 0.25, 0.25, 0.25}) == Catch::Approx(2.0).epsilon(1e-15));
    CHECK(entropy_bits({1.0, 0.0}) == 0.0);
    CHECK_THROWS_AS(entropy_bits({0.9, -0.1}), contract_error);
}

TEST_CASE("separable amplitude has a single Schmidt mode") {
    const SpectralMatrix m = build_matrix_from(
        [](double x, double y) {
            return complex<double>(std::exp(-x * x / 4.0 - y * y), 0.0);
        },
        SpectralGridSpec{10.0, 64});
    const SchmidtModes modes = schmidt_decompose(m);
    CHECK(modes.lambdas[0] == Catch::Approx(1.0).margin(1e-10));
    CHECK(entropy_bits(modes.lambdas) < 1e-8);
}

TEST_CASE("mode profile contract errors") {
    const SpectralMatrix m = two_gaussian_matrix(64);
    const SchmidtModes modes = schmidt_decompose(m);
    CHECK_THROWS_AS(mode_abs2(modes, -1, true), contract_error);
    CHECK_THROWS_AS(mode_abs2(modes, 10000, false), contract_error);
}
