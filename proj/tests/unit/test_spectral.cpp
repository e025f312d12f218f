#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <cstdlib>

#include "biphoton/errors.hpp"
#include "biphoton/params.hpp"
#include "biphoton/spectral.hpp"

using namespace biphoton;
using std::complex;

namespace {

DerivedParams derived_at(double T, Scheme scheme) {
    PhysicalParams p;
    p.temperature = T;
    p.scheme = scheme;
    return derive(p);
}

}

TEST_CASE("grid axis and trapezoid weights") {
    SpectralGridSpec g{150.0, 16};
    const auto axis = grid_axis(g);
    const auto w = trapezoid_weights(g);
    CHECK(axis.front() == -150.0);
    CHECK(axis.back() == 150.0);
    CHECK(axis[8] > 0.0);
    const double h = 300.0 / 15.0;
    CHECK(axis[1] - axis[0] == Catch::Approx(h).epsilon(1e-15));
    CHECK(w.front() == Catch::Approx(0.5 * h).epsilon(1e-15));
    CHECK(w[5] == Catch::Approx(h).epsilon(1e-15));
    double sum = 0.0;
    for (double v : w) sum += v;
    CHECK(sum == Catch::Approx(300.0).epsilon(1e-14));

    CHECK_THROWS_AS(grid_axis(SpectralGridSpec{150.0, 15}), validation_error);
    CHECK_THROWS_AS(grid_axis(SpectralGridSpec{150.0, 14}), validation_error);
    CHECK_THROWS_AS(grid_axis(SpectralGridSpec{0.0, 64}), validation_error);
    CHECK_THROWS_AS(grid_axis(SpectralGridSpec{-5.0, 64}), validation_error);
}

TEST_CASE("evaluator names round-trip") {
    CHECK(evaluator_from_string("bare") == Evaluator::Bare);
    CHECK(evaluator_from_string("analytic") == Evaluator::Analytic);
    CHECK(evaluator_from_string("quadrature") == Evaluator::Quadrature);
    CHECK(to_string(Evaluator::Quadrature) == std::string("quadrature"));
    CHECK_THROWS_AS(evaluator_from_string("exact"), config_error);
}

TEST_CASE("motionless amplitude") {
    const DerivedParams d = derived_at(300.0, Scheme::Copropagating);
    // on resonance the Gaussian is 1 and the Lorentzian pole gives 1/(GammaN/2)
    const complex<double> f0 = f_bare(0.0, 0.0, d);
    CHECK(f0.real() == Catch::Approx(0.4).epsilon(1e-15));
    CHECK(f0.imag() == 0.0);
    // moving along the anti-diagonal keeps the Gaussian at 1
    const complex<double> f1 = f_bare(3.0, -3.0, d);
    const complex<double> want = 1.0 / complex<double>(2.5, 3.0);
    CHECK(std::abs(f1 - want) < 1e-15);
    // the Gaussian cuts the sum coordinate
    const complex<double> f2 = f_bare(2.0, 2.0, d);
    CHECK(std::abs(f2) < std::abs(f_bare(2.0, -2.0, d)));
}

TEST_CASE("golden value of the broadened amplitude at line center") {
    // frozen from an independent high-precision evaluation of the thermal
    // velocity integral (defaults: co, 300 K)
    const DerivedParams d = derived_at(300.0, Scheme::Copropagating);
    const complex<double> f = f_doppler_analytic(0.0, 0.0, d);
    CHECK(f.real() == Catch::Approx(2.377154482045972e-02).epsilon(1e-9));
    CHECK(std::fabs(f.imag()) < 1e-16);
}

TEST_CASE("analytic and quadrature routes agree on a coarse probe grid") {
    const int budget = 16384;
    for (Scheme scheme : {Scheme::Copropagating, Scheme::CounterPropagating}) {
        for (double T : {100.0, 300.0, 500.0}) {
            const DerivedParams d = derived_at(T, scheme);
            double worst = 0.0;
            for (int a = 0; a < 9; ++a) {
                for (int b = 0; b < 9; ++b) {
                    const double dws = -150.0 + 37.5 * a;
                    const double dwi = -150.0 + 37.5 * b;
                    const complex<double> fa = f_doppler_analytic(dws, dwi, d);
                    const complex<double> fq = f_doppler_quadrature(dws, dwi, d, budget);
                    const double scale = std::abs(fa);
                    if (scale < 1e-300) continue;
                    worst = std::max(worst, std::abs(fa - fq) / scale);
                }
            }
            INFO(to_string(scheme) << " T = " << T << ", worst rel " << worst);
            CHECK(worst < 1e-6);
        }
    }
}

TEST_CASE("broadened amplitude is continuous at T -> 0") {
    PhysicalParams p;
    p.temperature = 0.0;
    const DerivedParams d0 = derive(p);
    p.temperature = 1e-6;
    const DerivedParams dt = derive(p);
    for (auto [dws, dwi] : {std::pair{0.0, 0.0}, {5.0, -3.0}, {-20.0, 10.0}}) {
        const complex<double> cold = f_doppler_analytic(dws, dwi, d0);
        const complex<double> warm = f_doppler_analytic(dws, dwi, dt);
        INFO("at (" << dws << ", " << dwi << ")");
        CHECK(std::abs(warm - cold) / std::abs(cold) < 1e-4);
    }
    // T = 0 collapses to the motionless amplitude exactly, on both routes
    CHECK(f_doppler_analytic(1.0, 2.0, d0) == f_bare(1.0, 2.0, d0));
    CHECK(f_doppler_quadrature(1.0, 2.0, d0, 2048) == f_bare(1.0, 2.0, d0));
}

TEST_CASE("quadrature route reports an insufficient node budget") {
    // the counter geometry parks the pole ~0.1 above the axis at 300 K, far
    // beyond what 512 nodes resolve
    const DerivedParams d = derived_at(300.0, Scheme::CounterPropagating);
    try {
        (void)f_doppler_quadrature(0.0, 0.0, d, 512);
        FAIL("expected quadrature_error");
    } catch (const quadrature_error& e) {
        CHECK(e.nodes == 512);
        CHECK(std::abs(e.last - e.previous) > 0.0);
    }
    CHECK_THROWS_AS(f_doppler_quadrature(0.0, 0.0, d, 256), contract_error);
}

TEST_CASE("spectral matrix is normalized and deterministic across thread counts") {
    const DerivedParams d = derived_at(300.0, Scheme::Copropagating);
    const SpectralGridSpec g{150.0, 64};

    setenv("BIPHOTON_THREADS", "3", 1);
    const SpectralMatrix m3 = build_spectral_matrix(d, g, Evaluator::Analytic);
    setenv("BIPHOTON_THREADS", "1", 1);
    const SpectralMatrix m1 = build_spectral_matrix(d, g, Evaluator::Analytic);
    unsetenv("BIPHOTON_THREADS");

    for (int j = 0; j < g.n; ++j)
        for (int k = 0; k < g.n; ++k) REQUIRE(m1.f(j, k) == m3.f(j, k));

    detail::KahanSum total;
    for (int j = 0; j < g.n; ++j)
        for (int k = 0; k < g.n; ++k)
            total.add(m1.weights[j] * m1.weights[k] * std::norm(m1.f(j, k)));
    CHECK(total.sum == Catch::Approx(1.0).margin(1e-12));
}

TEST_CASE("counter geometry narrows the sum coordinate, not the idler marginal") {
    const SpectralGridSpec g{150.0, 256};
    const SpectralMatrix co =
        build_spectral_matrix(derived_at(300.0, Scheme::Copropagating), g, Evaluator::Analytic);
    const SpectralMatrix ct = build_spectral_matrix(derived_at(300.0, Scheme::CounterPropagating),
                                                    g, Evaluator::Analytic);

    // variance of Omega = dws + dwi under the normalized joint density
    auto var_omega = [&](const SpectralMatrix& m) {
        double acc = 0.0;
        for (int j = 0; j < g.n; ++j)
            for (int k = 0; k < g.n; ++k)
                acc += m.weights[j] * m.weights[k] * std::norm(m.f(j, k)) *
                       (m.axis[j] + m.axis[k]) * (m.axis[j] + m.axis[k]);
        return acc;
    };
    CHECK(var_omega(ct) < 0.25 * var_omega(co));

    // variance of the idler detuning along the resonant signal slice dws = 0
    auto slice_var = [&](const SpectralMatrix& m) {
        const int j0 = g.n / 2;  // axis[j0] is the first positive point, nearest 0
        double norm = 0.0, acc = 0.0;
        for (int k = 0; k < g.n; ++k) {
            const double p = std::norm(m.f(j0, k));
            norm += m.weights[k] * p;
            acc += m.weights[k] * p * m.axis[k] * m.axis[k];
        }
        return acc / norm;
    };
    CHECK(slice_var(ct) < slice_var(co));
}

TEST_CASE("bad amplitudes fail normalization loudly") {
    const SpectralGridSpec g{10.0, 16};
    CHECK_THROWS_AS(build_matrix_from([](double, double) { return std::complex<double>(0.0, 0.0); }, g),
                    numeric_error);
}
