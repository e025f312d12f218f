#ifndef BIPHOTON_SPECTRAL_HPP
#define BIPHOTON_SPECTRAL_HPP

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include "biphoton/constants.hpp"
#include "biphoton/errors.hpp"
#include "biphoton/parallel.hpp"
#include "biphoton/params.hpp"
#include "biphoton/quadrature.hpp"
#include "biphoton/specfun.hpp"

// Joint spectral amplitude evaluators. Detunings are measured in units of
// Gamma3 throughout; the motionless amplitude is
//   f(dws, dwi) = exp(-tau^2 (dws+dwi)^2 / 8) / (GammaN/2 - i dwi)
// and the Doppler-broadened amplitude is its average over the 1D thermal
// velocity distribution, which closes to a Faddeeva evaluation after
// completing the square in the velocity variable.

namespace biphoton {

enum class Evaluator { Bare, Analytic, Quadrature };

inline const char* to_string(Evaluator e) {
    switch (e) {
        case Evaluator::Bare: return "bare";
        case Evaluator::Analytic: return "analytic";
        default: return "quadrature";
    }
}

inline Evaluator evaluator_from_string(const std::string& s) {
    if (s == "bare") return Evaluator::Bare;
    if (s == "analytic") return Evaluator::Analytic;
    if (s == "quadrature") return Evaluator::Quadrature;
    throw config_error("unknown evaluator '" + s + "' (expected bare|analytic|quadrature)");
}

// Symmetric detuning grid [-range, +range] in Gamma3 units, n uniform points
// including both endpoints, used for both the signal and idler axes.
struct SpectralGridSpec {
    double range = 150.0;
    int n = 512;
};

inline void validate(const SpectralGridSpec& g) {
    if (!(g.range > 0.0) || !std::isfinite(g.range))
        throw validation_error("range", "must be strictly positive");
    if (g.n < 16) throw validation_error("grid_n", "must be at least 16");
    if (g.n % 2 != 0) throw validation_error("grid_n", "must be even");
}

inline std::vector<double> grid_axis(const SpectralGridSpec& g) {
    validate(g);
    std::vector<double> axis(g.n);
    const double h = 2.0 * g.range / (g.n - 1);
    for (int j = 0; j < g.n; ++j) axis[j] = -g.range + h * j;
    return axis;
}

inline std::vector<double> trapezoid_weights(const SpectralGridSpec& g) {
    validate(g);
    std::vector<double> w(g.n);
    const double h = 2.0 * g.range / (g.n - 1);
    for (int j = 0; j < g.n; ++j) w[j] = h;
    w.front() = 0.5 * h;
    w.back() = 0.5 * h;
    return w;
}

namespace detail {

// compensated accumulation; the normalization contract is tighter than a
// quarter-million-term naive sum can guarantee
struct KahanSum {
    double sum = 0.0, c = 0.0;
    void add(double v) {
        const double y = v - c;
        const double t = sum + y;
        c = (t - sum) - y;
        sum = t;
    }
};

// Square completion shared by the analytic and quadrature routes: only the
// evaluation of the remaining Gaussian-pole integral differs between them.
//   f_D = prefactor * integral of exp(-x^2)/(x - zeta) dx / (i d_i sqrt(pi))
struct DopplerTerms {
    std::complex<double> zeta;  // pole; Im zeta has the sign of d_i
    double prefactor;           // exp(-tau^2 (1-b) Omega^2 / 8), 1-b = 1/alpha
};

inline DopplerTerms doppler_terms(double dws, double dwi, const DerivedParams& d) {
    const double omega = dws + dwi;
    const double t2 = d.tau_s * d.tau_s;
    const double pref = std::exp(-t2 * omega * omega / (8.0 * d.alpha));
    const double t0 = t2 * d.dbar * omega / (8.0 * d.alpha);
    const std::complex<double> tp(dwi / d.d_i, d.gammaN_s / (2.0 * d.d_i));
    const std::complex<double> zeta = std::sqrt(d.alpha) * (tp - t0);
    return {zeta, pref};
}

}

inline std::complex<double> f_bare(double dws, double dwi, const DerivedParams& d) {
    const double omega = dws + dwi;
    const double t2 = d.tau_s * d.tau_s;
    const double gauss = std::exp(-t2 * omega * omega / 8.0);
    return gauss / std::complex<double>(0.5 * d.gammaN_s, -dwi);
}

// Closed form of the thermal average. The pole integral is i pi w(zeta) for
// Im zeta > 0 and -i pi w(-zeta) below the axis; folding the sign of d_i
// into the argument gives one Faddeeva call that always lands in the stable
// upper half-plane.
inline std::complex<double> f_doppler_analytic(double dws, double dwi, const DerivedParams& d) {
    if (d.sigma == 0.0) return f_bare(dws, dwi, d);
    const detail::DopplerTerms t = detail::doppler_terms(dws, dwi, d);
    const std::complex<double> zt = d.d_i > 0.0 ? t.zeta : -t.zeta;
    return sqrt_pi / std::fabs(d.d_i) * t.prefactor * faddeeva(zt);
}

// Same average evaluated by Gauss-Hermite sums of increasing order, never
// touching the Faddeeva function; this is the independent cross-check route.
// Node counts double from 256 until two consecutive evaluations of the pole
// integral agree to 1e-9 relative; exceeding max_nodes without agreement
// throws quadrature_error with the last two iterates attached.
inline std::complex<double> f_doppler_quadrature(double dws, double dwi, const DerivedParams& d,
                                                 int max_nodes = 2048) {
    if (d.sigma == 0.0) return f_bare(dws, dwi, d);
    if (max_nodes < 512)
        throw contract_error("f_doppler_quadrature: max_nodes must be at least 512");
    const detail::DopplerTerms t = detail::doppler_terms(dws, dwi, d);

    auto pole_integral = [&](int n) {
        const GaussHermite& rule = gauss_hermite(n);
        std::complex<double> acc(0.0, 0.0);
        for (int k = 0; k < n; ++k) acc += rule.weights[k] / (rule.nodes[k] - t.zeta);
        return acc;
    };

    int n = 256;
    std::complex<double> prev = pole_integral(n);
    while (n < max_nodes) {
        n *= 2;
        const std::complex<double> cur = pole_integral(n);
        if (std::abs(cur - prev) <= 1e-9 * std::abs(cur)) {
            prev = cur;
            const std::complex<double> denom(0.0, d.d_i * sqrt_pi);
            return t.prefactor * prev / denom;
        }
        prev = cur;
    }
    const std::complex<double> half = pole_integral(n / 2);
    throw quadrature_error("f_doppler_quadrature: not converged within node budget",
                           t.prefactor * prev / std::complex<double>(0.0, d.d_i * sqrt_pi),
                           t.prefactor * half / std::complex<double>(0.0, d.d_i * sqrt_pi), n);
}

inline std::complex<double> evaluate_jsa(Evaluator e, double dws, double dwi,
                                         const DerivedParams& d, int max_nodes = 2048) {
    switch (e) {
        case Evaluator::Bare: return f_bare(dws, dwi, d);
        case Evaluator::Analytic: return f_doppler_analytic(dws, dwi, d);
        default: return f_doppler_quadrature(dws, dwi, d, max_nodes);
    }
}

// Discretized amplitude on the square grid, normalized so
// sum_jk w_j w_k |f_jk|^2 = 1. Row index j runs over the signal axis, column
// index k over the idler axis.
struct SpectralMatrix {
    SpectralGridSpec grid;
    std::vector<double> axis;
    std::vector<double> weights;
    Eigen::MatrixXcd f;
};

namespace detail {

inline void normalize_in_place(SpectralMatrix& m) {
    const int n = m.grid.n;
    KahanSum total;
    for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
            total.add(m.weights[j] * m.weights[k] * std::norm(m.f(j, k)));
    if (!(total.sum > 0.0) || !std::isfinite(total.sum))
        throw numeric_error("spectral matrix normalization: |f|^2 sum is " +
                            std::to_string(total.sum));
    m.f /= std::sqrt(total.sum);
}

}

// Generic fill from any complex amplitude fn(dws, dwi); rows are filled in
// parallel with a static partition, so the result is thread-count
// independent.
template <typename Fn>
SpectralMatrix build_matrix_from(Fn&& fn, const SpectralGridSpec& grid) {
    SpectralMatrix m;
    m.grid = grid;
    m.axis = grid_axis(grid);
    m.weights = trapezoid_weights(grid);
    m.f.resize(grid.n, grid.n);
    parallel_for(static_cast<std::size_t>(grid.n), [&](std::size_t j) {
        for (int k = 0; k < grid.n; ++k)
            m.f(static_cast<int>(j), k) = fn(m.axis[j], m.axis[k]);
    });
    detail::normalize_in_place(m);
    return m;
}

inline SpectralMatrix build_spectral_matrix(const DerivedParams& d, const SpectralGridSpec& grid,
                                            Evaluator e, int max_nodes = 2048) {
    return build_matrix_from(
        [&](double dws, double dwi) { return evaluate_jsa(e, dws, dwi, d, max_nodes); }, grid);
}

}

#endif
