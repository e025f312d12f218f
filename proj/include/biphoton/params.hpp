#ifndef BIPHOTON_PARAMS_HPP
#define BIPHOTON_PARAMS_HPP

#include <cmath>
#include <string>

#include "biphoton/constants.hpp"
#include "biphoton/errors.hpp"

namespace biphoton {

enum class Scheme { Copropagating, CounterPropagating };

inline const char* to_string(Scheme s) {
    return s == Scheme::Copropagating ? "co" : "counter";
}

// All laboratory-unit inputs. tau is stored as the dimensionless product
// Gamma3*tau; everything downstream works in Gamma3-scaled units.
struct PhysicalParams {
    double lambda_s = 1.32e-6;          // signal wavelength, m
    double lambda_i = 795e-9;           // idler wavelength, m
    double gamma3 = 2.0 * pi * 5.8e6;   // intrinsic idler decay rate, rad/s
    double gamma3N_ratio = 5.0;         // Gamma3N / Gamma3, >= 1
    double tau = 0.25;                  // Gamma3 * tau, dimensionless
    double temperature = 300.0;         // K, >= 0
    double atom_mass = 1.44316e-25;     // kg (87Rb default)
    Scheme scheme = Scheme::Copropagating;
};

// Derived quantities. Lab-unit fields first; the Gamma3-scaled block is what
// the evaluators consume. d_i and kbar_si carry the scheme sign (negative
// idler contribution for counter-propagation).
struct DerivedParams {
    double k_s = 0, k_i = 0;        // wavenumbers 2*pi/lambda, 1/m
    double sigma = 0;               // sqrt(kB T / m), m/s
    double kbar_si = 0;             // k_s + s*k_i, s = +1 co / -1 counter, 1/m
    double b = 0;                   // kbar^2 / (kbar^2 + 4/(sigma*tau)^2)
    double gamma3N = 0;             // rad/s

    double tau_s = 0;               // Gamma3*tau (copied through)
    double gammaN_s = 0;            // Gamma3N / Gamma3 (copied through)
    double d_s = 0;                 // sqrt(2)*sigma*k_s / Gamma3
    double d_i = 0;                 // sqrt(2)*sigma*kappa_i / Gamma3, signed
    double dbar = 0;                // d_s + d_i
    double alpha = 1;               // 1 + tau_s^2 * dbar^2 / 8
    double temperature = 0;         // K, kept for the exact T=0 branch
    Scheme scheme = Scheme::Copropagating;
};

inline void validate(const PhysicalParams& p) {
    auto positive = [](double v, const char* field) {
        if (!(v > 0.0) || !std::isfinite(v))
            throw validation_error(field, "must be strictly positive, got " + std::to_string(v));
    };
    positive(p.lambda_s, "lambda_s");
    positive(p.lambda_i, "lambda_i");
    positive(p.gamma3, "gamma3");
    positive(p.tau, "tau");
    positive(p.atom_mass, "atom_mass");
    if (!(p.temperature >= 0.0) || !std::isfinite(p.temperature))
        throw validation_error("temperature", "must be >= 0, got " + std::to_string(p.temperature));
    if (!(p.gamma3N_ratio >= 1.0) || !std::isfinite(p.gamma3N_ratio))
        throw validation_error("gamma3N_ratio", "must be >= 1, got " + std::to_string(p.gamma3N_ratio));
}

// Pure and deterministic: equal inputs give bitwise-equal outputs.
inline DerivedParams derive(const PhysicalParams& p) {
    validate(p);
    DerivedParams d;
    d.k_s = 2.0 * pi / p.lambda_s;
    d.k_i = 2.0 * pi / p.lambda_i;
    d.sigma = std::sqrt(k_boltzmann * p.temperature / p.atom_mass);
    const double s = p.scheme == Scheme::Copropagating ? 1.0 : -1.0;
    d.kbar_si = d.k_s + s * d.k_i;
    // tau in seconds only where the lab-unit b is formed
    const double tau_sec = p.tau / p.gamma3;
    const double st = d.sigma * tau_sec;
    // sigma=0 gives 4/st^2 = inf and b = 0, the correct T->0 limit
    d.b = d.kbar_si * d.kbar_si / (d.kbar_si * d.kbar_si + 4.0 / (st * st));
    d.gamma3N = p.gamma3N_ratio * p.gamma3;

    d.tau_s = p.tau;
    d.gammaN_s = p.gamma3N_ratio;
    const double root2 = 1.4142135623730950488;
    d.d_s = root2 * d.sigma * d.k_s / p.gamma3;
    d.d_i = root2 * d.sigma * s * d.k_i / p.gamma3;
    d.dbar = d.d_s + d.d_i;
    d.alpha = 1.0 + d.tau_s * d.tau_s * d.dbar * d.dbar / 8.0;
    d.temperature = p.temperature;
    d.scheme = p.scheme;
    return d;
}

}

#endif
