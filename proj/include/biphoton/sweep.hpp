#ifndef BIPHOTON_SWEEP_HPP
#define BIPHOTON_SWEEP_HPP

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "biphoton/errors.hpp"
#include "biphoton/fit.hpp"
#include "biphoton/params.hpp"
#include "biphoton/schmidt.hpp"
#include "biphoton/spectral.hpp"

// Entanglement entropy scans over one physical parameter, in two modes:
// fixed_range evaluates S on one grid; asymptotic evaluates S on a ladder of
// growing spectral windows and fits S(R) = a (1 - exp(-beta R)), reporting
// the window-free asymptote.

namespace biphoton {

enum class SweepAxis { Temperature, Gamma3NRatio, Tau };
enum class SweepMode { FixedRange, Asymptotic };

inline const char* to_string(SweepAxis a) {
    switch (a) {
        case SweepAxis::Temperature: return "temperature";
        case SweepAxis::Gamma3NRatio: return "gamma3N_ratio";
        default: return "tau";
    }
}

inline const char* to_string(SweepMode m) {
    return m == SweepMode::FixedRange ? "fixed_range" : "asymptotic";
}

inline SweepAxis sweep_axis_from_string(const std::string& s) {
    if (s == "temperature") return SweepAxis::Temperature;
    if (s == "gamma3N_ratio") return SweepAxis::Gamma3NRatio;
    if (s == "tau") return SweepAxis::Tau;
    throw config_error("unknown sweep axis '" + s + "' (expected temperature|gamma3N_ratio|tau)");
}

inline SweepMode sweep_mode_from_string(const std::string& s) {
    if (s == "fixed_range") return SweepMode::FixedRange;
    if (s == "asymptotic") return SweepMode::Asymptotic;
    throw config_error("unknown sweep mode '" + s + "' (expected fixed_range|asymptotic)");
}

inline PhysicalParams with_axis_value(PhysicalParams p, SweepAxis axis, double value) {
    switch (axis) {
        case SweepAxis::Temperature: p.temperature = value; break;
        case SweepAxis::Gamma3NRatio: p.gamma3N_ratio = value; break;
        case SweepAxis::Tau: p.tau = value; break;
    }
    return p;
}

struct EntropySeries {
    std::vector<double> ranges;
    std::vector<double> entropy;
    std::vector<int> grid_n;  // per-range grid size, constant point density
};

// Grid for a sub-window: same points-per-unit-detuning as the reference
// grid, kept even and at least 16.
inline int scaled_grid_n(const SpectralGridSpec& reference, double range) {
    const double scaled = reference.n * range / reference.range;
    int n = static_cast<int>(std::lround(scaled / 2.0)) * 2;
    return std::max(n, 16);
}

// S(R) on a ladder of spectral windows at fixed physics.
inline EntropySeries entropy_vs_range(const PhysicalParams& p, const std::vector<double>& ranges,
                                      const SpectralGridSpec& reference, Evaluator ev,
                                      int max_nodes = 2048) {
    if (ranges.size() < 2) throw contract_error("entropy_vs_range: need at least 2 ranges");
    const DerivedParams d = derive(p);
    EntropySeries out;
    out.ranges = ranges;
    for (double r : ranges) {
        SpectralGridSpec g{r, scaled_grid_n(reference, r)};
        const SpectralMatrix m = build_spectral_matrix(d, g, ev, max_nodes);
        out.entropy.push_back(entropy_bits(schmidt_decompose(m).lambdas));
        out.grid_n.push_back(g.n);
    }
    return out;
}

// default ladder for the asymptotic mode: 15 windows up to the reference range
inline std::vector<double> default_fit_ranges(double max_range, int count = 15) {
    std::vector<double> r(count);
    for (int k = 0; k < count; ++k) r[k] = max_range * (k + 1) / count;
    return r;
}

struct SweepRow {
    double axis_value = 0.0;
    double S = std::numeric_limits<double>::quiet_NaN();
    double a = std::numeric_limits<double>::quiet_NaN();
    double beta = std::numeric_limits<double>::quiet_NaN();
    double a_ci95 = std::numeric_limits<double>::quiet_NaN();
    double beta_ci95 = std::numeric_limits<double>::quiet_NaN();
    int grid_n = 0;
    double range = 0.0;
    bool ok = false;
    std::string message;  // failure description when !ok
};

struct SweepResult {
    SweepAxis axis = SweepAxis::Temperature;
    SweepMode mode = SweepMode::FixedRange;
    std::vector<SweepRow> rows;
};

// One entropy (or entropy asymptote) per axis value. A failing point is
// recorded with its message and the sweep continues; rows always come back
// in input order.
inline SweepResult run_sweep(const PhysicalParams& base, SweepAxis axis,
                             const std::vector<double>& values, SweepMode mode,
                             const SpectralGridSpec& grid, Evaluator ev, int max_nodes = 2048) {
    if (values.empty()) throw contract_error("run_sweep: no axis values");
    validate(grid);
    SweepResult result;
    result.axis = axis;
    result.mode = mode;
    for (double v : values) {
        SweepRow row;
        row.axis_value = v;
        row.grid_n = grid.n;
        row.range = grid.range;
        try {
            const PhysicalParams p = with_axis_value(base, axis, v);
            if (mode == SweepMode::FixedRange) {
                const SpectralMatrix m = build_spectral_matrix(derive(p), grid, ev, max_nodes);
                row.S = entropy_bits(schmidt_decompose(m).lambdas);
            } else {
                const EntropySeries series =
                    entropy_vs_range(p, default_fit_ranges(grid.range), grid, ev, max_nodes);
                const FitResult fit = fit_asymptote(series.ranges, series.entropy);
                row.S = series.entropy.back();
                row.a = fit.a;
                row.beta = fit.beta;
                row.a_ci95 = fit.a_ci95;
                row.beta_ci95 = fit.beta_ci95;
            }
            row.ok = true;
        } catch (const error& e) {
            row.message = e.what();
        }
        result.rows.push_back(row);
    }
    return result;
}

}

#endif
