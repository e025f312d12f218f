#ifndef BIPHOTON_FIT_HPP
#define BIPHOTON_FIT_HPP

#include <boost/math/distributions/students_t.hpp>
#include <cmath>
#include <vector>

#include "biphoton/errors.hpp"

// Least-squares fit of the saturating model S(R) = a (1 - exp(-beta R)) by
// damped Gauss-Newton, with 95% marginal confidence half-widths from the
// t distribution on n-2 degrees of freedom.

namespace biphoton {

struct FitResult {
    double a = 0.0;
    double beta = 0.0;
    double a_ci95 = 0.0;     // +- half-width of the 95% interval
    double beta_ci95 = 0.0;  // +- half-width of the 95% interval
    int iterations = 0;
    double rms_residual = 0.0;
    bool ci_warning = false;  // a_ci95 exceeds 10% of a
};

namespace detail {

struct NormalEq {
    double h00 = 0, h01 = 0, h11 = 0;  // J^T J
    double g0 = 0, g1 = 0;             // J^T r
    double cost = 0;                   // |r|^2
};

inline NormalEq fit_normal_equations(const std::vector<double>& R, const std::vector<double>& S,
                                     double a, double beta) {
    NormalEq ne;
    for (std::size_t i = 0; i < R.size(); ++i) {
        const double e = std::exp(-beta * R[i]);
        const double j0 = 1.0 - e;          // d model / d a
        const double j1 = a * R[i] * e;     // d model / d beta
        const double r = S[i] - a * j0;
        ne.h00 += j0 * j0;
        ne.h01 += j0 * j1;
        ne.h11 += j1 * j1;
        ne.g0 += j0 * r;
        ne.g1 += j1 * r;
        ne.cost += r * r;
    }
    return ne;
}

inline double fit_cost(const std::vector<double>& R, const std::vector<double>& S, double a,
                       double beta) {
    double cost = 0.0;
    for (std::size_t i = 0; i < R.size(); ++i) {
        const double r = S[i] - a * (1.0 - std::exp(-beta * R[i]));
        cost += r * r;
    }
    return cost;
}

}

inline FitResult fit_asymptote(const std::vector<double>& R, const std::vector<double>& S) {
    const std::size_t n = R.size();
    if (n != S.size()) throw contract_error("fit_asymptote: R and S length mismatch");
    if (n < 4) throw contract_error("fit_asymptote: need at least 4 points");
    for (std::size_t i = 0; i < n; ++i)
        if (!std::isfinite(R[i]) || !std::isfinite(S[i]))
            throw contract_error("fit_asymptote: non-finite input");
    double smin = S[0], smax = S[0];
    for (double s : S) {
        smin = std::min(smin, s);
        smax = std::max(smax, s);
    }
    // a flat series satisfies the model for any beta; refuse the ridge
    if (smax - smin <= 1e-12 * std::max(std::fabs(smax), 1.0))
        throw fit_error("fit_asymptote: flat series has no identifiable decay rate", smax, 0.0,
                        0);

    // start at the largest observation; the log-slope between the first and
    // last points seeds beta, clamped because S_max / a0 = 1 exactly
    double a = S[0];
    for (double s : S) a = std::max(a, s);
    double beta;
    {
        const double q1 = std::max(1.0 - S.front() / a, 1e-12);
        const double q2 = std::max(1.0 - S.back() / a, 1e-12);
        beta = (std::log(q1) - std::log(q2)) / (R.back() - R.front());
        if (!std::isfinite(beta) || beta <= 0.0) {
            double rbar = 0.0;
            for (double r : R) rbar += r;
            beta = n / rbar;
        }
    }

    double mu = 1e-3;
    double cost = detail::fit_cost(R, S, a, beta);
    int iter = 0;
    bool converged = false;
    for (; iter < 200 && !converged; ++iter) {
        const detail::NormalEq ne = detail::fit_normal_equations(R, S, a, beta);
        const double hscale = std::max(ne.h00, ne.h11);
        if (!(hscale > 0.0) || ne.h00 <= 1e-28 * hscale || ne.h11 <= 1e-28 * hscale)
            throw fit_error("fit_asymptote: rank-deficient jacobian, series carries no "
                            "saturating structure",
                            a, beta, iter);
        // damped normal equations (J^T J + mu diag(J^T J)) step = J^T r
        const double d00 = ne.h00 * (1.0 + mu);
        const double d11 = ne.h11 * (1.0 + mu);
        const double det = d00 * d11 - ne.h01 * ne.h01;
        if (!(std::fabs(det) > 1e-300))
            throw fit_error("fit_asymptote: singular normal equations", a, beta, iter);
        const double da = (d11 * ne.g0 - ne.h01 * ne.g1) / det;
        const double db = (d00 * ne.g1 - ne.h01 * ne.g0) / det;
        const double trial_cost = detail::fit_cost(R, S, a + da, beta + db);
        if (trial_cost <= cost) {
            a += da;
            beta += db;
            cost = trial_cost;
            mu = std::max(mu / 3.0, 1e-12);
            const double step = std::sqrt(da * da + db * db);
            const double scale = std::sqrt(a * a + beta * beta) + 1e-300;
            if (step / scale < 1e-10) converged = true;
        } else {
            mu *= 10.0;
            if (mu > 1e12)
                throw fit_error("fit_asymptote: damping exhausted without progress", a, beta,
                                iter);
        }
    }
    if (!converged)
        throw fit_error("fit_asymptote: no convergence within 200 iterations", a, beta, iter);

    FitResult out;
    out.a = a;
    out.beta = beta;
    out.iterations = iter;

    const detail::NormalEq ne = detail::fit_normal_equations(R, S, a, beta);
    const double det = ne.h00 * ne.h11 - ne.h01 * ne.h01;
    if (!(std::fabs(det) > 1e-300))
        throw fit_error("fit_asymptote: singular covariance at the optimum", a, beta, iter);
    const double dof = static_cast<double>(n) - 2.0;
    const double s2 = ne.cost / dof;
    out.rms_residual = std::sqrt(ne.cost / static_cast<double>(n));
    const boost::math::students_t dist(dof);
    const double t = boost::math::quantile(dist, 0.975);
    out.a_ci95 = t * std::sqrt(std::max(s2 * ne.h11 / det, 0.0));
    out.beta_ci95 = t * std::sqrt(std::max(s2 * ne.h00 / det, 0.0));
    out.ci_warning = out.a_ci95 > 0.10 * std::fabs(a);
    return out;
}

}

#endif
