#ifndef BIPHOTON_SPECFUN_HPP
#define BIPHOTON_SPECFUN_HPP

#include <cmath>
#include <complex>

#include "biphoton/constants.hpp"
#include "biphoton/errors.hpp"

// Complex special functions needed by the Doppler-broadened closed form:
// the Faddeeva function w(z) = exp(-z^2) erfc(-iz), the Dawson function
// D(z) = (sqrt(pi)/2) exp(-z^2) erfi(z), and the combination
// exp(-A^2) [pi erfi(A) + i pi] = i pi w(-A) evaluated without exp(+A^2).

namespace biphoton {

namespace detail {

inline void require_finite(std::complex<double> z, const char* fn) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
        throw domain_error(std::string(fn) + ": non-finite argument");
}

// w(x + iy) for x >= 0, y >= 0. Region-switched evaluation: a Maclaurin
// series near the origin, a pole-shifted truncated Taylor form in the
// mid-range, and the Laplace continued fraction far out. Relative accuracy
// is ~1e-13 over the quarter plane (verified against an arbitrary-precision
// series oracle in the test suite); contract is 1e-10.
inline std::complex<double> w_upper_quadrant(double x, double y) {
    const double factor = two_over_sqrt_pi;
    const double xs = x / 6.3;
    const double ys = y / 4.4;
    double qrho = xs * xs + ys * ys;
    const double xquad = x * x - y * y;
    const double yquad = 2.0 * x * y;
    double u, v;
    if (qrho < 0.085264) {
        // series: w(z) = sum_n (iz)^n / Gamma(n/2 + 1), summed as a pair of
        // real recurrences in z^2
        const double q = (1.0 - 0.85 * ys) * std::sqrt(qrho);
        const int n = static_cast<int>(std::lround(6.0 + 72.0 * q));
        int j = 2 * n + 1;
        double xsum = 1.0 / j;
        double ysum = 0.0;
        for (int i = n; i >= 1; --i) {
            j -= 2;
            const double xaux = (xsum * xquad - ysum * yquad) / i;
            ysum = (xsum * yquad + ysum * xquad) / i;
            xsum = xaux + 1.0 / j;
        }
        const double u1 = -factor * (xsum * y + ysum * x) + 1.0;
        const double v1 = factor * (xsum * x - ysum * y);
        const double daux = std::exp(-xquad);
        const double u2 = daux * std::cos(yquad);
        const double v2 = -daux * std::sin(yquad);
        u = u1 * u2 - v1 * v2;
        v = u1 * v2 + v1 * u2;
    } else {
        double h = 0.0, h2 = 0.0, qlambda = 0.0;
        int kapn = 0, nu;
        if (qrho > 1.0) {
            // continued fraction; depth shrinks as |z| grows
            const double q = std::sqrt(qrho);
            nu = static_cast<int>(3.0 + 1442.0 / (26.0 * q + 77.0));
        } else {
            // pole-shifted Taylor: h > 0 moves the expansion off the axis
            const double q = (1.0 - ys) * std::sqrt(1.0 - qrho);
            h = 1.88 * q;
            h2 = 2.0 * h;
            kapn = static_cast<int>(std::lround(7.0 + 34.0 * q));
            nu = static_cast<int>(std::lround(16.0 + 26.0 * q));
        }
        const bool shifted = h > 0.0;
        if (shifted) qlambda = std::pow(h2, kapn);
        double rx = 0.0, ry = 0.0, sx = 0.0, sy = 0.0;
        for (int n = nu; n >= 0; --n) {
            const double np1 = n + 1.0;
            const double tx = y + h + np1 * rx;
            const double ty = x - np1 * ry;
            const double c = 0.5 / (tx * tx + ty * ty);
            rx = c * tx;
            ry = c * ty;
            if (shifted && n <= kapn) {
                const double t = qlambda + sx;
                sx = rx * t - ry * sy;
                sy = ry * t + rx * sy;
                qlambda /= h2;
            }
        }
        if (shifted) {
            u = factor * sx;
            v = factor * sy;
        } else {
            u = factor * rx;
            v = factor * ry;
        }
        if (y == 0.0) u = std::exp(-x * x);
    }
    return {u, v};
}

// w(z) for Im(z) >= 0 via the quadrant routine and w(-conj(z)) = conj(w(z))
inline std::complex<double> w_upper_half(double x, double y) {
    const std::complex<double> w = w_upper_quadrant(std::fabs(x), y);
    return x >= 0.0 ? w : std::conj(w);
}

}

// w(z) = exp(-z^2) erfc(-iz). Stable for Im(z) >= 0; the lower half-plane
// goes through w(z) = 2 exp(-z^2) - w(-z), which inherits the exponential
// growth of exp(-z^2) and throws once that overflows. Physical call sites
// only need Im(z) >= 0.
inline std::complex<double> faddeeva(std::complex<double> z) {
    detail::require_finite(z, "faddeeva");
    const double x = z.real(), y = z.imag();
    if (y >= 0.0) return detail::w_upper_half(x, y);
    const double re_mz2 = y * y - x * x;  // Re(-z^2)
    if (re_mz2 > 700.0)
        throw numeric_error("faddeeva: reflection overflow for Im(z) < 0 at |Im| >> |Re|");
    const std::complex<double> e = std::exp(-z * z);
    return 2.0 * e - detail::w_upper_half(-x, -y);
}

// D(z) = (sqrt(pi)/2) exp(-z^2) erfi(z); odd entire function.
// Small |z| uses the Maclaurin series (the w-route cancels there); the real
// axis uses D(x) = (sqrt(pi)/2) Im w(x), which has no subtraction at all.
inline std::complex<double> dawson(std::complex<double> z) {
    detail::require_finite(z, "dawson");
    if (z.imag() < 0.0) return -dawson(-z);
    if (z.imag() == 0.0 && std::norm(z) > 1.0) {
        const double x = z.real();
        const std::complex<double> w = detail::w_upper_half(x, 0.0);
        return {0.5 * sqrt_pi * w.imag(), 0.0};
    }
    if (std::norm(z) <= 1.0) {
        // D(z) = sum_m (-1)^m 2^m z^(2m+1) / (2m+1)!!
        const std::complex<double> z2 = z * z;
        std::complex<double> term = z, sum = z;
        for (int m = 1; m <= 48; ++m) {
            term *= -2.0 * z2 / static_cast<double>(2 * m + 1);
            sum += term;
            if (std::abs(term) <= 1e-18 * std::abs(sum)) break;
        }
        return sum;
    }
    // Im z > 0, |z| > 1: no cancellation in exp(-z^2) - w(z)
    const std::complex<double> w = detail::w_upper_half(z.real(), z.imag());
    const std::complex<double> e = std::exp(-z * z);
    return std::complex<double>(0.0, 0.5 * sqrt_pi) * (e - w);
}

// exp(-A^2) [pi erfi(A) + i pi], the bracket of the closed-form Doppler
// average with its Gaussian prefactor attached. Never forms exp(+A^2):
// the identity exp(-A^2)[pi erfi(A) + i pi] = i pi w(-A) routes through the
// Faddeeva function, whose argument -A lies in the stable upper half-plane
// for every physical call site (Im A <= 0 there).
inline std::complex<double> erfi_kernel(std::complex<double> A) {
    detail::require_finite(A, "erfi_kernel");
    const std::complex<double> w = faddeeva(-A);
    return std::complex<double>(0.0, pi) * w;
}

}

#endif
