#pragma once

#include <cmath>
#include <complex>
#include <limits>
#include <numbers>

#include "qoct/errors.hpp"

namespace qoct::special {

/// Faddeeva function w(z) = exp(-z^2) erfc(-i z).
///
/// Poppe & Wijers (ACM TOMS 680): power series near the origin, Laplace
/// continued fraction far away, and the Gautschi-style truncated Taylor
/// blend in between. About 14 significant digits over the whole plane;
/// the lower half plane is reached through w(z) = 2 exp(-z^2) - w(-z).
inline std::complex<double> faddeeva(std::complex<double> z) {
    constexpr double factor = 1.12837916709551257388; // 2/sqrt(pi)
    constexpr double rmaxreal = 0.5e154;
    constexpr double rmaxexp = 708.503061461606;
    constexpr double rmaxgoni = 3.53711887601422e15;

    const double xi = z.real();
    const double yi = z.imag();
    const double xabs = std::abs(xi);
    const double yabs = std::abs(yi);
    if (xabs > rmaxreal || yabs > rmaxreal) throw InvalidArgument("faddeeva: argument overflow");

    const double x = xabs / 6.3;
    const double y = yabs / 4.4;
    double qrho = x * x + y * y;
    const double xabsq = xabs * xabs;
    double xquad = xabsq - yabs * yabs;
    const double yquad = 2.0 * xabs * yabs;

    double u = 0.0;
    double v = 0.0;
    double u2 = 0.0;
    double v2 = 0.0;
    const bool near_origin = qrho < 0.085264;

    if (near_origin) {
        qrho = (1.0 - 0.85 * y) * std::sqrt(qrho);
        const int n = static_cast<int>(std::lround(6.0 + 72.0 * qrho));
        int j = 2 * n + 1;
        double xsum = 1.0 / j;
        double ysum = 0.0;
        for (int i = n; i >= 1; --i) {
            j -= 2;
            const double xaux = (xsum * xquad - ysum * yquad) / i;
            ysum = (xsum * yquad + ysum * xquad) / i;
            xsum = xaux + 1.0 / j;
        }
        const double u1 = -factor * (xsum * yabs + ysum * xabs) + 1.0;
        const double v1 = factor * (xsum * xabs - ysum * yabs);
        const double daux = std::exp(-xquad);
        u2 = daux * std::cos(yquad);
        v2 = -daux * std::sin(yquad);
        u = u1 * u2 - v1 * v2;
        v = u1 * v2 + v1 * u2;
    } else {
        double h = 0.0;
        double h2 = 0.0;
        int kapn = 0;
        int nu = 0;
        if (qrho > 1.0) {
            qrho = std::sqrt(qrho);
            nu = static_cast<int>(3.0 + 1442.0 / (26.0 * qrho + 77.0));
        } else {
            qrho = (1.0 - y) * std::sqrt(1.0 - qrho);
            h = 1.88 * qrho;
            h2 = 2.0 * h;
            kapn = static_cast<int>(std::lround(7.0 + 34.0 * qrho));
            nu = static_cast<int>(std::lround(16.0 + 26.0 * qrho));
        }
        const bool use_taylor = h > 0.0;
        double qlambda = use_taylor ? std::pow(h2, kapn) : 0.0;

        double rx = 0.0, ry = 0.0, sx = 0.0, sy = 0.0;
        for (int n = nu; n >= 0; --n) {
            const double np1 = n + 1.0;
            double tx = yabs + h + np1 * rx;
            const double ty = xabs - np1 * ry;
            const double c = 0.5 / (tx * tx + ty * ty);
            rx = c * tx;
            ry = c * ty;
            if (use_taylor && n <= kapn) {
                tx = qlambda + sx;
                sx = rx * tx - ry * sy;
                sy = ry * tx + rx * sy;
                qlambda /= h2;
            }
        }
        if (h == 0.0) {
            u = factor * rx;
            v = factor * ry;
        } else {
            u = factor * sx;
            v = factor * sy;
        }
        if (yabs == 0.0) u = std::exp(-xabs * xabs);
    }

    if (yi < 0.0) {
        if (near_origin) {
            u2 *= 2.0;
            v2 *= 2.0;
        } else {
            xquad = -xquad;
            if (yquad > rmaxgoni || xquad > rmaxexp) throw InvalidArgument("faddeeva: result overflow");
            const double w1 = 2.0 * std::exp(xquad);
            u2 = w1 * std::cos(yquad);
            v2 = -w1 * std::sin(yquad);
        }
        u = u2 - u;
        v = v2 - v;
        if (xi > 0.0) v = -v;
    } else if (xi < 0.0) {
        v = -v;
    }
    return {u, v};
}

/// Complex error function. Uses the Maclaurin series for |z| < 0.5 (where
/// 1 - exp(-z^2) w(iz) cancels) and the Faddeeva function elsewhere.
inline std::complex<double> erf(std::complex<double> z) {
    if (std::abs(z) < 0.5) {
        const std::complex<double> z2 = z * z;
        std::complex<double> term = z;
        std::complex<double> sum = z;
        for (int n = 1; n < 40; ++n) {
            term *= -z2 / static_cast<double>(n);
            const std::complex<double> add = term / static_cast<double>(2 * n + 1);
            sum += add;
            if (std::abs(add) <= std::numeric_limits<double>::epsilon() * std::abs(sum)) break;
        }
        return 2.0 / std::sqrt(std::numbers::pi) * sum;
    }
    // erf is odd; keep the Faddeeva argument i*z in the closed upper half plane.
    if (z.real() < 0.0) return -erf(-z);
    const std::complex<double> iz{-z.imag(), z.real()};
    return 1.0 - std::exp(-z * z) * faddeeva(iz);
}

} // namespace qoct::special
