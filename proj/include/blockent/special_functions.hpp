#pragma once

#include <cmath>
#include <complex>
#include <limits>
#include <numbers>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "errors.hpp"

namespace blockent {

using cd = std::complex<double>;
inline constexpr double pi = std::numbers::pi;

// Complete elliptic integral of the first kind with modulus z,
// I(z) = int_0^1 dy / sqrt((1-y^2)(1-z^2 y^2)), via the AGM.
inline double elliptic_K(double z) {
    if (!(z >= 0.0) || z >= 1.0) throw DomainError("elliptic_K needs 0 <= z < 1, got " + std::to_string(z));
    double a = 1.0, b = std::sqrt((1.0 - z) * (1.0 + z));
    for (int it = 0; it < 64 && std::abs(a - b) > 1e-16 * a; ++it) {
        double an = 0.5 * (a + b);
        b = std::sqrt(a * b);
        a = an;
    }
    return pi / (a + b);
}

// log Gamma(z) for Re z > 0, continuous in Im z (no 2 pi i jumps).
inline cd lgamma_complex(cd z) {
    if (z.real() <= 0.0) throw DomainError("lgamma_complex needs Re z > 0");
    cd shift = 0.0;
    while (z.real() < 15.0) {
        shift += std::log(z);
        z += 1.0;
    }
    static constexpr double c[] = {1.0 / 12.0,         -1.0 / 360.0,     1.0 / 1260.0,
                                   -1.0 / 1680.0,      1.0 / 1188.0,     -691.0 / 360360.0,
                                   1.0 / 156.0,        -3617.0 / 122400.0};
    cd zi = 1.0 / z, zi2 = zi * zi, term = zi, series = 0.0;
    for (double ck : c) {
        series += ck * term;
        term *= zi2;
    }
    return (z - 0.5) * std::log(z) - z + 0.5 * std::log(2.0 * pi) + series - shift;
}

// S_zeta(theta) = sum_{l>=1} sin(l theta) / l^zeta from
// (sin theta / (2 Gamma(zeta))) int_0^inf t^(zeta-1) / (cosh t - cos theta) dt.
inline double polylog_sine(double zeta, double theta, double tol = 1e-14) {
    if (!(zeta > 0.0)) throw DomainError("polylog order must be positive");
    theta = std::remainder(theta, 2.0 * pi);
    if (theta == 0.0) {
        if (zeta <= 1.0) throw DivergentPoint("sine series at theta = 0 with zeta <= 1");
        return 0.0;
    }
    const double st = std::sin(theta);
    if (st == 0.0) return 0.0;
    const double s2 = std::sin(0.5 * theta);
    const double s2sq = s2 * s2;
    // t = a u concentrates the peak near u ~ 1 when theta is small
    const double a = 2.0 * std::abs(s2);
    auto g = [&](double u) -> double {
        double t = a * u;
        if (t > 1400.0) return 0.0;
        double sh = std::sinh(0.5 * t);
        double den = 2.0 * (sh * sh + s2sq);
        return std::exp((zeta - 1.0) * std::log(u)) / den;
    };
    static thread_local boost::math::quadrature::exp_sinh<double> integrator;
    double err = 0.0;
    double v = integrator.integrate(g, tol, &err);
    return st * std::pow(a, zeta) * v / (2.0 * std::tgamma(zeta));
}

// sum_{l=1}^{n} w_l sin(l theta) with Kahan compensation.
template <class Weights>
double kahan_sine_sum(const Weights& w, std::size_t n, double theta) {
    double sum = 0.0, comp = 0.0;
    for (std::size_t l = 1; l <= n; ++l) {
        double y = w(l) * std::sin(double(l) * theta) - comp;
        double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    return sum;
}

}  // namespace blockent
