#pragma once

#include <cmath>
#include <complex>

#include "errors.hpp"
#include "special_functions.hpp"

namespace blockent {

// f_alpha(x, y) = log(((x+y)/2)^alpha + ((x-y)/2)^alpha) / (1 - alpha),
// with the von Neumann limit at alpha = 1.
inline double f_alpha(double alpha, double x, double y) {
    if (!(alpha > 0.0)) throw DomainError("alpha must be positive");
    double p = 0.5 * (x + y), q = 0.5 * (x - y);
    if (p < 0.0 || q < 0.0) throw DomainError("f_alpha needs (x +- y)/2 >= 0");
    if (p == 0.0 && q == 0.0) throw DomainError("f_alpha undefined at x = y = 0");
    if (alpha == 1.0) {
        double s = 0.0;
        if (p > 0.0) s -= p * std::log(p);
        if (q > 0.0) s -= q * std::log(q);
        return s;
    }
    return std::log(std::pow(p, alpha) + std::pow(q, alpha)) / (1.0 - alpha);
}

// Principal-branch continuation in the second argument, for contour work.
inline cd f_alpha_complex(double alpha, double x, cd lam) {
    cd p = 0.5 * (x + lam), q = 0.5 * (x - lam);
    if (alpha == 1.0) return -p * std::log(p) - q * std::log(q);
    return std::log(std::pow(p, alpha) + std::pow(q, alpha)) / (1.0 - alpha);
}

// d f_alpha(x, lambda) / d lambda for real lambda with |lambda| < x.
inline double df_alpha(double alpha, double x, double lam) {
    double p = 0.5 * (x + lam), q = 0.5 * (x - lam);
    if (alpha == 1.0) return 0.5 * std::log(q / p);
    return alpha / (2.0 * (1.0 - alpha)) * (std::pow(p, alpha - 1.0) - std::pow(q, alpha - 1.0)) /
           (std::pow(p, alpha) + std::pow(q, alpha));
}

// f_alpha'(1, tanh(pi w)) * sech^2(pi w), written in r = exp(-2 pi |w|) so
// that nothing overflows as tanh(pi w) -> 1. Odd in w.
inline double df_alpha_sech2(double alpha, double w) {
    double aw = std::abs(w);
    double r = std::exp(-2.0 * pi * aw);
    double v;
    if (alpha == 1.0) {
        v = -4.0 * pi * aw * r / ((1.0 + r) * (1.0 + r));
    } else {
        double ra = std::exp(-2.0 * pi * aw * alpha);
        double diff = (std::abs(1.0 - alpha) < 1e-4)
                          ? -r * std::expm1(2.0 * pi * aw * (1.0 - alpha))
                          : r - ra;
        v = 2.0 * alpha / (1.0 - alpha) * diff / ((1.0 + ra) * (1.0 + r));
    }
    return w < 0.0 ? -v : v;
}

}  // namespace blockent
