#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <map>
#include <mutex>
#include <utility>
#include <vector>

#include "chain_model.hpp"
#include "errors.hpp"
#include "quadrature.hpp"
#include "renyi_kernel.hpp"
#include "special_functions.hpp"
#include "symbol_analysis.hpp"

namespace blockent {

struct EllipticData {
    double x = 0.0;
    DmRegion region = DmRegion::Boundary;
};

inline EllipticData elliptic_data(const DmParams& p) { return {dm_x(p), dm_region(p)}; }

// Von Neumann entropy of the gapped regions as a function of x alone.
inline double s1_noncritical(double x, DmRegion region) {
    auto I = elliptic_K;
    switch (region) {
        case DmRegion::R1a:
        case DmRegion::R1b: {
            if (region == DmRegion::R1a && !(x > 0.0 && x < 1.0)) throw RegionMismatch("1a needs 0 < x < 1");
            if (region == DmRegion::R1b && !(x > 1.0)) throw RegionMismatch("1b needs x > 1");
            double y = region == DmRegion::R1a ? x : 1.0 / x;
            return (std::log((1.0 - y) / (16.0 * std::sqrt(y))) +
                    2.0 * (1.0 + y) / pi * I(std::sqrt(1.0 - y)) * I(std::sqrt(y))) /
                       6.0 +
                   std::log(2.0);
        }
        case DmRegion::R2: {
            if (!(x < 0.0)) throw RegionMismatch("2 needs x < 0");
            double q = 2.0 - x - 1.0 / x;
            return (std::log(16.0 * q) +
                    4.0 * (x - 1.0 / x) / (pi * q) * I(1.0 / std::sqrt(1.0 - x)) * I(1.0 / std::sqrt(1.0 - 1.0 / x))) /
                   12.0;
        }
        default:
            throw RegionMismatch("s1_noncritical covers regions 1a, 1b and 2 only");
    }
}

struct IAlphaResult {
    double value = 0.0;
    double imag_residue = 0.0;
};

// (1/(pi i)) int_{-1}^{1} f_alpha'(1, lambda) log[Gamma(1/2 - beta)/Gamma(1/2 + beta)] dlambda,
// beta taken as the principal value on the cut, beta = -i w, lambda = tanh(pi w).
inline IAlphaResult i_alpha_detail(double alpha, double quad_tol) {
    if (!(alpha > 0.0)) throw DomainError("alpha must be positive");
    // the integrand decays like w exp(-2 pi min(alpha, 1) w)
    const double upper = 8.0 / std::min(alpha, 1.0);
    auto res = quad::integrate(
        [&](double w, cd* out) {
            cd ratio = lgamma_complex(cd(0.5, w)) - lgamma_complex(cd(0.5, -w));
            // f'(lambda) dlambda = pi df_alpha_sech2 dw, even in w
            out[0] = 2.0 * df_alpha_sech2(alpha, w) * pi * ratio / cd(0.0, pi);
        },
        1, 0.0, upper, quad_tol, 8);
    if (!std::isfinite(res.value[0].real())) throw QuadratureFailure("I_alpha integral did not converge");
    return {res.value[0].real(), res.value[0].imag()};
}

inline double i_alpha_constant(double alpha, double quad_tol = 1e-12) {
    static std::mutex mu;
    static std::map<std::pair<double, double>, double> cache;
    {
        std::lock_guard<std::mutex> lock(mu);
        auto it = cache.find({alpha, quad_tol});
        if (it != cache.end()) return it->second;
    }
    double v = i_alpha_detail(alpha, quad_tol).value;
    std::lock_guard<std::mutex> lock(mu);
    cache[{alpha, quad_tol}] = v;
    return v;
}

// Essential critical point (gamma = 0, h = 2): the symbol is scalar with a Fermi
// arc of half-width k_F, sin k_F = s / sqrt(1 + s^2), so
// S = ((a+1)/(6a)) log(2|X| sin k_F) + I_a = ((a+1)/(12a)) log(4 s^2 |X|^2 / (1+s^2)) + I_a.
inline double essential_point_entropy(double alpha, double s, double sizeX) {
    if (s == 0.0) throw DomainError("essential point needs s != 0");
    if (!(sizeX >= 1.0)) throw DomainError("sizeX must be >= 1");
    return (alpha + 1.0) / (12.0 * alpha) * std::log(4.0 * s * s * sizeX * sizeX / (1.0 + s * s)) +
           i_alpha_constant(alpha);
}

// Kramers-Wannier self-dual point gamma = 1, h = 2.
inline double selfdual_entropy(double s, double sizeX) {
    if (!(sizeX >= 1.0)) throw DomainError("sizeX must be >= 1");
    const double I1 = i_alpha_constant(1.0);
    if (std::abs(s) > 1.0)
        return std::log(2.0 * sizeX) / 3.0 + std::log(1.0 - 1.0 / (s * s)) / 12.0 + I1;
    return std::log(4.0 * sizeX) / 6.0 + 0.5 * I1;
}

inline cd genus1_theta(cd s, cd Pi, double tol = 1e-16) {
    if (!(Pi.imag() > 0.0)) throw NonConvergent("theta series needs Im Pi > 0");
    const cd ipi(0.0, pi);
    cd sum = 1.0;
    for (int n = 1; n < 100000; ++n) {
        double dn = n;
        cd q = std::exp(ipi * dn * dn * Pi);
        cd t = q * (std::exp(2.0 * ipi * dn * s) + std::exp(-2.0 * ipi * dn * s));
        sum += t;
        if (std::abs(t) < tol * std::abs(sum) && std::abs(q) < tol) return sum;
    }
    throw NonConvergent("theta series did not converge");
}

struct Genus1Surface {
    std::vector<cd> branchPoints;   // roots of P, infinite ones omitted
    cd periodMatrix = 0.0;
    cd tau = 0.0;
    double e = 1.0;
    int firstFactorInside = 0;      // roots of z (Phi^S + Xi) inside the unit circle
};

namespace detail {

inline std::vector<cd> quadratic_roots(cd a, cd b, cd c) {
    if (std::abs(a) < 1e-14 * (std::abs(b) + std::abs(c))) {
        if (std::abs(b) < 1e-300) return {};
        return {-c / b};
    }
    cd d = std::sqrt(b * b - 4.0 * a * c);
    cd q = -0.5 * (b + (std::real(std::conj(b) * d) >= 0.0 ? d : -d));
    std::vector<cd> r;
    r.push_back(q / a);
    r.push_back(std::abs(q) > 1e-300 ? c / q : cd(0.0));
    return r;
}

// int dz / sqrt(P(z)) along the straight segment [a, b]. When a and b are roots of P,
// z = a + (b - a)(1 - cos phi)/2 removes the inverse square-root end points.
inline cd segment_period(const std::vector<cd>& roots, cd lead, cd a, cd b, bool endpoints_are_roots) {
    const auto& r = quad::GK15::get();
    const int panels = 96;
    cd sum = 0.0, prev = 0.0;
    bool have = false;
    auto cont_sqrt = [&](cd v) {
        cd s = std::sqrt(v);
        if (have && std::abs(s + prev) < std::abs(s - prev)) s = -s;
        prev = s;
        have = true;
        return s;
    };
    for (int p = 0; p < panels; ++p) {
        double lo = (endpoints_are_roots ? pi : 1.0) * p / panels;
        double hi = (endpoints_are_roots ? pi : 1.0) * (p + 1) / panels;
        double c = 0.5 * (lo + hi), h = 0.5 * (hi - lo);
        for (int i = 0; i < 15; ++i) {
            double u = c + h * r.x[i];
            cd val;
            if (endpoints_are_roots) {
                cd z = a + (b - a) * (1.0 - std::cos(u)) / 2.0;
                cd rest = lead;
                int skipped = 0;
                for (const auto& root : roots) {
                    if (skipped < 2 && (std::abs(root - a) < 1e-15 * (1 + std::abs(a)) ||
                                        std::abs(root - b) < 1e-15 * (1 + std::abs(b)))) {
                        ++skipped;
                        continue;
                    }
                    rest *= (z - root);
                }
                // sqrt((z-a)(z-b)) = i (b-a) sin(phi)/2 and dz = (b-a) sin(phi)/2 dphi
                val = 1.0 / (cd(0.0, 1.0) * cont_sqrt(rest));
            } else {
                cd z = a + (b - a) * u;
                cd pz = lead;
                for (const auto& root : roots) pz *= (z - root);
                val = (b - a) / cont_sqrt(pz);
            }
            sum += r.wk[i] * h * val;
        }
    }
    return sum;
}

}  // namespace detail

// Riemann surface w^2 = P(z) = (q1 z^2 + a0 z + q0)(q0 z^2 + a0 z + q1),
// q1 = Re A_1 + B_1, q0 = Re A_1 - B_1, for a smooth L = 1 symbol with real pairing.
inline Genus1Surface genus1_surface(const CouplingSet& c0) {
    CouplingSet c = validate(c0, true);
    if (c.L != 1 || c.analytic_pairing()) throw DomainError("genus-1 surface needs L = 1");
    if (std::abs(c.B[1].imag()) > 1e-12) throw DomainError("pairing must be real after phase normalization");
    const double a0 = c.A[0].real(), a1 = c.A[1].real(), b1 = c.B[1].real();
    auto r1 = detail::quadratic_roots(a1 + b1, a0, a1 - b1);
    auto r2 = detail::quadratic_roots(a1 - b1, a0, a1 + b1);
    Genus1Surface g;
    std::vector<cd> roots = r1;
    roots.insert(roots.end(), r2.begin(), r2.end());
    for (std::size_t i = 0; i < roots.size(); ++i)
        for (std::size_t j = i + 1; j < roots.size(); ++j)
            if (std::abs(roots[i] - roots[j]) < 1e-8) throw DegenerateRoots("P(z) has a near-double root");
    g.branchPoints = roots;
    for (const auto& z : r1)
        if (std::abs(z) < 1.0) ++g.firstFactorInside;
    // leading coefficient of the product of the two quadratics
    cd lead = 1.0;
    if (r1.size() == 2) lead *= (a1 + b1);
    else lead *= a0;
    if (r2.size() == 2) lead *= (a1 - b1);
    else lead *= a0;

    std::vector<cd> inside, outside;
    for (const auto& z : roots) (std::abs(z) < 1.0 ? inside : outside).push_back(z);
    if (inside.size() != 2) throw NotSmooth("expected two branch points inside the unit circle");
    cd A = 2.0 * detail::segment_period(roots, lead, inside[0], inside[1], true);
    // b-cycle: radial segment from the larger inside branch point p to 1/conj(p),
    // which is a branch point of the outer cut on the same ray
    cd p = std::abs(inside[0]) > std::abs(inside[1]) ? inside[0] : inside[1];
    if (std::abs(inside[0]) == std::abs(inside[1]) && inside[1].imag() > inside[0].imag()) p = inside[1];
    cd B = 2.0 * detail::segment_period(roots, lead, p, 1.0 / std::conj(p), true);
    cd Pi = B / A;
    if (Pi.imag() < 0.0) Pi = -Pi;
    if (!(Pi.imag() > 0.0)) throw NonConvergent("period ratio has no positive imaginary part");
    g.periodMatrix = Pi;
    g.tau = (g.firstFactorInside == 1) ? cd(0.0) : Pi;
    return g;
}

inline cd beta_of(cd lam) {
    if (on_cut(lam)) throw BranchCut("lambda on [-1, 1]");
    return std::log((lam + 1.0) / (lam - 1.0)) / cd(0.0, 2.0 * pi);
}

inline void require_smooth(const CouplingSet& c) {
    auto ds = find_discontinuities(c);
    if (!ds.list.empty() || !ds.tangential.empty()) throw NotSmooth("ground-state symbol has discontinuities");
    if (tag_of(symbol_slice(c, 0.3)) != Tag::M) throw NotSmooth("ground state has a Dirac sea");
}

inline double genus1_determinant_asymptotic(const CouplingSet& c, cd lam, double sizeX) {
    require_smooth(c);
    Genus1Surface g = genus1_surface(c);
    cd b = beta_of(lam);
    cd th = genus1_theta(b * g.e + 0.5 * g.tau, g.periodMatrix) * genus1_theta(b * g.e - 0.5 * g.tau, g.periodMatrix) /
            std::pow(genus1_theta(0.5 * g.tau, g.periodMatrix), 2);
    return (sizeX * std::log(lam * lam - 1.0) + std::log(th)).real();
}

// Saturated entropy from the zeros of the theta quotient, for a purely imaginary period.
inline double genus1_entropy(const CouplingSet& c, double alpha) {
    Genus1Surface g = genus1_surface(c);
    if (std::abs(g.periodMatrix.real()) > 1e-10) throw DomainError("period ratio is not purely imaginary");
    const double m = g.periodMatrix.imag();
    const double shift = g.firstFactorInside == 1 ? 0.5 : 0.0;
    double s = 0.0;
    for (int n = 0; n < 100000; ++n) {
        double term = 0.0;
        for (double sgn : {1.0, -1.0}) {
            double k = sgn * (n + shift);
            if (n == 0 && shift == 0.0 && sgn < 0) continue;
            term += f_alpha(alpha, 1.0, std::tanh(pi * k * m));
        }
        s += term;
        if (n > 0 && term < 1e-17) break;
    }
    return s;
}

}  // namespace blockent
