#pragma once

#include <cmath>
#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "errors.hpp"
#include "special_functions.hpp"

namespace blockent {

// Pairing rule B_l = l^(-zeta) of the long-range Kitaev chain.
struct LongRange {
    double zeta = 1.0;
    bool analytic = true;   // thermodynamic polylog; otherwise truncated at l_max
    int l_max = 10000;
};

// Hopping A_0..A_L (A_{-l} = conj A_l) and pairing B_1..B_L (B_{-l} = -B_l).
// B[0] is kept as a zero placeholder so that B[l] is the l-th amplitude.
struct CouplingSet {
    int L = 1;
    std::vector<cd> A{0.0, 0.0};
    std::vector<cd> B{0.0, 0.0};
    double psi = 0.0;
    std::optional<LongRange> long_range;

    bool analytic_pairing() const { return long_range && long_range->analytic; }
};

struct SymbolSlice {
    double theta = 0.0;
    double F = 0.0, FS = 0.0, FA = 0.0;
    cd G = 0.0;
    double LambdaS = 0.0, Lambda = 0.0;
    double tail_bound = 0.0;  // truncated long-range pairing only
};

struct DmParams {
    double t = 1.0, gamma = 0.0, s = 0.0, h = 0.0;
};

struct KitaevParams {
    double h = 0.0;
    double zeta = 1.0;
    bool analytic = true;
    int l_max = 10000;
};

inline constexpr double truncation_warning_level = 1e-12;

// Checks the encoding invariants. With normalize_phase, a common phase of the
// pairing amplitudes is rotated away (a_n -> e^{i psi/4} a_n) and recorded in psi.
inline CouplingSet validate(CouplingSet c, bool normalize_phase = false) {
    if (c.L < 1) throw NonPositiveRange("range L must be >= 1, got " + std::to_string(c.L));
    if (c.A.empty()) throw InvalidArgument("hopping list is empty");
    if (std::abs(c.A[0].imag()) > 1e-14) throw NonRealA0("Im A_0 = " + std::to_string(c.A[0].imag()));
    c.A[0] = c.A[0].real();
    if (!c.analytic_pairing()) {
        c.A.resize(std::size_t(c.L) + 1, 0.0);
        c.B.resize(std::size_t(c.L) + 1, 0.0);
    } else {
        c.A.resize(std::max<std::size_t>(c.A.size(), 2), 0.0);
    }
    if (!c.B.empty()) c.B[0] = 0.0;
    if (normalize_phase) {
        double phase = 0.0;
        bool have = false, common = true;
        for (std::size_t l = 1; l < c.B.size(); ++l) {
            if (std::abs(c.B[l]) < 1e-300) continue;
            double ph = std::arg(c.B[l]);
            if (!have) {
                phase = ph;
                have = true;
            } else if (std::abs(std::sin(ph - phase)) > 1e-12) {
                common = false;
            }
        }
        if (have && common && std::abs(std::sin(phase)) > 0.0) {
            cd rot = std::polar(1.0, -phase);
            for (auto& b : c.B) b *= rot;
            c.psi = std::remainder(c.psi - 2.0 * phase, 2.0 * pi);
            for (auto& b : c.B) b = b.real();
        }
    }
    return c;
}

// Tail of the truncated pairing series, bounded by the Dirichlet test.
inline double pairing_tail_bound(const LongRange& lr, double theta) {
    double s = std::abs(std::sin(0.5 * theta));
    if (s == 0.0) return std::numeric_limits<double>::infinity();
    return std::pow(double(lr.l_max) + 1.0, -lr.zeta) / s;
}

inline SymbolSlice symbol_slice(const CouplingSet& c, double theta) {
    SymbolSlice sl;
    sl.theta = theta;
    const std::size_t na = c.A.size();
    double fs = c.A[0].real(), fa = 0.0;
    for (std::size_t l = 1; l < na; ++l) {
        double cl = std::cos(double(l) * theta), sn = std::sin(double(l) * theta);
        fs += 2.0 * c.A[l].real() * cl;
        fa -= 2.0 * c.A[l].imag() * sn;
    }
    cd g = 0.0;
    if (c.analytic_pairing()) {
        g = cd(0.0, 2.0 * polylog_sine(c.long_range->zeta, theta));
    } else if (c.long_range) {
        const double z = c.long_range->zeta;
        double s = kahan_sine_sum([z](std::size_t l) { return std::pow(double(l), -z); },
                                  std::size_t(c.long_range->l_max), theta);
        g = cd(0.0, 2.0 * s);
        sl.tail_bound = pairing_tail_bound(*c.long_range, theta);
    } else {
        for (std::size_t l = 1; l < c.B.size(); ++l) g += 2.0 * c.B[l] * std::sin(double(l) * theta);
        g *= cd(0.0, 1.0);
    }
    sl.FS = fs;
    sl.FA = fa;
    sl.F = fs + fa;
    sl.G = g;
    sl.LambdaS = std::hypot(fs, std::abs(g));
    sl.Lambda = sl.LambdaS + fa;
    return sl;
}

inline double theta_k(std::size_t k, std::size_t N) {
    return std::remainder(2.0 * pi * double(k) / double(N), 2.0 * pi);
}

inline double energy_offset(const CouplingSet& c, std::size_t N) {
    if (!c.analytic_pairing() && N <= std::size_t(2 * c.L))
        throw InvalidArgument("energy_offset needs N > 2L");
    double e = 0.0;
    for (std::size_t k = 0; k < N; ++k) e += symbol_slice(c, theta_k(k, N)).F;
    return 0.5 * e;
}

// F^S = h + 2t cos(theta), F^A = +2s sin(theta), G = 2i gamma sin(theta).
inline CouplingSet build_dm(const DmParams& p) {
    CouplingSet c;
    c.L = 1;
    c.A = {cd(p.h, 0.0), cd(p.t, -p.s)};
    c.B = {0.0, cd(p.gamma, 0.0)};
    return c;
}

inline CouplingSet build_kitaev(const KitaevParams& p) {
    if (!(p.zeta > 0.0)) throw DomainError("zeta must be positive");
    CouplingSet c;
    c.long_range = LongRange{p.zeta, p.analytic, p.l_max};
    c.A = {cd(p.h, 0.0), cd(1.0, 0.0)};
    if (p.analytic) {
        c.L = 1;
        c.B = {0.0};
    } else {
        if (p.l_max < 1) throw NonPositiveRange("l_max must be >= 1");
        c.L = p.l_max;
        c.A.resize(std::size_t(p.l_max) + 1, 0.0);
        c.B.assign(std::size_t(p.l_max) + 1, 0.0);
        for (int l = 1; l <= p.l_max; ++l) c.B[std::size_t(l)] = std::pow(double(l), -p.zeta);
    }
    return c;
}

// G_zeta(theta) = Li_zeta(e^{i theta}) - Li_zeta(e^{-i theta}) = 2i sum sin(l theta)/l^zeta.
inline cd polylog_G(double zeta, double theta, double tol = 1e-14) {
    return cd(0.0, 2.0 * polylog_sine(zeta, theta, tol));
}

enum class DmRegion { A, B, R1a, R1b, R2, Boundary };

inline std::string to_string(DmRegion r) {
    switch (r) {
        case DmRegion::A: return "A";
        case DmRegion::B: return "B";
        case DmRegion::R1a: return "1a";
        case DmRegion::R1b: return "1b";
        case DmRegion::R2: return "2";
        default: return "boundary";
    }
}

inline double dm_x(const DmParams& p) { return (1.0 - 0.25 * p.h * p.h) / (p.gamma * p.gamma); }

inline DmRegion dm_region(const DmParams& p) {
    if (std::abs(p.t - 1.0) > 1e-12) throw DomainError("dm_region needs t = 1 (rescale first)");
    const double g2 = p.gamma * p.gamma, s2 = p.s * p.s;
    const double delta = s2 - g2;
    const double hh = 0.25 * p.h * p.h;
    if (delta > 0.0 && hh - delta < 1.0) return DmRegion::A;
    if (delta < 0.0 && std::abs(std::abs(p.h) - 2.0) <= 1e-12) return DmRegion::B;
    if (g2 > s2) {
        // gamma^2 x = 1 - (h/2)^2 avoids dividing by gamma
        double gx = 1.0 - hh;
        if (gx > 0.0 && gx < g2) return DmRegion::R1a;
        if (gx > g2) return DmRegion::R1b;
    }
    if (g2 > 0.0 && 1.0 - hh < 0.0 && g2 - (1.0 - hh) > s2) return DmRegion::R2;
    return DmRegion::Boundary;
}

}  // namespace blockent
