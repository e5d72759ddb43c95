#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "chain_model.hpp"
#include "errors.hpp"
#include "quadrature.hpp"
#include "renyi_kernel.hpp"

namespace blockent {

using Mat2 = Eigen::Matrix2cd;

enum class Tag { MinusI, M, PlusI };
enum class JumpKind { MI, II, MM };

inline std::string to_string(Tag t) {
    return t == Tag::MinusI ? "-I" : (t == Tag::PlusI ? "+I" : "M");
}
inline std::string to_string(JumpKind k) {
    return k == JumpKind::MI ? "MI" : (k == JumpKind::II ? "II" : "MM");
}

struct SymbolBranch {
    Tag tag = Tag::M;
    Mat2 matrix = Mat2::Identity();
};

struct Discontinuity {
    double theta = 0.0;
    JumpKind kind = JumpKind::MI;
    SymbolBranch left, right;
    bool commuting = true;
};

struct DiscontinuitySet {
    std::vector<Discontinuity> list;
    std::vector<double> tangential;     // zeros without a jump (UnresolvedDegeneracy warnings)
    std::vector<std::string> warnings;
};

struct ArchetypeCount {
    int n_a = 0, n_b = 0, n_c = 0, n_d = 0;
    int N_T = 0;
};

inline constexpr double zero_level = 1e-13;

inline Tag tag_of(const SymbolSlice& s) {
    if (s.FA > s.LambdaS) return Tag::PlusI;
    if (s.FA < -s.LambdaS) return Tag::MinusI;
    return Tag::M;
}

// M(theta) = (F^S sigma-like matrix) / Lambda^S, with diag(1,-1) where the gap closes.
inline Mat2 m_matrix(const SymbolSlice& s) {
    Mat2 m;
    if (s.LambdaS < zero_level) {
        m << 1.0, 0.0, 0.0, -1.0;
        return m;
    }
    m << s.FS / s.LambdaS, s.G / s.LambdaS, std::conj(s.G) / s.LambdaS, -s.FS / s.LambdaS;
    return m;
}

inline Mat2 tag_matrix(Tag t, const SymbolSlice& s) {
    if (t == Tag::PlusI) return Mat2::Identity();
    if (t == Tag::MinusI) return -Mat2::Identity();
    return m_matrix(s);
}

inline SymbolBranch classify_symbol(const CouplingSet& c, double theta) {
    SymbolSlice s = symbol_slice(c, theta);
    if (std::abs(s.LambdaS - std::abs(s.FA)) < zero_level || s.LambdaS < zero_level)
        throw OnDiscontinuity("symbol is not defined at theta = " + std::to_string(theta));
    SymbolBranch b;
    b.tag = tag_of(s);
    b.matrix = tag_matrix(b.tag, s);
    return b;
}

namespace detail {

inline double wrap(double t) {
    t = std::remainder(t, 2.0 * pi);
    if (t <= -pi) t += 2.0 * pi;
    return t;
}

inline double snap(double t) {
    if (std::abs(t) < 1e-9) return 0.0;
    if (std::abs(std::abs(t) - pi) < 1e-9) return pi;
    return t;
}

inline double coupling_scale(const CouplingSet& c) {
    double s = 0.0;
    for (const auto& a : c.A) s += std::abs(a);
    for (const auto& b : c.B) s += std::abs(b);
    if (c.analytic_pairing()) s += 1.0;
    return std::max(s, 1e-300);
}

template <class F>
double golden_min(F&& f, double a, double b, double tol = 1e-15) {
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
    double f1 = f(x1), f2 = f(x2);
    for (int it = 0; it < 200 && (b - a) > tol * (1.0 + std::abs(a)); ++it) {
        if (f1 < f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - gr * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + gr * (b - a);
            f2 = f(x2);
        }
    }
    return f1 < f2 ? x1 : x2;
}

inline bool commute(const Mat2& a, const Mat2& b) {
    return (a * b - b * a).cwiseAbs().maxCoeff() < 1e-8;
}

// Kitaev pairing with zeta <= 1: G is singular at theta = 0.
inline bool pairing_singular_at_zero(const CouplingSet& c) {
    return c.analytic_pairing() && c.long_range->zeta <= 1.0;
}

inline Discontinuity injected_zero_jump(const CouplingSet& c) {
    Discontinuity d;
    d.theta = 0.0;
    d.kind = JumpKind::MM;
    Mat2 sy;
    sy << 0.0, cd(0.0, -1.0), cd(0.0, 1.0), 0.0;
    if (c.long_range->zeta < 1.0) {
        d.left.matrix = sy;
        d.right.matrix = -sy;
    } else {
        // zeta = 1: sum sin(l t)/l -> +-pi/2, so G(0+-) = +-i pi
        double fs = c.A[0].real();
        for (std::size_t l = 1; l < c.A.size(); ++l) fs += 2.0 * c.A[l].real();
        double lam = std::hypot(fs, pi);
        d.left.matrix << fs / lam, cd(0.0, -pi / lam), cd(0.0, pi / lam), -fs / lam;
        d.right.matrix << fs / lam, cd(0.0, pi / lam), cd(0.0, -pi / lam), -fs / lam;
    }
    d.left.tag = d.right.tag = Tag::M;
    d.commuting = commute(d.left.matrix, d.right.matrix);
    return d;
}

inline Mat2 lateral_limit(const CouplingSet& c, double theta, double sign, double delta) {
    Mat2 m1 = m_matrix(symbol_slice(c, wrap(theta + sign * delta)));
    Mat2 m2 = m_matrix(symbol_slice(c, wrap(theta + 2.0 * sign * delta)));
    return 2.0 * m1 - m2;
}

}  // namespace detail

inline DiscontinuitySet find_discontinuities(const CouplingSet& c, int gridN = 4096, double tol_theta = 1e-12) {
    if (gridN < 1024) throw InvalidArgument("gridN must be >= 1024");
    using detail::wrap;
    DiscontinuitySet out;
    const double scale = detail::coupling_scale(c);
    const double h = 2.0 * pi / gridN;
    const bool singular0 = detail::pairing_singular_at_zero(c);
    auto slice = [&](double t) { return symbol_slice(c, wrap(t)); };
    auto tag_at = [&](double t) { return tag_of(slice(t)); };

    std::vector<double> th(gridN);
    std::vector<SymbolSlice> sl(gridN);
    std::vector<Tag> tg(gridN);
    for (int i = 0; i < gridN; ++i) {
        th[i] = -pi + (i + 0.5) * h;
        sl[i] = symbol_slice(c, th[i]);
        tg[i] = tag_of(sl[i]);
    }

    auto near_existing = [&](double t, double tol) {
        for (const auto& d : out.list) {
            if (std::abs(std::remainder(d.theta - t, 2.0 * pi)) < tol) return true;
        }
        return false;
    };

    const double side = 1e-8;
    auto make_jump = [&](double t) {
        Discontinuity d;
        d.theta = t;
        SymbolSlice sa = slice(t - side), sb = slice(t + side), s0 = slice(t);
        d.left.tag = tag_of(sa);
        d.right.tag = tag_of(sb);
        d.left.matrix = tag_matrix(d.left.tag, s0);
        d.right.matrix = tag_matrix(d.right.tag, s0);
        if (d.left.tag != Tag::M && d.right.tag != Tag::M)
            d.kind = JumpKind::II;
        else
            d.kind = JumpKind::MI;
        d.commuting = detail::commute(d.left.matrix, d.right.matrix);
        return d;
    };

    if (singular0) out.list.push_back(detail::injected_zero_jump(c));

    // (i)/(ii): changes of the branch tag between neighbouring grid points
    for (int i = 0; i < gridN; ++i) {
        int j = (i + 1) % gridN;
        if (tg[i] == tg[j]) continue;
        double lo = th[i], hi = th[i] + h;
        Tag t0 = tg[i];
        while (hi - lo > tol_theta) {
            double mid = 0.5 * (lo + hi);
            if (tag_at(mid) == t0)
                lo = mid;
            else
                hi = mid;
        }
        double t = detail::snap(wrap(0.5 * (lo + hi)));
        if (near_existing(t, 1e-9)) continue;
        Discontinuity d = make_jump(t);
        if (d.left.tag == d.right.tag) {
            out.warnings.push_back("tag flicker without a jump near theta = " + std::to_string(t));
            continue;
        }
        out.list.push_back(d);
    }

    // (iii): zeros of Lambda^S. Candidates are 0, pi and refined grid minima.
    std::vector<double> zeros;
    auto consider_zero = [&](double t) {
        t = detail::snap(wrap(t));
        if (singular0 && t == 0.0) return;
        if (symbol_slice(c, t).LambdaS > 1e-9 * scale) return;
        for (double z : zeros)
            if (std::abs(std::remainder(z - t, 2.0 * pi)) < 1e-9) return;
        zeros.push_back(t);
    };
    if (!singular0) consider_zero(0.0);
    consider_zero(pi);
    for (int i = 0; i < gridN; ++i) {
        int im = (i + gridN - 1) % gridN, ip = (i + 1) % gridN;
        if (sl[i].LambdaS > sl[im].LambdaS || sl[i].LambdaS > sl[ip].LambdaS) continue;
        if (sl[i].LambdaS > 1e-2 * scale) continue;
        double t = detail::golden_min([&](double x) { return slice(x).LambdaS; }, th[i] - h, th[i] + h);
        consider_zero(t);
    }
    const double delta = 1e-7;
    for (double z : zeros) {
        if (near_existing(z, 1e-9)) continue;
        Tag tl = tag_at(z - delta), tr = tag_at(z + delta);
        if (tl != tr) {
            out.list.push_back(make_jump(z));
            continue;
        }
        if (tl != Tag::M) continue;
        Mat2 L = detail::lateral_limit(c, z, -1.0, delta);
        Mat2 R = detail::lateral_limit(c, z, +1.0, delta);
        if ((L - R).cwiseAbs().maxCoeff() > 1e-6) {
            Discontinuity d;
            d.theta = z;
            d.kind = JumpKind::MM;
            d.left = {Tag::M, L};
            d.right = {Tag::M, R};
            d.commuting = detail::commute(L, R);
            out.list.push_back(d);
        } else {
            out.tangential.push_back(z);
            out.warnings.push_back("UnresolvedDegeneracy: gap closes without a jump at theta = " + std::to_string(z));
        }
    }

    // tangential zeros of Lambda^S - |F^A| (no sign change, no jump)
    auto margin = [&](double t) {
        SymbolSlice s = slice(t);
        return std::abs(s.LambdaS - std::abs(s.FA));
    };
    for (int i = 0; i < gridN; ++i) {
        int im = (i + gridN - 1) % gridN, ip = (i + 1) % gridN;
        double mi = std::abs(sl[i].LambdaS - std::abs(sl[i].FA));
        if (mi > std::abs(sl[im].LambdaS - std::abs(sl[im].FA)) ||
            mi > std::abs(sl[ip].LambdaS - std::abs(sl[ip].FA)))
            continue;
        if (mi > 1e-3 * scale || tg[im] != tg[ip]) continue;
        double t = detail::snap(wrap(detail::golden_min(margin, th[i] - h, th[i] + h)));
        if (margin(t) > 1e-10 * scale) continue;
        if (near_existing(t, 1e-6)) continue;
        bool seen = false;
        for (double z : out.tangential)
            if (std::abs(std::remainder(z - t, 2.0 * pi)) < 1e-6) seen = true;
        if (seen) continue;
        out.tangential.push_back(t);
        out.warnings.push_back("UnresolvedDegeneracy: tangential zero at theta = " + std::to_string(t));
    }

    std::sort(out.list.begin(), out.list.end(), [](const auto& a, const auto& b) { return a.theta < b.theta; });
    return out;
}

inline ArchetypeCount archetype_count(const std::vector<Discontinuity>& discs) {
    ArchetypeCount ac;
    int mi = 0, mm_pairs = 0;
    auto at_symmetric_point = [](double t) { return t == 0.0 || t == pi; };
    for (const auto& d : discs) {
        switch (d.kind) {
            case JumpKind::MI: ++mi; break;
            case JumpKind::II:
                if (!at_symmetric_point(d.theta))
                    throw UnclassifiableConfiguration("II jump away from 0 and pi");
                ++ac.n_b;
                break;
            case JumpKind::MM:
                if (at_symmetric_point(d.theta))
                    ++ac.n_d;
                else
                    ++mm_pairs;
                break;
        }
    }
    if (mm_pairs % 2 != 0) throw UnclassifiableConfiguration("unpaired MM jump");
    ac.n_c = mm_pairs / 2;
    int rest = mi - 2 * ac.n_b;
    if (rest < 0 || rest % 4 != 0)
        throw UnclassifiableConfiguration(std::to_string(mi) + " MI jumps with " + std::to_string(ac.n_b) + " II jumps");
    ac.n_a = rest / 4;
    ac.N_T = 2 * (2 * ac.n_a + 2 * ac.n_b + 2 * ac.n_c + ac.n_d);
    return ac;
}

inline ArchetypeCount archetype_count(const DiscontinuitySet& set) { return archetype_count(set.list); }

inline bool on_cut(cd lam) { return lam.imag() == 0.0 && std::abs(lam.real()) <= 1.0; }

inline cd b_mi(cd lam) {
    if (on_cut(lam)) throw BranchCut("lambda on [-1, 1]");
    cd l = std::log((lam + 1.0) / (lam - 1.0));
    return l * l / (4.0 * pi * pi);
}

inline cd jump_coefficient(const Discontinuity& d, cd lam) {
    if (on_cut(lam)) throw BranchCut("lambda on [-1, 1]");
    const Mat2& L = d.left.matrix;
    const Mat2& R = d.right.matrix;
    if ((L * R - R * L).cwiseAbs().maxCoeff() >= 1e-8)
        throw NonCommutingLimits("lateral limits at theta = " + std::to_string(d.theta) + " do not commute");
    Mat2 H = L + 0.618 * R;
    H = 0.5 * (H + H.adjoint()).eval();
    Eigen::SelfAdjointEigenSolver<Mat2> es(H);
    cd total = 0.0;
    for (int j = 0; j < 2; ++j) {
        auto u = es.eigenvectors().col(j);
        cd tm = (u.adjoint() * L * u)(0, 0);
        cd tp = (u.adjoint() * R * u)(0, 0);
        cd l = std::log((lam - tm) / (lam - tp));
        total += l * l;
    }
    return total / (4.0 * pi * pi);
}

// Arc lengths of the -I, M and +I branches, from the located discontinuities.
struct ArcMeasure {
    double minus = 0.0, m = 0.0, plus = 0.0;
};

inline ArcMeasure arc_measure(const CouplingSet& c, const std::vector<Discontinuity>& discs) {
    ArcMeasure am;
    auto add = [&](double a, double b) {
        double mid = detail::wrap(0.5 * (a + b));
        Tag t = tag_of(symbol_slice(c, mid));
        double len = b - a;
        (t == Tag::MinusI ? am.minus : (t == Tag::PlusI ? am.plus : am.m)) += len;
    };
    if (discs.empty()) {
        add(-pi + 0.1234, pi + 0.1234);
        return am;
    }
    std::vector<double> cuts;
    for (const auto& d : discs) cuts.push_back(d.theta);
    std::sort(cuts.begin(), cuts.end());
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) add(cuts[i], cuts[i + 1]);
    add(cuts.back(), cuts.front() + 2.0 * pi);
    return am;
}

inline cd szego_linear_term(const CouplingSet& c, cd lam, const std::vector<Discontinuity>& discs) {
    if (on_cut(lam)) throw BranchCut("lambda on [-1, 1]");
    ArcMeasure am = arc_measure(c, discs);
    cd lp = std::log(lam + 1.0), lm = std::log(lam - 1.0);
    return (am.minus * 2.0 * lp + am.m * (lp + lm) + am.plus * 2.0 * lm) / (2.0 * pi);
}

inline cd szego_linear_term(const CouplingSet& c, cd lam) {
    return szego_linear_term(c, lam, find_discontinuities(c).list);
}

inline double predicted_log_coefficient(const ArchetypeCount& ac, double alpha) {
    if (!(alpha > 0.0)) throw DomainError("alpha must be positive");
    return ac.N_T * (alpha + 1.0) / (24.0 * alpha);
}

struct IdentityStudy {
    double value = 0.0;                 // eps -> 0 limit
    std::vector<double> eps, collapsed, rectangle;
};

namespace detail {

// -(1/4 pi^2) int_{-1}^{1} d_lambda f_alpha(1+eps, lambda) log((1+lambda)/(1-lambda)) dlambda,
// with lambda = tanh(pi w).
inline double collapsed_identity(double alpha, double eps, double tol) {
    // integrand decays like w exp(-2 pi min(alpha, 1) w)
    const double upper = 12.0 / std::min(alpha, 1.0);
    auto res = quad::integrate(
        [&](double w, cd* out) {
            if (eps == 0.0) {
                out[0] = w * df_alpha_sech2(alpha, w);
                return;
            }
            double sech = 1.0 / std::cosh(pi * w);
            out[0] = w * df_alpha(alpha, 1.0 + eps, std::tanh(pi * w)) * sech * sech;
        },
        1, 0.0, upper, tol, 16);
    return -res.value[0].real();
}

// (1/4 pi i) contour integral of f_alpha(1+eps, .) b_MI' on a rectangle
// with Re lambda = +-(1 + eps/2) and Im lambda = +-eps.
inline double rectangle_identity(double alpha, double eps, double tol) {
    const double X = 1.0 + 0.5 * eps;
    auto integrand = [&](cd lam, cd dlam) {
        cd l = std::log((lam + 1.0) / (lam - 1.0));
        cd db = 2.0 * l * (-2.0 / (lam * lam - 1.0)) / (4.0 * pi * pi);
        cd v = f_alpha_complex(alpha, 1.0 + eps, lam) * db * dlam / cd(0.0, 4.0 * pi);
        return v.real();
    };
    double total = 0.0;
    auto side = [&](cd a, cd b, std::vector<double> breaks) {
        cd d = b - a;
        breaks.insert(breaks.begin(), 0.0);
        breaks.push_back(1.0);
        for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
            auto r = quad::integrate([&](double s, cd* out) { out[0] = integrand(a + s * d, d); }, 1, breaks[i],
                                     breaks[i + 1], tol, 4);
            total += r.value[0].real();
        }
    };
    // bottom: left to right, split near lambda = -1, 0, 1
    auto frac = [&](double x) { return (x + X) / (2.0 * X); };
    side(cd(-X, -eps), cd(X, -eps), {frac(-1.0), 0.5, frac(1.0)});
    side(cd(X, -eps), cd(X, eps), {0.5});
    side(cd(X, eps), cd(-X, eps), {1.0 - frac(1.0), 0.5, 1.0 - frac(-1.0)});
    side(cd(-X, eps), cd(-X, -eps), {0.5});
    return total;
}

}  // namespace detail

inline IdentityStudy coefficient_identity_study(double alpha, double quad_tol = 1e-10) {
    if (!(alpha > 0.0)) throw DomainError("alpha must be positive");
    IdentityStudy st;
    st.value = detail::collapsed_identity(alpha, 0.0, 1e-14);
    double prev = std::numeric_limits<double>::infinity();
    for (double e : {1e-2, 1e-3, 1e-4}) {
        double cv = detail::collapsed_identity(alpha, e, 1e-13);
        double rv = detail::rectangle_identity(alpha, e, 1e-12);
        st.eps.push_back(e);
        st.collapsed.push_back(cv);
        st.rectangle.push_back(rv);
        if (std::abs(cv - rv) > std::max(quad_tol, 1e-8))
            throw QuadratureFailure("contour and cut forms disagree at eps = " + std::to_string(e));
        double dist = std::abs(cv - st.value);
        if (!(dist < prev)) throw QuadratureFailure("no convergence as eps decreases");
        prev = dist;
    }
    return st;
}

inline double coefficient_identity_check(double alpha, double quad_tol = 1e-10) {
    return coefficient_identity_study(alpha, quad_tol).value;
}

}  // namespace blockent
