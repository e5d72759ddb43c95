#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <vector>

#include <Eigen/Dense>

#include "chain_model.hpp"
#include "correlation.hpp"
#include "errors.hpp"
#include "parallel.hpp"
#include "quadrature.hpp"
#include "renyi_kernel.hpp"

namespace blockent {

struct EntropySample {
    std::size_t sizeX = 0;
    double S = 0.0;
};

struct EntropyCurve {
    double alpha = 1.0;
    std::vector<EntropySample> samples;
};

struct ScalingFit {
    double slope = 0.0, intercept = 0.0, residualRms = 0.0;
    std::size_t minX = 0, maxX = 0;
    std::size_t used = 0;
};

inline double renyi_entropy(const SpectrumResult& spec, double alpha) {
    if (!(alpha > 0.0)) throw DomainError("alpha must be positive");
    double s = 0.0;
    for (double v : spec.eigenvalues) s += f_alpha(alpha, 1.0, std::clamp(v, -1.0, 1.0));
    return std::max(0.0, 0.5 * s);
}

struct FockResult {
    double value = 0.0;
    double energy = 0.0;
    bool degenerate = false;
};

namespace detail {

// Sign and target of c_j^dagger / c_j acting on a Jordan-Wigner occupation state.
inline bool apply_create(std::uint32_t& s, int j, int& sign) {
    if (s >> j & 1u) return false;
    if (std::popcount(s & ((1u << j) - 1u)) & 1) sign = -sign;
    s |= 1u << j;
    return true;
}
inline bool apply_annihilate(std::uint32_t& s, int j, int& sign) {
    if (!(s >> j & 1u)) return false;
    if (std::popcount(s & ((1u << j) - 1u)) & 1) sign = -sign;
    s &= ~(1u << j);
    return true;
}

}  // namespace detail

// Brute-force Renyi entropy of the first |X| sites in the ground state of the
// periodic N-site Hamiltonian, built in the 2^N occupation basis.
inline FockResult fock_oracle(const CouplingSet& c, int N, int X, double alpha) {
    if (N < 2 || N > 12) throw InvalidArgument("fock_oracle needs 2 <= N <= 12");
    if (c.analytic_pairing()) throw InvalidArgument("fock_oracle needs finite couplings");
    if (N <= 2 * c.L) throw InvalidArgument("fock_oracle needs N > 2L");
    if (X < 1 || X >= N) throw InvalidArgument("fock_oracle needs 1 <= |X| < N");
    const std::uint32_t dim = 1u << N;
    bool conserving = true;
    for (const auto& b : c.B)
        if (b != cd(0.0)) conserving = false;
    auto sector_of = [&](std::uint32_t s) { return conserving ? std::popcount(s) : (std::popcount(s) & 1); };
    const int nsec = conserving ? N + 1 : 2;
    std::vector<std::vector<std::uint32_t>> members(static_cast<std::size_t>(nsec));
    std::vector<int> index(dim);
    for (std::uint32_t s = 0; s < dim; ++s) {
        auto& m = members[std::size_t(sector_of(s))];
        index[s] = int(m.size());
        m.push_back(s);
    }
    auto hop = [&](int l) -> cd { return l >= 0 ? c.A[std::size_t(l)] : std::conj(c.A[std::size_t(-l)]); };
    auto pair = [&](int l) -> cd { return l >= 0 ? c.B[std::size_t(l)] : -c.B[std::size_t(-l)]; };

    struct Ground {
        double e0 = 0.0, e1 = 0.0;
        Eigen::VectorXcd vec;
        bool ok = false;
    };
    std::vector<Ground> ground(static_cast<std::size_t>(nsec));
    for (int sec = 0; sec < nsec; ++sec) {
        const auto& mem = members[std::size_t(sec)];
        if (mem.empty()) continue;
        const Eigen::Index d = Eigen::Index(mem.size());
        Eigen::MatrixXcd H = Eigen::MatrixXcd::Zero(d, d);
        for (Eigen::Index col = 0; col < d; ++col) {
            const std::uint32_t s0 = mem[std::size_t(col)];
            for (int n = 0; n < N; ++n) {
                for (int l = -c.L; l <= c.L; ++l) {
                    int m = ((n + l) % N + N) % N;
                    // A_l a_n^dag a_{n+l}
                    cd a = hop(l);
                    if (a != cd(0.0)) {
                        std::uint32_t s = s0;
                        int sg = 1;
                        if (detail::apply_annihilate(s, m, sg) && detail::apply_create(s, n, sg))
                            H(index[s], col) += a * double(sg);
                    }
                    cd b = pair(l);
                    if (b == cd(0.0) || l == 0) continue;
                    // (1/2) B_l a_n^dag a_{n+l}^dag
                    {
                        std::uint32_t s = s0;
                        int sg = 1;
                        if (detail::apply_create(s, m, sg) && detail::apply_create(s, n, sg))
                            H(index[s], col) += 0.5 * b * double(sg);
                    }
                    // -(1/2) conj(B_l) a_n a_{n+l}
                    {
                        std::uint32_t s = s0;
                        int sg = 1;
                        if (detail::apply_annihilate(s, m, sg) && detail::apply_annihilate(s, n, sg))
                            H(index[s], col) -= 0.5 * std::conj(b) * double(sg);
                    }
                }
            }
        }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(H);
        if (es.info() != Eigen::Success) throw EigenFailure("sector diagonalization failed");
        Ground& g = ground[std::size_t(sec)];
        g.e0 = es.eigenvalues()(0);
        g.e1 = d > 1 ? es.eigenvalues()(1) : std::numeric_limits<double>::infinity();
        g.vec = es.eigenvectors().col(0);
        g.ok = true;
    }
    const double degen_tol = 1e-10;
    double emin = std::numeric_limits<double>::infinity();
    for (const auto& g : ground)
        if (g.ok) emin = std::min(emin, g.e0);
    // Lowest sector attaining the minimum. With particle-number conservation this
    // leaves exact zero modes empty, the same convention as ground_occupation.
    int best = -1, ties = 0;
    for (int sec = 0; sec < nsec; ++sec) {
        const auto& g = ground[std::size_t(sec)];
        if (!g.ok || g.e0 - emin > degen_tol) continue;
        ++ties;
        if (best < 0) best = sec;
    }
    FockResult res;
    res.energy = emin;
    const Ground& g = ground[std::size_t(best)];
    res.degenerate = (g.e1 - g.e0 < degen_tol) || (!conserving && ties > 1);

    const Eigen::Index dx = Eigen::Index(1) << X, dy = Eigen::Index(1) << (N - X);
    Eigen::MatrixXcd psi = Eigen::MatrixXcd::Zero(dx, dy);
    const auto& mem = members[std::size_t(best)];
    for (std::size_t i = 0; i < mem.size(); ++i) {
        std::uint32_t s = mem[i];
        psi(Eigen::Index(s & ((1u << X) - 1u)), Eigen::Index(s >> X)) = g.vec(Eigen::Index(i));
    }
    Eigen::MatrixXcd rho = psi * psi.adjoint();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> er(rho, Eigen::EigenvaluesOnly);
    double acc = 0.0;
    for (Eigen::Index i = 0; i < er.eigenvalues().size(); ++i) {
        double p = std::max(0.0, er.eigenvalues()(i));
        if (alpha == 1.0) {
            if (p > 0.0) acc -= p * std::log(p);
        } else {
            acc += std::pow(p, alpha);
        }
    }
    res.value = alpha == 1.0 ? acc : std::log(acc) / (1.0 - alpha);
    res.value = std::max(0.0, res.value);
    return res;
}

// (1/4 pi i) contour integral of f_alpha(1+eps, lambda) dlog D_X(lambda) on a
// rectangle with Re lambda = +-(1 + eps/2), Im lambda = +-eps.
inline double contour_entropy(const SpectrumResult& spec, double alpha, double eps) {
    if (!(eps > 0.0) || eps > 0.1) throw DomainError("eps must lie in (0, 0.1]");
    const double X0 = 1.0 + 0.5 * eps;
    const auto& v = spec.eigenvalues;
    auto dlogD = [&](cd lam) {
        cd s = 0.0;
        for (double x : v) s += 1.0 / (lam - x);
        return s;
    };
    auto integrand = [&](cd lam, cd dlam) {
        return (f_alpha_complex(alpha, 1.0 + eps, lam) * dlogD(lam) * dlam / cd(0.0, 4.0 * pi)).real();
    };
    double total = 0.0;
    auto side = [&](cd a, cd b, std::vector<double> br) {
        cd d = b - a;
        br.insert(br.begin(), 0.0);
        br.push_back(1.0);
        std::sort(br.begin(), br.end());
        br.erase(std::unique(br.begin(), br.end()), br.end());
        for (std::size_t i = 0; i + 1 < br.size(); ++i) {
            if (br[i + 1] <= br[i]) continue;
            auto r = quad::integrate([&](double s, cd* out) { out[0] = integrand(a + s * d, d); }, 1, br[i], br[i + 1],
                                     1e-13, 2);
            total += r.value[0].real();
        }
    };
    std::vector<double> bottom, top;
    for (double x : v) {
        double f = (x + X0) / (2.0 * X0);
        bottom.push_back(std::clamp(f, 0.0, 1.0));
        top.push_back(std::clamp(1.0 - f, 0.0, 1.0));
    }
    side(cd(-X0, -eps), cd(X0, -eps), bottom);
    side(cd(X0, -eps), cd(X0, eps), {0.5});
    side(cd(X0, eps), cd(-X0, eps), top);
    side(cd(-X0, eps), cd(-X0, -eps), {0.5});
    return total;
}

// Richardson combination of two eps values; valid for spectra away from +-1.
inline double contour_entropy_extrapolated(const SpectrumResult& spec, double alpha, double eps) {
    return 2.0 * contour_entropy(spec, alpha, 0.5 * eps) - contour_entropy(spec, alpha, eps);
}

// Entropies for several alpha values sharing one set of blocks and eigensolves.
inline std::vector<EntropyCurve> entropy_curves(const BlockSymbol& sym, const std::vector<std::size_t>& sizes,
                                                const std::vector<double>& alphas, unsigned threads = 1) {
    for (std::size_t i = 1; i < sizes.size(); ++i)
        if (sizes[i] <= sizes[i - 1]) throw InvalidArgument("sizes must be strictly increasing");
    std::vector<SpectrumResult> specs(sizes.size());
    parallel_for(sizes.size(), threads, [&](std::size_t i) { specs[i] = spectrum(assemble(sym, sizes[i])); });
    std::vector<EntropyCurve> out;
    for (double a : alphas) {
        EntropyCurve cv;
        cv.alpha = a;
        for (std::size_t i = 0; i < sizes.size(); ++i) cv.samples.push_back({sizes[i], renyi_entropy(specs[i], a)});
        out.push_back(std::move(cv));
    }
    return out;
}

inline EntropyCurve entropy_curve(const CouplingSet& c, const std::vector<std::size_t>& sizes, double alpha,
                                  double quad_tol = 1e-10, unsigned threads = 1) {
    if (sizes.empty()) throw InvalidArgument("no sizes requested");
    BlockSymbol sym = thermodynamic_blocks(c, sizes.back(), quad_tol, threads);
    return entropy_curves(sym, sizes, {alpha}, threads).front();
}

inline ScalingFit fit_log_scaling(const EntropyCurve& curve, std::size_t minX, std::size_t maxX) {
    std::vector<double> xs, ys;
    for (const auto& s : curve.samples) {
        if (s.sizeX < minX || s.sizeX > maxX) continue;
        xs.push_back(std::log(double(s.sizeX)));
        ys.push_back(s.S);
    }
    if (xs.size() < 4) throw InsufficientSamples("need at least 4 samples in the fit window");
    Eigen::MatrixXd A(Eigen::Index(xs.size()), 2);
    Eigen::VectorXd y(Eigen::Index(xs.size()));
    for (std::size_t i = 0; i < xs.size(); ++i) {
        A(Eigen::Index(i), 0) = xs[i];
        A(Eigen::Index(i), 1) = 1.0;
        y(Eigen::Index(i)) = ys[i];
    }
    Eigen::Vector2d sol = A.colPivHouseholderQr().solve(y);
    ScalingFit f;
    f.slope = sol(0);
    f.intercept = sol(1);
    f.residualRms = std::sqrt((A * sol - y).squaredNorm() / double(xs.size()));
    f.minX = minX;
    f.maxX = maxX;
    f.used = xs.size();
    return f;
}

// Geometric progression of block sizes in [lo, hi], both ends included.
inline std::vector<std::size_t> geometric_sizes(std::size_t lo, std::size_t hi, std::size_t count) {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < count; ++i) {
        double t = count == 1 ? 0.0 : double(i) / double(count - 1);
        auto v = std::size_t(std::llround(double(lo) * std::pow(double(hi) / double(lo), t)));
        if (out.empty() || v > out.back()) out.push_back(v);
    }
    return out;
}

}  // namespace blockent
