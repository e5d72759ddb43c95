#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "chain_model.hpp"
#include "errors.hpp"
#include "parallel.hpp"
#include "quadrature.hpp"
#include "symbol_analysis.hpp"

namespace blockent {

struct OccupationSet {
    std::size_t N = 0;
    std::vector<bool> occupied;

    bool contains(std::size_t k) const { return occupied[k % N]; }
};

// Fourier blocks b(d), d = 0..size-1, of a 2x2 block Toeplitz matrix;
// b(-d) = b(d)^dagger.
struct BlockSymbol {
    std::vector<Mat2> blocks;
    double quad_error = 0.0;
    std::size_t size() const { return blocks.size(); }
};

struct CorrelationMatrix {
    std::size_t blockSize = 0;
    Eigen::MatrixXcd V;
};

struct SpectrumResult {
    std::vector<double> eigenvalues;
    std::size_t clampReport = 0;
};

inline OccupationSet ground_occupation(const CouplingSet& c, std::size_t N) {
    if (!c.analytic_pairing() && N <= std::size_t(2 * c.L)) throw InvalidArgument("ground_occupation needs N > 2L");
    OccupationSet occ;
    occ.N = N;
    occ.occupied.assign(N, false);
    for (std::size_t k = 0; k < N; ++k) occ.occupied[k] = symbol_slice(c, theta_k(k, N)).Lambda < -zero_level;
    return occ;
}

// Assembles V_X for the leading |X| blocks and checks the structural invariants.
inline CorrelationMatrix assemble(const BlockSymbol& sym, std::size_t X) {
    if (X < 1 || X > sym.size()) throw InvalidArgument("block size out of range");
    CorrelationMatrix cm;
    cm.blockSize = X;
    cm.V.resize(2 * Eigen::Index(X), 2 * Eigen::Index(X));
    for (std::size_t n = 0; n < X; ++n) {
        for (std::size_t m = 0; m < X; ++m) {
            Mat2 b = n >= m ? sym.blocks[n - m] : Mat2(sym.blocks[m - n].adjoint());
            cm.V.block<2, 2>(2 * Eigen::Index(n), 2 * Eigen::Index(m)) = b;
        }
    }
    double herm = (cm.V - cm.V.adjoint()).cwiseAbs().maxCoeff();
    if (herm > 1e-10) throw InvariantViolation("V_X not Hermitian: " + std::to_string(herm));
    // particle-hole: V = -C conj(V) C, C swapping the components of each block
    double ph = 0.0;
    for (Eigen::Index i = 0; i < cm.V.rows(); ++i) {
        for (Eigen::Index j = 0; j < cm.V.cols(); ++j) {
            Eigen::Index ic = i ^ 1, jc = j ^ 1;
            ph = std::max(ph, std::abs(cm.V(i, j) + std::conj(cm.V(ic, jc))));
        }
    }
    if (ph > 1e-8) throw InvariantViolation("V_X violates particle-hole symmetry: " + std::to_string(ph));
    return cm;
}

// Finite-N blocks with the full four-case choice of the Fourier coefficient.
inline BlockSymbol finite_blocks(const CouplingSet& c, const OccupationSet& occ, std::size_t X) {
    const std::size_t N = occ.N;
    if (X > N) throw InvalidArgument("|X| must not exceed N");
    BlockSymbol sym;
    sym.blocks.assign(X, Mat2::Zero());
    for (std::size_t k = 0; k < N; ++k) {
        double th = 2.0 * pi * double(k) / double(N);
        SymbolSlice s = symbol_slice(c, theta_k(k, N));
        Mat2 Mk = m_matrix(s);
        bool in_k = occ.contains(k), in_mk = occ.contains(N - k);
        Mat2 g;
        if (in_k && in_mk)
            g = -Mk;
        else if (in_k)
            g = -Mat2::Identity();
        else if (!in_mk)
            g = Mk;
        else
            g = Mat2::Identity();
        cd step = std::polar(1.0, th), ph = 1.0;
        for (std::size_t d = 0; d < X; ++d) {
            sym.blocks[d] += g * ph;
            ph *= step;
        }
    }
    for (auto& b : sym.blocks) b /= double(N);
    return sym;
}

inline CorrelationMatrix build_finite(const CouplingSet& c, const OccupationSet& occ, std::size_t X) {
    return assemble(finite_blocks(c, occ, X), X);
}

// Thermodynamic blocks b(d) = (1/2pi) int G(theta) e^{i theta d} dtheta, split at
// every discontinuity (and every gapless point) of the ground-state symbol.
inline BlockSymbol thermodynamic_blocks(const CouplingSet& c, std::size_t X, double quad_tol,
                                        const DiscontinuitySet& discs, unsigned threads = 1) {
    if (X < 1) throw InvalidArgument("sizeX must be >= 1");
    BlockSymbol sym;
    sym.blocks.assign(X, Mat2::Zero());
    std::vector<double> cuts;
    for (const auto& d : discs.list) cuts.push_back(d.theta);
    for (double t : discs.tangential) cuts.push_back(t);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end(), [](double a, double b) { return std::abs(a - b) < 1e-12; }),
               cuts.end());
    struct Arc {
        double a, b;
    };
    std::vector<Arc> arcs;
    if (cuts.empty()) {
        arcs.push_back({-pi, pi});
    } else {
        for (std::size_t i = 0; i + 1 < cuts.size(); ++i) arcs.push_back({cuts[i], cuts[i + 1]});
        arcs.push_back({cuts.back(), cuts.front() + 2.0 * pi});
    }

    // d-range chunks, one per worker
    const std::size_t chunks = std::max<std::size_t>(1, std::min<std::size_t>(threads, X));
    std::vector<std::vector<Mat2>> partial(chunks, std::vector<Mat2>());
    std::vector<double> errs(chunks, 0.0);
    parallel_for(chunks, threads, [&](std::size_t ci) {
        std::size_t d0 = X * ci / chunks, d1 = X * (ci + 1) / chunks, nd = d1 - d0;
        std::vector<Mat2> acc(nd, Mat2::Zero());
        for (const Arc& arc : arcs) {
            double len = arc.b - arc.a;
            if (len <= 0.0) continue;
            double mid = detail::wrap(0.5 * (arc.a + arc.b));
            Tag t = tag_of(symbol_slice(c, mid));
            if (t != Tag::M) {
                double sign = t == Tag::PlusI ? 1.0 : -1.0;
                for (std::size_t j = 0; j < nd; ++j) {
                    double d = double(d0 + j);
                    cd v = d == 0.0 ? cd(len) : (std::polar(1.0, arc.b * d) - std::polar(1.0, arc.a * d)) / cd(0.0, d);
                    acc[j] += sign * v * Mat2::Identity();
                }
                continue;
            }
            auto f = [&](double th, cd* out) {
                Mat2 m = m_matrix(symbol_slice(c, detail::wrap(th)));
                cd step = std::polar(1.0, th), ph = std::polar(1.0, th * double(d0));
                for (std::size_t j = 0; j < nd; ++j) {
                    out[3 * j] = m(0, 0) * ph;
                    out[3 * j + 1] = m(0, 1) * ph;
                    out[3 * j + 2] = m(1, 0) * ph;
                    ph *= step;
                }
            };
            std::size_t init = std::size_t(std::ceil(len * double(std::max<std::size_t>(d1, 4)) / 3.0));
            auto r = quad::integrate(f, 3 * nd, arc.a, arc.b, quad_tol * len, init);
            errs[ci] += r.error;
            for (std::size_t j = 0; j < nd; ++j) {
                Mat2 b;
                b << r.value[3 * j], r.value[3 * j + 1], r.value[3 * j + 2], -r.value[3 * j];
                acc[j] += b;
            }
        }
        partial[ci] = std::move(acc);
    });
    for (std::size_t ci = 0; ci < chunks; ++ci) {
        std::size_t d0 = X * ci / chunks;
        for (std::size_t j = 0; j < partial[ci].size(); ++j) sym.blocks[d0 + j] = partial[ci][j] / (2.0 * pi);
        sym.quad_error = std::max(sym.quad_error, errs[ci] / (2.0 * pi));
    }
    // b(0) is Hermitian exactly
    sym.blocks[0] = 0.5 * (sym.blocks[0] + sym.blocks[0].adjoint().eval());
    return sym;
}

inline BlockSymbol thermodynamic_blocks(const CouplingSet& c, std::size_t X, double quad_tol = 1e-10,
                                        unsigned threads = 1) {
    return thermodynamic_blocks(c, X, quad_tol, find_discontinuities(c), threads);
}

inline CorrelationMatrix build_thermodynamic(const CouplingSet& c, std::size_t X, double quad_tol = 1e-10,
                                             unsigned threads = 1) {
    return assemble(thermodynamic_blocks(c, X, quad_tol, threads), X);
}

inline SpectrumResult spectrum(const CorrelationMatrix& cm) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(cm.V, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw EigenFailure("Hermitian eigensolver did not converge");
    SpectrumResult r;
    r.eigenvalues.resize(std::size_t(es.eigenvalues().size()));
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
        double v = es.eigenvalues()(i);
        if (std::abs(v) > 1.0 + 1e-9) throw SpectrumOutOfRange("eigenvalue " + std::to_string(v));
        if (std::abs(v) > 1.0) {
            v = std::copysign(1.0, v);
            ++r.clampReport;
        }
        r.eigenvalues[std::size_t(i)] = v;
    }
    std::sort(r.eigenvalues.begin(), r.eigenvalues.end());
    return r;
}

}  // namespace blockent
