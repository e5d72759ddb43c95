#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <queue>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "errors.hpp"

namespace blockent::quad {

using cd = std::complex<double>;

// 7-point Gauss / 15-point Kronrod pair on [-1,1], unpacked from Boost's
// half-range tables. gauss[i] is zero at Kronrod-only nodes.
struct GK15 {
    std::array<double, 15> x{}, wk{}, wg{};
    GK15() {
        using K = boost::math::quadrature::gauss_kronrod<double, 15>;
        using G = boost::math::quadrature::gauss<double, 7>;
        const auto& ax = K::abscissa();
        const auto& w = K::weights();
        const auto& g = G::weights();
        x[7] = 0.0;
        wk[7] = w[0];
        wg[7] = g[0];
        for (std::size_t i = 1; i < ax.size(); ++i) {
            double gw = (i % 2 == 0) ? g[i / 2] : 0.0;
            x[7 + i] = ax[i];
            x[7 - i] = -ax[i];
            wk[7 + i] = wk[7 - i] = w[i];
            wg[7 + i] = wg[7 - i] = gw;
        }
    }
    static const GK15& get() {
        static const GK15 rule;
        return rule;
    }
};

struct VectorResult {
    std::vector<cd> value;
    double error = 0.0;      // sum over panels of the max-component |K - G|
    std::size_t panels = 0;
};

namespace detail {

struct Panel {
    double a, b, err;
    bool operator<(const Panel& o) const { return err < o.err; }
};

template <class F>
double panel_error(F& f, std::size_t dim, double a, double b, std::vector<cd>& buf,
                   std::vector<cd>& k, std::vector<cd>& g) {
    const auto& r = GK15::get();
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    std::fill(k.begin(), k.end(), cd(0));
    std::fill(g.begin(), g.end(), cd(0));
    for (int i = 0; i < 15; ++i) {
        f(c + h * r.x[i], buf.data());
        for (std::size_t j = 0; j < dim; ++j) {
            k[j] += r.wk[i] * buf[j];
            if (r.wg[i] != 0.0) g[j] += r.wg[i] * buf[j];
        }
    }
    double e = 0.0;
    for (std::size_t j = 0; j < dim; ++j) e = std::max(e, std::abs(k[j] - g[j]));
    return e * h;
}

}  // namespace detail

// Globally adaptive G7K15 for a vector-valued integrand f(x, out[dim]).
// Splits the worst panel until the summed error estimate is below abs_tol.
// Panel vectors are not stored; the final partition is integrated once more.
template <class F>
VectorResult integrate(F&& f, std::size_t dim, double a, double b, double abs_tol,
                       std::size_t initial_panels = 1, std::size_t max_panels = 400000) {
    VectorResult res;
    res.value.assign(dim, cd(0));
    if (b <= a) return res;
    std::vector<cd> buf(dim), k(dim), g(dim);
    std::priority_queue<detail::Panel> heap;
    std::vector<detail::Panel> frozen;  // too narrow to split further
    const double min_width = 1e-14 * (b - a) + 1e-300;
    initial_panels = std::max<std::size_t>(1, initial_panels);
    double total = 0.0;
    for (std::size_t i = 0; i < initial_panels; ++i) {
        double pa = a + (b - a) * double(i) / double(initial_panels);
        double pb = (i + 1 == initial_panels) ? b : a + (b - a) * double(i + 1) / double(initial_panels);
        double e = detail::panel_error(f, dim, pa, pb, buf, k, g);
        heap.push({pa, pb, e});
        total += e;
    }
    while (total > abs_tol && !heap.empty()) {
        if (heap.size() + frozen.size() >= max_panels)
            throw QuadratureFailure("panel budget exhausted, error estimate " + std::to_string(total));
        detail::Panel p = heap.top();
        heap.pop();
        if (p.b - p.a < min_width) {
            frozen.push_back(p);
            continue;
        }
        double m = 0.5 * (p.a + p.b);
        double e1 = detail::panel_error(f, dim, p.a, m, buf, k, g);
        double e2 = detail::panel_error(f, dim, m, p.b, buf, k, g);
        total += e1 + e2 - p.err;
        heap.push({p.a, m, e1});
        heap.push({m, p.b, e2});
    }
    std::vector<detail::Panel> all = std::move(frozen);
    while (!heap.empty()) {
        all.push_back(heap.top());
        heap.pop();
    }
    std::sort(all.begin(), all.end(), [](const auto& u, const auto& v) { return u.a < v.a; });
    const auto& r = GK15::get();
    res.error = 0.0;
    for (const auto& p : all) {
        const double c = 0.5 * (p.a + p.b), h = 0.5 * (p.b - p.a);
        for (int i = 0; i < 15; ++i) {
            f(c + h * r.x[i], buf.data());
            const double w = r.wk[i] * h;
            for (std::size_t j = 0; j < dim; ++j) res.value[j] += w * buf[j];
        }
        res.error += p.err;
    }
    res.panels = all.size();
    return res;
}

}  // namespace blockent::quad
