#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include <blockent/entropy.hpp>

using namespace blockent;

namespace {

double binary_entropy(double p) { return -p * std::log(p) - (1 - p) * std::log(1 - p); }

SpectrumResult xx2() { return spectrum(build_thermodynamic(build_dm({1.0, 0.0, 0.0, 0.0}), 2)); }

}  // namespace

TEST(RenyiEntropy, PureState) {
    SpectrumResult s{{-1.0, -1.0, 1.0, 1.0}, 0};
    for (double a : {0.5, 1.0, 2.0}) EXPECT_NEAR(renyi_entropy(s, a), 0.0, 1e-15);
}

TEST(RenyiEntropy, MaximallyMixedMode) {
    SpectrumResult s{{0.0, 0.0}, 0};
    for (double a : {0.5, 1.0, 2.0, 3.0}) EXPECT_NEAR(renyi_entropy(s, a), std::log(2.0), 1e-15);
}

TEST(RenyiEntropy, XXTwoSites) {
    EXPECT_NEAR(renyi_entropy(xx2(), 1.0), 2 * binary_entropy((1 + 2 / pi) / 2), 1e-10);
}

TEST(FockOracle, NearProductState) {
    CouplingSet c;
    c.A = {10.0, 1.0};
    auto r = fock_oracle(c, 4, 1, 1.0);
    EXPECT_LT(r.value, 1e-2);
    EXPECT_FALSE(r.degenerate);
}

TEST(FockOracle, MatchesCorrelationXX) {
    auto c = build_dm({1.0, 0.0, 0.0, 0.0});
    auto f = fock_oracle(c, 8, 2, 1.0);
    double s = renyi_entropy(spectrum(build_finite(c, ground_occupation(c, 8), 2)), 1.0);
    EXPECT_NEAR(f.value, s, 1e-8);
}

TEST(FockOracle, MatchesCorrelationRegionA) {
    auto c = build_dm({1.0, 0.5, 0.75, 0.5});
    for (double a : {1.0, 2.0}) {
        auto f = fock_oracle(c, 8, 3, a);
        double s = renyi_entropy(spectrum(build_finite(c, ground_occupation(c, 8), 3)), a);
        EXPECT_NEAR(f.value, s, 1e-8) << a;
    }
}

TEST(FockOracle, RandomLongerRange) {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int trial = 0; trial < 5; ++trial) {
        CouplingSet c;
        c.L = 2;
        c.A = {u(rng), cd(u(rng), u(rng)), cd(u(rng), u(rng))};
        c.B = {0.0, u(rng), u(rng)};
        auto f = fock_oracle(c, 9, 3, 1.0);
        if (f.degenerate) continue;
        double s = renyi_entropy(spectrum(build_finite(c, ground_occupation(c, 9), 3)), 1.0);
        EXPECT_NEAR(f.value, s, 1e-8) << trial;
    }
}

TEST(FockOracle, Bounds) {
    auto c = build_dm({1.0, 0.5, 0.0, 0.5});
    EXPECT_THROW(fock_oracle(c, 13, 2, 1.0), InvalidArgument);
    EXPECT_THROW(fock_oracle(c, 8, 8, 1.0), InvalidArgument);
}

// von Neumann entropy with the eigenvalue x in place of 1, summed directly
double regularized_sum(const SpectrumResult& sp, double x) {
    double s = 0.0;
    for (double v : sp.eigenvalues) {
        double p = 0.5 * (x + v), q = 0.5 * (x - v);
        s -= p * std::log(p) + q * std::log(q);
    }
    return 0.5 * s;
}

TEST(ContourEntropy, PureSpectrum) {
    SpectrumResult s{{-1.0, 1.0, 1.0, -1.0}, 0};
    // only the eps log eps regularization error survives
    for (double e : {1e-2, 1e-3}) EXPECT_NEAR(contour_entropy(s, 1.0, e), regularized_sum(s, 1.0 + e), 1e-9);
}

TEST(ContourEntropy, ConvergesInEps) {
    auto sp = spectrum(build_thermodynamic(build_dm({1.0, 0.5, 0.75, 0.5}), 10));
    const double exact = renyi_entropy(sp, 1.0);
    double prev = 1.0;
    for (double e : {1e-2, 1e-3, 1e-4}) {
        double c = contour_entropy(sp, 1.0, e);
        EXPECT_NEAR(c, regularized_sum(sp, 1.0 + e), 1e-8) << e;
        EXPECT_LT(std::abs(c - exact), prev) << e;
        prev = std::abs(c - exact);
    }
}

TEST(ContourEntropy, MatchesDirectSum) {
    auto sp = xx2();
    EXPECT_NEAR(contour_entropy_extrapolated(sp, 1.0, 1e-4), renyi_entropy(sp, 1.0), 1e-6);
    EXPECT_NEAR(contour_entropy_extrapolated(sp, 2.0, 1e-4), renyi_entropy(sp, 2.0), 1e-6);
}

TEST(EntropyCurve, GappedSaturates) {
    auto cur = entropy_curve(build_dm({1.0, 1.0, 0.0, 1.0}), {200, 400}, 1.0);
    EXPECT_LT(std::abs(cur.samples[1].S - cur.samples[0].S), 1e-4);
}

TEST(EntropyCurve, RegionADoubling) {
    auto cur = entropy_curve(build_dm({1.0, 0.5, 0.75, 0.5}), {200, 400}, 1.0);
    EXPECT_NEAR(cur.samples[1].S - cur.samples[0].S, std::log(2.0) / 3, 5e-3);
}

TEST(EntropyCurve, TrivialInsulator) {
    CouplingSet c;
    c.A = {50.0, 1.0};
    c.B = {0.0, 0.3};
    auto cur = entropy_curve(c, {4, 16, 64}, 1.0);
    for (const auto& s : cur.samples) EXPECT_LT(s.S, 1e-3);
}

TEST(FitLogScaling, SyntheticLine) {
    EntropyCurve cur;
    for (std::size_t x : {10u, 20u, 40u, 80u, 160u}) cur.samples.push_back({x, std::log(double(x)) / 3 + 0.5});
    auto f = fit_log_scaling(cur, 10, 160);
    EXPECT_NEAR(f.slope, 1.0 / 3, 1e-13);
    EXPECT_NEAR(f.intercept, 0.5, 1e-12);
    EXPECT_NEAR(f.residualRms, 0.0, 1e-13);
    EXPECT_EQ(f.used, 5u);
}

TEST(FitLogScaling, NeedsSamples) {
    EntropyCurve cur;
    cur.samples = {{10, 1.0}, {20, 1.2}};
    EXPECT_THROW(fit_log_scaling(cur, 1, 100), InsufficientSamples);
}

TEST(GeometricSizes, EndsIncludedAndIncreasing) {
    auto s = geometric_sizes(50, 400, 10);
    EXPECT_EQ(s.front(), 50u);
    EXPECT_EQ(s.back(), 400u);
    for (std::size_t i = 1; i < s.size(); ++i) EXPECT_GT(s[i], s[i - 1]);
}
