#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include <blockent/closed_form.hpp>
#include <blockent/entropy.hpp>

using namespace blockent;

namespace {

double exact_log_det(const CouplingSet& c, double lam, std::size_t X) {
    double s = 0.0;
    for (double v : spectrum(build_thermodynamic(c, X)).eigenvalues) s += std::log(lam - v);
    return s;
}

double numeric_s1(const DmParams& p, std::size_t X) {
    return renyi_entropy(spectrum(build_thermodynamic(build_dm(p), X)), 1.0);
}

}  // namespace

TEST(S1Noncritical, Duality) {
    for (double x : {0.05, 0.2, 0.5, 0.8, 0.97})
        EXPECT_NEAR(s1_noncritical(x, DmRegion::R1a), s1_noncritical(1.0 / x, DmRegion::R1b), 1e-12);
}

TEST(S1Noncritical, MatchesNumericAtHalf) {
    // gamma = 1, (h/2)^2 = 1/2 gives x = 1/2 in region 1a
    const double S = numeric_s1({1.0, 1.0, 0.0, std::sqrt(2.0)}, 200);
    EXPECT_NEAR(s1_noncritical(0.5, DmRegion::R1a), S, 1e-3);
    EXPECT_NEAR(s1_noncritical(0.5, DmRegion::R1a), 0.7204, 1e-4);
}

TEST(S1Noncritical, GrowsNearRegionB) {
    EXPECT_GT(s1_noncritical(1e-6, DmRegion::R1a), s1_noncritical(1e-3, DmRegion::R1a) + 0.5);
    EXPECT_GT(s1_noncritical(-1e-6, DmRegion::R2), s1_noncritical(-1e-3, DmRegion::R2) + 0.2);
}

TEST(S1Noncritical, RegionMismatch) {
    EXPECT_THROW(s1_noncritical(1.5, DmRegion::R1a), RegionMismatch);
    EXPECT_THROW(s1_noncritical(0.5, DmRegion::R2), RegionMismatch);
    EXPECT_THROW(s1_noncritical(0.5, DmRegion::A), RegionMismatch);
}

TEST(IAlpha, RealAndRefinable) {
    auto r = i_alpha_detail(2.0, 1e-12);
    EXPECT_LT(std::abs(r.imag_residue), 1e-10);
    EXPECT_NEAR(r.value, i_alpha_detail(2.0, 1e-14).value, 1e-12);
    EXPECT_EQ(i_alpha_constant(2.0), i_alpha_constant(2.0));
}

TEST(IAlpha, AgreesWithDigammaForm) {
    // integrate by parts: I_1 = (2/pi) int f'(lambda) chi dlambda with chi = Im log Gamma(1/2 + i w);
    // plain trapezoid on a fine grid of w as an independent route
    const double h = 1e-3;
    double s = 0.0;
    // stop at w = 5 where tanh still resolves 1 - lambda; the rest is below 1e-11
    for (int i = 1; i < 5000; ++i) {
        double w = i * h;
        double sech = 1.0 / std::cosh(pi * w);
        double lam = std::tanh(pi * w);
        double fp = 0.5 * std::log((1 - lam) / (1 + lam));
        s += fp * sech * sech * pi * lgamma_complex(cd(0.5, w)).imag();
    }
    EXPECT_NEAR(i_alpha_constant(1.0), (2 / pi) * 2 * s * h, 1e-8);
}

TEST(EssentialPoint, FormulaStructure) {
    for (double a : {1.0, 2.0}) {
        double k = (a + 1) / (6 * a);
        EXPECT_NEAR(essential_point_entropy(a, 0.75, 400) - essential_point_entropy(a, 0.75, 200), k * std::log(2.0), 1e-13);
        EXPECT_NEAR(essential_point_entropy(a, 1.0, 100) - essential_point_entropy(a, 0.5, 100), k * std::log(2.5) / 2,
                    1e-13);
    }
}

TEST(EssentialPoint, MatchesNumeric) {
    EXPECT_NEAR(essential_point_entropy(1.0, 0.75, 200), numeric_s1({1.0, 0.0, 0.75, 2.0}, 200), 1e-2);
}

TEST(SelfDual, LogCoefficients) {
    EXPECT_NEAR(selfdual_entropy(0.5, 400) - selfdual_entropy(0.5, 200), std::log(2.0) / 6, 1e-14);
    EXPECT_NEAR(selfdual_entropy(2.0, 400) - selfdual_entropy(2.0, 200), std::log(2.0) / 3, 1e-14);
    EXPECT_NEAR(selfdual_entropy(1e8, 200), std::log(400.0) / 3 + i_alpha_constant(1.0), 1e-12);
}

TEST(Theta, KnownValueAndSymmetries) {
    EXPECT_NEAR(genus1_theta(0.0, cd(0.0, 1.0)).real(), 1.0864348112133080, 1e-14);
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int i = 0; i < 10; ++i) {
        cd s(u(rng), 0.3 * u(rng)), P(0.4 * u(rng), 0.6 + 0.5 * (u(rng) + 1));
        EXPECT_LT(std::abs(genus1_theta(s, P) - genus1_theta(-s, P)), 1e-13);
        EXPECT_LT(std::abs(genus1_theta(s + 1.0, P) - genus1_theta(s, P)), 1e-12);
    }
}

TEST(Theta, TruncationStable) {
    cd a = genus1_theta(cd(0.2, 0.1), cd(0.1, 0.3), 1e-12);
    cd b = genus1_theta(cd(0.2, 0.1), cd(0.1, 0.3), 1e-16);
    EXPECT_LT(std::abs(a - b), 1e-11);
    EXPECT_THROW(genus1_theta(0.0, cd(0.5, 0.0)), NonConvergent);
}

TEST(Genus1, PeriodMatchesEllipticRatioIn1a) {
    // (gamma = 1, s = 0, h = 1): x = 3/4 and Pi = i K(sqrt x) / K(sqrt(1 - x))
    auto g = genus1_surface(build_dm({1.0, 1.0, 0.0, 1.0}));
    EXPECT_NEAR(g.periodMatrix.real(), 0.0, 1e-12);
    EXPECT_NEAR(g.periodMatrix.imag(), elliptic_K(std::sqrt(0.75)) / elliptic_K(0.5), 1e-10);
    EXPECT_EQ(g.tau, g.periodMatrix);
}

TEST(Genus1, DeterminantAgainstExact) {
    for (const auto& p : {DmParams{1.0, 1.0, 0.0, 1.0}, DmParams{1.0, 0.5, 0.0, 3.0}, DmParams{1.0, 0.8, 0.0, 1.0},
                          DmParams{1.0, 2.0, 0.0, 0.5}}) {
        auto c = build_dm(p);
        EXPECT_NEAR(genus1_determinant_asymptotic(c, 1.5, 100), exact_log_det(c, 1.5, 100), 1e-8) << p.gamma;
    }
}

TEST(Genus1, LargeLambda) {
    auto c = build_dm({1.0, 1.0, 0.0, 1.0});
    EXPECT_NEAR(genus1_determinant_asymptotic(c, 1e4, 50) / (50 * std::log(1e8)), 1.0, 1e-8);
}

TEST(Genus1, SaturatedEntropyMatchesClosedForm) {
    for (const auto& p : {DmParams{1.0, 1.0, 0.0, 1.0}, DmParams{1.0, 0.5, 0.0, 0.5}, DmParams{1.0, 0.5, 0.0, 3.0}}) {
        auto c = build_dm(p);
        EXPECT_NEAR(genus1_entropy(c, 1.0), s1_noncritical(dm_x(p), dm_region(p)), 1e-3) << p.gamma << " " << p.h;
    }
}

TEST(Genus1, RejectsCriticalSymbol) {
    EXPECT_THROW(genus1_determinant_asymptotic(build_dm({1.0, 0.5, 0.75, 0.5}), 1.5, 10), NotSmooth);
}
