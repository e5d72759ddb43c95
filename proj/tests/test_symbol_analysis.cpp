#include <cmath>

#include <Eigen/Dense>
#include <gtest/gtest.h>

#include <blockent/symbol_analysis.hpp>

using namespace blockent;

namespace {

const DmParams regionA{1.0, 0.5, 0.75, 0.5};
const DmParams regionB{1.0, 1.5, 0.75, 2.0};
const DmParams gapped1a{1.0, 1.0, 0.0, 1.0};

Discontinuity make(JumpKind k, const Mat2& l, const Mat2& r) {
    Discontinuity d;
    d.kind = k;
    d.left.matrix = l;
    d.right.matrix = r;
    return d;
}

Mat2 sz() {
    Mat2 m;
    m << 1.0, 0.0, 0.0, -1.0;
    return m;
}

// (1/2pi) int log det(lambda - G(theta)) dtheta on a midpoint grid, G built from the tags directly
cd szego_bruteforce(const CouplingSet& c, cd lam, int n) {
    cd sum = 0.0;
    for (int i = 0; i < n; ++i) {
        double th = -pi + (i + 0.5) * 2 * pi / n;
        auto s = symbol_slice(c, th);
        Mat2 g;
        if (s.FA > s.LambdaS)
            g = Mat2::Identity();
        else if (s.FA < -s.LambdaS)
            g = -Mat2::Identity();
        else
            g << s.FS / s.LambdaS, s.G / s.LambdaS, std::conj(s.G) / s.LambdaS, -s.FS / s.LambdaS;
        // log det as the sum of log(lambda - mu): the branch that continues analytically off [-1, 1]
        Eigen::ComplexEigenSolver<Mat2> es(g);
        for (int j = 0; j < 2; ++j) sum += std::log(lam - es.eigenvalues()(j));
    }
    return sum / double(n);
}

}  // namespace

TEST(ClassifySymbol, XXIsDiagonalM) {
    auto b = classify_symbol(build_dm({1.0, 0.0, 0.0, 0.0}), pi / 4);
    EXPECT_EQ(b.tag, Tag::M);
    EXPECT_NEAR(std::abs(b.matrix(0, 0) - 1.0), 0.0, 1e-14);
    EXPECT_NEAR(std::abs(b.matrix(1, 1) + 1.0), 0.0, 1e-14);
    EXPECT_EQ(b.matrix(0, 1), cd(0.0));
}

TEST(ClassifySymbol, RegionADiracSea) {
    EXPECT_EQ(classify_symbol(build_dm(regionA), pi / 2).tag, Tag::PlusI);
    EXPECT_EQ(classify_symbol(build_dm(regionA), -pi / 2).tag, Tag::MinusI);
}

TEST(ClassifySymbol, MBranchSquaresToIdentity) {
    auto b = classify_symbol(build_dm({1.0, 0.8, 0.2, 0.3}), 0.9);
    EXPECT_LT((b.matrix * b.matrix - Mat2::Identity()).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(ClassifySymbol, ThrowsOnGapClosing) {
    EXPECT_THROW(classify_symbol(build_dm(regionB), pi), OnDiscontinuity);
}

TEST(FindDiscontinuities, RegionAFourMI) {
    auto c = build_dm(regionA);
    auto ds = find_discontinuities(c);
    ASSERT_EQ(ds.list.size(), 4u);
    for (const auto& d : ds.list) {
        EXPECT_EQ(d.kind, JumpKind::MI);
        // boundary of the Dirac sea: F^A = +-Lambda^S
        auto s = symbol_slice(c, d.theta);
        EXPECT_NEAR(std::abs(s.FA), s.LambdaS, 1e-9);
    }
}

TEST(FindDiscontinuities, RegionBSingleMMAtPi) {
    auto ds = find_discontinuities(build_dm(regionB));
    ASSERT_EQ(ds.list.size(), 1u);
    EXPECT_EQ(ds.list[0].kind, JumpKind::MM);
    EXPECT_NEAR(std::abs(ds.list[0].theta), pi, 1e-12);
    EXPECT_TRUE(ds.list[0].commuting);
}

TEST(FindDiscontinuities, GappedIsEmpty) {
    auto ds = find_discontinuities(build_dm(gapped1a));
    EXPECT_TRUE(ds.list.empty());
    EXPECT_TRUE(ds.tangential.empty());
}

TEST(ArchetypeCount, PaperCases) {
    auto a = archetype_count(find_discontinuities(build_dm(regionA)));
    EXPECT_EQ(a.n_a, 1);
    EXPECT_EQ(a.n_b + a.n_c + a.n_d, 0);
    EXPECT_EQ(a.N_T, 4);
    auto b = archetype_count(find_discontinuities(build_dm(regionB)));
    EXPECT_EQ(b.n_d, 1);
    EXPECT_EQ(b.N_T, 2);
    auto k = archetype_count(find_discontinuities(build_kitaev({2.0, 0.5, true, 0})));
    EXPECT_EQ(k.n_d, 2);
    EXPECT_EQ(k.N_T, 4);
}

TEST(ArchetypeCount, Empty) { EXPECT_EQ(archetype_count(std::vector<Discontinuity>{}).N_T, 0); }

TEST(ArchetypeCount, RejectsStrayMI) {
    std::vector<Discontinuity> v{make(JumpKind::MI, sz(), Mat2::Identity())};
    EXPECT_THROW(archetype_count(v), UnclassifiableConfiguration);
}

TEST(BMI, Values) {
    double l2 = std::log(2.0);
    EXPECT_NEAR(b_mi(3.0).real(), l2 * l2 / (4 * pi * pi), 1e-15);
    EXPECT_NEAR(std::abs(b_mi(1e12)), 0.0, 1e-20);
    cd v = b_mi(cd(0.0, 2.5));
    EXPECT_NEAR(v.imag(), 0.0, 1e-15);
    EXPECT_LT(v.real(), 0.0);
    EXPECT_THROW(b_mi(0.3), BranchCut);
}

TEST(JumpCoefficient, Kinds) {
    const cd b = b_mi(3.0);
    Mat2 I = Mat2::Identity();
    EXPECT_NEAR(std::abs(jump_coefficient(make(JumpKind::MI, sz(), I), 3.0) - b), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(jump_coefficient(make(JumpKind::II, -I, I), 3.0) - 2.0 * b), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(jump_coefficient(make(JumpKind::MM, sz(), -sz()), 3.0) - 2.0 * b), 0.0, 1e-15);
}

TEST(JumpCoefficient, RejectsNonCommuting) {
    Mat2 sx;
    sx << 0.0, 1.0, 1.0, 0.0;
    EXPECT_THROW(jump_coefficient(make(JumpKind::MM, sz(), sx), 3.0), NonCommutingLimits);
}

TEST(SzegoLinearTerm, PureBranches) {
    const cd lam(1.7, 0.4);
    // gapped: M everywhere
    EXPECT_NEAR(std::abs(szego_linear_term(build_dm(gapped1a), lam) - std::log(lam * lam - 1.0)), 0.0, 1e-13);
}

TEST(SzegoLinearTerm, ArcWeights) {
    // F^S = 0.1, F^A = 2 sin(theta): +I where 2 sin(theta) > 0.1
    CouplingSet c;
    c.A = {0.1, cd(0.0, -1.0)};
    auto discs = find_discontinuities(c).list;
    ArcMeasure am = arc_measure(c, discs);
    const double edge = 2.0 * std::asin(0.05);
    EXPECT_NEAR(am.plus, pi - edge, 1e-9);
    EXPECT_NEAR(am.minus, pi - edge, 1e-9);
    EXPECT_NEAR(am.m, 2.0 * edge, 1e-9);
    const cd lam(1.7, 0.4);
    cd want = ((pi - edge) * 2.0 * std::log(lam - 1.0) + 2.0 * edge * std::log(lam * lam - 1.0) +
               (pi - edge) * 2.0 * std::log(lam + 1.0)) /
              (2 * pi);
    EXPECT_NEAR(std::abs(szego_linear_term(c, lam, discs) - want), 0.0, 1e-9);
}

TEST(SzegoLinearTerm, RegionAMatchesBruteForce) {
    auto c = build_dm(regionA);
    for (cd lam : {cd(1.5, 0.0), cd(0.3, 0.8), cd(-2.0, 0.1)}) {
        cd want = szego_bruteforce(c, lam, 1000000);
        cd got = szego_linear_term(c, lam);
        EXPECT_NEAR(got.real(), want.real(), 1e-5) << lam;
        EXPECT_NEAR(got.imag(), want.imag(), 1e-5) << lam;
    }
}

TEST(PredictedLogCoefficient, Values) {
    EXPECT_NEAR(predicted_log_coefficient({1, 0, 0, 0, 4}, 1.0), 1.0 / 3, 1e-15);
    EXPECT_NEAR(predicted_log_coefficient({0, 0, 0, 1, 2}, 1.0), 1.0 / 6, 1e-15);
    EXPECT_EQ(predicted_log_coefficient({}, 2.5), 0.0);
}

TEST(CoefficientIdentity, Values) {
    EXPECT_NEAR(coefficient_identity_check(1.0), 1.0 / 12, 1e-10);
    EXPECT_NEAR(coefficient_identity_check(2.0), 1.0 / 16, 1e-10);
    EXPECT_NEAR(coefficient_identity_check(0.5), 1.0 / 8, 1e-10);
}

TEST(CoefficientIdentity, RectangleApproachesLimit) {
    auto st = coefficient_identity_study(3.0);
    ASSERT_EQ(st.eps.size(), 3u);
    for (std::size_t i = 0; i < 3; ++i) EXPECT_NEAR(st.rectangle[i], st.collapsed[i], 1e-8);
    EXPECT_LT(std::abs(st.rectangle[2] - st.value), std::abs(st.rectangle[0] - st.value));
}
