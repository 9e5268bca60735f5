#include <gtest/gtest.h>

#include <cmath>

#include "test_util.hpp"

using namespace judge;
using namespace judge::stats;

namespace {

std::vector<double> random_vector(Rng& rng, std::size_t n, std::uint64_t levels) {
    std::vector<double> v(n);
    for (auto& x : v) x = static_cast<double>(rng.below(levels));
    return v;
}

// Direct pmf summation with exact binomial coefficients.
double binomial_tail_direct(int k, int n, double p) {
    double total = 0;
    for (int i = k; i <= n; ++i) {
        double coef = 1;
        for (int j = 1; j <= i; ++j) coef = coef * (n - i + j) / j;
        total += coef * std::pow(p, i) * std::pow(1 - p, n - i);
    }
    return total;
}

} // namespace

TEST(MannWhitney, SeparatedSamples) {
    std::vector<double> xs{1, 2, 3}, ys{4, 5, 6};
    const auto r = mann_whitney(xs, ys);
    EXPECT_DOUBLE_EQ(r.u, 0);
    EXPECT_TRUE(r.exact);
    EXPECT_NEAR(r.p_two_tailed, 0.1, 1e-12);
}

TEST(MannWhitney, IdenticalSamples) {
    std::vector<double> xs{3, 1, 2, 2}, ys{2, 3, 2, 1};
    const auto r = mann_whitney(xs, ys);
    EXPECT_DOUBLE_EQ(r.effect_cles, 0.5);
    EXPECT_DOUBLE_EQ(r.effect_rank_biserial, 0);
    EXPECT_NEAR(r.p_two_tailed, 1.0, 1e-12);
}

TEST(MannWhitney, AllPairsCount) {
    std::vector<double> xs{10, 11}, ys{1, 2};
    const auto r = mann_whitney(xs, ys);
    EXPECT_DOUBLE_EQ(r.u, 4);
    EXPECT_DOUBLE_EQ(r.effect_cles, 1.0);
}

TEST(MannWhitney, UStatisticsSumAndPairOracle) {
    Rng rng(12);
    for (int trial = 0; trial < 300; ++trial) {
        const auto xs = random_vector(rng, 1 + rng.below(20), 6);
        const auto ys = random_vector(rng, 1 + rng.below(20), 6);
        const auto r = mann_whitney(xs, ys);
        EXPECT_NEAR(r.u + r.u_y, static_cast<double>(xs.size() * ys.size()), 1e-9);
        double pairs = 0;
        for (double x : xs) {
            for (double y : ys) pairs += x > y ? 1.0 : (x == y ? 0.5 : 0.0);
        }
        EXPECT_NEAR(r.u, pairs, 1e-9);
        EXPECT_GE(r.p_two_tailed, 0.0);
        EXPECT_LE(r.p_two_tailed, 1.0);
    }
}

TEST(MannWhitney, LargeSampleUsesNormalApproximation) {
    std::vector<double> xs, ys;
    for (int i = 0; i < 30; ++i) {
        xs.push_back(i);
        ys.push_back(i + 10);
    }
    const auto r = mann_whitney(xs, ys);
    EXPECT_FALSE(r.exact);
    EXPECT_LT(r.z, 0);
    EXPECT_NEAR(r.p_two_tailed, 2 * normal_sf(std::abs(r.z)), 1e-15);
}

TEST(Bonferroni, Examples) {
    std::vector<double> a{0.01, 0.2};
    EXPECT_EQ(bonferroni(a), (std::vector<double>{0.02, 0.4}));
    std::vector<double> b{0.9};
    EXPECT_EQ(bonferroni(b, 10), (std::vector<double>{1.0}));
    std::vector<double> c;
    EXPECT_TRUE(bonferroni(c).empty());
}

TEST(Binomial, Examples) {
    EXPECT_DOUBLE_EQ(binomial_test_one_sided(0, 10, 0.3), 1.0);
    EXPECT_NEAR(binomial_test_one_sided(5, 5, 0.5), 0.03125, 1e-15);
    EXPECT_NEAR(binomial_test_one_sided(15, 20, 0.5), 0.020694732666015625, 1e-12);
    EXPECT_NEAR(binomial_test_one_sided(30, 60, 0.5), 0.5512890865042848, 1e-12);
    EXPECT_LT(binomial_test_one_sided(50, 50, 0.36), 1e-9);
}

TEST(Binomial, MatchesDirectSumAndIsMonotone) {
    for (int n = 1; n <= 30; ++n) {
        for (double p : {0.05, 0.2, 0.36, 0.5, 0.8}) {
            double prev = 2;
            for (int k = 0; k <= n; ++k) {
                const double got = binomial_test_one_sided(k, n, p);
                EXPECT_NEAR(got, binomial_tail_direct(k, n, p), 1e-12) << n << " " << k << " " << p;
                EXPECT_LE(got, prev);
                prev = got;
            }
        }
    }
    EXPECT_THROW(binomial_test_one_sided(6, 5, 0.5), std::invalid_argument);
}

TEST(Gini, Examples) {
    std::vector<double> equal{3, 3, 3};
    EXPECT_NEAR(lorenz_gini(equal).gini, 0.0, 1e-15);
    std::vector<double> a{0, 0, 0, 10};
    EXPECT_NEAR(lorenz_gini(a).gini, 0.75, 1e-12);
    EXPECT_NEAR(lorenz_gini(a).gini_pairwise, 0.75, 1e-12);
    std::vector<double> b{1, 2, 3, 4};
    EXPECT_NEAR(lorenz_gini(b).gini, 0.25, 1e-12);
    std::vector<double> zero{0, 0};
    EXPECT_THROW(lorenz_gini(zero), std::invalid_argument);
}

TEST(Gini, LorenzCurveShape) {
    std::vector<double> v{4, 1, 3, 2};
    const auto r = lorenz_gini(v);
    ASSERT_EQ(r.points.size(), 5u);
    EXPECT_EQ(r.points.front(), (std::pair<double, double>{0, 0}));
    EXPECT_EQ(r.points.back(), (std::pair<double, double>{1, 1}));
    EXPECT_DOUBLE_EQ(r.points[1].second, 0.1);
    for (std::size_t i = 1; i < r.points.size(); ++i) EXPECT_LE(r.points[i].second, r.points[i].first + 1e-15);
}

TEST(Gini, ScaleInvarianceAndTransfers) {
    Rng rng(13);
    for (int trial = 0; trial < 200; ++trial) {
        auto v = random_vector(rng, 2 + rng.below(30), 20);
        v[0] += 1;
        const double g = lorenz_gini(v).gini;
        auto scaled = v;
        for (auto& x : scaled) x *= 3.5;
        EXPECT_NEAR(lorenz_gini(scaled).gini, g, 1e-12);

        auto poor = std::min_element(v.begin(), v.end());
        auto rich = std::max_element(v.begin(), v.end());
        if (*poor >= 1 && *rich > *poor) {
            auto moved = v;
            moved[static_cast<std::size_t>(poor - v.begin())] -= 1;
            moved[static_cast<std::size_t>(rich - v.begin())] += 1;
            EXPECT_GT(lorenz_gini(moved).gini, g);
        }
    }
}

TEST(ChiSquare, PublishedGenderTables) {
    const auto ra = chi_square_phi({{{53416, 26281}, {57126, 20714}}});
    EXPECT_NEAR(ra.chi2, 762.2, 0.5);
    EXPECT_NEAR(ra.phi, 0.0696, 0.0005);
    EXPECT_EQ(ra.n, 157537u);
    const auto r = chi_square_phi({{{139163, 74384}, {216190, 78823}}});
    EXPECT_NEAR(r.chi2, 3874.6, 2.0);
    EXPECT_NEAR(r.phi, 0.0873, 0.0005);
    EXPECT_EQ(r.n, 508560u);
}

TEST(ChiSquare, IndependenceAndDegenerate) {
    const auto r = chi_square_phi({{{10, 10}, {10, 10}}});
    EXPECT_DOUBLE_EQ(r.chi2, 0);
    EXPECT_DOUBLE_EQ(r.phi, 0);
    EXPECT_DOUBLE_EQ(r.p, 1);
    EXPECT_THROW(chi_square_phi({{{5, 5}, {0, 0}}}), std::invalid_argument);
}

TEST(ChiSquare, TransposeAndRowSwapInvariance) {
    Rng rng(14);
    for (int trial = 0; trial < 200; ++trial) {
        std::array<std::array<std::uint64_t, 2>, 2> t{{{1 + rng.below(100), 1 + rng.below(100)},
                                                       {1 + rng.below(100), 1 + rng.below(100)}}};
        const auto base = chi_square_phi(t);
        const auto tr = chi_square_phi({{{t[0][0], t[1][0]}, {t[0][1], t[1][1]}}});
        const auto sw = chi_square_phi({{t[1], t[0]}});
        EXPECT_NEAR(tr.chi2, base.chi2, 1e-9 * (1 + base.chi2));
        EXPECT_NEAR(sw.phi, base.phi, 1e-12);
    }
}

TEST(OddsRatio, Examples) {
    EXPECT_NEAR(odds_ratio_percent(0.3076), 36.0, 0.1);
    EXPECT_NEAR(odds_ratio_percent(0.3814), 46.4, 0.1);
    EXPECT_DOUBLE_EQ(odds_ratio_percent(0), 0);
}

TEST(OddsRatio, MultiplicativeIdentity) {
    Rng rng(15);
    for (int i = 0; i < 500; ++i) {
        const double a = rng.uniform() * 4 - 2, b = rng.uniform() * 4 - 2;
        const double lhs = (1 + odds_ratio_percent(a) / 100) * (1 + odds_ratio_percent(b) / 100);
        EXPECT_NEAR(lhs, 1 + odds_ratio_percent(a + b) / 100, 1e-9);
    }
}
