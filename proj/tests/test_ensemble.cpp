#include "esgport/ensemble.hpp"
#include "esgport/errors.hpp"
#include "esgport/synthgen.hpp"
#include "test_support.hpp"

#include <gtest/gtest.h>

#include <array>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>
#include <vector>

namespace esgport::ensemble {
namespace {

TEST(RowMethods, HandValues) {
    const std::array<double, 4> row{80, 60, 70, 90};
    EXPECT_DOUBLE_EQ(centroid(row), 75.0);
    EXPECT_DOUBLE_EQ(median(row), 75.0);
    const std::array<double, 4> outlier{80, 60, 70, 9000};
    EXPECT_DOUBLE_EQ(median(outlier), 75.0);
    const std::array<double, 3> odd{10, 20, 30};
    EXPECT_DOUBLE_EQ(median(odd), 20.0);
    const std::array<double, 2> pair{0, 100};
    EXPECT_DOUBLE_EQ(centroid(pair), 50.0);
    const std::array<double, 2> mm{60, 90};
    EXPECT_DOUBLE_EQ(alpha_maxmin(mm, 0.5), 75.0);
    const std::array<double, 3> three{60, 70, 90};
    EXPECT_DOUBLE_EQ(alpha_maxmin(three, 0.0), 90.0);
    EXPECT_DOUBLE_EQ(alpha_maxmin(three, 1.0), 60.0);
}

TEST(RowMethods, IncompleteRowAndAlphaRange) {
    const std::array<double, 2> bad{1.0, std::numeric_limits<double>::quiet_NaN()};
    EXPECT_THROW(centroid(bad), Error);
    EXPECT_THROW(median(bad), Error);
    const std::array<double, 2> ok{1.0, 2.0};
    try {
        alpha_maxmin(ok, 1.5);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::AlphaOutOfRange);
    }
}

TEST(RowMethods, PropertyBoundsMonotoneAndPermutationInvariant) {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> u(0.0, 100.0);
    for (int trial = 0; trial < 500; ++trial) {
        std::vector<double> row(2 + trial % 5);
        for (auto& x : row) x = u(rng);
        const double lo = *std::min_element(row.begin(), row.end());
        const double hi = *std::max_element(row.begin(), row.end());
        for (double v : {centroid(row), median(row), alpha_maxmin(row, 0.3)}) {
            EXPECT_GE(v, lo - 1e-12);
            EXPECT_LE(v, hi + 1e-12);
        }
        double prev = std::numeric_limits<double>::infinity();
        for (double a = 0.0; a <= 1.0 + 1e-12; a += 0.1) {
            const double v = alpha_maxmin(row, std::min(a, 1.0));
            EXPECT_LE(v, prev + 1e-12);
            prev = v;
        }
        std::vector<double> shuffled = row;
        std::shuffle(shuffled.begin(), shuffled.end(), rng);
        EXPECT_NEAR(centroid(shuffled), centroid(row), 1e-12);
        EXPECT_EQ(median(shuffled), median(row));
        EXPECT_EQ(alpha_maxmin(shuffled, 0.3), alpha_maxmin(row, 0.3));
        if (row.size() >= 3) {
            std::vector<double> spiked = row;
            const auto big = std::max_element(spiked.begin(), spiked.end());
            *big = 1e12;
            EXPECT_EQ(median(spiked), median(row));
        }
    }
}

ratings::StandardizedPanel zpanel(const Eigen::MatrixXd& v) {
    std::vector<std::string> firms, raters;
    for (Eigen::Index i = 0; i < v.rows(); ++i) firms.push_back("f" + std::to_string(i));
    for (Eigen::Index j = 0; j < v.cols(); ++j) raters.push_back("r" + std::to_string(j));
    return ratings::StandardizedPanel(firms, raters, v);
}

TEST(Pca, IdenticalColumnsGiveEqualLoadings) {
    Eigen::MatrixXd v(5, 2);
    v.col(0) << -1.2, -0.4, 0.1, 0.5, 1.0;
    v.col(1) = v.col(0);
    const auto r = pca_ensemble(zpanel(v));
    ASSERT_TRUE(r.pca);
    EXPECT_NEAR(r.pca->loadings(0), 1.0 / std::sqrt(2.0), 1e-12);
    EXPECT_NEAR(r.pca->loadings(1), 1.0 / std::sqrt(2.0), 1e-12);
    EXPECT_NEAR(r.pca->explained_variance, 1.0, 1e-9);
    for (Eigen::Index i = 0; i < 5; ++i) EXPECT_NEAR(r.scores(i), std::sqrt(2.0) * v(i, 0), 1e-12);
}

TEST(Pca, DiagonalCovarianceHandOracle) {
    // Columns with covariance [[1,0],[0,4]]: x = (1,-1,1,-1)*sqrt(3)/2... built so cov is exact.
    Eigen::MatrixXd v(4, 2);
    v << 1, 2, -1, 2, 1, -2, -1, -2;
    v.col(0) *= std::sqrt(0.75);
    v.col(1) *= std::sqrt(0.75);
    const auto r = pca_ensemble(zpanel(v));
    EXPECT_NEAR(r.pca->covariance(0, 0), 1.0, 1e-12);
    EXPECT_NEAR(r.pca->covariance(1, 1), 4.0, 1e-12);
    EXPECT_NEAR(r.pca->covariance(0, 1), 0.0, 1e-12);
    EXPECT_NEAR(std::abs(r.pca->loadings(0)), 0.0, 1e-12);
    EXPECT_NEAR(std::abs(r.pca->loadings(1)), 1.0, 1e-12);
    EXPECT_NEAR(r.pca->eigenvalue, 4.0, 1e-12);
}

TEST(Pca, InsufficientRowsAndZeroCovariance) {
    EXPECT_THROW(pca_ensemble(zpanel(Eigen::MatrixXd::Random(2, 2))), Error);
    try {
        pca_ensemble(zpanel(Eigen::MatrixXd::Zero(6, 3)));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::DegenerateCovariance);
    }
}

TEST(Pca, MatchesJacobiOracleOnFourRaterPanel) {
    synth::SynthConfig cfg;
    cfg.seed = 99;
    cfg.n_firms = 500;
    cfg.rater_corr_target = synth::reference_rater_correlation();
    cfg.raters = synth::reference_rater_names();
    const auto panel = synth::gen_esg_panel(cfg);
    const auto r = combine(panel, {Method::Pca, 0.5});
    ASSERT_TRUE(r.pca);
    const auto& d = *r.pca;
    const auto [vals, vecs] = testkit::jacobi_eigen(d.covariance);
    EXPECT_NEAR(d.eigenvalue, vals(0), 1e-10);
    EXPECT_LE((d.covariance * d.loadings - d.eigenvalue * d.loadings).norm(), 1e-8);
    EXPECT_NEAR(std::abs(d.loadings.dot(vecs.col(0))), 1.0, 1e-10);
    EXPECT_NEAR(d.loadings.norm(), 1.0, 1e-12);
    EXPECT_GE(d.loadings.sum(), 0.0);
    EXPECT_NEAR(d.explained_variance, vals(0) / vals.sum(), 1e-10);
}

TEST(Pca, ScoresInvariantToRaterReordering) {
    synth::SynthConfig cfg;
    cfg.seed = 4;
    cfg.n_firms = 60;
    cfg.rater_corr_target = synth::reference_rater_correlation();
    const auto panel = synth::gen_esg_panel(cfg);
    const auto a = combine(panel, {Method::Pca, 0.5});
    const auto b = combine(panel.permute_raters({3, 1, 0, 2}), {Method::Pca, 0.5});
    EXPECT_LT((a.scores - b.scores).cwiseAbs().maxCoeff(), 1e-10);
    for (auto m : {Method::Centroid, Method::Median, Method::AlphaMaxmin}) {
        const auto x = combine(panel, {m, 0.5});
        const auto y = combine(panel.permute_raters({2, 0, 3, 1}), {m, 0.5});
        EXPECT_LT((x.scores - y.scores).cwiseAbs().maxCoeff(), 1e-12);
    }
}

TEST(Combine, DropsIncompleteRowsAndCountsThem) {
    Eigen::MatrixXd v(3, 2);
    v << 10, 20, std::numeric_limits<double>::quiet_NaN(), 30, 40, 50;
    const ratings::EsgPanel p({"a", "b", "c"}, {"x", "y"}, v, v.array().isFinite());
    const auto r = combine(p, {Method::Centroid, 0.5});
    EXPECT_EQ(r.dropped, 1u);
    ASSERT_EQ(r.firms.size(), 2u);
    EXPECT_EQ(r.firms[1], "c");
    EXPECT_DOUBLE_EQ(r.scores(1), 45.0);
}

TEST(Combine, ScoresCsvRoundTrip) {
    synth::SynthConfig cfg;
    cfg.seed = 8;
    cfg.n_firms = 20;
    cfg.rater_corr_target = Eigen::MatrixXd::Identity(3, 3);
    const auto r = combine(synth::gen_esg_panel(cfg), {Method::AlphaMaxmin, 0.25});
    std::ostringstream out;
    write_scores_csv(out, r);
    std::istringstream in(out.str());
    const auto back = read_scores_csv(in);
    EXPECT_EQ(back.firms, r.firms);
    EXPECT_EQ(back.scores, r.scores);
}

TEST(Combine, MethodNames) {
    for (auto m : {Method::Centroid, Method::Median, Method::Pca, Method::AlphaMaxmin}) {
        EXPECT_EQ(parse_method(to_string(m)), m);
    }
    EXPECT_FALSE(parse_method("mean").has_value());
}

}  // namespace
}  // namespace esgport::ensemble
