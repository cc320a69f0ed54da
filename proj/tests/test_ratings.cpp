#include "esgport/errors.hpp"
#include "esgport/ratings.hpp"
#include "test_support.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>
#include <sstream>

namespace esgport::ratings {
namespace {

const double kNaN = std::numeric_limits<double>::quiet_NaN();

TEST(Harmonize, MidpointsOfSevenEqualBands) {
    EXPECT_NEAR(harmonize_msci(LetterGrade::CCC), 100.0 / 14.0, 1e-12);
    EXPECT_DOUBLE_EQ(harmonize_msci(LetterGrade::BBB), 50.0);
    EXPECT_NEAR(harmonize_msci(LetterGrade::AAA), 1300.0 / 14.0, 1e-12);
    double prev = 0.0;
    for (auto g : kAllGrades) {
        const double v = harmonize_msci(g);
        EXPECT_GT(v, prev);
        EXPECT_LT(v, 100.0);
        prev = v;
    }
}

TEST(Harmonize, ParsesGradeTokens) {
    EXPECT_EQ(parse_grade("AA"), LetterGrade::AA);
    EXPECT_EQ(parse_grade(" ccc "), LetterGrade::CCC);
    EXPECT_FALSE(parse_grade("AAAA").has_value());
    EXPECT_EQ(to_string(LetterGrade::BB), "BB");
}

TEST(Panel, RejectsOutOfRangeAndDuplicateIds) {
    EXPECT_THROW(EsgPanel({"a", "b"}, {"r"}, Eigen::MatrixXd::Constant(2, 1, 101.0)), Error);
    EXPECT_THROW(EsgPanel({"a", "a"}, {"r"}, Eigen::MatrixXd::Constant(2, 1, 50.0)), Error);
    EXPECT_THROW(EsgPanel({"a"}, {"r", "r"}, Eigen::MatrixXd::Constant(1, 2, 50.0)), Error);
    EXPECT_THROW(EsgPanel({"a"}, {"r"}, Eigen::MatrixXd::Constant(2, 1, 50.0)), Error);
}

TEST(Standardize, HandComputedZScores) {
    Eigen::MatrixXd v(3, 1);
    v << 0, 50, 100;
    const auto z = standardize(EsgPanel({"a", "b", "c"}, {"r"}, v));
    EXPECT_NEAR(z.values()(0, 0), -1.0, 1e-12);
    EXPECT_NEAR(z.values()(1, 0), 0.0, 1e-12);
    EXPECT_NEAR(z.values()(2, 0), 1.0, 1e-12);
}

TEST(Standardize, ConstantColumnIsDegenerate) {
    const EsgPanel p({"a", "b", "c"}, {"r"}, Eigen::MatrixXd::Constant(3, 1, 5.0));
    try {
        standardize(p);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::DegenerateColumn);
    }
}

TEST(Standardize, IdempotentAndKeepsMissingCells) {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(0.0, 100.0);
    Eigen::MatrixXd v(40, 3);
    PresenceMask m = PresenceMask::Constant(40, 3, true);
    for (int i = 0; i < 40; ++i)
        for (int j = 0; j < 3; ++j) v(i, j) = u(rng);
    m(3, 1) = false;
    v(3, 1) = kNaN;
    std::vector<std::string> firms;
    for (int i = 0; i < 40; ++i) firms.push_back("f" + std::to_string(i));
    const EsgPanel p(firms, {"x", "y", "z"}, v, m);
    const auto z1 = standardize(p);
    const auto z2 = standardize(z1);
    EXPECT_FALSE(z1.has(3, 1));
    for (int j = 0; j < 3; ++j) {
        double sum = 0.0, ss = 0.0;
        int n = 0;
        for (int i = 0; i < 40; ++i) {
            if (!z1.has(i, j)) continue;
            sum += z1.values()(i, j);
            ss += z1.values()(i, j) * z1.values()(i, j);
            ++n;
            EXPECT_NEAR(z1.values()(i, j), z2.values()(i, j), 1e-9);
        }
        EXPECT_NEAR(sum / n, 0.0, 1e-9);
        EXPECT_NEAR(std::sqrt((ss - sum * sum / n) / (n - 1)), 1.0, 1e-9);
    }
}

TEST(Correlation, SelfAndAntiCorrelation) {
    Eigen::MatrixXd v(4, 2);
    v << 10, 90, 20, 80, 40, 60, 70, 30;
    const auto c = rater_correlation(EsgPanel({"a", "b", "c", "d"}, {"x", "y"}, v));
    EXPECT_NEAR(c(0, 0), 1.0, 1e-12);
    EXPECT_NEAR(c(0, 1), -1.0, 1e-12);
    EXPECT_EQ(c(0, 1), c(1, 0));
}

TEST(Correlation, InsufficientOverlapBelowThreeJointFirms) {
    Eigen::MatrixXd v(4, 2);
    v << 10, kNaN, 20, kNaN, 40, 60, 70, 30;
    PresenceMask m = v.array().isFinite();
    try {
        rater_correlation(EsgPanel({"a", "b", "c", "d"}, {"x", "y"}, v, m));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::InsufficientOverlap);
    }
}

TEST(Correlation, PairwiseCompleteMatchesDirectPearson) {
    Eigen::MatrixXd v(6, 2);
    v << 1, 2, 2, kNaN, 3, 7, 4, 1, kNaN, 5, 6, 6;
    PresenceMask m = v.array().isFinite();
    std::vector<std::string> firms{"a", "b", "c", "d", "e", "f"};
    const auto c = rater_correlation(EsgPanel(firms, {"x", "y"}, v, m));
    // joint rows a, c, d, f: x = 1,3,4,6; y = 2,7,1,6
    const double mx = 3.5, my = 4.0;
    const double sxy = (1 - mx) * (2 - my) + (3 - mx) * (7 - my) + (4 - mx) * (1 - my) + (6 - mx) * (6 - my);
    const double sxx = 6.25 + 0.25 + 0.25 + 6.25;
    const double syy = 4 + 9 + 9 + 4;
    EXPECT_NEAR(c(0, 1), sxy / std::sqrt(sxx * syy), 1e-12);
}

TEST(Correlation, PropertySymmetricUnitDiagonalAffineInvariant) {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0.0, 100.0);
    std::uniform_real_distribution<double> scale(0.1, 0.9);
    for (int trial = 0; trial < 50; ++trial) {
        const int n = 10 + trial, k = 2 + trial % 4;
        Eigen::MatrixXd v(n, k);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < k; ++j) v(i, j) = u(rng);
        std::vector<std::string> firms, raters;
        for (int i = 0; i < n; ++i) firms.push_back("f" + std::to_string(i));
        for (int j = 0; j < k; ++j) raters.push_back("r" + std::to_string(j));
        const auto c = rater_correlation(EsgPanel(firms, raters, v));
        EXPECT_EQ((c - c.transpose()).cwiseAbs().maxCoeff(), 0.0);
        for (int j = 0; j < k; ++j) EXPECT_NEAR(c(j, j), 1.0, 1e-12);
        EXPECT_LE(c.cwiseAbs().maxCoeff(), 1.0);
        Eigen::MatrixXd w = v;
        const double a = scale(rng);
        w.col(0) = (a * v.col(0)).array() + 5.0;
        const auto c2 = rater_correlation(EsgPanel(firms, raters, w));
        EXPECT_LT((c - c2).cwiseAbs().maxCoeff(), 1e-9);
    }
}

TEST(PanelCsv, LetterColumnIsHarmonizedAndEmptyCellsAreMissing) {
    std::istringstream in("firm,A4,MSCI\nf1,55.5,AA\nf2,,CCC\nf3,10,\n");
    const auto p = read_panel_csv(in);
    ASSERT_EQ(p.n_firms(), 3);
    EXPECT_NEAR(p.values()(0, 1), harmonize_msci(LetterGrade::AA), 1e-12);
    EXPECT_NEAR(p.values()(1, 1), 100.0 / 14.0, 1e-12);
    EXPECT_FALSE(p.has(1, 0));
    EXPECT_FALSE(p.has(2, 1));
    EXPECT_DOUBLE_EQ(p.values()(0, 0), 55.5);
}

TEST(PanelCsv, RoundTripIsLossless) {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0.0, 100.0);
    Eigen::MatrixXd v(5, 3);
    for (int i = 0; i < 5; ++i)
        for (int j = 0; j < 3; ++j) v(i, j) = u(rng);
    PresenceMask m = PresenceMask::Constant(5, 3, true);
    m(2, 2) = false;
    v(2, 2) = kNaN;
    const EsgPanel p({"a", "b", "c", "d", "e"}, {"x", "y", "z"}, v, m);
    std::ostringstream out;
    write_panel_csv(out, p);
    std::istringstream back(out.str());
    const auto q = read_panel_csv(back);
    EXPECT_EQ(q.firms(), p.firms());
    EXPECT_EQ(q.raters(), p.raters());
    EXPECT_TRUE((q.present() == p.present()).all());
    for (int i = 0; i < 5; ++i)
        for (int j = 0; j < 3; ++j)
            if (p.has(i, j)) EXPECT_EQ(q.values()(i, j), p.values()(i, j));
}

TEST(PanelCsv, MissingFileNamesThePath) {
    try {
        read_panel_csv(std::filesystem::path("/nonexistent/panel.csv"));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::FileNotFound);
        EXPECT_NE(std::string(e.what()).find("/nonexistent/panel.csv"), std::string::npos);
    }
}

TEST(PanelCsv, OutOfRangeScoreIsInvalidPanel) {
    std::istringstream in("firm,A4\nf1,120\n");
    try {
        read_panel_csv(in);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::InvalidPanel);
        EXPECT_EQ(e.category(), ErrorCategory::Data);
    }
}

}  // namespace
}  // namespace esgport::ratings
