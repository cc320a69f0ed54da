#include "esgport/dmv.hpp"
#include "esgport/errors.hpp"
#include "esgport/policy.hpp"
#include "esgport/reward.hpp"
#include "test_support.hpp"

#include <gtest/gtest.h>

#include <random>

namespace esgport::policy {
namespace {

TEST(PolicyParams, SimplexValidation) {
    EXPECT_NO_THROW(PolicyParams(Eigen::Vector3d(0.2, 0.3, 0.5)));
    EXPECT_THROW(PolicyParams(Eigen::Vector3d(0.2, 0.3, 0.4)), Error);
    EXPECT_THROW(PolicyParams(Eigen::Vector3d(-0.1, 0.6, 0.5)), Error);
    const auto c = PolicyParams::all_cash(2);
    EXPECT_EQ(c.cash(), 1.0);
    EXPECT_EQ(c.n_assets(), 2);
}

capm::AssetUniverse scalar_universe(const dmv::MarketParams& m) {
    capm::AssetUniverse u;
    u.mu_r = Eigen::VectorXd::Constant(1, m.mu_M - m.mu_f);
    u.Sigma_M = Eigen::MatrixXd::Constant(1, 1, m.sigma2_M);
    u.mu_gM = Eigen::VectorXd::Constant(1, m.mu_g);
    u.Sigma_gM = Eigen::MatrixXd::Constant(1, 1, m.sigma2_g);
    return u;
}

TEST(ClosedForm, SingleAssetTypeIGivesThreeQuarters) {
    dmv::MarketParams m;
    m.mu_f = 0.01;
    m.mu_M = 0.07;
    m.sigma2_M = 0.04;
    m.mu_g = 0.02;
    m.sigma2_g = 0.01;
    const auto p = closed_form_policy(scalar_universe(m), {dmv::InvestorType::TypeI, 2.0, 1.0, 1.0});
    EXPECT_NEAR(p.params.weights()(0), 0.75, 1e-12);
    EXPECT_NEAR(p.params.cash(), 0.25, 1e-12);
    EXPECT_EQ(p.events.clipped_negative, 0);
    EXPECT_FALSE(p.events.renormalized);
}

TEST(ClosedForm, NegativeOrZeroDemandIsAllCash) {
    const auto neg = project_demand(Eigen::Vector2d(-0.3, -1.0));
    EXPECT_EQ(neg.params.cash(), 1.0);
    EXPECT_EQ(neg.events.clipped_negative, 2);
    capm::AssetUniverse u;
    u.mu_r = Eigen::Vector2d::Zero();
    u.mu_gM = Eigen::Vector2d::Zero();
    u.Sigma_M = Eigen::Matrix2d::Identity() * 0.04;
    u.Sigma_gM = Eigen::Matrix2d::Zero();
    const auto zero = closed_form_policy(u, {dmv::InvestorType::TypeU, 2.0, 1.0, 1.0});
    EXPECT_EQ(zero.params.cash(), 1.0);
}

TEST(ClosedForm, LeveredDemandIsRenormalized) {
    const auto p = project_demand(Eigen::Vector3d(1.0, 0.5, -0.2));
    EXPECT_TRUE(p.events.renormalized);
    EXPECT_EQ(p.events.clipped_negative, 1);
    EXPECT_NEAR(p.params.weights()(0), 2.0 / 3.0, 1e-15);
    EXPECT_NEAR(p.params.weights()(1), 1.0 / 3.0, 1e-15);
    EXPECT_EQ(p.params.weights()(2), 0.0);
    EXPECT_NEAR(p.params.cash(), 0.0, 1e-15);
}

TEST(Search, ConfigValidation) {
    SearchConfig c;
    c.population = 0;
    EXPECT_THROW(c.validate(), Error);
    c = {};
    c.elite_fraction = 1.0;
    EXPECT_THROW(c.validate(), Error);
    c = {};
    c.initial_sd = 0.0;
    EXPECT_THROW(c.validate(), Error);
    c = {};
    EXPECT_EQ(c.elite_count(), 8);
}

TEST(Search, ConcaveQuadraticRecoversAnalyticArgmax) {
    // r(w) = -||w - target||^2 with target interior to the simplex
    std::mt19937_64 rng(12);
    for (int trial = 0; trial < 5; ++trial) {
        Eigen::VectorXd target = testkit::random_vector(rng, 4, 0.1, 1.0);
        target /= target.sum();
        SearchConfig cfg;
        cfg.seed = 100 + trial;
        const auto res = cross_entropy_search(
            [&](const PolicyParams& p) { return -(p.weights() - target).squaredNorm(); }, 4, cfg);
        EXPECT_LE((res.best.weights() - target).cwiseAbs().maxCoeff(), 1e-2);
        EXPECT_NEAR(res.best.weights().sum(), 1.0, 1e-9);
        EXPECT_GE(res.best.weights().minCoeff(), 0.0);
        for (std::size_t i = 1; i < res.best_history.size(); ++i) {
            EXPECT_GE(res.best_history[i], res.best_history[i - 1]);
        }
        EXPECT_EQ(res.evaluations, static_cast<long>(cfg.population) * cfg.iterations);
    }
}

TEST(Search, ConstantRewardKeepsFirstSample) {
    SearchConfig cfg;
    cfg.seed = 5;
    cfg.iterations = 3;
    PolicyParams first;
    bool seen = false;
    const auto res = cross_entropy_search(
        [&](const PolicyParams& p) {
            if (!seen) {
                first = p;
                seen = true;
            }
            return 1.0;
        },
        3, cfg);
    EXPECT_EQ(res.best.weights(), first.weights());
    EXPECT_EQ(res.best_reward, 1.0);
}

TEST(Search, SameSeedSameResult) {
    SearchConfig cfg;
    cfg.seed = 77;
    cfg.iterations = 30;
    auto f = [](const PolicyParams& p) { return -std::pow(p.weights()(0) - 0.3, 2) + p.weights()(1); };
    const auto a = cross_entropy_search(f, 3, cfg);
    const auto b = cross_entropy_search(f, 3, cfg);
    EXPECT_EQ(a.best.weights(), b.best.weights());
    EXPECT_EQ(a.best_history, b.best_history);
    cfg.seed = 78;
    const auto c = cross_entropy_search(f, 3, cfg);
    EXPECT_NE(a.best.weights(), c.best.weights());
}

TEST(Search, SingleAssetDmvRecoversClosedFormWeight) {
    std::mt19937_64 rng(31);
    int checked = 0;
    while (checked < 5) {
        const auto d = testkit::random_dmv(rng);
        const dmv::InvestorProfile prof{dmv::InvestorType::TypeU, d.gamma, d.theta, d.b};
        const double w_star = dmv::dmv_optimal_weight(d.market, prof).w;
        if (w_star <= 0.05 || w_star >= 0.95) continue;  // interior optimum only
        env::RewardSpec spec;
        spec.kind = env::RewardKind::DmvTypeU;
        spec.gamma = d.gamma;
        spec.b = d.b;
        spec.theta = d.theta;
        spec.rf = d.market.mu_f;
        const env::Moments r{Eigen::VectorXd::Constant(1, d.market.mu_M), Eigen::MatrixXd::Constant(1, 1, d.market.sigma2_M)};
        const env::Moments g{Eigen::VectorXd::Constant(1, d.market.mu_g), Eigen::MatrixXd::Constant(1, 1, d.market.sigma2_g)};
        SearchConfig cfg;
        cfg.seed = 900 + checked;
        const auto res = cross_entropy_search([&](const PolicyParams& p) { return env::reward(spec, p.risky(), r, g); }, 2, cfg);
        EXPECT_NEAR(res.best.weights()(0), w_star, 1e-2);
        // reward wiring agrees with the scalar objective
        EXPECT_NEAR(env::reward(spec, res.best.risky(), r, g), dmv::dmv_objective(res.best.weights()(0), d.market, prof), 1e-14);
        ++checked;
    }
}

TEST(Search, TypeNRewardEqualsTypeIPlusEsgSleeve) {
    std::mt19937_64 rng(2);
    const env::Moments r{testkit::random_vector(rng, 3, 0.0, 0.1), testkit::random_spd(rng, 3)};
    const env::Moments g{testkit::random_vector(rng, 3, 0.01, 0.1), testkit::random_spd(rng, 3)};
    env::RewardSpec n;
    n.kind = env::RewardKind::DmvTypeN;
    n.b = 0.8;
    env::RewardSpec i = n;
    i.kind = env::RewardKind::DmvTypeI;
    SearchConfig cfg;
    cfg.seed = 3;
    cfg.iterations = 50;
    const auto res = cross_entropy_search([&](const PolicyParams& p) { return env::reward(n, p.risky(), r, g); }, 4, cfg);
    const Eigen::VectorXd w = res.best.risky();
    EXPECT_GE(res.best_reward, env::reward(i, w, r, g) + n.b * w.dot(g.mean) - 1e-14);
}

TEST(Optimizer, InterfaceDelegatesToSearch) {
    SearchConfig cfg;
    cfg.seed = 9;
    cfg.iterations = 10;
    const CrossEntropyOptimizer opt(cfg);
    const PolicyOptimizer& base = opt;
    auto f = [](const PolicyParams& p) { return p.weights()(0); };
    EXPECT_EQ(base.optimize(f, 2).best.weights(), cross_entropy_search(f, 2, cfg).best.weights());
}

}  // namespace
}  // namespace esgport::policy
