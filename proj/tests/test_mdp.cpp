#include "esgport/errors.hpp"
#include "esgport/mdp.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

namespace esgport::env {
namespace {

FiniteMdp toy_three_state() {
    // states: 0 all-cash, 1 invested, 2 drawdown; actions: 0 hold, 1 switch
    FiniteMdp m;
    m.n_states = 3;
    m.n_actions = 2;
    Eigen::MatrixXd hold(3, 3), sw(3, 3);
    hold << 0.9, 0.1, 0.0,
            0.0, 0.8, 0.2,
            0.3, 0.0, 0.7;
    sw << 0.2, 0.8, 0.0,
          0.6, 0.3, 0.1,
          0.1, 0.5, 0.4;
    m.transition = {hold, sw};
    m.reward.resize(3, 2);
    m.reward << 0.0, -0.1,
                1.0, 0.2,
               -1.0, -0.3;
    return m;
}

/// Exhaustive oracle: evaluate every deterministic policy by solving (I - gP)V = R
/// and keep the one with the pointwise-largest values.
std::pair<std::vector<int>, Eigen::VectorXd> enumerate_policies(const FiniteMdp& m, double discount) {
    const int combos = static_cast<int>(std::pow(m.n_actions, m.n_states));
    std::vector<int> best_policy;
    Eigen::VectorXd best;
    for (int code = 0; code < combos; ++code) {
        std::vector<int> pol(m.n_states);
        int c = code;
        for (int s = 0; s < m.n_states; ++s) {
            pol[s] = c % m.n_actions;
            c /= m.n_actions;
        }
        Eigen::MatrixXd p(m.n_states, m.n_states);
        Eigen::VectorXd r(m.n_states);
        for (int s = 0; s < m.n_states; ++s) {
            p.row(s) = m.transition[pol[s]].row(s);
            r(s) = m.reward(s, pol[s]);
        }
        const Eigen::MatrixXd a = Eigen::MatrixXd::Identity(m.n_states, m.n_states) - discount * p;
        const Eigen::VectorXd v = a.fullPivLu().solve(r);
        if (best.size() == 0 || (v.array() > best.array() + 1e-12).any()) {
            best = v;
            best_policy = pol;
        }
    }
    return {best_policy, best};
}

TEST(ValueIteration, MatchesExhaustivePolicyEnumeration) {
    const auto m = toy_three_state();
    for (double discount : {0.5, 0.9, 0.99}) {
        const auto sol = value_iteration(m, discount);
        const auto [pol, v] = enumerate_policies(m, discount);
        EXPECT_EQ(sol.policy, pol);
        EXPECT_EQ(evaluate_policy(m, sol.policy, discount), evaluate_policy(m, pol, discount));
        EXPECT_LT((sol.values - v).cwiseAbs().maxCoeff(), 1e-12);
        // Bellman fixed point
        for (int s = 0; s < 3; ++s) {
            double best = -1e300;
            for (int a = 0; a < 2; ++a) {
                best = std::max(best, m.reward(s, a) + discount * m.transition[a].row(s).dot(sol.values));
            }
            EXPECT_NEAR(sol.values(s), best, 1e-10);
        }
    }
}

TEST(ValueIteration, RandomMdpsAgreeWithEnumeration) {
    std::mt19937_64 rng(6);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 50; ++trial) {
        FiniteMdp m;
        m.n_states = 3;
        m.n_actions = 3;
        for (int a = 0; a < 3; ++a) {
            Eigen::MatrixXd p(3, 3);
            for (int s = 0; s < 3; ++s) {
                for (int t = 0; t < 3; ++t) p(s, t) = u(rng);
                p.row(s) /= p.row(s).sum();
            }
            m.transition.push_back(p);
        }
        m.reward = Eigen::MatrixXd::NullaryExpr(3, 3, [&] { return u(rng) * 2 - 1; });
        const auto sol = value_iteration(m, 0.9);
        const auto [pol, v] = enumerate_policies(m, 0.9);
        EXPECT_EQ(sol.policy, pol);
        EXPECT_LT((sol.values - v).cwiseAbs().maxCoeff(), 1e-12);
    }
}

TEST(Mdp, ValidationRejectsBadTransitions) {
    auto m = toy_three_state();
    m.transition[0](0, 0) = 0.5;
    EXPECT_THROW(m.validate(), Error);
    EXPECT_THROW(value_iteration(toy_three_state(), 1.0), Error);
}

}  // namespace
}  // namespace esgport::env
