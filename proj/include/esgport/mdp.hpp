/**
 * @file mdp.hpp
 * @brief Finite Markov decision process and value iteration.
 *
 * The trading environment is an MDP whose value function satisfies
 *   V(s) = max_a [ R(s,a) + discount * sum_s' P(s'|s,a) V(s') ].
 * This small solver pins that contract on toy problems.
 */
#pragma once

#include <Eigen/Dense>

#include <vector>

namespace esgport::env {

struct FiniteMdp {
    int n_states = 0;
    int n_actions = 0;
    /// transition[a](s, s') = P(s' | s, a); rows sum to 1.
    std::vector<Eigen::MatrixXd> transition;
    /// reward(s, a)
    Eigen::MatrixXd reward;

    void validate() const;
};

struct MdpSolution {
    Eigen::VectorXd values;
    std::vector<int> policy;  ///< greedy action per state, lowest index on ties
    int iterations = 0;
};

/// Exact value of a deterministic stationary policy (linear solve).
Eigen::VectorXd evaluate_policy(const FiniteMdp& mdp, const std::vector<int>& policy, double discount);

/// Value iteration to sup-norm change < tol, then the greedy policy is
/// evaluated exactly so the returned values are that policy's fixed point.
MdpSolution value_iteration(const FiniteMdp& mdp, double discount, double tol = 1e-13, int max_iter = 100000);

}  // namespace esgport::env
