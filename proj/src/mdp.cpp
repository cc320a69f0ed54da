#include "esgport/mdp.hpp"

#include "esgport/errors.hpp"
#include "esgport/linalg.hpp"

#include <cmath>

namespace esgport::env {

void FiniteMdp::validate() const {
    if (n_states < 1 || n_actions < 1) throw Error(ErrorCode::InvalidArgument, "MDP needs states and actions");
    if (static_cast<int>(transition.size()) != n_actions || reward.rows() != n_states || reward.cols() != n_actions) {
        throw Error(ErrorCode::InvalidArgument, "MDP dimension mismatch");
    }
    for (const auto& p : transition) {
        if (p.rows() != n_states || p.cols() != n_states) throw Error(ErrorCode::InvalidArgument, "bad transition shape");
        if ((p.array() < 0.0).any()) throw Error(ErrorCode::InvalidArgument, "negative transition probability");
        for (int s = 0; s < n_states; ++s) {
            if (std::abs(p.row(s).sum() - 1.0) > 1e-12) {
                throw Error(ErrorCode::InvalidArgument, "transition rows must sum to 1");
            }
        }
    }
}

Eigen::VectorXd evaluate_policy(const FiniteMdp& mdp, const std::vector<int>& policy, double discount) {
    mdp.validate();
    if (static_cast<int>(policy.size()) != mdp.n_states) throw Error(ErrorCode::InvalidArgument, "policy size");
    Eigen::MatrixXd p(mdp.n_states, mdp.n_states);
    Eigen::VectorXd r(mdp.n_states);
    for (int s = 0; s < mdp.n_states; ++s) {
        p.row(s) = mdp.transition.at(static_cast<std::size_t>(policy[s])).row(s);
        r(s) = mdp.reward(s, policy[s]);
    }
    const Eigen::MatrixXd a = Eigen::MatrixXd::Identity(mdp.n_states, mdp.n_states) - discount * p;
    return linalg::solve_checked(a, r);
}

MdpSolution value_iteration(const FiniteMdp& mdp, double discount, double tol, int max_iter) {
    mdp.validate();
    if (!(discount >= 0.0 && discount < 1.0)) throw Error(ErrorCode::InvalidArgument, "discount must be in [0,1)");
    MdpSolution sol;
    Eigen::VectorXd v = Eigen::VectorXd::Zero(mdp.n_states);
    Eigen::MatrixXd q(mdp.n_states, mdp.n_actions);
    auto backup = [&](const Eigen::VectorXd& values) {
        for (int a = 0; a < mdp.n_actions; ++a) {
            q.col(a) = mdp.reward.col(a) + discount * (mdp.transition[static_cast<std::size_t>(a)] * values);
        }
    };
    for (sol.iterations = 1; sol.iterations <= max_iter; ++sol.iterations) {
        backup(v);
        const Eigen::VectorXd next = q.rowwise().maxCoeff();
        const double change = (next - v).cwiseAbs().maxCoeff();
        v = next;
        if (change < tol) break;
    }
    backup(v);
    sol.policy.resize(static_cast<std::size_t>(mdp.n_states));
    for (int s = 0; s < mdp.n_states; ++s) {
        int best = 0;
        for (int a = 1; a < mdp.n_actions; ++a) {
            if (q(s, a) > q(s, best) + 1e-12) best = a;
        }
        sol.policy[static_cast<std::size_t>(s)] = best;
    }
    sol.values = evaluate_policy(mdp, sol.policy, discount);
    return sol;
}

}  // namespace esgport::env
