/**
 * @file policy.hpp
 * @brief Static portfolio policies: the closed-form DMV demand mapped onto
 *        the simplex, and a seeded cross-entropy search over simplex weights.
 */
#pragma once

#include "esgport/capm.hpp"
#include "esgport/dmv.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <functional>
#include <memory>
#include <string_view>
#include <vector>

namespace esgport::policy {

/// n risky weights followed by the cash weight; nonnegative, sums to 1.
class PolicyParams {
public:
    PolicyParams() = default;
    /// Throws WeightsOffSimplex unless components >= 0 and sum to 1 within 1e-9.
    explicit PolicyParams(Eigen::VectorXd weights);

    static PolicyParams all_cash(Eigen::Index n_assets);

    const Eigen::VectorXd& weights() const noexcept { return weights_; }
    Eigen::Index n_assets() const noexcept { return weights_.size() - 1; }
    Eigen::VectorXd risky() const { return weights_.head(n_assets()); }
    double cash() const { return weights_(weights_.size() - 1); }

private:
    Eigen::VectorXd weights_;
};

struct ProjectionEvents {
    int clipped_negative = 0;   ///< risky demands below zero set to zero
    bool renormalized = false;  ///< risky demand summed above one and was scaled down
};

struct ClosedFormPolicy {
    PolicyParams params;
    Eigen::VectorXd raw_demand;
    ProjectionEvents events;
};

/// agent_demand for the profile's effective (b, theta), projected onto the simplex.
ClosedFormPolicy closed_form_policy(const capm::AssetUniverse& window, const dmv::InvestorProfile& profile);

/// Projection used by closed_form_policy.
ClosedFormPolicy project_demand(const Eigen::VectorXd& demand);

struct SearchConfig {
    int population = 64;
    double elite_fraction = 0.125;
    int iterations = 200;
    double initial_sd = 1.0;
    std::uint64_t seed = 0;

    void validate() const;
    int elite_count() const;
};

struct SearchResult {
    PolicyParams best;
    double best_reward = 0.0;
    std::vector<double> best_history;  ///< best-so-far after each iteration
    long evaluations = 0;
};

using EpisodeReward = std::function<double(const PolicyParams&)>;

/// Softmax image of an unconstrained vector.
Eigen::VectorXd softmax(const Eigen::VectorXd& z);

/**
 * Cross-entropy method over the (dimension)-simplex.
 *
 * Candidates are drawn as z ~ N(mean, diag(sd^2)) in unconstrained space and
 * mapped through softmax; mean and sd are refit to the elite fraction
 * (ties resolved by sample index). Returns the best candidate ever seen.
 */
SearchResult cross_entropy_search(const EpisodeReward& reward, Eigen::Index dimension, const SearchConfig& cfg);

/// Pluggable optimizer seam for alternative search methods.
class PolicyOptimizer {
public:
    virtual ~PolicyOptimizer() = default;
    virtual SearchResult optimize(const EpisodeReward& reward, Eigen::Index dimension) const = 0;
};

class CrossEntropyOptimizer final : public PolicyOptimizer {
public:
    explicit CrossEntropyOptimizer(SearchConfig cfg) : cfg_(cfg) {}
    SearchResult optimize(const EpisodeReward& reward, Eigen::Index dimension) const override {
        return cross_entropy_search(reward, dimension, cfg_);
    }

private:
    SearchConfig cfg_;
};

}  // namespace esgport::policy
