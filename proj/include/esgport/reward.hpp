#pragma once

#include "esgport/dmv.hpp"

#include <Eigen/Dense>

#include <optional>
#include <string_view>

namespace esgport::env {

enum class RewardKind { LinearEsg, DmvTypeI, DmvTypeN, DmvTypeU };

std::string_view to_string(RewardKind k) noexcept;
std::optional<RewardKind> parse_reward_kind(std::string_view text);

struct RewardSpec {
    RewardKind kind = RewardKind::LinearEsg;
    double alpha_r = 1.0;  ///< ESG weight of the linear reward, >= 0
    double gamma = dmv::kDefaultGamma;
    double b = 1.0;
    double theta = dmv::kDefaultTheta;
    double rf = 0.0;       ///< risk-free rate on the cash sleeve
    /// Standardized per-asset ESG scores for the linear reward. When empty the
    /// ESG mean of the supplied moments is used.
    Eigen::VectorXd esg_scores;

    void validate() const;
    /// The DMV investor profile implied by a DMV reward kind.
    dmv::InvestorProfile profile() const;
};

/// First and second moments of a per-asset quantity.
struct Moments {
    Eigen::VectorXd mean;
    Eigen::MatrixXd cov;
};

/**
 * Reward of holding risky weights `w` (cash = 1 - sum(w)).
 *
 * LinearEsg: sum w_i r_i + alpha_r sum w_i ESG_i; w must sum to 1.
 * DmvType*: w.mu + (1 - sum w) rf - gamma/2 w'Sigma w + b (w.mu_g - theta/2 w'Sigma_g w)
 * with b = 0 for type I and theta = 0 for type N; sum(w) <= 1.
 * Throws WeightsOffSimplex (tolerance 1e-9).
 */
double reward(const RewardSpec& spec, const Eigen::VectorXd& w, const Moments& returns, const Moments& esg);

}  // namespace esgport::env
