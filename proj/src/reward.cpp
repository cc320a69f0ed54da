#include "esgport/reward.hpp"

#include "esgport/csv.hpp"
#include "esgport/errors.hpp"

#include <cmath>

namespace esgport::env {

namespace {
constexpr double kSimplexTol = 1e-9;
}

std::string_view to_string(RewardKind k) noexcept {
    switch (k) {
    case RewardKind::LinearEsg: return "linear";
    case RewardKind::DmvTypeI: return "I";
    case RewardKind::DmvTypeN: return "N";
    case RewardKind::DmvTypeU: return "U";
    }
    return "?";
}

std::optional<RewardKind> parse_reward_kind(std::string_view text) {
    if (text == "linear" || text == "LinearEsg") return RewardKind::LinearEsg;
    if (text == "I" || text == "DmvTypeI") return RewardKind::DmvTypeI;
    if (text == "N" || text == "DmvTypeN") return RewardKind::DmvTypeN;
    if (text == "U" || text == "DmvTypeU") return RewardKind::DmvTypeU;
    return std::nullopt;
}

void RewardSpec::validate() const {
    if (!(alpha_r >= 0.0)) throw Error(ErrorCode::InvalidArgument, "alpha_r must be >= 0");
    if (kind != RewardKind::LinearEsg) profile().validate();
}

dmv::InvestorProfile RewardSpec::profile() const {
    dmv::InvestorProfile p;
    p.gamma = gamma;
    p.b = b;
    p.theta = theta;
    switch (kind) {
    case RewardKind::DmvTypeI: p.kind = dmv::InvestorType::TypeI; break;
    case RewardKind::DmvTypeN: p.kind = dmv::InvestorType::TypeN; break;
    default: p.kind = dmv::InvestorType::TypeU; break;
    }
    return p;
}

double reward(const RewardSpec& spec, const Eigen::VectorXd& w, const Moments& returns, const Moments& esg) {
    const Eigen::Index n = w.size();
    if (returns.mean.size() != n) throw Error(ErrorCode::InvalidArgument, "reward: return moments dimension");
    if ((w.array() < -kSimplexTol).any() || !w.allFinite()) {
        throw Error(ErrorCode::WeightsOffSimplex, "reward: negative weight");
    }
    const double total = w.sum();

    if (spec.kind == RewardKind::LinearEsg) {
        if (std::abs(total - 1.0) > kSimplexTol) {
            throw Error(ErrorCode::WeightsOffSimplex, "linear reward: weights sum to " + csv::format(total));
        }
        const Eigen::VectorXd& scores = spec.esg_scores.size() > 0 ? spec.esg_scores : esg.mean;
        if (scores.size() != n) throw Error(ErrorCode::InvalidArgument, "reward: ESG score dimension");
        return w.dot(returns.mean) + spec.alpha_r * w.dot(scores);
    }

    if (total > 1.0 + kSimplexTol) {
        throw Error(ErrorCode::WeightsOffSimplex, "DMV reward: risky weights sum to " + csv::format(total));
    }
    const dmv::InvestorProfile p = spec.profile();
    const double b = p.effective_b();
    const double theta = p.effective_theta();
    double value = w.dot(returns.mean) + (1.0 - total) * spec.rf - 0.5 * p.gamma * w.dot(returns.cov * w);
    if (b != 0.0) {
        if (esg.mean.size() != n) throw Error(ErrorCode::InvalidArgument, "reward: ESG moments dimension");
        double esg_term = w.dot(esg.mean);
        if (theta != 0.0) esg_term -= 0.5 * theta * w.dot(esg.cov * w);
        value += b * esg_term;
    }
    return value;
}

}  // namespace esgport::env
