#include "esgport/policy.hpp"

#include "esgport/csv.hpp"
#include "esgport/errors.hpp"
#include "esgport/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace esgport::policy {

PolicyParams::PolicyParams(Eigen::VectorXd weights) : weights_(std::move(weights)) {
    if (weights_.size() < 1 || !weights_.allFinite()) {
        throw Error(ErrorCode::WeightsOffSimplex, "policy weights must be finite and non-empty");
    }
    if ((weights_.array() < 0.0).any() || std::abs(weights_.sum() - 1.0) > 1e-9) {
        throw Error(ErrorCode::WeightsOffSimplex, "policy weights are not on the simplex (sum " +
                                                      csv::format(weights_.sum()) + ")");
    }
}

PolicyParams PolicyParams::all_cash(Eigen::Index n_assets) {
    Eigen::VectorXd w = Eigen::VectorXd::Zero(n_assets + 1);
    w(n_assets) = 1.0;
    return PolicyParams(std::move(w));
}

ClosedFormPolicy project_demand(const Eigen::VectorXd& demand) {
    ClosedFormPolicy out;
    out.raw_demand = demand;
    const Eigen::Index n = demand.size();
    Eigen::VectorXd risky = demand;
    for (Eigen::Index j = 0; j < n; ++j) {
        if (risky(j) < 0.0) {
            risky(j) = 0.0;
            ++out.events.clipped_negative;
        }
    }
    const double total = risky.sum();
    if (total > 1.0) {
        risky /= total;
        out.events.renormalized = true;
    }
    Eigen::VectorXd w(n + 1);
    w.head(n) = risky;
    w(n) = std::max(0.0, 1.0 - risky.sum());
    w /= w.sum();
    out.params = PolicyParams(std::move(w));
    return out;
}

ClosedFormPolicy closed_form_policy(const capm::AssetUniverse& window, const dmv::InvestorProfile& profile) {
    profile.validate();
    window.validate();
    return project_demand(capm::agent_demand(window, profile.gamma, profile.effective_b(), profile.effective_theta()));
}

// ---------------------------------------------------------------------------

void SearchConfig::validate() const {
    if (population < 1) throw Error(ErrorCode::InvalidArgument, "population must be positive");
    if (!(elite_fraction > 0.0 && elite_fraction < 1.0)) {
        throw Error(ErrorCode::InvalidArgument, "elite fraction must be in (0,1)");
    }
    if (iterations < 1) throw Error(ErrorCode::InvalidArgument, "iterations must be positive");
    if (!(initial_sd > 0.0)) throw Error(ErrorCode::InvalidArgument, "initial sd must be positive");
}

int SearchConfig::elite_count() const {
    return std::max(1, static_cast<int>(std::ceil(elite_fraction * population)));
}

Eigen::VectorXd softmax(const Eigen::VectorXd& z) {
    const double top = z.maxCoeff();
    Eigen::VectorXd e = (z.array() - top).exp().matrix();
    return e / e.sum();
}

SearchResult cross_entropy_search(const EpisodeReward& reward, Eigen::Index dimension, const SearchConfig& cfg) {
    cfg.validate();
    if (dimension < 1) throw Error(ErrorCode::InvalidArgument, "search dimension must be positive");

    Rng rng(cfg.seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    Eigen::VectorXd mean = Eigen::VectorXd::Zero(dimension);
    Eigen::VectorXd sd = Eigen::VectorXd::Constant(dimension, cfg.initial_sd);
    const int elite = cfg.elite_count();

    SearchResult res;
    bool have_best = false;
    Eigen::MatrixXd samples(cfg.population, dimension);
    std::vector<double> scores(static_cast<std::size_t>(cfg.population));
    std::vector<int> order(static_cast<std::size_t>(cfg.population));

    for (int it = 0; it < cfg.iterations; ++it) {
        for (int k = 0; k < cfg.population; ++k) {
            for (Eigen::Index d = 0; d < dimension; ++d) samples(k, d) = mean(d) + sd(d) * normal(rng);
        }
        for (int k = 0; k < cfg.population; ++k) {
            PolicyParams candidate(softmax(samples.row(k).transpose()));
            const double r = reward(candidate);
            scores[static_cast<std::size_t>(k)] = r;
            ++res.evaluations;
            if (!have_best || r > res.best_reward) {
                res.best_reward = r;
                res.best = std::move(candidate);
                have_best = true;
            }
        }
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
            return scores[static_cast<std::size_t>(a)] > scores[static_cast<std::size_t>(b)];
        });
        Eigen::VectorXd m = Eigen::VectorXd::Zero(dimension);
        for (int e = 0; e < elite; ++e) m += samples.row(order[static_cast<std::size_t>(e)]).transpose();
        m /= static_cast<double>(elite);
        Eigen::VectorXd v = Eigen::VectorXd::Zero(dimension);
        for (int e = 0; e < elite; ++e) {
            v += (samples.row(order[static_cast<std::size_t>(e)]).transpose() - m).cwiseAbs2();
        }
        v /= static_cast<double>(elite);
        mean = m;
        sd = v.cwiseSqrt();
        res.best_history.push_back(res.best_reward);
    }
    return res;
}

}  // namespace esgport::policy
