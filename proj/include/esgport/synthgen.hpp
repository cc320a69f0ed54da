/**
 * @file synthgen.hpp
 * @brief Seeded synthetic inputs: multi-rater ESG panels drawn from a
 *        Gaussian copula with a target rater correlation, and multi-asset
 *        geometric price paths with OHLCV bars.
 */
#pragma once

#include "esgport/dates.hpp"
#include "esgport/market_env.hpp"
#include "esgport/ratings.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <string>
#include <vector>

namespace esgport::synth {

enum class MarginalKind { Uniform0to100, TruncNormal };

struct EsgMarginal {
    MarginalKind kind = MarginalKind::Uniform0to100;
    double mean = 50.0;  ///< TruncNormal only
    double sd = 20.0;    ///< TruncNormal only
};

struct SynthConfig {
    std::uint64_t seed = 0;
    std::size_t n_firms = 30;
    std::size_t n_assets = 0;  ///< 0 -> n_firms; at most n_firms
    std::size_t n_bars = 252;
    std::vector<std::string> raters;          ///< default r1..rk from target size
    Eigen::MatrixXd rater_corr_target;        ///< k x k
    Eigen::VectorXd return_mean;              ///< per-bar log-return mean
    Eigen::MatrixXd return_cov;               ///< per-bar log-return covariance
    EsgMarginal esg_marginal;
    Date start_date{std::chrono::year{2007}, std::chrono::month{6}, std::chrono::day{29}};
    double initial_price = 100.0;

    std::size_t asset_count() const noexcept { return n_assets == 0 ? n_firms : n_assets; }
    std::vector<std::string> rater_names() const;
    void validate() const;
};

/// Four-rater sample correlation (RobecoSAM, SA, MSCI, Asset4) of the reference data set.
Eigen::MatrixXd reference_rater_correlation();
std::vector<std::string> reference_rater_names();

/// Firm identifiers F0001..; asset j trades as firm j.
std::string firm_id(std::size_t i);

/// Letter grade whose band [100(k-1)/7, 100k/7) contains `score` (AAA includes 100).
ratings::LetterGrade grade_for_score(double score);

struct PsdRepair {
    Eigen::MatrixXd matrix;
    bool changed = false;
    double min_eigenvalue = 0.0;   ///< of the input
    double max_abs_change = 0.0;
    double frobenius_change = 0.0;
};

/// Eigenvalue clipping at zero followed by re-unitizing the diagonal.
/// Unchanged when the input is already PSD. Throws NotRepairablePSD when any
/// entry would move by more than `max_entry_change`.
PsdRepair repair_correlation(const Eigen::MatrixXd& target, double max_entry_change = 0.2);

ratings::EsgPanel gen_esg_panel(const SynthConfig& cfg);

/// One OHLCV series per asset on consecutive business days from start_date.
std::vector<std::vector<env::OhlcvBar>> gen_prices(const SynthConfig& cfg);
env::MarketData gen_market(const SynthConfig& cfg);

}  // namespace esgport::synth
