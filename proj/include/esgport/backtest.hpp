/**
 * @file backtest.hpp
 * @brief Rolling-window strategy comparison: train-span estimation and policy
 *        optimization, static test-span holding through the market
 *        environment, Sharpe ratios and per-window ranks.
 */
#pragma once

#include "esgport/dates.hpp"
#include "esgport/market_env.hpp"
#include "esgport/policy.hpp"
#include "esgport/ratings.hpp"
#include "esgport/reward.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace esgport::backtest {

struct WindowSpec {
    Date train_start{};
    Date train_end{};
    Date test_start{};
    Date test_end{};
};

/// Windows of `train_months` + `test_months` advanced by `stride_months`.
/// train_end = train_start + train, test_start = train_end + 1 day,
/// test_end = train_start + train + test <= range_end. Throws RangeTooShort.
std::vector<WindowSpec> rolling_schedule(Date range_start, Date range_end, int train_months, int test_months,
                                         int stride_months);

/// mean(r - rf) / sd(r - rf) * sqrt(periods_per_year), sample sd.
/// Throws InsufficientData below two observations and ZeroVariance for sd 0.
double sharpe(std::span<const double> returns, double rf, double periods_per_year = 252.0);

enum class OptimizerKind { ClosedForm, Cem };

std::string_view to_string(OptimizerKind k) noexcept;
std::optional<OptimizerKind> parse_optimizer(std::string_view text);

/// Per-asset ESG view used by one strategy (aligned with MarketData::symbols).
struct EsgSource {
    std::string name;
    Eigen::VectorXd scores;
};

/**
 * One ESG source per rater plus the four ensembles (centroid, median, pca,
 * alpha-maxmin) restricted to `symbols`. Every symbol must be a firm of the
 * panel rated by all raters (InsufficientData otherwise).
 */
std::vector<EsgSource> esg_sources(const ratings::ScorePanel& panel, const std::vector<std::string>& symbols,
                                   double alpha = 0.5);

/// Per-asset variance of the standardized scores across raters.
Eigen::VectorXd esg_dispersion(const ratings::ScorePanel& panel, const std::vector<std::string>& symbols);

struct Strategy {
    std::string name;
    Eigen::VectorXd esg;            ///< raw per-asset scores
    Eigen::VectorXd esg_variance;   ///< per-asset ESG uncertainty (standardized units); empty -> 0
    env::RewardSpec reward;         ///< esg_scores is filled per window
    OptimizerKind optimizer = OptimizerKind::ClosedForm;
};

struct BacktestConfig {
    double rf = 0.0;                 ///< per-period risk-free rate
    double periods_per_year = 252.0;
    double esg_scale = 1.0;          ///< ESG z-scores in units of pooled annual return sd
    env::EnvConfig env;
    bool rebalance_daily = false;
    policy::SearchConfig search;     ///< seed is overridden per (window, strategy)
    std::uint64_t seed = 0;
    bool parallel = true;
};

struct ReportRow {
    std::size_t window = 0;          ///< 1-based
    std::string strategy;
    double cumulative_return = 0.0;
    double sharpe = 0.0;             ///< NaN when the test returns have zero variance
    int rank = 0;
    double terminal_value = 0.0;
    double reward = 0.0;             ///< strategy reward at test-span moments
    Eigen::VectorXd weights;         ///< risky weights then cash
};

struct BacktestReport {
    std::vector<WindowSpec> windows;
    std::vector<std::string> strategies;
    std::vector<ReportRow> rows;     ///< window-major, strategy order within a window

    const ReportRow& at(std::size_t window_index, std::size_t strategy_index) const {
        return rows.at(window_index * strategies.size() + strategy_index);
    }
};

/// Ranks 1..S by Sharpe descending; NaN last; ties by name ascending.
std::vector<int> rank_strategies(const std::vector<std::string>& names, const std::vector<double>& sharpes);

/// Weights chosen from the train span of one window (no test data touched).
policy::PolicyParams train_policy(const env::MarketData& data, const Strategy& strategy, const WindowSpec& window,
                                  const BacktestConfig& cfg, std::uint64_t seed);

BacktestReport run_comparison(const env::MarketData& data, const std::vector<Strategy>& strategies,
                              const std::vector<WindowSpec>& schedule, const BacktestConfig& cfg);

/// `window,strategy,return,sharpe,rank,terminal_value,reward`
void write_report_csv(std::ostream& out, const BacktestReport& report);
std::vector<ReportRow> read_report_csv(std::istream& in);
/// `window,test_start,<strategy>...` with ranks as cells.
void write_ranks_csv(std::ostream& out, const BacktestReport& report);
/// `window,train_start,train_end,test_start,test_end`
void write_schedule_csv(std::ostream& out, const std::vector<WindowSpec>& schedule);

}  // namespace esgport::backtest
