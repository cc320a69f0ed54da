/**
 * @file market_env.hpp
 * @brief Episodic multi-asset trading environment.
 *
 * State: cash balance, fractional share holdings, the current OHLCV bar per
 * asset and MACD/RSI indicators. Actions are per-asset signed fractions in
 * [-k, k]: a_j < 0 sells |a_j| of the current holding of asset j, a_j > 0
 * spends a_j of the cash available after sells on asset j. Trades execute
 * at the current close; holdings are then marked to the next close.
 */
#pragma once

#include "esgport/dates.hpp"

#include <Eigen/Dense>

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace esgport::env {

struct OhlcvBar {
    Date date{};
    double open = 0.0;
    double high = 0.0;
    double low = 0.0;
    double close = 0.0;
    double volume = 0.0;

    /// Throws InvalidBar unless prices are positive and low <= open,close <= high.
    void validate() const;
};

/// Date-aligned bars for several assets: bars[asset][t].
struct MarketData {
    std::vector<std::string> symbols;
    std::vector<Date> dates;
    std::vector<std::vector<OhlcvBar>> bars;

    std::size_t n_assets() const noexcept { return symbols.size(); }
    std::size_t n_bars() const noexcept { return dates.size(); }
    Eigen::VectorXd closes_at(std::size_t t) const;
    std::vector<OhlcvBar> bars_at(std::size_t t) const;
    /// Simple returns, rows = periods (t-1 -> t) for t in (first, last].
    Eigen::MatrixXd simple_returns(std::size_t first, std::size_t last) const;

    /// Align series on the dates common to all of them.
    static MarketData align(std::vector<std::string> symbols, const std::vector<std::vector<OhlcvBar>>& series);
};

std::vector<OhlcvBar> read_price_csv(std::istream& in);
std::vector<OhlcvBar> read_price_csv(const std::filesystem::path& path);
void write_price_csv(std::ostream& out, const std::vector<OhlcvBar>& bars);

struct EnvState {
    double balance = 0.0;
    Eigen::VectorXd shares;
    std::vector<OhlcvBar> bars;  ///< current bar per asset
    Eigen::VectorXd macd;
    Eigen::VectorXd rsi;
    std::size_t t = 0;           ///< index into MarketData::dates

    Eigen::VectorXd closes() const;
    double portfolio_value() const;
};

struct StepOutcome {
    EnvState state;
    double portfolio_return = 0.0;  ///< net of costs, current close -> next close
    bool clipped = false;           ///< some action was reduced to stay feasible
    double traded_value = 0.0;
    double cost_paid = 0.0;
};

/**
 * One transition. Sells are processed first (a sell below -1 liquidates the
 * full holding and flags a clip), then buys share the post-sell cash; if the
 * buy fractions sum above 1 they are scaled down and flagged. Proportional
 * cost `cost` is charged on traded notional. Indicators in the returned state
 * are carried over unchanged; MarketEnv refreshes them.
 */
StepOutcome step(const EnvState& state, const Eigen::VectorXd& action, const std::vector<OhlcvBar>& next_bars,
                 double cost, double max_trade = 1.0);

struct EnvConfig {
    double initial_cash = 1'000'000.0;
    double cost = 0.0;       ///< proportional transaction cost
    double max_trade = 1.0;  ///< action bound k
};

/// Owns one episode over bars [first, last] of a MarketData.
class MarketEnv {
public:
    MarketEnv(const MarketData& data, std::size_t first, std::size_t last, EnvConfig cfg = {});

    void reset();
    const EnvState& state() const noexcept { return state_; }
    bool done() const noexcept { return state_.t >= last_; }
    std::size_t clip_events() const noexcept { return clip_events_; }

    StepOutcome step(const Eigen::VectorXd& action);

    /// Action that moves the current holdings to `target` value weights
    /// (risky assets; remainder stays in cash), assuming zero cost.
    Eigen::VectorXd rebalance_action(const Eigen::VectorXd& target) const;

    /// balance, shares, OHLCV per asset, MACD, RSI flattened.
    Eigen::VectorXd observation() const;

private:
    void refresh_indicators();

    const MarketData* data_;
    std::size_t first_;
    std::size_t last_;
    EnvConfig cfg_;
    EnvState state_;
    std::size_t clip_events_ = 0;
    std::vector<std::vector<double>> macd_;  // [asset][t]
    std::vector<std::vector<double>> rsi_;
};

}  // namespace esgport::env
