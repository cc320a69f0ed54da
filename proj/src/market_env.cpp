#include "esgport/market_env.hpp"

#include "esgport/csv.hpp"
#include "esgport/errors.hpp"
#include "esgport/indicators.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>

namespace esgport::env {

void OhlcvBar::validate() const {
    const bool finite = std::isfinite(open) && std::isfinite(high) && std::isfinite(low) && std::isfinite(close) &&
                        std::isfinite(volume);
    if (!finite || !(open > 0.0) || !(high > 0.0) || !(low > 0.0) || !(close > 0.0) || !(volume >= 0.0)) {
        throw Error(ErrorCode::InvalidBar, "bar " + format_date(date) + ": non-positive or non-finite field");
    }
    if (!(low <= std::min(open, close) && std::max(open, close) <= high)) {
        throw Error(ErrorCode::InvalidBar, "bar " + format_date(date) + ": violates low <= open,close <= high");
    }
}

// ---------------------------------------------------------------------------

Eigen::VectorXd MarketData::closes_at(std::size_t t) const {
    Eigen::VectorXd p(static_cast<Eigen::Index>(n_assets()));
    for (std::size_t j = 0; j < n_assets(); ++j) p(static_cast<Eigen::Index>(j)) = bars[j].at(t).close;
    return p;
}

std::vector<OhlcvBar> MarketData::bars_at(std::size_t t) const {
    std::vector<OhlcvBar> out;
    out.reserve(n_assets());
    for (const auto& series : bars) out.push_back(series.at(t));
    return out;
}

Eigen::MatrixXd MarketData::simple_returns(std::size_t first, std::size_t last) const {
    if (last <= first) return Eigen::MatrixXd(0, static_cast<Eigen::Index>(n_assets()));
    Eigen::MatrixXd r(static_cast<Eigen::Index>(last - first), static_cast<Eigen::Index>(n_assets()));
    for (std::size_t t = first + 1; t <= last; ++t) {
        for (std::size_t j = 0; j < n_assets(); ++j) {
            r(static_cast<Eigen::Index>(t - first - 1), static_cast<Eigen::Index>(j)) =
                bars[j][t].close / bars[j][t - 1].close - 1.0;
        }
    }
    return r;
}

MarketData MarketData::align(std::vector<std::string> symbols, const std::vector<std::vector<OhlcvBar>>& series) {
    if (symbols.size() != series.size() || symbols.empty()) {
        throw Error(ErrorCode::InvalidArgument, "symbol/series count mismatch");
    }
    std::map<std::chrono::sys_days, std::size_t> counts;
    for (const auto& s : series) {
        for (const auto& bar : s) ++counts[std::chrono::sys_days{bar.date}];
    }
    MarketData md;
    md.symbols = std::move(symbols);
    for (const auto& [d, c] : counts) {
        if (c == series.size()) md.dates.emplace_back(d);
    }
    md.bars.resize(series.size());
    for (std::size_t j = 0; j < series.size(); ++j) {
        std::map<std::chrono::sys_days, const OhlcvBar*> by_date;
        for (const auto& bar : series[j]) {
            bar.validate();
            by_date[std::chrono::sys_days{bar.date}] = &bar;
        }
        for (const auto& d : md.dates) md.bars[j].push_back(*by_date.at(std::chrono::sys_days{d}));
    }
    return md;
}

std::vector<OhlcvBar> read_price_csv(std::istream& in) {
    const csv::Table t = csv::read(in);
    const auto dc = t.column("date"), oc = t.column("open"), hc = t.column("high"), lc = t.column("low"),
               cc = t.column("close"), vc = t.column("volume");
    std::vector<OhlcvBar> out;
    out.reserve(t.rows.size());
    for (const auto& row : t.rows) {
        OhlcvBar b{parse_date(row[dc]),        csv::parse_double(row[oc]), csv::parse_double(row[hc]),
                   csv::parse_double(row[lc]), csv::parse_double(row[cc]), csv::parse_double(row[vc])};
        b.validate();
        if (!out.empty() && std::chrono::sys_days{b.date} <= std::chrono::sys_days{out.back().date}) {
            throw Error(ErrorCode::ParseError, "price rows must be in strictly increasing date order");
        }
        out.push_back(b);
    }
    return out;
}

std::vector<OhlcvBar> read_price_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::FileNotFound, "cannot open '" + path.string() + "'");
    try {
        return read_price_csv(in);
    } catch (const Error& e) {
        throw Error(e.code(), path.string() + ": " + e.what());
    }
}

void write_price_csv(std::ostream& out, const std::vector<OhlcvBar>& bars) {
    csv::write_row(out, {"date", "open", "high", "low", "close", "volume"});
    for (const auto& b : bars) {
        csv::write_row(out, {format_date(b.date), csv::format(b.open), csv::format(b.high), csv::format(b.low),
                             csv::format(b.close), csv::format(b.volume)});
    }
}

// ---------------------------------------------------------------------------

Eigen::VectorXd EnvState::closes() const {
    Eigen::VectorXd p(static_cast<Eigen::Index>(bars.size()));
    for (std::size_t j = 0; j < bars.size(); ++j) p(static_cast<Eigen::Index>(j)) = bars[j].close;
    return p;
}

double EnvState::portfolio_value() const { return balance + shares.dot(closes()); }

StepOutcome step(const EnvState& state, const Eigen::VectorXd& action, const std::vector<OhlcvBar>& next_bars,
                 double cost, double max_trade) {
    const Eigen::Index n = state.shares.size();
    if (action.size() != n || static_cast<Eigen::Index>(state.bars.size()) != n ||
        static_cast<Eigen::Index>(next_bars.size()) != n) {
        throw Error(ErrorCode::InvalidArgument, "action/state/bar dimension mismatch");
    }
    if (!(cost >= 0.0) || !(max_trade > 0.0)) {
        throw Error(ErrorCode::InvalidArgument, "cost must be >= 0 and action bound > 0");
    }
    for (Eigen::Index j = 0; j < n; ++j) {
        if (!std::isfinite(action(j)) || std::abs(action(j)) > max_trade * (1.0 + 1e-12)) {
            throw Error(ErrorCode::InvalidArgument, "action component outside [-k, k]");
        }
    }
    for (const auto& b : state.bars) b.validate();
    for (const auto& b : next_bars) b.validate();

    const Eigen::VectorXd price = state.closes();
    const double value_before = state.balance + state.shares.dot(price);
    if (!(value_before > 0.0)) throw Error(ErrorCode::InvalidArgument, "portfolio value is not positive");

    StepOutcome out;
    out.state = state;
    EnvState& s = out.state;

    for (Eigen::Index j = 0; j < n; ++j) {
        if (action(j) >= 0.0) continue;
        double frac = -action(j);
        if (frac > 1.0) {
            frac = 1.0;
            out.clipped = true;
        }
        const double qty = frac * s.shares(j);
        const double notional = qty * price(j);
        const double fee = cost * notional;
        s.shares(j) -= qty;
        s.balance += notional - fee;
        out.traded_value += notional;
        out.cost_paid += fee;
    }

    Eigen::VectorXd buy = action.cwiseMax(0.0);
    const double total = buy.sum();
    if (total > 1.0) {
        buy /= total;
        out.clipped = true;
    }
    const double budget = std::max(s.balance, 0.0);
    for (Eigen::Index j = 0; j < n; ++j) {
        if (buy(j) <= 0.0) continue;
        const double spend = buy(j) * budget;
        const double notional = spend / (1.0 + cost);
        s.shares(j) += notional / price(j);
        s.balance -= spend;
        out.traded_value += notional;
        out.cost_paid += spend - notional;
    }
    if (s.balance < 0.0) s.balance = 0.0;  // rounding residue only

    s.bars = next_bars;
    s.t = state.t + 1;
    const double value_after = s.balance + s.shares.dot(s.closes());
    out.portfolio_return = value_after / value_before - 1.0;
    return out;
}

// ---------------------------------------------------------------------------

MarketEnv::MarketEnv(const MarketData& data, std::size_t first, std::size_t last, EnvConfig cfg)
    : data_(&data), first_(first), last_(last), cfg_(cfg) {
    if (data.n_assets() == 0 || last >= data.n_bars() || first > last) {
        throw Error(ErrorCode::InvalidArgument, "episode range outside market data");
    }
    if (!(cfg.initial_cash > 0.0)) throw Error(ErrorCode::InvalidArgument, "initial cash must be positive");
    // Indicators over the full causal history up to `last`.
    macd_.resize(data.n_assets());
    rsi_.resize(data.n_assets());
    for (std::size_t j = 0; j < data.n_assets(); ++j) {
        std::vector<double> closes;
        closes.reserve(last + 1);
        for (std::size_t t = 0; t <= last; ++t) closes.push_back(data.bars[j][t].close);
        if (closes.size() >= indicators::kMacdSlow) {
            macd_[j] = indicators::macd(closes).values;
        } else {
            const auto fast = indicators::ema(closes, indicators::kMacdFast);
            const auto slow = indicators::ema(closes, indicators::kMacdSlow);
            macd_[j].resize(closes.size());
            for (std::size_t t = 0; t < closes.size(); ++t) macd_[j][t] = fast[t] - slow[t];
        }
        if (closes.size() > indicators::kRsiPeriod) {
            rsi_[j] = indicators::rsi(closes).values;
        } else {
            rsi_[j].assign(closes.size(), 50.0);
        }
    }
    reset();
}

void MarketEnv::reset() {
    state_ = EnvState{};
    state_.balance = cfg_.initial_cash;
    state_.shares = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(data_->n_assets()));
    state_.t = first_;
    state_.bars = data_->bars_at(first_);
    clip_events_ = 0;
    refresh_indicators();
}

void MarketEnv::refresh_indicators() {
    const auto n = static_cast<Eigen::Index>(data_->n_assets());
    state_.macd.resize(n);
    state_.rsi.resize(n);
    for (Eigen::Index j = 0; j < n; ++j) {
        state_.macd(j) = macd_[static_cast<std::size_t>(j)][state_.t];
        state_.rsi(j) = rsi_[static_cast<std::size_t>(j)][state_.t];
    }
}

StepOutcome MarketEnv::step(const Eigen::VectorXd& action) {
    if (done()) throw Error(ErrorCode::InvalidArgument, "episode already finished");
    StepOutcome out = env::step(state_, action, data_->bars_at(state_.t + 1), cfg_.cost, cfg_.max_trade);
    if (out.clipped) ++clip_events_;
    state_ = out.state;
    refresh_indicators();
    out.state = state_;
    return out;
}

Eigen::VectorXd MarketEnv::rebalance_action(const Eigen::VectorXd& target) const {
    const Eigen::Index n = state_.shares.size();
    if (target.size() != n) throw Error(ErrorCode::InvalidArgument, "target weight dimension mismatch");
    const Eigen::VectorXd price = state_.closes();
    const Eigen::VectorXd held = state_.shares.cwiseProduct(price);
    const double value = state_.balance + held.sum();
    Eigen::VectorXd action = Eigen::VectorXd::Zero(n);
    double cash_after_sells = state_.balance;
    for (Eigen::Index j = 0; j < n; ++j) {
        const double want = target(j) * value;
        if (held(j) > want && held(j) > 0.0) {
            action(j) = -(held(j) - want) / held(j);
            cash_after_sells += held(j) - want;
        }
    }
    if (cash_after_sells > 0.0) {
        for (Eigen::Index j = 0; j < n; ++j) {
            const double want = target(j) * value;
            if (want > held(j)) action(j) = std::min(1.0, (want - held(j)) / cash_after_sells);
        }
    }
    return action.cwiseMax(-cfg_.max_trade).cwiseMin(cfg_.max_trade);
}

Eigen::VectorXd MarketEnv::observation() const {
    const auto n = static_cast<Eigen::Index>(data_->n_assets());
    Eigen::VectorXd obs(1 + n * 8);
    obs(0) = state_.balance;
    obs.segment(1, n) = state_.shares;
    for (Eigen::Index j = 0; j < n; ++j) {
        const auto& b = state_.bars[static_cast<std::size_t>(j)];
        obs(1 + n + j) = b.open;
        obs(1 + 2 * n + j) = b.high;
        obs(1 + 3 * n + j) = b.low;
        obs(1 + 4 * n + j) = b.close;
        obs(1 + 5 * n + j) = b.volume;
    }
    obs.segment(1 + 6 * n, n) = state_.macd;
    obs.segment(1 + 7 * n, n) = state_.rsi;
    return obs;
}

}  // namespace esgport::env
