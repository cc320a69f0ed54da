#include "esgport/backtest.hpp"

#include "esgport/capm.hpp"
#include "esgport/csv.hpp"
#include "esgport/ensemble.hpp"
#include "esgport/errors.hpp"
#include "esgport/linalg.hpp"
#include "esgport/rng.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <istream>
#include <limits>
#include <numeric>
#include <ostream>

namespace esgport::backtest {

std::vector<WindowSpec> rolling_schedule(Date range_start, Date range_end, int train_months, int test_months,
                                         int stride_months) {
    if (train_months < 1 || test_months < 1 || stride_months < 1) {
        throw Error(ErrorCode::InvalidArgument, "train, test and stride lengths must be positive");
    }
    std::vector<WindowSpec> out;
    for (int offset = 0;; offset += stride_months) {
        WindowSpec w;
        w.train_start = add_months(range_start, offset);
        w.train_end = add_months(range_start, offset + train_months);
        w.test_start = add_days(w.train_end, 1);
        w.test_end = add_months(range_start, offset + train_months + test_months);
        if (std::chrono::sys_days{w.test_end} > std::chrono::sys_days{range_end}) break;
        out.push_back(w);
    }
    if (out.empty()) {
        throw Error(ErrorCode::RangeTooShort, "range " + format_date(range_start) + ".." + format_date(range_end) +
                                                  " is shorter than one train+test window");
    }
    return out;
}

double sharpe(std::span<const double> returns, double rf, double periods_per_year) {
    const std::size_t n = returns.size();
    if (n < 2) throw Error(ErrorCode::InsufficientData, "Sharpe ratio needs at least two returns");
    double mean = 0.0;
    for (double r : returns) mean += r - rf;
    mean /= static_cast<double>(n);
    double ss = 0.0;
    for (double r : returns) ss += (r - rf - mean) * (r - rf - mean);
    const double sd = std::sqrt(ss / static_cast<double>(n - 1));
    // rounding leaves ~1e-18 of spread on a constant series
    if (!(sd > 1e-12 * std::max(1.0, std::abs(mean)))) throw Error(ErrorCode::ZeroVariance, "returns have zero variance");
    return mean / sd * std::sqrt(periods_per_year);
}

std::string_view to_string(OptimizerKind k) noexcept {
    return k == OptimizerKind::ClosedForm ? "closed-form" : "cem";
}

std::optional<OptimizerKind> parse_optimizer(std::string_view text) {
    if (text == "closed-form") return OptimizerKind::ClosedForm;
    if (text == "cem") return OptimizerKind::Cem;
    return std::nullopt;
}

namespace {

std::vector<Eigen::Index> symbol_rows(const ratings::ScorePanel& panel, const std::vector<std::string>& symbols) {
    std::vector<Eigen::Index> rows;
    for (const auto& s : symbols) {
        const auto idx = panel.firm_index(s);
        if (!idx) throw Error(ErrorCode::InsufficientData, "no ESG scores for asset " + s);
        if (!panel.row_complete(*idx)) throw Error(ErrorCode::InsufficientData, "incomplete ESG scores for asset " + s);
        rows.push_back(*idx);
    }
    return rows;
}

Eigen::VectorXd pick(const ensemble::EnsembleResult& r, const std::vector<std::string>& symbols) {
    Eigen::VectorXd out(static_cast<Eigen::Index>(symbols.size()));
    for (std::size_t i = 0; i < symbols.size(); ++i) {
        const auto it = std::find(r.firms.begin(), r.firms.end(), symbols[i]);
        if (it == r.firms.end()) throw Error(ErrorCode::InsufficientData, "no ensemble score for asset " + symbols[i]);
        out(static_cast<Eigen::Index>(i)) = r.scores(it - r.firms.begin());
    }
    return out;
}

}  // namespace

std::vector<EsgSource> esg_sources(const ratings::ScorePanel& panel, const std::vector<std::string>& symbols,
                                   double alpha) {
    const auto rows = symbol_rows(panel, symbols);
    std::vector<EsgSource> out;
    for (Eigen::Index j = 0; j < panel.n_raters(); ++j) {
        EsgSource s{panel.raters()[static_cast<std::size_t>(j)], Eigen::VectorXd(static_cast<Eigen::Index>(rows.size()))};
        for (std::size_t i = 0; i < rows.size(); ++i) s.scores(static_cast<Eigen::Index>(i)) = panel.values()(rows[i], j);
        out.push_back(std::move(s));
    }
    for (auto method : {ensemble::Method::Centroid, ensemble::Method::Median, ensemble::Method::Pca,
                        ensemble::Method::AlphaMaxmin}) {
        const auto result = ensemble::combine(panel, ensemble::EnsembleSpec{method, alpha});
        out.push_back(EsgSource{std::string(ensemble::to_string(method)), pick(result, symbols)});
    }
    return out;
}

Eigen::VectorXd esg_dispersion(const ratings::ScorePanel& panel, const std::vector<std::string>& symbols) {
    const auto rows = symbol_rows(panel, symbols);
    const auto z = ratings::standardize(panel);
    Eigen::VectorXd out(static_cast<Eigen::Index>(rows.size()));
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const Eigen::RowVectorXd r = z.values().row(rows[i]);
        const double m = r.mean();
        out(static_cast<Eigen::Index>(i)) = (r.array() - m).square().mean();
    }
    return out;
}

std::vector<int> rank_strategies(const std::vector<std::string>& names, const std::vector<double>& sharpes) {
    if (names.size() != sharpes.size()) throw Error(ErrorCode::InvalidArgument, "name/Sharpe size mismatch");
    std::vector<std::size_t> order(names.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        const bool na = std::isnan(sharpes[a]);
        const bool nb = std::isnan(sharpes[b]);
        if (na != nb) return nb;
        if (!na && sharpes[a] != sharpes[b]) return sharpes[a] > sharpes[b];
        return names[a] < names[b];
    });
    std::vector<int> ranks(names.size());
    for (std::size_t r = 0; r < order.size(); ++r) ranks[order[r]] = static_cast<int>(r + 1);
    return ranks;
}

namespace {

struct Span {
    std::size_t first = 0;
    std::size_t last = 0;
};

Span bars_between(const env::MarketData& data, Date from, Date to) {
    const auto lo = std::lower_bound(data.dates.begin(), data.dates.end(), from);
    const auto hi = std::upper_bound(data.dates.begin(), data.dates.end(), to);
    if (hi - lo < 3) {
        throw Error(ErrorCode::InsufficientData,
                    "fewer than three bars between " + format_date(from) + " and " + format_date(to));
    }
    return {static_cast<std::size_t>(lo - data.dates.begin()), static_cast<std::size_t>(hi - data.dates.begin()) - 1};
}

Eigen::VectorXd zscore(const Eigen::VectorXd& v) {
    if (v.size() < 2) return Eigen::VectorXd::Zero(v.size());
    const double m = v.mean();
    const double sd = std::sqrt((v.array() - m).square().sum() / static_cast<double>(v.size() - 1));
    if (!(sd > 0.0)) return Eigen::VectorXd::Zero(v.size());
    return ((v.array() - m) / sd).matrix();
}

/// Reward inputs for one span of returns.
struct SpanInputs {
    env::RewardSpec spec;
    env::Moments returns;
    env::Moments esg;
};

SpanInputs span_inputs(const Eigen::MatrixXd& period_returns, const Strategy& s, const BacktestConfig& cfg) {
    const auto n = period_returns.cols();
    if (s.esg.size() != n) throw Error(ErrorCode::InvalidArgument, "strategy " + s.name + " has wrong ESG length");
    SpanInputs in;
    in.spec = s.reward;
    in.returns.mean = period_returns.colwise().mean().transpose() * cfg.periods_per_year;
    in.returns.cov = linalg::sample_covariance(period_returns) * cfg.periods_per_year;
    const double pooled_sd = std::sqrt(std::max(0.0, in.returns.cov.diagonal().mean()));
    const double scale = cfg.esg_scale * pooled_sd;
    const Eigen::VectorXd z = zscore(s.esg);
    in.esg.mean = z * scale;
    in.esg.cov = Eigen::MatrixXd::Zero(n, n);
    if (s.esg_variance.size() == n) in.esg.cov.diagonal() = s.esg_variance * (scale * scale);
    in.spec.rf = cfg.rf * cfg.periods_per_year;
    if (in.spec.kind == env::RewardKind::LinearEsg) {
        in.returns.mean = zscore(in.returns.mean);
        in.spec.esg_scores = z;
    }
    return in;
}

policy::PolicyParams with_zero_cash(const Eigen::VectorXd& risky) {
    Eigen::VectorXd w(risky.size() + 1);
    w.head(risky.size()) = risky / risky.sum();
    w(risky.size()) = 0.0;
    return policy::PolicyParams(std::move(w));
}

}  // namespace

policy::PolicyParams train_policy(const env::MarketData& data, const Strategy& strategy, const WindowSpec& window,
                                  const BacktestConfig& cfg, std::uint64_t seed) {
    const Span train = bars_between(data, window.train_start, window.train_end);
    const Eigen::MatrixXd r = data.simple_returns(train.first, train.last);
    const SpanInputs in = span_inputs(r, strategy, cfg);
    const auto n = r.cols();
    const bool linear = in.spec.kind == env::RewardKind::LinearEsg;

    if (strategy.optimizer == OptimizerKind::ClosedForm) {
        if (linear) {
            const Eigen::VectorXd score = in.returns.mean + in.spec.alpha_r * in.spec.esg_scores;
            Eigen::Index best = 0;
            for (Eigen::Index j = 1; j < n; ++j) {
                if (score(j) > score(best)) best = j;
            }
            return with_zero_cash(Eigen::VectorXd::Unit(n, best));
        }
        capm::AssetUniverse u;
        u.mu_r = in.returns.mean.array() - in.spec.rf;
        u.Sigma_M = in.returns.cov;
        u.mu_gM = in.esg.mean;
        u.Sigma_gM = in.esg.cov;
        u.assets = data.symbols;
        return policy::closed_form_policy(u, in.spec.profile()).params;
    }

    policy::SearchConfig sc = cfg.search;
    sc.seed = seed;
    if (linear) {
        const auto objective = [&](const policy::PolicyParams& p) {
            return env::reward(in.spec, p.weights(), in.returns, in.esg);
        };
        return with_zero_cash(policy::cross_entropy_search(objective, n, sc).best.weights());
    }
    const auto objective = [&](const policy::PolicyParams& p) {
        return env::reward(in.spec, p.risky(), in.returns, in.esg);
    };
    return policy::cross_entropy_search(objective, n + 1, sc).best;
}

namespace {

std::vector<ReportRow> run_window(const env::MarketData& data, const std::vector<Strategy>& strategies,
                                  const WindowSpec& window, std::size_t index, const BacktestConfig& cfg) {
    try {
        const Span test = bars_between(data, window.test_start, window.test_end);
        const Eigen::MatrixXd test_returns = data.simple_returns(test.first, test.last);
        std::vector<ReportRow> rows;
        for (const auto& s : strategies) {
            const std::uint64_t seed =
                derive_seed(cfg.seed, {"window", std::to_string(index), "strategy", s.name});
            const policy::PolicyParams params = train_policy(data, s, window, cfg, seed);
            const Eigen::VectorXd risky = params.risky();

            env::MarketEnv episode(data, test.first, test.last, cfg.env);
            std::vector<double> period;
            bool first = true;
            while (!episode.done()) {
                const Eigen::VectorXd action = (first || cfg.rebalance_daily)
                                                   ? episode.rebalance_action(risky)
                                                   : Eigen::VectorXd::Zero(risky.size());
                first = false;
                period.push_back(episode.step(action).portfolio_return);
            }

            ReportRow row;
            row.window = index + 1;
            row.strategy = s.name;
            row.terminal_value = episode.state().portfolio_value();
            row.cumulative_return = row.terminal_value / cfg.env.initial_cash - 1.0;
            try {
                row.sharpe = sharpe(period, cfg.rf, cfg.periods_per_year);
            } catch (const Error& e) {
                if (e.code() != ErrorCode::ZeroVariance) throw;
                row.sharpe = std::numeric_limits<double>::quiet_NaN();
            }
            const SpanInputs realized = span_inputs(test_returns, s, cfg);
            row.reward = env::reward(realized.spec,
                                     realized.spec.kind == env::RewardKind::LinearEsg ? risky / risky.sum() : risky,
                                     realized.returns, realized.esg);
            row.weights = params.weights();
            rows.push_back(std::move(row));
        }
        std::vector<std::string> names;
        std::vector<double> sharpes;
        for (const auto& r : rows) {
            names.push_back(r.strategy);
            sharpes.push_back(r.sharpe);
        }
        const auto ranks = rank_strategies(names, sharpes);
        for (std::size_t i = 0; i < rows.size(); ++i) rows[i].rank = ranks[i];
        return rows;
    } catch (const Error& e) {
        throw Error(e.code(), "window " + std::to_string(index + 1) + ": " + e.what());
    }
}

}  // namespace

BacktestReport run_comparison(const env::MarketData& data, const std::vector<Strategy>& strategies,
                              const std::vector<WindowSpec>& schedule, const BacktestConfig& cfg) {
    if (strategies.empty()) throw Error(ErrorCode::InvalidArgument, "no strategies to compare");
    if (schedule.empty()) throw Error(ErrorCode::InvalidArgument, "empty schedule");
    std::vector<std::string> names;
    for (const auto& s : strategies) {
        if (std::find(names.begin(), names.end(), s.name) != names.end()) {
            throw Error(ErrorCode::InvalidArgument, "duplicate strategy name " + s.name);
        }
        s.reward.validate();
        names.push_back(s.name);
    }
    if (cfg.search.population > 0) cfg.search.validate();

    BacktestReport report;
    report.windows = schedule;
    report.strategies = names;
    if (cfg.parallel) {
        std::vector<std::future<std::vector<ReportRow>>> jobs;
        for (std::size_t i = 0; i < schedule.size(); ++i) {
            jobs.push_back(std::async(std::launch::async, run_window, std::cref(data), std::cref(strategies),
                                      std::cref(schedule[i]), i, std::cref(cfg)));
        }
        for (auto& j : jobs) j.wait();
        for (auto& j : jobs) {
            auto rows = j.get();
            report.rows.insert(report.rows.end(), rows.begin(), rows.end());
        }
    } else {
        for (std::size_t i = 0; i < schedule.size(); ++i) {
            auto rows = run_window(data, strategies, schedule[i], i, cfg);
            report.rows.insert(report.rows.end(), rows.begin(), rows.end());
        }
    }
    return report;
}

void write_report_csv(std::ostream& out, const BacktestReport& report) {
    csv::write_row(out, {"window", "strategy", "return", "sharpe", "rank", "terminal_value", "reward"});
    for (const auto& r : report.rows) {
        csv::write_row(out, {std::to_string(r.window), r.strategy, csv::format(r.cumulative_return),
                             csv::format(r.sharpe), std::to_string(r.rank), csv::format(r.terminal_value),
                             csv::format(r.reward)});
    }
}

std::vector<ReportRow> read_report_csv(std::istream& in) {
    const auto table = csv::read(in);
    const std::vector<std::string> expected{"window", "strategy", "return", "sharpe", "rank", "terminal_value", "reward"};
    if (table.header != expected) throw Error(ErrorCode::ParseError, "unexpected report header");
    std::vector<ReportRow> rows;
    for (const auto& cells : table.rows) {
        ReportRow r;
        r.window = static_cast<std::size_t>(csv::parse_double(cells.at(0)));
        r.strategy = cells.at(1);
        r.cumulative_return = csv::parse_double(cells.at(2));
        r.sharpe = csv::parse_double(cells.at(3));
        r.rank = static_cast<int>(csv::parse_double(cells.at(4)));
        r.terminal_value = csv::parse_double(cells.at(5));
        r.reward = csv::parse_double(cells.at(6));
        rows.push_back(std::move(r));
    }
    return rows;
}

void write_ranks_csv(std::ostream& out, const BacktestReport& report) {
    std::vector<std::string> header{"window", "test_start"};
    header.insert(header.end(), report.strategies.begin(), report.strategies.end());
    csv::write_row(out, header);
    for (std::size_t w = 0; w < report.windows.size(); ++w) {
        std::vector<std::string> cells{std::to_string(w + 1), format_date(report.windows[w].test_start)};
        for (std::size_t s = 0; s < report.strategies.size(); ++s) cells.push_back(std::to_string(report.at(w, s).rank));
        csv::write_row(out, cells);
    }
}

void write_schedule_csv(std::ostream& out, const std::vector<WindowSpec>& schedule) {
    csv::write_row(out, {"window", "train_start", "train_end", "test_start", "test_end"});
    for (std::size_t i = 0; i < schedule.size(); ++i) {
        const auto& w = schedule[i];
        csv::write_row(out, {std::to_string(i + 1), format_date(w.train_start), format_date(w.train_end),
                             format_date(w.test_start), format_date(w.test_end)});
    }
}

}  // namespace esgport::backtest
