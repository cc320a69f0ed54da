#include "esgport/cli.hpp"

#include "esgport/backtest.hpp"
#include "esgport/capm.hpp"
#include "esgport/config.hpp"
#include "esgport/csv.hpp"
#include "esgport/dmv.hpp"
#include "esgport/ensemble.hpp"
#include "esgport/errors.hpp"
#include "esgport/ratings.hpp"
#include "esgport/rng.hpp"
#include "esgport/synthgen.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

namespace fs = std::filesystem;

namespace esgport::cli {

namespace {

constexpr std::string_view kVersion = "esgport 1.0.0";

std::string read_bytes(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw Error(ErrorCode::FileNotFound, "input file not found: " + p.string());
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

/// Resolved configuration plus the artifacts of one invocation.
class Run {
public:
    Run(std::string command, config::Config cfg, fs::path config_dir, std::set<std::string> file_keys)
        : command_(std::move(command)), cfg_(std::move(cfg)), config_dir_(std::move(config_dir)),
          file_keys_(std::move(file_keys)) {}

    const config::Config& cfg() const noexcept { return cfg_; }

    /// Input path for `key`, relative to the config file when it came from there.
    fs::path input(const std::string& key) {
        fs::path p = cfg_.require(key);
        if (p.is_relative() && file_keys_.count(key) && !config_dir_.empty()) p = config_dir_ / p;
        inputs_[key] = p.string() + " fnv1a64=" + config::hex64(fnv1a64(read_bytes(p)));
        return p;
    }

    /// Record an input read indirectly (e.g. price files listed by a portfolio file).
    void note_input(const std::string& key, const fs::path& p) {
        inputs_[key] = p.string() + " fnv1a64=" + config::hex64(fnv1a64(read_bytes(p)));
    }

    std::uint64_t seed() const {
        if (!cfg_.has("run.seed")) {
            throw Error(ErrorCode::InvalidArgument, "command '" + command_ + "' is stochastic and needs run.seed (--seed)");
        }
        return cfg_.get_u64("run.seed", 0);
    }

    void emit(const std::string& name, std::string content) { outputs_[name] = std::move(content); }

    void finish(std::ostream& out) const {
        const fs::path dir = cfg_.get_string("run.out", "out");
        std::error_code ec;
        fs::create_directories(dir, ec);
        if (ec) throw Error(ErrorCode::InvalidArgument, "cannot create output directory " + dir.string());
        std::ostringstream manifest;
        manifest << "version=" << kVersion << "\n";
        manifest << "command=" << command_ << "\n";
        manifest << "config_hash=" << config::hex64(cfg_.hash()) << "\n";
        manifest << "seed=" << cfg_.get_string("run.seed", "none") << "\n";
        for (const auto& [k, v] : inputs_) manifest << "input." << k << "=" << v << "\n";
        for (const auto& [name, content] : outputs_) {
            write_file(dir / name, content);
            manifest << "output." << name << "=fnv1a64=" << config::hex64(fnv1a64(content)) << "\n";
        }
        write_file(dir / "manifest.txt", manifest.str());
        out << "wrote " << outputs_.size() << " file(s) to " << dir.string() << "\n";
    }

private:
    static void write_file(const fs::path& p, const std::string& content) {
        if (p.has_parent_path()) fs::create_directories(p.parent_path());
        std::ofstream f(p, std::ios::binary);
        if (!f) throw Error(ErrorCode::InvalidArgument, "cannot write " + p.string());
        f << content;
    }

    std::string command_;
    config::Config cfg_;
    fs::path config_dir_;
    std::set<std::string> file_keys_;
    std::map<std::string, std::string> inputs_;
    std::map<std::string, std::string> outputs_;
};

template <class Fn>
std::string render(Fn&& fn) {
    std::ostringstream os;
    fn(os);
    return os.str();
}

// ---------------------------------------------------------------------------

void cmd_harmonize(Run& run) {
    const auto panel = ratings::read_panel_csv(run.input("input.panel"));
    run.emit("panel.csv", render([&](std::ostream& os) { ratings::write_panel_csv(os, panel); }));
}

void cmd_corr(Run& run) {
    const auto panel = ratings::read_panel_csv(run.input("input.panel"));
    const Eigen::MatrixXd c = ratings::rater_correlation(panel);
    run.emit("corr.csv", render([&](std::ostream& os) { ratings::write_matrix_csv(os, panel.raters(), c); }));
}

void cmd_ensemble(Run& run) {
    const auto panel = ratings::read_panel_csv(run.input("input.panel"));
    const std::string name = run.cfg().get_string("ensemble.method", "centroid");
    const auto method = ensemble::parse_method(name);
    if (!method) throw Error(ErrorCode::InvalidArgument, "unknown ensemble method " + name);
    const ensemble::EnsembleSpec spec{*method, run.cfg().get_double("ensemble.alpha", ensemble::kDefaultAlpha)};
    const auto result = ensemble::combine(panel, spec);
    run.emit("ensemble.csv", render([&](std::ostream& os) { ensemble::write_scores_csv(os, result); }));
    if (result.pca) {
        run.emit("loadings.csv",
                 render([&](std::ostream& os) { ensemble::write_loadings_csv(os, panel.raters(), *result.pca); }));
    }
}

void cmd_dmv(Run& run) {
    const auto& cfg = run.cfg();
    dmv::MarketParams m;
    m.mu_f = cfg.get_double("market.mu_f", 0.0);
    cfg.require("market.mu_M");
    cfg.require("market.sigma2_M");
    m.mu_M = cfg.get_double("market.mu_M", 0.0);
    m.sigma2_M = cfg.get_double("market.sigma2_M", 0.0);
    m.mu_g = cfg.get_double("market.mu_g", 0.0);
    m.sigma2_g = cfg.get_double("market.sigma2_g", 0.0);
    m.validate();
    const double gamma = cfg.get_double("profiles.gamma", dmv::kDefaultGamma);
    const double theta = cfg.get_double("profiles.theta", dmv::kDefaultTheta);
    const std::vector<double> grid(dmv::kDefaultTasteGrid.begin(), dmv::kDefaultTasteGrid.end());
    const auto b_grid = cfg.get_doubles("profiles.b", grid);
    auto type_names = cfg.get_list("profiles.types");
    if (type_names.empty()) type_names = {"I", "N", "U"};

    std::ostringstream rows;
    csv::write_row(rows, {"type", "gamma", "b", "theta", "w", "term_benchmark", "term_esg_return",
                          "term_esg_uncertainty", "premium", "variance", "sharpe"});
    for (const auto& tn : type_names) {
        const auto kind = dmv::parse_investor_type(tn);
        if (!kind) throw Error(ErrorCode::InvalidArgument, "unknown investor type " + tn);
        for (double b : b_grid) {
            const dmv::InvestorProfile p{*kind, gamma, theta, b};
            const auto s = dmv::dmv_optimal_weight(m, p);
            double sr = std::nan("");
            if (s.variance > 0.0) sr = s.sharpe();
            csv::write_row(rows, {std::string(dmv::to_string(*kind)), csv::format(gamma), csv::format(b),
                                  csv::format(p.effective_theta()), csv::format(s.w), csv::format(s.term_benchmark),
                                  csv::format(s.term_esg_return), csv::format(s.term_esg_uncertainty),
                                  csv::format(s.excess_return), csv::format(s.variance), csv::format(sr)});
        }
    }
    run.emit("dmv.csv", rows.str());

    std::ostringstream gaps;
    csv::write_row(gaps, {"b", "premium_n_minus_i", "premium_u_minus_n", "premium_u_minus_i", "variance_n_minus_i",
                          "variance_u_minus_n", "variance_u_minus_i", "e_g"});
    for (double b : b_grid) {
        const auto pg = dmv::premium_gaps(m, gamma, b, theta);
        const auto vg = dmv::variance_gaps(m, gamma, b, theta);
        csv::write_row(gaps, {csv::format(b), csv::format(pg.n_minus_i), csv::format(pg.u_minus_n),
                              csv::format(pg.u_minus_i), csv::format(vg.n_minus_i), csv::format(vg.u_minus_n),
                              csv::format(vg.u_minus_i), csv::format(vg.e_g)});
    }
    run.emit("dmv_gaps.csv", gaps.str());
}

void cmd_capm(Run& run) {
    const auto u = capm::read_universe(run.input("capm.means"), run.input("capm.sigma_m"), run.input("capm.sigma_gm"));
    const auto pop = capm::read_agents(run.input("capm.agents"));
    const std::string model = run.cfg().get_string("capm.model", "uncertainty");
    capm::CapmResult r;
    if (model == "uncertainty") {
        r = capm::capm_with_uncertainty(u, pop);
    } else if (model == "no-uncertainty") {
        r = capm::capm_no_uncertainty(u, pop);
    } else {
        throw Error(ErrorCode::InvalidArgument, "capm.model must be uncertainty or no-uncertainty, got " + model);
    }
    run.emit("capm.csv", render([&](std::ostream& os) { capm::write_result_csv(os, u.assets, r); }));

    std::ostringstream agg;
    csv::write_row(agg, {"name", "value"});
    csv::write_row(agg, {"mu_M", csv::format(r.mu_M)});
    csv::write_row(agg, {"sigma2_M", csv::format(r.sigma2_M)});
    csv::write_row(agg, {"mu_g", csv::format(r.mu_g)});
    csv::write_row(agg, {"sigma2_g", csv::format(r.sigma2_g)});
    if (const auto* s = std::get_if<capm::ScalarTaste>(&r.taste)) {
        csv::write_row(agg, {"gamma_M", csv::format(s->gamma_M)});
        csv::write_row(agg, {"b_M", csv::format(s->b_M)});
    }
    run.emit("aggregation.csv", agg.str());
    if (const auto* mt = std::get_if<capm::MatrixTaste>(&r.taste)) {
        run.emit("gamma_mu.csv",
                 render([&](std::ostream& os) { ratings::write_matrix_csv(os, u.assets, mt->Gamma_MU, "asset"); }));
        run.emit("b_mu.csv",
                 render([&](std::ostream& os) { ratings::write_matrix_csv(os, u.assets, mt->B_MU, "asset"); }));
    }
}

void cmd_synth(Run& run) {
    const auto& cfg = run.cfg();
    synth::SynthConfig sc;
    sc.seed = run.seed();
    sc.n_firms = static_cast<std::size_t>(cfg.get_int("synth.n_firms", 30));
    sc.n_assets = static_cast<std::size_t>(cfg.get_int("synth.n_assets", 10));
    sc.n_bars = static_cast<std::size_t>(cfg.get_int("synth.n_bars", 252));
    const std::string target = cfg.get_string("synth.target", "reference");
    if (target == "reference") {
        sc.rater_corr_target = synth::reference_rater_correlation();
        sc.raters = synth::reference_rater_names();
    } else if (target == "identity") {
        const auto k = cfg.get_int("synth.n_raters", 4);
        if (k < 1) throw Error(ErrorCode::InvalidArgument, "synth.n_raters must be positive");
        sc.rater_corr_target = Eigen::MatrixXd::Identity(k, k);
    } else if (target == "equicorrelated") {
        const auto k = cfg.get_int("synth.n_raters", 4);
        const double rho = cfg.get_double("synth.rater_corr", 0.3);
        if (k < 1) throw Error(ErrorCode::InvalidArgument, "synth.n_raters must be positive");
        sc.rater_corr_target = Eigen::MatrixXd::Constant(k, k, rho);
        sc.rater_corr_target.diagonal().setOnes();
    } else {
        throw Error(ErrorCode::InvalidArgument, "synth.target must be reference, identity or equicorrelated");
    }
    const std::string marginal = cfg.get_string("synth.marginal", "uniform");
    if (marginal == "truncnormal") {
        sc.esg_marginal = {synth::MarginalKind::TruncNormal, cfg.get_double("synth.esg_mean", 50.0),
                           cfg.get_double("synth.esg_sd", 20.0)};
    } else if (marginal != "uniform") {
        throw Error(ErrorCode::InvalidArgument, "synth.marginal must be uniform or truncnormal");
    }
    if (cfg.has("synth.start")) sc.start_date = parse_date(cfg.require("synth.start"));
    const double ppy = cfg.get_double("synth.periods_per_year", 252.0);
    const double drift = cfg.get_double("synth.drift", 0.06);
    const double vol = cfg.get_double("synth.vol", 0.2);
    const double rho = cfg.get_double("synth.return_corr", 0.3);
    const auto n = static_cast<Eigen::Index>(sc.asset_count());
    sc.return_mean = Eigen::VectorXd::Constant(n, (drift - 0.5 * vol * vol) / ppy);
    sc.return_cov = Eigen::MatrixXd::Constant(n, n, rho * vol * vol / ppy);
    sc.return_cov.diagonal().setConstant(vol * vol / ppy);

    const auto panel = synth::gen_esg_panel(sc);
    const std::string letter_rater = cfg.get_string("synth.letter_rater", "");
    std::ostringstream esg;
    if (letter_rater.empty()) {
        ratings::write_panel_csv(esg, panel);
    } else {
        const auto col = panel.rater_index(letter_rater);
        if (!col) throw Error(ErrorCode::InvalidArgument, "synth.letter_rater " + letter_rater + " is not a rater");
        std::vector<std::string> header{"firm"};
        header.insert(header.end(), panel.raters().begin(), panel.raters().end());
        csv::write_row(esg, header);
        for (Eigen::Index i = 0; i < panel.n_firms(); ++i) {
            std::vector<std::string> cells{panel.firms()[static_cast<std::size_t>(i)]};
            for (Eigen::Index j = 0; j < panel.n_raters(); ++j) {
                const double v = panel.values()(i, j);
                cells.push_back(j == *col ? std::string(ratings::to_string(synth::grade_for_score(v))) : csv::format(v));
            }
            csv::write_row(esg, cells);
        }
    }
    run.emit("esg.csv", esg.str());

    const auto prices = synth::gen_prices(sc);
    std::ostringstream portfolio;
    csv::write_row(portfolio, {"symbol", "path"});
    for (std::size_t j = 0; j < prices.size(); ++j) {
        const std::string sym = synth::firm_id(j);
        const std::string rel = "prices/" + sym + ".csv";
        run.emit(rel, render([&](std::ostream& os) { env::write_price_csv(os, prices[j]); }));
        csv::write_row(portfolio, {sym, rel});
    }
    run.emit("portfolio.csv", portfolio.str());
}

env::MarketData load_market(Run& run) {
    const fs::path portfolio = run.input("input.portfolio");
    const auto table = csv::read_file(portfolio);
    const auto sym_col = table.find_column("symbol");
    const auto path_col = table.find_column("path");
    if (!sym_col || !path_col) throw Error(ErrorCode::ParseError, portfolio.string() + ": expected symbol,path columns");
    std::vector<std::string> symbols;
    std::vector<std::vector<env::OhlcvBar>> series;
    for (const auto& row : table.rows) {
        fs::path p = row.at(*path_col);
        if (p.is_relative()) p = portfolio.parent_path() / p;
        symbols.push_back(row.at(*sym_col));
        run.note_input("price." + symbols.back(), p);
        series.push_back(env::read_price_csv(p));
    }
    if (symbols.empty()) throw Error(ErrorCode::InsufficientData, portfolio.string() + " lists no assets");
    return env::MarketData::align(std::move(symbols), series);
}

void cmd_backtest(Run& run) {
    const auto& cfg = run.cfg();
    const auto panel = ratings::read_panel_csv(run.input("input.panel"));
    const auto data = load_market(run);
    if (data.n_bars() < 3) throw Error(ErrorCode::InsufficientData, "aligned price history is too short");

    const Date start = cfg.has("schedule.start") ? parse_date(cfg.require("schedule.start")) : data.dates.front();
    const Date end = cfg.has("schedule.end") ? parse_date(cfg.require("schedule.end")) : data.dates.back();
    const auto schedule = backtest::rolling_schedule(start, end, static_cast<int>(cfg.get_int("schedule.train_months", 36)),
                                                     static_cast<int>(cfg.get_int("schedule.test_months", 12)),
                                                     static_cast<int>(cfg.get_int("schedule.stride_months", 12)));

    backtest::BacktestConfig bc;
    bc.seed = run.seed();
    bc.rf = cfg.get_double("backtest.rf", 0.0);
    bc.periods_per_year = cfg.get_double("backtest.periods_per_year", 252.0);
    bc.esg_scale = cfg.get_double("backtest.esg_scale", 1.0);
    bc.env.cost = cfg.get_double("backtest.cost", 0.0);
    bc.env.initial_cash = cfg.get_double("backtest.initial_cash", 1'000'000.0);
    const std::string rebalance = cfg.get_string("backtest.rebalance", "none");
    if (rebalance != "none" && rebalance != "daily") {
        throw Error(ErrorCode::InvalidArgument, "backtest.rebalance must be none or daily");
    }
    bc.rebalance_daily = rebalance == "daily";
    bc.search.population = static_cast<int>(cfg.get_int("search.population", 64));
    bc.search.iterations = static_cast<int>(cfg.get_int("search.iterations", 200));
    bc.search.elite_fraction = cfg.get_double("search.elite_fraction", 0.125);
    bc.search.initial_sd = cfg.get_double("search.initial_sd", 1.0);
    bc.search.validate();
    bc.parallel = cfg.get_bool("backtest.parallel", true);

    env::RewardSpec reward;
    const std::string kind = cfg.get_string("backtest.reward", "U");
    const auto rk = env::parse_reward_kind(kind);
    if (!rk) throw Error(ErrorCode::InvalidArgument, "unknown backtest.reward " + kind);
    reward.kind = *rk;
    reward.alpha_r = cfg.get_double("backtest.alpha_r", 1.0);
    reward.gamma = cfg.get_double("backtest.gamma", dmv::kDefaultGamma);
    reward.b = cfg.get_double("backtest.b", 1.0);
    reward.theta = cfg.get_double("backtest.theta", dmv::kDefaultTheta);
    reward.validate();
    const std::string opt = cfg.get_string("backtest.optimizer", "closed-form");
    const auto ok = backtest::parse_optimizer(opt);
    if (!ok) throw Error(ErrorCode::InvalidArgument, "backtest.optimizer must be closed-form or cem, got " + opt);

    const auto sources = backtest::esg_sources(panel, data.symbols, cfg.get_double("backtest.alpha", 0.5));
    const Eigen::VectorXd dispersion = backtest::esg_dispersion(panel, data.symbols);
    auto wanted = cfg.get_list("backtest.strategies");
    std::vector<backtest::Strategy> strategies;
    for (const auto& src : sources) {
        if (!wanted.empty() && std::find(wanted.begin(), wanted.end(), src.name) == wanted.end()) continue;
        strategies.push_back({src.name, src.scores, dispersion, reward, *ok});
    }
    for (const auto& w : wanted) {
        if (std::none_of(sources.begin(), sources.end(), [&](const auto& s) { return s.name == w; })) {
            throw Error(ErrorCode::InvalidArgument, "unknown strategy " + w);
        }
    }

    const auto report = backtest::run_comparison(data, strategies, schedule, bc);
    run.emit("report.csv", render([&](std::ostream& os) { backtest::write_report_csv(os, report); }));
    run.emit("ranks.csv", render([&](std::ostream& os) { backtest::write_ranks_csv(os, report); }));
    run.emit("schedule.csv", render([&](std::ostream& os) { backtest::write_schedule_csv(os, schedule); }));
    std::ostringstream weights;
    std::vector<std::string> header{"window", "strategy"};
    header.insert(header.end(), data.symbols.begin(), data.symbols.end());
    header.push_back("cash");
    csv::write_row(weights, header);
    for (const auto& r : report.rows) {
        std::vector<std::string> cells{std::to_string(r.window), r.strategy};
        for (Eigen::Index j = 0; j < r.weights.size(); ++j) cells.push_back(csv::format(r.weights(j)));
        csv::write_row(weights, cells);
    }
    run.emit("weights.csv", weights.str());
}

std::string escape(std::string_view text) {
    std::string out;
    for (char c : text) {
        if (c == '"' || c == '\\') out += '\\';
        out += (c == '\n' || c == '\r') ? ' ' : c;
    }
    return out;
}

}  // namespace

std::string diagnostic(std::string_view category, std::string_view code, std::string_view detail) {
    return "esgport: error=" + std::string(category) + " code=" + std::string(code) + " detail=\"" + escape(detail) +
           "\"";
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Portfolio construction under ESG-rating disagreement", "esgport"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(kVersion));

    std::string config_path;
    std::string out_dir;
    std::optional<std::uint64_t> seed;
    std::vector<std::string> sets;
    std::map<std::string, std::string> flags;

    auto common = [&](CLI::App* sub) {
        sub->add_option("-c,--config", config_path, "Run configuration file");
        sub->add_option("-o,--out", out_dir, "Output directory (run.out)");
        sub->add_option("--seed", seed, "Master seed (run.seed)");
        sub->add_option("--set", sets, "Override section.key=value")->take_all();
    };
    auto flag = [&](CLI::App* sub, const std::string& name, const std::string& key, const std::string& help) {
        return sub->add_option_function<std::string>(name, [&flags, key](const std::string& v) { flags[key] = v; }, help);
    };

    std::map<std::string, void (*)(Run&)> handlers{
        {"harmonize", cmd_harmonize}, {"corr", cmd_corr},   {"ensemble", cmd_ensemble}, {"dmv", cmd_dmv},
        {"capm", cmd_capm},           {"synth", cmd_synth}, {"backtest", cmd_backtest}};
    const std::map<std::string, std::string> help{
        {"harmonize", "Map letter grades onto the 0-100 scale and write the numeric panel"},
        {"corr", "Pairwise rater correlation matrix"},
        {"ensemble", "Combine raters into one score per firm"},
        {"dmv", "Optimal weights, premiums and variances over a taste grid"},
        {"capm", "Equilibrium betas and alphas with ESG tastes"},
        {"synth", "Generate a synthetic ESG panel and price files"},
        {"backtest", "Rolling-window strategy comparison"}};
    std::map<std::string, CLI::App*> subs;
    for (const auto& [name, text] : help) {
        auto* sub = app.add_subcommand(name, text);
        common(sub);
        subs[name] = sub;
    }
    for (const char* s : {"harmonize", "corr", "ensemble", "backtest"}) {
        flag(subs[s], "--panel", "input.panel", "ESG panel CSV");
    }
    flag(subs["ensemble"], "--method", "ensemble.method", "centroid|median|pca|alpha-maxmin");
    flag(subs["ensemble"], "--alpha", "ensemble.alpha", "Alpha-maxmin weight on the worst view");
    flag(subs["capm"], "--means", "capm.means", "asset,mu_r,mu_gM CSV");
    flag(subs["capm"], "--sigma-m", "capm.sigma_m", "Return covariance CSV");
    flag(subs["capm"], "--sigma-gm", "capm.sigma_gm", "ESG covariance CSV");
    flag(subs["capm"], "--agents", "capm.agents", "weight,gamma,b,theta CSV");
    flag(subs["capm"], "--model", "capm.model", "uncertainty|no-uncertainty");
    flag(subs["synth"], "--n-firms", "synth.n_firms", "Number of firms");
    flag(subs["synth"], "--n-assets", "synth.n_assets", "Number of traded assets");
    flag(subs["synth"], "--n-bars", "synth.n_bars", "Bars per asset");
    flag(subs["backtest"], "--prices", "input.portfolio", "Portfolio CSV (symbol,path)");
    flag(subs["backtest"], "--optimizer", "backtest.optimizer", "closed-form|cem")
        ->check(CLI::IsMember({"closed-form", "cem"}));
    flag(subs["backtest"], "--population", "search.population", "Cross-entropy population");
    flag(subs["backtest"], "--iterations", "search.iterations", "Cross-entropy iterations");
    flag(subs["backtest"], "--rebalance", "backtest.rebalance", "none|daily")
        ->check(CLI::IsMember({"none", "daily"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForVersion&) {
        out << kVersion << "\n";
        return 0;
    } catch (const CLI::ParseError& e) {
        err << diagnostic("config", "UsageError", e.what()) << "\n";
        return 1;
    }

    std::string command;
    for (const auto& [name, sub] : subs) {
        if (sub->parsed()) command = name;
    }

    try {
        config::Config cfg;
        fs::path config_dir;
        std::set<std::string> file_keys;
        if (!config_path.empty()) {
            cfg = config::Config::load(config_path);
            config_dir = fs::path(config_path).parent_path();
            for (const auto& [k, v] : cfg.values()) file_keys.insert(k);
        }
        for (const auto& s : sets) {
            cfg.apply_override(s);
            const auto key = csv::trim(std::string_view(s).substr(0, s.find('=')));
            file_keys.erase(key);
        }
        for (const auto& [k, v] : flags) {
            cfg.set(k, v);
            file_keys.erase(k);
        }
        if (seed) cfg.set("run.seed", std::to_string(*seed));
        if (!out_dir.empty()) cfg.set("run.out", out_dir);

        Run r(command, std::move(cfg), config_dir, std::move(file_keys));
        handlers.at(command)(r);
        r.finish(out);
        return 0;
    } catch (const Error& e) {
        err << diagnostic(to_string(e.category()), to_string(e.code()), e.what()) << "\n";
        return static_cast<int>(e.category());
    } catch (const std::invalid_argument& e) {
        err << diagnostic("config", "InvalidArgument", e.what()) << "\n";
        return 1;
    } catch (const std::exception& e) {
        err << diagnostic("numerical", "Internal", e.what()) << "\n";
        return 3;
    }
}

}  // namespace esgport::cli
