#include "esgport/capm.hpp"

#include "esgport/csv.hpp"
#include "esgport/errors.hpp"
#include "esgport/linalg.hpp"

#include <cmath>
#include <ostream>

namespace esgport::capm {

namespace {

Eigen::MatrixXd agent_matrix(const AssetUniverse& u, double gamma, double b, double theta) {
    Eigen::MatrixXd a = gamma * u.Sigma_M;
    if (b * theta != 0.0) a += (b * theta) * u.Sigma_gM;
    return a;
}

void fill_market_stats(const AssetUniverse& u, CapmResult& r) {
    r.sigma2_M = r.X_M.dot(u.Sigma_M * r.X_M);
    if (!(r.sigma2_M > 0.0) || !std::isfinite(r.sigma2_M)) {
        throw Error(ErrorCode::SingularSystem, "market portfolio has zero variance");
    }
    r.sigma2_g = r.X_M.dot(u.Sigma_gM * r.X_M);
    r.beta = u.Sigma_M * r.X_M / r.sigma2_M;
    r.mu_M = r.X_M.dot(u.mu_r);
    r.mu_g = r.X_M.dot(u.mu_gM);
}

}  // namespace

void AssetUniverse::validate() const {
    const Eigen::Index k = mu_r.size();
    if (k < 1) throw Error(ErrorCode::InvalidArgument, "asset universe is empty");
    if (mu_gM.size() != k || Sigma_M.rows() != k || Sigma_M.cols() != k || Sigma_gM.rows() != k ||
        Sigma_gM.cols() != k) {
        throw Error(ErrorCode::InvalidArgument, "asset universe dimensions are inconsistent");
    }
    if (!assets.empty() && static_cast<Eigen::Index>(assets.size()) != k) {
        throw Error(ErrorCode::InvalidArgument, "asset label count does not match universe size");
    }
    if (!mu_r.allFinite() || !mu_gM.allFinite() || !Sigma_M.allFinite() || !Sigma_gM.allFinite()) {
        throw Error(ErrorCode::InvalidArgument, "asset universe contains non-finite values");
    }
    if (!linalg::is_symmetric(Sigma_M, 1e-10) || !linalg::is_symmetric(Sigma_gM, 1e-10)) {
        throw Error(ErrorCode::InvalidArgument, "covariance matrices must be symmetric");
    }
    Eigen::LLT<Eigen::MatrixXd> llt(Sigma_M);
    if (llt.info() != Eigen::Success) {
        throw Error(ErrorCode::SingularSystem, "Sigma_M is not positive definite");
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(Sigma_gM, Eigen::EigenvaluesOnly);
    const double scale = std::max(1.0, Sigma_gM.cwiseAbs().maxCoeff());
    if (eig.eigenvalues().minCoeff() < -1e-10 * scale) {
        throw Error(ErrorCode::InvalidArgument, "Sigma_gM is not positive semidefinite");
    }
}

void AgentPopulation::validate() const {
    if (agents.empty()) throw Error(ErrorCode::InvalidArgument, "agent population is empty");
    double total = 0.0;
    for (const auto& a : agents) {
        if (!(a.weight >= 0.0)) throw Error(ErrorCode::InvalidArgument, "agent weight must be >= 0");
        if (!(a.gamma > 0.0)) throw Error(ErrorCode::InvalidArgument, "agent gamma must be > 0");
        if (!(a.b > 0.0)) throw Error(ErrorCode::InvalidArgument, "agent b must be > 0");
        if (!(a.theta >= 0.0)) throw Error(ErrorCode::InvalidArgument, "agent theta must be >= 0");
        total += a.weight;
    }
    if (std::abs(total - 1.0) > 1e-12) {
        throw Error(ErrorCode::InvalidArgument, "agent weights sum to " + csv::format(total) + ", not 1");
    }
}

Eigen::VectorXd CapmResult::normalized_weights() const {
    const double s = X_M.sum();
    if (s == 0.0) throw Error(ErrorCode::SingularSystem, "market portfolio weights sum to zero");
    return X_M / s;
}

Eigen::VectorXd agent_demand(const AssetUniverse& u, double gamma, double b, double theta) {
    return linalg::solve_checked(agent_matrix(u, gamma, b, theta), (u.mu_r + b * u.mu_gM).eval());
}

ScalarTaste aggregate_no_uncertainty(const AgentPopulation& pop) {
    pop.validate();
    double inv_gamma = 0.0;
    double taste = 0.0;
    for (const auto& a : pop.agents) {
        inv_gamma += a.weight / a.gamma;
        taste += a.weight * a.b / a.gamma;
    }
    ScalarTaste t;
    t.gamma_M = 1.0 / inv_gamma;
    t.b_M = taste * t.gamma_M;
    return t;
}

CapmResult capm_no_uncertainty(const AssetUniverse& u, const AgentPopulation& pop) {
    u.validate();
    const ScalarTaste taste = aggregate_no_uncertainty(pop);

    CapmResult r;
    r.X_M = Eigen::VectorXd::Zero(u.n());
    for (const auto& a : pop.agents) r.X_M += a.weight * agent_demand(u, a.gamma, a.b, 0.0);
    fill_market_stats(u, r);
    r.alpha_taste = taste.b_M * (r.beta * r.mu_g - u.mu_gM);
    r.alpha = r.alpha_taste;
    r.alpha_risk = Eigen::VectorXd::Zero(u.n());
    r.taste = taste;
    return r;
}

MatrixTaste aggregate_with_uncertainty(const AssetUniverse& u, const AgentPopulation& pop) {
    u.validate();
    pop.validate();
    const Eigen::Index k = u.n();
    Eigen::MatrixXd inv_sum = Eigen::MatrixXd::Zero(k, k);
    Eigen::MatrixXd taste_sum = Eigen::MatrixXd::Zero(k, k);
    const Eigen::MatrixXd identity = Eigen::MatrixXd::Identity(k, k);
    for (const auto& a : pop.agents) {
        const Eigen::MatrixXd a_inv = linalg::solve_checked(agent_matrix(u, a.gamma, a.b, a.theta), identity);
        inv_sum += a.weight * a_inv;
        taste_sum += (a.weight * a.b) * a_inv;
    }
    MatrixTaste t;
    t.Gamma_MU = linalg::inverse_checked(inv_sum);
    // Gamma * taste_sum == solve(inv_sum, taste_sum)
    t.B_MU = linalg::solve_checked(inv_sum, taste_sum);
    return t;
}

CapmResult capm_with_uncertainty(const AssetUniverse& u, const AgentPopulation& pop) {
    MatrixTaste taste = aggregate_with_uncertainty(u, pop);

    CapmResult r;
    r.X_M = Eigen::VectorXd::Zero(u.n());
    for (const auto& a : pop.agents) r.X_M += a.weight * agent_demand(u, a.gamma, a.b, a.theta);
    fill_market_stats(u, r);

    // Aggregation gives mu_r = Gamma X_M - B mu_gM; project out the beta * mu_M part.
    const Eigen::VectorXd priced = taste.Gamma_MU * r.X_M - taste.B_MU * u.mu_gM;
    r.alpha = priced - r.beta * r.X_M.dot(priced);
    r.alpha_taste = taste.B_MU * (r.beta * r.mu_g - u.mu_gM);
    r.alpha_risk = r.alpha - r.alpha_taste;
    r.taste = std::move(taste);
    return r;
}

AssetUniverse read_universe(const std::filesystem::path& means_csv, const std::filesystem::path& sigma_m_csv,
                            const std::filesystem::path& sigma_g_csv) {
    const csv::Table t = csv::read_file(means_csv);
    const auto mc = t.column("mu_r");
    const auto gc = t.column("mu_gM");
    const auto ac = t.find_column("asset");
    AssetUniverse u;
    const auto n = static_cast<Eigen::Index>(t.rows.size());
    u.mu_r.resize(n);
    u.mu_gM.resize(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const auto& row = t.rows[static_cast<std::size_t>(i)];
        u.mu_r(i) = csv::parse_double(row[mc]);
        u.mu_gM(i) = csv::parse_double(row[gc]);
        u.assets.push_back(ac ? row[*ac] : "asset" + std::to_string(i + 1));
    }
    auto load = [n](const std::filesystem::path& p) {
        const auto rows = csv::read_matrix_file(p);
        if (static_cast<Eigen::Index>(rows.size()) != n) {
            throw Error(ErrorCode::ParseError, p.string() + ": expected " + std::to_string(n) + " rows");
        }
        Eigen::MatrixXd m(n, n);
        for (Eigen::Index i = 0; i < n; ++i) {
            const auto& row = rows[static_cast<std::size_t>(i)];
            if (static_cast<Eigen::Index>(row.size()) != n) {
                throw Error(ErrorCode::ParseError, p.string() + ": matrix is not square");
            }
            for (Eigen::Index j = 0; j < n; ++j) m(i, j) = row[static_cast<std::size_t>(j)];
        }
        return m;
    };
    u.Sigma_M = load(sigma_m_csv);
    u.Sigma_gM = load(sigma_g_csv);
    u.validate();
    return u;
}

AgentPopulation read_agents(const std::filesystem::path& path) {
    const csv::Table t = csv::read_file(path);
    const auto wc = t.column("weight");
    const auto gc = t.column("gamma");
    const auto bc = t.column("b");
    const auto tc = t.column("theta");
    AgentPopulation pop;
    for (const auto& row : t.rows) {
        pop.agents.push_back({csv::parse_double(row[wc]), csv::parse_double(row[gc]), csv::parse_double(row[bc]),
                              csv::parse_double(row[tc])});
    }
    pop.validate();
    return pop;
}

void write_result_csv(std::ostream& out, const std::vector<std::string>& assets, const CapmResult& r) {
    csv::write_row(out, {"asset", "beta", "alpha", "alpha_taste", "x_m"});
    for (Eigen::Index i = 0; i < r.beta.size(); ++i) {
        const std::string name = i < static_cast<Eigen::Index>(assets.size()) ? assets[static_cast<std::size_t>(i)]
                                                                                : "asset" + std::to_string(i + 1);
        csv::write_row(out, {name, csv::format(r.beta(i)), csv::format(r.alpha(i)), csv::format(r.alpha_taste(i)),
                             csv::format(r.X_M(i))});
    }
}

}  // namespace esgport::capm
