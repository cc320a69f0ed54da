/**
 * @file capm.hpp
 * @brief Multi-asset equilibrium with ESG-taste agents.
 *
 * Agent i holds X_i = (gamma_i Sigma_M + b_i theta_i Sigma_gM)^{-1} (mu_r + b_i mu_gM).
 * The market portfolio is the wealth-weighted sum of agent demands (not
 * renormalized), beta = Sigma_M X_M / sigma2_M and alpha is the part of mu_r
 * not explained by beta * mu_M.
 */
#pragma once

#include <Eigen/Dense>

#include <filesystem>
#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

namespace esgport::capm {

struct AssetUniverse {
    Eigen::VectorXd mu_r;      ///< expected excess returns
    Eigen::MatrixXd Sigma_M;   ///< return covariance, SPD
    Eigen::VectorXd mu_gM;     ///< expected ESG scores
    Eigen::MatrixXd Sigma_gM;  ///< ESG-score covariance, PSD
    std::vector<std::string> assets;  ///< optional labels

    Eigen::Index n() const noexcept { return mu_r.size(); }
    void validate() const;
};

struct Agent {
    double weight = 1.0;
    double gamma = 2.0;
    double b = 1.0;
    double theta = 0.0;
};

struct AgentPopulation {
    std::vector<Agent> agents;
    void validate() const;
};

/// gamma_M = 1 / sum(w_i / gamma_i), b_M = gamma_M * sum(w_i b_i / gamma_i).
struct ScalarTaste {
    double gamma_M = 0.0;
    double b_M = 0.0;
};

/// Gamma_MU = (sum w_i A_i^{-1})^{-1}, B_MU = Gamma_MU * sum(w_i b_i A_i^{-1}),
/// with A_i = gamma_i Sigma_M + b_i theta_i Sigma_gM.
struct MatrixTaste {
    Eigen::MatrixXd Gamma_MU;
    Eigen::MatrixXd B_MU;
};

struct CapmResult {
    Eigen::VectorXd X_M;
    Eigen::VectorXd beta;
    /// Pricing alpha: mu_r = beta * mu_M + alpha holds identically.
    Eigen::VectorXd alpha;
    /// Closed-form taste term B (beta mu_g - mu_gM). Equals `alpha` in the
    /// no-uncertainty model; with ESG uncertainty it differs by `alpha_risk`.
    Eigen::VectorXd alpha_taste;
    /// alpha - alpha_taste: the ESG-uncertainty risk component; zero without uncertainty.
    Eigen::VectorXd alpha_risk;
    double mu_M = 0.0;
    double mu_g = 0.0;
    double sigma2_M = 0.0;
    double sigma2_g = 0.0;
    std::variant<ScalarTaste, MatrixTaste> taste;

    /// X_M / sum(X_M), reporting only.
    Eigen::VectorXd normalized_weights() const;
};

/// X_i = (gamma Sigma_M + b theta Sigma_gM)^-1 (mu_r + b mu_gM).
Eigen::VectorXd agent_demand(const AssetUniverse& u, double gamma, double b, double theta);

/// Single-asset alpha without ESG uncertainty: b_M (beta mu_g - own_esg).
inline double esg_alpha(double beta, double mu_g, double own_esg, double b_M) noexcept {
    return b_M * (beta * mu_g - own_esg);
}

ScalarTaste aggregate_no_uncertainty(const AgentPopulation& pop);
CapmResult capm_no_uncertainty(const AssetUniverse& u, const AgentPopulation& pop);

MatrixTaste aggregate_with_uncertainty(const AssetUniverse& u, const AgentPopulation& pop);
CapmResult capm_with_uncertainty(const AssetUniverse& u, const AgentPopulation& pop);

/// Reads `asset,mu_r,mu_gM` plus two headerless square matrices.
AssetUniverse read_universe(const std::filesystem::path& means_csv, const std::filesystem::path& sigma_m_csv,
                            const std::filesystem::path& sigma_g_csv);
/// `weight,gamma,b,theta`
AgentPopulation read_agents(const std::filesystem::path& path);

/// `asset,beta,alpha,alpha_taste,x_m`
void write_result_csv(std::ostream& out, const std::vector<std::string>& assets, const CapmResult& r);

}  // namespace esgport::capm
