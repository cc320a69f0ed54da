/**
 * @file dmv.hpp
 * @brief Single-risky-asset Double Mean-Variance investor model.
 *
 * Utility of holding weight w in the market and 1-w in the risk-free asset:
 *
 *   w mu_M + (1-w) mu_f - (gamma/2) w^2 sigma2_M + b (w mu_g - (theta/2) w^2 sigma2_g)
 *
 * Type I investors ignore the ESG term (b = 0), type N ignore ESG-score
 * uncertainty (theta = 0), type U use the full objective. Weights are not
 * clamped; w < 0 or w > 1 are legitimate solutions.
 */
#pragma once

#include <optional>
#include <string_view>
#include <vector>

namespace esgport::dmv {

struct MarketParams {
    double mu_f = 0.0;      ///< risk-free rate per period
    double mu_M = 0.0;      ///< expected market return per period
    double sigma2_M = 0.0;  ///< market return variance, > 0
    double mu_g = 0.0;      ///< expected market ESG score
    double sigma2_g = 0.0;  ///< ESG-score variance, >= 0

    void validate() const;
};

enum class InvestorType { TypeI, TypeN, TypeU };

std::string_view to_string(InvestorType t) noexcept;
std::optional<InvestorType> parse_investor_type(std::string_view text);

inline constexpr double kDefaultGamma = 2.0;
inline constexpr double kDefaultTheta = 1.0;
/// Taste grid used for the calibration tables.
inline const std::vector<double> kDefaultTasteGrid = {0.2, 0.6, 1.0, 1.4, 1.8};

struct InvestorProfile {
    InvestorType kind = InvestorType::TypeU;
    double gamma = kDefaultGamma;  ///< risk aversion, > 0
    double theta = kDefaultTheta;  ///< ESG-uncertainty aversion, >= 0
    double b = 1.0;                ///< pecuniary vs non-pecuniary taste, > 0

    void validate() const;
    /// b after applying the type rule (0 for TypeI).
    double effective_b() const noexcept;
    /// theta after applying the type rule (0 for TypeI and TypeN).
    double effective_theta() const noexcept;
};

struct DmvSolution {
    double w = 0.0;
    double term_benchmark = 0.0;        ///< (mu_M - mu_f) / (gamma sigma2_M)
    double term_esg_return = 0.0;       ///< b mu_g / (gamma sigma2_M)
    double term_esg_uncertainty = 0.0;  ///< subtracted: incremental effect of ESG uncertainty
    double excess_return = 0.0;         ///< w (mu_M - mu_f)
    double variance = 0.0;              ///< w^2 sigma2_M

    /// excess_return / sqrt(variance); throws ZeroVariance when variance == 0.
    double sharpe() const;
};

double dmv_objective(double w, const MarketParams& m, const InvestorProfile& p);

/// Root of the first-order condition. Throws DegenerateDenominator when
/// gamma sigma2_M + b theta sigma2_g <= 0 under the profile's effective parameters.
DmvSolution dmv_optimal_weight(const MarketParams& m, const InvestorProfile& p);

/// Left-hand side of the first-order condition at w.
double first_order_residual(double w, const MarketParams& m, const InvestorProfile& p);

/// Required market excess returns (mu^T - mu_f) for each investor type.
struct TypePremiums {
    double type_i = 0.0;
    double type_n = 0.0;
    double type_u = 0.0;
};
TypePremiums type_premiums(const MarketParams& m, double gamma, double b, double theta);

struct PremiumGaps {
    double n_minus_i = 0.0;
    double u_minus_n = 0.0;
    double u_minus_i = 0.0;
};
PremiumGaps premium_gaps(const MarketParams& m, double gamma, double b, double theta);

/// Portfolio-variance differences between the types from the closed forms,
/// plus each type's variance (w^T)^2 sigma2_M computed directly from its weight.
struct VarianceGaps {
    double n_minus_i = 0.0;
    double u_minus_n = 0.0;
    double u_minus_i = 0.0;
    double e_g = 1.0;  ///< (gamma sigma2_M)^2 / (gamma sigma2_M + b theta sigma2_g)^2

    double w_i = 0.0, w_n = 0.0, w_u = 0.0;
    double var_i = 0.0, var_n = 0.0, var_u = 0.0;
};
VarianceGaps variance_gaps(const MarketParams& m, double gamma, double b, double theta);

/// Mean-variance certainty equivalent a + E[h] - (gamma/2) Var[h].
double mv_certainty_equivalent(double wealth, double mean, double variance, double gamma) noexcept;

}  // namespace esgport::dmv
