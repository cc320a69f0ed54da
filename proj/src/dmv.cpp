#include "esgport/dmv.hpp"

#include "esgport/csv.hpp"
#include "esgport/errors.hpp"

#include <cmath>

namespace esgport::dmv {

void MarketParams::validate() const {
    if (!std::isfinite(mu_f) || !std::isfinite(mu_M) || !std::isfinite(mu_g)) {
        throw Error(ErrorCode::InvalidArgument, "market parameters must be finite");
    }
    if (!(sigma2_M > 0.0)) throw Error(ErrorCode::InvalidArgument, "sigma2_M must be > 0");
    if (!(sigma2_g >= 0.0)) throw Error(ErrorCode::InvalidArgument, "sigma2_g must be >= 0");
}

std::string_view to_string(InvestorType t) noexcept {
    switch (t) {
    case InvestorType::TypeI: return "I";
    case InvestorType::TypeN: return "N";
    case InvestorType::TypeU: return "U";
    }
    return "?";
}

std::optional<InvestorType> parse_investor_type(std::string_view text) {
    if (text == "I" || text == "i" || text == "TypeI") return InvestorType::TypeI;
    if (text == "N" || text == "n" || text == "TypeN") return InvestorType::TypeN;
    if (text == "U" || text == "u" || text == "TypeU") return InvestorType::TypeU;
    return std::nullopt;
}

void InvestorProfile::validate() const {
    if (!(gamma > 0.0)) throw Error(ErrorCode::InvalidArgument, "gamma must be > 0");
    if (!(theta >= 0.0)) throw Error(ErrorCode::InvalidArgument, "theta must be >= 0");
    if (!(b > 0.0)) throw Error(ErrorCode::InvalidArgument, "b must be > 0");
}

double InvestorProfile::effective_b() const noexcept { return kind == InvestorType::TypeI ? 0.0 : b; }

double InvestorProfile::effective_theta() const noexcept {
    return kind == InvestorType::TypeU ? theta : 0.0;
}

double DmvSolution::sharpe() const {
    if (!(variance > 0.0)) throw Error(ErrorCode::ZeroVariance, "DMV portfolio has zero variance");
    return excess_return / std::sqrt(variance);
}

double dmv_objective(double w, const MarketParams& m, const InvestorProfile& p) {
    const double b = p.effective_b();
    const double theta = p.effective_theta();
    const double market = w * m.mu_M + (1.0 - w) * m.mu_f - 0.5 * p.gamma * w * w * m.sigma2_M;
    const double esg = w * m.mu_g - 0.5 * theta * w * w * m.sigma2_g;
    return market + b * esg;
}

double first_order_residual(double w, const MarketParams& m, const InvestorProfile& p) {
    const double b = p.effective_b();
    const double theta = p.effective_theta();
    return m.mu_M - m.mu_f - p.gamma * w * m.sigma2_M + b * (m.mu_g - theta * w * m.sigma2_g);
}

DmvSolution dmv_optimal_weight(const MarketParams& m, const InvestorProfile& p) {
    const double b = p.effective_b();
    const double theta = p.effective_theta();
    const double risk = p.gamma * m.sigma2_M;
    const double uncertainty = b * theta * m.sigma2_g;
    const double denom = risk + uncertainty;
    if (!(denom > 0.0) || !std::isfinite(denom) || !(risk > 0.0)) {
        throw Error(ErrorCode::DegenerateDenominator,
                    "gamma*sigma2_M + b*theta*sigma2_g = " + csv::format(denom) + " is not positive");
    }
    const double premium = m.mu_M - m.mu_f;
    DmvSolution s;
    s.w = (premium + b * m.mu_g) / denom;
    s.term_benchmark = premium / risk;
    s.term_esg_return = b * m.mu_g / risk;
    s.term_esg_uncertainty = (premium + b * m.mu_g) / risk * (uncertainty / denom);
    s.excess_return = s.w * premium;
    s.variance = s.w * s.w * m.sigma2_M;
    return s;
}

TypePremiums type_premiums(const MarketParams& m, double gamma, double b, double theta) {
    const double base = gamma * m.sigma2_M;
    return {base, base - b * m.mu_g, base + b * theta * m.sigma2_g - b * m.mu_g};
}

PremiumGaps premium_gaps(const MarketParams& m, double /*gamma*/, double b, double theta) {
    return {-b * m.mu_g, b * theta * m.sigma2_g, b * (theta * m.sigma2_g - m.mu_g)};
}

VarianceGaps variance_gaps(const MarketParams& m, double gamma, double b, double theta) {
    const double premium = m.mu_M - m.mu_f;
    const double risk = gamma * m.sigma2_M;
    const double unc = b * theta * m.sigma2_g;
    const double denom = risk + unc;
    const double esg_cross = 2.0 * premium * b * m.mu_g + b * b * m.mu_g * m.mu_g;
    const double g2s = gamma * gamma * m.sigma2_M;

    VarianceGaps v;
    v.e_g = (risk * risk) / (denom * denom);
    v.n_minus_i = esg_cross / g2s;
    v.u_minus_n = -((premium + b * m.mu_g) * (premium + b * m.mu_g) / g2s) *
                  ((2.0 * risk * unc + unc * unc) / (denom * denom));
    v.u_minus_i = (premium * premium * (v.e_g - 1.0) + esg_cross * v.e_g) / g2s;

    v.w_i = premium / risk;
    v.w_n = (premium + b * m.mu_g) / risk;
    v.w_u = (premium + b * m.mu_g) / denom;
    v.var_i = v.w_i * v.w_i * m.sigma2_M;
    v.var_n = v.w_n * v.w_n * m.sigma2_M;
    v.var_u = v.w_u * v.w_u * m.sigma2_M;
    return v;
}

double mv_certainty_equivalent(double wealth, double mean, double variance, double gamma) noexcept {
    return wealth + mean - 0.5 * gamma * variance;
}

}  // namespace esgport::dmv
