#include "esgport/synthgen.hpp"

#include "esgport/csv.hpp"
#include "esgport/errors.hpp"
#include "esgport/linalg.hpp"
#include "esgport/rng.hpp"

#include <boost/math/special_functions/erf.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace esgport::synth {

namespace {

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

double normal_quantile(double p) { return -std::sqrt(2.0) * boost::math::erfc_inv(2.0 * p); }

double to_marginal(double z, const EsgMarginal& m) {
    const double u = normal_cdf(z);
    if (m.kind == MarginalKind::Uniform0to100) return std::clamp(100.0 * u, 0.0, 100.0);
    const double lo = normal_cdf((0.0 - m.mean) / m.sd);
    const double hi = normal_cdf((100.0 - m.mean) / m.sd);
    const double p = std::clamp(lo + u * (hi - lo), 1e-300, 1.0 - 1e-16);
    return std::clamp(m.mean + m.sd * normal_quantile(p), 0.0, 100.0);
}

}  // namespace

std::vector<std::string> SynthConfig::rater_names() const {
    if (!raters.empty()) return raters;
    std::vector<std::string> out;
    for (Eigen::Index i = 0; i < rater_corr_target.rows(); ++i) out.push_back("r" + std::to_string(i + 1));
    return out;
}

void SynthConfig::validate() const {
    const Eigen::Index k = rater_corr_target.rows();
    if (k < 1 || rater_corr_target.cols() != k) {
        throw Error(ErrorCode::InvalidArgument, "rater correlation target must be a non-empty square matrix");
    }
    if (!raters.empty() && static_cast<Eigen::Index>(raters.size()) != k) {
        throw Error(ErrorCode::InvalidArgument, "rater names do not match the correlation target");
    }
    if (!linalg::is_symmetric(rater_corr_target, 1e-12)) {
        throw Error(ErrorCode::InvalidArgument, "rater correlation target must be symmetric");
    }
    for (Eigen::Index i = 0; i < k; ++i) {
        if (std::abs(rater_corr_target(i, i) - 1.0) > 1e-12) {
            throw Error(ErrorCode::InvalidArgument, "rater correlation target needs a unit diagonal");
        }
    }
    if ((rater_corr_target.array().abs() > 1.0).any()) {
        throw Error(ErrorCode::InvalidArgument, "rater correlation entries must lie in [-1,1]");
    }
    if (n_firms < 1) throw Error(ErrorCode::InvalidArgument, "n_firms must be positive");
    if (asset_count() > n_firms) throw Error(ErrorCode::InvalidArgument, "n_assets cannot exceed n_firms");
    const auto n = static_cast<Eigen::Index>(asset_count());
    if (return_mean.size() != 0 || return_cov.size() != 0) {
        if (return_mean.size() != n || return_cov.rows() != n || return_cov.cols() != n) {
            throw Error(ErrorCode::InvalidArgument, "return mean/cov dimensions must match the asset count");
        }
        if (!linalg::is_symmetric(return_cov, 1e-12)) {
            throw Error(ErrorCode::InvalidArgument, "return covariance must be symmetric");
        }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(return_cov, Eigen::EigenvaluesOnly);
        if (n > 0 && eig.eigenvalues().minCoeff() < -1e-12 * std::max(1.0, return_cov.cwiseAbs().maxCoeff())) {
            throw Error(ErrorCode::InvalidArgument, "return covariance must be PSD");
        }
    }
    if (esg_marginal.kind == MarginalKind::TruncNormal && !(esg_marginal.sd > 0.0)) {
        throw Error(ErrorCode::InvalidArgument, "truncated-normal ESG marginal needs sd > 0");
    }
    if (!(initial_price > 0.0)) throw Error(ErrorCode::InvalidArgument, "initial price must be positive");
}

Eigen::MatrixXd reference_rater_correlation() {
    Eigen::MatrixXd c(4, 4);
    c << 1.0000, -0.1591, 0.4153, 0.5041,
        -0.1591, 1.0000, -0.3387, 0.1826,
         0.4153, -0.3387, 1.0000, 0.3139,
         0.5041, 0.1826, 0.3139, 1.0000;
    return c;
}

std::vector<std::string> reference_rater_names() { return {"RobecoSAM", "SA", "MSCI", "Asset4"}; }

std::string firm_id(std::size_t i) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "F%04zu", i + 1);
    return buf;
}

ratings::LetterGrade grade_for_score(double score) {
    const int k = std::clamp(static_cast<int>(std::floor(score * 7.0 / 100.0)) + 1, 1, 7);
    return static_cast<ratings::LetterGrade>(k);
}

PsdRepair repair_correlation(const Eigen::MatrixXd& target, double max_entry_change) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(target);
    if (eig.info() != Eigen::Success) throw Error(ErrorCode::NotRepairablePSD, "eigen-decomposition failed");
    PsdRepair out;
    out.min_eigenvalue = eig.eigenvalues().minCoeff();
    if (out.min_eigenvalue >= 0.0) {
        out.matrix = target;
        return out;
    }
    const Eigen::VectorXd clipped = eig.eigenvalues().cwiseMax(0.0);
    Eigen::MatrixXd m = eig.eigenvectors() * clipped.asDiagonal() * eig.eigenvectors().transpose();
    const Eigen::VectorXd d = m.diagonal();
    if ((d.array() <= 0.0).any()) throw Error(ErrorCode::NotRepairablePSD, "clipping removed a rater entirely");
    const Eigen::VectorXd inv_sqrt = d.cwiseSqrt().cwiseInverse();
    m = inv_sqrt.asDiagonal() * m * inv_sqrt.asDiagonal();
    m = 0.5 * (m + m.transpose());
    m.diagonal().setOnes();
    out.matrix = m;
    out.changed = true;
    out.max_abs_change = (m - target).cwiseAbs().maxCoeff();
    out.frobenius_change = (m - target).norm();
    if (out.max_abs_change > max_entry_change) {
        throw Error(ErrorCode::NotRepairablePSD, "PSD repair moves an entry by " + csv::format(out.max_abs_change));
    }
    return out;
}

ratings::EsgPanel gen_esg_panel(const SynthConfig& cfg) {
    cfg.validate();
    const PsdRepair repaired = repair_correlation(cfg.rater_corr_target);
    const Eigen::MatrixXd factor = linalg::psd_factor(repaired.matrix);
    const Eigen::Index k = factor.rows();
    const auto n = static_cast<Eigen::Index>(cfg.n_firms);

    Rng rng(derive_seed(cfg.seed, {"esg-panel"}));
    std::normal_distribution<double> normal(0.0, 1.0);
    Eigen::MatrixXd scores(n, k);
    Eigen::VectorXd e(k);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < k; ++j) e(j) = normal(rng);
        const Eigen::VectorXd z = factor * e;
        for (Eigen::Index j = 0; j < k; ++j) scores(i, j) = to_marginal(z(j), cfg.esg_marginal);
    }
    std::vector<std::string> firms;
    for (std::size_t i = 0; i < cfg.n_firms; ++i) firms.push_back(firm_id(i));
    return ratings::EsgPanel(std::move(firms), cfg.rater_names(), std::move(scores));
}

std::vector<std::vector<env::OhlcvBar>> gen_prices(const SynthConfig& cfg) {
    cfg.validate();
    const auto n = static_cast<Eigen::Index>(cfg.asset_count());
    const Eigen::VectorXd mean = cfg.return_mean.size() ? cfg.return_mean : Eigen::VectorXd::Zero(n);
    const Eigen::MatrixXd cov = cfg.return_cov.size() ? cfg.return_cov : Eigen::MatrixXd::Zero(n, n);
    const Eigen::MatrixXd factor = linalg::psd_factor(cov);
    const Eigen::VectorXd vol = cov.diagonal().cwiseMax(0.0).cwiseSqrt();
    const auto dates = business_days(cfg.start_date, cfg.n_bars);

    Rng rng(derive_seed(cfg.seed, {"prices"}));
    std::normal_distribution<double> normal(0.0, 1.0);
    std::vector<std::vector<env::OhlcvBar>> out(static_cast<std::size_t>(n));
    Eigen::VectorXd close = Eigen::VectorXd::Constant(n, cfg.initial_price);
    Eigen::VectorXd e(n);
    for (std::size_t t = 0; t < cfg.n_bars; ++t) {
        const Eigen::VectorXd open = close;
        if (t > 0) {
            for (Eigen::Index j = 0; j < n; ++j) e(j) = normal(rng);
            close = (close.array() * (mean + factor * e).array().exp()).matrix();
        }
        for (Eigen::Index j = 0; j < n; ++j) {
            const double up = std::exp(0.5 * vol(j) * std::abs(normal(rng)));
            const double down = std::exp(0.5 * vol(j) * std::abs(normal(rng)));
            const double volume = std::exp(13.8 + 0.5 * normal(rng));
            env::OhlcvBar bar;
            bar.date = dates[t];
            bar.open = open(j);
            bar.close = close(j);
            bar.high = std::max(bar.open, bar.close) * up;
            bar.low = std::min(bar.open, bar.close) / down;
            bar.volume = volume;
            out[static_cast<std::size_t>(j)].push_back(bar);
        }
    }
    return out;
}

env::MarketData gen_market(const SynthConfig& cfg) {
    std::vector<std::string> symbols;
    for (std::size_t j = 0; j < cfg.asset_count(); ++j) symbols.push_back(firm_id(j));
    return env::MarketData::align(std::move(symbols), gen_prices(cfg));
}

}  // namespace esgport::synth
