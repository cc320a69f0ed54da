/**
 * @file ensemble.hpp
 * @brief Per-firm combination of several raters' scores.
 *
 * Centroid, median and alpha-maxmin work row by row on the common 0-100
 * scale. The PCA ensemble projects standardized rows onto the leading
 * eigenvector of the rater covariance and reports z units.
 */
#pragma once

#include "esgport/ratings.hpp"

#include <Eigen/Dense>

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace esgport::ensemble {

enum class Method { Centroid, Median, Pca, AlphaMaxmin };

std::string_view to_string(Method m) noexcept;
std::optional<Method> parse_method(std::string_view text);

inline constexpr double kDefaultAlpha = 0.5;

struct EnsembleSpec {
    Method method = Method::Centroid;
    double alpha = kDefaultAlpha;  ///< AlphaMaxmin only; weight on the worst view

    void validate() const;
};

struct PcaDiagnostics {
    Eigen::VectorXd loadings;      ///< unit norm, nonnegative sum
    double eigenvalue = 0.0;       ///< largest eigenvalue of the rater covariance
    double explained_variance = 0.0;
    Eigen::MatrixXd covariance;    ///< rater covariance over complete rows
};

struct EnsembleResult {
    std::vector<std::string> firms;  ///< retained (row-complete) firms, panel order
    Eigen::VectorXd scores;
    std::size_t dropped = 0;         ///< firms with at least one missing rater
    std::optional<PcaDiagnostics> pca;
};

// Row operations. Non-finite entries are treated as missing -> IncompleteRow.
double centroid(std::span<const double> row);
double median(std::span<const double> row);
double alpha_maxmin(std::span<const double> row, double alpha);

/// PCA over the complete rows of a standardized panel.
/// Requires >= 2 raters and >= raters + 1 complete firms.
EnsembleResult pca_ensemble(const ratings::StandardizedPanel& panel);

/// Apply `spec` to every row-complete firm. PCA standardizes the panel first.
EnsembleResult combine(const ratings::ScorePanel& panel, const EnsembleSpec& spec);

void write_scores_csv(std::ostream& out, const EnsembleResult& result);
EnsembleResult read_scores_csv(std::istream& in);
/// Sidecar `rater,loading`.
void write_loadings_csv(std::ostream& out, const std::vector<std::string>& raters,
                        const PcaDiagnostics& diag);

}  // namespace esgport::ensemble
