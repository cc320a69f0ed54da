#include "esgport/ensemble.hpp"

#include "esgport/csv.hpp"
#include "esgport/errors.hpp"
#include "esgport/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>

namespace esgport::ensemble {

namespace {

void require_complete(std::span<const double> row) {
    if (row.empty()) throw Error(ErrorCode::IncompleteRow, "empty score row");
    for (double v : row) {
        if (!std::isfinite(v)) throw Error(ErrorCode::IncompleteRow, "score row has a missing rater");
    }
}

}  // namespace

std::string_view to_string(Method m) noexcept {
    switch (m) {
    case Method::Centroid: return "centroid";
    case Method::Median: return "median";
    case Method::Pca: return "pca";
    case Method::AlphaMaxmin: return "alpha-maxmin";
    }
    return "unknown";
}

std::optional<Method> parse_method(std::string_view text) {
    for (Method m : {Method::Centroid, Method::Median, Method::Pca, Method::AlphaMaxmin}) {
        if (text == to_string(m)) return m;
    }
    if (text == "alpha_maxmin" || text == "maxmin") return Method::AlphaMaxmin;
    return std::nullopt;
}

void EnsembleSpec::validate() const {
    if (!(alpha >= 0.0 && alpha <= 1.0)) {
        throw Error(ErrorCode::AlphaOutOfRange, "alpha " + csv::format(alpha) + " outside [0,1]");
    }
}

double centroid(std::span<const double> row) {
    require_complete(row);
    double sum = 0.0;
    for (double v : row) sum += v;
    return sum / static_cast<double>(row.size());
}

double median(std::span<const double> row) {
    require_complete(row);
    std::vector<double> sorted(row.begin(), row.end());
    std::sort(sorted.begin(), sorted.end());
    const std::size_t n = sorted.size();
    if (n % 2 == 1) return sorted[n / 2];
    return 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);
}

double alpha_maxmin(std::span<const double> row, double alpha) {
    require_complete(row);
    EnsembleSpec{Method::AlphaMaxmin, alpha}.validate();
    const auto [lo, hi] = std::minmax_element(row.begin(), row.end());
    return alpha * *lo + (1.0 - alpha) * *hi;
}

EnsembleResult pca_ensemble(const ratings::StandardizedPanel& panel) {
    const Eigen::Index k = panel.n_raters();
    if (k < 2) throw Error(ErrorCode::InsufficientData, "PCA ensemble needs at least two raters");

    EnsembleResult out;
    std::vector<Eigen::Index> rows;
    for (Eigen::Index i = 0; i < panel.n_firms(); ++i) {
        if (panel.row_complete(i)) {
            rows.push_back(i);
            out.firms.push_back(panel.firms()[i]);
        } else {
            ++out.dropped;
        }
    }
    if (static_cast<Eigen::Index>(rows.size()) < k + 1) {
        throw Error(ErrorCode::InsufficientData,
                    "PCA ensemble needs at least " + std::to_string(k + 1) + " complete firms, got " +
                        std::to_string(rows.size()));
    }
    Eigen::MatrixXd z(static_cast<Eigen::Index>(rows.size()), k);
    for (std::size_t r = 0; r < rows.size(); ++r) z.row(static_cast<Eigen::Index>(r)) = panel.values().row(rows[r]);

    PcaDiagnostics diag;
    diag.covariance = linalg::sample_covariance(z);
    const double trace = diag.covariance.trace();
    if (!(trace > 0.0)) throw Error(ErrorCode::DegenerateCovariance, "rater covariance is zero");

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(diag.covariance);
    if (eig.info() != Eigen::Success) {
        throw Error(ErrorCode::DegenerateCovariance, "rater covariance eigen-decomposition failed");
    }
    // eigenvalues ascending
    diag.eigenvalue = eig.eigenvalues()(k - 1);
    Eigen::VectorXd v = eig.eigenvectors().col(k - 1).normalized();
    const double sum = v.sum();
    if (sum < 0.0 || (sum == 0.0 && v(0) < 0.0)) v = -v;
    diag.loadings = v;
    diag.explained_variance = diag.eigenvalue / trace;

    out.scores = z * v;
    out.pca = std::move(diag);
    return out;
}

EnsembleResult combine(const ratings::ScorePanel& panel, const EnsembleSpec& spec) {
    spec.validate();
    if (spec.method == Method::Pca) return pca_ensemble(ratings::standardize(panel));

    EnsembleResult out;
    std::vector<double> scores;
    std::vector<double> row(static_cast<std::size_t>(panel.n_raters()));
    for (Eigen::Index i = 0; i < panel.n_firms(); ++i) {
        if (!panel.row_complete(i)) {
            ++out.dropped;
            continue;
        }
        for (Eigen::Index j = 0; j < panel.n_raters(); ++j) row[static_cast<std::size_t>(j)] = panel.values()(i, j);
        double s = 0.0;
        switch (spec.method) {
        case Method::Centroid: s = centroid(row); break;
        case Method::Median: s = median(row); break;
        case Method::AlphaMaxmin: s = alpha_maxmin(row, spec.alpha); break;
        case Method::Pca: break;
        }
        out.firms.push_back(panel.firms()[i]);
        scores.push_back(s);
    }
    out.scores = Eigen::Map<const Eigen::VectorXd>(scores.data(), static_cast<Eigen::Index>(scores.size()));
    return out;
}

void write_scores_csv(std::ostream& out, const EnsembleResult& result) {
    csv::write_row(out, {"firm", "score"});
    for (std::size_t i = 0; i < result.firms.size(); ++i) {
        csv::write_row(out, {result.firms[i], csv::format(result.scores(static_cast<Eigen::Index>(i)))});
    }
}

EnsembleResult read_scores_csv(std::istream& in) {
    const csv::Table t = csv::read(in);
    const auto fc = t.column("firm");
    const auto sc = t.column("score");
    EnsembleResult r;
    r.scores.resize(static_cast<Eigen::Index>(t.rows.size()));
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
        r.firms.push_back(t.rows[i][fc]);
        r.scores(static_cast<Eigen::Index>(i)) = csv::parse_double(t.rows[i][sc]);
    }
    return r;
}

void write_loadings_csv(std::ostream& out, const std::vector<std::string>& raters,
                        const PcaDiagnostics& diag) {
    csv::write_row(out, {"rater", "loading"});
    for (std::size_t j = 0; j < raters.size(); ++j) {
        csv::write_row(out, {raters[j], csv::format(diag.loadings(static_cast<Eigen::Index>(j)))});
    }
}

}  // namespace esgport::ensemble
