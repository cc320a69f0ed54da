#include "esgport/ratings.hpp"

#include "esgport/csv.hpp"
#include "esgport/errors.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <set>

namespace esgport::ratings {

namespace {

constexpr std::array<std::string_view, 7> kGradeNames = {"CCC", "B", "BB", "BBB", "A", "AA", "AAA"};

void require_unique(const std::vector<std::string>& ids, std::string_view what) {
    std::set<std::string> seen;
    for (const auto& id : ids) {
        if (!seen.insert(id).second) {
            throw Error(ErrorCode::InvalidPanel, "duplicate " + std::string(what) + " id '" + id + "'");
        }
    }
}

}  // namespace

std::optional<LetterGrade> parse_grade(std::string_view text) {
    std::string upper = csv::trim(text);
    std::transform(upper.begin(), upper.end(), upper.begin(),
                   [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
    for (std::size_t i = 0; i < kGradeNames.size(); ++i) {
        if (upper == kGradeNames[i]) return kAllGrades[i];
    }
    return std::nullopt;
}

std::string_view to_string(LetterGrade grade) noexcept {
    return kGradeNames[static_cast<std::size_t>(grade) - 1];
}

double harmonize_msci(LetterGrade grade) noexcept {
    const int k = static_cast<int>(grade);
    return 100.0 * (2.0 * k - 1.0) / 14.0;
}

// ---------------------------------------------------------------------------

ScorePanel::ScorePanel(std::vector<std::string> firms, std::vector<std::string> raters,
                       Eigen::MatrixXd values, PresenceMask present)
    : firms_(std::move(firms)), raters_(std::move(raters)), values_(std::move(values)),
      present_(std::move(present)) {
    if (values_.rows() != static_cast<Eigen::Index>(firms_.size()) ||
        values_.cols() != static_cast<Eigen::Index>(raters_.size())) {
        throw Error(ErrorCode::InvalidPanel, "panel shape does not match firm/rater ids");
    }
    if (present_.rows() != values_.rows() || present_.cols() != values_.cols()) {
        throw Error(ErrorCode::InvalidPanel, "presence mask shape mismatch");
    }
    require_unique(firms_, "firm");
    require_unique(raters_, "rater");
    for (Eigen::Index i = 0; i < values_.rows(); ++i) {
        for (Eigen::Index j = 0; j < values_.cols(); ++j) {
            if (!present_(i, j)) {
                values_(i, j) = std::numeric_limits<double>::quiet_NaN();
            } else if (!std::isfinite(values_(i, j))) {
                throw Error(ErrorCode::InvalidPanel, "non-finite score for firm '" + firms_[i] + "'");
            }
        }
    }
}

ScorePanel::ScorePanel(std::vector<std::string> firms, std::vector<std::string> raters,
                       Eigen::MatrixXd values)
    : ScorePanel(std::move(firms), std::move(raters), values,
                 PresenceMask::Constant(values.rows(), values.cols(), true)) {}

std::optional<double> ScorePanel::at(Eigen::Index firm, Eigen::Index rater) const {
    if (!present_(firm, rater)) return std::nullopt;
    return values_(firm, rater);
}

std::optional<Eigen::Index> ScorePanel::rater_index(std::string_view name) const {
    for (std::size_t i = 0; i < raters_.size(); ++i) {
        if (raters_[i] == name) return static_cast<Eigen::Index>(i);
    }
    return std::nullopt;
}

std::optional<Eigen::Index> ScorePanel::firm_index(std::string_view name) const {
    for (std::size_t i = 0; i < firms_.size(); ++i) {
        if (firms_[i] == name) return static_cast<Eigen::Index>(i);
    }
    return std::nullopt;
}

ScorePanel ScorePanel::permute_raters(const std::vector<Eigen::Index>& order) const {
    if (static_cast<Eigen::Index>(order.size()) != n_raters()) {
        throw Error(ErrorCode::InvalidArgument, "permutation length mismatch");
    }
    std::vector<std::string> names;
    Eigen::MatrixXd v(n_firms(), n_raters());
    PresenceMask p(n_firms(), n_raters());
    for (Eigen::Index j = 0; j < n_raters(); ++j) {
        names.push_back(raters_.at(static_cast<std::size_t>(order[j])));
        v.col(j) = values_.col(order[j]);
        p.col(j) = present_.col(order[j]);
    }
    return ScorePanel(firms_, std::move(names), std::move(v), std::move(p));
}

EsgPanel::EsgPanel(std::vector<std::string> firms, std::vector<std::string> raters,
                   Eigen::MatrixXd values, PresenceMask present)
    : ScorePanel(std::move(firms), std::move(raters), std::move(values), std::move(present)) {
    for (Eigen::Index i = 0; i < n_firms(); ++i) {
        for (Eigen::Index j = 0; j < n_raters(); ++j) {
            if (has(i, j) && (this->values()(i, j) < 0.0 || this->values()(i, j) > 100.0)) {
                throw Error(ErrorCode::InvalidPanel, "score " + csv::format(this->values()(i, j)) +
                                                         " outside [0,100] for firm '" +
                                                         this->firms()[static_cast<std::size_t>(i)] + "', rater '" + this->raters()[static_cast<std::size_t>(j)] + "'");
            }
        }
    }
}

EsgPanel::EsgPanel(std::vector<std::string> firms, std::vector<std::string> raters,
                   Eigen::MatrixXd values)
    : EsgPanel(std::move(firms), std::move(raters), values,
               PresenceMask::Constant(values.rows(), values.cols(), true)) {}

// ---------------------------------------------------------------------------

StandardizedPanel standardize(const ScorePanel& panel) {
    Eigen::MatrixXd z = panel.values();
    for (Eigen::Index j = 0; j < panel.n_raters(); ++j) {
        double sum = 0.0;
        Eigen::Index n = 0;
        for (Eigen::Index i = 0; i < panel.n_firms(); ++i) {
            if (panel.has(i, j)) {
                sum += panel.values()(i, j);
                ++n;
            }
        }
        if (n < 2) {
            throw Error(ErrorCode::DegenerateColumn,
                        "rater '" + panel.raters()[j] + "' has fewer than two scores");
        }
        const double mean = sum / static_cast<double>(n);
        double ss = 0.0;
        for (Eigen::Index i = 0; i < panel.n_firms(); ++i) {
            if (panel.has(i, j)) ss += (panel.values()(i, j) - mean) * (panel.values()(i, j) - mean);
        }
        const double sd = std::sqrt(ss / static_cast<double>(n - 1));
        if (!(sd > 0.0)) {
            throw Error(ErrorCode::DegenerateColumn, "rater '" + panel.raters()[j] + "' is constant");
        }
        for (Eigen::Index i = 0; i < panel.n_firms(); ++i) {
            if (panel.has(i, j)) z(i, j) = (panel.values()(i, j) - mean) / sd;
        }
    }
    return StandardizedPanel(panel.firms(), panel.raters(), std::move(z), panel.present());
}

Eigen::MatrixXd rater_correlation(const ScorePanel& panel) {
    const Eigen::Index k = panel.n_raters();
    Eigen::MatrixXd corr = Eigen::MatrixXd::Identity(k, k);
    const auto& v = panel.values();
    for (Eigen::Index a = 0; a < k; ++a) {
        for (Eigen::Index b = a + 1; b < k; ++b) {
            std::vector<Eigen::Index> rows;
            for (Eigen::Index i = 0; i < panel.n_firms(); ++i) {
                if (panel.has(i, a) && panel.has(i, b)) rows.push_back(i);
            }
            if (rows.size() < 3) {
                throw Error(ErrorCode::InsufficientOverlap,
                            "raters '" + panel.raters()[a] + "' and '" + panel.raters()[b] +
                                "' share " + std::to_string(rows.size()) + " firms (need 3)");
            }
            double ma = 0.0, mb = 0.0;
            for (auto i : rows) {
                ma += v(i, a);
                mb += v(i, b);
            }
            ma /= static_cast<double>(rows.size());
            mb /= static_cast<double>(rows.size());
            double sab = 0.0, saa = 0.0, sbb = 0.0;
            for (auto i : rows) {
                const double da = v(i, a) - ma;
                const double db = v(i, b) - mb;
                sab += da * db;
                saa += da * da;
                sbb += db * db;
            }
            if (!(saa > 0.0) || !(sbb > 0.0)) {
                throw Error(ErrorCode::DegenerateColumn, "zero variance on the joint sample of '" +
                                                             panel.raters()[a] + "' and '" +
                                                             panel.raters()[b] + "'");
            }
            const double r = std::clamp(sab / std::sqrt(saa * sbb), -1.0, 1.0);
            corr(a, b) = r;
            corr(b, a) = r;
        }
    }
    return corr;
}

// ---------------------------------------------------------------------------

EsgPanel read_panel_csv(std::istream& in) {
    const csv::Table t = csv::read(in);
    if (t.header.size() < 2 || t.header.front() != "firm") {
        throw Error(ErrorCode::ParseError, "ESG panel header must start with 'firm'");
    }
    const std::size_t n_raters = t.header.size() - 1;
    std::vector<std::string> raters(t.header.begin() + 1, t.header.end());
    std::vector<std::string> firms;
    Eigen::MatrixXd values(static_cast<Eigen::Index>(t.rows.size()), static_cast<Eigen::Index>(n_raters));
    PresenceMask present = PresenceMask::Constant(values.rows(), values.cols(), false);

    for (const auto& row : t.rows) firms.push_back(row[0]);
    for (std::size_t j = 0; j < n_raters; ++j) {
        bool all_grades = true;
        bool any_value = false;
        for (const auto& row : t.rows) {
            const auto& cell = row[j + 1];
            if (cell.empty()) continue;
            any_value = true;
            if (!parse_grade(cell)) {
                all_grades = false;
                break;
            }
        }
        const bool letters = any_value && all_grades;
        for (std::size_t i = 0; i < t.rows.size(); ++i) {
            const auto& cell = t.rows[i][j + 1];
            if (cell.empty()) continue;
            double score = 0.0;
            if (letters) {
                score = harmonize_msci(*parse_grade(cell));
            } else if (auto v = csv::try_parse_double(cell)) {
                score = *v;
            } else {
                throw Error(ErrorCode::ParseError, "firm '" + firms[i] + "', rater '" + raters[j] +
                                                       "': cannot parse '" + cell + "'");
            }
            values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = score;
            present(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = true;
        }
    }
    return EsgPanel(std::move(firms), std::move(raters), std::move(values), std::move(present));
}

EsgPanel read_panel_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::FileNotFound, "cannot open '" + path.string() + "'");
    try {
        return read_panel_csv(in);
    } catch (const Error& e) {
        throw Error(e.code(), path.string() + ": " + e.what());
    }
}

void write_panel_csv(std::ostream& out, const ScorePanel& panel) {
    std::vector<std::string> header{"firm"};
    header.insert(header.end(), panel.raters().begin(), panel.raters().end());
    csv::write_row(out, header);
    for (Eigen::Index i = 0; i < panel.n_firms(); ++i) {
        std::vector<std::string> row{panel.firms()[i]};
        for (Eigen::Index j = 0; j < panel.n_raters(); ++j) {
            row.push_back(panel.has(i, j) ? csv::format(panel.values()(i, j)) : std::string{});
        }
        csv::write_row(out, row);
    }
}

void write_matrix_csv(std::ostream& out, const std::vector<std::string>& labels,
                      const Eigen::MatrixXd& m, std::string_view corner) {
    std::vector<std::string> header{std::string(corner)};
    header.insert(header.end(), labels.begin(), labels.end());
    csv::write_row(out, header);
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        std::vector<std::string> row{labels.at(static_cast<std::size_t>(i))};
        for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(csv::format(m(i, j)));
        csv::write_row(out, row);
    }
}

}  // namespace esgport::ratings
