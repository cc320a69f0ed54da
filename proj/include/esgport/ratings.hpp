/**
 * @file ratings.hpp
 * @brief Multi-rater ESG score panels: letter-grade harmonization,
 *        per-rater standardization and cross-rater correlation.
 */
#pragma once

#include <Eigen/Dense>

#include <array>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace esgport::ratings {

/// Seven-tier letter scale, worst to best.
enum class LetterGrade { CCC = 1, B, BB, BBB, A, AA, AAA };

inline constexpr std::array<LetterGrade, 7> kAllGrades = {
    LetterGrade::CCC, LetterGrade::B,  LetterGrade::BB, LetterGrade::BBB,
    LetterGrade::A,   LetterGrade::AA, LetterGrade::AAA};

std::optional<LetterGrade> parse_grade(std::string_view text);
std::string_view to_string(LetterGrade grade) noexcept;

/// Midpoint of the grade's interval when [0,100] is cut into seven equal
/// parts: 100 * (2k - 1) / 14 for tier index k = 1..7.
double harmonize_msci(LetterGrade grade) noexcept;

using PresenceMask = Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic>;

/**
 * Firms x raters score table with an explicit presence mask.
 *
 * Values of absent cells are unspecified (stored as NaN). Firm and rater ids
 * must be unique and match the matrix shape.
 */
class ScorePanel {
public:
    ScorePanel(std::vector<std::string> firms, std::vector<std::string> raters,
               Eigen::MatrixXd values, PresenceMask present);
    /// All cells present.
    ScorePanel(std::vector<std::string> firms, std::vector<std::string> raters,
               Eigen::MatrixXd values);

    const std::vector<std::string>& firms() const noexcept { return firms_; }
    const std::vector<std::string>& raters() const noexcept { return raters_; }
    const Eigen::MatrixXd& values() const noexcept { return values_; }
    const PresenceMask& present() const noexcept { return present_; }

    Eigen::Index n_firms() const noexcept { return values_.rows(); }
    Eigen::Index n_raters() const noexcept { return values_.cols(); }

    bool has(Eigen::Index firm, Eigen::Index rater) const { return present_(firm, rater); }
    std::optional<double> at(Eigen::Index firm, Eigen::Index rater) const;
    bool row_complete(Eigen::Index firm) const { return present_.row(firm).all(); }

    std::optional<Eigen::Index> rater_index(std::string_view name) const;
    std::optional<Eigen::Index> firm_index(std::string_view name) const;

    /// Same firms, raters reordered by `order` (indices into raters()).
    ScorePanel permute_raters(const std::vector<Eigen::Index>& order) const;

private:
    std::vector<std::string> firms_;
    std::vector<std::string> raters_;
    Eigen::MatrixXd values_;
    PresenceMask present_;
};

/// Raw panel on the common 0-100 scale.
class EsgPanel : public ScorePanel {
public:
    EsgPanel(std::vector<std::string> firms, std::vector<std::string> raters,
             Eigen::MatrixXd values, PresenceMask present);
    EsgPanel(std::vector<std::string> firms, std::vector<std::string> raters,
             Eigen::MatrixXd values);
};

/// Per-rater z-scores (sample sd). Same shape and presence as its source.
class StandardizedPanel : public ScorePanel {
public:
    using ScorePanel::ScorePanel;
};

/// Column-wise z-scores over present cells. Throws DegenerateColumn when a
/// column has fewer than two present values or zero variance.
StandardizedPanel standardize(const ScorePanel& panel);

/// Pearson correlation of rater columns over pairwise-complete firms.
/// Throws InsufficientOverlap below 3 joint observations and
/// DegenerateColumn when a pair's joint subset has zero variance.
Eigen::MatrixXd rater_correlation(const ScorePanel& panel);

/// Read `firm,<rater1>,...`; empty cells are missing. A column whose every
/// non-empty cell is a letter grade is harmonized through harmonize_msci.
EsgPanel read_panel_csv(std::istream& in);
EsgPanel read_panel_csv(const std::filesystem::path& path);
void write_panel_csv(std::ostream& out, const ScorePanel& panel);

/// Labelled square matrix `rater,<r1>,<r2>,...`.
void write_matrix_csv(std::ostream& out, const std::vector<std::string>& labels,
                      const Eigen::MatrixXd& m, std::string_view corner = "rater");

}  // namespace esgport::ratings
