#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace esgport::csv {

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    /// Column index by header name; throws ParseError when absent.
    std::size_t column(std::string_view name) const;
    std::optional<std::size_t> find_column(std::string_view name) const;
};

/// Comma-separated, optional double-quoted fields, first line is the header.
Table read(std::istream& in);
Table read_file(const std::filesystem::path& path);

/// Headerless numeric matrix (square covariance files etc.).
std::vector<std::vector<double>> read_matrix_file(const std::filesystem::path& path);

void write_row(std::ostream& out, const std::vector<std::string>& fields);

/// Shortest representation that parses back to the identical double.
std::string format(double value);
double parse_double(std::string_view text);
std::optional<double> try_parse_double(std::string_view text);

std::string trim(std::string_view text);
std::vector<std::string> split(std::string_view text, char sep);

}  // namespace esgport::csv
