#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <vector>

namespace loadbayes {

/// Column-oriented numeric table with a one-line header. Files are UTF-8
/// with LF line endings; values are written with full round-trip precision.
struct CsvTable {
    std::vector<std::string> names;
    std::vector<std::vector<double>> columns;

    std::size_t rows() const { return columns.empty() ? 0 : columns.front().size(); }
    bool has_column(const std::string& name) const;
    const std::vector<double>& column(const std::string& name) const;
    CsvTable& add(std::string name, std::vector<double> values);
};

void write_csv(const std::filesystem::path& path, const CsvTable& table);

/// Throws std::runtime_error on unreadable files, ragged rows or
/// non-numeric fields.
CsvTable read_csv(const std::filesystem::path& path);

/// Shortest decimal text that parses back to exactly the same double.
std::string format_double(double value);

}  // namespace loadbayes
