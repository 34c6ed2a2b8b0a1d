#include "loadbayes/csv.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace loadbayes {

bool CsvTable::has_column(const std::string& name) const {
    return std::find(names.begin(), names.end(), name) != names.end();
}

const std::vector<double>& CsvTable::column(const std::string& name) const {
    const auto it = std::find(names.begin(), names.end(), name);
    if (it == names.end()) {
        throw std::runtime_error("CsvTable: no column named " + name);
    }
    return columns[static_cast<std::size_t>(it - names.begin())];
}

CsvTable& CsvTable::add(std::string name, std::vector<double> values) {
    if (!columns.empty() && values.size() != rows()) {
        throw std::invalid_argument("CsvTable: column length mismatch for " + name);
    }
    names.push_back(std::move(name));
    columns.push_back(std::move(values));
    return *this;
}

std::string format_double(double value) {
    char buf[40];
    // Try increasing precision until the text round-trips exactly.
    for (int precision = 15; precision <= 17; ++precision) {
        std::snprintf(buf, sizeof(buf), "%.*g", precision, value);
        if (std::strtod(buf, nullptr) == value) {
            break;
        }
    }
    return buf;
}

void write_csv(const std::filesystem::path& path, const CsvTable& table) {
    if (table.names.size() != table.columns.size()) {
        throw std::invalid_argument("write_csv: header/column count mismatch");
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("write_csv: cannot open " + path.string());
    }
    for (std::size_t c = 0; c < table.names.size(); ++c) {
        out << (c ? "," : "") << table.names[c];
    }
    out << '\n';
    const std::size_t n = table.rows();
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t c = 0; c < table.columns.size(); ++c) {
            out << (c ? "," : "") << format_double(table.columns[c][r]);
        }
        out << '\n';
    }
    if (!out) {
        throw std::runtime_error("write_csv: write failed for " + path.string());
    }
}

namespace {

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::stringstream ss(line);
    while (std::getline(ss, field, ',')) {
        fields.push_back(field);
    }
    if (!line.empty() && line.back() == ',') {
        fields.emplace_back();
    }
    return fields;
}

}  // namespace

CsvTable read_csv(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("read_csv: cannot open " + path.string());
    }
    std::string line;
    if (!std::getline(in, line)) {
        throw std::runtime_error("read_csv: empty file " + path.string());
    }
    if (!line.empty() && line.back() == '\r') {
        line.pop_back();
    }
    CsvTable table;
    table.names = split_fields(line);
    if (table.names.empty()) {
        throw std::runtime_error("read_csv: missing header in " + path.string());
    }
    table.columns.resize(table.names.size());

    std::size_t row = 1;
    while (std::getline(in, line)) {
        ++row;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.empty()) {
            continue;
        }
        const std::vector<std::string> fields = split_fields(line);
        if (fields.size() != table.names.size()) {
            throw std::runtime_error("read_csv: row " + std::to_string(row) + " of " +
                                     path.string() + " has " + std::to_string(fields.size()) +
                                     " fields, expected " + std::to_string(table.names.size()));
        }
        for (std::size_t c = 0; c < fields.size(); ++c) {
            const char* begin = fields[c].c_str();
            char* end = nullptr;
            const double value = std::strtod(begin, &end);
            if (end == begin || *end != '\0') {
                throw std::runtime_error("read_csv: non-numeric field '" + fields[c] +
                                         "' at row " + std::to_string(row) + " of " +
                                         path.string());
            }
            table.columns[c].push_back(value);
        }
    }
    return table;
}

}  // namespace loadbayes
