#pragma once

#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "henonlab/errors.hpp"

namespace henonlab {

/// Shortest representation that round-trips a double exactly.
inline std::string format_g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

/// In-memory numeric table: named columns over double rows.
struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
};

/// Index of a named column, or MissingColumn.
inline std::size_t column_index(const Table& table, const std::string& name) {
    for (std::size_t i = 0; i < table.columns.size(); ++i)
        if (table.columns[i] == name) return i;
    throw MissingColumn("no column named '" + name + "'");
}

/// Write the table as CSV: optional '#' metadata lines, a header row,
/// then one comma-separated row per entry at 17 significant digits.
/// The file appears atomically (written to a temporary, then renamed),
/// so a failed run never leaves a partial CSV behind.
inline void write_table(const std::filesystem::path& path, const Table& table,
                        const std::vector<std::string>& metadata = {}) {
    namespace fs = std::filesystem;
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    const fs::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp);
        if (!out) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
        for (const auto& line : metadata) out << "# " << line << "\n";
        for (std::size_t i = 0; i < table.columns.size(); ++i)
            out << (i ? "," : "") << table.columns[i];
        out << "\n";
        for (const auto& row : table.rows) {
            for (std::size_t i = 0; i < row.size(); ++i)
                out << (i ? "," : "") << format_g17(row[i]);
            out << "\n";
        }
        out.flush();
        if (!out) throw std::runtime_error("write failed for " + tmp.string());
    }
    fs::rename(tmp, path);
}

namespace detail {

inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream in(line);
    while (std::getline(in, field, ',')) fields.push_back(field);
    if (!line.empty() && line.back() == ',') fields.emplace_back();
    return fields;
}

} // namespace detail

/// Parse a CSV written by write_table.  '#' lines are skipped; every
/// data row must have one finite value per header column.
inline Table read_table(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw MalformedCsv("cannot open " + path.string());
    Table table;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line.front() == '#') continue;
        if (table.columns.empty()) {
            table.columns = detail::split_csv_line(line);
            continue;
        }
        const auto fields = detail::split_csv_line(line);
        if (fields.size() != table.columns.size())
            throw MalformedCsv(path.string() + ":" + std::to_string(line_no) +
                               ": expected " + std::to_string(table.columns.size()) +
                               " fields, got " + std::to_string(fields.size()));
        std::vector<double> row;
        row.reserve(fields.size());
        for (const auto& f : fields) {
            errno = 0;
            char* end = nullptr;
            const double v = std::strtod(f.c_str(), &end);
            if (end == f.c_str() || *end != '\0' || errno == ERANGE)
                throw MalformedCsv(path.string() + ":" + std::to_string(line_no) +
                                   ": bad numeric field '" + f + "'");
            row.push_back(v);
        }
        table.rows.push_back(std::move(row));
    }
    if (table.columns.empty()) throw MalformedCsv(path.string() + ": no header row");
    return table;
}

/// Write a flat key=value block (summaries, configs) atomically.
inline void write_key_values(const std::filesystem::path& path,
                             const std::vector<std::pair<std::string, std::string>>& entries) {
    namespace fs = std::filesystem;
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    const fs::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp);
        if (!out) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
        for (const auto& [key, value] : entries) out << key << "=" << value << "\n";
        out.flush();
        if (!out) throw std::runtime_error("write failed for " + tmp.string());
    }
    fs::rename(tmp, path);
}

} // namespace henonlab
