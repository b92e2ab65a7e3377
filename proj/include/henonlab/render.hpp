#pragma once

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <string>

#include "henonlab/csv.hpp"
#include "henonlab/errors.hpp"

namespace henonlab {

namespace detail {

inline std::string svg_escape(const std::string& s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s) {
        switch (c) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        default: out += c;
        }
    }
    return out;
}

inline std::string format_tick(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.4g", v);
    return buf;
}

} // namespace detail

/// Render two columns of a CSV as a self-contained SVG scatter plot,
/// one mark per row, axes labeled with the column names.
inline void render_scatter(const std::filesystem::path& csv_path, const std::string& x_column,
                           const std::string& y_column, const std::filesystem::path& out_path,
                           const std::string& title = "") {
    const Table table = read_table(csv_path);
    const std::size_t xi = column_index(table, x_column);
    const std::size_t yi = column_index(table, y_column);
    if (table.rows.empty()) throw EmptyData(csv_path.string() + " has no data rows");

    double x_min = table.rows.front()[xi], x_max = x_min;
    double y_min = table.rows.front()[yi], y_max = y_min;
    for (const auto& row : table.rows) {
        x_min = std::min(x_min, row[xi]);
        x_max = std::max(x_max, row[xi]);
        y_min = std::min(y_min, row[yi]);
        y_max = std::max(y_max, row[yi]);
    }
    // Degenerate ranges still deserve a visible mark in the middle.
    if (x_max == x_min) { x_min -= 0.5; x_max += 0.5; }
    if (y_max == y_min) { y_min -= 0.5; y_max += 0.5; }
    const double x_pad = 0.04 * (x_max - x_min);
    const double y_pad = 0.04 * (y_max - y_min);
    x_min -= x_pad; x_max += x_pad;
    y_min -= y_pad; y_max += y_pad;

    const double width = 720.0, height = 540.0;
    const double ml = 72.0, mr = 24.0, mt = title.empty() ? 24.0 : 44.0, mb = 56.0;
    const double pw = width - ml - mr;
    const double ph = height - mt - mb;
    const auto sx = [&](double x) { return ml + (x - x_min) / (x_max - x_min) * pw; };
    const auto sy = [&](double y) { return mt + (y_max - y) / (y_max - y_min) * ph; };

    namespace fs = std::filesystem;
    if (out_path.has_parent_path()) fs::create_directories(out_path.parent_path());
    const fs::path tmp = out_path.string() + ".tmp";
    {
        std::ofstream out(tmp);
        if (!out) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
        out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
            << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
            << height << "\" viewBox=\"0 0 " << width << " " << height << "\">\n"
            << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
            << "<rect x=\"" << ml << "\" y=\"" << mt << "\" width=\"" << pw << "\" height=\"" << ph
            << "\" fill=\"none\" stroke=\"#444\" stroke-width=\"1\"/>\n";
        if (!title.empty())
            out << "<text x=\"" << width / 2 << "\" y=\"" << mt - 16
                << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"16\">"
                << detail::svg_escape(title) << "</text>\n";

        const int ticks = 5;
        for (int i = 0; i <= ticks; ++i) {
            const double fx = x_min + (x_max - x_min) * i / ticks;
            const double fy = y_min + (y_max - y_min) * i / ticks;
            const double px = sx(fx);
            const double py = sy(fy);
            out << "<line x1=\"" << px << "\" y1=\"" << mt + ph << "\" x2=\"" << px << "\" y2=\""
                << mt + ph + 5 << "\" stroke=\"#444\"/>\n"
                << "<text x=\"" << px << "\" y=\"" << mt + ph + 18
                << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">"
                << detail::format_tick(fx) << "</text>\n"
                << "<line x1=\"" << ml - 5 << "\" y1=\"" << py << "\" x2=\"" << ml << "\" y2=\""
                << py << "\" stroke=\"#444\"/>\n"
                << "<text x=\"" << ml - 8 << "\" y=\"" << py + 4
                << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">"
                << detail::format_tick(fy) << "</text>\n";
        }
        out << "<text x=\"" << ml + pw / 2 << "\" y=\"" << height - 14
            << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">"
            << detail::svg_escape(x_column) << "</text>\n"
            << "<text x=\"18\" y=\"" << mt + ph / 2
            << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" transform=\"rotate(-90 18 "
            << mt + ph / 2 << ")\">" << detail::svg_escape(y_column) << "</text>\n";

        for (const auto& row : table.rows)
            out << "<circle cx=\"" << sx(row[xi]) << "\" cy=\"" << sy(row[yi])
                << "\" r=\"1.4\" fill=\"#1f6fb4\" fill-opacity=\"0.65\"/>\n";
        out << "</svg>\n";
        out.flush();
        if (!out) throw std::runtime_error("write failed for " + tmp.string());
    }
    fs::rename(tmp, out_path);
}

} // namespace henonlab
