#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "mzo/errors.hpp"

namespace mzo {

// Columnar result table. CSV is the canonical emission: '#'-prefixed
// metadata lines, a header row, then rows with 15 significant digits.
// The JSON form mirrors the same content.
struct Table {
    std::vector<std::pair<std::string, std::string>> meta;
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;

    void add_meta(std::string key, std::string value) {
        meta.emplace_back(std::move(key), std::move(value));
    }

    void add_meta(std::string key, double value) {
        meta.emplace_back(std::move(key), format_number(value));
    }

    static std::string format_number(double x) {
        char buf[40];
        std::snprintf(buf, sizeof(buf), "%.15g", x);
        return buf;
    }

    void write_csv(std::ostream& os) const {
        for (const auto& [k, v] : meta) os << "# " << k << ": " << v << "\n";
        for (std::size_t i = 0; i < columns.size(); ++i)
            os << columns[i] << (i + 1 < columns.size() ? "," : "");
        os << "\n";
        for (const auto& row : rows) {
            for (std::size_t i = 0; i < row.size(); ++i)
                os << format_number(row[i]) << (i + 1 < row.size() ? "," : "");
            os << "\n";
        }
    }

    void write_json(std::ostream& os) const {
        nlohmann::json j;
        for (const auto& [k, v] : meta) j["meta"][k] = v;
        j["columns"] = columns;
        j["data"] = nlohmann::json::array();
        for (const auto& row : rows) j["data"].push_back(row);
        os << j.dump(2) << "\n";
    }

    // Minimal line plot: column x_col on the abscissa, every other selected
    // column as one polyline. Plotting is a convenience; CSV is canonical.
    void write_svg(std::ostream& os, std::size_t x_col,
                   const std::vector<std::size_t>& y_cols) const {
        const double w = 720.0, h = 480.0, m = 50.0;
        double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
        for (const auto& r : rows) {
            xmin = std::min(xmin, r[x_col]);
            xmax = std::max(xmax, r[x_col]);
            for (std::size_t c : y_cols) {
                ymin = std::min(ymin, r[c]);
                ymax = std::max(ymax, r[c]);
            }
        }
        if (!(xmax > xmin)) xmax = xmin + 1.0;
        if (!(ymax > ymin)) ymax = ymin + 1.0;
        auto sx = [&](double x) { return m + (x - xmin) / (xmax - xmin) * (w - 2 * m); };
        auto sy = [&](double y) { return h - m - (y - ymin) / (ymax - ymin) * (h - 2 * m); };
        static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                        "#ff7f0e", "#8c564b"};
        os << "<svg xmlns='http://www.w3.org/2000/svg' width='" << w << "' height='" << h
           << "' viewBox='0 0 " << w << " " << h << "'>\n";
        os << "<rect width='100%' height='100%' fill='white'/>\n";
        os << "<line x1='" << m << "' y1='" << h - m << "' x2='" << w - m << "' y2='" << h - m
           << "' stroke='black'/>\n";
        os << "<line x1='" << m << "' y1='" << m << "' x2='" << m << "' y2='" << h - m
           << "' stroke='black'/>\n";
        if (ymin < 0.0 && ymax > 0.0)
            os << "<line x1='" << m << "' y1='" << sy(0.0) << "' x2='" << w - m << "' y2='"
               << sy(0.0) << "' stroke='#cccccc'/>\n";
        for (std::size_t k = 0; k < y_cols.size(); ++k) {
            os << "<polyline fill='none' stroke='" << palette[k % 6] << "' stroke-width='1.5' points='";
            for (const auto& r : rows) os << sx(r[x_col]) << "," << sy(r[y_cols[k]]) << " ";
            os << "'/>\n";
            os << "<text x='" << w - m - 150 << "' y='" << m + 16.0 * (k + 1) << "' fill='"
               << palette[k % 6] << "' font-size='13'>" << columns[y_cols[k]] << "</text>\n";
        }
        os << "<text x='" << w / 2 << "' y='" << h - 12 << "' font-size='13' text-anchor='middle'>"
           << columns[x_col] << "</text>\n";
        os << "</svg>\n";
    }
};

}  // namespace mzo
