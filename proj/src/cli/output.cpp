#include <cmath>
#include <cstdio>
#include <ostream>

#include "qbs/cli.hpp"
#include "qbs/errors.hpp"

namespace qbs::cli {

void Result::add_row(std::vector<double> row) {
    if (row.size() != columns.size()) {
        throw std::logic_error("row width does not match the column count");
    }
    rows.push_back(std::move(row));
}

std::string format_number(double v) {
    if (v == 0.0) return "0";  // folds -0
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

void write_csv(const Result& r, std::ostream& os) {
    for (std::size_t i = 0; i < r.columns.size(); ++i) {
        if (i) os << ',';
        os << r.columns[i].name << '[' << r.columns[i].unit << ']';
    }
    os << '\n';
    for (const auto& row : r.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) os << ',';
            os << format_number(row[i]);
        }
        os << '\n';
    }
}

void write_json(const Result& r, const numerics::QuadratureOptions& opts, std::ostream& os) {
    nlohmann::ordered_json values = nlohmann::ordered_json::object();
    nlohmann::ordered_json units = nlohmann::ordered_json::object();
    for (std::size_t c = 0; c < r.columns.size(); ++c) {
        nlohmann::ordered_json col = nlohmann::ordered_json::array();
        for (const auto& row : r.rows) {
            const double v = row[c];
            // JSON has no NaN or infinity
            if (std::isfinite(v)) {
                col.push_back(v);
            } else {
                col.push_back(nullptr);
            }
        }
        values[r.columns[c].name] = std::move(col);
        units[r.columns[c].name] = r.columns[c].unit;
    }
    nlohmann::ordered_json meta;
    meta["equations"] = r.equations;
    meta["quadrature_order"] = opts.initial_order;
    meta["quadrature_max_order"] = opts.max_order;
    meta["quadrature_tolerance"] = opts.tolerance;
    meta["tool_version"] = kToolVersion;
    meta["normalization"] = r.normalization;
    meta["units"] = std::move(units);
    meta["warnings"] = r.warnings;

    nlohmann::ordered_json doc;
    doc["params"] = r.params;
    doc["grid"] = r.grid;
    doc["values"] = std::move(values);
    doc["meta"] = std::move(meta);
    os << doc.dump(2) << '\n';
}

}  // namespace qbs::cli
