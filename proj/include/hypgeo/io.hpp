#pragma once

/**
 * @file io.hpp
 * @brief JSON and CSV serialization for graphs, forms and count tables.
 */

#include "hypgeo/glueing.hpp"
#include "hypgeo/qforms.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

namespace hypgeo::io {

using json = nlohmann::ordered_json;

/// Shortest round-trip-safe enough representation used in CSV files.
inline std::string fmt(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    if (std::abs(v) < 1e-300) v = 0;
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

inline std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

/// Accumulates CSV rows with a fixed header.
class Csv {
public:
    explicit Csv(std::vector<std::string> header) : width_(header.size()) { add(header); }

    void add(const std::vector<std::string>& row) {
        if (row.size() != width_) throw std::invalid_argument("csv row width mismatch");
        for (std::size_t i = 0; i < row.size(); ++i) text_ += (i ? "," : "") + csv_field(row[i]);
        text_ += "\n";
    }

    const std::string& str() const { return text_; }

private:
    std::size_t width_;
    std::string text_;
};

inline json to_json(const GlueingGraph& g) {
    json edges = json::array(), labels = json::array();
    for (auto [i, j] : g.edges) edges.push_back({i, j});
    for (PieceLabel l : g.labels) labels.push_back(to_string(l));
    return {{"m", g.m}, {"edges", edges}, {"labels", labels}, {"root", g.root}, {"mode", to_string(g.mode)}};
}

/// Parses and validates a graph object.
inline GlueingGraph graph_from_json(const json& j) {
    try {
        GlueingGraph g;
        g.m = j.at("m").get<int>();
        for (const auto& e : j.at("edges")) {
            if (e.size() != 2) throw std::invalid_argument("graph json: edges must be pairs");
            g.edges.emplace_back(e[0].get<int>(), e[1].get<int>());
        }
        for (const auto& l : j.at("labels")) g.labels.push_back(parse_piece_label(l.get<std::string>()));
        g.root = j.at("root").get<int>();
        g.mode = parse_label_mode(j.at("mode").get<std::string>());
        g.validate();
        return g;
    } catch (const json::exception& e) {
        throw std::invalid_argument(std::string("graph json: ") + e.what());
    }
}

inline std::string count_table_csv(const CountTable& t) {
    Csv csv({"m", "baseCount", "rootedLabelledCount"});
    for (const auto& r : t.rows) csv.add({std::to_string(r.m), std::to_string(r.base_count), r.rooted_labelled_count.get_str()});
    return csv.str();
}

inline json to_json(const DiagonalForm& f) {
    json cs = json::array();
    for (const auto& c : f.coefficients()) cs.push_back(c.to_string());
    return {{"field", field_name(f.field())}, {"coefficients", cs}};
}

inline std::string coefficient_list(const DiagonalForm& f) {
    std::string s;
    for (std::size_t i = 0; i < f.dimension(); ++i) s += (i ? ";" : "") + f.coefficient(i).to_string();
    return s;
}

}  // namespace hypgeo::io
