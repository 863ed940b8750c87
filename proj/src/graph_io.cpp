/*
 * Copyright 2026 The nk Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "nk/graph_io.hpp"

#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

namespace nk::io {

using nlohmann::json;

namespace {

NodeId parse_endpoint(const json& v, const std::string& where) {
    if (!v.is_number_unsigned())
        throw Error(Errc::malformed_input, where + ": expected a non-negative integer");
    return v.get<NodeId>();
}

std::vector<Edge> parse_pair_list(const json& arr, const char* key) {
    if (!arr.is_array()) throw Error(Errc::malformed_input, std::string("field '") + key + "' must be an array");
    std::vector<Edge> out;
    out.reserve(arr.size());
    for (std::size_t i = 0; i < arr.size(); ++i) {
        const std::string where = std::string(key) + "[" + std::to_string(i) + "]";
        const json& e = arr[i];
        if (!e.is_array() || e.size() != 2) throw Error(Errc::malformed_input, where + ": expected [u, v]");
        out.emplace_back(parse_endpoint(e[0], where + "[0]"), parse_endpoint(e[1], where + "[1]"));
    }
    return out;
}

}  // namespace

GroundGraph graph_from_json(const json& j) {
    if (!j.is_object()) throw Error(Errc::malformed_input, "graph must be a JSON object");
    if (!j.contains("nodes") || !j["nodes"].is_number_unsigned())
        throw Error(Errc::malformed_input, "field 'nodes' must be a non-negative integer");
    const auto n = j["nodes"].get<std::size_t>();
    if (j.contains("pairs")) return validate_graph(RawRelation{n, parse_pair_list(j["pairs"], "pairs")}, false);
    std::vector<Edge> edges;
    if (j.contains("edges")) edges = parse_pair_list(j["edges"], "edges");
    return validate_graph(RawRelation{n, std::move(edges)}, true);
}

json graph_to_json(const GroundGraph& g) {
    json edges = json::array();
    for (auto [u, v] : g.edges()) edges.push_back({u, v});
    return json{{"nodes", g.node_count()}, {"edges", std::move(edges)}};
}

GroundGraph parse_graph_json(std::string_view text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw Error(Errc::malformed_input, std::string("JSON: ") + e.what());
    }
    return graph_from_json(j);
}

std::string serialize_graph_json(const GroundGraph& g) { return graph_to_json(g).dump(); }

GroundGraph parse_graph_text(std::string_view text) {
    std::istringstream in{std::string(text)};
    std::string line;
    std::size_t lineno = 0;
    std::optional<std::size_t> n;
    std::vector<Edge> edges;
    while (std::getline(in, line)) {
        ++lineno;
        std::istringstream ls(line);
        std::vector<std::string> fields;
        for (std::string f; ls >> f;) fields.push_back(f);
        if (fields.empty()) continue;
        auto num = [&](const std::string& f, int field) {
            std::size_t value = 0;
            auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), value);
            if (ec != std::errc() || ptr != f.data() + f.size())
                throw Error(Errc::malformed_input,
                            "line " + std::to_string(lineno) + " field " + std::to_string(field) + ": '" + f +
                                "' is not a non-negative integer");
            return value;
        };
        if (!n) {
            if (fields.size() != 1)
                throw Error(Errc::malformed_input, "line " + std::to_string(lineno) + ": expected the node count alone");
            n = num(fields[0], 1);
            continue;
        }
        if (fields.size() != 2)
            throw Error(Errc::malformed_input, "line " + std::to_string(lineno) + ": expected 'u v'");
        edges.emplace_back(static_cast<NodeId>(num(fields[0], 1)), static_cast<NodeId>(num(fields[1], 2)));
    }
    return validate_graph(RawRelation{n.value_or(0), std::move(edges)}, true);
}

std::string serialize_graph_text(const GroundGraph& g) {
    std::string out = std::to_string(g.node_count()) + "\n";
    for (auto [u, v] : g.edges()) out += std::to_string(u) + " " + std::to_string(v) + "\n";
    return out;
}

GroundGraph parse_graph(std::string_view text) {
    for (char c : text) {
        if (std::isspace(static_cast<unsigned char>(c))) continue;
        return c == '{' ? parse_graph_json(text) : parse_graph_text(text);
    }
    return GroundGraph::from_edges(0, {});
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(Errc::malformed_input, "cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, std::string_view contents) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(Errc::malformed_input, "cannot write " + path);
    out << contents;
}

GroundGraph load_graph_file(const std::string& path) { return parse_graph(read_file(path)); }

std::string to_dot(const GroundGraph& g, std::span<const std::string> fill_colors,
                   std::span<const std::string> node_names) {
    std::string out = "graph G {\n";
    g.declared().for_each([&](NodeId v) {
        out += "  " + std::to_string(v);
        std::string attrs;
        if (v < node_names.size()) attrs += "label=\"" + node_names[v] + "\"";
        if (v < fill_colors.size() && !fill_colors[v].empty()) {
            if (!attrs.empty()) attrs += ", ";
            attrs += "style=filled, fillcolor=\"" + fill_colors[v] + "\"";
        }
        if (!attrs.empty()) out += " [" + attrs + "]";
        out += ";\n";
    });
    for (auto [u, v] : g.edges()) out += "  " + std::to_string(u) + " -- " + std::to_string(v) + ";\n";
    out += "}\n";
    return out;
}

}  // namespace nk::io
