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

#pragma once

#include <span>
#include <string>
#include <string_view>

#include <json.hpp>

#include "nk/graph.hpp"

namespace nk::io {

// Graph JSON: {"nodes": n, "edges": [[u,v], ...]} with u <= v, loops implicit.
// The alternative key "pairs" carries ordered pairs that must already be
// symmetric; it exists so callers can submit raw relations for validation.
GroundGraph graph_from_json(const nlohmann::json& j);
nlohmann::json graph_to_json(const GroundGraph& g);

GroundGraph parse_graph_json(std::string_view text);
std::string serialize_graph_json(const GroundGraph& g);

// Graph text: first line n, then one "u v" pair per line.
GroundGraph parse_graph_text(std::string_view text);
std::string serialize_graph_text(const GroundGraph& g);

/// Picks the format from the first non-space character ('{' means JSON).
GroundGraph parse_graph(std::string_view text);

GroundGraph load_graph_file(const std::string& path);
std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view contents);

/// Undirected DOT, loops suppressed. When `fill_colors` is non-empty it is
/// indexed by node id and emitted as filled node styles.
std::string to_dot(const GroundGraph& g, std::span<const std::string> fill_colors = {},
                   std::span<const std::string> node_names = {});

}  // namespace nk::io
