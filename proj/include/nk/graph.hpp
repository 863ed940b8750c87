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

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "nk/error.hpp"
#include "nk/node_set.hpp"

namespace nk {

using MoveSequence = std::vector<NodeId>;
using Edge = std::pair<NodeId, NodeId>;

enum class Player { alice, bob };
std::string_view to_string(Player p);

/// An adjacency relation as it arrives from outside: ordered pairs, possibly
/// asymmetric, with an optional explicit node count.
struct RawRelation {
    std::optional<std::size_t> node_count;
    std::vector<Edge> pairs;
};

/// Undirected graph with implicit self-loops. Immutable once built.
class GroundGraph {
public:
    GroundGraph() = default;

    /// All of 0..n-1 are declared; each edge is added in both directions.
    static GroundGraph from_edges(std::size_t n, std::span<const Edge> edges);

    std::size_t node_count() const { return width_; }
    const NodeSet& declared() const { return declared_; }
    bool adjacent(NodeId u, NodeId v) const { return closed_[u].contains(v); }
    /// N[v]: v together with its neighbours.
    const NodeSet& closed_neighborhood(NodeId v) const { return closed_[v]; }
    std::size_t degree(NodeId v) const { return closed_[v].count() - 1; }

    /// Sorted (u < v) list of non-loop edges.
    std::vector<Edge> edges() const;
    std::size_t edge_count() const;

private:
    friend GroundGraph validate_graph(const RawRelation&, bool);

    std::size_t width_ = 0;
    NodeSet declared_;
    std::vector<NodeSet> closed_;
};

/// Checks the relation is a symmetric, in-range adjacency and builds the graph.
/// Nodes mentioned by any pair get their self-loop; with an explicit
/// node count every id below it is declared. With
/// `complete_symmetry` the reverse of every pair is added first; without it
/// a missing reverse pair is reported as Errc::asymmetric_edge.
GroundGraph validate_graph(const RawRelation& raw, bool complete_symmetry = true);

/// A game state: the surviving node set inside a shared ground graph.
class Position {
public:
    Position() = default;
    explicit Position(std::shared_ptr<const GroundGraph> g);
    Position(std::shared_ptr<const GroundGraph> g, NodeSet alive);

    const GroundGraph& ground() const { return *ground_; }
    const std::shared_ptr<const GroundGraph>& ground_ptr() const { return ground_; }
    const NodeSet& alive() const { return alive_; }
    bool empty() const { return alive_.empty(); }
    bool has(NodeId v) const { return alive_.contains(v); }

    /// G_v: removes the closed neighbourhood of v. Throws move_not_available
    /// if v is not alive.
    Position option(NodeId v) const;

    /// G_w: folds option over w, skipping moves that are not alive.
    Position play(std::span<const NodeId> moves) const;

    bool operator==(const Position& o) const { return ground_ == o.ground_ && alive_ == o.alive_; }

private:
    std::shared_ptr<const GroundGraph> ground_;
    NodeSet alive_;
};

inline NodeSet nodes(const Position& p) { return p.alive(); }
inline Position option(const Position& p, NodeId v) { return p.option(v); }
inline Position play(const Position& p, std::span<const NodeId> moves) { return p.play(moves); }

/// The last move of w empties the position and the one before did not.
bool is_winning_sequence(std::span<const NodeId> moves, const Position& p);

/// Winner of a completed game record: Alice iff its length is odd.
Player winner(std::span<const NodeId> moves);

}  // namespace nk
