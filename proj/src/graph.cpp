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

#include "nk/graph.hpp"

#include <algorithm>
#include <string>

namespace nk {

std::string_view to_string(Errc code) {
    switch (code) {
    case Errc::asymmetric_edge: return "asymmetric-edge";
    case Errc::node_id_out_of_range: return "node-id-out-of-range";
    case Errc::move_not_available: return "move-not-available";
    case Errc::empty_sequence: return "empty-sequence";
    case Errc::malformed_input: return "malformed-input";
    case Errc::budget_exceeded: return "budget-exceeded";
    case Errc::delta_not_total: return "delta-not-total";
    case Errc::bad_accept_state: return "bad-accept-state";
    case Errc::empty_poly: return "empty-poly";
    case Errc::odd_time_bound: return "odd-time-bound";
    case Errc::input_too_long: return "input-too-long";
    case Errc::head_out_of_range: return "head-out-of-range";
    case Errc::unknown_id: return "unknown-id";
    case Errc::malformed_round: return "malformed-round";
    case Errc::length_mismatch: return "length-mismatch";
    case Errc::too_large: return "too-large";
    }
    return "unknown";
}

std::string_view to_string(Player p) { return p == Player::alice ? "Alice" : "Bob"; }

GroundGraph GroundGraph::from_edges(std::size_t n, std::span<const Edge> edges) {
    return validate_graph(RawRelation{n, {edges.begin(), edges.end()}}, true);
}

std::vector<Edge> GroundGraph::edges() const {
    std::vector<Edge> out;
    for (std::size_t u = 0; u < width_; ++u) {
        closed_[u].for_each([&](NodeId v) {
            if (u < v) out.emplace_back(static_cast<NodeId>(u), v);
        });
    }
    return out;
}

std::size_t GroundGraph::edge_count() const {
    std::size_t loops = 0, total = 0;
    for (std::size_t u = 0; u < width_; ++u) {
        total += closed_[u].count();
        if (closed_[u].contains(static_cast<NodeId>(u))) ++loops;
    }
    return (total - loops) / 2;
}

GroundGraph validate_graph(const RawRelation& raw, bool complete_symmetry) {
    std::size_t n = 0;
    if (raw.node_count) {
        n = *raw.node_count;
        for (auto [u, v] : raw.pairs) {
            if (u >= n || v >= n)
                throw Error(Errc::node_id_out_of_range,
                            "pair (" + std::to_string(u) + "," + std::to_string(v) + ") with " +
                                std::to_string(n) + " nodes");
        }
    } else {
        for (auto [u, v] : raw.pairs) n = std::max<std::size_t>(n, std::max(u, v) + std::size_t{1});
    }

    GroundGraph g;
    g.width_ = n;
    g.declared_ = NodeSet(n);
    g.closed_.assign(n, NodeSet(n));
    for (auto [u, v] : raw.pairs) {
        g.closed_[u].insert(v);
        if (complete_symmetry) g.closed_[v].insert(u);
    }
    if (!complete_symmetry) {
        for (auto [u, v] : raw.pairs) {
            if (!g.closed_[v].contains(u))
                throw Error(Errc::asymmetric_edge,
                            "(" + std::to_string(u) + "," + std::to_string(v) + ") has no reverse pair");
        }
    }
    // Coding convention: any node touched by an edge carries its self-loop.
    if (raw.node_count) {
        for (std::size_t v = 0; v < n; ++v) {
            g.declared_.insert(static_cast<NodeId>(v));
            g.closed_[v].insert(static_cast<NodeId>(v));
        }
    }
    for (auto [u, v] : raw.pairs) {
        g.declared_.insert(u);
        g.declared_.insert(v);
        g.closed_[u].insert(u);
        g.closed_[v].insert(v);
    }
    return g;
}

Position::Position(std::shared_ptr<const GroundGraph> g) : ground_(std::move(g)), alive_(ground_->declared()) {}

Position::Position(std::shared_ptr<const GroundGraph> g, NodeSet alive) : ground_(std::move(g)), alive_(std::move(alive)) {
    alive_ &= ground_->declared();
}

Position Position::option(NodeId v) const {
    if (!alive_.contains(v)) throw Error(Errc::move_not_available, "node " + std::to_string(v) + " is not alive");
    Position out = *this;
    out.alive_ -= ground_->closed_neighborhood(v);
    return out;
}

Position Position::play(std::span<const NodeId> moves) const {
    Position out = *this;
    for (NodeId v : moves) {
        if (out.alive_.contains(v)) out.alive_ -= ground_->closed_neighborhood(v);
    }
    return out;
}

bool is_winning_sequence(std::span<const NodeId> moves, const Position& p) {
    if (moves.empty()) throw Error(Errc::empty_sequence, "winning sequence needs at least one move");
    Position before = p.play(moves.first(moves.size() - 1));
    return !before.empty() && before.play(moves.last(1)).empty();
}

Player winner(std::span<const NodeId> moves) { return moves.size() % 2 == 1 ? Player::alice : Player::bob; }

}  // namespace nk
