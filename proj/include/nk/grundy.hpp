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

#include <chrono>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

#include "nk/graph.hpp"

namespace nk {

using GrundyValue = std::uint32_t;

/// Least natural number not in `values`.
GrundyValue mex(std::span<const GrundyValue> values);

/// Result of tau: a node, or the "no zero option" sentinel max(V)+1
/// (0 on the empty position).
struct StrategyMove {
    NodeId node = 0;
    bool sentinel = false;

    bool operator==(const StrategyMove&) const = default;
};

struct Budget {
    static constexpr std::size_t default_sg_nodes = 64;

    /// Ceiling on alive nodes for full Grundy values. The boolean evaluator
    /// is uncapped unless `win_nodes` is set.
    std::size_t sg_nodes = default_sg_nodes;
    std::optional<std::size_t> win_nodes;
    std::optional<std::chrono::milliseconds> time;
};

/// Memoised Sprague-Grundy evaluator bound to one ground graph. Not
/// thread-safe; use one Engine per thread.
class Engine {
public:
    explicit Engine(std::shared_ptr<const GroundGraph> ground, Budget budget = {});

    const GroundGraph& ground() const { return *ground_; }
    const Budget& budget() const { return budget_; }
    void set_budget(Budget b) { budget_ = b; }

    GrundyValue sg(const Position& p);
    bool first_player_wins(const Position& p);

    /// Least node whose option has value 0; probes in ascending id order.
    StrategyMove tau(const Position& p);

    /// Alice's play against Bob's list: <tau, b0, tau, b1, tau, ...>.
    MoveSequence tau_a(std::span<const NodeId> bob_moves, const Position& p);
    /// Bob's replies to Alice's list: <a0, tau, a1, tau, ...>.
    MoveSequence tau_b(std::span<const NodeId> alice_moves, const Position& p);

    /// Connected components of the alive set, ordered by least member.
    std::vector<Position> components(const Position& p) const;

    std::size_t sg_entries() const { return sg_table_.size(); }
    std::size_t win_entries() const { return win_table_.size(); }
    std::optional<GrundyValue> cached_sg(const NodeSet& alive) const;
    std::optional<bool> cached_win(const NodeSet& alive) const;
    void clear();

private:
    void check_ground(const Position& p) const;
    void start_clock();
    void tick();
    GrundyValue sg_rec(const NodeSet& alive);
    GrundyValue sg_connected(const NodeSet& alive);
    bool win_rec(const NodeSet& alive);
    std::vector<NodeSet> split(const NodeSet& alive) const;

    std::shared_ptr<const GroundGraph> ground_;
    Budget budget_;
    std::unordered_map<NodeSet, GrundyValue> sg_table_;
    std::unordered_map<NodeSet, bool> win_table_;
    std::optional<std::chrono::steady_clock::time_point> deadline_;
    std::uint64_t ticks_ = 0;
    int depth_ = 0;
};

/// sg on a raw relation: a relation that is not an undirected graph gets
/// the sentinel max(node)+1 instead of a game value.
GrundyValue sg_of_relation(const RawRelation& raw, Budget budget = {});

}  // namespace nk
