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

#include "nk/grundy.hpp"

#include <algorithm>
#include <string>

namespace nk {

GrundyValue mex(std::span<const GrundyValue> values) {
    std::vector<bool> seen(values.size() + 1, false);
    for (auto v : values)
        if (v < seen.size()) seen[v] = true;
    GrundyValue k = 0;
    while (seen[k]) ++k;
    return k;
}

Engine::Engine(std::shared_ptr<const GroundGraph> ground, Budget budget)
    : ground_(std::move(ground)), budget_(budget) {}

void Engine::check_ground(const Position& p) const {
    if (p.ground_ptr().get() != ground_.get())
        throw Error(Errc::malformed_input, "position belongs to a different ground graph");
}

// Top-level entry points arm the deadline; nested calls inherit it.
void Engine::start_clock() {
    if (depth_ == 0) {
        deadline_.reset();
        if (budget_.time) deadline_ = std::chrono::steady_clock::now() + *budget_.time;
    }
}

void Engine::tick() {
    if (deadline_ && (++ticks_ & 0x3ff) == 0 && std::chrono::steady_clock::now() > *deadline_)
        throw Error(Errc::budget_exceeded, "time budget of " + std::to_string(budget_.time->count()) + " ms spent");
}

namespace {

struct DepthGuard {
    int& d;
    explicit DepthGuard(int& depth) : d(depth) { ++d; }
    ~DepthGuard() { --d; }
};

}  // namespace

std::vector<NodeSet> Engine::split(const NodeSet& alive) const {
    std::vector<NodeSet> out;
    NodeSet rest = alive;
    while (!rest.empty()) {
        NodeSet comp(alive.width());
        NodeSet frontier(alive.width());
        frontier.insert(rest.first());
        while (!frontier.empty()) {
            comp |= frontier;
            NodeSet grow(alive.width());
            frontier.for_each([&](NodeId v) { grow |= ground_->closed_neighborhood(v); });
            grow &= rest;
            grow -= comp;
            frontier = std::move(grow);
        }
        rest -= comp;
        out.push_back(std::move(comp));
    }
    return out;
}

std::vector<Position> Engine::components(const Position& p) const {
    check_ground(p);
    std::vector<Position> out;
    for (auto& c : split(p.alive())) out.emplace_back(p.ground_ptr(), std::move(c));
    return out;
}

GrundyValue Engine::sg(const Position& p) {
    check_ground(p);
    const std::size_t n = p.alive().count();
    if (n > budget_.sg_nodes)
        throw Error(Errc::budget_exceeded, std::to_string(n) + " alive nodes exceed the Grundy ceiling of " +
                                               std::to_string(budget_.sg_nodes));
    start_clock();
    DepthGuard g(depth_);
    return sg_rec(p.alive());
}

GrundyValue Engine::sg_rec(const NodeSet& alive) {
    if (alive.empty()) return 0;
    if (auto it = sg_table_.find(alive); it != sg_table_.end()) return it->second;
    auto parts = split(alive);
    GrundyValue value = 0;
    if (parts.size() == 1) {
        value = sg_connected(alive);
    } else {
        for (const auto& part : parts) value ^= sg_rec(part);
    }
    sg_table_.emplace(alive, value);
    return value;
}

GrundyValue Engine::sg_connected(const NodeSet& alive) {
    tick();
    std::vector<GrundyValue> values;
    values.reserve(alive.count());
    alive.for_each([&](NodeId v) { values.push_back(sg_rec(alive - ground_->closed_neighborhood(v))); });
    return mex(values);
}

bool Engine::first_player_wins(const Position& p) {
    check_ground(p);
    if (budget_.win_nodes && p.alive().count() > *budget_.win_nodes)
        throw Error(Errc::budget_exceeded, std::to_string(p.alive().count()) +
                                               " alive nodes exceed the search ceiling of " +
                                               std::to_string(*budget_.win_nodes));
    start_clock();
    DepthGuard g(depth_);
    return win_rec(p.alive());
}

bool Engine::win_rec(const NodeSet& alive) {
    if (alive.empty()) return false;
    if (auto it = win_table_.find(alive); it != win_table_.end()) return it->second;
    tick();
    bool wins = false;
    // A move whose closed neighbourhood covers everything wins outright.
    for (NodeId v = alive.first(); v < alive.width(); v = alive.next(v + 1)) {
        if (alive.subset_of(ground_->closed_neighborhood(v))) {
            wins = true;
            break;
        }
    }
    if (!wins) {
        for (NodeId v = alive.first(); v < alive.width(); v = alive.next(v + 1)) {
            if (!win_rec(alive - ground_->closed_neighborhood(v))) {
                wins = true;
                break;
            }
        }
    }
    win_table_.emplace(alive, wins);
    return wins;
}

StrategyMove Engine::tau(const Position& p) {
    check_ground(p);
    start_clock();
    DepthGuard g(depth_);
    const NodeSet& alive = p.alive();
    for (NodeId v = alive.first(); v < alive.width(); v = alive.next(v + 1)) {
        if (!win_rec(alive - ground_->closed_neighborhood(v))) return {v, false};
    }
    return {static_cast<NodeId>(alive.last() + 1), true};
}

MoveSequence Engine::tau_a(std::span<const NodeId> bob_moves, const Position& p) {
    start_clock();
    DepthGuard g(depth_);
    MoveSequence out;
    out.reserve(2 * bob_moves.size() + 1);
    Position cur = p;
    out.push_back(tau(cur).node);
    cur = cur.play(std::span(out).last(1));
    for (NodeId b : bob_moves) {
        out.push_back(b);
        cur = cur.play(std::span(&b, 1));
        const NodeId reply = tau(cur).node;
        out.push_back(reply);
        cur = cur.play(std::span(&reply, 1));
    }
    return out;
}

MoveSequence Engine::tau_b(std::span<const NodeId> alice_moves, const Position& p) {
    start_clock();
    DepthGuard g(depth_);
    MoveSequence out;
    out.reserve(2 * alice_moves.size());
    Position cur = p;
    for (NodeId a : alice_moves) {
        out.push_back(a);
        cur = cur.play(std::span(&a, 1));
        const NodeId reply = tau(cur).node;
        out.push_back(reply);
        cur = cur.play(std::span(&reply, 1));
    }
    return out;
}

std::optional<GrundyValue> Engine::cached_sg(const NodeSet& alive) const {
    if (auto it = sg_table_.find(alive); it != sg_table_.end()) return it->second;
    return std::nullopt;
}

std::optional<bool> Engine::cached_win(const NodeSet& alive) const {
    if (auto it = win_table_.find(alive); it != win_table_.end()) return it->second;
    return std::nullopt;
}

void Engine::clear() {
    sg_table_.clear();
    win_table_.clear();
}

GrundyValue sg_of_relation(const RawRelation& raw, Budget budget) {
    std::shared_ptr<const GroundGraph> g;
    try {
        g = std::make_shared<const GroundGraph>(validate_graph(raw, false));
    } catch (const Error& e) {
        if (e.code() != Errc::asymmetric_edge) throw;
        std::int64_t top = -1;
        for (auto [u, v] : raw.pairs) top = std::max<std::int64_t>(top, std::max(u, v));
        return static_cast<GrundyValue>(top + 1);
    }
    Engine engine(g, budget);
    return engine.sg(Position(g));
}

}  // namespace nk
