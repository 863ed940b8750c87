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

#include "nk/reduction.hpp"

#include <algorithm>
#include <limits>
#include <set>

#include "nk/graph_io.hpp"

namespace nk::reduction {

using nlohmann::json;

Variant parse_variant(std::string_view v) {
    if (v == "A" || v == "a" || v == "accept") return Variant::accept;
    if (v == "R" || v == "r" || v == "reject") return Variant::reject;
    throw Error(Errc::malformed_input, "variant must be A or R, got '" + std::string(v) + "'");
}

std::string_view to_string(Variant v) { return v == Variant::accept ? "A" : "R"; }

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};

std::string a_name(const ANode& a, std::size_t s) {
    const std::string r = std::to_string(a.round);
    if (a.offset < s) return "T" + r + "," + std::to_string(a.offset) + "," + std::to_string(a.value);
    if (a.offset == s) return "H" + r + "," + std::to_string(a.value);
    return "Q" + r + "," + std::to_string(a.value);
}

json a_json(const ANode& a, std::size_t s) {
    if (a.offset < s)
        return {{"type", "tape"}, {"round", a.round}, {"cell", a.offset}, {"symbol", a.value}};
    if (a.offset == s) return {{"type", "head"}, {"round", a.round}, {"pos", a.value}, {"offset", a.offset}};
    return {{"type", "state"}, {"round", a.round}, {"state", a.value}, {"offset", a.offset}};
}

ANode a_from_json(const json& j) {
    const auto type = j.at("type").get<std::string>();
    if (type == "tape") return {j.at("round"), j.at("cell"), j.at("symbol")};
    if (type == "head") return {j.at("round"), j.at("offset"), j.at("pos")};
    if (type == "state") return {j.at("round"), j.at("offset"), j.at("state")};
    throw Error(Errc::malformed_input, "not an Alice label: " + type);
}

}  // namespace

std::string label_name(const NodeLabel& l, std::size_t s) {
    return std::visit(
        overloaded{
            [](const PathNode& p) { return "p" + std::to_string(p.round) + "," + std::to_string(p.bit); },
            [&](const ANode& a) { return a_name(a, s); },
            [](const BobNode& b) { return "b" + std::to_string(b.round) + "," + std::to_string(b.offset); },
            [](const PunishNode& y) { return "y" + std::to_string(y.layer) + "," + std::to_string(y.target); },
            [&](const InitRule& r) { return "->" + a_name(r.target, s); },
            [&](const TransRule& r) {
                const std::string i = std::to_string(r.round);
                return "p" + i + "," + std::to_string(r.bit) + " Q" + i + "," + std::to_string(r.state) + " H" + i +
                       "," + std::to_string(r.head) + " T" + i + "," + std::to_string(r.cell) + "," +
                       std::to_string(r.symbol) + " -> " + a_name(r.target, s);
            },
            [](const AcceptNode&) { return std::string("Acc"); },
            [](const RejectNode&) { return std::string("Rej"); },
        },
        l);
}

json label_to_json(const NodeLabel& l, std::size_t s) {
    return std::visit(
        overloaded{
            [](const PathNode& p) { return json{{"type", "path"}, {"round", p.round}, {"bit", p.bit}}; },
            [&](const ANode& a) { return a_json(a, s); },
            [](const BobNode& b) { return json{{"type", "bob"}, {"round", b.round}, {"offset", b.offset}}; },
            [](const PunishNode& y) { return json{{"type", "punish"}, {"layer", y.layer}, {"target", y.target}}; },
            [&](const InitRule& r) { return json{{"type", "init"}, {"target", a_json(r.target, s)}}; },
            [&](const TransRule& r) {
                return json{{"type", "rule"},   {"round", r.round}, {"bit", r.bit},       {"state", r.state},
                            {"head", r.head},   {"cell", r.cell},   {"symbol", r.symbol}, {"target", a_json(r.target, s)}};
            },
            [](const AcceptNode&) { return json{{"type", "accept"}}; },
            [](const RejectNode&) { return json{{"type", "reject"}}; },
        },
        l);
}

NodeLabel label_from_json(const json& j) {
    try {
        const auto type = j.at("type").get<std::string>();
        if (type == "path") return PathNode{j.at("round"), j.at("bit")};
        if (type == "tape" || type == "head" || type == "state") return a_from_json(j);
        if (type == "bob") return BobNode{j.at("round"), j.at("offset")};
        if (type == "punish") return PunishNode{j.at("layer"), j.at("target")};
        if (type == "init") return InitRule{a_from_json(j.at("target"))};
        if (type == "rule")
            return TransRule{j.at("round"), j.at("bit"),    j.at("state"), j.at("head"),
                             j.at("cell"),  j.at("symbol"), a_from_json(j.at("target"))};
        if (type == "accept") return AcceptNode{};
        if (type == "reject") return RejectNode{};
        throw Error(Errc::malformed_input, "unknown label type '" + type + "'");
    } catch (const json::exception& e) {
        throw Error(Errc::malformed_input, std::string("label record: ") + e.what());
    }
}

std::size_t ReductionLayout::alice_width(std::size_t offset) const {
    if (offset < s) return atm::symbol_count;
    if (offset == s) return s;
    return states;
}

json ReductionLayout::to_json() const {
    json sched = json::array();
    for (const auto& d : schedule) {
        const char* kind = d.kind == LayerKind::path ? "P" : d.kind == LayerKind::alice ? "A" : "B";
        sched.push_back({{"kind", kind}, {"round", d.round}, {"offset", d.offset}});
    }
    return json{{"s", s}, {"l0", l0}, {"n0", n0}, {"T", rounds}, {"states", states}, {"schedule", sched}};
}

ReductionLayout layout_for(std::size_t s, std::size_t states) {
    if (s < 2 || s % 2 != 0)
        throw Error(Errc::odd_time_bound, "s = " + std::to_string(s) + " must be even and at least 2");
    ReductionLayout out;
    out.s = s;
    out.l0 = s + 2;
    out.n0 = 2 * (s + 1) * out.l0;
    out.rounds = s + 2 * (s + 1) * (s + 2) - 1;
    out.states = states;
    for (std::size_t i = 0; i < s; ++i) out.schedule.push_back({LayerKind::path, i, 0});
    for (std::size_t i = 0; i <= s; ++i) {
        for (std::size_t j = 0; j < out.l0; ++j) {
            out.schedule.push_back({LayerKind::alice, i, j});
            if (i < s || j < s + 1) out.schedule.push_back({LayerKind::bob, i, j});
        }
    }
    return out;
}

ReductionLayout layout(const atm::AtmSpec& m, std::string_view x) {
    return layout_for(atm::time_bound(m, x), m.state_count());
}

const NodeLabel& ReductionGraph::label(NodeId id) const {
    if (id >= labels_.size()) throw Error(Errc::unknown_id, "node " + std::to_string(id) + " does not exist");
    return labels_[id];
}

NodeId ReductionGraph::id(const NodeLabel& l) const {
    auto it = ids_.find(l);
    if (it == ids_.end()) throw Error(Errc::unknown_id, "no node labelled " + label_name(l, layout_.s));
    return it->second;
}

bool ReductionGraph::is_legitimate(NodeId id) const {
    const auto& l = label(id);
    return std::holds_alternative<PathNode>(l) || std::holds_alternative<ANode>(l) || std::holds_alternative<BobNode>(l);
}

bool ReductionGraph::is_constraint(NodeId id) const { return index_.at(id) == layout_.rounds; }

json ReductionGraph::sidecar() const {
    json labels = json::object();
    for (std::size_t id = 0; id < labels_.size(); ++id) labels[std::to_string(id)] = label_to_json(labels_[id], layout_.s);
    return json{{"variant", to_string(variant_)}, {"labels", std::move(labels)}, {"layout", layout_.to_json()}};
}

std::string ReductionGraph::to_dot() const {
    std::vector<std::string> colors, names;
    for (const auto& l : labels_) {
        names.push_back(label_name(l, layout_.s));
        colors.push_back(std::visit(overloaded{
                                        [](const PathNode&) { return "lightblue"; },
                                        [](const ANode&) { return "palegreen"; },
                                        [](const BobNode&) { return "khaki"; },
                                        [](const PunishNode&) { return "lightgray"; },
                                        [](const InitRule&) { return "salmon"; },
                                        [](const TransRule&) { return "salmon"; },
                                        [](const AcceptNode&) { return "red"; },
                                        [](const RejectNode&) { return "red"; },
                                    },
                                    l));
    }
    return io::to_dot(*graph_, colors, names);
}

namespace {

std::vector<NodeLabel> constraint_labels(const atm::AtmSpec& m, std::string_view x, const ReductionLayout& lay,
                                         Variant variant) {
    const std::size_t s = lay.s;
    std::set<NodeLabel> out;

    const auto init = atm::c_init(x, s);
    out.insert(InitRule{ANode{0, s + 1, init.state}});
    out.insert(InitRule{ANode{0, s, init.head}});
    for (std::size_t j = 0; j < s; ++j) out.insert(InitRule{ANode{0, j, init.tape[j]}});

    for (std::size_t i = 0; i < s; ++i)
        for (int c = 0; c < 2; ++c)
            for (std::size_t q = 0; q < m.state_count(); ++q)
                for (std::size_t k = 0; k < s; ++k) {
                    for (atm::Symbol z = 0; z < atm::symbol_count; ++z) {
                        const auto& t = m.rule(c, q, z);
                        out.insert(TransRule{i, c, q, k, k, z, ANode{i + 1, k, t.write}});
                        const long long target = static_cast<long long>(k) + t.move;
                        if (target >= 0 && target < static_cast<long long>(s))
                            out.insert(TransRule{i, c, q, k, k, z, ANode{i + 1, s, static_cast<std::size_t>(target)}});
                        out.insert(TransRule{i, c, q, k, k, z, ANode{i + 1, s + 1, t.next}});
                    }
                    // Frame rules: cells away from the head keep their symbol.
                    for (std::size_t other = 0; other < s; ++other) {
                        if (other == k) continue;
                        for (std::size_t a = 0; a < atm::symbol_count; ++a)
                            out.insert(TransRule{i, c, q, k, other, a, ANode{i + 1, other, a}});
                    }
                }

    if (variant == Variant::accept)
        out.insert(AcceptNode{});
    else
        out.insert(RejectNode{});
    return {out.begin(), out.end()};
}

}  // namespace

ReductionGraph build(const atm::AtmSpec& m, std::string_view x, Variant variant) {
    ReductionGraph g;
    g.layout_ = layout(m, x);
    g.variant_ = variant;
    const auto& lay = g.layout_;
    const std::size_t s = lay.s;
    const std::size_t T = lay.rounds;

    auto add = [&](NodeLabel l, std::size_t index) {
        const auto id = static_cast<NodeId>(g.labels_.size());
        g.ids_.emplace(l, id);
        g.labels_.push_back(std::move(l));
        g.index_.push_back(index);
        return id;
    };

    g.layer_nodes_.resize(T);
    for (std::size_t k = 0; k < T; ++k) {
        const auto& d = lay.schedule[k];
        switch (d.kind) {
        case LayerKind::path:
            for (int c = 0; c < 2; ++c) g.layer_nodes_[k].push_back(add(PathNode{d.round, c}, k));
            break;
        case LayerKind::alice:
            for (std::size_t v = 0; v < lay.alice_width(d.offset); ++v)
                g.layer_nodes_[k].push_back(add(ANode{d.round, d.offset, v}, k));
            break;
        case LayerKind::bob: {
            const auto id = add(BobNode{d.round, d.offset}, k);
            g.layer_nodes_[k].push_back(id);
            g.bob_nodes_.push_back(id);
            break;
        }
        }
    }

    // Bucket by index: legit layer plus its punishers; bucket T holds constraints.
    std::vector<std::vector<NodeId>> bucket(T + 1);
    for (std::size_t k = 0; k < T; ++k) bucket[k] = g.layer_nodes_[k];
    std::vector<std::vector<NodeId>> punishers(T);
    for (std::size_t k = 0; k < T; ++k)
        for (std::size_t t = k + 1; t <= T; ++t) {
            const auto id = add(PunishNode{k, t}, k);
            punishers[k].push_back(id);
            bucket[k].push_back(id);
        }
    std::vector<NodeId> constraints;
    for (auto& l : constraint_labels(m, x, lay, variant)) {
        const auto id = add(std::move(l), T);
        constraints.push_back(id);
        bucket[T].push_back(id);
    }

    std::vector<Edge> edges;
    auto link = [&](NodeId u, NodeId v) {
        if (u != v) edges.emplace_back(std::min(u, v), std::max(u, v));
    };
    auto clique = [&](const std::vector<NodeId>& nodes) {
        for (std::size_t a = 0; a < nodes.size(); ++a)
            for (std::size_t b = a + 1; b < nodes.size(); ++b) link(nodes[a], nodes[b]);
    };

    for (NodeId c : constraints) {
        const auto& l = g.labels_[c];
        if (const auto* r = std::get_if<InitRule>(&l)) {
            link(g.id(r->target), c);
        } else if (const auto* t = std::get_if<TransRule>(&l)) {
            link(g.id(PathNode{t->round, 1 - t->bit}), c);
            link(g.id(t->target), c);
            for (std::size_t v = 0; v < lay.states; ++v)
                if (v != t->state) link(g.id(ANode{t->round, s + 1, v}), c);
            for (std::size_t v = 0; v < s; ++v)
                if (v != t->head) link(g.id(ANode{t->round, s, v}), c);
            for (std::size_t v = 0; v < atm::symbol_count; ++v)
                if (v != t->symbol) link(g.id(ANode{t->round, t->cell, v}), c);
        } else if (std::holds_alternative<AcceptNode>(l)) {
            link(g.id(ANode{s, s + 1, atm::accept_index}), c);
        } else {
            for (std::size_t v = 0; v < lay.states; ++v)
                if (v != atm::accept_index) link(g.id(ANode{s, s + 1, v}), c);
        }
    }
    clique(constraints);
    for (std::size_t k = 0; k < T; ++k) clique(bucket[k]);
    for (std::size_t k = 0; k < T; ++k) {
        for (NodeId y : punishers[k]) {
            const auto target = std::get<PunishNode>(g.labels_[y]).target;
            for (std::size_t i = k + 1; i <= T; ++i) {
                if (i == target) continue;
                for (NodeId v : bucket[i]) link(y, v);
            }
        }
    }
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

    g.graph_ = std::make_shared<const GroundGraph>(GroundGraph::from_edges(g.labels_.size(), edges));
    return g;
}

NodeCounts expected_counts(const atm::AtmSpec& m, std::string_view x) {
    const std::size_t s = atm::time_bound(m, x);
    const std::size_t q = m.state_count();
    const std::size_t T = s + 2 * (s + 1) * (s + 2) - 1;
    NodeCounts n;
    n.path = 2 * s;
    n.alice = (s + 1) * (3 * s + s + q);
    n.bob = (s + 1) * (s + 2) - 1;
    n.punish = T * (T + 1) / 2;
    n.init = s + 2;
    std::size_t head_rules = 0;
    for (int c = 0; c < 2; ++c)
        for (std::size_t st = 0; st < q; ++st)
            for (std::size_t k = 0; k < s; ++k)
                for (atm::Symbol z = 0; z < atm::symbol_count; ++z) {
                    const long long target = static_cast<long long>(k) + m.rule(c, st, z).move;
                    if (target >= 0 && target < static_cast<long long>(s)) ++head_rules;
                }
    // write + state rules per (c, state, head, symbol), frame rules per (c, state, head, other cell, symbol)
    n.trans = s * (2 * (2 * q * s * 3) + head_rules + 2 * q * s * (s - 1) * 3);
    n.terminal = 1;
    return n;
}

bool is_k_legitimate(const Position& p, const ReductionGraph& g, std::size_t k) {
    const std::size_t T = g.layout().rounds;
    for (std::size_t i = 0; i < T; ++i) {
        if (i == k) continue;
        for (NodeId v : g.layer_nodes(i)) {
            if (i < k && p.has(v)) return false;
            if (i > k && !p.has(v)) return false;
        }
    }
    return true;
}

bool is_sleg(std::span<const NodeId> moves, const ReductionGraph& g) {
    if (moves.size() > g.layout().rounds) return false;
    for (std::size_t i = 0; i < moves.size(); ++i) {
        if (moves[i] >= g.size() || !g.is_legitimate(moves[i]) || g.index(moves[i]) != i) return false;
    }
    return true;
}

MoveSequence merge(std::span<const NodeId> a, std::span<const NodeId> b) {
    if (b.size() != a.size() && b.size() + 1 != a.size())
        throw Error(Errc::length_mismatch, "cannot interleave " + std::to_string(a.size()) + " with " +
                                               std::to_string(b.size()) + " moves");
    MoveSequence out;
    out.reserve(a.size() + b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        out.push_back(a[i]);
        if (i < b.size()) out.push_back(b[i]);
    }
    return out;
}

MoveSequence aseq(std::span<const NodeId> w) {
    MoveSequence out;
    for (std::size_t i = 0; i < w.size(); i += 2) out.push_back(w[i]);
    return out;
}

atm::Configuration conf_of(std::span<const ANode> round_moves, std::size_t s) {
    if (round_moves.size() != s + 2)
        throw Error(Errc::malformed_round, "a round has " + std::to_string(s + 2) + " moves, got " +
                                               std::to_string(round_moves.size()));
    atm::Configuration c;
    c.tape.assign(s, atm::blank);
    std::vector<bool> seen(s + 2, false);
    for (const auto& a : round_moves) {
        if (a.round != round_moves.front().round) throw Error(Errc::malformed_round, "moves from different rounds");
        if (a.offset >= s + 2 || seen[a.offset])
            throw Error(Errc::malformed_round, "offset " + std::to_string(a.offset) + " missing or repeated");
        seen[a.offset] = true;
        if (a.offset < s)
            c.tape[a.offset] = static_cast<atm::Symbol>(a.value);
        else if (a.offset == s)
            c.head = a.value;
        else
            c.state = a.value;
    }
    return c;
}

namespace {

constexpr std::size_t no_value = std::numeric_limits<std::size_t>::max();

std::size_t component(const atm::Configuration& c, std::size_t offset, std::size_t s) {
    if (offset < s) return c.tape[offset];
    if (offset == s) return c.head;
    return c.state;
}

// Next(r, ., bit, c): the r-th component of the successor, or no_value when
// the head would leave the tape.
std::size_t next_component(const atm::AtmSpec& m, const atm::Configuration& c, int bit, std::size_t offset,
                           std::size_t s) {
    const auto& t = m.rule(bit, c.state, c.tape[c.head]);
    if (offset < s) return offset == c.head ? t.write : c.tape[offset];
    if (offset == s) {
        const long long target = static_cast<long long>(c.head) + t.move;
        return (target < 0 || target >= static_cast<long long>(s)) ? no_value : static_cast<std::size_t>(target);
    }
    return t.next;
}

}  // namespace

bool computation_predicate(std::span<const NodeId> alice, const atm::PathBits& path, const atm::AtmSpec& m,
                           std::string_view x, const ReductionGraph& g, CompMode mode) {
    const auto& lay = g.layout();
    const std::size_t s = lay.s, l0 = lay.l0;
    if (path.size() != s)
        throw Error(Errc::length_mismatch, "path has " + std::to_string(path.size()) + " bits, expected " +
                                               std::to_string(s));
    const std::size_t full = (s + 1) * l0;
    if (alice.size() > full) return false;
    if (mode != CompMode::pcomp && alice.size() != full) return false;

    std::vector<ANode> moves;
    for (std::size_t k = 0; k < alice.size(); ++k) {
        if (alice[k] >= g.size()) return false;
        const auto* a = std::get_if<ANode>(&g.label(alice[k]));
        if (!a || a->round != k / l0 || a->offset != k % l0) return false;
        moves.push_back(*a);
    }

    const auto init = atm::c_init(x, s);
    std::vector<atm::Configuration> confs;
    for (std::size_t k = 0; k < moves.size(); ++k) {
        const std::size_t q = k / l0, r = k % l0;
        if (r == 0 && q > 0) confs.push_back(conf_of(std::span(moves).subspan((q - 1) * l0, l0), s));
        const std::size_t want = q == 0 ? component(init, r, s) : next_component(m, confs[q - 1], path[q - 1], r, s);
        if (moves[k].value != want) return false;
    }
    if (mode == CompMode::pcomp || mode == CompMode::comp) return true;
    const auto last = conf_of(std::span(moves).subspan(s * l0, l0), s);
    return (mode == CompMode::acomp) == atm::accepting(m, last);
}

std::vector<NodeId> surviving_rules(const Position& p, const ReductionGraph& g, std::size_t round,
                                    std::size_t offset) {
    std::vector<NodeId> out;
    p.alive().for_each([&](NodeId v) {
        const auto& l = g.label(v);
        const ANode* target = nullptr;
        if (const auto* r = std::get_if<InitRule>(&l)) target = &r->target;
        if (const auto* r = std::get_if<TransRule>(&l)) target = &r->target;
        if (target && target->round == round && target->offset == offset) out.push_back(v);
    });
    return out;
}

std::optional<atm::PathBits> path_of(std::span<const NodeId> moves, const ReductionGraph& g) {
    const std::size_t s = g.layout().s;
    if (moves.size() < s) return std::nullopt;
    atm::PathBits bits;
    for (std::size_t i = 0; i < s; ++i) {
        if (moves[i] >= g.size()) return std::nullopt;
        const auto* p = std::get_if<PathNode>(&g.label(moves[i]));
        if (!p || p->round != i) return std::nullopt;
        bits.push_back(static_cast<std::uint8_t>(p->bit));
    }
    return bits;
}

namespace {

void check_half(const ReductionGraph& g, const atm::PathBits& half) {
    if (half.size() * 2 != g.layout().s)
        throw Error(Errc::length_mismatch, "half path has " + std::to_string(half.size()) + " bits, expected " +
                                               std::to_string(g.layout().s / 2));
    for (auto b : half)
        if (b > 1) throw Error(Errc::malformed_input, "path bits must be 0 or 1");
}

}  // namespace

Witness witness_accept(const ReductionGraph& ga, Engine& ea, const atm::PathBits& half) {
    check_half(ga, half);
    Witness w;
    for (std::size_t k = 0; k < half.size(); ++k) w.adversary.push_back(ga.id(PathNode{2 * k + 1, half[k]}));
    const auto path_moves = w.adversary.size();
    w.adversary.insert(w.adversary.end(), ga.bob_nodes().begin(), ga.bob_nodes().end());

    w.comp_play = ea.tau_a(w.adversary, ga.start());
    w.path.assign(w.comp_play.begin(), w.comp_play.begin() + static_cast<std::ptrdiff_t>(2 * path_moves + 1));
    w.bits = path_of(w.comp_play, ga);
    const std::size_t s = ga.layout().s;
    w.comp = aseq(std::span(w.comp_play).subspan(s));
    return w;
}

Witness witness_reject(const ReductionGraph& ga, Engine& ea, const ReductionGraph& gr, Engine& er,
                       const atm::PathBits& half) {
    check_half(ga, half);
    Witness w;
    for (std::size_t k = 0; k < half.size(); ++k) w.adversary.push_back(ga.id(PathNode{2 * k, half[k]}));
    w.path = ea.tau_b(w.adversary, ga.start());
    w.bits = path_of(w.path, ga);

    // Legitimate nodes carry the same labels in both variants.
    MoveSequence in_r;
    for (NodeId v : w.path) in_r.push_back(v < ga.size() && gr.contains(ga.label(v)) ? gr.id(ga.label(v)) : v);
    const auto after = gr.start().play(in_r);
    const auto tail = er.tau_a(gr.bob_nodes(), after);
    w.comp_play = in_r;
    w.comp_play.insert(w.comp_play.end(), tail.begin(), tail.end());
    w.comp = aseq(tail);
    return w;
}

}  // namespace nk::reduction
