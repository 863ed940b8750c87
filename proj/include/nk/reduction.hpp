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

#include <compare>
#include <cstddef>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "nk/atm.hpp"
#include "nk/graph.hpp"
#include "nk/grundy.hpp"

// Compiles an alternating machine and its input into a Node Kayles graph
// whose legitimate plays spell out a run of the machine.
//
// Round schedule (T rounds, Alice on even rounds):
//   P_0 .. P_{s-1}                      path bits, alternating owners
//   A_{i,0} B_{i,0} .. A_{i,s+1} B_{i,s+1}  configuration i, for i < s
//   A_{s,0} B_{s,0} .. A_{s,s+1}         final configuration, no last B
// Offsets inside a configuration: j < s is tape cell j, j = s the head,
// j = s+1 the state.
namespace nk::reduction {

enum class Variant { accept, reject };  // G_A and G_R

Variant parse_variant(std::string_view v);
std::string_view to_string(Variant v);

struct PathNode {
    std::size_t round = 0;
    int bit = 0;
    auto operator<=>(const PathNode&) const = default;
};

/// One choice in Alice's layer A_{round,offset}. `value` is the tape
/// symbol, head position or state index depending on the offset.
struct ANode {
    std::size_t round = 0;
    std::size_t offset = 0;
    std::size_t value = 0;
    auto operator<=>(const ANode&) const = default;
};

struct BobNode {
    std::size_t round = 0;
    std::size_t offset = 0;
    auto operator<=>(const BobNode&) const = default;
};

/// y_{layer,target}: adjacent to its own layer and every index in
/// (layer, T] except `target`.
struct PunishNode {
    std::size_t layer = 0;
    std::size_t target = 0;
    auto operator<=>(const PunishNode&) const = default;
};

/// "-> target" for the initial configuration.
struct InitRule {
    ANode target;
    auto operator<=>(const InitRule&) const = default;
};

/// p_{round,bit} & Q_{round,state} & H_{round,head} & T_{round,cell,symbol} -> target
struct TransRule {
    std::size_t round = 0;
    int bit = 0;
    std::size_t state = 0;
    std::size_t head = 0;
    std::size_t cell = 0;
    std::size_t symbol = 0;
    ANode target;
    auto operator<=>(const TransRule&) const = default;
};

struct AcceptNode {
    auto operator<=>(const AcceptNode&) const = default;
};
struct RejectNode {
    auto operator<=>(const RejectNode&) const = default;
};

using NodeLabel = std::variant<PathNode, ANode, BobNode, PunishNode, InitRule, TransRule, AcceptNode, RejectNode>;

std::string label_name(const NodeLabel& l, std::size_t s);
nlohmann::json label_to_json(const NodeLabel& l, std::size_t s);
NodeLabel label_from_json(const nlohmann::json& j);

enum class LayerKind { path, alice, bob };

struct LayerDesc {
    LayerKind kind = LayerKind::path;
    std::size_t round = 0;
    std::size_t offset = 0;
    bool operator==(const LayerDesc&) const = default;
};

struct ReductionLayout {
    std::size_t s = 0;
    std::size_t l0 = 0;
    std::size_t n0 = 0;
    std::size_t rounds = 0;  // T; also the pseudo-index of constraint nodes
    std::size_t states = 0;
    std::vector<LayerDesc> schedule;

    std::size_t alice_layer(std::size_t round, std::size_t offset) const { return s + 2 * (round * l0 + offset); }
    std::size_t bob_layer(std::size_t round, std::size_t offset) const { return alice_layer(round, offset) + 1; }
    /// Number of choices in A_{round,offset}.
    std::size_t alice_width(std::size_t offset) const;
    nlohmann::json to_json() const;
};

ReductionLayout layout(const atm::AtmSpec& m, std::string_view x);
ReductionLayout layout_for(std::size_t s, std::size_t states);

class ReductionGraph {
public:
    const std::shared_ptr<const GroundGraph>& graph() const { return graph_; }
    const ReductionLayout& layout() const { return layout_; }
    Variant variant() const { return variant_; }
    std::size_t size() const { return labels_.size(); }

    const NodeLabel& label(NodeId id) const;
    NodeId id(const NodeLabel& l) const;
    bool contains(const NodeLabel& l) const { return ids_.count(l) != 0; }

    /// Schedule index of a legitimate node or punisher layer; T for constraints.
    std::size_t index(NodeId id) const { return index_[id]; }
    bool is_legitimate(NodeId id) const;
    bool is_constraint(NodeId id) const;
    const std::vector<NodeId>& layer_nodes(std::size_t k) const { return layer_nodes_[k]; }
    const std::vector<NodeId>& bob_nodes() const { return bob_nodes_; }

    Position start() const { return Position(graph_); }

    nlohmann::json sidecar() const;
    std::string to_dot() const;

private:
    friend ReductionGraph build(const atm::AtmSpec&, std::string_view, Variant);

    std::shared_ptr<const GroundGraph> graph_;
    ReductionLayout layout_;
    Variant variant_ = Variant::accept;
    std::vector<NodeLabel> labels_;
    std::map<NodeLabel, NodeId> ids_;
    std::vector<std::size_t> index_;
    std::vector<std::vector<NodeId>> layer_nodes_;
    std::vector<NodeId> bob_nodes_;
};

ReductionGraph build(const atm::AtmSpec& m, std::string_view x, Variant variant);

/// Closed-form node counts for a machine/input pair.
struct NodeCounts {
    std::size_t path = 0, alice = 0, bob = 0, punish = 0, init = 0, trans = 0, terminal = 1;
    std::size_t total() const { return path + alice + bob + punish + init + trans + terminal; }
};
NodeCounts expected_counts(const atm::AtmSpec& m, std::string_view x);

// Legitimacy.

/// Layers before k fully dead, layers after k fully alive.
bool is_k_legitimate(const Position& p, const ReductionGraph& g, std::size_t k);
/// The i-th move lies in layer i (0-based).
bool is_sleg(std::span<const NodeId> moves, const ReductionGraph& g);

// Sequence utilities.

MoveSequence merge(std::span<const NodeId> a, std::span<const NodeId> b);
MoveSequence aseq(std::span<const NodeId> w);

/// Assembles <state, head, tape> from one round of Alice's moves.
atm::Configuration conf_of(std::span<const ANode> round_moves, std::size_t s);

enum class CompMode { pcomp, comp, acomp, rcomp };

/// `alice` are Alice's post-path moves in play order; the k-th move belongs
/// to round k / l0, offset k % l0.
bool computation_predicate(std::span<const NodeId> alice, const atm::PathBits& path, const atm::AtmSpec& m,
                           std::string_view x, const ReductionGraph& g, CompMode mode);

/// Alive constraint nodes whose succedent lies in A_{round,offset}.
std::vector<NodeId> surviving_rules(const Position& p, const ReductionGraph& g, std::size_t round,
                                    std::size_t offset);

/// Path bits spelled by the first s moves, if they are all path nodes of the
/// right rounds.
std::optional<atm::PathBits> path_of(std::span<const NodeId> moves, const ReductionGraph& g);

struct Witness {
    MoveSequence adversary;  // the opponent's concrete move list
    MoveSequence path;       // Path_A (tau_A) or Path_R (tau_B) play
    MoveSequence comp_play;  // full play that the computation is read from
    MoveSequence comp;       // Alice's post-path moves
    std::optional<atm::PathBits> bits;
};

/// Path_A / Comp_A: Bob's half-path on odd path rounds, then every dummy Bob
/// node; Alice answers with tau_A on G_A.
Witness witness_accept(const ReductionGraph& ga, Engine& ea, const atm::PathBits& half);

/// Path_R / Comp_R: Alice's half-path on even path rounds answered by tau_B
/// on G_A, then tau_A on G_R after that path against the dummy Bob nodes.
Witness witness_reject(const ReductionGraph& ga, Engine& ea, const ReductionGraph& gr, Engine& er,
                       const atm::PathBits& half);

}  // namespace nk::reduction
