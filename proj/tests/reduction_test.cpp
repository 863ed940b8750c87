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

#include <doctest.h>

#include "nk/graph_io.hpp"
#include "nk/reduction.hpp"
#include "nk/verify.hpp"

using namespace nk;
using namespace nk::reduction;

namespace {

atm::AtmSpec fixture(const std::string& name) {
    return atm::load_machine_file(NK_TEST_DATA "/machines/" + name + ".json");
}

const std::vector<std::string> fixtures{"m_yes", "m_no", "m_bit0", "m_bit1", "m_flip"};

template <class T>
std::size_t count_of(const ReductionGraph& g) {
    std::size_t n = 0;
    for (NodeId v = 0; v < g.size(); ++v) n += std::holds_alternative<T>(g.label(v));
    return n;
}

Errc code_of(auto&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("no error raised");
    return Errc::malformed_input;
}

}  // namespace

TEST_SUITE("reduction") {
    TEST_CASE("layout arithmetic") {
        const auto lay = layout_for(2, 2);
        CHECK(lay.l0 == 4);
        CHECK(lay.n0 == 24);
        CHECK(lay.rounds == 25);
        REQUIRE(lay.schedule.size() == lay.rounds);
        CHECK(lay.schedule[0] == LayerDesc{LayerKind::path, 0, 0});
        CHECK(lay.schedule[2] == LayerDesc{LayerKind::alice, 0, 0});
        CHECK(lay.schedule.back() == LayerDesc{LayerKind::alice, 2, 3});
        CHECK((lay.rounds - 1) % 2 == 0);
        for (std::size_t i = 0; i <= lay.s; ++i)
            for (std::size_t j = 0; j < lay.l0; ++j) {
                CHECK(lay.schedule[lay.alice_layer(i, j)] == LayerDesc{LayerKind::alice, i, j});
                if (lay.bob_layer(i, j) < lay.rounds)
                    CHECK(lay.schedule[lay.bob_layer(i, j)] == LayerDesc{LayerKind::bob, i, j});
            }
        CHECK(layout_for(4, 3).rounds == 4 + 2 * 5 * 6 - 1);
        CHECK(code_of([] { layout_for(3, 2); }) == Errc::odd_time_bound);
        CHECK(code_of([] { layout_for(0, 2); }) == Errc::odd_time_bound);
    }

    TEST_CASE("node counts") {
        for (const auto& name : fixtures) {
            CAPTURE(name);
            const auto m = fixture(name);
            const auto want = expected_counts(m, "");
            for (auto v : {Variant::accept, Variant::reject}) {
                const auto g = build(m, "", v);
                CHECK(g.size() == want.total());
                CHECK(count_of<PathNode>(g) == want.path);
                CHECK(count_of<ANode>(g) == want.alice);
                CHECK(count_of<BobNode>(g) == want.bob);
                CHECK(count_of<PunishNode>(g) == want.punish);
                CHECK(count_of<InitRule>(g) == want.init);
                CHECK(count_of<TransRule>(g) == want.trans);
                CHECK(count_of<AcceptNode>(g) == (v == Variant::accept ? 1u : 0u));
                CHECK(count_of<RejectNode>(g) == (v == Variant::reject ? 1u : 0u));
            }
        }
        const auto two = build(fixture("m_yes"), "1", Variant::accept);
        CHECK(count_of<PathNode>(two) == 4);
        CHECK(count_of<ANode>(two) == 30);
        CHECK(count_of<PunishNode>(two) == 25 * 26 / 2);
    }

    TEST_CASE("structure") {
        const auto g = build(fixture("m_bit0"), "1", Variant::accept);
        const auto& gr = *g.graph();
        const auto T = g.layout().rounds;

        // symmetric relation, so it survives validation without completion
        RawRelation raw{gr.node_count(), {}};
        for (auto [u, v] : gr.edges()) {
            raw.pairs.emplace_back(u, v);
            raw.pairs.emplace_back(v, u);
        }
        CHECK(validate_graph(raw, false).edges() == gr.edges());

        std::vector<int> layer_of(g.size(), -1);
        for (std::size_t k = 0; k < T; ++k) {
            for (NodeId v : g.layer_nodes(k)) {
                CHECK(layer_of[v] == -1);
                layer_of[v] = static_cast<int>(k);
                CHECK(g.index(v) == k);
            }
        }
        for (NodeId u = 0; u < g.size(); ++u) {
            CHECK(g.is_legitimate(u) == (layer_of[u] >= 0));
            for (NodeId v = u + 1; v < g.size(); ++v) {
                if (layer_of[u] >= 0 && layer_of[v] >= 0 && layer_of[u] != layer_of[v]) CHECK_FALSE(gr.adjacent(u, v));
                // a layer with its punishers is a clique, and so are the constraints
                if (g.index(u) == g.index(v)) CHECK(gr.adjacent(u, v));
            }
        }
    }

    TEST_CASE("edge rules on sample labels") {
        const auto m = fixture("m_bit0");
        const auto g = build(m, "", Variant::accept);
        const auto& gr = *g.graph();
        const std::size_t s = g.layout().s;
        const auto& t = m.rule(1, 0, atm::blank);
        const TransRule r{0, 1, 0, 0, 0, atm::blank, ANode{1, s + 1, t.next}};
        const NodeId rule = g.id(r);
        CHECK(gr.adjacent(g.id(PathNode{0, 0}), rule));
        CHECK_FALSE(gr.adjacent(g.id(PathNode{0, 1}), rule));
        CHECK(gr.adjacent(g.id(ANode{1, s + 1, t.next}), rule));
        CHECK(gr.adjacent(g.id(ANode{0, s + 1, 1}), rule));      // conflicting state
        CHECK_FALSE(gr.adjacent(g.id(ANode{0, s + 1, 0}), rule));
        CHECK(gr.adjacent(g.id(ANode{0, 0, 0}), rule));          // conflicting symbol
        CHECK_FALSE(gr.adjacent(g.id(ANode{0, 1, 0}), rule));    // other cell is not in the antecedent
        CHECK(gr.adjacent(g.id(AcceptNode{}), g.id(ANode{s, s + 1, 1})));
        CHECK_FALSE(gr.adjacent(g.id(AcceptNode{}), g.id(ANode{s, s + 1, 0})));
        CHECK(gr.adjacent(g.id(AcceptNode{}), rule));

        const auto rg = build(m, "", Variant::reject);
        CHECK(rg.graph()->adjacent(rg.id(RejectNode{}), rg.id(ANode{s, s + 1, 0})));
        CHECK(rg.graph()->adjacent(rg.id(RejectNode{}), rg.id(ANode{s, s + 1, 2})));
        CHECK_FALSE(rg.graph()->adjacent(rg.id(RejectNode{}), rg.id(ANode{s, s + 1, 1})));

        // punishers reach every later index except their target
        const NodeId y = g.id(PunishNode{0, 5});
        CHECK(gr.adjacent(y, g.layer_nodes(0)[0]));
        CHECK_FALSE(gr.adjacent(y, g.layer_nodes(5)[0]));
        CHECK(gr.adjacent(y, g.layer_nodes(6)[0]));
        CHECK(gr.adjacent(y, g.id(PunishNode{4, 9})));
        CHECK_FALSE(gr.adjacent(y, g.id(PunishNode{5, 9})));
        CHECK(gr.adjacent(y, rule));
        CHECK_FALSE(gr.adjacent(g.id(PunishNode{0, g.layout().rounds}), rule));
    }

    TEST_CASE("head rules leaving the tape are omitted") {
        const auto m = fixture("m_bit0");  // its absorbing states move left
        const auto g = build(m, "", Variant::accept);
        const std::size_t s = g.layout().s;
        for (NodeId v = 0; v < g.size(); ++v) {
            const auto* r = std::get_if<TransRule>(&g.label(v));
            if (!r || r->target.offset != s) continue;
            const long long to = static_cast<long long>(r->head) + m.rule(r->bit, r->state, static_cast<atm::Symbol>(r->symbol)).move;
            CHECK(to >= 0);
            CHECK(to < static_cast<long long>(s));
        }
        CHECK_FALSE(g.contains(TransRule{0, 0, 1, 0, 0, 0, ANode{1, s, 0}}));
    }

    TEST_CASE("determinism and codec") {
        for (const auto& name : fixtures) {
            CAPTURE(name);
            const auto m = fixture(name);
            const auto a = build(m, "", Variant::reject);
            const auto b = build(m, "", Variant::reject);
            CHECK(io::serialize_graph_json(*a.graph()) == io::serialize_graph_json(*b.graph()));
            CHECK(a.sidecar().dump() == b.sidecar().dump());
            CHECK(a.to_dot() == b.to_dot());
        }
        const auto g = build(fixture("m_flip"), "", Variant::accept);
        CHECK(g.label(0) == NodeLabel{PathNode{0, 0}});
        for (NodeId v = 0; v < g.size(); ++v) {
            CHECK(g.id(g.label(v)) == v);
            CHECK(label_from_json(label_to_json(g.label(v), g.layout().s)) == g.label(v));
        }
        CHECK(code_of([&] { g.label(static_cast<NodeId>(g.size())); }) == Errc::unknown_id);
        CHECK(code_of([&] { g.id(PathNode{7, 0}); }) == Errc::unknown_id);
        CHECK(code_of([] { label_from_json({{"type", "wat"}}); }) == Errc::malformed_input);

        const auto side = g.sidecar();
        CHECK(side["layout"]["T"] == 25);
        CHECK(side["labels"]["0"]["type"] == "path");
        CHECK(side["labels"].size() == g.size());
    }

    TEST_CASE("legitimacy predicates") {
        const auto g = build(fixture("m_yes"), "", Variant::accept);
        const auto start = g.start();
        CHECK(is_k_legitimate(start, g, 0));
        for (NodeId v : g.layer_nodes(0)) {
            const auto p = start.option(v);
            CHECK(is_k_legitimate(p, g, 1));
            for (NodeId y = 0; y < g.size(); ++y)
                if (std::holds_alternative<PunishNode>(g.label(y)) && g.index(y) == 0) CHECK_FALSE(p.has(y));
        }
        const auto missing = start.option(g.layer_nodes(5)[0]);
        CHECK_FALSE(is_k_legitimate(missing, g, 3));

        CHECK(is_sleg({}, g));
        const MoveSequence ok{g.id(PathNode{0, 1})};
        CHECK(is_sleg(ok, g));
        const MoveSequence wrong{g.id(ANode{0, 0, 0})};
        CHECK_FALSE(is_sleg(wrong, g));
    }

    TEST_CASE("sequence utilities") {
        const MoveSequence a0{10}, a{10, 11}, b{20};
        CHECK(merge(a0, {}) == MoveSequence{10});
        CHECK(merge(a, b) == MoveSequence{10, 20, 11});
        CHECK(merge({}, {}).empty());
        CHECK(code_of([&] { merge(b, a); }) == Errc::length_mismatch);
        CHECK(aseq(MoveSequence{1, 2, 3}) == MoveSequence{1, 3});
        CHECK(aseq({}).empty());
        CHECK(aseq(merge(a, b)) == a);

        const std::vector<ANode> round{{0, 0, 1}, {0, 1, 2}, {0, 2, 0}, {0, 3, 0}};
        CHECK(conf_of(round, 2) == atm::Configuration{0, 0, {1, 2}});
        const std::vector<ANode> no_head{{0, 0, 1}, {0, 1, 2}, {0, 3, 0}};
        CHECK(code_of([&] { conf_of(no_head, 2); }) == Errc::malformed_round);
        const std::vector<ANode> two_states{{0, 0, 1}, {0, 1, 2}, {0, 3, 0}, {0, 3, 1}};
        CHECK(code_of([&] { conf_of(two_states, 2); }) == Errc::malformed_round);
    }

    TEST_CASE("computation predicates") {
        const auto m = fixture("m_flip");
        const auto g = build(m, "", Variant::accept);
        const atm::PathBits path{1, 0};
        const auto full = verify::legit_prefix(g, m, "", path, g.layout().rounds);
        REQUIRE(full);
        const auto alice = aseq(std::span(*full).subspan(g.layout().s));
        CHECK(alice.size() == 12);
        CHECK(computation_predicate(alice, path, m, "", g, CompMode::comp));
        CHECK(computation_predicate(alice, path, m, "", g, CompMode::acomp) == atm::classify_run(m, "", path));
        CHECK(computation_predicate(alice, path, m, "", g, CompMode::rcomp) != atm::classify_run(m, "", path));

        // every prefix is prefix-consistent, a perturbed tape symbol is not
        for (std::size_t k = 0; k <= alice.size(); ++k)
            CHECK(computation_predicate(std::span(alice).first(k), path, m, "", g, CompMode::pcomp));
        auto bad = alice;
        const auto cell = std::get<ANode>(g.label(bad[4]));
        REQUIRE(cell.round == 1);
        bad[4] = g.id(ANode{1, 0, (cell.value + 1) % 3});
        CHECK_FALSE(computation_predicate(bad, path, m, "", g, CompMode::comp));
        CHECK_FALSE(computation_predicate(std::span(bad).first(5), path, m, "", g, CompMode::pcomp));
        CHECK_FALSE(computation_predicate(std::span(alice).first(6), path, m, "", g, CompMode::comp));
        CHECK(code_of([&] { computation_predicate(alice, {1}, m, "", g, CompMode::comp); }) == Errc::length_mismatch);

        const auto yes = fixture("m_yes");
        const auto gy = build(yes, "1", Variant::accept);
        for (const auto& p : verify::all_paths(2)) {
            const auto run = verify::legit_prefix(gy, yes, "1", p, gy.layout().rounds);
            REQUIRE(run);
            CHECK(computation_predicate(aseq(std::span(*run).subspan(2)), p, yes, "1", gy, CompMode::acomp));
        }
    }

    TEST_CASE("witness shapes on the always-accepting machine") {
        const auto m = fixture("m_yes");
        const auto ga = build(m, "1", Variant::accept);
        Engine ea(ga.graph());
        for (std::uint8_t h = 0; h < 2; ++h) {
            const auto w = witness_accept(ga, ea, {h});
            REQUIRE(w.path.size() == 3);
            CHECK(w.path[1] == ga.id(PathNode{1, h}));
            CHECK(w.adversary.size() == 1 + ga.bob_nodes().size());
            CHECK(w.comp_play.size() == 2 * w.adversary.size() + 1);
            for (std::size_t k = 0; k < w.adversary.size(); ++k) CHECK(w.comp_play[2 * k + 1] == w.adversary[k]);
            REQUIRE(w.bits);
            CHECK((*w.bits)[1] == h);
            CHECK(is_sleg(w.comp_play, ga));
            CHECK(computation_predicate(w.comp, *w.bits, m, "1", ga, CompMode::acomp));
        }
        CHECK(code_of([&] { witness_accept(ga, ea, {0, 1}); }) == Errc::length_mismatch);
    }
}
