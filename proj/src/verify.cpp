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

#include "nk/verify.hpp"

#include <algorithm>
#include <random>
#include <sstream>

#include "nk/graph_io.hpp"

namespace nk::verify {

using nlohmann::json;
namespace rd = nk::reduction;

namespace {

constexpr std::size_t naive_limit = 20;

std::int32_t naive_rec(std::uint32_t mask, const std::vector<std::uint32_t>& closed, std::vector<std::int32_t>& memo) {
    if (mask == 0) return 0;
    if (memo[mask] >= 0) return memo[mask];
    std::vector<bool> seen(closed.size() + 2, false);
    for (std::size_t v = 0; v < closed.size(); ++v) {
        if (!(mask >> v & 1u)) continue;
        const auto g = naive_rec(mask & ~closed[v], closed, memo);
        if (static_cast<std::size_t>(g) < seen.size()) seen[g] = true;
    }
    std::int32_t k = 0;
    while (seen[k]) ++k;
    return memo[mask] = k;
}

class Stopwatch {
public:
    std::chrono::milliseconds elapsed() const {
        return std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start_);
    }

private:
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

json repro(const GroundGraph& g, std::span<const NodeId> moves = {}) {
    return json{{"graph", io::graph_to_json(g)}, {"moves", std::vector<NodeId>(moves.begin(), moves.end())}};
}

std::string bits_str(const atm::PathBits& p) {
    std::string s;
    for (auto b : p) s += static_cast<char>('0' + b);
    return s;
}

}  // namespace

GrundyValue naive_sg(const GroundGraph& g, const NodeSet& alive) {
    std::vector<NodeId> ids = alive.to_vector();
    if (ids.size() > naive_limit)
        throw Error(Errc::too_large, std::to_string(ids.size()) + " nodes exceed the naive oracle limit of " +
                                         std::to_string(naive_limit));
    std::vector<std::uint32_t> closed(ids.size(), 0);
    for (std::size_t a = 0; a < ids.size(); ++a)
        for (std::size_t b = 0; b < ids.size(); ++b)
            if (a == b || g.adjacent(ids[a], ids[b])) closed[a] |= 1u << b;
    std::vector<std::int32_t> memo(std::size_t{1} << ids.size(), -1);
    return static_cast<GrundyValue>(naive_rec((1u << ids.size()) - 1, closed, memo));
}

GrundyValue naive_sg(const GroundGraph& g) { return naive_sg(g, g.declared()); }

GroundGraph graph_from_mask(std::size_t n, std::uint64_t mask) {
    std::vector<Edge> edges;
    std::size_t bit = 0;
    for (NodeId u = 0; u < n; ++u)
        for (NodeId v = u + 1; v < n; ++v, ++bit)
            if (mask >> bit & 1u) edges.emplace_back(u, v);
    return GroundGraph::from_edges(n, edges);
}

std::vector<GroundGraph> all_graphs(std::size_t n) {
    const std::size_t pairs = n * (n - (n > 0 ? 1 : 0)) / 2;
    std::vector<GroundGraph> out;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << pairs); ++mask) out.push_back(graph_from_mask(n, mask));
    return out;
}

std::vector<GroundGraph> random_graphs(std::size_t count, std::size_t min_n, std::size_t max_n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::size_t> size(min_n, max_n);
    std::uniform_real_distribution<double> density(0.25, 0.6);
    std::vector<GroundGraph> out;
    for (std::size_t i = 0; i < count; ++i) {
        const auto n = size(rng);
        std::bernoulli_distribution coin(density(rng));
        std::vector<Edge> edges;
        for (NodeId u = 0; u < n; ++u)
            for (NodeId v = u + 1; v < n; ++v)
                if (coin(rng)) edges.emplace_back(u, v);
        out.push_back(GroundGraph::from_edges(n, edges));
    }
    return out;
}

json SuiteReport::to_json() const {
    json fails = json::array();
    for (const auto& f : failures) fails.push_back({{"what", f.what}, {"repro", f.repro}});
    return json{{"suite", name},   {"cases", cases},         {"passed", passed()},
                {"inconclusive", inconclusive}, {"note", note}, {"wall_ms", wall.count()},
                {"failures", fails}};
}

std::string check_aws(const Position& start, Engine& e, std::span<const NodeId> bob) {
    Position cur = start;
    const std::size_t width = start.ground().node_count();
    for (std::size_t turn = 0;; ++turn) {
        const auto t = e.tau(cur);
        if (t.sentinel || !cur.has(t.node)) return "tau has no zero option at Alice's turn " + std::to_string(turn);
        cur = cur.option(t.node);
        if (naive_sg(cur.ground(), cur.alive()) != 0)
            return "tau move " + std::to_string(t.node) + " leaves a nonzero position";
        if (cur.empty()) return {};
        if (turn == bob.size()) return "adversary list ran out before the game ended";
        const NodeId b = bob[turn];
        if (b >= width || !cur.has(b)) return {};  // the list stops being a legal play here
        cur = cur.option(b);
        if (cur.empty()) return "Bob emptied the graph";
    }
}

std::string check_bws(const Position& start, Engine& e, std::span<const NodeId> alice) {
    Position cur = start;
    const std::size_t width = start.ground().node_count();
    for (std::size_t turn = 0;; ++turn) {
        if (cur.empty()) return {};
        if (turn == alice.size()) return "adversary list ran out before the game ended";
        const NodeId a = alice[turn];
        if (a >= width || !cur.has(a)) return {};
        cur = cur.option(a);
        if (cur.empty()) return "Alice emptied the graph";
        const auto t = e.tau(cur);
        if (t.sentinel || !cur.has(t.node)) return "tau has no zero option at Bob's turn " + std::to_string(turn);
        cur = cur.option(t.node);
        if (naive_sg(cur.ground(), cur.alive()) != 0)
            return "tau move " + std::to_string(t.node) + " leaves a nonzero position";
    }
}

SuiteReport check_small_graphs(std::size_t max_n, std::size_t random_count, std::uint64_t seed) {
    Stopwatch clock;
    SuiteReport r;
    r.name = "small-graphs";
    auto check = [&](const GroundGraph& graph) {
        auto g = std::make_shared<const GroundGraph>(graph);
        Engine e(g);
        const Position p(g);
        const auto want = naive_sg(*g);
        const auto got = e.sg(p);
        Engine fresh(g);
        const bool wins = fresh.first_player_wins(p);
        ++r.cases;
        if (got != want)
            r.failures.push_back({"engine sg " + std::to_string(got) + " != naive " + std::to_string(want), repro(*g)});
        if (wins != (want != 0))
            r.failures.push_back({"first_player_wins disagrees with naive sg " + std::to_string(want), repro(*g)});
    };
    for (std::size_t n = 0; n <= max_n; ++n)
        for (const auto& g : all_graphs(n)) check(g);
    for (const auto& g : random_graphs(random_count, 6, 12, seed)) check(g);
    r.wall = clock.elapsed();
    return r;
}

SuiteReport check_strategy(std::size_t max_n) {
    Stopwatch clock;
    SuiteReport r;
    r.name = "strategy";
    for (std::size_t n = 0; n <= max_n; ++n) {
        for (const auto& graph : all_graphs(n)) {
            auto g = std::make_shared<const GroundGraph>(graph);
            Engine e(g);
            const Position p(g);
            const bool alice = naive_sg(*g) != 0;
            // Adversary lists: length floor(n/2) for Bob, ceil(n/2) for Alice,
            // entries drawn from 0..n+1 so that illegal moves are covered too.
            const std::size_t len = alice ? n / 2 : (n + 1) / 2;
            const std::size_t base = n + 2;
            std::vector<NodeId> list(len, 0);
            std::size_t total = 1;
            for (std::size_t i = 0; i < len; ++i) total *= base;
            for (std::size_t code = 0; code < total; ++code) {
                std::size_t c = code;
                for (std::size_t i = 0; i < len; ++i, c /= base) list[i] = static_cast<NodeId>(c % base);
                const auto why = alice ? check_aws(p, e, list) : check_bws(p, e, list);
                ++r.cases;
                if (!why.empty()) r.failures.push_back({(alice ? "AWS: " : "BWS: ") + why, repro(*g, list)});
            }
        }
    }
    r.wall = clock.elapsed();
    return r;
}

std::vector<atm::PathBits> all_paths(std::size_t n) {
    std::vector<atm::PathBits> out;
    for (std::size_t code = 0; code < (std::size_t{1} << n); ++code) {
        atm::PathBits p(n);
        for (std::size_t i = 0; i < n; ++i) p[i] = static_cast<std::uint8_t>(code >> (n - 1 - i) & 1u);
        out.push_back(std::move(p));
    }
    return out;
}

std::optional<MoveSequence> legit_prefix(const rd::ReductionGraph& g, const atm::AtmSpec& m, std::string_view x,
                                         const atm::PathBits& path, std::size_t len) {
    std::vector<atm::Configuration> confs;
    try {
        confs = atm::run(m, x, path);
    } catch (const Error& e) {
        if (e.code() == Errc::head_out_of_range) return std::nullopt;
        throw;
    }
    const auto& lay = g.layout();
    MoveSequence out;
    for (std::size_t k = 0; k < len && k < lay.rounds; ++k) {
        const auto& d = lay.schedule[k];
        switch (d.kind) {
        case rd::LayerKind::path:
            out.push_back(g.id(rd::PathNode{d.round, path[d.round]}));
            break;
        case rd::LayerKind::alice: {
            const auto& c = confs[d.round];
            const std::size_t v = d.offset < lay.s ? c.tape[d.offset] : d.offset == lay.s ? c.head : c.state;
            out.push_back(g.id(rd::ANode{d.round, d.offset, v}));
            break;
        }
        case rd::LayerKind::bob:
            out.push_back(g.id(rd::BobNode{d.round, d.offset}));
            break;
        }
    }
    return out;
}

SuiteReport check_legitimacy(const Fixture& f, std::vector<std::size_t> rounds) {
    Stopwatch clock;
    SuiteReport r;
    r.name = "legitimacy";
    for (auto variant : {rd::Variant::accept, rd::Variant::reject}) {
        const auto g = rd::build(f.machine, f.input, variant);
        const auto& lay = g.layout();
        const std::string tag = f.name + "/" + std::string(rd::to_string(variant));
        std::vector<std::size_t> ks = rounds;
        if (ks.empty()) ks = {0, 1, lay.s, lay.s + 3};
        Engine e(g.graph());

        for (const auto& path : all_paths(lay.s)) {
            auto full = legit_prefix(g, f.machine, f.input, path, lay.rounds);
            if (!full) continue;
            if (!rd::is_sleg(*full, g)) r.failures.push_back({tag + ": run prefix is not schedule-legitimate", repro(*g.graph(), *full)});

            for (std::size_t k : ks) {
                const std::span<const NodeId> prefix(full->data(), k);
                const Position p = g.start().play(prefix);
                if (!rd::is_k_legitimate(p, g, k)) {
                    r.failures.push_back({tag + ": prefix of length " + std::to_string(k) + " is not legitimate",
                                          repro(*g.graph(), prefix)});
                    continue;
                }
                for (NodeId v : g.layer_nodes(k)) {
                    ++r.cases;
                    if (!rd::is_k_legitimate(p.option(v), g, k + 1))
                        r.failures.push_back({tag + ": layer move " + std::to_string(v) + " breaks legitimacy",
                                              repro(*g.graph(), prefix)});
                }
                p.alive().for_each([&](NodeId v) {
                    if (g.is_legitimate(v) && g.index(v) == k) return;
                    ++r.cases;
                    const Position cheat = p.option(v);
                    MoveSequence moves(prefix.begin(), prefix.end());
                    moves.push_back(v);
                    bool refuted = false;
                    cheat.alive().for_each([&](NodeId u) {
                        if (!refuted && cheat.alive().subset_of(g.graph()->closed_neighborhood(u))) refuted = true;
                    });
                    if (!refuted)
                        r.failures.push_back({tag + ": cheat " + rd::label_name(g.label(v), lay.s) + " at round " +
                                                  std::to_string(k) + " has no emptying reply",
                                              repro(*g.graph(), moves)});
                    else if (!e.first_player_wins(cheat))
                        r.failures.push_back({tag + ": search says cheat " + std::to_string(v) + " is not refuted",
                                              repro(*g.graph(), moves)});
                });
            }

            // Surviving rules for an Alice layer vanish exactly when her move
            // is the one the run forces.
            for (std::size_t k = lay.s; k < lay.rounds; k += 2) {
                const std::span<const NodeId> prefix(full->data(), k);
                const Position p = g.start().play(prefix);
                const auto& d = lay.schedule[k];
                MoveSequence alice = rd::aseq(prefix.subspan(lay.s));
                for (NodeId a : g.layer_nodes(k)) {
                    ++r.cases;
                    alice.push_back(a);
                    const bool consistent =
                        rd::computation_predicate(alice, path, f.machine, f.input, g, rd::CompMode::pcomp);
                    const bool cleared = rd::surviving_rules(p.option(a), g, d.round, d.offset).empty();
                    alice.pop_back();
                    if (consistent != cleared)
                        r.failures.push_back({tag + ": rule elimination mismatch at " + rd::label_name(g.label(a), lay.s) +
                                                  " on path " + bits_str(path),
                                              repro(*g.graph(), prefix)});
                }
            }
        }
    }
    r.wall = clock.elapsed();
    return r;
}

SuiteReport check_complement(const Fixture& f) {
    Stopwatch clock;
    SuiteReport r;
    r.name = "complement";
    const auto ga = rd::build(f.machine, f.input, rd::Variant::accept);
    const auto gr = rd::build(f.machine, f.input, rd::Variant::reject);
    Engine ea(ga.graph()), er(gr.graph());
    const std::size_t s = ga.layout().s;
    try {
        for (const auto& path : all_paths(s)) {
            MoveSequence pa, pr;
            for (std::size_t i = 0; i < s; ++i) {
                pa.push_back(ga.id(rd::PathNode{i, path[i]}));
                pr.push_back(gr.id(rd::PathNode{i, path[i]}));
            }
            const bool a = ea.first_player_wins(ga.start().play(pa));
            const bool b = er.first_player_wins(gr.start().play(pr));
            ++r.cases;
            if (a == b)
                r.failures.push_back({f.name + ": path " + bits_str(path) + " gives " + (a ? "wins" : "losses") +
                                          " in both variants",
                                      json{{"path", bits_str(path)}}});
            const bool accepts = atm::classify_run(f.machine, f.input, path);
            if (a != accepts)
                r.failures.push_back({f.name + ": G_A after path " + bits_str(path) + " disagrees with the run",
                                      json{{"path", bits_str(path)}}});
        }
    } catch (const Error& e) {
        if (e.code() != Errc::budget_exceeded) throw;
        r.inconclusive = true;
        r.note = e.what();
    }
    r.wall = clock.elapsed();
    return r;
}

namespace {

void check_witness_shape(SuiteReport& r, const std::string& tag, const rd::Witness& w, const atm::PathBits& half,
                         std::size_t path_moves, bool alice_first) {
    const std::size_t want = alice_first ? 2 * path_moves + 1 : 2 * path_moves;
    if (w.path.size() != want)
        r.failures.push_back({tag + ": path length " + std::to_string(w.path.size()) + ", expected " +
                                  std::to_string(want),
                              json{{"path", w.path}}});
    const std::size_t parity = alice_first ? 1 : 0;
    for (std::size_t k = 0; k < w.adversary.size() && 2 * k + parity < w.comp_play.size(); ++k) {
        if (k < path_moves && (2 * k + parity >= w.path.size() || w.path[2 * k + parity] != w.adversary[k]))
            r.failures.push_back({tag + ": path entry " + std::to_string(2 * k + parity) + " is not the adversary's move",
                                  json{{"path", w.path}, {"adversary", w.adversary}}});
        if (alice_first && w.comp_play[2 * k + 1] != w.adversary[k])
            r.failures.push_back({tag + ": play entry " + std::to_string(2 * k + 1) + " is not the adversary's move",
                                  json{{"play", w.comp_play}}});
    }
    if (!w.bits) {
        r.failures.push_back({tag + ": play does not begin with a path", json{{"play", w.comp_play}}});
        return;
    }
    for (std::size_t k = 0; k < half.size(); ++k)
        if ((*w.bits)[2 * k + parity] != half[k])
            r.failures.push_back({tag + ": path bit " + std::to_string(2 * k + parity) + " differs from the half-path",
                                  json{{"bits", bits_str(*w.bits)}}});
}

}  // namespace

SuiteReport check_end_to_end(const Fixture& f, Budget budget) {
    Stopwatch clock;
    SuiteReport r;
    r.name = "end-to-end";
    try {
        const auto ga = rd::build(f.machine, f.input, rd::Variant::accept);
        const auto gr = rd::build(f.machine, f.input, rd::Variant::reject);
        Engine ea(ga.graph(), budget), er(gr.graph(), budget);
        const std::size_t s = ga.layout().s;
        const bool truth = atm::evaluate(f.machine, f.input);
        const bool wins = ea.first_player_wins(ga.start());
        ++r.cases;
        if (wins != truth)
            r.failures.push_back({f.name + ": first_player_wins(G_A) = " + std::to_string(wins) + " but evaluate = " +
                                      std::to_string(truth),
                                  json{}});
        for (const auto& half : all_paths(s / 2)) {
            ++r.cases;
            const std::string tag = f.name + " half " + bits_str(half);
            if (wins) {
                const auto w = rd::witness_accept(ga, ea, half);
                check_witness_shape(r, tag + " (A)", w, half, half.size(), true);
                if (w.bits && !rd::computation_predicate(w.comp, *w.bits, f.machine, f.input, ga, rd::CompMode::acomp))
                    r.failures.push_back({tag + ": Comp_A is not an accepting computation", json{{"comp", w.comp}}});
            } else {
                const auto w = rd::witness_reject(ga, ea, gr, er, half);
                check_witness_shape(r, tag + " (R)", w, half, half.size(), false);
                if (w.bits && !rd::computation_predicate(w.comp, *w.bits, f.machine, f.input, gr, rd::CompMode::rcomp))
                    r.failures.push_back({tag + ": Comp_R is not a rejecting computation", json{{"comp", w.comp}}});
            }
        }
    } catch (const Error& e) {
        if (e.code() != Errc::budget_exceeded) throw;
        r.inconclusive = true;
        r.note = e.what();
    }
    r.wall = clock.elapsed();
    if (budget.time && r.wall > *budget.time) {
        r.inconclusive = true;
        r.note = "wall time exceeded the budget";
    }
    return r;
}

}  // namespace nk::verify
