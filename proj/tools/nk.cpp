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

#include <cstdlib>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "nk/graph_io.hpp"
#include "nk/grundy.hpp"
#include "nk/reduction.hpp"
#include "nk/service.hpp"
#include "nk/verify.hpp"

namespace {

using nlohmann::json;
using namespace nk;

constexpr int usage_error = 2;
constexpr int computation_error = 1;

struct Options {
    std::string graph, machine, input, variant = "A";
    std::string moves;
    std::size_t budget_nodes = Budget::default_sg_nodes;
    std::optional<long> budget_ms;
    bool json_out = false;
    bool win_only = false;

    std::string out, dot, sidecar;
    std::string suite;
    std::string role;
    bool hints = false;

    int port = 8080;
    std::string host = "127.0.0.1";
    std::string static_dir, journal;
};

struct Usage : std::runtime_error {
    using std::runtime_error::runtime_error;
};

Budget budget_of(const Options& o) {
    Budget b;
    b.sg_nodes = o.budget_nodes;
    if (o.budget_ms) b.time = std::chrono::milliseconds(*o.budget_ms);
    return b;
}

struct Loaded {
    std::shared_ptr<const GroundGraph> graph;
    std::optional<reduction::ReductionGraph> red;
};

Loaded load(const Options& o) {
    if (!o.graph.empty() && !o.machine.empty()) throw Usage("give either --graph or --machine, not both");
    if (!o.graph.empty()) return {std::make_shared<const GroundGraph>(io::load_graph_file(o.graph)), std::nullopt};
    if (!o.machine.empty()) {
        auto red = reduction::build(atm::load_machine_file(o.machine), o.input, reduction::parse_variant(o.variant));
        auto g = red.graph();
        return {g, std::move(red)};
    }
    throw Usage("a graph (-g) or a machine (-m) is required");
}

MoveSequence parse_moves(const std::string& text) {
    MoveSequence out;
    std::stringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
        if (item.empty()) continue;
        try {
            std::size_t used = 0;
            const long v = std::stol(item, &used);
            if (used != item.size() || v < 0) throw std::invalid_argument(item);
            out.push_back(static_cast<NodeId>(v));
        } catch (const std::exception&) {
            throw Usage("--moves expects comma-separated node ids, got '" + item + "'");
        }
    }
    return out;
}

Position start_position(const Loaded& l, const Options& o) {
    Position p(l.graph);
    for (NodeId v : parse_moves(o.moves)) p = p.option(v);
    return p;
}

int cmd_sg(const Options& o) {
    const auto l = load(o);
    const auto p = start_position(l, o);
    Engine e(l.graph, budget_of(o));
    if (o.win_only) {
        const bool w = e.first_player_wins(p);
        if (o.json_out)
            std::cout << json{{"first_player_wins", w}, {"alive", p.alive().count()}}.dump() << '\n';
        else
            std::cout << (w ? "win" : "loss") << '\n';
        return 0;
    }
    const auto v = e.sg(p);
    if (o.json_out)
        std::cout << json{{"sg", v}, {"alive", p.alive().count()}}.dump() << '\n';
    else
        std::cout << v << '\n';
    return 0;
}

int cmd_win(Options o) {
    o.win_only = true;
    return cmd_sg(o);
}

int cmd_tau(const Options& o) {
    const auto l = load(o);
    const auto p = start_position(l, o);
    Engine e(l.graph, budget_of(o));
    const auto t = e.tau(p);
    if (o.json_out)
        std::cout << json{{"node", t.node}, {"sentinel", t.sentinel}}.dump() << '\n';
    else if (t.sentinel)
        std::cout << "none (sentinel " << t.node << ")\n";
    else
        std::cout << t.node << '\n';
    return 0;
}

std::string node_name(const Loaded& l, NodeId v) {
    if (!l.red) return std::to_string(v);
    return std::to_string(v) + " [" + reduction::label_name(l.red->label(v), l.red->layout().s) + "]";
}

int cmd_play(const Options& o) {
    const auto l = load(o);
    const Budget budget = budget_of(o);
    Engine e(l.graph, budget);
    Position pos(l.graph);
    MoveSequence history;

    Player human;
    if (o.role.empty()) {
        human = e.first_player_wins(pos) ? Player::bob : Player::alice;
    } else if (o.role == "alice" || o.role == "bob") {
        human = o.role == "alice" ? Player::alice : Player::bob;
    } else {
        throw Usage("--role must be alice or bob");
    }
    std::cout << "You are " << to_string(human) << "; the engine plays " << to_string(human == Player::alice ? Player::bob : Player::alice)
              << ". Commands: a node id, 'hint', 'swap' (before the first move), 'quit'.\n";

    auto to_move = [&] { return history.size() % 2 == 0 ? Player::alice : Player::bob; };
    std::string line;
    while (!pos.empty()) {
        if (to_move() != human) {
            NodeId pick = static_cast<NodeId>(pos.alive().first());
            std::string note;
            try {
                const auto t = e.tau(pos);
                if (t.sentinel)
                    note = " (no winning reply)";
                else
                    pick = t.node;
            } catch (const Error& err) {
                if (err.code() != Errc::budget_exceeded) throw;
                note = " (unverified: budget spent)";
            }
            pos = pos.option(pick);
            history.push_back(pick);
            std::cout << "engine plays " << node_name(l, pick) << note << '\n';
            continue;
        }
        std::cout << "alive:";
        pos.alive().for_each([&](NodeId v) { std::cout << ' ' << v; });
        std::cout << "\n" << to_string(human) << "> " << std::flush;
        if (!std::getline(std::cin, line)) {
            std::cout << "\n";
            return 0;
        }
        const auto first = line.find_first_not_of(" \t\r");
        const auto last = line.find_last_not_of(" \t\r");
        const std::string cmd = first == std::string::npos ? "" : line.substr(first, last - first + 1);
        if (cmd.empty()) continue;
        if (cmd == "quit" || cmd == "q") return 0;
        if (cmd == "swap") {
            if (!history.empty()) {
                std::cout << "roles can only be swapped before the first move\n";
                continue;
            }
            human = human == Player::alice ? Player::bob : Player::alice;
            std::cout << "You are now " << to_string(human) << ".\n";
            continue;
        }
        if (cmd == "hint" || cmd == "h") {
            if (pos.alive().count() > budget.sg_nodes) {
                std::cout << "hints are off above " << budget.sg_nodes << " alive nodes\n";
                continue;
            }
            try {
                pos.alive().for_each([&](NodeId v) { std::cout << "  " << v << ": sg " << e.sg(pos.option(v)) << '\n'; });
            } catch (const Error& err) {
                std::cout << "hints unavailable: " << err.detail() << '\n';
            }
            continue;
        }
        long v = -1;
        try {
            std::size_t used = 0;
            v = std::stol(cmd, &used);
            if (used != cmd.size()) v = -1;
        } catch (const std::exception&) {
            v = -1;
        }
        if (v < 0 || static_cast<std::size_t>(v) >= l.graph->node_count() || !pos.has(static_cast<NodeId>(v))) {
            std::cout << "'" << cmd << "' is not an available node, try again\n";
            continue;
        }
        pos = pos.option(static_cast<NodeId>(v));
        history.push_back(static_cast<NodeId>(v));
    }
    const auto w = winner(history);
    std::cout << "game over after " << history.size() << " moves: " << to_string(w) << " wins"
              << (w == human ? " (you)" : " (engine)") << '\n';
    return 0;
}

int cmd_reduce(const Options& o) {
    if (o.machine.empty()) throw Usage("reduce needs --machine");
    const auto m = atm::load_machine_file(o.machine);
    const auto red = reduction::build(m, o.input, reduction::parse_variant(o.variant));
    const auto graph_text = io::serialize_graph_json(*red.graph());
    if (o.out.empty()) {
        std::cout << graph_text << '\n';
    } else {
        io::write_file(o.out, graph_text + "\n");
        std::string side = o.sidecar;
        if (side.empty()) {
            side = o.out;
            if (side.size() > 5 && side.compare(side.size() - 5, 5, ".json") == 0) side.resize(side.size() - 5);
            side += ".labels.json";
        }
        io::write_file(side, red.sidecar().dump(1) + "\n");
        if (o.json_out) {
            std::cout << json{{"graph", o.out},
                              {"sidecar", side},
                              {"nodes", red.size()},
                              {"edges", red.graph()->edge_count()},
                              {"layout", red.layout().to_json()}}
                             .dump()
                      << '\n';
        } else {
            std::cout << "wrote " << o.out << " (" << red.size() << " nodes, " << red.graph()->edge_count()
                      << " edges) and " << side << '\n';
        }
    }
    if (!o.dot.empty()) io::write_file(o.dot, red.to_dot());
    return 0;
}

int cmd_verify(const Options& o) {
    verify::SuiteReport r;
    if (o.suite == "small-graphs") {
        r = verify::check_small_graphs();
    } else if (o.suite == "strategy") {
        r = verify::check_strategy();
    } else {
        if (o.machine.empty()) throw Usage("suite '" + o.suite + "' needs --machine");
        const verify::Fixture f{o.machine, atm::load_machine_file(o.machine), o.input};
        if (o.suite == "legitimacy")
            r = verify::check_legitimacy(f);
        else if (o.suite == "complement")
            r = verify::check_complement(f);
        else
            r = verify::check_end_to_end(f);
    }
    if (o.json_out) {
        std::cout << r.to_json().dump(1) << '\n';
    } else {
        std::cout << r.name << ": " << (r.passed() ? "pass" : r.inconclusive ? "INCONCLUSIVE" : "FAIL") << " ("
                  << r.cases << " cases, " << r.failures.size() << " failures, " << r.wall.count() << " ms)\n";
        if (!r.note.empty()) std::cout << "  " << r.note << '\n';
        for (std::size_t i = 0; i < r.failures.size() && i < 10; ++i) std::cout << "  " << r.failures[i].what << '\n';
    }
    return r.passed() ? 0 : computation_error;
}

int cmd_serve(const Options& o) {
    service::Config cfg;
    cfg.budget = budget_of(o);
    if (!o.budget_ms) cfg.budget.time = std::chrono::milliseconds(2000);
    if (!o.static_dir.empty()) cfg.static_dir = o.static_dir;
    if (!o.journal.empty()) cfg.journal_path = o.journal;
    service::GameService svc(cfg);
    service::HttpServer http(svc);
    const int port = http.bind(o.host, o.port);
    if (port < 0) {
        std::cerr << "nk: cannot bind " << o.host << ":" << o.port << '\n';
        return computation_error;
    }
    std::cout << "serving on http://" << o.host << ":" << port << "/api/v1" << std::endl;
    return http.listen() ? 0 : computation_error;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Node Kayles games, Grundy values and machine reductions"};
    app.require_subcommand(1);
    Options o;
    if (const char* env = std::getenv("NK_BUDGET_NODES")) {
        try {
            o.budget_nodes = std::stoul(env);
        } catch (const std::exception&) {
            std::cerr << "nk: NK_BUDGET_NODES must be a positive integer\n";
            return usage_error;
        }
    }

    auto source = [&](CLI::App* c) {
        c->add_option("-g,--graph", o.graph, "graph file (JSON or text)");
        c->add_option("-m,--machine", o.machine, "machine JSON; builds a reduction graph");
        c->add_option("-x,--input", o.input, "machine input over {0,1}");
        c->add_option("--variant", o.variant, "reduction variant")->check(CLI::IsMember({"A", "R"}));
    };
    auto budgets = [&](CLI::App* c) {
        c->add_option("--budget-nodes", o.budget_nodes, "alive-node ceiling for Grundy values")
            ->check(CLI::Range(1, 1 << 20));
        c->add_option("--budget-ms", o.budget_ms, "time budget per search")->check(CLI::Range(1, 86400000));
        c->add_flag("--json", o.json_out, "machine-readable output");
    };

    auto* sg = app.add_subcommand("sg", "Grundy value of a position");
    source(sg);
    budgets(sg);
    sg->add_option("--moves", o.moves, "comma-separated moves played first");
    sg->add_flag("--win-only", o.win_only, "only decide whether the first player wins");

    auto* win = app.add_subcommand("win", "does the first player win?");
    source(win);
    budgets(win);
    win->add_option("--moves", o.moves, "comma-separated moves played first");

    auto* tau = app.add_subcommand("tau", "least move to a zero position");
    source(tau);
    budgets(tau);
    tau->add_option("--moves", o.moves, "comma-separated moves played first");

    auto* play = app.add_subcommand("play", "play against the engine in the terminal");
    source(play);
    budgets(play);
    play->add_option("--role", o.role, "alice or bob (default: the losing side of the start position)");

    auto* reduce = app.add_subcommand("reduce", "build the reduction graph of a machine and input");
    reduce->add_option("-m,--machine", o.machine, "machine JSON")->required();
    reduce->add_option("-x,--input", o.input, "machine input over {0,1}");
    reduce->add_option("--variant", o.variant, "A or R")->check(CLI::IsMember({"A", "R"}));
    reduce->add_option("-o,--output", o.out, "graph JSON path (stdout if omitted)");
    reduce->add_option("--sidecar", o.sidecar, "label sidecar path (default <output>.labels.json)");
    reduce->add_option("--dot", o.dot, "also write Graphviz DOT here");
    reduce->add_flag("--json", o.json_out, "machine-readable summary");

    auto* ver = app.add_subcommand("verify", "run a verification suite");
    ver->add_option("--suite", o.suite, "suite name")
        ->required()
        ->check(CLI::IsMember({"small-graphs", "strategy", "legitimacy", "complement", "end-to-end"}));
    ver->add_option("-m,--machine", o.machine, "machine JSON for reduction suites");
    ver->add_option("-x,--input", o.input, "machine input");
    ver->add_flag("--json", o.json_out, "report as JSON");

    auto* serve = app.add_subcommand("serve", "start the HTTP game service");
    budgets(serve);
    serve->add_option("--port", o.port, "port, 0 for any")->check(CLI::Range(0, 65535));
    serve->add_option("--host", o.host, "bind address");
    serve->add_option("--static", o.static_dir, "directory served at /");
    serve->add_option("--journal", o.journal, "append-only JSON lines log of session events");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return usage_error;
    }

    try {
        if (*sg) return cmd_sg(o);
        if (*win) return cmd_win(o);
        if (*tau) return cmd_tau(o);
        if (*play) return cmd_play(o);
        if (*reduce) return cmd_reduce(o);
        if (*ver) return cmd_verify(o);
        if (*serve) return cmd_serve(o);
    } catch (const Usage& e) {
        std::cerr << "nk: " << e.what() << '\n';
        return usage_error;
    } catch (const Error& e) {
        std::cerr << "nk: " << e.what() << '\n';
        return computation_error;
    }
    return usage_error;
}
