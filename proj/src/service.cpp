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

#include "nk/service.hpp"

#include <fstream>
#include <random>

#include <httplib.h>

#include "nk/graph_io.hpp"

namespace nk::service {

using nlohmann::json;
using clock_type = std::chrono::steady_clock;

struct GameService::Session {
    Session(std::string id_, std::shared_ptr<const GroundGraph> g, Player human_, Budget budget)
        : id(std::move(id_)), graph(g), pos(g), human(human_), engine(g, budget) {}

    std::mutex mu;
    std::string id;
    std::shared_ptr<const GroundGraph> graph;
    std::optional<reduction::ReductionGraph> reduction;
    Position pos;
    MoveSequence history;
    Player human;
    Engine engine;
    json engine_moves = json::array();

    Player to_move() const { return history.size() % 2 == 0 ? Player::alice : Player::bob; }
    // With no moves left the player to move has lost; this also covers an
    // empty graph at creation.
    bool finished() const { return pos.empty(); }
};

namespace {

Response fail(int status, std::string_view code, const std::string& detail) {
    return {status, json{{"error", code}, {"detail", detail}}};
}

int status_for(Errc code) { return code == Errc::budget_exceeded || code == Errc::too_large ? 507 : 422; }

Response fail(const Error& e) { return fail(status_for(e.code()), to_string(e.code()), e.detail()); }

std::optional<json> parse_body(std::string_view body) {
    try {
        return json::parse(body);
    } catch (const json::parse_error&) {
        return std::nullopt;
    }
}

std::int64_t now_ms() {
    return std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::system_clock::now().time_since_epoch())
        .count();
}

}  // namespace

GameService::GameService(Config cfg) : cfg_(std::move(cfg)) {
    std::random_device rd;
    id_state_ = (static_cast<std::uint64_t>(rd()) << 32) ^ rd() ^ static_cast<std::uint64_t>(now_ms());
}

GameService::~GameService() = default;

std::string GameService::fresh_id() {
    // splitmix64; called with registry_mu_ held
    std::uint64_t z = (id_state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    z ^= z >> 31;
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(z));
    return buf;
}

std::size_t GameService::session_count() const {
    std::lock_guard lock(registry_mu_);
    return sessions_.size();
}

std::shared_ptr<GameService::Session> GameService::find(const std::string& id) const {
    std::lock_guard lock(registry_mu_);
    auto it = sessions_.find(id);
    return it == sessions_.end() ? nullptr : it->second;
}

void GameService::journal(const json& entry) {
    if (!cfg_.journal_path) return;
    std::lock_guard lock(journal_mu_);
    std::ofstream out(*cfg_.journal_path, std::ios::app);
    out << entry.dump() << '\n';
}

json GameService::snapshot(const Session& s) const {
    json j{{"id", s.id},
           {"human_role", to_string(s.human)},
           {"to_move", to_string(s.to_move())},
           {"turn", s.history.size()},
           {"history", s.history},
           {"alive", s.pos.alive().to_vector()},
           {"graph", io::graph_to_json(*s.graph)},
           {"finished", s.finished()},
           {"winner", nullptr},
           {"engine_moves", s.engine_moves}};
    if (s.finished()) j["winner"] = to_string(winner(s.history));
    if (s.reduction) j["reduction"] = s.reduction->sidecar();
    return j;
}

void GameService::engine_turn(Session& s) {
    if (s.finished() || s.to_move() == s.human) return;
    const NodeId lowest = static_cast<NodeId>(s.pos.alive().first());
    json record{{"index", s.history.size()}, {"unverified", false}, {"sentinel", false}};
    NodeId pick = lowest;
    try {
        const auto t = s.engine.tau(s.pos);
        if (t.sentinel)
            record["sentinel"] = true;  // no zero option: any move loses, take the lowest
        else
            pick = t.node;
    } catch (const Error& e) {
        if (e.code() != Errc::budget_exceeded) throw;
        record["unverified"] = true;
    }
    record["node"] = pick;
    s.pos = s.pos.option(pick);
    s.history.push_back(pick);
    s.engine_moves.push_back(record);
    journal({{"session", s.id}, {"event", "move"}, {"by", "engine"}, {"node", pick}, {"ts", now_ms()}});
}

Response GameService::create(std::string_view body) {
    const auto req = parse_body(body);
    if (!req || !req->is_object()) return fail(400, "malformed-input", "request body must be a JSON object");

    Player human = Player::alice;
    if (req->contains("human_role")) {
        const auto& r = (*req)["human_role"];
        if (r == "alice" || r == "Alice")
            human = Player::alice;
        else if (r == "bob" || r == "Bob")
            human = Player::bob;
        else
            return fail(400, "malformed-input", "human_role must be 'alice' or 'bob'");
    }

    std::shared_ptr<const GroundGraph> graph;
    std::optional<reduction::ReductionGraph> red;
    try {
        if (req->contains("graph")) {
            const auto& g = (*req)["graph"];
            if (!g.is_object()) return fail(400, "malformed-input", "'graph' must be an object");
            if (g.contains("nodes") && g["nodes"].is_number_unsigned() && g["nodes"].get<std::size_t>() > cfg_.max_nodes)
                return fail(507, "too-large", "graph exceeds " + std::to_string(cfg_.max_nodes) + " nodes");
            graph = std::make_shared<const GroundGraph>(io::graph_from_json(g));
        } else if (req->contains("reduction")) {
            const auto& r = (*req)["reduction"];
            if (!r.is_object() || !r.contains("machine"))
                return fail(400, "malformed-input", "'reduction' needs a 'machine' object");
            if (r.contains("input") && !r["input"].is_string())
                return fail(400, "malformed-input", "'input' must be a string");
            if (r.contains("variant") && !r["variant"].is_string())
                return fail(400, "malformed-input", "'variant' must be \"A\" or \"R\"");
            const auto m = atm::load_machine(r["machine"]);
            const std::string x = r.value("input", "");
            const auto variant = reduction::parse_variant(r.value("variant", "A"));
            if (const auto n = reduction::expected_counts(m, x).total(); n > cfg_.max_nodes)
                return fail(507, "too-large", "reduction would have " + std::to_string(n) + " nodes");
            red = reduction::build(m, x, variant);
            graph = red->graph();
        } else {
            return fail(400, "malformed-input", "request needs 'graph' or 'reduction'");
        }
        if (graph->node_count() > cfg_.max_nodes)
            return fail(507, "too-large", "graph exceeds " + std::to_string(cfg_.max_nodes) + " nodes");
    } catch (const Error& e) {
        return fail(e);
    } catch (const json::exception& e) {
        return fail(400, "malformed-input", e.what());
    }

    std::shared_ptr<Session> s;
    {
        std::lock_guard lock(registry_mu_);
        auto id = fresh_id();
        while (sessions_.count(id)) id = fresh_id();
        s = std::make_shared<Session>(id, graph, human, cfg_.budget);
        s->reduction = std::move(red);
        sessions_.emplace(id, s);
    }
    std::lock_guard lock(s->mu);
    journal({{"session", s->id}, {"event", "create"}, {"human_role", to_string(human)}, {"ts", now_ms()}});
    engine_turn(*s);
    return {201, json{{"id", s->id}, {"state", snapshot(*s)}}};
}

Response GameService::state(const std::string& id) {
    auto s = find(id);
    if (!s) return fail(404, "unknown-session", "no game with id '" + id + "'");
    std::lock_guard lock(s->mu);
    return {200, snapshot(*s)};
}

Response GameService::move(const std::string& id, std::string_view body) {
    auto s = find(id);
    if (!s) return fail(404, "unknown-session", "no game with id '" + id + "'");
    const auto req = parse_body(body);
    if (!req || !req->is_object() || !req->contains("node") || !(*req)["node"].is_number_integer())
        return fail(400, "malformed-input", "body must be {\"node\": <integer>}");
    const auto node = (*req)["node"].get<long long>();

    std::lock_guard lock(s->mu);
    if (s->finished()) return fail(409, "game-over", "the game has ended");
    if (s->to_move() != s->human) return fail(409, "not-your-turn", "it is the engine's turn");
    if (node < 0 || static_cast<std::size_t>(node) >= s->graph->node_count() || !s->pos.has(static_cast<NodeId>(node)))
        return fail(422, "move-not-available", "node " + std::to_string(node) + " is not available");

    const auto v = static_cast<NodeId>(node);
    s->pos = s->pos.option(v);
    s->history.push_back(v);
    journal({{"session", s->id}, {"event", "move"}, {"by", "human"}, {"node", v}, {"ts", now_ms()}});
    engine_turn(*s);
    return {200, snapshot(*s)};
}

Response GameService::hints(const std::string& id) {
    auto s = find(id);
    if (!s) return fail(404, "unknown-session", "no game with id '" + id + "'");
    std::lock_guard lock(s->mu);

    const auto saved = s->engine.budget();
    const auto deadline = cfg_.budget.time ? std::optional(clock_type::now() + *cfg_.budget.time) : std::nullopt;
    auto remaining = [&]() -> std::optional<std::chrono::milliseconds> {
        if (!deadline) return std::nullopt;
        const auto left = std::chrono::duration_cast<std::chrono::milliseconds>(*deadline - clock_type::now());
        if (left.count() <= 0) throw Error(Errc::budget_exceeded, "hint budget spent");
        return left;
    };
    const auto alive = s->pos.alive().to_vector();
    json out = json::array();

    bool numeric = alive.size() <= cfg_.budget.sg_nodes;
    if (numeric) {
        try {
            for (NodeId v : alive) {
                s->engine.set_budget({saved.sg_nodes, saved.win_nodes, remaining()});
                out.push_back({{"node", v}, {"grundy", s->engine.sg(s->pos.option(v))}});
            }
        } catch (const Error& e) {
            if (e.code() != Errc::budget_exceeded) throw;
            numeric = false;
            out = json::array();
        }
    }
    if (!numeric) {
        try {
            for (NodeId v : alive) {
                s->engine.set_budget({saved.sg_nodes, saved.win_nodes, remaining()});
                // "wins": moving to v leaves the opponent in a lost position
                out.push_back({{"node", v}, {"wins", !s->engine.first_player_wins(s->pos.option(v))}});
            }
        } catch (const Error& e) {
            if (e.code() != Errc::budget_exceeded) throw;
            s->engine.set_budget(saved);
            return {200, json{{"hints", "unavailable"}, {"detail", e.detail()}}};
        }
    }
    s->engine.set_budget(saved);
    return {200, json{{"hints", out}}};
}

Response GameService::remove(const std::string& id) {
    std::shared_ptr<Session> s;
    {
        std::lock_guard lock(registry_mu_);
        auto it = sessions_.find(id);
        if (it == sessions_.end()) return fail(404, "unknown-session", "no game with id '" + id + "'");
        s = it->second;
        sessions_.erase(it);
    }
    journal({{"session", id}, {"event", "delete"}, {"ts", now_ms()}});
    return {200, json{{"deleted", id}}};
}

Response GameService::handle(std::string_view method, std::string_view path, std::string_view body) {
    constexpr std::string_view prefix = "/api/v1/games";
    if (path.substr(0, prefix.size()) != prefix) return fail(404, "not-found", "no route for " + std::string(path));
    auto rest = path.substr(prefix.size());
    if (!rest.empty() && rest.back() == '/') rest.remove_suffix(1);

    try {
        if (rest.empty()) {
            if (method == "POST") return create(body);
            return fail(405, "method-not-allowed", std::string(method) + " " + std::string(path));
        }
        if (rest.front() != '/') return fail(404, "not-found", "no route for " + std::string(path));
        rest.remove_prefix(1);
        const auto slash = rest.find('/');
        const std::string id(rest.substr(0, slash));
        const auto tail = slash == std::string_view::npos ? std::string_view{} : rest.substr(slash + 1);

        if (tail.empty()) {
            if (method == "GET") return state(id);
            if (method == "DELETE") return remove(id);
        } else if (tail == "moves") {
            if (method == "POST") return move(id, body);
        } else if (tail == "hints") {
            if (method == "GET") return hints(id);
        } else {
            return fail(404, "not-found", "no route for " + std::string(path));
        }
        return fail(405, "method-not-allowed", std::string(method) + " " + std::string(path));
    } catch (const Error& e) {
        return fail(e);
    } catch (const std::exception& e) {
        return fail(500, "internal", e.what());
    }
}

struct HttpServer::Impl {
    explicit Impl(GameService& s) : svc(s) {}
    GameService& svc;
    httplib::Server http;
};

HttpServer::HttpServer(GameService& svc) : impl_(std::make_unique<Impl>(svc)) {
    auto& http = impl_->http;
    const auto& cfg = svc.config();
    http.set_default_headers({{"Access-Control-Allow-Origin", cfg.cors_origin},
                              {"Access-Control-Allow-Methods", "GET, POST, DELETE, OPTIONS"},
                              {"Access-Control-Allow-Headers", "Content-Type"}});
    if (cfg.static_dir) http.set_mount_point("/", *cfg.static_dir);

    auto route = [this](const httplib::Request& req, httplib::Response& res) {
        const auto r = impl_->svc.handle(req.method, req.path, req.body);
        res.status = r.status;
        res.set_content(r.body.dump(), "application/json");
    };
    http.Get(R"(/api/.*)", route);
    http.Post(R"(/api/.*)", route);
    http.Delete(R"(/api/.*)", route);
    http.Options(R"(.*)", [](const httplib::Request&, httplib::Response& res) { res.status = 204; });
}

HttpServer::~HttpServer() { stop(); }

int HttpServer::bind(const std::string& host, int port) {
    if (port == 0) return impl_->http.bind_to_any_port(host);
    return impl_->http.bind_to_port(host, port) ? port : -1;
}

bool HttpServer::listen() { return impl_->http.listen_after_bind(); }

void HttpServer::stop() {
    if (impl_->http.is_running()) impl_->http.stop();
}

void HttpServer::wait_until_ready() const { impl_->http.wait_until_ready(); }

}  // namespace nk::service
