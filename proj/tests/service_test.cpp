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

#include <cstdio>
#include <fstream>
#include <thread>

#include <httplib.h>

#include "nk/graph_io.hpp"
#include "nk/service.hpp"

using namespace nk;
using namespace nk::service;
using nlohmann::json;

namespace {

const json k2 = {{"nodes", 2}, {"edges", {{0, 1}}}};
const json p3 = {{"nodes", 3}, {"edges", {{0, 1}, {1, 2}}}};
const json triangle = {{"nodes", 3}, {"edges", {{0, 1}, {0, 2}, {1, 2}}}};

json machine(const std::string& name) {
    return json::parse(io::read_file(NK_TEST_DATA "/machines/" + name + ".json"));
}

std::string create_body(const json& graph, const std::string& role) {
    return json{{"graph", graph}, {"human_role", role}}.dump();
}

// The stored position must be the ground graph replayed through the history.
void check_replay(const json& state) {
    auto g = std::make_shared<const GroundGraph>(io::graph_from_json(state["graph"]));
    const auto history = state["history"].get<MoveSequence>();
    CHECK(Position(g).play(history).alive().to_vector() == state["alive"].get<std::vector<NodeId>>());
    CHECK(state["turn"] == history.size());
}

}  // namespace

TEST_SUITE("service") {
    TEST_CASE("creating games") {
        GameService svc;
        auto r = svc.create(create_body(triangle, "alice"));
        CHECK(r.status == 201);
        CHECK(r.body["state"]["history"].empty());
        CHECK(r.body["state"]["to_move"] == "Alice");
        CHECK(r.body["state"]["finished"] == false);

        r = svc.create(create_body(k2, "bob"));
        REQUIRE(r.status == 201);
        CHECK(r.body["state"]["history"] == json::array({0}));
        CHECK(r.body["state"]["finished"] == true);
        CHECK(r.body["state"]["winner"] == "Alice");
        CHECK(r.body["state"]["engine_moves"][0]["node"] == 0);

        CHECK(svc.create(R"({"graph": {"nodes": 3, "pairs": [[0, 1]]}})").status == 422);
        CHECK(svc.create(R"({"graph": {"nodes": 2, "edges": [[0, 9]]}})").status == 422);
        CHECK(svc.create("{not json").status == 400);
        CHECK(svc.create(R"({"human_role": "alice"})").status == 400);
        CHECK(svc.create(R"({"graph": {"nodes": 2}, "human_role": "carol"})").status == 400);
        const auto err = svc.create(R"({"graph": {"nodes": 3, "pairs": [[0, 1]]}})").body;
        CHECK(err["error"] == "asymmetric-edge");
        CHECK(err.contains("detail"));

        Config small;
        small.max_nodes = 10;
        GameService tiny(small);
        CHECK(tiny.create(R"({"graph": {"nodes": 11}})").status == 507);
        CHECK(tiny.create(json{{"reduction", {{"machine", machine("m_yes")}, {"input", "1"}}}}.dump()).status == 507);
    }

    TEST_CASE("moves and turns") {
        GameService svc;
        const auto id = svc.create(create_body(p3, "alice")).body["id"].get<std::string>();
        CHECK(svc.move(id, R"({"node": 7})").status == 422);
        CHECK(svc.move(id, R"({"node": "x"})").status == 400);
        CHECK(svc.move("nope", R"({"node": 0})").status == 404);

        auto r = svc.move(id, R"({"node": 0})");
        REQUIRE(r.status == 200);
        // the engine answers with the last node and wins
        CHECK(r.body["history"] == json::array({0, 2}));
        CHECK(r.body["winner"] == "Bob");
        check_replay(r.body);

        r = svc.move(id, R"({"node": 1})");
        CHECK(r.status == 409);
        CHECK(r.body["error"] == "game-over");

        const auto id2 = svc.create(create_body(p3, "alice")).body["id"].get<std::string>();
        r = svc.move(id2, R"({"node": 1})");
        CHECK(r.body["history"] == json::array({1}));
        CHECK(r.body["winner"] == "Alice");
        CHECK(svc.move(id2, R"({"node": 0})").status == 409);

        const auto id3 = svc.create(create_body(triangle, "alice")).body["id"].get<std::string>();
        r = svc.move(id3, R"({"node": 2})");
        CHECK(r.body["finished"] == true);
        CHECK(svc.move(id3, R"({"node": 0})").status == 409);
    }

    TEST_CASE("hints") {
        GameService svc;
        auto id = svc.create(create_body(k2, "alice")).body["id"].get<std::string>();
        CHECK(svc.hints(id).body["hints"] == json::parse(R"([{"node":0,"grundy":0},{"node":1,"grundy":0}])"));
        id = svc.create(create_body(p3, "alice")).body["id"].get<std::string>();
        CHECK(svc.hints(id).body["hints"] ==
              json::parse(R"([{"node":0,"grundy":1},{"node":1,"grundy":0},{"node":2,"grundy":1}])"));
        CHECK(svc.hints("missing").status == 404);

        Config cfg;
        cfg.budget.sg_nodes = 2;
        GameService bools(cfg);
        id = bools.create(create_body(p3, "alice")).body["id"].get<std::string>();
        CHECK(bools.hints(id).body["hints"] ==
              json::parse(R"([{"node":0,"wins":false},{"node":1,"wins":true},{"node":2,"wins":false}])"));

        Config tight;
        tight.budget = Budget{4, std::nullopt, std::chrono::milliseconds(1)};
        GameService starved(tight);
        const auto r = starved.create(json{{"reduction", {{"machine", machine("m_flip")}, {"variant", "A"}}}}.dump());
        REQUIRE(r.status == 201);
        CHECK(starved.hints(r.body["id"].get<std::string>()).body["hints"] == "unavailable");
    }

    TEST_CASE("reduction sessions carry labels") {
        GameService svc;
        const auto r = svc.create(
            json{{"reduction", {{"machine", machine("m_bit0")}, {"input", ""}, {"variant", "R"}}}, {"human_role", "alice"}}
                .dump());
        REQUIRE(r.status == 201);
        const auto& st = r.body["state"];
        CHECK(st["reduction"]["variant"] == "R");
        CHECK(st["reduction"]["labels"]["0"]["type"] == "path");
        CHECK(st["reduction"]["layout"]["T"] == 25);
        CHECK(st["alive"].size() == st["graph"]["nodes"]);

        auto bad = machine("m_bit0");
        bad["accept"] = "q0";
        CHECK(svc.create(json{{"reduction", {{"machine", bad}}}}.dump()).status == 422);
        CHECK(svc.create(json{{"reduction", {{"machine", machine("m_bit0")}, {"variant", "Q"}}}}.dump()).status == 422);
    }

    TEST_CASE("budget exhaustion falls back to an unverified move") {
        Config cfg;
        cfg.budget = Budget{64, std::nullopt, std::chrono::milliseconds(1)};
        GameService svc(cfg);
        const auto r = svc.create(
            json{{"reduction", {{"machine", machine("m_flip")}}}, {"human_role", "bob"}}.dump());
        REQUIRE(r.status == 201);
        const auto& mv = r.body["state"]["engine_moves"][0];
        CHECK(mv["unverified"] == true);
        CHECK(mv["node"] == 0);
    }

    TEST_CASE("routing, deletion and the journal") {
        const std::string journal = "service_test_journal.jsonl";
        std::remove(journal.c_str());
        Config cfg;
        cfg.journal_path = journal;
        GameService svc(cfg);
        auto r = svc.handle("POST", "/api/v1/games", create_body(p3, "bob"));
        REQUIRE(r.status == 201);
        const auto id = r.body["id"].get<std::string>();
        CHECK(svc.handle("GET", "/api/v1/games/" + id, "").status == 200);
        CHECK(svc.handle("GET", "/api/v1/games/" + id + "/hints", "").status == 200);
        CHECK(svc.handle("PUT", "/api/v1/games/" + id, "").status == 405);
        CHECK(svc.handle("GET", "/api/v1/games/" + id + "/nothing", "").status == 404);
        CHECK(svc.handle("GET", "/elsewhere", "").status == 404);
        CHECK(svc.session_count() == 1);
        CHECK(svc.handle("DELETE", "/api/v1/games/" + id, "").status == 200);
        CHECK(svc.handle("GET", "/api/v1/games/" + id, "").status == 404);
        CHECK(svc.handle("DELETE", "/api/v1/games/" + id, "").status == 404);
        CHECK(svc.session_count() == 0);

        std::ifstream in(journal);
        std::vector<json> lines;
        for (std::string line; std::getline(in, line);) lines.push_back(json::parse(line));
        REQUIRE(lines.size() == 3);
        CHECK(lines[0]["event"] == "create");
        CHECK(lines[1]["by"] == "engine");
        CHECK(lines[1]["node"] == 1);
        CHECK(lines[2]["event"] == "delete");
        CHECK(lines[2]["session"] == id);
        std::remove(journal.c_str());
    }

    TEST_CASE("concurrent moves on one session are serialised") {
        GameService svc;
        const auto id = svc.create(create_body(triangle, "alice")).body["id"].get<std::string>();
        std::vector<int> codes(8);
        std::vector<std::thread> threads;
        for (int i = 0; i < 8; ++i)
            threads.emplace_back([&, i] { codes[i] = svc.move(id, json{{"node", i % 3}}.dump()).status; });
        for (auto& t : threads) t.join();
        CHECK(std::count(codes.begin(), codes.end(), 200) == 1);
        const auto st = svc.state(id).body;
        CHECK(st["history"].size() == 1);
        check_replay(st);
    }

    TEST_CASE("over HTTP") {
        GameService svc;
        HttpServer http(svc);
        const int port = http.bind("127.0.0.1", 0);
        REQUIRE(port > 0);
        std::thread loop([&] { http.listen(); });
        http.wait_until_ready();

        httplib::Client cli("127.0.0.1", port);
        auto res = cli.Post("/api/v1/games", create_body(p3, "alice"), "application/json");
        REQUIRE(res);
        CHECK(res->status == 201);
        CHECK(res->get_header_value("Access-Control-Allow-Origin") == "*");
        const auto id = json::parse(res->body)["id"].get<std::string>();

        res = cli.Post("/api/v1/games/" + id + "/moves", R"({"node": 5})", "application/json");
        REQUIRE(res);
        CHECK(res->status == 422);
        CHECK(json::parse(res->body)["error"] == "move-not-available");

        res = cli.Post("/api/v1/games/" + id + "/moves", R"({"node": 1})", "application/json");
        REQUIRE(res);
        CHECK(json::parse(res->body)["winner"] == "Alice");

        res = cli.Get("/api/v1/games/" + id + "/hints");
        REQUIRE(res);
        CHECK(json::parse(res->body)["hints"].empty());

        res = cli.Options("/api/v1/games");
        REQUIRE(res);
        CHECK(res->status == 204);
        CHECK(res->get_header_value("Access-Control-Allow-Methods").find("POST") != std::string::npos);

        res = cli.Delete("/api/v1/games/" + id);
        REQUIRE(res);
        CHECK(res->status == 200);
        res = cli.Get("/api/v1/games/" + id);
        REQUIRE(res);
        CHECK(res->status == 404);

        http.stop();
        loop.join();
    }
}
