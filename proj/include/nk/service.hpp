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
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>

#include <json.hpp>

#include "nk/grundy.hpp"
#include "nk/reduction.hpp"

// Session-scoped play against the tau engine, exposed as HTTP JSON under
// /api/v1. GameService holds the logic and can be driven without sockets;
// HttpServer puts it on the wire.
namespace nk::service {

struct Config {
    Budget budget{Budget::default_sg_nodes, std::nullopt, std::chrono::milliseconds(2000)};
    std::size_t max_nodes = 4096;  // larger graphs are refused with 507
    std::optional<std::string> journal_path;
    std::optional<std::string> static_dir;
    std::string cors_origin = "*";
};

struct Response {
    int status = 200;
    nlohmann::json body;
};

class GameService {
public:
    explicit GameService(Config cfg = {});
    ~GameService();

    Response create(std::string_view body);
    Response state(const std::string& id);
    Response move(const std::string& id, std::string_view body);
    Response hints(const std::string& id);
    Response remove(const std::string& id);

    /// Routes a request by method and path; used by the HTTP layer and tests.
    Response handle(std::string_view method, std::string_view path, std::string_view body);

    std::size_t session_count() const;
    const Config& config() const { return cfg_; }

private:
    struct Session;

    std::shared_ptr<Session> find(const std::string& id) const;
    void engine_turn(Session& s);
    nlohmann::json snapshot(const Session& s) const;
    void journal(const nlohmann::json& entry);
    std::string fresh_id();

    Config cfg_;
    mutable std::mutex registry_mu_;
    std::map<std::string, std::shared_ptr<Session>> sessions_;
    std::mutex journal_mu_;
    std::uint64_t id_state_;
};

/// Blocking HTTP front end for a GameService.
class HttpServer {
public:
    explicit HttpServer(GameService& svc);
    ~HttpServer();

    /// Binds to `port` (0 picks a free one) and returns the bound port, or -1.
    int bind(const std::string& host, int port);
    /// Serves until stop() is called. Call after bind().
    bool listen();
    void stop();
    void wait_until_ready() const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

}  // namespace nk::service
