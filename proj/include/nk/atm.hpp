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

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "nk/error.hpp"

// Binary-branching alternating Turing machines in path normal form: the
// branch bits are fixed up front and the run consumes one bit per step.
namespace nk::atm {

using Symbol = std::uint8_t;  // 0, 1, or 2 (blank)
using PathBits = std::vector<std::uint8_t>;

inline constexpr Symbol blank = 2;
inline constexpr std::size_t symbol_count = 3;
inline constexpr std::size_t accept_index = 1;

struct Transition {
    std::size_t next = 0;
    Symbol write = 0;
    int move = 0;  // -1, 0, +1

    bool operator==(const Transition&) const = default;
};

struct AtmSpec {
    std::vector<std::string> states;
    std::size_t accept = accept_index;
    std::vector<std::uint64_t> time_poly;
    std::vector<Transition> delta;  // indexed by (branch, state, read)

    std::size_t state_count() const { return states.size(); }
    const Transition& rule(int branch, std::size_t state, Symbol read) const {
        return delta[(static_cast<std::size_t>(branch) * states.size() + state) * symbol_count + read];
    }
};

struct Configuration {
    std::size_t state = 0;
    std::size_t head = 0;
    std::vector<Symbol> tape;

    /// <state, head, tape...>, length s + 2.
    std::vector<std::size_t> flatten() const;
    bool operator==(const Configuration&) const = default;
};

AtmSpec load_machine(const nlohmann::json& j);
AtmSpec load_machine_file(const std::string& path);
nlohmann::json machine_to_json(const AtmSpec& m);

/// Input strings are over '0' and '1'.
std::vector<Symbol> parse_input(std::string_view x);

/// s = p(|x|); must be even and at least 2.
std::size_t time_bound(const AtmSpec& m, std::string_view x);

Configuration c_init(const AtmSpec& m, std::string_view x);
Configuration c_init(std::string_view x, std::size_t s);

/// One step along branch k. Throws head_out_of_range when the head leaves [0, s).
Configuration step(const AtmSpec& m, int branch, const Configuration& c);

/// C_0 .. C_s along the path.
std::vector<Configuration> run(const AtmSpec& m, std::string_view x, const PathBits& path);

bool accepting(const AtmSpec& m, const Configuration& c);
/// True for an accepting run, false for a rejecting one.
bool classify_run(const AtmSpec& m, std::string_view x, const PathBits& path);

/// Exists P[0], forall P[1], exists P[2], ...: the run along P accepts.
/// Alice owns the even path indices.
bool evaluate(const AtmSpec& m, std::string_view x);

}  // namespace nk::atm
