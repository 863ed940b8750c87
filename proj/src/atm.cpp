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

#include "nk/atm.hpp"

#include <algorithm>
#include <optional>

#include "nk/graph_io.hpp"

namespace nk::atm {

using nlohmann::json;

std::vector<std::size_t> Configuration::flatten() const {
    std::vector<std::size_t> out{state, head};
    out.insert(out.end(), tape.begin(), tape.end());
    return out;
}

namespace {

[[noreturn]] void bad(const std::string& what) { throw Error(Errc::malformed_input, what); }

std::size_t state_index(const AtmSpec& m, const json& name, const std::string& where) {
    if (!name.is_string()) bad(where + ": state must be a string");
    auto it = std::find(m.states.begin(), m.states.end(), name.get<std::string>());
    if (it == m.states.end()) bad(where + ": unknown state '" + name.get<std::string>() + "'");
    return static_cast<std::size_t>(it - m.states.begin());
}

long long int_field(const json& e, const char* key, const std::string& where) {
    if (!e.contains(key) || !e[key].is_number_integer()) bad(where + ": field '" + key + "' must be an integer");
    return e[key].get<long long>();
}

}  // namespace

AtmSpec load_machine(const json& j) {
    if (!j.is_object()) bad("machine must be a JSON object");
    AtmSpec m;
    if (!j.contains("states") || !j["states"].is_array()) bad("field 'states' must be an array");
    for (const auto& s : j["states"]) {
        if (!s.is_string()) bad("state names must be strings");
        if (std::find(m.states.begin(), m.states.end(), s.get<std::string>()) != m.states.end())
            bad("duplicate state '" + s.get<std::string>() + "'");
        m.states.push_back(s.get<std::string>());
    }
    if (m.states.empty()) bad("machine needs at least one state");

    if (!j.contains("accept")) throw Error(Errc::bad_accept_state, "missing 'accept'");
    m.accept = state_index(m, j["accept"], "accept");
    if (m.accept != accept_index)
        throw Error(Errc::bad_accept_state, "accepting state must be the second state (index 1), got index " +
                                                std::to_string(m.accept));

    if (!j.contains("time_poly") || !j["time_poly"].is_array()) bad("field 'time_poly' must be an array");
    for (const auto& c : j["time_poly"]) {
        if (!c.is_number_unsigned()) bad("time_poly coefficients must be non-negative integers");
        m.time_poly.push_back(c.get<std::uint64_t>());
    }
    if (m.time_poly.empty()) throw Error(Errc::empty_poly, "time_poly has no coefficients");

    if (!j.contains("delta") || !j["delta"].is_array()) bad("field 'delta' must be an array");
    const std::size_t q = m.states.size();
    std::vector<std::optional<Transition>> table(2 * q * symbol_count);
    for (std::size_t i = 0; i < j["delta"].size(); ++i) {
        const json& e = j["delta"][i];
        const std::string where = "delta[" + std::to_string(i) + "]";
        if (!e.is_object()) bad(where + ": expected an object");
        const auto branch = int_field(e, "branch", where);
        const auto read = int_field(e, "read", where);
        const auto write = int_field(e, "write", where);
        const auto move = int_field(e, "move", where);
        if (branch != 0 && branch != 1) bad(where + ": branch must be 0 or 1");
        if (read < 0 || read > 2) bad(where + ": read must be 0, 1 or 2");
        if (write < 0 || write > 2) bad(where + ": write must be 0, 1 or 2");
        if (move < -1 || move > 1) bad(where + ": move must be -1, 0 or 1");
        if (!e.contains("state") || !e.contains("next")) bad(where + ": needs 'state' and 'next'");
        const auto state = state_index(m, e["state"], where + ".state");
        const auto next = state_index(m, e["next"], where + ".next");
        auto& slot = table[(static_cast<std::size_t>(branch) * q + state) * symbol_count + static_cast<std::size_t>(read)];
        if (slot) bad(where + ": duplicate entry for (branch, state, read)");
        slot = Transition{next, static_cast<Symbol>(write), static_cast<int>(move)};
    }
    for (int k = 0; k < 2; ++k)
        for (std::size_t s = 0; s < q; ++s)
            for (std::size_t a = 0; a < symbol_count; ++a) {
                const auto& slot = table[(static_cast<std::size_t>(k) * q + s) * symbol_count + a];
                if (!slot)
                    throw Error(Errc::delta_not_total, "no transition for (" + std::to_string(k) + ", " +
                                                           m.states[s] + ", " + std::to_string(a) + ")");
                m.delta.push_back(*slot);
            }
    return m;
}

AtmSpec load_machine_file(const std::string& path) {
    json j;
    try {
        j = json::parse(io::read_file(path));
    } catch (const json::parse_error& e) {
        bad(path + ": " + e.what());
    }
    return load_machine(j);
}

json machine_to_json(const AtmSpec& m) {
    json delta = json::array();
    for (int k = 0; k < 2; ++k)
        for (std::size_t s = 0; s < m.state_count(); ++s)
            for (Symbol a = 0; a < symbol_count; ++a) {
                const auto& t = m.rule(k, s, a);
                delta.push_back({{"branch", k}, {"state", m.states[s]}, {"read", a}, {"write", t.write},
                                 {"move", t.move}, {"next", m.states[t.next]}});
            }
    return json{{"states", m.states}, {"accept", m.states[m.accept]}, {"time_poly", m.time_poly}, {"delta", delta}};
}

std::vector<Symbol> parse_input(std::string_view x) {
    std::vector<Symbol> out;
    for (char c : x) {
        if (c != '0' && c != '1') bad(std::string("input symbol '") + c + "' is not 0 or 1");
        out.push_back(static_cast<Symbol>(c - '0'));
    }
    return out;
}

std::size_t time_bound(const AtmSpec& m, std::string_view x) {
    const std::uint64_t n = x.size();
    std::uint64_t value = 0;
    for (std::size_t i = m.time_poly.size(); i-- > 0;) value = value * n + m.time_poly[i];
    if (value % 2 != 0 || value < 2)
        throw Error(Errc::odd_time_bound, "p(" + std::to_string(n) + ") = " + std::to_string(value) +
                                              " must be even and at least 2");
    return static_cast<std::size_t>(value);
}

Configuration c_init(std::string_view x, std::size_t s) {
    auto bits = parse_input(x);
    if (bits.size() > s)
        throw Error(Errc::input_too_long, "input of length " + std::to_string(bits.size()) + " exceeds s = " +
                                              std::to_string(s));
    Configuration c;
    c.tape.assign(s, blank);
    std::copy(bits.begin(), bits.end(), c.tape.begin());
    return c;
}

Configuration c_init(const AtmSpec& m, std::string_view x) { return c_init(x, time_bound(m, x)); }

Configuration step(const AtmSpec& m, int branch, const Configuration& c) {
    const auto& t = m.rule(branch, c.state, c.tape[c.head]);
    const auto target = static_cast<long long>(c.head) + t.move;
    if (target < 0 || target >= static_cast<long long>(c.tape.size()))
        throw Error(Errc::head_out_of_range, "head would move to " + std::to_string(target));
    Configuration out = c;
    out.tape[c.head] = t.write;
    out.head = static_cast<std::size_t>(target);
    out.state = t.next;
    return out;
}

std::vector<Configuration> run(const AtmSpec& m, std::string_view x, const PathBits& path) {
    const std::size_t s = time_bound(m, x);
    if (path.size() != s)
        throw Error(Errc::length_mismatch, "path has " + std::to_string(path.size()) + " bits, expected " +
                                               std::to_string(s));
    std::vector<Configuration> out{c_init(x, s)};
    for (std::size_t i = 0; i < s; ++i) out.push_back(step(m, path[i], out.back()));
    return out;
}

bool accepting(const AtmSpec& m, const Configuration& c) { return c.state == m.accept; }

bool classify_run(const AtmSpec& m, std::string_view x, const PathBits& path) {
    return accepting(m, run(m, x, path).back());
}

bool evaluate(const AtmSpec& m, std::string_view x) {
    const std::size_t s = time_bound(m, x);
    if (s > 24) throw Error(Errc::too_large, "s = " + std::to_string(s) + " is beyond brute-force range");
    // Leaf table indexed by the path read as a binary number, P[0] most significant.
    std::vector<bool> level(std::size_t{1} << s);
    PathBits path(s);
    for (std::size_t code = 0; code < level.size(); ++code) {
        for (std::size_t i = 0; i < s; ++i) path[i] = static_cast<std::uint8_t>((code >> (s - 1 - i)) & 1u);
        level[code] = classify_run(m, x, path);
    }
    // Fold from the last path bit upwards; bit i is existential iff i is even.
    for (std::size_t i = s; i-- > 0;) {
        std::vector<bool> up(level.size() / 2);
        for (std::size_t c = 0; c < up.size(); ++c)
            up[c] = (i % 2 == 0) ? (level[2 * c] || level[2 * c + 1]) : (level[2 * c] && level[2 * c + 1]);
        level = std::move(up);
    }
    return level[0];
}

}  // namespace nk::atm
