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

#include <random>

#include "nk/atm.hpp"

using namespace nk;
using namespace nk::atm;
using nlohmann::json;

namespace {

AtmSpec fixture(const std::string& name) { return load_machine_file(NK_TEST_DATA "/machines/" + name + ".json"); }

// Machine with every rule (q, a, 0) on the given states.
json identity_machine(std::vector<std::string> states, std::vector<std::uint64_t> poly = {2}) {
    json delta = json::array();
    for (int k = 0; k < 2; ++k)
        for (const auto& s : states)
            for (int a = 0; a < 3; ++a)
                delta.push_back({{"branch", k}, {"state", s}, {"read", a}, {"write", a}, {"move", 0}, {"next", s}});
    return {{"states", states}, {"accept", states.at(1)}, {"time_poly", poly}, {"delta", delta}};
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

bool eval_rec(const AtmSpec& m, std::string_view x, PathBits& p, std::size_t i, std::size_t s) {
    if (i == s) return classify_run(m, x, p);
    bool any = false, all = true;
    for (std::uint8_t b = 0; b < 2; ++b) {
        p[i] = b;
        const bool v = eval_rec(m, x, p, i + 1, s);
        any = any || v;
        all = all && v;
    }
    return i % 2 == 0 ? any : all;
}

}  // namespace

TEST_SUITE("atm") {
    TEST_CASE("loading") {
        auto j = identity_machine({"q0", "q1"});
        const auto m = load_machine(j);
        CHECK(m.state_count() == 2);
        CHECK(m.accept == 1);
        CHECK(load_machine(machine_to_json(m)).delta == m.delta);

        SUBCASE("missing entry") {
            j["delta"].erase(j["delta"].size() - 1);
            CHECK(code_of([&] { load_machine(j); }) == Errc::delta_not_total);
        }
        SUBCASE("accepting state must be index 1") {
            j["accept"] = "q0";
            CHECK(code_of([&] { load_machine(j); }) == Errc::bad_accept_state);
        }
        SUBCASE("empty polynomial") {
            j["time_poly"] = json::array();
            CHECK(code_of([&] { load_machine(j); }) == Errc::empty_poly);
        }
        SUBCASE("duplicate rule") {
            j["delta"].push_back(j["delta"][0]);
            CHECK(code_of([&] { load_machine(j); }) == Errc::malformed_input);
        }
        SUBCASE("bad move") {
            j["delta"][0]["move"] = 2;
            CHECK(code_of([&] { load_machine(j); }) == Errc::malformed_input);
        }
    }

    TEST_CASE("time bound") {
        CHECK(time_bound(load_machine(identity_machine({"q0", "q1"}, {2})), "101") == 2);
        CHECK(code_of([] { time_bound(load_machine(identity_machine({"q0", "q1"}, {0, 1})), "101"); }) ==
              Errc::odd_time_bound);
        CHECK(time_bound(load_machine(identity_machine({"q0", "q1"}, {0, 2})), "101") == 6);
        CHECK(code_of([] { time_bound(load_machine(identity_machine({"q0", "q1"}, {0})), ""); }) ==
              Errc::odd_time_bound);
    }

    TEST_CASE("initial configuration") {
        CHECK(c_init("1", 2) == Configuration{0, 0, {1, 2}});
        CHECK(c_init("", 2) == Configuration{0, 0, {2, 2}});
        CHECK(c_init("10", 2) == Configuration{0, 0, {1, 0}});
        CHECK(c_init("10", 2).flatten().size() == 4);
        CHECK(code_of([] { c_init("101", 2); }) == Errc::input_too_long);
        CHECK(code_of([] { c_init("12", 2); }) == Errc::malformed_input);
    }

    TEST_CASE("step") {
        auto j = identity_machine({"q0", "q1"});
        const auto id = load_machine(j);
        const Configuration c{0, 0, {1, 2}};
        CHECK(step(id, 0, c) == c);

        for (auto& e : j["delta"])
            if (e["branch"] == 0 && e["state"] == "q0" && e["read"] == 1) e = {{"branch", 0}, {"state", "q0"}, {"read", 1},
                                                                            {"write", 0}, {"move", 1}, {"next", "q1"}};
        CHECK(step(load_machine(j), 0, c) == Configuration{1, 1, {0, 2}});

        for (auto& e : j["delta"]) e["move"] = -1;
        CHECK(code_of([&] { step(load_machine(j), 0, c); }) == Errc::head_out_of_range);
    }

    TEST_CASE("runs") {
        const auto id = load_machine(identity_machine({"q0", "q1"}));
        const auto r = run(id, "", {0, 1});
        REQUIRE(r.size() == 3);
        CHECK(r[0] == r[1]);
        CHECK(r[1] == r[2]);
        CHECK(code_of([&] { run(id, "", {0}); }) == Errc::length_mismatch);

        const auto flip = fixture("m_flip");
        CHECK(run(flip, "", {1, 0}).back().tape[0] == 0);

        const auto bit0 = fixture("m_bit0");
        CHECK(classify_run(bit0, "", {1, 0}));
        CHECK_FALSE(classify_run(bit0, "", {0, 0}));
        for (std::uint8_t a = 0; a < 2; ++a)
            for (std::uint8_t b = 0; b < 2; ++b) {
                CHECK(classify_run(fixture("m_yes"), "", {a, b}));
                CHECK_FALSE(classify_run(fixture("m_no"), "", {a, b}));
            }
    }

    TEST_CASE("run consecutive pairs follow step") {
        for (const auto* name : {"m_yes", "m_no", "m_bit0", "m_bit1", "m_flip"}) {
            const auto m = fixture(name);
            for (std::uint8_t a = 0; a < 2; ++a)
                for (std::uint8_t b = 0; b < 2; ++b) {
                    const PathBits p{a, b};
                    const auto r = run(m, "1", p);
                    for (std::size_t i = 0; i + 1 < r.size(); ++i) {
                        CHECK(step(m, p[i], r[i]) == r[i + 1]);
                        CHECK(r[i + 1].tape.size() == 2);
                        CHECK(r[i + 1].head < 2);
                    }
                }
        }
    }

    TEST_CASE("alternating evaluation") {
        CHECK(evaluate(fixture("m_yes"), "1"));
        CHECK_FALSE(evaluate(fixture("m_no"), ""));
        CHECK(evaluate(fixture("m_bit0"), ""));
        CHECK_FALSE(evaluate(fixture("m_bit1"), ""));
        CHECK_FALSE(evaluate(fixture("m_flip"), ""));
    }

    TEST_CASE("evaluate matches a recursive unfolding on random machines") {
        std::mt19937 rng(7);
        const std::vector<std::string> names{"q0", "q1", "q2"};
        for (int trial = 0; trial < 40; ++trial) {
            json delta = json::array();
            for (int k = 0; k < 2; ++k)
                for (const auto& s : names)
                    for (int a = 0; a < 3; ++a)
                        delta.push_back({{"branch", k},
                                         {"state", s},
                                         {"read", a},
                                         {"write", static_cast<int>(rng() % 3)},
                                         {"move", 0},
                                         {"next", names[rng() % 3]}});
            const std::uint64_t s = 2 + 2 * (trial % 4);
            const auto m = load_machine(json{{"states", names}, {"accept", "q1"}, {"time_poly", {s}}, {"delta", delta}});
            PathBits p(s);
            CAPTURE(trial);
            CHECK(evaluate(m, "1") == eval_rec(m, "1", p, 0, s));
        }
    }
}
