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
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include <json.hpp>

#include "nk/atm.hpp"
#include "nk/grundy.hpp"
#include "nk/reduction.hpp"

// Independent oracles and the property suites built on them.
namespace nk::verify {

/// Grundy value straight from the recursive definition over bitmasks. No
/// component split, no shared code with Engine. Up to 20 nodes.
GrundyValue naive_sg(const GroundGraph& g);
GrundyValue naive_sg(const GroundGraph& g, const NodeSet& alive);

/// Labeled simple graph on n nodes from an edge mask over pairs (u < v) in
/// lexicographic order.
GroundGraph graph_from_mask(std::size_t n, std::uint64_t mask);

/// Every labeled graph with n nodes, 2^(n choose 2) of them.
std::vector<GroundGraph> all_graphs(std::size_t n);

/// G(n, p) with n drawn from [min_n, max_n] and p from [0.25, 0.6].
std::vector<GroundGraph> random_graphs(std::size_t count, std::size_t min_n, std::size_t max_n, std::uint64_t seed);

struct Failure {
    std::string what;
    nlohmann::json repro;
};

struct SuiteReport {
    std::string name;
    std::size_t cases = 0;
    std::vector<Failure> failures;
    bool inconclusive = false;  // a budget ran out; never counts as a pass
    std::string note;
    std::chrono::milliseconds wall{0};

    bool passed() const { return failures.empty() && !inconclusive; }
    nlohmann::json to_json() const;
};

// Strategy checks on a single graph. Each returns an empty string on
// success, otherwise a description of the first bad line of play.

/// Alice plays tau, the adversary plays `bob`; every tau move must be legal
/// and leave a zero position.
std::string check_aws(const Position& p, Engine& e, std::span<const NodeId> bob);
/// Mirror for Bob: the adversary moves first and tau answers.
std::string check_bws(const Position& p, Engine& e, std::span<const NodeId> alice);

SuiteReport check_small_graphs(std::size_t max_n = 5, std::size_t random_count = 1000, std::uint64_t seed = 20260);
SuiteReport check_strategy(std::size_t max_n = 5);

struct Fixture {
    std::string name;
    atm::AtmSpec machine;
    std::string input;
};

/// The first `len` moves of the legitimate play that follows the actual run
/// along `path`. Returns nothing when the run leaves the tape.
std::optional<MoveSequence> legit_prefix(const reduction::ReductionGraph& g, const atm::AtmSpec& m, std::string_view x,
                                         const atm::PathBits& path, std::size_t len);

SuiteReport check_legitimacy(const Fixture& f, std::vector<std::size_t> rounds = {});
SuiteReport check_complement(const Fixture& f);
SuiteReport check_end_to_end(const Fixture& f, Budget budget = {64, std::nullopt, std::chrono::minutes(5)});

/// Paths of length n in lexicographic order, P[0] most significant.
std::vector<atm::PathBits> all_paths(std::size_t n);

}  // namespace nk::verify
