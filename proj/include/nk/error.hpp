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

#include <stdexcept>
#include <string>
#include <string_view>

namespace nk {

enum class Errc {
    asymmetric_edge,
    node_id_out_of_range,
    move_not_available,
    empty_sequence,
    malformed_input,
    budget_exceeded,
    delta_not_total,
    bad_accept_state,
    empty_poly,
    odd_time_bound,
    input_too_long,
    head_out_of_range,
    unknown_id,
    malformed_round,
    length_mismatch,
    too_large,
};

std::string_view to_string(Errc code);

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& detail)
        : std::runtime_error(std::string(to_string(code)) + ": " + detail), code_(code), detail_(detail) {}

    Errc code() const { return code_; }
    const std::string& detail() const { return detail_; }

private:
    Errc code_;
    std::string detail_;
};

}  // namespace nk
