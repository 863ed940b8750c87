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

#include <bit>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

namespace nk {

using NodeId = std::uint32_t;

/// Fixed-width bit vector over node ids. Width is set at construction and
/// every binary operation expects operands of equal width.
class NodeSet {
public:
    NodeSet() = default;
    explicit NodeSet(std::size_t width) : width_(width), words_((width + 63) / 64, 0) {}

    static NodeSet full(std::size_t width) {
        NodeSet s(width);
        for (std::size_t i = 0; i < width; ++i)
            s.insert(static_cast<NodeId>(i));
        return s;
    }

    std::size_t width() const { return width_; }

    bool contains(NodeId v) const {
        return v < width_ && ((words_[v >> 6] >> (v & 63)) & 1u);
    }
    void insert(NodeId v) { words_[v >> 6] |= std::uint64_t{1} << (v & 63); }
    void erase(NodeId v) { words_[v >> 6] &= ~(std::uint64_t{1} << (v & 63)); }

    bool empty() const {
        for (auto w : words_)
            if (w) return false;
        return true;
    }

    std::size_t count() const {
        std::size_t n = 0;
        for (auto w : words_) n += static_cast<std::size_t>(std::popcount(w));
        return n;
    }

    /// True iff every member of *this is also in `other`.
    bool subset_of(const NodeSet& other) const {
        for (std::size_t i = 0; i < words_.size(); ++i)
            if (words_[i] & ~other.words_[i]) return false;
        return true;
    }

    bool intersects(const NodeSet& other) const {
        for (std::size_t i = 0; i < words_.size(); ++i)
            if (words_[i] & other.words_[i]) return true;
        return false;
    }

    NodeSet& operator&=(const NodeSet& o) {
        for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= o.words_[i];
        return *this;
    }
    NodeSet& operator|=(const NodeSet& o) {
        for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= o.words_[i];
        return *this;
    }
    /// Set difference.
    NodeSet& operator-=(const NodeSet& o) {
        for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= ~o.words_[i];
        return *this;
    }

    friend NodeSet operator&(NodeSet a, const NodeSet& b) { return a &= b; }
    friend NodeSet operator|(NodeSet a, const NodeSet& b) { return a |= b; }
    friend NodeSet operator-(NodeSet a, const NodeSet& b) { return a -= b; }

    bool operator==(const NodeSet&) const = default;

    /// Lowest member at or after `from`, or width() if none.
    NodeId next(NodeId from) const {
        std::size_t wi = from >> 6;
        if (wi >= words_.size()) return static_cast<NodeId>(width_);
        std::uint64_t w = words_[wi] & (~std::uint64_t{0} << (from & 63));
        while (true) {
            if (w) return static_cast<NodeId>(wi * 64 + static_cast<std::size_t>(std::countr_zero(w)));
            if (++wi >= words_.size()) return static_cast<NodeId>(width_);
            w = words_[wi];
        }
    }
    NodeId first() const { return next(0); }

    /// Highest member, or -1 when empty.
    std::int64_t last() const {
        for (std::size_t i = words_.size(); i-- > 0;)
            if (words_[i]) return static_cast<std::int64_t>(i * 64 + 63 - static_cast<std::size_t>(std::countl_zero(words_[i])));
        return -1;
    }

    template <class F>
    void for_each(F&& f) const {
        for (std::size_t wi = 0; wi < words_.size(); ++wi) {
            std::uint64_t w = words_[wi];
            while (w) {
                f(static_cast<NodeId>(wi * 64 + static_cast<std::size_t>(std::countr_zero(w))));
                w &= w - 1;
            }
        }
    }

    std::vector<NodeId> to_vector() const {
        std::vector<NodeId> out;
        out.reserve(count());
        for_each([&](NodeId v) { out.push_back(v); });
        return out;
    }

    std::size_t hash() const {
        std::uint64_t h = 0x9e3779b97f4a7c15ull ^ width_;
        for (auto w : words_) {
            h ^= w + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
        }
        return static_cast<std::size_t>(h);
    }

private:
    std::size_t width_ = 0;
    std::vector<std::uint64_t> words_;
};

}  // namespace nk

template <>
struct std::hash<nk::NodeSet> {
    std::size_t operator()(const nk::NodeSet& s) const noexcept { return s.hash(); }
};
