// SPDX-License-Identifier: Apache-2.0
//
// bcdbo: block-coordinate Bayesian optimization of base-station layouts
// Copyright (C) 2026 The bcdbo authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#ifndef BCDBO_RNG_HPP
#define BCDBO_RNG_HPP

#include <cstdint>
#include <string_view>

namespace bcdbo {

/**
 * Counter-based random stream.
 *
 * Draw k (k = 1, 2, ...) is SplitMix64's output function applied to
 * `seed + k * 0x9E3779B97F4A7C15`, so the sequence depends only on the seed
 * and is identical on every platform. Doubles take the top 53 bits.
 *
 * Child streams are derived from the parent seed and a (label, index) pair,
 * never from the parent's counter: forking is independent of how many draws
 * the parent has already produced.
 */
class RngStream {
public:
    explicit RngStream(std::uint64_t seed) noexcept : seed_(seed) {}

    std::uint64_t seed() const noexcept { return seed_; }
    std::uint64_t draws() const noexcept { return counter_; }

    std::uint64_t next_u64() noexcept
    {
        ++counter_;
        return mix64(seed_ + counter_ * kGolden);
    }

    /// Uniform on [0, 1).
    double uniform() noexcept
    {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform(); }

    /// Uniform integer on [0, n), exact (rejection of the biased tail). n must be > 0.
    std::uint64_t below(std::uint64_t n) noexcept
    {
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        std::uint64_t x = next_u64();
        while (x >= limit)
            x = next_u64();
        return x % n;
    }

    RngStream fork(std::string_view label, std::uint64_t index = 0) const noexcept
    {
        const std::uint64_t base = mix64(seed_ ^ fnv1a(label));
        return RngStream(mix64(base + (index + 1) * kGolden));
    }

    static constexpr std::uint64_t mix64(std::uint64_t z) noexcept
    {
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    static constexpr std::uint64_t fnv1a(std::string_view s) noexcept
    {
        std::uint64_t h = 0xCBF29CE484222325ULL;
        for (char c : s) {
            h ^= static_cast<unsigned char>(c);
            h *= 0x100000001B3ULL;
        }
        return h;
    }

private:
    static constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

    std::uint64_t seed_;
    std::uint64_t counter_ = 0;
};

} // namespace bcdbo

#endif
