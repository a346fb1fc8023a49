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

#ifndef BCDBO_DOMAIN_HPP
#define BCDBO_DOMAIN_HPP

#include <array>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "bcdbo/error.hpp"
#include "bcdbo/rng.hpp"
#include "bcdbo/scene.hpp"

namespace bcdbo {

/// Antenna orientation. Yaw and roll are wrapped into [-pi, pi), pitch is
/// clamped to [-pi/2, pi/2]. Positive pitch tilts the boresight downwards.
class Orientation {
public:
    Orientation() = default;
    Orientation(double yaw, double pitch, double roll)
        : yaw_(wrap(yaw)), pitch_(clamp_pitch(pitch)), roll_(wrap(roll))
    {
    }

    double yaw() const noexcept { return yaw_; }
    double pitch() const noexcept { return pitch_; }
    double roll() const noexcept { return roll_; }

    bool operator==(const Orientation&) const = default;

    static double wrap(double a)
    {
        constexpr double pi = std::numbers::pi;
        if (a >= -pi && a < pi)
            return a;
        double w = a - 2.0 * pi * std::floor((a + pi) / (2.0 * pi));
        if (w >= pi)
            w -= 2.0 * pi;
        if (w < -pi)
            w = -pi;
        return w;
    }

    static double clamp_pitch(double p)
    {
        constexpr double half = std::numbers::pi / 2.0;
        return p < -half ? -half : (p > half ? half : p);
    }

private:
    double yaw_ = 0.0;
    double pitch_ = 0.0;
    double roll_ = 0.0;
};

struct Position {
    double x_m = 0.0;
    double y_m = 0.0;

    bool operator==(const Position&) const = default;
};

/// Dimension order of one block: x, y, power, yaw, pitch, roll.
enum BlockDim : std::size_t { kDimX = 0, kDimY, kDimPower, kDimYaw, kDimPitch, kDimRoll };

inline constexpr std::size_t kBlockDims = 6;

using BlockValues = std::array<double, kBlockDims>;

struct BsConfig {
    Position position;
    double power_dbm = 0.0;
    Orientation orientation;

    bool operator==(const BsConfig&) const = default;

    BlockValues values() const
    {
        return {position.x_m, position.y_m, power_dbm, orientation.yaw(), orientation.pitch(),
                orientation.roll()};
    }

    static BsConfig from_values(const BlockValues& v)
    {
        return BsConfig{Position{v[kDimX], v[kDimY]}, v[kDimPower], Orientation(v[kDimYaw], v[kDimPitch], v[kDimRoll])};
    }
};

/// Ordered per-BS parameter blocks; index i is the i-th BS.
struct Deployment {
    std::vector<BsConfig> stations;

    std::size_t size() const noexcept { return stations.size(); }
    bool operator==(const Deployment&) const = default;

    /// Block i occupies entries [6i, 6i + 6).
    std::vector<double> flatten() const
    {
        std::vector<double> out;
        out.reserve(kBlockDims * stations.size());
        for (const auto& bs : stations)
            for (double v : bs.values())
                out.push_back(v);
        return out;
    }
};

/// Box bounds of one BS block, shared by every BS of a deployment.
struct ParameterBounds {
    BlockValues lower{};
    BlockValues upper{};

    static ParameterBounds for_area(double area_m, double power_min_dbm, double power_max_dbm)
    {
        constexpr double pi = std::numbers::pi;
        ParameterBounds b;
        b.lower = {0.0, 0.0, power_min_dbm, -pi, -pi / 2.0, -pi};
        b.upper = {area_m, area_m, power_max_dbm, pi, pi / 2.0, pi};
        b.validate();
        return b;
    }

    static ParameterBounds for_scene(const Scene& scene, double power_min_dbm = 10.0, double power_max_dbm = 40.0)
    {
        return for_area(scene.area_m, power_min_dbm, power_max_dbm);
    }

    void validate() const
    {
        for (std::size_t d = 0; d < kBlockDims; ++d)
            if (!(lower[d] < upper[d]))
                throw ConfigError("parameter bounds: lower >= upper in dimension " + dim_name(d));
    }

    std::vector<double> full_lower(std::size_t n_tx) const { return tile(lower, n_tx); }
    std::vector<double> full_upper(std::size_t n_tx) const { return tile(upper, n_tx); }

    bool contains(const BsConfig& bs) const
    {
        const auto v = bs.values();
        for (std::size_t d = 0; d < kBlockDims; ++d)
            if (v[d] < lower[d] || v[d] > upper[d])
                return false;
        return true;
    }

    static std::string dim_name(std::size_t d)
    {
        static constexpr const char* names[kBlockDims] = {"x_m", "y_m", "power_dbm", "yaw", "pitch", "roll"};
        return d < kBlockDims ? names[d] : "#" + std::to_string(d);
    }

private:
    static std::vector<double> tile(const BlockValues& v, std::size_t n)
    {
        std::vector<double> out;
        out.reserve(kBlockDims * n);
        for (std::size_t i = 0; i < n; ++i)
            out.insert(out.end(), v.begin(), v.end());
        return out;
    }
};

/// Maps a BS block to the unit box. Throws BoundsError naming the offending
/// dimension when the block lies outside the bounds.
inline BlockValues encode_block(const BsConfig& bs, const ParameterBounds& bounds)
{
    const auto v = bs.values();
    BlockValues u{};
    for (std::size_t d = 0; d < kBlockDims; ++d) {
        if (!(v[d] >= bounds.lower[d] && v[d] <= bounds.upper[d]))
            throw BoundsError("encode_block: " + ParameterBounds::dim_name(d) + " = " + std::to_string(v[d]) +
                              " outside [" + std::to_string(bounds.lower[d]) + ", " +
                              std::to_string(bounds.upper[d]) + "]");
        u[d] = (v[d] - bounds.lower[d]) / (bounds.upper[d] - bounds.lower[d]);
    }
    return u;
}

inline BsConfig decode_block(std::span<const double> u, const ParameterBounds& bounds)
{
    if (u.size() != kBlockDims)
        throw ShapeError("decode_block: expected " + std::to_string(kBlockDims) + " entries, got " +
                         std::to_string(u.size()));
    BlockValues v{};
    for (std::size_t d = 0; d < kBlockDims; ++d) {
        if (!(u[d] >= 0.0 && u[d] <= 1.0))
            throw BoundsError("decode_block: unit coordinate " + ParameterBounds::dim_name(d) + " outside [0, 1]");
        v[d] = bounds.lower[d] + u[d] * (bounds.upper[d] - bounds.lower[d]);
    }
    return BsConfig::from_values(v);
}

inline std::vector<double> encode_deployment(const Deployment& dep, const ParameterBounds& bounds)
{
    std::vector<double> out;
    out.reserve(kBlockDims * dep.size());
    for (const auto& bs : dep.stations)
        for (double u : encode_block(bs, bounds))
            out.push_back(u);
    return out;
}

inline Deployment decode_deployment(std::span<const double> u, const ParameterBounds& bounds)
{
    if (u.size() % kBlockDims != 0)
        throw ShapeError("decode_deployment: length " + std::to_string(u.size()) + " is not a multiple of 6");
    Deployment dep;
    dep.stations.reserve(u.size() / kBlockDims);
    for (std::size_t i = 0; i < u.size(); i += kBlockDims)
        dep.stations.push_back(decode_block(u.subspan(i, kBlockDims), bounds));
    return dep;
}

inline BsConfig random_block(RngStream& rng, const ParameterBounds& bounds)
{
    std::array<double, kBlockDims> u{};
    for (auto& x : u)
        x = rng.uniform();
    return decode_block(u, bounds);
}

inline bool is_perfect_square(std::size_t n, std::size_t* root = nullptr)
{
    std::size_t r = static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(n))));
    while (r * r > n)
        --r;
    while ((r + 1) * (r + 1) <= n)
        ++r;
    if (root)
        *root = r;
    return n > 0 && r * r == n;
}

/// sqrt(n) x sqrt(n) lattice of cell centres over the square area,
/// x-major order: (x_0, y_0), (x_0, y_1), ...
inline std::vector<Position> square_placement(std::size_t n_tx, double area_m)
{
    std::size_t side = 0;
    if (!is_perfect_square(n_tx, &side))
        throw ConfigError("square placement needs a perfect-square BS count, got " + std::to_string(n_tx) +
                          "; use naive-bo or bcd-bo for free placement");
    const double cell = area_m / static_cast<double>(side);
    std::vector<Position> out;
    out.reserve(n_tx);
    for (std::size_t i = 0; i < side; ++i)
        for (std::size_t j = 0; j < side; ++j)
            out.push_back({(static_cast<double>(i) + 0.5) * cell, (static_cast<double>(j) + 0.5) * cell});
    return out;
}

inline std::vector<Position> square_placement(std::size_t n_tx, const Scene& scene)
{
    return square_placement(n_tx, scene.area_m);
}

/**
 * Evaluation counters of one optimizer run.
 *
 * `consume()` is the only way to advance the counters; it increments t_total
 * and t_sub together and refuses to exceed either budget.
 */
class BudgetState {
public:
    BudgetState(int total, int sub, int n_init) : total_budget_(total), sub_budget_(sub), n_init_(n_init)
    {
        if (total < 1)
            throw ConfigError("budget.t_total must be >= 1");
        if (sub < 1)
            throw ConfigError("budget.t_sub must be >= 1");
        if (n_init < 0 || n_init >= sub)
            throw ConfigError("budget.n_init must satisfy 0 <= n_init < t_sub");
    }

    int t_total() const noexcept { return t_total_; }
    int t_sub() const noexcept { return t_sub_; }
    int total_budget() const noexcept { return total_budget_; }
    int sub_budget() const noexcept { return sub_budget_; }
    int n_init() const noexcept { return n_init_; }

    int remaining_total() const noexcept { return total_budget_ - t_total_; }
    int remaining_sub() const noexcept { return sub_budget_ - t_sub_; }
    bool can_evaluate() const noexcept { return remaining_total() > 0 && remaining_sub() > 0; }

    void begin_subproblem() noexcept { t_sub_ = 0; }

    void consume()
    {
        if (!can_evaluate())
            throw Error("budget exhausted: t_total=" + std::to_string(t_total_) + "/" + std::to_string(total_budget_) +
                        ", t_sub=" + std::to_string(t_sub_) + "/" + std::to_string(sub_budget_));
        ++t_total_;
        ++t_sub_;
    }

private:
    int total_budget_;
    int sub_budget_;
    int n_init_;
    int t_total_ = 0;
    int t_sub_ = 0;
};

} // namespace bcdbo

#endif
