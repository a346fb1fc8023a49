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

#ifndef BCDBO_RADIO_HPP
#define BCDBO_RADIO_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>
#include <vector>

#include "bcdbo/domain.hpp"
#include "bcdbo/error.hpp"
#include "bcdbo/rng.hpp"
#include "bcdbo/scene.hpp"

namespace bcdbo {

using Vec3 = std::array<double, 3>;

/// Row-major 3x3 rotation.
using Mat3 = std::array<double, 9>;

/// R = Rz(yaw) * Ry(pitch) * Rx(roll); maps antenna-frame vectors to the world frame.
inline Mat3 rotation_matrix(const Orientation& o)
{
    const double cy = std::cos(o.yaw()), sy = std::sin(o.yaw());
    const double cp = std::cos(o.pitch()), sp = std::sin(o.pitch());
    const double cr = std::cos(o.roll()), sr = std::sin(o.roll());
    return {cy * cp, cy * sp * sr - sy * cr, cy * sp * cr + sy * sr,
            sy * cp, sy * sp * sr + cy * cr, sy * sp * cr - cy * sr,
            -sp,     cp * sr,                cp * cr};
}

namespace detail {

inline void require_unit(const Vec3& v, const char* what)
{
    const double n = std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
    if (!(std::abs(n - 1.0) <= 1e-9))
        throw BoundsError(std::string(what) + ": direction must have unit norm");
}

inline Vec3 apply_transpose(const Mat3& r, const Vec3& v)
{
    return {r[0] * v[0] + r[3] * v[1] + r[6] * v[2],
            r[1] * v[0] + r[4] * v[1] + r[7] * v[2],
            r[2] * v[0] + r[5] * v[1] + r[8] * v[2]};
}

inline Vec3 apply(const Mat3& r, const Vec3& v)
{
    return {r[0] * v[0] + r[1] * v[1] + r[2] * v[2],
            r[3] * v[0] + r[4] * v[1] + r[5] * v[2],
            r[6] * v[0] + r[7] * v[1] + r[8] * v[2]};
}

} // namespace detail

/// Expresses a world-frame unit direction in the antenna frame (boresight = +x).
inline Vec3 rotation_apply(const Orientation& o, const Vec3& world)
{
    detail::require_unit(world, "rotation_apply");
    return detail::apply_transpose(rotation_matrix(o), world);
}

/// Inverse of rotation_apply.
inline Vec3 rotation_unapply(const Orientation& o, const Vec3& local)
{
    detail::require_unit(local, "rotation_unapply");
    return detail::apply(rotation_matrix(o), local);
}

/**
 * Off-boresight angles of a local direction.
 *
 * The polar angle psi from boresight is split along the direction's bearing
 * around the boresight axis: az = psi cos(rho), el = psi sin(rho). In the
 * horizontal and vertical antenna planes these are the plain azimuth and
 * elevation offsets, and az^2 + el^2 = psi^2 is unchanged by roll.
 */
struct OffBoresight {
    double az;
    double el;
};

inline OffBoresight off_boresight(const Vec3& local)
{
    const double psi = std::acos(std::clamp(local[0], -1.0, 1.0));
    const double r = std::hypot(local[1], local[2]);
    if (r == 0.0)
        return {psi, 0.0};
    return {psi * local[1] / r, psi * local[2] / r};
}

inline double antenna_gain_db(const AntennaPattern& pattern, const Vec3& local_dir)
{
    if (pattern.kind == AntennaKind::omni)
        return 0.0;
    const auto [az, el] = off_boresight(local_dir);
    const double a = az / pattern.az_3db;
    const double e = el / pattern.el_3db;
    return pattern.gmax_dbi - std::min(12.0 * a * a + 12.0 * e * e, pattern.attenuation_max_db);
}

inline double path_loss_db(const PathLossParams& p, double distance_m)
{
    const double d = std::max(distance_m, p.d0_m);
    return p.pl0_db + 10.0 * p.exponent * std::log10(d / p.d0_m);
}

/**
 * Static link shadowing: a smooth Gaussian-like field over (BS position,
 * receiver position) built from a sum of random-phase plane waves. It is a
 * function of the shadowing seed only.
 */
class ShadowingField {
public:
    static constexpr int kComponents = 32;

    ShadowingField() = default;

    explicit ShadowingField(const ShadowingParams& p) : sigma_db_(p.sigma_db)
    {
        if (!p.enabled())
            return;
        RngStream rng = RngStream(p.seed).fork("scene-shadowing");
        const double k0 = 2.0 * std::numbers::pi / p.decorrelation_m;
        waves_.reserve(kComponents);
        for (int k = 0; k < kComponents; ++k) {
            Wave w{};
            const double a_dir = rng.uniform(0.0, 2.0 * std::numbers::pi);
            const double a_mag = k0 * rng.uniform(0.5, 1.5);
            const double b_dir = rng.uniform(0.0, 2.0 * std::numbers::pi);
            const double b_mag = k0 * rng.uniform(0.5, 1.5);
            w.rx_kx = a_mag * std::cos(a_dir);
            w.rx_ky = a_mag * std::sin(a_dir);
            w.bs_kx = b_mag * std::cos(b_dir);
            w.bs_ky = b_mag * std::sin(b_dir);
            w.phase = rng.uniform(0.0, 2.0 * std::numbers::pi);
            waves_.push_back(w);
        }
    }

    bool enabled() const noexcept { return !waves_.empty(); }

    double operator()(const Position& bs, const Position& rx) const
    {
        if (waves_.empty())
            return 0.0;
        double s = 0.0;
        for (const auto& w : waves_)
            s += std::cos(w.rx_kx * rx.x_m + w.rx_ky * rx.y_m + w.bs_kx * bs.x_m + w.bs_ky * bs.y_m + w.phase);
        return sigma_db_ * std::sqrt(2.0 / kComponents) * s;
    }

private:
    struct Wave {
        double rx_kx, rx_ky, bs_kx, bs_ky, phase;
    };

    double sigma_db_ = 0.0;
    std::vector<Wave> waves_;
};

/// Uniform grid_resolution x grid_resolution lattice of cell centres.
/// Point (row, col) sits at x = col-th centre, y = row-th centre.
class ReceiverGrid {
public:
    explicit ReceiverGrid(const Scene& scene) : resolution_(scene.grid_resolution)
    {
        const double step = scene.area_m / resolution_;
        points_.reserve(static_cast<std::size_t>(resolution_) * resolution_);
        for (int row = 0; row < resolution_; ++row)
            for (int col = 0; col < resolution_; ++col)
                points_.push_back({(col + 0.5) * step, (row + 0.5) * step});
    }

    int resolution() const noexcept { return resolution_; }
    std::size_t size() const noexcept { return points_.size(); }
    const std::vector<Position>& points() const noexcept { return points_; }

private:
    int resolution_;
    std::vector<Position> points_;
};

/// Total throughput per grid point (bps), row-major.
struct Heatmap {
    int resolution = 0;
    std::vector<double> values;

    double at(int row, int col) const { return values[static_cast<std::size_t>(row) * resolution + col]; }

    double mean() const
    {
        double s = 0.0;
        for (double v : values)
            s += v;
        return s / static_cast<double>(values.size());
    }
};

/**
 * The black-box objective: scene, receiver grid and shadowing field frozen
 * once, then evaluated for any number of deployments.
 *
 * Every BS transmits at full power towards every grid point; per point the
 * per-BS Shannon rates are summed, and the objective is the grid average.
 * Summation runs in fixed index order, so results are bit-reproducible.
 */
class RadioEnvironment {
public:
    explicit RadioEnvironment(Scene scene) : scene_(std::move(scene)), grid_(scene_), shadowing_(scene_.shadowing)
    {
        scene_.validate();
        noise_mw_ = scene_.noise_mw();
    }

    const Scene& scene() const noexcept { return scene_; }
    const ReceiverGrid& grid() const noexcept { return grid_; }

    double received_power_dbm(const BsConfig& bs, const Position& rx) const
    {
        return received_power_dbm(bs, rotation_matrix(bs.orientation), rx);
    }

    double objective(const Deployment& dep) const
    {
        const auto links = prepare(dep);
        std::vector<double> scratch(3 * dep.size() + 1);
        double sum = 0.0;
        for (const auto& rx : grid_.points())
            sum += point_throughput(links, rx, scratch);
        return sum / static_cast<double>(grid_.size());
    }

    Heatmap heatmap(const Deployment& dep) const
    {
        const auto links = prepare(dep);
        std::vector<double> scratch(3 * dep.size() + 1);
        Heatmap h;
        h.resolution = grid_.resolution();
        h.values.reserve(grid_.size());
        for (const auto& rx : grid_.points())
            h.values.push_back(point_throughput(links, rx, scratch));
        return h;
    }

    /// Linear SINR of BS i at rx (0-based index).
    double sinr(std::size_t i, const Position& rx, const Deployment& dep) const
    {
        if (i >= dep.size())
            throw BoundsError("sinr: BS index out of range");
        std::vector<double> p(dep.size());
        for (std::size_t j = 0; j < dep.size(); ++j)
            p[j] = dbm_to_mw(received_power_dbm(dep.stations[j], rx));
        double interference = 0.0;
        for (std::size_t j = 0; j < dep.size(); ++j)
            if (j != i)
                interference += p[j];
        return p[i] / (interference + noise_mw_);
    }

    double throughput(std::size_t i, const Position& rx, const Deployment& dep) const
    {
        return scene_.bandwidth_hz * std::log2(1.0 + sinr(i, rx, dep));
    }

    static double dbm_to_mw(double dbm) { return std::pow(10.0, dbm / 10.0); }

private:
    struct Link {
        const BsConfig* bs;
        Mat3 rotation;
    };

    std::vector<Link> prepare(const Deployment& dep) const
    {
        std::vector<Link> links;
        links.reserve(dep.size());
        for (const auto& bs : dep.stations)
            links.push_back({&bs, rotation_matrix(bs.orientation)});
        return links;
    }

    double received_power_dbm(const BsConfig& bs, const Mat3& rotation, const Position& rx) const
    {
        const double dx = rx.x_m - bs.position.x_m;
        const double dy = rx.y_m - bs.position.y_m;
        const double dz = scene_.rx_height_m - scene_.bs_height_m;
        const double d = std::sqrt(dx * dx + dy * dy + dz * dz);
        double gain = 0.0;
        if (scene_.antenna.kind != AntennaKind::omni) {
            Vec3 local{1.0, 0.0, 0.0};
            if (d > 0.0)
                local = detail::apply_transpose(rotation, Vec3{dx / d, dy / d, dz / d});
            gain = antenna_gain_db(scene_.antenna, local);
        }
        double p = bs.power_dbm + gain - path_loss_db(scene_.pathloss, d);
        if (shadowing_.enabled())
            p += shadowing_(bs.position, rx);
        return p;
    }

    // scratch: [0, n) received mW, [n, 2n+1) prefix sums, [2n+1, 3n+1) rates.
    double point_throughput(const std::vector<Link>& links, const Position& rx, std::vector<double>& scratch) const
    {
        const std::size_t n = links.size();
        double* p = scratch.data();
        double* prefix = scratch.data() + n;
        double* rates = scratch.data() + 2 * n + 1;
        prefix[0] = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            p[j] = dbm_to_mw(received_power_dbm(*links[j].bs, links[j].rotation, rx));
            prefix[j + 1] = prefix[j] + p[j];
        }
        double total = 0.0;
        double suffix = 0.0;
        // Leave-one-out interference: prefix[i] + sum_{j>i} p_j, suffix accumulated from the back.
        for (std::size_t k = n; k-- > 0;) {
            const double interference = prefix[k] + suffix;
            rates[k] = std::log2(1.0 + p[k] / (interference + noise_mw_));
            suffix += p[k];
        }
        for (std::size_t k = 0; k < n; ++k)
            total += rates[k];
        return scene_.bandwidth_hz * total;
    }

    Scene scene_;
    ReceiverGrid grid_;
    ShadowingField shadowing_;
    double noise_mw_ = 0.0;
};

inline double received_power_dbm(const BsConfig& bs, const Position& rx, const Scene& scene)
{
    return RadioEnvironment(scene).received_power_dbm(bs, rx);
}

inline double sinr(std::size_t i, const Position& rx, const Deployment& dep, const Scene& scene)
{
    return RadioEnvironment(scene).sinr(i, rx, dep);
}

inline double throughput(std::size_t i, const Position& rx, const Deployment& dep, const Scene& scene)
{
    return RadioEnvironment(scene).throughput(i, rx, dep);
}

inline double objective(const Deployment& dep, const Scene& scene) { return RadioEnvironment(scene).objective(dep); }

inline Heatmap heatmap(const Deployment& dep, const Scene& scene) { return RadioEnvironment(scene).heatmap(dep); }

/// Comma-separated, one row per grid line (increasing y), 6 significant digits.
inline void write_heatmap_csv(std::ostream& os, const Heatmap& h)
{
    char buf[32];
    for (int row = 0; row < h.resolution; ++row) {
        for (int col = 0; col < h.resolution; ++col) {
            std::snprintf(buf, sizeof buf, "%.6g", h.at(row, col));
            if (col)
                os << ',';
            os << buf;
        }
        os << '\n';
    }
}

} // namespace bcdbo

#endif
