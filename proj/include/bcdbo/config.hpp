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

#ifndef BCDBO_CONFIG_HPP
#define BCDBO_CONFIG_HPP

#include <charconv>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <functional>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "bcdbo/domain.hpp"
#include "bcdbo/error.hpp"
#include "bcdbo/optimizer.hpp"
#include "bcdbo/scene.hpp"

namespace bcdbo {

/// Everything one optimizer run needs. Fields mirror the flat config keys;
/// angles are kept in degrees here and converted when the Scene is built.
struct RunConfig {
    Method method = Method::bcd_bo;
    std::size_t n_tx = 16;
    std::uint64_t seed = 1;
    std::string out_dir = "out";

    double area_m = 1000.0;
    double bs_height_m = 20.0;
    double rx_height_m = 1.5;
    double bandwidth_hz = 20e6;
    std::optional<double> noise_power_dbm; // default: thermal noise over the bandwidth
    int grid_resolution = 40;

    double pl0_db = 40.0;
    double d0_m = 1.0;
    double pathloss_exponent = 3.0;

    AntennaKind antenna_kind = AntennaKind::directional;
    double gmax_dbi = 15.0;
    double az_3db_deg = 65.0;
    double el_3db_deg = 30.0;
    double attenuation_max_db = 30.0;

    double shadowing_sigma_db = 0.0;
    std::uint64_t shadowing_seed = 1;
    double shadowing_decorrelation_m = 100.0;

    std::optional<int> t_total; // default: 100 n_tx
    int t_sub = 25;
    int n_init = 10;
    int n_init_joint = 10;

    double power_min_dbm = 10.0;
    double power_max_dbm = 40.0;

    int n_candidates = 2048;
    double xi = 0.0;

    int resolved_t_total() const { return t_total ? *t_total : 100 * static_cast<int>(n_tx); }

    double resolved_noise_power_dbm() const
    {
        return noise_power_dbm ? *noise_power_dbm : thermal_noise_dbm(bandwidth_hz);
    }

    /// Scene as configured (antenna as given by antenna.kind).
    Scene scene() const
    {
        Scene s;
        s.area_m = area_m;
        s.bs_height_m = bs_height_m;
        s.rx_height_m = rx_height_m;
        s.bandwidth_hz = bandwidth_hz;
        s.noise_power_dbm = resolved_noise_power_dbm();
        s.grid_resolution = grid_resolution;
        s.pathloss = {pl0_db, d0_m, pathloss_exponent};
        s.antenna.kind = antenna_kind;
        s.antenna.gmax_dbi = gmax_dbi;
        s.antenna.az_3db = deg_to_rad(az_3db_deg);
        s.antenna.el_3db = deg_to_rad(el_3db_deg);
        s.antenna.attenuation_max_db = attenuation_max_db;
        s.shadowing = {shadowing_sigma_db, shadowing_seed, shadowing_decorrelation_m};
        return s;
    }

    /// Scene seen by the selected method: the square baselines force their antenna kind.
    Scene scene_for_method() const
    {
        Scene s = scene();
        if (method == Method::square_omni)
            s.antenna.kind = AntennaKind::omni;
        else if (method == Method::square_dir)
            s.antenna.kind = AntennaKind::directional;
        return s;
    }

    OptimizerSettings optimizer_settings() const
    {
        OptimizerSettings o;
        o.n_tx = n_tx;
        o.t_total = resolved_t_total();
        o.t_sub = t_sub;
        o.n_init = n_init;
        o.n_init_joint = n_init_joint;
        o.bounds = ParameterBounds::for_area(area_m, power_min_dbm, power_max_dbm);
        o.acquisition = {n_candidates, xi};
        return o;
    }
};

namespace detail {

inline std::string_view trim(std::string_view s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos)
        return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

inline std::string format_double(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

[[noreturn]] inline void bad_value(std::string_view key, std::string_view value, std::string_view expected)
{
    throw ConfigError("config key '" + std::string(key) + "': expected " + std::string(expected) + ", got '" +
                      std::string(value) + "'");
}

inline double parse_double(std::string_view key, std::string_view v)
{
    double out = 0.0;
    const auto* end = v.data() + v.size();
    auto [ptr, ec] = std::from_chars(v.data(), end, out);
    if (ec != std::errc() || ptr != end || v.empty())
        bad_value(key, v, "a number");
    return out;
}

inline std::int64_t parse_int(std::string_view key, std::string_view v, std::int64_t lo, std::int64_t hi)
{
    std::int64_t out = 0;
    const auto* end = v.data() + v.size();
    auto [ptr, ec] = std::from_chars(v.data(), end, out);
    if (ec != std::errc() || ptr != end || v.empty())
        bad_value(key, v, "an integer");
    if (out < lo || out > hi)
        bad_value(key, v, "an integer in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
    return out;
}

inline std::uint64_t parse_u64(std::string_view key, std::string_view v)
{
    std::uint64_t out = 0;
    const auto* end = v.data() + v.size();
    auto [ptr, ec] = std::from_chars(v.data(), end, out);
    if (ec != std::errc() || ptr != end || v.empty())
        bad_value(key, v, "a non-negative integer");
    return out;
}

struct ConfigKey {
    std::string_view name;
    std::function<void(RunConfig&, std::string_view)> set;
    std::function<std::string(const RunConfig&)> get;
};

constexpr std::int64_t kIntMax = 1'000'000'000;

#define BCDBO_DOUBLE_KEY(NAME, FIELD)                                                                    \
    ConfigKey{NAME, [](RunConfig& c, std::string_view v) { c.FIELD = parse_double(NAME, v); },          \
              [](const RunConfig& c) { return format_double(c.FIELD); }}
#define BCDBO_INT_KEY(NAME, FIELD, LO)                                                                   \
    ConfigKey{NAME,                                                                                      \
              [](RunConfig& c, std::string_view v) {                                                     \
                  c.FIELD = static_cast<decltype(c.FIELD)>(parse_int(NAME, v, LO, kIntMax));             \
              },                                                                                         \
              [](const RunConfig& c) { return std::to_string(c.FIELD); }}
#define BCDBO_U64_KEY(NAME, FIELD)                                                                       \
    ConfigKey{NAME, [](RunConfig& c, std::string_view v) { c.FIELD = parse_u64(NAME, v); },             \
              [](const RunConfig& c) { return std::to_string(c.FIELD); }}

inline const std::vector<ConfigKey>& config_keys()
{
    static const std::vector<ConfigKey> keys = {
        ConfigKey{"run.method", [](RunConfig& c, std::string_view v) { c.method = parse_method(v); },
                  [](const RunConfig& c) { return std::string(method_name(c.method)); }},
        BCDBO_INT_KEY("run.n_tx", n_tx, 1),
        BCDBO_U64_KEY("run.seed", seed),
        ConfigKey{"run.out", [](RunConfig& c, std::string_view v) { c.out_dir = std::string(v); },
                  [](const RunConfig& c) { return c.out_dir; }},

        BCDBO_DOUBLE_KEY("scene.area_m", area_m),
        BCDBO_DOUBLE_KEY("scene.bs_height_m", bs_height_m),
        BCDBO_DOUBLE_KEY("scene.rx_height_m", rx_height_m),
        BCDBO_DOUBLE_KEY("scene.bandwidth_hz", bandwidth_hz),
        ConfigKey{"scene.noise_power_dbm",
                  [](RunConfig& c, std::string_view v) { c.noise_power_dbm = parse_double("scene.noise_power_dbm", v); },
                  [](const RunConfig& c) { return format_double(c.resolved_noise_power_dbm()); }},
        BCDBO_INT_KEY("scene.grid_resolution", grid_resolution, 2),

        BCDBO_DOUBLE_KEY("pathloss.pl0_db", pl0_db),
        BCDBO_DOUBLE_KEY("pathloss.d0_m", d0_m),
        BCDBO_DOUBLE_KEY("pathloss.exponent", pathloss_exponent),

        ConfigKey{"antenna.kind",
                  [](RunConfig& c, std::string_view v) {
                      if (v == "omni")
                          c.antenna_kind = AntennaKind::omni;
                      else if (v == "directional")
                          c.antenna_kind = AntennaKind::directional;
                      else
                          bad_value("antenna.kind", v, "omni or directional");
                  },
                  [](const RunConfig& c) {
                      return std::string(c.antenna_kind == AntennaKind::omni ? "omni" : "directional");
                  }},
        BCDBO_DOUBLE_KEY("antenna.gmax_dbi", gmax_dbi),
        BCDBO_DOUBLE_KEY("antenna.az_3db_deg", az_3db_deg),
        BCDBO_DOUBLE_KEY("antenna.el_3db_deg", el_3db_deg),
        BCDBO_DOUBLE_KEY("antenna.attenuation_max_db", attenuation_max_db),

        BCDBO_DOUBLE_KEY("shadowing.sigma_db", shadowing_sigma_db),
        BCDBO_U64_KEY("shadowing.seed", shadowing_seed),
        BCDBO_DOUBLE_KEY("shadowing.decorrelation_m", shadowing_decorrelation_m),

        ConfigKey{"budget.t_total",
                  [](RunConfig& c, std::string_view v) {
                      c.t_total = static_cast<int>(parse_int("budget.t_total", v, 1, kIntMax));
                  },
                  [](const RunConfig& c) { return std::to_string(c.resolved_t_total()); }},
        BCDBO_INT_KEY("budget.t_sub", t_sub, 1),
        BCDBO_INT_KEY("budget.n_init", n_init, 0),
        BCDBO_INT_KEY("budget.n_init_joint", n_init_joint, 0),

        BCDBO_DOUBLE_KEY("bounds.power_min_dbm", power_min_dbm),
        BCDBO_DOUBLE_KEY("bounds.power_max_dbm", power_max_dbm),

        BCDBO_INT_KEY("acquisition.n_candidates", n_candidates, 1),
        BCDBO_DOUBLE_KEY("acquisition.xi", xi),
    };
    return keys;
}

#undef BCDBO_DOUBLE_KEY
#undef BCDBO_INT_KEY
#undef BCDBO_U64_KEY

/// Keys written by the manifest that describe results, accepted and ignored on input.
inline bool is_result_key(std::string_view key) { return key.starts_with("result."); }

} // namespace detail

/// Applies one `key = value` setting; unknown keys are rejected.
inline void apply_setting(RunConfig& cfg, std::string_view key, std::string_view value)
{
    if (detail::is_result_key(key))
        return;
    for (const auto& k : detail::config_keys())
        if (k.name == key) {
            k.set(cfg, value);
            return;
        }
    throw ConfigError("unknown config key '" + std::string(key) + "'");
}

/// Parses `section.key = value` lines; `#` starts a comment.
inline void apply_config_text(RunConfig& cfg, std::istream& in, std::string_view source = "<config>")
{
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string_view s = line;
        if (const auto hash = s.find('#'); hash != std::string_view::npos)
            s = s.substr(0, hash);
        s = detail::trim(s);
        if (s.empty())
            continue;
        const auto eq = s.find('=');
        if (eq == std::string_view::npos)
            throw ConfigError(std::string(source) + ":" + std::to_string(lineno) + ": expected 'section.key = value'");
        const auto key = detail::trim(s.substr(0, eq));
        const auto value = detail::trim(s.substr(eq + 1));
        try {
            apply_setting(cfg, key, value);
        } catch (const ConfigError& e) {
            throw ConfigError(std::string(source) + ":" + std::to_string(lineno) + ": " + e.what());
        }
    }
}

/// Splits a `key=value` override.
inline std::pair<std::string, std::string> split_override(std::string_view kv)
{
    const auto eq = kv.find('=');
    if (eq == std::string_view::npos)
        throw ConfigError("override '" + std::string(kv) + "': expected key=value");
    return {std::string(detail::trim(kv.substr(0, eq))), std::string(detail::trim(kv.substr(eq + 1)))};
}

/// Cross-field invariants; errors name the offending key.
inline void validate(const RunConfig& c)
{
    c.scene().validate();
    if (!(c.bs_height_m > 0.0))
        throw ConfigError("scene.bs_height_m must be > 0");
    if (!(c.rx_height_m >= 0.0))
        throw ConfigError("scene.rx_height_m must be >= 0");
    if (!(c.power_min_dbm < c.power_max_dbm))
        throw ConfigError("bounds.power_min_dbm must be < bounds.power_max_dbm");
    if (c.n_tx < 1)
        throw ConfigError("run.n_tx must be >= 1");
    if (c.n_init >= c.t_sub)
        throw ConfigError("budget.n_init must be < budget.t_sub");
    const int total = c.resolved_t_total();
    if (c.method == Method::bcd_bo && total < c.t_sub)
        throw ConfigError("budget.t_total must be >= budget.t_sub for bcd-bo");
    if (c.method != Method::bcd_bo && c.n_init_joint >= total)
        throw ConfigError("budget.n_init_joint must be < budget.t_total");
    if ((c.method == Method::square_omni || c.method == Method::square_dir) && !is_perfect_square(c.n_tx))
        throw ConfigError("run.n_tx = " + std::to_string(c.n_tx) + " is not a perfect square, required by " +
                          std::string(method_name(c.method)) + "; use naive-bo or bcd-bo for free placement");
    if (!(c.xi >= 0.0))
        throw ConfigError("acquisition.xi must be >= 0");
}

/**
 * Resolves a RunConfig: defaults, then the file (if `path` is non-empty),
 * then `overrides` in order. The result is validated.
 */
inline RunConfig parse_config(const std::string& path, const std::vector<std::pair<std::string, std::string>>& overrides = {})
{
    RunConfig cfg;
    if (!path.empty()) {
        std::ifstream in(path);
        if (!in)
            throw IoError("cannot open config file '" + path + "'");
        apply_config_text(cfg, in, path);
    }
    for (const auto& [k, v] : overrides)
        apply_setting(cfg, k, v);
    validate(cfg);
    return cfg;
}

/// Every resolved setting as `key = value` lines, in parse_config's format.
inline void write_config(std::ostream& os, const RunConfig& cfg)
{
    for (const auto& k : detail::config_keys())
        os << k.name << " = " << k.get(cfg) << '\n';
}

} // namespace bcdbo

#endif
