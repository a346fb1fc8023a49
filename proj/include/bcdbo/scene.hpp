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

#ifndef BCDBO_SCENE_HPP
#define BCDBO_SCENE_HPP

#include <cmath>
#include <cstdint>
#include <numbers>

#include "bcdbo/error.hpp"

namespace bcdbo {

inline constexpr double deg_to_rad(double deg) noexcept { return deg * std::numbers::pi / 180.0; }
inline constexpr double rad_to_deg(double rad) noexcept { return rad * 180.0 / std::numbers::pi; }

/// Thermal noise power kT*B at 290 K, in dBm.
inline double thermal_noise_dbm(double bandwidth_hz) { return -174.0 + 10.0 * std::log10(bandwidth_hz); }

/// Log-distance path loss: PL(d) = pl0_db + 10 n log10(d / d0).
struct PathLossParams {
    double pl0_db = 40.0;
    double d0_m = 1.0;
    double exponent = 3.0;

    void validate() const
    {
        if (!(d0_m > 0.0))
            throw ConfigError("pathloss.d0_m must be > 0");
        if (!(exponent > 0.0))
            throw ConfigError("pathloss.exponent must be > 0");
    }
};

enum class AntennaKind { omni, directional };

/// Parabolic-in-dB pattern with separate azimuth / elevation beamwidths.
struct AntennaPattern {
    AntennaKind kind = AntennaKind::directional;
    double gmax_dbi = 15.0;
    double az_3db = deg_to_rad(65.0);
    double el_3db = deg_to_rad(30.0);
    double attenuation_max_db = 30.0;

    static AntennaPattern omni()
    {
        AntennaPattern p;
        p.kind = AntennaKind::omni;
        return p;
    }

    void validate() const
    {
        constexpr double pi = std::numbers::pi;
        if (!(az_3db > 0.0 && az_3db <= pi))
            throw ConfigError("antenna.az_3db_deg must lie in (0, 180]");
        if (!(el_3db > 0.0 && el_3db <= pi))
            throw ConfigError("antenna.el_3db_deg must lie in (0, 180]");
        if (!(attenuation_max_db >= 0.0))
            throw ConfigError("antenna.attenuation_max_db must be >= 0");
    }
};

/// Optional link shadowing; sigma_db == 0 disables it.
struct ShadowingParams {
    double sigma_db = 0.0;
    std::uint64_t seed = 1;
    double decorrelation_m = 100.0;

    bool enabled() const noexcept { return sigma_db > 0.0; }

    void validate() const
    {
        if (!(sigma_db >= 0.0))
            throw ConfigError("shadowing.sigma_db must be >= 0");
        if (!(decorrelation_m > 0.0))
            throw ConfigError("shadowing.decorrelation_m must be > 0");
    }
};

/// Fixed context of every objective evaluation. The area is the square
/// [0, area_m] x [0, area_m]; BS and receiver heights are constants.
struct Scene {
    double area_m = 1000.0;
    double bs_height_m = 20.0;
    double rx_height_m = 1.5;
    double bandwidth_hz = 20e6;
    double noise_power_dbm = thermal_noise_dbm(20e6);
    PathLossParams pathloss;
    AntennaPattern antenna;
    int grid_resolution = 40;
    ShadowingParams shadowing;

    double noise_mw() const { return std::pow(10.0, noise_power_dbm / 10.0); }

    void validate() const
    {
        if (!(area_m > 0.0))
            throw ConfigError("scene.area_m must be > 0");
        if (!(bandwidth_hz > 0.0))
            throw ConfigError("scene.bandwidth_hz must be > 0");
        if (grid_resolution < 2)
            throw ConfigError("scene.grid_resolution must be >= 2");
        if (!std::isfinite(noise_power_dbm))
            throw ConfigError("scene.noise_power_dbm must be finite");
        pathloss.validate();
        antenna.validate();
        shadowing.validate();
    }
};

} // namespace bcdbo

#endif
