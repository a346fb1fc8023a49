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

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <sstream>
#include <string>

#include "bcdbo/radio.hpp"

namespace {

using namespace bcdbo;
constexpr double pi = std::numbers::pi;

Vec3 unit(double x, double y, double z)
{
    const double n = std::sqrt(x * x + y * y + z * z);
    return {x / n, y / n, z / n};
}

Vec3 random_unit(RngStream& rng)
{
    for (;;) {
        const double x = rng.uniform(-1, 1), y = rng.uniform(-1, 1), z = rng.uniform(-1, 1);
        const double n2 = x * x + y * y + z * z;
        if (n2 > 1e-3 && n2 <= 1.0)
            return unit(x, y, z);
    }
}

/// Omni scene where every link sits inside the reference distance, so
/// P_rx = P_tx - pl0_db exactly.
Scene flat_scene(double noise_dbm)
{
    Scene s;
    s.antenna = AntennaPattern::omni();
    s.pathloss = {40.0, 1e6, 3.0};
    s.noise_power_dbm = noise_dbm;
    s.grid_resolution = 8;
    return s;
}

BsConfig bs_at(double x, double y, double p, Orientation o = {}) { return BsConfig{{x, y}, p, o}; }

Deployment random_deployment(RngStream& rng, std::size_t n, double area = 1000.0)
{
    const auto b = ParameterBounds::for_area(area, 10.0, 40.0);
    Deployment d;
    for (std::size_t i = 0; i < n; ++i)
        d.stations.push_back(random_block(rng, b));
    return d;
}

} // namespace

TEST(Rotation, IdentityLeavesBoresight)
{
    const Vec3 v = rotation_apply(Orientation(0, 0, 0), {1, 0, 0});
    EXPECT_DOUBLE_EQ(v[0], 1.0);
    EXPECT_DOUBLE_EQ(v[1], 0.0);
    EXPECT_DOUBLE_EQ(v[2], 0.0);
}

TEST(Rotation, QuarterYawMapsPlusYToBoresight)
{
    const Vec3 v = rotation_apply(Orientation(pi / 2, 0, 0), {0, 1, 0});
    EXPECT_NEAR(v[0], 1.0, 1e-15);
    EXPECT_NEAR(v[1], 0.0, 1e-15);
    EXPECT_NEAR(v[2], 0.0, 1e-15);
}

TEST(Rotation, PositivePitchIsDowntilt)
{
    // Boresight of a pitched-down antenna points below the horizon.
    const Vec3 w = rotation_unapply(Orientation(0, 0.3, 0), {1, 0, 0});
    EXPECT_LT(w[2], 0.0);
}

TEST(Rotation, RoundTripAndUnitNorm)
{
    const Orientation o(pi / 6, pi / 7, pi / 5);
    RngStream rng(8);
    for (int i = 0; i < 200; ++i) {
        const Vec3 v = random_unit(rng);
        const Vec3 local = rotation_apply(o, v);
        EXPECT_NEAR(std::hypot(local[0], local[1], local[2]), 1.0, 1e-12);
        const Vec3 back = rotation_unapply(o, local);
        for (int k = 0; k < 3; ++k)
            EXPECT_NEAR(back[k], v[k], 1e-12);
    }
}

TEST(Rotation, NonUnitInputIsRejected)
{
    EXPECT_THROW(rotation_apply(Orientation(), {1.0, 1.0, 0.0}), BoundsError);
}

TEST(AntennaGain, OmniIsZeroEverywhere)
{
    RngStream rng(1);
    const auto omni = AntennaPattern::omni();
    for (int i = 0; i < 100; ++i)
        EXPECT_EQ(antenna_gain_db(omni, random_unit(rng)), 0.0);
}

TEST(AntennaGain, DirectionalBoresightAndHalfBeamwidth)
{
    const AntennaPattern p;
    EXPECT_DOUBLE_EQ(antenna_gain_db(p, {1, 0, 0}), p.gmax_dbi);
    const double a = p.az_3db / 2.0;
    EXPECT_NEAR(antenna_gain_db(p, {std::cos(a), std::sin(a), 0}), p.gmax_dbi - 3.0, 1e-12);
    const double e = p.el_3db / 2.0;
    EXPECT_NEAR(antenna_gain_db(p, {std::cos(e), 0, std::sin(e)}), p.gmax_dbi - 3.0, 1e-12);
}

TEST(AntennaGain, BackLobeFloor)
{
    const AntennaPattern p;
    EXPECT_DOUBLE_EQ(antenna_gain_db(p, {-1, 0, 0}), p.gmax_dbi - p.attenuation_max_db);
}

TEST(AntennaGain, RollInvarianceHoldsIffBeamwidthsAreEqual)
{
    AntennaPattern iso;
    iso.az_3db = iso.el_3db = deg_to_rad(40.0);
    const AntennaPattern aniso; // 65 / 30 degrees
    RngStream rng(77);
    double max_iso_change = 0.0, max_aniso_change = 0.0;
    for (int i = 0; i < 500; ++i) {
        const Vec3 v = random_unit(rng);
        const double roll = rng.uniform(-pi, pi);
        const double c = std::cos(roll), s = std::sin(roll);
        // rotate v about the boresight axis
        const Vec3 r{v[0], c * v[1] - s * v[2], s * v[1] + c * v[2]};
        max_iso_change = std::max(max_iso_change, std::abs(antenna_gain_db(iso, v) - antenna_gain_db(iso, r)));
        max_aniso_change = std::max(max_aniso_change, std::abs(antenna_gain_db(aniso, v) - antenna_gain_db(aniso, r)));
    }
    EXPECT_LT(max_iso_change, 1e-9);
    EXPECT_GT(max_aniso_change, 1.0);
}

TEST(ReceivedPower, OmniReferenceAndOneDecade)
{
    Scene s;
    s.antenna = AntennaPattern::omni();
    s.bs_height_m = s.rx_height_m = 1.5;
    EXPECT_NEAR(received_power_dbm(bs_at(0, 0, 30), {0.5, 0}, s), -10.0, 1e-12); // clamped to d0
    EXPECT_NEAR(received_power_dbm(bs_at(0, 0, 30), {1, 0}, s), -10.0, 1e-12);
    EXPECT_NEAR(received_power_dbm(bs_at(0, 0, 30), {10, 0}, s), -40.0, 1e-12);
}

TEST(ReceivedPower, DirectionalBoresight)
{
    Scene s;
    s.bs_height_m = s.rx_height_m = 1.5;
    EXPECT_NEAR(received_power_dbm(bs_at(0, 0, 30), {1, 0}, s), 5.0, 1e-12);
}

TEST(ReceivedPower, NeverDecreasesWithOwnPower)
{
    RngStream rng(31);
    for (int t = 0; t < 50; ++t) {
        Scene s;
        s.pathloss.exponent = rng.uniform(2.0, 4.0);
        s.antenna.kind = rng.uniform() < 0.5 ? AntennaKind::omni : AntennaKind::directional;
        const RadioEnvironment env(s);
        const auto dep = random_deployment(rng, 1);
        BsConfig louder = dep.stations[0];
        louder.power_dbm += rng.uniform(0.0, 10.0);
        for (const auto& rx : env.grid().points())
            ASSERT_GE(env.received_power_dbm(louder, rx), env.received_power_dbm(dep.stations[0], rx));
    }
}

TEST(Sinr, SingleBsNoInterference)
{
    const Scene s = flat_scene(-90.0);
    Deployment d{{bs_at(100, 100, -20.0)}};
    EXPECT_NEAR(sinr(0, {300, 300}, d, s), 1000.0, 1000.0 * 1e-12);
}

TEST(Sinr, EqualPowersTendToOne)
{
    const Scene s = flat_scene(-300.0);
    Deployment d{{bs_at(100, 100, -20.0), bs_at(900, 900, -20.0)}};
    EXPECT_NEAR(sinr(0, {500, 500}, d, s), 1.0, 1e-12);
    EXPECT_NEAR(sinr(1, {500, 500}, d, s), 1.0, 1e-12);
}

TEST(Sinr, TwoBsHandComputed)
{
    // 1e-6 / (1e-7 + 1e-9)
    const Scene s = flat_scene(-90.0);
    Deployment d{{bs_at(100, 100, -20.0), bs_at(900, 900, -30.0)}};
    EXPECT_NEAR(sinr(0, {500, 500}, d, s), 9.900990099009901, 1e-12);
}

TEST(Sinr, StrictlyDecreasesWithInterfererPower)
{
    RngStream rng(12);
    Scene s;
    const RadioEnvironment env(s);
    for (int t = 0; t < 200; ++t) {
        auto dep = random_deployment(rng, 3);
        const Position rx{rng.uniform(0, 1000), rng.uniform(0, 1000)};
        const double before = env.sinr(0, rx, dep);
        dep.stations[1 + rng.below(2)].power_dbm += rng.uniform(0.5, 5.0);
        ASSERT_LT(env.sinr(0, rx, dep), before);
    }
}

TEST(Throughput, ShannonExamples)
{
    Scene s = flat_scene(-300.0);
    s.bandwidth_hz = 1e6;
    Deployment two{{bs_at(100, 100, -20.0), bs_at(900, 900, -20.0)}};
    EXPECT_NEAR(throughput(0, {500, 500}, two, s), 1e6, 1e-6);

    s.noise_power_dbm = -60.0 - 10.0 * std::log10(3.0);
    Deployment one{{bs_at(100, 100, -20.0)}};
    EXPECT_NEAR(throughput(0, {500, 500}, one, s), 2e6, 1e-6);

    s.noise_power_dbm = -60.0;
    Deployment silent{{bs_at(100, 100, -400.0)}};
    EXPECT_NEAR(throughput(0, {500, 500}, silent, s), 0.0, 1e-6);
}

TEST(Objective, ConstantFieldAveragesToTheConstant)
{
    Scene s = flat_scene(-90.0);
    Deployment d{{bs_at(123, 456, -20.0)}};
    const double c = s.bandwidth_hz * std::log2(1.0 + 1000.0);
    EXPECT_NEAR(objective(d, s), c, c * 1e-12);
    const Heatmap h = heatmap(d, s);
    for (double v : h.values)
        EXPECT_NEAR(v, c, c * 1e-12);
}

TEST(Objective, LinearInBandwidth)
{
    RngStream rng(4);
    Scene s;
    s.noise_power_dbm = -95.0;
    const auto dep = random_deployment(rng, 4);
    const double f1 = objective(dep, s);
    s.bandwidth_hz *= 2.0;
    EXPECT_EQ(objective(dep, s), 2.0 * f1);
}

TEST(Objective, MirrorSymmetry)
{
    Scene s;
    s.grid_resolution = 20;
    const Deployment dep{{bs_at(300, 400, 30, Orientation(0.3, 0.2, 0.1)),
                          bs_at(700, 400, 30, Orientation(pi - 0.3, 0.2, -0.1))}};
    // mirror x -> L - x: yaw -> pi - yaw, roll -> -roll
    const Deployment mirrored{{bs_at(700, 400, 30, Orientation(pi - 0.3, 0.2, -0.1)),
                               bs_at(300, 400, 30, Orientation(0.3, 0.2, 0.1))}};
    const RadioEnvironment env(s);
    const double a = env.objective(dep);
    EXPECT_NEAR(env.objective(mirrored), a, 1e-12 * a);

    // a deployment equal to its own mirror image has a mirror-symmetric heatmap
    const Heatmap h = env.heatmap(dep);
    for (int row = 0; row < h.resolution; ++row)
        for (int col = 0; col < h.resolution; ++col)
            ASSERT_NEAR(h.at(row, col), h.at(row, h.resolution - 1 - col), 1e-9 * h.at(row, col));
}

TEST(Objective, PureAndBitReproducible)
{
    RngStream rng(9);
    Scene s;
    s.shadowing.sigma_db = 6.0;
    const auto dep = random_deployment(rng, 5);
    EXPECT_EQ(objective(dep, s), objective(dep, s));
    const RadioEnvironment env(s);
    EXPECT_EQ(env.objective(dep), env.objective(dep));
}

TEST(Objective, OmniIgnoresOrientation)
{
    RngStream rng(10);
    Scene s;
    s.antenna = AntennaPattern::omni();
    const RadioEnvironment env(s);
    auto dep = random_deployment(rng, 4);
    const double base = env.objective(dep);
    for (auto& bs : dep.stations)
        bs.orientation = Orientation(rng.uniform(-pi, pi), rng.uniform(-1.5, 1.5), rng.uniform(-pi, pi));
    EXPECT_EQ(env.objective(dep), base);
}

TEST(Objective, RollMattersForAnisotropicPattern)
{
    RngStream rng(13);
    Scene s; // 65 x 30 degree beam
    const RadioEnvironment env(s);
    auto dep = random_deployment(rng, 3);
    const double base = env.objective(dep);
    dep.stations[0].orientation = Orientation(dep.stations[0].orientation.yaw(), dep.stations[0].orientation.pitch(),
                                              dep.stations[0].orientation.roll() + 1.0);
    EXPECT_NE(env.objective(dep), base);
}

TEST(Heatmap, MeanEqualsObjective)
{
    RngStream rng(14);
    Scene s;
    s.grid_resolution = 25;
    const RadioEnvironment env(s);
    for (int t = 0; t < 5; ++t) {
        const auto dep = random_deployment(rng, 6);
        const double f = env.objective(dep);
        const Heatmap h = env.heatmap(dep);
        ASSERT_EQ(h.values.size(), 625u);
        EXPECT_NEAR(h.mean(), f, 1e-9 * f);
    }
}

TEST(Heatmap, CsvExportFormat)
{
    Heatmap h{2, {1234567.0, 0.5, 3.0, 1e-7}};
    std::ostringstream os;
    write_heatmap_csv(os, h);
    EXPECT_EQ(os.str(), "1.23457e+06,0.5\n3,1e-07\n");
}

TEST(Shadowing, SeededFieldWithRequestedSpread)
{
    ShadowingParams p;
    p.sigma_db = 8.0;
    const ShadowingField a(p), b(p);
    RngStream rng(2);
    double s = 0.0, s2 = 0.0;
    const int n = 20000;
    for (int i = 0; i < n; ++i) {
        const Position bs{rng.uniform(0, 1000), rng.uniform(0, 1000)};
        const Position rx{rng.uniform(0, 1000), rng.uniform(0, 1000)};
        const double v = a(bs, rx);
        ASSERT_EQ(v, b(bs, rx));
        s += v;
        s2 += v * v;
    }
    const double mean = s / n;
    const double sd = std::sqrt(s2 / n - mean * mean);
    EXPECT_NEAR(mean, 0.0, 1.0);
    EXPECT_NEAR(sd, 8.0, 1.5);
    EXPECT_FALSE(ShadowingField(ShadowingParams{}).enabled());
}

TEST(Scene, ValidationRejectsBadValues)
{
    Scene s;
    s.grid_resolution = 1;
    EXPECT_THROW(s.validate(), ConfigError);
    s = Scene{};
    s.bandwidth_hz = 0.0;
    EXPECT_THROW(s.validate(), ConfigError);
    s = Scene{};
    s.antenna.az_3db = 0.0;
    EXPECT_THROW(s.validate(), ConfigError);
    s = Scene{};
    s.pathloss.d0_m = 0.0;
    EXPECT_THROW(RadioEnvironment{s}, ConfigError);
}
