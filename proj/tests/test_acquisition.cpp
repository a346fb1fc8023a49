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
#include <vector>

#include "bcdbo/acquisition.hpp"
#include "oracles.hpp"

namespace {

using namespace bcdbo;

GpModel toy_model(std::uint64_t seed, int m, int d)
{
    RngStream rng(seed);
    Eigen::MatrixXd X(m, d);
    std::vector<double> y(m);
    for (int i = 0; i < m; ++i) {
        double s = 0.0;
        for (int k = 0; k < d; ++k) {
            X(i, k) = rng.uniform();
            s += std::cos(4.0 * X(i, k) - k);
        }
        y[i] = 1e6 * (3.0 + s);
    }
    return fit(X, y, KernelParams::isotropic(0.3, 1.0, 1e-4));
}

} // namespace

TEST(NormalFunctions, ReferenceValues)
{
    EXPECT_NEAR(normal_pdf(0.0), 0.3989422804014327, 1e-15);
    EXPECT_NEAR(normal_cdf(0.0), 0.5, 1e-15);
    EXPECT_NEAR(normal_cdf(1.0) + normal_pdf(1.0), 1.0833154705876864, 1e-14);
    EXPECT_NEAR(normal_cdf(-40.0), 0.0, 1e-300);
}

TEST(ExpectedImprovement, AtIncumbentMeanIsStdOverRootTwoPi)
{
    EXPECT_NEAR(expected_improvement(0.0, 1.0, 0.0), 0.3989422804014327, 1e-12);
    EXPECT_NEAR(expected_improvement(5.0, 2.0, 5.0), 2.0 * 0.3989422804014327, 1e-12);
}

TEST(ExpectedImprovement, OneSigmaAbove)
{
    EXPECT_NEAR(expected_improvement(1.0, 1.0, 0.0), 1.0833154705876864, 1e-12);
}

TEST(ExpectedImprovement, ZeroStdIsPositivePart)
{
    EXPECT_EQ(expected_improvement(3.0, 0.0, 1.0), 2.0);
    EXPECT_EQ(expected_improvement(1.0, 0.0, 3.0), 0.0);
    EXPECT_EQ(expected_improvement(3.0, 0.0, 1.0, 0.5), 1.5);
}

TEST(ExpectedImprovement, NegativeStdRejected)
{
    EXPECT_THROW(expected_improvement(0.0, -1e-3, 0.0), BoundsError);
}

TEST(ExpectedImprovement, MatchesMonteCarloOracle)
{
    struct Case {
        double mean, sd, y_best, xi;
    };
    const Case cases[] = {{0.0, 1.0, 0.0, 0.0},  {1.0, 1.0, 0.0, 0.0},   {-1.5, 0.7, 0.0, 0.0},
                          {2.0, 3.0, 1.0, 0.2},  {10.0, 0.5, 10.4, 0.0}, {0.0, 2.0, -3.0, 0.5}};
    std::uint64_t seed = 100;
    for (const auto& c : cases) {
        const auto mc = oracle::monte_carlo_ei(c.mean, c.sd, c.y_best, c.xi, 10'000'000, seed++);
        const double ei = expected_improvement(c.mean, c.sd, c.y_best, c.xi);
        EXPECT_LE(std::abs(ei - mc.mean), 3.0 * mc.standard_error)
            << c.mean << " " << c.sd << " " << c.y_best << " " << c.xi;
    }
}

TEST(ExpectedImprovement, NonNegativeAndMonotone)
{
    RngStream rng(1);
    for (int t = 0; t < 10000; ++t) {
        const double mu = rng.uniform(-5, 5), sd = rng.uniform(0, 3), yb = rng.uniform(-5, 5);
        const double ei = expected_improvement(mu, sd, yb);
        ASSERT_GE(ei, 0.0);
        const double d = rng.uniform(1e-3, 1.0);
        ASSERT_GE(expected_improvement(mu + d, sd, yb), ei);
        ASSERT_GE(expected_improvement(mu, sd + d, yb), ei);
        ASSERT_LE(expected_improvement(mu, sd, yb + d), ei);
    }
}

TEST(ExpectedImprovement, ContinuousAtZeroStd)
{
    for (double mu : {-2.0, -1e-3, 0.0, 1e-3, 2.0}) {
        EXPECT_NEAR(expected_improvement(mu, 1e-9, 0.0), expected_improvement(mu, 0.0, 0.0), 1e-9);
    }
}

TEST(DrawCandidates, RowMajorDrawOrderInUnitBox)
{
    RngStream a(77), b(77);
    const Eigen::MatrixXd c = draw_candidates(5, 3, a);
    for (int i = 0; i < 5; ++i)
        for (int k = 0; k < 3; ++k) {
            EXPECT_EQ(c(i, k), b.uniform());
            EXPECT_GE(c(i, k), 0.0);
            EXPECT_LT(c(i, k), 1.0);
        }
}

TEST(AcquisitionConfig, RejectsInvalid)
{
    EXPECT_THROW((AcquisitionConfig{0, 0.0}.validate()), ConfigError);
    EXPECT_THROW((AcquisitionConfig{10, -1.0}.validate()), ConfigError);
    EXPECT_NO_THROW((AcquisitionConfig{1, 0.0}.validate()));
}

TEST(ProposeNext, InsideBoxAndMatchesBruteForceArgmax)
{
    for (int d : {1, 6, 12}) {
        const GpModel model = toy_model(10 + d, 40, d);
        const double y_best = model.max_raw_target();
        for (std::uint64_t s = 0; s < 5; ++s) {
            AcquisitionConfig cfg{512, s % 2 ? 0.0 : 0.01 * model.target_scale()};
            RngStream rng(1000 + s), replay(1000 + s);
            const Proposal p = propose_next(model, y_best, cfg, rng);
            ASSERT_EQ(p.x.size(), static_cast<std::size_t>(d));
            for (double v : p.x) {
                EXPECT_GE(v, 0.0);
                EXPECT_LT(v, 1.0);
            }
            const Eigen::MatrixXd cand = draw_candidates(cfg.n_candidates, model.dim(), replay);
            Eigen::VectorXd mean, var;
            model.predict_batch(cand, mean, var);
            int arg = 0;
            double best = -1.0;
            for (int i = 0; i < cfg.n_candidates; ++i) {
                const double ei = expected_improvement(mean(i), std::sqrt(var(i)), y_best, cfg.xi);
                if (ei > best) {
                    best = ei;
                    arg = i;
                }
            }
            EXPECT_EQ(p.index, arg) << "d=" << d << " s=" << s;
            EXPECT_NEAR(p.ei, best, 1e-9 * std::max(best, 1e-300) + 1e-12 * model.target_scale());
            for (int k = 0; k < d; ++k)
                EXPECT_EQ(p.x[k], cand(p.index, k));
        }
    }
}

TEST(ProposeNext, ShortLengthscaleMatchesBruteForce)
{
    // Most candidates see a numerically zero kernel row and are resolved from
    // the bound alone; the result must still be the exact argmax.
    RngStream rng(44);
    for (double ell : {0.01, 0.03, 0.08}) {
        Eigen::MatrixXd X(60, 2);
        std::vector<double> y(60);
        for (int i = 0; i < 60; ++i) {
            X.row(i) << rng.uniform(), rng.uniform();
            y[i] = std::sin(9.0 * X(i, 0)) * std::cos(7.0 * X(i, 1));
        }
        const GpModel model = fit(X, y, KernelParams::isotropic(ell, 1.0, 1e-6));
        RngStream a(45), replay(45);
        const AcquisitionConfig cfg{2048, 0.0};
        const Proposal p = propose_next(model, model.max_raw_target(), cfg, a);
        const Eigen::MatrixXd cand = draw_candidates(cfg.n_candidates, 2, replay);
        Eigen::VectorXd mean, var;
        model.predict_batch(cand, mean, var);
        int arg = 0;
        double best = -1.0;
        for (int i = 0; i < cfg.n_candidates; ++i) {
            const double ei = expected_improvement(mean(i), std::sqrt(var(i)), model.max_raw_target());
            if (ei > best) {
                best = ei;
                arg = i;
            }
        }
        EXPECT_EQ(p.index, arg) << "ell=" << ell;
    }
}

TEST(ProposeNext, TiesGoToLowestIndex)
{
    // Zero EI everywhere: the first candidate must be returned.
    Eigen::MatrixXd X(2, 2);
    X << 0.2, 0.2, 0.8, 0.8;
    const std::vector<double> y{0.0, 1.0};
    const GpModel model = fit(X, y, KernelParams::isotropic(0.3, 1.0, 1e-4));
    RngStream rng(5);
    const Proposal p = propose_next(model, 1e9, AcquisitionConfig{64, 0.0}, rng);
    EXPECT_EQ(p.index, 0);
    EXPECT_EQ(p.ei, 0.0);
}

TEST(ProposeNext, DeterministicGivenStreamState)
{
    const GpModel model = toy_model(3, 30, 6);
    RngStream a(9), b(9);
    const Proposal p = propose_next(model, model.max_raw_target(), AcquisitionConfig{}, a);
    const Proposal q = propose_next(model, model.max_raw_target(), AcquisitionConfig{}, b);
    EXPECT_EQ(p.x, q.x);
    EXPECT_EQ(p.ei, q.ei);
    EXPECT_EQ(a.draws(), b.draws());
}
