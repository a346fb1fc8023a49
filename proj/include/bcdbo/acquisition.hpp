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

#ifndef BCDBO_ACQUISITION_HPP
#define BCDBO_ACQUISITION_HPP

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <vector>

#include "bcdbo/error.hpp"
#include "bcdbo/gp.hpp"
#include "bcdbo/rng.hpp"

namespace bcdbo {

/// Standard normal CDF, 0.5 erfc(-z / sqrt 2); erfc keeps full relative accuracy in the lower tail.
inline double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

inline double normal_pdf(double z) { return std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi); }

/// Expected improvement above y_best (maximization). std == 0 degenerates to max(mean - y_best - xi, 0).
inline double expected_improvement(double mean, double std_dev, double y_best, double xi = 0.0)
{
    if (std_dev < 0.0 || std::isnan(std_dev))
        throw BoundsError("expected_improvement: negative standard deviation");
    const double delta = mean - y_best - xi;
    if (std_dev == 0.0)
        return std::max(delta, 0.0);
    const double z = delta / std_dev;
    return std::max(0.0, delta * normal_cdf(z) + std_dev * normal_pdf(z));
}

struct AcquisitionConfig {
    int n_candidates = 2048;
    double xi = 0.0;

    void validate() const
    {
        if (n_candidates < 1)
            throw ConfigError("acquisition.n_candidates must be >= 1");
        if (!(xi >= 0.0))
            throw ConfigError("acquisition.xi must be >= 0");
    }
};

/// n x d uniform points in the unit box, drawn row by row.
inline Eigen::MatrixXd draw_candidates(int n, std::size_t dim, RngStream& rng)
{
    Eigen::MatrixXd c(n, static_cast<Eigen::Index>(dim));
    for (int i = 0; i < n; ++i)
        for (std::size_t d = 0; d < dim; ++d)
            c(i, static_cast<Eigen::Index>(d)) = rng.uniform();
    return c;
}

struct Proposal {
    std::vector<double> x;
    double ei = 0.0;
    int index = 0;
};

/**
 * Draws cfg.n_candidates uniform points with rng and returns the EI argmax,
 * ties going to the lowest draw index.
 *
 * Exact variances are only computed where they can matter. Every candidate
 * first gets an EI upper bound from a cheap variance bound
 * (k^T A^-1 k >= k_j^2 / A_jj for any j); candidates are then resolved in
 * decreasing bound order until the best exact EI beats every remaining bound.
 */
inline Proposal propose_next(const GpModel& model, double y_best, const AcquisitionConfig& cfg, RngStream& rng)
{
    cfg.validate();
    const int n = cfg.n_candidates;
    const Eigen::MatrixXd cand = draw_candidates(n, model.dim(), rng);
    const Eigen::MatrixXd cross = model.cross_kernel(cand);

    const double sf2 = model.params().signal_variance;
    const double diag = sf2 + model.params().noise_variance + model.jitter();
    const double scale = model.target_scale();
    const double shift = model.target_mean();

    const Eigen::VectorXd mean_std = cross * model.alpha();
    auto ei_at = [&](int i, double var_std) {
        return expected_improvement(mean_std(i) * scale + shift, std::sqrt(var_std) * scale, y_best, cfg.xi);
    };

    // k^T A^-1 k <= |k|^2 / (noise + jitter). Below a quarter ulp of sf2 the
    // computed variance is exactly sf2, so the bound is already the exact EI.
    const double lambda_min = model.params().noise_variance + model.jitter();
    const double negligible =
        0.25 * (std::nextafter(sf2, std::numeric_limits<double>::infinity()) - sf2) * lambda_min;

    int best = -1;
    double best_ei = -1.0;
    auto offer = [&](int i, double ei) {
        if (ei > best_ei || (ei == best_ei && i < best)) {
            best = i;
            best_ei = ei;
        }
    };

    std::vector<double> bound(n);
    std::vector<int> pending;
    pending.reserve(n);
    for (int i = 0; i < n; ++i) {
        const double kmax = cross.row(i).cwiseAbs().maxCoeff();
        const double var_ub = std::max(0.0, sf2 - kmax * kmax / diag);
        bound[i] = ei_at(i, var_ub);
        if (lambda_min > 0.0 && cross.row(i).squaredNorm() < negligible)
            offer(i, bound[i]);
        else
            pending.push_back(i);
    }

    std::stable_sort(pending.begin(), pending.end(), [&](int a, int b) { return bound[a] > bound[b]; });

    constexpr int kChunk = 64;
    const int n_pending = static_cast<int>(pending.size());
    for (int start = 0; start < n_pending; start += kChunk) {
        const double next_bound = bound[pending[start]];
        if (best >= 0 && best_ei > next_bound * (1.0 + 1e-12) + 1e-300)
            break;
        const int len = std::min(kChunk, n_pending - start);
        Eigen::MatrixXd v(cross.cols(), len);
        for (int c = 0; c < len; ++c)
            v.col(c) = cross.row(pending[start + c]).transpose();
        model.cholesky().triangularView<Eigen::Lower>().solveInPlace(v);
        for (int c = 0; c < len; ++c) {
            const int i = pending[start + c];
            offer(i, ei_at(i, std::max(0.0, sf2 - v.col(c).squaredNorm())));
        }
    }

    Proposal p;
    p.index = best;
    p.ei = best_ei;
    p.x.resize(model.dim());
    for (std::size_t d = 0; d < model.dim(); ++d)
        p.x[d] = cand(best, static_cast<Eigen::Index>(d));
    return p;
}

} // namespace bcdbo

#endif
