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

#ifndef BCDBO_GP_HPP
#define BCDBO_GP_HPP

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "bcdbo/error.hpp"

namespace bcdbo {

/// RBF kernel hyperparameters on unit-box inputs. A single lengthscale means
/// isotropic; otherwise one lengthscale per input dimension.
struct KernelParams {
    std::vector<double> lengthscales{0.3};
    double signal_variance = 1.0;
    double noise_variance = 1e-4;

    static KernelParams isotropic(double lengthscale, double signal_variance, double noise_variance)
    {
        return KernelParams{{lengthscale}, signal_variance, noise_variance};
    }

    double lengthscale(std::size_t d) const { return lengthscales.size() == 1 ? lengthscales[0] : lengthscales[d]; }

    void validate(std::size_t dim) const
    {
        if (lengthscales.empty() || (lengthscales.size() != 1 && lengthscales.size() != dim))
            throw ShapeError("kernel: expected 1 or " + std::to_string(dim) + " lengthscales, got " +
                             std::to_string(lengthscales.size()));
        for (double l : lengthscales)
            if (!(l > 0.0) || !std::isfinite(l))
                throw ConfigError("kernel: lengthscales must be positive");
        if (!(signal_variance > 0.0) || !std::isfinite(signal_variance))
            throw ConfigError("kernel: signal variance must be positive");
        if (!(noise_variance >= 0.0) || !std::isfinite(noise_variance))
            throw ConfigError("kernel: noise variance must be non-negative");
    }
};

/// sigma_f^2 exp(-1/2 sum_d ((x1[d] - x2[d]) / l[d])^2)
inline double rbf(std::span<const double> x1, std::span<const double> x2, const KernelParams& p)
{
    if (x1.size() != x2.size())
        throw ShapeError("rbf: dimension mismatch (" + std::to_string(x1.size()) + " vs " +
                         std::to_string(x2.size()) + ")");
    double s = 0.0;
    for (std::size_t d = 0; d < x1.size(); ++d) {
        const double t = (x1[d] - x2[d]) / p.lengthscale(d);
        s += t * t;
    }
    return p.signal_variance * std::exp(-0.5 * s);
}

struct Prediction {
    double mean = 0.0;
    double variance = 0.0;
    /// Posterior variance before flooring at zero (raw units).
    double variance_unfloored = 0.0;
};

class GpModel;
GpModel fit(const Eigen::MatrixXd& X, std::span<const double> y_raw, const KernelParams& params);
GpModel extend(GpModel model, std::span<const double> x, double y_raw);

/**
 * Fitted GP posterior over the unit box.
 *
 * Targets are standardized internally; predictions are returned in raw
 * units. The Cholesky factor is stored in a capacity-managed buffer so that
 * appending an observation with unchanged hyperparameters costs O(m^2).
 */
class GpModel {
public:
    std::size_t dim() const noexcept { return static_cast<std::size_t>(X_.cols()); }
    std::size_t size() const noexcept { return m_; }

    const KernelParams& params() const noexcept { return params_; }
    double jitter() const noexcept { return jitter_; }
    double target_mean() const noexcept { return y_mean_; }
    double target_scale() const noexcept { return y_scale_; }

    auto inputs() const { return X_.topRows(m_); }
    const std::vector<double>& raw_targets() const noexcept { return y_raw_; }
    const Eigen::VectorXd& standardized_targets() const noexcept { return y_std_; }
    const Eigen::VectorXd& alpha() const noexcept { return alpha_; }
    auto cholesky() const { return L_.topLeftCorner(m_, m_); }

    double max_raw_target() const { return *std::max_element(y_raw_.begin(), y_raw_.end()); }

    Prediction predict(std::span<const double> x) const
    {
        if (x.size() != dim())
            throw ShapeError("predict: expected " + std::to_string(dim()) + " inputs, got " +
                             std::to_string(x.size()));
        Eigen::VectorXd k(m_);
        for (std::size_t i = 0; i < m_; ++i)
            k(i) = kernel_row(i, x);
        const double mean_std = k.dot(alpha_);
        cholesky().triangularView<Eigen::Lower>().solveInPlace(k);
        const double var_std = params_.signal_variance - k.squaredNorm();
        Prediction p;
        p.mean = mean_std * y_scale_ + y_mean_;
        p.variance_unfloored = var_std * y_scale_ * y_scale_;
        p.variance = std::max(0.0, p.variance_unfloored);
        return p;
    }

    /// Cross-covariance between candidate rows and training rows (n x m).
    Eigen::MatrixXd cross_kernel(const Eigen::MatrixXd& candidates) const
    {
        if (static_cast<std::size_t>(candidates.cols()) != dim())
            throw ShapeError("cross_kernel: candidate dimension mismatch");
        Eigen::RowVectorXd inv_l(dim());
        for (std::size_t d = 0; d < dim(); ++d)
            inv_l(d) = 1.0 / params_.lengthscale(d);
        const Eigen::MatrixXd a = candidates.array().rowwise() * inv_l.array();
        const Eigen::MatrixXd b = X_.topRows(m_).array().rowwise() * inv_l.array();
        Eigen::MatrixXd sq = -2.0 * (a * b.transpose());
        sq.colwise() += a.rowwise().squaredNorm();
        sq.rowwise() += b.rowwise().squaredNorm().transpose();
        return params_.signal_variance * (-0.5 * sq.array().max(0.0)).exp().matrix();
    }

    /// Standardized posterior mean and (unfloored) variance for columns of cross.transpose().
    void predict_standardized(const Eigen::MatrixXd& cross, Eigen::VectorXd& mean, Eigen::VectorXd& var) const
    {
        mean = cross * alpha_;
        Eigen::MatrixXd v = cross.transpose();
        cholesky().triangularView<Eigen::Lower>().solveInPlace(v);
        var = (params_.signal_variance - v.colwise().squaredNorm().array()).matrix().transpose();
    }

    /// Batch prediction in raw units (variance floored at zero).
    void predict_batch(const Eigen::MatrixXd& candidates, Eigen::VectorXd& mean, Eigen::VectorXd& var) const
    {
        predict_standardized(cross_kernel(candidates), mean, var);
        mean = (mean.array() * y_scale_ + y_mean_).matrix();
        var = (var.array().max(0.0) * y_scale_ * y_scale_).matrix();
    }

    /// -1/2 y^T alpha - sum log L_ii - m/2 log(2 pi), on standardized targets.
    double log_marginal_likelihood() const
    {
        double logdet_half = 0.0;
        for (std::size_t i = 0; i < m_; ++i)
            logdet_half += std::log(L_(i, i));
        return -0.5 * y_std_.dot(alpha_) - logdet_half -
               0.5 * static_cast<double>(m_) * std::log(2.0 * std::numbers::pi);
    }

private:
    friend GpModel fit(const Eigen::MatrixXd&, std::span<const double>, const KernelParams&);
    friend GpModel extend(GpModel, std::span<const double>, double);

    double kernel_row(std::size_t i, std::span<const double> x) const
    {
        double s = 0.0;
        for (std::size_t d = 0; d < x.size(); ++d) {
            const double t = (X_(i, d) - x[d]) / params_.lengthscale(d);
            s += t * t;
        }
        return params_.signal_variance * std::exp(-0.5 * s);
    }

    void standardize()
    {
        const double m = static_cast<double>(y_raw_.size());
        double mean = 0.0;
        for (double v : y_raw_)
            mean += v;
        mean /= m;
        double ss = 0.0;
        for (double v : y_raw_)
            ss += (v - mean) * (v - mean);
        double sd = std::sqrt(ss / m);
        if (!(sd > 0.0) || !std::isfinite(sd))
            sd = 1.0;
        y_mean_ = mean;
        y_scale_ = sd;
        y_std_.resize(static_cast<Eigen::Index>(y_raw_.size()));
        for (std::size_t i = 0; i < y_raw_.size(); ++i)
            y_std_(i) = (y_raw_[i] - y_mean_) / y_scale_;
    }

    void solve_alpha()
    {
        alpha_ = y_std_;
        cholesky().triangularView<Eigen::Lower>().solveInPlace(alpha_);
        cholesky().transpose().triangularView<Eigen::Upper>().solveInPlace(alpha_);
    }

    void reserve(std::size_t cap)
    {
        if (static_cast<std::size_t>(L_.rows()) >= cap)
            return;
        const std::size_t new_cap = std::max<std::size_t>(cap, 2 * static_cast<std::size_t>(L_.rows()));
        Eigen::MatrixXd L = Eigen::MatrixXd::Zero(new_cap, new_cap);
        L.topLeftCorner(m_, m_) = L_.topLeftCorner(m_, m_);
        L_.swap(L);
        Eigen::MatrixXd X(new_cap, X_.cols());
        X.topRows(m_) = X_.topRows(m_);
        X_.swap(X);
    }

    std::size_t m_ = 0;
    Eigen::MatrixXd X_;
    std::vector<double> y_raw_;
    Eigen::VectorXd y_std_;
    double y_mean_ = 0.0;
    double y_scale_ = 1.0;
    KernelParams params_;
    double jitter_ = 0.0;
    Eigen::MatrixXd L_;
    Eigen::VectorXd alpha_;
};

inline constexpr int kMaxJitterSteps = 7; // 1e-10 * sf2 * 10^k, k = 0..6

/**
 * Fits a GP to unit-box inputs X (m x d) and raw targets.
 *
 * Factorizes K + sn2 I + j I with j escalating from 1e-10 sf2 by factors of
 * ten; throws IllConditionedError when the last level still fails.
 */
inline GpModel fit(const Eigen::MatrixXd& X, std::span<const double> y_raw, const KernelParams& params)
{
    const auto m = static_cast<std::size_t>(X.rows());
    const auto d = static_cast<std::size_t>(X.cols());
    if (m < 1)
        throw ShapeError("fit: need at least one observation");
    if (y_raw.size() != m)
        throw ShapeError("fit: " + std::to_string(m) + " inputs but " + std::to_string(y_raw.size()) + " targets");
    params.validate(d);
    if (!((X.array() >= 0.0).all() && (X.array() <= 1.0).all()))
        throw BoundsError("fit: inputs must lie in the unit box");
    for (double v : y_raw)
        if (!std::isfinite(v))
            throw BoundsError("fit: targets must be finite");

    GpModel model;
    model.m_ = m;
    model.X_ = X;
    model.y_raw_.assign(y_raw.begin(), y_raw.end());
    model.params_ = params;
    model.standardize();

    Eigen::MatrixXd K(m, m);
    for (std::size_t i = 0; i < m; ++i) {
        K(i, i) = params.signal_variance;
        for (std::size_t j = 0; j < i; ++j) {
            double s = 0.0;
            for (std::size_t k = 0; k < d; ++k) {
                const double t = (X(i, k) - X(j, k)) / params.lengthscale(k);
                s += t * t;
            }
            K(i, j) = K(j, i) = params.signal_variance * std::exp(-0.5 * s);
        }
    }

    double jitter = 1e-10 * params.signal_variance;
    for (int step = 0; step < kMaxJitterSteps; ++step, jitter *= 10.0) {
        Eigen::MatrixXd A = K;
        A.diagonal().array() += params.noise_variance + jitter;
        Eigen::LLT<Eigen::MatrixXd> llt(A);
        if (llt.info() != Eigen::Success)
            continue;
        Eigen::MatrixXd L = llt.matrixL();
        if (!(L.diagonal().array() > 0.0).all() || !L.allFinite())
            continue;
        model.jitter_ = jitter;
        model.L_ = std::move(L);
        model.solve_alpha();
        return model;
    }
    throw IllConditionedError("fit: covariance not positive definite at maximum jitter");
}

/// Appends one observation keeping the hyperparameters; refits from scratch
/// when the rank-one extension loses positive definiteness.
inline GpModel extend(GpModel model, std::span<const double> x, double y_raw)
{
    const std::size_t m = model.m_;
    if (x.size() != model.dim())
        throw ShapeError("extend: dimension mismatch");
    if (!std::isfinite(y_raw))
        throw BoundsError("extend: target must be finite");

    Eigen::VectorXd k(m);
    for (std::size_t i = 0; i < m; ++i)
        k(i) = model.kernel_row(i, x);
    model.cholesky().triangularView<Eigen::Lower>().solveInPlace(k);
    const double pivot_sq = model.params_.signal_variance + model.params_.noise_variance + model.jitter_ - k.squaredNorm();
    const double floor = 1e-10 * model.params_.signal_variance;

    if (!(pivot_sq > floor) || !std::isfinite(pivot_sq)) {
        Eigen::MatrixXd X(m + 1, model.dim());
        X.topRows(m) = model.X_.topRows(m);
        for (std::size_t d = 0; d < x.size(); ++d)
            X(m, d) = x[d];
        std::vector<double> y = model.y_raw_;
        y.push_back(y_raw);
        return fit(X, y, model.params_);
    }

    model.reserve(m + 1);
    for (std::size_t d = 0; d < x.size(); ++d)
        model.X_(m, d) = x[d];
    model.L_.row(m).head(m) = k.transpose();
    model.L_(m, m) = std::sqrt(pivot_sq);
    model.m_ = m + 1;
    model.y_raw_.push_back(y_raw);
    model.standardize();
    model.solve_alpha();
    return model;
}

/// Search box and schedule of the marginal-likelihood hyperparameter search.
struct HyperSearchOptions {
    std::array<double, 3> restart_lengthscales{0.1, 0.3, 1.0};
    double initial_noise_variance = 1e-4;
    double lengthscale_min = 1e-2;
    double lengthscale_max = 1e2;
    double signal_variance_min = 1e-1;
    double signal_variance_max = 1e1;
    double noise_variance_min = 1e-8;
    double noise_variance_max = 1e-2;
    int sweeps = 2;
    double log_tolerance = 1e-2;
};

inline KernelParams fallback_kernel_params() { return KernelParams::isotropic(0.3, 1.0, 1e-4); }

/// LML of the fitted model, or -inf when the fit is ill-conditioned.
inline double try_log_marginal_likelihood(const Eigen::MatrixXd& X, std::span<const double> y_raw,
                                          const KernelParams& params)
{
    try {
        const double v = fit(X, y_raw, params).log_marginal_likelihood();
        return std::isfinite(v) ? v : -std::numeric_limits<double>::infinity();
    } catch (const IllConditionedError&) {
        return -std::numeric_limits<double>::infinity();
    }
}

/**
 * Maximizes the log marginal likelihood over (log l, log sf2, log sn2), l
 * isotropic, by coordinate-wise golden-section search from each restart.
 * Returns the best of every probed point, restart initial points included,
 * so the result never scores below any initial point. Deterministic.
 */
inline KernelParams select_hyperparams(const Eigen::MatrixXd& X, std::span<const double> y_raw,
                                       const HyperSearchOptions& opt = {})
{
    if (X.rows() < 2)
        throw ShapeError("select_hyperparams: need at least two observations");

    const std::array<double, 3> lo{std::log(opt.lengthscale_min), std::log(opt.signal_variance_min),
                                   std::log(opt.noise_variance_min)};
    const std::array<double, 3> hi{std::log(opt.lengthscale_max), std::log(opt.signal_variance_max),
                                   std::log(opt.noise_variance_max)};
    auto to_params = [](const std::array<double, 3>& t) {
        return KernelParams::isotropic(std::exp(t[0]), std::exp(t[1]), std::exp(t[2]));
    };
    auto score = [&](const std::array<double, 3>& t) { return try_log_marginal_likelihood(X, y_raw, to_params(t)); };

    double best_value = -std::numeric_limits<double>::infinity();
    std::array<double, 3> best_theta{};
    auto record = [&](const std::array<double, 3>& t, double v) {
        if (v > best_value) {
            best_value = v;
            best_theta = t;
        }
    };

    constexpr double inv_phi = 0.6180339887498949;
    for (double ell0 : opt.restart_lengthscales) {
        std::array<double, 3> theta{std::log(ell0), 0.0, std::log(opt.initial_noise_variance)};
        double current = score(theta);
        record(theta, current);
        for (int sweep = 0; sweep < opt.sweeps; ++sweep) {
            for (std::size_t c = 0; c < 3; ++c) {
                double a = lo[c], b = hi[c];
                std::array<double, 3> t1 = theta, t2 = theta;
                t1[c] = b - inv_phi * (b - a);
                t2[c] = a + inv_phi * (b - a);
                double f1 = score(t1), f2 = score(t2);
                record(t1, f1);
                record(t2, f2);
                std::array<double, 3> line_best = f1 >= f2 ? t1 : t2;
                double line_value = std::max(f1, f2);
                while (b - a > opt.log_tolerance) {
                    if (f1 >= f2) {
                        b = t2[c];
                        t2 = t1;
                        f2 = f1;
                        t1[c] = b - inv_phi * (b - a);
                        f1 = score(t1);
                        record(t1, f1);
                        if (f1 > line_value) {
                            line_value = f1;
                            line_best = t1;
                        }
                    } else {
                        a = t1[c];
                        t1 = t2;
                        f1 = f2;
                        t2[c] = a + inv_phi * (b - a);
                        f2 = score(t2);
                        record(t2, f2);
                        if (f2 > line_value) {
                            line_value = f2;
                            line_best = t2;
                        }
                    }
                }
                if (line_value > current) {
                    current = line_value;
                    theta = line_best;
                }
            }
        }
    }

    if (!std::isfinite(best_value))
        return fallback_kernel_params();
    return to_params(best_theta);
}

} // namespace bcdbo

#endif
