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

#ifndef BCDBO_OPTIMIZER_HPP
#define BCDBO_OPTIMIZER_HPP

#include <Eigen/Dense>

#include <algorithm>
#include <cstdint>
#include <functional>
#include <limits>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "bcdbo/acquisition.hpp"
#include "bcdbo/domain.hpp"
#include "bcdbo/error.hpp"
#include "bcdbo/gp.hpp"
#include "bcdbo/rng.hpp"
#include "bcdbo/scene.hpp"

namespace bcdbo {

using Objective = std::function<double(const Deployment&)>;

enum class Method { naive_bo, bcd_bo, square_omni, square_dir };

inline std::string_view method_name(Method m)
{
    switch (m) {
    case Method::naive_bo:
        return "naive-bo";
    case Method::bcd_bo:
        return "bcd-bo";
    case Method::square_omni:
        return "square-omni";
    case Method::square_dir:
        return "square-dir";
    }
    return "?";
}

inline Method parse_method(std::string_view s)
{
    for (Method m : {Method::naive_bo, Method::bcd_bo, Method::square_omni, Method::square_dir})
        if (method_name(m) == s)
            return m;
    throw ConfigError("unknown method '" + std::string(s) + "' (expected naive-bo, bcd-bo, square-omni or square-dir)");
}

/// When the GP hyperparameters are re-selected. Every step while the
/// observation count is at most `every_step_until`, afterwards whenever it
/// has grown by `growth` since the last selection. Selection uses at most
/// the `max_points` most recent observations; the posterior always uses all.
struct HyperSchedule {
    int every_step_until = 32;
    double growth = 1.25;
    int max_points = 256;
};

struct OptimizerSettings {
    std::size_t n_tx = 16;
    int t_total = 1600;
    int t_sub = 25;
    int n_init = 10;
    int n_init_joint = 10;
    ParameterBounds bounds = ParameterBounds::for_area(1000.0, 10.0, 40.0);
    AcquisitionConfig acquisition;
    HyperSearchOptions hyper;
    HyperSchedule schedule;
};

struct TraceRecord {
    int t_total = 0;
    Deployment deployment;
    double y = 0.0;
    double y_best = 0.0;
    /// Index of the BS block being optimized, -1 outside block updates.
    int block = -1;
};

struct RunTrace {
    std::string method;
    std::uint64_t seed = 0;
    OptimizerSettings settings;
    std::vector<TraceRecord> records;
};

struct Incumbent {
    Deployment deployment;
    double y = -std::numeric_limits<double>::infinity();
};

struct RunResult {
    Deployment best;
    double y_best = 0.0;
    RunTrace trace;
};

/// The only path to the objective inside an optimizer: charges the budget
/// and appends a trace record per call.
class Evaluator {
public:
    Evaluator(const Objective& objective, BudgetState budget, RunTrace& trace)
        : objective_(objective), budget_(budget), trace_(trace)
    {
    }

    BudgetState& budget() noexcept { return budget_; }
    const BudgetState& budget() const noexcept { return budget_; }
    const RunTrace& trace() const noexcept { return trace_; }

    double evaluate(const Deployment& dep, int block = -1)
    {
        budget_.consume();
        const double y = objective_(dep);
        best_ = std::max(best_, y);
        trace_.records.push_back({budget_.t_total(), dep, y, best_, block});
        return y;
    }

private:
    const Objective& objective_;
    BudgetState budget_;
    RunTrace& trace_;
    double best_ = -std::numeric_limits<double>::infinity();
};

/// Unit-box points and raw objective values of one (sub)problem.
class ObservationSet {
public:
    explicit ObservationSet(std::size_t dim) : dim_(dim) {}

    std::size_t dim() const noexcept { return dim_; }
    std::size_t size() const noexcept { return y_.size(); }
    bool empty() const noexcept { return y_.empty(); }

    void add(std::span<const double> x, double y)
    {
        if (x.size() != dim_)
            throw ShapeError("ObservationSet: dimension mismatch");
        x_.insert(x_.end(), x.begin(), x.end());
        y_.push_back(y);
    }

    std::span<const double> point(std::size_t i) const { return {x_.data() + i * dim_, dim_}; }
    const std::vector<double>& values() const noexcept { return y_; }

    /// First index attaining the maximum value.
    std::size_t best_index() const
    {
        return static_cast<std::size_t>(std::max_element(y_.begin(), y_.end()) - y_.begin());
    }

    double best_value() const { return y_[best_index()]; }

    /// Rows [first, size()) as an Eigen matrix.
    Eigen::MatrixXd matrix(std::size_t first = 0) const
    {
        const std::size_t rows = size() - first;
        Eigen::MatrixXd X(rows, dim_);
        for (std::size_t i = 0; i < rows; ++i)
            for (std::size_t d = 0; d < dim_; ++d)
                X(i, d) = x_[(first + i) * dim_ + d];
        return X;
    }

private:
    std::size_t dim_;
    std::vector<double> x_;
    std::vector<double> y_;
};

/**
 * A box-shaped search space: a template deployment plus the subset of its
 * scalar parameters that are free. Unit-box vectors map onto the free
 * parameters only; all other stations and parameters are copied unchanged.
 */
class SearchSpace {
public:
    struct Coordinate {
        std::size_t station;
        std::size_t dim;
    };

    SearchSpace(Deployment base, std::vector<Coordinate> free, ParameterBounds bounds)
        : base_(std::move(base)), free_(std::move(free)), bounds_(bounds)
    {
        for (const auto& c : free_)
            if (c.station >= base_.size() || c.dim >= kBlockDims)
                throw ShapeError("SearchSpace: free coordinate out of range");
    }

    /// All 6 n_tx parameters free.
    static SearchSpace joint(std::size_t n_tx, const ParameterBounds& bounds)
    {
        Deployment base;
        base.stations.assign(n_tx, BsConfig::from_values(bounds.lower));
        std::vector<Coordinate> free;
        for (std::size_t i = 0; i < n_tx; ++i)
            for (std::size_t d = 0; d < kBlockDims; ++d)
                free.push_back({i, d});
        return SearchSpace(std::move(base), std::move(free), bounds);
    }

    /// Only block r free, every other BS fixed at the incumbent.
    static SearchSpace block(const Deployment& incumbent, std::size_t r, const ParameterBounds& bounds)
    {
        std::vector<Coordinate> free;
        for (std::size_t d = 0; d < kBlockDims; ++d)
            free.push_back({r, d});
        return SearchSpace(incumbent, std::move(free), bounds);
    }

    /// Lattice positions fixed; power free, plus the three angles for directional antennas.
    static SearchSpace square(const std::vector<Position>& lattice, AntennaKind kind, const ParameterBounds& bounds)
    {
        Deployment base;
        for (const auto& p : lattice)
            base.stations.push_back(BsConfig{p, bounds.lower[kDimPower], Orientation{}});
        std::vector<Coordinate> free;
        for (std::size_t i = 0; i < lattice.size(); ++i) {
            free.push_back({i, kDimPower});
            if (kind == AntennaKind::directional) {
                free.push_back({i, kDimYaw});
                free.push_back({i, kDimPitch});
                free.push_back({i, kDimRoll});
            }
        }
        return SearchSpace(std::move(base), std::move(free), bounds);
    }

    std::size_t dim() const noexcept { return free_.size(); }
    const Deployment& base() const noexcept { return base_; }

    Deployment decode(std::span<const double> u) const
    {
        if (u.size() != dim())
            throw ShapeError("SearchSpace::decode: expected " + std::to_string(dim()) + " entries");
        Deployment dep = base_;
        std::vector<BlockValues> values;
        std::vector<bool> touched(dep.size(), false);
        values.reserve(dep.size());
        for (const auto& bs : dep.stations)
            values.push_back(bs.values());
        for (std::size_t k = 0; k < free_.size(); ++k) {
            const auto [i, d] = free_[k];
            if (!(u[k] >= 0.0 && u[k] <= 1.0))
                throw BoundsError("SearchSpace::decode: unit coordinate outside [0, 1]");
            values[i][d] = bounds_.lower[d] + u[k] * (bounds_.upper[d] - bounds_.lower[d]);
            touched[i] = true;
        }
        for (std::size_t i = 0; i < dep.size(); ++i)
            if (touched[i])
                dep.stations[i] = BsConfig::from_values(values[i]);
        return dep;
    }

    std::vector<double> encode(const Deployment& dep) const
    {
        std::vector<double> u;
        u.reserve(dim());
        for (const auto& [i, d] : free_) {
            const double v = dep.stations.at(i).values()[d];
            u.push_back((v - bounds_.lower[d]) / (bounds_.upper[d] - bounds_.lower[d]));
        }
        return u;
    }

private:
    Deployment base_;
    std::vector<Coordinate> free_;
    ParameterBounds bounds_;
};

/// Fisher-Yates shuffle of 0..n-1.
inline std::vector<std::size_t> sample_permutation(std::size_t n, RngStream& rng)
{
    std::vector<std::size_t> p(n);
    std::iota(p.begin(), p.end(), std::size_t{0});
    for (std::size_t i = n; i > 1; --i) {
        const std::size_t j = static_cast<std::size_t>(rng.below(i));
        std::swap(p[i - 1], p[j]);
    }
    return p;
}

namespace detail {

/// Fits with the given hyperparameters, raising the noise variance tenfold
/// per retry while the covariance stays ill-conditioned.
inline GpModel fit_with_noise_fallback(const Eigen::MatrixXd& X, std::span<const double> y, KernelParams params)
{
    for (int attempt = 0;; ++attempt) {
        try {
            return fit(X, y, params);
        } catch (const IllConditionedError&) {
            if (attempt >= 8)
                throw;
            params.noise_variance = std::max(params.noise_variance * 10.0, 1e-6);
        }
    }
}

/**
 * The BO loop shared by every method: up to `n_random` uniform evaluations,
 * then GP-EI acquisitions, until `max_evals` evaluations have been spent.
 * `obs` may arrive non-empty (an injected incumbent); it is never charged.
 */
inline void run_bo_loop(const SearchSpace& space, ObservationSet& obs, int max_evals, int n_random, RngStream rng,
                        Evaluator& evaluator, int block, const OptimizerSettings& settings)
{
    const std::size_t dim = space.dim();
    int spent = 0;

    RngStream init_rng = rng.fork("init");
    std::vector<double> u(dim);
    const int n_uniform = std::min(obs.empty() ? std::max(n_random, 1) : n_random, max_evals);
    for (; spent < n_uniform; ++spent) {
        for (auto& v : u)
            v = init_rng.uniform();
        obs.add(u, evaluator.evaluate(space.decode(u), block));
    }

    std::optional<GpModel> model;
    KernelParams params = fallback_kernel_params();
    std::size_t last_selection = 0;

    for (int step = 0; spent < max_evals; ++spent, ++step) {
        const std::size_t m = obs.size();
        bool refit = !model || model->size() + 1 != m;
        if (m >= 2) {
            const bool due = m <= static_cast<std::size_t>(settings.schedule.every_step_until) ||
                             static_cast<double>(m) >= settings.schedule.growth * static_cast<double>(last_selection);
            if (due) {
                const std::size_t first =
                    m > static_cast<std::size_t>(settings.schedule.max_points) ? m - settings.schedule.max_points : 0;
                std::vector<double> y_sub(obs.values().begin() + static_cast<std::ptrdiff_t>(first), obs.values().end());
                params = select_hyperparams(obs.matrix(first), y_sub, settings.hyper);
                last_selection = m;
                refit = true;
            }
        }
        if (refit) {
            model = fit_with_noise_fallback(obs.matrix(), obs.values(), params);
            params = model->params();
        } else {
            model = extend(std::move(*model), obs.point(m - 1), obs.values()[m - 1]);
        }

        RngStream cand_rng = rng.fork("candidates", static_cast<std::uint64_t>(step));
        const Proposal next = propose_next(*model, obs.best_value(), settings.acquisition, cand_rng);
        obs.add(next.x, evaluator.evaluate(space.decode(next.x), block));
    }
}

inline void validate_common(const OptimizerSettings& s)
{
    if (s.n_tx < 1)
        throw ConfigError("run.n_tx must be >= 1");
    s.bounds.validate();
    s.acquisition.validate();
}

} // namespace detail

struct SubproblemResult {
    BsConfig block;
    double y = 0.0;
    /// Trace records [trace_begin, trace_end) were produced by this subproblem.
    std::size_t trace_begin = 0;
    std::size_t trace_end = 0;
};

/**
 * Optimizes block r with every other BS fixed at the incumbent.
 *
 * The observation set starts from the incumbent's own (block, value) pair at
 * no cost, adds N_init uniform samples, then EI acquisitions until T_sub
 * evaluations (or the global budget) are spent. Returns the best observed
 * pair; the incumbent pair wins ties, so y >= incumbent.y.
 */
inline SubproblemResult run_subproblem_bo(std::size_t r, const Incumbent& incumbent, Evaluator& evaluator,
                                          const OptimizerSettings& settings, RngStream rng)
{
    if (r >= incumbent.deployment.size())
        throw BoundsError("run_subproblem_bo: block index out of range");
    SubproblemResult result{incumbent.deployment.stations[r], incumbent.y, evaluator.trace().records.size(),
                            evaluator.trace().records.size()};
    BudgetState& budget = evaluator.budget();
    if (budget.remaining_total() <= 0)
        return result;

    budget.begin_subproblem();
    const SearchSpace space = SearchSpace::block(incumbent.deployment, r, settings.bounds);
    ObservationSet obs(kBlockDims);
    const BlockValues start = encode_block(incumbent.deployment.stations[r], settings.bounds);
    obs.add(start, incumbent.y);

    const int max_evals = std::min(settings.t_sub, budget.remaining_total());
    detail::run_bo_loop(space, obs, max_evals, settings.n_init, rng, evaluator, static_cast<int>(r), settings);

    const std::size_t best = obs.best_index();
    if (best != 0) {
        result.block = space.decode(obs.point(best)).stations[r];
        result.y = obs.values()[best];
    }
    result.trace_end = evaluator.trace().records.size();
    return result;
}

/**
 * Block-coordinate-descent BO.
 *
 * One uniform random deployment is evaluated as the initial incumbent. Each
 * cycle draws a random BS order and runs one subproblem per BS, replacing
 * the incumbent block and value with the subproblem's best pair. Stops when
 * exactly t_total evaluations have been spent.
 */
inline RunResult run_bcd_bo(const Objective& objective, const OptimizerSettings& settings, std::uint64_t seed)
{
    detail::validate_common(settings);
    if (settings.t_total < settings.t_sub)
        throw ConfigError("bcd-bo needs budget.t_total >= budget.t_sub");

    RunResult out;
    out.trace.method = std::string(method_name(Method::bcd_bo));
    out.trace.seed = seed;
    out.trace.settings = settings;
    out.trace.records.reserve(static_cast<std::size_t>(settings.t_total));

    const RngStream root(seed);
    Evaluator evaluator(objective, BudgetState(settings.t_total, settings.t_sub, settings.n_init), out.trace);

    Incumbent inc;
    RngStream init = root.fork("incumbent-init");
    for (std::size_t i = 0; i < settings.n_tx; ++i)
        inc.deployment.stations.push_back(random_block(init, settings.bounds));
    inc.y = evaluator.evaluate(inc.deployment);

    std::uint64_t subproblem = 0;
    for (std::uint64_t cycle = 0; evaluator.budget().remaining_total() > 0; ++cycle) {
        RngStream perm_rng = root.fork("permutation", cycle);
        for (std::size_t r : sample_permutation(settings.n_tx, perm_rng)) {
            if (evaluator.budget().remaining_total() <= 0)
                break;
            const SubproblemResult sub =
                run_subproblem_bo(r, inc, evaluator, settings, root.fork("subproblem", subproblem++));
            inc.deployment.stations[r] = sub.block;
            inc.y = sub.y;
        }
    }

    out.best = inc.deployment;
    out.y_best = inc.y;
    return out;
}

namespace detail {

inline RunResult run_joint(const Objective& objective, const SearchSpace& space, const OptimizerSettings& settings,
                           Method method, std::uint64_t seed)
{
    validate_common(settings);
    if (settings.n_init_joint < 0 || settings.n_init_joint >= settings.t_total)
        throw ConfigError("budget.n_init_joint must satisfy 0 <= n_init_joint < t_total");

    RunResult out;
    out.trace.method = std::string(method_name(method));
    out.trace.seed = seed;
    out.trace.settings = settings;
    out.trace.records.reserve(static_cast<std::size_t>(settings.t_total));

    const RngStream root(seed);
    Evaluator evaluator(objective, BudgetState(settings.t_total, settings.t_total, settings.n_init_joint), out.trace);
    ObservationSet obs(space.dim());
    run_bo_loop(space, obs, settings.t_total, settings.n_init_joint, root.fork("joint"), evaluator, -1, settings);

    const std::size_t best = obs.best_index();
    out.best = space.decode(obs.point(best));
    out.y_best = obs.values()[best];
    return out;
}

} // namespace detail

/// Single BO over all 6 n_tx parameters.
inline RunResult run_naive_bo(const Objective& objective, const OptimizerSettings& settings, std::uint64_t seed)
{
    return detail::run_joint(objective, SearchSpace::joint(settings.n_tx, settings.bounds), settings,
                             Method::naive_bo, seed);
}

/// Square-lattice placement with joint BO over the remaining parameters:
/// powers only (omni) or power and the three angles (directional).
/// `objective` must use the matching antenna pattern.
inline RunResult run_square_baseline(const Objective& objective, const Scene& scene, AntennaKind kind,
                                     const OptimizerSettings& settings, std::uint64_t seed)
{
    const auto lattice = square_placement(settings.n_tx, scene);
    return detail::run_joint(objective, SearchSpace::square(lattice, kind, settings.bounds), settings,
                             kind == AntennaKind::omni ? Method::square_omni : Method::square_dir, seed);
}

} // namespace bcdbo

#endif
