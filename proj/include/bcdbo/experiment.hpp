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

#ifndef BCDBO_EXPERIMENT_HPP
#define BCDBO_EXPERIMENT_HPP

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <memory>
#include <mutex>
#include <ostream>
#include <string>
#include <thread>
#include <vector>

#include "bcdbo/config.hpp"
#include "bcdbo/error.hpp"
#include "bcdbo/optimizer.hpp"
#include "bcdbo/radio.hpp"

namespace bcdbo {

inline std::string format_g6(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

inline Objective make_objective(const Scene& scene)
{
    auto env = std::make_shared<const RadioEnvironment>(scene);
    return [env](const Deployment& dep) { return env->objective(dep); };
}

/// Runs the configured method against `objective` (which must match cfg.scene_for_method()).
inline RunResult run_method(const RunConfig& cfg, const Objective& objective)
{
    const OptimizerSettings settings = cfg.optimizer_settings();
    switch (cfg.method) {
    case Method::bcd_bo:
        return run_bcd_bo(objective, settings, cfg.seed);
    case Method::naive_bo:
        return run_naive_bo(objective, settings, cfg.seed);
    case Method::square_omni:
        return run_square_baseline(objective, cfg.scene_for_method(), AntennaKind::omni, settings, cfg.seed);
    case Method::square_dir:
        return run_square_baseline(objective, cfg.scene_for_method(), AntennaKind::directional, settings, cfg.seed);
    }
    throw ConfigError("unknown method");
}

inline RunResult run_method(const RunConfig& cfg) { return run_method(cfg, make_objective(cfg.scene_for_method())); }

inline void write_trace_csv(std::ostream& os, const RunTrace& trace)
{
    os << "t_total,y,y_best\n";
    for (const auto& r : trace.records)
        os << r.t_total << ',' << format_g6(r.y) << ',' << format_g6(r.y_best) << '\n';
}

inline void write_deployment_csv(std::ostream& os, const Deployment& dep)
{
    os << "index,x_m,y_m,power_dbm,yaw,pitch,roll\n";
    for (std::size_t i = 0; i < dep.size(); ++i) {
        const auto& bs = dep.stations[i];
        os << i << ',' << format_g6(bs.position.x_m) << ',' << format_g6(bs.position.y_m) << ','
           << format_g6(bs.power_dbm) << ',' << format_g6(bs.orientation.yaw()) << ','
           << format_g6(bs.orientation.pitch()) << ',' << format_g6(bs.orientation.roll()) << '\n';
    }
}

inline void write_manifest(std::ostream& os, const RunConfig& cfg, const RunResult& result)
{
    os << "# resolved run configuration; re-usable as --config input\n";
    write_config(os, cfg);
    os << "result.final_y_best = " << detail::format_double(result.y_best) << '\n';
    os << "result.evaluations = " << result.trace.records.size() << '\n';
}

namespace detail {

inline std::ofstream open_output(const std::filesystem::path& p)
{
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    if (!out)
        throw IoError("cannot write '" + p.string() + "'");
    return out;
}

/// Creates the directory and proves it is writable.
inline void prepare_output_dir(const std::filesystem::path& dir)
{
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec || !std::filesystem::is_directory(dir))
        throw IoError("cannot create output directory '" + dir.string() + "'");
    const auto probe = dir / ".bcdbo-write-test";
    {
        std::ofstream out(probe);
        if (!out)
            throw IoError("output directory '" + dir.string() + "' is not writable");
    }
    std::filesystem::remove(probe, ec);
}

} // namespace detail

/**
 * Executes one configured run and writes trace.csv, best_deployment.csv,
 * heatmap.csv and manifest into cfg.out_dir. The output directory is checked
 * before any evaluation happens.
 */
inline RunResult run(const RunConfig& cfg)
{
    validate(cfg);
    const std::filesystem::path dir(cfg.out_dir);
    detail::prepare_output_dir(dir);

    const Scene scene = cfg.scene_for_method();
    const auto env = std::make_shared<const RadioEnvironment>(scene);
    const Objective objective = [env](const Deployment& dep) { return env->objective(dep); };
    RunResult result = run_method(cfg, objective);

    {
        auto out = detail::open_output(dir / "trace.csv");
        write_trace_csv(out, result.trace);
    }
    {
        auto out = detail::open_output(dir / "best_deployment.csv");
        write_deployment_csv(out, result.best);
    }
    {
        auto out = detail::open_output(dir / "heatmap.csv");
        write_heatmap_csv(out, env->heatmap(result.best));
    }
    {
        auto out = detail::open_output(dir / "manifest");
        write_manifest(out, cfg, result);
    }
    return result;
}

struct CompareRow {
    Method method;
    std::uint64_t seed;
    double final_y_best;
};

inline std::string pair_dirname(Method m, std::uint64_t seed)
{
    return std::string(method_name(m)) + "-seed" + std::to_string(seed);
}

/**
 * Runs every (method, seed) pair with otherwise identical settings, each
 * into out_dir/<method>-seed<seed>/, and writes out_dir/summary.csv.
 * With jobs > 1 pairs run concurrently; results do not depend on jobs.
 */
inline std::vector<CompareRow> compare(const RunConfig& base, const std::vector<Method>& methods,
                                       const std::vector<std::uint64_t>& seeds, const std::string& out_dir,
                                       unsigned jobs = 1)
{
    if (methods.empty() || seeds.empty())
        throw ConfigError("compare needs at least one method and one seed");
    const std::filesystem::path dir(out_dir);
    detail::prepare_output_dir(dir);

    std::vector<RunConfig> pairs;
    for (Method m : methods)
        for (std::uint64_t s : seeds) {
            RunConfig c = base;
            c.method = m;
            c.seed = s;
            c.out_dir = (dir / pair_dirname(m, s)).string();
            validate(c);
            pairs.push_back(std::move(c));
        }

    std::vector<CompareRow> rows(pairs.size());
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        for (std::size_t i = next++; i < pairs.size(); i = next++) {
            try {
                const RunResult r = run(pairs[i]);
                rows[i] = {pairs[i].method, pairs[i].seed, r.y_best};
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure)
                    failure = std::current_exception();
            }
        }
    };
    jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(pairs.size())));
    if (jobs == 1) {
        worker();
    } else {
        std::vector<std::thread> threads;
        for (unsigned t = 0; t < jobs; ++t)
            threads.emplace_back(worker);
        for (auto& t : threads)
            t.join();
    }
    if (failure)
        std::rethrow_exception(failure);

    auto out = detail::open_output(dir / "summary.csv");
    out << "method,seed,final_y_best\n";
    for (const auto& r : rows)
        out << method_name(r.method) << ',' << r.seed << ',' << format_g6(r.final_y_best) << '\n';
    return rows;
}

} // namespace bcdbo

#endif
