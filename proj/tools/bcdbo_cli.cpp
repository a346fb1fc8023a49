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

#include <CLI11.hpp>

#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include "bcdbo/bcdbo.hpp"

namespace {

std::vector<std::pair<std::string, std::string>> collect_overrides(const std::vector<std::string>& sets)
{
    std::vector<std::pair<std::string, std::string>> out;
    for (const auto& s : sets)
        out.push_back(bcdbo::split_override(s));
    return out;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Block-coordinate Bayesian optimization of base-station configurations"};
    app.require_subcommand(1);

    std::string config_path;
    std::vector<std::string> sets;
    std::string method;
    std::size_t n_tx = 0;
    std::uint64_t seed = 0;
    std::string out_dir;

    auto* run_cmd = app.add_subcommand("run", "Run one optimizer and write trace, deployment, heatmap and manifest");
    run_cmd->add_option("--config", config_path, "Config file (section.key = value lines)");
    run_cmd->add_option("--method", method, "naive-bo | bcd-bo | square-omni | square-dir");
    run_cmd->add_option("--n-tx", n_tx, "Number of base stations");
    run_cmd->add_option("--seed", seed, "Top-level random seed");
    run_cmd->add_option("--out", out_dir, "Output directory");
    run_cmd->add_option("--set", sets, "Extra override key=value (repeatable)");

    std::vector<std::string> methods;
    std::vector<std::uint64_t> seeds;
    unsigned jobs = 1;
    auto* cmp_cmd = app.add_subcommand("compare", "Run every (method, seed) pair and write summary.csv");
    cmp_cmd->add_option("--config", config_path, "Config file (section.key = value lines)");
    cmp_cmd->add_option("--methods", methods, "Comma-separated methods")->delimiter(',')->required();
    cmp_cmd->add_option("--seeds", seeds, "Comma-separated seeds")->delimiter(',')->required();
    cmp_cmd->add_option("--out", out_dir, "Output directory")->required();
    cmp_cmd->add_option("--n-tx", n_tx, "Number of base stations");
    cmp_cmd->add_option("--jobs", jobs, "Pairs run concurrently (default 1)");
    cmp_cmd->add_option("--set", sets, "Extra override key=value (repeatable)");

    CLI11_PARSE(app, argc, argv);

    try {
        auto overrides = collect_overrides(sets);
        if (!method.empty())
            overrides.emplace_back("run.method", method);
        if (n_tx > 0)
            overrides.emplace_back("run.n_tx", std::to_string(n_tx));
        if (run_cmd->count("--seed"))
            overrides.emplace_back("run.seed", std::to_string(seed));
        if (!out_dir.empty() && run_cmd->parsed())
            overrides.emplace_back("run.out", out_dir);

        if (run_cmd->parsed()) {
            const bcdbo::RunConfig cfg = bcdbo::parse_config(config_path, overrides);
            const bcdbo::RunResult r = bcdbo::run(cfg);
            std::cout << bcdbo::method_name(cfg.method) << " seed=" << cfg.seed
                      << " evaluations=" << r.trace.records.size() << " final_y_best=" << bcdbo::format_g6(r.y_best)
                      << " -> " << cfg.out_dir << '\n';
            return 0;
        }

        std::vector<bcdbo::Method> parsed_methods;
        for (const auto& m : methods)
            parsed_methods.push_back(bcdbo::parse_method(m));
        // Validate against the first method; compare re-validates every pair.
        overrides.emplace_back("run.method", methods.front());
        const bcdbo::RunConfig cfg = bcdbo::parse_config(config_path, overrides);
        const auto rows = bcdbo::compare(cfg, parsed_methods, seeds, out_dir, jobs);
        std::cout << "method,seed,final_y_best\n";
        for (const auto& r : rows)
            std::cout << bcdbo::method_name(r.method) << ',' << r.seed << ',' << bcdbo::format_g6(r.final_y_best)
                      << '\n';
        return 0;
    } catch (const bcdbo::ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << '\n';
        return 2;
    } catch (const bcdbo::IoError& e) {
        std::cerr << "I/O error: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
