// Copyright 2026 The latentqubo Authors
//
//    Licensed under the Apache License, Version 2.0 (the "License");
//    you may not use this file except in compliance with the License.
//    You may obtain a copy of the License at
//
//        http://www.apache.org/licenses/LICENSE-2.0
//
//    Unless required by applicable law or agreed to in writing, software
//    distributed under the License is distributed on an "AS IS" BASIS,
//    WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
//    See the License for the specific language governing permissions and
//    limitations under the License.

#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "latentqubo/latentqubo.h"

namespace lqcli {

// Raised for bad user input (exit code 1).
class ValidationError : public std::runtime_error {
 public:
    using std::runtime_error::runtime_error;
};

struct ExperimentConfig {
    // [instance]
    int cities = 8;
    std::uint64_t instance_seed = 0;
    std::string instance_path;
    int n_instances = 1;  // run-fmqa: instance seeds instance_seed .. instance_seed + n - 1

    // [bae]
    lq_bae_config bae{};
    std::string checkpoint;  // existing checkpoint for analyze / run-fmqa

    // [fm], [anneal], [fmqa]
    lq_fmqa_config fmqa{};

    // [metrics]
    lq_metrics_options metrics{};

    // [run]
    std::vector<std::string> schemes{"bae", "log", "gray", "random"};
    int n_seeds = 1;
    std::uint64_t seed = 0;  // first run seed; runs use seed .. seed + n_seeds - 1
    int threads = 1;

    ExperimentConfig();

    // Canonical TOML text; load(to_toml()) reproduces the same config.
    std::string to_toml() const;
    std::vector<std::uint64_t> run_seeds() const;
};

// Parses a TOML-style file (sections and key = value pairs) over the defaults.
ExperimentConfig load_config(const std::string& path);
void apply_config_text(ExperimentConfig& cfg, const std::string& text);

std::vector<std::string> split_list(const std::string& s);
std::string scaling_name(lq_target_scaling s);
lq_target_scaling parse_scaling(const std::string& s);

}  // namespace lqcli
