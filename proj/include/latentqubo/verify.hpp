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

// Self-contained oracle and property checks runnable from an installed build.

#include <string>
#include <vector>

namespace lq {

struct CheckResult {
    std::string suite;
    std::string name;
    bool passed = false;
    std::string detail;
    double seconds = 0.0;
};

struct VerifyOptions {
    std::vector<std::string> suites;  // empty = all
    std::string checkpoint_path;      // optional: also validate this bAE checkpoint
};

std::vector<std::string> verify_suite_names();
std::vector<CheckResult> run_verification(const VerifyOptions& opts);
std::string verification_json(const std::vector<CheckResult>& results);

}  // namespace lq
