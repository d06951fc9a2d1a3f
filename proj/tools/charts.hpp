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

#include <filesystem>
#include <string>
#include <vector>

namespace lqcli {

// Regenerates every chart whose source CSV exists in `dir`:
//   training.csv        -> training_loss.svg, training_acc.svg
//   sweep_summary.csv   -> sweep.svg
//   metrics.csv         -> rho.svg, neighborhood.svg, r_local.svg
//   summary.csv         -> fmqa_r.svg
//   feasibility.csv     -> p_feasible.svg
// Charts depend only on CSV contents. Returns the file names written.
std::vector<std::string> render_charts(const std::filesystem::path& dir);

}  // namespace lqcli
