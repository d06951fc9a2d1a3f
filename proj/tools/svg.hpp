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

#include <string>
#include <vector>

namespace lqcli {

struct Series {
    std::string name;
    std::vector<double> x;
    std::vector<double> y;
    std::vector<double> err;  // optional symmetric error bars, same length as y
};

struct ChartLabels {
    std::string title;
    std::string x_label;
    std::string y_label;
};

// Static line chart; NaN points are skipped.
std::string line_chart_svg(const std::vector<Series>& series, const ChartLabels& labels);

// Static bar chart with optional error bars.
std::string bar_chart_svg(const std::vector<std::string>& categories, const std::vector<double>& values,
                          const std::vector<double>& errors, const ChartLabels& labels);

}  // namespace lqcli
