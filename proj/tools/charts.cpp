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

#include "charts.hpp"

#include <algorithm>
#include <map>

#include "common.hpp"
#include "svg.hpp"

namespace lqcli {

namespace fs = std::filesystem;

namespace {

// Distinct values of a column in first-appearance order.
std::vector<std::string> groups_of(const std::vector<std::string>& col) {
    std::vector<std::string> out;
    for (const auto& s : col)
        if (std::find(out.begin(), out.end(), s) == out.end()) out.push_back(s);
    return out;
}

void render_training(const fs::path& dir, std::vector<std::string>& written) {
    const CsvTable t = read_csv(dir / "training.csv");
    const auto epoch = t.numbers("epoch");
    Series train{"train", epoch, t.numbers("train_loss"), {}};
    Series valid{"validation", epoch, t.numbers("valid_loss"), {}};
    write_text_file(dir / "training_loss.svg",
                    line_chart_svg({train, valid}, {"bAE reconstruction loss", "epoch", "MSE loss"}));
    Series train_acc{"train", epoch, t.numbers("train_acc"), {}};
    Series valid_acc{"validation", epoch, t.numbers("valid_acc"), {}};
    write_text_file(dir / "training_acc.svg",
                    line_chart_svg({train_acc, valid_acc}, {"bAE reconstruction accuracy", "epoch", "accuracy"}));
    written.push_back("training_loss.svg");
    written.push_back("training_acc.svg");
}

void render_sweep(const fs::path& dir, std::vector<std::string>& written) {
    const CsvTable t = read_csv(dir / "sweep_summary.csv");
    const auto params = t.strings("param");
    const auto values = t.numbers("value");
    const auto mean = t.numbers("valid_acc_mean");
    const auto sd = t.numbers("valid_acc_std");
    std::vector<Series> series;
    for (const auto& p : groups_of(params)) {
        Series s{p, {}, {}, {}};
        for (std::size_t i = 0; i < params.size(); ++i) {
            if (params[i] != p) continue;
            s.x.push_back(values[i]);
            s.y.push_back(mean[i]);
            s.err.push_back(sd[i]);
        }
        series.push_back(std::move(s));
    }
    const std::string x_label = series.size() == 1 ? series[0].name : "parameter value";
    write_text_file(dir / "sweep.svg",
                    line_chart_svg(series, {"Validation accuracy (mean +/- std)", x_label, "accuracy"}));
    written.push_back("sweep.svg");
}

void scheme_bar(const CsvTable& t, const std::string& column, const ChartLabels& labels, const fs::path& out) {
    const auto schemes = t.strings("scheme");
    const auto v = t.numbers(column);
    std::vector<std::string> cats;
    std::vector<double> means, sds;
    for (const auto& s : groups_of(schemes)) {
        std::vector<double> vals;
        for (std::size_t i = 0; i < schemes.size(); ++i)
            if (schemes[i] == s) vals.push_back(v[i]);
        cats.push_back(s);
        means.push_back(mean_of(vals));
        sds.push_back(std_of(vals));
    }
    write_text_file(out, bar_chart_svg(cats, means, sds, labels));
}

void render_metrics(const fs::path& dir, std::vector<std::string>& written) {
    const CsvTable t = read_csv(dir / "metrics.csv");
    if (t.column("rho") >= 0) {
        scheme_bar(t, "rho", {"Spearman rank correlation", "scheme", "rho"}, dir / "rho.svg");
        written.push_back("rho.svg");
    }
    if (t.column("r_local") >= 0) {
        scheme_bar(t, "r_local", {"Local optimum ratio", "scheme", "r_Local"}, dir / "r_local.svg");
        written.push_back("r_local.svg");
    }
    std::vector<int> ms;
    for (int m = 1; t.column("L" + std::to_string(m)) >= 0; ++m) ms.push_back(m);
    if (!ms.empty()) {
        const auto schemes = t.strings("scheme");
        std::vector<Series> series;
        for (const auto& s : groups_of(schemes)) {
            Series ser{s, {}, {}, {}};
            for (int m : ms) {
                const auto col = t.numbers("L" + std::to_string(m));
                std::vector<double> vals;
                for (std::size_t i = 0; i < schemes.size(); ++i)
                    if (schemes[i] == s) vals.push_back(col[i]);
                ser.x.push_back(m);
                ser.y.push_back(mean_of(vals));
                ser.err.push_back(std_of(vals));
            }
            series.push_back(std::move(ser));
        }
        write_text_file(dir / "neighborhood.svg",
                        line_chart_svg(series, {"Neighborhood characteristic", "bit flips m", "mean edge distance"}));
        written.push_back("neighborhood.svg");
    }
}

void render_fmqa(const fs::path& dir, std::vector<std::string>& written) {
    if (fs::exists(dir / "summary.csv")) {
        const CsvTable t = read_csv(dir / "summary.csv");
        const auto schemes = t.strings("scheme");
        const auto it = t.numbers("iteration");
        const auto mean = t.numbers("R_mean");
        const auto sd = t.numbers("R_std");
        std::vector<Series> series;
        for (const auto& s : groups_of(schemes)) {
            Series ser{s, {}, {}, {}};
            for (std::size_t i = 0; i < schemes.size(); ++i) {
                if (schemes[i] != s) continue;
                ser.x.push_back(it[i]);
                ser.y.push_back(mean[i]);
                ser.err.push_back(sd[i]);
            }
            series.push_back(std::move(ser));
        }
        write_text_file(dir / "fmqa_r.svg",
                        line_chart_svg(series, {"Approximation ratio (mean +/- std)", "iteration", "R"}));
        written.push_back("fmqa_r.svg");
    }
    if (fs::exists(dir / "feasibility.csv")) {
        const CsvTable t = read_csv(dir / "feasibility.csv");
        write_text_file(dir / "p_feasible.svg",
                        bar_chart_svg(t.strings("scheme"), t.numbers("p_feasible_mean"), t.numbers("p_feasible_std"),
                                      {"Feasible sample probability", "scheme", "P_Feasible"}));
        written.push_back("p_feasible.svg");
    }
}

}  // namespace

std::vector<std::string> render_charts(const fs::path& dir) {
    std::vector<std::string> written;
    if (fs::exists(dir / "training.csv")) render_training(dir, written);
    if (fs::exists(dir / "sweep_summary.csv")) render_sweep(dir, written);
    if (fs::exists(dir / "metrics.csv")) render_metrics(dir, written);
    render_fmqa(dir, written);
    return written;
}

}  // namespace lqcli
