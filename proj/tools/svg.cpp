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

#include "svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

namespace lqcli {

namespace {

constexpr double kWidth = 640, kHeight = 400;
constexpr double kLeft = 70, kRight = 150, kTop = 40, kBottom = 55;
const char* const kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f"};

std::string f(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

std::string tick_label(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '<':
                out += "&lt;";
                break;
            case '>':
                out += "&gt;";
                break;
            case '&':
                out += "&amp;";
                break;
            case '"':
                out += "&quot;";
                break;
            default:
                out += c;
        }
    }
    return out;
}

struct Range {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    void add(double v) {
        if (std::isnan(v)) return;
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    void finish() {
        if (!std::isfinite(lo)) lo = 0, hi = 1;
        if (hi - lo < 1e-12) {
            lo -= 0.5;
            hi += 0.5;
        }
    }
};

std::string frame(const ChartLabels& labels, const Range& xr, const Range& yr, bool x_ticks) {
    const double pw = kWidth - kLeft - kRight, ph = kHeight - kTop - kBottom;
    std::string s = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + f(kWidth) + "\" height=\"" + f(kHeight) +
                    "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    s += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    s += "<text x=\"" + f(kWidth / 2) + "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">" + escape(labels.title) +
         "</text>\n";
    s += "<rect x=\"" + f(kLeft) + "\" y=\"" + f(kTop) + "\" width=\"" + f(pw) + "\" height=\"" + f(ph) +
         "\" fill=\"none\" stroke=\"black\"/>\n";
    for (int i = 0; i <= 5; ++i) {
        const double v = yr.lo + (yr.hi - yr.lo) * i / 5.0;
        const double y = kTop + ph - ph * i / 5.0;
        s += "<line x1=\"" + f(kLeft - 4) + "\" y1=\"" + f(y) + "\" x2=\"" + f(kLeft) + "\" y2=\"" + f(y) +
             "\" stroke=\"black\"/>\n";
        s += "<text x=\"" + f(kLeft - 7) + "\" y=\"" + f(y + 4) + "\" text-anchor=\"end\">" + tick_label(v) + "</text>\n";
        if (x_ticks) {
            const double xv = xr.lo + (xr.hi - xr.lo) * i / 5.0;
            const double x = kLeft + pw * i / 5.0;
            s += "<line x1=\"" + f(x) + "\" y1=\"" + f(kTop + ph) + "\" x2=\"" + f(x) + "\" y2=\"" + f(kTop + ph + 4) +
                 "\" stroke=\"black\"/>\n";
            s += "<text x=\"" + f(x) + "\" y=\"" + f(kTop + ph + 18) + "\" text-anchor=\"middle\">" + tick_label(xv) +
                 "</text>\n";
        }
    }
    s += "<text x=\"" + f(kLeft + pw / 2) + "\" y=\"" + f(kHeight - 12) + "\" text-anchor=\"middle\">" +
         escape(labels.x_label) + "</text>\n";
    s += "<text transform=\"translate(18," + f(kTop + ph / 2) + ") rotate(-90)\" text-anchor=\"middle\">" +
         escape(labels.y_label) + "</text>\n";
    return s;
}

}  // namespace

std::string line_chart_svg(const std::vector<Series>& series, const ChartLabels& labels) {
    Range xr, yr;
    for (const auto& s : series) {
        for (double x : s.x) xr.add(x);
        for (std::size_t i = 0; i < s.y.size(); ++i) {
            const double e = i < s.err.size() && !std::isnan(s.err[i]) ? s.err[i] : 0.0;
            yr.add(s.y[i] - e);
            yr.add(s.y[i] + e);
        }
    }
    xr.finish();
    yr.finish();
    const double pw = kWidth - kLeft - kRight, ph = kHeight - kTop - kBottom;
    auto px = [&](double x) { return kLeft + (x - xr.lo) / (xr.hi - xr.lo) * pw; };
    auto py = [&](double y) { return kTop + ph - (y - yr.lo) / (yr.hi - yr.lo) * ph; };

    std::string out = frame(labels, xr, yr, true);
    for (std::size_t k = 0; k < series.size(); ++k) {
        const auto& s = series[k];
        const std::string color = kPalette[k % std::size(kPalette)];
        std::string pts;
        for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
            if (std::isnan(s.y[i])) continue;
            pts += f(px(s.x[i])) + "," + f(py(s.y[i])) + " ";
            if (i < s.err.size() && !std::isnan(s.err[i]) && s.err[i] > 0) {
                out += "<line x1=\"" + f(px(s.x[i])) + "\" y1=\"" + f(py(s.y[i] - s.err[i])) + "\" x2=\"" + f(px(s.x[i])) +
                       "\" y2=\"" + f(py(s.y[i] + s.err[i])) + "\" stroke=\"" + color + "\" stroke-opacity=\"0.4\"/>\n";
            }
        }
        out += "<polyline fill=\"none\" stroke=\"" + color + "\" stroke-width=\"1.5\" points=\"" + pts + "\"/>\n";
        const double ly = kTop + 14 + 18 * static_cast<double>(k);
        out += "<line x1=\"" + f(kWidth - kRight + 10) + "\" y1=\"" + f(ly) + "\" x2=\"" + f(kWidth - kRight + 30) +
               "\" y2=\"" + f(ly) + "\" stroke=\"" + color + "\" stroke-width=\"2\"/>\n";
        out += "<text x=\"" + f(kWidth - kRight + 35) + "\" y=\"" + f(ly + 4) + "\">" + escape(s.name) + "</text>\n";
    }
    return out + "</svg>\n";
}

std::string bar_chart_svg(const std::vector<std::string>& categories, const std::vector<double>& values,
                          const std::vector<double>& errors, const ChartLabels& labels) {
    Range yr;
    yr.add(0.0);
    for (std::size_t i = 0; i < values.size(); ++i) {
        const double e = i < errors.size() && !std::isnan(errors[i]) ? errors[i] : 0.0;
        yr.add(values[i] + e);
        yr.add(values[i] - e);
    }
    yr.finish();
    const double pw = kWidth - kLeft - kRight, ph = kHeight - kTop - kBottom;
    auto py = [&](double y) { return kTop + ph - (y - yr.lo) / (yr.hi - yr.lo) * ph; };
    std::string out = frame(labels, Range{}, yr, false);
    const double slot = pw / std::max<double>(1.0, static_cast<double>(categories.size()));
    for (std::size_t i = 0; i < categories.size() && i < values.size(); ++i) {
        const double x = kLeft + slot * static_cast<double>(i) + slot * 0.2;
        const double w = slot * 0.6;
        const double top = py(std::max(values[i], 0.0)), base = py(std::min(values[i], 0.0));
        out += "<rect x=\"" + f(x) + "\" y=\"" + f(top) + "\" width=\"" + f(w) + "\" height=\"" + f(base - top) +
               "\" fill=\"" + kPalette[i % std::size(kPalette)] + "\"/>\n";
        if (i < errors.size() && !std::isnan(errors[i]) && errors[i] > 0) {
            const double cx = x + w / 2;
            out += "<line x1=\"" + f(cx) + "\" y1=\"" + f(py(values[i] - errors[i])) + "\" x2=\"" + f(cx) + "\" y2=\"" +
                   f(py(values[i] + errors[i])) + "\" stroke=\"black\"/>\n";
        }
        out += "<text x=\"" + f(x + w / 2) + "\" y=\"" + f(kTop + ph + 18) + "\" text-anchor=\"middle\">" +
               escape(categories[i]) + "</text>\n";
    }
    return out + "</svg>\n";
}

}  // namespace lqcli
