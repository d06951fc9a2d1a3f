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

#include "common.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>
#include <thread>

#include "config.hpp"
#include "json.hpp"

namespace lqcli {

namespace fs = std::filesystem;

void check(lq_status status, const std::string& what) {
    if (status == LQ_OK) return;
    const std::string msg = what + ": " + lq_status_name(status) + ": " + lq_last_error();
    switch (status) {
        case LQ_ERR_INVALID_ARGUMENT:
        case LQ_ERR_OUT_OF_RANGE:
        case LQ_ERR_SIZE_LIMIT:
        case LQ_ERR_DIMENSION_MISMATCH:
            throw ValidationError(msg);
        default:
            throw RuntimeError(msg);
    }
}

std::string take_string(char* s) {
    std::unique_ptr<char, HandleDeleter<char, lq_string_free>> guard(s);
    return s ? std::string(s) : std::string();
}

std::string format_double(double v) {
    if (std::isnan(v)) return "";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

std::string sha256_hex(const std::string& data) {
    char* hex = nullptr;
    check(lq_sha256_string(data.data(), data.size(), &hex), "sha256");
    return take_string(hex);
}

double mean_of(const std::vector<double>& v) {
    double s = 0;
    std::size_t n = 0;
    for (double x : v) {
        if (std::isnan(x)) continue;
        s += x;
        ++n;
    }
    return n ? s / static_cast<double>(n) : std::numeric_limits<double>::quiet_NaN();
}

double std_of(const std::vector<double>& v) {
    const double m = mean_of(v);
    if (std::isnan(m)) return m;
    double s = 0;
    std::size_t n = 0;
    for (double x : v) {
        if (std::isnan(x)) continue;
        s += (x - m) * (x - m);
        ++n;
    }
    return std::sqrt(s / static_cast<double>(n));
}

double median_of(std::vector<double> v) {
    v.erase(std::remove_if(v.begin(), v.end(), [](double x) { return std::isnan(x); }), v.end());
    if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

void write_text_file(const fs::path& path, const std::string& content) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    const fs::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw RuntimeError("cannot write " + tmp.string());
        out << content;
        if (!out) throw RuntimeError("write failed for " + tmp.string());
    }
    fs::rename(tmp, path);
}

std::string read_text_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw RuntimeError("cannot read " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

OutputDir::OutputDir(fs::path root) : root_(std::move(root)) {
    std::error_code ec;
    fs::create_directories(root_, ec);
    if (ec) throw RuntimeError("cannot create output directory " + root_.string() + ": " + ec.message());
}

void OutputDir::write(const std::string& rel, const std::string& content) {
    write_text_file(root_ / rel, content);
    record(rel);
}

void OutputDir::record(const std::string& rel) {
    std::lock_guard<std::mutex> lock(mu_);
    if (std::find(files_.begin(), files_.end(), rel) == files_.end()) files_.push_back(rel);
}

void OutputDir::write_manifest(const std::string& command, const std::string& config_toml, double wall_seconds) {
    std::vector<std::string> files;
    {
        std::lock_guard<std::mutex> lock(mu_);
        files = files_;
    }
    std::sort(files.begin(), files.end());
    nlohmann::ordered_json j;
    j["command"] = command;
    j["versions"] = {{"latentqubo", lq_version()}, {"lq", lq_version()}};
    j["config_sha256"] = sha256_hex(config_toml);
    j["wall_seconds"] = wall_seconds;
    auto arr = nlohmann::ordered_json::array();
    for (const auto& rel : files) {
        char* hex = nullptr;
        check(lq_sha256_file((root_ / rel).string().c_str(), &hex), "sha256 of " + rel);
        arr.push_back({{"path", rel}, {"sha256", take_string(hex)}, {"bytes", fs::file_size(root_ / rel)}});
    }
    j["files"] = arr;
    write_text_file(root_ / "manifest.json", j.dump(2) + "\n");
}

int CsvTable::column(const std::string& name) const {
    for (std::size_t i = 0; i < header.size(); ++i)
        if (header[i] == name) return static_cast<int>(i);
    return -1;
}

std::vector<std::string> CsvTable::strings(const std::string& name) const {
    const int c = column(name);
    if (c < 0) throw RuntimeError("CSV column '" + name + "' missing");
    std::vector<std::string> out;
    for (const auto& r : rows) out.push_back(static_cast<std::size_t>(c) < r.size() ? r[c] : "");
    return out;
}

std::vector<double> CsvTable::numbers(const std::string& name) const {
    std::vector<double> out;
    for (const auto& s : strings(name)) {
        if (s.empty()) {
            out.push_back(std::numeric_limits<double>::quiet_NaN());
            continue;
        }
        try {
            out.push_back(std::stod(s));
        } catch (const std::exception&) {
            throw RuntimeError("CSV column '" + name + "': not a number: " + s);
        }
    }
    return out;
}

CsvTable read_csv(const fs::path& path) {
    std::istringstream in(read_text_file(path));
    CsvTable t;
    std::string line;
    auto split = [](const std::string& l) {
        std::vector<std::string> cells;
        std::stringstream ss(l);
        std::string cell;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        if (!l.empty() && l.back() == ',') cells.emplace_back();
        return cells;
    };
    if (!std::getline(in, line)) throw RuntimeError("empty CSV file " + path.string());
    t.header = split(line);
    while (std::getline(in, line))
        if (!line.empty()) t.rows.push_back(split(line));
    return t;
}

std::vector<std::string> run_parallel(std::size_t n, int threads, const std::function<void(std::size_t)>& job) {
    std::vector<std::string> errors(n);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < n; i = next++) {
            try {
                job(i);
            } catch (const std::exception& e) {
                errors[i] = e.what();
                if (errors[i].empty()) errors[i] = "unknown error";
            }
        }
    };
    const std::size_t n_workers = std::min<std::size_t>(n, static_cast<std::size_t>(std::max(1, threads)));
    if (n_workers <= 1) {
        worker();
        return errors;
    }
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < n_workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    return errors;
}

void log_line(const std::string& msg) {
    static std::mutex mu;
    std::lock_guard<std::mutex> lock(mu);
    std::cerr << msg << '\n';
}

}  // namespace lqcli
