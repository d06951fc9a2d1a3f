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

#include <cstddef>
#include <filesystem>
#include <functional>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <string>
#include <vector>

#include "latentqubo/latentqubo.h"

namespace lqcli {

// Library or I/O failure during a run (exit code 2).
class RuntimeError : public std::runtime_error {
 public:
    using std::runtime_error::runtime_error;
};

// Throws ValidationError or RuntimeError depending on the status class.
void check(lq_status status, const std::string& what);

template <class T, void (*Free)(T*)>
struct HandleDeleter {
    void operator()(T* p) const { Free(p); }
};

using Instance = std::unique_ptr<lq_instance, HandleDeleter<lq_instance, lq_instance_free>>;
using BaeModel = std::unique_ptr<lq_bae_model, HandleDeleter<lq_bae_model, lq_bae_free>>;
using Scheme = std::unique_ptr<lq_scheme, HandleDeleter<lq_scheme, lq_scheme_free>>;
using FmqaResult = std::unique_ptr<lq_fmqa_result, HandleDeleter<lq_fmqa_result, lq_fmqa_result_free>>;
using MetricReport = std::unique_ptr<lq_metric_report, HandleDeleter<lq_metric_report, lq_metric_report_free>>;

// Takes ownership of a library-allocated string.
std::string take_string(char* s);

std::string format_double(double v);  // %.10g, NaN as empty
std::string sha256_hex(const std::string& data);

double mean_of(const std::vector<double>& v);  // NaN entries skipped
double std_of(const std::vector<double>& v);   // population std, NaN entries skipped
double median_of(std::vector<double> v);

// Output directory that records every file written through it.
class OutputDir {
 public:
    explicit OutputDir(std::filesystem::path root);
    const std::filesystem::path& root() const { return root_; }
    std::filesystem::path path(const std::string& rel) const { return root_ / rel; }
    void write(const std::string& rel, const std::string& content);
    void record(const std::string& rel);  // for files written elsewhere (streamed CSV, checkpoints)
    void write_manifest(const std::string& command, const std::string& config_toml, double wall_seconds);

 private:
    std::filesystem::path root_;
    std::vector<std::string> files_;
    std::mutex mu_;
};

void write_text_file(const std::filesystem::path& path, const std::string& content);
std::string read_text_file(const std::filesystem::path& path);

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    int column(const std::string& name) const;  // -1 if absent
    std::vector<double> numbers(const std::string& name) const;
    std::vector<std::string> strings(const std::string& name) const;
};

CsvTable read_csv(const std::filesystem::path& path);

// Runs job(i) for i in [0, n) on up to `threads` workers. Every job runs even if
// others fail; per-job error messages are returned (empty string on success).
std::vector<std::string> run_parallel(std::size_t n, int threads, const std::function<void(std::size_t)>& job);

void log_line(const std::string& msg);  // stderr, serialized

}  // namespace lqcli
