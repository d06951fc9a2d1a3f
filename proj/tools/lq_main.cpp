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

// lq: experiment driver for latentqubo. Talks to the library through the C API only.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#if defined(__GLIBC__)
#include <malloc.h>
#endif

#include "CLI11.hpp"
#include "charts.hpp"
#include "common.hpp"
#include "config.hpp"
#include "json.hpp"
#include "latentqubo/latentqubo.h"

namespace fs = std::filesystem;
using namespace lqcli;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitRuntime = 2;
constexpr int kExitVerify = 3;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct CommonOptions {
    std::string config;
    std::string out;
    std::optional<std::uint64_t> seed;
    std::optional<int> threads;
};

void add_common(CLI::App* sub, CommonOptions& c, const std::string& out_help) {
    sub->add_option("--config", c.config, "TOML-style experiment config")->check(CLI::ExistingFile);
    sub->add_option("-o,--out", c.out, out_help);
    sub->add_option("--seed", c.seed, "first run seed");
    sub->add_option("--threads", c.threads, "worker threads")->check(CLI::PositiveNumber);
}

ExperimentConfig base_config(const CommonOptions& c) {
    ExperimentConfig cfg = c.config.empty() ? ExperimentConfig{} : load_config(c.config);
    if (c.seed) cfg.seed = *c.seed;
    if (c.threads) cfg.threads = *c.threads;
    return cfg;
}

std::string require_out(const CommonOptions& c) {
    if (c.out.empty()) throw ValidationError("--out is required");
    return c.out;
}

void require_file(const std::string& path, const std::string& what) {
    if (!fs::is_regular_file(path)) throw ValidationError(what + " not found: " + path);
}

std::vector<Instance> make_instances(const ExperimentConfig& cfg) {
    std::vector<Instance> out;
    if (!cfg.instance_path.empty()) {
        require_file(cfg.instance_path, "instance file");
        if (cfg.n_instances != 1) throw ValidationError("instance.count must be 1 when instance.path is set");
        lq_instance* p = nullptr;
        check(lq_instance_load(cfg.instance_path.c_str(), &p), "load instance");
        out.emplace_back(p);
        return out;
    }
    if (cfg.n_instances < 1) throw ValidationError("instance.count must be at least 1");
    for (int k = 0; k < cfg.n_instances; ++k) {
        lq_instance* p = nullptr;
        check(lq_instance_generate(cfg.cities, cfg.instance_seed + static_cast<std::uint64_t>(k), &p),
              "generate instance");
        out.emplace_back(p);
    }
    return out;
}

const std::vector<std::string> kSchemeNames = {"bae", "log", "gray", "random"};

void validate_schemes(const std::vector<std::string>& schemes) {
    if (schemes.empty()) throw ValidationError("no schemes selected");
    for (const auto& s : schemes)
        if (std::find(kSchemeNames.begin(), kSchemeNames.end(), s) == kSchemeNames.end())
            throw ValidationError("unknown scheme '" + s + "' (bae, log, gray, random)");
}

bool uses_bae(const std::vector<std::string>& schemes) {
    return std::find(schemes.begin(), schemes.end(), "bae") != schemes.end();
}

BaeModel load_bae(const ExperimentConfig& cfg, int n_cities) {
    if (cfg.checkpoint.empty()) throw ValidationError("scheme 'bae' selected but no --checkpoint given");
    require_file(cfg.checkpoint, "checkpoint");
    lq_bae_model* p = nullptr;
    check(lq_bae_load(cfg.checkpoint.c_str(), &p), "load checkpoint");
    BaeModel model(p);
    lq_bae_config stored{};
    check(lq_bae_config_get(model.get(), &stored), "checkpoint config");
    if (stored.n_cities != n_cities)
        throw ValidationError("checkpoint was trained for " + std::to_string(stored.n_cities) + " cities, instance has " +
                              std::to_string(n_cities));
    return model;
}

Scheme make_scheme(const std::string& name, int n_cities, std::uint64_t seed, const lq_bae_model* bae) {
    lq_scheme* p = nullptr;
    if (name == "log") {
        check(lq_scheme_log(n_cities, &p), "log scheme");
    } else if (name == "gray") {
        check(lq_scheme_gray(n_cities, &p), "gray scheme");
    } else if (name == "random") {
        check(lq_scheme_random(n_cities, seed, &p), "random-label scheme");
    } else {
        check(lq_scheme_bae(bae, &p), "bae scheme");
    }
    return Scheme(p);
}

void finish(OutputDir& out, const std::string& command, const ExperimentConfig& cfg, Clock::time_point t0) {
    out.write("config.toml", cfg.to_toml());
    out.write_manifest(command, cfg.to_toml(), seconds_since(t0));
}

void record_charts(OutputDir& out, const std::string& rel_dir) {
    for (const auto& name : render_charts(out.path(rel_dir))) out.record(rel_dir + name);
}

// ---- gen-instance ------------------------------------------------------

int cmd_gen_instance(const CommonOptions& common, std::optional<int> cities) {
    ExperimentConfig cfg = base_config(common);
    if (cities) cfg.cities = *cities;
    if (common.seed) cfg.instance_seed = *common.seed;
    if (cfg.cities < 3) throw ValidationError("--cities must be at least 3");
    const std::string path = require_out(common);

    lq_instance* p = nullptr;
    check(lq_instance_generate(cfg.cities, cfg.instance_seed, &p), "generate instance");
    Instance inst(p);
    if (fs::path(path).has_parent_path()) fs::create_directories(fs::path(path).parent_path());
    check(lq_instance_save(inst.get(), path.c_str()), "save instance");
    std::printf("instance: %s (%d cities, seed %llu)\n", path.c_str(), cfg.cities,
                static_cast<unsigned long long>(cfg.instance_seed));
    if (cfg.cities <= 10) {
        std::vector<int> tour(static_cast<std::size_t>(cfg.cities));
        double f_star = 0;
        check(lq_instance_optimum(inst.get(), tour.data(), &f_star), "optimum");
        std::printf("f* = %.10g\noptimal tour:", f_star);
        for (int c : tour) std::printf(" %d", c);
        std::printf("\n");
    }
    return kExitOk;
}

// ---- train-bae ---------------------------------------------------------

struct SweepSpec {
    std::string param;  // "dz" or "dh"
    std::vector<int> values;
};

SweepSpec parse_sweep(const std::string& spec) {
    const auto eq = spec.find('=');
    if (eq == std::string::npos) throw ValidationError("--sweep expects PARAM=VALUES, e.g. dz=13..16");
    SweepSpec s;
    s.param = spec.substr(0, eq);
    if (s.param != "dz" && s.param != "dh") throw ValidationError("--sweep parameter must be dz or dh");
    const std::string v = spec.substr(eq + 1);
    auto to_int = [&](const std::string& x) {
        try {
            std::size_t used = 0;
            const int n = std::stoi(x, &used);
            if (used != x.size()) throw std::invalid_argument(x);
            return n;
        } catch (const std::exception&) {
            throw ValidationError("--sweep: bad value '" + x + "'");
        }
    };
    const auto dots = v.find("..");
    if (dots != std::string::npos) {
        const int lo = to_int(v.substr(0, dots)), hi = to_int(v.substr(dots + 2));
        if (hi < lo) throw ValidationError("--sweep: empty range");
        for (int i = lo; i <= hi; ++i) s.values.push_back(i);
    } else {
        for (const auto& x : split_list(v)) s.values.push_back(to_int(x));
    }
    if (s.values.empty()) throw ValidationError("--sweep: no values");
    return s;
}

bool same_config(const lq_bae_config& a, const lq_bae_config& b) {
    return a.n_cities == b.n_cities && a.latent_bits == b.latent_bits && a.hidden == b.hidden && a.layers == b.layers &&
           a.lr == b.lr && a.weight_decay == b.weight_decay && a.epochs == b.epochs && a.batch_size == b.batch_size &&
           a.seed == b.seed && a.data_seed == b.data_seed && a.n_tours == b.n_tours &&
           a.train_fraction == b.train_fraction;
}

struct TrainRun {
    std::string param;
    int value = 0;
    lq_bae_config cfg{};
    std::string rel;  // directory relative to the output root, "" or ending in '/'
};

struct TrainOutcome {
    lq_epoch_record last{};
    bool have_last = false;
    std::string checksum;
};

struct StreamState {
    std::ofstream* csv = nullptr;
    std::string tag;
    lq_epoch_record last{};
    bool have_last = false;
    bool write_failed = false;
};

void on_epoch(const lq_epoch_record* rec, void* user) {
    auto* st = static_cast<StreamState*>(user);
    st->last = *rec;
    st->have_last = true;
    char* row = nullptr;
    if (lq_epoch_csv_row(rec, &row) == LQ_OK) {
        *st->csv << row;
        st->csv->flush();
        if (!*st->csv) st->write_failed = true;
    }
    lq_string_free(row);
    if (rec->evaluated && (rec->epoch % 100 == 0 || rec->epoch == 1)) {
        char buf[160];
        std::snprintf(buf, sizeof buf, "%sepoch %d loss %.5f valid_acc %.4f", st->tag.c_str(), rec->epoch,
                      rec->train_loss, rec->valid_acc);
        log_line(buf);
    }
}

lq_epoch_record last_csv_record(const fs::path& csv) {
    const CsvTable t = read_csv(csv);
    if (t.rows.empty()) throw RuntimeError("no rows in " + csv.string());
    const std::size_t i = t.rows.size() - 1;
    lq_epoch_record r{};
    r.epoch = static_cast<int>(t.numbers("epoch")[i]);
    r.train_loss = t.numbers("train_loss")[i];
    r.valid_loss = t.numbers("valid_loss")[i];
    r.train_acc = t.numbers("train_acc")[i];
    r.valid_acc = t.numbers("valid_acc")[i];
    r.evaluated = !std::isnan(r.valid_acc);
    return r;
}


// True when a finished run with the same config exists; a conflicting one is a usage error.
bool resumable(OutputDir& out, const TrainRun& run) {
    const fs::path ckpt = out.path(run.rel + "checkpoint.json");
    const fs::path csv = out.path(run.rel + "training.csv");
    if (!fs::exists(ckpt) || !fs::exists(csv)) return false;
    lq_bae_model* p = nullptr;
    check(lq_bae_load(ckpt.string().c_str(), &p), "load " + ckpt.string());
    BaeModel model(p);
    lq_bae_config stored{};
    check(lq_bae_config_get(model.get(), &stored), "checkpoint config");
    if (!same_config(stored, run.cfg))
        throw ValidationError("--resume: " + ckpt.string() + " was trained with a different config");
    if (last_csv_record(csv).epoch != run.cfg.epochs) throw ValidationError("--resume: " + csv.string() + " is incomplete");
    return true;
}

TrainOutcome train_one(OutputDir& out, const TrainRun& run, bool resume, const std::string& tag) {
    const fs::path dir = out.path(run.rel);
    fs::create_directories(dir);
    const fs::path ckpt = dir / "checkpoint.json";
    const fs::path csv = dir / "training.csv";
    TrainOutcome outcome;
    BaeModel model;

    if (resume) {
        lq_bae_model* p = nullptr;
        check(lq_bae_load(ckpt.string().c_str(), &p), "load " + ckpt.string());
        model.reset(p);
        outcome.last = last_csv_record(csv);
        outcome.have_last = true;
        log_line(tag + "reusing " + ckpt.string());
    } else {
        std::ofstream stream(csv, std::ios::binary | std::ios::trunc);
        if (!stream) throw RuntimeError("cannot write " + csv.string());
        stream << lq_epoch_csv_header();
        StreamState st;
        st.csv = &stream;
        st.tag = tag;
        lq_bae_model* p = nullptr;
        const lq_status status = lq_bae_train(&run.cfg, on_epoch, &st, &p);
        stream.close();
        out.record(run.rel + "training.csv");  // partial curves stay on disk after a failure
        check(status, tag + "training");
        model.reset(p);
        if (st.write_failed) throw RuntimeError("write failed for " + csv.string());
        check(lq_bae_save(model.get(), ckpt.string().c_str()), "save checkpoint");
        outcome.last = st.last;
        outcome.have_last = st.have_last;
    }
    out.record(run.rel + "training.csv");
    out.record(run.rel + "checkpoint.json");
    char* hex = nullptr;
    check(lq_bae_checksum(model.get(), &hex), "checksum");
    outcome.checksum = take_string(hex);
    record_charts(out, run.rel);
    return outcome;
}

struct TrainBaeOptions {
    std::optional<int> dz, dh, epochs, seeds, eval_every, n_tours;
    std::optional<std::uint64_t> data_seed;
    std::string sweep;
    bool resume = false;
};

int cmd_train_bae(const CommonOptions& common, const TrainBaeOptions& o) {
    const auto t0 = Clock::now();
    ExperimentConfig cfg = base_config(common);
    if (o.dz) cfg.bae.latent_bits = *o.dz;
    if (o.dh) cfg.bae.hidden = *o.dh;
    if (o.epochs) cfg.bae.epochs = *o.epochs;
    if (o.seeds) cfg.n_seeds = *o.seeds;
    if (o.eval_every) cfg.bae.eval_every = *o.eval_every;
    if (o.n_tours) cfg.bae.n_tours = *o.n_tours;
    if (o.data_seed) cfg.bae.data_seed = *o.data_seed;
    cfg.bae.n_cities = cfg.cities;
    if (cfg.n_seeds < 1) throw ValidationError("--seeds must be at least 1");
    OutputDir out(require_out(common));

    const auto seeds = cfg.run_seeds();
    const bool multi = !o.sweep.empty() || seeds.size() > 1;
    SweepSpec sweep = o.sweep.empty() ? SweepSpec{"dz", {cfg.bae.latent_bits}} : parse_sweep(o.sweep);

    std::vector<TrainRun> runs;
    for (int v : sweep.values) {
        for (auto s : seeds) {
            TrainRun r;
            r.param = sweep.param;
            r.value = v;
            r.cfg = cfg.bae;
            (sweep.param == "dz" ? r.cfg.latent_bits : r.cfg.hidden) = v;
            r.cfg.seed = s;
            r.rel = multi ? "runs/" + sweep.param + std::to_string(v) + "_s" + std::to_string(s) + "/" : "";
            runs.push_back(r);
        }
    }

    std::vector<char> reuse(runs.size(), 0);
    if (o.resume)
        for (std::size_t i = 0; i < runs.size(); ++i) reuse[i] = resumable(out, runs[i]);

    std::vector<TrainOutcome> outcomes(runs.size());
    const auto errors = run_parallel(runs.size(), cfg.threads, [&](std::size_t i) {
        const std::string tag = multi ? "[" + runs[i].rel.substr(5, runs[i].rel.size() - 6) + "] " : "";
        outcomes[i] = train_one(out, runs[i], reuse[i] != 0, tag);
    });

    std::ostringstream table;
    table << "param,value,seed,epochs,final_train_loss,final_valid_loss,final_train_acc,final_valid_acc,model_sha256\n";
    for (std::size_t i = 0; i < runs.size(); ++i) {
        if (!errors[i].empty()) continue;
        const auto& r = outcomes[i].last;
        table << runs[i].param << ',' << runs[i].value << ',' << runs[i].cfg.seed << ',' << r.epoch << ','
              << format_double(r.train_loss) << ',' << format_double(r.valid_loss) << ','
              << format_double(r.train_acc) << ',' << format_double(r.valid_acc) << ',' << outcomes[i].checksum
              << '\n';
    }
    if (multi) {
        out.write("sweep.csv", table.str());
        std::ostringstream summary;
        summary << "param,value,n,valid_acc_mean,valid_acc_std,valid_loss_mean,valid_loss_std,train_loss_mean,"
                   "train_loss_std\n";
        for (int v : sweep.values) {
            std::vector<double> acc, vloss, tloss;
            for (std::size_t i = 0; i < runs.size(); ++i) {
                if (runs[i].value != v || !errors[i].empty()) continue;
                acc.push_back(outcomes[i].last.valid_acc);
                vloss.push_back(outcomes[i].last.valid_loss);
                tloss.push_back(outcomes[i].last.train_loss);
            }
            summary << sweep.param << ',' << v << ',' << acc.size() << ',' << format_double(mean_of(acc)) << ','
                    << format_double(std_of(acc)) << ',' << format_double(mean_of(vloss)) << ','
                    << format_double(std_of(vloss)) << ',' << format_double(mean_of(tloss)) << ','
                    << format_double(std_of(tloss)) << '\n';
        }
        out.write("sweep_summary.csv", summary.str());
        record_charts(out, "");
    }
    std::cout << table.str();
    finish(out, "train-bae", cfg, t0);

    bool failed = false;
    for (std::size_t i = 0; i < runs.size(); ++i) {
        if (errors[i].empty()) continue;
        log_line("run " + (runs[i].rel.empty() ? std::string("(single)") : runs[i].rel) + " failed: " + errors[i]);
        failed = true;
    }
    if (failed) throw RuntimeError("one or more training runs failed");
    return kExitOk;
}

// ---- analyze -----------------------------------------------------------

struct AnalyzeOptions {
    std::string schemes, metrics, checkpoint, instance, local_neighborhood;
    std::optional<int> seeds, cities, pairs, tours, flips, m_max;
    std::optional<std::uint64_t> instance_seed;
};

void apply_metric_selection(lq_metrics_options& m, const std::string& list) {
    m.rho = m.neighborhood = m.local_optimum = 0;
    for (const auto& name : split_list(list)) {
        if (name == "rho") {
            m.rho = 1;
        } else if (name == "neighborhood") {
            m.neighborhood = 1;
        } else if (name == "local") {
            m.local_optimum = 1;
        } else {
            throw ValidationError("unknown metric '" + name + "' (rho, neighborhood, local)");
        }
    }
    if (!m.rho && !m.neighborhood && !m.local_optimum) throw ValidationError("--metrics selects nothing");
}

int cmd_analyze(const CommonOptions& common, const AnalyzeOptions& o) {
    const auto t0 = Clock::now();
    ExperimentConfig cfg = base_config(common);
    if (!o.schemes.empty()) cfg.schemes = split_list(o.schemes);
    if (!o.metrics.empty()) apply_metric_selection(cfg.metrics, o.metrics);
    if (!o.checkpoint.empty()) cfg.checkpoint = o.checkpoint;
    if (!o.instance.empty()) cfg.instance_path = o.instance;
    if (o.seeds) cfg.n_seeds = *o.seeds;
    if (o.cities) cfg.cities = *o.cities;
    if (o.instance_seed) cfg.instance_seed = *o.instance_seed;
    if (o.pairs) cfg.metrics.n_pairs = *o.pairs;
    if (o.tours) cfg.metrics.n_tours = *o.tours;
    if (o.flips) cfg.metrics.n_flips = *o.flips;
    if (o.m_max) cfg.metrics.m_max = *o.m_max;
    if (!o.local_neighborhood.empty()) apply_config_text(cfg, "[metrics]\nlocal_neighborhood = \"" + o.local_neighborhood + "\"\n");
    cfg.n_instances = 1;
    validate_schemes(cfg.schemes);
    if (cfg.n_seeds < 1) throw ValidationError("--seeds must be at least 1");

    auto instances = make_instances(cfg);
    const lq_instance* inst = instances.front().get();
    const int n = lq_instance_n_cities(inst);
    BaeModel bae;
    if (uses_bae(cfg.schemes)) bae = load_bae(cfg, n);
    OutputDir out(require_out(common));

    struct Job {
        std::string scheme;
        std::uint64_t seed;
    };
    std::vector<Job> jobs;
    for (const auto& s : cfg.schemes)
        for (auto seed : cfg.run_seeds()) jobs.push_back({s, seed});

    std::vector<MetricReport> reports(jobs.size());
    const auto errors = run_parallel(jobs.size(), cfg.threads, [&](std::size_t i) {
        const Scheme scheme = make_scheme(jobs[i].scheme, n, jobs[i].seed, bae.get());
        lq_metric_report* r = nullptr;
        check(lq_metrics_analyze(scheme.get(), inst, &cfg.metrics, jobs[i].seed, &r), "analyze " + jobs[i].scheme);
        reports[i].reset(r);
        check(lq_metric_report_set_label(r, jobs[i].scheme.c_str(), jobs[i].seed), "label");
        log_line("analyzed " + jobs[i].scheme + " seed " + std::to_string(jobs[i].seed));
    });
    for (std::size_t i = 0; i < jobs.size(); ++i)
        if (!errors[i].empty()) throw RuntimeError(jobs[i].scheme + " seed " + std::to_string(jobs[i].seed) + ": " + errors[i]);

    std::vector<const lq_metric_report*> raw;
    for (const auto& r : reports) raw.push_back(r.get());
    char* text = nullptr;
    check(lq_metric_reports_csv(raw.data(), raw.size(), &text), "metrics csv");
    out.write("metrics.csv", take_string(text));
    check(lq_metric_reports_json(raw.data(), raw.size(), &text), "metrics json");
    const std::string json = take_string(text);
    out.write("metrics.json", json);
    record_charts(out, "");
    finish(out, "analyze", cfg, t0);

    const auto summary = nlohmann::json::parse(json).at("summary");
    for (auto it = summary.begin(); it != summary.end(); ++it) std::cout << it.key() << ": " << it.value().dump() << '\n';
    return kExitOk;
}

// ---- run-fmqa ----------------------------------------------------------

struct FmqaOptions {
    std::string schemes, checkpoint, instance, scaling;
    std::optional<int> seeds, instances, cities, iters, n_init, reads, sweeps;
    std::optional<std::uint64_t> instance_seed;
};

struct FmqaRun {
    std::string scheme;
    std::size_t instance = 0;
    std::uint64_t seed = 0;
    std::string status = "ok";
    double f_star = NAN, initial_best = NAN, final_best = NAN, p_feasible = NAN;
    int reached = 0;
    std::size_t dataset_size = 0;
    std::vector<double> ratios;  // per completed iteration
};

int cmd_run_fmqa(const CommonOptions& common, const FmqaOptions& o) {
    const auto t0 = Clock::now();
    ExperimentConfig cfg = base_config(common);
    if (!o.schemes.empty()) cfg.schemes = split_list(o.schemes);
    if (!o.checkpoint.empty()) cfg.checkpoint = o.checkpoint;
    if (!o.instance.empty()) cfg.instance_path = o.instance;
    if (!o.scaling.empty()) cfg.fmqa.fm.scaling = parse_scaling(o.scaling);
    if (o.seeds) cfg.n_seeds = *o.seeds;
    if (o.instances) cfg.n_instances = *o.instances;
    if (o.cities) cfg.cities = *o.cities;
    if (o.iters) cfg.fmqa.n_iters = *o.iters;
    if (o.n_init) cfg.fmqa.n_init = *o.n_init;
    if (o.reads) cfg.fmqa.anneal.n_reads = *o.reads;
    if (o.sweeps) cfg.fmqa.anneal.n_sweeps = *o.sweeps;
    if (o.instance_seed) cfg.instance_seed = *o.instance_seed;
    validate_schemes(cfg.schemes);
    if (cfg.n_seeds < 1) throw ValidationError("--seeds must be at least 1");
    if (cfg.fmqa.n_iters < 0) throw ValidationError("--iters must be non-negative");

    const auto instances = make_instances(cfg);
    const int n = lq_instance_n_cities(instances.front().get());
    for (const auto& inst : instances)
        if (lq_instance_n_cities(inst.get()) != n) throw ValidationError("instances differ in size");
    BaeModel bae;
    if (uses_bae(cfg.schemes)) bae = load_bae(cfg, n);
    OutputDir out(require_out(common));

    std::vector<FmqaRun> runs;
    for (const auto& s : cfg.schemes)
        for (std::size_t k = 0; k < instances.size(); ++k)
            for (auto seed : cfg.run_seeds()) {
                FmqaRun r;
                r.scheme = s;
                r.instance = k;
                r.seed = seed;
                runs.push_back(r);
            }
    auto run_name = [](const FmqaRun& r) {
        return r.scheme + "_inst" + std::to_string(r.instance) + "_seed" + std::to_string(r.seed);
    };

    const auto errors = run_parallel(runs.size(), cfg.threads, [&](std::size_t i) {
        FmqaRun& r = runs[i];
        const Scheme scheme = make_scheme(r.scheme, n, r.seed, bae.get());
        lq_fmqa_config fc = cfg.fmqa;
        fc.seed = r.seed;
        lq_fmqa_result* p = nullptr;
        const lq_status status = lq_fmqa_run(instances[r.instance].get(), scheme.get(), &fc, &p);
        const std::string err = status == LQ_OK ? "" : std::string(lq_last_error());
        FmqaResult res(p);
        if (res) {
            char* csv = nullptr;
            check(lq_fmqa_history_csv(res.get(), &csv), "history csv");
            out.write("runs/" + run_name(r) + ".csv", take_string(csv));
            r.f_star = lq_fmqa_f_star(res.get());
            r.initial_best = lq_fmqa_initial_best(res.get());
            r.final_best = lq_fmqa_final_best(res.get());
            r.reached = lq_fmqa_reached_optimum(res.get());
            r.dataset_size = lq_fmqa_dataset_size(res.get());
            r.p_feasible = lq_fmqa_feasible_probability(res.get());
            for (std::size_t t = 0; t < lq_fmqa_n_iterations(res.get()); ++t) {
                lq_fmqa_iteration it{};
                check(lq_fmqa_iteration_get(res.get(), t, &it), "iteration");
                r.ratios.push_back(it.ratio);
            }
        }
        if (status != LQ_OK) {
            r.status = "error";
            throw RuntimeError(run_name(r) + ": " + lq_status_name(status) + ": " + err);
        }
        char buf[200];
        std::snprintf(buf, sizeof buf, "%s: R %.4f after %zu iterations", run_name(r).c_str(),
                      std::max(1.0, r.final_best / r.f_star), r.ratios.size());
        log_line(buf);
    });

    auto initial_ratio = [](const FmqaRun& r) { return std::max(1.0, r.initial_best / r.f_star); };
    auto final_ratio = [&](const FmqaRun& r) { return r.ratios.empty() ? initial_ratio(r) : r.ratios.back(); };
    auto usable = [&](std::size_t i) { return errors[i].empty(); };

    std::ostringstream table;
    table << "scheme,instance,instance_seed,seed,f_star,initial_best,final_best,R_final,reached_optimum,iterations,"
             "p_feasible,dataset_size,status\n";
    for (std::size_t i = 0; i < runs.size(); ++i) {
        const auto& r = runs[i];
        const std::uint64_t inst_seed = lq_instance_seed(instances[r.instance].get());
        table << r.scheme << ',' << r.instance << ',' << inst_seed << ',' << r.seed << ',' << format_double(r.f_star)
              << ',' << format_double(r.initial_best) << ',' << format_double(r.final_best) << ','
              << (usable(i) ? format_double(final_ratio(r)) : "") << ',' << r.reached << ',' << r.ratios.size() << ','
              << format_double(r.p_feasible) << ',' << r.dataset_size << ',' << (usable(i) ? "ok" : "error") << '\n';
    }
    out.write("runs.csv", table.str());

    std::ostringstream summary, feas;
    summary << "scheme,iteration,R_mean,R_std,n\n";
    feas << "scheme,n_runs,p_feasible_mean,p_feasible_std,R_final_median,R_final_mean,R_final_std,optimum_rate\n";
    for (const auto& s : cfg.schemes) {
        std::vector<std::size_t> idx;
        for (std::size_t i = 0; i < runs.size(); ++i)
            if (runs[i].scheme == s && usable(i)) idx.push_back(i);
        for (int t = 0; t <= cfg.fmqa.n_iters; ++t) {
            std::vector<double> v;
            for (auto i : idx) {
                const auto& r = runs[i];
                if (t == 0 || r.ratios.empty()) {
                    v.push_back(initial_ratio(r));
                } else {
                    // Runs that stopped early carry their last ratio forward.
                    v.push_back(r.ratios[std::min<std::size_t>(static_cast<std::size_t>(t), r.ratios.size()) - 1]);
                }
            }
            summary << s << ',' << t << ',' << format_double(mean_of(v)) << ',' << format_double(std_of(v)) << ','
                    << v.size() << '\n';
        }
        std::vector<double> pf, rf;
        double hits = 0;
        for (auto i : idx) {
            pf.push_back(runs[i].p_feasible);
            rf.push_back(final_ratio(runs[i]));
            hits += runs[i].reached ? 1 : 0;
        }
        feas << s << ',' << idx.size() << ',' << format_double(mean_of(pf)) << ',' << format_double(std_of(pf)) << ','
             << format_double(median_of(rf)) << ',' << format_double(mean_of(rf)) << ',' << format_double(std_of(rf))
             << ',' << format_double(idx.empty() ? NAN : hits / static_cast<double>(idx.size())) << '\n';
    }
    out.write("summary.csv", summary.str());
    out.write("feasibility.csv", feas.str());
    record_charts(out, "");
    finish(out, "run-fmqa", cfg, t0);
    std::cout << feas.str();

    bool failed = false;
    for (std::size_t i = 0; i < runs.size(); ++i) {
        if (errors[i].empty()) continue;
        log_line("run failed: " + errors[i]);
        failed = true;
    }
    if (failed) throw RuntimeError("one or more FMQA runs failed; partial histories were saved");
    return kExitOk;
}

// ---- verify ------------------------------------------------------------

int cmd_verify(const CommonOptions& common, const std::string& suites, const std::string& checkpoint) {
    const auto t0 = Clock::now();
    char* json = nullptr;
    int n_failed = 0;
    check(lq_verify(suites.empty() ? nullptr : suites.c_str(), checkpoint.empty() ? nullptr : checkpoint.c_str(), &json,
                    &n_failed),
          "verify");
    const std::string text = take_string(json);
    const auto report = nlohmann::json::parse(text);
    for (const auto& c : report.at("checks")) {
        std::printf("%s %s/%s: %s\n", c.at("passed").get<bool>() ? "PASS" : "FAIL",
                    c.at("suite").get<std::string>().c_str(), c.at("name").get<std::string>().c_str(),
                    c.at("detail").get<std::string>().c_str());
    }
    std::printf("%d of %d checks failed\n", n_failed, report.at("n_checks").get<int>());
    if (!common.out.empty()) {
        OutputDir out(common.out);
        out.write("verify.json", text);
        ExperimentConfig cfg = base_config(common);
        finish(out, "verify", cfg, t0);
    }
    return n_failed ? kExitVerify : kExitOk;
}

// ---- plot --------------------------------------------------------------

int cmd_plot(const std::string& dir) {
    if (!fs::is_directory(dir)) throw ValidationError("not a directory: " + dir);
    const auto written = render_charts(dir);
    if (written.empty()) throw ValidationError("no chart sources (training.csv, sweep_summary.csv, metrics.csv, summary.csv, "
                                               "feasibility.csv) in " + dir);
    for (const auto& w : written) std::printf("%s\n", (fs::path(dir) / w).string().c_str());
    return kExitOk;
}

void tune_allocator() {
#if defined(__GLIBC__)
    // Large transient matrices during training otherwise churn through mmap/munmap.
    mallopt(M_MMAP_THRESHOLD, 256 << 20);
    mallopt(M_TRIM_THRESHOLD, 1 << 30);
    mallopt(M_TOP_PAD, 256 << 20);
#endif
}

}  // namespace

int main(int argc, char** argv) {
    tune_allocator();
    CLI::App app{"latentqubo experiment driver"};
    app.set_version_flag("--version", std::string(lq_version()));
    app.require_subcommand(1);
    std::function<int()> action;

    CommonOptions gen_common;
    std::optional<int> gen_cities;
    auto* gen = app.add_subcommand("gen-instance", "generate a random TSP instance and print its optimum");
    add_common(gen, gen_common, "instance JSON file to write");
    gen->add_option("--cities", gen_cities, "number of cities");
    gen->callback([&] { action = [&] { return cmd_gen_instance(gen_common, gen_cities); }; });

    CommonOptions train_common;
    TrainBaeOptions train_opts;
    auto* train = app.add_subcommand("train-bae", "train binary autoencoders (single run or sweep)");
    add_common(train, train_common, "output directory");
    train->add_option("--dz", train_opts.dz, "latent bits");
    train->add_option("--dh", train_opts.dh, "GRU hidden size");
    train->add_option("--epochs", train_opts.epochs, "training epochs");
    train->add_option("--seeds", train_opts.seeds, "number of training seeds");
    train->add_option("--eval-every", train_opts.eval_every, "evaluate every N epochs");
    train->add_option("--n-tours", train_opts.n_tours, "dataset size");
    train->add_option("--data-seed", train_opts.data_seed, "dataset sampling seed");
    train->add_option("--sweep", train_opts.sweep, "dz=LO..HI or dh=V1,V2,...");
    train->add_flag("--resume", train_opts.resume, "reuse finished runs whose stored config matches");
    train->callback([&] { action = [&] { return cmd_train_bae(train_common, train_opts); }; });

    CommonOptions an_common;
    AnalyzeOptions an_opts;
    auto* an = app.add_subcommand("analyze", "structure-preservation metrics per scheme and seed");
    add_common(an, an_common, "output directory");
    an->add_option("--schemes", an_opts.schemes, "comma-separated: bae,log,gray,random");
    an->add_option("--metrics", an_opts.metrics, "comma-separated: rho,neighborhood,local");
    an->add_option("--checkpoint", an_opts.checkpoint, "bAE checkpoint (required for scheme bae)");
    an->add_option("--instance", an_opts.instance, "instance JSON file");
    an->add_option("--cities", an_opts.cities, "cities for a generated instance");
    an->add_option("--instance-seed", an_opts.instance_seed, "seed for a generated instance");
    an->add_option("--seeds", an_opts.seeds, "number of seeds");
    an->add_option("--pairs", an_opts.pairs, "tour pairs for rho");
    an->add_option("--tours", an_opts.tours, "tours for L(m)");
    an->add_option("--flips", an_opts.flips, "flip draws per tour and m");
    an->add_option("--m-max", an_opts.m_max, "largest flip count m");
    an->add_option("--local-neighborhood", an_opts.local_neighborhood, "r_Local neighbors: feasible or repaired");
    an->callback([&] { action = [&] { return cmd_analyze(an_common, an_opts); }; });

    CommonOptions fq_common;
    FmqaOptions fq_opts;
    auto* fq = app.add_subcommand("run-fmqa", "FMQA optimization runs per scheme, instance and seed");
    add_common(fq, fq_common, "output directory");
    fq->add_option("--schemes", fq_opts.schemes, "comma-separated: bae,log,gray,random");
    fq->add_option("--checkpoint", fq_opts.checkpoint, "bAE checkpoint (required for scheme bae)");
    fq->add_option("--instance", fq_opts.instance, "instance JSON file");
    fq->add_option("--instances", fq_opts.instances, "number of generated instances");
    fq->add_option("--cities", fq_opts.cities, "cities per generated instance");
    fq->add_option("--instance-seed", fq_opts.instance_seed, "seed of the first generated instance");
    fq->add_option("--seeds", fq_opts.seeds, "runs per scheme and instance");
    fq->add_option("--iters", fq_opts.iters, "optimization iterations");
    fq->add_option("--n-init", fq_opts.n_init, "initial dataset size");
    fq->add_option("--reads", fq_opts.reads, "annealer reads per iteration");
    fq->add_option("--sweeps", fq_opts.sweeps, "annealer sweeps per read");
    fq->add_option("--scaling", fq_opts.scaling, "FM target scaling: none, center, standardize");
    fq->callback([&] { action = [&] { return cmd_run_fmqa(fq_common, fq_opts); }; });

    CommonOptions ver_common;
    std::string ver_suites, ver_checkpoint;
    auto* ver = app.add_subcommand("verify", "run oracle and property checks");
    add_common(ver, ver_common, "directory for verify.json");
    ver->add_option("--suite", ver_suites, "comma-separated suites (default: all)");
    ver->add_option("--checkpoint", ver_checkpoint, "checkpoint to validate");
    ver->callback([&] { action = [&] { return cmd_verify(ver_common, ver_suites, ver_checkpoint); }; });

    std::string plot_dir;
    auto* plot = app.add_subcommand("plot", "regenerate SVG charts from the CSV files in a directory");
    plot->add_option("dir", plot_dir, "output directory of a previous command")->required();
    plot->callback([&] { action = [&] { return cmd_plot(plot_dir); }; });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitValidation;
    }

    try {
        return action();
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitValidation;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitRuntime;
    }
}
