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

#include "latentqubo/latentqubo.h"

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <limits>
#include <memory>
#include <new>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "latentqubo/annealer.hpp"
#include "latentqubo/bae.hpp"
#include "latentqubo/encodings.hpp"
#include "latentqubo/error.hpp"
#include "latentqubo/fm.hpp"
#include "latentqubo/fmqa.hpp"
#include "latentqubo/metrics.hpp"
#include "latentqubo/sha256.hpp"
#include "latentqubo/tsp.hpp"
#include "latentqubo/verify.hpp"
#include "latentqubo/version.hpp"

struct lq_instance {
    lq::TspInstance inst;
};

struct lq_bae_model {
    std::shared_ptr<const lq::BaeModel> model;
    std::optional<lq::TrainReport> report;
};

struct lq_scheme {
    std::shared_ptr<const lq::EncodingScheme> scheme;
    std::string name;
};

struct lq_fm {
    lq::FmModel m;
};

struct lq_qubo {
    lq::Qubo q;
};

struct lq_sampleset {
    lq::SampleSet s;
};

struct lq_fmqa_result {
    lq::FmqaResult r;
};

struct lq_metric_report {
    lq::MetricReport r;
};

namespace {

thread_local std::string g_last_error;

using lq::ErrorCode;

template <class F>
lq_status guard(F&& f) {
    g_last_error.clear();
    try {
        f();
        return LQ_OK;
    } catch (const lq::Error& e) {
        g_last_error = e.what();
        return static_cast<lq_status>(static_cast<int>(e.code()));
    } catch (const std::bad_alloc&) {
        g_last_error = "out of memory";
        return LQ_ERR_INTERNAL;
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return LQ_ERR_INTERNAL;
    } catch (...) {
        g_last_error = "unknown exception";
        return LQ_ERR_INTERNAL;
    }
}

void need(const void* p, const char* what) {
    lq::require(p != nullptr, ErrorCode::kInvalidArgument, std::string(what) + " must not be NULL");
}

char* dup_string(const std::string& s) {
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (!out) throw std::bad_alloc();
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

lq::Tour make_tour(const int* tour, int n) {
    need(tour, "tour");
    lq::require(n >= 1, ErrorCode::kInvalidArgument, "tour length must be positive");
    return lq::Tour(std::vector<int>(tour, tour + n));
}

void write_tour(const lq::Tour& t, int* out) {
    for (int i = 0; i < t.size(); ++i) out[i] = t[i];
}

lq::BitVector make_bits(const uint8_t* bits, size_t width) {
    need(bits, "bits");
    std::vector<std::uint8_t> v(bits, bits + width);
    for (auto b : v) lq::require(b <= 1, ErrorCode::kInvalidArgument, "bit values must be 0 or 1");
    return lq::BitVector(std::move(v));
}

void write_bits(const lq::BitVector& b, uint8_t* out) {
    for (std::size_t i = 0; i < b.width(); ++i) out[i] = b[i] ? 1 : 0;
}

lq::BaeConfig to_cpp(const lq_bae_config& c) {
    lq::BaeConfig o;
    o.n_cities = c.n_cities;
    o.latent_bits = c.latent_bits;
    o.hidden = c.hidden;
    o.layers = c.layers;
    o.lr = c.lr;
    o.weight_decay = c.weight_decay;
    o.epochs = c.epochs;
    o.batch_size = c.batch_size;
    o.seed = c.seed;
    o.data_seed = c.data_seed;
    o.n_tours = c.n_tours;
    o.train_fraction = c.train_fraction;
    o.eval_every = c.eval_every;
    return o;
}

lq_bae_config to_c(const lq::BaeConfig& o) {
    return {o.n_cities,   o.latent_bits, o.hidden,  o.layers,         o.lr,         o.weight_decay, o.epochs,
            o.batch_size, o.seed,        o.data_seed, o.n_tours, o.train_fraction, o.eval_every};
}

lq::FmTrainOptions to_cpp(const lq_fm_options& c) {
    lq::FmTrainOptions o;
    o.rank = c.rank;
    o.lr = c.lr;
    o.epochs = c.epochs;
    o.weight_decay = c.weight_decay;
    o.init_std = c.init_std;
    o.seed = c.seed;
    switch (c.scaling) {
        case LQ_SCALING_NONE:
            o.scaling = lq::TargetScaling::kNone;
            break;
        case LQ_SCALING_CENTER:
            o.scaling = lq::TargetScaling::kCenter;
            break;
        case LQ_SCALING_STANDARDIZE:
            o.scaling = lq::TargetScaling::kStandardize;
            break;
        default:
            lq::fail(ErrorCode::kInvalidArgument, "unknown target scaling");
    }
    return o;
}

lq::AnnealSchedule to_cpp(const lq_anneal_schedule& c) {
    lq::AnnealSchedule o;
    o.n_sweeps = c.n_sweeps;
    o.beta_start = c.beta_start;
    o.beta_end = c.beta_end;
    o.n_reads = c.n_reads;
    o.seed = c.seed;
    return o;
}

lq_fmqa_iteration to_c(const lq::IterationRecord& r) {
    lq_fmqa_iteration o{};
    o.iteration = r.iteration;
    o.raw_feasible = r.raw_feasible ? 1 : 0;
    o.accepted = r.accepted ? 1 : 0;
    o.path = r.path == lq::AcceptPath::kDirect             ? LQ_PATH_DIRECT
             : r.path == lq::AcceptPath::kDedupLocalSearch ? LQ_PATH_DEDUP_LOCAL_SEARCH
                                                           : LQ_PATH_DISCARDED;
    o.objective = r.objective;
    o.best_so_far = r.best_so_far;
    o.ratio = r.ratio;
    return o;
}

std::vector<lq::MetricReport> gather(const lq_metric_report* const* reports, size_t n) {
    lq::require(n == 0 || reports != nullptr, ErrorCode::kInvalidArgument, "reports must not be NULL");
    std::vector<lq::MetricReport> out;
    for (size_t i = 0; i < n; ++i) {
        need(reports[i], "report");
        out.push_back(reports[i]->r);
    }
    return out;
}

}  // namespace

extern "C" {

const char* lq_version(void) { return LQ_VERSION_STRING; }

const char* lq_status_name(lq_status status) {
    switch (status) {
        case LQ_OK:
            return "ok";
        case LQ_ERR_INVALID_ARGUMENT:
            return "invalid argument";
        case LQ_ERR_DIMENSION_MISMATCH:
            return "dimension mismatch";
        case LQ_ERR_SIZE_LIMIT:
            return "size limit";
        case LQ_ERR_OUT_OF_RANGE:
            return "out of range";
        case LQ_ERR_INVALID_TOUR:
            return "invalid tour";
        case LQ_ERR_IO:
            return "i/o error";
        case LQ_ERR_FORMAT:
            return "format error";
        case LQ_ERR_NUMERIC:
            return "numeric error";
        case LQ_ERR_EMPTY_INPUT:
            return "empty input";
        case LQ_ERR_INTERNAL:
            return "internal error";
    }
    return "unknown status";
}

const char* lq_last_error(void) { return g_last_error.c_str(); }

void lq_string_free(char* s) { std::free(s); }

lq_status lq_sha256_file(const char* path, char** hex_out) {
    return guard([&] {
        need(path, "path");
        need(hex_out, "hex_out");
        *hex_out = dup_string(lq::sha256_file(path));
    });
}

lq_status lq_sha256_string(const char* data, size_t size, char** hex_out) {
    return guard([&] {
        lq::require(size == 0 || data != nullptr, ErrorCode::kInvalidArgument, "data must not be NULL");
        need(hex_out, "hex_out");
        *hex_out = dup_string(lq::sha256_hex(std::string_view(data ? data : "", size)));
    });
}

// ---- instances

lq_status lq_instance_generate(int n_cities, uint64_t seed, lq_instance** out) {
    return guard([&] {
        need(out, "out");
        *out = new lq_instance{lq::generate_instance(n_cities, seed)};
    });
}

lq_status lq_instance_load(const char* path, lq_instance** out) {
    return guard([&] {
        need(path, "path");
        need(out, "out");
        *out = new lq_instance{lq::load_instance(path)};
    });
}

lq_status lq_instance_save(const lq_instance* inst, const char* path) {
    return guard([&] {
        need(inst, "instance");
        need(path, "path");
        lq::save_instance(inst->inst, path);
    });
}

lq_status lq_instance_to_json(const lq_instance* inst, char** json_out) {
    return guard([&] {
        need(inst, "instance");
        need(json_out, "json_out");
        *json_out = dup_string(lq::instance_to_json(inst->inst));
    });
}

int lq_instance_n_cities(const lq_instance* inst) { return inst ? inst->inst.n_cities() : 0; }

uint64_t lq_instance_seed(const lq_instance* inst) { return inst ? inst->inst.seed() : 0; }

lq_status lq_instance_coords(const lq_instance* inst, double* xy_out) {
    return guard([&] {
        need(inst, "instance");
        need(xy_out, "xy_out");
        for (std::size_t i = 0; i < inst->inst.coords().size(); ++i) {
            xy_out[2 * i] = inst->inst.coords()[i][0];
            xy_out[2 * i + 1] = inst->inst.coords()[i][1];
        }
    });
}

lq_status lq_instance_tour_length(const lq_instance* inst, const int* tour, int n, double* length_out) {
    return guard([&] {
        need(inst, "instance");
        need(length_out, "length_out");
        *length_out = lq::tour_length(inst->inst, make_tour(tour, n));
    });
}

lq_status lq_instance_optimum(const lq_instance* inst, int* tour_out, double* length_out) {
    return guard([&] {
        need(inst, "instance");
        const auto opt = lq::exact_optimum(inst->inst);
        if (tour_out) write_tour(opt.tour, tour_out);
        if (length_out) *length_out = opt.length;
    });
}

void lq_instance_free(lq_instance* inst) { delete inst; }

// ---- tours

lq_status lq_tour_edge_distance(const int* a, const int* b, int n, double* out) {
    return guard([&] {
        need(out, "out");
        *out = lq::edge_distance(make_tour(a, n), make_tour(b, n));
    });
}

lq_status lq_tour_repair(const int* seq, int n, int* tour_out) {
    return guard([&] {
        need(seq, "seq");
        need(tour_out, "tour_out");
        write_tour(lq::repair(std::span<const int>(seq, static_cast<std::size_t>(n)), n), tour_out);
    });
}

lq_status lq_lehmer_rank(const int* tour, int n, uint64_t* rank_out) {
    return guard([&] {
        need(rank_out, "rank_out");
        *rank_out = lq::lehmer_rank(make_tour(tour, n));
    });
}

lq_status lq_lehmer_unrank(uint64_t rank, int n, int* tour_out) {
    return guard([&] {
        need(tour_out, "tour_out");
        write_tour(lq::lehmer_unrank(rank, n), tour_out);
    });
}

// ---- bAE

void lq_bae_config_default(lq_bae_config* cfg) {
    if (cfg) *cfg = to_c(lq::BaeConfig{});
}

lq_status lq_bae_train(const lq_bae_config* cfg, lq_epoch_callback on_epoch, void* user, lq_bae_model** out) {
    return guard([&] {
        need(cfg, "cfg");
        need(out, "out");
        lq::EpochCallback cb;
        if (on_epoch) {
            cb = [on_epoch, user](const lq::EpochRecord& r) {
                const lq_epoch_record rec{r.epoch, r.train_loss, r.valid_loss, r.train_acc, r.valid_acc, r.evaluated ? 1 : 0};
                on_epoch(&rec, user);
            };
        }
        auto result = lq::train(to_cpp(*cfg), cb);
        *out = new lq_bae_model{std::shared_ptr<const lq::BaeModel>(std::move(result.model)), std::move(result.report)};
    });
}

lq_status lq_bae_load(const char* path, lq_bae_model** out) {
    return guard([&] {
        need(path, "path");
        need(out, "out");
        *out = new lq_bae_model{std::shared_ptr<const lq::BaeModel>(lq::load_checkpoint(path)), std::nullopt};
    });
}

lq_status lq_bae_save(const lq_bae_model* model, const char* path) {
    return guard([&] {
        need(model, "model");
        need(path, "path");
        lq::save_checkpoint(*model->model, path);
    });
}

lq_status lq_bae_config_get(const lq_bae_model* model, lq_bae_config* cfg_out) {
    return guard([&] {
        need(model, "model");
        need(cfg_out, "cfg_out");
        *cfg_out = to_c(model->model->config());
    });
}

lq_status lq_bae_checksum(const lq_bae_model* model, char** hex_out) {
    return guard([&] {
        need(model, "model");
        need(hex_out, "hex_out");
        *hex_out = dup_string(lq::model_checksum(*model->model));
    });
}

lq_status lq_bae_training_csv(const lq_bae_model* model, char** csv_out) {
    return guard([&] {
        need(model, "model");
        need(csv_out, "csv_out");
        lq::require(model->report.has_value(), ErrorCode::kInvalidArgument, "model has no training history");
        *csv_out = dup_string(lq::train_report_csv(*model->report));
    });
}

lq_status lq_bae_evaluate_split(const lq_bae_model* model, double* valid_loss, double* valid_acc) {
    return guard([&] {
        need(model, "model");
        const auto split = lq::make_training_split(model->model->config());
        const auto ev = model->model->evaluate(split.valid);
        if (valid_loss) *valid_loss = ev.loss;
        if (valid_acc) *valid_acc = ev.accuracy;
    });
}

void lq_bae_free(lq_bae_model* model) { delete model; }

const char* lq_epoch_csv_header(void) {
    static const std::string header = lq::epoch_csv_header();
    return header.c_str();
}

lq_status lq_epoch_csv_row(const lq_epoch_record* record, char** row_out) {
    return guard([&] {
        need(record, "record");
        need(row_out, "row_out");
        lq::EpochRecord r;
        r.epoch = record->epoch;
        r.train_loss = record->train_loss;
        r.valid_loss = record->valid_loss;
        r.train_acc = record->train_acc;
        r.valid_acc = record->valid_acc;
        r.evaluated = record->evaluated != 0;
        *row_out = dup_string(lq::epoch_csv_row(r));
    });
}

// ---- schemes

lq_status lq_scheme_log(int n_cities, lq_scheme** out) {
    return guard([&] {
        need(out, "out");
        *out = new lq_scheme{std::make_shared<lq::LogEncoding>(n_cities), "log"};
    });
}

lq_status lq_scheme_gray(int n_cities, lq_scheme** out) {
    return guard([&] {
        need(out, "out");
        *out = new lq_scheme{std::make_shared<lq::GrayEncoding>(n_cities), "gray"};
    });
}

lq_status lq_scheme_random(int n_cities, uint64_t seed, lq_scheme** out) {
    return guard([&] {
        need(out, "out");
        *out = new lq_scheme{
            std::make_shared<lq::RandomLabelEncoding>(lq::build_random_label_table(n_cities, seed)), "random"};
    });
}

lq_status lq_scheme_random_load(const char* path, lq_scheme** out) {
    return guard([&] {
        need(path, "path");
        need(out, "out");
        *out = new lq_scheme{std::make_shared<lq::RandomLabelEncoding>(lq::load_random_label_table(path)), "random"};
    });
}

lq_status lq_scheme_random_save(const lq_scheme* scheme, const char* path) {
    return guard([&] {
        need(scheme, "scheme");
        need(path, "path");
        const auto* rl = dynamic_cast<const lq::RandomLabelEncoding*>(scheme->scheme.get());
        lq::require(rl != nullptr, ErrorCode::kInvalidArgument, "scheme is not a random-label encoding");
        lq::save_random_label_table(rl->table(), path);
    });
}

lq_status lq_scheme_bae(const lq_bae_model* model, lq_scheme** out) {
    return guard([&] {
        need(model, "model");
        need(out, "out");
        *out = new lq_scheme{std::make_shared<lq::BaeEncoding>(model->model), "bae"};
    });
}

const char* lq_scheme_name(const lq_scheme* scheme) { return scheme ? scheme->name.c_str() : ""; }

size_t lq_scheme_width(const lq_scheme* scheme) { return scheme ? scheme->scheme->width() : 0; }

int lq_scheme_n_cities(const lq_scheme* scheme) { return scheme ? scheme->scheme->n_cities() : 0; }

lq_status lq_scheme_encode(const lq_scheme* scheme, const int* tour, int n, uint8_t* bits_out) {
    return guard([&] {
        need(scheme, "scheme");
        need(bits_out, "bits_out");
        lq::require(n == scheme->scheme->n_cities(), ErrorCode::kDimensionMismatch, "tour length differs from scheme");
        write_bits(scheme->scheme->encode(make_tour(tour, n)), bits_out);
    });
}

lq_status lq_scheme_decode(const lq_scheme* scheme, const uint8_t* bits, size_t width, uint64_t seed, int* tour_out,
                           int* raw_feasible, int* repaired) {
    return guard([&] {
        need(scheme, "scheme");
        need(tour_out, "tour_out");
        lq::require(width == scheme->scheme->width(), ErrorCode::kDimensionMismatch, "bit width differs from scheme");
        lq::Rng rng = lq::make_rng(seed);
        const auto res = scheme->scheme->decode(make_bits(bits, width), rng);
        write_tour(res.tour, tour_out);
        if (raw_feasible) *raw_feasible = res.raw_feasible ? 1 : 0;
        if (repaired) *repaired = res.repaired ? 1 : 0;
    });
}

void lq_scheme_free(lq_scheme* scheme) { delete scheme; }

// ---- FM / QUBO

void lq_fm_options_default(lq_fm_options* opts) {
    if (!opts) return;
    const lq::FmTrainOptions d;
    opts->rank = d.rank;
    opts->lr = d.lr;
    opts->epochs = d.epochs;
    opts->weight_decay = d.weight_decay;
    opts->init_std = d.init_std;
    opts->seed = d.seed;
    opts->scaling = static_cast<lq_target_scaling>(static_cast<int>(d.scaling));
}

lq_status lq_fm_train(const uint8_t* bits, const double* y, size_t n_samples, size_t width, const lq_fm_options* opts,
                      double* loss_history, lq_fm** out) {
    return guard([&] {
        need(opts, "opts");
        need(out, "out");
        lq::require(n_samples > 0, ErrorCode::kEmptyInput, "cannot train an FM on an empty dataset");
        need(bits, "bits");
        need(y, "y");
        std::vector<lq::LabeledSample> samples;
        samples.reserve(n_samples);
        for (size_t i = 0; i < n_samples; ++i) samples.push_back({make_bits(bits + i * width, width), y[i]});
        std::vector<double> history;
        auto m = lq::fm_train(samples, to_cpp(*opts), loss_history ? &history : nullptr);
        if (loss_history) std::copy(history.begin(), history.end(), loss_history);
        *out = new lq_fm{std::move(m)};
    });
}

lq_status lq_fm_create(size_t width, size_t rank, double w0, const double* w, const double* v, lq_fm** out) {
    return guard([&] {
        need(out, "out");
        need(w, "w");
        need(v, "v");
        lq::FmModel m(static_cast<int>(width), static_cast<int>(rank));
        m.w0 = w0;
        for (size_t i = 0; i < width; ++i) {
            m.w(static_cast<Eigen::Index>(i)) = w[i];
            for (size_t f = 0; f < rank; ++f) m.v(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(f)) = v[i * rank + f];
        }
        *out = new lq_fm{std::move(m)};
    });
}

lq_status lq_fm_predict(const lq_fm* fm, const uint8_t* bits, size_t width, double* out) {
    return guard([&] {
        need(fm, "fm");
        need(out, "out");
        *out = lq::fm_predict(fm->m, make_bits(bits, width));
    });
}

size_t lq_fm_width(const lq_fm* fm) { return fm ? static_cast<size_t>(fm->m.width()) : 0; }

lq_status lq_fm_to_qubo(const lq_fm* fm, lq_qubo** out) {
    return guard([&] {
        need(fm, "fm");
        need(out, "out");
        *out = new lq_qubo{lq::to_qubo(fm->m)};
    });
}

void lq_fm_free(lq_fm* fm) { delete fm; }

lq_status lq_qubo_create(size_t dim, lq_qubo** out) {
    return guard([&] {
        need(out, "out");
        lq::require(dim >= 1, ErrorCode::kInvalidArgument, "QUBO dimension must be positive");
        *out = new lq_qubo{lq::Qubo(static_cast<int>(dim))};
    });
}

lq_status lq_qubo_set(lq_qubo* q, size_t i, size_t j, double value) {
    return guard([&] {
        need(q, "qubo");
        lq::require(i <= j && j < static_cast<size_t>(q->q.dim()), ErrorCode::kOutOfRange,
                    "QUBO index must satisfy i <= j < dim");
        q->q.q(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = value;
    });
}

lq_status lq_qubo_get(const lq_qubo* q, size_t i, size_t j, double* out) {
    return guard([&] {
        need(q, "qubo");
        need(out, "out");
        lq::require(i < static_cast<size_t>(q->q.dim()) && j < static_cast<size_t>(q->q.dim()), ErrorCode::kOutOfRange,
                    "QUBO index out of range");
        *out = q->q.q(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    });
}

void lq_qubo_set_offset(lq_qubo* q, double offset) {
    if (q) q->q.offset = offset;
}

double lq_qubo_offset(const lq_qubo* q) { return q ? q->q.offset : 0.0; }

size_t lq_qubo_dim(const lq_qubo* q) { return q ? static_cast<size_t>(q->q.dim()) : 0; }

lq_status lq_qubo_energy(const lq_qubo* q, const uint8_t* bits, size_t width, double* out) {
    return guard([&] {
        need(q, "qubo");
        need(out, "out");
        *out = lq::qubo_energy(q->q, make_bits(bits, width));
    });
}

lq_status lq_qubo_load(const char* path, lq_qubo** out) {
    return guard([&] {
        need(path, "path");
        need(out, "out");
        *out = new lq_qubo{lq::load_qubo(path)};
    });
}

lq_status lq_qubo_save(const lq_qubo* q, const char* path) {
    return guard([&] {
        need(q, "qubo");
        need(path, "path");
        lq::save_qubo(q->q, path);
    });
}

lq_status lq_qubo_to_text(const lq_qubo* q, char** text_out) {
    return guard([&] {
        need(q, "qubo");
        need(text_out, "text_out");
        *text_out = dup_string(lq::qubo_to_text(q->q));
    });
}

void lq_qubo_free(lq_qubo* q) { delete q; }

// ---- annealer

void lq_anneal_schedule_default(lq_anneal_schedule* s) {
    if (!s) return;
    const lq::AnnealSchedule d;
    *s = {d.n_sweeps, d.beta_start, d.beta_end, d.n_reads, d.seed};
}

lq_status lq_sample(const lq_qubo* q, const lq_anneal_schedule* s, lq_sampleset** out) {
    return guard([&] {
        need(q, "qubo");
        need(s, "schedule");
        need(out, "out");
        *out = new lq_sampleset{lq::sample(q->q, to_cpp(*s))};
    });
}

size_t lq_sampleset_size(const lq_sampleset* s) { return s ? s->s.reads.size() : 0; }

lq_status lq_sampleset_read(const lq_sampleset* s, size_t index, uint8_t* bits_out, double* energy, int* read_index) {
    return guard([&] {
        need(s, "sampleset");
        lq::require(index < s->s.reads.size(), ErrorCode::kOutOfRange, "read index out of range");
        const auto& r = s->s.reads[index];
        if (bits_out) write_bits(r.bits, bits_out);
        if (energy) *energy = r.energy;
        if (read_index) *read_index = r.read_index;
    });
}

lq_status lq_sampleset_csv(const lq_sampleset* s, char** csv_out) {
    return guard([&] {
        need(s, "sampleset");
        need(csv_out, "csv_out");
        *csv_out = dup_string(lq::sample_set_csv(s->s));
    });
}

void lq_sampleset_free(lq_sampleset* s) { delete s; }

lq_status lq_solve_exhaustive(const lq_qubo* q, uint8_t* bits_out, double* energy) {
    return guard([&] {
        need(q, "qubo");
        const auto r = lq::solve_exhaustive(q->q);
        if (bits_out) write_bits(r.bits, bits_out);
        if (energy) *energy = r.energy;
    });
}

lq_status lq_greedy_descent(const lq_qubo* q, const uint8_t* start, uint8_t* bits_out) {
    return guard([&] {
        need(q, "qubo");
        need(bits_out, "bits_out");
        write_bits(lq::greedy_descent(q->q, make_bits(start, static_cast<size_t>(q->q.dim()))), bits_out);
    });
}

// ---- FMQA

void lq_fmqa_config_default(lq_fmqa_config* cfg) {
    if (!cfg) return;
    const lq::FmqaConfig d;
    cfg->n_init = d.n_init;
    cfg->n_iters = d.n_iters;
    lq_fm_options_default(&cfg->fm);
    lq_anneal_schedule_default(&cfg->anneal);
    cfg->dedup_max_trials = d.dedup_max_trials;
    cfg->seed = d.seed;
    cfg->stop_at_optimum = d.stop_at_optimum ? 1 : 0;
}

lq_status lq_fmqa_run(const lq_instance* inst, const lq_scheme* scheme, const lq_fmqa_config* cfg, lq_fmqa_result** out) {
    std::vector<lq::IterationRecord> partial;
    const lq_status st = guard([&] {
        need(inst, "instance");
        need(scheme, "scheme");
        need(cfg, "cfg");
        need(out, "out");
        *out = nullptr;
        lq::FmqaConfig c;
        c.n_init = cfg->n_init;
        c.n_iters = cfg->n_iters;
        c.fm = to_cpp(cfg->fm);
        c.anneal = to_cpp(cfg->anneal);
        c.dedup_max_trials = cfg->dedup_max_trials;
        c.seed = cfg->seed;
        c.stop_at_optimum = cfg->stop_at_optimum != 0;
        *out = new lq_fmqa_result{lq::run_cycle(inst->inst, *scheme->scheme, c, {}, &partial)};
    });
    if (st != LQ_OK && out && !*out && !partial.empty()) {
        auto* r = new (std::nothrow) lq_fmqa_result{};
        if (r) {
            r->r.history = std::move(partial);
            r->r.stop_iteration = r->r.history.back().iteration;
            *out = r;
        }
    }
    return st;
}

size_t lq_fmqa_n_iterations(const lq_fmqa_result* r) { return r ? r->r.history.size() : 0; }

lq_status lq_fmqa_iteration_get(const lq_fmqa_result* r, size_t index, lq_fmqa_iteration* out) {
    return guard([&] {
        need(r, "result");
        need(out, "out");
        lq::require(index < r->r.history.size(), ErrorCode::kOutOfRange, "iteration index out of range");
        *out = to_c(r->r.history[index]);
    });
}

double lq_fmqa_f_star(const lq_fmqa_result* r) { return r ? r->r.f_star : 0.0; }

double lq_fmqa_initial_best(const lq_fmqa_result* r) { return r ? r->r.initial_best : 0.0; }

double lq_fmqa_final_best(const lq_fmqa_result* r) {
    if (!r) return 0.0;
    return r->r.history.empty() ? r->r.initial_best : r->r.history.back().best_so_far;
}

int lq_fmqa_reached_optimum(const lq_fmqa_result* r) { return r && r->r.reached_optimum ? 1 : 0; }

size_t lq_fmqa_dataset_size(const lq_fmqa_result* r) { return r ? r->r.dataset.size() : 0; }

double lq_fmqa_feasible_probability(const lq_fmqa_result* r) {
    if (!r || r->r.history.empty()) return std::numeric_limits<double>::quiet_NaN();
    return lq::feasible_probability(r->r.history);
}

lq_status lq_fmqa_history_csv(const lq_fmqa_result* r, char** csv_out) {
    return guard([&] {
        need(r, "result");
        need(csv_out, "csv_out");
        *csv_out = dup_string(lq::history_csv(r->r.history));
    });
}

void lq_fmqa_result_free(lq_fmqa_result* r) { delete r; }

// ---- metrics

void lq_metrics_options_default(lq_metrics_options* opts) {
    if (!opts) return;
    *opts = {1, 2000, 1, 5, 200, 20, 1, LQ_LOCAL_FEASIBLE};
}

lq_status lq_metrics_analyze(const lq_scheme* scheme, const lq_instance* inst, const lq_metrics_options* opts,
                             uint64_t seed, lq_metric_report** out) {
    return guard([&] {
        need(scheme, "scheme");
        need(opts, "opts");
        need(out, "out");
        const auto& s = *scheme->scheme;
        lq::MetricReport rep;
        rep.scheme = scheme->name;
        rep.seed = seed;
        if (opts->rho) {
            lq::require(s.n_cities() <= lq::kMaxEnumerableCities, ErrorCode::kSizeLimit, "rho needs tour enumeration");
            const auto tours = lq::enumerate_tours(s.n_cities());
            const auto pairs = lq::sample_distance_pairs(s, tours, opts->n_pairs, seed);
            rep.rho = lq::spearman(pairs.d_hamming, pairs.d_edge);
            rep.n_pairs = pairs.size();
        }
        if (opts->neighborhood) {
            lq::require(opts->m_max >= 1, ErrorCode::kInvalidArgument, "m_max must be >= 1");
            std::vector<int> ms;
            for (int m = 1; m <= opts->m_max; ++m) ms.push_back(m);
            rep.neighborhood = lq::neighborhood_characteristic(s, ms, opts->n_tours, opts->n_flips, seed);
        }
        if (opts->local_optimum) {
            need(inst, "instance");
            lq::require(opts->local_neighborhood == LQ_LOCAL_FEASIBLE || opts->local_neighborhood == LQ_LOCAL_REPAIRED,
                        ErrorCode::kInvalidArgument, "unknown local neighborhood");
            rep.local = lq::local_optimum_ratio(s, inst->inst, seed,
                                                opts->local_neighborhood == LQ_LOCAL_FEASIBLE
                                                    ? lq::LocalNeighborhood::kFeasible
                                                    : lq::LocalNeighborhood::kRepaired);
        }
        *out = new lq_metric_report{std::move(rep)};
    });
}

lq_status lq_metric_report_set_label(lq_metric_report* r, const char* scheme_label, uint64_t seed) {
    return guard([&] {
        need(r, "report");
        need(scheme_label, "scheme_label");
        r->r.scheme = scheme_label;
        r->r.seed = seed;
    });
}

int lq_metric_report_rho(const lq_metric_report* r, double* rho_out) {
    if (!r || !r->r.rho) return 0;
    if (rho_out) *rho_out = *r->r.rho;
    return 1;
}

int lq_metric_report_neighborhood(const lq_metric_report* r, int m, double* mean_out, size_t* n_feasible_out) {
    if (!r) return 0;
    for (const auto& p : r->r.neighborhood) {
        if (p.m != m) continue;
        if (mean_out) *mean_out = p.mean_edge_distance;
        if (n_feasible_out) *n_feasible_out = p.n_feasible;
        return 1;
    }
    return 0;
}

int lq_metric_report_local(const lq_metric_report* r, double* ratio_out, size_t* n_local, size_t* n_all) {
    if (!r || !r->r.local) return 0;
    if (ratio_out) *ratio_out = r->r.local->ratio;
    if (n_local) *n_local = r->r.local->n_local;
    if (n_all) *n_all = r->r.local->n_all;
    return 1;
}

lq_status lq_metric_reports_csv(const lq_metric_report* const* reports, size_t n, char** csv_out) {
    return guard([&] {
        need(csv_out, "csv_out");
        *csv_out = dup_string(lq::metric_reports_csv(gather(reports, n)));
    });
}

lq_status lq_metric_reports_json(const lq_metric_report* const* reports, size_t n, char** json_out) {
    return guard([&] {
        need(json_out, "json_out");
        *json_out = dup_string(lq::metric_reports_json(gather(reports, n)));
    });
}

void lq_metric_report_free(lq_metric_report* r) { delete r; }

lq_status lq_spearman(const double* a, const double* b, size_t n, double* out) {
    return guard([&] {
        need(a, "a");
        need(b, "b");
        need(out, "out");
        *out = lq::spearman(std::span<const double>(a, n), std::span<const double>(b, n));
    });
}

lq_status lq_approximation_ratio(double f_best, double f_star, double* out) {
    return guard([&] {
        need(out, "out");
        *out = lq::approximation_ratio(f_best, f_star);
    });
}

// ---- verification

lq_status lq_verify(const char* suites, const char* checkpoint_path, char** json_out, int* n_failed) {
    return guard([&] {
        lq::VerifyOptions opts;
        if (suites && *suites) {
            std::stringstream ss(suites);
            std::string item;
            while (std::getline(ss, item, ',')) {
                if (!item.empty()) opts.suites.push_back(item);
            }
        }
        if (checkpoint_path) opts.checkpoint_path = checkpoint_path;
        const auto results = lq::run_verification(opts);
        int failed = 0;
        for (const auto& r : results) failed += r.passed ? 0 : 1;
        if (n_failed) *n_failed = failed;
        if (json_out) *json_out = dup_string(lq::verification_json(results));
    });
}

}  // extern "C"
