/* Copyright 2026 The latentqubo Authors
 *
 *    Licensed under the Apache License, Version 2.0 (the "License");
 *    you may not use this file except in compliance with the License.
 *    You may obtain a copy of the License at
 *
 *        http://www.apache.org/licenses/LICENSE-2.0
 *
 *    Unless required by applicable law or agreed to in writing, software
 *    distributed under the License is distributed on an "AS IS" BASIS,
 *    WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 *    See the License for the specific language governing permissions and
 *    limitations under the License.
 */

/*
 * C interface to liblatentqubo.
 *
 * Conventions:
 *  - Every fallible function returns lq_status. On failure, lq_last_error()
 *    returns a message for the calling thread until its next API call.
 *  - Objects are opaque handles created by lq_*_create/_load/_train style
 *    functions and released with the matching lq_*_free (NULL is accepted).
 *  - Tours are arrays of n city labels 1..n. Bit vectors are arrays of
 *    uint8_t holding 0 or 1, most significant bit first.
 *  - Strings returned through char** are heap-allocated and must be released
 *    with lq_string_free.
 */

#ifndef LATENTQUBO_H_
#define LATENTQUBO_H_

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define LQ_API __declspec(dllexport)
#else
#define LQ_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum lq_status {
    LQ_OK = 0,
    LQ_ERR_INVALID_ARGUMENT = 1,
    LQ_ERR_DIMENSION_MISMATCH = 2,
    LQ_ERR_SIZE_LIMIT = 3,
    LQ_ERR_OUT_OF_RANGE = 4,
    LQ_ERR_INVALID_TOUR = 5,
    LQ_ERR_IO = 6,
    LQ_ERR_FORMAT = 7,
    LQ_ERR_NUMERIC = 8,
    LQ_ERR_EMPTY_INPUT = 9,
    LQ_ERR_INTERNAL = 100
} lq_status;

LQ_API const char* lq_version(void);
LQ_API const char* lq_status_name(lq_status status);
LQ_API const char* lq_last_error(void);
LQ_API void lq_string_free(char* s);
LQ_API lq_status lq_sha256_file(const char* path, char** hex_out);
LQ_API lq_status lq_sha256_string(const char* data, size_t size, char** hex_out);

/* ---- TSP instances --------------------------------------------------- */

typedef struct lq_instance lq_instance;

LQ_API lq_status lq_instance_generate(int n_cities, uint64_t seed, lq_instance** out);
LQ_API lq_status lq_instance_load(const char* path, lq_instance** out);
LQ_API lq_status lq_instance_save(const lq_instance* inst, const char* path);
LQ_API lq_status lq_instance_to_json(const lq_instance* inst, char** json_out);
LQ_API int lq_instance_n_cities(const lq_instance* inst);
LQ_API uint64_t lq_instance_seed(const lq_instance* inst);
LQ_API lq_status lq_instance_coords(const lq_instance* inst, double* xy_out);
LQ_API lq_status lq_instance_tour_length(const lq_instance* inst, const int* tour, int n, double* length_out);
/* Exact optimum by enumeration (n <= 10); tour_out may be NULL. */
LQ_API lq_status lq_instance_optimum(const lq_instance* inst, int* tour_out, double* length_out);
LQ_API void lq_instance_free(lq_instance* inst);

/* ---- Tour utilities --------------------------------------------------- */

LQ_API lq_status lq_tour_edge_distance(const int* a, const int* b, int n, double* out);
/* Deterministic repair of an arbitrary integer sequence into a canonical tour. */
LQ_API lq_status lq_tour_repair(const int* seq, int n, int* tour_out);
LQ_API lq_status lq_lehmer_rank(const int* tour, int n, uint64_t* rank_out);
LQ_API lq_status lq_lehmer_unrank(uint64_t rank, int n, int* tour_out);

/* ---- bAE models ------------------------------------------------------- */

typedef struct lq_bae_config {
    int n_cities;
    int latent_bits;
    int hidden;
    int layers;
    double lr;
    double weight_decay;
    int epochs;
    int batch_size;
    uint64_t seed;
    uint64_t data_seed;
    int n_tours;
    double train_fraction;
    int eval_every;
} lq_bae_config;

typedef struct lq_epoch_record {
    int epoch;
    double train_loss;
    double valid_loss; /* NaN unless evaluated */
    double train_acc;
    double valid_acc;
    int evaluated;
} lq_epoch_record;

typedef void (*lq_epoch_callback)(const lq_epoch_record* record, void* user);

typedef struct lq_bae_model lq_bae_model;

LQ_API void lq_bae_config_default(lq_bae_config* cfg);
LQ_API lq_status lq_bae_train(const lq_bae_config* cfg, lq_epoch_callback on_epoch, void* user, lq_bae_model** out);
LQ_API lq_status lq_bae_load(const char* path, lq_bae_model** out);
LQ_API lq_status lq_bae_save(const lq_bae_model* model, const char* path);
LQ_API lq_status lq_bae_config_get(const lq_bae_model* model, lq_bae_config* cfg_out);
LQ_API lq_status lq_bae_checksum(const lq_bae_model* model, char** hex_out);
/* Training curve CSV; only available for models produced by lq_bae_train. */
LQ_API lq_status lq_bae_training_csv(const lq_bae_model* model, char** csv_out);
/* Deterministic loss and exact-reconstruction accuracy on the model's own validation split. */
LQ_API lq_status lq_bae_evaluate_split(const lq_bae_model* model, double* valid_loss, double* valid_acc);
LQ_API void lq_bae_free(lq_bae_model* model);
/* CSV header and row format shared by training-curve files. */
LQ_API const char* lq_epoch_csv_header(void);
LQ_API lq_status lq_epoch_csv_row(const lq_epoch_record* record, char** row_out);

/* ---- Encoding schemes ------------------------------------------------- */

typedef struct lq_scheme lq_scheme;

LQ_API lq_status lq_scheme_log(int n_cities, lq_scheme** out);
LQ_API lq_status lq_scheme_gray(int n_cities, lq_scheme** out);
LQ_API lq_status lq_scheme_random(int n_cities, uint64_t seed, lq_scheme** out);
LQ_API lq_status lq_scheme_random_load(const char* path, lq_scheme** out);
LQ_API lq_status lq_scheme_random_save(const lq_scheme* scheme, const char* path);
/* The scheme shares the model; freeing the model handle afterwards is allowed. */
LQ_API lq_status lq_scheme_bae(const lq_bae_model* model, lq_scheme** out);
LQ_API const char* lq_scheme_name(const lq_scheme* scheme);
LQ_API size_t lq_scheme_width(const lq_scheme* scheme);
LQ_API int lq_scheme_n_cities(const lq_scheme* scheme);
LQ_API lq_status lq_scheme_encode(const lq_scheme* scheme, const int* tour, int n, uint8_t* bits_out);
LQ_API lq_status lq_scheme_decode(const lq_scheme* scheme, const uint8_t* bits, size_t width, uint64_t seed,
                                  int* tour_out, int* raw_feasible, int* repaired);
LQ_API void lq_scheme_free(lq_scheme* scheme);

/* ---- Factorization machine and QUBO ----------------------------------- */

typedef enum lq_target_scaling { LQ_SCALING_NONE = 0, LQ_SCALING_CENTER = 1, LQ_SCALING_STANDARDIZE = 2 } lq_target_scaling;

typedef struct lq_fm_options {
    int rank;
    double lr;
    int epochs;
    double weight_decay;
    double init_std;
    uint64_t seed;
    lq_target_scaling scaling;
} lq_fm_options;

typedef struct lq_fm lq_fm;
typedef struct lq_qubo lq_qubo;

LQ_API void lq_fm_options_default(lq_fm_options* opts);
/* bits: n_samples x width row-major 0/1; loss_history (optional) receives opts->epochs values. */
LQ_API lq_status lq_fm_train(const uint8_t* bits, const double* y, size_t n_samples, size_t width,
                             const lq_fm_options* opts, double* loss_history, lq_fm** out);
/* v: width x rank row-major. */
LQ_API lq_status lq_fm_create(size_t width, size_t rank, double w0, const double* w, const double* v, lq_fm** out);
LQ_API lq_status lq_fm_predict(const lq_fm* fm, const uint8_t* bits, size_t width, double* out);
LQ_API size_t lq_fm_width(const lq_fm* fm);
LQ_API lq_status lq_fm_to_qubo(const lq_fm* fm, lq_qubo** out);
LQ_API void lq_fm_free(lq_fm* fm);

LQ_API lq_status lq_qubo_create(size_t dim, lq_qubo** out);
LQ_API lq_status lq_qubo_set(lq_qubo* q, size_t i, size_t j, double value); /* requires i <= j */
LQ_API lq_status lq_qubo_get(const lq_qubo* q, size_t i, size_t j, double* out);
LQ_API void lq_qubo_set_offset(lq_qubo* q, double offset);
LQ_API double lq_qubo_offset(const lq_qubo* q);
LQ_API size_t lq_qubo_dim(const lq_qubo* q);
LQ_API lq_status lq_qubo_energy(const lq_qubo* q, const uint8_t* bits, size_t width, double* out);
LQ_API lq_status lq_qubo_load(const char* path, lq_qubo** out);
LQ_API lq_status lq_qubo_save(const lq_qubo* q, const char* path);
LQ_API lq_status lq_qubo_to_text(const lq_qubo* q, char** text_out);
LQ_API void lq_qubo_free(lq_qubo* q);

/* ---- Annealer --------------------------------------------------------- */

typedef struct lq_anneal_schedule {
    int n_sweeps;
    double beta_start;
    double beta_end;
    int n_reads;
    uint64_t seed;
} lq_anneal_schedule;

typedef struct lq_sampleset lq_sampleset;

LQ_API void lq_anneal_schedule_default(lq_anneal_schedule* s);
LQ_API lq_status lq_sample(const lq_qubo* q, const lq_anneal_schedule* s, lq_sampleset** out);
LQ_API size_t lq_sampleset_size(const lq_sampleset* s);
/* Reads are sorted by ascending energy. bits_out holds dim entries. */
LQ_API lq_status lq_sampleset_read(const lq_sampleset* s, size_t index, uint8_t* bits_out, double* energy, int* read_index);
LQ_API lq_status lq_sampleset_csv(const lq_sampleset* s, char** csv_out);
LQ_API void lq_sampleset_free(lq_sampleset* s);
LQ_API lq_status lq_solve_exhaustive(const lq_qubo* q, uint8_t* bits_out, double* energy);
LQ_API lq_status lq_greedy_descent(const lq_qubo* q, const uint8_t* start, uint8_t* bits_out);

/* ---- FMQA ------------------------------------------------------------- */

typedef struct lq_fmqa_config {
    int n_init;
    int n_iters;
    lq_fm_options fm; /* fm.seed ignored */
    lq_anneal_schedule anneal; /* anneal.seed ignored */
    int dedup_max_trials;
    uint64_t seed;
    int stop_at_optimum;
} lq_fmqa_config;

typedef enum lq_accept_path { LQ_PATH_DIRECT = 0, LQ_PATH_DEDUP_LOCAL_SEARCH = 1, LQ_PATH_DISCARDED = 2 } lq_accept_path;

typedef struct lq_fmqa_iteration {
    int iteration;
    int raw_feasible;
    int accepted;
    lq_accept_path path;
    double objective; /* NaN when discarded */
    double best_so_far;
    double ratio;
} lq_fmqa_iteration;

typedef struct lq_fmqa_result lq_fmqa_result;

LQ_API void lq_fmqa_config_default(lq_fmqa_config* cfg);
/* On a mid-run failure the status is returned and *out still receives the partial history. */
LQ_API lq_status lq_fmqa_run(const lq_instance* inst, const lq_scheme* scheme, const lq_fmqa_config* cfg,
                             lq_fmqa_result** out);
LQ_API size_t lq_fmqa_n_iterations(const lq_fmqa_result* r);
LQ_API lq_status lq_fmqa_iteration_get(const lq_fmqa_result* r, size_t index, lq_fmqa_iteration* out);
LQ_API double lq_fmqa_f_star(const lq_fmqa_result* r);
LQ_API double lq_fmqa_initial_best(const lq_fmqa_result* r);
LQ_API double lq_fmqa_final_best(const lq_fmqa_result* r);
LQ_API int lq_fmqa_reached_optimum(const lq_fmqa_result* r);
LQ_API size_t lq_fmqa_dataset_size(const lq_fmqa_result* r);
/* NaN when no iteration ran. */
LQ_API double lq_fmqa_feasible_probability(const lq_fmqa_result* r);
LQ_API lq_status lq_fmqa_history_csv(const lq_fmqa_result* r, char** csv_out);
LQ_API void lq_fmqa_result_free(lq_fmqa_result* r);

/* ---- Metrics ---------------------------------------------------------- */

/* Neighbors considered by the r_Local test: raw-feasible decodes only, or all neighbors after repair. */
typedef enum lq_local_neighborhood { LQ_LOCAL_FEASIBLE = 0, LQ_LOCAL_REPAIRED = 1 } lq_local_neighborhood;

typedef struct lq_metrics_options {
    int rho;            /* compute Spearman rho */
    int n_pairs;
    int neighborhood;   /* compute L(m) for m = 1..m_max */
    int m_max;
    int n_tours;
    int n_flips;
    int local_optimum;  /* compute r_Local */
    lq_local_neighborhood local_neighborhood;
} lq_metrics_options;

typedef struct lq_metric_report lq_metric_report;

LQ_API void lq_metrics_options_default(lq_metrics_options* opts);
LQ_API lq_status lq_metrics_analyze(const lq_scheme* scheme, const lq_instance* inst, const lq_metrics_options* opts,
                                    uint64_t seed, lq_metric_report** out);
LQ_API lq_status lq_metric_report_set_label(lq_metric_report* r, const char* scheme_label, uint64_t seed);
LQ_API int lq_metric_report_rho(const lq_metric_report* r, double* rho_out);
LQ_API int lq_metric_report_neighborhood(const lq_metric_report* r, int m, double* mean_out, size_t* n_feasible_out);
LQ_API int lq_metric_report_local(const lq_metric_report* r, double* ratio_out, size_t* n_local, size_t* n_all);
LQ_API lq_status lq_metric_reports_csv(const lq_metric_report* const* reports, size_t n, char** csv_out);
LQ_API lq_status lq_metric_reports_json(const lq_metric_report* const* reports, size_t n, char** json_out);
LQ_API void lq_metric_report_free(lq_metric_report* r);

LQ_API lq_status lq_spearman(const double* a, const double* b, size_t n, double* out);
LQ_API lq_status lq_approximation_ratio(double f_best, double f_star, double* out);

/* ---- Verification ----------------------------------------------------- */

/* suites: comma-separated list or NULL for all; checkpoint_path optional. */
LQ_API lq_status lq_verify(const char* suites, const char* checkpoint_path, char** json_out, int* n_failed);

#ifdef __cplusplus
}
#endif

#endif /* LATENTQUBO_H_ */
