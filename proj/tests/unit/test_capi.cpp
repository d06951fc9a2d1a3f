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

#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "config.hpp"
#include "doctest.h"
#include "latentqubo/latentqubo.h"
#include "svg.hpp"

namespace {

std::string take(char* s) {
    std::string out = s ? s : "";
    lq_string_free(s);
    return out;
}

}  // namespace

TEST_CASE("instance handle") {
    lq_instance* inst = nullptr;
    REQUIRE(lq_instance_generate(8, 3, &inst) == LQ_OK);
    CHECK(lq_instance_n_cities(inst) == 8);
    CHECK(lq_instance_seed(inst) == 3);
    int tour[8];
    double f = 0.0;
    REQUIRE(lq_instance_optimum(inst, tour, &f) == LQ_OK);
    CHECK(tour[0] == 1);
    double len = 0.0;
    CHECK(lq_instance_tour_length(inst, tour, 8, &len) == LQ_OK);
    CHECK(len == f);
    const int bad[3] = {1, 1, 2};
    CHECK(lq_instance_tour_length(inst, bad, 3, &len) != LQ_OK);
    CHECK(std::strlen(lq_last_error()) > 0);
    char* json = nullptr;
    REQUIRE(lq_instance_to_json(inst, &json) == LQ_OK);
    CHECK(take(json).find("coords") != std::string::npos);
    lq_instance_free(inst);
    lq_instance_free(nullptr);
    CHECK(lq_instance_generate(2, 0, &inst) == LQ_ERR_INVALID_ARGUMENT);
    CHECK(lq_instance_load("/nonexistent/instance.json", &inst) != LQ_OK);
}

TEST_CASE("status names and null arguments") {
    CHECK(std::string(lq_status_name(LQ_OK)) != std::string(lq_status_name(LQ_ERR_IO)));
    CHECK(lq_instance_generate(8, 0, nullptr) == LQ_ERR_INVALID_ARGUMENT);
    CHECK(std::string(lq_version()).size() > 0);
    char* hex = nullptr;
    REQUIRE(lq_sha256_string("abc", 3, &hex) == LQ_OK);
    CHECK(take(hex) == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("scheme round trip through the C interface") {
    lq_scheme* s = nullptr;
    REQUIRE(lq_scheme_gray(8, &s) == LQ_OK);
    CHECK(std::string(lq_scheme_name(s)) == "gray");
    REQUIRE(lq_scheme_width(s) == 13);
    const int tour[8] = {1, 4, 2, 8, 5, 7, 3, 6};
    uint8_t bits[13];
    REQUIRE(lq_scheme_encode(s, tour, 8, bits) == LQ_OK);
    int back[8];
    int feasible = 0, repaired = 1;
    REQUIRE(lq_scheme_decode(s, bits, 13, 0, back, &feasible, &repaired) == LQ_OK);
    CHECK(std::equal(tour, tour + 8, back));
    CHECK(feasible == 1);
    CHECK(repaired == 0);
    CHECK(lq_scheme_decode(s, bits, 12, 0, back, &feasible, &repaired) == LQ_ERR_DIMENSION_MISMATCH);
    lq_scheme_free(s);
}

TEST_CASE("QUBO and annealer through the C interface") {
    lq_qubo* q = nullptr;
    REQUIRE(lq_qubo_create(2, &q) == LQ_OK);
    CHECK(lq_qubo_set(q, 0, 0, 1.0) == LQ_OK);
    CHECK(lq_qubo_set(q, 0, 1, -3.0) == LQ_OK);
    CHECK(lq_qubo_set(q, 1, 1, 1.0) == LQ_OK);
    CHECK(lq_qubo_set(q, 1, 0, 1.0) != LQ_OK);
    uint8_t best[2];
    double e = 0.0;
    REQUIRE(lq_solve_exhaustive(q, best, &e) == LQ_OK);
    CHECK(e == -1.0);
    CHECK(best[0] == 1);
    CHECK(best[1] == 1);
    lq_anneal_schedule sched;
    lq_anneal_schedule_default(&sched);
    sched.n_reads = 4;
    lq_sampleset* set = nullptr;
    REQUIRE(lq_sample(q, &sched, &set) == LQ_OK);
    CHECK(lq_sampleset_size(set) == 4);
    lq_sampleset_free(set);
    lq_qubo_free(q);
}

TEST_CASE("FMQA through the C interface") {
    lq_instance* inst = nullptr;
    lq_scheme* s = nullptr;
    REQUIRE(lq_instance_generate(8, 0, &inst) == LQ_OK);
    REQUIRE(lq_scheme_log(8, &s) == LQ_OK);
    lq_fmqa_config cfg;
    lq_fmqa_config_default(&cfg);
    cfg.n_init = 10;
    cfg.n_iters = 3;
    cfg.fm.epochs = 50;
    cfg.anneal.n_sweeps = 100;
    lq_fmqa_result* r = nullptr;
    REQUIRE(lq_fmqa_run(inst, s, &cfg, &r) == LQ_OK);
    CHECK(lq_fmqa_n_iterations(r) <= 3);
    CHECK(lq_fmqa_final_best(r) <= lq_fmqa_initial_best(r));
    CHECK(lq_fmqa_final_best(r) >= lq_fmqa_f_star(r));
    char* csv = nullptr;
    REQUIRE(lq_fmqa_history_csv(r, &csv) == LQ_OK);
    CHECK(take(csv).rfind("iteration,", 0) == 0);
    lq_fmqa_result_free(r);
    cfg.n_init = 0;
    CHECK(lq_fmqa_run(inst, s, &cfg, &r) == LQ_ERR_INVALID_ARGUMENT);
    lq_scheme_free(s);
    lq_instance_free(inst);
}

TEST_CASE("configuration text round trip") {
    lqcli::ExperimentConfig cfg;
    lqcli::apply_config_text(cfg,
                             "[instance]\ncities = 7\nseed = 11\n[fmqa]\niters = 12\n"
                             "[metrics]\nlocal_neighborhood = \"repaired\"\n[run]\nschemes = [\"log\", \"gray\"]\n");
    CHECK(cfg.cities == 7);
    CHECK(cfg.instance_seed == 11);
    CHECK(cfg.fmqa.n_iters == 12);
    CHECK(cfg.metrics.local_neighborhood == LQ_LOCAL_REPAIRED);
    CHECK(cfg.schemes == std::vector<std::string>{"log", "gray"});
    const std::string text = cfg.to_toml();
    lqcli::ExperimentConfig again;
    lqcli::apply_config_text(again, text);
    CHECK(again.to_toml() == text);
    lqcli::ExperimentConfig bad;
    CHECK_THROWS_AS(lqcli::apply_config_text(bad, "[metrics]\nlocal_neighborhood = \"all\"\n"),
                    lqcli::ValidationError);
    CHECK_THROWS_AS(lqcli::apply_config_text(bad, "[nope]\nx = 1\n"), lqcli::ValidationError);
}

TEST_CASE("charts are deterministic") {
    const lqcli::Series s{"a", {1, 2, 3}, {0.5, 0.25, 0.125}, {0.1, 0.1, 0.1}};
    const lqcli::ChartLabels labels{"t", "x", "y"};
    const auto one = lqcli::line_chart_svg({s}, labels);
    CHECK(one == lqcli::line_chart_svg({s}, labels));
    CHECK(one.rfind("<svg", 0) == 0);
    const auto bars = lqcli::bar_chart_svg({"p", "q"}, {1.0, 2.0}, {0.1, 0.2}, labels);
    CHECK(bars == lqcli::bar_chart_svg({"p", "q"}, {1.0, 2.0}, {0.1, 0.2}, labels));
}
