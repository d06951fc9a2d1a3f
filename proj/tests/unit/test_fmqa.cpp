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

#include <cmath>
#include <set>

#include "doctest.h"
#include "latentqubo/error.hpp"
#include "latentqubo/fmqa.hpp"
#include "latentqubo/metrics.hpp"

using namespace lq;

namespace {

FmqaConfig quick_config() {
    FmqaConfig cfg;
    cfg.n_init = 20;
    cfg.n_iters = 10;
    cfg.fm.epochs = 100;
    cfg.anneal.n_sweeps = 200;
    cfg.anneal.n_reads = 3;
    cfg.seed = 4;
    return cfg;
}

}  // namespace

TEST_CASE("zero iterations keep only the initial dataset") {
    const auto inst = generate_instance(8, 0);
    const LogEncoding enc(8);
    auto cfg = quick_config();
    cfg.n_iters = 0;
    const auto res = run_cycle(inst, enc, cfg);
    CHECK(res.history.empty());
    CHECK(res.dataset.size() == 20);
    CHECK(res.stop_iteration == 0);
    CHECK(res.initial_best == res.dataset.best_objective());
}

TEST_CASE("initial dataset is unique, correctly scored and reproducible") {
    const auto inst = generate_instance(8, 1);
    const GrayEncoding enc(8);
    const auto ds = init_dataset(inst, enc, 100, 3);
    CHECK(ds.size() == 100);
    std::set<Tour> seen;
    for (const auto& e : ds.entries()) {
        seen.insert(e.tour);
        CHECK(e.objective == tour_length(inst, e.tour));
        CHECK(e.code == enc.encode(e.tour));
    }
    CHECK(seen.size() == 100);
    const auto again = init_dataset(inst, enc, 100, 3);
    for (std::size_t i = 0; i < 100; ++i) CHECK(again.entries()[i].tour == ds.entries()[i].tour);
}

TEST_CASE("a full initial dataset contains the optimum") {
    const auto inst = generate_instance(8, 2);
    const LogEncoding enc(8);
    const auto ds = init_dataset(inst, enc, 5040, 0);
    CHECK(ds.best_objective() == doctest::Approx(exact_optimum(inst).length));
    CHECK_THROWS_AS(init_dataset(inst, enc, 5041, 0), Error);
}

TEST_CASE("dedup local search") {
    const auto inst = generate_instance(6, 0);
    const Tour t({1, 2, 3, 4, 5, 6});
    Rng rng = make_rng(1);
    Dataset one;
    one.add(inst, t, BitVector(7));
    CHECK_FALSE(one.add(inst, t, BitVector(7)));
    const auto found = dedup_local_search(t, one, 1, rng);
    REQUIRE(found.has_value());
    CHECK(*found != t);
    CHECK(found->is_canonical());

    Dataset full;
    for (const auto& u : enumerate_tours(6)) full.add(inst, u, BitVector(7));
    CHECK_FALSE(dedup_local_search(t, full, 50, rng).has_value());
    DecodeResult r{t, true, false};
    const auto d = accept_sample(full, r, 50, rng);
    CHECK(d.path == AcceptPath::kDiscarded);
    CHECK_FALSE(d.tour.has_value());

    const auto direct = accept_sample(one, DecodeResult{Tour({1, 3, 2, 4, 5, 6}), true, false}, 50, rng);
    CHECK(direct.path == AcceptPath::kDirect);
    const auto moved = accept_sample(one, r, 50, rng);
    CHECK(moved.path == AcceptPath::kDedupLocalSearch);
}

TEST_CASE("cycle invariants") {
    const auto inst = generate_instance(8, 3);
    const LogEncoding enc(8);
    auto cfg = quick_config();
    cfg.stop_at_optimum = false;
    std::vector<IterationRecord> streamed;
    const auto res = run_cycle(inst, enc, cfg, [&](const IterationRecord& r) { streamed.push_back(r); });
    REQUIRE(res.history.size() == 10);
    CHECK(streamed.size() == 10);
    CHECK(res.f_star == doctest::Approx(exact_optimum(inst).length));
    std::set<Tour> seen;
    for (const auto& e : res.dataset.entries()) {
        CHECK(seen.insert(e.tour).second);
        CHECK(e.objective == tour_length(inst, e.tour));
    }
    double prev = res.initial_best;
    std::size_t accepted = 0, feasible = 0;
    for (std::size_t i = 0; i < res.history.size(); ++i) {
        const auto& h = res.history[i];
        CHECK(h.iteration == static_cast<int>(i) + 1);
        CHECK(h.best_so_far <= prev);
        CHECK(h.ratio == doctest::Approx(h.best_so_far / res.f_star));
        CHECK(h.ratio >= 1.0 - 1e-12);
        prev = h.best_so_far;
        accepted += h.accepted ? 1 : 0;
        feasible += h.raw_feasible ? 1 : 0;
        if (h.accepted) CHECK(h.objective == tour_length(inst, h.evaluated));
        else CHECK(std::isnan(h.objective));
    }
    CHECK(res.dataset.size() == 20 + accepted);
    CHECK(feasible_probability(res.history) == doctest::Approx(static_cast<double>(feasible) / 10.0));
    const auto again = run_cycle(inst, enc, cfg);
    CHECK(history_csv(again.history) == history_csv(res.history));
}

TEST_CASE("a tiny instance is exhausted by deduplication") {
    const auto inst = generate_instance(4, 5);
    const LogEncoding enc(4);
    auto cfg = quick_config();
    cfg.n_init = 1;
    cfg.n_iters = 5;
    cfg.stop_at_optimum = false;
    const auto res = run_cycle(inst, enc, cfg);
    CHECK(res.dataset.size() == 6);
    CHECK(res.reached_optimum);
    CHECK(res.history.back().ratio == doctest::Approx(1.0));
}

TEST_CASE("random labels are raw-feasible at the table density") {
    const RandomLabelEncoding enc(build_random_label_table(8, 0));
    Rng rng = make_rng(12);
    int hits = 0;
    const int n = 4000;
    for (int k = 0; k < n; ++k) {
        BitVector z(enc.width());
        for (std::size_t i = 0; i < z.width(); ++i) z.set(i, uniform01(rng) < 0.5);
        hits += enc.decode(z, rng).raw_feasible ? 1 : 0;
    }
    CHECK(std::abs(hits / static_cast<double>(n) - 5040.0 / 8192.0) < 0.03);
}

TEST_CASE("config validation") {
    auto cfg = quick_config();
    cfg.n_init = 0;
    CHECK_THROWS_AS(cfg.validate(), Error);
    cfg = quick_config();
    cfg.n_iters = -1;
    CHECK_THROWS_AS(cfg.validate(), Error);
}
