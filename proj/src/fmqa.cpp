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

#include "latentqubo/fmqa.hpp"

#include <cmath>
#include <cstdio>
#include <limits>

#include "latentqubo/bae.hpp"
#include "latentqubo/error.hpp"

namespace lq {

namespace {

constexpr std::uint64_t kStreamInit = 1;
constexpr std::uint64_t kStreamFm = 2;
constexpr std::uint64_t kStreamAnneal = 3;
constexpr std::uint64_t kStreamDecode = 4;
constexpr std::uint64_t kStreamDedup = 5;

constexpr double kOptimumTol = 1e-9;

std::uint64_t iteration_seed(std::uint64_t seed, std::uint64_t stream, int iteration) {
    return derive_seed(derive_seed(seed, stream), static_cast<std::uint64_t>(iteration));
}

}  // namespace

void FmqaConfig::validate() const {
    require(n_init >= 1, ErrorCode::kInvalidArgument, "n_init must be >= 1");
    require(n_iters >= 0, ErrorCode::kInvalidArgument, "n_iters must be >= 0");
    require(dedup_max_trials >= 1, ErrorCode::kInvalidArgument, "dedup_max_trials must be >= 1");
    require(fm.rank >= 1 && fm.epochs >= 0 && fm.lr >= 0.0, ErrorCode::kInvalidArgument, "invalid FM settings");
    anneal.validate();
}

bool Dataset::add(const TspInstance& inst, const Tour& tour, BitVector code) {
    require(tour.is_canonical(), ErrorCode::kInvalidTour, "dataset tours must be canonical");
    if (!index_.insert(tour).second) return false;
    entries_.push_back({tour, std::move(code), tour_length(inst, tour)});
    return true;
}

double Dataset::best_objective() const {
    require(!entries_.empty(), ErrorCode::kEmptyInput, "dataset is empty");
    double best = std::numeric_limits<double>::infinity();
    for (const auto& e : entries_) best = std::min(best, e.objective);
    return best;
}

std::vector<LabeledSample> Dataset::labeled() const {
    std::vector<LabeledSample> out;
    out.reserve(entries_.size());
    for (const auto& e : entries_) out.push_back({e.code, e.objective});
    return out;
}

std::string to_string(AcceptPath p) {
    switch (p) {
        case AcceptPath::kDirect:
            return "direct";
        case AcceptPath::kDedupLocalSearch:
            return "dedup-local-search";
        case AcceptPath::kDiscarded:
            return "discarded";
    }
    return "unknown";
}

Dataset init_dataset(const TspInstance& inst, const EncodingScheme& scheme, int n_init, std::uint64_t seed) {
    require(scheme.n_cities() == inst.n_cities(), ErrorCode::kDimensionMismatch, "scheme and instance differ in size");
    require(n_init >= 1, ErrorCode::kInvalidArgument, "n_init must be >= 1");
    require(inst.n_cities() <= kMaxEnumerableCities, ErrorCode::kSizeLimit, "instance too large to sample tours by rank");
    require(static_cast<std::uint64_t>(n_init) <= factorial(inst.n_cities() - 1), ErrorCode::kInvalidArgument,
            "n_init exceeds the number of distinct tours");
    const auto tours = sample_distinct_tours(inst.n_cities(), static_cast<std::size_t>(n_init), derive_seed(seed, kStreamInit));
    const auto codes = scheme.encode_batch(tours);
    Dataset ds;
    for (std::size_t i = 0; i < tours.size(); ++i) ds.add(inst, tours[i], codes[i]);
    return ds;
}

std::optional<Tour> dedup_local_search(const Tour& t, const Dataset& ds, int max_trials, Rng& rng) {
    const int n = t.size();
    require(n >= 3, ErrorCode::kInvalidTour, "local search needs at least 3 cities");
    for (int trial = 0; trial < max_trials; ++trial) {
        const bool use_two_opt = uniform_int(rng, 0, 1) == 0;
        int i = uniform_int(rng, 1, n);
        int j = uniform_int(rng, 1, n - 1);
        if (j >= i) ++j;  // uniform over ordered pairs with i != j
        if (i > j) std::swap(i, j);
        Tour cand = use_two_opt ? two_opt(t, i, j) : city_swap(t, i, j);
        if (!ds.contains(cand)) return cand;
    }
    return std::nullopt;
}

AcceptDecision accept_sample(const Dataset& ds, const DecodeResult& result, int dedup_max_trials, Rng& rng) {
    if (!ds.contains(result.tour)) return {AcceptPath::kDirect, result.tour};
    if (auto t = dedup_local_search(result.tour, ds, dedup_max_trials, rng)) return {AcceptPath::kDedupLocalSearch, *t};
    return {AcceptPath::kDiscarded, std::nullopt};
}

FmqaResult run_cycle(const TspInstance& inst, const EncodingScheme& scheme, const FmqaConfig& cfg,
                     const IterationCallback& on_iteration, std::vector<IterationRecord>* history_out) {
    return run_cycle(inst, scheme, cfg, exact_optimum(inst).length, on_iteration, history_out);
}

FmqaResult run_cycle(const TspInstance& inst, const EncodingScheme& scheme, const FmqaConfig& cfg, double f_star,
                     const IterationCallback& on_iteration, std::vector<IterationRecord>* history_out) {
    cfg.validate();
    require(f_star > 0.0, ErrorCode::kInvalidArgument, "optimum length must be positive");
    FmqaResult res;
    res.f_star = f_star;
    res.dataset = init_dataset(inst, scheme, cfg.n_init, cfg.seed);
    double best = res.dataset.best_objective();
    res.initial_best = best;
    res.reached_optimum = best <= f_star + kOptimumTol;
    if (history_out) history_out->clear();

    for (int it = 1; it <= cfg.n_iters; ++it) {
        if (cfg.stop_at_optimum && res.reached_optimum) break;
        const auto samples = res.dataset.labeled();
        FmTrainOptions fm_opts = cfg.fm;
        fm_opts.seed = iteration_seed(cfg.seed, kStreamFm, it);
        const FmModel fm = fm_train(samples, fm_opts);

        AnnealSchedule sched = cfg.anneal;
        sched.seed = iteration_seed(cfg.seed, kStreamAnneal, it);
        const SampleSet reads = sample(to_qubo(fm), sched);

        IterationRecord rec;
        rec.iteration = it;
        rec.raw_bits = reads.best().bits;
        Rng decode_rng(iteration_seed(cfg.seed, kStreamDecode, it));
        const DecodeResult dec = scheme.decode(rec.raw_bits, decode_rng);
        rec.raw_feasible = dec.raw_feasible;
        rec.decoded = dec.tour;

        Rng dedup_rng(iteration_seed(cfg.seed, kStreamDedup, it));
        const AcceptDecision decision = accept_sample(res.dataset, dec, cfg.dedup_max_trials, dedup_rng);
        rec.path = decision.path;
        rec.accepted = decision.tour.has_value();
        rec.objective = std::numeric_limits<double>::quiet_NaN();
        if (decision.tour) {
            // A directly accepted tour keeps the code the sampler produced; a local-search
            // substitute is stored under its own encoding.
            BitVector code = decision.path == AcceptPath::kDirect ? rec.raw_bits : scheme.encode(*decision.tour);
            res.dataset.add(inst, *decision.tour, std::move(code));
            rec.evaluated = *decision.tour;
            rec.objective = res.dataset.entries().back().objective;
            best = std::min(best, rec.objective);
        }
        rec.best_so_far = best;
        rec.ratio = std::max(1.0, best / f_star);
        res.reached_optimum = best <= f_star + kOptimumTol;
        res.stop_iteration = it;
        res.history.push_back(rec);
        if (history_out) history_out->push_back(rec);
        if (on_iteration) on_iteration(rec);
    }
    return res;
}

std::string history_csv(const std::vector<IterationRecord>& history) {
    std::string out = "iteration,raw_bits,raw_feasible,accepted,path,objective,best_so_far,R\n";
    char buf[160];
    for (const auto& r : history) {
        std::string objective;
        if (!std::isnan(r.objective)) {
            std::snprintf(buf, sizeof buf, "%.12g", r.objective);
            objective = buf;
        }
        std::snprintf(buf, sizeof buf, "%d,%s,%d,%d,%s,%s,%.12g,%.12g\n", r.iteration, r.raw_bits.to_string().c_str(),
                      r.raw_feasible ? 1 : 0, r.accepted ? 1 : 0, to_string(r.path).c_str(), objective.c_str(),
                      r.best_so_far, r.ratio);
        out += buf;
    }
    return out;
}

}  // namespace lq
