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

// Surrogate-guided search over an encoding: fit an FM to the evaluated codes,
// minimize its QUBO with the annealer, decode, deduplicate, evaluate, repeat.

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <unordered_set>
#include <vector>

#include "latentqubo/annealer.hpp"
#include "latentqubo/encodings.hpp"
#include "latentqubo/fm.hpp"
#include "latentqubo/tsp.hpp"

namespace lq {

struct FmqaConfig {
    int n_init = 100;
    int n_iters = 100;
    FmTrainOptions fm;  // fm.seed is ignored; per-iteration seeds derive from `seed`
    AnnealSchedule anneal;  // anneal.seed is ignored likewise
    int dedup_max_trials = 50;
    std::uint64_t seed = 0;
    bool stop_at_optimum = true;

    void validate() const;
};

struct DatasetEntry {
    Tour tour;
    BitVector code;
    double objective = 0.0;
};

// Evaluated samples, unique by canonical tour.
class Dataset {
 public:
    bool contains(const Tour& t) const { return index_.count(t) != 0; }
    // Returns false (and leaves the dataset unchanged) if the tour is already present.
    bool add(const TspInstance& inst, const Tour& tour, BitVector code);

    const std::vector<DatasetEntry>& entries() const noexcept { return entries_; }
    std::size_t size() const noexcept { return entries_.size(); }
    double best_objective() const;
    std::vector<LabeledSample> labeled() const;

 private:
    std::vector<DatasetEntry> entries_;
    std::unordered_set<Tour, TourHash> index_;
};

enum class AcceptPath { kDirect, kDedupLocalSearch, kDiscarded };
std::string to_string(AcceptPath p);

struct IterationRecord {
    int iteration = 0;  // 1-based
    BitVector raw_bits;
    bool raw_feasible = false;
    Tour decoded;
    bool accepted = false;
    AcceptPath path = AcceptPath::kDiscarded;
    Tour evaluated;  // tour added to the dataset; empty when discarded
    double objective = 0.0;  // NaN when discarded
    double best_so_far = 0.0;
    double ratio = 0.0;  // best_so_far / f_star
};

struct FmqaResult {
    Dataset dataset;
    std::vector<IterationRecord> history;
    double f_star = 0.0;
    double initial_best = 0.0;
    bool reached_optimum = false;
    int stop_iteration = 0;  // last executed iteration (0 if none)
};

Dataset init_dataset(const TspInstance& inst, const EncodingScheme& scheme, int n_init, std::uint64_t seed);

// Up to max_trials random 2-opt or city-swap moves; the first tour not in ds, if any.
std::optional<Tour> dedup_local_search(const Tour& t, const Dataset& ds, int max_trials, Rng& rng);

struct AcceptDecision {
    AcceptPath path = AcceptPath::kDiscarded;
    std::optional<Tour> tour;
};
AcceptDecision accept_sample(const Dataset& ds, const DecodeResult& result, int dedup_max_trials, Rng& rng);

using IterationCallback = std::function<void(const IterationRecord&)>;

// `history_out`, when given, is filled as iterations complete so a thrown error
// still leaves the partial history behind.
FmqaResult run_cycle(const TspInstance& inst, const EncodingScheme& scheme, const FmqaConfig& cfg,
                     const IterationCallback& on_iteration = {}, std::vector<IterationRecord>* history_out = nullptr);
// Same with a known optimum length instead of enumerating the instance.
FmqaResult run_cycle(const TspInstance& inst, const EncodingScheme& scheme, const FmqaConfig& cfg, double f_star,
                     const IterationCallback& on_iteration = {}, std::vector<IterationRecord>* history_out = nullptr);

// Columns: iteration, raw_bits, raw_feasible, accepted, path, objective, best_so_far, R.
std::string history_csv(const std::vector<IterationRecord>& history);

}  // namespace lq
