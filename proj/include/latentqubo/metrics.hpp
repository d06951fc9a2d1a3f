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

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "latentqubo/encodings.hpp"
#include "latentqubo/fmqa.hpp"
#include "latentqubo/tsp.hpp"

namespace lq {

double normalized_hamming(const BitVector& a, const BitVector& b);

// Ranks 1..n with tied values sharing their average rank.
std::vector<double> average_ranks(std::span<const double> x);
// Pearson correlation of average ranks. Throws kNumeric on a constant list.
double spearman(std::span<const double> a, std::span<const double> b);

struct DistancePairSample {
    std::vector<double> d_hamming;
    std::vector<double> d_edge;
    std::size_t size() const noexcept { return d_hamming.size(); }
};

// Uniform pairs of distinct tours from `tours`, encoded deterministically.
DistancePairSample sample_distance_pairs(const EncodingScheme& scheme, std::span<const Tour> tours, int n_pairs,
                                         std::uint64_t seed);

struct NeighborhoodPoint {
    int m = 0;
    double mean_edge_distance = 0.0;  // NaN if no flip set decoded feasibly
    std::size_t n_feasible = 0;
    std::size_t n_total = 0;
};

// For each m: mean edge distance between a tour and the decode of its code with
// m distinct random bits flipped, over raw-feasible decodes only.
std::vector<NeighborhoodPoint> neighborhood_characteristic(const EncodingScheme& scheme, std::span<const int> m_values,
                                                           int n_tours, int n_flips_per_tour, std::uint64_t seed);

// Least-squares slope of mean edge distance against m.
double neighborhood_slope(std::span<const NeighborhoodPoint> points);

struct LocalOptimumResult {
    double ratio = 0.0;
    std::size_t n_local = 0;
    std::size_t n_all = 0;
};

// Which Hamming-1 neighbors take part in the local-optimum test.
enum class LocalNeighborhood {
    kFeasible,  // only neighbors whose raw decode is already a valid tour
    kRepaired,  // every neighbor, scored after post-processing
};

std::string to_string(LocalNeighborhood n);
LocalNeighborhood local_neighborhood_from_string(const std::string& s);

// A tour's code is a local optimum when no participating Hamming-1 neighbor
// decodes to a strictly shorter tour than the code itself decodes to.
LocalOptimumResult local_optimum_ratio(const EncodingScheme& scheme, const TspInstance& inst, std::uint64_t seed = 0,
                                       LocalNeighborhood neighborhood = LocalNeighborhood::kFeasible);

double approximation_ratio(double f_best, double f_star);
double feasible_probability(std::span<const IterationRecord> records);

struct MetricReport {
    std::string scheme;
    std::uint64_t seed = 0;
    std::optional<double> rho;
    std::size_t n_pairs = 0;
    std::vector<NeighborhoodPoint> neighborhood;
    std::optional<LocalOptimumResult> local;
};

// One row per report; columns for metrics absent from every report are omitted.
std::string metric_reports_csv(std::span<const MetricReport> reports);
std::string metric_reports_json(std::span<const MetricReport> reports);

}  // namespace lq
