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
#include <string>
#include <vector>

#include "latentqubo/bitvector.hpp"
#include "latentqubo/fm.hpp"

namespace lq {

inline constexpr int kMaxExhaustiveDim = 20;

// Geometric inverse-temperature ramp from beta_start to beta_end over n_sweeps.
struct AnnealSchedule {
    int n_sweeps = 1000;
    double beta_start = 0.1;
    double beta_end = 10.0;
    int n_reads = 10;
    std::uint64_t seed = 0;

    void validate() const;
};

struct Read {
    BitVector bits;
    double energy = 0.0;
    int read_index = 0;  // position in generation order
};

struct SampleSet {
    std::vector<Read> reads;  // ascending energy, ties by read_index
    AnnealSchedule schedule;
    double wall_seconds = 0.0;

    const Read& best() const;
};

struct ExhaustiveResult {
    BitVector bits;
    double energy = 0.0;
};

// Global minimum by enumeration; ties go to the lexicographically smallest bit string.
ExhaustiveResult solve_exhaustive(const Qubo& q);

// Independent single-spin-flip Metropolis anneals. Read r draws from substream r of the seed.
SampleSet sample(const Qubo& q, const AnnealSchedule& sched);

// Steepest single-bit descent to a Hamming-1 local optimum (ties to the lowest index).
BitVector greedy_descent(const Qubo& q, BitVector z0);

// Energy change of flipping bit i.
double flip_delta(const Qubo& q, const BitVector& z, int i);

// Columns: read_index, energy, bitstring.
std::string sample_set_csv(const SampleSet& s);

}  // namespace lq
