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
#include <memory>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "latentqubo/bitvector.hpp"
#include "latentqubo/rng.hpp"
#include "latentqubo/tsp.hpp"

namespace lq {

struct DecodeResult {
    Tour tour;                  // always a valid canonical tour
    bool raw_feasible = false;  // raw output was a valid tour before post-processing
    bool repaired = false;
};

// Common interface of every tour <-> bit-vector mapping. encode() is the
// deterministic encoder; decode() always yields a valid tour by applying the
// scheme's own post-processing rule.
class EncodingScheme {
 public:
    virtual ~EncodingScheme() = default;

    virtual std::string name() const = 0;
    virtual int n_cities() const = 0;
    virtual std::size_t width() const = 0;
    virtual BitVector encode(const Tour& tour) const = 0;
    virtual DecodeResult decode(const BitVector& bits, Rng& rng) const = 0;

    // Batched forms; the defaults loop over the scalar versions.
    virtual std::vector<BitVector> encode_batch(std::span<const Tour> tours) const;
    virtual std::vector<DecodeResult> decode_batch(std::span<const BitVector> codes, Rng& rng) const;
};

// Minimum number of bits that can label all (L-1)! canonical tours.
std::size_t rank_bits(int n_cities);

// Lexicographic rank of the suffix (pi_2..pi_L) among permutations of {2..L}.
std::uint64_t lehmer_rank(const Tour& tour);
Tour lehmer_unrank(std::uint64_t rank, int n_cities);

// Distinct canonical tours drawn uniformly without replacement.
std::vector<Tour> sample_distinct_tours(int n_cities, std::size_t count, std::uint64_t seed);

inline std::uint64_t gray_code(std::uint64_t r) { return r ^ (r >> 1); }
std::uint64_t inverse_gray_code(std::uint64_t g);

class LogEncoding final : public EncodingScheme {
 public:
    explicit LogEncoding(int n_cities);

    std::string name() const override { return "log"; }
    int n_cities() const override { return n_cities_; }
    std::size_t width() const override { return width_; }
    BitVector encode(const Tour& tour) const override;
    DecodeResult decode(const BitVector& bits, Rng& rng) const override;

 private:
    int n_cities_;
    std::size_t width_;
};

class GrayEncoding final : public EncodingScheme {
 public:
    explicit GrayEncoding(int n_cities);

    std::string name() const override { return "gray"; }
    int n_cities() const override { return n_cities_; }
    std::size_t width() const override { return width_; }
    BitVector encode(const Tour& tour) const override;
    DecodeResult decode(const BitVector& bits, Rng& rng) const override;

 private:
    int n_cities_;
    std::size_t width_;
};

// Bijection between all canonical tours and distinct random labels in [0, 2^B).
// Labels are indexed by Lehmer rank, so label_of_rank[r] is the code of lehmer_unrank(r).
struct RandomLabelTable {
    int n_cities = 0;
    std::size_t width = 0;
    std::uint64_t seed = 0;
    std::vector<std::uint64_t> label_of_rank;
    std::unordered_map<std::uint64_t, std::uint64_t> rank_of_label;

    std::uint64_t label(const Tour& tour) const;
    bool contains_label(std::uint64_t label) const { return rank_of_label.count(label) != 0; }
    std::size_t size() const noexcept { return label_of_rank.size(); }
};

RandomLabelTable build_random_label_table(int n_cities, std::uint64_t seed);

// Table hit, or the tour of the nearest registered code by Hamming distance
// (ties broken uniformly at random with `rng`).
DecodeResult random_label_decode(const BitVector& bits, const RandomLabelTable& table, Rng& rng);

std::string random_label_table_to_json(const RandomLabelTable& table);
RandomLabelTable random_label_table_from_json(const std::string& text);
void save_random_label_table(const RandomLabelTable& table, const std::string& path);
RandomLabelTable load_random_label_table(const std::string& path);

class RandomLabelEncoding final : public EncodingScheme {
 public:
    explicit RandomLabelEncoding(RandomLabelTable table);

    std::string name() const override { return "random"; }
    int n_cities() const override { return table_.n_cities; }
    std::size_t width() const override { return table_.width; }
    BitVector encode(const Tour& tour) const override;
    DecodeResult decode(const BitVector& bits, Rng& rng) const override;

    const RandomLabelTable& table() const noexcept { return table_; }

 private:
    RandomLabelTable table_;
};

}  // namespace lq
