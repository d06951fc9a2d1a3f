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

#include <set>

#include "doctest.h"
#include "latentqubo/encodings.hpp"
#include "latentqubo/error.hpp"

using namespace lq;

TEST_CASE("Lehmer rank examples") {
    CHECK(rank_bits(8) == 13);
    CHECK(lehmer_rank(Tour({1, 2, 3, 4, 5, 6, 7, 8})) == 0);
    CHECK(lehmer_rank(Tour({1, 2, 3, 4, 5, 6, 8, 7})) == 1);
    CHECK(lehmer_unrank(0, 8) == Tour({1, 2, 3, 4, 5, 6, 7, 8}));
    CHECK(lehmer_unrank(5039, 8) == Tour({1, 8, 7, 6, 5, 4, 3, 2}));
    CHECK(lehmer_unrank(1, 4) == Tour({1, 2, 4, 3}));
    CHECK_THROWS_AS(lehmer_unrank(5040, 8), Error);
}

TEST_CASE("rank and unrank are inverse over all tours") {
    std::uint64_t r = 0;
    for (const auto& t : enumerate_tours(8)) {
        CHECK(lehmer_rank(t) == r);
        CHECK(lehmer_unrank(r, 8) == t);
        ++r;
    }
}

TEST_CASE("log encoding") {
    const LogEncoding enc(8);
    Rng rng = make_rng(0);
    CHECK(enc.width() == 13);
    CHECK(enc.encode(lehmer_unrank(0, 8)).to_string() == "0000000000000");
    const auto zero = enc.decode(BitVector(13), rng);
    CHECK(zero.tour == Tour({1, 2, 3, 4, 5, 6, 7, 8}));
    CHECK(zero.raw_feasible);
    CHECK_FALSE(zero.repaired);
    const auto wrapped = enc.decode(BitVector::from_integer(5043, 13), rng);
    CHECK(wrapped.tour == lehmer_unrank(3, 8));
    CHECK_FALSE(wrapped.raw_feasible);
    CHECK(wrapped.repaired);
    for (const auto& t : enumerate_tours(8)) {
        const auto d = enc.decode(enc.encode(t), rng);
        CHECK(d.tour == t);
        CHECK(d.raw_feasible);
    }
    for (std::uint64_t v = 0; v < 8192; ++v) CHECK(enc.decode(BitVector::from_integer(v, 13), rng).tour.is_canonical());
}

TEST_CASE("gray encoding") {
    const GrayEncoding enc(8);
    Rng rng = make_rng(0);
    CHECK(gray_code(1) == 1);
    CHECK(gray_code(2) == 3);
    CHECK(enc.encode(lehmer_unrank(1, 8)).to_integer() == 1);
    CHECK(enc.encode(lehmer_unrank(2, 8)).to_integer() == 3);
    for (std::uint64_t g = 0; g < 8192; ++g) CHECK(gray_code(inverse_gray_code(g)) == g);
    for (std::uint64_t r = 0; r + 1 < 5040; ++r)
        CHECK(hamming_distance(enc.encode(lehmer_unrank(r, 8)), enc.encode(lehmer_unrank(r + 1, 8))) == 1);
    std::set<BitVector> codes;
    for (const auto& t : enumerate_tours(8)) {
        const auto z = enc.encode(t);
        codes.insert(z);
        const auto d = enc.decode(z, rng);
        CHECK(d.tour == t);
        CHECK(d.raw_feasible);
    }
    CHECK(codes.size() == 5040);
}

TEST_CASE("random label table") {
    const auto table = build_random_label_table(8, 1);
    CHECK(table.size() == 5040);
    CHECK(table.width == 13);
    std::set<std::uint64_t> labels(table.label_of_rank.begin(), table.label_of_rank.end());
    CHECK(labels.size() == 5040);
    CHECK(*labels.rbegin() < 8192);
    CHECK(build_random_label_table(8, 2).label_of_rank != table.label_of_rank);
    CHECK(build_random_label_table(8, 1).label_of_rank == table.label_of_rank);

    std::size_t hits = 0;
    for (std::uint64_t v = 0; v < 8192; ++v) hits += table.contains_label(v) ? 1 : 0;
    CHECK(hits == 5040);
    CHECK(static_cast<double>(hits) / 8192.0 == doctest::Approx(0.6152).epsilon(1e-4));
}

TEST_CASE("random label decoding") {
    const RandomLabelEncoding enc(build_random_label_table(8, 3));
    const auto& table = enc.table();
    Rng rng = make_rng(5);
    for (const auto& t : enumerate_tours(8)) {
        const auto d = enc.decode(enc.encode(t), rng);
        CHECK(d.tour == t);
        CHECK(d.raw_feasible);
        CHECK_FALSE(d.repaired);
    }
    // Misses resolve to some registered code at minimum Hamming distance.
    int misses = 0;
    for (std::uint64_t v = 0; v < 8192 && misses < 200; ++v) {
        if (table.contains_label(v)) continue;
        ++misses;
        int best = 64;
        for (std::uint64_t label : table.label_of_rank) best = std::min(best, std::popcount(v ^ label));
        const auto d = enc.decode(BitVector::from_integer(v, 13), rng);
        CHECK_FALSE(d.raw_feasible);
        CHECK(d.repaired);
        CHECK(std::popcount(v ^ table.label(d.tour)) == best);
    }
    CHECK(misses == 200);
}

TEST_CASE("random label decoding is total and reproducible") {
    const RandomLabelEncoding enc(build_random_label_table(8, 4));
    Rng a = make_rng(1), b = make_rng(1);
    for (std::uint64_t v = 0; v < 8192; v += 7) {
        const auto z = BitVector::from_integer(v, 13);
        const auto da = enc.decode(z, a), db = enc.decode(z, b);
        CHECK(da.tour == db.tour);
        CHECK(da.tour.is_canonical());
    }
}

TEST_CASE("random label table serialization") {
    const auto table = build_random_label_table(8, 6);
    const auto back = random_label_table_from_json(random_label_table_to_json(table));
    CHECK(back.label_of_rank == table.label_of_rank);
    CHECK(back.seed == table.seed);
    CHECK_THROWS_AS(random_label_table_from_json("[]"), Error);
}

TEST_CASE("bit vector conversions") {
    const auto z = BitVector::from_integer(5, 4);
    CHECK(z.to_string() == "0101");
    CHECK(BitVector::from_string("0101") == z);
    CHECK(z.to_integer() == 5);
    CHECK(hamming_distance(z, BitVector::from_string("1010")) == 4);
}

TEST_CASE("distinct tour sampling") {
    const auto tours = sample_distinct_tours(8, 5000, 0);
    CHECK(tours.size() == 5000);
    CHECK(std::set<Tour>(tours.begin(), tours.end()).size() == 5000);
    CHECK(sample_distinct_tours(8, 5000, 0) == tours);
    CHECK_THROWS_AS(sample_distinct_tours(8, 5041, 0), Error);
}
