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
#include <sstream>

#include "doctest.h"
#include "latentqubo/annealer.hpp"
#include "latentqubo/error.hpp"
#include "latentqubo/rng.hpp"

using namespace lq;

namespace {

Qubo random_qubo(int d, std::uint64_t seed) {
    Qubo q(d);
    Rng rng = make_rng(seed);
    for (int i = 0; i < d; ++i)
        for (int j = i; j < d; ++j) q.q(i, j) = 2 * uniform01(rng) - 1;
    return q;
}

bool is_local_minimum(const Qubo& q, const BitVector& z) {
    for (int i = 0; i < q.dim(); ++i)
        if (flip_delta(q, z, i) < -1e-12) return false;
    return true;
}

}  // namespace

TEST_CASE("two-bit problem") {
    Qubo q(2);
    q.q << 1, -3, 0, 1;
    const auto ex = solve_exhaustive(q);
    CHECK(ex.bits == BitVector::from_string("11"));
    CHECK(ex.energy == -1.0);
    // Both single flips from 00 cost +1, so 00 is a local minimum.
    CHECK(greedy_descent(q, BitVector::from_string("00")) == BitVector::from_string("00"));
    CHECK(greedy_descent(q, BitVector::from_string("10")) == BitVector::from_string("11"));
}

TEST_CASE("trivial problems anneal to all zeros") {
    AnnealSchedule s;
    s.n_reads = 3;
    s.n_sweeps = 200;
    const Qubo zero(6);
    CHECK(solve_exhaustive(zero).bits == BitVector(6));
    Qubo pos(6);
    for (int i = 0; i < 6; ++i) pos.q(i, i) = 1.0 + i;
    for (const auto& r : sample(pos, s).reads) CHECK(r.bits == BitVector(6));
    CHECK(solve_exhaustive(pos).bits == BitVector(6));
}

TEST_CASE("flip delta agrees with energy differences") {
    const auto q = random_qubo(9, 1);
    Rng rng = make_rng(5);
    for (int k = 0; k < 50; ++k) {
        BitVector z(9);
        for (std::size_t i = 0; i < 9; ++i) z.set(i, uniform01(rng) < 0.5);
        for (int i = 0; i < 9; ++i) {
            BitVector y = z;
            y.flip(static_cast<std::size_t>(i));
            CHECK(flip_delta(q, z, i) == doctest::Approx(qubo_energy(q, y) - qubo_energy(q, z)).epsilon(1e-12));
        }
    }
}

TEST_CASE("sample set shape, order and reproducibility") {
    const auto q = random_qubo(12, 2);
    AnnealSchedule s;
    s.n_reads = 5;
    s.n_sweeps = 300;
    s.seed = 17;
    const auto a = sample(q, s);
    REQUIRE(a.reads.size() == 5);
    for (std::size_t r = 0; r < a.reads.size(); ++r) {
        CHECK(a.reads[r].energy == doctest::Approx(qubo_energy(q, a.reads[r].bits)).epsilon(1e-12));
        if (r > 0) CHECK(a.reads[r - 1].energy <= a.reads[r].energy);
    }
    CHECK(a.best().energy == a.reads.front().energy);
    const auto b = sample(q, s);
    for (std::size_t r = 0; r < 5; ++r) {
        CHECK(a.reads[r].bits == b.reads[r].bits);
        CHECK(a.reads[r].read_index == b.reads[r].read_index);
    }
    CHECK(sample_set_csv(a) == sample_set_csv(b));
    std::istringstream csv(sample_set_csv(a));
    std::string line;
    std::getline(csv, line);
    CHECK(line == "read_index,energy,bitstring");
}

TEST_CASE("cold anneals end in local minima and reach the ground state on small problems") {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const auto q = random_qubo(10, seed + 10);
        AnnealSchedule s;
        s.n_reads = 10;
        s.seed = seed;
        s.beta_end = 1e6;
        const auto set = sample(q, s);
        for (const auto& r : set.reads) CHECK(is_local_minimum(q, r.bits));
        CHECK(set.best().energy == doctest::Approx(solve_exhaustive(q).energy));
    }
}

TEST_CASE("greedy descent output is a local minimum") {
    const auto q = random_qubo(14, 3);
    Rng rng = make_rng(1);
    for (int k = 0; k < 30; ++k) {
        BitVector z(14);
        for (std::size_t i = 0; i < 14; ++i) z.set(i, uniform01(rng) < 0.5);
        const auto out = greedy_descent(q, z);
        CHECK(is_local_minimum(q, out));
        CHECK(qubo_energy(q, out) <= qubo_energy(q, z));
    }
}

TEST_CASE("input validation") {
    CHECK_THROWS_AS(solve_exhaustive(Qubo(kMaxExhaustiveDim + 1)), Error);
    AnnealSchedule s;
    s.n_reads = 0;
    CHECK_THROWS_AS(s.validate(), Error);
    s = AnnealSchedule{};
    s.beta_start = -1.0;
    CHECK_THROWS_AS(s.validate(), Error);
    CHECK_THROWS_AS(greedy_descent(Qubo(3), BitVector(4)), Error);
}
