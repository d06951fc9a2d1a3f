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

#include "doctest.h"
#include "latentqubo/error.hpp"
#include "latentqubo/metrics.hpp"

using namespace lq;

namespace {

// Decodes every code to the identity tour.
class ConstantScheme final : public EncodingScheme {
 public:
    explicit ConstantScheme(int n) : n_(n) {}
    std::string name() const override { return "constant"; }
    int n_cities() const override { return n_; }
    std::size_t width() const override { return 4; }
    BitVector encode(const Tour&) const override { return BitVector(4); }
    DecodeResult decode(const BitVector&, Rng&) const override {
        std::vector<int> id(static_cast<std::size_t>(n_));
        for (int i = 0; i < n_; ++i) id[static_cast<std::size_t>(i)] = i + 1;
        return {Tour(id), true, false};
    }

 private:
    int n_;
};

}  // namespace

TEST_CASE("normalized Hamming distance") {
    CHECK(normalized_hamming(BitVector::from_string("0000"), BitVector::from_string("0000")) == 0.0);
    CHECK(normalized_hamming(BitVector::from_string("0000"), BitVector::from_string("1111")) == 1.0);
    CHECK(normalized_hamming(BitVector::from_string("1010"), BitVector::from_string("1001")) == 0.5);
    CHECK_THROWS_AS(normalized_hamming(BitVector(3), BitVector(4)), Error);
}

TEST_CASE("Spearman correlation") {
    const std::vector<double> a{1, 2, 3}, b{10, 20, 30}, c{30, 20, 10};
    CHECK(spearman(a, b) == doctest::Approx(1.0));
    CHECK(spearman(a, c) == doctest::Approx(-1.0));
    CHECK(average_ranks(std::vector<double>{10, 20, 20, 30}) == std::vector<double>{1, 2.5, 2.5, 4});
    // Ranks (1, 2.5, 2.5, 4) against (1, 2, 3, 4).
    CHECK(spearman(std::vector<double>{1, 2, 2, 3}, std::vector<double>{1, 2, 3, 4}) ==
          doctest::Approx(4.5 / std::sqrt(4.5 * 5.0)));
    const std::vector<double> x{0.3, 0.1, 0.9, 0.5, 0.7}, y{2, 1, 5, 3, 3.5};
    std::vector<double> y_cubed;
    for (double v : y) y_cubed.push_back(v * v * v + 7);
    CHECK(spearman(x, y) == doctest::Approx(spearman(x, y_cubed)));
    CHECK_THROWS_AS(spearman(std::vector<double>{1, 1, 1}, a), Error);
    CHECK_THROWS_AS(spearman(a, std::vector<double>{1, 2}), Error);
}

TEST_CASE("distance pair sampling") {
    const LogEncoding enc(8);
    const auto tours = enumerate_tours(8);
    const auto s = sample_distance_pairs(enc, tours, 2000, 5);
    CHECK(s.size() == 2000);
    for (std::size_t i = 0; i < s.size(); ++i) {
        CHECK(s.d_hamming[i] >= 0.0);
        CHECK(s.d_hamming[i] <= 1.0);
        CHECK(s.d_edge[i] > 0.0);
        CHECK(s.d_edge[i] <= 1.0);
    }
    const auto again = sample_distance_pairs(enc, tours, 2000, 5);
    CHECK(again.d_hamming == s.d_hamming);
    CHECK(again.d_edge == s.d_edge);
}

TEST_CASE("feasible probability and approximation ratio") {
    std::vector<IterationRecord> recs(5);
    recs[0].raw_feasible = recs[2].raw_feasible = recs[4].raw_feasible = true;
    CHECK(feasible_probability(recs) == doctest::Approx(0.6));
    CHECK(approximation_ratio(4.0, 4.0) == 1.0);
    CHECK(approximation_ratio(5.0, 4.0) == 1.25);
    CHECK_THROWS_AS(approximation_ratio(1.0, 0.0), Error);
    CHECK_THROWS_AS(feasible_probability(std::vector<IterationRecord>{}), Error);
}

TEST_CASE("local optimum ratio") {
    const auto inst = generate_instance(6, 0);
    const ConstantScheme constant(6);
    for (auto mode : {LocalNeighborhood::kFeasible, LocalNeighborhood::kRepaired}) {
        const auto r = local_optimum_ratio(constant, inst, 0, mode);
        CHECK(r.ratio == 1.0);
        CHECK(r.n_local == r.n_all);
    }
    const LogEncoding log(8);
    const auto inst8 = generate_instance(8, 0);
    const auto f = local_optimum_ratio(log, inst8, 0, LocalNeighborhood::kFeasible);
    const auto rep = local_optimum_ratio(log, inst8, 0, LocalNeighborhood::kRepaired);
    CHECK(f.n_all == 5040);
    CHECK(f.ratio == doctest::Approx(static_cast<double>(f.n_local) / 5040.0));
    // Removing neighbors can only keep or create local optima.
    CHECK(f.n_local >= rep.n_local);
    CHECK(f.ratio > 0.0);
    CHECK(f.ratio < 1.0);
    for (auto mode : {LocalNeighborhood::kFeasible, LocalNeighborhood::kRepaired})
        CHECK(local_neighborhood_from_string(to_string(mode)) == mode);
    CHECK_THROWS_AS(local_neighborhood_from_string("all"), Error);
}

TEST_CASE("neighborhood characteristic") {
    const GrayEncoding gray(8);
    const std::vector<int> ms{1, 2, 3};
    const auto a = neighborhood_characteristic(gray, ms, 50, 4, 1);
    REQUIRE(a.size() == 3);
    for (std::size_t i = 0; i < 3; ++i) {
        CHECK(a[i].m == ms[i]);
        CHECK(a[i].n_total == 200);
        CHECK(a[i].n_feasible <= a[i].n_total);
    }
    const std::vector<int> reversed{3, 2, 1};
    const auto b = neighborhood_characteristic(gray, reversed, 50, 4, 1);
    for (std::size_t i = 0; i < 3; ++i) {
        CHECK(b[2 - i].m == a[i].m);
        CHECK(b[2 - i].mean_edge_distance == doctest::Approx(a[i].mean_edge_distance));
    }
    const std::vector<NeighborhoodPoint> line{{1, 0.2, 1, 1}, {2, 0.4, 1, 1}, {3, 0.6, 1, 1}};
    CHECK(neighborhood_slope(line) == doctest::Approx(0.2));
}

TEST_CASE("report serialization omits absent metrics") {
    MetricReport r;
    r.scheme = "log";
    r.rho = 0.25;
    r.n_pairs = 10;
    const std::vector<MetricReport> reports{r};
    const auto csv = metric_reports_csv(reports);
    CHECK(csv.find("rho") != std::string::npos);
    CHECK(csv.find("r_local") == std::string::npos);
    CHECK(metric_reports_json(reports).find("\"log\"") != std::string::npos);
}
