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

#include "latentqubo/encodings.hpp"

#include <algorithm>
#include <bit>
#include <fstream>
#include <numeric>
#include <sstream>
#include <unordered_set>

#include <nlohmann/json.hpp>

#include "latentqubo/error.hpp"

namespace lq {

std::vector<BitVector> EncodingScheme::encode_batch(std::span<const Tour> tours) const {
    std::vector<BitVector> out;
    out.reserve(tours.size());
    for (const auto& t : tours) out.push_back(encode(t));
    return out;
}

std::vector<DecodeResult> EncodingScheme::decode_batch(std::span<const BitVector> codes, Rng& rng) const {
    std::vector<DecodeResult> out;
    out.reserve(codes.size());
    for (const auto& z : codes) out.push_back(decode(z, rng));
    return out;
}

std::size_t rank_bits(int n_cities) {
    require(n_cities >= 3 && n_cities <= 21, ErrorCode::kOutOfRange, "rank encodings support 3..21 cities");
    const std::uint64_t n = factorial(n_cities - 1);
    return static_cast<std::size_t>(std::bit_width(n - 1));
}

std::uint64_t lehmer_rank(const Tour& tour) {
    require(tour.is_canonical(), ErrorCode::kInvalidTour, "lehmer_rank needs a canonical tour, got " + tour.to_string());
    const int n = tour.size();
    require(n <= 21, ErrorCode::kSizeLimit, "rank overflows 64 bits beyond 21 cities");
    std::uint64_t rank = 0;
    // Suffix positions 1..n-1 hold a permutation of {2..n}.
    for (int k = 1; k < n; ++k) {
        std::uint64_t smaller_right = 0;
        for (int m = k + 1; m < n; ++m) smaller_right += (tour[m] < tour[k]);
        rank += smaller_right * factorial(n - 1 - k);
    }
    return rank;
}

Tour lehmer_unrank(std::uint64_t rank, int n_cities) {
    require(n_cities >= 2 && n_cities <= 21, ErrorCode::kOutOfRange, "unrank supports 2..21 cities");
    const std::uint64_t total = factorial(n_cities - 1);
    require(rank < total, ErrorCode::kOutOfRange,
            "rank " + std::to_string(rank) + " outside [0, " + std::to_string(total) + ")");
    std::vector<int> pool(static_cast<std::size_t>(n_cities - 1));
    std::iota(pool.begin(), pool.end(), 2);
    std::vector<int> order{1};
    for (int k = n_cities - 2; k >= 0; --k) {
        const std::uint64_t f = factorial(k);
        const auto idx = static_cast<std::size_t>(rank / f);
        rank %= f;
        order.push_back(pool[idx]);
        pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(idx));
    }
    return Tour(std::move(order));
}

std::uint64_t inverse_gray_code(std::uint64_t g) {
    for (std::uint64_t shift = g >> 1; shift != 0; shift >>= 1) g ^= shift;
    return g;
}

namespace {

void check_width(const BitVector& bits, std::size_t width) {
    require(bits.width() == width, ErrorCode::kDimensionMismatch,
            "expected " + std::to_string(width) + " bits, got " + std::to_string(bits.width()));
}

DecodeResult decode_wrapped_rank(std::uint64_t r, int n_cities) {
    const std::uint64_t total = factorial(n_cities - 1);
    DecodeResult res;
    res.raw_feasible = r < total;
    res.repaired = !res.raw_feasible;
    res.tour = lehmer_unrank(r % total, n_cities);
    return res;
}

}  // namespace

LogEncoding::LogEncoding(int n_cities) : n_cities_(n_cities), width_(rank_bits(n_cities)) {}

BitVector LogEncoding::encode(const Tour& tour) const {
    require(tour.size() == n_cities_, ErrorCode::kDimensionMismatch, "tour size does not match encoding");
    return BitVector::from_integer(lehmer_rank(tour), width_);
}

DecodeResult LogEncoding::decode(const BitVector& bits, Rng&) const {
    check_width(bits, width_);
    return decode_wrapped_rank(bits.to_integer(), n_cities_);
}

GrayEncoding::GrayEncoding(int n_cities) : n_cities_(n_cities), width_(rank_bits(n_cities)) {}

BitVector GrayEncoding::encode(const Tour& tour) const {
    require(tour.size() == n_cities_, ErrorCode::kDimensionMismatch, "tour size does not match encoding");
    return BitVector::from_integer(gray_code(lehmer_rank(tour)), width_);
}

DecodeResult GrayEncoding::decode(const BitVector& bits, Rng&) const {
    check_width(bits, width_);
    return decode_wrapped_rank(inverse_gray_code(bits.to_integer()), n_cities_);
}

std::uint64_t RandomLabelTable::label(const Tour& tour) const {
    require(tour.size() == n_cities, ErrorCode::kDimensionMismatch, "tour size does not match label table");
    return label_of_rank[lehmer_rank(tour)];
}

RandomLabelTable build_random_label_table(int n_cities, std::uint64_t seed) {
    require(n_cities >= 3 && n_cities <= kMaxEnumerableCities, ErrorCode::kSizeLimit,
            "random label tables need 3.." + std::to_string(kMaxEnumerableCities) + " cities");
    RandomLabelTable table;
    table.n_cities = n_cities;
    table.width = rank_bits(n_cities);
    table.seed = seed;
    const std::uint64_t n_tours = factorial(n_cities - 1);
    std::vector<std::uint64_t> labels(std::uint64_t{1} << table.width);
    std::iota(labels.begin(), labels.end(), std::uint64_t{0});
    Rng rng = make_rng(seed, 0x1abe1);
    std::shuffle(labels.begin(), labels.end(), rng);
    labels.resize(n_tours);
    table.label_of_rank = std::move(labels);
    table.rank_of_label.reserve(n_tours);
    for (std::uint64_t r = 0; r < n_tours; ++r) table.rank_of_label.emplace(table.label_of_rank[r], r);
    return table;
}

DecodeResult random_label_decode(const BitVector& bits, const RandomLabelTable& table, Rng& rng) {
    check_width(bits, table.width);
    const std::uint64_t label = bits.to_integer();
    DecodeResult res;
    if (auto it = table.rank_of_label.find(label); it != table.rank_of_label.end()) {
        res.tour = lehmer_unrank(it->second, table.n_cities);
        res.raw_feasible = true;
        return res;
    }
    int best = 65;
    std::vector<std::uint64_t> ties;
    for (std::uint64_t r = 0; r < table.label_of_rank.size(); ++r) {
        const int d = std::popcount(label ^ table.label_of_rank[r]);
        if (d < best) {
            best = d;
            ties.clear();
        }
        if (d == best) ties.push_back(r);
    }
    const auto pick = std::uniform_int_distribution<std::size_t>(0, ties.size() - 1)(rng);
    res.tour = lehmer_unrank(ties[pick], table.n_cities);
    res.repaired = true;
    return res;
}

std::string random_label_table_to_json(const RandomLabelTable& table) {
    nlohmann::ordered_json j;
    j["seed"] = table.seed;
    j["width"] = table.width;
    j["entries"] = nlohmann::ordered_json::array();
    for (std::uint64_t r = 0; r < table.label_of_rank.size(); ++r) {
        const Tour t = lehmer_unrank(r, table.n_cities);
        j["entries"].push_back({std::vector<int>(t.order().begin(), t.order().end()), table.label_of_rank[r]});
    }
    return j.dump() + "\n";
}

RandomLabelTable random_label_table_from_json(const std::string& text) {
    RandomLabelTable table;
    try {
        const auto j = nlohmann::json::parse(text);
        table.seed = j.at("seed").get<std::uint64_t>();
        table.width = j.at("width").get<std::size_t>();
        const auto& entries = j.at("entries");
        require(!entries.empty(), ErrorCode::kFormat, "label table has no entries");
        table.n_cities = static_cast<int>(entries.at(0).at(0).size());
        require(table.n_cities >= 3 && table.n_cities <= kMaxEnumerableCities, ErrorCode::kFormat,
                "label table city count out of range");
        require(table.width == rank_bits(table.n_cities), ErrorCode::kFormat, "label table width inconsistent");
        const std::uint64_t n_tours = factorial(table.n_cities - 1);
        require(entries.size() == n_tours, ErrorCode::kFormat, "label table must cover every canonical tour");
        table.label_of_rank.assign(n_tours, 0);
        std::vector<char> seen(n_tours, 0);
        for (const auto& e : entries) {
            const Tour t(e.at(0).get<std::vector<int>>());
            const auto label = e.at(1).get<std::uint64_t>();
            require(label < (std::uint64_t{1} << table.width), ErrorCode::kFormat, "label exceeds table width");
            const auto r = lehmer_rank(t);
            require(!seen[r], ErrorCode::kFormat, "duplicate tour in label table");
            seen[r] = 1;
            table.label_of_rank[r] = label;
            require(table.rank_of_label.emplace(label, r).second, ErrorCode::kFormat, "duplicate label in table");
        }
    } catch (const nlohmann::json::exception& e) {
        fail(ErrorCode::kFormat, std::string("malformed label table: ") + e.what());
    }
    return table;
}

void save_random_label_table(const RandomLabelTable& table, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    require(static_cast<bool>(out), ErrorCode::kIo, "cannot open " + path + " for writing");
    out << random_label_table_to_json(table);
}

RandomLabelTable load_random_label_table(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    require(static_cast<bool>(in), ErrorCode::kIo, "cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return random_label_table_from_json(ss.str());
}

RandomLabelEncoding::RandomLabelEncoding(RandomLabelTable table) : table_(std::move(table)) {
    require(table_.size() == factorial(table_.n_cities - 1), ErrorCode::kInvalidArgument, "incomplete label table");
}

BitVector RandomLabelEncoding::encode(const Tour& tour) const {
    return BitVector::from_integer(table_.label(tour), table_.width);
}

DecodeResult RandomLabelEncoding::decode(const BitVector& bits, Rng& rng) const {
    return random_label_decode(bits, table_, rng);
}

std::vector<Tour> sample_distinct_tours(int n_cities, std::size_t count, std::uint64_t seed) {
    require(n_cities >= 3, ErrorCode::kInvalidArgument, "need at least 3 cities");
    Rng rng = make_rng(seed, 0x70075);
    std::vector<Tour> out;
    out.reserve(count);
    if (n_cities <= kMaxEnumerableCities) {
        const std::uint64_t total = factorial(n_cities - 1);
        require(count <= total, ErrorCode::kInvalidArgument,
                "cannot draw " + std::to_string(count) + " distinct tours from " + std::to_string(total));
        std::vector<std::uint64_t> ranks(total);
        std::iota(ranks.begin(), ranks.end(), std::uint64_t{0});
        std::shuffle(ranks.begin(), ranks.end(), rng);
        for (std::size_t i = 0; i < count; ++i) out.push_back(lehmer_unrank(ranks[i], n_cities));
        return out;
    }
    std::unordered_set<Tour, TourHash> seen;
    std::vector<int> order(static_cast<std::size_t>(n_cities));
    while (out.size() < count) {
        std::iota(order.begin(), order.end(), 1);
        std::shuffle(order.begin() + 1, order.end(), rng);
        Tour t(order);
        if (seen.insert(t).second) out.push_back(std::move(t));
    }
    return out;
}

}  // namespace lq
