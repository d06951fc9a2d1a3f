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

#include "latentqubo/tsp.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>

#include <nlohmann/json.hpp>

#include "latentqubo/error.hpp"
#include "latentqubo/rng.hpp"

namespace lq {

std::uint64_t factorial(int n) {
    require(n >= 0 && n <= 20, ErrorCode::kOutOfRange, "factorial argument out of range");
    std::uint64_t f = 1;
    for (int i = 2; i <= n; ++i) f *= static_cast<std::uint64_t>(i);
    return f;
}

bool is_permutation_of_cities(std::span<const int> seq) {
    const int n = static_cast<int>(seq.size());
    if (n == 0) return false;
    std::vector<char> seen(static_cast<std::size_t>(n) + 1, 0);
    for (int c : seq) {
        if (c < 1 || c > n || seen[static_cast<std::size_t>(c)]) return false;
        seen[static_cast<std::size_t>(c)] = 1;
    }
    return true;
}

Tour::Tour(std::vector<int> order) : order_(std::move(order)) {
    require(is_permutation_of_cities(order_), ErrorCode::kInvalidTour,
            "tour is not a permutation of 1..L: " + to_string());
}

std::string Tour::to_string() const {
    std::string s = "(";
    for (std::size_t i = 0; i < order_.size(); ++i) {
        if (i) s += ",";
        s += std::to_string(order_[i]);
    }
    return s + ")";
}

std::size_t TourHash::operator()(const Tour& t) const noexcept {
    std::size_t h = 1469598103934665603ULL;
    for (int c : t.order()) h = (h ^ static_cast<std::size_t>(c)) * 1099511628211ULL;
    return h;
}

TspInstance::TspInstance(std::vector<std::array<double, 2>> coords, std::uint64_t seed)
    : coords_(std::move(coords)), seed_(seed) {
    const int n = n_cities();
    require(n >= 3, ErrorCode::kInvalidArgument, "an instance needs at least 3 cities");
    for (const auto& c : coords_) {
        require(std::isfinite(c[0]) && std::isfinite(c[1]), ErrorCode::kInvalidArgument, "non-finite coordinate");
    }
    dist_.assign(static_cast<std::size_t>(n * n), 0.0);
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            const double d = std::hypot(coords_[i][0] - coords_[j][0], coords_[i][1] - coords_[j][1]);
            dist_[static_cast<std::size_t>(i * n + j)] = d;
            dist_[static_cast<std::size_t>(j * n + i)] = d;
        }
    }
}

TspInstance generate_instance(int n_cities, std::uint64_t seed) {
    require(n_cities >= 3, ErrorCode::kInvalidArgument, "number of cities must be at least 3");
    Rng rng = make_rng(seed);
    std::vector<std::array<double, 2>> coords(static_cast<std::size_t>(n_cities));
    for (auto& c : coords) {
        c[0] = uniform01(rng);
        c[1] = uniform01(rng);
    }
    return TspInstance(std::move(coords), seed);
}

double tour_length(const TspInstance& inst, const Tour& tour) {
    const int n = tour.size();
    require(n == inst.n_cities(), ErrorCode::kDimensionMismatch,
            "tour has " + std::to_string(n) + " cities, instance has " + std::to_string(inst.n_cities()));
    double len = 0.0;
    for (int t = 0; t < n; ++t) len += inst.distance(tour[t], tour[(t + 1) % n]);
    return len;
}

void for_each_tour(int n_cities, const std::function<void(const Tour&)>& visit) {
    require(n_cities >= 1, ErrorCode::kInvalidArgument, "number of cities must be positive");
    require(n_cities <= kMaxEnumerableCities, ErrorCode::kSizeLimit,
            "enumeration limited to " + std::to_string(kMaxEnumerableCities) + " cities");
    std::vector<int> order(static_cast<std::size_t>(n_cities));
    std::iota(order.begin(), order.end(), 1);
    do {
        visit(Tour(order));
    } while (std::next_permutation(order.begin() + 1, order.end()));
}

std::vector<Tour> enumerate_tours(int n_cities) {
    std::vector<Tour> tours;
    if (n_cities >= 1 && n_cities <= kMaxEnumerableCities) tours.reserve(factorial(n_cities - 1));
    for_each_tour(n_cities, [&](const Tour& t) { tours.push_back(t); });
    return tours;
}

Optimum exact_optimum(const TspInstance& inst) {
    Optimum best{Tour{}, std::numeric_limits<double>::infinity()};
    for_each_tour(inst.n_cities(), [&](const Tour& t) {
        const double len = tour_length(inst, t);
        if (len < best.length) best = {t, len};
    });
    return best;
}

Tour canonicalize(std::span<const int> seq) {
    require(is_permutation_of_cities(seq), ErrorCode::kInvalidTour, "cannot canonicalize a non-permutation");
    const auto start = std::find(seq.begin(), seq.end(), 1);
    std::vector<int> out(seq.size());
    std::rotate_copy(seq.begin(), start, seq.end(), out.begin());
    return Tour(std::move(out));
}

Tour reversed(const Tour& t) {
    std::vector<int> r(t.order().rbegin(), t.order().rend());
    return canonicalize(r);
}

namespace {

std::vector<std::pair<int, int>> edge_list(const Tour& t) {
    const int n = t.size();
    std::vector<std::pair<int, int>> edges;
    edges.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        const int a = t[i], b = t[(i + 1) % n];
        edges.emplace_back(std::min(a, b), std::max(a, b));
    }
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    return edges;
}

void check_move(const Tour& t, int i, int j) {
    require(1 <= i && i < j && j <= t.size(), ErrorCode::kOutOfRange,
            "move positions must satisfy 1 <= i < j <= L, got i=" + std::to_string(i) + " j=" + std::to_string(j));
}

}  // namespace

double edge_distance(const Tour& a, const Tour& b) {
    require(a.size() == b.size(), ErrorCode::kDimensionMismatch, "edge distance of tours with different sizes");
    const auto ea = edge_list(a), eb = edge_list(b);
    std::vector<std::pair<int, int>> common;
    std::set_intersection(ea.begin(), ea.end(), eb.begin(), eb.end(), std::back_inserter(common));
    return 1.0 - static_cast<double>(common.size()) / static_cast<double>(a.size());
}

Tour two_opt(const Tour& t, int i, int j) {
    check_move(t, i, j);
    std::vector<int> o(t.order().begin(), t.order().end());
    std::reverse(o.begin() + (i - 1), o.begin() + j);
    return canonicalize(o);
}

Tour city_swap(const Tour& t, int i, int j) {
    check_move(t, i, j);
    std::vector<int> o(t.order().begin(), t.order().end());
    std::swap(o[static_cast<std::size_t>(i - 1)], o[static_cast<std::size_t>(j - 1)]);
    return canonicalize(o);
}

std::string instance_to_json(const TspInstance& inst) {
    nlohmann::ordered_json j;
    j["n_cities"] = inst.n_cities();
    j["seed"] = inst.seed();
    j["coords"] = nlohmann::ordered_json::array();
    for (const auto& c : inst.coords()) j["coords"].push_back({c[0], c[1]});
    return j.dump(2) + "\n";
}

TspInstance instance_from_json(const std::string& text) {
    try {
        const auto j = nlohmann::json::parse(text);
        const int n = j.at("n_cities").get<int>();
        std::vector<std::array<double, 2>> coords;
        for (const auto& c : j.at("coords")) {
            require(c.size() == 2, ErrorCode::kFormat, "each coordinate must be an [x, y] pair");
            coords.push_back({c[0].get<double>(), c[1].get<double>()});
        }
        require(static_cast<int>(coords.size()) == n, ErrorCode::kFormat, "n_cities does not match coords length");
        return TspInstance(std::move(coords), j.at("seed").get<std::uint64_t>());
    } catch (const nlohmann::json::exception& e) {
        fail(ErrorCode::kFormat, std::string("malformed instance file: ") + e.what());
    }
}

void save_instance(const TspInstance& inst, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    require(static_cast<bool>(out), ErrorCode::kIo, "cannot open " + path + " for writing");
    out << instance_to_json(inst);
}

TspInstance load_instance(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    require(static_cast<bool>(in), ErrorCode::kIo, "cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return instance_from_json(ss.str());
}

std::string tour_to_json(const Tour& t) { return nlohmann::json(std::vector<int>(t.order().begin(), t.order().end())).dump(); }

Tour tour_from_json(const std::string& text) {
    try {
        return Tour(nlohmann::json::parse(text).get<std::vector<int>>());
    } catch (const nlohmann::json::exception& e) {
        fail(ErrorCode::kFormat, std::string("malformed tour: ") + e.what());
    }
}

}  // namespace lq
