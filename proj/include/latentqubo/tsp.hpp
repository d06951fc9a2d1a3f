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

#include <array>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace lq {

// Enumeration-based operations refuse instances above this size.
inline constexpr int kMaxEnumerableCities = 10;

std::uint64_t factorial(int n);

// A permutation of the cities 1..L. Construction validates the permutation
// property; canonical form (city 1 first) is a separate, checkable property.
class Tour {
 public:
    Tour() = default;
    explicit Tour(std::vector<int> order);

    int size() const noexcept { return static_cast<int>(order_.size()); }
    int operator[](int pos) const { return order_[static_cast<std::size_t>(pos)]; }
    std::span<const int> order() const noexcept { return order_; }
    bool is_canonical() const noexcept { return !order_.empty() && order_.front() == 1; }
    std::string to_string() const;

    friend bool operator==(const Tour&, const Tour&) = default;
    friend auto operator<=>(const Tour&, const Tour&) = default;

 private:
    std::vector<int> order_;
};

struct TourHash {
    std::size_t operator()(const Tour& t) const noexcept;
};

bool is_permutation_of_cities(std::span<const int> seq);

// City coordinates in the unit square plus the dense Euclidean distance matrix.
// Cities are 1-indexed in the public API; distance() takes city labels.
class TspInstance {
 public:
    TspInstance(std::vector<std::array<double, 2>> coords, std::uint64_t seed);

    int n_cities() const noexcept { return static_cast<int>(coords_.size()); }
    std::uint64_t seed() const noexcept { return seed_; }
    const std::vector<std::array<double, 2>>& coords() const noexcept { return coords_; }
    double distance(int city_a, int city_b) const {
        return dist_[static_cast<std::size_t>((city_a - 1) * n_cities() + (city_b - 1))];
    }

 private:
    std::vector<std::array<double, 2>> coords_;
    std::vector<double> dist_;
    std::uint64_t seed_;
};

TspInstance generate_instance(int n_cities, std::uint64_t seed);

double tour_length(const TspInstance& inst, const Tour& tour);

// All (L-1)! canonical tours in lexicographic order of the suffix.
std::vector<Tour> enumerate_tours(int n_cities);

// Visits canonical tours in lexicographic order without materializing them.
void for_each_tour(int n_cities, const std::function<void(const Tour&)>& visit);

struct Optimum {
    Tour tour;
    double length;
};

Optimum exact_optimum(const TspInstance& inst);

Tour canonicalize(std::span<const int> seq);
inline Tour canonicalize(const Tour& t) { return canonicalize(t.order()); }
Tour reversed(const Tour& t);

double edge_distance(const Tour& a, const Tour& b);

// Positions are 1-based, 1 <= i < j <= L. Results are re-canonicalized.
Tour two_opt(const Tour& t, int i, int j);
Tour city_swap(const Tour& t, int i, int j);

std::string instance_to_json(const TspInstance& inst);
TspInstance instance_from_json(const std::string& text);
void save_instance(const TspInstance& inst, const std::string& path);
TspInstance load_instance(const std::string& path);

std::string tour_to_json(const Tour& t);
Tour tour_from_json(const std::string& text);

}  // namespace lq
