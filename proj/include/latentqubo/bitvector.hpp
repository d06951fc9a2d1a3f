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

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace lq {

// Fixed-width binary string. Index 0 is the most significant bit whenever the
// vector is read as an integer or printed.
class BitVector {
 public:
    BitVector() = default;
    explicit BitVector(std::size_t width);
    explicit BitVector(std::vector<std::uint8_t> bits);

    static BitVector from_integer(std::uint64_t value, std::size_t width);
    static BitVector from_string(std::string_view s);

    std::size_t width() const noexcept { return bits_.size(); }
    bool operator[](std::size_t i) const { return bits_[i] != 0; }
    void set(std::size_t i, bool v) { bits_.at(i) = v ? 1 : 0; }
    void flip(std::size_t i) { bits_.at(i) ^= 1; }

    // Big-endian integer value; width must be <= 64.
    std::uint64_t to_integer() const;
    std::string to_string() const;

    std::span<const std::uint8_t> bits() const noexcept { return bits_; }

    friend bool operator==(const BitVector&, const BitVector&) = default;
    friend auto operator<=>(const BitVector&, const BitVector&) = default;

 private:
    std::vector<std::uint8_t> bits_;
};

std::size_t hamming_distance(const BitVector& a, const BitVector& b);

}  // namespace lq
