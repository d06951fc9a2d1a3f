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

#include "latentqubo/bitvector.hpp"

#include "latentqubo/error.hpp"

namespace lq {

BitVector::BitVector(std::size_t width) : bits_(width, 0) {
    require(width > 0, ErrorCode::kInvalidArgument, "bit vector width must be positive");
}

BitVector::BitVector(std::vector<std::uint8_t> bits) : bits_(std::move(bits)) {
    require(!bits_.empty(), ErrorCode::kInvalidArgument, "bit vector width must be positive");
    for (auto& b : bits_) {
        require(b <= 1, ErrorCode::kInvalidArgument, "bit values must be 0 or 1");
    }
}

BitVector BitVector::from_integer(std::uint64_t value, std::size_t width) {
    require(width > 0 && width <= 64, ErrorCode::kInvalidArgument, "integer bit width must be in [1, 64]");
    require(width == 64 || value < (std::uint64_t{1} << width), ErrorCode::kOutOfRange,
            "value does not fit in " + std::to_string(width) + " bits");
    BitVector out(width);
    for (std::size_t i = 0; i < width; ++i) {
        out.bits_[width - 1 - i] = static_cast<std::uint8_t>((value >> i) & 1U);
    }
    return out;
}

BitVector BitVector::from_string(std::string_view s) {
    std::vector<std::uint8_t> bits;
    bits.reserve(s.size());
    for (char c : s) {
        require(c == '0' || c == '1', ErrorCode::kFormat, "bit string may contain only '0' and '1'");
        bits.push_back(static_cast<std::uint8_t>(c - '0'));
    }
    return BitVector(std::move(bits));
}

std::uint64_t BitVector::to_integer() const {
    require(width() <= 64, ErrorCode::kSizeLimit, "bit vector wider than 64 bits");
    std::uint64_t v = 0;
    for (auto b : bits_) v = (v << 1) | b;
    return v;
}

std::string BitVector::to_string() const {
    std::string s(bits_.size(), '0');
    for (std::size_t i = 0; i < bits_.size(); ++i) s[i] = bits_[i] ? '1' : '0';
    return s;
}

std::size_t hamming_distance(const BitVector& a, const BitVector& b) {
    require(a.width() == b.width(), ErrorCode::kDimensionMismatch, "hamming distance of unequal widths");
    std::size_t d = 0;
    for (std::size_t i = 0; i < a.width(); ++i) d += (a[i] != b[i]);
    return d;
}

}  // namespace lq
