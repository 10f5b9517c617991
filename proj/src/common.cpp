// Copyright 2026 The Grover Noise Simulator Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "grover/common.hpp"

#include <algorithm>
#include <cmath>

namespace grover {

Bitstring::Bitstring(std::vector<std::uint8_t> bits) : bits_(std::move(bits)) {
    for (auto b : bits_) {
        if (b > 1) {
            throw DomainError("bitstring entries must be 0 or 1");
        }
    }
}

Bitstring Bitstring::parse(std::string_view text) {
    std::vector<std::uint8_t> bits;
    bits.reserve(text.size());
    for (char c : text) {
        if (c != '0' && c != '1') {
            throw DomainError("invalid bitstring '" + std::string(text) + "'");
        }
        bits.push_back(static_cast<std::uint8_t>(c - '0'));
    }
    return Bitstring(std::move(bits));
}

Bitstring Bitstring::all_ones(int n) { return Bitstring(std::vector<std::uint8_t>(static_cast<std::size_t>(n), 1)); }

Bitstring Bitstring::zeros(int n) { return Bitstring(std::vector<std::uint8_t>(static_cast<std::size_t>(n), 0)); }

int Bitstring::count_ones() const { return static_cast<int>(std::count(bits_.begin(), bits_.end(), 1)); }

std::uint64_t Bitstring::dense_index() const {
    if (bits_.size() > 63) {
        throw DomainError("bitstring too long for a dense index");
    }
    std::uint64_t index = 0;
    for (auto b : bits_) {
        index = (index << 1) | b;
    }
    return index;
}

std::string Bitstring::to_string() const {
    std::string out;
    out.reserve(bits_.size());
    for (auto b : bits_) {
        out.push_back(static_cast<char>('0' + b));
    }
    return out;
}

double entropy_bits(std::span<const double> probabilities) {
    double s = 0.0;
    for (double p : probabilities) {
        if (p > 0.0) {
            s -= p * std::log2(p);
        }
    }
    return s;
}

}  // namespace grover
