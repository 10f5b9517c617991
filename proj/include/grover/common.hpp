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

#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace grover {

using cplx = std::complex<double>;
using Mat2 = Eigen::Matrix2cd;
using Mat4 = Eigen::Matrix4cd;
using Vec2 = Eigen::Vector2cd;
using MatrixXc = Eigen::MatrixXcd;
using VectorXc = Eigen::VectorXcd;
using Index = Eigen::Index;

inline constexpr double kPi = 3.14159265358979323846;

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
   public:
    using Error::Error;
};

/// Malformed input object (non-unitary mixing matrix, bad policy, ...).
class ValidationError : public Error {
   public:
    using Error::Error;
};

/// A state violates its invariants (trace drift, lost normalization).
class StateError : public Error {
   public:
    using Error::Error;
};

/// Memory guard on dense representations.
class ResourceError : public Error {
   public:
    using Error::Error;
};

class NumericalError : public Error {
   public:
    using Error::Error;
};

/// Raised when a local operator annihilates the state.
class ImpossibleOutcome : public NumericalError {
   public:
    using NumericalError::NumericalError;
};

class FitError : public Error {
   public:
    using Error::Error;
};

/// Computational-basis label of an n-qubit register. Character 0 of the
/// textual form is qubit 0, which is also the most significant bit of the
/// dense basis index and the leftmost site of every matrix-product chain.
class Bitstring {
   public:
    Bitstring() = default;
    explicit Bitstring(std::vector<std::uint8_t> bits);

    /// Parses a string of '0' / '1' characters.
    static Bitstring parse(std::string_view text);
    static Bitstring all_ones(int n);
    static Bitstring zeros(int n);

    int size() const { return static_cast<int>(bits_.size()); }
    bool empty() const { return bits_.empty(); }
    int operator[](int qubit) const { return bits_[static_cast<std::size_t>(qubit)]; }
    int count_ones() const;
    std::uint64_t dense_index() const;
    std::string to_string() const;

    friend bool operator==(const Bitstring&, const Bitstring&) = default;

   private:
    std::vector<std::uint8_t> bits_;
};

/// Von Neumann entropy in bits of a probability vector; entries are clamped
/// at zero and 0 log 0 := 0.
double entropy_bits(std::span<const double> probabilities);

}  // namespace grover
