//
// Copyright 2026 The dppo Authors.
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
//

#ifndef DPPO_MECHANISMS_RNG_H_
#define DPPO_MECHANISMS_RNG_H_

#include <cstdint>
#include <limits>
#include <random>

#include <Eigen/Dense>

namespace dppo {

// Seedable counter-based 64-bit generator. Output i is a SplitMix64-style
// bijective mix of (key + i * golden gamma), so a run is fully determined by
// its seed. Satisfies UniformRandomBitGenerator.
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed) : key_(Mix(seed ^ 0x6a09e667f3bcc909ULL)) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() {
    return std::numeric_limits<result_type>::max();
  }

  result_type operator()() {
    ++counter_;
    return Mix(key_ + counter_ * 0x9e3779b97f4a7c15ULL);
  }

  // Uniform on [0, 1) with 53 random bits.
  double Uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

  // Uniform on (0, 1).
  double OpenUniform() {
    return (static_cast<double>((*this)() >> 11) + 0.5) * 0x1.0p-53;
  }

  double Normal() { return normal_(*this); }

  // Draws an index from a probability vector (entries need not be exactly
  // normalized; the final index absorbs rounding).
  int Categorical(const Eigen::VectorXd& probabilities) {
    const double u = Uniform() * probabilities.sum();
    double acc = 0.0;
    const int n = static_cast<int>(probabilities.size());
    for (int i = 0; i < n; ++i) {
      acc += probabilities(i);
      if (u < acc) return i;
    }
    for (int i = n - 1; i >= 0; --i) {
      if (probabilities(i) > 0.0) return i;
    }
    return n - 1;
  }

  std::uint64_t draws() const { return counter_; }

 private:
  static std::uint64_t Mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::uint64_t key_;
  std::uint64_t counter_ = 0;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace dppo

#endif  // DPPO_MECHANISMS_RNG_H_
