// Copyright 2025 The gsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace gsim {

/// Minimal CSV emitter; doubles use %.17g so outputs round-trip exactly.
class CsvWriter {
  public:
    CsvWriter(const std::filesystem::path& path,
              const std::vector<std::string>& columns);
    CsvWriter& field(const std::string& v);
    CsvWriter& field(double v);
    CsvWriter& field(std::int64_t v);
    CsvWriter& field(int v) { return field(static_cast<std::int64_t>(v)); }
    void end_row();

  private:
    std::ofstream out_;
    std::size_t columns_;
    std::size_t in_row_ = 0;
};

/// FNV-1a over a string, hex-encoded; used for config hashes in manifests.
std::string fnv1a_hex(const std::string& text);

/// Deterministic RNG with portable distributions (Box-Muller normals and
/// 53-bit uniforms; std:: distributions are implementation-defined).
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}
    double uniform();                     // [0, 1)
    double uniform(double lo, double hi);
    double normal();                      // standard normal
    std::uint64_t integer(std::uint64_t bound);  // [0, bound)
    std::uint64_t raw() { return gen_(); }
    /// Uniform direction on the unit sphere in R^dim (a Haar-orthogonal
    /// matrix column has exactly this distribution).
    Eigen::VectorXd unit_vector(int dim);

  private:
    std::mt19937_64 gen_;
    bool have_spare_ = false;
    double spare_ = 0;
};

/// Wall-clock stopwatch in seconds.
class Stopwatch {
  public:
    Stopwatch();
    double seconds() const;

  private:
    std::chrono::steady_clock::time_point start_;
};

}  // namespace gsim
