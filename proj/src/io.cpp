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

#include "gsim/io.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>

#include "gsim/errors.hpp"

namespace gsim {

CsvWriter::CsvWriter(const std::filesystem::path& path,
                     const std::vector<std::string>& columns)
    : columns_(columns.size()) {
    std::filesystem::create_directories(path.parent_path());
    out_.open(path);
    if (!out_) throw ConfigError("cannot open output file: " + path.string());
    for (std::size_t i = 0; i < columns.size(); ++i) {
        if (i) out_ << ',';
        out_ << columns[i];
    }
    out_ << '\n';
}

CsvWriter& CsvWriter::field(const std::string& v) {
    if (in_row_) out_ << ',';
    out_ << v;
    ++in_row_;
    return *this;
}

CsvWriter& CsvWriter::field(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return field(std::string(buf));
}

CsvWriter& CsvWriter::field(std::int64_t v) { return field(std::to_string(v)); }

void CsvWriter::end_row() {
    if (in_row_ != columns_) throw ConfigError("CSV row width mismatch");
    out_ << '\n';
    in_row_ = 0;
}

std::string fnv1a_hex(const std::string& text) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx",
                  static_cast<unsigned long long>(h));
    return buf;
}

double Rng::uniform() { return (gen_() >> 11) * 0x1.0p-53; }

double Rng::uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

double Rng::normal() {
    if (have_spare_) {
        have_spare_ = false;
        return spare_;
    }
    double u1 = 0;
    do {
        u1 = uniform();
    } while (u1 <= 0);
    double u2 = uniform();
    double r = std::sqrt(-2.0 * std::log(u1));
    double a = 2.0 * M_PI * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
}

std::uint64_t Rng::integer(std::uint64_t bound) {
    // Rejection sampling for an unbiased draw.
    std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                          std::numeric_limits<std::uint64_t>::max() % bound;
    std::uint64_t v;
    do {
        v = gen_();
    } while (v >= limit);
    return v % bound;
}

Eigen::VectorXd Rng::unit_vector(int dim) {
    Eigen::VectorXd v(dim);
    double norm2 = 0;
    do {
        for (int i = 0; i < dim; ++i) v[i] = normal();
        norm2 = v.squaredNorm();
    } while (norm2 == 0);
    return v / std::sqrt(norm2);
}

Stopwatch::Stopwatch() : start_(std::chrono::steady_clock::now()) {}

double Stopwatch::seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                         start_)
        .count();
}

}  // namespace gsim
