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

#include "gsim/states.hpp"

#include <bit>
#include <cmath>
#include <complex>
#include <unordered_map>

#include "gsim/errors.hpp"

namespace gsim {

namespace {

constexpr int kMaxBlockQubits = 12;
constexpr double kNormTolerance = 1e-12;

void check_normalized(const Eigen::VectorXcd& amps) {
    if (std::abs(amps.squaredNorm() - 1.0) > kNormTolerance) {
        throw SizeError("state block amplitudes are not normalized");
    }
}

}  // namespace

StateSpec StateSpec::computational(std::string_view bits) {
    StateSpec s;
    s.n_ = static_cast<int>(bits.size());
    for (char c : bits) {
        if (c != '0' && c != '1') throw SizeError("bitstring must be 0/1");
        Eigen::VectorXcd amps = Eigen::VectorXcd::Zero(2);
        amps[c == '1' ? 1 : 0] = 1.0;
        s.blocks_.push_back({1, std::move(amps)});
    }
    return s;
}

StateSpec StateSpec::product(const std::vector<Eigen::Vector2cd>& kets) {
    StateSpec s;
    s.n_ = static_cast<int>(kets.size());
    for (const auto& k : kets) {
        Eigen::VectorXcd amps = k;
        check_normalized(amps);
        s.blocks_.push_back({1, std::move(amps)});
    }
    return s;
}

StateSpec StateSpec::block_product(int block_size, Eigen::VectorXcd amps,
                                   int repetitions) {
    if (block_size < 1 || block_size > kMaxBlockQubits) {
        throw ResourceLimitError("block size must be in [1, 12]");
    }
    if (amps.size() != (Eigen::Index{1} << block_size)) {
        throw SizeError("block amplitude vector has wrong length");
    }
    check_normalized(amps);
    StateSpec s;
    s.n_ = block_size * repetitions;
    for (int r = 0; r < repetitions; ++r) s.blocks_.push_back({block_size, amps});
    return s;
}

StateSpec StateSpec::plus_all(int n) {
    StateSpec s;
    s.n_ = n;
    Eigen::VectorXcd amps(2);
    amps << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
    for (int j = 0; j < n; ++j) s.blocks_.push_back({1, amps});
    return s;
}

StateSpec StateSpec::magic(int n, double tau) {
    if (n % 4 != 0) throw SizeError("magic state needs n divisible by 4");
    Eigen::VectorXcd amps = Eigen::VectorXcd::Zero(16);
    amps[0b0000] = 0.5;
    amps[0b0011] = 0.5;
    amps[0b1100] = 0.5;
    amps[0b1111] = 0.5 * std::exp(std::complex<double>(0, tau));
    return block_product(4, std::move(amps), n / 4);
}

namespace {

// <psi| P |psi> on one block; P given by its block-local masks. Real for any
// Hermitian Pauli factor.
double block_expectation(const StateSpec::Block& block, std::uint64_t x,
                         std::uint64_t z) {
    const auto& a = block.amps;
    const int y_count = std::popcount(x & z);
    static constexpr std::complex<double> kIPow[4] = {
        {1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    std::complex<double> mu = kIPow[y_count & 3];
    std::complex<double> acc = 0;
    const std::uint64_t dim = std::uint64_t{1} << block.size;
    for (std::uint64_t i = 0; i < dim; ++i) {
        // P|i> = mu * (-1)^{popcount(z & i)} |i ^ x>
        double sgn = (std::popcount(z & i) & 1) ? -1.0 : 1.0;
        acc += std::conj(a[static_cast<Eigen::Index>(i ^ x)]) * mu * sgn *
               a[static_cast<Eigen::Index>(i)];
    }
    return acc.real();
}

// Extracts the block-local (x, z) masks of p for qubits [start, start+size).
// Block-local bit b corresponds to global qubit start+b... inverted to the
// ket convention: qubit j within the block maps to index bit (size-1-j).
void local_masks(const PauliString& p, int start, int size, std::uint64_t& x,
                 std::uint64_t& z) {
    x = z = 0;
    for (int j = 0; j < size; ++j) {
        int g = start + j;
        std::uint64_t bit = std::uint64_t{1} << (size - 1 - j);
        if (p.x_bit(g)) x |= bit;
        if (p.z_bit(g)) z |= bit;
    }
}

struct BlockCache {
    // Keyed by (block index in the repetition-deduped list, x, z).
    std::unordered_map<std::uint64_t, double> values;
};

}  // namespace

double pauli_expectation(const StateSpec& spec, const PauliString& p) {
    if (p.num_qubits() != spec.num_qubits())
        throw SizeError("Pauli size does not match state");
    double prod = 1.0;
    int start = 0;
    for (const auto& block : spec.blocks()) {
        std::uint64_t x, z;
        local_masks(p, start, block.size, x, z);
        start += block.size;
        if (x == 0 && z == 0) continue;  // identity factor
        prod *= block_expectation(block, x, z);
        if (prod == 0.0) return 0.0;
    }
    return prod;
}

namespace {

// Shared evaluation core with a per-(amps,x,z) cache; repeated identical
// blocks (the n=200 magic state) hit the cache.
class CachedEvaluator {
  public:
    explicit CachedEvaluator(const StateSpec& spec) : spec_(spec) {
        starts_.reserve(spec.blocks().size());
        int start = 0;
        std::vector<int> distinct;  // block indices owning a cache slot
        for (const auto& b : spec.blocks()) {
            int bi = static_cast<int>(starts_.size());
            starts_.push_back(start);
            start += b.size;
            // Identical blocks (repeated magic-state blocks) share a slot.
            int slot = -1;
            for (int di : distinct) {
                const auto& d = spec.blocks()[di];
                if (d.size == b.size && d.amps == b.amps) {
                    slot = cache_slot_[di];
                    break;
                }
            }
            if (slot < 0) {
                slot = static_cast<int>(caches_.size());
                caches_.emplace_back();
                distinct.push_back(bi);
            }
            cache_slot_.push_back(slot);
        }
    }

    double evaluate(const PauliString& p) {
        double prod = 1.0;
        for (std::size_t bi = 0; bi < spec_.blocks().size(); ++bi) {
            const auto& block = spec_.blocks()[bi];
            std::uint64_t x, z;
            local_masks(p, starts_[bi], block.size, x, z);
            if (x == 0 && z == 0) continue;
            auto& cache = caches_[cache_slot_[bi]].values;
            std::uint64_t key = (x << 16) | z;  // block size <= 12
            auto it = cache.find(key);
            double v;
            if (it != cache.end()) {
                v = it->second;
            } else {
                v = block_expectation(block, x, z);
                cache.emplace(key, v);
            }
            prod *= v;
            if (prod == 0.0) return 0.0;
        }
        return prod;
    }

  private:
    const StateSpec& spec_;
    std::vector<int> starts_;
    std::vector<int> cache_slot_;
    std::vector<BlockCache> caches_;
};

}  // namespace

ExpectationVector expectation_vector(const StateSpec& spec, BasisPtr basis) {
    if (spec.num_qubits() != basis->num_qubits())
        throw SizeError("state and basis qubit counts differ");
    CachedEvaluator eval(spec);
    Eigen::VectorXd e(basis->dim());
    for (int a = 0; a < basis->dim(); ++a) e[a] = eval.evaluate(basis->element(a));
    return {std::move(basis), std::move(e)};
}

CorrelationMatrix correlation_matrix(const StateSpec& spec, BasisPtr basis1,
                                     BasisPtr basis2) {
    if (spec.num_qubits() != basis1->num_qubits() ||
        spec.num_qubits() != basis2->num_qubits()) {
        throw SizeError("state and basis qubit counts differ");
    }
    CachedEvaluator eval(spec);
    Eigen::MatrixXd e(basis1->dim(), basis2->dim());
    for (int a = 0; a < basis1->dim(); ++a) {
        for (int b = 0; b < basis2->dim(); ++b) {
            PhasedPauli prod = multiply(basis1->element(a), basis2->element(b));
            // B_a B_b = i^k R with R Hermitian: Re Tr = 0 for odd k.
            if (prod.phase_pow & 1) {
                e(a, b) = 0.0;
            } else {
                double sign = prod.phase_pow == 0 ? 1.0 : -1.0;
                e(a, b) = sign * eval.evaluate(prod.string);
            }
        }
    }
    return {std::move(basis1), std::move(basis2), std::move(e)};
}

}  // namespace gsim
