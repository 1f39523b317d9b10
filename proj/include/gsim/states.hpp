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

#include <Eigen/Dense>
#include <string_view>
#include <vector>

#include "gsim/algebra.hpp"

namespace gsim {

/// Product-of-blocks input state. All supported families (computational
/// basis states, single-qubit product states, repeated amplitude blocks,
/// |+>^n) normalize to a list of blocks, each a dense ket on <= 12 qubits.
///
/// Within a block, qubit j maps to index bit (b-1-j): the ket |q_1 q_2 .. q_b>
/// written left to right is the binary index read the same way.
class StateSpec {
  public:
    struct Block {
        int size;
        Eigen::VectorXcd amps;  // length 2^size, unit norm
    };

    static StateSpec computational(std::string_view bits);  // "0101..."
    static StateSpec product(const std::vector<Eigen::Vector2cd>& kets);
    static StateSpec block_product(int block_size, Eigen::VectorXcd amps,
                                   int repetitions);
    static StateSpec plus_all(int n);
    /// (|0000> + |0011> + |1100> + e^{i tau}|1111>)/2 repeated over n/4
    /// blocks; n must be divisible by 4.
    static StateSpec magic(int n, double tau);

    int num_qubits() const { return n_; }
    const std::vector<Block>& blocks() const { return blocks_; }

  private:
    StateSpec() = default;
    int n_ = 0;
    std::vector<Block> blocks_;
};

/// Classical description of a state: e_a = Tr[B_a rho], entries in [-1, 1].
struct ExpectationVector {
    BasisPtr basis;
    Eigen::VectorXd values;
};

/// Pairwise products: E_ab = Re Tr[B_a B_b rho]. Only the real part is
/// stored; entries for anticommuting pairs are exactly zero.
struct CorrelationMatrix {
    BasisPtr basis1, basis2;
    Eigen::MatrixXd values;
};

ExpectationVector expectation_vector(const StateSpec& spec, BasisPtr basis);
CorrelationMatrix correlation_matrix(const StateSpec& spec, BasisPtr basis1,
                                     BasisPtr basis2);

/// Expectation of a single Pauli string on a block-product state.
double pauli_expectation(const StateSpec& spec, const PauliString& p);

}  // namespace gsim
