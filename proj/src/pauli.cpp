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

#include "gsim/pauli.hpp"

#include <bit>
#include <cctype>
#include <sstream>

#include "gsim/errors.hpp"

namespace gsim {

namespace {

int words_for(int n) { return (n + 63) / 64; }

void require_same_size(const PauliString& p, const PauliString& q) {
    if (p.num_qubits() != q.num_qubits()) {
        throw SizeError("Pauli strings act on different qubit counts: " +
                        std::to_string(p.num_qubits()) + " vs " +
                        std::to_string(q.num_qubits()));
    }
}

int popcount_and(std::span<const std::uint64_t> a,
                 std::span<const std::uint64_t> b) {
    int c = 0;
    for (std::size_t i = 0; i < a.size(); ++i) c += std::popcount(a[i] & b[i]);
    return c;
}

}  // namespace

PauliString::PauliString(int num_qubits)
    : n_(num_qubits), x_(words_for(num_qubits), 0), z_(words_for(num_qubits), 0) {
    if (num_qubits < 0) throw SizeError("negative qubit count");
}

PauliString make_pauli_from_words(int n, std::vector<std::uint64_t> x,
                                  std::vector<std::uint64_t> z) {
    PauliString p;
    p.n_ = n;
    p.x_ = std::move(x);
    p.z_ = std::move(z);
    return p;
}

PauliString& PauliString::set(int site, char op) {
    if (site < 0 || site >= n_) throw SizeError("site index out of range");
    std::uint64_t mask = std::uint64_t{1} << (site & 63);
    x_[site >> 6] &= ~mask;
    z_[site >> 6] &= ~mask;
    switch (op) {
        case 'I': break;
        case 'X': x_[site >> 6] |= mask; break;
        case 'Z': z_[site >> 6] |= mask; break;
        case 'Y':
            x_[site >> 6] |= mask;
            z_[site >> 6] |= mask;
            break;
        default:
            throw SizeError(std::string("invalid Pauli letter '") + op + "'");
    }
    return *this;
}

PauliString PauliString::from_dense(std::string_view text) {
    PauliString p(static_cast<int>(text.size()));
    for (int j = 0; j < p.n_; ++j) p.set(j, text[j]);
    return p;
}

PauliString PauliString::from_sparse(int num_qubits, std::string_view text) {
    PauliString p(num_qubits);
    std::istringstream in{std::string(text)};
    std::string tok;
    while (in >> tok) {
        if (tok == "I") continue;
        char op = tok[0];
        int site = 0;
        try {
            site = std::stoi(tok.substr(1));
        } catch (const std::exception&) {
            throw SizeError("malformed sparse Pauli token: " + tok);
        }
        p.set(site - 1, op);  // sites are 1-indexed in text
    }
    return p;
}

PauliString PauliString::parse(int num_qubits, std::string_view text) {
    bool dense = !text.empty() && text != "I";
    for (char c : text) {
        if (std::isdigit(static_cast<unsigned char>(c)) || c == ' ') {
            dense = false;
            break;
        }
    }
    if (dense) {
        if (static_cast<int>(text.size()) != num_qubits) {
            throw SizeError("dense Pauli text length does not match qubit count");
        }
        return from_dense(text);
    }
    return from_sparse(num_qubits, text);
}

PauliString PauliString::single(int num_qubits, int site, char op) {
    PauliString p(num_qubits);
    p.set(site, op);
    return p;
}

char PauliString::site_op(int site) const {
    static constexpr char ops[4] = {'I', 'X', 'Z', 'Y'};
    return ops[(x_bit(site) ? 1 : 0) | (z_bit(site) ? 2 : 0)];
}

bool PauliString::is_identity() const {
    for (auto w : x_)
        if (w) return false;
    for (auto w : z_)
        if (w) return false;
    return true;
}

int PauliString::weight() const {
    int c = 0;
    for (std::size_t i = 0; i < x_.size(); ++i)
        c += std::popcount(x_[i] | z_[i]);
    return c;
}

std::string PauliString::str() const {
    std::string s(n_, 'I');
    for (int j = 0; j < n_; ++j) s[j] = site_op(j);
    return s;
}

std::string PauliString::sparse_str() const {
    std::string s;
    for (int j = 0; j < n_; ++j) {
        char op = site_op(j);
        if (op == 'I') continue;
        if (!s.empty()) s += ' ';
        s += op;
        s += std::to_string(j + 1);
    }
    return s.empty() ? "I" : s;
}

std::strong_ordering PauliString::operator<=>(const PauliString& other) const {
    if (auto c = n_ <=> other.n_; c != 0) return c;
    if (auto c = x_ <=> other.x_; c != 0) return c;
    return z_ <=> other.z_;
}

std::size_t PauliHash::operator()(const PauliString& p) const noexcept {
    // FNV-1a over both mask vectors.
    std::uint64_t h = 0xcbf29ce484222325ull;
    auto mix = [&](std::uint64_t v) {
        for (int k = 0; k < 8; ++k) {
            h ^= (v >> (8 * k)) & 0xff;
            h *= 0x100000001b3ull;
        }
    };
    mix(static_cast<std::uint64_t>(p.num_qubits()));
    for (auto w : p.x_words()) mix(w);
    for (auto w : p.z_words()) mix(w);
    return static_cast<std::size_t>(h);
}

PhasedPauli multiply(const PauliString& p, const PauliString& q) {
    require_same_size(p, q);
    int nw = static_cast<int>(p.x_words().size());
    std::vector<std::uint64_t> x(nw), z(nw);
    for (int i = 0; i < nw; ++i) {
        x[i] = p.x_words()[i] ^ q.x_words()[i];
        z[i] = p.z_words()[i] ^ q.z_words()[i];
    }
    // Per site: i^(xp·zp) X^xp Z^zp · i^(xq·zq) X^xq Z^zq
    //         = i^(xp·zp + xq·zq - xr·zr + 2·zp·xq) · i^(xr·zr) X^xr Z^zr.
    int k = popcount_and(p.x_words(), p.z_words()) +
            popcount_and(q.x_words(), q.z_words()) +
            2 * popcount_and(p.z_words(), q.x_words());
    std::span<const std::uint64_t> xs(x), zs(z);
    k -= popcount_and(xs, zs);
    return PhasedPauli{make_pauli_from_words(p.num_qubits(), std::move(x),
                                             std::move(z)),
                       ((k % 4) + 4) % 4};
}

bool commutes(const PauliString& p, const PauliString& q) {
    require_same_size(p, q);
    int sym = popcount_and(p.x_words(), q.z_words()) +
              popcount_and(p.z_words(), q.x_words());
    return (sym & 1) == 0;
}

std::optional<SignedPauli> commutator(const PauliString& p,
                                      const PauliString& q) {
    if (commutes(p, q)) return std::nullopt;
    // P and Q anticommute, so [P,Q] = 2PQ and PQ has phase ±i.
    PhasedPauli prod = multiply(p, q);
    return SignedPauli{prod.phase_pow == 1 ? 1 : -1, std::move(prod.string)};
}

}  // namespace gsim
