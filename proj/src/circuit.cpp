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

#include "gsim/circuit.hpp"

#include <cmath>
#include <cstdio>

#include <nlohmann/json.hpp>

#include "gsim/errors.hpp"

namespace gsim {

namespace {

constexpr double kProbTolerance = 1e-12;

void validate_commuting(const SpanElement& generator) {
    for (std::size_t i = 0; i < generator.terms.size(); ++i) {
        for (std::size_t j = 0; j < i; ++j) {
            if (!commutes(generator.terms[i].first, generator.terms[j].first)) {
                throw UnsupportedError(
                    "sum-generator terms must pairwise commute: " +
                    generator.terms[i].first.sparse_str() + " vs " +
                    generator.terms[j].first.sparse_str());
            }
        }
    }
}

std::string format_coeff(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

Gate Gate::pauli(PauliString p, int param_index) {
    return sum(SpanElement::pauli(std::move(p)), param_index);
}

Gate Gate::pauli_fixed(PauliString p, double angle) {
    return sum_fixed(SpanElement::pauli(std::move(p)), angle);
}

Gate Gate::sum(SpanElement generator, int param_index) {
    validate_commuting(generator);
    Gate g;
    g.generator = std::move(generator);
    g.param = param_index;
    return g;
}

Gate Gate::sum_fixed(SpanElement generator, double angle) {
    validate_commuting(generator);
    Gate g;
    g.generator = std::move(generator);
    g.param = -1;
    g.angle = angle;
    return g;
}

NoiseChannel NoiseChannel::make(
    std::vector<std::pair<double, PauliString>> terms) {
    if (terms.empty()) throw SizeError("noise channel needs at least one term");
    double total = 0;
    bool has_identity = false;
    for (const auto& [p, v] : terms) {
        if (p < 0) throw SizeError("noise probabilities must be >= 0");
        total += p;
        if (v.is_identity()) has_identity = true;
    }
    if (std::abs(total - 1.0) > kProbTolerance) {
        throw SizeError("noise probabilities must sum to 1");
    }
    if (!has_identity) {
        throw SizeError("noise channel must list the identity term explicitly");
    }
    NoiseChannel ch;
    ch.terms = std::move(terms);
    return ch;
}

NoiseChannel NoiseChannel::two_qubit_random(int n, int site_a, int site_b,
                                            double p, const double raw[15]) {
    static constexpr char kOps[4] = {'I', 'X', 'Y', 'Z'};
    double sum = 0;
    for (int k = 0; k < 15; ++k) sum += raw[k];
    std::vector<std::pair<double, PauliString>> terms;
    terms.emplace_back(1.0 - p, PauliString(n));
    int k = 0;
    for (int a = 0; a < 4; ++a) {
        for (int b = 0; b < 4; ++b) {
            if (a == 0 && b == 0) continue;
            PauliString v(n);
            if (a) v.set(site_a, kOps[a]);
            if (b) v.set(site_b, kOps[b]);
            terms.emplace_back(sum > 0 ? p * raw[k] / sum : 0.0, std::move(v));
            ++k;
        }
    }
    // Absorb any rounding slack into the identity term.
    double total = 0;
    for (const auto& [q, v] : terms) total += q;
    terms[0].first += 1.0 - total;
    return make(std::move(terms));
}

int NoiseChannel::num_qubits() const {
    return terms.empty() ? 0 : terms[0].second.num_qubits();
}

Circuit& Circuit::push(Gate g) {
    if (g.generator.num_qubits != n) throw SizeError("gate qubit count mismatch");
    if (g.param >= param_count) param_count = g.param + 1;
    elements.emplace_back(std::move(g));
    return *this;
}

Circuit& Circuit::push(NoiseChannel ch) {
    if (ch.num_qubits() != n) throw SizeError("channel qubit count mismatch");
    elements.emplace_back(std::move(ch));
    return *this;
}

bool Circuit::has_noise() const {
    for (const auto& e : elements) {
        if (std::holds_alternative<NoiseChannel>(e)) return true;
    }
    return false;
}

int Circuit::num_gates() const {
    int c = 0;
    for (const auto& e : elements) c += std::holds_alternative<Gate>(e);
    return c;
}

nlohmann::json circuit_to_json(const Circuit& circuit) {
    nlohmann::json doc;
    doc["schema"] = "gsim-circuit/1";
    doc["n"] = circuit.n;
    doc["param_count"] = circuit.param_count;
    auto& elems = doc["elements"] = nlohmann::json::array();
    for (const auto& e : circuit.elements) {
        nlohmann::json je;
        if (const Gate* g = std::get_if<Gate>(&e)) {
            je["type"] = "gate";
            if (g->generator.terms.size() == 1 &&
                g->generator.terms[0].second == 1.0) {
                je["generator"] = g->generator.terms[0].first.sparse_str();
            } else {
                auto arr = nlohmann::json::array();
                for (const auto& [p, c] : g->generator.terms) {
                    arr.push_back({format_coeff(c), p.sparse_str()});
                }
                je["generator"] = std::move(arr);
            }
            if (g->is_parametrized()) {
                je["param"] = g->param;
            } else {
                je["angle"] = g->angle;
            }
        } else {
            const auto& ch = std::get<NoiseChannel>(e);
            je["type"] = "noise";
            auto arr = nlohmann::json::array();
            for (const auto& [p, v] : ch.terms) {
                arr.push_back({p, v.sparse_str()});
            }
            je["terms"] = std::move(arr);
        }
        elems.push_back(std::move(je));
    }
    return doc;
}

Circuit circuit_from_json(const nlohmann::json& doc) {
    if (doc.value("schema", "") != "gsim-circuit/1") {
        throw ConfigError("unknown circuit schema");
    }
    Circuit circuit(doc.at("n").get<int>());
    for (const auto& je : doc.at("elements")) {
        std::string type = je.at("type").get<std::string>();
        if (type == "gate") {
            SpanElement gen(circuit.n);
            const auto& jg = je.at("generator");
            if (jg.is_string()) {
                gen.add(PauliString::parse(circuit.n, jg.get<std::string>()),
                        1.0);
            } else {
                for (const auto& term : jg) {
                    double c = term.at(0).is_string()
                                   ? std::stod(term.at(0).get<std::string>())
                                   : term.at(0).get<double>();
                    gen.add(PauliString::parse(circuit.n,
                                               term.at(1).get<std::string>()),
                            c);
                }
            }
            if (je.contains("param")) {
                circuit.push(Gate::sum(std::move(gen), je.at("param").get<int>()));
            } else {
                circuit.push(
                    Gate::sum_fixed(std::move(gen), je.at("angle").get<double>()));
            }
        } else if (type == "noise") {
            std::vector<std::pair<double, PauliString>> terms;
            for (const auto& term : je.at("terms")) {
                terms.emplace_back(
                    term.at(0).get<double>(),
                    PauliString::parse(circuit.n, term.at(1).get<std::string>()));
            }
            circuit.push(NoiseChannel::make(std::move(terms)));
        } else {
            throw ConfigError("unknown circuit element type: " + type);
        }
    }
    int declared = doc.at("param_count").get<int>();
    if (declared < circuit.param_count) {
        throw ConfigError("declared param_count below highest parameter index");
    }
    circuit.param_count = declared;
    return circuit;
}

std::string circuit_to_string(const Circuit& circuit) {
    return circuit_to_json(circuit).dump(2);
}

Circuit circuit_from_string(const std::string& text) {
    return circuit_from_json(nlohmann::json::parse(text));
}

}  // namespace gsim
