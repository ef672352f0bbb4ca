// Copyright 2026 The ioncodesign Authors
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

#include "ioncodesign/trotter.hpp"

#include <algorithm>
#include <istream>
#include <json.hpp>
#include <numbers>
#include <ostream>

#include "ioncodesign/errors.hpp"

namespace ioncodesign {

bool GateTiming::is_noisy(GateKind kind) const {
    return std::find(noisy_kinds.begin(), noisy_kinds.end(), kind) != noisy_kinds.end();
}

void GateTiming::validate() const {
    if (!(t_g > 0.0)) throw InvalidArgument("gate timing: t_g must be positive");
    if (tau0 < 0.0) throw InvalidArgument("gate timing: tau0 must be non-negative");
}

std::vector<double> TimedCircuit::nominal_angles() const {
    std::vector<double> out;
    out.reserve(gates.size());
    for (const auto &g : gates) out.push_back(g.gate.angle);
    return out;
}

std::vector<double> TimedCircuit::start_times() const {
    std::vector<double> out;
    out.reserve(gates.size());
    for (const auto &g : gates) out.push_back(g.start);
    return out;
}

TimedCircuit build_trotter_circuit(const SpinHamiltonian &H, double t, int steps, const GateTiming &timing) {
    if (steps < 1) throw InvalidArgument("build_trotter_circuit: steps must be >= 1");
    if (t < 0.0) throw InvalidArgument("build_trotter_circuit: t must be non-negative");
    timing.validate();

    constexpr double kQuarterTurn = std::numbers::pi;  // R(pi) = exp(-i S pi/2)
    const int n = H.num_spins();
    const double dt = t / steps;
    const auto pairs = H.active_pairs();

    TimedCircuit circuit;
    circuit.n_qubits = n;
    circuit.gates.reserve(static_cast<std::size_t>(steps) * (3 * pairs.size() + 5 * static_cast<std::size_t>(n)));

    auto push = [&](const GateSpec &g) {
        const double start = timing.tau0 + static_cast<double>(circuit.gates.size()) * timing.t_g;
        circuit.gates.push_back({g, start, timing.is_noisy(g.kind)});
    };
    auto xx_layer = [&] {
        for (const auto &[i, j] : pairs) push(GateSpec::xx(i, j, H.coupling(i, j) * dt));
    };
    auto rotation_layer = [&](GateKind kind, auto angle_of) {
        for (int i = 0; i < n; ++i) push(GateSpec{kind, i, -1, angle_of(i)});
    };
    auto fixed = [](double a) { return [a](int) { return a; }; };

    for (int step = 0; step < steps; ++step) {
        xx_layer();
        rotation_layer(GateKind::RZ, fixed(kQuarterTurn));
        xx_layer();
        rotation_layer(GateKind::RZ, fixed(-kQuarterTurn));
        rotation_layer(GateKind::RY, fixed(kQuarterTurn));
        xx_layer();
        rotation_layer(GateKind::RZ, [&](int i) { return -2.0 * H.field(i) * dt; });
        rotation_layer(GateKind::RY, fixed(-kQuarterTurn));
    }
    circuit.total_duration = circuit.gates.empty() ? 0.0 : circuit.gates.back().start + timing.t_g;
    return circuit;
}

GateCounts gate_counts(const TimedCircuit &circuit) {
    GateCounts c;
    for (const auto &g : circuit.gates) {
        ++c.total;
        if (g.gate.is_two_qubit())
            ++c.two_qubit;
        else
            ++c.single_qubit;
    }
    return c;
}

UnitaryMatrix circuit_unitary(const TimedCircuit &circuit) {
    const auto angles = circuit.nominal_angles();
    return circuit_unitary(circuit, angles);
}

UnitaryMatrix circuit_unitary(const TimedCircuit &circuit, std::span<const double> realized_angles) {
    if (realized_angles.size() != circuit.gates.size()) {
        throw InvalidArgument("circuit_unitary: need exactly one realized angle per gate");
    }
    check_dimension(circuit.n_qubits);
    const Eigen::Index dim = Eigen::Index{1} << circuit.n_qubits;
    UnitaryMatrix u = UnitaryMatrix::Identity(dim, dim);
    for (std::size_t m = 0; m < circuit.gates.size(); ++m) {
        apply_gate_left(u, circuit.n_qubits, circuit.gates[m].gate.with_angle(realized_angles[m]));
    }
    return u;
}

double spectral_norm(const CMatrix &m) {
    if (m.size() == 0) return 0.0;
    Eigen::JacobiSVD<CMatrix> svd(m);
    return svd.singularValues()(0);
}

double trotter_error(const SpinHamiltonian &H, double t, int steps) {
    const auto circuit = build_trotter_circuit(H, t, steps);
    return spectral_norm(circuit_unitary(circuit) - exact_unitary(H, t));
}

void write_circuit_jsonl(std::ostream &out, const TimedCircuit &circuit) {
    for (std::size_t m = 0; m < circuit.gates.size(); ++m) {
        const auto &g = circuit.gates[m];
        nlohmann::ordered_json line;
        line["index"] = m;
        line["kind"] = gate_kind_name(g.gate.kind);
        line["sites"] = g.gate.is_two_qubit() ? nlohmann::json::array({g.gate.site0, g.gate.site1})
                                              : nlohmann::json::array({g.gate.site0});
        line["angle"] = g.gate.angle;
        line["start_ms"] = g.start;
        line["noisy"] = g.noisy;
        out << line.dump() << '\n';
    }
}

TimedCircuit read_circuit_jsonl(std::istream &in, int n_qubits, double t_g) {
    TimedCircuit circuit;
    circuit.n_qubits = n_qubits;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        try {
            const auto doc = nlohmann::json::parse(line);
            const auto sites = doc.at("sites").get<std::vector<int>>();
            GateSpec g{parse_gate_kind(doc.at("kind").get<std::string>()), sites.at(0),
                       sites.size() > 1 ? sites[1] : -1, doc.at("angle").get<double>()};
            g.validate(n_qubits);
            const double start = doc.at("start_ms").get<double>();
            if (!circuit.gates.empty() && start < circuit.gates.back().start) {
                throw InvalidArgument("circuit start times must be non-decreasing");
            }
            circuit.gates.push_back({g, start, doc.at("noisy").get<bool>()});
        } catch (const nlohmann::json::exception &e) {
            throw InvalidArgument(std::string("circuit jsonl: ") + e.what());
        } catch (const std::out_of_range &) {
            throw InvalidArgument("circuit jsonl: gate without sites");
        }
    }
    circuit.total_duration = circuit.gates.empty() ? 0.0 : circuit.gates.back().start + t_g;
    return circuit;
}

}  // namespace ioncodesign
