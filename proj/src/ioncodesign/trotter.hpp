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

#ifndef IONCODESIGN_TROTTER_HPP
#define IONCODESIGN_TROTTER_HPP

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "ioncodesign/hamiltonian.hpp"
#include "ioncodesign/spinsim.hpp"

namespace ioncodesign {

/// Wall-clock schedule for a circuit. Gates run serially, each taking `t_g`.
struct GateTiming {
    double t_g = 0.01;   // ms
    double tau0 = 0.0;   // ms, start of the first gate
    std::vector<GateKind> noisy_kinds{GateKind::XX};

    bool is_noisy(GateKind kind) const;
    void validate() const;
};

struct TimedGate {
    GateSpec gate;        // gate.angle is the nominal angle
    double start = 0.0;   // ms
    bool noisy = false;
};

struct TimedCircuit {
    int n_qubits = 0;
    std::vector<TimedGate> gates;
    double total_duration = 0.0;  // ms

    std::size_t size() const noexcept { return gates.size(); }
    std::vector<double> nominal_angles() const;
    std::vector<double> start_times() const;
};

struct GateCounts {
    std::size_t total = 0;
    std::size_t two_qubit = 0;
    std::size_t single_qubit = 0;
    bool operator==(const GateCounts &) const = default;
};

/// First-order product formula for e^{-iHt} with `steps` repetitions of
///   XX-layer, RZ(+pi), XX-layer, RZ(-pi), RY(+pi), XX-layer, RZ(-2 h_i dt), RY(-pi)
/// (listed in application order). The RZ/RY(+-pi) layers are quarter turns
/// that rotate the XX coupling into YY and ZZ; XX angles are J_ij dt.
TimedCircuit build_trotter_circuit(const SpinHamiltonian &H, double t, int steps, const GateTiming &timing = {});

GateCounts gate_counts(const TimedCircuit &circuit);

/// Ordered product of the gate matrices, first gate rightmost. With no
/// `realized_angles` the nominal angles are used.
UnitaryMatrix circuit_unitary(const TimedCircuit &circuit);
UnitaryMatrix circuit_unitary(const TimedCircuit &circuit, std::span<const double> realized_angles);

/// Spectral norm of (noiseless circuit - e^{-iHt}).
double trotter_error(const SpinHamiltonian &H, double t, int steps);

double spectral_norm(const CMatrix &m);

/// One JSON object per line: index, kind, sites, angle, start_ms, noisy.
void write_circuit_jsonl(std::ostream &out, const TimedCircuit &circuit);
TimedCircuit read_circuit_jsonl(std::istream &in, int n_qubits, double t_g);

}  // namespace ioncodesign

#endif
