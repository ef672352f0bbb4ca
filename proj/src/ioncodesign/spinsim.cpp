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

#include "ioncodesign/spinsim.hpp"

#include <bit>
#include <cmath>
#include <string>

#include "ioncodesign/errors.hpp"

namespace ioncodesign {

namespace {

constexpr Complex kI{0.0, 1.0};

std::size_t site_mask(int n_qubits, int site) {
    return std::size_t{1} << static_cast<unsigned>(n_qubits - 1 - site);
}

// Pauli matrices in the local (down, up) ordering, i.e. sigma^z = diag(-1, 1).
Eigen::Matrix2cd pauli(GateKind kind) {
    Eigen::Matrix2cd p;
    switch (kind) {
        case GateKind::RX:
            p << 0.0, 1.0, 1.0, 0.0;
            break;
        case GateKind::RY:
            p << 0.0, kI, -kI, 0.0;
            break;
        case GateKind::RZ:
            p << -1.0, 0.0, 0.0, 1.0;
            break;
        default:
            throw InvalidArgument("pauli: not a single-qubit kind");
    }
    return p;
}

Eigen::Matrix2cd rotation_kernel(const GateSpec &gate) {
    const double c = std::cos(gate.angle / 4.0);
    const double s = std::sin(gate.angle / 4.0);
    return c * Eigen::Matrix2cd::Identity() - kI * s * pauli(gate.kind);
}

// Applies the gate to one length-`dim` column (a state or a matrix column).
template <typename Column>
void apply_to_column(Column &&col, std::size_t dim, int n_qubits, const GateSpec &gate) {
    const double c = std::cos(gate.angle / 4.0);
    const double s = std::sin(gate.angle / 4.0);
    if (gate.kind == GateKind::XX) {
        // exp(-i phi sx sx / 4) = c - i s (sx sx); sx sx flips both bits.
        const std::size_t flip = site_mask(n_qubits, gate.site0) | site_mask(n_qubits, gate.site1);
        const std::size_t m0 = site_mask(n_qubits, gate.site0);
        const Complex mis = -kI * s;
        for (std::size_t k = 0; k < dim; ++k) {
            if (k & m0) continue;
            const std::size_t p = k ^ flip;
            const Complex a = col[k];
            const Complex b = col[p];
            col[k] = c * a + mis * b;
            col[p] = c * b + mis * a;
        }
        return;
    }
    const std::size_t m = site_mask(n_qubits, gate.site0);
    const Eigen::Matrix2cd K = rotation_kernel(gate);
    for (std::size_t k = 0; k < dim; ++k) {
        if (k & m) continue;
        const Complex a0 = col[k];
        const Complex a1 = col[k | m];
        col[k] = K(0, 0) * a0 + K(0, 1) * a1;
        col[k | m] = K(1, 0) * a0 + K(1, 1) * a1;
    }
}

}  // namespace

std::string_view gate_kind_name(GateKind kind) {
    switch (kind) {
        case GateKind::RX:
            return "RX";
        case GateKind::RY:
            return "RY";
        case GateKind::RZ:
            return "RZ";
        case GateKind::XX:
            return "XX";
    }
    return "?";
}

GateKind parse_gate_kind(std::string_view name) {
    if (name == "RX") return GateKind::RX;
    if (name == "RY") return GateKind::RY;
    if (name == "RZ") return GateKind::RZ;
    if (name == "XX") return GateKind::XX;
    throw InvalidArgument("unknown gate kind '" + std::string(name) + "'");
}

void GateSpec::validate(int n_qubits) const {
    auto in_range = [n_qubits](int s) { return s >= 0 && s < n_qubits; };
    if (!in_range(site0)) throw InvalidArgument("gate site " + std::to_string(site0) + " out of range");
    if (kind == GateKind::XX) {
        if (!in_range(site1)) throw InvalidArgument("gate site " + std::to_string(site1) + " out of range");
        if (site0 == site1) throw InvalidArgument("XX gate needs two distinct sites");
    } else if (site1 != -1) {
        throw InvalidArgument("single-qubit rotation takes exactly one site");
    }
}

StateVector::StateVector(int n_qubits) : n_qubits_(n_qubits) {
    check_dimension(n_qubits, 30);
    amps_ = CVector::Zero(Eigen::Index{1} << n_qubits);
    amps_[0] = 1.0;
}

StateVector::StateVector(int n_qubits, CVector amplitudes) : n_qubits_(n_qubits), amps_(std::move(amplitudes)) {
    check_dimension(n_qubits, 30);
    if (amps_.size() != (Eigen::Index{1} << n_qubits)) {
        throw InvalidArgument("amplitude vector length must be 2^n");
    }
}

void check_dimension(int n_qubits, int max_qubits) {
    if (n_qubits < 0) throw InvalidArgument("negative qubit count");
    if (n_qubits > max_qubits) {
        throw ResourceLimit("n_qubits=" + std::to_string(n_qubits) + " exceeds the configured maximum of " +
                            std::to_string(max_qubits));
    }
}

StateVector basis_state(int n_qubits, std::span<const int> bits) {
    if (bits.size() != static_cast<std::size_t>(n_qubits)) {
        throw InvalidArgument("basis_state: bits length does not match n_qubits");
    }
    std::size_t index = 0;
    for (int b : bits) {
        if (b != 0 && b != 1) throw InvalidArgument("basis_state: bits must be 0 or 1");
        index = (index << 1) | static_cast<std::size_t>(b);
    }
    StateVector state(n_qubits);
    state.amplitudes().setZero();
    state.amplitudes()[static_cast<Eigen::Index>(index)] = 1.0;
    return state;
}

CMatrix gate_kernel(const GateSpec &gate) {
    if (gate.kind != GateKind::XX) return rotation_kernel(gate);
    const double c = std::cos(gate.angle / 4.0);
    const double s = std::sin(gate.angle / 4.0);
    CMatrix k = CMatrix::Identity(4, 4) * c;
    // sx (x) sx is the anti-diagonal permutation.
    for (int i = 0; i < 4; ++i) k(i, 3 - i) += -kI * s;
    return k;
}

void apply_gate_inplace(CVector &amps, int n_qubits, const GateSpec &gate) {
    apply_to_column(amps, static_cast<std::size_t>(amps.size()), n_qubits, gate);
}

void apply_gate_left(CMatrix &unitary, int n_qubits, const GateSpec &gate) {
    const auto dim = static_cast<std::size_t>(unitary.rows());
    for (Eigen::Index c = 0; c < unitary.cols(); ++c) {
        Complex *col = unitary.col(c).data();
        apply_to_column(col, dim, n_qubits, gate);
    }
}

StateVector apply_gate(StateVector state, const GateSpec &gate) {
    gate.validate(state.num_qubits());
    apply_gate_inplace(state.amplitudes(), state.num_qubits(), gate);
    return state;
}

std::vector<double> sz_tot_diagonal(int n_qubits) {
    const std::size_t dim = std::size_t{1} << n_qubits;
    std::vector<double> diag(dim);
    for (std::size_t k = 0; k < dim; ++k) {
        diag[k] = static_cast<double>(std::popcount(k)) - 0.5 * n_qubits;
    }
    return diag;
}

double expect_sz_tot(const StateVector &state) {
    const auto diag = sz_tot_diagonal(state.num_qubits());
    double acc = 0.0;
    for (std::size_t k = 0; k < diag.size(); ++k) acc += std::norm(state[k]) * diag[k];
    return acc;
}

UnitaryMatrix gate_matrix(const GateSpec &gate, int n_qubits, int max_qubits) {
    check_dimension(n_qubits, max_qubits);
    gate.validate(n_qubits);
    // Kronecker embedding: I (x) ... (x) K (x) ... (x) I, with XX on possibly
    // non-adjacent sites built as the product of its two Pauli factors.
    auto embed = [n_qubits](const Eigen::Matrix2cd &local, int site) {
        CMatrix m = CMatrix::Identity(1, 1);
        for (int q = 0; q < n_qubits; ++q) {
            const CMatrix factor = (q == site) ? CMatrix(local) : CMatrix(CMatrix::Identity(2, 2));
            CMatrix next(m.rows() * 2, m.cols() * 2);
            for (Eigen::Index i = 0; i < m.rows(); ++i)
                for (Eigen::Index j = 0; j < m.cols(); ++j) next.block(2 * i, 2 * j, 2, 2) = m(i, j) * factor;
            m = std::move(next);
        }
        return m;
    };
    const Eigen::Index dim = Eigen::Index{1} << n_qubits;
    if (gate.kind == GateKind::XX) {
        const double c = std::cos(gate.angle / 4.0);
        const double s = std::sin(gate.angle / 4.0);
        const CMatrix xx = embed(pauli(GateKind::RX), gate.site0) * embed(pauli(GateKind::RX), gate.site1);
        return c * CMatrix::Identity(dim, dim) - kI * s * xx;
    }
    return embed(rotation_kernel(gate), gate.site0);
}

}  // namespace ioncodesign
