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

// Dense statevector / unitary engine for small spin-1/2 registers.
//
// Conventions used throughout the library:
//   * bit value 1 is spin-up (S^z = +1/2), bit value 0 is spin-down;
//   * site 0 is the most significant bit of a basis index;
//   * spin operators are S^a = sigma^a / 2;
//   * R^a(phi) = exp(-i S^a phi / 2) and XX(phi) = exp(-i S^x_i S^x_j phi).
// Global phases are never treated as observable.

#ifndef IONCODESIGN_SPINSIM_HPP
#define IONCODESIGN_SPINSIM_HPP

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace ioncodesign {

using Complex = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;
using UnitaryMatrix = Eigen::MatrixXcd;

inline constexpr int kDefaultMaxQubits = 12;

enum class GateKind : std::uint8_t { RX, RY, RZ, XX };

std::string_view gate_kind_name(GateKind kind);
GateKind parse_gate_kind(std::string_view name);

struct GateSpec {
    GateKind kind = GateKind::RX;
    int site0 = 0;
    int site1 = -1;  // only used by XX
    double angle = 0.0;

    static GateSpec rx(int site, double angle) { return {GateKind::RX, site, -1, angle}; }
    static GateSpec ry(int site, double angle) { return {GateKind::RY, site, -1, angle}; }
    static GateSpec rz(int site, double angle) { return {GateKind::RZ, site, -1, angle}; }
    static GateSpec xx(int a, int b, double angle) { return {GateKind::XX, a, b, angle}; }

    bool is_two_qubit() const noexcept { return kind == GateKind::XX; }
    GateSpec with_angle(double new_angle) const noexcept {
        GateSpec g = *this;
        g.angle = new_angle;
        return g;
    }
    /// Throws InvalidArgument unless the sites are distinct, in range and of
    /// the right arity for `kind`.
    void validate(int n_qubits) const;
};

/// Normalized pure state of `n` qubits.
class StateVector {
   public:
    explicit StateVector(int n_qubits);
    StateVector(int n_qubits, CVector amplitudes);

    int num_qubits() const noexcept { return n_qubits_; }
    std::size_t dim() const noexcept { return static_cast<std::size_t>(amps_.size()); }
    const CVector &amplitudes() const noexcept { return amps_; }
    CVector &amplitudes() noexcept { return amps_; }
    Complex operator[](std::size_t i) const { return amps_[static_cast<Eigen::Index>(i)]; }
    double norm() const { return amps_.norm(); }

   private:
    int n_qubits_;
    CVector amps_;
};

StateVector basis_state(int n_qubits, std::span<const int> bits);

/// 2x2 kernel of a rotation, or 4x4 kernel of XX in the (site0, site1) basis.
CMatrix gate_kernel(const GateSpec &gate);

/// In-place kernel application to a vector of length 2^n.
void apply_gate_inplace(CVector &amps, int n_qubits, const GateSpec &gate);
/// In-place left multiplication `U <- G U`.
void apply_gate_left(CMatrix &unitary, int n_qubits, const GateSpec &gate);

StateVector apply_gate(StateVector state, const GateSpec &gate);

/// Sum_i <S^z_i>.
double expect_sz_tot(const StateVector &state);
/// Diagonal of S^z_tot in the computational basis.
std::vector<double> sz_tot_diagonal(int n_qubits);

UnitaryMatrix gate_matrix(const GateSpec &gate, int n_qubits, int max_qubits = kDefaultMaxQubits);

/// Throws ResourceLimit when 2^n would exceed the configured maximum.
void check_dimension(int n_qubits, int max_qubits = kDefaultMaxQubits);

}  // namespace ioncodesign

#endif
