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

#ifndef IONCODESIGN_HAMILTONIAN_HPP
#define IONCODESIGN_HAMILTONIAN_HPP

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "ioncodesign/spinsim.hpp"

namespace ioncodesign {

/// Isotropic Heisenberg model with transverse fields,
///   H = sum_{i<j} J_ij S_i . S_j + sum_i h_i S^x_i,
/// in rad/ms with hbar = 1.
class SpinHamiltonian {
   public:
    SpinHamiltonian() = default;
    /// `couplings` is row-major n x n; it must be symmetric with a zero diagonal.
    SpinHamiltonian(int n_spins, std::vector<double> couplings, std::vector<double> fields);

    int num_spins() const noexcept { return n_; }
    double coupling(int i, int j) const { return J_[static_cast<std::size_t>(i * n_ + j)]; }
    double field(int i) const { return h_[static_cast<std::size_t>(i)]; }
    const std::vector<double> &couplings() const noexcept { return J_; }
    const std::vector<double> &fields() const noexcept { return h_; }

    /// Unique pairs i < j with J_ij != 0, in lexicographic order.
    std::vector<std::pair<int, int>> active_pairs() const;

    bool operator==(const SpinHamiltonian &) const = default;

   private:
    int n_ = 0;
    std::vector<double> J_;
    std::vector<double> h_;
};

CMatrix hamiltonian_matrix(const SpinHamiltonian &H);

/// Cached eigendecomposition; evaluating e^{-iHt} for many t only pays for
/// the diagonalisation once.
class ExactPropagator {
   public:
    explicit ExactPropagator(const SpinHamiltonian &H);

    UnitaryMatrix unitary(double t) const;
    StateVector evolve(const StateVector &state, double t) const;
    const Eigen::VectorXd &energies() const noexcept { return energies_; }
    int num_spins() const noexcept { return n_; }

   private:
    int n_;
    Eigen::VectorXd energies_;
    CMatrix vectors_;
};

UnitaryMatrix exact_unitary(const SpinHamiltonian &H, double t);
StateVector exact_evolve(const SpinHamiltonian &H, double t, const StateVector &state);

/// Seeded random instance: J_ij ~ U[-j_scale, j_scale] on every pair and
/// h_i ~ U[-h_scale, h_scale].
SpinHamiltonian random_hamiltonian(int n_spins, std::uint64_t seed, double j_scale = 1.0, double h_scale = 5.0);

std::string hamiltonian_to_json(const SpinHamiltonian &H);
SpinHamiltonian hamiltonian_from_json(const std::string &text);
SpinHamiltonian load_hamiltonian(const std::string &path);

}  // namespace ioncodesign

#endif
