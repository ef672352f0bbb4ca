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

#include "ioncodesign/hamiltonian.hpp"

#include <cmath>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "ioncodesign/errors.hpp"
#include "ioncodesign/rng.hpp"

namespace ioncodesign {

SpinHamiltonian::SpinHamiltonian(int n_spins, std::vector<double> couplings, std::vector<double> fields)
    : n_(n_spins), J_(std::move(couplings)), h_(std::move(fields)) {
    if (n_ < 1) throw InvalidArgument("hamiltonian: need at least one spin");
    const auto n = static_cast<std::size_t>(n_);
    if (J_.size() != n * n) throw InvalidArgument("hamiltonian: J must be n x n");
    if (h_.size() != n) throw InvalidArgument("hamiltonian: h must have length n");
    for (int i = 0; i < n_; ++i) {
        if (coupling(i, i) != 0.0) throw InvalidArgument("hamiltonian: J must have a zero diagonal");
        for (int j = i + 1; j < n_; ++j) {
            if (coupling(i, j) != coupling(j, i)) throw InvalidArgument("hamiltonian: J must be symmetric");
        }
    }
}

std::vector<std::pair<int, int>> SpinHamiltonian::active_pairs() const {
    std::vector<std::pair<int, int>> pairs;
    for (int i = 0; i < n_; ++i)
        for (int j = i + 1; j < n_; ++j)
            if (coupling(i, j) != 0.0) pairs.emplace_back(i, j);
    return pairs;
}

CMatrix hamiltonian_matrix(const SpinHamiltonian &H) {
    const int n = H.num_spins();
    check_dimension(n);
    const std::size_t dim = std::size_t{1} << n;
    auto mask = [n](int site) { return std::size_t{1} << (n - 1 - site); };
    CMatrix m = CMatrix::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
    for (std::size_t k = 0; k < dim; ++k) {
        const auto row = static_cast<Eigen::Index>(k);
        for (const auto &[i, j] : H.active_pairs()) {
            const double J = H.coupling(i, j);
            const bool bi = k & mask(i);
            const bool bj = k & mask(j);
            // S^z S^z = +-1/4; (S^x S^x + S^y S^y) = (S^+S^- + S^-S^+)/2 swaps anti-aligned spins.
            m(row, row) += J * (bi == bj ? 0.25 : -0.25);
            if (bi != bj) m(static_cast<Eigen::Index>(k ^ mask(i) ^ mask(j)), row) += 0.5 * J;
        }
        for (int i = 0; i < n; ++i) {
            if (H.field(i) != 0.0) m(static_cast<Eigen::Index>(k ^ mask(i)), row) += 0.5 * H.field(i);
        }
    }
    return m;
}

ExactPropagator::ExactPropagator(const SpinHamiltonian &H) : n_(H.num_spins()) {
    Eigen::SelfAdjointEigenSolver<CMatrix> solver(hamiltonian_matrix(H));
    if (solver.info() != Eigen::Success) throw Error(ErrorKind::Runtime, "hamiltonian diagonalisation failed");
    energies_ = solver.eigenvalues();
    vectors_ = solver.eigenvectors();
}

UnitaryMatrix ExactPropagator::unitary(double t) const {
    if (t < 0.0) throw InvalidArgument("exact_unitary: t must be non-negative");
    CVector phases(energies_.size());
    for (Eigen::Index k = 0; k < energies_.size(); ++k) phases[k] = std::polar(1.0, -energies_[k] * t);
    return vectors_ * phases.asDiagonal() * vectors_.adjoint();
}

StateVector ExactPropagator::evolve(const StateVector &state, double t) const {
    if (state.num_qubits() != n_) throw InvalidArgument("exact_evolve: state size does not match hamiltonian");
    if (t < 0.0) throw InvalidArgument("exact_evolve: t must be non-negative");
    CVector coeffs = vectors_.adjoint() * state.amplitudes();
    for (Eigen::Index k = 0; k < coeffs.size(); ++k) coeffs[k] *= std::polar(1.0, -energies_[k] * t);
    return StateVector(n_, vectors_ * coeffs);
}

UnitaryMatrix exact_unitary(const SpinHamiltonian &H, double t) { return ExactPropagator(H).unitary(t); }

StateVector exact_evolve(const SpinHamiltonian &H, double t, const StateVector &state) {
    return ExactPropagator(H).evolve(state, t);
}

SpinHamiltonian random_hamiltonian(int n_spins, std::uint64_t seed, double j_scale, double h_scale) {
    Rng rng(seed);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    const auto n = static_cast<std::size_t>(n_spins);
    std::vector<double> J(n * n, 0.0);
    std::vector<double> h(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            J[i * n + j] = J[j * n + i] = j_scale * unit(rng);
        }
    }
    for (auto &hi : h) hi = h_scale * unit(rng);
    return {n_spins, std::move(J), std::move(h)};
}

std::string hamiltonian_to_json(const SpinHamiltonian &H) {
    nlohmann::ordered_json doc;
    doc["n"] = H.num_spins();
    nlohmann::json rows = nlohmann::json::array();
    for (int i = 0; i < H.num_spins(); ++i) {
        nlohmann::json row = nlohmann::json::array();
        for (int j = 0; j < H.num_spins(); ++j) row.push_back(H.coupling(i, j));
        rows.push_back(row);
    }
    doc["J"] = rows;
    doc["h"] = H.fields();
    return doc.dump(2);
}

namespace {

SpinHamiltonian hamiltonian_from_doc(const nlohmann::json &doc) {
    if (!doc.is_object()) throw ConfigError("hamiltonian", "expected an object with n, J, h");
    for (const char *key : {"n", "J", "h"}) {
        if (!doc.contains(key)) throw ConfigError(std::string("hamiltonian.") + key, "missing");
    }
    const int n = doc.at("n").get<int>();
    if (n < 1) throw ConfigError("hamiltonian.n", "must be >= 1");
    const auto &rows = doc.at("J");
    if (!rows.is_array() || rows.size() != static_cast<std::size_t>(n)) {
        throw ConfigError("hamiltonian.J", "must be an n x n array");
    }
    std::vector<double> J;
    for (const auto &row : rows) {
        if (!row.is_array() || row.size() != static_cast<std::size_t>(n)) {
            throw ConfigError("hamiltonian.J", "must be an n x n array");
        }
        for (const auto &v : row) J.push_back(v.get<double>());
    }
    auto h = doc.at("h").get<std::vector<double>>();
    if (h.size() != static_cast<std::size_t>(n)) throw ConfigError("hamiltonian.h", "must have length n");
    try {
        return {n, std::move(J), std::move(h)};
    } catch (const InvalidArgument &e) {
        throw ConfigError("hamiltonian", e.what());
    }
}

}  // namespace

SpinHamiltonian hamiltonian_from_json(const std::string &text) {
    try {
        return hamiltonian_from_doc(nlohmann::json::parse(text));
    } catch (const nlohmann::json::exception &e) {
        throw ConfigError("hamiltonian", e.what());
    }
}

SpinHamiltonian load_hamiltonian(const std::string &path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("hamiltonian_file", "cannot open '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return hamiltonian_from_json(buf.str());
}

}  // namespace ioncodesign
