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

// Per-gate feedforward control of XX angles under motional noise.
//
// For a requested angle phi_p the controller inputs the phi_in that
// maximizes the expected gate fidelity E_phi[cos^2((phi - phi_p)/4)] under
// the single-time angle law with latent lambda = c2 tau. Correlations between
// gates are ignored by construction (the joint law is factorized per gate).

#ifndef IONCODESIGN_FEEDFORWARD_HPP
#define IONCODESIGN_FEEDFORWARD_HPP

#include <cstddef>
#include <memory>
#include <numbers>
#include <vector>

#include "ioncodesign/trotter.hpp"

namespace ioncodesign {

inline constexpr double kDefaultPhiCap = 4.0 * std::numbers::pi;

/// cos^2((phi - phi_p) / 4): fidelity of XX(phi) against XX(phi_p).
double gate_fidelity(double phi, double phi_p);

/// Expected fidelity when inputting phi_in; closed form in terms of 1F2.
double avg_gate_fidelity(double phi_in, double phi_p, double lambda);

/// E[cos(phi/2)] and E[sin(phi/2)] for input phi_in at latent lambda.
struct HalfAngleMoments {
    double cos_mean = 1.0;
    double sin_mean = 0.0;
};
HalfAngleMoments half_angle_moments(double phi_in, double lambda);

struct ControlQuery {
    double phi_p = 0.0;
    double lambda = 0.0;
    double phi_cap = kDefaultPhiCap;

    void validate() const;
};

struct ControlSolution {
    double phi_in_star = 0.0;
    double fidelity_star = 1.0;
};

/// Global maximizer over [0, phi_cap]: 1e-3 rad scan, then golden-section
/// polish to 1e-6. Ties go to the smaller input angle.
ControlSolution optimal_input_angle(const ControlQuery &query);

/// Optimal input angles on a regular (|phi_p|, lambda) grid with bilinear
/// lookup. Lookups outside the grid fall back to the direct solver.
class FeedforwardTable {
   public:
    FeedforwardTable(double phi_max, double lambda_max, double phi_step = 1e-2, double lambda_step = 1e-2,
                     double phi_cap = kDefaultPhiCap);

    /// Signed lookup: negative phi_p maps to the mirrored solution.
    double input_angle(double phi_p, double lambda) const;
    bool covers(double phi_p, double lambda) const;

    double phi_max() const noexcept { return phi_max_; }
    double lambda_max() const noexcept { return lambda_max_; }
    double phi_cap() const noexcept { return phi_cap_; }

   private:
    double at(std::size_t i_phi, std::size_t i_lambda) const { return table_[i_lambda * n_phi_ + i_phi]; }

    double phi_step_;
    double lambda_step_;
    double phi_cap_;
    std::size_t n_phi_;
    std::size_t n_lambda_;
    double phi_max_;
    double lambda_max_;
    std::vector<double> table_;
};

/// Shared read-only table covering at least the requested range. Tables are
/// built once per process and reused by later, smaller requests.
std::shared_ptr<const FeedforwardTable> shared_feedforward_table(double phi_max, double lambda_max);

/// Replaces every noisy gate's angle by its feedforward input angle at
/// lambda = c2 * start. Other gates are untouched.
TimedCircuit correct_circuit(const TimedCircuit &circuit, double c2);
TimedCircuit correct_circuit(const TimedCircuit &circuit, double c2, const FeedforwardTable &table);

}  // namespace ioncodesign

#endif
