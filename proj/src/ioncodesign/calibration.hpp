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

// Return-probability protocol for the heating constant: prepare |dd>, wait
// tau, apply XX(phi_in), measure the |dd> population.

#ifndef IONCODESIGN_CALIBRATION_HPP
#define IONCODESIGN_CALIBRATION_HPP

#include <cstdint>
#include <iosfwd>
#include <vector>

namespace ioncodesign {

struct CalibrationCurve {
    std::vector<double> phi_in;  // rad
    std::vector<double> tau;     // ms
    /// p_return[i * tau.size() + j] for (phi_in[i], tau[j]).
    std::vector<double> p_return;
    long long shots = 0;

    double at(std::size_t i_phi, std::size_t j_tau) const { return p_return[i_phi * tau.size() + j_tau]; }
    void validate() const;
};

CalibrationCurve simulate_calibration(const std::vector<double> &phi_grid, const std::vector<double> &tau_grid,
                                      double c2_true, long long shots, std::uint64_t seed);

/// Expected curve (infinite shots) under the motional-noise model.
CalibrationCurve analytic_calibration(const std::vector<double> &phi_grid, const std::vector<double> &tau_grid,
                                      double c2);

struct FitResult {
    double c2_hat = 0.0;
    double residual = 0.0;  // sum of squared deviations
};

/// Pooled least squares over every (phi_in, tau) point: log-spaced grid over
/// c2 in [1e-7, 10] ms^-1 plus c2 = 0, then golden-section refinement.
FitResult fit_c2(const CalibrationCurve &curve);

/// Reference phase-damping model P = 1/2 + 1/2 exp(-Gamma tau) cos(phi/2 + delta(phi)),
/// with one phase shift per input angle.
struct PhaseDampingFit {
    double gamma = 0.0;
    std::vector<double> delta;
    double residual = 0.0;
};
PhaseDampingFit fit_phase_damping(const CalibrationCurve &curve);

double model_residual(const CalibrationCurve &curve, double c2);

void write_calibration_csv(std::ostream &out, const CalibrationCurve &curve);
CalibrationCurve read_calibration_csv(std::istream &in);

}  // namespace ioncodesign

#endif
