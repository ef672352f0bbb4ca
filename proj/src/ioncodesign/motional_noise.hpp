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

// Gate-angle noise from heating of the lowest longitudinal phonon mode.
//
// The scaled coherent amplitude z = (a_osc / a_laser) alpha performs a
// two-dimensional Wiener walk from the vacuum with E|z(tau)|^2 = c2 tau. A gate
// started at tau imparts phi = phi_in exp(-|z(tau)|^2), so at a single time the
// latent u = |z|^2 is exponential with mean lambda = c2 tau and
//   p(phi) = (phi / phi_in)^(1/lambda) / (lambda phi),   0 < phi < phi_in.

#ifndef IONCODESIGN_MOTIONAL_NOISE_HPP
#define IONCODESIGN_MOTIONAL_NOISE_HPP

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace ioncodesign {

struct NoiseParams {
    double c2 = 0.0;  // ms^-1
    std::uint64_t seed = 0;
    bool correlated = true;

    void validate() const;
};

struct MotionalTrajectory {
    std::vector<double> times;  // ms
    std::vector<double> u;      // (a_osc/a_laser)^2 |alpha|^2, dimensionless
};

/// Exact Gaussian-increment sampling of |z(tau_m)|^2 along one path. With
/// `correlated == false` every u_m is an independent Exponential(c2 tau_m).
MotionalTrajectory sample_trajectory(std::span<const double> times, const NoiseParams &params);

/// Same law as `sample_trajectory`, drawing from a caller-owned generator
/// into `u_out` (same length as `times`). No validation of the inputs.
void sample_path(std::span<const double> times, double c2, bool correlated, std::mt19937_64 &rng,
                 std::span<double> u_out);

/// phi = phi_in exp(-u).
inline double noisy_angle(double phi_in, double u) { return phi_in * std::exp(-u); }

struct AngleDistribution {
    double phi_in = 0.0;
    double lambda = 0.0;
};

struct AngleMoments {
    double mean = 0.0;
    double typical = 0.0;
    double variance = 0.0;
};

/// Density of the realized angle; zero outside (0, phi_in). Requires lambda > 0;
/// lambda == 0 is a point mass at phi_in and callers must branch on it.
double angle_pdf(const AngleDistribution &dist, double phi);
double angle_cdf(const AngleDistribution &dist, double phi);
AngleMoments angle_moments(const AngleDistribution &dist);

/// Corr(phi(tau), phi(tau + delta)) for two gates on the same trajectory.
double angle_correlation(double tau, double delta, double c2);

/// Small-lambda, phi -> phi_in approximation of `angle_pdf`.
double short_time_pdf(const AngleDistribution &dist, double phi);

struct SeriesResult {
    double value = 0.0;
    std::size_t terms = 0;
};

/// 1F2(a; b1, b2; z) by direct summation until |term| < 1e-16 |sum|.
double hyp1f2(double a, double b1, double b2, double z);
SeriesResult hyp1f2_series(double a, double b1, double b2, double z);

/// E[cos^2(phi/4)] after an XX(phi_in) gate on |dd>, lambda = c2 tau.
double return_probability(double phi_in, double lambda);

struct NoiseToSignal {
    double beta = 0.0;
    double eta = 0.0;
};

/// Uncorrelated-gate noise-to-signal ratio of `steps` equal sub-gates.
NoiseToSignal markovian_noise_to_signal(int steps, double lambda);

}  // namespace ioncodesign

#endif
