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

#include "ioncodesign/motional_noise.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <string>

#include "ioncodesign/errors.hpp"
#include "ioncodesign/rng.hpp"

namespace ioncodesign {

void NoiseParams::validate() const {
    if (!(c2 >= 0.0)) throw InvalidArgument("noise: c2 must be non-negative");
}

MotionalTrajectory sample_trajectory(std::span<const double> times, const NoiseParams &params) {
    params.validate();
    MotionalTrajectory traj;
    traj.times.assign(times.begin(), times.end());
    traj.u.assign(times.size(), 0.0);
    if (times.empty()) return traj;
    if (times.front() < 0.0) throw InvalidArgument("sample_trajectory: times must be >= 0");
    for (std::size_t m = 1; m < times.size(); ++m) {
        if (times[m] < times[m - 1]) throw InvalidArgument("sample_trajectory: times must be sorted ascending");
    }
    if (params.c2 == 0.0) return traj;

    Rng rng(params.seed);
    sample_path(times, params.c2, params.correlated, rng, traj.u);
    return traj;
}

void sample_path(std::span<const double> times, double c2, bool correlated, Rng &rng, std::span<double> u_out) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    if (!correlated) {
        std::exponential_distribution<double> unit_exp(1.0);
        for (std::size_t m = 0; m < times.size(); ++m) u_out[m] = c2 * times[m] * unit_exp(rng);
        return;
    }
    double re = 0.0;
    double im = 0.0;
    double prev = 0.0;
    for (std::size_t m = 0; m < times.size(); ++m) {
        const double sigma = std::sqrt(0.5 * c2 * (times[m] - prev));
        re += sigma * gauss(rng);
        im += sigma * gauss(rng);
        prev = times[m];
        u_out[m] = re * re + im * im;
    }
}

double angle_pdf(const AngleDistribution &dist, double phi) {
    if (!(dist.lambda > 0.0)) throw InvalidArgument("angle_pdf: lambda must be > 0 (lambda = 0 is a point mass)");
    if (!(phi > 0.0) || phi >= dist.phi_in) return 0.0;
    const double inv = 1.0 / dist.lambda;
    return inv / phi * std::pow(phi / dist.phi_in, inv);
}

double angle_cdf(const AngleDistribution &dist, double phi) {
    if (phi >= dist.phi_in) return 1.0;
    if (phi <= 0.0) return 0.0;
    if (dist.lambda == 0.0) return 0.0;
    return std::pow(phi / dist.phi_in, 1.0 / dist.lambda);
}

AngleMoments angle_moments(const AngleDistribution &dist) {
    if (dist.lambda < 0.0) throw InvalidArgument("angle_moments: lambda must be >= 0");
    const double l = dist.lambda;
    const double p = dist.phi_in;
    return {p / (1.0 + l), p * std::exp(-l), p * p * l * l / ((1.0 + 2.0 * l) * (1.0 + l) * (1.0 + l))};
}

double angle_correlation(double tau, double delta, double c2) {
    if (!(tau > 0.0)) throw InvalidArgument("angle_correlation: tau must be > 0");
    if (delta < 0.0) throw InvalidArgument("angle_correlation: delta must be >= 0");
    if (c2 < 0.0) throw InvalidArgument("angle_correlation: c2 must be >= 0");
    const double later = tau + delta;
    const double num = std::sqrt((1.0 + 2.0 * c2 * tau) * (1.0 + 2.0 * c2 * later));
    const double den = 1.0 + 2.0 * c2 * tau + c2 * delta + c2 * c2 * tau * delta;
    return tau / later * num / den;
}

double short_time_pdf(const AngleDistribution &dist, double phi) {
    if (!(dist.lambda > 0.0)) throw InvalidArgument("short_time_pdf: lambda must be > 0");
    if (phi >= dist.phi_in) return 0.0;
    const double scale = dist.lambda * dist.phi_in;
    return std::exp(-(dist.phi_in - phi) / scale) / scale;
}

namespace {

bool is_pole(double b) { return b <= 0.0 && std::nearbyint(b) == b; }

}  // namespace

SeriesResult hyp1f2_series(double a, double b1, double b2, double z) {
    if (is_pole(b1) || is_pole(b2)) throw InvalidArgument("hyp1f2: b1 and b2 must not be non-positive integers");
    constexpr double kTol = 1e-16;
    constexpr std::size_t kMaxTerms = 100000;
    double sum = 1.0;
    double term = 1.0;
    std::size_t n = 1;
    for (std::size_t k = 0; k < kMaxTerms; ++k) {
        const double kk = static_cast<double>(k);
        const double ratio = (a + kk) / ((b1 + kk) * (b2 + kk) * (kk + 1.0)) * z;
        term *= ratio;
        if (term == 0.0) break;
        sum += term;
        ++n;
        // Only stop once the terms are shrinking for good.
        if (std::abs(term) < kTol * std::abs(sum) && std::abs(ratio) < 1.0) break;
    }
    return {sum, n};
}

double hyp1f2(double a, double b1, double b2, double z) { return hyp1f2_series(a, b1, b2, z).value; }

double return_probability(double phi_in, double lambda) {
    if (lambda < 0.0) throw InvalidArgument("return_probability: lambda must be >= 0");
    const double c = std::cos(phi_in / 4.0);
    if (lambda == 0.0) return c * c;
    const double k = 1.0 / (2.0 * lambda);
    const double pre = phi_in * phi_in * lambda / (8.0 + 16.0 * lambda);
    return c * c + pre * hyp1f2(1.0 + k, 1.5, 2.0 + k, -phi_in * phi_in / 16.0);
}

NoiseToSignal markovian_noise_to_signal(int steps, double lambda) {
    if (steps < 1) throw InvalidArgument("markovian_noise_to_signal: steps must be >= 1");
    if (lambda < 0.0) throw InvalidArgument("markovian_noise_to_signal: lambda must be >= 0");
    const double beta = lambda * lambda / (1.0 + 2.0 * lambda);
    return {beta, std::sqrt(beta) / steps};
}

}  // namespace ioncodesign
