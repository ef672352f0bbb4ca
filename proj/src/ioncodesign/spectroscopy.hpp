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

#ifndef IONCODESIGN_SPECTROSCOPY_HPP
#define IONCODESIGN_SPECTROSCOPY_HPP

#include <iosfwd>
#include <vector>

#include "ioncodesign/hamiltonian.hpp"
#include "ioncodesign/motional_noise.hpp"
#include "ioncodesign/trotter.hpp"

namespace ioncodesign {

enum class EvolverKind { Exact, NoiselessTrotter, NoisyTrotter };

/// How time evolution is realized. Trotter settings are ignored by the exact
/// evolver; noise settings only by the noiseless one.
struct Evolver {
    EvolverKind kind = EvolverKind::Exact;
    int steps = 1;
    GateTiming timing{};
    NoiseParams noise{};
    int n_runs = 1;
    bool feedforward = false;

    static Evolver exact() { return {}; }
    static Evolver noiseless_trotter(int steps, GateTiming timing = {}) {
        return {EvolverKind::NoiselessTrotter, steps, std::move(timing), {}, 1, false};
    }
    static Evolver noisy_trotter(int steps, NoiseParams noise, int n_runs, bool feedforward = false,
                                 GateTiming timing = {}) {
        return {EvolverKind::NoisyTrotter, steps, std::move(timing), noise, n_runs, feedforward};
    }
    void validate() const;
};

struct ResponseSeries {
    std::vector<double> times;  // ms
    std::vector<double> S;
};

struct FidelityTrace {
    std::vector<double> times;
    std::vector<double> F;
    double F_int = 1.0;
};

struct Simulation {
    ResponseSeries response;
    FidelityTrace fidelity;
};

/// Uniform grid of `count` points on [0, T].
std::vector<double> uniform_times(double T, int count);

/// Response function and process fidelity from the same realized unitaries.
/// Noisy runs draw one motional trajectory each, shared by every sample time
/// and every initial basis state of that run; averages are taken in run order.
Simulation simulate(const SpinHamiltonian &H, const Evolver &evolver, const std::vector<double> &times);

ResponseSeries response_function(const SpinHamiltonian &H, const Evolver &evolver, const std::vector<double> &times);
FidelityTrace fidelity_trace(const SpinHamiltonian &H, const Evolver &evolver, const std::vector<double> &times);

/// S(t) = 2 sum_{j: m_j > 0} (m_j / 2^N) <z_j| U^dag S^z_tot U |z_j>.
double response_from_unitary(const UnitaryMatrix &u, int n_spins);
/// |Tr(realized^dag target) / 2^n|^2.
double process_fidelity(const UnitaryMatrix &realized, const UnitaryMatrix &target);
/// (1/T) * trapezoid integral; a single sample returns that sample.
double trapezoid_mean(const std::vector<double> &x, const std::vector<double> &y);

struct OmegaGrid {
    double min = 0.0;
    double max = 10.0;
    int count = 201;

    std::vector<double> points() const;
};

struct Spectrum {
    std::vector<double> omega;  // rad/ms
    std::vector<double> A_raw;
    std::vector<double> A_norm;  // clipped at zero, sum(A_norm) * domega / 2pi = 1
    double gamma = 0.0;

    double domega() const;
};

/// A(w) = Re sum_k dt w_k exp(i w t_k - gamma t_k) S(t_k) with trapezoid weights.
Spectrum spectrum(const ResponseSeries &series, double gamma, const std::vector<double> &omega);

/// D_H with D_H^2 = 1/2 sum domega/2pi (sqrt(A) - sqrt(B))^2.
double hellinger(const Spectrum &a, const Spectrum &b);

void write_response_csv(std::ostream &out, const ResponseSeries &series);
void write_spectrum_csv(std::ostream &out, const Spectrum &spec);
void write_fidelity_csv(std::ostream &out, const FidelityTrace &trace);

}  // namespace ioncodesign

#endif
