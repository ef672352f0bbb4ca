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

#ifndef IONCODESIGN_HARNESS_HPP
#define IONCODESIGN_HARNESS_HPP

#include <cstdint>
#include <filesystem>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ioncodesign/hamiltonian.hpp"
#include "ioncodesign/spectroscopy.hpp"

namespace ioncodesign {

inline constexpr std::string_view kVersion = "0.3.0";

/// The frozen 4-spin instance used when a config names no Hamiltonian.
SpinHamiltonian default_hamiltonian();

struct SpectrumSettings {
    double gamma = 0.75;  // rad/ms
    double T = 4.0;       // ms
    int N_t = 41;
    OmegaGrid omega{0.0, 12.0, 241};

    std::vector<double> times() const { return uniform_times(T, N_t); }
};

struct CalibrationSettings {
    std::vector<double> phi_in{std::numbers::pi / 2.0, std::numbers::pi, 1.5 * std::numbers::pi,
                               2.0 * std::numbers::pi};
    std::vector<double> tau{5.0, 10.0, 20.0, 40.0};
    long long shots = 10000;
};

struct InferenceSettings {
    int iterations = 30;
    int r = 10;
    int n_runs = 5;
    double step = 0.3;          // rad/ms, proposal standard deviation
    double perturbation = 0.5;  // rad/ms, initial-guess offset from the truth
};

struct FeedforwardTableSettings {
    double phi_max = 2.0 * std::numbers::pi;
    int n_phi = 64;
    std::vector<double> lambda{0.0, 0.05, 0.1, 0.2, 0.5, 1.0, 2.0, 5.0};
    double phi_cap = 4.0 * std::numbers::pi;
};

struct NoiseStatsSettings {
    double phi_in = std::numbers::pi / 2.0;
    double tau = 10.0;  // ms
    std::vector<double> delta{0.0, 1.0, 2.0, 5.0, 10.0, 20.0, 50.0};
    long long samples = 100000;
};

struct ExperimentConfig {
    SpinHamiltonian hamiltonian = default_hamiltonian();
    std::string hamiltonian_source = "builtin";
    double c2 = 0.02;   // ms^-1
    double t_g = 0.01;  // ms
    double tau0 = 0.0;  // ms
    std::vector<int> r_list{3, 4, 6, 8, 11, 14, 18, 23, 28, 35, 42, 50, 56};
    int r = 14;  // single depth for simulate-spectrum
    std::optional<int> n_runs;  // unset: 40 for spectra, 10 for sweeps
    std::uint64_t seed = 20260;
    bool feedforward = false;
    bool correlated = true;
    bool noisy_single_qubit = false;
    SpectrumSettings spectrum;
    CalibrationSettings calibration;
    InferenceSettings inference;
    FeedforwardTableSettings feedforward_table;
    NoiseStatsSettings noise_stats;
    std::string output_dir = "results";

    GateTiming timing() const;
    Evolver evolver(int steps, int runs, std::uint64_t noise_seed) const;
    int spectrum_runs() const { return n_runs.value_or(40); }
    int sweep_runs() const { return n_runs.value_or(10); }
    void validate() const;
};

/// Parses a JSON config. Unknown keys and bad values raise ConfigError naming
/// the field. `base_dir` resolves a relative `hamiltonian_file`.
ExperimentConfig config_from_json(const std::string &text, const std::filesystem::path &base_dir = {});
ExperimentConfig load_config(const std::filesystem::path &path);
/// Canonical JSON: fixed key order, the Hamiltonian always inline.
std::string config_to_json(const ExperimentConfig &config);
/// FNV-1a (64 bit) of the canonical JSON.
std::uint64_t config_hash(const ExperimentConfig &config);
/// Applies IONCODESIGN_SEED if set. Returns true when it did.
bool apply_seed_env(ExperimentConfig &config);

struct SweepPoint {
    int r = 0;
    GateCounts counts;  // of the longest (t = T) circuit
    double F_int = 0.0;
    double D_H = 0.0;
    FidelityTrace fidelity;
    Spectrum spectrum;
};

struct SweepResult {
    Spectrum exact;
    std::vector<SweepPoint> points;
    int r_opt_by_Fint = 0;
    int r_opt_by_DH = 0;
};

/// Every r uses the same noise seed, so runs at different depths share
/// random numbers. Ties resolve towards the larger r.
SweepResult run_depth_sweep(const ExperimentConfig &config);

Spectrum exact_spectrum(const SpinHamiltonian &H, const SpectrumSettings &settings);
/// Run-averaged spectrum for the config's noise, depth `r` and `runs`.
Spectrum simulated_spectrum(const SpinHamiltonian &H, const ExperimentConfig &config, int r, int runs,
                            std::uint64_t noise_seed);

/// Free parameters: nonzero couplings J_ij (i < j) then nonzero fields h_i.
std::vector<double> hamiltonian_parameters(const SpinHamiltonian &H);
SpinHamiltonian with_parameters(const SpinHamiltonian &structure, const std::vector<double> &params);

struct InferenceStep {
    int iteration = 0;
    std::vector<double> params;
    double D_H = 0.0;
    bool accepted = false;
};

/// Coordinate-wise random local search. Each iteration perturbs one
/// parameter with a Gaussian step, trying +step then -step, and keeps the
/// first move that lowers D_H. The noisy objective reuses one noise seed, so
/// it is a deterministic function of the parameters. The log starts with the
/// initial evaluation as iteration 0.
std::vector<InferenceStep> run_inference_demo(const Spectrum &target, const SpinHamiltonian &initial_guess,
                                              int iterations, const ExperimentConfig &config);

/// Initial guess for the demo: the truth with every free parameter offset by
/// N(0, perturbation) drawn from `seed`.
SpinHamiltonian perturbed_guess(const SpinHamiltonian &truth, double perturbation, std::uint64_t seed);

enum class Command { SimulateSpectrum, DepthSweep, Calibrate, FeedforwardTableCmd, NoiseStats, Infer };
std::optional<Command> parse_command(std::string_view name);
std::string_view command_name(Command command);

/// Runs a subcommand, writing CSV/JSON files and manifest.json into `out_dir`.
/// Returns a short JSON summary.
std::string run_command(Command command, const ExperimentConfig &config, const std::filesystem::path &out_dir);

}  // namespace ioncodesign

#endif
