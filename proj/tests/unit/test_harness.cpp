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

#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "ioncodesign/errors.hpp"
#include "ioncodesign/harness.hpp"
#include "ioncodesign/rng.hpp"

using namespace ioncodesign;
namespace fs = std::filesystem;

namespace {

std::string field_of(const std::string &text) {
    try {
        config_from_json(text);
    } catch (const ConfigError &e) {
        return e.field();
    }
    return "none";
}

/// Small and fast: 3 spins, short spectra, few runs.
ExperimentConfig small_config() {
    ExperimentConfig c;
    c.hamiltonian = random_hamiltonian(3, 4);
    c.spectrum.N_t = 11;
    c.spectrum.omega = {0.0, 12.0, 61};
    c.r_list = {2, 4, 8};
    c.n_runs = 3;
    c.inference.r = 3;
    c.inference.n_runs = 2;
    return c;
}

fs::path scratch_dir(const std::string &name) {
    const auto p = fs::temp_directory_path() / ("ioncodesign_harness_" + name);
    fs::remove_all(p);
    return p;
}

std::string slurp(const fs::path &p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

}  // namespace

TEST_CASE("default config values") {
    const auto c = config_from_json("{}");
    CHECK(c.c2 == 0.02);
    CHECK(c.t_g == 0.01);
    CHECK(c.seed == 20260);
    CHECK(c.hamiltonian == default_hamiltonian());
    CHECK(c.spectrum_runs() == 40);
    CHECK(c.sweep_runs() == 10);
    CHECK_FALSE(c.feedforward);
    CHECK(c.timing().noisy_kinds.size() == 1);
}

TEST_CASE("default Hamiltonian matches the fixture and seed 1") {
    CHECK(default_hamiltonian() == random_hamiltonian(4, 1));
    const fs::path fixture = fs::path(IONCODESIGN_SOURCE_DIR) / "fixtures" / "default_4spin.json";
    CHECK(load_hamiltonian(fixture.string()) == default_hamiltonian());
    const auto c = config_from_json(R"({"hamiltonian_file": "fixtures/default_4spin.json"})", IONCODESIGN_SOURCE_DIR);
    CHECK(c.hamiltonian == default_hamiltonian());
    CHECK(config_from_json(R"({"hamiltonian": "default"})").hamiltonian == default_hamiltonian());
}

TEST_CASE("config fields are parsed") {
    const auto c = config_from_json(R"({
        "hamiltonian": {"n": 2, "J": [[0, 0.5], [0.5, 0]], "h": [1.0, -1.0]},
        "c2": 0.005, "t_g": 0.02, "tau0": 1.0, "r_range": {"start": 2, "stop": 10, "step": 4},
        "r": 7, "n_runs": 12, "seed": 9, "feedforward": true, "correlated": false, "noisy_single_qubit": true,
        "spectrum": {"gamma": 0.5, "T": 3, "N_t": 31, "omega_min": -1, "omega_max": 5, "n_omega": 50},
        "calibration": {"phi_in": [1, 2], "tau_ms": [3, 4, 5], "shots": 77},
        "inference": {"iterations": 3, "r": 2, "n_runs": 1, "step": 0.1, "perturbation": 0.2},
        "feedforward_table": {"phi_max": 3, "n_phi": 5, "lambda": [0, 1], "phi_cap": 6},
        "noise_stats": {"phi_in": 1, "tau": 2, "delta": [0, 1], "samples": 10},
        "output_dir": "elsewhere"
    })");
    CHECK(c.hamiltonian.num_spins() == 2);
    CHECK(c.hamiltonian_source == "inline");
    CHECK(c.c2 == 0.005);
    CHECK(c.r_list == std::vector<int>{2, 6, 10});
    CHECK(c.sweep_runs() == 12);
    CHECK(c.spectrum_runs() == 12);
    CHECK(c.feedforward);
    CHECK_FALSE(c.correlated);
    CHECK(c.timing().noisy_kinds.size() == 4);
    CHECK(c.timing().tau0 == 1.0);
    CHECK(c.spectrum.omega.count == 50);
    CHECK(c.calibration.tau.size() == 3);
    CHECK(c.calibration.shots == 77);
    CHECK(c.inference.perturbation == 0.2);
    CHECK(c.feedforward_table.phi_cap == 6.0);
    CHECK(c.noise_stats.samples == 10);
    CHECK(c.output_dir == "elsewhere");
}

TEST_CASE("config errors name the offending field") {
    CHECK(field_of(R"({"c3": 1})") == "c3");
    CHECK(field_of(R"({"c2": -1})") == "c2");
    CHECK(field_of(R"({"c2": "big"})") == "c2");
    CHECK(field_of(R"({"spectrum": {"gama": 1}})") == "spectrum.gama");
    CHECK(field_of(R"({"spectrum": {"N_t": 1}})") == "spectrum.N_t");
    CHECK(field_of(R"({"r_list": []})") == "r_list");
    CHECK(field_of(R"({"r_list": [3, 0]})") == "r_list");
    CHECK(field_of(R"({"r_range": {"start": 5, "stop": 2}})") == "r_range.stop");
    CHECK(field_of(R"({"seed": -3})") == "seed");
    CHECK(field_of(R"({"n_runs": 0})") == "n_runs");
    CHECK(field_of(R"({"feedforward": 1})") == "feedforward");
    CHECK(field_of(R"({"calibration": {"shots": 0}})") == "calibration.shots");
    CHECK(field_of(R"({"hamiltonian": "other"})") == "hamiltonian");
    CHECK(field_of(R"({"hamiltonian": {"n": 2, "J": [[0, 1], [1, 0]], "h": [1]}})") == "hamiltonian.h");
    CHECK(field_of(R"({"hamiltonian_file": "/no/such/file.json"})") == "hamiltonian_file");
    CHECK(field_of(R"({"r_list": [3], "r_range": {"start": 1, "stop": 2}})") == "r_range");
    CHECK(field_of("[1, 2]") == "config");
    CHECK(field_of("{oops") == "config");
    CHECK_THROWS_AS(load_config("/no/such/config.json"), ConfigError);
}

TEST_CASE("canonical JSON round trips and the hash tracks content") {
    auto c = small_config();
    c.feedforward = true;
    const auto back = config_from_json(config_to_json(c));
    CHECK(config_to_json(back) == config_to_json(c));
    CHECK(config_hash(back) == config_hash(c));
    auto d = c;
    d.c2 = 0.021;
    CHECK(config_hash(d) != config_hash(c));
    CHECK(config_hash(config_from_json("{}")) == config_hash(ExperimentConfig{}));
    // Unset n_runs serializes as null and parses back as unset.
    const ExperimentConfig defaults;
    CHECK(config_to_json(config_from_json(config_to_json(defaults))) == config_to_json(defaults));
}

TEST_CASE("IONCODESIGN_SEED overrides the seed") {
    ExperimentConfig c;
    ::unsetenv("IONCODESIGN_SEED");
    CHECK_FALSE(apply_seed_env(c));
    ::setenv("IONCODESIGN_SEED", "1234", 1);
    CHECK(apply_seed_env(c));
    CHECK(c.seed == 1234);
    ::setenv("IONCODESIGN_SEED", "12x", 1);
    CHECK_THROWS_AS(apply_seed_env(c), ConfigError);
    ::setenv("IONCODESIGN_SEED", "-5", 1);
    CHECK_THROWS_AS(apply_seed_env(c), ConfigError);
    ::unsetenv("IONCODESIGN_SEED");
}

TEST_CASE("evolver follows the config") {
    auto c = small_config();
    CHECK(c.evolver(4, 3, 1).kind == EvolverKind::NoisyTrotter);
    c.c2 = 0.0;
    CHECK(c.evolver(4, 3, 1).kind == EvolverKind::NoiselessTrotter);
}

TEST_CASE("noiseless sweep: fidelity grows with depth and the deepest circuit wins") {
    auto c = small_config();
    c.c2 = 0.0;
    c.r_list = {2, 4, 8, 16};
    const auto sweep = run_depth_sweep(c);
    REQUIRE(sweep.points.size() == 4);
    for (std::size_t k = 1; k < sweep.points.size(); ++k) {
        CHECK(sweep.points[k].F_int >= sweep.points[k - 1].F_int);
        CHECK(sweep.points[k].counts.total == 2 * sweep.points[k - 1].counts.total);
    }
    CHECK(sweep.r_opt_by_Fint == 16);
    CHECK(sweep.points.back().F_int > 0.99);
}

TEST_CASE("sweep with a single depth picks it") {
    auto c = small_config();
    c.r_list = {5};
    const auto sweep = run_depth_sweep(c);
    CHECK(sweep.r_opt_by_Fint == 5);
    CHECK(sweep.r_opt_by_DH == 5);
    CHECK(sweep.points[0].D_H >= 0.0);
    CHECK(sweep.points[0].D_H <= 1.0);
}

TEST_CASE("sweep is reproducible") {
    const auto c = small_config();
    const auto a = run_depth_sweep(c);
    const auto b = run_depth_sweep(c);
    for (std::size_t k = 0; k < a.points.size(); ++k) {
        CHECK(a.points[k].F_int == b.points[k].F_int);
        CHECK(a.points[k].D_H == b.points[k].D_H);
    }
}

TEST_CASE("parameter vector round trip") {
    const auto H = random_hamiltonian(3, 2);
    const auto p = hamiltonian_parameters(H);
    CHECK(p.size() == 6);
    CHECK(with_parameters(H, p) == H);
    auto q = p;
    q[0] += 0.5;
    const auto moved = with_parameters(H, q);
    CHECK(moved.coupling(0, 1) == doctest::Approx(H.coupling(0, 1) + 0.5));
    CHECK(moved.coupling(1, 0) == moved.coupling(0, 1));
    q.pop_back();
    CHECK_THROWS_AS(with_parameters(H, q), InvalidArgument);
}

TEST_CASE("inference started at the truth stays there with zero distance") {
    const auto c = small_config();
    const auto target = simulated_spectrum(c.hamiltonian, c, c.inference.r, c.inference.n_runs,
                                           derive_seed(c.seed, {0x4e4f}));
    const auto log = run_inference_demo(target, c.hamiltonian, 4, c);
    REQUIRE(log.size() == 5);
    for (const auto &step : log) {
        CHECK(step.D_H == 0.0);
        CHECK_FALSE(step.accepted);
        CHECK(step.params == hamiltonian_parameters(c.hamiltonian));
    }
}

TEST_CASE("inference: zero iterations and a non-increasing objective") {
    const auto c = small_config();
    const auto target = exact_spectrum(c.hamiltonian, c.spectrum);
    const auto guess = perturbed_guess(c.hamiltonian, 0.5, 3);
    CHECK(run_inference_demo(target, guess, 0, c).size() == 1);
    const auto log = run_inference_demo(target, guess, 8, c);
    REQUIRE(log.size() == 9);
    CHECK(log[0].iteration == 0);
    for (std::size_t k = 1; k < log.size(); ++k) {
        CHECK(log[k].D_H <= log[k - 1].D_H);
        if (!log[k].accepted) CHECK(log[k].params == log[k - 1].params);
    }
    CHECK_THROWS_AS(run_inference_demo(target, guess, -1, c), InvalidArgument);
}

TEST_CASE("perturbed guess keeps the coupling graph") {
    const auto H = random_hamiltonian(3, 5);
    const auto g = perturbed_guess(H, 0.5, 1);
    CHECK(g.active_pairs() == H.active_pairs());
    CHECK_FALSE(g == H);
    CHECK(perturbed_guess(H, 0.0, 1) == H);
    CHECK(perturbed_guess(H, 0.5, 1) == g);
}

TEST_CASE("command names round trip") {
    for (auto cmd : {Command::SimulateSpectrum, Command::DepthSweep, Command::Calibrate, Command::FeedforwardTableCmd,
                     Command::NoiseStats, Command::Infer}) {
        CHECK(parse_command(command_name(cmd)) == cmd);
    }
    CHECK_FALSE(parse_command("explore").has_value());
}

TEST_CASE("run_command writes its files and a manifest") {
    auto c = small_config();
    c.calibration.shots = 200;
    c.noise_stats.samples = 2000;
    c.feedforward_table.n_phi = 4;
    c.feedforward_table.lambda = {0.0, 0.5};
    struct Case {
        Command cmd;
        std::vector<std::string> files;
    };
    const std::vector<Case> cases{
        {Command::Calibrate, {"calibration.csv", "calibration_fit.json"}},
        {Command::NoiseStats, {"noise_moments.csv", "noise_correlation.csv"}},
        {Command::FeedforwardTableCmd, {"feedforward_table.csv"}},
        {Command::SimulateSpectrum, {"exact_spectrum.csv", "spectrum.csv", "response.csv", "fidelity.csv", "summary.json"}},
    };
    for (const auto &k : cases) {
        const auto dir = scratch_dir(std::string(command_name(k.cmd)));
        const auto summary = run_command(k.cmd, c, dir);
        CHECK(nlohmann::json::parse(summary).is_object());
        for (const auto &f : k.files) CHECK(fs::exists(dir / f));
        const auto manifest = nlohmann::json::parse(slurp(dir / "manifest.json"));
        CHECK(manifest.at("command") == std::string(command_name(k.cmd)));
        CHECK(manifest.at("seed") == c.seed);
        CHECK(manifest.at("files").size() == k.files.size());
        const auto first = slurp(dir / k.files.front());
        run_command(k.cmd, c, dir);
        CHECK(slurp(dir / k.files.front()) == first);
        fs::remove_all(dir);
    }
}
