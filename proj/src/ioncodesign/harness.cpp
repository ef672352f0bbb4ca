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

#include "ioncodesign/harness.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <json.hpp>
#include <numbers>
#include <random>
#include <set>
#include <sstream>

#include "ioncodesign/calibration.hpp"
#include "ioncodesign/errors.hpp"
#include "ioncodesign/feedforward.hpp"
#include "ioncodesign/motional_noise.hpp"
#include "ioncodesign/rng.hpp"

namespace ioncodesign {

using Json = nlohmann::json;
using OrderedJson = nlohmann::ordered_json;

SpinHamiltonian default_hamiltonian() { return random_hamiltonian(4, 1); }

GateTiming ExperimentConfig::timing() const {
    GateTiming t;
    t.t_g = t_g;
    t.tau0 = tau0;
    if (noisy_single_qubit) t.noisy_kinds = {GateKind::RX, GateKind::RY, GateKind::RZ, GateKind::XX};
    return t;
}

Evolver ExperimentConfig::evolver(int steps, int runs, std::uint64_t noise_seed) const {
    if (c2 == 0.0) return Evolver::noiseless_trotter(steps, timing());
    return Evolver::noisy_trotter(steps, NoiseParams{c2, noise_seed, correlated}, runs, feedforward, timing());
}

void ExperimentConfig::validate() const {
    if (!(c2 >= 0.0) || !std::isfinite(c2)) throw ConfigError("c2", "must be a finite number >= 0");
    if (!(t_g > 0.0) || !std::isfinite(t_g)) throw ConfigError("t_g", "must be > 0");
    if (!(tau0 >= 0.0) || !std::isfinite(tau0)) throw ConfigError("tau0", "must be >= 0");
    if (r_list.empty()) throw ConfigError("r_list", "must not be empty");
    for (int v : r_list) {
        if (v < 1) throw ConfigError("r_list", "entries must be >= 1");
    }
    if (r < 1) throw ConfigError("r", "must be >= 1");
    if (n_runs && *n_runs < 1) throw ConfigError("n_runs", "must be >= 1");
    if (!(spectrum.gamma > 0.0)) throw ConfigError("spectrum.gamma", "must be > 0");
    if (!(spectrum.T > 0.0)) throw ConfigError("spectrum.T", "must be > 0");
    if (spectrum.N_t < 2) throw ConfigError("spectrum.N_t", "must be >= 2");
    if (spectrum.omega.count < 2) throw ConfigError("spectrum.n_omega", "must be >= 2");
    if (!(spectrum.omega.max > spectrum.omega.min)) throw ConfigError("spectrum.omega_max", "must exceed omega_min");
    if (calibration.phi_in.empty()) throw ConfigError("calibration.phi_in", "must not be empty");
    if (calibration.tau.empty()) throw ConfigError("calibration.tau_ms", "must not be empty");
    for (double t : calibration.tau) {
        if (!(t >= 0.0)) throw ConfigError("calibration.tau_ms", "entries must be >= 0");
    }
    if (calibration.shots < 1) throw ConfigError("calibration.shots", "must be >= 1");
    if (inference.iterations < 0) throw ConfigError("inference.iterations", "must be >= 0");
    if (inference.r < 1) throw ConfigError("inference.r", "must be >= 1");
    if (inference.n_runs < 1) throw ConfigError("inference.n_runs", "must be >= 1");
    if (!(inference.step > 0.0)) throw ConfigError("inference.step", "must be > 0");
    if (!(inference.perturbation >= 0.0)) throw ConfigError("inference.perturbation", "must be >= 0");
    if (!(feedforward_table.phi_max > 0.0)) throw ConfigError("feedforward_table.phi_max", "must be > 0");
    if (feedforward_table.n_phi < 2) throw ConfigError("feedforward_table.n_phi", "must be >= 2");
    if (feedforward_table.lambda.empty()) throw ConfigError("feedforward_table.lambda", "must not be empty");
    for (double l : feedforward_table.lambda) {
        if (!(l >= 0.0)) throw ConfigError("feedforward_table.lambda", "entries must be >= 0");
    }
    if (!(feedforward_table.phi_cap > 0.0)) throw ConfigError("feedforward_table.phi_cap", "must be > 0");
    if (!(noise_stats.tau > 0.0)) throw ConfigError("noise_stats.tau", "must be > 0");
    if (!(noise_stats.phi_in > 0.0)) throw ConfigError("noise_stats.phi_in", "must be > 0");
    for (double d : noise_stats.delta) {
        if (!(d >= 0.0)) throw ConfigError("noise_stats.delta", "entries must be >= 0");
    }
    if (noise_stats.samples < 2) throw ConfigError("noise_stats.samples", "must be >= 2");
}

namespace {

double get_number(const Json &j, const std::string &field) {
    if (!j.is_number()) throw ConfigError(field, "expected a number");
    return j.get<double>();
}

bool get_bool(const Json &j, const std::string &field) {
    if (!j.is_boolean()) throw ConfigError(field, "expected true or false");
    return j.get<bool>();
}

long long get_integer(const Json &j, const std::string &field) {
    if (!j.is_number_integer()) throw ConfigError(field, "expected an integer");
    return j.get<long long>();
}

int get_int(const Json &j, const std::string &field) {
    const long long v = get_integer(j, field);
    if (v < -1000000000LL || v > 1000000000LL) throw ConfigError(field, "out of range");
    return static_cast<int>(v);
}

std::vector<double> get_numbers(const Json &j, const std::string &field) {
    if (!j.is_array()) throw ConfigError(field, "expected an array of numbers");
    std::vector<double> out;
    for (const auto &v : j) out.push_back(get_number(v, field));
    return out;
}

template <typename Handler>
void for_each_key(const Json &obj, const std::string &prefix, Handler &&handle) {
    if (!obj.is_object()) throw ConfigError(prefix, "expected an object");
    for (const auto &[key, value] : obj.items()) {
        if (!handle(key, value)) throw ConfigError(prefix + "." + key, "unknown key");
    }
}

}  // namespace

ExperimentConfig config_from_json(const std::string &text, const std::filesystem::path &base_dir) {
    Json doc;
    try {
        doc = Json::parse(text);
    } catch (const Json::exception &e) {
        throw ConfigError("config", std::string("invalid JSON: ") + e.what());
    }
    if (!doc.is_object()) throw ConfigError("config", "top level must be an object");
    if (doc.contains("hamiltonian") && doc.contains("hamiltonian_file")) {
        throw ConfigError("hamiltonian_file", "give either hamiltonian or hamiltonian_file, not both");
    }
    if (doc.contains("r_list") && doc.contains("r_range")) {
        throw ConfigError("r_range", "give either r_list or r_range, not both");
    }

    ExperimentConfig cfg;
    for (const auto &[key, v] : doc.items()) {
        if (key == "hamiltonian") {
            if (v.is_string()) {
                if (v.get<std::string>() != "default") throw ConfigError("hamiltonian", "the only named instance is \"default\"");
            } else {
                cfg.hamiltonian = hamiltonian_from_json(v.dump());
                cfg.hamiltonian_source = "inline";
            }
        } else if (key == "hamiltonian_file") {
            if (!v.is_string()) throw ConfigError("hamiltonian_file", "expected a path");
            std::filesystem::path p = v.get<std::string>();
            if (p.is_relative() && !base_dir.empty()) p = base_dir / p;
            if (!std::filesystem::exists(p)) throw ConfigError("hamiltonian_file", "no such file '" + p.string() + "'");
            cfg.hamiltonian = load_hamiltonian(p.string());
            cfg.hamiltonian_source = v.get<std::string>();
        } else if (key == "c2") {
            cfg.c2 = get_number(v, key);
        } else if (key == "t_g") {
            cfg.t_g = get_number(v, key);
        } else if (key == "tau0") {
            cfg.tau0 = get_number(v, key);
        } else if (key == "r_list") {
            if (!v.is_array()) throw ConfigError(key, "expected an array of integers");
            cfg.r_list.clear();
            for (const auto &e : v) cfg.r_list.push_back(get_int(e, key));
        } else if (key == "r_range") {
            int start = 1, stop = 0, step = 1;
            for_each_key(v, key, [&](const std::string &k, const Json &e) {
                if (k == "start") start = get_int(e, "r_range.start");
                else if (k == "stop") stop = get_int(e, "r_range.stop");
                else if (k == "step") step = get_int(e, "r_range.step");
                else return false;
                return true;
            });
            if (step < 1) throw ConfigError("r_range.step", "must be >= 1");
            if (stop < start) throw ConfigError("r_range.stop", "must be >= start");
            cfg.r_list.clear();
            for (int r = start; r <= stop; r += step) cfg.r_list.push_back(r);
        } else if (key == "r") {
            cfg.r = get_int(v, key);
        } else if (key == "n_runs") {
            // null means "use the per-command default".
            if (v.is_null()) cfg.n_runs.reset();
            else cfg.n_runs = get_int(v, key);
        } else if (key == "seed") {
            const long long s = get_integer(v, key);
            if (s < 0) throw ConfigError(key, "must be >= 0");
            cfg.seed = static_cast<std::uint64_t>(s);
        } else if (key == "feedforward") {
            cfg.feedforward = get_bool(v, key);
        } else if (key == "correlated") {
            cfg.correlated = get_bool(v, key);
        } else if (key == "noisy_single_qubit") {
            cfg.noisy_single_qubit = get_bool(v, key);
        } else if (key == "output_dir") {
            if (!v.is_string()) throw ConfigError(key, "expected a path");
            cfg.output_dir = v.get<std::string>();
        } else if (key == "spectrum") {
            auto &s = cfg.spectrum;
            for_each_key(v, key, [&](const std::string &k, const Json &e) {
                const std::string f = "spectrum." + k;
                if (k == "gamma") s.gamma = get_number(e, f);
                else if (k == "T") s.T = get_number(e, f);
                else if (k == "N_t") s.N_t = get_int(e, f);
                else if (k == "omega_min") s.omega.min = get_number(e, f);
                else if (k == "omega_max") s.omega.max = get_number(e, f);
                else if (k == "n_omega") s.omega.count = get_int(e, f);
                else return false;
                return true;
            });
        } else if (key == "calibration") {
            auto &c = cfg.calibration;
            for_each_key(v, key, [&](const std::string &k, const Json &e) {
                const std::string f = "calibration." + k;
                if (k == "phi_in") c.phi_in = get_numbers(e, f);
                else if (k == "tau_ms") c.tau = get_numbers(e, f);
                else if (k == "shots") c.shots = get_integer(e, f);
                else return false;
                return true;
            });
        } else if (key == "inference") {
            auto &c = cfg.inference;
            for_each_key(v, key, [&](const std::string &k, const Json &e) {
                const std::string f = "inference." + k;
                if (k == "iterations") c.iterations = get_int(e, f);
                else if (k == "r") c.r = get_int(e, f);
                else if (k == "n_runs") c.n_runs = get_int(e, f);
                else if (k == "step") c.step = get_number(e, f);
                else if (k == "perturbation") c.perturbation = get_number(e, f);
                else return false;
                return true;
            });
        } else if (key == "feedforward_table") {
            auto &c = cfg.feedforward_table;
            for_each_key(v, key, [&](const std::string &k, const Json &e) {
                const std::string f = "feedforward_table." + k;
                if (k == "phi_max") c.phi_max = get_number(e, f);
                else if (k == "n_phi") c.n_phi = get_int(e, f);
                else if (k == "lambda") c.lambda = get_numbers(e, f);
                else if (k == "phi_cap") c.phi_cap = get_number(e, f);
                else return false;
                return true;
            });
        } else if (key == "noise_stats") {
            auto &c = cfg.noise_stats;
            for_each_key(v, key, [&](const std::string &k, const Json &e) {
                const std::string f = "noise_stats." + k;
                if (k == "phi_in") c.phi_in = get_number(e, f);
                else if (k == "tau") c.tau = get_number(e, f);
                else if (k == "delta") c.delta = get_numbers(e, f);
                else if (k == "samples") c.samples = get_integer(e, f);
                else return false;
                return true;
            });
        } else {
            throw ConfigError(key, "unknown key");
        }
    }
    cfg.validate();
    return cfg;
}

ExperimentConfig load_config(const std::filesystem::path &path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config", "cannot open '" + path.string() + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return config_from_json(buf.str(), path.parent_path());
}

std::string config_to_json(const ExperimentConfig &c) {
    OrderedJson doc;
    doc["hamiltonian"] = OrderedJson::parse(hamiltonian_to_json(c.hamiltonian));
    doc["c2"] = c.c2;
    doc["t_g"] = c.t_g;
    doc["tau0"] = c.tau0;
    doc["r_list"] = c.r_list;
    doc["r"] = c.r;
    doc["n_runs"] = c.n_runs ? OrderedJson(*c.n_runs) : OrderedJson(nullptr);
    doc["seed"] = c.seed;
    doc["feedforward"] = c.feedforward;
    doc["correlated"] = c.correlated;
    doc["noisy_single_qubit"] = c.noisy_single_qubit;
    doc["spectrum"] = {{"gamma", c.spectrum.gamma},         {"T", c.spectrum.T},
                       {"N_t", c.spectrum.N_t},             {"omega_min", c.spectrum.omega.min},
                       {"omega_max", c.spectrum.omega.max}, {"n_omega", c.spectrum.omega.count}};
    doc["calibration"] = {{"phi_in", c.calibration.phi_in}, {"tau_ms", c.calibration.tau}, {"shots", c.calibration.shots}};
    doc["inference"] = {{"iterations", c.inference.iterations},
                        {"r", c.inference.r},
                        {"n_runs", c.inference.n_runs},
                        {"step", c.inference.step},
                        {"perturbation", c.inference.perturbation}};
    doc["feedforward_table"] = {{"phi_max", c.feedforward_table.phi_max},
                                {"n_phi", c.feedforward_table.n_phi},
                                {"lambda", c.feedforward_table.lambda},
                                {"phi_cap", c.feedforward_table.phi_cap}};
    doc["noise_stats"] = {{"phi_in", c.noise_stats.phi_in},
                          {"tau", c.noise_stats.tau},
                          {"delta", c.noise_stats.delta},
                          {"samples", c.noise_stats.samples}};
    doc["output_dir"] = c.output_dir;
    return doc.dump();
}

std::uint64_t config_hash(const ExperimentConfig &config) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : config_to_json(config)) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    return h;
}

bool apply_seed_env(ExperimentConfig &config) {
    const char *raw = std::getenv("IONCODESIGN_SEED");
    if (raw == nullptr || *raw == '\0') return false;
    char *end = nullptr;
    errno = 0;
    const unsigned long long v = std::strtoull(raw, &end, 10);
    if (errno != 0 || *end != '\0' || raw[0] == '-') {
        throw ConfigError("IONCODESIGN_SEED", "must be a non-negative integer");
    }
    config.seed = v;
    return true;
}

Spectrum exact_spectrum(const SpinHamiltonian &H, const SpectrumSettings &settings) {
    const auto times = settings.times();
    return spectrum(response_function(H, Evolver::exact(), times), settings.gamma, settings.omega.points());
}

Spectrum simulated_spectrum(const SpinHamiltonian &H, const ExperimentConfig &config, int r, int runs,
                            std::uint64_t noise_seed) {
    const auto times = config.spectrum.times();
    const auto series = response_function(H, config.evolver(r, runs, noise_seed), times);
    return spectrum(series, config.spectrum.gamma, config.spectrum.omega.points());
}

namespace {

std::uint64_t sweep_noise_seed(const ExperimentConfig &config) { return derive_seed(config.seed, {0x5357}); }

}  // namespace

SweepResult run_depth_sweep(const ExperimentConfig &config) {
    config.validate();
    const auto times = config.spectrum.times();
    const auto omega = config.spectrum.omega.points();
    SweepResult result;
    result.exact = exact_spectrum(config.hamiltonian, config.spectrum);
    const std::uint64_t noise_seed = sweep_noise_seed(config);
    for (int r : config.r_list) {
        SweepPoint point;
        point.r = r;
        point.counts = gate_counts(build_trotter_circuit(config.hamiltonian, config.spectrum.T, r, config.timing()));
        const auto sim = simulate(config.hamiltonian, config.evolver(r, config.sweep_runs(), noise_seed), times);
        point.fidelity = sim.fidelity;
        point.F_int = sim.fidelity.F_int;
        point.spectrum = spectrum(sim.response, config.spectrum.gamma, omega);
        point.D_H = hellinger(point.spectrum, result.exact);
        result.points.push_back(std::move(point));
    }
    const SweepPoint *best_f = &result.points.front();
    const SweepPoint *best_d = &result.points.front();
    for (const auto &p : result.points) {
        if (p.F_int > best_f->F_int || (p.F_int == best_f->F_int && p.r > best_f->r)) best_f = &p;
        if (p.D_H < best_d->D_H || (p.D_H == best_d->D_H && p.r > best_d->r)) best_d = &p;
    }
    result.r_opt_by_Fint = best_f->r;
    result.r_opt_by_DH = best_d->r;
    return result;
}

std::vector<double> hamiltonian_parameters(const SpinHamiltonian &H) {
    std::vector<double> out;
    for (const auto &[i, j] : H.active_pairs()) out.push_back(H.coupling(i, j));
    for (int i = 0; i < H.num_spins(); ++i) {
        if (H.field(i) != 0.0) out.push_back(H.field(i));
    }
    return out;
}

SpinHamiltonian with_parameters(const SpinHamiltonian &structure, const std::vector<double> &params) {
    const int n = structure.num_spins();
    const auto pairs = structure.active_pairs();
    std::size_t n_fields = 0;
    for (int i = 0; i < n; ++i) n_fields += structure.field(i) != 0.0 ? 1 : 0;
    if (params.size() != pairs.size() + n_fields) throw InvalidArgument("with_parameters: wrong parameter count");
    std::vector<double> J(static_cast<std::size_t>(n * n), 0.0);
    std::vector<double> h(static_cast<std::size_t>(n), 0.0);
    std::size_t k = 0;
    for (const auto &[i, j] : pairs) {
        J[static_cast<std::size_t>(i * n + j)] = params[k];
        J[static_cast<std::size_t>(j * n + i)] = params[k];
        ++k;
    }
    for (int i = 0; i < n; ++i) {
        if (structure.field(i) != 0.0) h[static_cast<std::size_t>(i)] = params[k++];
    }
    return SpinHamiltonian(n, std::move(J), std::move(h));
}

SpinHamiltonian perturbed_guess(const SpinHamiltonian &truth, double perturbation, std::uint64_t seed) {
    Rng rng(seed);
    std::normal_distribution<double> offset(0.0, perturbation);
    auto params = hamiltonian_parameters(truth);
    // A parameter that lands on exactly zero would drop out of the structure.
    for (auto &p : params) {
        double q = p + (perturbation > 0.0 ? offset(rng) : 0.0);
        p = q == 0.0 ? p : q;
    }
    return with_parameters(truth, params);
}

std::vector<InferenceStep> run_inference_demo(const Spectrum &target, const SpinHamiltonian &initial_guess,
                                              int iterations, const ExperimentConfig &config) {
    if (iterations < 0) throw InvalidArgument("run_inference_demo: iterations must be >= 0");
    const std::uint64_t noise_seed = derive_seed(config.seed, {0x4e4f});
    const auto objective = [&](const std::vector<double> &params) {
        const auto H = with_parameters(initial_guess, params);
        return hellinger(simulated_spectrum(H, config, config.inference.r, config.inference.n_runs, noise_seed), target);
    };
    auto params = hamiltonian_parameters(initial_guess);
    double current = objective(params);
    std::vector<InferenceStep> log{{0, params, current, false}};
    if (params.empty()) return log;

    Rng rng(derive_seed(config.seed, {0x5052}));
    std::normal_distribution<double> step(0.0, config.inference.step);
    for (int it = 1; it <= iterations; ++it) {
        const std::size_t k = static_cast<std::size_t>(it - 1) % params.size();
        const double delta = std::abs(step(rng));
        bool accepted = false;
        for (double sign : {1.0, -1.0}) {
            auto trial = params;
            trial[k] += sign * delta;
            // Keep the coupling graph fixed.
            if (trial[k] == 0.0) continue;
            const double value = objective(trial);
            if (value < current) {
                params = std::move(trial);
                current = value;
                accepted = true;
                break;
            }
        }
        log.push_back({it, params, current, accepted});
    }
    return log;
}

std::optional<Command> parse_command(std::string_view name) {
    if (name == "simulate-spectrum") return Command::SimulateSpectrum;
    if (name == "depth-sweep") return Command::DepthSweep;
    if (name == "calibrate") return Command::Calibrate;
    if (name == "feedforward-table") return Command::FeedforwardTableCmd;
    if (name == "noise-stats") return Command::NoiseStats;
    if (name == "infer") return Command::Infer;
    return std::nullopt;
}

std::string_view command_name(Command command) {
    switch (command) {
        case Command::SimulateSpectrum: return "simulate-spectrum";
        case Command::DepthSweep: return "depth-sweep";
        case Command::Calibrate: return "calibrate";
        case Command::FeedforwardTableCmd: return "feedforward-table";
        case Command::NoiseStats: return "noise-stats";
        case Command::Infer: return "infer";
    }
    return "?";
}

namespace {

class OutputDir {
   public:
    explicit OutputDir(std::filesystem::path dir) : dir_(std::move(dir)) {
        std::error_code ec;
        std::filesystem::create_directories(dir_, ec);
        if (ec) throw IoError("cannot create output directory '" + dir_.string() + "': " + ec.message());
    }

    template <typename Writer>
    void write(const std::string &name, Writer &&writer) {
        std::ofstream out(dir_ / name, std::ios::binary);
        if (!out) throw IoError("cannot write '" + (dir_ / name).string() + "'");
        writer(out);
        out.flush();
        if (!out) throw IoError("write failed for '" + (dir_ / name).string() + "'");
        files_.insert(name);
    }

    void write_text(const std::string &name, const std::string &text) {
        write(name, [&](std::ostream &o) { o << text; });
    }

    void write_manifest(Command command, const ExperimentConfig &config) {
        OrderedJson m;
        m["tool"] = "ioncodesign";
        m["version"] = kVersion;
        m["command"] = command_name(command);
        m["seed"] = config.seed;
        char hash[24];
        std::snprintf(hash, sizeof hash, "%016llx", static_cast<unsigned long long>(config_hash(config)));
        m["config_hash"] = hash;
        m["config"] = OrderedJson::parse(config_to_json(config));
        m["files"] = std::vector<std::string>(files_.begin(), files_.end());
        write_text("manifest.json", m.dump(2) + "\n");
    }

   private:
    std::filesystem::path dir_;
    std::set<std::string> files_;
};

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

OrderedJson counts_json(const GateCounts &c) {
    return {{"total", c.total}, {"two_qubit", c.two_qubit}, {"single_qubit", c.single_qubit}};
}

std::string run_simulate_spectrum(const ExperimentConfig &config, OutputDir &out) {
    const auto times = config.spectrum.times();
    const auto omega = config.spectrum.omega.points();
    const auto exact = exact_spectrum(config.hamiltonian, config.spectrum);
    const auto sim =
        simulate(config.hamiltonian, config.evolver(config.r, config.spectrum_runs(), sweep_noise_seed(config)), times);
    const auto spec = spectrum(sim.response, config.spectrum.gamma, omega);
    const double d = hellinger(spec, exact);
    const auto counts =
        gate_counts(build_trotter_circuit(config.hamiltonian, config.spectrum.T, config.r, config.timing()));
    out.write("exact_spectrum.csv", [&](std::ostream &o) { write_spectrum_csv(o, exact); });
    out.write("spectrum.csv", [&](std::ostream &o) { write_spectrum_csv(o, spec); });
    out.write("response.csv", [&](std::ostream &o) { write_response_csv(o, sim.response); });
    out.write("fidelity.csv", [&](std::ostream &o) { write_fidelity_csv(o, sim.fidelity); });
    OrderedJson s{{"r", config.r},
                  {"n_runs", config.spectrum_runs()},
                  {"feedforward", config.feedforward},
                  {"gate_counts", counts_json(counts)},
                  {"F_int", sim.fidelity.F_int},
                  {"D_H", d}};
    out.write_text("summary.json", s.dump(2) + "\n");
    return s.dump();
}

std::string run_sweep(const ExperimentConfig &config, OutputDir &out) {
    const auto result = run_depth_sweep(config);
    OrderedJson points = OrderedJson::array();
    for (const auto &p : result.points) {
        points.push_back({{"r", p.r}, {"gate_counts", counts_json(p.counts)}, {"F_int", p.F_int}, {"D_H", p.D_H}});
        const std::string suffix = "_r" + std::to_string(p.r) + ".csv";
        out.write("fidelity" + suffix, [&](std::ostream &o) { write_fidelity_csv(o, p.fidelity); });
        out.write("spectrum" + suffix, [&](std::ostream &o) { write_spectrum_csv(o, p.spectrum); });
    }
    out.write("exact_spectrum.csv", [&](std::ostream &o) { write_spectrum_csv(o, result.exact); });
    out.write("sweep.csv", [&](std::ostream &o) {
        o << "r,gates_total,gates_two_qubit,gates_single_qubit,F_int,D_H\n";
        for (const auto &p : result.points) {
            o << p.r << ',' << p.counts.total << ',' << p.counts.two_qubit << ',' << p.counts.single_qubit << ','
              << fmt(p.F_int) << ',' << fmt(p.D_H) << '\n';
        }
    });
    OrderedJson doc{{"c2", config.c2},
                    {"feedforward", config.feedforward},
                    {"n_runs", config.sweep_runs()},
                    {"points", points},
                    {"r_opt_by_Fint", result.r_opt_by_Fint},
                    {"r_opt_by_DH", result.r_opt_by_DH}};
    out.write_text("sweep.json", doc.dump(2) + "\n");
    return OrderedJson{{"r_opt_by_Fint", result.r_opt_by_Fint}, {"r_opt_by_DH", result.r_opt_by_DH}}.dump();
}

std::string run_calibrate(const ExperimentConfig &config, OutputDir &out) {
    const auto &cal = config.calibration;
    const auto curve = simulate_calibration(cal.phi_in, cal.tau, config.c2, cal.shots, derive_seed(config.seed, {0x4341}));
    const auto fit = fit_c2(curve);
    const auto damping = fit_phase_damping(curve);
    out.write("calibration.csv", [&](std::ostream &o) { write_calibration_csv(o, curve); });
    OrderedJson doc{{"c2_true", config.c2},
                    {"shots", cal.shots},
                    {"c2_hat", fit.c2_hat},
                    {"residual", fit.residual},
                    {"relative_error", config.c2 > 0.0 ? std::abs(fit.c2_hat - config.c2) / config.c2 : fit.c2_hat},
                    {"phase_damping", {{"gamma", damping.gamma}, {"delta", damping.delta}, {"residual", damping.residual}}}};
    out.write_text("calibration_fit.json", doc.dump(2) + "\n");
    return OrderedJson{{"c2_hat", fit.c2_hat}, {"residual", fit.residual}, {"phase_damping_residual", damping.residual}}
        .dump();
}

std::string run_ff_table(const ExperimentConfig &config, OutputDir &out) {
    const auto &s = config.feedforward_table;
    std::size_t rows = 0;
    out.write("feedforward_table.csv", [&](std::ostream &o) {
        o << "phi_p,lambda,phi_in_star,fidelity_star,fidelity_uncorrected\n";
        for (double lambda : s.lambda) {
            for (int k = 0; k < s.n_phi; ++k) {
                const double phi_p = s.phi_max * k / (s.n_phi - 1);
                const auto sol = optimal_input_angle({phi_p, lambda, s.phi_cap});
                o << fmt(phi_p) << ',' << fmt(lambda) << ',' << fmt(sol.phi_in_star) << ',' << fmt(sol.fidelity_star)
                  << ',' << fmt(avg_gate_fidelity(phi_p, phi_p, lambda)) << '\n';
                ++rows;
            }
        }
    });
    return OrderedJson{{"rows", rows}}.dump();
}

std::string run_noise_stats(const ExperimentConfig &config, OutputDir &out) {
    const auto &s = config.noise_stats;
    const double lambda = config.c2 * s.tau;
    auto deltas = s.delta;
    std::sort(deltas.begin(), deltas.end());
    deltas.erase(std::unique(deltas.begin(), deltas.end()), deltas.end());
    std::vector<double> times;
    for (double d : deltas) times.push_back(s.tau + d);
    if (times.empty() || times.front() != s.tau) times.insert(times.begin(), s.tau);
    const std::size_t m = times.size();

    // Running sums for the angle at tau and its products with later angles.
    std::vector<double> sum(m, 0.0), sum_sq(m, 0.0), cross(m, 0.0);
    double sum_u = 0.0;
    Rng rng(derive_seed(config.seed, {0x4e53}));
    std::vector<double> u(m);
    for (long long k = 0; k < s.samples; ++k) {
        if (config.c2 > 0.0) sample_path(times, config.c2, config.correlated, rng, u);
        sum_u += u[0];
        const double first = noisy_angle(s.phi_in, u[0]);
        for (std::size_t q = 0; q < m; ++q) {
            const double a = noisy_angle(s.phi_in, u[q]);
            sum[q] += a;
            sum_sq[q] += a * a;
            cross[q] += first * a;
        }
    }
    const double n = static_cast<double>(s.samples);
    const auto analytic = angle_moments({s.phi_in, lambda});
    const double mc_mean = sum[0] / n;
    const double mc_var = (sum_sq[0] - n * mc_mean * mc_mean) / (n - 1.0);
    const double mc_typical = s.phi_in * std::exp(-sum_u / n);

    out.write("noise_moments.csv", [&](std::ostream &o) {
        o << "quantity,analytic,monte_carlo,std_error\n";
        o << "mean," << fmt(analytic.mean) << ',' << fmt(mc_mean) << ',' << fmt(std::sqrt(mc_var / n)) << '\n';
        o << "typical," << fmt(analytic.typical) << ',' << fmt(mc_typical) << ",\n";
        o << "variance," << fmt(analytic.variance) << ',' << fmt(mc_var) << ",\n";
        o << "return_probability," << fmt(return_probability(s.phi_in, lambda)) << ",,\n";
    });
    out.write("noise_correlation.csv", [&](std::ostream &o) {
        o << "tau_ms,delta_ms,analytic,monte_carlo,std_error\n";
        for (std::size_t q = 0; q < m; ++q) {
            const double mean_q = sum[q] / n;
            const double var_q = sum_sq[q] / n - mean_q * mean_q;
            const double var_0 = sum_sq[0] / n - mc_mean * mc_mean;
            const double cov = cross[q] / n - mc_mean * mean_q;
            const double rho = var_q > 0.0 && var_0 > 0.0 ? cov / std::sqrt(var_q * var_0) : 1.0;
            const double delta = times[q] - s.tau;
            const double exact = config.c2 > 0.0 ? angle_correlation(s.tau, delta, config.c2) : 1.0;
            o << fmt(s.tau) << ',' << fmt(delta) << ',' << fmt(exact) << ',' << fmt(rho) << ','
              << fmt((1.0 - rho * rho) / std::sqrt(n)) << '\n';
        }
    });
    return OrderedJson{{"lambda", lambda},
                       {"mean", analytic.mean},
                       {"mean_mc", mc_mean},
                       {"variance", analytic.variance},
                       {"variance_mc", mc_var}}
        .dump();
}

std::string run_infer(const ExperimentConfig &config, OutputDir &out) {
    const auto target = exact_spectrum(config.hamiltonian, config.spectrum);
    const auto guess =
        perturbed_guess(config.hamiltonian, config.inference.perturbation, derive_seed(config.seed, {0x4755}));
    const auto log = run_inference_demo(target, guess, config.inference.iterations, config);
    const auto truth = hamiltonian_parameters(config.hamiltonian);
    out.write("inference_log.csv", [&](std::ostream &o) {
        o << "iteration,accepted,D_H";
        for (std::size_t k = 0; k < truth.size(); ++k) o << ",p" << k;
        o << '\n';
        for (const auto &step : log) {
            o << step.iteration << ',' << (step.accepted ? 1 : 0) << ',' << fmt(step.D_H);
            for (double p : step.params) o << ',' << fmt(p);
            o << '\n';
        }
    });
    OrderedJson doc{{"iterations", config.inference.iterations},
                    {"feedforward", config.feedforward},
                    {"initial_D_H", log.front().D_H},
                    {"final_D_H", log.back().D_H},
                    {"true_params", truth},
                    {"final_params", log.back().params}};
    out.write_text("inference.json", doc.dump(2) + "\n");
    return OrderedJson{{"initial_D_H", log.front().D_H}, {"final_D_H", log.back().D_H}}.dump();
}

}  // namespace

std::string run_command(Command command, const ExperimentConfig &config, const std::filesystem::path &out_dir) {
    config.validate();
    OutputDir out(out_dir);
    std::string summary;
    switch (command) {
        case Command::SimulateSpectrum: summary = run_simulate_spectrum(config, out); break;
        case Command::DepthSweep: summary = run_sweep(config, out); break;
        case Command::Calibrate: summary = run_calibrate(config, out); break;
        case Command::FeedforwardTableCmd: summary = run_ff_table(config, out); break;
        case Command::NoiseStats: summary = run_noise_stats(config, out); break;
        case Command::Infer: summary = run_infer(config, out); break;
    }
    out.write_manifest(command, config);
    return summary;
}

}  // namespace ioncodesign
