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

#include "ioncodesign/ioncodesign.h"

#include <cstring>
#include <new>
#include <string>
#include <vector>

#include "ioncodesign/calibration.hpp"
#include "ioncodesign/errors.hpp"
#include "ioncodesign/feedforward.hpp"
#include "ioncodesign/harness.hpp"
#include "ioncodesign/motional_noise.hpp"
#include "ioncodesign/spectroscopy.hpp"
#include "ioncodesign/trotter.hpp"

struct icd_hamiltonian {
    ioncodesign::SpinHamiltonian value;
};

struct icd_config {
    ioncodesign::ExperimentConfig value;
};

namespace {

thread_local std::string g_error;
thread_local std::string g_error_field;
thread_local std::string g_summary;

icd_status status_of(ioncodesign::ErrorKind kind) {
    using ioncodesign::ErrorKind;
    switch (kind) {
        case ErrorKind::InvalidArgument: return ICD_ERR_INVALID_ARGUMENT;
        case ErrorKind::ResourceLimit: return ICD_ERR_RESOURCE_LIMIT;
        case ErrorKind::Unidentifiable: return ICD_ERR_UNIDENTIFIABLE;
        case ErrorKind::Config: return ICD_ERR_CONFIG;
        case ErrorKind::Io: return ICD_ERR_IO;
        case ErrorKind::Runtime: return ICD_ERR_RUNTIME;
    }
    return ICD_ERR_RUNTIME;
}

icd_status fail(icd_status status, std::string message, std::string field = {}) {
    g_error = std::move(message);
    g_error_field = std::move(field);
    return status;
}

// Runs body and converts any exception into a status code.
template <typename Body>
icd_status guarded(Body &&body) {
    g_error.clear();
    g_error_field.clear();
    try {
        body();
        return ICD_OK;
    } catch (const ioncodesign::ConfigError &e) {
        return fail(ICD_ERR_CONFIG, e.what(), e.field());
    } catch (const ioncodesign::Error &e) {
        return fail(status_of(e.kind()), e.what());
    } catch (const std::bad_alloc &) {
        return fail(ICD_ERR_RESOURCE_LIMIT, "out of memory");
    } catch (const std::exception &e) {
        return fail(ICD_ERR_RUNTIME, e.what());
    } catch (...) {
        return fail(ICD_ERR_RUNTIME, "unknown error");
    }
}

void require(const void *ptr, const char *what) {
    if (ptr == nullptr) throw ioncodesign::InvalidArgument(std::string(what) + " must not be NULL");
}

void copy_out(const std::string &text, char *buf, std::size_t cap, std::size_t *needed) {
    if (needed != nullptr) *needed = text.size() + 1;
    if (buf != nullptr && cap > text.size()) std::memcpy(buf, text.c_str(), text.size() + 1);
    else if (buf != nullptr && cap > 0) throw ioncodesign::InvalidArgument("buffer too small");
}

template <typename Mutate>
icd_status update_config(icd_config *cfg, Mutate &&mutate) {
    return guarded([&] {
        require(cfg, "cfg");
        auto copy = cfg->value;
        mutate(copy);
        copy.validate();
        cfg->value = std::move(copy);
    });
}

ioncodesign::CalibrationCurve make_curve(const double *phi, std::size_t n_phi, const double *tau, std::size_t n_tau) {
    require(phi, "phi");
    require(tau, "tau");
    ioncodesign::CalibrationCurve curve;
    curve.phi_in.assign(phi, phi + n_phi);
    curve.tau.assign(tau, tau + n_tau);
    return curve;
}

}  // namespace

extern "C" {

const char *icd_version(void) { return ioncodesign::kVersion.data(); }

const char *icd_status_name(icd_status status) {
    switch (status) {
        case ICD_OK: return "ok";
        case ICD_ERR_INVALID_ARGUMENT: return "invalid_argument";
        case ICD_ERR_RESOURCE_LIMIT: return "resource_limit";
        case ICD_ERR_UNIDENTIFIABLE: return "unidentifiable";
        case ICD_ERR_CONFIG: return "config";
        case ICD_ERR_IO: return "io";
        case ICD_ERR_RUNTIME: return "runtime";
    }
    return "unknown";
}

const char *icd_last_error(void) { return g_error.c_str(); }
const char *icd_last_error_field(void) { return g_error_field.c_str(); }

icd_status icd_hamiltonian_create(int n, const double *J, const double *h, icd_hamiltonian **out) {
    return guarded([&] {
        require(out, "out");
        require(J, "J");
        require(h, "h");
        if (n < 1) throw ioncodesign::InvalidArgument("n must be >= 1");
        const auto nn = static_cast<std::size_t>(n);
        *out = new icd_hamiltonian{ioncodesign::SpinHamiltonian(n, std::vector<double>(J, J + nn * nn),
                                                                std::vector<double>(h, h + nn))};
    });
}

icd_status icd_hamiltonian_random(int n, uint64_t seed, icd_hamiltonian **out) {
    return guarded([&] {
        require(out, "out");
        *out = new icd_hamiltonian{ioncodesign::random_hamiltonian(n, seed)};
    });
}

icd_status icd_hamiltonian_default(icd_hamiltonian **out) {
    return guarded([&] {
        require(out, "out");
        *out = new icd_hamiltonian{ioncodesign::default_hamiltonian()};
    });
}

icd_status icd_hamiltonian_load(const char *path, icd_hamiltonian **out) {
    return guarded([&] {
        require(out, "out");
        require(path, "path");
        *out = new icd_hamiltonian{ioncodesign::load_hamiltonian(path)};
    });
}

void icd_hamiltonian_free(icd_hamiltonian *h) { delete h; }

int icd_hamiltonian_num_spins(const icd_hamiltonian *h) { return h == nullptr ? 0 : h->value.num_spins(); }

icd_status icd_hamiltonian_to_json(const icd_hamiltonian *h, char *buf, size_t cap, size_t *needed) {
    return guarded([&] {
        require(h, "h");
        copy_out(ioncodesign::hamiltonian_to_json(h->value), buf, cap, needed);
    });
}

icd_status icd_return_probability(double phi_in, double lambda, double *out) {
    return guarded([&] {
        require(out, "out");
        *out = ioncodesign::return_probability(phi_in, lambda);
    });
}

icd_status icd_angle_moments(double phi_in, double lambda, double *mean, double *typical, double *variance) {
    return guarded([&] {
        const auto m = ioncodesign::angle_moments({phi_in, lambda});
        if (mean != nullptr) *mean = m.mean;
        if (typical != nullptr) *typical = m.typical;
        if (variance != nullptr) *variance = m.variance;
    });
}

icd_status icd_angle_correlation(double tau, double delta, double c2, double *out) {
    return guarded([&] {
        require(out, "out");
        *out = ioncodesign::angle_correlation(tau, delta, c2);
    });
}

icd_status icd_hyp1f2(double a, double b1, double b2, double z, double *out) {
    return guarded([&] {
        require(out, "out");
        *out = ioncodesign::hyp1f2(a, b1, b2, z);
    });
}

icd_status icd_avg_gate_fidelity(double phi_in, double phi_p, double lambda, double *out) {
    return guarded([&] {
        require(out, "out");
        *out = ioncodesign::avg_gate_fidelity(phi_in, phi_p, lambda);
    });
}

icd_status icd_optimal_input_angle(double phi_p, double lambda, double phi_cap, double *phi_in_star,
                                   double *fidelity_star) {
    return guarded([&] {
        const auto sol = ioncodesign::optimal_input_angle({phi_p, lambda, phi_cap});
        if (phi_in_star != nullptr) *phi_in_star = sol.phi_in_star;
        if (fidelity_star != nullptr) *fidelity_star = sol.fidelity_star;
    });
}

icd_status icd_simulate_calibration(const double *phi, size_t n_phi, const double *tau, size_t n_tau, double c2,
                                    long long shots, uint64_t seed, double *p_out) {
    return guarded([&] {
        require(p_out, "p_out");
        const auto grid = make_curve(phi, n_phi, tau, n_tau);
        const auto curve = ioncodesign::simulate_calibration(grid.phi_in, grid.tau, c2, shots, seed);
        std::copy(curve.p_return.begin(), curve.p_return.end(), p_out);
    });
}

icd_status icd_fit_c2(const double *phi, size_t n_phi, const double *tau, size_t n_tau, const double *p,
                      double *c2_hat, double *residual) {
    return guarded([&] {
        require(p, "p");
        auto curve = make_curve(phi, n_phi, tau, n_tau);
        curve.p_return.assign(p, p + n_phi * n_tau);
        const auto fit = ioncodesign::fit_c2(curve);
        if (c2_hat != nullptr) *c2_hat = fit.c2_hat;
        if (residual != nullptr) *residual = fit.residual;
    });
}

icd_status icd_trotter_gate_counts(const icd_hamiltonian *h, int steps, size_t *total, size_t *two_qubit,
                                   size_t *single_qubit) {
    return guarded([&] {
        require(h, "h");
        const auto c = ioncodesign::gate_counts(ioncodesign::build_trotter_circuit(h->value, 1.0, steps));
        if (total != nullptr) *total = c.total;
        if (two_qubit != nullptr) *two_qubit = c.two_qubit;
        if (single_qubit != nullptr) *single_qubit = c.single_qubit;
    });
}

icd_status icd_response_function(const icd_hamiltonian *h, int steps, double c2, int n_runs, uint64_t seed,
                                 int feedforward, const double *times, size_t n_times, double *S_out,
                                 double *F_out) {
    return guarded([&] {
        require(h, "h");
        require(times, "times");
        using ioncodesign::Evolver;
        if (steps < 0) throw ioncodesign::InvalidArgument("steps must be >= 0");
        Evolver evolver = steps == 0   ? Evolver::exact()
                          : c2 == 0.0 ? Evolver::noiseless_trotter(steps)
                                      : Evolver::noisy_trotter(steps, {c2, seed, true}, n_runs, feedforward != 0);
        const auto sim = ioncodesign::simulate(h->value, evolver, std::vector<double>(times, times + n_times));
        if (S_out != nullptr) std::copy(sim.response.S.begin(), sim.response.S.end(), S_out);
        if (F_out != nullptr) std::copy(sim.fidelity.F.begin(), sim.fidelity.F.end(), F_out);
    });
}

icd_status icd_config_default(icd_config **out) {
    return guarded([&] {
        require(out, "out");
        *out = new icd_config{};
    });
}

icd_status icd_config_parse(const char *json, icd_config **out) {
    return guarded([&] {
        require(out, "out");
        require(json, "json");
        *out = new icd_config{ioncodesign::config_from_json(json)};
    });
}

icd_status icd_config_load(const char *path, icd_config **out) {
    return guarded([&] {
        require(out, "out");
        require(path, "path");
        *out = new icd_config{ioncodesign::load_config(path)};
    });
}

void icd_config_free(icd_config *cfg) { delete cfg; }

icd_status icd_config_to_json(const icd_config *cfg, char *buf, size_t cap, size_t *needed) {
    return guarded([&] {
        require(cfg, "cfg");
        copy_out(ioncodesign::config_to_json(cfg->value), buf, cap, needed);
    });
}

uint64_t icd_config_hash(const icd_config *cfg) { return cfg == nullptr ? 0 : ioncodesign::config_hash(cfg->value); }

icd_status icd_config_apply_env(icd_config *cfg, int *applied) {
    return update_config(cfg, [&](ioncodesign::ExperimentConfig &c) {
        const bool done = ioncodesign::apply_seed_env(c);
        if (applied != nullptr) *applied = done ? 1 : 0;
    });
}

icd_status icd_config_set_c2(icd_config *cfg, double c2) {
    return update_config(cfg, [&](auto &c) { c.c2 = c2; });
}

icd_status icd_config_set_seed(icd_config *cfg, uint64_t seed) {
    return update_config(cfg, [&](auto &c) { c.seed = seed; });
}

icd_status icd_config_set_n_runs(icd_config *cfg, int n_runs) {
    return update_config(cfg, [&](auto &c) { c.n_runs = n_runs; });
}

icd_status icd_config_set_feedforward(icd_config *cfg, int enabled) {
    return update_config(cfg, [&](auto &c) { c.feedforward = enabled != 0; });
}

icd_status icd_config_set_shots(icd_config *cfg, long long shots) {
    return update_config(cfg, [&](auto &c) { c.calibration.shots = shots; });
}

icd_status icd_config_set_tau(icd_config *cfg, double tau) {
    return update_config(cfg, [&](auto &c) { c.noise_stats.tau = tau; });
}

icd_status icd_config_set_r(icd_config *cfg, int r) {
    return update_config(cfg, [&](auto &c) { c.r = r; });
}

icd_status icd_config_set_iterations(icd_config *cfg, int iterations) {
    return update_config(cfg, [&](auto &c) { c.inference.iterations = iterations; });
}

const char *icd_config_output_dir(const icd_config *cfg) { return cfg == nullptr ? "" : cfg->value.output_dir.c_str(); }

int icd_is_command(const char *command) {
    return command != nullptr && ioncodesign::parse_command(command).has_value() ? 1 : 0;
}

icd_status icd_run(const icd_config *cfg, const char *command, const char *out_dir) {
    return guarded([&] {
        require(cfg, "cfg");
        require(command, "command");
        require(out_dir, "out_dir");
        const auto cmd = ioncodesign::parse_command(command);
        if (!cmd) throw ioncodesign::InvalidArgument(std::string("unknown command '") + command + "'");
        g_summary = ioncodesign::run_command(*cmd, cfg->value, out_dir);
    });
}

const char *icd_last_summary(void) { return g_summary.c_str(); }

}  // extern "C"
