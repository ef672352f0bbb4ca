/* Copyright 2026 The ioncodesign Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/* C interface to the ioncodesign simulator.
 *
 * Every fallible call returns an icd_status. On failure the message is
 * available from icd_last_error() on the same thread until the next call.
 * Handles are opaque; free them with the matching *_free function.
 * Units: angles in rad, times in ms, rates in rad/ms or ms^-1.
 */

#ifndef IONCODESIGN_IONCODESIGN_H
#define IONCODESIGN_IONCODESIGN_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define ICD_API __declspec(dllexport)
#else
#define ICD_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum icd_status {
    ICD_OK = 0,
    ICD_ERR_INVALID_ARGUMENT = 1,
    ICD_ERR_RESOURCE_LIMIT = 2,
    ICD_ERR_UNIDENTIFIABLE = 3,
    ICD_ERR_CONFIG = 4,
    ICD_ERR_IO = 5,
    ICD_ERR_RUNTIME = 6
} icd_status;

typedef struct icd_hamiltonian icd_hamiltonian;
typedef struct icd_config icd_config;

ICD_API const char *icd_version(void);
ICD_API const char *icd_status_name(icd_status status);
/* Message of the last failed call on this thread, "" if none. */
ICD_API const char *icd_last_error(void);
/* Offending config field of the last ICD_ERR_CONFIG, "" otherwise. */
ICD_API const char *icd_last_error_field(void);

/* ---- Hamiltonians ---- */

/* J is row-major n x n (symmetric, zero diagonal), h has n entries. */
ICD_API icd_status icd_hamiltonian_create(int n, const double *J, const double *h, icd_hamiltonian **out);
/* J_ij ~ U[-1, 1], h_i ~ U[-5, 5]. */
ICD_API icd_status icd_hamiltonian_random(int n, uint64_t seed, icd_hamiltonian **out);
/* The built-in 4-spin instance. */
ICD_API icd_status icd_hamiltonian_default(icd_hamiltonian **out);
ICD_API icd_status icd_hamiltonian_load(const char *path, icd_hamiltonian **out);
ICD_API void icd_hamiltonian_free(icd_hamiltonian *h);
ICD_API int icd_hamiltonian_num_spins(const icd_hamiltonian *h);
/* Writes JSON into buf (NUL terminated) when cap is large enough; *needed
 * receives the required size including the terminator. */
ICD_API icd_status icd_hamiltonian_to_json(const icd_hamiltonian *h, char *buf, size_t cap, size_t *needed);

/* ---- Noise model and control ---- */

ICD_API icd_status icd_return_probability(double phi_in, double lambda, double *out);
ICD_API icd_status icd_angle_moments(double phi_in, double lambda, double *mean, double *typical, double *variance);
ICD_API icd_status icd_angle_correlation(double tau, double delta, double c2, double *out);
ICD_API icd_status icd_hyp1f2(double a, double b1, double b2, double z, double *out);
ICD_API icd_status icd_avg_gate_fidelity(double phi_in, double phi_p, double lambda, double *out);
ICD_API icd_status icd_optimal_input_angle(double phi_p, double lambda, double phi_cap, double *phi_in_star,
                                           double *fidelity_star);

/* ---- Calibration ----
 * p arrays are row-major [n_phi][n_tau]. */
ICD_API icd_status icd_simulate_calibration(const double *phi, size_t n_phi, const double *tau, size_t n_tau,
                                            double c2, long long shots, uint64_t seed, double *p_out);
ICD_API icd_status icd_fit_c2(const double *phi, size_t n_phi, const double *tau, size_t n_tau, const double *p,
                              double *c2_hat, double *residual);

/* ---- Circuits and dynamics ---- */

/* Gate counts of the r-step circuit (default gate timing). */
ICD_API icd_status icd_trotter_gate_counts(const icd_hamiltonian *h, int steps, size_t *total, size_t *two_qubit,
                                           size_t *single_qubit);
/* Response function and process fidelity at the given times. steps = 0
 * selects exact evolution; c2 = 0 a noiseless circuit. S_out and F_out may be
 * NULL. */
ICD_API icd_status icd_response_function(const icd_hamiltonian *h, int steps, double c2, int n_runs, uint64_t seed,
                                         int feedforward, const double *times, size_t n_times, double *S_out,
                                         double *F_out);

/* ---- Experiment configs ---- */

ICD_API icd_status icd_config_default(icd_config **out);
ICD_API icd_status icd_config_parse(const char *json, icd_config **out);
ICD_API icd_status icd_config_load(const char *path, icd_config **out);
ICD_API void icd_config_free(icd_config *cfg);
ICD_API icd_status icd_config_to_json(const icd_config *cfg, char *buf, size_t cap, size_t *needed);
ICD_API uint64_t icd_config_hash(const icd_config *cfg);
/* Applies IONCODESIGN_SEED when set; *applied (optional) reports whether it was. */
ICD_API icd_status icd_config_apply_env(icd_config *cfg, int *applied);

/* Overrides. Each validates and leaves the config unchanged on error. */
ICD_API icd_status icd_config_set_c2(icd_config *cfg, double c2);
ICD_API icd_status icd_config_set_seed(icd_config *cfg, uint64_t seed);
ICD_API icd_status icd_config_set_n_runs(icd_config *cfg, int n_runs);
ICD_API icd_status icd_config_set_feedforward(icd_config *cfg, int enabled);
ICD_API icd_status icd_config_set_shots(icd_config *cfg, long long shots);
ICD_API icd_status icd_config_set_tau(icd_config *cfg, double tau);
ICD_API icd_status icd_config_set_r(icd_config *cfg, int r);
ICD_API icd_status icd_config_set_iterations(icd_config *cfg, int iterations);
ICD_API const char *icd_config_output_dir(const icd_config *cfg);

/* ---- Commands ----
 * command: simulate-spectrum, depth-sweep, calibrate, feedforward-table,
 * noise-stats or infer. Writes CSV/JSON files and manifest.json to out_dir. */
ICD_API int icd_is_command(const char *command);
ICD_API icd_status icd_run(const icd_config *cfg, const char *command, const char *out_dir);
/* JSON summary of the last successful icd_run on this thread. */
ICD_API const char *icd_last_summary(void);

#ifdef __cplusplus
}
#endif

#endif
