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

#include "ioncodesign/spectroscopy.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>

#include "ioncodesign/errors.hpp"
#include "ioncodesign/feedforward.hpp"
#include "ioncodesign/parallel.hpp"
#include "ioncodesign/rng.hpp"

namespace ioncodesign {

void Evolver::validate() const {
    if (kind == EvolverKind::Exact) return;
    if (steps < 1) throw InvalidArgument("evolver: steps must be >= 1");
    timing.validate();
    if (kind == EvolverKind::NoisyTrotter) {
        noise.validate();
        if (n_runs < 1) throw InvalidArgument("evolver: n_runs must be >= 1");
    }
}

std::vector<double> uniform_times(double T, int count) {
    if (count < 1) throw InvalidArgument("uniform_times: count must be >= 1");
    if (T < 0.0) throw InvalidArgument("uniform_times: T must be >= 0");
    std::vector<double> out(static_cast<std::size_t>(count));
    for (int k = 0; k < count; ++k) out[static_cast<std::size_t>(k)] = count == 1 ? 0.0 : T * k / (count - 1);
    return out;
}

double response_from_unitary(const UnitaryMatrix &u, int n_spins) {
    const auto sz = sz_tot_diagonal(n_spins);
    const double norm = 2.0 / static_cast<double>(sz.size());
    double acc = 0.0;
    for (std::size_t j = 0; j < sz.size(); ++j) {
        if (sz[j] <= 0.0) continue;
        const auto col = u.col(static_cast<Eigen::Index>(j));
        double expectation = 0.0;
        for (std::size_t k = 0; k < sz.size(); ++k) expectation += std::norm(col[static_cast<Eigen::Index>(k)]) * sz[k];
        acc += sz[j] * expectation;
    }
    return norm * acc;
}

double process_fidelity(const UnitaryMatrix &realized, const UnitaryMatrix &target) {
    const Complex tr = (realized.adjoint() * target).trace() / static_cast<double>(target.rows());
    return std::min(1.0, std::norm(tr));
}

double trapezoid_mean(const std::vector<double> &x, const std::vector<double> &y) {
    if (x.size() != y.size() || x.empty()) throw InvalidArgument("trapezoid_mean: size mismatch");
    if (x.size() == 1) return y[0];
    double integral = 0.0;
    for (std::size_t k = 1; k < x.size(); ++k) integral += 0.5 * (x[k] - x[k - 1]) * (y[k] + y[k - 1]);
    const double span = x.back() - x.front();
    return span > 0.0 ? integral / span : y[0];
}

Simulation simulate(const SpinHamiltonian &H, const Evolver &evolver, const std::vector<double> &times) {
    evolver.validate();
    if (times.empty()) throw InvalidArgument("simulate: need at least one sample time");
    const int n = H.num_spins();
    check_dimension(n);
    const std::size_t nt = times.size();
    const Eigen::Index dim = Eigen::Index{1} << n;

    const ExactPropagator propagator(H);
    std::vector<UnitaryMatrix> targets(nt);
    for (std::size_t k = 0; k < nt; ++k) targets[k] = propagator.unitary(times[k]);

    Simulation sim;
    sim.response.times = times;
    sim.fidelity.times = times;
    sim.response.S.assign(nt, 0.0);
    sim.fidelity.F.assign(nt, 0.0);

    if (evolver.kind == EvolverKind::Exact) {
        for (std::size_t k = 0; k < nt; ++k) {
            sim.response.S[k] = response_from_unitary(targets[k], n);
            sim.fidelity.F[k] = 1.0;
        }
        sim.fidelity.F_int = 1.0;
        return sim;
    }

    // A zero-time sample executes no gates.
    std::vector<TimedCircuit> circuits(nt);
    for (std::size_t k = 0; k < nt; ++k) {
        if (times[k] > 0.0) circuits[k] = build_trotter_circuit(H, times[k], evolver.steps, evolver.timing);
    }

    if (evolver.kind == EvolverKind::NoiselessTrotter) {
        for (std::size_t k = 0; k < nt; ++k) {
            const UnitaryMatrix u =
                circuits[k].gates.empty() ? UnitaryMatrix::Identity(dim, dim) : circuit_unitary(circuits[k]);
            sim.response.S[k] = response_from_unitary(u, n);
            sim.fidelity.F[k] = process_fidelity(u, targets[k]);
        }
        sim.fidelity.F_int = trapezoid_mean(times, sim.fidelity.F);
        return sim;
    }

    const double c2 = evolver.noise.c2;
    if (evolver.feedforward && c2 > 0.0) {
        double phi_max = 0.0;
        double lambda_max = 0.0;
        for (const auto &c : circuits) {
            for (const auto &g : c.gates) {
                if (!g.noisy) continue;
                phi_max = std::max(phi_max, std::abs(g.gate.angle));
                lambda_max = std::max(lambda_max, c2 * g.start);
            }
        }
        const auto table = shared_feedforward_table(phi_max, lambda_max);
        for (auto &c : circuits) c = correct_circuit(c, c2, *table);
    }

    // Every non-empty circuit shares the same schedule.
    std::vector<double> schedule;
    for (const auto &c : circuits) {
        if (!c.gates.empty()) {
            schedule = c.start_times();
            break;
        }
    }

    const auto runs = static_cast<std::size_t>(evolver.n_runs);
    std::vector<std::vector<double>> run_S(runs, std::vector<double>(nt));
    std::vector<std::vector<double>> run_F(runs, std::vector<double>(nt));
    parallel_for(runs, [&](std::size_t run) {
        NoiseParams params = evolver.noise;
        params.seed = derive_seed(evolver.noise.seed, {run});
        const auto traj = sample_trajectory(schedule, params);
        std::vector<double> angles;
        for (std::size_t k = 0; k < nt; ++k) {
            const auto &circuit = circuits[k];
            UnitaryMatrix u;
            if (circuit.gates.empty()) {
                u = UnitaryMatrix::Identity(dim, dim);
            } else {
                angles.resize(circuit.gates.size());
                for (std::size_t m = 0; m < circuit.gates.size(); ++m) {
                    const auto &g = circuit.gates[m];
                    angles[m] = g.noisy ? noisy_angle(g.gate.angle, traj.u[m]) : g.gate.angle;
                }
                u = circuit_unitary(circuit, angles);
            }
            run_S[run][k] = response_from_unitary(u, n);
            run_F[run][k] = process_fidelity(u, targets[k]);
        }
    });
    for (std::size_t run = 0; run < runs; ++run) {
        for (std::size_t k = 0; k < nt; ++k) {
            sim.response.S[k] += run_S[run][k];
            sim.fidelity.F[k] += run_F[run][k];
        }
    }
    for (std::size_t k = 0; k < nt; ++k) {
        sim.response.S[k] /= static_cast<double>(runs);
        sim.fidelity.F[k] /= static_cast<double>(runs);
    }
    sim.fidelity.F_int = trapezoid_mean(times, sim.fidelity.F);
    return sim;
}

ResponseSeries response_function(const SpinHamiltonian &H, const Evolver &evolver, const std::vector<double> &times) {
    return simulate(H, evolver, times).response;
}

FidelityTrace fidelity_trace(const SpinHamiltonian &H, const Evolver &evolver, const std::vector<double> &times) {
    return simulate(H, evolver, times).fidelity;
}

std::vector<double> OmegaGrid::points() const {
    if (count < 2) throw InvalidArgument("omega grid: need at least two points");
    if (!(max > min)) throw InvalidArgument("omega grid: max must exceed min");
    std::vector<double> out(static_cast<std::size_t>(count));
    for (int k = 0; k < count; ++k) out[static_cast<std::size_t>(k)] = min + (max - min) * k / (count - 1);
    return out;
}

double Spectrum::domega() const { return omega.size() > 1 ? omega[1] - omega[0] : 0.0; }

Spectrum spectrum(const ResponseSeries &series, double gamma, const std::vector<double> &omega) {
    if (!(gamma > 0.0)) throw InvalidArgument("spectrum: gamma must be > 0");
    if (series.times.size() != series.S.size() || series.times.size() < 2) {
        throw InvalidArgument("spectrum: need at least two response samples");
    }
    if (omega.size() < 2) throw InvalidArgument("spectrum: need at least two frequencies");
    const double dt = series.times[1] - series.times[0];
    for (std::size_t k = 1; k < series.times.size(); ++k) {
        if (std::abs(series.times[k] - series.times[k - 1] - dt) > 1e-9 * std::max(1.0, dt)) {
            throw InvalidArgument("spectrum: response must be on a uniform time grid");
        }
    }
    Spectrum out;
    out.omega = omega;
    out.gamma = gamma;
    out.A_raw.resize(omega.size());
    const std::size_t last = series.times.size() - 1;
    for (std::size_t w = 0; w < omega.size(); ++w) {
        double acc = 0.0;
        for (std::size_t k = 0; k <= last; ++k) {
            const double t = series.times[k];
            const double weight = (k == 0 || k == last) ? 0.5 : 1.0;
            acc += weight * std::exp(-gamma * t) * std::cos(omega[w] * t) * series.S[k];
        }
        out.A_raw[w] = dt * acc;
    }
    const double dw = out.domega();
    out.A_norm.resize(omega.size());
    double mass = 0.0;
    for (std::size_t w = 0; w < omega.size(); ++w) {
        out.A_norm[w] = std::max(0.0, out.A_raw[w]);
        mass += out.A_norm[w];
    }
    mass *= dw / (2.0 * std::numbers::pi);
    if (mass > 0.0)
        for (auto &a : out.A_norm) a /= mass;
    return out;
}

double hellinger(const Spectrum &a, const Spectrum &b) {
    if (a.omega.size() != b.omega.size()) throw InvalidArgument("hellinger: frequency grids differ");
    for (std::size_t w = 0; w < a.omega.size(); ++w) {
        if (std::abs(a.omega[w] - b.omega[w]) > 1e-12 * std::max(1.0, std::abs(a.omega[w]))) {
            throw InvalidArgument("hellinger: frequency grids differ");
        }
    }
    double acc = 0.0;
    for (std::size_t w = 0; w < a.omega.size(); ++w) {
        const double d = std::sqrt(a.A_norm[w]) - std::sqrt(b.A_norm[w]);
        acc += d * d;
    }
    const double d2 = 0.5 * acc * a.domega() / (2.0 * std::numbers::pi);
    return std::sqrt(std::clamp(d2, 0.0, 1.0));
}

namespace {

void put_row(std::ostream &out, std::initializer_list<double> values) {
    char buf[32];
    bool first = true;
    for (double v : values) {
        std::snprintf(buf, sizeof buf, "%.17g", v);
        if (!first) out << ',';
        out << buf;
        first = false;
    }
    out << '\n';
}

}  // namespace

void write_response_csv(std::ostream &out, const ResponseSeries &series) {
    out << "t_ms,S\n";
    for (std::size_t k = 0; k < series.times.size(); ++k) put_row(out, {series.times[k], series.S[k]});
}

void write_spectrum_csv(std::ostream &out, const Spectrum &spec) {
    out << "omega,A_raw,A_norm\n";
    for (std::size_t w = 0; w < spec.omega.size(); ++w) put_row(out, {spec.omega[w], spec.A_raw[w], spec.A_norm[w]});
}

void write_fidelity_csv(std::ostream &out, const FidelityTrace &trace) {
    out << "t_ms,F\n";
    for (std::size_t k = 0; k < trace.times.size(); ++k) put_row(out, {trace.times[k], trace.F[k]});
}

}  // namespace ioncodesign
