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

#include "ioncodesign/feedforward.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <mutex>

#include "ioncodesign/errors.hpp"
#include "ioncodesign/motional_noise.hpp"

namespace ioncodesign {

namespace {

constexpr double kScanStep = 1e-3;
constexpr double kPolishTol = 1e-6;

double fidelity_from_moments(const HalfAngleMoments &m, double phi_p) {
    return 0.5 + 0.5 * std::cos(phi_p / 2.0) * m.cos_mean + 0.5 * std::sin(phi_p / 2.0) * m.sin_mean;
}

// E[cos(phi/2)], E[sin(phi/2)] sampled on the scan grid for one lambda. The
// landscape for any phi_p is a linear combination of the two rows.
struct Landscape {
    double lambda;
    double cap;
    std::vector<double> x;
    std::vector<HalfAngleMoments> moments;

    Landscape(double lambda_, double cap_) : lambda(lambda_), cap(cap_) {
        const auto n = static_cast<std::size_t>(std::floor(cap / kScanStep)) + 1;
        x.reserve(n + 1);
        for (std::size_t i = 0; i < n; ++i) x.push_back(static_cast<double>(i) * kScanStep);
        if (cap - x.back() > 1e-12) x.push_back(cap);
        moments.reserve(x.size());
        for (double xi : x) moments.push_back(half_angle_moments(xi, lambda));
    }

    ControlSolution solve(double phi_p) const {
        std::size_t best = 0;
        double best_f = fidelity_from_moments(moments[0], phi_p);
        for (std::size_t i = 1; i < x.size(); ++i) {
            const double f = fidelity_from_moments(moments[i], phi_p);
            if (f > best_f) {
                best_f = f;
                best = i;
            }
        }
        const double lo = best == 0 ? x[0] : x[best - 1];
        const double hi = best + 1 == x.size() ? x.back() : x[best + 1];
        auto objective = [&](double v) { return avg_gate_fidelity(v, phi_p, lambda); };
        // Golden-section maximization on [lo, hi].
        const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
        double a = lo;
        double b = hi;
        double c = b - inv_phi * (b - a);
        double d = a + inv_phi * (b - a);
        double fc = objective(c);
        double fd = objective(d);
        while (b - a > kPolishTol) {
            if (fc >= fd) {
                b = d;
                d = c;
                fd = fc;
                c = b - inv_phi * (b - a);
                fc = objective(c);
            } else {
                a = c;
                c = d;
                fc = fd;
                d = a + inv_phi * (b - a);
                fd = objective(d);
            }
        }
        const double cand = 0.5 * (a + b);
        const double f_cand = objective(cand);
        if (f_cand > best_f) return {cand, f_cand};
        return {x[best], best_f};
    }
};

}  // namespace

double gate_fidelity(double phi, double phi_p) {
    const double c = std::cos((phi - phi_p) / 4.0);
    return c * c;
}

HalfAngleMoments half_angle_moments(double phi_in, double lambda) {
    if (lambda < 0.0) throw InvalidArgument("half_angle_moments: lambda must be >= 0");
    if (lambda == 0.0) return {std::cos(phi_in / 2.0), std::sin(phi_in / 2.0)};
    const double k = 1.0 / (2.0 * lambda);
    const double z = -phi_in * phi_in / 16.0;
    const double even = phi_in * phi_in * lambda / (8.0 + 16.0 * lambda) * hyp1f2(1.0 + k, 1.5, 2.0 + k, z);
    const double odd = phi_in / (4.0 + 4.0 * lambda) * hyp1f2(0.5 + k, 1.5, 1.5 + k, z);
    return {std::cos(phi_in / 2.0) + 2.0 * even, 2.0 * odd};
}

double avg_gate_fidelity(double phi_in, double phi_p, double lambda) {
    if (lambda < 0.0) throw InvalidArgument("avg_gate_fidelity: lambda must be >= 0");
    if (lambda == 0.0) return gate_fidelity(phi_in, phi_p);
    return fidelity_from_moments(half_angle_moments(phi_in, lambda), phi_p);
}

void ControlQuery::validate() const {
    if (!(phi_cap > 0.0)) throw InvalidArgument("control query: phi_cap must be > 0");
    if (lambda < 0.0) throw InvalidArgument("control query: lambda must be >= 0");
}

ControlSolution optimal_input_angle(const ControlQuery &query) {
    query.validate();
    return Landscape(query.lambda, query.phi_cap).solve(query.phi_p);
}

FeedforwardTable::FeedforwardTable(double phi_max, double lambda_max, double phi_step, double lambda_step,
                                   double phi_cap)
    : phi_step_(phi_step), lambda_step_(lambda_step), phi_cap_(phi_cap) {
    if (!(phi_step > 0.0) || !(lambda_step > 0.0)) throw InvalidArgument("feedforward table: steps must be > 0");
    if (phi_max < 0.0 || lambda_max < 0.0) throw InvalidArgument("feedforward table: ranges must be >= 0");
    n_phi_ = static_cast<std::size_t>(std::ceil(phi_max / phi_step - 1e-9)) + 1;
    n_lambda_ = static_cast<std::size_t>(std::ceil(lambda_max / lambda_step - 1e-9)) + 1;
    if (n_phi_ < 2) n_phi_ = 2;
    if (n_lambda_ < 2) n_lambda_ = 2;
    phi_max_ = static_cast<double>(n_phi_ - 1) * phi_step;
    lambda_max_ = static_cast<double>(n_lambda_ - 1) * lambda_step;
    table_.resize(n_phi_ * n_lambda_);
    for (std::size_t l = 0; l < n_lambda_; ++l) {
        const double lambda = static_cast<double>(l) * lambda_step;
        const Landscape landscape(lambda, phi_cap);
        for (std::size_t p = 0; p < n_phi_; ++p) {
            table_[l * n_phi_ + p] = landscape.solve(static_cast<double>(p) * phi_step).phi_in_star;
        }
    }
}

bool FeedforwardTable::covers(double phi_p, double lambda) const {
    return std::abs(phi_p) <= phi_max_ && lambda >= 0.0 && lambda <= lambda_max_;
}

double FeedforwardTable::input_angle(double phi_p, double lambda) const {
    const double sign = phi_p < 0.0 ? -1.0 : 1.0;
    const double target = std::abs(phi_p);
    if (lambda == 0.0) return phi_p;
    if (!covers(target, lambda)) {
        return sign * optimal_input_angle({target, lambda, phi_cap_}).phi_in_star;
    }
    const double fp = target / phi_step_;
    const double fl = lambda / lambda_step_;
    const auto ip = std::min(static_cast<std::size_t>(fp), n_phi_ - 2);
    const auto il = std::min(static_cast<std::size_t>(fl), n_lambda_ - 2);
    const double wp = fp - static_cast<double>(ip);
    const double wl = fl - static_cast<double>(il);
    const std::array<double, 4> corners{at(ip, il), at(ip + 1, il), at(ip, il + 1), at(ip + 1, il + 1)};
    const double interp = (1 - wl) * ((1 - wp) * corners[0] + wp * corners[1]) +
                          wl * ((1 - wp) * corners[2] + wp * corners[3]);
    // The optimum can jump between branches (0, interior, cap) inside a cell,
    // where interpolation alone is poor: keep the best of the nearby candidates.
    double best = interp;
    double best_f = avg_gate_fidelity(interp, target, lambda);
    for (double cand : {corners[0], corners[1], corners[2], corners[3], target}) {
        const double f = avg_gate_fidelity(cand, target, lambda);
        if (f > best_f) {
            best_f = f;
            best = cand;
        }
    }
    return sign * best;
}

std::shared_ptr<const FeedforwardTable> shared_feedforward_table(double phi_max, double lambda_max) {
    static std::mutex mutex;
    static std::vector<std::shared_ptr<const FeedforwardTable>> cache;
    const std::lock_guard<std::mutex> lock(mutex);
    for (const auto &t : cache) {
        if (t->phi_max() >= phi_max && t->lambda_max() >= lambda_max) return t;
    }
    // Round up so nearby requests share one table.
    const double phi_round = std::max(0.5, std::ceil(phi_max * 4.0) / 4.0);
    const double lambda_round = std::max(0.25, std::ceil(lambda_max * 4.0) / 4.0);
    auto table = std::make_shared<const FeedforwardTable>(phi_round, lambda_round);
    cache.push_back(table);
    return table;
}

TimedCircuit correct_circuit(const TimedCircuit &circuit, double c2, const FeedforwardTable &table) {
    if (c2 < 0.0) throw InvalidArgument("correct_circuit: c2 must be >= 0");
    TimedCircuit out = circuit;
    if (c2 == 0.0) return out;
    for (auto &g : out.gates) {
        if (!g.noisy) continue;
        g.gate.angle = table.input_angle(g.gate.angle, c2 * g.start);
    }
    return out;
}

TimedCircuit correct_circuit(const TimedCircuit &circuit, double c2) {
    double phi_max = 0.0;
    double lambda_max = 0.0;
    for (const auto &g : circuit.gates) {
        if (!g.noisy) continue;
        phi_max = std::max(phi_max, std::abs(g.gate.angle));
        lambda_max = std::max(lambda_max, c2 * g.start);
    }
    if (c2 == 0.0) return circuit;
    return correct_circuit(circuit, c2, *shared_feedforward_table(phi_max, lambda_max));
}

}  // namespace ioncodesign
