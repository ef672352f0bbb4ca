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

#include "ioncodesign/calibration.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>
#include <string>

#include "ioncodesign/errors.hpp"
#include "ioncodesign/motional_noise.hpp"
#include "ioncodesign/parallel.hpp"
#include "ioncodesign/rng.hpp"
#include "ioncodesign/spinsim.hpp"

namespace ioncodesign {

void CalibrationCurve::validate() const {
    if (phi_in.empty() || tau.empty()) throw InvalidArgument("calibration curve: empty grid");
    if (p_return.size() != phi_in.size() * tau.size()) throw InvalidArgument("calibration curve: size mismatch");
    for (double t : tau) {
        if (!(t >= 0.0)) throw InvalidArgument("calibration curve: tau must be >= 0");
    }
    for (double p : p_return) {
        if (!(p >= 0.0 && p <= 1.0)) throw InvalidArgument("calibration curve: probabilities must lie in [0, 1]");
    }
}

namespace {

void check_grids(const std::vector<double> &phi_grid, const std::vector<double> &tau_grid) {
    if (phi_grid.empty() || tau_grid.empty()) throw InvalidArgument("calibration: grids must be non-empty");
    for (double t : tau_grid) {
        if (!(t >= 0.0)) throw InvalidArgument("calibration: tau must be >= 0");
    }
    for (double p : phi_grid) {
        if (!std::isfinite(p)) throw InvalidArgument("calibration: phi_in must be finite");
    }
}

// Minimizes f on [a, b]; f is assumed unimodal there.
template <typename F>
double golden_min(F &&f, double a, double b, double tol) {
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = b - inv_phi * (b - a);
    double x2 = a + inv_phi * (b - a);
    double f1 = f(x1);
    double f2 = f(x2);
    while (b - a > tol * std::max(1.0, std::abs(a) + std::abs(b))) {
        if (f1 <= f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = f(x2);
        }
    }
    return f1 <= f2 ? x1 : x2;
}

// 0 followed by a log-spaced grid, then golden refinement between the
// neighbours of the best grid point.
template <typename F>
double scan_and_refine(F &&f, double lo, double hi, int per_decade) {
    std::vector<double> grid{0.0};
    const double decades = std::log10(hi / lo);
    const int count = static_cast<int>(std::ceil(decades * per_decade));
    for (int k = 0; k <= count; ++k) grid.push_back(lo * std::pow(10.0, decades * k / count));
    std::size_t best = 0;
    double best_val = f(grid[0]);
    for (std::size_t k = 1; k < grid.size(); ++k) {
        const double v = f(grid[k]);
        if (v < best_val) {
            best_val = v;
            best = k;
        }
    }
    const double a = grid[best == 0 ? 0 : best - 1];
    const double b = grid[std::min(best + 1, grid.size() - 1)];
    const double x = golden_min(f, a, b, 1e-10);
    return f(x) < best_val ? x : grid[best];
}

}  // namespace

CalibrationCurve simulate_calibration(const std::vector<double> &phi_grid, const std::vector<double> &tau_grid,
                                      double c2_true, long long shots, std::uint64_t seed) {
    check_grids(phi_grid, tau_grid);
    if (shots < 1) throw InvalidArgument("simulate_calibration: shots must be >= 1");
    if (!(c2_true >= 0.0)) throw InvalidArgument("simulate_calibration: c2 must be >= 0");

    CalibrationCurve curve{phi_grid, tau_grid, std::vector<double>(phi_grid.size() * tau_grid.size()), shots};
    const std::size_t n_tau = tau_grid.size();
    const std::array<int, 2> down{0, 0};
    parallel_for(curve.p_return.size(), [&](std::size_t idx) {
        const std::size_t i = idx / n_tau;
        const std::size_t j = idx % n_tau;
        Rng rng(derive_seed(seed, {i, j}));
        std::uniform_real_distribution<double> unit(0.0, 1.0);
        const std::array<double, 1> when{tau_grid[j]};
        std::array<double, 1> u{0.0};
        long long hits = 0;
        for (long long s = 0; s < shots; ++s) {
            if (c2_true > 0.0) sample_path(when, c2_true, true, rng, u);
            StateVector state = basis_state(2, down);
            state = apply_gate(std::move(state), GateSpec::xx(0, 1, noisy_angle(phi_grid[i], u[0])));
            if (unit(rng) < std::norm(state[0])) ++hits;
        }
        curve.p_return[idx] = static_cast<double>(hits) / static_cast<double>(shots);
    });
    return curve;
}

CalibrationCurve analytic_calibration(const std::vector<double> &phi_grid, const std::vector<double> &tau_grid,
                                      double c2) {
    check_grids(phi_grid, tau_grid);
    if (!(c2 >= 0.0)) throw InvalidArgument("analytic_calibration: c2 must be >= 0");
    CalibrationCurve curve{phi_grid, tau_grid, {}, 0};
    curve.p_return.reserve(phi_grid.size() * tau_grid.size());
    for (double phi : phi_grid) {
        for (double t : tau_grid) curve.p_return.push_back(return_probability(phi, c2 * t));
    }
    return curve;
}

double model_residual(const CalibrationCurve &curve, double c2) {
    double acc = 0.0;
    for (std::size_t i = 0; i < curve.phi_in.size(); ++i) {
        for (std::size_t j = 0; j < curve.tau.size(); ++j) {
            const double d = curve.at(i, j) - return_probability(curve.phi_in[i], c2 * curve.tau[j]);
            acc += d * d;
        }
    }
    return acc;
}

FitResult fit_c2(const CalibrationCurve &curve) {
    curve.validate();
    if (std::set<double>(curve.tau.begin(), curve.tau.end()).size() < 2) {
        throw InvalidArgument("fit_c2: need at least two distinct tau values");
    }
    if (std::all_of(curve.phi_in.begin(), curve.phi_in.end(), [](double p) { return p == 0.0; })) {
        throw Unidentifiable("fit_c2: every phi_in is zero, the data carry no information on c2");
    }
    const auto objective = [&](double c2) { return model_residual(curve, c2); };
    const double c2_hat = scan_and_refine(objective, 1e-7, 10.0, 20);
    return {c2_hat, objective(c2_hat)};
}

PhaseDampingFit fit_phase_damping(const CalibrationCurve &curve) {
    curve.validate();
    const std::size_t n_phi = curve.phi_in.size();
    const std::size_t n_tau = curve.tau.size();
    // For fixed Gamma the best cos(phi/2 + delta) per row is a clamped
    // linear least-squares coefficient.
    const auto solve = [&](double gamma, std::vector<double> *coeffs) {
        double aa = 0.0;
        for (double t : curve.tau) aa += 0.25 * std::exp(-2.0 * gamma * t);
        double residual = 0.0;
        for (std::size_t i = 0; i < n_phi; ++i) {
            double ay = 0.0;
            for (std::size_t j = 0; j < n_tau; ++j) ay += 0.5 * std::exp(-gamma * curve.tau[j]) * (curve.at(i, j) - 0.5);
            const double c = aa > 0.0 ? std::clamp(ay / aa, -1.0, 1.0) : 0.0;
            for (std::size_t j = 0; j < n_tau; ++j) {
                const double d = curve.at(i, j) - 0.5 - 0.5 * std::exp(-gamma * curve.tau[j]) * c;
                residual += d * d;
            }
            if (coeffs) (*coeffs)[i] = c;
        }
        return residual;
    };
    PhaseDampingFit fit;
    fit.gamma = scan_and_refine([&](double g) { return solve(g, nullptr); }, 1e-6, 10.0, 20);
    std::vector<double> coeffs(n_phi);
    fit.residual = solve(fit.gamma, &coeffs);
    fit.delta.resize(n_phi);
    for (std::size_t i = 0; i < n_phi; ++i) fit.delta[i] = std::acos(coeffs[i]) - 0.5 * curve.phi_in[i];
    return fit;
}

void write_calibration_csv(std::ostream &out, const CalibrationCurve &curve) {
    out << "phi_in,tau_ms,p_return,shots\n";
    char buf[128];
    for (std::size_t i = 0; i < curve.phi_in.size(); ++i) {
        for (std::size_t j = 0; j < curve.tau.size(); ++j) {
            std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%lld\n", curve.phi_in[i], curve.tau[j], curve.at(i, j),
                          curve.shots);
            out << buf;
        }
    }
}

CalibrationCurve read_calibration_csv(std::istream &in) {
    std::string line;
    if (!std::getline(in, line)) throw IoError("calibration csv: empty input");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "phi_in,tau_ms,p_return,shots") throw IoError("calibration csv: unexpected header '" + line + "'");

    CalibrationCurve curve;
    std::map<std::pair<double, double>, double> values;
    bool have_shots = false;
    std::size_t row = 1;
    while (std::getline(in, line)) {
        ++row;
        if (line.empty() || line == "\r") continue;
        std::istringstream fields(line);
        std::string cell[4];
        for (auto &c : cell) {
            if (!std::getline(fields, c, ',')) throw IoError("calibration csv: row " + std::to_string(row) + " is short");
        }
        double phi = 0.0, tau = 0.0, p = 0.0;
        long long shots = 0;
        try {
            phi = std::stod(cell[0]);
            tau = std::stod(cell[1]);
            p = std::stod(cell[2]);
            shots = std::stoll(cell[3]);
        } catch (const std::exception &) {
            throw IoError("calibration csv: row " + std::to_string(row) + " is not numeric");
        }
        if (have_shots && shots != curve.shots) throw IoError("calibration csv: shots differ between rows");
        curve.shots = shots;
        have_shots = true;
        if (std::find(curve.phi_in.begin(), curve.phi_in.end(), phi) == curve.phi_in.end()) curve.phi_in.push_back(phi);
        if (std::find(curve.tau.begin(), curve.tau.end(), tau) == curve.tau.end()) curve.tau.push_back(tau);
        if (!values.emplace(std::make_pair(phi, tau), p).second) {
            throw IoError("calibration csv: duplicate point at row " + std::to_string(row));
        }
    }
    if (values.size() != curve.phi_in.size() * curve.tau.size() || values.empty()) {
        throw IoError("calibration csv: rows do not form a full (phi_in, tau) grid");
    }
    for (double phi : curve.phi_in) {
        for (double tau : curve.tau) curve.p_return.push_back(values.at({phi, tau}));
    }
    curve.validate();
    return curve;
}

}  // namespace ioncodesign
