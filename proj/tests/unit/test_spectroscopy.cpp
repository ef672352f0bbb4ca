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

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "ioncodesign/errors.hpp"
#include "ioncodesign/spectroscopy.hpp"
#include "support/oracles.hpp"

using namespace ioncodesign;

namespace {

constexpr double kPi = std::numbers::pi;

/// Response from dense matrices: weight m_j / 2^(N-1) over basis states with
/// positive magnetization, expectation of S^z_tot after e^{-iHt}.
double oracle_response(const SpinHamiltonian &H, double t) {
    const int n = H.num_spins();
    const oracle::Mat u = oracle::evolution(oracle::heisenberg(n, H.couplings(), H.fields()), t);
    const oracle::Mat sz = oracle::sz_total(n);
    const oracle::Mat heis = u.adjoint() * sz * u;
    double acc = 0.0;
    for (Eigen::Index j = 0; j < sz.rows(); ++j) {
        const double m = sz(j, j).real();
        if (m > 0.0) acc += m * heis(j, j).real();
    }
    return 2.0 * acc / static_cast<double>(sz.rows());
}

/// Full width at half maximum by linear interpolation around the peak.
double fwhm(const Spectrum &s) {
    const auto peak = std::max_element(s.A_raw.begin(), s.A_raw.end());
    const auto ip = static_cast<std::size_t>(peak - s.A_raw.begin());
    const double half = *peak / 2.0;
    auto crossing = [&](int dir) {
        std::size_t i = ip;
        while (true) {
            const std::size_t next = dir > 0 ? i + 1 : i - 1;
            if (s.A_raw[next] < half) {
                const double f = (s.A_raw[i] - half) / (s.A_raw[i] - s.A_raw[next]);
                return s.omega[i] + f * (s.omega[next] - s.omega[i]);
            }
            i = next;
        }
    };
    return crossing(+1) - crossing(-1);
}

Spectrum lorentzian(const std::vector<double> &omega, double center, double width) {
    Spectrum s;
    s.omega = omega;
    s.gamma = width;
    const double dw = omega[1] - omega[0];
    double mass = 0.0;
    for (double w : omega) {
        const double v = width / (width * width + (w - center) * (w - center));
        s.A_raw.push_back(v);
        mass += v * dw / (2.0 * kPi);
    }
    for (double v : s.A_raw) s.A_norm.push_back(v / mass);
    return s;
}

}  // namespace

TEST_CASE("response at t = 0 is N/4") {
    for (int n = 1; n <= 5; ++n) {
        const auto H = random_hamiltonian(n, 11);
        const std::vector<double> times{0.0};
        CHECK(response_function(H, Evolver::exact(), times).S[0] == doctest::Approx(n / 4.0).epsilon(1e-14));
        CHECK(response_function(H, Evolver::noiseless_trotter(3), times).S[0] ==
              doctest::Approx(n / 4.0).epsilon(1e-14));
    }
}

TEST_CASE("exact response matches the dense-matrix oracle") {
    for (int n : {2, 3, 4}) {
        const auto H = random_hamiltonian(n, 100 + static_cast<std::uint64_t>(n));
        const auto times = uniform_times(2.0, 5);
        const auto r = response_function(H, Evolver::exact(), times);
        for (std::size_t k = 0; k < times.size(); ++k) {
            CHECK(std::abs(r.S[k] - oracle_response(H, times[k])) < 1e-10);
        }
    }
}

TEST_CASE("without fields the response is constant") {
    const auto R = random_hamiltonian(3, 5);
    const SpinHamiltonian H(3, R.couplings(), {0.0, 0.0, 0.0});
    const auto r = response_function(H, Evolver::exact(), uniform_times(5.0, 11));
    for (double s : r.S) CHECK(s == doctest::Approx(0.75).epsilon(1e-10));
}

TEST_CASE("single-spin response is the Larmor cosine") {
    const double h0 = 3.0;
    const SpinHamiltonian H(1, {0.0}, {h0});
    const auto times = uniform_times(4.0, 41);
    const auto r = response_function(H, Evolver::exact(), times);
    for (std::size_t k = 0; k < times.size(); ++k) {
        CHECK(r.S[k] == doctest::Approx(std::cos(h0 * times[k]) / 4.0).epsilon(1e-12));
    }
}

TEST_CASE("spectrum of a cosine matches the damped-cosine integral") {
    const double a = 3.0, gamma = 0.5, T = 8.0;
    ResponseSeries series;
    series.times = uniform_times(T, 8001);
    for (double t : series.times) series.S.push_back(std::cos(a * t));
    const std::vector<double> omega{0.0, 1.0, 2.9, 3.0, 5.0};
    const auto s = spectrum(series, gamma, omega);
    for (std::size_t w = 0; w < omega.size(); ++w) {
        const double ref =
            0.5 * (oracle::damped_cos_integral(omega[w] - a, gamma, T) + oracle::damped_cos_integral(omega[w] + a, gamma, T));
        CHECK(std::abs(s.A_raw[w] - ref) < 1e-5);
    }
}

TEST_CASE("Larmor spectrum peaks at h0 and its width scales with gamma") {
    const double h0 = 6.0;
    const SpinHamiltonian H(1, {0.0}, {h0});
    const auto r = response_function(H, Evolver::exact(), uniform_times(40.0, 4001));
    const auto omega = OmegaGrid{3.0, 9.0, 6001}.points();
    const auto narrow = spectrum(r, 0.3, omega);
    const auto wide = spectrum(r, 0.6, omega);
    const auto peak = std::max_element(narrow.A_norm.begin(), narrow.A_norm.end()) - narrow.A_norm.begin();
    CHECK(omega[static_cast<std::size_t>(peak)] == doctest::Approx(h0).epsilon(1e-3));
    // Lorentzian FWHM is 2 gamma.
    CHECK(fwhm(narrow) == doctest::Approx(0.6).epsilon(0.05));
    CHECK(fwhm(wide) / fwhm(narrow) == doctest::Approx(2.0).epsilon(0.1));
}

TEST_CASE("normalized spectrum has unit mass and no negative values") {
    const auto H = random_hamiltonian(3, 2);
    const auto r = response_function(H, Evolver::exact(), uniform_times(4.0, 41));
    const auto s = spectrum(r, 0.75, OmegaGrid{0.0, 12.0, 241}.points());
    double mass = 0.0;
    for (double v : s.A_norm) {
        CHECK(v >= 0.0);
        mass += v * s.domega() / (2.0 * kPi);
    }
    CHECK(mass == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("Hellinger distance of two Lorentzians matches quadrature") {
    const double lo = -60.0, hi = 60.0;
    const auto omega = OmegaGrid{lo, hi, 120001}.points();
    for (auto [c0, c1, w0, w1] : {std::array{0.0, 1.0, 0.5, 0.5}, std::array{-2.0, 3.0, 0.4, 1.2},
                                  std::array{0.0, 0.0, 0.3, 0.9}}) {
        const auto a = lorentzian(omega, c0, w0);
        const auto b = lorentzian(omega, c1, w1);
        auto density = [](double c, double g) {
            return [c, g](double w) { return g / (g * g + (w - c) * (w - c)); };
        };
        const auto fa = density(c0, w0);
        const auto fb = density(c1, w1);
        const double za = oracle::integrate(fa, lo, hi, 1e-12);
        const double zb = oracle::integrate(fb, lo, hi, 1e-12);
        const double overlap =
            oracle::integrate([&](double w) { return std::sqrt(fa(w) * fb(w) / (za * zb)); }, lo, hi, 1e-12);
        const double ref = std::sqrt(std::max(0.0, 1.0 - overlap));
        CHECK(std::abs(hellinger(a, b) - ref) < 1e-6);
    }
}

TEST_CASE("Hellinger distance: identity, symmetry, bounds, grid checks") {
    const auto omega = OmegaGrid{0.0, 10.0, 201}.points();
    const auto a = lorentzian(omega, 3.0, 0.5);
    const auto b = lorentzian(omega, 6.0, 0.5);
    CHECK(hellinger(a, a) == 0.0);
    CHECK(hellinger(a, b) == doctest::Approx(hellinger(b, a)));
    CHECK(hellinger(a, b) > 0.0);
    CHECK(hellinger(a, b) <= 1.0);
    const auto c = lorentzian(OmegaGrid{0.0, 11.0, 201}.points(), 3.0, 0.5);
    CHECK_THROWS_AS(hellinger(a, c), InvalidArgument);
}

TEST_CASE("noisy evolver with zero heating equals the noiseless Trotter result") {
    const auto H = random_hamiltonian(3, 6);
    const auto times = uniform_times(2.0, 9);
    const auto clean = simulate(H, Evolver::noiseless_trotter(4), times);
    const auto noisy = simulate(H, Evolver::noisy_trotter(4, {0.0, 17, true}, 3), times);
    for (std::size_t k = 0; k < times.size(); ++k) {
        CHECK(noisy.response.S[k] == doctest::Approx(clean.response.S[k]).epsilon(1e-13));
        CHECK(noisy.fidelity.F[k] == doctest::Approx(clean.fidelity.F[k]).epsilon(1e-13));
    }
}

TEST_CASE("fidelity trace: F(0) = 1, bounded, trapezoid integral") {
    const auto H = random_hamiltonian(3, 8);
    const auto times = uniform_times(4.0, 11);
    for (const auto &ev : {Evolver::noiseless_trotter(3), Evolver::noisy_trotter(3, {0.05, 4, true}, 4),
                           Evolver::noisy_trotter(3, {0.05, 4, true}, 4, true)}) {
        const auto f = fidelity_trace(H, ev, times);
        CHECK(f.F[0] == doctest::Approx(1.0).epsilon(1e-14));
        for (double v : f.F) {
            CHECK(v >= 0.0);
            CHECK(v <= 1.0);
        }
        double integral = 0.0;
        for (std::size_t k = 1; k < times.size(); ++k) integral += 0.5 * (times[k] - times[k - 1]) * (f.F[k] + f.F[k - 1]);
        CHECK(std::abs(f.F_int - integral / 4.0) < 1e-12);
    }
    CHECK(fidelity_trace(H, Evolver::exact(), times).F_int == 1.0);
}

TEST_CASE("process fidelity from the trace formula") {
    const auto H = random_hamiltonian(2, 9);
    const auto u = exact_unitary(H, 1.0);
    CHECK(process_fidelity(u, u) == doctest::Approx(1.0));
    const UnitaryMatrix phase = u * std::exp(Complex(0.0, 0.7));
    CHECK(process_fidelity(phase, u) == doctest::Approx(1.0));
    const UnitaryMatrix x = gate_matrix(GateSpec::rx(0, 2.0 * kPi), 2);
    // Tr(-i sigma_x (x) I) = 0.
    CHECK(process_fidelity(x, UnitaryMatrix::Identity(4, 4)) < 1e-24);
}

TEST_CASE("noisy simulation is deterministic for a seed") {
    const auto H = random_hamiltonian(3, 3);
    const auto times = uniform_times(2.0, 5);
    const auto ev = Evolver::noisy_trotter(3, {0.1, 99, true}, 5);
    const auto a = simulate(H, ev, times);
    const auto b = simulate(H, ev, times);
    CHECK(a.response.S == b.response.S);
    CHECK(a.fidelity.F == b.fidelity.F);
    auto other = ev;
    other.noise.seed = 100;
    CHECK(simulate(H, other, times).response.S != a.response.S);
}

TEST_CASE("property: heating lowers the integrated fidelity") {
    const auto H = random_hamiltonian(3, 12);
    const auto times = uniform_times(3.0, 7);
    const double clean = fidelity_trace(H, Evolver::noiseless_trotter(6), times).F_int;
    const double noisy = fidelity_trace(H, Evolver::noisy_trotter(6, {0.05, 1, true}, 20), times).F_int;
    CHECK(noisy < clean);
}

TEST_CASE("CSV writers emit headers and full precision rows") {
    ResponseSeries r{{0.0, 0.5}, {0.5, 1.0 / 3.0}};
    std::ostringstream out;
    write_response_csv(out, r);
    CHECK(out.str() == "t_ms,S\n0,0.5\n0.5,0.33333333333333331\n");

    FidelityTrace f{{0.0, 1.0}, {1.0, 0.25}, 0.625};
    std::ostringstream fo;
    write_fidelity_csv(fo, f);
    CHECK(fo.str() == "t_ms,F\n0,1\n1,0.25\n");

    const auto s = lorentzian({0.0, 1.0}, 0.0, 1.0);
    std::ostringstream so;
    write_spectrum_csv(so, s);
    CHECK(so.str().rfind("omega,A_raw,A_norm\n", 0) == 0);
}

TEST_CASE("spectroscopy argument checks") {
    ResponseSeries one{{0.0}, {0.5}};
    CHECK_THROWS_AS(spectrum(one, 0.5, {0.0, 1.0}), InvalidArgument);
    ResponseSeries uneven{{0.0, 1.0, 3.0}, {0.5, 0.4, 0.3}};
    CHECK_THROWS_AS(spectrum(uneven, 0.5, {0.0, 1.0}), InvalidArgument);
    ResponseSeries ok{{0.0, 1.0}, {0.5, 0.4}};
    CHECK_THROWS_AS(spectrum(ok, 0.0, {0.0, 1.0}), InvalidArgument);
    CHECK_THROWS_AS(uniform_times(1.0, 0), InvalidArgument);
    CHECK_THROWS_AS((OmegaGrid{1.0, 1.0, 10}.points()), InvalidArgument);
    CHECK_THROWS_AS(simulate(random_hamiltonian(2, 1), Evolver::noiseless_trotter(0), {1.0}), InvalidArgument);
    CHECK_THROWS_AS(simulate(random_hamiltonian(2, 1), Evolver::exact(), {}), InvalidArgument);
    CHECK_THROWS_AS(trapezoid_mean({0.0, 1.0}, {1.0}), InvalidArgument);
}
