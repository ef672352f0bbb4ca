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

// Exercises the shared library through its C header only.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <string>
#include <vector>

#include "ioncodesign/ioncodesign.h"

namespace fs = std::filesystem;

namespace {

constexpr double kPi = 3.14159265358979323846;

struct Hamiltonian {
    icd_hamiltonian *p = nullptr;
    ~Hamiltonian() { icd_hamiltonian_free(p); }
};

struct Config {
    icd_config *p = nullptr;
    ~Config() { icd_config_free(p); }
};

std::string config_json(const icd_config *cfg) {
    std::size_t needed = 0;
    REQUIRE(icd_config_to_json(cfg, nullptr, 0, &needed) == ICD_OK);
    std::string out(needed, '\0');
    REQUIRE(icd_config_to_json(cfg, out.data(), out.size(), &needed) == ICD_OK);
    out.resize(needed - 1);
    return out;
}

}  // namespace

TEST_CASE("version and status names") {
    CHECK(std::string(icd_version()) == "0.3.0");
    CHECK(std::string(icd_status_name(ICD_OK)) == "ok");
    CHECK(std::string(icd_status_name(ICD_ERR_CONFIG)) == "config");
    CHECK(std::string(icd_status_name(ICD_ERR_IO)) == "io");
    CHECK(std::string(icd_status_name(static_cast<icd_status>(99))) == "unknown");
}

TEST_CASE("status codes are stable") {
    CHECK(ICD_OK == 0);
    CHECK(ICD_ERR_INVALID_ARGUMENT == 1);
    CHECK(ICD_ERR_RESOURCE_LIMIT == 2);
    CHECK(ICD_ERR_UNIDENTIFIABLE == 3);
    CHECK(ICD_ERR_CONFIG == 4);
    CHECK(ICD_ERR_IO == 5);
    CHECK(ICD_ERR_RUNTIME == 6);
}

TEST_CASE("hamiltonian handles") {
    Hamiltonian h;
    const double J[] = {0.0, 0.5, 0.5, 0.0};
    const double f[] = {1.0, -1.0};
    REQUIRE(icd_hamiltonian_create(2, J, f, &h.p) == ICD_OK);
    CHECK(icd_hamiltonian_num_spins(h.p) == 2);

    std::size_t needed = 0;
    CHECK(icd_hamiltonian_to_json(h.p, nullptr, 0, &needed) == ICD_OK);
    CHECK(needed > 10);
    std::vector<char> small(4);
    CHECK(icd_hamiltonian_to_json(h.p, small.data(), small.size(), &needed) == ICD_ERR_INVALID_ARGUMENT);
    std::vector<char> buf(needed);
    CHECK(icd_hamiltonian_to_json(h.p, buf.data(), buf.size(), nullptr) == ICD_OK);
    CHECK(std::strlen(buf.data()) == needed - 1);
    CHECK(std::string(buf.data()).find("\"n\": 2") != std::string::npos);

    Hamiltonian d;
    REQUIRE(icd_hamiltonian_default(&d.p) == ICD_OK);
    CHECK(icd_hamiltonian_num_spins(d.p) == 4);
    Hamiltonian loaded;
    const auto fixture = fs::path(IONCODESIGN_SOURCE_DIR) / "fixtures" / "default_4spin.json";
    REQUIRE(icd_hamiltonian_load(fixture.c_str(), &loaded.p) == ICD_OK);
    std::size_t a = 0, b = 0;
    icd_hamiltonian_to_json(d.p, nullptr, 0, &a);
    icd_hamiltonian_to_json(loaded.p, nullptr, 0, &b);
    std::string sa(a, '\0'), sb(b, '\0');
    icd_hamiltonian_to_json(d.p, sa.data(), a, nullptr);
    icd_hamiltonian_to_json(loaded.p, sb.data(), b, nullptr);
    CHECK(sa == sb);

    Hamiltonian r;
    REQUIRE(icd_hamiltonian_random(3, 7, &r.p) == ICD_OK);
    CHECK(icd_hamiltonian_num_spins(r.p) == 3);
    CHECK(icd_hamiltonian_num_spins(nullptr) == 0);
    icd_hamiltonian_free(nullptr);
}

TEST_CASE("hamiltonian errors") {
    icd_hamiltonian *h = nullptr;
    const double bad_J[] = {0.0, 0.5, 0.4, 0.0};
    const double f[] = {1.0, -1.0};
    CHECK(icd_hamiltonian_create(2, bad_J, f, &h) == ICD_ERR_INVALID_ARGUMENT);
    CHECK(h == nullptr);
    CHECK(std::string(icd_last_error()).size() > 0);
    CHECK(icd_hamiltonian_create(2, nullptr, f, &h) == ICD_ERR_INVALID_ARGUMENT);
    CHECK(icd_hamiltonian_create(0, bad_J, f, &h) == ICD_ERR_INVALID_ARGUMENT);
    CHECK(icd_hamiltonian_random(2, 1, nullptr) == ICD_ERR_INVALID_ARGUMENT);
    CHECK(icd_hamiltonian_load("/no/such/file.json", &h) == ICD_ERR_CONFIG);
    CHECK(std::string(icd_last_error_field()) == "hamiltonian_file");
}

TEST_CASE("errors are cleared by the next successful call") {
    double out = 0.0;
    CHECK(icd_return_probability(1.0, -1.0, &out) == ICD_ERR_INVALID_ARGUMENT);
    CHECK(std::string(icd_last_error()).size() > 0);
    CHECK(icd_return_probability(1.0, 0.0, &out) == ICD_OK);
    CHECK(std::string(icd_last_error()).empty());
    CHECK(std::string(icd_last_error_field()).empty());
}

TEST_CASE("analytic functions") {
    double v = 0.0;
    REQUIRE(icd_return_probability(kPi, 0.0, &v) == ICD_OK);
    CHECK(v == doctest::Approx(0.5));
    REQUIRE(icd_hyp1f2(1.0, 1.0, 1.5, -0.25, &v) == ICD_OK);
    CHECK(v == doctest::Approx(std::sin(1.0)).epsilon(1e-12));
    CHECK(icd_hyp1f2(1.0, -1.0, 1.5, -0.25, &v) == ICD_ERR_INVALID_ARGUMENT);

    double mean = 0, typical = 0, var = 0;
    REQUIRE(icd_angle_moments(2.0, 0.5, &mean, &typical, &var) == ICD_OK);
    CHECK(mean == doctest::Approx(2.0 / 1.5));
    CHECK(typical == doctest::Approx(2.0 * std::exp(-0.5)));
    CHECK(var == doctest::Approx(4.0 * (1.0 / 2.0 - 1.0 / 2.25)));

    REQUIRE(icd_angle_correlation(10.0, 0.0, 0.02, &v) == ICD_OK);
    CHECK(v == doctest::Approx(1.0));
    CHECK(icd_angle_correlation(0.0, 1.0, 0.02, &v) == ICD_ERR_INVALID_ARGUMENT);

    REQUIRE(icd_avg_gate_fidelity(1.0, 1.0, 0.0, &v) == ICD_OK);
    CHECK(v == doctest::Approx(1.0));
    double star = 0, fstar = 0;
    REQUIRE(icd_optimal_input_angle(kPi / 2.0, 0.0, 4.0 * kPi, &star, &fstar) == ICD_OK);
    CHECK(star == doctest::Approx(kPi / 2.0).epsilon(1e-5));
    CHECK(fstar == doctest::Approx(1.0));
    CHECK(icd_optimal_input_angle(1.0, 0.1, 0.0, &star, &fstar) == ICD_ERR_INVALID_ARGUMENT);
    CHECK(icd_return_probability(1.0, 0.1, nullptr) == ICD_ERR_INVALID_ARGUMENT);
}

TEST_CASE("calibration through the C API") {
    const double phi[] = {kPi / 2.0, kPi, 1.5 * kPi, 2.0 * kPi};
    const double tau[] = {5.0, 10.0, 20.0, 40.0};
    std::vector<double> p(16);
    REQUIRE(icd_simulate_calibration(phi, 4, tau, 4, 0.02, 10000, 11, p.data()) == ICD_OK);
    double c2 = 0, res = 0;
    REQUIRE(icd_fit_c2(phi, 4, tau, 4, p.data(), &c2, &res) == ICD_OK);
    CHECK(std::abs(c2 - 0.02) / 0.02 < 0.05);
    CHECK(icd_fit_c2(phi, 4, tau, 1, p.data(), &c2, &res) == ICD_ERR_INVALID_ARGUMENT);
    const double zero[] = {0.0};
    CHECK(icd_fit_c2(zero, 1, tau, 4, p.data(), &c2, &res) == ICD_ERR_UNIDENTIFIABLE);
    CHECK(icd_simulate_calibration(phi, 4, tau, 4, 0.02, 0, 11, p.data()) == ICD_ERR_INVALID_ARGUMENT);
}

TEST_CASE("gate counts and response") {
    Hamiltonian h;
    REQUIRE(icd_hamiltonian_random(4, 1, &h.p) == ICD_OK);
    std::size_t total = 0, two = 0, one = 0;
    REQUIRE(icd_trotter_gate_counts(h.p, 2, &total, &two, &one) == ICD_OK);
    CHECK(total == 76);
    CHECK(two == 36);
    CHECK(one == 40);
    CHECK(icd_trotter_gate_counts(h.p, 0, &total, &two, &one) == ICD_ERR_INVALID_ARGUMENT);

    Hamiltonian spin;
    const double J[] = {0.0};
    const double f[] = {2.0};
    REQUIRE(icd_hamiltonian_create(1, J, f, &spin.p) == ICD_OK);
    const double times[] = {0.0, 0.5, 1.0};
    double S[3], F[3];
    REQUIRE(icd_response_function(spin.p, 0, 0.0, 1, 0, 0, times, 3, S, F) == ICD_OK);
    for (int k = 0; k < 3; ++k) {
        CHECK(S[k] == doctest::Approx(std::cos(2.0 * times[k]) / 4.0));
        CHECK(F[k] == 1.0);
    }
    REQUIRE(icd_response_function(h.p, 3, 0.02, 2, 5, 1, times, 3, S, nullptr) == ICD_OK);
    CHECK(S[0] == doctest::Approx(1.0));
    CHECK(icd_response_function(h.p, 3, -1.0, 2, 5, 0, times, 3, S, F) == ICD_ERR_INVALID_ARGUMENT);
    CHECK(icd_response_function(h.p, 3, 0.0, 2, 5, 0, nullptr, 3, S, F) == ICD_ERR_INVALID_ARGUMENT);

    Hamiltonian big;
    REQUIRE(icd_hamiltonian_random(13, 1, &big.p) == ICD_OK);
    CHECK(icd_response_function(big.p, 0, 0.0, 1, 0, 0, times, 1, S, F) == ICD_ERR_RESOURCE_LIMIT);
}

TEST_CASE("config handles and overrides") {
    Config c;
    REQUIRE(icd_config_default(&c.p) == ICD_OK);
    const auto before = config_json(c.p);
    const auto hash = icd_config_hash(c.p);
    CHECK(std::string(icd_config_output_dir(c.p)) == "results");

    CHECK(icd_config_set_c2(c.p, -1.0) == ICD_ERR_CONFIG);
    CHECK(std::string(icd_last_error_field()) == "c2");
    CHECK(config_json(c.p) == before);
    CHECK(icd_config_set_n_runs(c.p, 0) == ICD_ERR_CONFIG);
    CHECK(std::string(icd_last_error_field()) == "n_runs");
    CHECK(icd_config_set_shots(c.p, 0) == ICD_ERR_CONFIG);
    CHECK(icd_config_set_tau(c.p, -2.0) == ICD_ERR_CONFIG);
    CHECK(icd_config_set_r(c.p, 0) == ICD_ERR_CONFIG);
    CHECK(icd_config_set_iterations(c.p, -1) == ICD_ERR_CONFIG);
    CHECK(icd_config_hash(c.p) == hash);

    REQUIRE(icd_config_set_c2(c.p, 0.01) == ICD_OK);
    REQUIRE(icd_config_set_seed(c.p, 5) == ICD_OK);
    REQUIRE(icd_config_set_feedforward(c.p, 1) == ICD_OK);
    CHECK(icd_config_hash(c.p) != hash);
    const auto after = config_json(c.p);
    CHECK(after.find("\"c2\":0.01") != std::string::npos);
    CHECK(after.find("\"seed\":5") != std::string::npos);
    CHECK(after.find("\"feedforward\":true") != std::string::npos);

    Config parsed;
    REQUIRE(icd_config_parse(after.c_str(), &parsed.p) == ICD_OK);
    CHECK(icd_config_hash(parsed.p) == icd_config_hash(c.p));
}

TEST_CASE("config parse errors report the field") {
    icd_config *c = nullptr;
    CHECK(icd_config_parse(R"({"spectrum": {"gamma": 0}})", &c) == ICD_ERR_CONFIG);
    CHECK(c == nullptr);
    CHECK(std::string(icd_last_error_field()) == "spectrum.gamma");
    CHECK(icd_config_parse(R"({"bogus": 1})", &c) == ICD_ERR_CONFIG);
    CHECK(std::string(icd_last_error_field()) == "bogus");
    CHECK(icd_config_parse(nullptr, &c) == ICD_ERR_INVALID_ARGUMENT);
    CHECK(icd_config_load("/no/such/config.json", &c) == ICD_ERR_CONFIG);
    CHECK(icd_config_hash(nullptr) == 0);
}

TEST_CASE("environment seed") {
    Config c;
    REQUIRE(icd_config_default(&c.p) == ICD_OK);
    ::setenv("IONCODESIGN_SEED", "77", 1);
    int applied = 0;
    REQUIRE(icd_config_apply_env(c.p, &applied) == ICD_OK);
    CHECK(applied == 1);
    CHECK(config_json(c.p).find("\"seed\":77") != std::string::npos);
    ::setenv("IONCODESIGN_SEED", "abc", 1);
    CHECK(icd_config_apply_env(c.p, &applied) == ICD_ERR_CONFIG);
    CHECK(std::string(icd_last_error_field()) == "IONCODESIGN_SEED");
    ::unsetenv("IONCODESIGN_SEED");
    REQUIRE(icd_config_apply_env(c.p, &applied) == ICD_OK);
    CHECK(applied == 0);
}

TEST_CASE("running commands") {
    CHECK(icd_is_command("calibrate") == 1);
    CHECK(icd_is_command("explore") == 0);
    CHECK(icd_is_command(nullptr) == 0);

    Config c;
    REQUIRE(icd_config_parse(R"({"calibration": {"shots": 100}})", &c.p) == ICD_OK);
    const auto dir = fs::temp_directory_path() / "ioncodesign_capi_run";
    fs::remove_all(dir);
    REQUIRE(icd_run(c.p, "calibrate", dir.c_str()) == ICD_OK);
    CHECK(std::string(icd_last_summary()).find("c2_hat") != std::string::npos);
    CHECK(fs::exists(dir / "calibration.csv"));
    CHECK(fs::exists(dir / "manifest.json"));
    CHECK(icd_run(c.p, "explore", dir.c_str()) == ICD_ERR_INVALID_ARGUMENT);
    CHECK(icd_run(c.p, "calibrate", nullptr) == ICD_ERR_INVALID_ARGUMENT);
    fs::remove_all(dir);

    // A regular file where the output directory should go.
    const auto blocker = fs::temp_directory_path() / "ioncodesign_capi_blocker";
    { std::FILE *f = std::fopen(blocker.c_str(), "w"); std::fclose(f); }
    CHECK(icd_run(c.p, "calibrate", (blocker / "sub").c_str()) == ICD_ERR_IO);
    fs::remove(blocker);
}
