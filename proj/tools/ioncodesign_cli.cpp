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

// Command-line front end. Everything goes through the C API.

#include <CLI11.hpp>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <string>
#include <vector>

#include "ioncodesign/ioncodesign.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;

struct Options {
    std::string config;
    std::string out;
    std::optional<double> c2;
    std::optional<std::uint64_t> seed;
    std::optional<int> runs;
    std::optional<bool> feedforward;
    std::optional<long long> shots;
    std::optional<double> tau;
    std::optional<int> r;
    std::optional<int> iterations;
};

void add_common(CLI::App *sub, Options &o) {
    sub->add_option("--config", o.config, "JSON experiment config")->check(CLI::ExistingFile);
    sub->add_option("--out", o.out, "Output directory (default: output_dir from the config)");
    sub->add_option("--c2", o.c2, "Heating rate constant c2 [1/ms]");
    sub->add_option("--seed", o.seed, "Base random seed");
    sub->add_option("--runs", o.runs, "Noise trajectories per point");
    sub->add_flag("--feedforward,!--no-feedforward", o.feedforward, "Enable feedforward angle correction");
}

int report(icd_status status, const char *stage) {
    const char *field = icd_last_error_field();
    std::fprintf(stderr, "ioncodesign: %s error (%s)", stage, icd_status_name(status));
    if (field != nullptr && *field != '\0') std::fprintf(stderr, " in field '%s'", field);
    std::fprintf(stderr, ": %s\n", icd_last_error());
    return status == ICD_ERR_CONFIG || status == ICD_ERR_INVALID_ARGUMENT ? kExitUsage : kExitRuntime;
}

// Applies an override, remembering the first failure.
template <typename Setter, typename Value>
void apply(icd_status &status, icd_config *cfg, Setter setter, const std::optional<Value> &value) {
    if (status == ICD_OK && value) status = setter(cfg, *value);
}

int run(const std::string &command, const Options &o) {
    icd_config *cfg = nullptr;
    icd_status st = o.config.empty() ? icd_config_default(&cfg) : icd_config_load(o.config.c_str(), &cfg);
    if (st != ICD_OK) return report(st, "config");
    st = icd_config_apply_env(cfg, nullptr);
    apply(st, cfg, icd_config_set_c2, o.c2);
    apply(st, cfg, icd_config_set_seed, o.seed);
    apply(st, cfg, icd_config_set_n_runs, o.runs);
    if (st == ICD_OK && o.feedforward) st = icd_config_set_feedforward(cfg, *o.feedforward ? 1 : 0);
    apply(st, cfg, icd_config_set_shots, o.shots);
    apply(st, cfg, icd_config_set_tau, o.tau);
    apply(st, cfg, icd_config_set_r, o.r);
    apply(st, cfg, icd_config_set_iterations, o.iterations);
    if (st != ICD_OK) {
        const int code = report(st, "config");
        icd_config_free(cfg);
        return code;
    }
    const std::string out = o.out.empty() ? icd_config_output_dir(cfg) : o.out;
    st = icd_run(cfg, command.c_str(), out.c_str());
    icd_config_free(cfg);
    if (st != ICD_OK) {
        // Config problems found while running are still the caller's input.
        if (st == ICD_ERR_CONFIG) return report(st, "config");
        report(st, "runtime");
        return kExitRuntime;
    }
    std::printf("%s\n", icd_last_summary());
    return kExitOk;
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"Trapped-ion Trotter simulation with correlated motional noise"};
    app.set_version_flag("--version", std::string(icd_version()));
    app.require_subcommand(1);

    Options o;
    struct Sub {
        const char *name;
        const char *help;
    };
    const std::vector<Sub> subs{
        {"simulate-spectrum", "Exact and noisy NMR spectra at one Trotter depth"},
        {"depth-sweep", "Integrated fidelity and spectrum distance over Trotter depths"},
        {"calibrate", "Synthetic return-probability data and the c2 fit"},
        {"feedforward-table", "Optimal input angles over (phi_p, lambda)"},
        {"noise-stats", "Gate-angle moments and correlations, analytic vs sampled"},
        {"infer", "Hamiltonian parameter search against an exact spectrum"},
    };
    for (const auto &s : subs) {
        CLI::App *sub = app.add_subcommand(s.name, s.help);
        add_common(sub, o);
        const std::string name = s.name;
        if (name == "calibrate") sub->add_option("--shots", o.shots, "Shots per (phi_in, tau) point");
        if (name == "noise-stats") sub->add_option("--tau", o.tau, "Wait time tau [ms]");
        if (name == "simulate-spectrum") sub->add_option("--r", o.r, "Trotter steps");
        if (name == "infer") sub->add_option("--iterations", o.iterations, "Search iterations");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success &e) {
        return app.exit(e);
    } catch (const CLI::ParseError &e) {
        app.exit(e);
        if (e.get_exit_code() != 0) std::fprintf(stderr, "%s", app.help().c_str());
        return kExitUsage;
    }

    for (CLI::App *sub : app.get_subcommands()) return run(sub->get_name(), o);
    return kExitUsage;
}
