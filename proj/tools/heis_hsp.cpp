// Copyright 2026 The heis-hsp Authors
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

// Command-line driver for the verification suites and pipeline experiments.

#include <CLI11.hpp>
#include <cstdlib>
#include <iostream>
#include <string>

#include "heis/errors.hpp"
#include "heis/experiment.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitIo = 3;

double tolerance_from_environment() {
    const char* env = std::getenv("HEIS_HSP_TOLERANCE");
    if (env == nullptr) return 1e-9;
    char* end = nullptr;
    const double v = std::strtod(env, &end);
    if (end == env || *end != '\0' || !(v > 0.0)) {
        throw heis::ConfigInvalid(std::string("HEIS_HSP_TOLERANCE must be a positive number, got '") + env + "'");
    }
    return v;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Clebsch-Gordan hidden subgroup experiments over the Heisenberg group H_p"};
    app.require_subcommand(1);

    heis::ExperimentConfig config;
    std::string mode = "montecarlo", u2_mode = "probabilistic", format = "json";

    const char* commands[][2] = {
        {"rep-verify", "Irrep, character and QFT identities"},
        {"state-verify", "Hidden subgroup state identities"},
        {"cg-verify", "Clebsch-Gordan decompositions"},
        {"sample-irreps", "Weak Fourier sampling distribution"},
        {"solve-hscp", "Recover the conjugacy label i"},
        {"solve-hsp", "Recover the hidden subgroup"},
        {"pgm-compare", "Compare reduced PGM states with the Clebsch-Gordan states"},
        {"exact-dist", "Exact distribution of the measured label"},
    };
    for (const auto& [name, help] : commands) {
        auto* sub = app.add_subcommand(name, help);
        sub->add_option("--prime", config.prime, "Odd prime p")->capture_default_str();
        sub->add_option("--subgroup", config.subgroup, "Hidden subgroup (T, C, Full, N:i, N:inf, A:i,j, A:inf,j) or random")
            ->capture_default_str();
        sub->add_option("--trials", config.trials, "Number of Monte-Carlo trials")->capture_default_str();
        sub->add_option("--mode", mode, "exact or montecarlo")->capture_default_str();
        sub->add_option("--u2-mode", u2_mode, "exact or probabilistic")->capture_default_str();
        sub->add_option("--seed", config.seed, "Seed for all randomness")->capture_default_str();
        sub->add_option("--format", format, "json or csv")->capture_default_str();
        sub->add_option("--output", config.output, "Output file (standard output when omitted)");
        sub->add_option("--max-repetitions", config.max_repetitions, "Repetitions per full solve")->capture_default_str();
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitConfig;
    }

    try {
        config.command = heis::parse_command(app.get_subcommands().front()->get_name());
        config.mode = heis::parse_run_mode(mode);
        try {
            config.u2_mode = heis::parse_u2_mode(u2_mode);
        } catch (const heis::ParseError& e) {
            throw heis::ConfigInvalid(e.what());
        }
        config.format = heis::parse_output_format(format);
        config.tolerance = tolerance_from_environment();

        const heis::ExperimentReport report = heis::run(config);
        heis::write_report(report);
        std::size_t failed = 0;
        for (const auto& c : report.aggregate.checks) {
            if (!c.passed) {
                ++failed;
                std::cerr << "FAIL " << c.name << " (error " << c.max_error << ")\n";
            }
        }
        std::cerr << (report.aggregate.passed ? "PASS" : "FAIL") << ": " << to_string(config.command) << ", "
                  << report.aggregate.checks.size() - failed << "/" << report.aggregate.checks.size() << " checks\n";
        return heis::exit_code(report);
    } catch (const heis::IoFailure& e) {
        std::cerr << "I/O error: " << e.what() << "\n";
        return kExitIo;
    } catch (const heis::ConfigInvalid& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const heis::InvalidPrime& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const heis::ParseError& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return kExitConfig;
    }
}
