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

#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "heis/heisenberg_group.hpp"
#include "heis/hscp_pipeline.hpp"

namespace heis {

enum class Command { RepVerify, StateVerify, CgVerify, SampleIrreps, SolveHscp, SolveHsp, PgmCompare, ExactDist };
enum class RunMode { Exact, MonteCarlo };
enum class OutputFormat { Json, Csv };

std::string to_string(Command c);
std::string to_string(RunMode m);
std::string to_string(OutputFormat f);
/// Each throws ConfigInvalid on unknown text.
Command parse_command(std::string_view text);
RunMode parse_run_mode(std::string_view text);
OutputFormat parse_output_format(std::string_view text);

inline constexpr int kMaxMonteCarloPrime = 31;
inline constexpr int kMaxExactPrime = 7;

struct ExperimentConfig {
    Command command = Command::SolveHsp;
    int prime = 5;
    /// Subgroup syntax accepted by parse_subgroup, or "random" for a uniformly drawn A(i,j).
    std::string subgroup = "random";
    std::size_t trials = 1000;
    RunMode mode = RunMode::MonteCarlo;
    U2Mode u2_mode = U2Mode::PaperProbabilistic;
    std::uint64_t seed = 0;
    OutputFormat format = OutputFormat::Json;
    /// Empty means standard output.
    std::string output;
    std::size_t max_repetitions = 50;
    double tolerance = 1e-9;

    bool operator==(const ExperimentConfig&) const = default;
};

/// Throws ConfigInvalid when the combination cannot be run.
void validate(const ExperimentConfig& config);

struct CheckResult {
    std::string name;
    bool passed = true;
    double max_error = 0.0;

    bool operator==(const CheckResult&) const = default;
};

struct TableRow {
    std::string label;
    double value = 0.0;
    std::optional<double> reference;

    bool operator==(const TableRow&) const = default;
};

struct Aggregate {
    std::size_t trials = 0;
    std::size_t successes = 0;
    double success_rate = 0.0;
    /// Empirical stage rates of the pipeline, keyed by stage name.
    std::map<std::string, double> branch_rates;
    std::optional<double> exact_rate;
    std::optional<double> sigma;
    std::optional<double> chi_square;
    std::optional<std::size_t> chi_square_dof;
    /// Fraction of trials in which a full solve with max_repetitions returned the hidden
    /// subgroup.
    std::optional<double> solved_rate;
    std::vector<CheckResult> checks;
    std::vector<TableRow> table;
    bool passed = true;
    double wall_time = 0.0;

    bool operator==(const Aggregate&) const = default;
};

struct ExperimentReport {
    ExperimentConfig config;
    std::vector<PipelineTrace> trials;
    Aggregate aggregate;

    bool operator==(const ExperimentReport&) const = default;
};

/// Runs one command. Deterministic given the config, apart from wall_time.
ExperimentReport run(const ExperimentConfig& config);

std::string emit(const ExperimentReport& report, OutputFormat format);
/// Inverse of emit(report, OutputFormat::Json); throws ParseError.
ExperimentReport parse_report(std::string_view json);
/// Writes to config.output, or standard output when it is empty; throws IoFailure.
void write_report(const ExperimentReport& report);

/// 0 pass, 1 verification failure.
int exit_code(const ExperimentReport& report);

/// Upper 99.9% point of the chi-square distribution (Wilson-Hilferty approximation).
double chi_square_critical(std::size_t dof);

}  // namespace heis
