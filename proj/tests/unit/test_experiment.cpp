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


#include "heis/experiment.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "heis/errors.hpp"
#include "json.hpp"

namespace heis {
namespace {

ExperimentConfig config_for(Command command, int prime, std::string subgroup = "random") {
    ExperimentConfig c;
    c.command = command;
    c.prime = prime;
    c.subgroup = std::move(subgroup);
    return c;
}

std::string without_wall_time(std::string text) {
    const auto key = text.find("\"wall_time\"");
    if (key == std::string::npos) return text;
    const auto end = text.find_first_of(",\n}", key);
    return text.erase(key, end - key);
}

std::vector<std::string> lines(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);) out.push_back(line);
    return out;
}

TEST(Enums, ParseAndPrintRoundTrip) {
    for (auto c : {Command::RepVerify, Command::StateVerify, Command::CgVerify, Command::SampleIrreps, Command::SolveHscp,
                   Command::SolveHsp, Command::PgmCompare, Command::ExactDist}) {
        EXPECT_EQ(parse_command(to_string(c)), c);
    }
    EXPECT_EQ(to_string(Command::SolveHsp), "solve-hsp");
    EXPECT_EQ(parse_run_mode("exact"), RunMode::Exact);
    EXPECT_EQ(parse_run_mode("montecarlo"), RunMode::MonteCarlo);
    EXPECT_EQ(parse_output_format("csv"), OutputFormat::Csv);
    EXPECT_EQ(parse_output_format("json"), OutputFormat::Json);
    EXPECT_THROW(parse_command("solve"), ConfigInvalid);
    EXPECT_THROW(parse_run_mode("fast"), ConfigInvalid);
    EXPECT_THROW(parse_output_format("xml"), ConfigInvalid);
}

TEST(Validate, PrimeLimits) {
    EXPECT_NO_THROW(validate(config_for(Command::SolveHsp, 31)));
    EXPECT_THROW(validate(config_for(Command::SolveHsp, 37)), ConfigInvalid);
    EXPECT_THROW(validate(config_for(Command::SolveHsp, 2)), ConfigInvalid);
    EXPECT_THROW(validate(config_for(Command::SolveHsp, 9)), ConfigInvalid);
    EXPECT_THROW(validate(config_for(Command::RepVerify, 11)), ConfigInvalid);
    auto exact = config_for(Command::SolveHsp, 11);
    exact.mode = RunMode::Exact;
    EXPECT_THROW(validate(exact), ConfigInvalid);
    exact.prime = 7;
    EXPECT_NO_THROW(validate(exact));
}

TEST(Validate, OtherFields) {
    auto c = config_for(Command::SolveHsp, 5, "A:7,1");
    EXPECT_THROW(validate(c), ConfigInvalid);
    c.subgroup = "A:2,3";
    EXPECT_NO_THROW(validate(c));
    c.trials = 0;
    EXPECT_THROW(validate(c), ConfigInvalid);
    c.trials = 10;
    c.tolerance = 0.0;
    EXPECT_THROW(validate(c), ConfigInvalid);
}

TEST(Run, VerificationSuitesPassAtThree) {
    for (auto cmd : {Command::RepVerify, Command::StateVerify, Command::CgVerify, Command::PgmCompare, Command::ExactDist}) {
        const auto report = run(config_for(cmd, 3, "A:1,2"));
        EXPECT_TRUE(report.aggregate.passed) << to_string(cmd);
        EXPECT_FALSE(report.aggregate.checks.empty());
        EXPECT_EQ(exit_code(report), 0);
    }
}

TEST(Run, SampleIrrepsExactTable) {
    auto c = config_for(Command::SampleIrreps, 5, "A:2,3");
    c.mode = RunMode::Exact;
    const auto report = run(c);
    EXPECT_TRUE(report.aggregate.passed);
    EXPECT_FALSE(report.aggregate.table.empty());
    for (const auto& row : report.aggregate.table) {
        ASSERT_TRUE(row.reference.has_value());
        EXPECT_NEAR(row.value, *row.reference, 1e-10) << row.label;
    }
}

TEST(Run, SolveHspMonteCarloAggregate) {
    auto c = config_for(Command::SolveHsp, 5, "A:2,3");
    c.trials = 300;
    c.seed = 7;
    const auto report = run(c);
    const auto& a = report.aggregate;
    EXPECT_EQ(report.trials.size(), 300u);
    EXPECT_EQ(a.trials, 300u);
    const auto successes = static_cast<std::size_t>(std::count_if(report.trials.begin(), report.trials.end(),
                                                                  [](const PipelineTrace& t) { return t.verified; }));
    EXPECT_EQ(a.successes, successes);
    EXPECT_EQ(a.success_rate, static_cast<double>(a.successes) / static_cast<double>(a.trials));
    ASSERT_TRUE(a.exact_rate.has_value());
    EXPECT_NEAR(*a.exact_rate, 0.140706, 1e-6);
    EXPECT_TRUE(a.solved_rate.has_value());
}

TEST(Run, SameSeedSameReport) {
    auto c = config_for(Command::SolveHsp, 7);
    c.trials = 200;
    c.seed = 99;
    const auto a = emit(run(c), OutputFormat::Json);
    const auto b = emit(run(c), OutputFormat::Json);
    EXPECT_EQ(without_wall_time(a), without_wall_time(b));
    c.seed = 100;
    EXPECT_NE(without_wall_time(a), without_wall_time(emit(run(c), OutputFormat::Json)));
}

TEST(Emit, JsonSchema) {
    auto c = config_for(Command::SolveHsp, 3, "A:1,0");
    c.trials = 5;
    const auto report = run(c);
    const auto j = nlohmann::json::parse(emit(report, OutputFormat::Json));
    ASSERT_TRUE(j.contains("config"));
    ASSERT_TRUE(j.contains("trials"));
    ASSERT_TRUE(j.contains("aggregate"));
    EXPECT_EQ(j["config"]["prime"], 3);
    ASSERT_EQ(j["trials"].size(), 5u);
    for (const auto& t : j["trials"]) {
        for (const char* key : {"k1", "k2", "m", "x"}) EXPECT_TRUE(t.at(key).is_number_integer()) << key;
        EXPECT_TRUE(t.at("u2_success").is_boolean());
        EXPECT_TRUE(t.at("verified").is_boolean());
        EXPECT_TRUE(t.at("i").is_null() || t.at("i").is_number_integer());
        EXPECT_TRUE(t.at("j").is_null() || t.at("j").is_number_integer());
    }
    EXPECT_TRUE(j["aggregate"].contains("success_rate"));
    EXPECT_TRUE(j["aggregate"].contains("branch_rates"));
    EXPECT_TRUE(j["aggregate"].contains("wall_time"));
}

TEST(Emit, EmptyTrialList) {
    const ExperimentReport report{config_for(Command::RepVerify, 3), {}, {}};
    const auto j = nlohmann::json::parse(emit(report, OutputFormat::Json));
    EXPECT_TRUE(j["trials"].is_array());
    EXPECT_TRUE(j["trials"].empty());
}

TEST(Emit, CsvHeaderAndRows) {
    auto c = config_for(Command::SolveHsp, 3, "A:1,0");
    c.trials = 3;
    const auto text = emit(run(c), OutputFormat::Csv);
    EXPECT_EQ(text.find('\r'), std::string::npos);
    ASSERT_FALSE(text.empty());
    EXPECT_EQ(text.back(), '\n');
    const auto rows = lines(text);
    ASSERT_EQ(rows.size(), 4u);
    EXPECT_EQ(rows[0], "trial,k1,k2,m,u2_success,x,i,j,verified");
    for (std::size_t r = 1; r < rows.size(); ++r) EXPECT_EQ(std::count(rows[r].begin(), rows[r].end(), ','), 8);
}

TEST(Emit, CsvTableForExactCommands) {
    ExperimentReport report{config_for(Command::ExactDist, 3, "A:1,0"), {}, {}};
    report.aggregate.table = {TableRow{"k1=1,k2=1,x=0", 0.25, std::nullopt}, TableRow{"chi(0,1)", 0.5, 0.5}};
    const auto rows = lines(emit(report, OutputFormat::Csv));
    ASSERT_EQ(rows.size(), 3u);
    EXPECT_EQ(rows[0], "label,value,reference");
    EXPECT_EQ(rows[1], "\"k1=1,k2=1,x=0\",0.25,");
    EXPECT_EQ(rows[2], "\"chi(0,1)\",0.5,0.5");

    auto c = config_for(Command::SampleIrreps, 3, "A:1,0");
    c.mode = RunMode::Exact;
    const auto table = lines(emit(run(c), OutputFormat::Csv));
    EXPECT_EQ(table.size(), 1u + 9u + 2u);
}

TEST(Emit, JsonRoundTrip) {
    auto c = config_for(Command::SolveHsp, 5, "A:2,3");
    c.trials = 40;
    const auto report = run(c);
    EXPECT_EQ(parse_report(emit(report, OutputFormat::Json)), report);
    const auto exact = run(config_for(Command::ExactDist, 5, "A:2,3"));
    EXPECT_EQ(parse_report(emit(exact, OutputFormat::Json)), exact);
    EXPECT_THROW(parse_report("{not json"), ParseError);
    EXPECT_THROW(parse_report("{\"config\":{}}"), ParseError);
}

TEST(WriteReport, FileOutputAndIoFailure) {
    auto c = config_for(Command::ExactDist, 3, "A:1,1");
    const auto path = std::filesystem::temp_directory_path() / "heis_hsp_write_report_test.json";
    c.output = path.string();
    const auto report = run(c);
    write_report(report);
    std::ifstream in(path, std::ios::binary);
    const std::string written((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    EXPECT_EQ(written, emit(report, OutputFormat::Json));
    std::filesystem::remove(path);

    auto bad = report;
    bad.config.output = "/nonexistent-dir/for/sure/report.json";
    EXPECT_THROW(write_report(bad), IoFailure);
}

TEST(ExitCode, FailureMapsToOne) {
    ExperimentReport report{config_for(Command::RepVerify, 3), {}, {}};
    report.aggregate.passed = false;
    EXPECT_EQ(exit_code(report), 1);
    report.aggregate.passed = true;
    EXPECT_EQ(exit_code(report), 0);
}

TEST(ChiSquare, CriticalValuesNearTables) {
    EXPECT_NEAR(chi_square_critical(1), 10.828, 0.6);
    EXPECT_NEAR(chi_square_critical(3), 16.266, 0.3);
    EXPECT_NEAR(chi_square_critical(10), 29.588, 0.2);
    EXPECT_NEAR(chi_square_critical(100), 149.449, 0.2);
    EXPECT_EQ(chi_square_critical(0), 0.0);
}

}  // namespace
}  // namespace heis
