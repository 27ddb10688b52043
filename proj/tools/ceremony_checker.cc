/*
 * Copyright (c) 2026, The Ceremony Checker Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// Command-line front end: check one cell, regenerate the matrix, or list ids.

#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "ceremony/harness/harness.hh"
#include "ceremony/kernel/error.hh"

namespace {

using namespace ceremony;

constexpr int kExitOk = 0;
constexpr int kExitMismatch = 1;
constexpr int kExitModelError = 2;
constexpr int kExitStateLimit = 3;

harness::TraceStyle ParseTrace(const std::string& s) {
  if (s == "raw") return harness::TraceStyle::kRaw;
  if (s == "none") return harness::TraceStyle::kNone;
  return harness::TraceStyle::kNarrative;
}

int Check(const std::string& scenario, const std::string& property,
          const std::string& no_expiry, bool deadlock, std::size_t limit,
          bool nr_validity, const std::string& trace, const std::string& format) {
  harness::RunOptions options;
  options.no_expiry = harness::ParseNoExpiry(no_expiry);
  options.deadlock = deadlock;
  options.state_limit = limit;
  options.safari_nr_validity = nr_validity;
  auto report = harness::Run(models::ScenarioId::Parse(scenario),
                             models::ParseProperty(property), options);
  auto style = ParseTrace(trace);
  if (format == "json") {
    std::cout << harness::ToJson(report).dump(2) << "\n";
  } else if (format == "markdown") {
    std::cout << harness::MarkdownReport(report, style);
  } else {
    std::cout << harness::TextReport(report, style);
  }
  if (report.match == harness::Match::kMismatch) return kExitMismatch;
  if (report.deadlock && !report.deadlock->deadlock_free) return kExitMismatch;
  return kExitOk;
}

int Matrix(const std::string& format, unsigned jobs, std::size_t limit,
           const std::string& no_expiry, const std::string& update_fixture) {
  harness::MatrixOptions options;
  options.jobs = jobs;
  options.state_limit = limit;
  options.no_expiry = harness::ParseNoExpiry(no_expiry);
  auto report = harness::RunMatrix(options);
  if (format == "json") {
    std::cout << harness::ToJson(report).dump(2) << "\n";
  } else if (format == "markdown") {
    std::cout << harness::MarkdownReport(report);
  } else {
    std::cout << harness::TextReport(report);
  }
  for (const auto& cell : report.over_budget) {
    std::cerr << "warning: " << cell << " exceeded the per-cell time budget\n";
  }
  if (!update_fixture.empty()) {
    std::ofstream out(update_fixture);
    out << harness::FixtureJson(report).dump(2) << "\n";
    if (!out) {
      throw Error(ErrorCode::kInvalidArgument,
                  "cannot write fixture to " + update_fixture);
    }
  }
  bool deadlocks_ok = true;
  for (const auto& d : report.deadlocks) deadlocks_ok &= d.deadlock_free;
  return report.mismatches == 0 && deadlocks_ok ? kExitOk : kExitMismatch;
}

int List() {
  std::cout << "scenarios:\n";
  for (const auto& id : models::ScenarioId::All()) {
    std::cout << "  " << id.str() << "\n";
  }
  std::cout << "properties:\n";
  for (int p = 1; p <= models::kPropertyCount; ++p) {
    std::cout << "  " << models::PropertyName(p) << " (P" << p << ")  "
              << ltl::Property(p)->ToString() << "\n";
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Explicit-state model checker for browser certificate ceremonies"};
  app.require_subcommand(1);

  std::string scenario, property, no_expiry = "auto", trace = "narrative",
                                  format = "text", update_fixture;
  bool deadlock = false, nr_validity = false;
  std::size_t limit = harness::kHarnessStateLimit;
  unsigned jobs = 0;

  auto* check = app.add_subcommand("check", "check one scenario/property cell");
  check->add_option("--scenario", scenario, "scenario id (see `list`)")->required();
  check->add_option("--property", property, "property id or number")->required();
  check->add_option("--assume-no-expiry", no_expiry)
      ->check(CLI::IsMember({"auto", "always", "never"}));
  check->add_flag("--deadlock", deadlock, "also check deadlock freedom");
  check->add_option("--trace", trace)
      ->check(CLI::IsMember({"narrative", "raw", "none"}));
  check->add_option("--format", format)
      ->check(CLI::IsMember({"text", "json", "markdown"}));
  check->add_option("--state-limit", limit);
  check->add_flag("--nr-validity", nr_validity,
                  "judge Safari rows with the revocation-aware validity macro");

  auto* matrix = app.add_subcommand("matrix", "all scenarios and properties");
  matrix->add_option("--format", format)
      ->check(CLI::IsMember({"text", "json", "markdown"}));
  matrix->add_option("--jobs", jobs, "worker threads (default: "
                                     "CEREMONY_CHECKER_JOBS or core count)");
  matrix->add_option("--state-limit", limit);
  matrix->add_option("--assume-no-expiry", no_expiry)
      ->check(CLI::IsMember({"auto", "always", "never"}));
  matrix->add_option("--update-fixture", update_fixture,
                     "write the observed verdicts as a fixture file");

  app.add_subcommand("list", "list scenario and property ids");

  CLI11_PARSE(app, argc, argv);
  try {
    if (*check) {
      return Check(scenario, property, no_expiry, deadlock, limit, nr_validity,
                   trace, format);
    }
    if (*matrix) return Matrix(format, jobs, limit, no_expiry, update_fixture);
    return List();
  } catch (const Error& e) {
    std::cerr << "error: " << ToString(e.code()) << ": " << e.what() << "\n";
    return e.code() == ErrorCode::kStateLimitExceeded ? kExitStateLimit
                                                      : kExitModelError;
  }
}
