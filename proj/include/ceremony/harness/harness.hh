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

#ifndef CEREMONY_HARNESS_HARNESS_HH_
#define CEREMONY_HARNESS_HARNESS_HH_

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "ceremony/ltl/checker.hh"
#include "ceremony/models/scenario.hh"
#include "ceremony/statespace/state_space.hh"

namespace ceremony::harness {

/// The no-expiry cells need up to ~16M states; leave headroom.
inline constexpr std::size_t kHarnessStateLimit = 30'000'000;

/// Soft wall-clock budget per cell; exceeding it only warns.
inline constexpr double kCellBudgetMs = 600'000;

enum class NoExpiry { kAuto, kAlways, kNever };
NoExpiry ParseNoExpiry(const std::string& text);

struct RunOptions {
  NoExpiry no_expiry = NoExpiry::kAuto;
  bool deadlock = false;
  std::size_t state_limit = kHarnessStateLimit;
  bool safari_nr_validity = false;
};

/// One step of a rendered counterexample.
struct TraceStep {
  std::string event;               // "tau" for internal steps
  std::vector<std::string> roles;  // components that moved
  std::vector<std::string> changes;  // "x := v", "S += e", "S -= e"
  int session = 0;                 // 0 before the first page request
  bool in_lasso = false;
};

struct Counterexample {
  std::vector<TraceStep> steps;
  int sessions = 0;
  bool lasso = false;

  /// Events in order, lasso part included once.
  std::vector<std::string> events() const;
};

struct DeadlockResult {
  bool deadlock_free = true;
  /// Decided on the abstraction that forgets stored certificates; sound for
  /// deadlock freedom because no enabling condition reads them.
  bool abstracted = false;
  std::size_t states = 0;
  std::optional<Counterexample> witness;
};

enum class Match { kMatch, kMismatch, kNotApplicable, kOffFixture };
std::string MatchName(Match m);

struct RunReport {
  models::ScenarioId scenario;
  int property = 0;
  bool assume_no_expiry = false;
  models::Expected expected = models::Expected::kNotApplicable;
  /// Empty when the property does not apply to the scenario.
  std::optional<bool> holds;
  Match match = Match::kNotApplicable;
  ltl::CheckStats stats;
  std::optional<Counterexample> counterexample;
  std::optional<DeadlockResult> deadlock;

  std::string verdict() const;
};

/// Whether the no-expiry assumption applies to a cell under `policy`.
bool UsesNoExpiry(models::ScenarioId id, int property, NoExpiry policy);

/**
 * Builds the scenario, checks the property on the fly and compares the
 * verdict with the published table. Throws ceremony::Error on model or
 * configuration errors and on exceeding the state limit.
 */
RunReport Run(models::ScenarioId id, int property, const RunOptions& options = {});

/// Deadlock check for a scenario under its default (expiring) model.
DeadlockResult RunDeadlock(models::ScenarioId id, std::size_t state_limit);

struct MatrixOptions {
  NoExpiry no_expiry = NoExpiry::kAuto;
  std::size_t state_limit = kHarnessStateLimit;
  /// 0: CEREMONY_CHECKER_JOBS, else hardware concurrency.
  unsigned jobs = 0;
  bool deadlock = true;
};

struct MatrixReport {
  std::vector<RunReport> cells;          // table order, then property number
  std::vector<DeadlockResult> deadlocks;  // one per scenario, table order
  int matches = 0;
  int mismatches = 0;
  double wall_ms = 0;
  /// Cells whose wall time exceeded kCellBudgetMs.
  std::vector<std::string> over_budget;
};

/// Every applicable cell of the twelve scenarios. Per-cell errors propagate
/// after all workers have stopped.
MatrixReport RunMatrix(const MatrixOptions& options = {});

/// Worker count from an explicit value, CEREMONY_CHECKER_JOBS, or the
/// hardware, in that order.
unsigned ResolveJobs(unsigned requested);

/**
 * Renders a counterexample: sessions are cut at every page request from
 * the browser to the user, each step names the components that moved, and
 * global changes are listed per step.
 */
Counterexample Render(const models::Scenario& scenario,
                      const statespace::StateSpace& space,
                      const std::vector<ltl::Position>& prefix,
                      const std::vector<ltl::Position>& lasso);

std::string NarrativeText(const Counterexample& cex);
std::string RawText(const Counterexample& cex);

nlohmann::json ToJson(const RunReport& report);
nlohmann::json ToJson(const MatrixReport& report);

enum class TraceStyle { kNarrative, kRaw, kNone };
std::string TextReport(const RunReport& report, TraceStyle trace);
std::string MarkdownReport(const RunReport& report, TraceStyle trace);
std::string TextReport(const MatrixReport& report);
std::string MarkdownReport(const MatrixReport& report);

/// Published verdicts as `{"<scenario>": {"<property>": "holds"|...}}`.
nlohmann::json FixtureJson();
/// The same shape filled with observed verdicts, for `--update-fixture`.
nlohmann::json FixtureJson(const MatrixReport& report);

}  // namespace ceremony::harness

#endif /* CEREMONY_HARNESS_HARNESS_HH_ */
