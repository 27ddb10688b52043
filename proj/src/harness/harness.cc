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

#include "ceremony/harness/harness.hh"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <iomanip>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include "ceremony/kernel/error.hh"
#include "ceremony/kernel/format.hh"

namespace ceremony::harness {

namespace {

using models::Expected;
using models::Scenario;
using models::ScenarioId;
using statespace::StateSpace;

// Exact deadlock search is tried up to this many states before falling back
// to the certificate-store abstraction.
constexpr std::size_t kExactDeadlockLimit = 2'000'000;

double MillisSince(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double, std::milli>(
             std::chrono::steady_clock::now() - start)
      .count();
}

ltl::FormulaPtr FormulaFor(const Scenario& scenario, int property) {
  if (scenario.options.safari_nr_validity &&
      scenario.id.browser() == models::Browser::kSafari) {
    return ltl::PropertyWithValidity(property, "CertificateIsValidNR");
  }
  return ltl::Property(property);
}

void Movers(const Scenario& scenario, const kernel::TermPtr& before,
            const kernel::TermPtr& after, std::vector<std::string>& out) {
  using Kind = kernel::Term::Kind;
  if (kernel::TermsEqual(before, after)) return;
  if (before->kind() == Kind::kPar && after->kind() == Kind::kPar &&
      before->kids().size() == after->kids().size()) {
    for (std::size_t i = 0; i < before->kids().size(); ++i) {
      Movers(scenario, before->kids()[i], after->kids()[i], out);
    }
    return;
  }
  if (before->kind() == Kind::kSeq && after->kind() == Kind::kSeq &&
      kernel::TermsEqual(before->kids()[1], after->kids()[1])) {
    Movers(scenario, before->kids()[0], after->kids()[0], out);
    return;
  }
  // A choice that owns no role (e.g. the intruder picking a server) is
  // attributed to whichever side it resolved into.
  models::Role role = scenario.RoleOf(before->active_owner());
  if (role == models::Role::kSystem) {
    role = scenario.RoleOf(after->active_owner());
  }
  std::string name(models::RoleName(role));
  if (std::find(out.begin(), out.end(), name) == out.end()) out.push_back(name);
}

std::vector<std::string> Changes(const kernel::ModelDef& model,
                                 const kernel::GlobalState& before,
                                 const kernel::GlobalState& after) {
  std::vector<std::string> out;
  if (before == after) return out;
  for (std::uint32_t i = 0; i < model.vars().size(); ++i) {
    kernel::VarId v{i};
    kernel::Value a = model.ReadVar(before, v), b = model.ReadVar(after, v);
    if (!(a == b)) out.push_back(model.vars()[i].name + " := " + b.ToString());
  }
  for (std::uint32_t i = 0; i < model.sets().size(); ++i) {
    kernel::SetId s{i};
    auto a = model.SetContents(before, s), b = model.SetContents(after, s);
    const std::string& name = model.sets()[i].name;
    for (const auto& e : b) {
      if (std::find(a.begin(), a.end(), e) == a.end()) {
        out.push_back(name + " += " + e.ToString());
      }
    }
    for (const auto& e : a) {
      if (std::find(b.begin(), b.end(), e) == b.end()) {
        out.push_back(name + " -= " + e.ToString());
      }
    }
  }
  return out;
}

void CheckReplay(const StateSpace& space,
                 const std::vector<ltl::Position>& prefix,
                 const std::vector<ltl::Position>& lasso) {
  std::vector<statespace::PathStep> steps;
  auto add = [&](const ltl::Position& p) {
    if (p.label) steps.push_back({space.label(*p.label), space.config(p.state)});
  };
  for (std::size_t i = 1; i < prefix.size(); ++i) add(prefix[i]);
  for (const auto& p : lasso) add(p);
  statespace::Replay(space.model(), steps, space.options());
}

std::string Symbol(const RunReport& r) {
  if (!r.holds) return "-";
  return *r.holds ? "holds" : "violated";
}

}  // namespace

NoExpiry ParseNoExpiry(const std::string& text) {
  if (text == "auto") return NoExpiry::kAuto;
  if (text == "always") return NoExpiry::kAlways;
  if (text == "never") return NoExpiry::kNever;
  throw Error(ErrorCode::kInvalidArgument,
              "expected auto, always or never, got '" + text + "'");
}

std::string MatchName(Match m) {
  switch (m) {
    case Match::kMatch: return "match";
    case Match::kMismatch: return "mismatch";
    case Match::kNotApplicable: return "not-applicable";
    case Match::kOffFixture: return "off-fixture";
  }
  return "";
}

std::vector<std::string> Counterexample::events() const {
  std::vector<std::string> out;
  for (const auto& s : steps) out.push_back(s.event);
  return out;
}

std::string RunReport::verdict() const {
  if (!holds) return "not-applicable";
  return *holds ? "holds" : "violated";
}

bool UsesNoExpiry(ScenarioId id, int property, NoExpiry policy) {
  switch (policy) {
    case NoExpiry::kAlways: return true;
    case NoExpiry::kNever: return false;
    case NoExpiry::kAuto: break;
  }
  return models::NoExpiryScenarios().count({id, property}) > 0;
}

Counterexample Render(const Scenario& scenario, const StateSpace& space,
                      const std::vector<ltl::Position>& prefix,
                      const std::vector<ltl::Position>& lasso) {
  Counterexample cex;
  cex.lasso = !lasso.empty();
  std::vector<std::pair<ltl::Position, bool>> all;
  for (const auto& p : prefix) all.emplace_back(p, false);
  for (const auto& p : lasso) all.emplace_back(p, true);
  int session = 0;
  for (std::size_t i = 1; i < all.size(); ++i) {
    const auto& [pos, in_lasso] = all[i];
    kernel::Config before = space.config(all[i - 1].first.state);
    kernel::Config after = space.config(pos.state);
    TraceStep step;
    step.in_lasso = in_lasso;
    if (pos.label) {
      step.event = space.FormatLabel(*pos.label);
      Movers(scenario, before.process, after.process, step.roles);
    } else {
      step.event = "(stutter)";
    }
    if (step.event == "ui.Webpage") ++session;
    step.session = session;
    step.changes = Changes(space.model(), before.globals, after.globals);
    cex.steps.push_back(std::move(step));
  }
  cex.sessions = session;
  return cex;
}

std::string NarrativeText(const Counterexample& cex) {
  std::ostringstream out;
  out << "Counterexample: " << cex.sessions
      << (cex.sessions == 1 ? " session" : " sessions")
      << (cex.lasso ? ", ends in a cycle" : "") << "\n";
  int session = -1;
  bool lasso_marked = false;
  for (const auto& s : cex.steps) {
    if (s.in_lasso && !lasso_marked) {
      out << "  -- the rest repeats forever --\n";
      lasso_marked = true;
    }
    if (s.session != session) {
      session = s.session;
      out << (session == 0 ? std::string("Setup")
                           : "Session " + std::to_string(session))
          << "\n";
    }
    // Internal steps that change nothing carry no story.
    if (s.event == "tau" && s.changes.empty()) continue;
    std::string who = s.roles.empty() ? "System" : s.roles[0];
    for (std::size_t i = 1; i < s.roles.size(); ++i) who += ", " + s.roles[i];
    out << "  [" << who << "] " << s.event;
    if (!s.changes.empty()) {
      out << "   {";
      for (std::size_t i = 0; i < s.changes.size(); ++i) {
        out << (i ? "; " : "") << s.changes[i];
      }
      out << "}";
    }
    out << "\n";
  }
  return out.str();
}

std::string RawText(const Counterexample& cex) {
  std::ostringstream out;
  for (std::size_t i = 0; i < cex.steps.size(); ++i) {
    out << std::setw(4) << i + 1 << (cex.steps[i].in_lasso ? " * " : "   ")
        << cex.steps[i].event << "\n";
  }
  return out.str();
}

DeadlockResult RunDeadlock(ScenarioId id, std::size_t state_limit) {
  Scenario scenario = models::BuildScenario(id);
  DeadlockResult result;
  auto finish = [&](StateSpace& space, const statespace::DeadlockReport& r) {
    result.deadlock_free = r.deadlock_free;
    result.states = space.size();
    if (!r.deadlock_free) {
      std::vector<ltl::Position> trace;
      for (std::size_t i = 0; i < r.witness.states.size(); ++i) {
        ltl::Position p{std::nullopt, r.witness.states[i]};
        if (i > 0) p.label = r.witness.labels[i - 1];
        trace.push_back(p);
      }
      result.witness = Render(scenario, space, trace, {});
    }
  };
  try {
    StateSpace space(scenario.model, std::min(state_limit, kExactDeadlockLimit));
    finish(space, statespace::CheckDeadlock(space));
    return result;
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kStateLimitExceeded ||
        state_limit <= kExactDeadlockLimit) {
      throw;
    }
  }
  // Certificate-store contents only feed conditionals, which step as tau
  // either way, so forgetting them cannot disable any step: a deadlock-free
  // abstraction implies a deadlock-free model.
  kernel::SuccessorOptions options;
  options.erased_sets.push_back(*scenario.model->FindSet("ServerCert"));
  StateSpace space(scenario.model, state_limit, options);
  result.abstracted = true;
  finish(space, statespace::CheckDeadlock(space));
  return result;
}

RunReport Run(ScenarioId id, int property, const RunOptions& options) {
  if (property < 1 || property > models::kPropertyCount) {
    throw Error(ErrorCode::kUnknownPropertyId,
                "unknown property " + std::to_string(property));
  }
  RunReport report{id};
  report.property = property;
  report.expected = models::ExpectedVerdict(id, property);
  report.assume_no_expiry = UsesNoExpiry(id, property, options.no_expiry);
  bool on_fixture =
      report.assume_no_expiry == UsesNoExpiry(id, property, NoExpiry::kAuto) &&
      !options.safari_nr_validity;

  models::ScenarioOptions scenario_options;
  scenario_options.assume_no_expiry = report.assume_no_expiry;
  scenario_options.safari_nr_validity = options.safari_nr_validity;
  Scenario scenario = models::BuildScenario(id, scenario_options);

  if (options.deadlock) report.deadlock = RunDeadlock(id, options.state_limit);
  if (!scenario.Applies(property)) return report;

  StateSpace space(scenario.model, options.state_limit);
  ltl::Verdict verdict = ltl::Check(space, FormulaFor(scenario, property));
  report.holds = verdict.holds;
  report.stats = verdict.stats;
  if (!verdict.holds) {
    CheckReplay(space, verdict.prefix, verdict.lasso);
    report.counterexample =
        Render(scenario, space, verdict.prefix, verdict.lasso);
  }
  if (!on_fixture) {
    report.match = Match::kOffFixture;
  } else {
    bool expected_holds = report.expected == Expected::kHolds;
    report.match = expected_holds == verdict.holds &&
                           report.expected != Expected::kNotApplicable
                       ? Match::kMatch
                       : Match::kMismatch;
  }
  return report;
}

unsigned ResolveJobs(unsigned requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("CEREMONY_CHECKER_JOBS")) {
    char* end = nullptr;
    long n = std::strtol(env, &end, 10);
    if (end == env || *end != '\0' || n <= 0) {
      throw Error(ErrorCode::kInvalidArgument,
                  "CEREMONY_CHECKER_JOBS must be a positive integer");
    }
    return static_cast<unsigned>(n);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

MatrixReport RunMatrix(const MatrixOptions& options) {
  auto start = std::chrono::steady_clock::now();
  MatrixReport report;
  const auto& ids = ScenarioId::All();

  struct Task {
    std::size_t scenario;
    int property;  // 0: deadlock check
    bool heavy;
  };
  std::vector<Task> tasks;
  for (std::size_t s = 0; s < ids.size(); ++s) {
    for (int p = 1; p <= models::kPropertyCount; ++p) {
      if (models::ExpectedVerdict(ids[s], p) == Expected::kNotApplicable) continue;
      tasks.push_back({s, p, UsesNoExpiry(ids[s], p, options.no_expiry)});
    }
    if (options.deadlock) tasks.push_back({s, 0, false});
  }
  // Large explorations first, so they overlap with the many small cells.
  std::stable_partition(tasks.begin(), tasks.end(),
                        [](const Task& t) { return t.heavy; });

  std::map<std::pair<std::size_t, int>, RunReport> cells;
  std::map<std::size_t, DeadlockResult> deadlocks;
  std::mutex results_mu;
  // The no-expiry explorations each take over a gigabyte; run one at a time.
  std::mutex heavy_mu;
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;

  RunOptions run_options;
  run_options.no_expiry = options.no_expiry;
  run_options.state_limit = options.state_limit;

  auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < tasks.size();) {
      const Task& t = tasks[i];
      try {
        if (t.property == 0) {
          DeadlockResult d = RunDeadlock(ids[t.scenario], options.state_limit);
          std::lock_guard lock(results_mu);
          deadlocks.emplace(t.scenario, std::move(d));
          continue;
        }
        std::unique_lock heavy(heavy_mu, std::defer_lock);
        if (t.heavy) heavy.lock();
        RunReport r = Run(ids[t.scenario], t.property, run_options);
        std::lock_guard lock(results_mu);
        cells.emplace(std::pair(t.scenario, t.property), std::move(r));
      } catch (...) {
        std::lock_guard lock(results_mu);
        if (!failure) failure = std::current_exception();
        next = tasks.size();
      }
    }
  };
  unsigned jobs = std::min<std::size_t>(ResolveJobs(options.jobs), tasks.size());
  std::vector<std::thread> pool;
  for (unsigned j = 0; j < jobs; ++j) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);

  for (auto& [key, r] : cells) {
    if (r.match == Match::kMatch) ++report.matches;
    if (r.match == Match::kMismatch) ++report.mismatches;
    if (r.stats.wall_ms > kCellBudgetMs) {
      report.over_budget.push_back(r.scenario.str() + " " +
                                   std::string(models::PropertyName(r.property)));
    }
    report.cells.push_back(std::move(r));
  }
  for (auto& [s, d] : deadlocks) report.deadlocks.push_back(std::move(d));
  report.wall_ms = MillisSince(start);
  return report;
}

nlohmann::json ToJson(const RunReport& r) {
  nlohmann::json j;
  j["scenario"] = r.scenario.str();
  j["property"] = std::string(models::PropertyName(r.property));
  j["options"] = {{"assume_no_expiry", r.assume_no_expiry}};
  j["verdict"] = r.verdict();
  j["expected"] = std::string(models::ExpectedName(r.expected));
  j["match"] = MatchName(r.match);
  j["states"] = r.stats.states;
  j["product_states"] = r.stats.product_states;
  j["wall_ms"] = std::round(r.stats.wall_ms * 1000) / 1000;
  if (r.counterexample) {
    j["counterexample"] = {{"events", r.counterexample->events()},
                           {"sessions", r.counterexample->sessions}};
  } else {
    j["counterexample"] = nullptr;
  }
  if (r.deadlock) {
    j["deadlock"] = {{"deadlock_free", r.deadlock->deadlock_free},
                     {"abstracted", r.deadlock->abstracted},
                     {"states", r.deadlock->states}};
  }
  return j;
}

nlohmann::json ToJson(const MatrixReport& m) {
  nlohmann::json j;
  j["cells"] = nlohmann::json::array();
  for (const auto& r : m.cells) j["cells"].push_back(ToJson(r));
  j["deadlock"] = nlohmann::json::array();
  const auto& ids = ScenarioId::All();
  for (std::size_t i = 0; i < m.deadlocks.size(); ++i) {
    j["deadlock"].push_back({{"scenario", ids[i].str()},
                             {"deadlock_free", m.deadlocks[i].deadlock_free},
                             {"abstracted", m.deadlocks[i].abstracted},
                             {"states", m.deadlocks[i].states}});
  }
  j["summary"] = {{"cells", m.cells.size()},
                  {"matches", m.matches},
                  {"mismatches", m.mismatches},
                  {"over_budget", m.over_budget},
                  {"wall_ms", std::round(m.wall_ms)}};
  return j;
}

nlohmann::json FixtureJson() {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& id : ScenarioId::All()) {
    for (int p = 1; p <= models::kPropertyCount; ++p) {
      j[id.str()][std::string(models::PropertyName(p))] =
          std::string(models::ExpectedName(models::ExpectedVerdict(id, p)));
    }
  }
  return j;
}

nlohmann::json FixtureJson(const MatrixReport& report) {
  nlohmann::json j = FixtureJson();
  for (const auto& r : report.cells) {
    j[r.scenario.str()][std::string(models::PropertyName(r.property))] =
        r.verdict();
  }
  return j;
}

namespace {

std::string Header(const RunReport& r) {
  std::ostringstream out;
  out << "scenario:   " << r.scenario.str() << "\n"
      << "property:   " << models::PropertyName(r.property) << " (P"
      << r.property << ")\n"
      << "no-expiry:  " << (r.assume_no_expiry ? "assumed" : "off") << "\n"
      << "verdict:    " << r.verdict() << "\n"
      << "expected:   " << models::ExpectedName(r.expected) << " ("
      << MatchName(r.match) << ")\n"
      << "states:     " << r.stats.states << " (product "
      << r.stats.product_states << ")\n"
      << "time:       " << std::fixed << std::setprecision(1) << r.stats.wall_ms
      << " ms\n";
  if (r.deadlock) {
    out << "deadlock:   "
        << (r.deadlock->deadlock_free ? "none" : "reachable")
        << (r.deadlock->abstracted ? " (certificate store abstracted)" : "")
        << "\n";
  }
  return out.str();
}

std::string Trace(const RunReport& r, TraceStyle style) {
  if (!r.counterexample || style == TraceStyle::kNone) return "";
  return style == TraceStyle::kRaw ? RawText(*r.counterexample)
                                   : NarrativeText(*r.counterexample);
}

}  // namespace

std::string TextReport(const RunReport& r, TraceStyle trace) {
  std::string out = Header(r);
  std::string t = Trace(r, trace);
  if (!t.empty()) out += "\n" + t;
  if (r.stats.wall_ms > kCellBudgetMs) {
    out += "warning: exceeded the per-cell time budget\n";
  }
  return out;
}

std::string MarkdownReport(const RunReport& r, TraceStyle trace) {
  std::ostringstream out;
  out << "## " << r.scenario.str() << " / " << models::PropertyName(r.property)
      << "\n\n| field | value |\n|---|---|\n"
      << "| verdict | " << r.verdict() << " |\n"
      << "| expected | " << models::ExpectedName(r.expected) << " |\n"
      << "| match | " << MatchName(r.match) << " |\n"
      << "| no-expiry | " << (r.assume_no_expiry ? "yes" : "no") << " |\n"
      << "| states | " << r.stats.states << " |\n"
      << "| product states | " << r.stats.product_states << " |\n"
      << "| wall ms | " << std::fixed << std::setprecision(1) << r.stats.wall_ms
      << " |\n";
  if (r.deadlock) {
    out << "| deadlock-free | " << (r.deadlock->deadlock_free ? "yes" : "no")
        << " |\n";
  }
  std::string t = Trace(r, trace);
  if (!t.empty()) out << "\n```\n" << t << "```\n";
  return out.str();
}

namespace {

std::string Cell(const MatrixReport& m, ScenarioId id, int p, bool markdown) {
  for (const auto& r : m.cells) {
    if (!(r.scenario == id) || r.property != p) continue;
    std::string s = *r.holds ? (markdown ? "✓" : "holds") : (markdown ? "×" : "violated");
    if (r.assume_no_expiry) s += "*";
    if (r.match == Match::kMismatch) s += " (MISMATCH)";
    return s;
  }
  return markdown ? "–" : "n/a";
}

}  // namespace

std::string TextReport(const MatrixReport& m) {
  std::ostringstream out;
  const auto& ids = ScenarioId::All();
  out << std::left << std::setw(22) << "scenario";
  for (int p = 1; p <= models::kPropertyCount; ++p) {
    out << std::setw(22) << models::PropertyName(p);
  }
  out << "deadlock\n";
  for (std::size_t i = 0; i < ids.size(); ++i) {
    out << std::setw(22) << ids[i].str();
    for (int p = 1; p <= models::kPropertyCount; ++p) {
      out << std::setw(22) << Cell(m, ids[i], p, false);
    }
    if (i < m.deadlocks.size()) {
      out << (m.deadlocks[i].deadlock_free ? "free" : "REACHABLE");
    }
    out << "\n";
  }
  out << "\n* no-expiry assumption\n"
      << m.cells.size() << " cells, " << m.matches << " match, "
      << m.mismatches << " mismatch, " << std::fixed << std::setprecision(1)
      << m.wall_ms / 1000 << " s\n";
  for (const auto& c : m.over_budget) {
    out << "warning: " << c << " exceeded the per-cell time budget\n";
  }
  return out.str();
}

std::string MarkdownReport(const MatrixReport& m) {
  std::ostringstream out;
  const auto& ids = ScenarioId::All();
  out << "| scenario |";
  for (int p = 1; p <= models::kPropertyCount; ++p) {
    out << " " << models::PropertyName(p) << " |";
  }
  out << " deadlock-free |\n|---|---|---|---|---|---|---|\n";
  for (std::size_t i = 0; i < ids.size(); ++i) {
    out << "| " << ids[i].str() << " |";
    for (int p = 1; p <= models::kPropertyCount; ++p) {
      out << " " << Cell(m, ids[i], p, true) << " |";
    }
    if (i < m.deadlocks.size()) {
      out << " " << (m.deadlocks[i].deadlock_free ? "yes" : "no");
    }
    out << " |\n";
  }
  out << "\n`*` no-expiry assumption. " << m.matches << "/" << m.cells.size()
      << " cells match.\n";
  return out.str();
}

}  // namespace ceremony::harness
