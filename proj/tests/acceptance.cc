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

// Acceptance gate: prints one PASS/FAIL line per criterion and exits
// non-zero when any criterion fails.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <deque>
#include <functional>
#include <memory>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include <json.hpp>

#include "ceremony/harness/harness.hh"
#include "ceremony/kernel/error.hh"
#include "ceremony/kernel/parser.hh"
#include "ceremony/ltl/checker.hh"
#include "ceremony/ltl/formula.hh"
#include "ceremony/models/scenario.hh"
#include "ceremony/statespace/state_space.hh"
#include "fixtures.hh"
#include "oracle/ltl_oracle.hh"
#include "oracle/naive_enumerator.hh"

namespace ceremony {
namespace {

using harness::Counterexample;
using harness::MatrixReport;
using harness::RunReport;
using ltl::Formula;
using ltl::FormulaPtr;
using models::ScenarioId;
using statespace::LabelId;
using statespace::StateId;

struct Outcome {
  bool pass = true;
  std::string detail;
};

int failures = 0;

void Report(const std::string& name, const Outcome& o) {
  std::printf("[%s] %s: %s\n", o.pass ? "PASS" : "FAIL", name.c_str(),
              o.detail.c_str());
  std::fflush(stdout);
  failures += !o.pass;
}

double Seconds(std::chrono::steady_clock::time_point since) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - since)
      .count();
}

std::string Fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.1f", v);
  return buf;
}

// --- 1, 2: matrix and deadlock ---------------------------------------------

Outcome MatrixCriterion(const MatrixReport& m) {
  Outcome o;
  int applicable = 0, no_expiry = 0;
  std::vector<std::string> bad;
  for (const auto& r : m.cells) {
    if (!r.holds) continue;
    ++applicable;
    bool listed = models::NoExpiryScenarios().count({r.scenario, r.property}) > 0;
    no_expiry += r.assume_no_expiry;
    if (r.match != harness::Match::kMatch || r.assume_no_expiry != listed) {
      bad.push_back(r.scenario.str() + "/P" + std::to_string(r.property));
    }
  }
  o.pass = bad.empty() && m.mismatches == 0 && applicable == 57 && no_expiry == 4;
  o.detail = std::to_string(applicable) + " applicable cells, " +
             std::to_string(m.matches) + " match, " +
             std::to_string(m.mismatches) + " mismatch, no-expiry on " +
             std::to_string(no_expiry) + " cells, " + Fmt(m.wall_ms / 1000) +
             " s";
  if (!m.over_budget.empty()) {
    o.detail += ", over soft budget: " + std::to_string(m.over_budget.size());
  }
  for (const auto& b : bad) o.detail += " [" + b + "]";
  return o;
}

Outcome DeadlockCriterion(const MatrixReport& m) {
  Outcome o;
  int free = 0, abstracted = 0;
  for (const auto& d : m.deadlocks) {
    free += d.deadlock_free;
    abstracted += d.abstracted;
  }
  o.pass = m.deadlocks.size() == 12 && free == 12;
  o.detail = std::to_string(free) + "/" + std::to_string(m.deadlocks.size()) +
             " scenarios deadlock-free (" + std::to_string(abstracted) +
             " decided on the stored-certificate abstraction)";
  return o;
}

// --- 3: counterexample shapes ----------------------------------------------

const RunReport* Cell(const MatrixReport& m, const char* id, int p) {
  for (const auto& r : m.cells) {
    if (r.scenario == ScenarioId::Parse(id) && r.property == p) return &r;
  }
  return nullptr;
}

bool HasChange(const harness::TraceStep& s, const std::string& prefix) {
  return std::any_of(s.changes.begin(), s.changes.end(), [&](const auto& c) {
    return c.rfind(prefix, 0) == 0;
  });
}

bool HasRole(const harness::TraceStep& s, const std::string& role) {
  return std::find(s.roles.begin(), s.roles.end(), role) != s.roles.end();
}

// Firefox classic, warning-users: a certificate stored after a warning, then
// a warning-free completion on an invalid certificate.
std::string ShapeFirefox(const Counterexample& cex, bool final_invalid) {
  if (cex.sessions != 2) return "expected 2 sessions";
  bool stored = false, warned_later = false;
  for (const auto& s : cex.steps) {
    if (s.session == 1 && s.event == "ui.StoreCertificate") stored = true;
    if (s.session == 2 && s.event == "DisplayWarning") warned_later = true;
  }
  if (!stored) return "no StoreCertificate in session 1";
  if (warned_later) return "session 2 shows a warning";
  const auto& last = cex.steps.back();
  if (last.session != 2 || !HasChange(last, "finishTLS := true")) {
    return "session 2 does not end in TLS completion";
  }
  if (!final_invalid) return "certificate valid at completion";
  return "";
}

// Safari classic, hsts-user-security: the intruder's certificate is stored,
// the honest server later delivers the HSTS header, then the intruder
// completes a session.
std::string ShapeSafari(const Counterexample& cex) {
  const auto& st = cex.steps;
  std::size_t store = st.size(), header = st.size();
  for (std::size_t i = 0; i < st.size(); ++i) {
    if (store == st.size() && HasChange(st[i], "ServerCert += (S,Pk,SignI")) {
      store = i;
    }
    if (store < i && header == st.size() &&
        st[i].event == "network.ServerFinished.HSTS.Data" &&
        HasRole(st[i], "Honest Server")) {
      header = i;
    }
  }
  if (store == st.size()) return "intruder certificate never stored";
  if (header == st.size()) return "no honest HSTS header after storing";
  const auto& last = st.back();
  if (last.event != "INTRUDER_IN" || !HasChange(last, "intruder_server := true") ||
      last.session <= st[header].session) {
    return "no intruder completion after the header";
  }
  return "";
}

// Propositional evaluation at a position, independent of the automaton.
bool EvalProp(const FormulaPtr& f, const kernel::ModelDef& model,
              std::uint64_t macros, const std::optional<std::string>& event) {
  using Op = Formula::Op;
  switch (f->op()) {
    case Op::kTrue: return true;
    case Op::kFalse: return false;
    case Op::kState: return (macros >> *model.FindMacro(f->atom())) & 1U;
    case Op::kEvent: return event && *event == f->atom();
    case Op::kNot: return !EvalProp(f->lhs(), model, macros, event);
    case Op::kAnd:
      return EvalProp(f->lhs(), model, macros, event) &&
             EvalProp(f->rhs(), model, macros, event);
    case Op::kOr:
      return EvalProp(f->lhs(), model, macros, event) ||
             EvalProp(f->rhs(), model, macros, event);
    case Op::kImplies:
      return !EvalProp(f->lhs(), model, macros, event) ||
             EvalProp(f->rhs(), model, macros, event);
    default: throw std::logic_error("temporal operator in a state formula");
  }
}

// Monitor for G(a -> b) and G(a -> X G(b -> c)). A position is bad when,
// for the first shape, a && !b holds there; for the second, when b && !c
// holds after some earlier position satisfied a.
struct Monitor {
  FormulaPtr a, b, c;  // c empty for the first shape
  const kernel::ModelDef* model;

  static Monitor Of(const FormulaPtr& f, const kernel::ModelDef& model) {
    using Op = Formula::Op;
    const FormulaPtr& imp = f->lhs();
    if (f->op() != Op::kAlways || imp->op() != Op::kImplies) {
      throw std::logic_error("not a safety property");
    }
    const FormulaPtr& r = imp->rhs();
    if (r->op() == Op::kNext) {
      const FormulaPtr& inner = r->lhs()->lhs();  // X G (b -> c)
      return {imp->lhs(), inner->lhs(), inner->rhs(), &model};
    }
    return {imp->lhs(), r, nullptr, &model};
  }

  bool Arms(std::uint64_t m, const std::optional<std::string>& e) const {
    return c && EvalProp(a, *model, m, e);
  }
  bool Bad(bool armed, std::uint64_t m, const std::optional<std::string>& e) const {
    if (!c) return EvalProp(a, *model, m, e) && !EvalProp(b, *model, m, e);
    return armed && EvalProp(b, *model, m, e) && !EvalProp(c, *model, m, e);
  }
};

// Shortest bad prefix length (in steps) by BFS over (state, armed).
std::optional<std::size_t> ShortestBad(statespace::StateSpace& space,
                                       const Monitor& mon) {
  std::vector<std::uint8_t> seen;
  auto mark = [&](StateId s, bool armed) {
    if (seen.size() <= s) seen.resize(std::max<std::size_t>(s + 1, seen.size() * 2));
    std::uint8_t bit = armed ? 2 : 1;
    if (seen[s] & bit) return false;
    seen[s] |= bit;
    return true;
  };
  std::uint64_t m0 = space.macros(0);
  if (mon.Bad(false, m0, std::nullopt)) return 0;
  std::vector<std::pair<StateId, bool>> frontier{{0, mon.Arms(m0, std::nullopt)}};
  mark(0, frontier[0].second);
  for (std::size_t depth = 1; !frontier.empty(); ++depth) {
    std::vector<std::pair<StateId, bool>> next;
    for (auto [s, armed] : frontier) {
      auto edges = space.Expand(s);
      std::vector<std::pair<std::optional<std::string>, StateId>> moves;
      for (const auto& e : edges) moves.push_back({space.FormatLabel(e.label), e.target});
      if (moves.empty()) moves.push_back({std::nullopt, s});
      for (const auto& [event, t] : moves) {
        std::uint64_t m = space.macros(t);
        if (mon.Bad(armed, m, event)) return depth;
        bool now = armed || mon.Arms(m, event);
        if (mark(t, now)) next.push_back({t, now});
      }
    }
    frontier = std::move(next);
  }
  return std::nullopt;
}

// Independent recheck of one violated cell; empty string when it passes.
std::string RecheckMinimal(const RunReport& r) {
  models::ScenarioOptions opts;
  opts.assume_no_expiry = r.assume_no_expiry;
  auto sc = models::BuildScenario(r.scenario, opts);
  FormulaPtr f = ltl::Property(r.property);
  Monitor mon = Monitor::Of(f, *sc.model);

  statespace::StateSpace search(sc.model, harness::kHarnessStateLimit);
  auto shortest = ShortestBad(search, mon);
  if (!shortest) return "monitor finds no violation";

  statespace::StateSpace space(sc.model, harness::kHarnessStateLimit);
  ltl::Verdict v = ltl::Check(space, f);
  if (v.holds || !v.lasso.empty()) return "checker did not report a bad prefix";
  // The reported prefix is a path whose only bad position is the last.
  bool armed = false;
  for (std::size_t i = 0; i < v.prefix.size(); ++i) {
    const auto& p = v.prefix[i];
    if (i > 0) {
      auto edges = space.Expand(v.prefix[i - 1].state);
      bool ok = p.label ? std::any_of(edges.begin(), edges.end(),
                                      [&](const auto& e) {
                                        return e.label == *p.label &&
                                               e.target == p.state;
                                      })
                        : edges.empty() && p.state == v.prefix[i - 1].state;
      if (!ok) return "prefix is not a path at step " + std::to_string(i);
    }
    std::optional<std::string> event;
    if (p.label) event = space.FormatLabel(*p.label);
    std::uint64_t m = space.macros(p.state);
    bool bad = mon.Bad(armed, m, event);
    if (bad != (i + 1 == v.prefix.size())) {
      return "bad position at " + std::to_string(i) + " of " +
             std::to_string(v.prefix.size());
    }
    armed = armed || mon.Arms(m, event);
  }
  std::size_t steps = v.prefix.size() - 1;
  if (steps != *shortest) {
    return "length " + std::to_string(steps) + " vs shortest " +
           std::to_string(*shortest);
  }
  if (!r.counterexample || r.counterexample->steps.size() != steps) {
    return "reported trace length differs from the prefix";
  }
  return "";
}

Outcome ShapeCriterion(const MatrixReport& m) {
  Outcome o;
  std::vector<std::string> notes;
  auto need = [&](const char* id, int p) -> const Counterexample* {
    const RunReport* r = Cell(m, id, p);
    if (!r || !r->counterexample) {
      notes.push_back(std::string(id) + " P" + std::to_string(p) + ": no trace");
      return nullptr;
    }
    return &*r->counterexample;
  };

  if (const auto* cex = need("firefox:classic", 1)) {
    // The final state of a warning-users violation has an invalid
    // certificate; confirm it on the model rather than trusting the verdict.
    auto sc = models::BuildScenario(ScenarioId::Parse("firefox:classic"));
    statespace::StateSpace space(sc.model);
    auto v = ltl::Check(space, ltl::Property(1));
    std::size_t valid = *sc.model->FindMacro("CertificateIsValid");
    bool invalid = !v.holds && !((space.macros(v.prefix.back().state) >> valid) & 1U);
    std::string why = ShapeFirefox(*cex, invalid);
    notes.push_back("(a) " + (why.empty() ? "ok" : why));
    o.pass &= why.empty();
  }
  if (const auto* cex = need("safari:classic", 3)) {
    std::string why = ShapeSafari(*cex);
    notes.push_back("(b) " + (why.empty() ? "ok, " + std::to_string(cex->sessions) +
                                                " sessions"
                                          : why));
    o.pass &= why.empty();
  }
  if (const auto* cex = need("opera-mini", 1)) {
    auto ev = cex->events();
    bool warns = std::find(ev.begin(), ev.end(), "DisplayWarning") != ev.end();
    notes.push_back(std::string("(c) ") + (warns ? "DisplayWarning present" : "ok"));
    o.pass &= !warns;
  }
  int checked = 0;
  std::vector<std::string> bad;
  for (const auto& r : m.cells) {
    if (!r.holds || *r.holds) continue;
    std::string why = RecheckMinimal(r);
    ++checked;
    if (!why.empty()) bad.push_back(r.scenario.str() + "/P" + std::to_string(r.property) + ": " + why);
  }
  notes.push_back("(d) " + std::to_string(checked - int(bad.size())) + "/" +
                  std::to_string(checked) + " violations are shortest bad prefixes");
  o.pass &= bad.empty() && checked > 0;
  for (const auto& b : bad) notes.push_back(b);
  for (std::size_t i = 0; i < notes.size(); ++i) {
    o.detail += (i ? "; " : "") + notes[i];
  }
  if (notes.size() < 4) o.pass = false;
  return o;
}

// --- 4: kernel oracle --------------------------------------------------------

std::string CompareWithNaive(const std::shared_ptr<const kernel::ModelDef>& model,
                             std::size_t* states) {
  using Triple = std::tuple<std::string, std::string, std::string>;
  auto ts = statespace::Explore(model, 1'000'000);
  auto naive = oracle::Enumerate(*model, 1'000'000);
  std::set<std::string> keys;
  std::multiset<Triple> edges;
  for (StateId s = 0; s < ts.size(); ++s) {
    std::string key = oracle::KeyOf(*model, ts.space().config(s));
    keys.insert(key);
    for (const auto& e : ts.edges(s)) {
      edges.emplace(key, ts.space().FormatLabel(e.label),
                    oracle::KeyOf(*model, ts.space().config(e.target)));
    }
  }
  *states = ts.size();
  if (keys.size() != ts.size()) return "duplicate configurations";
  if (keys != std::set<std::string>(naive.states.begin(), naive.states.end())) {
    return "state sets differ";
  }
  if (edges != std::multiset<Triple>(naive.transitions.begin(), naive.transitions.end())) {
    return "transition multisets differ";
  }
  return "";
}

Outcome KernelOracleCriterion() {
  Outcome o;
  int models = 0;
  std::vector<std::string> bad;
  std::string sizes;
  auto run = [&](const std::string& name,
                 const std::shared_ptr<const kernel::ModelDef>& model) {
    std::size_t n = 0;
    std::string why;
    try {
      why = CompareWithNaive(model, &n);
    } catch (const std::exception& e) {
      why = e.what();
    }
    ++models;
    if (!why.empty()) bad.push_back(name + ": " + why);
    return n;
  };
  for (const auto& f : testing::Fixtures()) {
    run(std::string(f.name),
        std::make_shared<const kernel::ModelDef>(kernel::ParseModel(f.source)));
  }
  for (const char* id : {"opera-mini", "seb"}) {
    std::size_t n = run(id, models::BuildScenario(ScenarioId::Parse(id)).model);
    sizes += std::string(", ") + id + " " + std::to_string(n) + " states";
  }
  o.pass = bad.empty();
  o.detail = std::to_string(models - int(bad.size())) + "/" + std::to_string(models) +
             " models identical (" + std::to_string(testing::Fixtures().size()) +
             " fixtures" + sizes + ")";
  for (const auto& b : bad) o.detail += " [" + b + "]";
  return o;
}

// --- 5: LTL oracle -------------------------------------------------------------

Outcome LtlOracleCriterion() {
  Outcome o;
  std::mt19937_64 rng(20261018);
  int agree = 0, violated = 0, lassos_ok = 0;
  const int kRuns = 1000;
  std::string first_bad;
  for (int i = 0; i < kRuns; ++i) {
    auto sys = oracle::RandomSystem(rng, 50);
    auto f = oracle::RandomFormula(rng, 4);
    bool expected = oracle::HoldsByTableau(sys, f);
    auto fast = ltl::Check(sys, f);
    auto ndfs = ltl::Check(sys, f, {.prefer_bad_prefix = false});
    bool ok = fast.holds == expected && ndfs.holds == expected;
    if (ok && !expected) {
      ++violated;
      auto word = oracle::Spell(sys, ndfs.prefix);
      auto cycle = oracle::Spell(sys, ndfs.lasso);
      std::size_t loop = word.size();
      word.insert(word.end(), cycle.begin(), cycle.end());
      bool refutes = !cycle.empty() &&
                     !oracle::HoldsOnLasso(f, word, loop, sys.pred_names);
      lassos_ok += refutes;
      ok = refutes;
    }
    agree += ok;
    if (!ok && first_bad.empty()) first_bad = std::to_string(i) + ": " + f->ToString();
  }
  o.pass = agree == kRuns;
  o.detail = std::to_string(agree) + "/" + std::to_string(kRuns) +
             " agree with the tableau oracle (" + std::to_string(violated) +
             " violated, " + std::to_string(lassos_ok) +
             " lassos refute the formula)";
  if (!first_bad.empty()) o.detail += " first disagreement " + first_bad;
  return o;
}

// --- 6: invariant suite ----------------------------------------------------------

// Read-only view over an explored graph, exact or abstracted.
struct Graph {
  std::shared_ptr<statespace::StateSpace> space;
  bool abstracted = false;
};

Graph Materialize(const models::Scenario& sc) {
  const std::size_t kExactLimit = 3'000'000;
  try {
    auto ts = statespace::Explore(sc.model, kExactLimit);
    return {std::const_pointer_cast<statespace::StateSpace>(ts.space_ptr()), false};
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kStateLimitExceeded) throw;
  }
  kernel::SuccessorOptions options;
  options.erased_sets.push_back(*sc.model->FindSet("ServerCert"));
  auto ts = statespace::Explore(sc.model, harness::kHarnessStateLimit, options);
  return {std::const_pointer_cast<statespace::StateSpace>(ts.space_ptr()), true};
}

// Definitions owning the components that moved between two terms.
void MovedOwners(const kernel::TermPtr& before, const kernel::TermPtr& after,
                 std::vector<kernel::DefinitionId>& out) {
  using Kind = kernel::Term::Kind;
  if (kernel::TermsEqual(before, after)) return;
  if (before->kind() == Kind::kPar && after->kind() == Kind::kPar &&
      before->kids().size() == after->kids().size()) {
    for (std::size_t i = 0; i < before->kids().size(); ++i) {
      MovedOwners(before->kids()[i], after->kids()[i], out);
    }
    return;
  }
  if (before->kind() == Kind::kSeq && after->kind() == Kind::kSeq &&
      kernel::TermsEqual(before->kids()[1], after->kids()[1])) {
    MovedOwners(before->kids()[0], after->kids()[0], out);
    return;
  }
  out.push_back(before->active_owner());
}

struct InvariantTally {
  std::size_t states = 0, edges = 0;
  std::vector<std::string> violations;
  void Fail(const std::string& what) {
    if (violations.size() < 5) violations.push_back(what);
  }
};

bool IsSubset(const std::vector<kernel::Value>& a, const std::vector<kernel::Value>& b) {
  return std::all_of(a.begin(), a.end(), [&](const auto& x) {
    return std::find(b.begin(), b.end(), x) != b.end();
  });
}

void ScanScenario(const models::Scenario& sc, const Graph& g, InvariantTally& t) {
  const auto& model = *sc.model;
  const auto& space = *g.space;
  const std::string id = sc.id.str();
  auto var = [&](const kernel::GlobalState& s, const char* name) {
    return model.ReadVar(s, *model.FindVar(name)).boolean();
  };
  const kernel::SetId dynamic = *model.FindSet("dynamicHSTSList");
  const kernel::SetId preloaded = *model.FindSet("preloadedHSTSList");
  const kernel::SetId stored = *model.FindSet("ServerCert");
  const std::uint32_t dyn_bit = 1U << dynamic.value, cert_bit = 1U << stored.value;
  const auto server_i = *model.FindDefinition("ServerI");
  const bool private_mode = sc.id.mode() == models::Mode::kPrivate;
  const auto browser = sc.id.browser();

  // Monitor flags: bit 0 a warning was displayed and not yet answered,
  // bit 1 the certificate was checked in this session.
  std::vector<std::uint8_t> seen(space.size());
  std::deque<std::pair<StateId, std::uint8_t>> queue{{0, 0}};
  seen[0] = 1;
  t.states += space.size();
  if (var(space.globals(0), "finishTLS") || var(space.globals(0), "user_warned")) {
    t.Fail(id + ": flags set initially");
  }
  while (!queue.empty()) {
    auto [s, flags] = queue.front();
    queue.pop_front();
    const auto& before = space.globals(s);
    kernel::Config from = space.config(s);
    for (const auto& e : space.edges(s)) {
      const auto& after = space.globals(e.target);
      std::string label = space.FormatLabel(e.label);
      std::uint8_t next = flags;
      if (label == "DisplayWarning") next |= 1;
      if (label == "ui.Warning") next &= ~1;
      if (label == "Check_Certificate") next |= 2;
      if (label == "ui.Webpage") next = 0;

      // Intruder impossibility.
      if (label == "network.HelloServer.S.Pk.SignCA") {
        std::vector<kernel::DefinitionId> owners;
        MovedOwners(from.process, space.config(e.target).process, owners);
        for (auto d : owners) {
          if (d == server_i) t.Fail(id + ": intruder sent a CA-signed certificate");
        }
      }
      // Session reset.
      bool w0 = var(before, "user_warned"), w1 = var(after, "user_warned");
      if (label == "ui.Webpage" &&
          (w1 || var(after, "finishTLS") || var(after, "intruder_server"))) {
        t.Fail(id + ": session start without reset");
      }
      if (!w0 && w1 && !(label == "ui.Warning" && (flags & 1))) {
        t.Fail(id + ": user_warned raised by " + label);
      }
      if (w0 && !w1 && label != "ui.Webpage") {
        t.Fail(id + ": user_warned cleared by " + label);
      }
      // TLS completion only after this session's certificate check.
      if (!var(before, "finishTLS") && var(after, "finishTLS") && !(flags & 2)) {
        t.Fail(id + ": finishTLS raised before Check_Certificate");
      }
      // Store monotonicity; stored certificates are not tracked when the
      // graph is abstracted.
      if (!IsSubset(model.SetContents(before, dynamic), model.SetContents(after, dynamic)) ||
          !IsSubset(model.SetContents(before, preloaded), model.SetContents(after, preloaded)) ||
          (!g.abstracted &&
           !IsSubset(model.SetContents(before, stored), model.SetContents(after, stored)))) {
        t.Fail(id + ": a store shrank on " + label);
      }
      // Private-mode write rules.
      std::uint32_t adds = space.sets_added(e.label);
      if (private_mode) {
        if (adds & dyn_bit) {
          t.Fail(id + ": private session added an HSTS policy");
        }
        if ((adds & cert_bit) && browser == models::Browser::kFirefox) {
          t.Fail(id + ": private session stored a certificate");
        }
      }
      ++t.edges;
      if (!(seen[e.target] & (1U << next))) {
        seen[e.target] |= 1U << next;
        queue.push_back({e.target, next});
      }
    }
  }
}

Outcome InvariantCriterion() {
  Outcome o;
  InvariantTally tally;
  int exact = 0, abstracted = 0;
  for (const auto& id : ScenarioId::All()) {
    auto sc = models::BuildScenario(id);
    Graph g = Materialize(sc);
    (g.abstracted ? abstracted : exact)++;
    ScanScenario(sc, g, tally);
  }
  o.pass = tally.violations.empty();
  o.detail = std::to_string(tally.violations.size()) + " violations over " +
             std::to_string(tally.states) + " states and " +
             std::to_string(tally.edges) + " monitored transitions (" +
             std::to_string(exact) + " exact graphs, " + std::to_string(abstracted) +
             " stored-certificate abstractions)";
  for (const auto& v : tally.violations) o.detail += " [" + v + "]";
  return o;
}

// --- 7: determinism ----------------------------------------------------------------

void StripWallTime(nlohmann::json& j) {
  if (j.is_object()) {
    j.erase("wall_ms");
    for (auto& [k, v] : j.items()) StripWallTime(v);
  } else if (j.is_array()) {
    for (auto& v : j) StripWallTime(v);
  }
}

Outcome DeterminismCriterion(const MatrixReport& first) {
  Outcome o;
  auto a = harness::ToJson(first);
  auto b = harness::ToJson(harness::RunMatrix());
  StripWallTime(a);
  StripWallTime(b);
  o.pass = a == b;
  o.detail = o.pass ? "two matrix runs give identical JSON apart from wall_ms"
                    : "matrix JSON differs between runs";
  return o;
}

}  // namespace
}  // namespace ceremony

int main() {
  using namespace ceremony;
  auto start = std::chrono::steady_clock::now();
  harness::MatrixReport matrix;
  try {
    matrix = harness::RunMatrix();
  } catch (const std::exception& e) {
    std::printf("[FAIL] matrix aborted: %s\n", e.what());
    return 1;
  }
  Report("1 verdict matrix", MatrixCriterion(matrix));
  Report("2 deadlock freedom", DeadlockCriterion(matrix));
  auto guarded = [](auto fn) {
    try {
      return fn();
    } catch (const std::exception& e) {
      return Outcome{false, std::string("aborted: ") + e.what()};
    }
  };
  Report("3 counterexample shapes", guarded([&] { return ShapeCriterion(matrix); }));
  Report("4 kernel oracle", guarded(KernelOracleCriterion));
  Report("5 LTL oracle", guarded(LtlOracleCriterion));
  Report("6 invariant suite", guarded(InvariantCriterion));
  Report("7 determinism", guarded([&] { return DeterminismCriterion(matrix); }));
  std::printf("%d of 7 criteria failed, %s s\n", failures, Fmt(Seconds(start)).c_str());
  return failures == 0 ? 0 : 1;
}
