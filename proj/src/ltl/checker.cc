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

#include "ceremony/ltl/checker.hh"

#include <algorithm>
#include <chrono>
#include <deque>
#include <limits>

#include "ceremony/kernel/error.hh"

namespace ceremony::ltl {

namespace {

using Op = Formula::Op;

constexpr LabelId kSilent = std::numeric_limits<LabelId>::max();
constexpr std::uint64_t kNoNode = std::numeric_limits<std::uint64_t>::max();

bool Propositional(const FormulaPtr& f) {
  switch (f->op()) {
    case Op::kTrue:
    case Op::kFalse:
    case Op::kState:
    case Op::kEvent:
      return true;
    case Op::kNot:
      return Propositional(f->lhs());
    case Op::kAnd:
    case Op::kOr:
    case Op::kImplies:
      return Propositional(f->lhs()) && Propositional(f->rhs());
    default:
      return false;
  }
}

bool PropositionalImplication(const FormulaPtr& f) {
  return f->op() == Op::kImplies && Propositional(f->lhs()) &&
         Propositional(f->rhs());
}

class TsSystem : public System {
 public:
  explicit TsSystem(const statespace::TransitionSystem& ts) : ts_(ts) {}

  StateId initial() const override { return ts_.initial(); }
  std::span<const Edge> Successors(StateId s) override { return ts_.edges(s); }
  std::uint64_t Predicates(StateId s) const override { return ts_.macros(s); }
  std::optional<int> PredicateIndex(const std::string& name) const override {
    auto i = ts_.model().FindMacro(name);
    if (!i) return std::nullopt;
    return static_cast<int>(*i);
  }
  std::string LabelText(LabelId l) const override {
    return ts_.space().FormatLabel(l);
  }
  std::size_t size() const override { return ts_.size(); }

 private:
  const statespace::TransitionSystem& ts_;
};

// Product of a system with a Büchi automaton. Product nodes are numbered
// densely as state * |Q| + q so per-node data lives in flat arrays.
class Product {
 public:
  Product(System& system, const BuchiAutomaton& automaton)
      : system_(system), automaton_(automaton), q_(automaton.states.size()) {
    for (const auto& atom : automaton.atoms) {
      if (atom->op() == Op::kState) {
        auto index = system.PredicateIndex(atom->atom());
        if (!index) {
          throw Error(ErrorCode::kUnboundMacro,
                      "unknown macro '" + atom->atom() + "' in formula");
        }
        state_atoms_.push_back(*index);
      } else {
        state_atoms_.push_back(-1);
      }
    }
  }

  struct Step {
    std::uint64_t node;
    LabelId label;
  };

  std::size_t automaton_size() const { return q_; }
  StateId state_of(std::uint64_t node) const {
    return static_cast<StateId>(node / q_);
  }
  std::uint32_t q_of(std::uint64_t node) const {
    return static_cast<std::uint32_t>(node % q_);
  }
  std::uint64_t node(StateId s, std::uint32_t q) const {
    return std::uint64_t{s} * q_ + q;
  }
  /// Upper bound on node numbers for states discovered so far.
  std::uint64_t bound() const { return std::uint64_t{system_.size()} * q_; }

  std::vector<Step> Initial() {
    std::vector<Step> out;
    StateId s0 = system_.initial();
    std::uint64_t v = Valuation(kSilent, s0);
    for (auto q : automaton_.initial) {
      if (automaton_.states[q].guard.Holds(v)) out.push_back({node(s0, q), kSilent});
    }
    return out;
  }

  void Successors(std::uint64_t from, std::vector<Step>& out) {
    out.clear();
    StateId s = state_of(from);
    const auto& q = automaton_.states[q_of(from)];
    auto edges = system_.Successors(s);
    auto visit = [&](LabelId label, StateId t) {
      std::uint64_t v = Valuation(label, t);
      for (auto next : q.successors) {
        if (automaton_.states[next].guard.Holds(v)) {
          out.push_back({node(t, next), label});
        }
      }
    };
    if (edges.empty()) {
      visit(kSilent, s);
    } else {
      for (const auto& e : edges) visit(e.label, e.target);
    }
  }

  bool accepting(std::uint64_t n) const {
    return automaton_.states[q_of(n)].accepting;
  }

 private:
  std::uint64_t Valuation(LabelId label, StateId s) {
    std::uint64_t preds = system_.Predicates(s);
    std::uint64_t v = 0;
    for (std::size_t i = 0; i < state_atoms_.size(); ++i) {
      bool on = state_atoms_[i] >= 0 ? (preds >> state_atoms_[i]) & 1
                                     : EventMatches(i, label);
      if (on) v |= std::uint64_t{1} << i;
    }
    return v;
  }

  bool EventMatches(std::size_t atom, LabelId label) {
    if (label == kSilent) return false;
    if (label >= label_text_.size()) label_text_.resize(label + 1);
    auto& text = label_text_[label];
    if (!text) text = system_.LabelText(label);
    return *text == automaton_.atoms[atom]->atom();
  }

  System& system_;
  const BuchiAutomaton& automaton_;
  std::size_t q_;
  std::vector<int> state_atoms_;
  std::vector<std::optional<std::string>> label_text_;
};

Position MakePosition(const Product& p, std::uint64_t node, LabelId label) {
  Position pos;
  pos.state = p.state_of(node);
  if (label != kSilent) pos.label = label;
  return pos;
}

// Shortest path in the product to a state whose automaton state accepts
// every continuation.
bool BadPrefixSearch(Product& product, const BuchiAutomaton& automaton,
                     Verdict& verdict) {
  const auto universal = automaton.Universal();
  std::vector<std::uint64_t> parent;
  std::vector<LabelId> via;
  auto grow = [&] {
    std::uint64_t n = product.bound();
    if (parent.size() < n) {
      parent.resize(n, kNoNode);
      via.resize(n, kSilent);
    }
  };
  std::vector<bool> seen;
  auto mark = [&](std::uint64_t n) {
    if (seen.size() <= n) seen.resize(std::max<std::uint64_t>(n + 1, seen.size() * 2));
    if (seen[n]) return false;
    seen[n] = true;
    ++verdict.stats.product_states;
    return true;
  };
  auto report = [&](std::uint64_t n) {
    std::vector<Position> trace;
    for (std::uint64_t v = n; v != kNoNode; v = parent[v]) {
      trace.push_back(MakePosition(product, v, via[v]));
    }
    std::reverse(trace.begin(), trace.end());
    verdict.holds = false;
    verdict.prefix = std::move(trace);
  };

  std::deque<std::uint64_t> queue;
  grow();
  for (const auto& step : product.Initial()) {
    if (!mark(step.node)) continue;
    if (universal[product.q_of(step.node)]) {
      report(step.node);
      return true;
    }
    queue.push_back(step.node);
  }
  std::vector<Product::Step> next;
  while (!queue.empty()) {
    std::uint64_t n = queue.front();
    queue.pop_front();
    product.Successors(n, next);
    grow();
    for (const auto& step : next) {
      if (!mark(step.node)) continue;
      parent[step.node] = n;
      via[step.node] = step.label;
      if (universal[product.q_of(step.node)]) {
        report(step.node);
        return true;
      }
      queue.push_back(step.node);
    }
  }
  return false;
}

// Nested depth-first search with cyan/blue/red colouring; iterative so
// that deep products do not exhaust the call stack.
class NestedDfs {
 public:
  NestedDfs(Product& product, Verdict& verdict)
      : product_(product), verdict_(verdict) {}

  bool Run() {
    for (const auto& start : product_.Initial()) {
      if (color(start.node) != kWhite) continue;
      if (Blue(start)) return true;
    }
    return false;
  }

 private:
  enum Color : std::uint8_t { kWhite, kCyan, kBlue, kRed };

  struct Frame {
    Product::Step step;
    std::vector<Product::Step> succ;
    std::size_t next = 0;
  };

  Color color(std::uint64_t n) const {
    return n < colors_.size() ? static_cast<Color>(colors_[n]) : kWhite;
  }
  void set_color(std::uint64_t n, Color c) {
    if (colors_.size() <= n) {
      colors_.resize(std::max<std::uint64_t>(n + 1, colors_.size() * 2), kWhite);
    }
    if (colors_[n] == kWhite) ++verdict_.stats.product_states;
    colors_[n] = c;
  }

  Frame Open(const Product::Step& step) {
    Frame f{step, {}, 0};
    product_.Successors(step.node, f.succ);
    return f;
  }

  bool Blue(const Product::Step& start) {
    blue_.clear();
    set_color(start.node, kCyan);
    blue_.push_back(Open(start));
    while (!blue_.empty()) {
      Frame& top = blue_.back();
      if (top.next < top.succ.size()) {
        Product::Step s = top.succ[top.next++];
        if (color(s.node) == kWhite) {
          set_color(s.node, kCyan);
          blue_.push_back(Open(s));
        }
        continue;
      }
      std::uint64_t n = top.step.node;
      if (product_.accepting(n)) {
        if (Red(n)) return true;
        set_color(n, kRed);
      } else {
        set_color(n, kBlue);
      }
      blue_.pop_back();
    }
    return false;
  }

  bool Red(std::uint64_t seed) {
    std::vector<Frame> red;
    red.push_back(Open(Product::Step{seed, kSilent}));
    while (!red.empty()) {
      Frame& top = red.back();
      if (top.next >= top.succ.size()) {
        red.pop_back();
        continue;
      }
      Product::Step s = top.succ[top.next++];
      if (color(s.node) == kCyan) {
        Report(red, s);
        return true;
      }
      if (color(s.node) == kBlue) {
        set_color(s.node, kRed);
        red.push_back(Open(s));
      }
    }
    return false;
  }

  // The blue stack runs from an initial node to the seed; the red stack from
  // the seed to a node that closes the cycle onto the blue stack.
  void Report(const std::vector<Frame>& red, const Product::Step& closing) {
    std::size_t j = 0;
    while (blue_[j].step.node != closing.node) ++j;
    verdict_.holds = false;
    for (std::size_t i = 0; i <= j; ++i) {
      verdict_.prefix.push_back(
          MakePosition(product_, blue_[i].step.node, blue_[i].step.label));
    }
    for (std::size_t i = j + 1; i < blue_.size(); ++i) {
      verdict_.lasso.push_back(
          MakePosition(product_, blue_[i].step.node, blue_[i].step.label));
    }
    for (std::size_t i = 1; i < red.size(); ++i) {
      verdict_.lasso.push_back(
          MakePosition(product_, red[i].step.node, red[i].step.label));
    }
    verdict_.lasso.push_back(MakePosition(product_, closing.node, closing.label));
  }

  Product& product_;
  Verdict& verdict_;
  std::vector<std::uint8_t> colors_;
  std::vector<Frame> blue_;
};

}  // namespace

bool InSafetyFragment(const FormulaPtr& f) {
  if (f->op() != Op::kAlways) return false;
  const FormulaPtr& body = f->lhs();
  if (PropositionalImplication(body)) return true;
  if (body->op() != Op::kImplies || !Propositional(body->lhs())) return false;
  const FormulaPtr& rhs = body->rhs();
  return rhs->op() == Op::kNext && rhs->lhs()->op() == Op::kAlways &&
         PropositionalImplication(rhs->lhs()->lhs());
}

Verdict Check(System& system, const FormulaPtr& f, CheckOptions options) {
  auto start = std::chrono::steady_clock::now();
  BuchiAutomaton automaton = ToBuchi(Formula::Not(f));
  if (automaton.states.size() > kMaxAutomatonStates) {
    throw Error(ErrorCode::kCapacityExceeded,
                "automaton for the negated formula has " +
                    std::to_string(automaton.states.size()) + " states");
  }
  Product product(system, automaton);
  Verdict verdict;
  if (options.prefer_bad_prefix && InSafetyFragment(f)) {
    // In the fragment every violation has a finite bad prefix that drives
    // the automaton into a universal state, so an exhausted search proves
    // the property.
    BadPrefixSearch(product, automaton, verdict);
  } else {
    NestedDfs(product, verdict).Run();
  }
  verdict.stats.states = system.size();
  verdict.stats.wall_ms = std::chrono::duration<double, std::milli>(
                              std::chrono::steady_clock::now() - start)
                              .count();
  return verdict;
}

Verdict Check(const statespace::TransitionSystem& ts, const FormulaPtr& f,
              CheckOptions options) {
  TsSystem system(ts);
  return Check(system, f, options);
}

Verdict Check(statespace::StateSpace& space, const FormulaPtr& f,
              CheckOptions options) {
  if (space.abstracted()) {
    throw Error(ErrorCode::kTruncatedSystem,
                "cannot check a property on an abstracted state space");
  }
  SpaceSystem system(space);
  return Check(system, f, options);
}

std::optional<int> SpaceSystem::PredicateIndex(const std::string& name) const {
  auto i = space_.model().FindMacro(name);
  if (!i) return std::nullopt;
  return static_cast<int>(*i);
}

}  // namespace ceremony::ltl
