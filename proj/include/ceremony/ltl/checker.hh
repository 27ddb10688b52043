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

#ifndef CEREMONY_LTL_CHECKER_HH_
#define CEREMONY_LTL_CHECKER_HH_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ceremony/ltl/buchi.hh"
#include "ceremony/ltl/formula.hh"
#include "ceremony/statespace/state_space.hh"

namespace ceremony::ltl {

using statespace::Edge;
using statespace::LabelId;
using statespace::StateId;

/**
 * What the checker needs from a transition system. Successors may be
 * computed lazily; a state without successors is treated as stuttering
 * forever on a silent event.
 */
class System {
 public:
  virtual ~System() = default;

  virtual StateId initial() const = 0;
  virtual std::span<const Edge> Successors(StateId s) = 0;
  /// Bit i: state predicate i holds in `s`.
  virtual std::uint64_t Predicates(StateId s) const = 0;
  virtual std::optional<int> PredicateIndex(const std::string& name) const = 0;
  /// Printed event, compared verbatim against event atoms.
  virtual std::string LabelText(LabelId l) const = 0;
  /// States discovered so far.
  virtual std::size_t size() const = 0;
};

/// A point of a trace: the event that led here (none at index 0 and on
/// stutter steps) and the state reached.
struct Position {
  std::optional<LabelId> label;
  StateId state;

  friend bool operator==(const Position& a, const Position& b) {
    return a.label == b.label && a.state == b.state;
  }
};

struct CheckStats {
  std::size_t states = 0;
  std::size_t product_states = 0;
  double wall_ms = 0;
};

/**
 * Outcome of a check. A violation comes either as a bad prefix (`lasso`
 * empty: no infinite continuation satisfies the formula) or as a lasso
 * (`prefix` followed by `lasso` repeated forever). For a lasso, the first
 * lasso position follows the last one.
 */
struct Verdict {
  bool holds = true;
  std::vector<Position> prefix;
  std::vector<Position> lasso;
  CheckStats stats;
};

struct CheckOptions {
  /// Use breadth-first bad-prefix search when the formula is in the safety
  /// fragment. When false, nested DFS is always used.
  bool prefer_bad_prefix = true;
};

/// Largest automaton for the negated formula that Check accepts; product
/// bookkeeping is dense in automaton states.
inline constexpr std::size_t kMaxAutomatonStates = 4096;

/// True for G(a -> b) and G(a -> X G(b -> c)) with a, b, c propositional.
bool InSafetyFragment(const FormulaPtr& f);

/**
 * Decides whether every infinite path from the initial state satisfies `f`.
 * Throws Error(kUnboundMacro) for an unknown state predicate and
 * Error(kCapacityExceeded) past kMaxAutomatonStates.
 */
Verdict Check(System& system, const FormulaPtr& f, CheckOptions options = {});

/// Check over a fully explored system.
Verdict Check(const statespace::TransitionSystem& ts, const FormulaPtr& f,
              CheckOptions options = {});

/**
 * Check over a lazy space, expanding only what the search reaches. Throws
 * Error(kTruncatedSystem) for an abstracted space and propagates
 * Error(kStateLimitExceeded).
 */
Verdict Check(statespace::StateSpace& space, const FormulaPtr& f,
              CheckOptions options = {});

/// Adapter exposing a StateSpace (lazily) as a System.
class SpaceSystem : public System {
 public:
  explicit SpaceSystem(statespace::StateSpace& space) : space_(space) {}

  StateId initial() const override { return space_.initial(); }
  std::span<const Edge> Successors(StateId s) override {
    return space_.Expand(s);
  }
  std::uint64_t Predicates(StateId s) const override {
    return space_.macros(s);
  }
  std::optional<int> PredicateIndex(const std::string& name) const override;
  std::string LabelText(LabelId l) const override {
    return space_.FormatLabel(l);
  }
  std::size_t size() const override { return space_.size(); }

 private:
  statespace::StateSpace& space_;
};

}  // namespace ceremony::ltl

#endif /* CEREMONY_LTL_CHECKER_HH_ */
