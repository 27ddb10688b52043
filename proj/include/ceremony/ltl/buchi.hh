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

#ifndef CEREMONY_LTL_BUCHI_HH_
#define CEREMONY_LTL_BUCHI_HH_

#include <cstdint>
#include <string>
#include <vector>

#include "ceremony/ltl/formula.hh"

namespace ceremony::ltl {

/// Conjunction of literals over atom indices: bits in `pos` must be set in
/// the valuation, bits in `neg` must be clear.
struct Guard {
  std::uint64_t pos = 0;
  std::uint64_t neg = 0;

  bool Holds(std::uint64_t valuation) const {
    return (valuation & pos) == pos && (valuation & neg) == 0;
  }
  bool is_true() const { return pos == 0 && neg == 0; }
};

/**
 * Büchi automaton with guards on states. A run q0 q1 ... accepts positions
 * p0 p1 ... when q0 is initial, every q(i+1) is a successor of q(i), each
 * q(i)'s guard holds at p(i), and accepting states recur infinitely often.
 * Equivalently, every transition into q is guarded by q's guard.
 *
 * Atom i is `atoms[i]`; valuations are bit sets over these indices.
 */
struct BuchiAutomaton {
  struct State {
    Guard guard;
    bool accepting = false;
    std::vector<std::uint32_t> successors;
  };

  std::vector<FormulaPtr> atoms;
  std::vector<State> states;
  std::vector<std::uint32_t> initial;

  /// States from which every infinite input is accepted: true-guarded
  /// moves reach an accepting state lying on a true-guarded cycle.
  std::vector<bool> Universal() const;

  /// Acceptance of the lasso prefix·cycle^ω, given as valuations.
  bool AcceptsLasso(const std::vector<std::uint64_t>& prefix,
                    const std::vector<std::uint64_t>& cycle) const;

  std::string ToString() const;
};

/**
 * Tableau construction for `f` (converted to negation normal form), followed
 * by degeneralization of the per-until acceptance sets with a round-robin
 * counter. Unreachable states are dropped. More than 64 atoms is rejected
 * with Error(kCapacityExceeded).
 */
BuchiAutomaton ToBuchi(const FormulaPtr& f);

}  // namespace ceremony::ltl

#endif /* CEREMONY_LTL_BUCHI_HH_ */
