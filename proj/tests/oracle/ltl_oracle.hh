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

#ifndef CEREMONY_TESTS_ORACLE_LTL_ORACLE_HH_
#define CEREMONY_TESTS_ORACLE_LTL_ORACLE_HH_

#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "ceremony/ltl/checker.hh"
#include "ceremony/ltl/formula.hh"

namespace ceremony::oracle {

/// An explicit labelled graph small enough to enumerate exhaustively.
class SmallSystem : public ltl::System {
 public:
  std::vector<std::vector<statespace::Edge>> edges;
  std::vector<std::uint64_t> preds;
  std::vector<std::string> pred_names;
  std::vector<std::string> labels;

  statespace::StateId initial() const override { return 0; }
  std::span<const statespace::Edge> Successors(statespace::StateId s) override {
    return edges[s];
  }
  std::uint64_t Predicates(statespace::StateId s) const override {
    return preds[s];
  }
  std::optional<int> PredicateIndex(const std::string& name) const override;
  std::string LabelText(statespace::LabelId l) const override {
    return labels[l];
  }
  std::size_t size() const override { return edges.size(); }
};

/// States 1..max_states, predicates {p, q}, events {a, b}; some states
/// have no successors.
SmallSystem RandomSystem(std::mt19937_64& rng, std::size_t max_states);

/// Formulas of depth at most `depth` over p, q and @a, with at most seven
/// temporal operators.
ltl::FormulaPtr RandomFormula(std::mt19937_64& rng, int depth);

/// Decides the formula with a tableau over elementary subformulas and a
/// fair-SCC search; shares no code with the Buchi translation.
bool HoldsByTableau(const SmallSystem& system, const ltl::FormulaPtr& f);

/// One position of an infinite word: state predicates and incoming event.
struct Letter {
  std::uint64_t preds = 0;
  std::optional<std::string> event;
};

/// Evaluates `f` at index 0 of word[0..n) with word[n-1] followed by
/// word[loop_start].
bool HoldsOnLasso(const ltl::FormulaPtr& f, const std::vector<Letter>& word,
                  std::size_t loop_start,
                  const std::vector<std::string>& pred_names);

/// The word spelled by a verdict's prefix and lasso over `system`.
std::vector<Letter> Spell(const ltl::System& system,
                          const std::vector<ltl::Position>& positions);

}  // namespace ceremony::oracle

#endif /* CEREMONY_TESTS_ORACLE_LTL_ORACLE_HH_ */
