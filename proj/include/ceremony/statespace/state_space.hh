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

#ifndef CEREMONY_STATESPACE_STATE_SPACE_HH_
#define CEREMONY_STATESPACE_STATE_SPACE_HH_

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include <absl/container/flat_hash_map.h>

#include "ceremony/kernel/model.hh"
#include "ceremony/kernel/semantics.hh"

namespace ceremony::statespace {

using StateId = std::uint32_t;
using LabelId = std::uint32_t;

inline constexpr std::size_t kDefaultStateLimit = 5'000'000;

struct Edge {
  LabelId label;
  StateId target;

  friend bool operator==(Edge a, Edge b) {
    return a.label == b.label && a.target == b.target;
  }
};

/**
 * Reachable configurations of a model, discovered lazily. A configuration is
 * stored as a pair of interned ids (shared globals, process term), so equal
 * configurations always map to the same state id. Successor lists are
 * computed on first request and cached.
 *
 * Ids are assigned in discovery order; Explore() expands breadth-first from
 * the initial state, which makes ids breadth-first numbers.
 *
 * Not thread-safe; a space belongs to one search at a time.
 */
class StateSpace {
 public:
  explicit StateSpace(std::shared_ptr<const kernel::ModelDef> model,
                      std::size_t state_limit = kDefaultStateLimit,
                      kernel::SuccessorOptions options = {});

  const kernel::ModelDef& model() const { return *model_; }
  std::shared_ptr<const kernel::ModelDef> model_ptr() const { return model_; }
  const kernel::SuccessorOptions& options() const { return options_; }
  /// True when some sets are erased, i.e. the space over-approximates.
  bool abstracted() const { return !options_.erased_sets.empty(); }

  StateId initial() const { return 0; }
  std::size_t size() const { return keys_.size(); }
  std::size_t state_limit() const { return limit_; }
  std::size_t distinct_globals() const { return globals_.size(); }
  std::size_t distinct_terms() const { return terms_.size(); }

  /// Successors of `s`, computing and interning them on first use. The span
  /// stays valid for the lifetime of the space.
  /// Throws Error(kStateLimitExceeded) when a new state would exceed the limit.
  std::span<const Edge> Expand(StateId s);
  bool expanded(StateId s) const { return edge_count_[s] != kUnexpanded; }
  /// Cached successors; `s` must already be expanded.
  std::span<const Edge> edges(StateId s) const {
    return {edge_begin_[s], edge_count_[s]};
  }

  kernel::Config config(StateId s) const;
  const kernel::GlobalState& globals(StateId s) const;
  bool terminated(StateId s) const;
  /// Sets targeted by an Add on transitions with this label (bit i: set i).
  /// Labels with the same event but different Add targets get distinct ids.
  std::uint32_t sets_added(LabelId l) const { return labels_[l].sets_added; }

  const kernel::EventLabel& label(LabelId l) const { return labels_[l].event; }
  std::size_t label_count() const { return labels_.size(); }
  std::string FormatLabel(LabelId l) const {
    return labels_[l].event.Format(*model_);
  }

  /// Bit i: macro i of the model holds in `s` (exact spaces only).
  std::uint64_t macros(StateId s) const;

 private:
  static constexpr std::uint32_t kUnexpanded = ~std::uint32_t{0};
  static constexpr std::size_t kChunkEdges = std::size_t{1} << 20;

  struct LabelEntry {
    kernel::EventLabel event;
    std::uint32_t sets_added;
  };
  struct LabelEntryHash {
    std::size_t operator()(const LabelEntry& e) const {
      return e.event.Hash() * 31 + e.sets_added;
    }
  };
  struct LabelEntryEq {
    bool operator()(const LabelEntry& a, const LabelEntry& b) const {
      return a.event == b.event && a.sets_added == b.sets_added;
    }
  };

  StateId Intern(const kernel::Config& c);
  LabelId InternLabel(const kernel::EventLabel& l, std::uint32_t sets_added);
  Edge* AllocateEdges(std::size_t n);

  std::shared_ptr<const kernel::ModelDef> model_;
  std::size_t limit_;
  kernel::SuccessorOptions options_;

  std::vector<kernel::GlobalState> globals_;
  absl::flat_hash_map<kernel::GlobalState, std::uint32_t,
                      kernel::GlobalStateHash>
      globals_index_;
  std::vector<std::uint64_t> globals_macros_;

  std::vector<kernel::TermPtr> terms_;
  absl::flat_hash_map<kernel::TermPtr, std::uint32_t, kernel::TermPtrHash,
                      kernel::TermPtrEq>
      terms_index_;

  std::vector<std::uint64_t> keys_;  // (globals id << 32) | term id
  absl::flat_hash_map<std::uint64_t, StateId> key_index_;

  std::vector<LabelEntry> labels_;
  absl::flat_hash_map<LabelEntry, LabelId, LabelEntryHash, LabelEntryEq>
      label_index_;

  // Successor lists live in fixed-size chunks so spans never move.
  std::vector<std::unique_ptr<Edge[]>> chunks_;
  std::size_t chunk_used_ = kChunkEdges;
  std::vector<const Edge*> edge_begin_;
  std::vector<std::uint32_t> edge_count_;
};

/**
 * A fully explored state space. Ids are breadth-first from the initial state
 * (id 0), and every state is expanded.
 */
class TransitionSystem {
 public:
  explicit TransitionSystem(std::shared_ptr<StateSpace> space)
      : space_(std::move(space)) {}

  const StateSpace& space() const { return *space_; }
  std::shared_ptr<const StateSpace> space_ptr() const { return space_; }
  const kernel::ModelDef& model() const { return space_->model(); }
  std::size_t size() const { return space_->size(); }
  std::size_t edge_count() const;
  StateId initial() const { return 0; }
  std::span<const Edge> edges(StateId s) const { return space_->edges(s); }
  std::uint64_t macros(StateId s) const { return space_->macros(s); }

 private:
  std::shared_ptr<StateSpace> space_;
};

/// Breadth-first exploration of the whole reachable space.
TransitionSystem Explore(std::shared_ptr<const kernel::ModelDef> model,
                         std::size_t state_limit = kDefaultStateLimit,
                         kernel::SuccessorOptions options = {});

/// A path through a space: `states` has one more entry than `labels`.
struct Path {
  std::vector<StateId> states;
  std::vector<LabelId> labels;
};

struct DeadlockReport {
  bool deadlock_free = true;
  Path witness;  // shortest path to a deadlocked state, when any
};

/// A state is deadlocked when it has no successor and is not terminated.
DeadlockReport CheckDeadlock(const TransitionSystem& ts);

/**
 * Breadth-first deadlock search over a lazy space, expanding as it goes.
 * Equivalent to CheckDeadlock(Explore(...)) but usable on abstracted spaces.
 */
DeadlockReport CheckDeadlock(StateSpace& space);

/// Shortest path from the initial state to `target`, by BFS over the
/// already-expanded part of the space.
Path ShortestPath(const StateSpace& space, StateId target);

struct PathStep {
  kernel::EventLabel label;
  kernel::Config target;
};

/// Checks that each step is a kernel successor of the previous configuration,
/// starting from the initial one; throws Error(kNonReplayableTrace) otherwise.
void Replay(const kernel::ModelDef& model, const std::vector<PathStep>& path,
            const kernel::SuccessorOptions& options = {});

/// The configurations and labels along a state-id path of `space`.
std::vector<PathStep> PathSteps(const StateSpace& space, const Path& path);

/// `state <id> <macro-bits-hex>` and `edge <src> <label> <dst>` lines.
void WriteGraph(const TransitionSystem& ts, std::ostream& out);

}  // namespace ceremony::statespace

#endif /* CEREMONY_STATESPACE_STATE_SPACE_HH_ */
