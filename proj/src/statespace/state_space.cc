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

#include "ceremony/statespace/state_space.hh"

#include <algorithm>
#include <cstdio>
#include <deque>
#include <limits>

#include "ceremony/kernel/error.hh"

namespace ceremony::statespace {

using kernel::Config;
using kernel::EventLabel;

namespace {

constexpr StateId kNone = std::numeric_limits<StateId>::max();

}  // namespace

StateSpace::StateSpace(std::shared_ptr<const kernel::ModelDef> model,
                       std::size_t state_limit,
                       kernel::SuccessorOptions options)
    : model_(std::move(model)), limit_(state_limit), options_(std::move(options)) {
  if (limit_ == 0) {
    throw Error(ErrorCode::kInvalidArgument, "state limit must be positive");
  }
  if (model_->macros().size() > 64) {
    throw Error(ErrorCode::kCapacityExceeded, "more than 64 macros");
  }
  Intern(kernel::InitialConfig(*model_));
}

StateId StateSpace::Intern(const Config& c) {
  auto [git, gnew] = globals_index_.try_emplace(
      c.globals, static_cast<std::uint32_t>(globals_.size()));
  if (gnew) {
    globals_.push_back(c.globals);
    std::uint64_t bits = 0;
    const auto& macros = model_->macros();
    for (std::size_t i = 0; i < macros.size(); ++i) {
      kernel::Value v = kernel::EvalExpr(*model_, c.globals, macros[i].body);
      if (v.is_bool() && v.boolean()) bits |= std::uint64_t{1} << i;
    }
    globals_macros_.push_back(bits);
  }
  auto [tit, tnew] = terms_index_.try_emplace(
      c.process, static_cast<std::uint32_t>(terms_.size()));
  if (tnew) terms_.push_back(c.process);

  std::uint64_t key = (std::uint64_t{git->second} << 32) | tit->second;
  auto [kit, knew] =
      key_index_.try_emplace(key, static_cast<StateId>(keys_.size()));
  if (knew) {
    if (keys_.size() >= limit_) {
      key_index_.erase(kit);
      throw Error(ErrorCode::kStateLimitExceeded,
                  "state limit of " + std::to_string(limit_) +
                      " states exceeded");
    }
    keys_.push_back(key);
    edge_begin_.push_back(nullptr);
    edge_count_.push_back(kUnexpanded);
  }
  return kit->second;
}

LabelId StateSpace::InternLabel(const EventLabel& l, std::uint32_t sets_added) {
  LabelEntry entry{l, sets_added};
  auto [it, fresh] =
      label_index_.try_emplace(entry, static_cast<LabelId>(labels_.size()));
  if (fresh) labels_.push_back(entry);
  return it->second;
}

Edge* StateSpace::AllocateEdges(std::size_t n) {
  if (n == 0) return nullptr;
  if (n > kChunkEdges) {
    throw Error(ErrorCode::kCapacityExceeded, "too many successors");
  }
  if (chunk_used_ + n > kChunkEdges) {
    chunks_.push_back(std::make_unique<Edge[]>(kChunkEdges));
    chunk_used_ = 0;
  }
  Edge* out = chunks_.back().get() + chunk_used_;
  chunk_used_ += n;
  return out;
}

std::span<const Edge> StateSpace::Expand(StateId s) {
  if (expanded(s)) return edges(s);
  auto succ = kernel::Successors(*model_, config(s), options_);
  std::vector<Edge> edges;
  edges.reserve(succ.size());
  for (const auto& t : succ) {
    LabelId l = InternLabel(t.label, t.sets_added);
    edges.push_back(Edge{l, Intern(t.target)});
  }
  Edge* dst = AllocateEdges(edges.size());
  std::copy(edges.begin(), edges.end(), dst);
  edge_begin_[s] = dst;
  edge_count_[s] = static_cast<std::uint32_t>(edges.size());
  return this->edges(s);
}

Config StateSpace::config(StateId s) const {
  std::uint64_t key = keys_[s];
  return Config{globals_[key >> 32], terms_[key & 0xffffffffU]};
}

const kernel::GlobalState& StateSpace::globals(StateId s) const {
  return globals_[keys_[s] >> 32];
}

bool StateSpace::terminated(StateId s) const {
  return terms_[keys_[s] & 0xffffffffU]->terminated();
}

std::uint64_t StateSpace::macros(StateId s) const {
  return globals_macros_[keys_[s] >> 32];
}

std::size_t TransitionSystem::edge_count() const {
  std::size_t n = 0;
  for (StateId s = 0; s < size(); ++s) n += edges(s).size();
  return n;
}

TransitionSystem Explore(std::shared_ptr<const kernel::ModelDef> model,
                         std::size_t state_limit,
                         kernel::SuccessorOptions options) {
  auto space =
      std::make_shared<StateSpace>(std::move(model), state_limit, options);
  // Interning order equals discovery order, so expanding ids in increasing
  // order is a breadth-first traversal.
  for (StateId s = 0; s < space->size(); ++s) space->Expand(s);
  return TransitionSystem(std::move(space));
}

namespace {

Path TracePath(const std::vector<StateId>& parent,
               const std::vector<LabelId>& via, StateId target) {
  Path p;
  for (StateId s = target; s != kNone; s = parent[s]) {
    p.states.push_back(s);
    if (parent[s] != kNone) p.labels.push_back(via[s]);
  }
  std::reverse(p.states.begin(), p.states.end());
  std::reverse(p.labels.begin(), p.labels.end());
  return p;
}

template <class ExpandFn>
DeadlockReport DeadlockSearch(const StateSpace& space, ExpandFn expand) {
  std::vector<StateId> parent(space.size(), kNone);
  std::vector<LabelId> via(space.size(), 0);
  std::vector<bool> seen(space.size(), false);
  std::deque<StateId> queue{space.initial()};
  seen[space.initial()] = true;
  while (!queue.empty()) {
    StateId s = queue.front();
    queue.pop_front();
    auto edges = expand(s);
    if (edges.empty() && !space.terminated(s)) {
      return DeadlockReport{false, TracePath(parent, via, s)};
    }
    if (seen.size() < space.size()) {
      seen.resize(space.size(), false);
      parent.resize(space.size(), kNone);
      via.resize(space.size(), 0);
    }
    for (const auto& e : edges) {
      if (seen[e.target]) continue;
      seen[e.target] = true;
      parent[e.target] = s;
      via[e.target] = e.label;
      queue.push_back(e.target);
    }
  }
  return DeadlockReport{};
}

}  // namespace

DeadlockReport CheckDeadlock(const TransitionSystem& ts) {
  const StateSpace& space = ts.space();
  return DeadlockSearch(space,
                        [&](StateId s) { return space.edges(s); });
}

DeadlockReport CheckDeadlock(StateSpace& space) {
  return DeadlockSearch(space,
                        [&](StateId s) { return space.Expand(s); });
}

Path ShortestPath(const StateSpace& space, StateId target) {
  std::vector<StateId> parent(space.size(), kNone);
  std::vector<LabelId> via(space.size(), 0);
  std::vector<bool> seen(space.size(), false);
  std::deque<StateId> queue{space.initial()};
  seen[space.initial()] = true;
  while (!queue.empty()) {
    StateId s = queue.front();
    queue.pop_front();
    if (s == target) return TracePath(parent, via, s);
    if (!space.expanded(s)) continue;
    for (const auto& e : space.edges(s)) {
      if (seen[e.target]) continue;
      seen[e.target] = true;
      parent[e.target] = s;
      via[e.target] = e.label;
      queue.push_back(e.target);
    }
  }
  throw Error(ErrorCode::kInvalidArgument,
              "state " + std::to_string(target) + " is not reachable");
}

std::vector<PathStep> PathSteps(const StateSpace& space, const Path& path) {
  std::vector<PathStep> steps;
  for (std::size_t i = 0; i < path.labels.size(); ++i) {
    steps.push_back(
        PathStep{space.label(path.labels[i]), space.config(path.states[i + 1])});
  }
  return steps;
}

void Replay(const kernel::ModelDef& model, const std::vector<PathStep>& path,
            const kernel::SuccessorOptions& options) {
  Config current = kernel::InitialConfig(model);
  for (std::size_t i = 0; i < path.size(); ++i) {
    bool found = false;
    for (const auto& t : kernel::Successors(model, current, options)) {
      if (t.label == path[i].label && t.target == path[i].target) {
        found = true;
        break;
      }
    }
    if (!found) {
      throw Error(ErrorCode::kNonReplayableTrace,
                  "step " + std::to_string(i + 1) + " (" +
                      path[i].label.Format(model) + ") is not enabled");
    }
    current = path[i].target;
  }
}

void WriteGraph(const TransitionSystem& ts, std::ostream& out) {
  char hex[32];
  for (StateId s = 0; s < ts.size(); ++s) {
    std::snprintf(hex, sizeof hex, "%llx",
                  static_cast<unsigned long long>(ts.macros(s)));
    out << "state " << s << ' ' << hex << '\n';
  }
  for (StateId s = 0; s < ts.size(); ++s) {
    for (const auto& e : ts.edges(s)) {
      out << "edge " << s << ' ' << ts.space().FormatLabel(e.label) << ' '
          << e.target << '\n';
    }
  }
}

}  // namespace ceremony::statespace
