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

#ifndef CEREMONY_KERNEL_SEMANTICS_HH_
#define CEREMONY_KERNEL_SEMANTICS_HH_

#include <array>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ceremony/kernel/ast.hh"
#include "ceremony/kernel/model.hh"
#include "ceremony/kernel/value.hh"

namespace ceremony::kernel {

/// Values of local binders visible to an expression or statement.
using Bindings = std::vector<std::pair<LocalId, Value>>;

/**
 * Evaluates `e` in `state`. Throws Error(kIndexOutOfRange / kTypeMismatch /
 * kUndeclaredName) for a malformed model; never mutates anything.
 */
Value EvalExpr(const ModelDef& model, const GlobalState& state, const Expr& e,
               const Bindings& locals = {});

/// Executes `stmts` in order on a copy of `state` and returns the copy.
GlobalState ExecStmts(const ModelDef& model, const GlobalState& state,
                      const StmtList& stmts, const Bindings& locals = {});

/**
 * Observable label of a transition. Comm labels carry the channel and every
 * transmitted value, mirroring the `ui.Data` notation of assertions.
 */
class EventLabel {
 public:
  enum class Kind : std::uint8_t { kTau, kNamed, kComm };
  static constexpr std::size_t kMaxArity = 8;

  EventLabel() = default;
  static EventLabel Tau() { return EventLabel(); }
  static EventLabel Named(EventId id);
  static EventLabel Comm(ChannelId channel, const std::vector<AtomCode>& values);

  Kind kind() const { return kind_; }
  std::uint32_t id() const { return id_; }
  std::size_t arity() const { return arity_; }
  Value value(std::size_t i) const { return Value::Decode(values_[i]); }

  std::string Format(const ModelDef& model) const;
  std::size_t Hash() const;

  friend bool operator==(const EventLabel& a, const EventLabel& b) {
    return a.kind_ == b.kind_ && a.id_ == b.id_ && a.arity_ == b.arity_ &&
           a.values_ == b.values_;
  }
  friend bool operator!=(const EventLabel& a, const EventLabel& b) {
    return !(a == b);
  }

 private:
  Kind kind_ = Kind::kTau;
  std::uint8_t arity_ = 0;
  std::uint32_t id_ = 0;
  std::array<AtomCode, kMaxArity> values_{};
};

struct EventLabelHash {
  std::size_t operator()(const EventLabel& l) const { return l.Hash(); }
};

class Term;
using TermPtr = std::shared_ptr<const Term>;

/**
 * Runtime process term. A closure pairs a process node with the values of
 * its free locals; Seq and Par are the only composites that survive a step.
 */
class Term {
 public:
  enum class Kind : std::uint8_t { kClosure, kSeq, kPar };

  static TermPtr Closure(const ProcessExpr* node, std::vector<AtomCode> env);
  static TermPtr Seq(TermPtr first, TermPtr second);
  static TermPtr Par(std::vector<TermPtr> kids);

  Kind kind() const { return kind_; }
  const ProcessExpr* node() const { return node_; }
  const std::vector<AtomCode>& env() const { return env_; }
  const std::vector<TermPtr>& kids() const { return kids_; }
  std::size_t hash() const { return hash_; }

  /// Skip, or a Par whose components are all terminated.
  bool terminated() const;

  /// Definition owning the leftmost active process node.
  DefinitionId active_owner() const;

  /// Canonical text: locals are printed as the values bound to them.
  std::string Format(const ModelDef& model) const;

  friend bool operator==(const Term& a, const Term& b);

 private:
  Term(Kind kind, const ProcessExpr* node, std::vector<AtomCode> env,
       std::vector<TermPtr> kids);

  Kind kind_;
  const ProcessExpr* node_;
  std::vector<AtomCode> env_;
  std::vector<TermPtr> kids_;
  std::size_t hash_;
};

bool TermsEqual(const TermPtr& a, const TermPtr& b);

struct TermPtrHash {
  std::size_t operator()(const TermPtr& t) const { return t->hash(); }
};
struct TermPtrEq {
  bool operator()(const TermPtr& a, const TermPtr& b) const {
    return TermsEqual(a, b);
  }
};

/// Shared state plus the composite process term.
struct Config {
  GlobalState globals;
  TermPtr process;

  bool terminated() const { return process->terminated(); }
  std::size_t Hash() const;
  std::string Format(const ModelDef& model) const;

  friend bool operator==(const Config& a, const Config& b) {
    return a.globals == b.globals && TermsEqual(a.process, b.process);
  }
  friend bool operator!=(const Config& a, const Config& b) { return !(a == b); }
};

struct ConfigHash {
  std::size_t operator()(const Config& c) const { return c.Hash(); }
};

/**
 * Options for the successor function. Sets listed in `erased_sets` are not
 * tracked: adds to them are dropped, membership tests on them are unknown,
 * and a conditional with an unknown guard takes both branches. Successors
 * then over-approximate the exact ones modulo the erased data; unknown data
 * reaching a message, an assignment or a statement-level guard is an error.
 */
struct SuccessorOptions {
  std::vector<SetId> erased_sets;
};

struct Transition {
  EventLabel label;
  Config target;
  std::uint32_t sets_added = 0;  // bit i: an Add on set i executed
};

Config InitialConfig(const ModelDef& model);

/**
 * Every enabled one-step transition of `config`, in a fixed order: component
 * local steps in component order, then channel rendezvous ordered by sender
 * then receiver. Model errors are rethrown with the enclosing definition.
 */
std::vector<Transition> Successors(const ModelDef& model, const Config& config,
                                   const SuccessorOptions& options = {});

}  // namespace ceremony::kernel

#endif /* CEREMONY_KERNEL_SEMANTICS_HH_ */
