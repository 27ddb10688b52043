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

#ifndef CEREMONY_KERNEL_AST_HH_
#define CEREMONY_KERNEL_AST_HH_

#include <cstdint>
#include <memory>
#include <optional>
#include <variant>
#include <vector>

#include "ceremony/kernel/value.hh"

namespace ceremony::kernel {

/// Typed index into one of the model's declaration tables.
template <class Tag>
struct Id {
  std::uint32_t value = 0;

  friend bool operator==(Id a, Id b) { return a.value == b.value; }
  friend bool operator!=(Id a, Id b) { return a.value != b.value; }
  friend bool operator<(Id a, Id b) { return a.value < b.value; }
};

using VarId = Id<struct VarTag>;
using SetId = Id<struct SetTag>;
using ChannelId = Id<struct ChannelTag>;
using EventId = Id<struct EventTag>;
using DefinitionId = Id<struct DefinitionTag>;
using LocalId = Id<struct LocalTag>;

// ---------------------------------------------------------------------------
// Expressions

class Expr;

enum class BinaryOp : std::uint8_t { kEq, kNe, kAnd, kOr };

struct ConstExpr {
  Value value;
};
/// Scalar read when `index` is empty, array cell read otherwise.
struct VarExpr {
  VarId var;
  std::shared_ptr<const Expr> index;
};
/// The whole array as a tuple.
struct ArrayExpr {
  VarId var;
};
struct LocalExpr {
  LocalId local;
};
struct ContainsExpr {
  SetId set;
  std::shared_ptr<const Expr> element;
};
struct NotExpr {
  std::shared_ptr<const Expr> operand;
};
struct BinaryExpr {
  BinaryOp op;
  std::shared_ptr<const Expr> lhs;
  std::shared_ptr<const Expr> rhs;
};

/**
 * A resolved expression: every name has already been bound to a declaration
 * or to a local binder, so evaluation never looks anything up by name.
 */
class Expr {
 public:
  using Node = std::variant<ConstExpr, VarExpr, ArrayExpr, LocalExpr,
                            ContainsExpr, NotExpr, BinaryExpr>;

  explicit Expr(Node node);

  static Expr Const(Value v) { return Expr(ConstExpr{std::move(v)}); }
  static Expr Var(VarId var) { return Expr(VarExpr{var, nullptr}); }
  static Expr Cell(VarId var, Expr index);
  static Expr Array(VarId var) { return Expr(ArrayExpr{var}); }
  static Expr Local(LocalId local) { return Expr(LocalExpr{local}); }
  static Expr Contains(SetId set, Expr element);
  static Expr Not(Expr operand);
  static Expr Binary(BinaryOp op, Expr lhs, Expr rhs);

  const Node& node() const { return node_; }

  /// Local binders referenced by this expression, sorted and unique.
  const std::vector<LocalId>& free_locals() const { return free_locals_; }

 private:
  Node node_;
  std::vector<LocalId> free_locals_;
};

// ---------------------------------------------------------------------------
// Statements

struct Stmt;

struct AssignStmt {
  VarId var;
  std::optional<Expr> index;
  Expr value;
};
struct AddStmt {
  SetId set;
  Expr element;
};
struct IfStmt {
  Expr guard;
  std::vector<Stmt> then_branch;
  std::vector<Stmt> else_branch;
};

struct Stmt {
  std::variant<AssignStmt, AddStmt, IfStmt> node;
};

using StmtList = std::vector<Stmt>;

// ---------------------------------------------------------------------------
// Processes

class ProcessExpr;
using ProcessPtr = std::shared_ptr<const ProcessExpr>;

struct StopProc {};
struct SkipProc {};
/// `e{stmts} -> P`; the tau event when `event` is empty.
struct EventPrefix {
  std::optional<EventId> event;
  StmtList stmts;
  ProcessPtr next;
};
struct OutputPrefix {
  ChannelId channel;
  std::vector<Expr> values;
  StmtList stmts;
  ProcessPtr next;
};
/// One component of an input pattern: either a binder or a value to match.
struct InputSlot {
  std::optional<LocalId> binder;
  std::optional<Expr> match;
};
struct InputPrefix {
  ChannelId channel;
  std::vector<InputSlot> slots;
  StmtList stmts;
  ProcessPtr next;
};
struct ExternalChoice {
  ProcessPtr left;
  ProcessPtr right;
};
struct IndexedChoice {
  LocalId binder;
  std::vector<Value> domain;
  ProcessPtr body;
};
struct Conditional {
  Expr guard;
  ProcessPtr then_branch;
  ProcessPtr else_branch;  // null: fall through as Skip
  bool atomic = false;
};
struct Sequential {
  ProcessPtr first;
  ProcessPtr second;
};
struct Interleave {
  std::vector<ProcessPtr> components;
};
struct Call {
  DefinitionId target;
  std::vector<Expr> args;
};

/**
 * Immutable process expression. Free locals are computed on construction;
 * runtime terms pair a node with the values of exactly these locals, which
 * makes a closure equivalent to the substituted expression.
 */
class ProcessExpr {
 public:
  using Node = std::variant<StopProc, SkipProc, EventPrefix, OutputPrefix,
                            InputPrefix, ExternalChoice, IndexedChoice,
                            Conditional, Sequential, Interleave, Call>;

  ProcessExpr(Node node, DefinitionId owner);

  const Node& node() const { return node_; }
  const std::vector<LocalId>& free_locals() const { return free_locals_; }
  DefinitionId owner() const { return owner_; }

  template <class T>
  const T* as() const {
    return std::get_if<T>(&node_);
  }

 private:
  Node node_;
  DefinitionId owner_;
  std::vector<LocalId> free_locals_;
};

inline ProcessPtr MakeProcess(ProcessExpr::Node node, DefinitionId owner) {
  return std::make_shared<const ProcessExpr>(std::move(node), owner);
}

}  // namespace ceremony::kernel

#endif /* CEREMONY_KERNEL_AST_HH_ */
