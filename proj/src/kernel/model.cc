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

#include "ceremony/kernel/model.hh"

#include <algorithm>
#include <memory>

#include "ceremony/kernel/error.hh"

namespace ceremony::kernel {

namespace {

template <class T>
void MergeSorted(std::vector<T>* into, const std::vector<T>& from) {
  if (from.empty()) return;
  std::vector<T> out;
  out.reserve(into->size() + from.size());
  std::set_union(into->begin(), into->end(), from.begin(), from.end(),
                 std::back_inserter(out));
  *into = std::move(out);
}

void Remove(std::vector<LocalId>* from, LocalId id) {
  from->erase(std::remove(from->begin(), from->end(), id), from->end());
}

void CollectStmtLocals(const StmtList& stmts, std::vector<LocalId>* out) {
  for (const auto& s : stmts) {
    std::visit(
        [out](const auto& n) {
          using T = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<T, AssignStmt>) {
            if (n.index) MergeSorted(out, n.index->free_locals());
            MergeSorted(out, n.value.free_locals());
          } else if constexpr (std::is_same_v<T, AddStmt>) {
            MergeSorted(out, n.element.free_locals());
          } else {
            MergeSorted(out, n.guard.free_locals());
            CollectStmtLocals(n.then_branch, out);
            CollectStmtLocals(n.else_branch, out);
          }
        },
        s.node);
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// Expr

Expr::Expr(Node node) : node_(std::move(node)) {
  std::visit(
      [this](const auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, LocalExpr>) {
          free_locals_.push_back(n.local);
        } else if constexpr (std::is_same_v<T, VarExpr>) {
          if (n.index) free_locals_ = n.index->free_locals();
        } else if constexpr (std::is_same_v<T, ContainsExpr>) {
          free_locals_ = n.element->free_locals();
        } else if constexpr (std::is_same_v<T, NotExpr>) {
          free_locals_ = n.operand->free_locals();
        } else if constexpr (std::is_same_v<T, BinaryExpr>) {
          free_locals_ = n.lhs->free_locals();
          MergeSorted(&free_locals_, n.rhs->free_locals());
        }
      },
      node_);
}

Expr Expr::Cell(VarId var, Expr index) {
  return Expr(VarExpr{var, std::make_shared<const Expr>(std::move(index))});
}

Expr Expr::Contains(SetId set, Expr element) {
  return Expr(
      ContainsExpr{set, std::make_shared<const Expr>(std::move(element))});
}

Expr Expr::Not(Expr operand) {
  return Expr(NotExpr{std::make_shared<const Expr>(std::move(operand))});
}

Expr Expr::Binary(BinaryOp op, Expr lhs, Expr rhs) {
  return Expr(BinaryExpr{op, std::make_shared<const Expr>(std::move(lhs)),
                         std::make_shared<const Expr>(std::move(rhs))});
}

// ---------------------------------------------------------------------------
// ProcessExpr

ProcessExpr::ProcessExpr(Node node, DefinitionId owner)
    : node_(std::move(node)), owner_(owner) {
  auto& fv = free_locals_;
  std::visit(
      [&fv](const auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, EventPrefix>) {
          fv = n.next->free_locals();
          CollectStmtLocals(n.stmts, &fv);
        } else if constexpr (std::is_same_v<T, OutputPrefix>) {
          fv = n.next->free_locals();
          CollectStmtLocals(n.stmts, &fv);
          for (const auto& v : n.values) MergeSorted(&fv, v.free_locals());
        } else if constexpr (std::is_same_v<T, InputPrefix>) {
          fv = n.next->free_locals();
          CollectStmtLocals(n.stmts, &fv);
          for (const auto& slot : n.slots) {
            if (slot.binder) Remove(&fv, *slot.binder);
          }
          for (const auto& slot : n.slots) {
            if (slot.match) MergeSorted(&fv, slot.match->free_locals());
          }
        } else if constexpr (std::is_same_v<T, ExternalChoice>) {
          fv = n.left->free_locals();
          MergeSorted(&fv, n.right->free_locals());
        } else if constexpr (std::is_same_v<T, IndexedChoice>) {
          fv = n.body->free_locals();
          Remove(&fv, n.binder);
        } else if constexpr (std::is_same_v<T, Conditional>) {
          fv = n.guard.free_locals();
          MergeSorted(&fv, n.then_branch->free_locals());
          if (n.else_branch) MergeSorted(&fv, n.else_branch->free_locals());
        } else if constexpr (std::is_same_v<T, Sequential>) {
          fv = n.first->free_locals();
          MergeSorted(&fv, n.second->free_locals());
        } else if constexpr (std::is_same_v<T, Interleave>) {
          for (const auto& c : n.components) MergeSorted(&fv, c->free_locals());
        } else if constexpr (std::is_same_v<T, Call>) {
          for (const auto& a : n.args) MergeSorted(&fv, a.free_locals());
        }
      },
      node_);
}

// ---------------------------------------------------------------------------
// GlobalState

std::size_t GlobalState::Hash() const {
  std::uint64_t h = 0x9e3779b97f4a7c15ULL;
  auto mix = [&h](std::uint64_t x) {
    h ^= x + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  };
  for (std::size_t i = 0; i < kMaxCells; i += 4) {
    mix(static_cast<std::uint64_t>(cells_[i]) |
        static_cast<std::uint64_t>(cells_[i + 1]) << 16 |
        static_cast<std::uint64_t>(cells_[i + 2]) << 32 |
        static_cast<std::uint64_t>(cells_[i + 3]) << 48);
  }
  for (auto w : bits_) mix(w);
  return static_cast<std::size_t>(h);
}

// ---------------------------------------------------------------------------
// ModelDef

namespace {

template <class IdT, class Vec, class Get>
std::optional<IdT> FindByName(const Vec& vec, std::string_view name, Get get) {
  for (std::size_t i = 0; i < vec.size(); ++i) {
    if (get(vec[i]) == name) return IdT{static_cast<std::uint32_t>(i)};
  }
  return std::nullopt;
}

}  // namespace

std::optional<VarId> ModelDef::FindVar(std::string_view name) const {
  return FindByName<VarId>(vars_, name, [](const VarDecl& d) { return d.name; });
}

std::optional<SetId> ModelDef::FindSet(std::string_view name) const {
  return FindByName<SetId>(sets_, name, [](const SetDecl& d) { return d.name; });
}

std::optional<ChannelId> ModelDef::FindChannel(std::string_view name) const {
  return FindByName<ChannelId>(channels_, name,
                               [](const std::string& s) { return s; });
}

std::optional<EventId> ModelDef::FindEvent(std::string_view name) const {
  return FindByName<EventId>(events_, name,
                             [](const std::string& s) { return s; });
}

std::optional<DefinitionId> ModelDef::FindDefinition(
    std::string_view name) const {
  return FindByName<DefinitionId>(definitions_, name,
                                  [](const Definition& d) { return d.name; });
}

std::optional<std::size_t> ModelDef::FindMacro(std::string_view name) const {
  for (std::size_t i = 0; i < macros_.size(); ++i) {
    if (macros_[i].name == name) return i;
  }
  return std::nullopt;
}

const MacroDecl& ModelDef::macro(std::string_view name) const {
  auto idx = FindMacro(name);
  if (!idx) {
    throw Error(ErrorCode::kUndeclaredName,
                "macro '" + std::string(name) + "' is not declared");
  }
  return macros_[*idx];
}

std::optional<std::size_t> ModelDef::UniverseIndex(SetId set,
                                                   const Value& element) const {
  const auto& index = universe_index_[set.value];
  auto it = index.find(element);
  if (it == index.end()) return std::nullopt;
  return it->second;
}

Value ModelDef::ReadVar(const GlobalState& state, VarId var) const {
  const auto& d = vars_[var.value];
  if (!d.is_array) return Value::Decode(state.cell(d.offset));
  std::vector<Value> elems;
  elems.reserve(d.length);
  for (std::uint32_t i = 0; i < d.length; ++i) {
    elems.push_back(Value::Decode(state.cell(d.offset + i)));
  }
  return Value::Tuple(std::move(elems));
}

Value ModelDef::ReadCell(const GlobalState& state, VarId var,
                         std::size_t index) const {
  const auto& d = vars_[var.value];
  if (index >= d.length) {
    throw Error(ErrorCode::kIndexOutOfRange,
                d.name + "[" + std::to_string(index) + "] is out of range");
  }
  return Value::Decode(state.cell(d.offset + index));
}

std::vector<Value> ModelDef::SetContents(const GlobalState& state,
                                         SetId set) const {
  const auto& d = sets_[set.value];
  std::vector<Value> out;
  for (std::size_t i = 0; i < d.universe.size(); ++i) {
    if (state.bit(d.bit_offset + i)) out.push_back(d.universe[i]);
  }
  return out;
}

// ---------------------------------------------------------------------------
// ModelBuilder

ModelBuilder::ModelBuilder() : model_(std::make_unique<ModelDef>()) {}

void ModelBuilder::CheckFresh(const std::string& name) const {
  const auto& m = *model_;
  if (m.FindVar(name) || m.FindSet(name) || m.FindChannel(name) ||
      m.FindMacro(name) || m.FindDefinition(name) || SymbolFromName(name)) {
    throw Error(ErrorCode::kDuplicateDeclaration,
                "'" + name + "' is declared more than once");
  }
}

VarId ModelBuilder::AddVar(std::string name, Value initial) {
  CheckFresh(name);
  if (next_cell_ + 1 > GlobalState::kMaxCells) {
    throw Error(ErrorCode::kCapacityExceeded, "too many variable cells");
  }
  model_->initial_.set_cell(next_cell_, initial.Encode());
  model_->vars_.push_back(VarDecl{std::move(name), next_cell_, 1, false});
  next_cell_ += 1;
  return VarId{static_cast<std::uint32_t>(model_->vars_.size() - 1)};
}

VarId ModelBuilder::AddArray(std::string name, std::size_t length,
                             Value initial) {
  CheckFresh(name);
  if (length == 0 || next_cell_ + length > GlobalState::kMaxCells) {
    throw Error(ErrorCode::kCapacityExceeded,
                "array '" + name + "' does not fit the state layout");
  }
  for (std::size_t i = 0; i < length; ++i) {
    model_->initial_.set_cell(next_cell_ + i, initial.Encode());
  }
  model_->vars_.push_back(VarDecl{std::move(name), next_cell_,
                                  static_cast<std::uint32_t>(length), true});
  next_cell_ += static_cast<std::uint32_t>(length);
  return VarId{static_cast<std::uint32_t>(model_->vars_.size() - 1)};
}

SetId ModelBuilder::AddSet(std::string name, std::vector<Value> universe,
                           const std::vector<Value>& initial) {
  CheckFresh(name);
  if (next_bit_ + universe.size() > GlobalState::kMaxSetBits) {
    throw Error(ErrorCode::kCapacityExceeded,
                "universe of set '" + name + "' does not fit the state layout");
  }
  std::unordered_map<Value, std::size_t, ValueHashFn> index;
  for (std::size_t i = 0; i < universe.size(); ++i) {
    if (!index.emplace(universe[i], i).second) {
      throw Error(ErrorCode::kDuplicateDeclaration,
                  "universe of set '" + name + "' repeats " +
                      universe[i].ToString());
    }
  }
  for (const auto& v : initial) {
    auto it = index.find(v);
    if (it == index.end()) {
      throw Error(ErrorCode::kOutsideUniverse,
                  v.ToString() + " is outside the universe of " + name);
    }
    model_->initial_.set_bit(next_bit_ + it->second);
  }
  const auto size = static_cast<std::uint32_t>(universe.size());
  model_->sets_.push_back(SetDecl{std::move(name), std::move(universe),
                                  next_bit_});
  model_->universe_index_.push_back(std::move(index));
  next_bit_ += size;
  return SetId{static_cast<std::uint32_t>(model_->sets_.size() - 1)};
}

ChannelId ModelBuilder::AddChannel(std::string name) {
  CheckFresh(name);
  model_->channels_.push_back(std::move(name));
  return ChannelId{static_cast<std::uint32_t>(model_->channels_.size() - 1)};
}

EventId ModelBuilder::InternEvent(std::string_view name) {
  if (auto id = model_->FindEvent(name)) return *id;
  model_->events_.emplace_back(name);
  return EventId{static_cast<std::uint32_t>(model_->events_.size() - 1)};
}

LocalId ModelBuilder::NewLocal(std::string name) {
  model_->local_names_.push_back(std::move(name));
  return LocalId{static_cast<std::uint32_t>(model_->local_names_.size() - 1)};
}

void ModelBuilder::AddMacro(std::string name, Expr body) {
  CheckFresh(name);
  model_->macros_.push_back(MacroDecl{std::move(name), std::move(body)});
}

DefinitionId ModelBuilder::DeclareDefinition(std::string name) {
  CheckFresh(name);
  model_->definitions_.push_back(Definition{std::move(name), {}, nullptr});
  has_body_.push_back(false);
  return DefinitionId{
      static_cast<std::uint32_t>(model_->definitions_.size() - 1)};
}

void ModelBuilder::DefineBody(DefinitionId id, std::vector<LocalId> params,
                              ProcessPtr body) {
  auto& def = model_->definitions_[id.value];
  if (has_body_[id.value]) {
    throw Error(ErrorCode::kDuplicateDeclaration,
                "process '" + def.name + "' is defined more than once");
  }
  auto fv = body->free_locals();
  for (auto p : params) Remove(&fv, p);
  if (!fv.empty()) {
    throw Error(ErrorCode::kUndeclaredName,
                "process '" + def.name + "' uses unbound local '" +
                    model_->local_names_[fv.front().value] + "'");
  }
  def.params = std::move(params);
  def.body = std::move(body);
  has_body_[id.value] = true;
}

ModelDef ModelBuilder::Build(std::string_view entry) && {
  for (std::size_t i = 0; i < has_body_.size(); ++i) {
    if (!has_body_[i]) {
      throw Error(ErrorCode::kUndeclaredName,
                  "process '" + model_->definitions_[i].name +
                      "' is called but never defined");
    }
  }
  auto id = model_->FindDefinition(entry);
  if (!id) {
    throw Error(ErrorCode::kUndeclaredName,
                "entry process '" + std::string(entry) + "' is not defined");
  }
  if (!model_->definitions_[id->value].params.empty()) {
    throw Error(ErrorCode::kInvalidArgument,
                "entry process '" + std::string(entry) +
                    "' must not take parameters");
  }
  model_->entry_ = *id;
  return std::move(*model_);
}

}  // namespace ceremony::kernel
