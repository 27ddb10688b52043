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

#ifndef CEREMONY_KERNEL_MODEL_HH_
#define CEREMONY_KERNEL_MODEL_HH_

#include <array>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "ceremony/kernel/ast.hh"
#include "ceremony/kernel/value.hh"

namespace ceremony::kernel {

/**
 * Shared mutable ceremony state: a fixed block of atom cells (scalars and
 * flattened arrays) plus one bitset per declared set, indexed by position in
 * that set's element universe. Fixed capacity keeps states trivially
 * copyable; the model builder rejects declarations that do not fit.
 */
class GlobalState {
 public:
  static constexpr std::size_t kMaxCells = 32;
  static constexpr std::size_t kMaxSetBits = 256;

  AtomCode cell(std::size_t i) const { return cells_[i]; }
  void set_cell(std::size_t i, AtomCode code) { cells_[i] = code; }

  bool bit(std::size_t i) const { return (bits_[i / 64] >> (i % 64)) & 1U; }
  void set_bit(std::size_t i) { bits_[i / 64] |= std::uint64_t{1} << (i % 64); }

  std::size_t Hash() const;

  friend bool operator==(const GlobalState& a, const GlobalState& b) {
    return a.cells_ == b.cells_ && a.bits_ == b.bits_;
  }
  friend bool operator!=(const GlobalState& a, const GlobalState& b) {
    return !(a == b);
  }

 private:
  std::array<AtomCode, kMaxCells> cells_{};
  std::array<std::uint64_t, kMaxSetBits / 64> bits_{};
};

struct GlobalStateHash {
  std::size_t operator()(const GlobalState& s) const { return s.Hash(); }
};

struct ValueHashFn {
  std::size_t operator()(const Value& v) const { return v.Hash(); }
};

struct VarDecl {
  std::string name;
  std::uint32_t offset = 0;  // first cell
  std::uint32_t length = 1;
  bool is_array = false;
};

struct SetDecl {
  std::string name;
  std::vector<Value> universe;
  std::uint32_t bit_offset = 0;
};

struct MacroDecl {
  std::string name;
  Expr body;
};

struct Definition {
  std::string name;
  std::vector<LocalId> params;
  ProcessPtr body;
};

class ModelBuilder;

/**
 * A complete ceremony model: declarations, macros, named process definitions
 * and the entry process. Immutable once built; runtime terms keep raw
 * pointers into its process expressions, so it must outlive them.
 */
class ModelDef {
 public:
  const std::vector<VarDecl>& vars() const { return vars_; }
  const std::vector<SetDecl>& sets() const { return sets_; }
  const std::vector<std::string>& channels() const { return channels_; }
  const std::vector<std::string>& events() const { return events_; }
  const std::vector<MacroDecl>& macros() const { return macros_; }
  const std::vector<Definition>& definitions() const { return definitions_; }

  const VarDecl& var(VarId id) const { return vars_[id.value]; }
  const SetDecl& set(SetId id) const { return sets_[id.value]; }
  const std::string& channel(ChannelId id) const { return channels_[id.value]; }
  const std::string& event(EventId id) const { return events_[id.value]; }
  const Definition& definition(DefinitionId id) const {
    return definitions_[id.value];
  }
  const std::string& local_name(LocalId id) const {
    return local_names_[id.value];
  }
  DefinitionId entry() const { return entry_; }
  const GlobalState& initial_globals() const { return initial_; }

  std::optional<VarId> FindVar(std::string_view name) const;
  std::optional<SetId> FindSet(std::string_view name) const;
  std::optional<ChannelId> FindChannel(std::string_view name) const;
  std::optional<EventId> FindEvent(std::string_view name) const;
  std::optional<DefinitionId> FindDefinition(std::string_view name) const;
  /// Index into macros().
  std::optional<std::size_t> FindMacro(std::string_view name) const;
  const MacroDecl& macro(std::string_view name) const;

  /// Position of `element` in the set's universe, or nullopt if outside it.
  std::optional<std::size_t> UniverseIndex(SetId set, const Value& element) const;

  Value ReadVar(const GlobalState& state, VarId var) const;
  Value ReadCell(const GlobalState& state, VarId var, std::size_t index) const;
  std::vector<Value> SetContents(const GlobalState& state, SetId set) const;

 private:
  friend class ModelBuilder;

  std::vector<VarDecl> vars_;
  std::vector<SetDecl> sets_;
  std::vector<std::string> channels_;
  std::vector<std::string> events_;
  std::vector<MacroDecl> macros_;
  std::vector<Definition> definitions_;
  std::vector<std::string> local_names_;
  std::vector<std::unordered_map<Value, std::size_t, ValueHashFn>>
      universe_index_;
  DefinitionId entry_;
  GlobalState initial_;
};

/**
 * Incremental construction of a ModelDef. Names share one namespace;
 * redeclaration fails with kDuplicateDeclaration. Definitions may be
 * declared before their bodies exist so that bodies can call each other.
 */
class ModelBuilder {
 public:
  ModelBuilder();

  VarId AddVar(std::string name, Value initial);
  VarId AddArray(std::string name, std::size_t length, Value initial);
  SetId AddSet(std::string name, std::vector<Value> universe,
               const std::vector<Value>& initial = {});
  ChannelId AddChannel(std::string name);
  EventId InternEvent(std::string_view name);
  LocalId NewLocal(std::string name);
  void AddMacro(std::string name, Expr body);
  DefinitionId DeclareDefinition(std::string name);
  void DefineBody(DefinitionId id, std::vector<LocalId> params,
                  ProcessPtr body);

  const ModelDef& model() const { return *model_; }

  /// Validates every definition has a body and the entry exists.
  ModelDef Build(std::string_view entry) &&;

 private:
  void CheckFresh(const std::string& name) const;

  std::unique_ptr<ModelDef> model_;
  std::uint32_t next_cell_ = 0;
  std::uint32_t next_bit_ = 0;
  std::vector<bool> has_body_;
};

}  // namespace ceremony::kernel

#endif /* CEREMONY_KERNEL_MODEL_HH_ */
