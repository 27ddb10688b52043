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

#include "ceremony/kernel/semantics.hh"

#include <algorithm>
#include <functional>

#include "ceremony/kernel/error.hh"
#include "ceremony/kernel/format.hh"

namespace ceremony::kernel {

namespace {

constexpr int kMaxUnfoldDepth = 64;

std::size_t Mix(std::size_t h, std::size_t x) {
  return h ^ (x + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2));
}

/// Local binder values, looked up linearly (scopes hold a handful of names).
class Scope {
 public:
  void Bind(LocalId id, AtomCode v) { vals_.emplace_back(id.value, v); }

  std::optional<AtomCode> Find(LocalId id) const {
    for (auto it = vals_.rbegin(); it != vals_.rend(); ++it) {
      if (it->first == id.value) return it->second;
    }
    return std::nullopt;
  }

  /// Values of `locals` in order; every local must be bound.
  std::vector<AtomCode> Project(const std::vector<LocalId>& locals) const {
    std::vector<AtomCode> env;
    env.reserve(locals.size());
    for (auto l : locals) {
      auto v = Find(l);
      if (!v) {
        throw Error(ErrorCode::kUndeclaredName,
                    "local #" + std::to_string(l.value) + " is unbound");
      }
      env.push_back(*v);
    }
    return env;
  }

 private:
  std::vector<std::pair<std::uint32_t, AtomCode>> vals_;
};

Scope ScopeOf(const ProcessExpr& node, const std::vector<AtomCode>& env) {
  Scope s;
  const auto& fv = node.free_locals();
  for (std::size_t i = 0; i < fv.size(); ++i) s.Bind(fv[i], env[i]);
  return s;
}

Scope ScopeOf(const Bindings& b) {
  Scope s;
  for (const auto& [id, v] : b) s.Bind(id, v.Encode());
  return s;
}

/**
 * Expression evaluation with Kleene logic over erased sets: nullopt means
 * "unknown". Without erased sets every result is known.
 */
class Evaluator {
 public:
  Evaluator(const ModelDef& model, const GlobalState& state, const Scope& scope,
            const std::vector<bool>* erased)
      : model_(model), state_(state), scope_(scope), erased_(erased) {}

  std::optional<Value> Eval(const Expr& e) const {
    return std::visit([this](const auto& n) { return Visit(n); }, e.node());
  }

  Value EvalKnown(const Expr& e, std::string_view what) const {
    auto v = Eval(e);
    if (!v) {
      throw Error(ErrorCode::kTypeMismatch,
                  std::string(what) + " depends on an erased set");
    }
    return *v;
  }

  std::optional<bool> EvalBool(const Expr& e) const {
    auto v = Eval(e);
    if (!v) return std::nullopt;
    return AsBool(*v);
  }

 private:
  static bool AsBool(const Value& v) {
    if (!v.is_bool()) {
      throw Error(ErrorCode::kTypeMismatch,
                  "expected a boolean, found " + v.ToString());
    }
    return v.boolean();
  }

  std::optional<Value> Visit(const ConstExpr& n) const { return n.value; }

  std::optional<Value> Visit(const VarExpr& n) const {
    if (!n.index) {
      const auto& d = model_.var(n.var);
      if (d.is_array) return model_.ReadVar(state_, n.var);
      return Value::Decode(state_.cell(d.offset));
    }
    Value idx = EvalKnown(*n.index, "an array index");
    if (idx.kind() != Value::Kind::kInt) {
      throw Error(ErrorCode::kTypeMismatch,
                  "array index " + idx.ToString() + " is not an integer");
    }
    return model_.ReadCell(state_, n.var, idx.integer());
  }

  std::optional<Value> Visit(const ArrayExpr& n) const {
    return model_.ReadVar(state_, n.var);
  }

  std::optional<Value> Visit(const LocalExpr& n) const {
    auto v = scope_.Find(n.local);
    if (!v) {
      throw Error(ErrorCode::kUndeclaredName,
                  "local '" + model_.local_name(n.local) + "' is unbound");
    }
    return Value::Decode(*v);
  }

  std::optional<Value> Visit(const ContainsExpr& n) const {
    auto elem = Eval(*n.element);
    if (erased_ && (*erased_)[n.set.value]) return std::nullopt;
    if (!elem) return std::nullopt;
    auto idx = model_.UniverseIndex(n.set, *elem);
    if (!idx) return Value::Bool(false);
    return Value::Bool(state_.bit(model_.set(n.set).bit_offset + *idx));
  }

  std::optional<Value> Visit(const NotExpr& n) const {
    auto b = EvalBool(*n.operand);
    if (!b) return std::nullopt;
    return Value::Bool(!*b);
  }

  std::optional<Value> Visit(const BinaryExpr& n) const {
    switch (n.op) {
      case BinaryOp::kEq:
      case BinaryOp::kNe: {
        auto a = Eval(*n.lhs);
        auto b = Eval(*n.rhs);
        if (!a || !b) return std::nullopt;
        return Value::Bool((*a == *b) == (n.op == BinaryOp::kEq));
      }
      case BinaryOp::kAnd: {
        auto a = EvalBool(*n.lhs);
        auto b = EvalBool(*n.rhs);
        if ((a && !*a) || (b && !*b)) return Value::Bool(false);
        if (!a || !b) return std::nullopt;
        return Value::Bool(true);
      }
      case BinaryOp::kOr: {
        auto a = EvalBool(*n.lhs);
        auto b = EvalBool(*n.rhs);
        if ((a && *a) || (b && *b)) return Value::Bool(true);
        if (!a || !b) return std::nullopt;
        return Value::Bool(false);
      }
    }
    return std::nullopt;
  }

  const ModelDef& model_;
  const GlobalState& state_;
  const Scope& scope_;
  const std::vector<bool>* erased_;
};

void Exec(const ModelDef& model, GlobalState* state, const StmtList& stmts,
          const Scope& scope, const std::vector<bool>* erased,
          std::uint32_t* sets_added) {
  for (const auto& stmt : stmts) {
    // Statements read the state as updated by their predecessors.
    Evaluator ev(model, *state, scope, erased);
    if (const auto* a = std::get_if<AssignStmt>(&stmt.node)) {
      const auto& d = model.var(a->var);
      Value v = ev.EvalKnown(a->value, "an assigned value");
      std::size_t cell = d.offset;
      if (a->index) {
        Value idx = ev.EvalKnown(*a->index, "an array index");
        if (idx.kind() != Value::Kind::kInt) {
          throw Error(ErrorCode::kTypeMismatch,
                      "array index " + idx.ToString() + " is not an integer");
        }
        if (static_cast<std::size_t>(idx.integer()) >= d.length) {
          throw Error(ErrorCode::kIndexOutOfRange,
                      d.name + "[" + idx.ToString() + "] is out of range");
        }
        cell += idx.integer();
      }
      state->set_cell(cell, v.Encode());
    } else if (const auto* add = std::get_if<AddStmt>(&stmt.node)) {
      if (sets_added && add->set.value < 32) {
        *sets_added |= std::uint32_t{1} << add->set.value;
      }
      if (erased && (*erased)[add->set.value]) continue;
      Value v = ev.EvalKnown(add->element, "an added element");
      auto idx = model.UniverseIndex(add->set, v);
      if (!idx) {
        throw Error(ErrorCode::kOutsideUniverse,
                    v.ToString() + " is outside the universe of " +
                        model.set(add->set).name);
      }
      state->set_bit(model.set(add->set).bit_offset + *idx);
    } else {
      const auto& s = std::get<IfStmt>(stmt.node);
      auto g = ev.EvalBool(s.guard);
      if (!g) {
        throw Error(ErrorCode::kTypeMismatch,
                    "statement guard depends on an erased set");
      }
      Exec(model, state, *g ? s.then_branch : s.else_branch, scope, erased,
           sets_added);
    }
  }
}

const ProcessExpr& SkipNode() {
  static const ProcessExpr skip(SkipProc{}, DefinitionId{0});
  return skip;
}

const ProcessExpr& StopNode() {
  static const ProcessExpr stop(StopProc{}, DefinitionId{0});
  return stop;
}

// ---------------------------------------------------------------------------
// Offers: what a subterm can contribute to a global step.

/// Rebuilds an enclosing term once an inner term has moved.
struct Frame {
  TermPtr parent;      // Seq or Par
  std::size_t index;   // Par child position
};

struct StmtRun {
  const StmtList* stmts;
  Scope scope;
};

struct Offer {
  enum class Kind { kStep, kOutput, kInput };
  Kind kind;
  EventLabel label;              // kStep
  std::vector<StmtRun> runs;     // executed in order
  TermPtr inner;                 // continuation (kStep, kOutput)
  std::vector<Frame> frames;     // innermost first
  DefinitionId owner;            // for error context

  ChannelId channel;             // kOutput, kInput
  std::vector<AtomCode> values;  // kOutput
  const InputPrefix* input = nullptr;
  const ProcessExpr* input_node = nullptr;
  Scope input_scope;
};

TermPtr Rebuild(TermPtr inner, const std::vector<Frame>& frames) {
  for (const auto& f : frames) {
    if (f.parent->kind() == Term::Kind::kSeq) {
      inner = Term::Seq(std::move(inner), f.parent->kids()[1]);
    } else {
      auto kids = f.parent->kids();
      kids[f.index] = std::move(inner);
      inner = Term::Par(std::move(kids));
    }
  }
  return inner;
}

class Stepper {
 public:
  Stepper(const ModelDef& model, const GlobalState& state,
          const SuccessorOptions& options)
      : model_(model), state_(state) {
    if (!options.erased_sets.empty()) {
      erased_.assign(model.sets().size(), false);
      for (auto s : options.erased_sets) erased_.at(s.value) = true;
    }
  }

  const std::vector<bool>* erased() const {
    return erased_.empty() ? nullptr : &erased_;
  }

  /// Canonical runtime term for `node` under `scope`: sequential and
  /// interleaved nodes are decomposed so that equal states share one shape.
  TermPtr MakeTerm(const ProcessExpr& node, const Scope& scope) const {
    if (const auto* s = node.as<Sequential>()) {
      return Term::Seq(MakeTerm(*s->first, scope), MakeTerm(*s->second, scope));
    }
    if (const auto* p = node.as<Interleave>()) {
      std::vector<TermPtr> kids;
      kids.reserve(p->components.size());
      for (const auto& c : p->components) kids.push_back(MakeTerm(*c, scope));
      return Term::Par(std::move(kids));
    }
    // Every Skip (and every Stop) behaves alike wherever it was written.
    if (node.as<SkipProc>()) return Term::Closure(&SkipNode(), {});
    if (node.as<StopProc>()) return Term::Closure(&StopNode(), {});
    return Term::Closure(&node, scope.Project(node.free_locals()));
  }

  void TermOffers(const TermPtr& t, std::vector<Offer>* out) {
    switch (t->kind()) {
      case Term::Kind::kClosure:
        NodeOffers(*t->node(), ScopeOf(*t->node(), t->env()), 0, out);
        return;
      case Term::Kind::kSeq: {
        const auto& first = t->kids()[0];
        if (first->terminated()) {
          Offer o{};
          o.kind = Offer::Kind::kStep;
          o.label = EventLabel::Tau();
          o.inner = t->kids()[1];
          o.owner = first->active_owner();
          out->push_back(std::move(o));
          return;
        }
        std::size_t begin = out->size();
        TermOffers(first, out);
        for (std::size_t i = begin; i < out->size(); ++i) {
          (*out)[i].frames.push_back(Frame{t, 0});
        }
        return;
      }
      case Term::Kind::kPar:
        ParOffers(t, out);
        return;
    }
  }

 private:
  void ParOffers(const TermPtr& t, std::vector<Offer>* out) {
    const auto& kids = t->kids();
    std::vector<std::vector<Offer>> per_kid(kids.size());
    for (std::size_t i = 0; i < kids.size(); ++i) {
      TermOffers(kids[i], &per_kid[i]);
    }
    std::vector<Offer> comms;
    for (std::size_t i = 0; i < kids.size(); ++i) {
      for (const auto& send : per_kid[i]) {
        if (send.kind != Offer::Kind::kOutput) continue;
        for (std::size_t j = 0; j < kids.size(); ++j) {
          if (j == i) continue;
          for (const auto& recv : per_kid[j]) {
            if (recv.kind != Offer::Kind::kInput) continue;
            Pair(t, i, send, j, recv, &comms);
          }
        }
      }
    }
    for (std::size_t i = 0; i < kids.size(); ++i) {
      for (auto& o : per_kid[i]) {
        o.frames.push_back(Frame{t, i});
        out->push_back(std::move(o));
      }
    }
    for (auto& c : comms) out->push_back(std::move(c));
  }

  void Pair(const TermPtr& par, std::size_t si, const Offer& send,
            std::size_t ri, const Offer& recv, std::vector<Offer>* out) {
    if (send.channel != recv.channel ||
        send.values.size() != recv.input->slots.size()) {
      return;
    }
    Scope scope = recv.input_scope;
    {
      Evaluator ev(model_, state_, recv.input_scope, erased());
      for (std::size_t k = 0; k < send.values.size(); ++k) {
        const auto& slot = recv.input->slots[k];
        if (slot.binder) {
          scope.Bind(*slot.binder, send.values[k]);
        } else {
          current_owner_ = recv.owner;
          Value want = ev.EvalKnown(*slot.match, "an input pattern");
          if (want.Encode() != send.values[k]) return;
        }
      }
    }
    Offer o{};
    o.kind = Offer::Kind::kStep;
    o.label = EventLabel::Comm(send.channel, send.values);
    o.owner = send.owner;
    o.runs = send.runs;
    o.runs.push_back(StmtRun{&recv.input->stmts, scope});
    auto kids = par->kids();
    kids[si] = Rebuild(send.inner, send.frames);
    kids[ri] = Rebuild(MakeTerm(*recv.input->next, scope), recv.frames);
    o.inner = Term::Par(std::move(kids));
    out->push_back(std::move(o));
  }

  void NodeOffers(const ProcessExpr& node, const Scope& scope, int depth,
                  std::vector<Offer>* out) {
    current_owner_ = node.owner();
    std::visit(
        [&](const auto& n) {
          using T = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<T, StopProc> ||
                        std::is_same_v<T, SkipProc>) {
            // No transitions of their own.
          } else if constexpr (std::is_same_v<T, EventPrefix>) {
            Offer o{};
            o.kind = Offer::Kind::kStep;
            o.label = n.event ? EventLabel::Named(*n.event) : EventLabel::Tau();
            o.runs.push_back(StmtRun{&n.stmts, scope});
            o.inner = MakeTerm(*n.next, scope);
            o.owner = node.owner();
            out->push_back(std::move(o));
          } else if constexpr (std::is_same_v<T, OutputPrefix>) {
            Offer o{};
            o.kind = Offer::Kind::kOutput;
            o.channel = n.channel;
            Evaluator ev(model_, state_, scope, erased());
            for (const auto& v : n.values) {
              o.values.push_back(ev.EvalKnown(v, "a channel value").Encode());
            }
            o.runs.push_back(StmtRun{&n.stmts, scope});
            o.inner = MakeTerm(*n.next, scope);
            o.owner = node.owner();
            out->push_back(std::move(o));
          } else if constexpr (std::is_same_v<T, InputPrefix>) {
            Offer o{};
            o.kind = Offer::Kind::kInput;
            o.channel = n.channel;
            o.input = &n;
            o.input_node = &node;
            o.input_scope = scope;
            o.owner = node.owner();
            out->push_back(std::move(o));
          } else if constexpr (std::is_same_v<T, ExternalChoice>) {
            NodeOffers(*n.left, scope, depth, out);
            NodeOffers(*n.right, scope, depth, out);
          } else if constexpr (std::is_same_v<T, IndexedChoice>) {
            for (const auto& v : n.domain) {
              Scope inner = scope;
              inner.Bind(n.binder, v.Encode());
              NodeOffers(*n.body, inner, depth, out);
            }
          } else if constexpr (std::is_same_v<T, Conditional>) {
            Evaluator ev(model_, state_, scope, erased());
            auto g = ev.EvalBool(n.guard);
            auto branch = [&](bool taken) {
              const ProcessExpr* next = taken ? n.then_branch.get()
                                              : n.else_branch.get();
              Offer o{};
              o.kind = Offer::Kind::kStep;
              o.label = EventLabel::Tau();
              o.inner = MakeTerm(next ? *next : SkipNode(), scope);
              o.owner = node.owner();
              out->push_back(std::move(o));
            };
            if (!g || *g) branch(true);
            if (!g || !*g) branch(false);
          } else if constexpr (std::is_same_v<T, Sequential> ||
                               std::is_same_v<T, Interleave>) {
            TermOffers(MakeTerm(node, scope), out);
          } else if constexpr (std::is_same_v<T, Call>) {
            const auto& def = model_.definition(n.target);
            if (depth >= kMaxUnfoldDepth) {
              throw Error(ErrorCode::kUnguardedRecursion,
                          "unguarded recursion through '" + def.name + "'");
            }
            Evaluator ev(model_, state_, scope, erased());
            Scope callee;
            for (std::size_t i = 0; i < def.params.size(); ++i) {
              callee.Bind(def.params[i],
                          ev.EvalKnown(n.args[i], "a call argument").Encode());
            }
            NodeOffers(*def.body, callee, depth + 1, out);
          }
        },
        node.node());
  }

 public:
  DefinitionId current_owner_;

 private:
  const ModelDef& model_;
  const GlobalState& state_;
  std::vector<bool> erased_;
};

}  // namespace

// ---------------------------------------------------------------------------
// Public evaluation API

Value EvalExpr(const ModelDef& model, const GlobalState& state, const Expr& e,
               const Bindings& locals) {
  Scope scope = ScopeOf(locals);
  return *Evaluator(model, state, scope, nullptr).Eval(e);
}

GlobalState ExecStmts(const ModelDef& model, const GlobalState& state,
                      const StmtList& stmts, const Bindings& locals) {
  GlobalState out = state;
  Exec(model, &out, stmts, ScopeOf(locals), nullptr, nullptr);
  return out;
}

// ---------------------------------------------------------------------------
// EventLabel

EventLabel EventLabel::Named(EventId id) {
  EventLabel l;
  l.kind_ = Kind::kNamed;
  l.id_ = id.value;
  return l;
}

EventLabel EventLabel::Comm(ChannelId channel,
                            const std::vector<AtomCode>& values) {
  if (values.size() > kMaxArity) {
    throw Error(ErrorCode::kCapacityExceeded, "channel message too long");
  }
  EventLabel l;
  l.kind_ = Kind::kComm;
  l.id_ = channel.value;
  l.arity_ = static_cast<std::uint8_t>(values.size());
  std::copy(values.begin(), values.end(), l.values_.begin());
  return l;
}

std::string EventLabel::Format(const ModelDef& model) const {
  switch (kind_) {
    case Kind::kTau:
      return "tau";
    case Kind::kNamed:
      return model.event(EventId{id_});
    case Kind::kComm: {
      std::string out = model.channel(ChannelId{id_});
      for (std::size_t i = 0; i < arity_; ++i) {
        out += "." + value(i).ToString();
      }
      return out;
    }
  }
  return "?";
}

std::size_t EventLabel::Hash() const {
  std::size_t h = static_cast<std::size_t>(kind_) * 31 + id_;
  for (std::size_t i = 0; i < arity_; ++i) h = Mix(h, values_[i]);
  return h;
}

// ---------------------------------------------------------------------------
// Term

Term::Term(Kind kind, const ProcessExpr* node, std::vector<AtomCode> env,
           std::vector<TermPtr> kids)
    : kind_(kind), node_(node), env_(std::move(env)), kids_(std::move(kids)) {
  std::size_t h = static_cast<std::size_t>(kind_) + 0x51ed27;
  h = Mix(h, std::hash<const void*>()(node_));
  for (auto v : env_) h = Mix(h, v);
  for (const auto& k : kids_) h = Mix(h, k->hash());
  hash_ = h;
}

TermPtr Term::Closure(const ProcessExpr* node, std::vector<AtomCode> env) {
  return TermPtr(new Term(Kind::kClosure, node, std::move(env), {}));
}

TermPtr Term::Seq(TermPtr first, TermPtr second) {
  return TermPtr(
      new Term(Kind::kSeq, nullptr, {}, {std::move(first), std::move(second)}));
}

TermPtr Term::Par(std::vector<TermPtr> kids) {
  return TermPtr(new Term(Kind::kPar, nullptr, {}, std::move(kids)));
}

bool Term::terminated() const {
  switch (kind_) {
    case Kind::kClosure:
      return node_->as<SkipProc>() != nullptr;
    case Kind::kSeq:
      return false;
    case Kind::kPar:
      return std::all_of(kids_.begin(), kids_.end(),
                         [](const TermPtr& k) { return k->terminated(); });
  }
  return false;
}

DefinitionId Term::active_owner() const {
  switch (kind_) {
    case Kind::kClosure:
      return node_->owner();
    case Kind::kSeq:
      return kids_[0]->terminated() ? kids_[1]->active_owner()
                                    : kids_[0]->active_owner();
    case Kind::kPar:
      for (const auto& k : kids_) {
        if (!k->terminated()) return k->active_owner();
      }
      return kids_.front()->active_owner();
  }
  return DefinitionId{};
}

std::string Term::Format(const ModelDef& model) const {
  switch (kind_) {
    case Kind::kClosure: {
      const auto& fv = node_->free_locals();
      LocalLookup lookup = [&](LocalId id) -> std::optional<Value> {
        auto it = std::lower_bound(fv.begin(), fv.end(), id);
        if (it == fv.end() || *it != id) return std::nullopt;
        return Value::Decode(env_[it - fv.begin()]);
      };
      return FormatProcess(model, *node_, lookup);
    }
    case Kind::kSeq:
      return "(" + kids_[0]->Format(model) + "; " + kids_[1]->Format(model) +
             ")";
    case Kind::kPar: {
      std::string out = "(";
      for (std::size_t i = 0; i < kids_.size(); ++i) {
        if (i) out += " ||| ";
        out += kids_[i]->Format(model);
      }
      return out + ")";
    }
  }
  return "?";
}

bool operator==(const Term& a, const Term& b) {
  if (&a == &b) return true;
  if (a.hash_ != b.hash_ || a.kind_ != b.kind_ || a.node_ != b.node_ ||
      a.env_ != b.env_ || a.kids_.size() != b.kids_.size()) {
    return false;
  }
  for (std::size_t i = 0; i < a.kids_.size(); ++i) {
    if (!TermsEqual(a.kids_[i], b.kids_[i])) return false;
  }
  return true;
}

bool TermsEqual(const TermPtr& a, const TermPtr& b) {
  return a == b || *a == *b;
}

// ---------------------------------------------------------------------------
// Config and successors

std::size_t Config::Hash() const { return Mix(globals.Hash(), process->hash()); }

std::string Config::Format(const ModelDef& model) const {
  return FormatGlobals(model, globals) + " :: " + process->Format(model);
}

Config InitialConfig(const ModelDef& model) {
  const auto& entry = model.definition(model.entry());
  Stepper stepper(model, model.initial_globals(), SuccessorOptions{});
  return Config{model.initial_globals(), stepper.MakeTerm(*entry.body, Scope{})};
}

std::vector<Transition> Successors(const ModelDef& model, const Config& config,
                                   const SuccessorOptions& options) {
  Stepper stepper(model, config.globals, options);
  std::vector<Transition> out;
  try {
    std::vector<Offer> offers;
    stepper.TermOffers(config.process, &offers);
    for (auto& o : offers) {
      if (o.kind != Offer::Kind::kStep) continue;
      stepper.current_owner_ = o.owner;
      Transition t;
      t.label = o.label;
      t.target.globals = config.globals;
      for (const auto& run : o.runs) {
        Exec(model, &t.target.globals, *run.stmts, run.scope, stepper.erased(),
             &t.sets_added);
      }
      t.target.process = Rebuild(std::move(o.inner), o.frames);
      out.push_back(std::move(t));
    }
  } catch (const Error& e) {
    throw Error(e.code(), "in process '" +
                              model.definition(stepper.current_owner_).name +
                              "': " + e.what());
  }
  return out;
}

}  // namespace ceremony::kernel
