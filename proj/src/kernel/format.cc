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

#include "ceremony/kernel/format.hh"

namespace ceremony::kernel {

namespace {

class Printer {
 public:
  Printer(const ModelDef& model, const LocalLookup& lookup)
      : model_(model), lookup_(lookup) {}

  std::string Expr(const kernel::Expr& e) const {
    return std::visit([this](const auto& n) { return Visit(n); }, e.node());
  }

  std::string Stmts(const StmtList& stmts) const {
    std::string out;
    for (std::size_t i = 0; i < stmts.size(); ++i) {
      if (i) out += "; ";
      out += Stmt(stmts[i]);
    }
    return out;
  }

  std::string Process(const ProcessExpr& p) const {
    return std::visit([this](const auto& n) { return Visit(n); }, p.node());
  }

 private:
  std::string Local(LocalId id) const {
    if (lookup_) {
      if (auto v = lookup_(id)) return v->ToString();
    }
    return model_.local_name(id);
  }

  std::string Visit(const ConstExpr& n) const { return n.value.ToString(); }
  std::string Visit(const VarExpr& n) const {
    const auto& name = model_.var(n.var).name;
    return n.index ? name + "[" + Expr(*n.index) + "]" : name;
  }
  std::string Visit(const ArrayExpr& n) const { return model_.var(n.var).name; }
  std::string Visit(const LocalExpr& n) const { return Local(n.local); }
  std::string Visit(const ContainsExpr& n) const {
    return model_.set(n.set).name + ".Contains(" + Expr(*n.element) + ")";
  }
  std::string Visit(const NotExpr& n) const { return "!" + Expr(*n.operand); }
  std::string Visit(const BinaryExpr& n) const {
    static constexpr const char* kOps[] = {" == ", " != ", " && ", " || "};
    return "(" + Expr(*n.lhs) + kOps[static_cast<int>(n.op)] + Expr(*n.rhs) +
           ")";
  }

  std::string Stmt(const kernel::Stmt& s) const {
    if (const auto* a = std::get_if<AssignStmt>(&s.node)) {
      std::string target = model_.var(a->var).name;
      if (a->index) target += "[" + Expr(*a->index) + "]";
      return target + "=" + Expr(a->value);
    }
    if (const auto* add = std::get_if<AddStmt>(&s.node)) {
      return model_.set(add->set).name + ".Add(" + Expr(add->element) + ")";
    }
    const auto& i = std::get<IfStmt>(s.node);
    std::string out = "if (" + Expr(i.guard) + ") {" + Stmts(i.then_branch) + "}";
    if (!i.else_branch.empty()) out += " else {" + Stmts(i.else_branch) + "}";
    return out;
  }

  std::string Block(const StmtList& stmts) const {
    return stmts.empty() ? "" : "{" + Stmts(stmts) + "}";
  }

  std::string Visit(const StopProc&) const { return "Stop"; }
  std::string Visit(const SkipProc&) const { return "Skip"; }
  std::string Visit(const EventPrefix& n) const {
    std::string head = n.event ? model_.event(*n.event) : "tau";
    return head + Block(n.stmts) + " -> " + Process(*n.next);
  }
  std::string Visit(const OutputPrefix& n) const {
    std::string out = model_.channel(n.channel) + "!";
    for (std::size_t i = 0; i < n.values.size(); ++i) {
      if (i) out += ".";
      out += Expr(n.values[i]);
    }
    return out + Block(n.stmts) + " -> " + Process(*n.next);
  }
  std::string Visit(const InputPrefix& n) const {
    std::string out = model_.channel(n.channel) + "?";
    for (std::size_t i = 0; i < n.slots.size(); ++i) {
      if (i) out += ".";
      const auto& slot = n.slots[i];
      out += slot.binder ? model_.local_name(*slot.binder) : Expr(*slot.match);
    }
    return out + Block(n.stmts) + " -> " + Process(*n.next);
  }
  std::string Visit(const ExternalChoice& n) const {
    return "(" + Process(*n.left) + " [] " + Process(*n.right) + ")";
  }
  std::string Visit(const IndexedChoice& n) const {
    std::string out = "[]" + model_.local_name(n.binder) + ":{";
    for (std::size_t i = 0; i < n.domain.size(); ++i) {
      if (i) out += ",";
      out += n.domain[i].ToString();
    }
    return out + "}@(" + Process(*n.body) + ")";
  }
  std::string Visit(const Conditional& n) const {
    std::string out = std::string(n.atomic ? "ifa" : "if") + " (" +
                      Expr(n.guard) + ") {" + Process(*n.then_branch) + "}";
    if (n.else_branch) out += " else {" + Process(*n.else_branch) + "}";
    return out;
  }
  std::string Visit(const Sequential& n) const {
    return "(" + Process(*n.first) + "; " + Process(*n.second) + ")";
  }
  std::string Visit(const Interleave& n) const {
    std::string out = "(";
    for (std::size_t i = 0; i < n.components.size(); ++i) {
      if (i) out += " ||| ";
      out += Process(*n.components[i]);
    }
    return out + ")";
  }
  std::string Visit(const Call& n) const {
    std::string out = model_.definition(n.target).name + "(";
    for (std::size_t i = 0; i < n.args.size(); ++i) {
      if (i) out += ",";
      out += Expr(n.args[i]);
    }
    return out + ")";
  }

  const ModelDef& model_;
  const LocalLookup& lookup_;
};

}  // namespace

std::string FormatExpr(const ModelDef& model, const Expr& e,
                       const LocalLookup& lookup) {
  return Printer(model, lookup).Expr(e);
}

std::string FormatStmts(const ModelDef& model, const StmtList& stmts,
                        const LocalLookup& lookup) {
  return Printer(model, lookup).Stmts(stmts);
}

std::string FormatProcess(const ModelDef& model, const ProcessExpr& p,
                          const LocalLookup& lookup) {
  return Printer(model, lookup).Process(p);
}

std::string FormatGlobals(const ModelDef& model, const GlobalState& state) {
  std::string out;
  for (std::size_t i = 0; i < model.vars().size(); ++i) {
    if (!out.empty()) out += ", ";
    out += model.vars()[i].name + "=" +
           model.ReadVar(state, VarId{static_cast<std::uint32_t>(i)}).ToString();
  }
  for (std::size_t i = 0; i < model.sets().size(); ++i) {
    if (!out.empty()) out += ", ";
    out += model.sets()[i].name + "={";
    auto contents = model.SetContents(state, SetId{static_cast<std::uint32_t>(i)});
    for (std::size_t k = 0; k < contents.size(); ++k) {
      if (k) out += ",";
      out += contents[k].ToString();
    }
    out += "}";
  }
  return out;
}

}  // namespace ceremony::kernel
