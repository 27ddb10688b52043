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

#include "ceremony/ltl/formula.hh"

#include <algorithm>
#include <cctype>
#include <unordered_set>

#include "ceremony/kernel/error.hh"

namespace ceremony::ltl {

FormulaPtr Formula::True() {
  static const FormulaPtr f(new Formula(Op::kTrue, "", nullptr, nullptr));
  return f;
}

FormulaPtr Formula::False() {
  static const FormulaPtr f(new Formula(Op::kFalse, "", nullptr, nullptr));
  return f;
}

FormulaPtr Formula::State(std::string macro) {
  return FormulaPtr(new Formula(Op::kState, std::move(macro), nullptr, nullptr));
}

FormulaPtr Formula::Event(std::string label) {
  return FormulaPtr(new Formula(Op::kEvent, std::move(label), nullptr, nullptr));
}

FormulaPtr Formula::Not(FormulaPtr f) {
  return FormulaPtr(new Formula(Op::kNot, "", std::move(f), nullptr));
}

FormulaPtr Formula::And(FormulaPtr a, FormulaPtr b) {
  return FormulaPtr(new Formula(Op::kAnd, "", std::move(a), std::move(b)));
}

FormulaPtr Formula::Or(FormulaPtr a, FormulaPtr b) {
  return FormulaPtr(new Formula(Op::kOr, "", std::move(a), std::move(b)));
}

FormulaPtr Formula::Implies(FormulaPtr a, FormulaPtr b) {
  return FormulaPtr(new Formula(Op::kImplies, "", std::move(a), std::move(b)));
}

FormulaPtr Formula::Next(FormulaPtr f) {
  return FormulaPtr(new Formula(Op::kNext, "", std::move(f), nullptr));
}

FormulaPtr Formula::Always(FormulaPtr f) {
  return FormulaPtr(new Formula(Op::kAlways, "", std::move(f), nullptr));
}

FormulaPtr Formula::Eventually(FormulaPtr f) {
  return FormulaPtr(new Formula(Op::kEventually, "", std::move(f), nullptr));
}

FormulaPtr Formula::Until(FormulaPtr a, FormulaPtr b) {
  return FormulaPtr(new Formula(Op::kUntil, "", std::move(a), std::move(b)));
}

FormulaPtr Formula::Release(FormulaPtr a, FormulaPtr b) {
  return FormulaPtr(new Formula(Op::kRelease, "", std::move(a), std::move(b)));
}

bool Formula::is_literal() const {
  if (is_atom() || op_ == Op::kTrue || op_ == Op::kFalse) return true;
  return op_ == Op::kNot && lhs_->is_atom();
}

int Formula::depth() const {
  int d = 0;
  if (lhs_) d = std::max(d, lhs_->depth() + 1);
  if (rhs_) d = std::max(d, rhs_->depth() + 1);
  return d;
}

std::string Formula::ToString() const {
  switch (op_) {
    case Op::kTrue: return "true";
    case Op::kFalse: return "false";
    case Op::kState: return atom_;
    case Op::kEvent: return "@" + atom_;
    case Op::kNot: return "!" + lhs_->ToString();
    case Op::kAnd: return "(" + lhs_->ToString() + " && " + rhs_->ToString() + ")";
    case Op::kOr: return "(" + lhs_->ToString() + " || " + rhs_->ToString() + ")";
    case Op::kImplies:
      return "(" + lhs_->ToString() + " -> " + rhs_->ToString() + ")";
    case Op::kNext: return "X " + lhs_->ToString();
    case Op::kAlways: return "G " + lhs_->ToString();
    case Op::kEventually: return "F " + lhs_->ToString();
    case Op::kUntil: return "(" + lhs_->ToString() + " U " + rhs_->ToString() + ")";
    case Op::kRelease:
      // No surface syntax for release; print its dual.
      return "!(!" + lhs_->ToString() + " U !" + rhs_->ToString() + ")";
  }
  return "";
}

bool operator==(const Formula& a, const Formula& b) {
  if (&a == &b) return true;
  if (a.op_ != b.op_ || a.atom_ != b.atom_) return false;
  if (static_cast<bool>(a.lhs_) != static_cast<bool>(b.lhs_)) return false;
  if (static_cast<bool>(a.rhs_) != static_cast<bool>(b.rhs_)) return false;
  if (a.lhs_ && !(*a.lhs_ == *b.lhs_)) return false;
  return !a.rhs_ || *a.rhs_ == *b.rhs_;
}

namespace {

using Op = Formula::Op;

FormulaPtr Nnf(const FormulaPtr& f, bool negate) {
  switch (f->op()) {
    case Op::kTrue: return negate ? Formula::False() : f;
    case Op::kFalse: return negate ? Formula::True() : f;
    case Op::kState:
    case Op::kEvent: return negate ? Formula::Not(f) : f;
    case Op::kNot: return Nnf(f->lhs(), !negate);
    case Op::kAnd: {
      auto a = Nnf(f->lhs(), negate), b = Nnf(f->rhs(), negate);
      return negate ? Formula::Or(a, b) : Formula::And(a, b);
    }
    case Op::kOr: {
      auto a = Nnf(f->lhs(), negate), b = Nnf(f->rhs(), negate);
      return negate ? Formula::And(a, b) : Formula::Or(a, b);
    }
    case Op::kImplies: {
      auto a = Nnf(f->lhs(), !negate), b = Nnf(f->rhs(), negate);
      return negate ? Formula::And(a, b) : Formula::Or(a, b);
    }
    case Op::kNext: return Formula::Next(Nnf(f->lhs(), negate));
    case Op::kAlways: {
      auto a = Nnf(f->lhs(), negate);
      return negate ? Formula::Until(Formula::True(), a)
                    : Formula::Release(Formula::False(), a);
    }
    case Op::kEventually: {
      auto a = Nnf(f->lhs(), negate);
      return negate ? Formula::Release(Formula::False(), a)
                    : Formula::Until(Formula::True(), a);
    }
    case Op::kUntil: {
      auto a = Nnf(f->lhs(), negate), b = Nnf(f->rhs(), negate);
      return negate ? Formula::Release(a, b) : Formula::Until(a, b);
    }
    case Op::kRelease: {
      auto a = Nnf(f->lhs(), negate), b = Nnf(f->rhs(), negate);
      return negate ? Formula::Until(a, b) : Formula::Release(a, b);
    }
  }
  return f;
}

void CollectAtoms(const FormulaPtr& f, std::vector<FormulaPtr>& out,
                  std::unordered_set<std::string>& seen) {
  if (f->is_atom()) {
    if (seen.insert(f->ToString()).second) out.push_back(f);
    return;
  }
  if (f->lhs()) CollectAtoms(f->lhs(), out, seen);
  if (f->rhs()) CollectAtoms(f->rhs(), out, seen);
}

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  FormulaPtr Parse() {
    FormulaPtr f = Implication();
    Skip();
    if (pos_ != text_.size()) Fail("unexpected input");
    return f;
  }

 private:
  FormulaPtr Implication() {
    FormulaPtr lhs = Disjunction();
    if (Accept("->")) return Formula::Implies(lhs, Implication());
    return lhs;
  }

  FormulaPtr Disjunction() {
    FormulaPtr f = Conjunction();
    while (Accept("||")) f = Formula::Or(f, Conjunction());
    return f;
  }

  FormulaPtr Conjunction() {
    FormulaPtr f = UntilExpr();
    while (Accept("&&")) f = Formula::And(f, UntilExpr());
    return f;
  }

  FormulaPtr UntilExpr() {
    FormulaPtr lhs = Unary();
    if (AcceptKeyword("U")) return Formula::Until(lhs, UntilExpr());
    return lhs;
  }

  FormulaPtr Unary() {
    if (Accept("!")) return Formula::Not(Unary());
    if (AcceptKeyword("G")) return Formula::Always(Unary());
    if (AcceptKeyword("X")) return Formula::Next(Unary());
    if (AcceptKeyword("F")) return Formula::Eventually(Unary());
    return Primary();
  }

  FormulaPtr Primary() {
    Skip();
    if (Accept("(")) {
      FormulaPtr f = Implication();
      if (!Accept(")")) Fail("expected ')'");
      return f;
    }
    if (Accept("@")) {
      std::string label = Ident();
      while (pos_ < text_.size() && text_[pos_] == '.') {
        ++pos_;
        label += "." + Ident();
      }
      return Formula::Event(label);
    }
    std::string name = Ident();
    if (name == "true") return Formula::True();
    if (name == "false") return Formula::False();
    return Formula::State(name);
  }

  static bool IsIdentChar(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
  }

  std::string Ident() {
    Skip();
    std::size_t start = pos_;
    while (pos_ < text_.size() && IsIdentChar(text_[pos_])) ++pos_;
    if (start == pos_) Fail("expected a name");
    return std::string(text_.substr(start, pos_ - start));
  }

  void Skip() {
    while (pos_ < text_.size() &&
           std::isspace(static_cast<unsigned char>(text_[pos_]))) {
      ++pos_;
    }
  }

  bool Accept(std::string_view token) {
    Skip();
    if (text_.substr(pos_, token.size()) != token) return false;
    pos_ += token.size();
    return true;
  }

  // A one-letter operator must not be the start of a longer name.
  bool AcceptKeyword(std::string_view kw) {
    Skip();
    if (text_.substr(pos_, kw.size()) != kw) return false;
    std::size_t end = pos_ + kw.size();
    if (end < text_.size() && IsIdentChar(text_[end])) return false;
    pos_ = end;
    return true;
  }

  [[noreturn]] void Fail(const std::string& what) const {
    throw Error(ErrorCode::kParse,
                "formula column " + std::to_string(pos_ + 1) + ": " + what);
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

FormulaPtr ToNnf(const FormulaPtr& f) { return Nnf(f, false); }

std::vector<FormulaPtr> Atoms(const FormulaPtr& f) {
  std::vector<FormulaPtr> out;
  std::unordered_set<std::string> seen;
  CollectAtoms(f, out, seen);
  return out;
}

FormulaPtr ParseFormula(std::string_view text) { return Parser(text).Parse(); }

FormulaPtr PropertyWithValidity(int id, const std::string& valid) {
  using F = Formula;
  auto S = [](const char* m) { return F::State(m); };
  auto V = [&] { return F::State(valid); };
  auto safe = [&] {
    return F::Implies(S("UserwantS"), F::Not(S("AuthFail")));
  };
  switch (id) {
    case 1:
      return F::Always(F::Implies(
          F::And(S("CompleteTLS"), F::Not(S("User_warned"))), V()));
    case 2:
      return F::Always(F::Implies(
          F::And(F::And(F::And(S("CertificateIsStored"), S("UserwantS")),
                        F::Event("ui.Data")),
                 F::Not(S("AuthFail"))),
          F::Next(F::Always(safe()))));
    case 3:
      return F::Always(F::Implies(
          F::And(F::And(V(), F::Event("network.ServerFinished.HSTS.Data")),
                 S("UserwantS")),
          F::Next(F::Always(safe()))));
    case 4:
      return F::Always(F::Implies(S("Preload"), safe()));
    case 5:
      return F::Always(F::Implies(
          F::And(F::And(S("CompleteTLS"), F::Not(V())), S("UserwantS")),
          F::Next(F::Always(F::Implies(
              F::And(F::And(S("CompleteTLS"), V()), S("UserwantS")),
              S("User_warned"))))));
    default:
      throw Error(ErrorCode::kUnknownPropertyId,
                  "unknown property " + std::to_string(id));
  }
}

FormulaPtr Property(int id) {
  return PropertyWithValidity(id, "CertificateIsValid");
}

}  // namespace ceremony::ltl
