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

#ifndef CEREMONY_LTL_FORMULA_HH_
#define CEREMONY_LTL_FORMULA_HH_

#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace ceremony::ltl {

class Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

/**
 * Immutable LTL formula over two kinds of atoms: state predicates (macro
 * names, evaluated on the state of a position) and event predicates (an
 * exact event label such as `ui.Data`, true when the position was entered
 * by that event). Release only arises from negation normal form.
 */
class Formula {
 public:
  enum class Op {
    kTrue, kFalse, kState, kEvent,
    kNot, kAnd, kOr, kImplies,
    kNext, kAlways, kEventually, kUntil, kRelease,
  };

  static FormulaPtr True();
  static FormulaPtr False();
  static FormulaPtr State(std::string macro);
  static FormulaPtr Event(std::string label);
  static FormulaPtr Not(FormulaPtr f);
  static FormulaPtr And(FormulaPtr a, FormulaPtr b);
  static FormulaPtr Or(FormulaPtr a, FormulaPtr b);
  static FormulaPtr Implies(FormulaPtr a, FormulaPtr b);
  static FormulaPtr Next(FormulaPtr f);
  static FormulaPtr Always(FormulaPtr f);
  static FormulaPtr Eventually(FormulaPtr f);
  static FormulaPtr Until(FormulaPtr a, FormulaPtr b);
  static FormulaPtr Release(FormulaPtr a, FormulaPtr b);

  Op op() const { return op_; }
  const std::string& atom() const { return atom_; }
  const FormulaPtr& lhs() const { return lhs_; }
  const FormulaPtr& rhs() const { return rhs_; }

  bool is_atom() const { return op_ == Op::kState || op_ == Op::kEvent; }
  bool is_literal() const;
  /// Syntax tree depth; atoms and constants have depth 0.
  int depth() const;

  /// Fully parenthesized text in the input syntax; equal text means
  /// structurally equal formulas.
  std::string ToString() const;

  friend bool operator==(const Formula& a, const Formula& b);

 private:
  Formula(Op op, std::string atom, FormulaPtr lhs, FormulaPtr rhs)
      : op_(op), atom_(std::move(atom)), lhs_(std::move(lhs)),
        rhs_(std::move(rhs)) {}

  Op op_;
  std::string atom_;
  FormulaPtr lhs_;
  FormulaPtr rhs_;
};

/// Negation normal form over {true, false, literals, &&, ||, X, U, R}.
FormulaPtr ToNnf(const FormulaPtr& f);

/// Distinct atoms of `f` in first-occurrence order.
std::vector<FormulaPtr> Atoms(const FormulaPtr& f);

/**
 * Parses `G`, `X`, `F`, `U`, `!`, `&&`, `||`, `->`, parentheses, `true`,
 * `false`, bare macro names, and `@label` event atoms such as
 * `@network.ServerFinished.HSTS.Data`. `->` is right-associative and binds
 * weakest; `U` binds tighter than `&&`. Throws Error(kParse).
 */
FormulaPtr ParseFormula(std::string_view text);

/// The five socio-technical requirements, numbered 1..5.
/// Throws Error(kUnknownPropertyId) for any other number.
FormulaPtr Property(int id);

/// The same requirement with `CertificateIsValid` replaced by another
/// validity macro (used for the revocation-aware reading on Safari).
FormulaPtr PropertyWithValidity(int id, const std::string& validity_macro);

}  // namespace ceremony::ltl

#endif /* CEREMONY_LTL_FORMULA_HH_ */
