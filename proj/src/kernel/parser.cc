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

#include "ceremony/kernel/parser.hh"

#include <cctype>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "ceremony/kernel/error.hh"

namespace ceremony::kernel {

namespace {

enum class Tok {
  kEnd,
  kIdent,
  kInt,
  kDirective,  // `#define`; imports and asserts are dropped by the lexer
  kLBrace, kRBrace, kLParen, kRParen, kLBracket, kRBracket,
  kChoice,     // []
  kInterleave, // |||
  kSemi, kComma, kColon, kAt, kDot, kDotDot, kStar,
  kBang, kQuery, kAssign, kEq, kNe, kAnd, kOr, kArrow, kLess, kGreater,
};

struct Token {
  Tok kind;
  std::string text;
  int line;
  int col;
};

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  std::vector<Token> Run() {
    std::vector<Token> out;
    for (;;) {
      SkipSpace();
      int line = line_, col = col_;
      if (pos_ >= src_.size()) {
        out.push_back({Tok::kEnd, "", line, col});
        return out;
      }
      char c = src_[pos_];
      if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        std::string word;
        while (pos_ < src_.size() &&
               (std::isalnum(static_cast<unsigned char>(src_[pos_])) ||
                src_[pos_] == '_')) {
          word += Advance();
        }
        out.push_back({Tok::kIdent, word, line, col});
        continue;
      }
      if (std::isdigit(static_cast<unsigned char>(c))) {
        std::string num;
        while (pos_ < src_.size() &&
               std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
          num += Advance();
        }
        out.push_back({Tok::kInt, num, line, col});
        continue;
      }
      if (c == '#') {
        Advance();
        std::string word;
        while (pos_ < src_.size() &&
               std::isalpha(static_cast<unsigned char>(src_[pos_]))) {
          word += Advance();
        }
        if (word == "import" || word == "assert") {
          // Assertions are expressed through the ltl module instead.
          while (pos_ < src_.size() && src_[pos_] != ';') Advance();
          if (pos_ < src_.size()) Advance();
          continue;
        }
        if (word != "define") Fail(line, col, "unknown directive #" + word);
        out.push_back({Tok::kDirective, word, line, col});
        continue;
      }
      out.push_back(Punct(line, col));
    }
  }

 private:
  char Advance() {
    char c = src_[pos_++];
    if (c == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    return c;
  }

  bool Next(std::string_view s) const { return src_.substr(pos_, s.size()) == s; }

  void SkipSpace() {
    while (pos_ < src_.size()) {
      if (std::isspace(static_cast<unsigned char>(src_[pos_]))) {
        Advance();
      } else if (Next("//")) {
        while (pos_ < src_.size() && src_[pos_] != '\n') Advance();
      } else if (Next("/*")) {
        while (pos_ < src_.size() && !Next("*/")) Advance();
        if (pos_ < src_.size()) {
          Advance();
          Advance();
        }
      } else {
        return;
      }
    }
  }

  [[noreturn]] static void Fail(int line, int col, const std::string& msg) {
    throw Error(ErrorCode::kParse, std::to_string(line) + ":" +
                                       std::to_string(col) + ": " + msg);
  }

  Token Punct(int line, int col) {
    static const std::pair<std::string_view, Tok> kTable[] = {
        {"|||", Tok::kInterleave}, {"[]", Tok::kChoice}, {"..", Tok::kDotDot},
        {"==", Tok::kEq},          {"!=", Tok::kNe},     {"&&", Tok::kAnd},
        {"||", Tok::kOr},          {"->", Tok::kArrow},  {"{", Tok::kLBrace},
        {"}", Tok::kRBrace},       {"(", Tok::kLParen},  {")", Tok::kRParen},
        {"[", Tok::kLBracket},     {"]", Tok::kRBracket}, {";", Tok::kSemi},
        {",", Tok::kComma},        {":", Tok::kColon},   {"@", Tok::kAt},
        {".", Tok::kDot},          {"*", Tok::kStar},    {"!", Tok::kBang},
        {"?", Tok::kQuery},        {"=", Tok::kAssign},  {"<", Tok::kLess},
        {">", Tok::kGreater},
    };
    for (const auto& [text, kind] : kTable) {
      if (Next(text)) {
        for (std::size_t i = 0; i < text.size(); ++i) Advance();
        return {kind, std::string(text), line, col};
      }
    }
    Fail(line, col, std::string("unexpected character '") + src_[pos_] + "'");
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

/**
 * Recursive-descent parser over the token stream. Name lookups go through
 * `model_`; a `builder_` is present only when parsing a whole model.
 */
class Parser {
 public:
  Parser(std::vector<Token> toks, const ModelDef* model, ModelBuilder* builder)
      : toks_(std::move(toks)), model_(model), builder_(builder) {}

  void ParseProgram() {
    CollectDefinitionNames();
    while (!At(Tok::kEnd)) {
      if (At(Tok::kDirective)) {
        ParseDefine();
      } else if (AtWord("enum")) {
        ParseEnum();
      } else if (AtWord("channel")) {
        ParseChannel();
      } else if (AtWord("var")) {
        ParseVar();
      } else if (At(Tok::kIdent)) {
        ParseDefinition();
      } else {
        Fail("expected a declaration");
      }
    }
  }

  Expr ParseStandaloneExpr() {
    Expr e = ParseOr();
    Expect(Tok::kEnd, "end of expression");
    return e;
  }

  StmtList ParseStandaloneStmts() {
    StmtList out = ParseStmtSeq(Tok::kEnd);
    Expect(Tok::kEnd, "end of statements");
    return out;
  }

 private:
  // -- token helpers --------------------------------------------------------

  const Token& Peek(std::size_t ahead = 0) const {
    std::size_t i = std::min(pos_ + ahead, toks_.size() - 1);
    return toks_[i];
  }
  bool At(Tok k, std::size_t ahead = 0) const { return Peek(ahead).kind == k; }
  bool AtWord(std::string_view w, std::size_t ahead = 0) const {
    return At(Tok::kIdent, ahead) && Peek(ahead).text == w;
  }
  const Token& Take() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }
  bool Accept(Tok k) {
    if (!At(k)) return false;
    Take();
    return true;
  }
  const Token& Expect(Tok k, std::string_view what) {
    if (!At(k)) Fail("expected " + std::string(what));
    return Take();
  }
  std::string ExpectIdent(std::string_view what) {
    return Expect(Tok::kIdent, what).text;
  }

  [[noreturn]] void Fail(const std::string& msg,
                         ErrorCode code = ErrorCode::kParse) const {
    const Token& t = Peek();
    std::string near = t.kind == Tok::kEnd ? "end of input" : "'" + t.text + "'";
    throw Error(code, std::to_string(t.line) + ":" + std::to_string(t.col) +
                          ": " + msg + " near " + near);
  }
  [[noreturn]] void FailAt(const Token& t, const std::string& msg,
                           ErrorCode code) const {
    throw Error(code, std::to_string(t.line) + ":" + std::to_string(t.col) +
                          ": " + msg);
  }

  ModelBuilder& builder() {
    if (!builder_) Fail("process syntax is not allowed here");
    return *builder_;
  }

  // -- definition discovery -------------------------------------------------

  /// `Name =` or `Name(a, b) =` at nesting depth zero, at token `i`.
  bool IsDefinitionStart(std::size_t i) const {
    if (toks_[i].kind != Tok::kIdent) return false;
    std::size_t j = i + 1;
    if (toks_[j].kind == Tok::kLParen) {
      ++j;
      while (toks_[j].kind == Tok::kIdent || toks_[j].kind == Tok::kComma) ++j;
      if (toks_[j].kind != Tok::kRParen) return false;
      ++j;
    }
    return toks_[j].kind == Tok::kAssign;
  }

  void CollectDefinitionNames() {
    int depth = 0;
    for (std::size_t i = 0; i + 1 < toks_.size(); ++i) {
      Tok k = toks_[i].kind;
      if (k == Tok::kLBrace || k == Tok::kLParen) ++depth;
      if (k == Tok::kRBrace || k == Tok::kRParen) --depth;
      bool boundary = i == 0 || toks_[i - 1].kind == Tok::kSemi;
      if (depth == 0 && boundary && IsDefinitionStart(i)) {
        const auto& name = toks_[i].text;
        if (!model_->FindDefinition(name)) builder().DeclareDefinition(name);
      }
    }
  }

  /// True when a `;` at the current position ends a definition body.
  bool SemiEndsDefinition() const {
    const Token& n = Peek(1);
    if (n.kind == Tok::kEnd || n.kind == Tok::kDirective ||
        n.kind == Tok::kRBrace || n.kind == Tok::kRParen) {
      return true;
    }
    if (n.kind == Tok::kIdent &&
        (n.text == "var" || n.text == "channel" || n.text == "enum")) {
      return true;
    }
    return IsDefinitionStart(pos_ + 1);
  }

  // -- declarations ---------------------------------------------------------

  void ParseEnum() {
    Take();
    Expect(Tok::kLBrace, "'{'");
    std::size_t i = 0;
    do {
      std::string name = ExpectIdent("enum constant");
      auto sym = SymbolFromName(name);
      if (!sym || static_cast<std::size_t>(*sym) != i) {
        Fail("enum constant '" + name + "' is not in the ceremony alphabet order");
      }
      ++i;
    } while (Accept(Tok::kComma));
    Expect(Tok::kRBrace, "'}'");
    Expect(Tok::kSemi, "';'");
  }

  void ParseChannel() {
    Take();
    std::string name = ExpectIdent("channel name");
    const Token& size = Expect(Tok::kInt, "channel size");
    if (size.text != "0") {
      FailAt(size, "only synchronous channels (size 0) are supported",
             ErrorCode::kParse);
    }
    Expect(Tok::kSemi, "';'");
    builder().AddChannel(name);
  }

  Value ParseLiteral() {
    const Token& t = Peek();
    if (At(Tok::kInt)) {
      Take();
      return Value::Int(std::stoi(t.text));
    }
    if (AtWord("true") || AtWord("false")) {
      Take();
      return Value::Bool(t.text == "true");
    }
    if (At(Tok::kIdent)) {
      if (auto sym = SymbolFromName(t.text)) {
        Take();
        return Sym(*sym);
      }
    }
    Fail("expected a constant");
  }

  std::vector<Value> ParseLiteralList() {
    Expect(Tok::kLBrace, "'{'");
    std::vector<Value> out;
    if (!At(Tok::kRBrace)) {
      do {
        Value first = ParseLiteral();
        if (Accept(Tok::kDotDot)) {
          Value last = ParseLiteral();
          if (!first.is_symbol() || !last.is_symbol() ||
              last.symbol() < first.symbol()) {
            Fail("invalid constant range");
          }
          for (auto s = static_cast<int>(first.symbol());
               s <= static_cast<int>(last.symbol()); ++s) {
            out.push_back(Sym(static_cast<Symbol>(s)));
          }
        } else {
          out.push_back(std::move(first));
        }
      } while (Accept(Tok::kComma));
    }
    Expect(Tok::kRBrace, "'}'");
    return out;
  }

  void ParseVar() {
    Take();
    if (Accept(Tok::kLess)) {
      std::string kind = ExpectIdent("Set or SetArray");
      Expect(Tok::kGreater, "'>'");
      if (kind != "Set" && kind != "SetArray") Fail("unknown var<> kind");
      std::string name = ExpectIdent("set name");
      if (!At(Tok::kColon)) {
        Fail("set '" + name + "' needs an element universe ': {...}'");
      }
      Take();
      std::vector<std::vector<Value>> factors{ParseLiteralList()};
      while (Accept(Tok::kStar)) factors.push_back(ParseLiteralList());
      std::vector<Value> universe;
      if (kind == "Set" && factors.size() == 1) {
        universe = factors.front();
      } else {
        std::vector<std::vector<Value>> tuples{{}};
        for (const auto& f : factors) {
          std::vector<std::vector<Value>> next;
          for (const auto& prefix : tuples) {
            for (const auto& v : f) {
              next.push_back(prefix);
              next.back().push_back(v);
            }
          }
          tuples = std::move(next);
        }
        for (auto& t : tuples) universe.push_back(Value::Tuple(std::move(t)));
      }
      std::vector<Value> initial;
      if (Accept(Tok::kAssign)) initial = ParseLiteralList();
      Expect(Tok::kSemi, "';'");
      builder().AddSet(name, std::move(universe), initial);
      return;
    }
    std::string name = ExpectIdent("variable name");
    if (Accept(Tok::kLBracket)) {
      const Token& len = Expect(Tok::kInt, "array length");
      Expect(Tok::kRBracket, "']'");
      Value init;
      if (Accept(Tok::kAssign)) init = ParseLiteral();
      Expect(Tok::kSemi, "';'");
      builder().AddArray(name, std::stoul(len.text), init);
      return;
    }
    if (Accept(Tok::kColon)) ParseLiteralList();  // range annotation
    Value init;
    if (Accept(Tok::kAssign)) init = ParseLiteral();
    Expect(Tok::kSemi, "';'");
    builder().AddVar(name, init);
  }

  void ParseDefine() {
    Take();
    std::string name = ExpectIdent("macro name");
    Expr body = ParseOr();
    Expect(Tok::kSemi, "';'");
    builder().AddMacro(name, std::move(body));
  }

  void ParseDefinition() {
    const Token& head = Peek();
    std::string name = Take().text;
    auto id = model_->FindDefinition(name);
    if (!id) Fail("malformed definition of '" + name + "'");
    std::vector<LocalId> params;
    scopes_.clear();
    if (Accept(Tok::kLParen)) {
      if (!At(Tok::kRParen)) {
        do {
          std::string p = ExpectIdent("parameter");
          LocalId l = builder().NewLocal(p);
          params.push_back(l);
          scopes_.emplace_back(p, l);
        } while (Accept(Tok::kComma));
      }
      Expect(Tok::kRParen, "')'");
    }
    Expect(Tok::kAssign, "'='");
    owner_ = *id;
    ProcessPtr body = ParseInterleave();
    Expect(Tok::kSemi, "';' after definition of " + name);
    try {
      builder().DefineBody(*id, std::move(params), std::move(body));
    } catch (const Error& e) {
      FailAt(head, e.what(), e.code());
    }
    scopes_.clear();
  }

  // -- expressions ----------------------------------------------------------

  std::optional<LocalId> LookupLocal(std::string_view name) const {
    for (auto it = scopes_.rbegin(); it != scopes_.rend(); ++it) {
      if (it->first == name) return it->second;
    }
    return std::nullopt;
  }

  Expr ParseOr() {
    Expr e = ParseAnd();
    while (Accept(Tok::kOr)) e = Expr::Binary(BinaryOp::kOr, e, ParseAnd());
    return e;
  }

  Expr ParseAnd() {
    Expr e = ParseEquality();
    while (Accept(Tok::kAnd)) {
      e = Expr::Binary(BinaryOp::kAnd, e, ParseEquality());
    }
    return e;
  }

  Expr ParseEquality() {
    Expr e = ParseUnary();
    for (;;) {
      if (Accept(Tok::kEq)) {
        e = Expr::Binary(BinaryOp::kEq, e, ParseUnary());
      } else if (Accept(Tok::kNe)) {
        e = Expr::Binary(BinaryOp::kNe, e, ParseUnary());
      } else {
        return e;
      }
    }
  }

  Expr ParseUnary() {
    if (Accept(Tok::kBang)) return Expr::Not(ParseUnary());
    return ParsePrimary();
  }

  Expr ParsePrimary() {
    if (Accept(Tok::kLParen)) {
      Expr e = ParseOr();
      Expect(Tok::kRParen, "')'");
      return e;
    }
    if (At(Tok::kInt)) return Expr::Const(ParseLiteral());
    const Token& t = Expect(Tok::kIdent, "an expression");
    const std::string& name = t.text;
    if (name == "true" || name == "false") {
      return Expr::Const(Value::Bool(name == "true"));
    }
    if (auto l = LookupLocal(name)) return Expr::Local(*l);
    if (auto v = model_->FindVar(name)) {
      const VarDecl& d = model_->var(*v);
      if (Accept(Tok::kLBracket)) {
        if (!d.is_array) FailAt(t, "'" + name + "' is not an array",
                                ErrorCode::kTypeMismatch);
        Expr index = ParseOr();
        Expect(Tok::kRBracket, "']'");
        if (const auto* c = std::get_if<ConstExpr>(&index.node())) {
          if (c->value.kind() != Value::Kind::kInt ||
              static_cast<std::size_t>(c->value.integer()) >= d.length) {
            FailAt(t, "index " + c->value.ToString() + " out of range for " +
                          name, ErrorCode::kIndexOutOfRange);
          }
        }
        return Expr::Cell(*v, std::move(index));
      }
      return d.is_array ? Expr::Array(*v) : Expr::Var(*v);
    }
    if (auto s = model_->FindSet(name)) {
      Expect(Tok::kDot, "'.Contains'");
      if (!AtWord("Contains")) Fail("expected Contains");
      Take();
      Expect(Tok::kLParen, "'('");
      Expr elem = ParseOr();
      Expect(Tok::kRParen, "')'");
      return Expr::Contains(*s, std::move(elem));
    }
    if (auto m = model_->FindMacro(name)) return model_->macros()[*m].body;
    if (auto sym = SymbolFromName(name)) return Expr::Const(Sym(*sym));
    FailAt(t, "undeclared name '" + name + "'", ErrorCode::kUndeclaredName);
  }

  // -- statements -----------------------------------------------------------

  StmtList ParseStmtSeq(Tok close) {
    StmtList out;
    while (!At(close)) {
      ParseStmt(&out);
      if (!Accept(Tok::kSemi)) break;
    }
    return out;
  }

  StmtList ParseStmtBlock() {
    Expect(Tok::kLBrace, "'{'");
    StmtList out = ParseStmtSeq(Tok::kRBrace);
    Expect(Tok::kRBrace, "'}'");
    return out;
  }

  struct Target {
    VarId var;
    std::optional<Expr> index;
  };

  Target ParseTarget() {
    const Token& t = Peek();
    std::string name = ExpectIdent("assignment target");
    auto v = model_->FindVar(name);
    if (!v) FailAt(t, "undeclared variable '" + name + "'",
                   ErrorCode::kUndeclaredName);
    const VarDecl& d = model_->var(*v);
    Target target{*v, std::nullopt};
    if (Accept(Tok::kLBracket)) {
      if (!d.is_array) FailAt(t, "'" + name + "' is not an array",
                              ErrorCode::kTypeMismatch);
      target.index = ParseOr();
      Expect(Tok::kRBracket, "']'");
    } else if (d.is_array) {
      FailAt(t, "whole-array assignment to '" + name + "'",
             ErrorCode::kTypeMismatch);
    }
    return target;
  }

  void ParseStmt(StmtList* out) {
    if (AtWord("if")) {
      Take();
      Expect(Tok::kLParen, "'('");
      Expr guard = ParseOr();
      Expect(Tok::kRParen, "')'");
      StmtList then_branch = ParseStmtBlock();
      StmtList else_branch;
      if (AtWord("else")) {
        Take();
        if (AtWord("if")) {
          ParseStmt(&else_branch);
        } else {
          else_branch = ParseStmtBlock();
        }
      }
      out->push_back(Stmt{IfStmt{std::move(guard), std::move(then_branch),
                                 std::move(else_branch)}});
      return;
    }
    if (At(Tok::kIdent) && At(Tok::kDot, 1)) {
      const Token& t = Peek();
      auto s = model_->FindSet(t.text);
      if (!s) FailAt(t, "undeclared set '" + t.text + "'",
                     ErrorCode::kUndeclaredName);
      Take();
      Take();
      if (!AtWord("Add")) Fail("expected Add");
      Take();
      Expect(Tok::kLParen, "'('");
      Expr elem = ParseOr();
      Expect(Tok::kRParen, "')'");
      out->push_back(Stmt{AddStmt{*s, std::move(elem)}});
      return;
    }
    // Chained assignment `a[0]=b[0]=e` assigns e to every target.
    std::vector<Target> targets{ParseTarget()};
    Expect(Tok::kAssign, "'='");
    while (At(Tok::kIdent) && model_->FindVar(Peek().text) && LooksAssigned()) {
      targets.push_back(ParseTarget());
      Expect(Tok::kAssign, "'='");
    }
    Expr value = ParseOr();
    for (auto it = targets.rbegin(); it != targets.rend(); ++it) {
      out->push_back(Stmt{AssignStmt{it->var, std::move(it->index), value}});
    }
  }

  /// At `x =` or `x[...] =`, as opposed to an expression starting with x.
  bool LooksAssigned() const {
    std::size_t i = pos_ + 1;
    if (toks_[i].kind == Tok::kLBracket) {
      int depth = 0;
      for (; i < toks_.size(); ++i) {
        if (toks_[i].kind == Tok::kLBracket) ++depth;
        if (toks_[i].kind == Tok::kRBracket && --depth == 0) break;
      }
      ++i;
    }
    return i < toks_.size() && toks_[i].kind == Tok::kAssign;
  }

  // -- processes ------------------------------------------------------------

  ProcessPtr Make(ProcessExpr::Node node) {
    return MakeProcess(std::move(node), owner_);
  }

  ProcessPtr ParseInterleave() {
    std::vector<ProcessPtr> parts{ParseChoice()};
    while (Accept(Tok::kInterleave)) parts.push_back(ParseChoice());
    if (parts.size() == 1) return parts.front();
    return Make(Interleave{std::move(parts)});
  }

  ProcessPtr ParseChoice() {
    ProcessPtr p = ParseSeq();
    while (At(Tok::kChoice)) {
      Take();
      p = Make(ExternalChoice{p, ParseSeq()});
    }
    return p;
  }

  ProcessPtr ParseSeq() {
    ProcessPtr p = ParsePrefix();
    while (At(Tok::kSemi) && !SemiEndsDefinition()) {
      Take();
      p = Make(Sequential{p, ParsePrefix()});
    }
    return p;
  }

  ProcessPtr ParseBracedProcess() {
    Expect(Tok::kLBrace, "'{'");
    ProcessPtr p = ParseInterleave();
    Expect(Tok::kRBrace, "'}'");
    return p;
  }

  ProcessPtr ParseConditional() {
    bool atomic = Take().text == "ifa";
    Expect(Tok::kLParen, "'('");
    Expr guard = ParseOr();
    Expect(Tok::kRParen, "')'");
    ProcessPtr then_branch = ParseBracedProcess();
    ProcessPtr else_branch;
    if (AtWord("else")) {
      Take();
      else_branch = AtWord("if") || AtWord("ifa") ? ParseConditional()
                                                  : ParseBracedProcess();
    }
    return Make(Conditional{std::move(guard), then_branch, else_branch, atomic});
  }

  ProcessPtr ParseCase() {
    Take();
    Expect(Tok::kLBrace, "'{'");
    std::vector<std::pair<Expr, ProcessPtr>> arms;
    ProcessPtr fallback;
    while (!At(Tok::kRBrace)) {
      if (AtWord("default")) {
        Take();
        Expect(Tok::kColon, "':'");
        fallback = ParseInterleave();
        break;
      }
      Expr guard = ParseOr();
      Expect(Tok::kColon, "':'");
      arms.emplace_back(std::move(guard), ParseInterleave());
    }
    Expect(Tok::kRBrace, "'}'");
    if (arms.empty()) {
      if (!fallback) Fail("empty case");
      return fallback;
    }
    ProcessPtr p = fallback;
    for (auto it = arms.rbegin(); it != arms.rend(); ++it) {
      p = Make(Conditional{it->first, it->second, p, false});
    }
    return p;
  }

  ProcessPtr ParseIndexedChoice() {
    Take();
    std::string binder = ExpectIdent("choice binder");
    Expect(Tok::kColon, "':'");
    std::vector<Value> domain = ParseLiteralList();
    if (domain.empty()) Fail("empty choice domain");
    Expect(Tok::kAt, "'@'");
    LocalId local = builder().NewLocal(binder);
    scopes_.emplace_back(binder, local);
    ProcessPtr body = ParseSeq();
    scopes_.pop_back();
    return Make(IndexedChoice{local, std::move(domain), body});
  }

  /// `{stmts}` (optional) `->` continuation; pops `binders` afterwards.
  std::pair<StmtList, ProcessPtr> ParsePrefixTail(std::size_t binders) {
    StmtList stmts;
    if (At(Tok::kLBrace)) stmts = ParseStmtBlock();
    Expect(Tok::kArrow, "'->'");
    ProcessPtr next = ParsePrefix();
    scopes_.resize(scopes_.size() - binders);
    return {std::move(stmts), next};
  }

  ProcessPtr ParseChannelPrefix(ChannelId channel) {
    if (Accept(Tok::kBang)) {
      std::vector<Expr> values;
      do {
        values.push_back(ParseUnary());
      } while (Accept(Tok::kDot));
      auto [stmts, next] = ParsePrefixTail(0);
      return Make(OutputPrefix{channel, std::move(values), std::move(stmts),
                               next});
    }
    Expect(Tok::kQuery, "'!' or '?'");
    std::vector<InputSlot> slots;
    std::size_t binders = 0;
    do {
      if (At(Tok::kIdent) && !SymbolFromName(Peek().text) &&
          !AtWord("true") && !AtWord("false")) {
        std::string name = Take().text;
        LocalId l = builder().NewLocal(name);
        slots.push_back(InputSlot{l, std::nullopt});
        scopes_.emplace_back(name, l);
        ++binders;
      } else {
        slots.push_back(InputSlot{std::nullopt, Expr::Const(ParseLiteral())});
      }
    } while (Accept(Tok::kDot));
    auto [stmts, next] = ParsePrefixTail(binders);
    return Make(InputPrefix{channel, std::move(slots), std::move(stmts), next});
  }

  ProcessPtr ParsePrefix() {
    if (At(Tok::kLParen)) {
      Take();
      ProcessPtr p = ParseInterleave();
      Expect(Tok::kRParen, "')'");
      return p;
    }
    if (At(Tok::kChoice)) return ParseIndexedChoice();
    if (At(Tok::kLBrace)) {
      auto [stmts, next] = ParsePrefixTail(0);
      return Make(EventPrefix{std::nullopt, std::move(stmts), next});
    }
    const Token& t = Peek();
    if (!At(Tok::kIdent)) Fail("expected a process");
    const std::string& name = t.text;
    if (name == "Stop") {
      Take();
      return Make(StopProc{});
    }
    if (name == "Skip") {
      Take();
      return Make(SkipProc{});
    }
    if (name == "if" || name == "ifa") return ParseConditional();
    if (name == "case") return ParseCase();
    if (name == "tau") {
      Take();
      auto [stmts, next] = ParsePrefixTail(0);
      return Make(EventPrefix{std::nullopt, std::move(stmts), next});
    }
    if (auto ch = model_->FindChannel(name)) {
      Take();
      return ParseChannelPrefix(*ch);
    }
    if (auto def = model_->FindDefinition(name)) {
      Take();
      std::vector<Expr> args;
      if (Accept(Tok::kLParen)) {
        if (!At(Tok::kRParen)) {
          do {
            args.push_back(ParseOr());
          } while (Accept(Tok::kComma));
        }
        Expect(Tok::kRParen, "')'");
      }
      calls_.push_back({t, *def, args.size()});
      return Make(Call{*def, std::move(args)});
    }
    if (At(Tok::kArrow, 1) || At(Tok::kLBrace, 1)) {
      Take();
      if (SymbolFromName(name) || model_->FindVar(name) ||
          model_->FindSet(name) || model_->FindMacro(name)) {
        FailAt(t, "'" + name + "' cannot be used as an event name",
               ErrorCode::kParse);
      }
      EventId ev = builder().InternEvent(name);
      auto [stmts, next] = ParsePrefixTail(0);
      return Make(EventPrefix{ev, std::move(stmts), next});
    }
    FailAt(t, "undeclared process '" + name + "'", ErrorCode::kUndeclaredName);
  }

 public:
  struct PendingCall {
    Token at;
    DefinitionId target;
    std::size_t arity;
  };

  /// Reports calls whose argument count differs from the definition.
  void CheckCallArity() const {
    for (const auto& c : calls_) {
      const auto& def = model_->definition(c.target);
      if (def.params.size() != c.arity) {
        FailAt(c.at,
               "'" + def.name + "' expects " + std::to_string(def.params.size()) +
                   " argument(s), got " + std::to_string(c.arity),
               ErrorCode::kTypeMismatch);
      }
    }
  }

 private:
  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  const ModelDef* model_;
  ModelBuilder* builder_;
  std::vector<std::pair<std::string, LocalId>> scopes_;
  DefinitionId owner_;
  std::vector<PendingCall> calls_;
};

}  // namespace

ModelDef ParseModel(std::string_view source, std::string_view entry) {
  ModelBuilder builder;
  Parser parser(Lexer(source).Run(), &builder.model(), &builder);
  parser.ParseProgram();
  parser.CheckCallArity();
  return std::move(builder).Build(entry);
}

Expr ParseExpr(const ModelDef& model, std::string_view text) {
  Parser parser(Lexer(text).Run(), &model, nullptr);
  return parser.ParseStandaloneExpr();
}

StmtList ParseStmts(const ModelDef& model, std::string_view text) {
  Parser parser(Lexer(text).Run(), &model, nullptr);
  return parser.ParseStandaloneStmts();
}

}  // namespace ceremony::kernel
