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

#ifndef CEREMONY_KERNEL_VALUE_HH_
#define CEREMONY_KERNEL_VALUE_HH_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace ceremony::kernel {

/**
 * The closed alphabet of symbolic constants used by ceremony models: protocol
 * messages, user interface objects, and certificate fields. Ordinals follow
 * declaration order, so HelloClient is 0 like any enum in the source models.
 */
enum class Symbol : std::uint8_t {
  HelloClient,
  HelloServer,
  ClientFinished,
  ServerFinished,
  Data,
  Warning,
  Webpage,
  Continue,
  Abort,
  StoreCertificate,
  Pk,
  HSTS,
  No_HSTS,
  S,
  I,
  SignCA,
  SignS,
  SignI,
  expi,
  noexpi,
  revo,
  norevo,
};

inline constexpr std::size_t kSymbolCount = 22;

std::string_view SymbolName(Symbol s);
std::optional<Symbol> SymbolFromName(std::string_view name);

/**
 * Compact encoding of an atomic value (symbol, boolean or small non-negative
 * integer) used inside global states and channel messages.
 */
using AtomCode = std::uint16_t;

/**
 * A model value. Atoms are symbols, booleans and small integers (the only
 * integer that occurs in practice is 0, the default content of arrays).
 * Tuples have fixed arity and atomic components; they appear as whole-array
 * reads and as set elements.
 */
class Value {
 public:
  enum class Kind : std::uint8_t { kSymbol, kBool, kInt, kTuple };

  static constexpr int kMaxInt = (1 << 14) - 1;

  Value() : kind_(Kind::kInt), scalar_(0) {}

  static Value Sym(Symbol s) { return Value(Kind::kSymbol, static_cast<int>(s)); }
  static Value Bool(bool b) { return Value(Kind::kBool, b ? 1 : 0); }
  static Value Int(int i);
  static Value Tuple(std::vector<Value> elems);

  /// Decodes an atom previously produced by Encode().
  static Value Decode(AtomCode code);

  Kind kind() const { return kind_; }
  bool is_atom() const { return kind_ != Kind::kTuple; }
  bool is_bool() const { return kind_ == Kind::kBool; }
  bool is_symbol() const { return kind_ == Kind::kSymbol; }

  Symbol symbol() const;
  bool boolean() const;
  int integer() const;
  const std::vector<Value>& elements() const;

  /// Atoms only.
  AtomCode Encode() const;

  std::string ToString() const;
  std::size_t Hash() const;

  friend bool operator==(const Value& a, const Value& b);
  friend bool operator!=(const Value& a, const Value& b) { return !(a == b); }
  friend bool operator<(const Value& a, const Value& b);
  friend std::ostream& operator<<(std::ostream& os, const Value& v) {
    return os << v.ToString();
  }

 private:
  Value(Kind kind, int scalar) : kind_(kind), scalar_(scalar) {}

  Kind kind_;
  int scalar_;
  std::vector<Value> elems_;
};

inline Value Sym(Symbol s) { return Value::Sym(s); }

}  // namespace ceremony::kernel

#endif /* CEREMONY_KERNEL_VALUE_HH_ */
