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

#include "ceremony/kernel/value.hh"

#include <array>
#include <functional>

#include "ceremony/kernel/error.hh"

namespace ceremony {

std::string_view ToString(ErrorCode code) {
  switch (code) {
    case ErrorCode::kParse: return "ParseError";
    case ErrorCode::kUndeclaredName: return "UndeclaredName";
    case ErrorCode::kDuplicateDeclaration: return "DuplicateDeclaration";
    case ErrorCode::kIndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::kTypeMismatch: return "TypeMismatch";
    case ErrorCode::kOutsideUniverse: return "OutsideUniverse";
    case ErrorCode::kCapacityExceeded: return "CapacityExceeded";
    case ErrorCode::kUnguardedRecursion: return "UnguardedRecursion";
    case ErrorCode::kStateLimitExceeded: return "StateLimitExceeded";
    case ErrorCode::kUnboundMacro: return "UnboundMacro";
    case ErrorCode::kTruncatedSystem: return "TruncatedSystem";
    case ErrorCode::kUnknownPropertyId: return "UnknownPropertyId";
    case ErrorCode::kInvalidScenario: return "InvalidScenario";
    case ErrorCode::kNonReplayableTrace: return "NonReplayableTrace";
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
  }
  return "Error";
}

}  // namespace ceremony

namespace ceremony::kernel {

namespace {

constexpr std::array<std::string_view, kSymbolCount> kSymbolNames = {
    "HelloClient", "HelloServer", "ClientFinished", "ServerFinished",
    "Data",        "Warning",     "Webpage",        "Continue",
    "Abort",       "StoreCertificate", "Pk",        "HSTS",
    "No_HSTS",     "S",           "I",              "SignCA",
    "SignS",       "SignI",       "expi",           "noexpi",
    "revo",        "norevo",
};

constexpr unsigned kKindShift = 14;
constexpr AtomCode kPayloadMask = (1U << kKindShift) - 1;

}  // namespace

std::string_view SymbolName(Symbol s) {
  return kSymbolNames[static_cast<std::size_t>(s)];
}

std::optional<Symbol> SymbolFromName(std::string_view name) {
  for (std::size_t i = 0; i < kSymbolNames.size(); ++i) {
    if (kSymbolNames[i] == name) return static_cast<Symbol>(i);
  }
  return std::nullopt;
}

Value Value::Int(int i) {
  if (i < 0 || i > kMaxInt) {
    throw Error(ErrorCode::kTypeMismatch,
                "integer " + std::to_string(i) + " outside supported range");
  }
  return Value(Kind::kInt, i);
}

Value Value::Tuple(std::vector<Value> elems) {
  for (const auto& e : elems) {
    if (!e.is_atom()) {
      throw Error(ErrorCode::kTypeMismatch, "tuple components must be atoms");
    }
  }
  Value v(Kind::kTuple, static_cast<int>(elems.size()));
  v.elems_ = std::move(elems);
  return v;
}

Value Value::Decode(AtomCode code) {
  auto kind = static_cast<Kind>(code >> kKindShift);
  return Value(kind, code & kPayloadMask);
}

AtomCode Value::Encode() const {
  if (kind_ == Kind::kTuple) {
    throw Error(ErrorCode::kTypeMismatch,
                "tuple " + ToString() + " used where an atom is required");
  }
  return static_cast<AtomCode>((static_cast<unsigned>(kind_) << kKindShift) |
                               static_cast<unsigned>(scalar_));
}

Symbol Value::symbol() const {
  if (kind_ != Kind::kSymbol) {
    throw Error(ErrorCode::kTypeMismatch, ToString() + " is not a symbol");
  }
  return static_cast<Symbol>(scalar_);
}

bool Value::boolean() const {
  if (kind_ != Kind::kBool) {
    throw Error(ErrorCode::kTypeMismatch, ToString() + " is not a boolean");
  }
  return scalar_ != 0;
}

int Value::integer() const {
  if (kind_ != Kind::kInt) {
    throw Error(ErrorCode::kTypeMismatch, ToString() + " is not an integer");
  }
  return scalar_;
}

const std::vector<Value>& Value::elements() const {
  if (kind_ != Kind::kTuple) {
    throw Error(ErrorCode::kTypeMismatch, ToString() + " is not a tuple");
  }
  return elems_;
}

std::string Value::ToString() const {
  switch (kind_) {
    case Kind::kSymbol:
      return std::string(SymbolName(static_cast<Symbol>(scalar_)));
    case Kind::kBool:
      return scalar_ ? "true" : "false";
    case Kind::kInt:
      return std::to_string(scalar_);
    case Kind::kTuple: {
      std::string out = "(";
      for (std::size_t i = 0; i < elems_.size(); ++i) {
        if (i) out += ",";
        out += elems_[i].ToString();
      }
      return out + ")";
    }
  }
  return "?";
}

std::size_t Value::Hash() const {
  std::size_t h = std::hash<int>()(static_cast<int>(kind_) * 131 + scalar_);
  for (const auto& e : elems_) h = h * 1000003U ^ e.Hash();
  return h;
}

bool operator==(const Value& a, const Value& b) {
  return a.kind_ == b.kind_ && a.scalar_ == b.scalar_ && a.elems_ == b.elems_;
}

bool operator<(const Value& a, const Value& b) {
  if (a.kind_ != b.kind_) return a.kind_ < b.kind_;
  if (a.scalar_ != b.scalar_) return a.scalar_ < b.scalar_;
  return a.elems_ < b.elems_;
}

}  // namespace ceremony::kernel
