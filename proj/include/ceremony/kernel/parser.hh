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

#ifndef CEREMONY_KERNEL_PARSER_HH_
#define CEREMONY_KERNEL_PARSER_HH_

#include <string_view>

#include "ceremony/kernel/ast.hh"
#include "ceremony/kernel/model.hh"

namespace ceremony::kernel {

/**
 * Parses a model written in the CSP# subset used by ceremony models.
 *
 * Declarations:
 *   enum {...};                      -- must list a prefix of Symbol
 *   channel ui 0;                    -- synchronous only
 *   var x = e;  var x: {S..I} = S;   var a[3];  var a[3] = e;
 *   var<Set> name : {S, I};          -- element universe after the colon
 *   var<SetArray> name : {S,I} * {Pk} * ...;  -- tuple universe (product)
 *   #define Name expr;
 *   Name(p, q) = process;  Name = process;
 *
 * Processes: Stop, Skip, `e{stmts} -> P`, `{stmts} -> P`, `tau{stmts} -> P`,
 * `c!v.v{stmts} -> P`, `c?x.Const{stmts} -> P`, `P [] Q`, `[]x:{..}@P`,
 * `if`/`ifa (g) {P} else {Q}`, `case {g: P ... default: P}`, `P; Q`,
 * `P ||| Q`, `Name()` and `Name`.
 *
 * Comments use `//`. Errors are Error(kParse / kUndeclaredName /
 * kDuplicateDeclaration) with line and column.
 */
ModelDef ParseModel(std::string_view source, std::string_view entry = "Model");

/// Parses an expression against the declarations of `model` (no locals).
Expr ParseExpr(const ModelDef& model, std::string_view text);

/// Parses a statement list such as `preloadedHSTSList.Add(S); preload=true`.
StmtList ParseStmts(const ModelDef& model, std::string_view text);

}  // namespace ceremony::kernel

#endif /* CEREMONY_KERNEL_PARSER_HH_ */
