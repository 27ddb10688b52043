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

#ifndef CEREMONY_KERNEL_FORMAT_HH_
#define CEREMONY_KERNEL_FORMAT_HH_

#include <functional>
#include <optional>
#include <string>

#include "ceremony/kernel/ast.hh"
#include "ceremony/kernel/model.hh"

namespace ceremony::kernel {

/// Resolves a local to its bound value; nullopt prints the binder name.
using LocalLookup = std::function<std::optional<Value>(LocalId)>;

std::string FormatExpr(const ModelDef& model, const Expr& e,
                       const LocalLookup& lookup = nullptr);
std::string FormatStmts(const ModelDef& model, const StmtList& stmts,
                        const LocalLookup& lookup = nullptr);
std::string FormatProcess(const ModelDef& model, const ProcessExpr& p,
                          const LocalLookup& lookup = nullptr);

/// `name=value` pairs of every cell and set of `state`, in declaration order.
std::string FormatGlobals(const ModelDef& model, const GlobalState& state);

}  // namespace ceremony::kernel

#endif /* CEREMONY_KERNEL_FORMAT_HH_ */
