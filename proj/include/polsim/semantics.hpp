// Copyright 2026 The polsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <memory>
#include <string>
#include <vector>

#include "polsim/frontend.hpp"
#include "polsim/model.hpp"

namespace polsim {

// ---------------------------------------------------------------------------
// Symbolic set expressions over constraint tuples. The accept / deny parts
// of a policy are kept symbolic until atomization; concrete set evaluation
// is reserved for oracles.
// ---------------------------------------------------------------------------

enum class SetOp {
  Leaf,
  Union,
  Inter,
  Minus,
  OMinus,
  Compl,
  CornerAssert,  // maps an unknown set to the empty set
  CornerDual,    // maps an unknown set to the full domain
};

struct SetExpr;
using SetExprPtr = std::shared_ptr<const SetExpr>;

struct SetExpr {
  SetOp op = SetOp::Leaf;
  ConstraintTuple leaf;
  SetExprPtr left;
  SetExprPtr right;
};

SetExprPtr set_leaf(ConstraintTuple tuple);
SetExprPtr set_node(SetOp op, SetExprPtr left, SetExprPtr right = nullptr);

bool set_contains_ominus(const SetExprPtr& e);

struct SemPair {
  SetExprPtr accept;
  SetExprPtr deny;
};

// ---------------------------------------------------------------------------
// Operations.
// ---------------------------------------------------------------------------

// Eliminates Scoped nodes by pushing the scope tuple inward. Throws
// ScopeOnUnsupportedOperator when a scope sits on a subtraction.
PolicyPtr expand_abbreviations(const PolicyPtr& term,
                               const AttributeSchema& schema);

// Environment-independent semantics of an abbreviation-free term.
SemPair absolute_semantics(const PolicyPtr& term,
                           const AttributeSchema& schema);

// Three-valued decision of an abbreviation-free term under a request.
// Attributes missing from the request read as unknown unless strict is set.
Decision eval_request(const PolicyPtr& term, const Request& request,
                      const AttributeSchema& schema, bool strict = false);

// Resolves a request against the schema: one entry per slot, nullopt for
// unknown. Values outside the domain map to the residual marker when the
// schema carries one.
std::vector<std::optional<std::size_t>> resolve_request(
    const Request& request, const AttributeSchema& schema, bool strict);

// Rendering for reports and debugging.
std::string print_setexpr(const SetExprPtr& e, const AttributeSchema& schema,
                          SymbolTable& symbols);
std::string print_sempair(const SemPair& pair, const AttributeSchema& schema,
                          SymbolTable& symbols);

}  // namespace polsim
