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

#include "polsim/semantics.hpp"

#include <set>

namespace polsim {

SetExprPtr set_leaf(ConstraintTuple tuple) {
  auto e = std::make_shared<SetExpr>();
  e->op = SetOp::Leaf;
  e->leaf = std::move(tuple);
  return e;
}

SetExprPtr set_node(SetOp op, SetExprPtr left, SetExprPtr right) {
  auto e = std::make_shared<SetExpr>();
  e->op = op;
  e->left = std::move(left);
  e->right = std::move(right);
  return e;
}

namespace {

bool contains_ominus_rec(const SetExprPtr& e,
                         std::set<const SetExpr*>& visited) {
  if (!e || !visited.insert(e.get()).second) return false;
  if (e->op == SetOp::OMinus) return true;
  return contains_ominus_rec(e->left, visited) ||
         contains_ominus_rec(e->right, visited);
}

}  // namespace

bool set_contains_ominus(const SetExprPtr& e) {
  std::set<const SetExpr*> visited;
  return contains_ominus_rec(e, visited);
}

// ---------------------------------------------------------------------------
// Abbreviation expansion.
// ---------------------------------------------------------------------------

namespace {

PolicyPtr push_scope(const ConstraintTuple& scope, const PolicyPtr& p,
                     const AttributeSchema& schema) {
  switch (p->kind) {
    case PolicyKind::Empty:
      return p;
    case PolicyKind::PermitAll:
      return mk_rule(scope, ConstraintTuple::bottom(schema));
    case PolicyKind::DenyAll:
      return mk_rule(ConstraintTuple::bottom(schema), scope);
    case PolicyKind::Rule:
      return mk_rule(scope.intersect(p->phi1), scope.intersect(p->phi2));
    case PolicyKind::Neg:
      return mk_unary(PolicyKind::Neg,
                      push_scope(tuple_complement(scope, schema), p->left,
                                 schema));
    case PolicyKind::Assert:
      return mk_unary(PolicyKind::Assert, push_scope(scope, p->left, schema));
    case PolicyKind::Par:
    case PolicyKind::Choice:
    case PolicyKind::OMinus:
    // Sequencing and the override operators distribute the scope as well:
    // their accept / deny parts are unions, intersections and differences,
    // all of which commute with restricting both components to the scope.
    case PolicyKind::Seq:
    case PolicyKind::PermitOv:
    case PolicyKind::DenyOv:
      return mk_binary(p->kind, push_scope(scope, p->left, schema),
                       push_scope(scope, p->right, schema));
    case PolicyKind::Minus:
      throw Error(ErrorKind::ScopeOnUnsupportedOperator,
                  "scope over policy subtraction");
    case PolicyKind::Scoped:
      return push_scope(scope, push_scope(p->phi1, p->left, schema), schema);
  }
  throw Error(ErrorKind::InternalInconsistency, "bad policy kind");
}

}  // namespace

PolicyPtr expand_abbreviations(const PolicyPtr& term,
                               const AttributeSchema& schema) {
  switch (term->kind) {
    case PolicyKind::Empty:
    case PolicyKind::DenyAll:
    case PolicyKind::PermitAll:
    case PolicyKind::Rule:
      return term;
    case PolicyKind::Neg:
    case PolicyKind::Assert:
      return mk_unary(term->kind, expand_abbreviations(term->left, schema));
    case PolicyKind::Scoped:
      return push_scope(term->phi1, expand_abbreviations(term->left, schema),
                        schema);
    default:
      return mk_binary(term->kind, expand_abbreviations(term->left, schema),
                       expand_abbreviations(term->right, schema));
  }
}

// ---------------------------------------------------------------------------
// Absolute semantics.
// ---------------------------------------------------------------------------

namespace {

SetExprPtr corner(SetExprPtr e) {
  // The assertion corner only matters on sets that can be unknown, which
  // requires an overlap subtraction somewhere below.
  if (!set_contains_ominus(e)) return e;
  return set_node(SetOp::CornerAssert, std::move(e));
}

}  // namespace

SemPair absolute_semantics(const PolicyPtr& term,
                           const AttributeSchema& schema) {
  switch (term->kind) {
    case PolicyKind::Empty:
      return {set_leaf(ConstraintTuple::bottom(schema)),
              set_leaf(ConstraintTuple::bottom(schema))};
    case PolicyKind::DenyAll:
      return {set_leaf(ConstraintTuple::bottom(schema)),
              set_leaf(ConstraintTuple::top(schema))};
    case PolicyKind::PermitAll:
      return {set_leaf(ConstraintTuple::top(schema)),
              set_leaf(ConstraintTuple::bottom(schema))};
    case PolicyKind::Rule: {
      SetExprPtr bottom = set_leaf(ConstraintTuple::bottom(schema));
      if (term->phi2.empty_as_set())
        return {set_leaf(term->phi1), bottom};
      if (term->phi1.empty_as_set())
        return {bottom, set_leaf(term->phi2)};
      return {set_node(SetOp::Minus, set_leaf(term->phi1), set_leaf(term->phi2)),
              set_node(SetOp::Minus, set_leaf(term->phi2), set_leaf(term->phi1))};
    }
    case PolicyKind::Neg: {
      SemPair s = absolute_semantics(term->left, schema);
      return {s.deny, s.accept};
    }
    case PolicyKind::Assert: {
      SemPair s = absolute_semantics(term->left, schema);
      return {corner(s.accept), corner(s.deny)};
    }
    case PolicyKind::Scoped:
      throw Error(ErrorKind::InternalInconsistency,
                  "absolute_semantics requires an abbreviation-free term");
    default:
      break;
  }

  SemPair l = absolute_semantics(term->left, schema);
  SemPair r = absolute_semantics(term->right, schema);
  auto u = [](SetExprPtr a, SetExprPtr b) {
    return set_node(SetOp::Union, std::move(a), std::move(b));
  };
  auto n = [](SetExprPtr a, SetExprPtr b) {
    return set_node(SetOp::Inter, std::move(a), std::move(b));
  };
  auto m = [](SetExprPtr a, SetExprPtr b) {
    return set_node(SetOp::Minus, std::move(a), std::move(b));
  };
  switch (term->kind) {
    case PolicyKind::Seq:
      return {u(l.accept, m(r.accept, l.deny)), u(l.deny, m(r.deny, l.accept))};
    case PolicyKind::PermitOv:
      return {u(l.accept, r.accept),
              u(m(l.deny, r.accept), m(r.deny, l.accept))};
    case PolicyKind::DenyOv:
      return {u(m(l.accept, r.deny), m(r.accept, l.deny)),
              u(l.deny, r.deny)};
    case PolicyKind::Par:
      return {n(l.accept, r.accept), n(l.deny, r.deny)};
    case PolicyKind::Choice:
      return {m(u(l.accept, r.accept), u(l.deny, r.deny)),
              m(u(l.deny, r.deny), u(l.accept, r.accept))};
    case PolicyKind::Minus:
      return {m(l.accept, u(r.accept, r.deny)),
              m(l.deny, u(r.accept, r.deny))};
    case PolicyKind::OMinus:
      return {set_node(SetOp::OMinus, l.accept, u(r.accept, r.deny)),
              set_node(SetOp::OMinus, l.deny, u(r.accept, r.deny))};
    default:
      throw Error(ErrorKind::InternalInconsistency, "bad policy kind");
  }
}

// ---------------------------------------------------------------------------
// Relative semantics.
// ---------------------------------------------------------------------------

std::vector<std::optional<std::size_t>> resolve_request(
    const Request& request, const AttributeSchema& schema, bool strict) {
  std::vector<std::optional<std::size_t>> resolved(schema.arity());
  for (std::size_t i = 0; i < schema.arity(); ++i) {
    const auto& slot = schema.slot(i);
    auto it = request.bindings.find(slot.name);
    if (it == request.bindings.end() || !it->second.has_value()) {
      if (strict && it == request.bindings.end())
        throw Error(ErrorKind::UnboundAttribute, slot.name);
      resolved[i] = std::nullopt;
      continue;
    }
    auto idx = schema.value_index(i, *it->second);
    if (!idx) {
      // Unmentioned values stand for the residual marker.
      if (!slot.values.empty() &&
          slot.values.back().rfind(kResidualMarker, 0) == 0) {
        idx = slot.values.size() - 1;
      } else {
        throw Error(ErrorKind::SchemaMismatch,
                    "value '" + *it->second + "' not in the domain of " +
                        slot.name);
      }
    }
    resolved[i] = idx;
  }
  return resolved;
}

namespace {

Tri eval_component(const ValueSet& d, const std::optional<std::size_t>& v) {
  if (d.full()) return Tri::True;
  if (d.empty()) return Tri::False;
  if (!v.has_value()) return Tri::Unknown;
  return d.contains(*v) ? Tri::True : Tri::False;
}

Tri eval_tuple(const ConstraintTuple& t,
               const std::vector<std::optional<std::size_t>>& env) {
  Tri acc = Tri::True;
  for (std::size_t i = 0; i < t.arity(); ++i)
    acc = tri_and(acc, eval_component(t.component(i), env[i]));
  return acc;
}

Decision eval_rec(const PolicyPtr& p,
                  const std::vector<std::optional<std::size_t>>& env) {
  switch (p->kind) {
    case PolicyKind::Empty: return {Tri::False, Tri::False};
    case PolicyKind::DenyAll: return {Tri::False, Tri::True};
    case PolicyKind::PermitAll: return {Tri::True, Tri::False};
    case PolicyKind::Rule: {
      Tri a = eval_tuple(p->phi1, env);
      Tri d = eval_tuple(p->phi2, env);
      return {tri_minus(a, d), tri_minus(d, a)};
    }
    case PolicyKind::Neg: {
      Decision s = eval_rec(p->left, env);
      return {s.deny, s.permit};
    }
    case PolicyKind::Assert: {
      Decision s = eval_rec(p->left, env);
      return {tri_assert(s.permit), tri_assert(s.deny)};
    }
    case PolicyKind::Scoped:
      throw Error(ErrorKind::InternalInconsistency,
                  "eval_request requires an abbreviation-free term");
    default:
      break;
  }
  Decision l = eval_rec(p->left, env);
  Decision r = eval_rec(p->right, env);
  switch (p->kind) {
    case PolicyKind::Seq:
      return {tri_or(l.permit, tri_minus(r.permit, l.deny)),
              tri_or(l.deny, tri_minus(r.deny, l.permit))};
    case PolicyKind::PermitOv:
      return {tri_or(l.permit, r.permit),
              tri_or(tri_minus(l.deny, r.permit), tri_minus(r.deny, l.permit))};
    case PolicyKind::DenyOv:
      return {tri_or(tri_minus(l.permit, r.deny), tri_minus(r.permit, l.deny)),
              tri_or(l.deny, r.deny)};
    case PolicyKind::Par:
      return {tri_and(l.permit, r.permit), tri_and(l.deny, r.deny)};
    case PolicyKind::Choice: {
      Tri accepts = tri_or(l.permit, r.permit);
      Tri denies = tri_or(l.deny, r.deny);
      return {tri_minus(accepts, denies), tri_minus(denies, accepts)};
    }
    case PolicyKind::Minus: {
      Tri applicable = tri_or(r.permit, r.deny);
      return {tri_minus(l.permit, applicable), tri_minus(l.deny, applicable)};
    }
    case PolicyKind::OMinus: {
      Tri applicable = tri_or(r.permit, r.deny);
      return {tri_ominus(l.permit, applicable), tri_ominus(l.deny, applicable)};
    }
    default:
      throw Error(ErrorKind::InternalInconsistency, "bad policy kind");
  }
}

}  // namespace

Decision eval_request(const PolicyPtr& term, const Request& request,
                      const AttributeSchema& schema, bool strict) {
  return eval_rec(term, resolve_request(request, schema, strict));
}

// ---------------------------------------------------------------------------
// Rendering.
// ---------------------------------------------------------------------------

namespace {

std::string print_leaf_tuple(const ConstraintTuple& t,
                             [[maybe_unused]] const AttributeSchema& schema,
                             SymbolTable& symbols) {
  if (t.all_components_empty()) return "F" + std::to_string(t.arity());
  if (t.unrestricted()) return "T" + std::to_string(t.arity());
  std::string out = "(";
  for (std::size_t i = 0; i < t.arity(); ++i) {
    if (i) out += ", ";
    const ValueSet& set = t.component(i);
    if (set.full()) out += "T";
    else if (set.empty()) out += "F";
    else out += symbols.name_for(i, set);
  }
  return out + ")";
}

std::string print_set_rec(const SetExprPtr& e, const AttributeSchema& schema,
                          SymbolTable& symbols, bool parens) {
  switch (e->op) {
    case SetOp::Leaf:
      return print_leaf_tuple(e->leaf, schema, symbols);
    case SetOp::Compl:
      return "!" + print_set_rec(e->left, schema, symbols, true);
    case SetOp::CornerAssert:
      return "⌐" + print_set_rec(e->left, schema, symbols, true);
    case SetOp::CornerDual:
      return print_set_rec(e->left, schema, symbols, true) + "⌝";
    default: {
      const char* op = e->op == SetOp::Union   ? " | "
                       : e->op == SetOp::Inter ? " & "
                       : e->op == SetOp::Minus ? " - "
                                               : " ⊖ ";
      std::string left = print_set_rec(e->left, schema, symbols, true);
      std::string right = print_set_rec(e->right, schema, symbols, true);
      std::string body = left + op + right;
      return parens ? "(" + body + ")" : body;
    }
  }
}

}  // namespace

std::string print_setexpr(const SetExprPtr& e, const AttributeSchema& schema,
                          SymbolTable& symbols) {
  return print_set_rec(e, schema, symbols, false);
}

std::string print_sempair(const SemPair& pair, const AttributeSchema& schema,
                          SymbolTable& symbols) {
  std::string accept = print_setexpr(pair.accept, schema, symbols);
  std::string deny = print_setexpr(pair.deny, schema, symbols);
  return "(" + accept + ", " + deny + ")";
}

}  // namespace polsim
