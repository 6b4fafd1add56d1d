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

#include "polsim/frontend.hpp"

#include <algorithm>

namespace polsim {

// ---------------------------------------------------------------------------
// Symbol table.
// ---------------------------------------------------------------------------

const std::string& SymbolTable::name_for(std::size_t slot, const ValueSet& set) {
  for (const auto& e : entries_)
    if (e.slot == slot && e.set == set) return e.name;
  static const char* pool[] = {"x", "y", "z", "u", "w", "s", "t",
                               "r", "q", "p", "n", "m", "k"};
  constexpr std::size_t pool_size = sizeof(pool) / sizeof(pool[0]);
  std::string name = entries_.size() < pool_size
                         ? pool[entries_.size()]
                         : "e" + std::to_string(entries_.size() - pool_size + 1);
  entries_.push_back(Entry{std::move(name), slot, set});
  return entries_.back().name;
}

// ---------------------------------------------------------------------------
// Schema construction.
// ---------------------------------------------------------------------------

namespace {

struct SchemaCollector {
  std::vector<AttributeSlot> slots;

  std::size_t slot_for(const std::string& attribute) {
    for (std::size_t i = 0; i < slots.size(); ++i)
      if (slots[i].name == attribute) return i;
    slots.push_back(AttributeSlot{attribute, {}});
    return slots.size() - 1;
  }

  void add(const std::string& attribute, const std::string& value) {
    auto& values = slots[slot_for(attribute)].values;
    if (std::find(values.begin(), values.end(), value) == values.end())
      values.push_back(value);
  }

  void walk_condition(const ConditionExpr& expr) {
    if (expr.kind == ConditionExpr::Kind::Predicate) {
      add(expr.attribute, expr.value);
      return;
    }
    for (const auto& child : expr.children) walk_condition(child);
  }

  void walk(const XacmlNode& node) {
    if (node.kind == XacmlKind::Match) {
      add(node.attribute_id, node.value);
      return;
    }
    if (node.kind == XacmlKind::Condition && node.condition) {
      walk_condition(*node.condition);
      return;
    }
    for (const auto& child : node.children) walk(child);
  }
};

}  // namespace

AttributeSchema build_schema(const std::vector<const XacmlNode*>& documents) {
  SchemaCollector collector;
  for (const XacmlNode* doc : documents) collector.walk(*doc);
  for (auto& slot : collector.slots) {
    std::string residual = kResidualMarker;
    while (std::find(slot.values.begin(), slot.values.end(), residual) !=
           slot.values.end())
      residual += "'";
    slot.values.push_back(residual);
  }
  return AttributeSchema(std::move(collector.slots));
}

// ---------------------------------------------------------------------------
// Combining algorithms.
// ---------------------------------------------------------------------------

namespace {

PolicyPtr fold_chain(PolicyKind kind, const std::vector<PolicyPtr>& terms) {
  PolicyPtr acc = terms.front();
  for (std::size_t i = 1; i < terms.size(); ++i)
    acc = mk_binary(kind, acc, terms[i]);
  return acc;
}

PolicyPtr choice_chain(const std::vector<PolicyPtr>& terms) {
  return fold_chain(PolicyKind::Choice, terms);
}

}  // namespace

PolicyPtr encode_combiner(Combiner alg, const std::vector<PolicyPtr>& terms) {
  if (terms.empty()) {
    throw Error(ErrorKind::InternalInconsistency,
                "combining algorithm over no policies");
  }
  switch (alg) {
    case Combiner::PermitOverrides:
      return fold_chain(PolicyKind::PermitOv, terms);
    case Combiner::DenyOverrides:
      return fold_chain(PolicyKind::DenyOv, terms);
    case Combiner::FirstApplicable:
      return fold_chain(PolicyKind::Seq, terms);
    case Combiner::DenyUnlessPermit:
      return mk_unary(PolicyKind::Assert,
                      fold_chain(PolicyKind::PermitOv, terms));
    case Combiner::PermitUnlessDeny:
      return mk_unary(PolicyKind::Assert, fold_chain(PolicyKind::DenyOv, terms));
    case Combiner::OnlyOneApplicable: {
      if (terms.size() == 1) return terms.front();
      std::vector<PolicyPtr> parts;
      parts.reserve(terms.size());
      for (std::size_t j = 0; j < terms.size(); ++j) {
        std::vector<PolicyPtr> others;
        for (std::size_t i = 0; i < terms.size(); ++i)
          if (i != j) others.push_back(terms[i]);
        parts.push_back(
            mk_binary(PolicyKind::OMinus, terms[j], choice_chain(others)));
      }
      return choice_chain(parts);
    }
    case Combiner::OrderedPermitOverrides:
      throw Error(ErrorKind::UnsupportedCombiner, "ordered-permit-overrides");
  }
  throw Error(ErrorKind::UnknownCombiner, "unhandled combining algorithm");
}

// ---------------------------------------------------------------------------
// XACML -> SePL transformation.
// ---------------------------------------------------------------------------

namespace {

bool supported_match_function(const std::string& fn) {
  return name_equals(fn, "string-equal") || name_equals(fn, "string-at-least");
}

ValueSet singleton(const AttributeSchema& schema, std::size_t slot,
                   const std::string& value) {
  auto idx = schema.value_index(slot, value);
  if (!idx) {
    throw Error(ErrorKind::SchemaMismatch,
                "value '" + value + "' is not in the domain of " +
                    schema.slot(slot).name);
  }
  ValueSet set(schema.slot(slot).values.size());
  set.insert(*idx);
  return set;
}

std::size_t slot_of(const AttributeSchema& schema, const std::string& attr) {
  auto slot = schema.slot_index(attr);
  if (!slot) throw Error(ErrorKind::UnboundAttribute, attr);
  return *slot;
}

// An AllOf groups match predicates: same-attribute matches widen the slot's
// value set, different attributes restrict further slots.
ConstraintTuple all_of_tuple(const XacmlNode& all_of,
                             const AttributeSchema& schema) {
  std::vector<bool> restricted(schema.arity(), false);
  ConstraintTuple tuple = ConstraintTuple::top(schema);
  for (const auto& match : all_of.children) {
    if (!supported_match_function(match.match_id))
      throw Error(ErrorKind::UnsupportedMatchFunction, match.match_id);
    std::size_t slot = slot_of(schema, match.attribute_id);
    ValueSet set = singleton(schema, slot, match.value);
    if (!restricted[slot]) {
      restricted[slot] = true;
      tuple.component(slot) = set;
    } else {
      tuple.component(slot) = tuple.component(slot).unite(set);
    }
  }
  return tuple;
}

// Target: AllOf blocks under one AnyOf are united, AnyOf siblings are
// intersected.
ConstraintTuple target_tuple(const XacmlNode& target,
                             const AttributeSchema& schema) {
  ConstraintTuple result = ConstraintTuple::top(schema);
  for (const auto& any_of : target.children) {
    ConstraintTuple any_tuple = ConstraintTuple::bottom(schema);
    bool first = true;
    for (const auto& all_of : any_of.children) {
      ConstraintTuple t = all_of_tuple(all_of, schema);
      any_tuple = first ? t : any_tuple.unite(t);
      first = false;
    }
    result = result.intersect(any_tuple);
  }
  return result;
}

constexpr std::size_t kMaxConditionDisjuncts = 4096;

// Condition bodies normalize to a union of constraint tuples. Negation is
// pushed to the predicates, where it becomes a domain complement.
std::vector<ConstraintTuple> condition_tuples(const ConditionExpr& expr,
                                              bool negated,
                                              const AttributeSchema& schema) {
  switch (expr.kind) {
    case ConditionExpr::Kind::Predicate: {
      if (!supported_match_function(expr.function))
        throw Error(ErrorKind::UnsupportedMatchFunction, expr.function);
      std::size_t slot = slot_of(schema, expr.attribute);
      ValueSet set = singleton(schema, slot, expr.value);
      if (negated) set = set.complement();
      ConstraintTuple tuple = ConstraintTuple::top(schema);
      tuple.component(slot) = set;
      return {tuple};
    }
    case ConditionExpr::Kind::Not:
      return condition_tuples(expr.children.front(), !negated, schema);
    case ConditionExpr::Kind::And:
    case ConditionExpr::Kind::Or: {
      bool conjunction = (expr.kind == ConditionExpr::Kind::And) != negated;
      std::vector<ConstraintTuple> acc;
      bool first = true;
      for (const auto& child : expr.children) {
        std::vector<ConstraintTuple> part =
            condition_tuples(child, negated, schema);
        if (first) {
          acc = std::move(part);
          first = false;
          continue;
        }
        if (conjunction) {
          std::vector<ConstraintTuple> merged;
          merged.reserve(acc.size() * part.size());
          for (const auto& a : acc)
            for (const auto& b : part) merged.push_back(a.intersect(b));
          acc = std::move(merged);
        } else {
          acc.insert(acc.end(), part.begin(), part.end());
        }
        if (acc.size() > kMaxConditionDisjuncts)
          throw Error(ErrorKind::GrammarViolation, "condition is too large");
      }
      return acc;
    }
  }
  throw Error(ErrorKind::InternalInconsistency, "bad condition expression");
}

PolicyPtr rule_to_sepl(const XacmlNode& rule, const AttributeSchema& schema) {
  ConstraintTuple target = ConstraintTuple::top(schema);
  std::vector<ConstraintTuple> regions = {ConstraintTuple::top(schema)};
  for (const auto& child : rule.children) {
    if (child.kind == XacmlKind::Target) {
      target = target_tuple(child, schema);
    } else if (child.kind == XacmlKind::Condition && child.condition) {
      regions = condition_tuples(*child.condition, false, schema);
    }
  }

  const bool permit = rule.effect == Effect::Permit;
  const ConstraintTuple bottom = ConstraintTuple::bottom(schema);
  std::vector<PolicyPtr> parts;
  parts.reserve(regions.size());
  for (const auto& region : regions) {
    ConstraintTuple phi = target.intersect(region);
    parts.push_back(permit ? mk_rule(phi, bottom) : mk_rule(bottom, phi));
  }
  if (parts.size() == 1) return parts.front();
  // A rule whose condition is a union of regions becomes a chain that keeps
  // the single effect.
  return fold_chain(permit ? PolicyKind::PermitOv : PolicyKind::DenyOv, parts);
}

}  // namespace

PolicyPtr to_sepl(const XacmlNode& node, const AttributeSchema& schema) {
  switch (node.kind) {
    case XacmlKind::Rule:
      return rule_to_sepl(node, schema);
    case XacmlKind::Policy:
    case XacmlKind::PolicySet: {
      ConstraintTuple target = ConstraintTuple::top(schema);
      std::vector<PolicyPtr> parts;
      for (const auto& child : node.children) {
        if (child.kind == XacmlKind::Target)
          target = target_tuple(child, schema);
        else if (child.kind == XacmlKind::Rule ||
                 child.kind == XacmlKind::Policy)
          parts.push_back(to_sepl(child, schema));
      }
      if (parts.empty()) {
        throw Error(ErrorKind::GrammarViolation,
                    "policy without rules or sub-policies");
      }
      PolicyPtr combined = encode_combiner(
          node.combiner.value_or(Combiner::FirstApplicable), parts);
      if (target.unrestricted()) return combined;
      return mk_scoped(std::move(target), std::move(combined));
    }
    default:
      throw Error(ErrorKind::InternalInconsistency,
                  "to_sepl expects a Policy, PolicySet or Rule node");
  }
}

// ---------------------------------------------------------------------------
// Canonical printing.
// ---------------------------------------------------------------------------

std::string print_tuple(const ConstraintTuple& tuple,
                        [[maybe_unused]] const AttributeSchema& schema,
                        SymbolTable& symbols) {
  if (tuple.empty_as_set()) return "⊥";  // bottom
  if (tuple.unrestricted()) return "()";
  std::string out = "(";
  bool first = true;
  for (std::size_t i = 0; i < tuple.arity(); ++i) {
    const ValueSet& set = tuple.component(i);
    if (set.full()) continue;
    if (!first) out += ",";
    out += symbols.name_for(i, set);
    first = false;
  }
  out += ")";
  return out;
}

namespace {

// Name assignment follows reading order, so subterms print left to right
// through explicit sequencing.
std::string print_rec(const PolicyPtr& p, const AttributeSchema& schema,
                      SymbolTable& symbols) {
  switch (p->kind) {
    case PolicyKind::Empty: return "ε";
    case PolicyKind::DenyAll: return "0";
    case PolicyKind::PermitAll: return "1";
    case PolicyKind::Rule: {
      std::string first = print_tuple(p->phi1, schema, symbols);
      std::string second = print_tuple(p->phi2, schema, symbols);
      return "(" + first + "," + second + ")";
    }
    case PolicyKind::Neg:
      return "¬" + print_rec(p->left, schema, symbols);
    case PolicyKind::Assert:
      return "⌐" + print_rec(p->left, schema, symbols);
    case PolicyKind::Scoped: {
      std::string scope = print_tuple(p->phi1, schema, symbols);
      return scope + ":" + print_rec(p->left, schema, symbols);
    }
    default: {
      const char* op = nullptr;
      switch (p->kind) {
        case PolicyKind::Seq: op = "."; break;
        case PolicyKind::PermitOv: op = "⌊⌊"; break;
        case PolicyKind::DenyOv: op = "⌋⌋"; break;
        case PolicyKind::Par: op = "∥"; break;
        case PolicyKind::Choice: op = "+"; break;
        case PolicyKind::Minus: op = "-"; break;
        case PolicyKind::OMinus: op = "⊖"; break;
        default:
          throw Error(ErrorKind::InternalInconsistency, "bad policy kind");
      }
      std::string left = print_rec(p->left, schema, symbols);
      std::string right = print_rec(p->right, schema, symbols);
      return "(" + left + op + right + ")";
    }
  }
}

}  // namespace

std::string print_policy(const PolicyPtr& term, const AttributeSchema& schema,
                         SymbolTable& symbols) {
  return print_rec(term, schema, symbols);
}

}  // namespace polsim
