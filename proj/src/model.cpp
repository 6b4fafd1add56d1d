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

#include "polsim/model.hpp"

#include <algorithm>

namespace polsim {

const char kResidualMarker[] = "<other>";

const char* error_kind_name(ErrorKind k) {
  switch (k) {
    case ErrorKind::XmlSyntax: return "XmlSyntax";
    case ErrorKind::GrammarViolation: return "GrammarViolation";
    case ErrorKind::UnknownCombiner: return "UnknownCombiner";
    case ErrorKind::UnsupportedCombiner: return "UnsupportedCombiner";
    case ErrorKind::UnsupportedMatchFunction: return "UnsupportedMatchFunction";
    case ErrorKind::UnboundAttribute: return "UnboundAttribute";
    case ErrorKind::SchemaMismatch: return "SchemaMismatch";
    case ErrorKind::ArityMismatch: return "ArityMismatch";
    case ErrorKind::ScopeOnUnsupportedOperator:
      return "ScopeOnUnsupportedOperator";
    case ErrorKind::IndeterminateUnsupported: return "IndeterminateUnsupported";
    case ErrorKind::InternalInconsistency: return "InternalInconsistency";
    case ErrorKind::Config: return "Config";
    case ErrorKind::Io: return "Io";
  }
  return "Unknown";
}

const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Permit: return "Permit";
    case Verdict::Deny: return "Deny";
    case Verdict::NotApplicable: return "NotApplicable";
    case Verdict::IndeterminateP: return "Indeterminate(P)";
    case Verdict::IndeterminateD: return "Indeterminate(D)";
    case Verdict::IndeterminatePD: return "Indeterminate(PD)";
  }
  return "Unknown";
}

Verdict classify_decision(const Decision& d) {
  if (d.permit == Tri::True && d.deny == Tri::True) {
    throw Error(ErrorKind::InternalInconsistency,
                "decision permits and denies at once");
  }
  if (d.permit == Tri::True) return Verdict::Permit;
  if (d.deny == Tri::True) return Verdict::Deny;
  if (d.permit == Tri::Unknown && d.deny == Tri::Unknown)
    return Verdict::IndeterminatePD;
  if (d.permit == Tri::Unknown) return Verdict::IndeterminateP;
  if (d.deny == Tri::Unknown) return Verdict::IndeterminateD;
  return Verdict::NotApplicable;
}

// --- ValueSet --------------------------------------------------------------

bool ValueSet::empty() const {
  return std::none_of(bits_.begin(), bits_.end(), [](bool b) { return b; });
}

bool ValueSet::full() const {
  return std::all_of(bits_.begin(), bits_.end(), [](bool b) { return b; });
}

std::size_t ValueSet::count() const {
  return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), true));
}

namespace {
void check_same_domain(const ValueSet& a, const ValueSet& b) {
  if (a.domain_size() != b.domain_size()) {
    throw Error(ErrorKind::SchemaMismatch, "value sets over different domains");
  }
}
}  // namespace

ValueSet ValueSet::unite(const ValueSet& o) const {
  check_same_domain(*this, o);
  ValueSet r(domain_size());
  for (std::size_t i = 0; i < domain_size(); ++i)
    if (bits_[i] || o.bits_[i]) r.insert(i);
  return r;
}

ValueSet ValueSet::intersect(const ValueSet& o) const {
  check_same_domain(*this, o);
  ValueSet r(domain_size());
  for (std::size_t i = 0; i < domain_size(); ++i)
    if (bits_[i] && o.bits_[i]) r.insert(i);
  return r;
}

ValueSet ValueSet::subtract(const ValueSet& o) const {
  check_same_domain(*this, o);
  ValueSet r(domain_size());
  for (std::size_t i = 0; i < domain_size(); ++i)
    if (bits_[i] && !o.bits_[i]) r.insert(i);
  return r;
}

ValueSet ValueSet::complement() const {
  ValueSet r(domain_size());
  for (std::size_t i = 0; i < domain_size(); ++i)
    if (!bits_[i]) r.insert(i);
  return r;
}

bool ValueSet::subset_of(const ValueSet& o) const {
  check_same_domain(*this, o);
  for (std::size_t i = 0; i < domain_size(); ++i)
    if (bits_[i] && !o.bits_[i]) return false;
  return true;
}

// --- AttributeSchema -------------------------------------------------------

AttributeSchema::AttributeSchema(std::vector<AttributeSlot> slots)
    : slots_(std::move(slots)) {
  for (std::size_t i = 0; i < slots_.size(); ++i) {
    if (slots_[i].values.empty()) {
      throw Error(ErrorKind::SchemaMismatch,
                  "empty domain for attribute " + slots_[i].name);
    }
    auto [it, inserted] = by_name_.emplace(slots_[i].name, i);
    (void)it;
    if (!inserted) {
      throw Error(ErrorKind::SchemaMismatch,
                  "duplicate attribute " + slots_[i].name);
    }
  }
}

std::optional<std::size_t> AttributeSchema::slot_index(
    const std::string& name) const {
  auto it = by_name_.find(name);
  if (it == by_name_.end()) return std::nullopt;
  return it->second;
}

std::optional<std::size_t> AttributeSchema::value_index(
    std::size_t slot, const std::string& value) const {
  const auto& vals = slots_.at(slot).values;
  auto it = std::find(vals.begin(), vals.end(), value);
  if (it == vals.end()) return std::nullopt;
  return static_cast<std::size_t>(it - vals.begin());
}

// --- ConstraintTuple -------------------------------------------------------

ConstraintTuple ConstraintTuple::top(const AttributeSchema& schema) {
  std::vector<ValueSet> comps;
  comps.reserve(schema.arity());
  for (std::size_t i = 0; i < schema.arity(); ++i)
    comps.emplace_back(schema.slot(i).values.size(), true);
  return ConstraintTuple(std::move(comps));
}

ConstraintTuple ConstraintTuple::bottom(const AttributeSchema& schema) {
  std::vector<ValueSet> comps;
  comps.reserve(schema.arity());
  for (std::size_t i = 0; i < schema.arity(); ++i)
    comps.emplace_back(schema.slot(i).values.size(), false);
  return ConstraintTuple(std::move(comps));
}

bool ConstraintTuple::empty_as_set() const {
  return std::any_of(components_.begin(), components_.end(),
                     [](const ValueSet& v) { return v.empty(); });
}

bool ConstraintTuple::unrestricted() const {
  return std::all_of(components_.begin(), components_.end(),
                     [](const ValueSet& v) { return v.full(); });
}

bool ConstraintTuple::all_components_empty() const {
  return std::all_of(components_.begin(), components_.end(),
                     [](const ValueSet& v) { return v.empty(); });
}

namespace {
void check_same_arity(const ConstraintTuple& a, const ConstraintTuple& b) {
  if (a.arity() != b.arity()) {
    throw Error(ErrorKind::ArityMismatch, "tuples of different arity");
  }
}
}  // namespace

ConstraintTuple ConstraintTuple::unite(const ConstraintTuple& o) const {
  check_same_arity(*this, o);
  std::vector<ValueSet> comps;
  comps.reserve(arity());
  for (std::size_t i = 0; i < arity(); ++i)
    comps.push_back(components_[i].unite(o.components_[i]));
  return ConstraintTuple(std::move(comps));
}

ConstraintTuple ConstraintTuple::intersect(const ConstraintTuple& o) const {
  check_same_arity(*this, o);
  std::vector<ValueSet> comps;
  comps.reserve(arity());
  for (std::size_t i = 0; i < arity(); ++i)
    comps.push_back(components_[i].intersect(o.components_[i]));
  return ConstraintTuple(std::move(comps));
}

ConstraintTuple tuple_complement(const ConstraintTuple& t,
                                 const AttributeSchema& schema) {
  if (t.arity() != schema.arity()) {
    throw Error(ErrorKind::SchemaMismatch,
                "tuple arity does not match schema");
  }
  std::vector<ValueSet> comps;
  comps.reserve(t.arity());
  for (std::size_t i = 0; i < t.arity(); ++i) {
    if (t.component(i).domain_size() != schema.slot(i).values.size()) {
      throw Error(ErrorKind::SchemaMismatch,
                  "component domain does not match schema slot");
    }
    comps.push_back(t.component(i).complement());
  }
  return ConstraintTuple(std::move(comps));
}

// --- PolicyTerm ------------------------------------------------------------

namespace {
PolicyPtr mk_node(PolicyTerm node) {
  return std::make_shared<const PolicyTerm>(std::move(node));
}
}  // namespace

PolicyPtr mk_empty() { return mk_node({PolicyKind::Empty, {}, {}, {}, {}}); }
PolicyPtr mk_deny_all() {
  return mk_node({PolicyKind::DenyAll, {}, {}, {}, {}});
}
PolicyPtr mk_permit_all() {
  return mk_node({PolicyKind::PermitAll, {}, {}, {}, {}});
}

PolicyPtr mk_rule(ConstraintTuple phi1, ConstraintTuple phi2) {
  check_same_arity(phi1, phi2);
  return mk_node({PolicyKind::Rule, std::move(phi1), std::move(phi2), {}, {}});
}

PolicyPtr mk_unary(PolicyKind kind, PolicyPtr child) {
  if (kind != PolicyKind::Neg && kind != PolicyKind::Assert) {
    throw Error(ErrorKind::InternalInconsistency, "not a unary policy kind");
  }
  return mk_node({kind, {}, {}, std::move(child), {}});
}

PolicyPtr mk_binary(PolicyKind kind, PolicyPtr left, PolicyPtr right) {
  switch (kind) {
    case PolicyKind::Seq:
    case PolicyKind::PermitOv:
    case PolicyKind::DenyOv:
    case PolicyKind::Par:
    case PolicyKind::Choice:
    case PolicyKind::Minus:
    case PolicyKind::OMinus:
      break;
    default:
      throw Error(ErrorKind::InternalInconsistency, "not a binary policy kind");
  }
  return mk_node({kind, {}, {}, std::move(left), std::move(right)});
}

PolicyPtr mk_scoped(ConstraintTuple scope, PolicyPtr child) {
  return mk_node({PolicyKind::Scoped, std::move(scope), {}, std::move(child), {}});
}

bool policy_equal(const PolicyPtr& a, const PolicyPtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  if (a->kind != b->kind) return false;
  if (!(a->phi1 == b->phi1) || !(a->phi2 == b->phi2)) return false;
  return policy_equal(a->left, b->left) && policy_equal(a->right, b->right);
}

}  // namespace polsim
