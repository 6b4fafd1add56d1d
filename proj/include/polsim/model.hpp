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

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "polsim/errors.hpp"

namespace polsim {

// ---------------------------------------------------------------------------
// Three-valued logic. Ordering False < Unknown < True, so conjunction is min
// and disjunction is max.
// ---------------------------------------------------------------------------

enum class Tri : std::uint8_t { False = 0, Unknown = 1, True = 2 };

inline Tri tri_and(Tri a, Tri b) { return a < b ? a : b; }
inline Tri tri_or(Tri a, Tri b) { return a < b ? b : a; }

inline Tri tri_not(Tri a) {
  switch (a) {
    case Tri::True: return Tri::False;
    case Tri::False: return Tri::True;
    default: return Tri::Unknown;
  }
}

// a - b is shorthand for a and not b.
inline Tri tri_minus(Tri a, Tri b) { return tri_and(a, tri_not(b)); }

// Overlap-sensitive subtraction: keeps a when b is false, otherwise the
// result is unknown unless a was already false.
inline Tri tri_ominus(Tri a, Tri b) {
  if (a == Tri::False) return Tri::False;
  if (b == Tri::False) return a;
  return Tri::Unknown;
}

// The assertion operator collapses unknown to false.
inline Tri tri_assert(Tri a) { return a == Tri::Unknown ? Tri::False : a; }

// ---------------------------------------------------------------------------
// Decisions.
// ---------------------------------------------------------------------------

struct Decision {
  Tri permit = Tri::False;
  Tri deny = Tri::False;

  bool operator==(const Decision&) const = default;
};

enum class Verdict {
  Permit,
  Deny,
  NotApplicable,
  IndeterminateP,
  IndeterminateD,
  IndeterminatePD,
};

const char* verdict_name(Verdict v);

// Total over the eight reachable pairs; (True, True) indicates a pipeline
// bug and raises InternalInconsistency.
Verdict classify_decision(const Decision& d);

// ---------------------------------------------------------------------------
// Attribute schemas and value sets.
// ---------------------------------------------------------------------------

// A set of values of one attribute slot, stored as membership bits over the
// slot's domain indices.
class ValueSet {
 public:
  ValueSet() = default;
  explicit ValueSet(std::size_t domain_size, bool full = false)
      : bits_(domain_size, full) {}

  std::size_t domain_size() const { return bits_.size(); }
  bool contains(std::size_t i) const { return bits_.at(i); }
  void insert(std::size_t i) { bits_.at(i) = true; }
  void erase(std::size_t i) { bits_.at(i) = false; }

  bool empty() const;
  bool full() const;
  std::size_t count() const;

  ValueSet unite(const ValueSet& o) const;
  ValueSet intersect(const ValueSet& o) const;
  ValueSet subtract(const ValueSet& o) const;
  ValueSet complement() const;
  bool subset_of(const ValueSet& o) const;

  bool operator==(const ValueSet&) const = default;
  bool operator<(const ValueSet& o) const { return bits_ < o.bits_; }

 private:
  std::vector<bool> bits_;
};

struct AttributeSlot {
  std::string name;
  std::vector<std::string> values;  // includes the residual marker, if any
};

// Ordered list of attribute slots with finite value domains. Slot order is
// fixed for the lifetime of an analysis session and determines tuple arity.
class AttributeSchema {
 public:
  AttributeSchema() = default;
  explicit AttributeSchema(std::vector<AttributeSlot> slots);

  std::size_t arity() const { return slots_.size(); }
  const AttributeSlot& slot(std::size_t i) const { return slots_.at(i); }
  const std::vector<AttributeSlot>& slots() const { return slots_; }

  // Index of the named attribute, or nullopt.
  std::optional<std::size_t> slot_index(const std::string& name) const;

  // Index of `value` within slot i's domain, or nullopt when the value is
  // not part of the domain.
  std::optional<std::size_t> value_index(std::size_t slot,
                                         const std::string& value) const;

 private:
  std::vector<AttributeSlot> slots_;
  std::map<std::string, std::size_t> by_name_;
};

// The residual marker used by schema builders to stand for every value not
// mentioned by the policies under analysis.
extern const char kResidualMarker[];

// ---------------------------------------------------------------------------
// Constraint tuples.
// ---------------------------------------------------------------------------

// One value set per schema slot. Unrestricted slots hold the full domain,
// impossible slots the empty set.
class ConstraintTuple {
 public:
  ConstraintTuple() = default;

  // Fully unrestricted tuple over the schema.
  static ConstraintTuple top(const AttributeSchema& schema);
  // Empty tuple (every component empty).
  static ConstraintTuple bottom(const AttributeSchema& schema);

  explicit ConstraintTuple(std::vector<ValueSet> components)
      : components_(std::move(components)) {}

  std::size_t arity() const { return components_.size(); }
  const ValueSet& component(std::size_t i) const { return components_.at(i); }
  ValueSet& component(std::size_t i) { return components_.at(i); }

  // True when the tuple denotes the empty request set, i.e. some component
  // is empty.
  bool empty_as_set() const;
  // True when every component is the full domain.
  bool unrestricted() const;
  // True when every component is empty.
  bool all_components_empty() const;

  ConstraintTuple unite(const ConstraintTuple& o) const;      // componentwise
  ConstraintTuple intersect(const ConstraintTuple& o) const;  // componentwise

  bool operator==(const ConstraintTuple&) const = default;
  bool operator<(const ConstraintTuple& o) const {
    return components_ < o.components_;
  }

 private:
  std::vector<ValueSet> components_;
};

// Componentwise complement within each slot domain; unrestricted components
// become empty.
ConstraintTuple tuple_complement(const ConstraintTuple& t,
                                 const AttributeSchema& schema);

// ---------------------------------------------------------------------------
// Requests.
// ---------------------------------------------------------------------------

// Attribute bindings. A missing entry or nullopt means the value of the
// attribute is unknown.
struct Request {
  std::map<std::string, std::optional<std::string>> bindings;
};

// ---------------------------------------------------------------------------
// Policy terms.
// ---------------------------------------------------------------------------

enum class PolicyKind {
  Empty,      // applies to nothing
  DenyAll,    // denies everything
  PermitAll,  // permits everything
  Rule,       // <phi1, phi2>
  Neg,        // swaps permit and deny parts
  Assert,     // clears indeterminate parts
  Seq,        // first applicable
  PermitOv,   // permit overrides
  DenyOv,     // deny overrides
  Par,        // agreement of both policies
  Choice,     // union minus conflicts
  Minus,      // applies only where the right side is not applicable
  OMinus,     // like Minus but indeterminate on overlap
  Scoped,     // target restriction, eliminable abbreviation
};

struct PolicyTerm;
using PolicyPtr = std::shared_ptr<const PolicyTerm>;

struct PolicyTerm {
  PolicyKind kind;
  ConstraintTuple phi1;  // Rule: accept tuple; Scoped: the scope
  ConstraintTuple phi2;  // Rule: deny tuple
  PolicyPtr left;
  PolicyPtr right;
};

PolicyPtr mk_empty();
PolicyPtr mk_deny_all();
PolicyPtr mk_permit_all();
PolicyPtr mk_rule(ConstraintTuple phi1, ConstraintTuple phi2);
PolicyPtr mk_unary(PolicyKind kind, PolicyPtr child);
PolicyPtr mk_binary(PolicyKind kind, PolicyPtr left, PolicyPtr right);
PolicyPtr mk_scoped(ConstraintTuple scope, PolicyPtr child);

bool policy_equal(const PolicyPtr& a, const PolicyPtr& b);

}  // namespace polsim
