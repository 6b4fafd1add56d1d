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

#include <string>
#include <vector>

#include "polsim/model.hpp"
#include "polsim/xacml.hpp"

namespace polsim {

// Assigns short variable names to (slot, value set) predicates in first-use
// order, so printed terms stay readable and reproducible across one analysis
// session.
class SymbolTable {
 public:
  struct Entry {
    std::string name;
    std::size_t slot;
    ValueSet set;
  };

  // Returns the name for the predicate, assigning a fresh one on first use.
  const std::string& name_for(std::size_t slot, const ValueSet& set);

  const std::vector<Entry>& entries() const { return entries_; }

 private:
  std::vector<Entry> entries_;
};

// Builds the shared finite schema for an analysis session: attribute slots in
// first-appearance order, each domain holding every value the documents
// mention plus one residual marker for everything else.
AttributeSchema build_schema(const std::vector<const XacmlNode*>& documents);

// Encodes a combining algorithm over already-transformed sub-policies.
// Throws UnsupportedCombiner for ordered-permit-overrides.
PolicyPtr encode_combiner(Combiner alg, const std::vector<PolicyPtr>& terms);

// Transforms a parsed document into a policy term over the schema.
// Throws UnsupportedMatchFunction, UnboundAttribute, UnsupportedCombiner.
PolicyPtr to_sepl(const XacmlNode& node, const AttributeSchema& schema);

// Compact canonical rendering of a policy term, naming predicates through
// the symbol table.
std::string print_policy(const PolicyPtr& term, const AttributeSchema& schema,
                         SymbolTable& symbols);

// Renders one constraint tuple the same way print_policy does.
std::string print_tuple(const ConstraintTuple& tuple,
                        const AttributeSchema& schema, SymbolTable& symbols);

}  // namespace polsim
