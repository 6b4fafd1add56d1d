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

#include <optional>
#include <string>
#include <vector>

#include "polsim/errors.hpp"

namespace polsim {

// ---------------------------------------------------------------------------
// Raw XML layer. Only what the policy subset needs: elements, attributes,
// character data, comments, processing instructions.
// ---------------------------------------------------------------------------

struct XmlElement {
  std::string name;
  std::vector<std::pair<std::string, std::string>> attributes;
  std::vector<XmlElement> children;
  std::string text;  // concatenated character data directly inside

  std::optional<std::string> attribute(const std::string& key) const;
};

// Parses a whole document and returns its root element. Throws XmlSyntax.
XmlElement parse_xml(const std::string& document);

// ---------------------------------------------------------------------------
// Policy subset node model.
// ---------------------------------------------------------------------------

enum class XacmlKind {
  PolicySet,
  Policy,
  Rule,
  Target,
  AnyOf,
  AllOf,
  Match,
  Condition,
};

enum class Combiner {
  DenyOverrides,
  PermitOverrides,
  FirstApplicable,
  OrderedPermitOverrides,
  OnlyOneApplicable,
  DenyUnlessPermit,
  PermitUnlessDeny,
};

enum class Effect { Permit, Deny };

const char* combiner_token(Combiner c);

// Boolean condition body: and/or/not combinators over match-style
// predicates. A predicate keeps its function so the transformer can reject
// the unsupported ones.
struct ConditionExpr {
  enum class Kind { And, Or, Not, Predicate };
  Kind kind = Kind::Predicate;
  std::vector<ConditionExpr> children;
  // Predicate payload.
  std::string function;
  std::string attribute;
  std::string value;
};

struct XacmlNode {
  XacmlKind kind = XacmlKind::Policy;

  // Header attributes (local names, URN prefixes stripped).
  std::string id;
  std::string version;
  std::optional<Combiner> combiner;  // Policy / PolicySet
  std::optional<Effect> effect;      // Rule

  std::string description;  // recorded, no semantics
  bool has_obligations = false;
  bool has_advice = false;

  std::vector<XacmlNode> children;

  // Match payload.
  std::string match_id;      // e.g. string-equal
  std::string attribute_id;  // e.g. resource-id
  std::string category;      // e.g. access-subject
  std::string data_type;
  bool must_be_present = false;
  std::string value;

  std::optional<ConditionExpr> condition;  // Condition nodes
};

// Parses and validates one document of the supported subset.
// Throws XmlSyntax, GrammarViolation or UnknownCombiner.
XacmlNode parse_xacml(const std::string& document);

// Renders a node back to XML. parse -> serialize -> parse is a fixpoint on
// the supported subset.
std::string serialize_xacml(const XacmlNode& node);

// Last component of a colon-separated URN, e.g. "...:function:string-equal"
// -> "string-equal".
std::string urn_local_name(const std::string& urn);

// Case-insensitive comparison used for all reduced URN names.
bool name_equals(const std::string& a, const std::string& b);

}  // namespace polsim
