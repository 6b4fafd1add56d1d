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

#include "polsim/ring.hpp"

namespace polsim {

enum class Relation { Converge, Extend, Restrict, Shuffle, Diverge };

const char* relation_name(Relation r);

enum class WitnessKind { In1Not2, In2Not1, InBoth };

const char* witness_kind_name(WitnessKind k);

struct Witness {
  std::string part;  // "permit" or "deny"
  WitnessKind kind;
  Request request;
};

struct SimilarityReport {
  Relation relation = Relation::Shuffle;
  Relation permit_relation = Relation::Shuffle;
  Relation deny_relation = Relation::Shuffle;

  std::string sepl1;
  std::string sepl2;
  std::string permit_term1, deny_term1;
  std::string permit_term2, deny_term2;

  // name -> "attribute=v1|v2" for every atom a term references.
  std::vector<std::pair<std::string, std::string>> atoms;

  std::vector<Witness> witnesses;

  std::optional<DerivationTrace> permit_trace;
  std::optional<DerivationTrace> deny_trace;
  std::vector<std::string> atom_names;  // for rendering the traces
};

struct ClassifyOptions {
  bool traces = false;
  bool witnesses = false;
};

// Everything the deciding queries need, split at the ring-term boundary so
// callers can time preprocessing separately.
struct PreparedComparison {
  AttributeSchema schema;
  SymbolTable symbols;
  Vocabulary vocabulary;
  std::vector<std::string> atom_names;
  std::string sepl1, sepl2;
  PolicyRingTerms terms1, terms2;
};

PreparedComparison prepare_comparison(const XacmlNode& doc1,
                                      const XacmlNode& doc2);

PreparedComparison prepare_terms(const PolicyPtr& p1, const PolicyPtr& p2,
                                 const AttributeSchema& schema);

// Full pipeline over two documents.
SimilarityReport classify(const std::string& xml1, const std::string& xml2,
                          const ClassifyOptions& options = {});

// Same decision procedure over policy terms.
SimilarityReport classify_terms(const PolicyPtr& p1, const PolicyPtr& p2,
                                const AttributeSchema& schema,
                                const ClassifyOptions& options = {});

SimilarityReport decide(const PreparedComparison& prepared,
                        const ClassifyOptions& options = {});

// Relation between a single pair of tautology-query operands.
Relation compare_terms(const TermPtr& t1, const TermPtr& t2);

// Searches the finite request space (one atom per attribute) for a request
// in the given region of the two terms' membership diagram.
std::optional<Request> find_witness(const TermPtr& t1, const TermPtr& t2,
                                    WitnessKind kind,
                                    const Vocabulary& vocabulary,
                                    const AttributeSchema& schema);

std::string report_to_text(const SimilarityReport& report);
std::string report_to_json(const SimilarityReport& report);

}  // namespace polsim
