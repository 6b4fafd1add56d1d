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

#include <doctest.h>

#include "oracles.hpp"
#include "polsim/similarity.hpp"

using namespace polsim;

namespace {

// A one-attribute vocabulary whose blocks are single atoms; enough for the
// scalar witness examples.
struct TinyVocab {
  AttributeSchema schema;
  Vocabulary vocab;

  static std::vector<AttributeSlot> slots(std::size_t atoms) {
    AttributeSlot slot;
    slot.name = "attr";
    for (std::size_t i = 0; i < atoms; ++i)
      slot.values.push_back("v" + std::to_string(i + 1));
    return {slot};
  }

  explicit TinyVocab(std::size_t atoms) : schema(slots(atoms)) {
    vocab.by_slot.resize(1);
    for (std::size_t i = 0; i < atoms; ++i) {
      ValueSet block(atoms);
      block.insert(i);
      vocab.by_slot[0].push_back(static_cast<std::uint32_t>(i));
      vocab.atoms.push_back(Atom{0, block, "attr=v" + std::to_string(i + 1)});
    }
  }
};

Relation oracle_relation(const PolicyRingTerms& a, const PolicyRingTerms& b,
                         std::size_t atom_count) {
  std::vector<bool> p1 = testing::membership_table(a.permit, atom_count);
  std::vector<bool> p2 = testing::membership_table(b.permit, atom_count);
  std::vector<bool> d1 = testing::membership_table(a.deny, atom_count);
  std::vector<bool> d2 = testing::membership_table(b.deny, atom_count);
  bool fwd = true, bwd = true, disj = true;
  for (std::size_t r = 0; r < p1.size(); ++r) {
    fwd = fwd && (!p1[r] || p2[r]) && (!d1[r] || d2[r]);
    bwd = bwd && (!p2[r] || p1[r]) && (!d2[r] || d1[r]);
    disj = disj && !(p1[r] && p2[r]) && !(d1[r] && d2[r]);
  }
  if (fwd && bwd) return Relation::Converge;
  if (fwd) return Relation::Extend;
  if (bwd) return Relation::Restrict;
  if (disj) return Relation::Diverge;
  return Relation::Shuffle;
}

}  // namespace

TEST_CASE("the paper pair converges") {
  SimilarityReport report =
      classify(testing::read_fixture("policy_p.xml"),
               testing::read_fixture("policy_q.xml"));
  CHECK(report.relation == Relation::Converge);
  CHECK(report.permit_relation == Relation::Converge);
  CHECK(report.deny_relation == Relation::Converge);
  CHECK(report.sepl1 == "((⊥,(x,y,z)).((x),⊥))");
  CHECK(report.sepl2 == "((⊥,(x,y,z)).((x,y,u),⊥))");
  CHECK(report.permit_term1 == "F3 | ((x, T, T) - (x, y, u | w))");
  CHECK(report.permit_term2 == "F3 | ((x, y, u) - (x, y, u | w))");
  CHECK(report.deny_term1 == "(x, y, u | w) | (F3 - F3)");
}

TEST_CASE("a policy converges with itself, with trivial traces") {
  std::string p = testing::read_fixture("policy_p.xml");
  ClassifyOptions options;
  options.traces = true;
  SimilarityReport report = classify(p, p, options);
  CHECK(report.relation == Relation::Converge);
  REQUIRE(report.permit_trace.has_value());
  CHECK(report.permit_trace->result->kind == TermKind::One);
  REQUIRE(report.deny_trace.has_value());
  CHECK(report.deny_trace->result->kind == TermKind::One);
}

TEST_CASE("compare_terms examples") {
  CHECK(compare_terms(t_var(0), t_var(0)) == Relation::Converge);
  // x & y implies x but not conversely.
  CHECK(compare_terms(t_and(t_var(0), t_var(1)), t_var(0)) ==
        Relation::Extend);
  CHECK(compare_terms(t_var(0), t_and(t_var(0), t_var(1))) ==
        Relation::Restrict);
  CHECK(compare_terms(t_var(0), t_not(t_var(0))) == Relation::Diverge);
  CHECK(compare_terms(t_or(t_var(0), t_var(1)), t_or(t_var(1), t_var(2))) ==
        Relation::Shuffle);
}

TEST_CASE("witness examples") {
  TinyVocab tiny(3);
  // Region of x but not x&y: an x-block value with y false.
  auto w = find_witness(t_var(0), t_and(t_var(0), t_var(1)),
                        WitnessKind::In1Not2, tiny.vocab, tiny.schema);
  REQUIRE(w.has_value());
  CHECK(w->bindings["attr"] == "v1");

  CHECK(!find_witness(t_var(0), t_var(0), WitnessKind::In1Not2, tiny.vocab,
                      tiny.schema)
             .has_value());
  CHECK(!find_witness(t_var(0), t_not(t_var(0)), WitnessKind::InBoth,
                      tiny.vocab, tiny.schema)
             .has_value());
}

TEST_CASE("witnesses from the pipeline demonstrate the difference") {
  // Policy 2 permits a strict subset of policy 1.
  std::string p1 =
      "<Policy PolicyId=\"p1\" Version=\"1.0\" RuleCombiningAlgId="
      "\"urn:x:first-applicable\"><Target/>"
      "<Rule RuleId=\"r\" Effect=\"Permit\"><Target><AnyOf><AllOf>"
      "<Match MatchId=\"urn:x:function:string-equal\">"
      "<AttributeValue>read</AttributeValue>"
      "<AttributeDesignator AttributeId=\"urn:x:action-id\"/></Match>"
      "<Match MatchId=\"urn:x:function:string-equal\">"
      "<AttributeValue>write</AttributeValue>"
      "<AttributeDesignator AttributeId=\"urn:x:action-id\"/></Match>"
      "</AllOf></AnyOf></Target></Rule></Policy>";
  std::string p2 =
      "<Policy PolicyId=\"p2\" Version=\"1.0\" RuleCombiningAlgId="
      "\"urn:x:first-applicable\"><Target/>"
      "<Rule RuleId=\"r\" Effect=\"Permit\"><Target><AnyOf><AllOf>"
      "<Match MatchId=\"urn:x:function:string-equal\">"
      "<AttributeValue>read</AttributeValue>"
      "<AttributeDesignator AttributeId=\"urn:x:action-id\"/></Match>"
      "</AllOf></AnyOf></Target></Rule></Policy>";
  ClassifyOptions options;
  options.witnesses = true;
  SimilarityReport report = classify(p1, p2, options);
  CHECK(report.relation == Relation::Restrict);
  REQUIRE(!report.witnesses.empty());
  const Witness& w = report.witnesses.front();
  CHECK(w.part == "permit");
  CHECK(w.kind == WitnessKind::In1Not2);
  CHECK(w.request.bindings.at("action-id") == "write");

  // The witness validates against request evaluation of both policies.
  XacmlNode d1 = parse_xacml(p1);
  XacmlNode d2 = parse_xacml(p2);
  AttributeSchema schema = build_schema({&d1, &d2});
  PolicyPtr t1 = expand_abbreviations(to_sepl(d1, schema), schema);
  PolicyPtr t2 = expand_abbreviations(to_sepl(d2, schema), schema);
  CHECK(classify_decision(eval_request(t1, w.request, schema)) ==
        Verdict::Permit);
  CHECK(classify_decision(eval_request(t2, w.request, schema)) !=
        Verdict::Permit);
}

TEST_CASE("classification is mutual under argument swap") {
  AttributeSchema schema = testing::small_schema(2, 2);
  std::mt19937_64 rng(67);
  for (int i = 0; i < 60; ++i) {
    PolicyPtr a = testing::random_policy(rng, schema, 2, false);
    PolicyPtr b = testing::random_policy(rng, schema, 2, false);
    Relation ab = classify_terms(a, b, schema).relation;
    Relation ba = classify_terms(b, a, schema).relation;
    switch (ab) {
      case Relation::Converge: CHECK(ba == Relation::Converge); break;
      case Relation::Extend: CHECK(ba == Relation::Restrict); break;
      case Relation::Restrict: CHECK(ba == Relation::Extend); break;
      case Relation::Shuffle: CHECK(ba == Relation::Shuffle); break;
      case Relation::Diverge: CHECK(ba == Relation::Diverge); break;
    }
  }
}

TEST_CASE("labels match the brute-force membership oracle") {
  AttributeSchema schema = testing::small_schema(2, 2);
  std::mt19937_64 rng(71);
  for (int i = 0; i < 120; ++i) {
    PolicyPtr a = testing::random_policy(rng, schema, 3, false);
    PolicyPtr b = testing::random_policy(rng, schema, 3, false);
    PreparedComparison prepared = prepare_terms(a, b, schema);
    Relation label = decide(prepared).relation;
    Relation expected = oracle_relation(prepared.terms1, prepared.terms2,
                                        prepared.vocabulary.atoms.size());
    CHECK(label == expected);
  }
}

TEST_CASE("indeterminate policies are rejected by the prover") {
  AttributeSchema schema = testing::small_schema(1, 2);
  PolicyPtr r = mk_rule(ConstraintTuple::top(schema),
                        ConstraintTuple::bottom(schema));
  PolicyPtr p = mk_binary(PolicyKind::OMinus, r, r);
  try {
    classify_terms(p, r, schema);
    FAIL("expected IndeterminateUnsupported");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::IndeterminateUnsupported);
  }
}

TEST_CASE("assertion operators vanish for overlap-free policies") {
  // Deny-unless-permit wraps chains in the assertion operator; without
  // overlap subtraction the prover accepts it.
  AttributeSchema schema = testing::small_schema(1, 2);
  ValueSet v1(2);
  v1.insert(0);
  PolicyPtr r = mk_rule(ConstraintTuple({v1}), ConstraintTuple::bottom(schema));
  PolicyPtr dup = encode_combiner(Combiner::DenyUnlessPermit, {r, r});
  SimilarityReport report = classify_terms(dup, r, schema);
  CHECK(report.permit_relation == Relation::Converge);
}

TEST_CASE("report rendering") {
  SimilarityReport report =
      classify(testing::read_fixture("policy_p.xml"),
               testing::read_fixture("policy_q.xml"));
  std::string text = report_to_text(report);
  CHECK(text.find("relation: Converge") != std::string::npos);
  std::string json = report_to_json(report);
  CHECK(json.find("\"relation\": \"Converge\"") != std::string::npos);
}
