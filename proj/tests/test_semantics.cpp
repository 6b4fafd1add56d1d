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
#include "polsim/semantics.hpp"

using namespace polsim;

namespace {

const Tri T = Tri::True;
const Tri U = Tri::Unknown;
const Tri F = Tri::False;

Request request_of(const AttributeSchema& schema,
                   std::initializer_list<const char*> values) {
  Request r;
  std::size_t slot = 0;
  for (const char* v : values) {
    r.bindings[schema.slot(slot).name] =
        v ? std::optional<std::string>(v) : std::nullopt;
    ++slot;
  }
  return r;
}

}  // namespace

TEST_CASE("three-valued truth tables match the reference tables") {
  struct Row {
    Tri a, b, expect;
  };
  const Row and_rows[] = {{T, T, T}, {T, U, U}, {T, F, F},
                          {U, T, U}, {U, U, U}, {U, F, F},
                          {F, T, F}, {F, U, F}, {F, F, F}};
  const Row or_rows[] = {{T, T, T}, {T, U, T}, {T, F, T},
                         {U, T, T}, {U, U, U}, {U, F, U},
                         {F, T, T}, {F, U, U}, {F, F, F}};
  const Row ominus_rows[] = {{T, T, U}, {T, U, U}, {T, F, T},
                             {U, T, U}, {U, U, U}, {U, F, U},
                             {F, T, F}, {F, U, F}, {F, F, F}};
  for (const Row& r : and_rows) CHECK(tri_and(r.a, r.b) == r.expect);
  for (const Row& r : or_rows) CHECK(tri_or(r.a, r.b) == r.expect);
  for (const Row& r : ominus_rows) CHECK(tri_ominus(r.a, r.b) == r.expect);

  CHECK(tri_not(T) == F);
  CHECK(tri_not(U) == U);
  CHECK(tri_not(F) == T);
  CHECK(tri_assert(T) == T);
  CHECK(tri_assert(U) == F);
  CHECK(tri_assert(F) == F);
}

TEST_CASE("scope expansion") {
  AttributeSchema schema = testing::small_schema(2, 2);
  ValueSet x0(2);
  x0.insert(0);
  ConstraintTuple scope({x0, ValueSet(2, true)});
  std::mt19937_64 rng(11);
  ConstraintTuple phi1 = testing::random_tuple(rng, schema);
  ConstraintTuple phi2 = testing::random_tuple(rng, schema);

  SUBCASE("unrestricted scope is the identity on rules") {
    PolicyPtr p = mk_rule(phi1, phi2);
    PolicyPtr scoped = mk_scoped(ConstraintTuple::top(schema), p);
    CHECK(policy_equal(expand_abbreviations(scoped, schema), p));
  }

  SUBCASE("scope over negation complements the scope") {
    PolicyPtr p = mk_scoped(scope, mk_unary(PolicyKind::Neg,
                                            mk_rule(phi1, phi2)));
    PolicyPtr expanded = expand_abbreviations(p, schema);
    ConstraintTuple cscope = tuple_complement(scope, schema);
    PolicyPtr expected = mk_unary(
        PolicyKind::Neg,
        mk_rule(cscope.intersect(phi1), cscope.intersect(phi2)));
    CHECK(policy_equal(expanded, expected));

    // The defining equation and its expansion agree on every request.
    auto requests = testing::all_requests(schema);
    for (const auto& req_values : requests) {
      Request r;
      for (std::size_t slot = 0; slot < schema.arity(); ++slot)
        r.bindings[schema.slot(slot).name] =
            schema.slot(slot).values[req_values[slot]];
      Decision a = eval_request(expanded, r, schema);
      Decision b = eval_request(expected, r, schema);
      CHECK(a == b);
    }
  }

  SUBCASE("scope distributes through sequencing") {
    PolicyPtr r1 = mk_rule(phi1, phi2);
    PolicyPtr r2 = mk_rule(phi2, phi1);
    PolicyPtr p = mk_scoped(scope, mk_binary(PolicyKind::Seq, r1, r2));
    PolicyPtr expanded = expand_abbreviations(p, schema);
    REQUIRE(expanded->kind == PolicyKind::Seq);
    CHECK(expanded->left->phi1 == scope.intersect(phi1));
    CHECK(expanded->right->phi2 == scope.intersect(phi1));
  }

  SUBCASE("scope over subtraction is rejected") {
    PolicyPtr p = mk_scoped(
        scope, mk_binary(PolicyKind::Minus, mk_rule(phi1, phi2), mk_empty()));
    try {
      expand_abbreviations(p, schema);
      FAIL("expected ScopeOnUnsupportedOperator");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::ScopeOnUnsupportedOperator);
    }
  }
}

TEST_CASE("absolute semantics of the constants") {
  AttributeSchema schema = testing::small_schema(2, 2);
  SemPair e = absolute_semantics(mk_empty(), schema);
  CHECK(e.accept->leaf.all_components_empty());
  CHECK(e.deny->leaf.all_components_empty());
  SemPair one = absolute_semantics(mk_permit_all(), schema);
  CHECK(one.accept->leaf.unrestricted());
  CHECK(one.deny->leaf.all_components_empty());
  SemPair zero = absolute_semantics(mk_deny_all(), schema);
  CHECK(zero.accept->leaf.all_components_empty());
  CHECK(zero.deny->leaf.unrestricted());
}

TEST_CASE("R . not R accepts exactly the rule region") {
  // Brute-force set evaluation over a 1-attribute, 2-value schema.
  AttributeSchema schema = testing::small_schema(1, 2);
  ValueSet phi_set(2);
  phi_set.insert(0);
  ConstraintTuple phi({phi_set});
  PolicyPtr r = mk_rule(phi, ConstraintTuple::bottom(schema));
  PolicyPtr term =
      mk_binary(PolicyKind::Seq, r, mk_unary(PolicyKind::Neg, r));
  SemPair sem = absolute_semantics(term, schema);
  auto requests = testing::all_requests(schema);
  testing::SetValue accept = testing::eval_set(sem.accept, requests, schema);
  testing::SetValue deny = testing::eval_set(sem.deny, requests, schema);
  REQUIRE(!accept.unknown);
  REQUIRE(!deny.unknown);
  CHECK(accept.members == std::set<std::size_t>{0});  // the phi request
  CHECK(deny.members.empty());
}

TEST_CASE("the fixture's accept and deny expressions print as expected") {
  XacmlNode doc = parse_xacml(testing::read_fixture("policy_p.xml"));
  AttributeSchema schema = build_schema({&doc});
  PolicyPtr p = expand_abbreviations(to_sepl(doc, schema), schema);
  SemPair sem = absolute_semantics(p, schema);
  SymbolTable symbols;
  CHECK(print_sempair(sem, schema, symbols) ==
        "(F3 | ((x, T, T) - (x, y, z)), (x, y, z) | (F3 - F3))");
}

TEST_CASE("request evaluation over the paper fixture") {
  XacmlNode doc = parse_xacml(testing::read_fixture("policy_p.xml"));
  AttributeSchema schema = build_schema({&doc});
  PolicyPtr p = expand_abbreviations(to_sepl(doc, schema), schema);

  CHECK(classify_decision(eval_request(
            p, request_of(schema, {"secret.txt", "write", "Alice"}), schema)) ==
        Verdict::Deny);
  CHECK(classify_decision(eval_request(
            p, request_of(schema, {"secret.txt", "read", "Carol"}), schema)) ==
        Verdict::Permit);
  CHECK(classify_decision(eval_request(
            p, request_of(schema, {"other.txt", "write", "Alice"}), schema)) ==
        Verdict::NotApplicable);
}

TEST_CASE("fully bound requests never evaluate to unknown without ominus") {
  AttributeSchema schema = testing::small_schema(2, 2);
  std::mt19937_64 rng(17);
  auto requests = testing::all_requests(schema);
  for (int i = 0; i < 120; ++i) {
    PolicyPtr p = expand_abbreviations(
        testing::random_policy(rng, schema, 3, /*allow_ominus=*/false),
        schema);
    for (const auto& req_values : requests) {
      Request r;
      for (std::size_t slot = 0; slot < schema.arity(); ++slot)
        r.bindings[schema.slot(slot).name] =
            schema.slot(slot).values[req_values[slot]];
      Decision d = eval_request(p, r, schema);
      CHECK(d.permit != Tri::Unknown);
      CHECK(d.deny != Tri::Unknown);
      CHECK(!(d.permit == Tri::True && d.deny == Tri::True));
    }
  }
}

TEST_CASE("overlap subtraction yields indeterminate on overlap") {
  AttributeSchema schema = testing::small_schema(1, 2);
  ValueSet phi_set(2);
  phi_set.insert(0);
  PolicyPtr r = mk_rule(ConstraintTuple({phi_set}),
                        ConstraintTuple::bottom(schema));
  PolicyPtr term = mk_binary(PolicyKind::OMinus, r, r);
  Request req;
  req.bindings["attr1"] = "v1";
  Decision d = eval_request(term, req, schema);
  CHECK(d.permit == Tri::Unknown);
  CHECK(d.deny == Tri::False);
  CHECK(classify_decision(d) == Verdict::IndeterminateP);
}

TEST_CASE("negation is an involution, parallel and choice commute") {
  AttributeSchema schema = testing::small_schema(2, 2);
  std::mt19937_64 rng(23);
  for (int i = 0; i < 60; ++i) {
    PolicyPtr p = expand_abbreviations(
        testing::random_policy(rng, schema, 3, true), schema);
    PolicyPtr q = expand_abbreviations(
        testing::random_policy(rng, schema, 3, true), schema);
    Request r;
    for (std::size_t slot = 0; slot < schema.arity(); ++slot) {
      std::size_t pick = rng() % (schema.slot(slot).values.size() + 1);
      if (pick < schema.slot(slot).values.size())
        r.bindings[schema.slot(slot).name] = schema.slot(slot).values[pick];
      else
        r.bindings[schema.slot(slot).name] = std::nullopt;
    }
    Decision d = eval_request(p, r, schema);
    Decision dd = eval_request(
        mk_unary(PolicyKind::Neg, mk_unary(PolicyKind::Neg, p)), r, schema);
    CHECK(d == dd);
    CHECK(eval_request(mk_binary(PolicyKind::Par, p, q), r, schema) ==
          eval_request(mk_binary(PolicyKind::Par, q, p), r, schema));
    CHECK(eval_request(mk_binary(PolicyKind::Choice, p, q), r, schema) ==
          eval_request(mk_binary(PolicyKind::Choice, q, p), r, schema));
  }
}

TEST_CASE("relative agrees with absolute semantics on two-valued cases") {
  AttributeSchema schema = testing::small_schema(2, 3);
  std::mt19937_64 rng(29);
  auto requests = testing::all_requests(schema);
  for (int i = 0; i < 80; ++i) {
    PolicyPtr p = expand_abbreviations(
        testing::random_policy(rng, schema, 3, /*allow_ominus=*/false),
        schema);
    SemPair sem = absolute_semantics(p, schema);
    testing::SetValue accept = testing::eval_set(sem.accept, requests, schema);
    testing::SetValue deny = testing::eval_set(sem.deny, requests, schema);
    REQUIRE(!accept.unknown);
    REQUIRE(!deny.unknown);
    for (std::size_t ri = 0; ri < requests.size(); ++ri) {
      Request r;
      for (std::size_t slot = 0; slot < schema.arity(); ++slot)
        r.bindings[schema.slot(slot).name] =
            schema.slot(slot).values[requests[ri][slot]];
      Decision d = eval_request(p, r, schema);
      CHECK((d.permit == Tri::True) == (accept.members.count(ri) > 0));
      CHECK((d.deny == Tri::True) == (deny.members.count(ri) > 0));
    }
  }
}

TEST_CASE("strict mode reports unbound attributes") {
  AttributeSchema schema = testing::small_schema(2, 2);
  PolicyPtr p = mk_rule(ConstraintTuple::top(schema),
                        ConstraintTuple::bottom(schema));
  Request r;
  r.bindings["attr1"] = "v1";  // attr2 missing
  CHECK(classify_decision(eval_request(p, r, schema, false)) ==
        Verdict::Permit);
  try {
    eval_request(p, r, schema, true);
    FAIL("expected UnboundAttribute");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::UnboundAttribute);
  }
}
