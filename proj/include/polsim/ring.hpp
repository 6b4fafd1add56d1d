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
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "polsim/atomizer.hpp"
#include "polsim/frontend.hpp"

namespace polsim {

// ---------------------------------------------------------------------------
// Terms of the boolean algebra / boolean ring, including fixed-arity tuples.
// XOR and AND chains are kept n-ary and are matched modulo associativity and
// commutativity.
// ---------------------------------------------------------------------------

enum class TermKind {
  ConstF,
  ConstT,
  Zero,
  One,
  Var,
  FTuple,  // abbreviation for a tuple of all-F components
  TTuple,  // abbreviation for a tuple of all-T components
  Tuple,
  Not,
  And,
  Or,
  Sub,  // difference, x and not y
  Imp,
  Eqv,
  Add,  // ring addition (xor), n-ary
  Mul,  // ring multiplication (and), n-ary
};

struct Term;
using TermPtr = std::shared_ptr<const Term>;

struct Term {
  TermKind kind;
  std::uint32_t var = 0;    // Var
  std::uint32_t arity = 0;  // FTuple / TTuple
  std::vector<TermPtr> kids;
};

TermPtr t_f();
TermPtr t_t();
TermPtr t_zero();
TermPtr t_one();
TermPtr t_var(std::uint32_t index);
TermPtr t_ftuple(std::uint32_t arity);
TermPtr t_ttuple(std::uint32_t arity);
TermPtr t_tuple(std::vector<TermPtr> components);
TermPtr t_not(TermPtr a);
TermPtr t_and(TermPtr a, TermPtr b);
TermPtr t_or(TermPtr a, TermPtr b);
TermPtr t_sub(TermPtr a, TermPtr b);
TermPtr t_imp(TermPtr a, TermPtr b);
TermPtr t_eqv(TermPtr a, TermPtr b);
// Nested chains flatten; empty chains collapse to the neutral element.
TermPtr t_add(std::vector<TermPtr> kids);
TermPtr t_mul(std::vector<TermPtr> kids);

bool term_equal(const TermPtr& a, const TermPtr& b);

// Rendering; atom indices are looked up in `names` (falls back to a#i).
std::string print_term(const TermPtr& t, const std::vector<std::string>& names);

// Terms are DAGs and can unfold to exponentially long text. Prints the term
// itself while it stays below `max_nodes` unfolded nodes, the canonical
// normal form otherwise.
std::string print_term_clipped(const TermPtr& t,
                               const std::vector<std::string>& names,
                               std::size_t max_nodes = 4096);

// ---------------------------------------------------------------------------
// Canonical normal forms: per component a polynomial over GF(2), i.e. a set
// of AND-monomials combined by XOR. Tuples with a zero component collapse to
// the scalar 0, all-one tuples to the scalar 1.
// ---------------------------------------------------------------------------

using Monomial = std::vector<std::uint32_t>;  // sorted atom indices

struct RingPoly {
  std::set<Monomial> monomials;

  static RingPoly zero() { return {}; }
  static RingPoly one() { return {{Monomial{}}}; }
  static RingPoly variable(std::uint32_t index) { return {{Monomial{index}}}; }

  bool is_zero() const { return monomials.empty(); }
  bool is_one() const {
    return monomials.size() == 1 && monomials.begin()->empty();
  }

  RingPoly ring_add(const RingPoly& o) const;
  RingPoly ring_mul(const RingPoly& o) const;

  bool operator==(const RingPoly&) const = default;
};

struct NormalForm {
  bool is_tuple = false;
  RingPoly scalar;               // valid when !is_tuple
  std::vector<RingPoly> tuple;   // valid when is_tuple

  bool operator==(const NormalForm&) const = default;
};

// Direct evaluation to the canonical form; equivalent to exhausting the
// rewrite rules modulo AC.
NormalForm normalize_nf(const TermPtr& t);

// Canonical term rendering of a normal form (XOR of sorted monomials).
TermPtr normal_form_term(const NormalForm& nf);

// Exhaustive rewriting as a single operation.
TermPtr normalize(const TermPtr& t);

bool is_tautology(const TermPtr& t);
bool is_contradiction(const TermPtr& t);

// ---------------------------------------------------------------------------
// Traced rewriting. Each step applies one named rule at every redex at once,
// mirroring the presentation of derivations as rule-labelled lines.
// ---------------------------------------------------------------------------

struct TraceStep {
  std::string rule;
  TermPtr before;
  TermPtr after;
};

struct DerivationTrace {
  TermPtr input;
  std::vector<TraceStep> steps;
  TermPtr result;
};

// Runs the rule system to a fixpoint, recording one step per applied rule.
DerivationTrace rewrite_trace(const TermPtr& t, std::size_t max_steps = 200000);

// Applies one named rule at all redexes; used to replay recorded traces.
// Returns the unchanged term when the rule has no redex.
TermPtr apply_rule(const std::string& rule, const TermPtr& t, bool* changed);

bool is_tautology_traced(const TermPtr& t, DerivationTrace& trace);

std::string print_trace(const DerivationTrace& trace,
                        const std::vector<std::string>& names);

// ---------------------------------------------------------------------------
// From atomized semantics to terms.
// ---------------------------------------------------------------------------

struct PolicyRingTerms {
  TermPtr permit;
  TermPtr deny;
};

// Converts one atomized policy to its permit / deny tuple terms. Assigns
// display names (through the symbol table) to every atom it references and
// records them in `atom_names`, indexed like the vocabulary.
// Throws IndeterminateUnsupported when the semantics contains overlap
// subtraction or corner operators.
PolicyRingTerms sempair_to_terms(const AtomizedSemPair& pair,
                                 const Vocabulary& vocabulary,
                                 const AttributeSchema& schema,
                                 SymbolTable& symbols,
                                 std::vector<std::string>& atom_names);

}  // namespace polsim
