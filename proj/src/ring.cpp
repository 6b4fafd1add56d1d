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

#include "polsim/ring.hpp"

#include <algorithm>
#include <optional>
#include <unordered_map>

namespace polsim {

// ---------------------------------------------------------------------------
// Construction. XOR / AND chains flatten and sort their operands so that
// matching modulo associativity and commutativity reduces to structural
// matching.
// ---------------------------------------------------------------------------

namespace {

TermPtr mk(Term node) { return std::make_shared<const Term>(std::move(node)); }

int term_compare(const TermPtr& a, const TermPtr& b) {
  if (a->kind != b->kind)
    return static_cast<int>(a->kind) < static_cast<int>(b->kind) ? -1 : 1;
  if (a->var != b->var) return a->var < b->var ? -1 : 1;
  if (a->arity != b->arity) return a->arity < b->arity ? -1 : 1;
  if (a->kids.size() != b->kids.size())
    return a->kids.size() < b->kids.size() ? -1 : 1;
  for (std::size_t i = 0; i < a->kids.size(); ++i) {
    int c = term_compare(a->kids[i], b->kids[i]);
    if (c != 0) return c;
  }
  return 0;
}

// Monomial-shaped summands (1, x, x*y*...) order lexicographically by their
// atom sequence, so printed sums read 1 + x + x*y + y.
std::optional<Monomial> monomial_key(const TermPtr& t) {
  switch (t->kind) {
    case TermKind::One: return Monomial{};
    case TermKind::Var: return Monomial{t->var};
    case TermKind::Mul: {
      Monomial key;
      for (const auto& k : t->kids) {
        if (k->kind != TermKind::Var) return std::nullopt;
        key.push_back(k->var);
      }
      return key;
    }
    default: return std::nullopt;
  }
}

bool summand_less(const TermPtr& a, const TermPtr& b) {
  auto ka = monomial_key(a);
  auto kb = monomial_key(b);
  if (ka && kb) {
    if (*ka != *kb) return *ka < *kb;
    return term_compare(a, b) < 0;
  }
  if (ka != kb) return ka.has_value();  // monomials before everything else
  return term_compare(a, b) < 0;
}

TermPtr chain(TermKind kind, std::vector<TermPtr> kids) {
  std::vector<TermPtr> flat;
  flat.reserve(kids.size());
  for (auto& k : kids) {
    if (k->kind == kind)
      flat.insert(flat.end(), k->kids.begin(), k->kids.end());
    else
      flat.push_back(std::move(k));
  }
  if (flat.empty()) return kind == TermKind::Add ? t_zero() : t_one();
  if (flat.size() == 1) return flat.front();
  if (kind == TermKind::Add)
    std::stable_sort(flat.begin(), flat.end(), summand_less);
  else
    std::stable_sort(flat.begin(), flat.end(),
                     [](const TermPtr& a, const TermPtr& b) {
                       return term_compare(a, b) < 0;
                     });
  return mk({kind, 0, 0, std::move(flat)});
}

}  // namespace

TermPtr t_f() {
  static const TermPtr v = mk({TermKind::ConstF, 0, 0, {}});
  return v;
}
TermPtr t_t() {
  static const TermPtr v = mk({TermKind::ConstT, 0, 0, {}});
  return v;
}
TermPtr t_zero() {
  static const TermPtr v = mk({TermKind::Zero, 0, 0, {}});
  return v;
}
TermPtr t_one() {
  static const TermPtr v = mk({TermKind::One, 0, 0, {}});
  return v;
}
TermPtr t_var(std::uint32_t index) { return mk({TermKind::Var, index, 0, {}}); }
TermPtr t_ftuple(std::uint32_t arity) {
  return mk({TermKind::FTuple, 0, arity, {}});
}
TermPtr t_ttuple(std::uint32_t arity) {
  return mk({TermKind::TTuple, 0, arity, {}});
}
TermPtr t_tuple(std::vector<TermPtr> components) {
  return mk({TermKind::Tuple, 0, static_cast<std::uint32_t>(components.size()),
             std::move(components)});
}
TermPtr t_not(TermPtr a) { return mk({TermKind::Not, 0, 0, {std::move(a)}}); }
TermPtr t_and(TermPtr a, TermPtr b) {
  return mk({TermKind::And, 0, 0, {std::move(a), std::move(b)}});
}
TermPtr t_or(TermPtr a, TermPtr b) {
  return mk({TermKind::Or, 0, 0, {std::move(a), std::move(b)}});
}
TermPtr t_sub(TermPtr a, TermPtr b) {
  return mk({TermKind::Sub, 0, 0, {std::move(a), std::move(b)}});
}
TermPtr t_imp(TermPtr a, TermPtr b) {
  return mk({TermKind::Imp, 0, 0, {std::move(a), std::move(b)}});
}
TermPtr t_eqv(TermPtr a, TermPtr b) {
  return mk({TermKind::Eqv, 0, 0, {std::move(a), std::move(b)}});
}
TermPtr t_add(std::vector<TermPtr> kids) {
  return chain(TermKind::Add, std::move(kids));
}
TermPtr t_mul(std::vector<TermPtr> kids) {
  return chain(TermKind::Mul, std::move(kids));
}

bool term_equal(const TermPtr& a, const TermPtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  return term_compare(a, b) == 0;
}

// ---------------------------------------------------------------------------
// Printing.
// ---------------------------------------------------------------------------

namespace {

int precedence(const Term& t) {
  switch (t.kind) {
    case TermKind::Eqv:
    case TermKind::Imp: return 1;
    case TermKind::Or:
    case TermKind::Sub:
    case TermKind::Add: return 2;
    case TermKind::And: return 4;
    case TermKind::Mul: return 5;
    case TermKind::Not: return 6;
    default: return 7;
  }
}

std::string print_rec(const TermPtr& t, const std::vector<std::string>& names);

std::string print_child(const TermPtr& child, int parent_prec,
                        const std::vector<std::string>& names) {
  std::string s = print_rec(child, names);
  if (precedence(*child) <= parent_prec) return "(" + s + ")";
  return s;
}

std::string join_chain(const Term& t, const char* sep,
                       const std::vector<std::string>& names) {
  std::string out;
  for (std::size_t i = 0; i < t.kids.size(); ++i) {
    if (i) out += sep;
    out += print_child(t.kids[i], precedence(t) - 1, names);
  }
  return out;
}

std::string print_rec(const TermPtr& t, const std::vector<std::string>& names) {
  switch (t->kind) {
    case TermKind::ConstF: return "F";
    case TermKind::ConstT: return "T";
    case TermKind::Zero: return "0";
    case TermKind::One: return "1";
    case TermKind::Var:
      return t->var < names.size() && !names[t->var].empty()
                 ? names[t->var]
                 : "a" + std::to_string(t->var);
    case TermKind::FTuple: return "F" + std::to_string(t->arity);
    case TermKind::TTuple: return "T" + std::to_string(t->arity);
    case TermKind::Tuple: {
      std::string out = "(";
      for (std::size_t i = 0; i < t->kids.size(); ++i) {
        if (i) out += ", ";
        out += print_rec(t->kids[i], names);
      }
      return out + ")";
    }
    case TermKind::Not:
      return "!" + print_child(t->kids[0], precedence(*t), names);
    case TermKind::And:
      return print_child(t->kids[0], precedence(*t), names) + " & " +
             print_child(t->kids[1], precedence(*t), names);
    case TermKind::Or:
      return print_child(t->kids[0], precedence(*t), names) + " | " +
             print_child(t->kids[1], precedence(*t), names);
    case TermKind::Sub:
      return print_child(t->kids[0], precedence(*t), names) + " - " +
             print_child(t->kids[1], precedence(*t), names);
    case TermKind::Imp:
      return print_child(t->kids[0], precedence(*t), names) + " => " +
             print_child(t->kids[1], precedence(*t), names);
    case TermKind::Eqv:
      return print_child(t->kids[0], precedence(*t), names) + " <=> " +
             print_child(t->kids[1], precedence(*t), names);
    case TermKind::Add: return join_chain(*t, " + ", names);
    case TermKind::Mul: return join_chain(*t, "*", names);
  }
  throw Error(ErrorKind::InternalInconsistency, "bad term kind");
}

}  // namespace

std::string print_term(const TermPtr& t,
                       const std::vector<std::string>& names) {
  return print_rec(t, names);
}

namespace {

std::size_t unfolded_size(const TermPtr& t, std::size_t limit,
                          std::unordered_map<const Term*, std::size_t>& memo) {
  auto it = memo.find(t.get());
  if (it != memo.end()) return it->second;
  std::size_t size = 1;
  for (const auto& k : t->kids) {
    size += unfolded_size(k, limit, memo);
    if (size >= limit) {
      size = limit;
      break;
    }
  }
  memo.emplace(t.get(), size);
  return size;
}

}  // namespace

std::string print_term_clipped(const TermPtr& t,
                               const std::vector<std::string>& names,
                               std::size_t max_nodes) {
  std::unordered_map<const Term*, std::size_t> memo;
  if (unfolded_size(t, max_nodes, memo) < max_nodes)
    return print_rec(t, names);
  return print_rec(normalize(t), names);
}

// ---------------------------------------------------------------------------
// GF(2) polynomials.
// ---------------------------------------------------------------------------

RingPoly RingPoly::ring_add(const RingPoly& o) const {
  RingPoly out = *this;
  for (const Monomial& m : o.monomials) {
    auto it = out.monomials.find(m);
    if (it != out.monomials.end())
      out.monomials.erase(it);
    else
      out.monomials.insert(m);
  }
  return out;
}

RingPoly RingPoly::ring_mul(const RingPoly& o) const {
  RingPoly out;
  for (const Monomial& a : monomials) {
    for (const Monomial& b : o.monomials) {
      Monomial m;
      m.reserve(a.size() + b.size());
      std::set_union(a.begin(), a.end(), b.begin(), b.end(),
                     std::back_inserter(m));
      auto it = out.monomials.find(m);
      if (it != out.monomials.end())
        out.monomials.erase(it);
      else
        out.monomials.insert(std::move(m));
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Fast normalization.
// ---------------------------------------------------------------------------

namespace {

RingPoly poly_not(const RingPoly& a) { return a.ring_add(RingPoly::one()); }

RingPoly poly_binop(TermKind op, const RingPoly& a, const RingPoly& b) {
  switch (op) {
    case TermKind::And:
    case TermKind::Mul:
      return a.ring_mul(b);
    case TermKind::Add:
      return a.ring_add(b);
    case TermKind::Or:
      return a.ring_mul(b).ring_add(a).ring_add(b);
    case TermKind::Sub:
      return a.ring_add(a.ring_mul(b));
    case TermKind::Imp:
      return a.ring_mul(b).ring_add(a).ring_add(RingPoly::one());
    case TermKind::Eqv:
      return a.ring_add(b).ring_add(RingPoly::one());
    default:
      throw Error(ErrorKind::InternalInconsistency, "not a binary connective");
  }
}

NormalForm scalar_nf(RingPoly p) {
  NormalForm nf;
  nf.scalar = std::move(p);
  return nf;
}

// Collapses constant tuples: a zero component makes the whole tuple the
// scalar 0, an all-one tuple is the scalar 1.
NormalForm tuple_nf(std::vector<RingPoly> comps) {
  for (const RingPoly& c : comps)
    if (c.is_zero()) return scalar_nf(RingPoly::zero());
  bool all_one = std::all_of(comps.begin(), comps.end(),
                             [](const RingPoly& c) { return c.is_one(); });
  if (all_one) return scalar_nf(RingPoly::one());
  NormalForm nf;
  nf.is_tuple = true;
  nf.tuple = std::move(comps);
  return nf;
}

NormalForm nf_binop(TermKind op, const NormalForm& a, const NormalForm& b) {
  if (!a.is_tuple && !b.is_tuple)
    return scalar_nf(poly_binop(op, a.scalar, b.scalar));
  if (a.is_tuple && b.is_tuple) {
    if (a.tuple.size() != b.tuple.size())
      throw Error(ErrorKind::ArityMismatch, "tuple operands of different arity");
    std::vector<RingPoly> comps;
    comps.reserve(a.tuple.size());
    for (std::size_t i = 0; i < a.tuple.size(); ++i)
      comps.push_back(poly_binop(op, a.tuple[i], b.tuple[i]));
    return tuple_nf(std::move(comps));
  }
  // Scalars broadcast across tuple components.
  const NormalForm& tup = a.is_tuple ? a : b;
  const NormalForm& sca = a.is_tuple ? b : a;
  std::vector<RingPoly> comps;
  comps.reserve(tup.tuple.size());
  for (std::size_t i = 0; i < tup.tuple.size(); ++i) {
    comps.push_back(a.is_tuple ? poly_binop(op, tup.tuple[i], sca.scalar)
                               : poly_binop(op, sca.scalar, tup.tuple[i]));
  }
  return tuple_nf(std::move(comps));
}

// Terms coming out of the pipeline are DAGs with heavily shared subterms;
// normalization memoizes per node.
struct Normalizer {
  std::unordered_map<const Term*, NormalForm> memo;

  NormalForm rec(const TermPtr& t) {
    auto it = memo.find(t.get());
    if (it != memo.end()) return it->second;
    NormalForm nf = compute(t);
    memo.emplace(t.get(), nf);
    return nf;
  }

  NormalForm fold(TermKind op, const std::vector<TermPtr>& kids) {
    NormalForm acc = rec(kids.front());
    for (std::size_t i = 1; i < kids.size(); ++i)
      acc = nf_binop(op, acc, rec(kids[i]));
    return acc;
  }

  NormalForm compute(const TermPtr& t);
};

NormalForm Normalizer::compute(const TermPtr& t) {
  switch (t->kind) {
    case TermKind::ConstF:
    case TermKind::Zero:
      return scalar_nf(RingPoly::zero());
    case TermKind::ConstT:
    case TermKind::One:
      return scalar_nf(RingPoly::one());
    case TermKind::Var:
      return scalar_nf(RingPoly::variable(t->var));
    case TermKind::FTuple:
      return tuple_nf(std::vector<RingPoly>(t->arity, RingPoly::zero()));
    case TermKind::TTuple:
      return tuple_nf(std::vector<RingPoly>(t->arity, RingPoly::one()));
    case TermKind::Tuple: {
      std::vector<RingPoly> comps;
      comps.reserve(t->kids.size());
      for (const auto& k : t->kids) {
        NormalForm c = rec(k);
        if (c.is_tuple)
          throw Error(ErrorKind::ArityMismatch, "nested tuple component");
        comps.push_back(std::move(c.scalar));
      }
      return tuple_nf(std::move(comps));
    }
    case TermKind::Not: {
      NormalForm a = rec(t->kids[0]);
      if (!a.is_tuple) return scalar_nf(poly_not(a.scalar));
      std::vector<RingPoly> comps;
      comps.reserve(a.tuple.size());
      for (const auto& c : a.tuple) comps.push_back(poly_not(c));
      return tuple_nf(std::move(comps));
    }
    case TermKind::And:
    case TermKind::Or:
    case TermKind::Sub:
    case TermKind::Imp:
    case TermKind::Eqv:
      return nf_binop(t->kind, rec(t->kids[0]), rec(t->kids[1]));
    case TermKind::Add:
    case TermKind::Mul:
      return fold(t->kind, t->kids);
  }
  throw Error(ErrorKind::InternalInconsistency, "bad term kind");
}

TermPtr poly_term(const RingPoly& p) {
  if (p.is_zero()) return t_zero();
  std::vector<TermPtr> monos;
  monos.reserve(p.monomials.size());
  for (const Monomial& m : p.monomials) {
    if (m.empty()) {
      monos.push_back(t_one());
      continue;
    }
    std::vector<TermPtr> vars;
    vars.reserve(m.size());
    for (std::uint32_t v : m) vars.push_back(t_var(v));
    monos.push_back(t_mul(std::move(vars)));
  }
  return t_add(std::move(monos));
}

}  // namespace

NormalForm normalize_nf(const TermPtr& t) { return Normalizer().rec(t); }

TermPtr normal_form_term(const NormalForm& nf) {
  if (!nf.is_tuple) return poly_term(nf.scalar);
  std::vector<TermPtr> comps;
  comps.reserve(nf.tuple.size());
  for (const RingPoly& c : nf.tuple) comps.push_back(poly_term(c));
  return t_tuple(std::move(comps));
}

TermPtr normalize(const TermPtr& t) { return normal_form_term(normalize_nf(t)); }

bool is_tautology(const TermPtr& t) {
  NormalForm nf = normalize_nf(t);
  return !nf.is_tuple && nf.scalar.is_one();
}

bool is_contradiction(const TermPtr& t) {
  NormalForm nf = normalize_nf(t);
  return !nf.is_tuple && nf.scalar.is_zero();
}

// ---------------------------------------------------------------------------
// Traced rewriting engine.
// ---------------------------------------------------------------------------

namespace {

bool contains_tuple(const TermPtr& t) {
  switch (t->kind) {
    case TermKind::Tuple:
    case TermKind::FTuple:
    case TermKind::TTuple:
      return true;
    default:
      break;
  }
  return std::any_of(t->kids.begin(), t->kids.end(), contains_tuple);
}

bool is_tuple_node(const TermPtr& t) { return t->kind == TermKind::Tuple; }

// Fully normalized scalar: a canonical XOR of sorted monomials. The tuple
// distribution rules wait for this shape so the collapse rules get to fire
// first; otherwise a component that still reduces to 0 would be distributed
// instead of annihilating its tuple.
bool is_normal_monomial(const TermPtr& t) {
  if (t->kind == TermKind::One || t->kind == TermKind::Var) return true;
  if (t->kind != TermKind::Mul) return false;
  for (std::size_t i = 0; i < t->kids.size(); ++i) {
    if (t->kids[i]->kind != TermKind::Var) return false;
    if (i > 0 && t->kids[i - 1]->var >= t->kids[i]->var) return false;
  }
  return true;
}

bool is_normal_scalar(const TermPtr& t) {
  switch (t->kind) {
    case TermKind::Zero:
    case TermKind::One:
    case TermKind::Var:
      return true;
    case TermKind::Mul:
      return is_normal_monomial(t);
    case TermKind::Add: {
      for (std::size_t i = 0; i < t->kids.size(); ++i) {
        if (!is_normal_monomial(t->kids[i])) return false;
        if (i > 0 && term_equal(t->kids[i - 1], t->kids[i])) return false;
      }
      return true;
    }
    default:
      return false;
  }
}

bool is_ready_tuple(const TermPtr& t) {
  return is_tuple_node(t) &&
         std::all_of(t->kids.begin(), t->kids.end(), is_normal_scalar);
}

// Componentwise pairing for the tuple distribution rules; scalars are
// replicated, mirroring how derivations treat a collapsed side.
bool tuple_operands(const TermPtr& a, const TermPtr& b,
                    std::vector<TermPtr>& left, std::vector<TermPtr>& right) {
  if (is_ready_tuple(a) && is_ready_tuple(b)) {
    if (a->kids.size() != b->kids.size())
      throw Error(ErrorKind::ArityMismatch, "tuple operands of different arity");
    left = a->kids;
    right = b->kids;
    return true;
  }
  if (is_ready_tuple(a) && is_normal_scalar(b)) {
    left = a->kids;
    right.assign(a->kids.size(), b);
    return true;
  }
  if (is_normal_scalar(a) && is_ready_tuple(b)) {
    left.assign(b->kids.size(), a);
    right = b->kids;
    return true;
  }
  return false;
}

using NodeRule = TermPtr (*)(const TermPtr&);

TermPtr rebuild(const TermPtr& t, std::vector<TermPtr> kids) {
  switch (t->kind) {
    case TermKind::Add: return t_add(std::move(kids));
    case TermKind::Mul: return t_mul(std::move(kids));
    case TermKind::Tuple: return t_tuple(std::move(kids));
    default: {
      Term node = *t;
      node.kids = std::move(kids);
      return mk(std::move(node));
    }
  }
}

TermPtr transform(const TermPtr& t, NodeRule rule) {
  TermPtr base = t;
  if (!t->kids.empty()) {
    std::vector<TermPtr> kids;
    kids.reserve(t->kids.size());
    bool changed = false;
    for (const auto& k : t->kids) {
      TermPtr nk = transform(k, rule);
      changed = changed || nk != k;
      kids.push_back(std::move(nk));
    }
    if (changed) base = rebuild(t, std::move(kids));
  }
  return rule(base);
}

// T0 / T1: expand the tuple constant abbreviations.
TermPtr rule_t0(const TermPtr& t) {
  if (t->kind != TermKind::FTuple) return t;
  return t_tuple(std::vector<TermPtr>(t->arity, t_f()));
}
TermPtr rule_t1(const TermPtr& t) {
  if (t->kind != TermKind::TTuple) return t;
  return t_tuple(std::vector<TermPtr>(t->arity, t_t()));
}

// R0 / R1: boolean constants become ring constants.
TermPtr rule_r0(const TermPtr& t) { return t->kind == TermKind::ConstF ? t_zero() : t; }
TermPtr rule_r1(const TermPtr& t) { return t->kind == TermKind::ConstT ? t_one() : t; }

template <TermKind Op>
TermPtr rule_tuple_binop(const TermPtr& t) {
  if (t->kind != Op) return t;
  std::vector<TermPtr> left, right;
  if (!tuple_operands(t->kids[0], t->kids[1], left, right)) return t;
  std::vector<TermPtr> comps;
  comps.reserve(left.size());
  for (std::size_t i = 0; i < left.size(); ++i) {
    Term node{Op, 0, 0, {left[i], right[i]}};
    comps.push_back(mk(std::move(node)));
  }
  return t_tuple(std::move(comps));
}

TermPtr rule_t7(const TermPtr& t) {
  if (t->kind != TermKind::Not || !is_ready_tuple(t->kids[0])) return t;
  std::vector<TermPtr> comps;
  comps.reserve(t->kids[0]->kids.size());
  for (const auto& c : t->kids[0]->kids) comps.push_back(t_not(c));
  return t_tuple(std::move(comps));
}

TermPtr rule_t8(const TermPtr& t) {
  if (t->kind != TermKind::Tuple) return t;
  for (const auto& c : t->kids)
    if (c->kind == TermKind::Zero) return t_zero();
  return t;
}

TermPtr rule_t9(const TermPtr& t) {
  if (t->kind != TermKind::Tuple) return t;
  for (const auto& c : t->kids)
    if (c->kind != TermKind::One) return t;
  return t_one();
}

bool scalar_operands(const TermPtr& t) {
  return !contains_tuple(t->kids[0]) && !contains_tuple(t->kids[1]);
}

TermPtr rule_r2(const TermPtr& t) {
  if (t->kind != TermKind::Sub || !scalar_operands(t)) return t;
  return t_add({t->kids[0], t_mul({t->kids[0], t->kids[1]})});
}
TermPtr rule_r3(const TermPtr& t) {
  if (t->kind != TermKind::Or || !scalar_operands(t)) return t;
  return t_add({t_mul({t->kids[0], t->kids[1]}), t->kids[0], t->kids[1]});
}
TermPtr rule_r4(const TermPtr& t) {
  if (t->kind != TermKind::And || !scalar_operands(t)) return t;
  return t_mul({t->kids[0], t->kids[1]});
}
TermPtr rule_r5(const TermPtr& t) {
  if (t->kind != TermKind::Imp || !scalar_operands(t)) return t;
  return t_add({t_mul({t->kids[0], t->kids[1]}), t->kids[0], t_one()});
}
TermPtr rule_r6(const TermPtr& t) {
  if (t->kind != TermKind::Eqv || !scalar_operands(t)) return t;
  return t_add({t->kids[0], t->kids[1], t_one()});
}
TermPtr rule_r7(const TermPtr& t) {
  if (t->kind != TermKind::Not || contains_tuple(t->kids[0])) return t;
  return t_add({t->kids[0], t_one()});
}

TermPtr rule_r8(const TermPtr& t) {
  if (t->kind != TermKind::Add) return t;
  std::vector<TermPtr> kept;
  for (const auto& k : t->kids)
    if (k->kind != TermKind::Zero) kept.push_back(k);
  if (kept.size() == t->kids.size()) return t;
  return t_add(std::move(kept));
}

TermPtr rule_r9(const TermPtr& t) {
  if (t->kind != TermKind::Add) return t;
  // Operands are sorted, equal summands are adjacent; pairs cancel.
  std::vector<TermPtr> kept;
  std::size_t i = 0;
  bool changed = false;
  while (i < t->kids.size()) {
    std::size_t j = i;
    while (j < t->kids.size() && term_equal(t->kids[i], t->kids[j])) ++j;
    std::size_t run = j - i;
    if (run % 2 == 1) kept.push_back(t->kids[i]);
    if (run > 1) changed = true;
    i = j;
  }
  if (!changed) return t;
  return t_add(std::move(kept));
}

TermPtr rule_r10(const TermPtr& t) {
  if (t->kind != TermKind::Mul) return t;
  std::vector<TermPtr> kept;
  for (const auto& k : t->kids)
    if (k->kind != TermKind::One) kept.push_back(k);
  if (kept.size() == t->kids.size()) return t;
  return t_mul(std::move(kept));
}

TermPtr rule_r11(const TermPtr& t) {
  if (t->kind != TermKind::Mul) return t;
  std::vector<TermPtr> kept;
  bool changed = false;
  for (const auto& k : t->kids) {
    if (!kept.empty() && term_equal(kept.back(), k)) {
      changed = true;
      continue;
    }
    kept.push_back(k);
  }
  if (!changed) return t;
  return t_mul(std::move(kept));
}

TermPtr rule_r12(const TermPtr& t) {
  if (t->kind != TermKind::Mul) return t;
  for (const auto& k : t->kids)
    if (k->kind == TermKind::Zero) return t_zero();
  return t;
}

TermPtr rule_r13(const TermPtr& t) {
  if (t->kind != TermKind::Mul) return t;
  std::size_t sum_at = t->kids.size();
  for (std::size_t i = 0; i < t->kids.size(); ++i) {
    if (t->kids[i]->kind == TermKind::Add) {
      sum_at = i;
      break;
    }
  }
  if (sum_at == t->kids.size()) return t;
  std::vector<TermPtr> rest;
  for (std::size_t i = 0; i < t->kids.size(); ++i)
    if (i != sum_at) rest.push_back(t->kids[i]);
  std::vector<TermPtr> summands;
  summands.reserve(t->kids[sum_at]->kids.size());
  for (const auto& s : t->kids[sum_at]->kids) {
    std::vector<TermPtr> factors = rest;
    factors.push_back(s);
    summands.push_back(t_mul(std::move(factors)));
  }
  return t_add(std::move(summands));
}

struct RuleEntry {
  const char* name;
  NodeRule fn;
};

// Priority order: abbreviations and constants first, then the tuple collapse
// rules (a tuple with a zero component must vanish before any comparison
// distributes over it), then tuple distribution, algebra-to-ring
// translation, and ring cleanup; the distribution rule runs last to keep
// intermediate terms small.
const RuleEntry kRules[] = {
    {"T0", rule_t0},
    {"T1", rule_t1},
    {"R0", rule_r0},
    {"R1", rule_r1},
    {"T8", rule_t8},
    {"T9", rule_t9},
    {"T2", rule_tuple_binop<TermKind::Sub>},
    {"T3", rule_tuple_binop<TermKind::Or>},
    {"T4", rule_tuple_binop<TermKind::And>},
    {"T5", rule_tuple_binop<TermKind::Imp>},
    {"T6", rule_tuple_binop<TermKind::Eqv>},
    {"T7", rule_t7},
    {"R2", rule_r2},
    {"R3", rule_r3},
    {"R4", rule_r4},
    {"R5", rule_r5},
    {"R6", rule_r6},
    {"R7", rule_r7},
    {"R12", rule_r12},
    {"R11", rule_r11},
    {"R10", rule_r10},
    {"R9", rule_r9},
    {"R8", rule_r8},
    {"R13", rule_r13},
};

}  // namespace

TermPtr apply_rule(const std::string& rule, const TermPtr& t, bool* changed) {
  for (const RuleEntry& entry : kRules) {
    if (rule == entry.name) {
      TermPtr out = transform(t, entry.fn);
      if (changed) *changed = !term_equal(out, t);
      return out;
    }
  }
  throw Error(ErrorKind::InternalInconsistency, "unknown rule " + rule);
}

DerivationTrace rewrite_trace(const TermPtr& t, std::size_t max_steps) {
  DerivationTrace trace;
  trace.input = t;
  TermPtr current = t;
  for (;;) {
    bool progressed = false;
    for (const RuleEntry& entry : kRules) {
      TermPtr next = transform(current, entry.fn);
      if (!term_equal(next, current)) {
        trace.steps.push_back(TraceStep{entry.name, current, next});
        current = std::move(next);
        progressed = true;
        break;
      }
    }
    if (!progressed) break;
    if (trace.steps.size() > max_steps)
      throw Error(ErrorKind::InternalInconsistency,
                  "derivation exceeded the step limit");
  }
  trace.result = current;
  return trace;
}

bool is_tautology_traced(const TermPtr& t, DerivationTrace& trace) {
  trace = rewrite_trace(t);
  return trace.result->kind == TermKind::One;
}

std::string print_trace(const DerivationTrace& trace,
                        const std::vector<std::string>& names) {
  std::string out = print_term(trace.input, names) + "\n";
  for (const TraceStep& step : trace.steps) {
    out += "-> " + print_term(step.after, names) + " ; by " + step.rule + "\n";
  }
  return out;
}

// ---------------------------------------------------------------------------
// From atomized semantics to terms.
// ---------------------------------------------------------------------------

namespace {

struct TermBuilder {
  const Vocabulary& vocab;
  const AttributeSchema& schema;
  SymbolTable& symbols;
  std::vector<std::string>& names;
  std::map<const AtomizedSetExpr*, TermPtr> memo;

  TermPtr atom_var(std::uint32_t index) {
    const Atom& atom = vocab.atoms[index];
    names[index] = symbols.name_for(atom.slot, atom.block);
    return t_var(index);
  }

  TermPtr tuple_term(const AtomizedTuple& t) {
    bool all_empty = true;
    bool all_full = true;
    for (const auto& c : t.components) {
      if (c.full) all_empty = false;
      else if (!c.atoms.empty()) all_empty = all_full = false;
      else all_full = false;
    }
    std::uint32_t arity = static_cast<std::uint32_t>(t.components.size());
    if (all_empty) return t_ftuple(arity);
    if (all_full) return t_ttuple(arity);
    std::vector<TermPtr> comps;
    comps.reserve(t.components.size());
    for (const auto& c : t.components) {
      if (c.full) {
        comps.push_back(t_t());
      } else if (c.atoms.empty()) {
        comps.push_back(t_f());
      } else {
        TermPtr acc = atom_var(c.atoms.front());
        for (std::size_t i = 1; i < c.atoms.size(); ++i)
          acc = t_or(acc, atom_var(c.atoms[i]));
        comps.push_back(std::move(acc));
      }
    }
    return t_tuple(std::move(comps));
  }

  TermPtr convert(const AtomizedSetPtr& e) {
    auto it = memo.find(e.get());
    if (it != memo.end()) return it->second;
    TermPtr out;
    switch (e->op) {
      case SetOp::Leaf:
        out = tuple_term(e->leaf);
        break;
      case SetOp::Union:
      case SetOp::Inter:
      case SetOp::Minus: {
        // Sequenced so atom naming follows reading order.
        TermPtr left = convert(e->left);
        TermPtr right = convert(e->right);
        out = e->op == SetOp::Union   ? t_or(left, right)
              : e->op == SetOp::Inter ? t_and(left, right)
                                      : t_sub(left, right);
        break;
      }
      case SetOp::Compl:
        out = t_not(convert(e->left));
        break;
      case SetOp::OMinus:
      case SetOp::CornerAssert:
      case SetOp::CornerDual:
        throw Error(ErrorKind::IndeterminateUnsupported,
                    "overlap subtraction has no two-valued ring image");
    }
    if (!out)
      throw Error(ErrorKind::InternalInconsistency, "bad set operator");
    memo.emplace(e.get(), out);
    return out;
  }
};

}  // namespace

PolicyRingTerms sempair_to_terms(const AtomizedSemPair& pair,
                                 const Vocabulary& vocabulary,
                                 const AttributeSchema& schema,
                                 SymbolTable& symbols,
                                 std::vector<std::string>& atom_names) {
  if (atom_names.size() < vocabulary.atoms.size())
    atom_names.resize(vocabulary.atoms.size());
  TermBuilder builder{vocabulary, schema, symbols, atom_names, {}};
  TermPtr permit = builder.convert(pair.accept);
  TermPtr deny = builder.convert(pair.deny);
  return PolicyRingTerms{std::move(permit), std::move(deny)};
}

}  // namespace polsim
