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

// Test-only reference implementations. Everything here evaluates by direct
// enumeration and stays independent of the normalization code it checks.

#pragma once

#include <fstream>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "polsim/bench.hpp"
#include "polsim/ring.hpp"
#include "polsim/semantics.hpp"
#include "polsim/similarity.hpp"

namespace polsim::testing {

inline std::string read_fixture(const std::string& name) {
  std::string path = std::string(POLSIM_FIXTURE_DIR) + "/" + name;
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("missing fixture " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

// --- Two-valued term evaluation by recursion (tuples read as the
// conjunction of their components). ---------------------------------------

inline bool eval_term(const TermPtr& t, const std::vector<bool>& env) {
  switch (t->kind) {
    case TermKind::ConstF:
    case TermKind::Zero:
      return false;
    case TermKind::ConstT:
    case TermKind::One:
      return true;
    case TermKind::Var:
      return t->var < env.size() && env[t->var];
    case TermKind::FTuple:
      return t->arity == 0;
    case TermKind::TTuple:
      return true;
    case TermKind::Tuple: {
      for (const auto& c : t->kids)
        if (!eval_term(c, env)) return false;
      return true;
    }
    case TermKind::Not:
      return !eval_term(t->kids[0], env);
    case TermKind::And:
      return eval_term(t->kids[0], env) && eval_term(t->kids[1], env);
    case TermKind::Or:
      return eval_term(t->kids[0], env) || eval_term(t->kids[1], env);
    case TermKind::Sub:
      return eval_term(t->kids[0], env) && !eval_term(t->kids[1], env);
    case TermKind::Imp:
      return !eval_term(t->kids[0], env) || eval_term(t->kids[1], env);
    case TermKind::Eqv:
      return eval_term(t->kids[0], env) == eval_term(t->kids[1], env);
    case TermKind::Add: {
      bool v = false;
      for (const auto& k : t->kids) v = v != eval_term(k, env);
      return v;
    }
    case TermKind::Mul: {
      for (const auto& k : t->kids)
        if (!eval_term(k, env)) return false;
      return true;
    }
  }
  return false;
}

// Componentwise value of a term: scalar or a vector per tuple component.
struct VecValue {
  bool is_tuple = false;
  bool scalar = false;
  std::vector<bool> tuple;
};

inline VecValue eval_term_vec(const TermPtr& t, const std::vector<bool>& env) {
  auto scalar = [](bool b) { return VecValue{false, b, {}}; };
  switch (t->kind) {
    case TermKind::FTuple:
      return VecValue{true, false, std::vector<bool>(t->arity, false)};
    case TermKind::TTuple:
      return VecValue{true, false, std::vector<bool>(t->arity, true)};
    case TermKind::Tuple: {
      VecValue v{true, false, {}};
      for (const auto& c : t->kids) v.tuple.push_back(eval_term(c, env));
      return v;
    }
    case TermKind::Not: {
      VecValue a = eval_term_vec(t->kids[0], env);
      if (!a.is_tuple) return scalar(!a.scalar);
      for (auto&& b : a.tuple) b = !b;
      return a;
    }
    case TermKind::And:
    case TermKind::Or:
    case TermKind::Sub:
    case TermKind::Imp:
    case TermKind::Eqv: {
      VecValue a = eval_term_vec(t->kids[0], env);
      VecValue b = eval_term_vec(t->kids[1], env);
      auto apply = [&](bool x, bool y) {
        switch (t->kind) {
          case TermKind::And: return x && y;
          case TermKind::Or: return x || y;
          case TermKind::Sub: return x && !y;
          case TermKind::Imp: return !x || y;
          default: return x == y;
        }
      };
      if (!a.is_tuple && !b.is_tuple) return scalar(apply(a.scalar, b.scalar));
      std::size_t n = a.is_tuple ? a.tuple.size() : b.tuple.size();
      VecValue out{true, false, std::vector<bool>(n)};
      for (std::size_t i = 0; i < n; ++i) {
        bool x = a.is_tuple ? a.tuple[i] : a.scalar;
        bool y = b.is_tuple ? b.tuple[i] : b.scalar;
        out.tuple[i] = apply(x, y);
      }
      return out;
    }
    default:
      return scalar(eval_term(t, env));
  }
}

// --- Membership tables under the componentwise reading. --------------------
//
// Mirrors the tuple semantics the prover implements, but over truth tables
// computed by enumeration: operators distribute componentwise, scalars
// broadcast, a tuple with an identically-false component denotes the empty
// region and an all-true tuple the full one. A request is a member when
// every component holds.

struct TableValue {
  bool is_tuple = false;
  std::vector<bool> scalar;
  std::vector<std::vector<bool>> tuple;
};

inline TableValue table_collapse(std::vector<std::vector<bool>> comps,
                                 std::size_t rows) {
  for (const auto& c : comps) {
    if (std::none_of(c.begin(), c.end(), [](bool b) { return b; }))
      return TableValue{false, std::vector<bool>(rows, false), {}};
  }
  bool all_true = std::all_of(comps.begin(), comps.end(), [](const auto& c) {
    return std::all_of(c.begin(), c.end(), [](bool b) { return b; });
  });
  if (all_true) return TableValue{false, std::vector<bool>(rows, true), {}};
  return TableValue{true, {}, std::move(comps)};
}

inline std::vector<bool> scalar_table(const TermPtr& t, std::size_t atoms) {
  const std::size_t rows = std::size_t{1} << atoms;
  std::vector<bool> table(rows);
  for (std::size_t bits = 0; bits < rows; ++bits) {
    std::vector<bool> env(atoms);
    for (std::size_t i = 0; i < atoms; ++i) env[i] = bits & (std::size_t{1} << i);
    table[bits] = eval_term(t, env);
  }
  return table;
}

inline TableValue table_value(const TermPtr& t, std::size_t atoms) {
  const std::size_t rows = std::size_t{1} << atoms;
  auto binop = [&](TermKind op, const TableValue& a, const TableValue& b) {
    auto apply = [&](bool x, bool y) {
      switch (op) {
        case TermKind::And:
        case TermKind::Mul: return x && y;
        case TermKind::Or: return x || y;
        case TermKind::Sub: return x && !y;
        case TermKind::Imp: return !x || y;
        case TermKind::Eqv: return x == y;
        default: return x != y;  // Add
      }
    };
    if (!a.is_tuple && !b.is_tuple) {
      std::vector<bool> out(rows);
      for (std::size_t r = 0; r < rows; ++r)
        out[r] = apply(a.scalar[r], b.scalar[r]);
      return TableValue{false, std::move(out), {}};
    }
    std::size_t n = a.is_tuple ? a.tuple.size() : b.tuple.size();
    std::vector<std::vector<bool>> comps(n, std::vector<bool>(rows));
    for (std::size_t i = 0; i < n; ++i) {
      const std::vector<bool>& x = a.is_tuple ? a.tuple[i] : a.scalar;
      const std::vector<bool>& y = b.is_tuple ? b.tuple[i] : b.scalar;
      for (std::size_t r = 0; r < rows; ++r) comps[i][r] = apply(x[r], y[r]);
    }
    return table_collapse(std::move(comps), rows);
  };

  switch (t->kind) {
    case TermKind::FTuple:
      return TableValue{false, std::vector<bool>(rows, t->arity == 0), {}};
    case TermKind::TTuple:
      return TableValue{false, std::vector<bool>(rows, true), {}};
    case TermKind::Tuple: {
      std::vector<std::vector<bool>> comps;
      for (const auto& c : t->kids) comps.push_back(scalar_table(c, atoms));
      return table_collapse(std::move(comps), rows);
    }
    case TermKind::Not: {
      TableValue a = table_value(t->kids[0], atoms);
      if (!a.is_tuple) {
        for (std::size_t r = 0; r < rows; ++r) a.scalar[r] = !a.scalar[r];
        return a;
      }
      for (auto& comp : a.tuple)
        for (std::size_t r = 0; r < rows; ++r) comp[r] = !comp[r];
      return table_collapse(std::move(a.tuple), rows);
    }
    case TermKind::And:
    case TermKind::Or:
    case TermKind::Sub:
    case TermKind::Imp:
    case TermKind::Eqv:
      return binop(t->kind, table_value(t->kids[0], atoms),
                   table_value(t->kids[1], atoms));
    case TermKind::Add:
    case TermKind::Mul: {
      TableValue acc = table_value(t->kids[0], atoms);
      for (std::size_t i = 1; i < t->kids.size(); ++i)
        acc = binop(t->kind, acc, table_value(t->kids[i], atoms));
      return acc;
    }
    default:
      return TableValue{false, scalar_table(t, atoms), {}};
  }
}

// Membership of each assignment in the term's region.
inline std::vector<bool> membership_table(const TermPtr& t, std::size_t atoms) {
  TableValue v = table_value(t, atoms);
  if (!v.is_tuple) return v.scalar;
  const std::size_t rows = std::size_t{1} << atoms;
  std::vector<bool> out(rows, true);
  for (const auto& comp : v.tuple)
    for (std::size_t r = 0; r < rows; ++r)
      out[r] = out[r] && comp[r];
  return out;
}

// --- Set-level evaluation of SemPair expressions by full request
// enumeration. -------------------------------------------------------------

// The request space of a schema: every combination of concrete values.
inline std::vector<std::vector<std::size_t>> all_requests(
    const AttributeSchema& schema) {
  std::vector<std::vector<std::size_t>> out{{}};
  for (std::size_t slot = 0; slot < schema.arity(); ++slot) {
    std::vector<std::vector<std::size_t>> next;
    for (const auto& prefix : out) {
      for (std::size_t v = 0; v < schema.slot(slot).values.size(); ++v) {
        auto extended = prefix;
        extended.push_back(v);
        next.push_back(std::move(extended));
      }
    }
    out = std::move(next);
  }
  return out;
}

struct SetValue {
  bool unknown = false;
  std::set<std::size_t> members;  // indices into the request enumeration
};

inline SetValue eval_set(const SetExprPtr& e,
                         const std::vector<std::vector<std::size_t>>& requests,
                         const AttributeSchema& schema) {
  switch (e->op) {
    case SetOp::Leaf: {
      SetValue out;
      for (std::size_t r = 0; r < requests.size(); ++r) {
        bool inside = true;
        for (std::size_t slot = 0; slot < schema.arity(); ++slot) {
          if (!e->leaf.component(slot).contains(requests[r][slot])) {
            inside = false;
            break;
          }
        }
        if (inside) out.members.insert(r);
      }
      return out;
    }
    case SetOp::Compl: {
      SetValue a = eval_set(e->left, requests, schema);
      if (a.unknown) return a;
      SetValue out;
      for (std::size_t r = 0; r < requests.size(); ++r)
        if (!a.members.count(r)) out.members.insert(r);
      return out;
    }
    case SetOp::CornerAssert: {
      SetValue a = eval_set(e->left, requests, schema);
      if (a.unknown) return SetValue{};  // empty
      return a;
    }
    case SetOp::CornerDual: {
      SetValue a = eval_set(e->left, requests, schema);
      if (!a.unknown) return a;
      SetValue out;
      for (std::size_t r = 0; r < requests.size(); ++r) out.members.insert(r);
      return out;
    }
    default:
      break;
  }
  SetValue a = eval_set(e->left, requests, schema);
  SetValue b = eval_set(e->right, requests, schema);
  if (e->op == SetOp::OMinus) {
    if (a.unknown || b.unknown) return SetValue{true, {}};
    bool overlap = false;
    for (std::size_t r : a.members)
      if (b.members.count(r)) {
        overlap = true;
        break;
      }
    if (overlap) return SetValue{true, {}};
    return a;
  }
  if (a.unknown || b.unknown) return SetValue{true, {}};
  SetValue out;
  switch (e->op) {
    case SetOp::Union:
      out.members = a.members;
      out.members.insert(b.members.begin(), b.members.end());
      break;
    case SetOp::Inter:
      for (std::size_t r : a.members)
        if (b.members.count(r)) out.members.insert(r);
      break;
    case SetOp::Minus:
      for (std::size_t r : a.members)
        if (!b.members.count(r)) out.members.insert(r);
      break;
    default:
      break;
  }
  return out;
}

// --- Random instances. ------------------------------------------------------

inline AttributeSchema small_schema(std::size_t attrs, std::size_t values) {
  std::vector<AttributeSlot> slots;
  for (std::size_t i = 0; i < attrs; ++i) {
    AttributeSlot slot;
    slot.name = "attr" + std::to_string(i + 1);
    for (std::size_t v = 0; v < values; ++v)
      slot.values.push_back("v" + std::to_string(v + 1));
    slots.push_back(std::move(slot));
  }
  return AttributeSchema(std::move(slots));
}

inline ValueSet random_value_set(std::mt19937_64& rng, std::size_t domain) {
  ValueSet set(domain);
  for (std::size_t v = 0; v < domain; ++v)
    if (rng() % 2) set.insert(v);
  return set;
}

inline ConstraintTuple random_tuple(std::mt19937_64& rng,
                                    const AttributeSchema& schema) {
  std::vector<ValueSet> comps;
  for (std::size_t i = 0; i < schema.arity(); ++i)
    comps.push_back(random_value_set(rng, schema.slot(i).values.size()));
  return ConstraintTuple(std::move(comps));
}

// Random policy term built from rule leaves and the SePL operators. Scoped
// nodes only wrap scope-friendly children; subtraction stays outside scopes.
inline PolicyPtr random_policy(std::mt19937_64& rng,
                               const AttributeSchema& schema,
                               std::size_t depth, bool allow_ominus,
                               bool under_scope = false) {
  std::size_t leaf_cut = under_scope ? 3 : 2;
  if (depth == 0 || rng() % 10 < leaf_cut) {
    switch (rng() % 8) {
      case 0: return mk_empty();
      case 1: return mk_deny_all();
      case 2: return mk_permit_all();
      default:
        return mk_rule(random_tuple(rng, schema), random_tuple(rng, schema));
    }
  }
  std::size_t pick = rng() % (allow_ominus ? 11 : 9);
  switch (pick) {
    case 0:
      return mk_unary(PolicyKind::Neg,
                      random_policy(rng, schema, depth - 1, allow_ominus,
                                    under_scope));
    case 1:
      return mk_unary(PolicyKind::Assert,
                      random_policy(rng, schema, depth - 1, allow_ominus,
                                    under_scope));
    case 2:
      if (!under_scope)
        return mk_scoped(random_tuple(rng, schema),
                         random_policy(rng, schema, depth - 1, allow_ominus,
                                       true));
      [[fallthrough]];
    case 3:
    case 4:
    case 5:
    case 6:
    case 7: {
      static const PolicyKind kinds[] = {PolicyKind::Seq, PolicyKind::PermitOv,
                                         PolicyKind::DenyOv, PolicyKind::Par,
                                         PolicyKind::Choice};
      PolicyKind kind = kinds[rng() % 5];
      return mk_binary(kind,
                       random_policy(rng, schema, depth - 1, allow_ominus,
                                     under_scope),
                       random_policy(rng, schema, depth - 1, allow_ominus,
                                     under_scope));
    }
    case 8:
      if (under_scope)
        return mk_rule(random_tuple(rng, schema), random_tuple(rng, schema));
      return mk_binary(PolicyKind::Minus,
                       random_policy(rng, schema, depth - 1, allow_ominus,
                                     false),
                       random_policy(rng, schema, depth - 1, allow_ominus,
                                     false));
    default:
      return mk_binary(PolicyKind::OMinus,
                       random_policy(rng, schema, depth - 1, allow_ominus,
                                     under_scope),
                       random_policy(rng, schema, depth - 1, allow_ominus,
                                     under_scope));
  }
}

// Random scalar boolean expression over a fixed set of atoms.
inline TermPtr random_scalar_term(std::mt19937_64& rng, std::uint32_t atoms,
                                  std::size_t depth) {
  if (depth == 0 || rng() % 5 == 0) {
    switch (rng() % 4) {
      case 0: return t_f();
      case 1: return t_t();
      default: return t_var(static_cast<std::uint32_t>(rng() % atoms));
    }
  }
  switch (rng() % 7) {
    case 0: return t_not(random_scalar_term(rng, atoms, depth - 1));
    case 1:
      return t_and(random_scalar_term(rng, atoms, depth - 1),
                   random_scalar_term(rng, atoms, depth - 1));
    case 2:
      return t_or(random_scalar_term(rng, atoms, depth - 1),
                  random_scalar_term(rng, atoms, depth - 1));
    case 3:
      return t_sub(random_scalar_term(rng, atoms, depth - 1),
                   random_scalar_term(rng, atoms, depth - 1));
    case 4:
      return t_imp(random_scalar_term(rng, atoms, depth - 1),
                   random_scalar_term(rng, atoms, depth - 1));
    case 5:
      return t_eqv(random_scalar_term(rng, atoms, depth - 1),
                   random_scalar_term(rng, atoms, depth - 1));
    default:
      return t_add({random_scalar_term(rng, atoms, depth - 1),
                    random_scalar_term(rng, atoms, depth - 1)});
  }
}

// --- Decision-level combining-algorithm oracles. ----------------------------

inline Decision pair_choice(const Decision& a, const Decision& b) {
  Tri accepts = tri_or(a.permit, b.permit);
  Tri denies = tri_or(a.deny, b.deny);
  return {tri_minus(accepts, denies), tri_minus(denies, accepts)};
}

inline Decision pair_ominus(const Decision& a, const Decision& b) {
  Tri applicable = tri_or(b.permit, b.deny);
  return {tri_ominus(a.permit, applicable), tri_ominus(a.deny, applicable)};
}

inline bool applicable(const Decision& d) {
  return d.permit != Tri::False || d.deny != Tri::False;
}

// Prose readings of the combining algorithms over already-computed
// sub-decisions (two-valued inputs).
inline Decision oracle_permit_overrides(const std::vector<Decision>& ds) {
  for (const Decision& d : ds)
    if (d.permit == Tri::True) return {Tri::True, Tri::False};
  for (const Decision& d : ds)
    if (d.deny == Tri::True) return {Tri::False, Tri::True};
  return {Tri::False, Tri::False};
}

inline Decision oracle_deny_overrides(const std::vector<Decision>& ds) {
  for (const Decision& d : ds)
    if (d.deny == Tri::True) return {Tri::False, Tri::True};
  for (const Decision& d : ds)
    if (d.permit == Tri::True) return {Tri::True, Tri::False};
  return {Tri::False, Tri::False};
}

inline Decision oracle_first_applicable(const std::vector<Decision>& ds) {
  for (const Decision& d : ds)
    if (applicable(d)) return d;
  return {Tri::False, Tri::False};
}

inline Decision clear_unknown(Decision d) {
  return {tri_assert(d.permit), tri_assert(d.deny)};
}

// Only-one-applicable, evaluated at the decision level with the three-valued
// overlap subtraction: policy j minus the choice-sum of all others, summed.
inline Decision oracle_only_one_applicable(const std::vector<Decision>& ds) {
  if (ds.size() == 1) return ds[0];
  std::optional<Decision> acc;
  for (std::size_t j = 0; j < ds.size(); ++j) {
    std::optional<Decision> others;
    for (std::size_t i = 0; i < ds.size(); ++i) {
      if (i == j) continue;
      others = others ? pair_choice(*others, ds[i]) : ds[i];
    }
    Decision part = pair_ominus(ds[j], *others);
    acc = acc ? pair_choice(*acc, part) : part;
  }
  return *acc;
}

// --- Simple statistics. ------------------------------------------------------

inline double linear_r2(const std::vector<double>& xs,
                        const std::vector<double>& ys) {
  const std::size_t n = xs.size();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
  }
  double denom = n * sxx - sx * sx;
  if (denom == 0) return 0.0;
  double slope = (n * sxy - sx * sy) / denom;
  double intercept = (sy - slope * sx) / n;
  double ss_res = 0, ss_tot = 0;
  double mean = sy / n;
  for (std::size_t i = 0; i < n; ++i) {
    double fit = slope * xs[i] + intercept;
    ss_res += (ys[i] - fit) * (ys[i] - fit);
    ss_tot += (ys[i] - mean) * (ys[i] - mean);
  }
  if (ss_tot == 0) return 1.0;
  return 1.0 - ss_res / ss_tot;
}

}  // namespace polsim::testing
