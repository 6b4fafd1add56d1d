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

#include "polsim/atomizer.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace polsim {

namespace {

// Distinct non-trivial value sets per slot, in first-appearance order.
// Semantics expressions share subtrees, so the walk tracks visited nodes.
struct PredicateCollector {
  std::vector<std::vector<ValueSet>> by_slot;
  std::set<const SetExpr*> visited;

  explicit PredicateCollector(std::size_t arity) : by_slot(arity) {}

  void add(std::size_t slot, const ValueSet& set) {
    if (set.empty() || set.full()) return;
    auto& sets = by_slot[slot];
    if (std::find(sets.begin(), sets.end(), set) == sets.end())
      sets.push_back(set);
  }

  void walk(const SetExprPtr& e) {
    if (!e || !visited.insert(e.get()).second) return;
    if (e->op == SetOp::Leaf) {
      for (std::size_t i = 0; i < e->leaf.arity(); ++i)
        add(i, e->leaf.component(i));
      return;
    }
    walk(e->left);
    walk(e->right);
  }
};

std::string block_id(const AttributeSchema& schema, std::size_t slot,
                     const ValueSet& block) {
  std::string id = schema.slot(slot).name + "=";
  bool first = true;
  for (std::size_t v = 0; v < block.domain_size(); ++v) {
    if (!block.contains(v)) continue;
    if (!first) id += "|";
    id += schema.slot(slot).values[v];
    first = false;
  }
  return id;
}

AtomizedTuple atomize_tuple(const ConstraintTuple& t,
                            const Vocabulary& vocab) {
  AtomizedTuple out;
  out.components.resize(t.arity());
  for (std::size_t i = 0; i < t.arity(); ++i) {
    const ValueSet& set = t.component(i);
    auto& comp = out.components[i];
    if (set.full()) {
      comp.full = true;
      continue;
    }
    if (set.empty()) continue;
    ValueSet covered(set.domain_size());
    for (std::uint32_t atom_idx : vocab.by_slot[i]) {
      const Atom& atom = vocab.atoms[atom_idx];
      if (atom.block.subset_of(set)) {
        comp.atoms.push_back(atom_idx);
        covered = covered.unite(atom.block);
      }
    }
    if (!(covered == set)) {
      throw Error(ErrorKind::InternalInconsistency,
                  "partition does not cover a mentioned value set");
    }
  }
  return out;
}

using AtomizeMemo = std::map<const SetExpr*, AtomizedSetPtr>;

// Preserves sharing: downstream conversion relies on the rewritten
// expression staying a DAG of the same shape.
AtomizedSetPtr atomize_expr(const SetExprPtr& e, const Vocabulary& vocab,
                            AtomizeMemo& memo) {
  if (!e) return nullptr;
  auto it = memo.find(e.get());
  if (it != memo.end()) return it->second;
  auto out = std::make_shared<AtomizedSetExpr>();
  out->op = e->op;
  if (e->op == SetOp::Leaf) {
    out->leaf = atomize_tuple(e->leaf, vocab);
  } else {
    out->left = atomize_expr(e->left, vocab, memo);
    out->right = atomize_expr(e->right, vocab, memo);
  }
  memo.emplace(e.get(), out);
  return out;
}

}  // namespace

AtomizedPair atomize(const SemPair& p1, const SemPair& p2,
                     const AttributeSchema& schema) {
  PredicateCollector predicates(schema.arity());
  predicates.walk(p1.accept);
  predicates.walk(p1.deny);
  predicates.walk(p2.accept);
  predicates.walk(p2.deny);

  Vocabulary vocab;
  vocab.by_slot.resize(schema.arity());
  for (std::size_t slot = 0; slot < schema.arity(); ++slot) {
    const auto& sets = predicates.by_slot[slot];
    const std::size_t domain = schema.slot(slot).values.size();
    // Group domain values by the set of predicates that mention them; each
    // group is one block, values mentioned nowhere form the residual block.
    std::map<std::vector<bool>, ValueSet> groups;
    for (std::size_t v = 0; v < domain; ++v) {
      std::vector<bool> signature(sets.size());
      for (std::size_t s = 0; s < sets.size(); ++s)
        signature[s] = sets[s].contains(v);
      auto [it, inserted] = groups.try_emplace(signature, ValueSet(domain));
      (void)inserted;
      it->second.insert(v);
    }
    std::vector<ValueSet> blocks;
    blocks.reserve(groups.size());
    for (auto& [sig, block] : groups) blocks.push_back(block);
    // Deterministic order: by smallest member, which follows the domain's
    // first-appearance order and keeps the residual last.
    std::sort(blocks.begin(), blocks.end(),
              [](const ValueSet& a, const ValueSet& b) {
                for (std::size_t v = 0; v < a.domain_size(); ++v) {
                  if (a.contains(v) != b.contains(v)) return a.contains(v);
                }
                return false;
              });
    for (const ValueSet& block : blocks) {
      vocab.by_slot[slot].push_back(
          static_cast<std::uint32_t>(vocab.atoms.size()));
      vocab.atoms.push_back(Atom{slot, block, block_id(schema, slot, block)});
    }
  }

  AtomizedPair out;
  AtomizeMemo memo;
  out.p1.accept = atomize_expr(p1.accept, vocab, memo);
  out.p1.deny = atomize_expr(p1.deny, vocab, memo);
  out.p2.accept = atomize_expr(p2.accept, vocab, memo);
  out.p2.deny = atomize_expr(p2.deny, vocab, memo);
  out.vocabulary = std::move(vocab);
  return out;
}

std::vector<std::size_t> atom_count(const AtomizedPair& pair,
                                    const AttributeSchema& schema) {
  std::vector<std::size_t> counts(schema.arity());
  for (std::size_t i = 0; i < schema.arity(); ++i)
    counts[i] = pair.vocabulary.by_slot[i].size();
  return counts;
}

}  // namespace polsim
