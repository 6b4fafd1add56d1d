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
#include <string>
#include <vector>

#include "polsim/semantics.hpp"

namespace polsim {

// One block of the per-attribute partition. Blocks of the same attribute are
// pairwise disjoint and jointly cover the slot domain.
struct Atom {
  std::size_t slot = 0;
  ValueSet block;
  std::string id;  // deterministic, attribute plus sorted block values
};

struct Vocabulary {
  std::vector<Atom> atoms;                       // slot-major order
  std::vector<std::vector<std::uint32_t>> by_slot;  // atom indices per slot
};

// A constraint tuple re-expressed over atoms: per component either the full
// domain or the exact list of covering blocks (empty list = empty set).
struct AtomizedTuple {
  struct Component {
    bool full = false;
    std::vector<std::uint32_t> atoms;
  };
  std::vector<Component> components;
};

struct AtomizedSetExpr;
using AtomizedSetPtr = std::shared_ptr<const AtomizedSetExpr>;

struct AtomizedSetExpr {
  SetOp op = SetOp::Leaf;
  AtomizedTuple leaf;
  AtomizedSetPtr left;
  AtomizedSetPtr right;
};

struct AtomizedSemPair {
  AtomizedSetPtr accept;
  AtomizedSetPtr deny;
};

struct AtomizedPair {
  Vocabulary vocabulary;
  AtomizedSemPair p1;
  AtomizedSemPair p2;
};

// Computes the coarsest per-attribute partition refining every value set the
// two policies mention and rewrites both over it.
AtomizedPair atomize(const SemPair& p1, const SemPair& p2,
                     const AttributeSchema& schema);

// Vocabulary size per attribute.
std::vector<std::size_t> atom_count(const AtomizedPair& pair,
                                    const AttributeSchema& schema);

}  // namespace polsim
