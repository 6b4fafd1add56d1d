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

#include "polsim/similarity.hpp"

#include <json.hpp>

#include "polsim/semantics.hpp"

namespace polsim {

const char* relation_name(Relation r) {
  switch (r) {
    case Relation::Converge: return "Converge";
    case Relation::Extend: return "Extend";
    case Relation::Restrict: return "Restrict";
    case Relation::Shuffle: return "Shuffle";
    case Relation::Diverge: return "Diverge";
  }
  return "Unknown";
}

const char* witness_kind_name(WitnessKind k) {
  switch (k) {
    case WitnessKind::In1Not2: return "in1not2";
    case WitnessKind::In2Not1: return "in2not1";
    case WitnessKind::InBoth: return "inBoth";
  }
  return "unknown";
}

namespace {

Relation relation_of(bool fwd, bool bwd, bool disjoint) {
  if (fwd && bwd) return Relation::Converge;
  if (fwd) return Relation::Extend;
  if (bwd) return Relation::Restrict;
  if (disjoint) return Relation::Diverge;
  return Relation::Shuffle;
}

}  // namespace

Relation compare_terms(const TermPtr& t1, const TermPtr& t2) {
  bool fwd = is_tautology(t_imp(t1, t2));
  bool bwd = is_tautology(t_imp(t2, t1));
  if (fwd || bwd) return relation_of(fwd, bwd, false);
  return relation_of(false, false, is_contradiction(t_and(t1, t2)));
}

// ---------------------------------------------------------------------------
// Pipeline.
// ---------------------------------------------------------------------------

namespace {

PreparedComparison prepare_expanded(const PolicyPtr& e1, const PolicyPtr& e2,
                                    const AttributeSchema& schema) {
  PreparedComparison out;
  out.schema = schema;
  out.sepl1 = print_policy(e1, out.schema, out.symbols);
  out.sepl2 = print_policy(e2, out.schema, out.symbols);
  SemPair s1 = absolute_semantics(e1, out.schema);
  SemPair s2 = absolute_semantics(e2, out.schema);
  AtomizedPair atomized = atomize(s1, s2, out.schema);
  out.vocabulary = std::move(atomized.vocabulary);
  out.atom_names.assign(out.vocabulary.atoms.size(), std::string());
  out.terms1 = sempair_to_terms(atomized.p1, out.vocabulary, out.schema,
                                out.symbols, out.atom_names);
  out.terms2 = sempair_to_terms(atomized.p2, out.vocabulary, out.schema,
                                out.symbols, out.atom_names);
  // Unreferenced atoms keep their verbose identifier.
  for (std::size_t i = 0; i < out.atom_names.size(); ++i)
    if (out.atom_names[i].empty())
      out.atom_names[i] = out.vocabulary.atoms[i].id;
  return out;
}

}  // namespace

PreparedComparison prepare_terms(const PolicyPtr& p1, const PolicyPtr& p2,
                                 const AttributeSchema& schema) {
  return prepare_expanded(expand_abbreviations(p1, schema),
                          expand_abbreviations(p2, schema), schema);
}

PreparedComparison prepare_comparison(const XacmlNode& doc1,
                                      const XacmlNode& doc2) {
  AttributeSchema schema = build_schema({&doc1, &doc2});
  return prepare_terms(to_sepl(doc1, schema), to_sepl(doc2, schema), schema);
}

SimilarityReport decide(const PreparedComparison& prepared,
                        const ClassifyOptions& options) {
  const TermPtr& p1 = prepared.terms1.permit;
  const TermPtr& d1 = prepared.terms1.deny;
  const TermPtr& p2 = prepared.terms2.permit;
  const TermPtr& d2 = prepared.terms2.deny;

  bool fwd_p = is_tautology(t_imp(p1, p2));
  bool fwd_d = is_tautology(t_imp(d1, d2));
  bool bwd_p = is_tautology(t_imp(p2, p1));
  bool bwd_d = is_tautology(t_imp(d2, d1));
  bool disj_p = is_contradiction(t_and(p1, p2));
  bool disj_d = is_contradiction(t_and(d1, d2));

  SimilarityReport report;
  report.relation = relation_of(fwd_p && fwd_d, bwd_p && bwd_d,
                                disj_p && disj_d);
  report.permit_relation = relation_of(fwd_p, bwd_p, disj_p);
  report.deny_relation = relation_of(fwd_d, bwd_d, disj_d);
  report.sepl1 = prepared.sepl1;
  report.sepl2 = prepared.sepl2;
  report.atom_names = prepared.atom_names;
  report.permit_term1 = print_term_clipped(p1, report.atom_names);
  report.deny_term1 = print_term_clipped(d1, report.atom_names);
  report.permit_term2 = print_term_clipped(p2, report.atom_names);
  report.deny_term2 = print_term_clipped(d2, report.atom_names);
  for (std::size_t i = 0; i < prepared.vocabulary.atoms.size(); ++i) {
    if (prepared.atom_names[i] != prepared.vocabulary.atoms[i].id)
      report.atoms.emplace_back(prepared.atom_names[i],
                                prepared.vocabulary.atoms[i].id);
  }

  if (options.traces) {
    DerivationTrace trace;
    is_tautology_traced(t_eqv(p1, p2), trace);
    report.permit_trace = std::move(trace);
    DerivationTrace dtrace;
    is_tautology_traced(t_eqv(d1, d2), dtrace);
    report.deny_trace = std::move(dtrace);
  }

  if (options.witnesses) {
    struct Part {
      const char* name;
      const TermPtr& a;
      const TermPtr& b;
      bool fwd, bwd;
    };
    const Part parts[] = {{"permit", p1, p2, fwd_p, bwd_p},
                          {"deny", d1, d2, fwd_d, bwd_d}};
    for (const Part& part : parts) {
      if (!part.fwd) {
        auto w = find_witness(part.a, part.b, WitnessKind::In1Not2,
                              prepared.vocabulary, prepared.schema);
        if (w) report.witnesses.push_back({part.name, WitnessKind::In1Not2, *w});
      }
      if (!part.bwd) {
        auto w = find_witness(part.a, part.b, WitnessKind::In2Not1,
                              prepared.vocabulary, prepared.schema);
        if (w) report.witnesses.push_back({part.name, WitnessKind::In2Not1, *w});
      }
    }
  }
  return report;
}

SimilarityReport classify_terms(const PolicyPtr& p1, const PolicyPtr& p2,
                                const AttributeSchema& schema,
                                const ClassifyOptions& options) {
  return decide(prepare_terms(p1, p2, schema), options);
}

SimilarityReport classify(const std::string& xml1, const std::string& xml2,
                          const ClassifyOptions& options) {
  XacmlNode doc1 = parse_xacml(xml1);
  XacmlNode doc2 = parse_xacml(xml2);
  return decide(prepare_comparison(doc1, doc2), options);
}

// ---------------------------------------------------------------------------
// Witness search. Works on the normalized componentwise polynomials; the
// request space factorizes per attribute because component i only mentions
// attribute i's atoms.
// ---------------------------------------------------------------------------

namespace {

bool poly_eval(const RingPoly& poly, const std::vector<bool>& assignment) {
  bool value = false;
  for (const Monomial& m : poly.monomials) {
    bool mono = true;
    for (std::uint32_t v : m) {
      if (!assignment[v]) {
        mono = false;
        break;
      }
    }
    value ^= mono;
  }
  return value;
}

// Membership of a request in a term's region: every component must hold.
bool nf_true(const NormalForm& nf, const std::vector<bool>& assignment) {
  if (!nf.is_tuple) return poly_eval(nf.scalar, assignment);
  for (const RingPoly& comp : nf.tuple)
    if (!poly_eval(comp, assignment)) return false;
  return true;
}

Request request_from_blocks(const std::vector<std::uint32_t>& chosen,
                            const Vocabulary& vocab,
                            const AttributeSchema& schema) {
  Request request;
  for (std::size_t slot = 0; slot < schema.arity(); ++slot) {
    const Atom& atom = vocab.atoms[chosen[slot]];
    for (std::size_t v = 0; v < atom.block.domain_size(); ++v) {
      if (atom.block.contains(v)) {
        request.bindings[schema.slot(slot).name] = schema.slot(slot).values[v];
        break;
      }
    }
  }
  return request;
}

constexpr std::size_t kMaxWitnessSpace = std::size_t{1} << 22;

}  // namespace

std::optional<Request> find_witness(const TermPtr& t1, const TermPtr& t2,
                                    WitnessKind kind,
                                    const Vocabulary& vocabulary,
                                    const AttributeSchema& schema) {
  if (kind == WitnessKind::In2Not1)
    return find_witness(t2, t1, WitnessKind::In1Not2, vocabulary, schema);
  NormalForm n1 = normalize_nf(t1);
  NormalForm n2 = normalize_nf(t2);
  const std::size_t arity = schema.arity();
  if ((n1.is_tuple && n1.tuple.size() != arity) ||
      (n2.is_tuple && n2.tuple.size() != arity))
    throw Error(ErrorKind::ArityMismatch, "term arity does not match schema");

  std::size_t space = 1;
  for (std::size_t slot = 0; slot < arity; ++slot) {
    if (vocabulary.by_slot[slot].empty()) return std::nullopt;
    space *= vocabulary.by_slot[slot].size();
    if (space > kMaxWitnessSpace) return std::nullopt;
  }

  // One block per attribute is one concrete request; walk the product space.
  std::vector<std::size_t> pick(arity, 0);
  std::vector<bool> assignment(vocabulary.atoms.size(), false);
  for (;;) {
    std::fill(assignment.begin(), assignment.end(), false);
    std::vector<std::uint32_t> chosen(arity);
    for (std::size_t slot = 0; slot < arity; ++slot) {
      chosen[slot] = vocabulary.by_slot[slot][pick[slot]];
      assignment[chosen[slot]] = true;
    }
    bool m1 = nf_true(n1, assignment);
    bool m2 = nf_true(n2, assignment);
    bool hit = kind == WitnessKind::InBoth ? (m1 && m2) : (m1 && !m2);
    if (hit) return request_from_blocks(chosen, vocabulary, schema);

    std::size_t slot = 0;
    while (slot < arity && ++pick[slot] == vocabulary.by_slot[slot].size()) {
      pick[slot] = 0;
      ++slot;
    }
    if (slot == arity) break;
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Rendering.
// ---------------------------------------------------------------------------

std::string report_to_text(const SimilarityReport& report) {
  std::string out;
  out += "relation: " + std::string(relation_name(report.relation)) + "\n";
  out += "permit-part: " + std::string(relation_name(report.permit_relation)) +
         "\n";
  out += "deny-part: " + std::string(relation_name(report.deny_relation)) + "\n";
  out += "policy 1: " + report.sepl1 + "\n";
  out += "policy 2: " + report.sepl2 + "\n";
  out += "permit terms:\n  " + report.permit_term1 + "\n  " +
         report.permit_term2 + "\n";
  out += "deny terms:\n  " + report.deny_term1 + "\n  " + report.deny_term2 +
         "\n";
  if (!report.atoms.empty()) {
    out += "atoms:\n";
    for (const auto& [name, id] : report.atoms)
      out += "  " + name + " = " + id + "\n";
  }
  for (const Witness& w : report.witnesses) {
    out += "witness (" + w.part + ", " + witness_kind_name(w.kind) + "):";
    for (const auto& [attr, value] : w.request.bindings)
      out += " " + attr + "=" + (value ? *value : "?");
    out += "\n";
  }
  if (report.permit_trace) {
    out += "permit derivation:\n";
    out += print_trace(*report.permit_trace, report.atom_names);
  }
  if (report.deny_trace) {
    out += "deny derivation:\n";
    out += print_trace(*report.deny_trace, report.atom_names);
  }
  return out;
}

namespace {

nlohmann::json trace_json(const DerivationTrace& trace,
                          const std::vector<std::string>& names) {
  nlohmann::json steps = nlohmann::json::array();
  for (const TraceStep& step : trace.steps) {
    steps.push_back({{"rule", step.rule},
                     {"term", print_term(step.after, names)}});
  }
  return {{"input", print_term(trace.input, names)},
          {"result", print_term(trace.result, names)},
          {"steps", steps}};
}

}  // namespace

std::string report_to_json(const SimilarityReport& report) {
  nlohmann::json j;
  j["relation"] = relation_name(report.relation);
  j["perComponent"] = {{"permit", relation_name(report.permit_relation)},
                       {"deny", relation_name(report.deny_relation)}};
  j["sepl"] = {report.sepl1, report.sepl2};
  j["permitTerms"] = {report.permit_term1, report.permit_term2};
  j["denyTerms"] = {report.deny_term1, report.deny_term2};
  nlohmann::json atoms = nlohmann::json::object();
  for (const auto& [name, id] : report.atoms) atoms[name] = id;
  j["atoms"] = atoms;
  if (!report.witnesses.empty()) {
    nlohmann::json ws = nlohmann::json::array();
    for (const Witness& w : report.witnesses) {
      nlohmann::json req = nlohmann::json::object();
      for (const auto& [attr, value] : w.request.bindings)
        req[attr] = value ? *value : "?";
      ws.push_back({{"part", w.part},
                    {"kind", witness_kind_name(w.kind)},
                    {"request", req}});
    }
    j["witnesses"] = ws;
  }
  if (report.permit_trace)
    j["permitTrace"] = trace_json(*report.permit_trace, report.atom_names);
  if (report.deny_trace)
    j["denyTrace"] = trace_json(*report.deny_trace, report.atom_names);
  return j.dump(2);
}

}  // namespace polsim
