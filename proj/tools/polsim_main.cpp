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

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "polsim/bench.hpp"
#include "polsim/semantics.hpp"
#include "polsim/similarity.hpp"

namespace {

using polsim::Error;
using polsim::ErrorKind;

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::XmlSyntax:
    case ErrorKind::GrammarViolation:
    case ErrorKind::UnknownCombiner:
      return 2;
    case ErrorKind::UnsupportedMatchFunction:
    case ErrorKind::UnboundAttribute:
    case ErrorKind::UnsupportedCombiner:
    case ErrorKind::SchemaMismatch:
    case ErrorKind::ScopeOnUnsupportedOperator:
      return 3;
    case ErrorKind::IndeterminateUnsupported:
    case ErrorKind::ArityMismatch:
    case ErrorKind::InternalInconsistency:
      return 4;
    case ErrorKind::Io:
      return 5;
    case ErrorKind::Config:
      return 1;
  }
  return 1;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot read " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::Io, "cannot write " + path);
  out << content;
}

polsim::Request read_request(const std::string& path) {
  nlohmann::json j = nlohmann::json::parse(read_file(path), nullptr, false);
  if (j.is_discarded() || !j.is_object() || !j.contains("attributes") ||
      !j["attributes"].is_object())
    throw Error(ErrorKind::Io,
                path + ": expected {\"attributes\": {name: value | \"?\"}}");
  polsim::Request request;
  for (const auto& [key, value] : j["attributes"].items()) {
    if (!value.is_string())
      throw Error(ErrorKind::Io, path + ": attribute values must be strings");
    std::string v = value.get<std::string>();
    if (v == "?")
      request.bindings[key] = std::nullopt;
    else
      request.bindings[key] = v;
  }
  return request;
}

int cmd_compare(const std::string& path1, const std::string& path2,
                bool trace, bool witness, const std::string& format) {
  polsim::ClassifyOptions options;
  options.traces = trace;
  options.witnesses = witness;
  polsim::SimilarityReport report =
      polsim::classify(read_file(path1), read_file(path2), options);
  if (format == "json")
    std::cout << polsim::report_to_json(report) << "\n";
  else
    std::cout << polsim::report_to_text(report);
  return 0;
}

int cmd_eval(const std::string& path, const std::string& request_path,
             bool strict) {
  polsim::XacmlNode doc = polsim::parse_xacml(read_file(path));
  polsim::AttributeSchema schema = polsim::build_schema({&doc});
  polsim::PolicyPtr term = polsim::expand_abbreviations(
      polsim::to_sepl(doc, schema), schema);
  polsim::Request request = read_request(request_path);
  polsim::Decision decision =
      polsim::eval_request(term, request, schema, strict);
  std::cout << polsim::verdict_name(polsim::classify_decision(decision))
            << "\n";
  return 0;
}

int cmd_normalize(const std::string& path, bool trace) {
  polsim::XacmlNode doc = polsim::parse_xacml(read_file(path));
  polsim::AttributeSchema schema = polsim::build_schema({&doc});
  polsim::PolicyPtr term = polsim::expand_abbreviations(
      polsim::to_sepl(doc, schema), schema);
  polsim::SymbolTable symbols;
  std::cout << "policy: " << polsim::print_policy(term, schema, symbols)
            << "\n";
  polsim::SemPair sem = polsim::absolute_semantics(term, schema);
  polsim::AtomizedPair atomized = polsim::atomize(sem, sem, schema);
  std::vector<std::string> names(atomized.vocabulary.atoms.size());
  polsim::PolicyRingTerms terms = polsim::sempair_to_terms(
      atomized.p1, atomized.vocabulary, schema, symbols, names);
  for (std::size_t i = 0; i < names.size(); ++i)
    if (names[i].empty()) names[i] = atomized.vocabulary.atoms[i].id;

  std::cout << "permit term: " << polsim::print_term(terms.permit, names)
            << "\n";
  std::cout << "deny term: " << polsim::print_term(terms.deny, names) << "\n";
  if (trace) {
    polsim::DerivationTrace ptrace = polsim::rewrite_trace(terms.permit);
    polsim::DerivationTrace dtrace = polsim::rewrite_trace(terms.deny);
    std::cout << "permit derivation:\n" << polsim::print_trace(ptrace, names);
    std::cout << "deny derivation:\n" << polsim::print_trace(dtrace, names);
  } else {
    std::cout << "permit normal form: "
              << polsim::print_term(polsim::normalize(terms.permit), names)
              << "\n";
    std::cout << "deny normal form: "
              << polsim::print_term(polsim::normalize(terms.deny), names)
              << "\n";
  }
  return 0;
}

int cmd_generate(const polsim::GenConfig& config, const std::string& out_dir) {
  polsim::validate_config(config);
  std::filesystem::path dir(out_dir);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(ErrorKind::Io, "cannot create " + out_dir);
  std::string a = polsim::generate_policy_document(config, 0, "generated-a");
  std::string b = polsim::generate_policy_document(config, 1, "generated-b");
  std::string path_a = (dir / "policy_a.xml").string();
  std::string path_b = (dir / "policy_b.xml").string();
  write_file(path_a, a);
  write_file(path_b, b);
  std::cout << path_a << "\n" << path_b << "\n";
  return 0;
}

int cmd_bench(const polsim::BenchConfig& config, const std::string& out_csv) {
  std::vector<polsim::BenchRecord> records = polsim::run_bench(config);
  std::string csv = polsim::bench_csv(records);
  if (out_csv.empty() || out_csv == "-")
    std::cout << csv;
  else
    write_file(out_csv, csv);
  return 0;
}

polsim::Combiner combiner_from_token(const std::string& token) {
  static const std::pair<const char*, polsim::Combiner> table[] = {
      {"deny-overrides", polsim::Combiner::DenyOverrides},
      {"permit-overrides", polsim::Combiner::PermitOverrides},
      {"first-applicable", polsim::Combiner::FirstApplicable},
      {"ordered-permit-overrides", polsim::Combiner::OrderedPermitOverrides},
      {"only-one-applicable", polsim::Combiner::OnlyOneApplicable},
      {"deny-unless-permit", polsim::Combiner::DenyUnlessPermit},
      {"permit-unless-deny", polsim::Combiner::PermitUnlessDeny},
  };
  for (const auto& [name, combiner] : table)
    if (token == name) return combiner;
  throw Error(ErrorKind::Config, "unknown combiner " + token);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"XACML policy similarity analyzer"};
  app.require_subcommand(1);

  // compare
  std::string cmp_p1, cmp_p2, cmp_format = "text";
  bool cmp_trace = false, cmp_witness = false;
  CLI::App* compare = app.add_subcommand(
      "compare", "Classify the relation between two policies");
  compare->add_option("policy1", cmp_p1, "first XACML file")->required();
  compare->add_option("policy2", cmp_p2, "second XACML file")->required();
  compare->add_flag("--trace", cmp_trace, "print the derivations");
  compare->add_flag("--witness", cmp_witness, "print differentiating requests");
  compare->add_option("--format", cmp_format, "text or json")
      ->check(CLI::IsMember({"text", "json"}));

  // eval
  std::string eval_policy, eval_request_path;
  bool eval_strict = false;
  CLI::App* eval = app.add_subcommand("eval", "Evaluate a request");
  eval->add_option("policy", eval_policy, "XACML file")->required();
  eval->add_option("--request", eval_request_path, "request JSON file")
      ->required();
  eval->add_flag("--strict", eval_strict, "missing attributes are an error");

  // normalize
  std::string norm_policy;
  bool norm_trace = false;
  CLI::App* norm = app.add_subcommand(
      "normalize", "Show a policy's ring terms and their normal forms");
  norm->add_option("policy", norm_policy, "XACML file")->required();
  norm->add_flag("--trace", norm_trace, "print the derivations");

  // generate
  polsim::GenConfig gen;
  std::string gen_out = ".", gen_combiner = "first-applicable";
  CLI::App* generate = app.add_subcommand(
      "generate", "Emit a deterministic random policy pair");
  generate->add_option("--rules", gen.rule_count, "rules per policy");
  generate->add_option("--attrs", gen.attribute_count, "attribute count");
  generate->add_option("--values", gen.values_per_attribute,
                       "values per attribute");
  generate->add_option("--permit-ratio", gen.permit_ratio,
                       "fraction of permit rules");
  generate->add_option("--combiner", gen_combiner, "combining algorithm");
  generate->add_option("--seed", gen.seed, "random seed");
  generate->add_option("--out", gen_out, "output directory")->required();

  // bench
  polsim::BenchConfig bench;
  std::string bench_out;
  std::vector<std::size_t> bench_pairs{10};
  CLI::App* bench_cmd = app.add_subcommand(
      "bench", "Run timed comparisons over generated policy pairs");
  bench_cmd->add_option("--rules", bench.rule_counts, "rule counts")
      ->delimiter(',');
  bench_cmd->add_option("--params", bench.parameter_counts,
                        "total attribute-value pool sizes")
      ->delimiter(',');
  bench_cmd->add_option("--pairs", bench_pairs,
                        "pair counts (the largest is generated; prefixes "
                        "reproduce the smaller runs)")
      ->delimiter(',');
  bench_cmd->add_option("--reps", bench.repetitions, "repetitions per pair");
  bench_cmd->add_option("--seed", bench.seed, "random seed");
  bench_cmd->add_option("--threads", bench.threads, "worker threads");
  bench_cmd->add_option("--out", bench_out, "output CSV ('-' for stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (compare->parsed())
      return cmd_compare(cmp_p1, cmp_p2, cmp_trace, cmp_witness, cmp_format);
    if (eval->parsed())
      return cmd_eval(eval_policy, eval_request_path, eval_strict);
    if (norm->parsed()) return cmd_normalize(norm_policy, norm_trace);
    if (generate->parsed()) {
      gen.combiner = combiner_from_token(gen_combiner);
      return cmd_generate(gen, gen_out);
    }
    if (bench_cmd->parsed()) {
      bench.pairs = *std::max_element(bench_pairs.begin(), bench_pairs.end());
      return cmd_bench(bench, bench_out);
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
