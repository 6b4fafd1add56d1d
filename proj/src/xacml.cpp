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

#include "polsim/xacml.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace polsim {

std::string urn_local_name(const std::string& urn) {
  auto pos = urn.find_last_of(':');
  return pos == std::string::npos ? urn : urn.substr(pos + 1);
}

bool name_equals(const std::string& a, const std::string& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (std::tolower(static_cast<unsigned char>(a[i])) !=
        std::tolower(static_cast<unsigned char>(b[i])))
      return false;
  }
  return true;
}

std::optional<std::string> XmlElement::attribute(const std::string& key) const {
  for (const auto& [k, v] : attributes)
    if (k == key) return v;
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// XML scanner / recursive descent parser.
// ---------------------------------------------------------------------------

namespace {

class XmlParser {
 public:
  explicit XmlParser(const std::string& text) : text_(text) {}

  XmlElement parse_document() {
    skip_misc();
    if (eof()) fail("document has no root element");
    XmlElement root = parse_element();
    skip_misc();
    if (!eof()) fail("content after root element");
    return root;
  }

 private:
  const std::string& text_;
  std::size_t pos_ = 0;

  bool eof() const { return pos_ >= text_.size(); }
  char peek() const { return text_[pos_]; }
  char get() { return text_[pos_++]; }

  [[noreturn]] void fail(const std::string& msg) const {
    std::size_t line = 1;
    for (std::size_t i = 0; i < pos_ && i < text_.size(); ++i)
      if (text_[i] == '\n') ++line;
    throw Error(ErrorKind::XmlSyntax,
                msg + " (line " + std::to_string(line) + ")");
  }

  void skip_ws() {
    while (!eof() && std::isspace(static_cast<unsigned char>(peek()))) get();
  }

  bool starts_with(const char* s) const {
    return text_.compare(pos_, std::char_traits<char>::length(s), s) == 0;
  }

  void expect(const char* s) {
    if (!starts_with(s)) fail(std::string("expected '") + s + "'");
    pos_ += std::char_traits<char>::length(s);
  }

  // Prolog, comments, processing instructions, DOCTYPE.
  void skip_misc() {
    for (;;) {
      skip_ws();
      if (starts_with("<?")) {
        auto end = text_.find("?>", pos_);
        if (end == std::string::npos) fail("unterminated processing instruction");
        pos_ = end + 2;
      } else if (starts_with("<!--")) {
        skip_comment();
      } else if (starts_with("<!DOCTYPE")) {
        auto end = text_.find('>', pos_);
        if (end == std::string::npos) fail("unterminated DOCTYPE");
        pos_ = end + 1;
      } else {
        return;
      }
    }
  }

  void skip_comment() {
    expect("<!--");
    auto end = text_.find("-->", pos_);
    if (end == std::string::npos) fail("unterminated comment");
    pos_ = end + 3;
  }

  static bool is_name_start(char c) {
    return std::isalpha(static_cast<unsigned char>(c)) || c == '_' || c == ':';
  }
  static bool is_name_char(char c) {
    return is_name_start(c) || std::isdigit(static_cast<unsigned char>(c)) ||
           c == '-' || c == '.';
  }

  std::string parse_name() {
    if (eof() || !is_name_start(peek())) fail("expected name");
    std::string name;
    while (!eof() && is_name_char(peek())) name.push_back(get());
    return name;
  }

  std::string decode_entities(const std::string& raw) {
    std::string out;
    out.reserve(raw.size());
    for (std::size_t i = 0; i < raw.size(); ++i) {
      if (raw[i] != '&') {
        out.push_back(raw[i]);
        continue;
      }
      auto semi = raw.find(';', i);
      if (semi == std::string::npos) fail("unterminated entity reference");
      std::string ent = raw.substr(i + 1, semi - i - 1);
      if (ent == "lt") out.push_back('<');
      else if (ent == "gt") out.push_back('>');
      else if (ent == "amp") out.push_back('&');
      else if (ent == "apos") out.push_back('\'');
      else if (ent == "quot") out.push_back('"');
      else if (!ent.empty() && ent[0] == '#') {
        int code = 0;
        try {
          code = (ent.size() > 1 && (ent[1] == 'x' || ent[1] == 'X'))
                     ? std::stoi(ent.substr(2), nullptr, 16)
                     : std::stoi(ent.substr(1));
        } catch (const std::exception&) {
          fail("bad character reference");
        }
        if (code <= 0 || code > 127) fail("unsupported character reference");
        out.push_back(static_cast<char>(code));
      } else {
        fail("unknown entity '" + ent + "'");
      }
      i = semi;
    }
    return out;
  }

  std::string parse_attr_value() {
    if (eof() || (peek() != '"' && peek() != '\'')) fail("expected quoted value");
    char quote = get();
    std::string raw;
    while (!eof() && peek() != quote) {
      if (peek() == '<') fail("'<' in attribute value");
      raw.push_back(get());
    }
    if (eof()) fail("unterminated attribute value");
    get();  // quote
    return decode_entities(raw);
  }

  XmlElement parse_element() {
    expect("<");
    XmlElement el;
    el.name = parse_name();
    for (;;) {
      skip_ws();
      if (eof()) fail("unterminated start tag");
      if (starts_with("/>")) {
        pos_ += 2;
        return el;
      }
      if (peek() == '>') {
        get();
        parse_content(el);
        return el;
      }
      std::string key = parse_name();
      skip_ws();
      expect("=");
      skip_ws();
      el.attributes.emplace_back(key, parse_attr_value());
    }
  }

  void parse_content(XmlElement& el) {
    std::string raw_text;
    for (;;) {
      if (eof()) fail("unterminated element <" + el.name + ">");
      if (starts_with("<!--")) {
        skip_comment();
      } else if (starts_with("</")) {
        pos_ += 2;
        std::string name = parse_name();
        if (name != el.name)
          fail("mismatched end tag </" + name + "> for <" + el.name + ">");
        skip_ws();
        expect(">");
        el.text = decode_entities(trim(raw_text));
        return;
      } else if (peek() == '<') {
        el.children.push_back(parse_element());
      } else {
        raw_text.push_back(get());
      }
    }
  }

  static std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
  }
};

}  // namespace

XmlElement parse_xml(const std::string& document) {
  return XmlParser(document).parse_document();
}

// ---------------------------------------------------------------------------
// Subset grammar validation.
// ---------------------------------------------------------------------------

namespace {

[[noreturn]] void grammar_error(const std::string& msg) {
  throw Error(ErrorKind::GrammarViolation, msg);
}

bool element_is(const XmlElement& el, const char* name) {
  return name_equals(el.name, name);
}

Combiner parse_combiner(const std::string& urn) {
  std::string token = urn_local_name(urn);
  struct Entry {
    const char* token;
    Combiner combiner;
  };
  static const Entry table[] = {
      {"deny-overrides", Combiner::DenyOverrides},
      {"permit-overrides", Combiner::PermitOverrides},
      {"first-applicable", Combiner::FirstApplicable},
      {"ordered-permit-overrides", Combiner::OrderedPermitOverrides},
      {"only-one-applicable", Combiner::OnlyOneApplicable},
      {"deny-unless-permit", Combiner::DenyUnlessPermit},
      {"permit-unless-deny", Combiner::PermitUnlessDeny},
  };
  for (const auto& e : table)
    if (name_equals(token, e.token)) return e.combiner;
  throw Error(ErrorKind::UnknownCombiner, token);
}

std::string required_attr(const XmlElement& el, const char* key) {
  auto v = el.attribute(key);
  if (!v) grammar_error("<" + el.name + "> missing attribute " + key);
  return *v;
}

XacmlNode build_match(const XmlElement& el) {
  XacmlNode node;
  node.kind = XacmlKind::Match;
  node.match_id = urn_local_name(required_attr(el, "MatchId"));
  const XmlElement* value = nullptr;
  const XmlElement* designator = nullptr;
  for (const auto& child : el.children) {
    if (element_is(child, "AttributeValue") || element_is(child, "AttrValue")) {
      if (value) grammar_error("<Match> has more than one AttributeValue");
      value = &child;
    } else if (element_is(child, "AttributeDesignator")) {
      if (designator) grammar_error("<Match> has more than one designator");
      designator = &child;
    } else {
      grammar_error("unexpected <" + child.name + "> inside <Match>");
    }
  }
  if (!value || !designator)
    grammar_error("<Match> needs an AttributeValue and an AttributeDesignator");
  node.value = value->text;
  node.attribute_id = urn_local_name(required_attr(*designator, "AttributeId"));
  if (auto cat = designator->attribute("Category"))
    node.category = urn_local_name(*cat);
  if (auto dt = designator->attribute("DataType")) node.data_type = *dt;
  if (auto mbp = designator->attribute("MustBePresent"))
    node.must_be_present = name_equals(*mbp, "true");
  return node;
}

XacmlNode build_target(const XmlElement& el) {
  XacmlNode target;
  target.kind = XacmlKind::Target;
  for (const auto& any : el.children) {
    if (!element_is(any, "AnyOf"))
      grammar_error("unexpected <" + any.name + "> inside <Target>");
    XacmlNode any_node;
    any_node.kind = XacmlKind::AnyOf;
    if (any.children.empty()) grammar_error("<AnyOf> must contain <AllOf>");
    for (const auto& all : any.children) {
      if (!element_is(all, "AllOf"))
        grammar_error("unexpected <" + all.name + "> inside <AnyOf>");
      XacmlNode all_node;
      all_node.kind = XacmlKind::AllOf;
      if (all.children.empty()) grammar_error("<AllOf> must contain <Match>");
      for (const auto& match : all.children) {
        if (!element_is(match, "Match"))
          grammar_error("unexpected <" + match.name + "> inside <AllOf>");
        all_node.children.push_back(build_match(match));
      }
      any_node.children.push_back(std::move(all_node));
    }
    target.children.push_back(std::move(any_node));
  }
  return target;
}

ConditionExpr build_condition_expr(const XmlElement& el) {
  if (!element_is(el, "Apply"))
    grammar_error("condition bodies must be <Apply> expressions");
  std::string fn = urn_local_name(required_attr(el, "FunctionId"));
  ConditionExpr expr;
  if (name_equals(fn, "and") || name_equals(fn, "or") ||
      name_equals(fn, "not")) {
    expr.kind = name_equals(fn, "and")  ? ConditionExpr::Kind::And
                : name_equals(fn, "or") ? ConditionExpr::Kind::Or
                                        : ConditionExpr::Kind::Not;
    if (el.children.empty())
      grammar_error("<Apply " + fn + "> needs operands");
    if (expr.kind == ConditionExpr::Kind::Not && el.children.size() != 1)
      grammar_error("<Apply not> takes exactly one operand");
    for (const auto& child : el.children)
      expr.children.push_back(build_condition_expr(child));
    return expr;
  }
  // Match-style predicate.
  expr.kind = ConditionExpr::Kind::Predicate;
  expr.function = fn;
  const XmlElement* value = nullptr;
  const XmlElement* designator = nullptr;
  for (const auto& child : el.children) {
    if (element_is(child, "AttributeValue") || element_is(child, "AttrValue"))
      value = &child;
    else if (element_is(child, "AttributeDesignator"))
      designator = &child;
    else
      grammar_error("unexpected <" + child.name + "> inside predicate");
  }
  if (!value || !designator)
    grammar_error("predicate needs an AttributeValue and a designator");
  expr.value = value->text;
  expr.attribute = urn_local_name(required_attr(*designator, "AttributeId"));
  return expr;
}

XacmlNode build_rule(const XmlElement& el) {
  XacmlNode rule;
  rule.kind = XacmlKind::Rule;
  rule.id = required_attr(el, "RuleId");
  std::string effect = required_attr(el, "Effect");
  if (name_equals(effect, "Permit")) rule.effect = Effect::Permit;
  else if (name_equals(effect, "Deny")) rule.effect = Effect::Deny;
  else grammar_error("unknown rule effect '" + effect + "'");

  for (const auto& child : el.children) {
    if (element_is(child, "Description")) {
      rule.description = child.text;
    } else if (element_is(child, "Target")) {
      rule.children.push_back(build_target(child));
    } else if (element_is(child, "Condition")) {
      if (child.children.size() != 1)
        grammar_error("<Condition> must contain exactly one expression");
      XacmlNode cond;
      cond.kind = XacmlKind::Condition;
      cond.condition = build_condition_expr(child.children[0]);
      rule.children.push_back(std::move(cond));
    } else if (element_is(child, "ObligationExpressions") ||
               element_is(child, "Obligations") ||
               element_is(child, "Obligation")) {
      rule.has_obligations = true;
    } else if (element_is(child, "AdviceExpressions") ||
               element_is(child, "Advice")) {
      rule.has_advice = true;
    } else {
      grammar_error("unexpected <" + child.name + "> inside <Rule>");
    }
  }
  return rule;
}

XacmlNode build_policy(const XmlElement& el);

XacmlNode build_policy_set(const XmlElement& el) {
  XacmlNode ps;
  ps.kind = XacmlKind::PolicySet;
  ps.id = required_attr(el, "PolicySetId");
  ps.version = el.attribute("Version").value_or("");
  ps.combiner = parse_combiner(required_attr(el, "PolicyCombiningAlgId"));
  bool saw_target = false;
  std::size_t policies = 0;
  for (const auto& child : el.children) {
    if (element_is(child, "Description")) {
      ps.description = child.text;
    } else if (element_is(child, "Target")) {
      saw_target = true;
      ps.children.push_back(build_target(child));
    } else if (element_is(child, "Policy")) {
      ++policies;
      ps.children.push_back(build_policy(child));
    } else if (element_is(child, "ObligationExpressions") ||
               element_is(child, "Obligations") ||
               element_is(child, "Obligation")) {
      ps.has_obligations = true;
    } else if (element_is(child, "AdviceExpressions") ||
               element_is(child, "Advice")) {
      ps.has_advice = true;
    } else {
      grammar_error("unexpected <" + child.name + "> inside <PolicySet>");
    }
  }
  if (!saw_target) grammar_error("<PolicySet> requires a <Target>");
  if (policies == 0) grammar_error("<PolicySet> requires at least one <Policy>");
  return ps;
}

XacmlNode build_policy(const XmlElement& el) {
  XacmlNode policy;
  policy.kind = XacmlKind::Policy;
  policy.id = required_attr(el, "PolicyId");
  policy.version = el.attribute("Version").value_or("");
  policy.combiner = parse_combiner(required_attr(el, "RuleCombiningAlgId"));
  bool saw_target = false;
  std::size_t rules = 0;
  for (const auto& child : el.children) {
    if (element_is(child, "Description")) {
      policy.description = child.text;
    } else if (element_is(child, "Target")) {
      saw_target = true;
      policy.children.push_back(build_target(child));
    } else if (element_is(child, "Rule")) {
      ++rules;
      policy.children.push_back(build_rule(child));
    } else if (element_is(child, "ObligationExpressions") ||
               element_is(child, "Obligations") ||
               element_is(child, "Obligation")) {
      policy.has_obligations = true;
    } else if (element_is(child, "AdviceExpressions") ||
               element_is(child, "Advice")) {
      policy.has_advice = true;
    } else {
      grammar_error("unexpected <" + child.name + "> inside <Policy>");
    }
  }
  if (!saw_target) grammar_error("<Policy> requires a <Target>");
  if (rules == 0) grammar_error("<Policy> requires at least one <Rule>");
  return policy;
}

}  // namespace

XacmlNode parse_xacml(const std::string& document) {
  XmlElement root = parse_xml(document);
  if (element_is(root, "Policy")) return build_policy(root);
  if (element_is(root, "PolicySet")) return build_policy_set(root);
  grammar_error("document root must be <Policy> or <PolicySet>, got <" +
                root.name + ">");
}

// ---------------------------------------------------------------------------
// Serialization.
// ---------------------------------------------------------------------------

const char* combiner_token(Combiner c) {
  switch (c) {
    case Combiner::DenyOverrides: return "deny-overrides";
    case Combiner::PermitOverrides: return "permit-overrides";
    case Combiner::FirstApplicable: return "first-applicable";
    case Combiner::OrderedPermitOverrides: return "ordered-permit-overrides";
    case Combiner::OnlyOneApplicable: return "only-one-applicable";
    case Combiner::DenyUnlessPermit: return "deny-unless-permit";
    case Combiner::PermitUnlessDeny: return "permit-unless-deny";
  }
  return "unknown";
}

namespace {

std::string xml_escape(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

class Writer {
 public:
  std::string str() const { return out_.str(); }

  void write_node(const XacmlNode& node) {
    switch (node.kind) {
      case XacmlKind::PolicySet: write_policy_set(node); break;
      case XacmlKind::Policy: write_policy(node); break;
      default:
        throw Error(ErrorKind::InternalInconsistency,
                    "serialize_xacml expects a Policy or PolicySet");
    }
  }

 private:
  std::ostringstream out_;
  int depth_ = 0;

  std::string pad() const { return std::string(2 * depth_, ' '); }

  void write_target(const XacmlNode& target) {
    if (target.children.empty()) {
      out_ << pad() << "<Target/>\n";
      return;
    }
    out_ << pad() << "<Target>\n";
    ++depth_;
    for (const auto& any : target.children) {
      out_ << pad() << "<AnyOf>\n";
      ++depth_;
      for (const auto& all : any.children) {
        out_ << pad() << "<AllOf>\n";
        ++depth_;
        for (const auto& match : all.children) write_match(match);
        --depth_;
        out_ << pad() << "</AllOf>\n";
      }
      --depth_;
      out_ << pad() << "</AnyOf>\n";
    }
    --depth_;
    out_ << pad() << "</Target>\n";
  }

  void write_match(const XacmlNode& match) {
    out_ << pad() << "<Match MatchId=\"urn:oasis:names:tc:xacml:1.0:function:"
         << xml_escape(match.match_id) << "\">\n";
    ++depth_;
    out_ << pad()
         << "<AttributeValue DataType=\"http://www.w3.org/2001/"
            "XMLSchema#string\">"
         << xml_escape(match.value) << "</AttributeValue>\n";
    out_ << pad() << "<AttributeDesignator Category=\""
         << "urn:oasis:names:tc:xacml:3.0:attribute-category:"
         << xml_escape(match.category.empty() ? "resource" : match.category)
         << "\" AttributeId=\"urn:oasis:names:tc:xacml:1.0:attribute:"
         << xml_escape(match.attribute_id)
         << "\" DataType=\"http://www.w3.org/2001/XMLSchema#string\""
         << " MustBePresent=\"" << (match.must_be_present ? "true" : "false")
         << "\"/>\n";
    --depth_;
    out_ << pad() << "</Match>\n";
  }

  void write_condition_expr(const ConditionExpr& expr) {
    const char* fn = nullptr;
    switch (expr.kind) {
      case ConditionExpr::Kind::And: fn = "and"; break;
      case ConditionExpr::Kind::Or: fn = "or"; break;
      case ConditionExpr::Kind::Not: fn = "not"; break;
      case ConditionExpr::Kind::Predicate: fn = nullptr; break;
    }
    if (fn) {
      out_ << pad() << "<Apply FunctionId=\"urn:oasis:names:tc:xacml:1.0:function:"
           << fn << "\">\n";
      ++depth_;
      for (const auto& child : expr.children) write_condition_expr(child);
      --depth_;
      out_ << pad() << "</Apply>\n";
      return;
    }
    out_ << pad() << "<Apply FunctionId=\"urn:oasis:names:tc:xacml:1.0:function:"
         << xml_escape(expr.function) << "\">\n";
    ++depth_;
    out_ << pad()
         << "<AttributeValue DataType=\"http://www.w3.org/2001/"
            "XMLSchema#string\">"
         << xml_escape(expr.value) << "</AttributeValue>\n";
    out_ << pad() << "<AttributeDesignator Category=\""
         << "urn:oasis:names:tc:xacml:3.0:attribute-category:resource"
         << "\" AttributeId=\"urn:oasis:names:tc:xacml:1.0:attribute:"
         << xml_escape(expr.attribute)
         << "\" DataType=\"http://www.w3.org/2001/XMLSchema#string\""
         << " MustBePresent=\"false\"/>\n";
    --depth_;
    out_ << pad() << "</Apply>\n";
  }

  void write_rule(const XacmlNode& rule) {
    out_ << pad() << "<Rule RuleId=\"" << xml_escape(rule.id) << "\" Effect=\""
         << (rule.effect == Effect::Permit ? "Permit" : "Deny") << "\"";
    if (rule.children.empty()) {
      out_ << "/>\n";
      return;
    }
    out_ << ">\n";
    ++depth_;
    for (const auto& child : rule.children) {
      if (child.kind == XacmlKind::Target) {
        write_target(child);
      } else if (child.kind == XacmlKind::Condition && child.condition) {
        out_ << pad() << "<Condition>\n";
        ++depth_;
        write_condition_expr(*child.condition);
        --depth_;
        out_ << pad() << "</Condition>\n";
      }
    }
    --depth_;
    out_ << pad() << "</Rule>\n";
  }

  void write_policy(const XacmlNode& policy) {
    out_ << pad() << "<Policy PolicyId=\"" << xml_escape(policy.id)
         << "\" Version=\""
         << xml_escape(policy.version.empty() ? "1.0" : policy.version)
         << "\" RuleCombiningAlgId=\""
         << "urn:oasis:names:tc:xacml:3.0:rule-combining-algorithm:"
         << combiner_token(policy.combiner.value_or(Combiner::FirstApplicable))
         << "\">\n";
    ++depth_;
    bool wrote_target = false;
    for (const auto& child : policy.children) {
      if (child.kind == XacmlKind::Target) {
        write_target(child);
        wrote_target = true;
      }
    }
    if (!wrote_target) out_ << pad() << "<Target/>\n";
    for (const auto& child : policy.children)
      if (child.kind == XacmlKind::Rule) write_rule(child);
    --depth_;
    out_ << pad() << "</Policy>\n";
  }

  void write_policy_set(const XacmlNode& ps) {
    out_ << pad() << "<PolicySet PolicySetId=\"" << xml_escape(ps.id)
         << "\" Version=\"" << xml_escape(ps.version.empty() ? "1.0" : ps.version)
         << "\" PolicyCombiningAlgId=\""
         << "urn:oasis:names:tc:xacml:3.0:policy-combining-algorithm:"
         << combiner_token(ps.combiner.value_or(Combiner::FirstApplicable))
         << "\">\n";
    ++depth_;
    bool wrote_target = false;
    for (const auto& child : ps.children) {
      if (child.kind == XacmlKind::Target) {
        write_target(child);
        wrote_target = true;
      }
    }
    if (!wrote_target) out_ << pad() << "<Target/>\n";
    for (const auto& child : ps.children)
      if (child.kind == XacmlKind::Policy) write_policy(child);
    --depth_;
    out_ << pad() << "</PolicySet>\n";
  }
};

}  // namespace

std::string serialize_xacml(const XacmlNode& node) {
  Writer w;
  w.write_node(node);
  return w.str();
}

}  // namespace polsim
