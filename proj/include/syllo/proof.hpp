#pragma once

// Proof trees: trivial leaves, rule applications (r1-r4) and proof by contradiction.

#include <optional>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <vector>

#include "syllo/knowledge_base.hpp"

namespace syllo {

enum class Rule : std::uint8_t {
  r1,  // A a b, A b c |- A a c
  r2,  // A a b, E b c |- E a c
  r3,  // E b a |- E a b
  r4,  // A b a |- I a b
};

constexpr std::size_t rule_arity(Rule r) noexcept {
  return (r == Rule::r1 || r == Rule::r2) ? 2 : 1;
}

constexpr const char* rule_name(Rule r) noexcept {
  constexpr const char* names[] = {"r1", "r2", "r3", "r4"};
  return names[static_cast<int>(r)];
}

inline std::optional<Rule> rule_from_name(std::string_view s) {
  if (s == "r1") return Rule::r1;
  if (s == "r2") return Rule::r2;
  if (s == "r3") return Rule::r3;
  if (s == "r4") return Rule::r4;
  return std::nullopt;
}

enum class ProofType : std::uint8_t { trivial, rule, contradiction };

constexpr const char* proof_type_tag(ProofType t) noexcept {
  constexpr const char* tags[] = {"(i)", "(ii)", "(iii)"};
  return tags[static_cast<int>(t)];
}

/// Applies a rule schema to its inputs. Returns nullopt when the schema does not unify.
inline std::optional<Formula> apply_rule(Rule rule, std::span<const Formula> inputs) {
  if (inputs.size() != rule_arity(rule))
    throw std::invalid_argument(std::string("wrong arity for rule ") + rule_name(rule));
  const Formula& x = inputs[0];
  switch (rule) {
    case Rule::r1: {
      const Formula& y = inputs[1];
      if (x.quantifier != Quantifier::A || y.quantifier != Quantifier::A) return std::nullopt;
      if (x.predicate != y.subject || x.subject == y.predicate) return std::nullopt;
      return A(x.subject, y.predicate);
    }
    case Rule::r2: {
      const Formula& y = inputs[1];
      if (x.quantifier != Quantifier::A || y.quantifier != Quantifier::E) return std::nullopt;
      if (x.predicate != y.subject || x.subject == y.predicate) return std::nullopt;
      return E(x.subject, y.predicate);
    }
    case Rule::r3:
      if (x.quantifier != Quantifier::E) return std::nullopt;
      return E(x.predicate, x.subject);
    case Rule::r4:
      if (x.quantifier != Quantifier::A) return std::nullopt;
      return I(x.predicate, x.subject);
  }
  return std::nullopt;
}

/// Proof tree. Contradiction nodes hold [positive, negative]: the positive branch
/// proves F from the premises plus the negated conclusion, the negative branch
/// proves negate(F) from the premises alone.
struct Proof {
  ProofType type = ProofType::trivial;
  Rule rule = Rule::r1;
  Formula conclusion;
  std::vector<Proof> children;

  static Proof trivial(Formula f) { return Proof{ProofType::trivial, Rule::r1, f, {}}; }
  static Proof by_rule(Rule r, Formula f, std::vector<Proof> premises) {
    return Proof{ProofType::rule, r, f, std::move(premises)};
  }
  static Proof by_contradiction(Formula h, Proof positive, Proof negative) {
    std::vector<Proof> ch;
    ch.push_back(std::move(positive));
    ch.push_back(std::move(negative));
    return Proof{ProofType::contradiction, Rule::r1, h, std::move(ch)};
  }

  std::size_t size() const {
    std::size_t n = 1;
    for (const auto& c : children) n += c.size();
    return n;
  }

  friend bool operator==(const Proof&, const Proof&) = default;
};

/// One element of the partial-proof store: premises |- conclusion by a proof type.
/// For rule entries `rule` names the schema; for contradiction entries the
/// premises are {F, negate(F)}.
struct PartialProof {
  std::vector<Formula> premises;
  Formula conclusion;
  ProofType type = ProofType::trivial;
  Rule rule = Rule::r1;
};

namespace detail {

class ProofChecker {
 public:
  explicit ProofChecker(std::span<const Formula> kb) : base_(kb.begin(), kb.end()) {}

  bool check(const Proof& p, const Formula& hypothesis) {
    return p.conclusion == hypothesis && check_node(p);
  }

 private:
  bool in_ambient(const Formula& f) const {
    if (base_.count(f)) return true;
    for (const auto& extra : assumptions_)
      if (extra == f) return true;
    return false;
  }

  bool check_node(const Proof& p) {
    if (!p.conclusion.well_formed()) return false;
    switch (p.type) {
      case ProofType::trivial:
        return p.children.empty() && in_ambient(p.conclusion);
      case ProofType::rule: {
        if (p.children.size() != rule_arity(p.rule)) return false;
        std::vector<Formula> inputs;
        for (const auto& c : p.children) inputs.push_back(c.conclusion);
        auto derived = apply_rule(p.rule, inputs);
        if (!derived || *derived != p.conclusion) return false;
        for (const auto& c : p.children)
          if (!check_node(c)) return false;
        return true;
      }
      case ProofType::contradiction: {
        if (p.children.size() != 2) return false;
        const Proof& pos = p.children[0];
        const Proof& neg = p.children[1];
        if (pos.conclusion != negate(neg.conclusion)) return false;
        if (!check_node(neg)) return false;
        assumptions_.push_back(negate(p.conclusion));
        const bool ok = check_node(pos);
        assumptions_.pop_back();
        return ok;
      }
    }
    return false;
  }

  std::unordered_set<Formula> base_;
  std::vector<Formula> assumptions_;
};

}  // namespace detail

/// True iff `p` is a proof of `hypothesis` from `kb`.
inline bool check_proof(const Proof& p, std::span<const Formula> kb, const Formula& hypothesis) {
  return detail::ProofChecker(kb).check(p, hypothesis);
}

inline bool check_proof(const Proof& p, const KnowledgeBase& kb, const Formula& hypothesis) {
  return check_proof(p, kb.formulas(), hypothesis);
}

// Text dump: one node per line, two spaces of indentation per depth level:
//   <tag> [<rule>] <Q> <subject> <predicate>
inline void dump_proof(const Proof& p, const Vocabulary& vocab, std::ostream& out, int depth = 0) {
  out << std::string(static_cast<std::size_t>(depth) * 2, ' ') << proof_type_tag(p.type);
  if (p.type == ProofType::rule) out << ' ' << rule_name(p.rule);
  out << ' ' << to_symbolic(p.conclusion, vocab) << '\n';
  for (const auto& c : p.children) dump_proof(c, vocab, out, depth + 1);
}

inline std::string dump_proof(const Proof& p, const Vocabulary& vocab) {
  std::ostringstream out;
  dump_proof(p, vocab, out);
  return out.str();
}

inline Proof parse_proof(std::istream& in, const Vocabulary& vocab) {
  struct Line {
    std::size_t depth;
    Proof node;
    std::size_t number;
  };
  std::vector<Line> lines;
  std::string text;
  std::size_t number = 0;
  while (std::getline(in, text)) {
    ++number;
    if (!text.empty() && text.back() == '\r') text.pop_back();
    if (text.find_first_not_of(' ') == std::string::npos) continue;
    const std::size_t indent = text.find_first_not_of(' ');
    if (indent % 2 != 0) throw parse_error("line " + std::to_string(number) + ": odd indentation");
    auto parts = detail::split_spaces(text);
    Proof node;
    std::size_t at = 1;
    if (parts[0] == "(i)") {
      node.type = ProofType::trivial;
    } else if (parts[0] == "(ii)") {
      node.type = ProofType::rule;
      if (parts.size() < 2) throw parse_error("line " + std::to_string(number) + ": missing rule");
      auto r = rule_from_name(parts[1]);
      if (!r) throw parse_error("line " + std::to_string(number) + ": unknown rule");
      node.rule = *r;
      at = 2;
    } else if (parts[0] == "(iii)") {
      node.type = ProofType::contradiction;
    } else {
      throw parse_error("line " + std::to_string(number) + ": unknown proof tag");
    }
    if (parts.size() != at + 3) throw parse_error("line " + std::to_string(number) + ": malformed node");
    std::string formula_text = std::string(parts[at]) + " " + std::string(parts[at + 1]) + " " +
                               std::string(parts[at + 2]);
    try {
      node.conclusion = parse_symbolic(formula_text, vocab);
    } catch (const parse_error& e) {
      throw parse_error("line " + std::to_string(number) + ": " + e.what());
    }
    lines.push_back({indent / 2, std::move(node), number});
  }
  if (lines.empty()) throw parse_error("empty proof");
  // Rebuild the tree from depths.
  std::size_t pos = 0;
  auto build = [&](auto& self, std::size_t depth) -> Proof {
    Line& line = lines[pos++];
    if (line.depth != depth)
      throw parse_error("line " + std::to_string(line.number) + ": unexpected indentation");
    Proof node = std::move(line.node);
    while (pos < lines.size() && lines[pos].depth > depth) node.children.push_back(self(self, depth + 1));
    return node;
  };
  Proof root = build(build, 0);
  if (pos != lines.size()) throw parse_error("trailing nodes after proof root");
  return root;
}

inline Proof parse_proof(const std::string& text, const Vocabulary& vocab) {
  std::istringstream in(text);
  return parse_proof(in, vocab);
}

}  // namespace syllo
