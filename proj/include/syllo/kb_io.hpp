#pragma once

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "syllo/knowledge_base.hpp"

namespace syllo {

inline constexpr const char* kKbSchema = "syllo-kb/1";

class kb_format_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline nlohmann::ordered_json kb_to_json(const KnowledgeBase& kb) {
  nlohmann::ordered_json j;
  j["schema"] = kKbSchema;
  j["id"] = kb.id;
  j["terms"] = kb.vocabulary().names();
  auto& fs = j["formulas"] = nlohmann::ordered_json::array();
  for (const auto& f : kb.formulas()) fs.push_back(kb.text(f));
  j["meta"] = kb.meta;
  return j;
}

inline KnowledgeBase kb_from_json(const nlohmann::ordered_json& j) {
  try {
    if (!j.is_object()) throw kb_format_error("KB document is not an object");
    if (j.value("schema", std::string{}) != kKbSchema)
      throw kb_format_error("unsupported KB schema '" + j.value("schema", std::string{}) + "'");
    KnowledgeBase kb(Vocabulary(j.at("terms").get<std::vector<std::string>>()));
    if (kb.vocabulary().size() != j.at("terms").size()) throw kb_format_error("duplicate term names");
    kb.id = j.value("id", std::string{});
    std::size_t line = 0;
    for (const auto& f : j.at("formulas")) {
      ++line;
      try {
        if (!kb.add(kb.formula(f.get<std::string>())))
          throw kb_format_error("duplicate formula");
      } catch (const std::exception& e) {
        throw kb_format_error("formula " + std::to_string(line) + ": " + e.what());
      }
    }
    if (j.contains("meta")) kb.meta = j.at("meta");
    return kb;
  } catch (const nlohmann::json::exception& e) {
    throw kb_format_error(std::string("malformed KB document: ") + e.what());
  }
}

inline std::string write_kb(const KnowledgeBase& kb) { return kb_to_json(kb).dump(2) + "\n"; }

inline KnowledgeBase read_kb(std::string_view text) {
  nlohmann::ordered_json j;
  try {
    j = nlohmann::ordered_json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw kb_format_error(std::string("KB is not valid JSON: ") + e.what());
  }
  return kb_from_json(j);
}

inline KnowledgeBase load_kb(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open KB file " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return read_kb(ss.str());
}

inline void save_kb(const KnowledgeBase& kb, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write KB file " + path);
  out << write_kb(kb);
  if (!out) throw std::runtime_error("write failed for " + path);
}

/// Graphviz rendering: A edges directed, E and I undirected, O dashed.
inline std::string kb_to_dot(const KnowledgeBase& kb) {
  std::ostringstream out;
  out << "digraph \"" << (kb.id.empty() ? "kb" : kb.id) << "\" {\n  rankdir=BT;\n";
  for (const auto& name : kb.vocabulary().names()) out << "  \"" << name << "\";\n";
  for (const auto& f : kb.formulas()) {
    const auto& v = kb.vocabulary();
    out << "  \"" << v.name(f.subject) << "\" -> \"" << v.name(f.predicate) << "\" [label=\""
        << quantifier_char(f.quantifier) << "\"";
    switch (f.quantifier) {
      case Quantifier::A: break;
      case Quantifier::E: out << ", dir=both, color=red"; break;
      case Quantifier::I: out << ", dir=both, color=blue"; break;
      case Quantifier::O: out << ", style=dashed, color=darkgreen"; break;
    }
    out << "];\n";
  }
  out << "}\n";
  return out.str();
}

}  // namespace syllo
