#pragma once

// Pseudoword substitutions, sentence rendering and parsing, and dataset export.

#include <concepts>
#include <algorithm>
#include <map>
#include <numeric>
#include <ostream>
#include <random>
#include <set>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "syllo/inference.hpp"

namespace syllo {

class malformed_sentence : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class missing_term : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

/// Injective map from term ids to pseudowords.
class Substitution {
 public:
  Substitution() = default;
  explicit Substitution(std::vector<std::string> words) : words_(std::move(words)) {
    for (std::uint32_t i = 0; i < words_.size(); ++i)
      if (!inverse_.emplace(words_[i], TermId{i}).second)
        throw std::invalid_argument("substitution is not injective: " + words_[i]);
  }

  std::size_t size() const noexcept { return words_.size(); }
  const std::string& word(TermId t) const {
    if (t.value >= words_.size()) throw missing_term("term " + std::to_string(t.value) + " has no pseudoword");
    return words_[t.value];
  }
  std::optional<TermId> find(std::string_view w) const {
    auto it = inverse_.find(std::string(w));
    if (it == inverse_.end()) return std::nullopt;
    return it->second;
  }
  const std::vector<std::string>& words() const noexcept { return words_; }

 private:
  std::vector<std::string> words_;
  std::unordered_map<std::string, TermId> inverse_;
};

namespace detail {

inline const std::unordered_set<std::string>& english_blocklist() {
  static const std::unordered_set<std::string> words{
      "all", "and", "are", "bad", "bed", "big", "boat", "bone", "book", "bread", "cake", "car", "care", "cat",
      "dare", "date", "dead", "dig", "dog", "done", "door", "fare", "fat", "fear", "feet", "file", "fine",
      "fire", "food", "gate", "girl", "goat", "god", "good", "hat", "hate", "hero", "hole", "home", "hope",
      "kid", "kill", "kiss", "lake", "late", "lead", "life", "like", "line", "lose", "love", "made", "make",
      "male", "man", "mate", "meat", "mine", "more", "name", "nice", "none", "nose", "not", "note", "pain",
      "pale", "pet", "pig", "pile", "pine", "pole", "pore", "rain", "rape", "rat", "read", "real", "rice",
      "ride", "rose", "rude", "safe", "sale", "same", "sane", "sex", "sin", "site", "some", "sore", "tale",
      "tea", "team", "ten", "tie", "time", "tone", "vote", "wine", "wire", "wise", "woman", "zero", "no",
      "are", "not", "some"};
  return words;
}

}  // namespace detail

/// Pronounceable lowercase pseudowords of length 3..8 from alternating
/// consonant and vowel clusters.
class PseudowordGenerator {
 public:
  explicit PseudowordGenerator(std::uint64_t seed) : rng_(seed) {}

  std::string next() {
    static const std::array<const char*, 24> onsets{"b",  "br", "c",  "d",  "dr", "f", "g",  "gl",
                                                    "gr", "k",  "l",  "m",  "n",  "p", "pr", "r",
                                                    "s",  "st", "t",  "tr", "v",  "w", "z",  "sn"};
    static const std::array<const char*, 12> vowels{"a", "e", "i", "o", "u", "y", "ai", "ea", "ee", "oo", "ou", "ie"};
    static const std::array<const char*, 10> codas{"", "", "", "n", "r", "s", "t", "c", "l", "d"};
    while (true) {
      std::string w;
      const int syllables = 1 + static_cast<int>(rng_() % 3);
      if (rng_() % 3 == 0) w += vowels[rng_() % vowels.size()];
      for (int s = 0; s < syllables; ++s) {
        w += onsets[rng_() % onsets.size()];
        w += vowels[rng_() % vowels.size()];
      }
      w += codas[rng_() % codas.size()];
      if (w.size() < 3 || w.size() > 8) continue;
      if (detail::english_blocklist().count(w)) continue;
      return w;
    }
  }

 private:
  std::mt19937_64 rng_;
};

inline Substitution random_substitution(std::size_t num_terms, std::uint64_t seed) {
  PseudowordGenerator gen(seed);
  std::vector<std::string> words;
  std::unordered_set<std::string> seen;
  while (words.size() < num_terms) {
    auto w = gen.next();
    if (seen.insert(w).second) words.push_back(std::move(w));
  }
  return Substitution(std::move(words));
}

struct RenderOptions {
  /// Wrap pseudowords as "{word}".
  bool delimit = false;
};

inline std::string render(const Formula& f, const Substitution& s, RenderOptions opt = {}) {
  auto w = [&](TermId t) { return opt.delimit ? "{" + s.word(t) + "}" : s.word(t); };
  switch (f.quantifier) {
    case Quantifier::A: return "All " + w(f.subject) + " are " + w(f.predicate);
    case Quantifier::E: return "No " + w(f.subject) + " are " + w(f.predicate);
    case Quantifier::I: return "Some " + w(f.subject) + " are " + w(f.predicate);
    case Quantifier::O: return "Some " + w(f.subject) + " are not " + w(f.predicate);
  }
  return {};
}

struct ParsedSentence {
  Formula formula;
  bool fabricated = false;
  std::vector<std::string> unknown_words;
};

/// Inverse of render. Unknown words get fresh term ids past the substitution,
/// stable across calls on the same parser, and flag the sentence as fabricated.
class SentenceParser {
 public:
  explicit SentenceParser(const Substitution& s) : s_(s) {}

  ParsedSentence parse(std::string_view sentence) {
    auto words = detail::split_spaces(strip(sentence));
    auto bad = [&] { return malformed_sentence("malformed sentence: '" + std::string(sentence) + "'"); };
    ParsedSentence out;
    Quantifier q;
    std::string_view subj, pred;
    if (words.size() == 4 && words[0] == "All" && words[2] == "are") {
      q = Quantifier::A;
    } else if (words.size() == 4 && words[0] == "No" && words[2] == "are") {
      q = Quantifier::E;
    } else if (words.size() == 4 && words[0] == "Some" && words[2] == "are" && words[3] != "not") {
      q = Quantifier::I;
    } else if (words.size() == 5 && words[0] == "Some" && words[2] == "are" && words[3] == "not") {
      q = Quantifier::O;
    } else {
      throw bad();
    }
    subj = words[1];
    pred = words.back();
    TermId s = term(subj, out), p = term(pred, out);
    if (s == p) throw bad();
    out.formula = Formula{q, s, p};
    return out;
  }

  std::size_t fresh_terms() const noexcept { return fresh_.size(); }

 private:
  static std::string_view strip(std::string_view s) {
    while (!s.empty() && (s.back() == '.' || s.back() == ' ' || s.back() == '\n' || s.back() == '\r'))
      s.remove_suffix(1);
    while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
    return s;
  }

  TermId term(std::string_view token, ParsedSentence& out) {
    if (token.size() >= 2 && token.front() == '{' && token.back() == '}') token = token.substr(1, token.size() - 2);
    if (token.empty()) throw malformed_sentence("empty term in sentence");
    if (auto t = s_.find(token)) return *t;
    out.fabricated = true;
    out.unknown_words.emplace_back(token);
    auto [it, inserted] =
        fresh_.emplace(std::string(token), TermId{static_cast<std::uint32_t>(s_.size() + fresh_.size())});
    return it->second;
  }

  const Substitution& s_;
  std::map<std::string, TermId, std::less<>> fresh_;
};

/// Strict parse: every word must belong to the substitution.
inline Formula parse(std::string_view sentence, const Substitution& s) {
  SentenceParser parser(s);
  auto r = parser.parse(sentence);
  if (r.fabricated) throw missing_term("unknown pseudoword '" + r.unknown_words.front() + "'");
  return r.formula;
}

/// Splits "S1. S2. S3" into sentences.
inline std::vector<std::string> split_sentences(std::string_view text) {
  std::vector<std::string> out;
  std::string current;
  for (char c : text) {
    if (c == '.') {
      if (!current.empty()) out.push_back(current);
      current.clear();
    } else if (!(current.empty() && c == ' ')) {
      current += c;
    }
  }
  while (!current.empty() && current.back() == ' ') current.pop_back();
  if (!current.empty()) out.push_back(current);
  return out;
}

inline std::string join_sentences(const std::vector<std::string>& sentences) {
  std::string out;
  for (std::size_t i = 0; i < sentences.size(); ++i) {
    if (i) out += ". ";
    out += sentences[i];
  }
  return out;
}

/// Premise order for permutation `id`; id 0 keeps the KB order.
inline std::vector<std::size_t> premise_permutation(std::size_t n, std::uint64_t seed, std::size_t id) {
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  if (id == 0) return order;
  std::mt19937_64 rng(hash_values(seed, id));
  std::shuffle(order.begin(), order.end(), rng);
  return order;
}

enum class Task { premise_selection, proof_by_contradiction };

inline const char* task_name(Task t) {
  return t == Task::premise_selection ? "premise-selection" : "proof-by-contradiction";
}

inline Task task_from_name(std::string_view s) {
  if (s == "premise_selection" || s == "premise-selection") return Task::premise_selection;
  if (s == "proof_by_contradiction" || s == "proof-by-contradiction" || s == "pbc")
    return Task::proof_by_contradiction;
  throw std::invalid_argument("unknown task '" + std::string(s) + "'");
}

inline std::string input_text(const std::vector<std::string>& kb_sentences, const std::string& hypothesis) {
  return join_sentences(kb_sentences) + ". Hypothesis: " + hypothesis;
}

enum class SplitKind { overall, compositional, recursive };
enum class Partition { train, test };

inline const char* split_name(SplitKind k) {
  switch (k) {
    case SplitKind::overall: return "overall";
    case SplitKind::compositional: return "compositional";
    case SplitKind::recursive: return "recursive";
  }
  return "";
}

inline SplitKind split_from_name(std::string_view s) {
  if (s == "overall") return SplitKind::overall;
  if (s == "compositional") return SplitKind::compositional;
  if (s == "recursive") return SplitKind::recursive;
  throw std::invalid_argument("unknown split '" + std::string(s) + "'");
}

struct SplitSpec {
  SplitKind kind = SplitKind::overall;
  std::map<int, std::set<std::size_t>> excluded_lengths;

  bool excluded(int type, std::size_t length) const {
    auto it = excluded_lengths.find(type);
    return it != excluded_lengths.end() && it->second.count(length);
  }
  bool keep(int type, std::size_t length, Partition part) const {
    if (kind == SplitKind::overall) return part == Partition::train;
    return excluded(type, length) == (part == Partition::test);
  }
};

/// Five shortest (compositional) or five longest (recursive) lengths per type,
/// measured over the given KBs.
inline SplitSpec make_split(SplitKind kind, std::span<const KnowledgeBase> kbs) {
  SplitSpec spec;
  spec.kind = kind;
  if (kind == SplitKind::overall) return spec;
  std::map<int, std::pair<std::size_t, std::size_t>> range;
  for (const auto& kb : kbs)
    for (const auto& inf : enumerate_minimal(kb)) {
      const std::size_t len = chain_length_of(inf);
      auto [it, fresh] = range.try_emplace(inf.syllogism_type, len, len);
      it->second.first = std::min(it->second.first, len);
      it->second.second = std::max(it->second.second, len);
    }
  for (auto [type, r] : range) {
    auto& ex = spec.excluded_lengths[type];
    if (kind == SplitKind::compositional)
      for (std::size_t l = r.first; l <= r.first + 4; ++l) ex.insert(l);
    else
      for (std::size_t l = r.second >= 4 ? r.second - 4 : 0; l <= r.second; ++l) ex.insert(l);
  }
  return spec;
}

struct DatasetRecord {
  Task task = Task::premise_selection;
  std::string input;
  std::string output;
  std::string kb_id;
  int syllogism_type = 0;
  std::size_t chain_length = 0;
  std::size_t substitution_id = 0;
  std::size_t permutation_id = 0;
  std::string hypothesis;  // symbolic form over the KB vocabulary

  nlohmann::ordered_json to_json() const {
    nlohmann::ordered_json j;
    j["schema"] = "syllo-record/1";
    j["task"] = task_name(task);
    j["input"] = input;
    j["output"] = output;
    j["meta"] = {{"kb_id", kb_id},
                 {"syllogism_type", syllogism_type},
                 {"chain_length", chain_length},
                 {"substitution_id", substitution_id},
                 {"permutation_id", permutation_id},
                 {"hypothesis", hypothesis}};
    return j;
  }

  static DatasetRecord from_json(const nlohmann::ordered_json& j) {
    DatasetRecord r;
    r.task = task_from_name(j.at("task").get<std::string>());
    r.input = j.at("input").get<std::string>();
    r.output = j.at("output").get<std::string>();
    const auto& m = j.at("meta");
    r.kb_id = m.at("kb_id").get<std::string>();
    r.syllogism_type = m.at("syllogism_type").get<int>();
    r.chain_length = m.at("chain_length").get<std::size_t>();
    r.substitution_id = m.at("substitution_id").get<std::size_t>();
    r.permutation_id = m.at("permutation_id").get<std::size_t>();
    r.hypothesis = m.value("hypothesis", std::string{});
    return r;
  }
};

class empty_split : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ExportOptions {
  SplitSpec split;
  Partition partition = Partition::train;
  std::size_t subs_per_kb = 1;
  std::size_t perms_per_kb = 1;
  Task task = Task::premise_selection;
  std::uint64_t seed = 1;
  bool delimit = true;
};

struct ExportSummary {
  std::size_t records = 0;
  std::map<int, std::map<std::size_t, std::size_t>> by_type_length;

  nlohmann::ordered_json manifest(const ExportOptions& opt) const {
    nlohmann::ordered_json j;
    j["schema"] = "syllo-manifest/1";
    j["task"] = task_name(opt.task);
    j["split"] = split_name(opt.split.kind);
    j["partition"] = opt.partition == Partition::train ? "train" : "test";
    j["subs_per_kb"] = opt.subs_per_kb;
    j["perms_per_kb"] = opt.perms_per_kb;
    j["seed"] = opt.seed;
    j["templates"] = {{"A", "All X are Y"},
                      {"E", "No X are Y"},
                      {"I", "Some X are Y"},
                      {"O", "Some X are not Y"},
                      {"input", "<sentences>. Hypothesis: <sentence>"},
                      {"delimiters", opt.delimit ? "{}" : ""}};
    auto& ex = j["excluded_lengths"] = nlohmann::ordered_json::object();
    for (const auto& [t, ls] : opt.split.excluded_lengths) ex[std::to_string(t)] = ls;
    auto& counts = j["counts"] = nlohmann::ordered_json::object();
    for (const auto& [t, ls] : by_type_length) {
      auto& ct = counts[std::to_string(t)] = nlohmann::ordered_json::object();
      for (const auto& [l, c] : ls) ct[std::to_string(l)] = c;
    }
    j["records"] = records;
    return j;
  }
};

/// Streams one record per (KB, substitution, permutation, hypothesis) to `sink`.
/// Symmetric conclusions contribute both orientations as hypotheses.
template <class Sink>
  requires std::invocable<Sink&, const DatasetRecord&>
ExportSummary export_dataset(std::span<const KnowledgeBase> kbs, const ExportOptions& opt, Sink&& sink) {
  if (opt.subs_per_kb < 1 || opt.perms_per_kb < 1) throw std::invalid_argument("counts must be >= 1");
  ExportSummary summary;
  for (const auto& kb : kbs) {
    GoldTable gold(kb);
    struct Item {
      Formula h;
      const MinimalInference* inf;
      std::optional<Formula> pbc;
    };
    std::vector<Item> items;
    for (const auto& [c, inf] : gold.inferences()) {
      const std::size_t len = chain_length_of(inf);
      if (!opt.split.keep(inf.syllogism_type, len, opt.partition)) continue;
      if (opt.task == Task::proof_by_contradiction && !has_contradiction_task(inf.syllogism_type)) continue;
      std::vector<Formula> hs{c};
      if (is_symmetric(c.quantifier)) hs.push_back(Formula{c.quantifier, c.predicate, c.subject});
      for (const auto& h : hs) {
        std::optional<Formula> pbc;
        if (opt.task == Task::proof_by_contradiction) {
          pbc = gold.canonical_contradiction(h);
          if (!pbc) throw std::logic_error("no contradiction formula for " + kb.text(h));
        }
        items.push_back({h, &inf, pbc});
      }
    }
    const std::uint64_t kb_seed = hash_values(opt.seed, kb.fingerprint());
    for (std::size_t s = 0; s < opt.subs_per_kb; ++s) {
      const Substitution sub = random_substitution(kb.num_terms(), hash_values(kb_seed, 0x5ab, s));
      const RenderOptions ro{opt.delimit};
      for (std::size_t p = 0; p < opt.perms_per_kb; ++p) {
        const auto order = premise_permutation(kb.size(), hash_values(kb_seed, 0x9e7, s), p);
        std::vector<std::string> sentences;
        std::unordered_map<Formula, std::size_t> position;
        for (std::size_t k = 0; k < order.size(); ++k) {
          const Formula& f = kb.formulas()[order[k]];
          position[f] = k;
          sentences.push_back(render(f, sub, ro));
        }
        for (const auto& item : items) {
          DatasetRecord r;
          r.task = opt.task;
          r.input = input_text(sentences, render(item.h, sub, ro));
          if (opt.task == Task::premise_selection) {
            std::vector<Formula> prem = item.inf->premises;
            std::sort(prem.begin(), prem.end(), [&](const Formula& a, const Formula& b) {
              return position.at(a) < position.at(b);
            });
            std::vector<std::string> out;
            for (const auto& f : prem) out.push_back(sentences[position.at(f)]);
            r.output = join_sentences(out);
          } else {
            r.output = render(*item.pbc, sub, ro);
          }
          r.kb_id = kb.id;
          r.syllogism_type = item.inf->syllogism_type;
          r.chain_length = chain_length_of(*item.inf);
          r.substitution_id = s;
          r.permutation_id = p;
          r.hypothesis = kb.text(item.h);
          ++summary.records;
          ++summary.by_type_length[r.syllogism_type][r.chain_length];
          sink(r);
        }
      }
    }
  }
  if (summary.records == 0) throw empty_split("split leaves no records");
  return summary;
}

/// Writes records as JSON lines.
inline ExportSummary export_dataset(std::span<const KnowledgeBase> kbs, const ExportOptions& opt, std::ostream& out) {
  return export_dataset(kbs, opt, [&](const DatasetRecord& r) { out << r.to_json().dump() << "\n"; });
}

}  // namespace syllo
