#pragma once

// Assistants suggest a premise subset NP of the KB for premise selection and a
// formula F for proof by contradiction. Hints are only suggestions; the hybrid
// prover checks everything it uses.

#include <cmath>
#include <fstream>
#include <memory>
#include <mutex>
#include <optional>
#include <random>
#include <string>
#include <unordered_map>
#include <vector>

#include <httplib.h>

#include "syllo/inference.hpp"
#include "syllo/text.hpp"

namespace syllo {

enum class HintSource { oracle, noisy, file, remote };

inline const char* hint_source_name(HintSource s) {
  switch (s) {
    case HintSource::oracle: return "oracle";
    case HintSource::noisy: return "noisy";
    case HintSource::file: return "file";
    case HintSource::remote: return "remote";
  }
  return "";
}

/// How a noisy hint was produced.
enum class NoiseMode { exact, padded, wrong };

struct PremiseHint {
  /// Formulas over the KB's term ids; terms past the vocabulary are fabricated.
  std::vector<Formula> premises;
  HintSource source = HintSource::oracle;
  NoiseMode mode = NoiseMode::exact;
  bool fabricated_terms = false;
};

struct ContradictionHint {
  Formula formula;
  HintSource source = HintSource::oracle;
  NoiseMode mode = NoiseMode::exact;
  bool fabricated_terms = false;
};

/// The assistant has nothing to say for this query (e.g. types 2 and 6 for pbc).
class no_hint : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class Assistant {
 public:
  virtual ~Assistant() = default;
  virtual std::string name() const = 0;
  /// Throws on queries the assistant cannot answer; callers treat that as no hint.
  virtual PremiseHint suggest_premises(const KnowledgeBase& kb, const Formula& h) const = 0;
  virtual ContradictionHint suggest_contradiction(const KnowledgeBase& kb, const Formula& h) const = 0;
};

namespace detail {

// Gold tables shared across calls, keyed by KB fingerprint.
class GoldCache {
 public:
  std::shared_ptr<const GoldTable> get(const KnowledgeBase& kb) const {
    const auto key = kb.fingerprint();
    std::lock_guard lock(mu_);
    auto it = tables_.find(key);
    if (it != tables_.end()) return it->second;
    auto table = std::make_shared<const GoldTable>(kb);
    tables_.emplace(key, table);
    return table;
  }

 private:
  mutable std::mutex mu_;
  mutable std::unordered_map<std::uint64_t, std::shared_ptr<const GoldTable>> tables_;
};

inline ContradictionHint gold_contradiction(const GoldTable& gold, const Formula& h) {
  const GoldAnswer g = gold.gold_for(h);
  if (!g.pbc_formula) throw no_hint("type (" + std::to_string(g.syllogism_type) + ") has no contradiction task");
  return {*g.pbc_formula, HintSource::oracle, NoiseMode::exact, false};
}

}  // namespace detail

/// Perfect assistant backed by the gold tables.
class OracleAssistant : public Assistant {
 public:
  std::string name() const override { return "oracle"; }

  PremiseHint suggest_premises(const KnowledgeBase& kb, const Formula& h) const override {
    return {cache_.get(kb)->gold_for(h).premise_selection, HintSource::oracle, NoiseMode::exact, false};
  }

  ContradictionHint suggest_contradiction(const KnowledgeBase& kb, const Formula& h) const override {
    return detail::gold_contradiction(*cache_.get(kb), h);
  }

 private:
  detail::GoldCache cache_;
};

struct NoiseProfile {
  std::string name = "custom";
  double premise_accuracy = 1.0;
  double pbc_accuracy = 1.0;
  /// Probability of a correct but non-minimal premise answer (gold plus extras).
  double padding_rate = 0.0;
  double extra_premise_mean = 0.0;
  double extra_premise_sd = 0.0;
  /// Error-mode mixing, as fractions of wrong premise answers.
  double term_overlap_rate = 1.0;
  double premise_validity_rate = 1.0;
  double term_validity_rate = 1.0;
  std::uint64_t seed = 1;

  void validate() const {
    for (double p : {premise_accuracy, pbc_accuracy, padding_rate, term_overlap_rate, premise_validity_rate,
                     term_validity_rate})
      if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("noise profile probability outside [0,1]");
    if (premise_accuracy + padding_rate > 1.0 + 1e-12)
      throw std::invalid_argument("premise_accuracy + padding_rate exceeds 1");
    if (extra_premise_mean < 0 || extra_premise_sd < 0) throw std::invalid_argument("negative extra premise rate");
  }
};

/// Profiles from the published accuracy, non-minimal and semantic-validity tables.
inline NoiseProfile noise_preset(std::string_view name) {
  NoiseProfile p;
  p.name = std::string(name);
  auto set = [&](double ps, double pbc, double pad, double mean, double sd, double overlap, double pvalid,
                 double tvalid) {
    p.premise_accuracy = ps;
    p.pbc_accuracy = pbc;
    p.padding_rate = pad;
    p.extra_premise_mean = mean;
    p.extra_premise_sd = sd;
    p.term_overlap_rate = overlap;
    p.premise_validity_rate = pvalid;
    p.term_validity_rate = tvalid;
  };
  if (name == "t5-overall") set(0.94, 0.93, 0.0, 0.0, 0.0, 0.77, 0.35, 0.92);
  else if (name == "t5-compositional") set(0.84, 0.67, 0.02, 5.44, 4.48, 0.46, 0.25, 0.90);
  else if (name == "t5-recursive") set(0.80, 0.71, 0.00, 6.06, 3.63, 0.63, 0.18, 0.89);
  else if (name == "gpt-overall") set(0.94, 0.95, 0.0, 0.0, 0.0, 0.94, 0.20, 0.92);
  else if (name == "gpt-compositional") set(0.76, 0.85, 0.08, 5.42, 3.66, 0.71, 0.31, 0.94);
  else if (name == "gpt-recursive") set(0.82, 0.86, 0.02, 3.98, 4.04, 0.92, 0.32, 0.92);
  else if (name == "perfect") set(1.0, 1.0, 0.0, 0.0, 0.0, 1.0, 1.0, 1.0);
  else throw std::invalid_argument("unknown noise preset '" + std::string(name) + "'");
  return p;
}

/// Oracle answers corrupted at the rates of a NoiseProfile. Each (KB, h, task,
/// stream) draws from its own seeded generator, so results do not depend on
/// call order or threads.
class NoisyAssistant : public Assistant {
 public:
  explicit NoisyAssistant(NoiseProfile profile, std::uint64_t stream = 0)
      : profile_(std::move(profile)), stream_(stream) {
    profile_.validate();
  }

  std::string name() const override { return "noisy:" + profile_.name; }
  const NoiseProfile& profile() const noexcept { return profile_; }

  PremiseHint suggest_premises(const KnowledgeBase& kb, const Formula& h) const override {
    return premises_draw(kb, h, stream_);
  }
  ContradictionHint suggest_contradiction(const KnowledgeBase& kb, const Formula& h) const override {
    return contradiction_draw(kb, h, stream_);
  }

  PremiseHint premises_draw(const KnowledgeBase& kb, const Formula& h, std::uint64_t stream) const {
    auto gold = cache_.get(kb);
    const GoldAnswer g = gold->gold_for(h);
    std::mt19937_64 rng(hash_values(profile_.seed, kb.fingerprint(), h.key(), 0x9e5, stream));
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const double r = u(rng);
    PremiseHint hint;
    hint.source = HintSource::noisy;
    if (r < profile_.premise_accuracy) {
      hint.premises = g.premise_selection;
      hint.mode = NoiseMode::exact;
    } else if (r < profile_.premise_accuracy + profile_.padding_rate) {
      hint.premises = pad(kb, g.premise_selection, rng);
      hint.mode = NoiseMode::padded;
    } else {
      hint.premises = wrong_premises(kb, *gold, h, g.premise_selection, rng, hint.fabricated_terms);
      hint.mode = NoiseMode::wrong;
    }
    return hint;
  }

  ContradictionHint contradiction_draw(const KnowledgeBase& kb, const Formula& h, std::uint64_t stream) const {
    auto gold = cache_.get(kb);
    ContradictionHint exact = detail::gold_contradiction(*gold, h);
    exact.source = HintSource::noisy;
    std::mt19937_64 rng(hash_values(profile_.seed, kb.fingerprint(), h.key(), 0xbc, stream));
    if (std::uniform_real_distribution<double>(0.0, 1.0)(rng) < profile_.pbc_accuracy) return exact;
    DirectDerivability assumed = gold->direct();
    assumed.add(negate(h));
    std::uniform_int_distribution<std::uint32_t> term(0, static_cast<std::uint32_t>(kb.num_terms() - 1));
    for (int tries = 0; tries < 10'000; ++tries) {
      Formula f{kAllQuantifiers[rng() % 4], TermId{term(rng)}, TermId{term(rng)}};
      if (!f.well_formed() || is_contradiction_witness(gold->direct(), assumed, f)) continue;
      return {f, HintSource::noisy, NoiseMode::wrong, false};
    }
    return exact;
  }

 private:
  std::vector<Formula> pad(const KnowledgeBase& kb, std::vector<Formula> gold, std::mt19937_64& rng) const {
    std::vector<Formula> rest;
    for (const auto& f : kb.formulas())
      if (std::find(gold.begin(), gold.end(), f) == gold.end()) rest.push_back(f);
    std::shuffle(rest.begin(), rest.end(), rng);
    const double draw = std::normal_distribution<double>(profile_.extra_premise_mean, profile_.extra_premise_sd)(rng);
    const std::size_t extra =
        std::min(rest.size(), static_cast<std::size_t>(std::max(1.0, std::round(draw))));
    gold.insert(gold.end(), rest.begin(), rest.begin() + static_cast<std::ptrdiff_t>(extra));
    return gold;
  }

  // A premise set confused with another inference, then corrupted per the
  // profile's validity rates. Never equal to or a superset of the gold set.
  std::vector<Formula> wrong_premises(const KnowledgeBase& kb, const GoldTable& gold, const Formula& h,
                                      const std::vector<Formula>& exact, std::mt19937_64& rng,
                                      bool& fabricated_terms) const {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const bool overlap = u(rng) < profile_.term_overlap_rate;
    const bool term_valid = u(rng) < profile_.term_validity_rate;
    const double cond = profile_.term_validity_rate > 0 ? profile_.premise_validity_rate / profile_.term_validity_rate : 0;
    const bool premise_valid = term_valid && u(rng) < std::min(1.0, cond);
    auto touches = [&](const Formula& f) {
      return f.subject == h.subject || f.subject == h.predicate || f.predicate == h.subject ||
             f.predicate == h.predicate;
    };
    auto is_superset_of_gold = [&](const std::vector<Formula>& s) {
      return std::all_of(exact.begin(), exact.end(),
                         [&](const Formula& f) { return std::find(s.begin(), s.end(), f) != s.end(); });
    };

    // Decoys: premise sets of other inferences with the same conclusion quantifier.
    std::vector<const MinimalInference*> decoys;
    for (const auto& [c, inf] : gold.inferences()) {
      if (c == canonical(h) || c.quantifier != h.quantifier) continue;
      const bool t = std::any_of(inf.premises.begin(), inf.premises.end(), touches);
      if (t == overlap) decoys.push_back(&inf);
    }
    std::vector<Formula> out;
    if (!decoys.empty()) {
      out = decoys[rng() % decoys.size()]->premises;
    } else {
      std::vector<Formula> pool;
      for (const auto& f : kb.formulas())
        if (touches(f) == overlap) pool.push_back(f);
      if (pool.empty()) pool.assign(kb.formulas().begin(), kb.formulas().end());
      std::shuffle(pool.begin(), pool.end(), rng);
      pool.resize(std::min(pool.size(), std::max<std::size_t>(1, exact.size())));
      out = pool;
    }
    if (is_superset_of_gold(out)) {
      auto it = std::find(out.begin(), out.end(), exact[rng() % exact.size()]);
      out.erase(it);
      if (out.empty()) {
        for (const auto& f : kb.formulas())
          if (std::find(exact.begin(), exact.end(), f) == exact.end() && touches(f) == overlap) {
            out.push_back(f);
            break;
          }
      }
      if (out.empty()) out.push_back(negate(exact.front()));
    }
    const std::size_t victim = rng() % out.size();
    if (!premise_valid) {
      // Same terms, different quantifier: a formula absent from the KB.
      Formula f = out[victim];
      for (int k = 1; k <= 3; ++k) {
        Formula g{kAllQuantifiers[(static_cast<int>(f.quantifier) + k) % 4], f.subject, f.predicate};
        if (!kb.contains(g) && !kb.contains(Formula{g.quantifier, g.predicate, g.subject})) {
          out[victim] = g;
          break;
        }
      }
    }
    if (!term_valid) {
      Formula& f = out[victim];
      const TermId fresh{static_cast<std::uint32_t>(kb.num_terms())};
      const bool subject_is_h = f.subject == h.subject || f.subject == h.predicate;
      if (subject_is_h) f.predicate = fresh;
      else f.subject = fresh;
      fabricated_terms = true;
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  }

  NoiseProfile profile_;
  std::uint64_t stream_;
  detail::GoldCache cache_;
};

/// The KB's own term names used as pseudowords ("All x1 are x2").
inline Substitution identity_substitution(const KnowledgeBase& kb) { return Substitution(kb.vocabulary().names()); }

class hint_file_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr const char* kHintSchema = "syllo-hints/1";

struct HintRecord {
  std::string kb_id;
  Task task = Task::premise_selection;
  std::string hypothesis;
  std::vector<std::string> sentences;

  nlohmann::ordered_json to_json() const {
    return {{"schema", kHintSchema},
            {"kb_id", kb_id},
            {"task", task_name(task)},
            {"hypothesis", hypothesis},
            {"sentences", sentences}};
  }
};

/// Precomputed hints keyed by (KB id, task, hypothesis sentence).
class FileAssistant : public Assistant {
 public:
  explicit FileAssistant(std::vector<HintRecord> records) {
    for (auto& r : records) {
      auto key = make_key(r.kb_id, r.task, r.hypothesis);
      index_.insert_or_assign(std::move(key), std::move(r.sentences));
    }
  }

  std::string name() const override { return "file"; }
  std::size_t size() const noexcept { return index_.size(); }

  PremiseHint suggest_premises(const KnowledgeBase& kb, const Formula& h) const override {
    PremiseHint hint;
    hint.source = HintSource::file;
    SentenceParser parser(identity_substitution_cached(kb));
    for (const auto& s : lookup(kb, Task::premise_selection, h)) {
      auto parsed = parser.parse(s);
      hint.fabricated_terms |= parsed.fabricated;
      hint.premises.push_back(parsed.formula);
    }
    return hint;
  }

  ContradictionHint suggest_contradiction(const KnowledgeBase& kb, const Formula& h) const override {
    const auto& sentences = lookup(kb, Task::proof_by_contradiction, h);
    if (sentences.size() != 1) throw no_hint("expected exactly one contradiction sentence");
    SentenceParser parser(identity_substitution_cached(kb));
    auto parsed = parser.parse(sentences.front());
    return {parsed.formula, HintSource::file, NoiseMode::exact, parsed.fabricated};
  }

 private:
  static std::string make_key(const std::string& kb_id, Task task, const std::string& hypothesis) {
    return kb_id + '\x1f' + task_name(task) + '\x1f' + hypothesis;
  }

  const std::vector<std::string>& lookup(const KnowledgeBase& kb, Task task, const Formula& h) const {
    const auto key = make_key(kb.id, task, render(h, identity_substitution_cached(kb)));
    auto it = index_.find(key);
    if (it == index_.end()) throw no_hint("no hint for " + kb.id + " / " + kb.text(h));
    return it->second;
  }

  const Substitution& identity_substitution_cached(const KnowledgeBase& kb) const {
    std::lock_guard lock(mu_);
    auto [it, fresh] = subs_.try_emplace(kb.fingerprint());
    if (fresh) it->second = identity_substitution(kb);
    return it->second;
  }

  std::unordered_map<std::string, std::vector<std::string>> index_;
  mutable std::mutex mu_;
  mutable std::unordered_map<std::uint64_t, Substitution> subs_;
};

inline std::vector<HintRecord> read_hint_records(std::istream& in) {
  std::vector<HintRecord> out;
  std::string line;
  std::size_t lineno = 0;
  const Substitution empty;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    auto fail = [&](const std::string& why) {
      return hint_file_error("hint file line " + std::to_string(lineno) + ": " + why);
    };
    try {
      auto j = nlohmann::ordered_json::parse(line);
      if (j.value("schema", std::string{}) != kHintSchema) throw fail("unsupported schema");
      HintRecord r;
      r.kb_id = j.at("kb_id").get<std::string>();
      r.task = task_from_name(j.at("task").get<std::string>());
      r.hypothesis = j.at("hypothesis").get<std::string>();
      r.sentences = j.at("sentences").get<std::vector<std::string>>();
      SentenceParser check(empty);
      check.parse(r.hypothesis);
      for (const auto& s : r.sentences) check.parse(s);
      out.push_back(std::move(r));
    } catch (const hint_file_error&) {
      throw;
    } catch (const std::exception& e) {
      throw fail(e.what());
    }
  }
  return out;
}

inline FileAssistant load_hint_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw hint_file_error("cannot open hint file " + path);
  return FileAssistant(read_hint_records(in));
}

/// Writes the assistant's answers for every minimal inference of each KB, both
/// orientations of symmetric conclusions, both tasks where applicable.
inline std::size_t dump_hints(std::span<const KnowledgeBase> kbs, const Assistant& assistant, std::ostream& out) {
  std::size_t written = 0;
  for (const auto& kb : kbs) {
    const Substitution id = identity_substitution(kb);
    for (const auto& inf : enumerate_minimal(kb)) {
      std::vector<Formula> hs{inf.conclusion};
      if (is_symmetric(inf.conclusion.quantifier))
        hs.push_back(Formula{inf.conclusion.quantifier, inf.conclusion.predicate, inf.conclusion.subject});
      for (const auto& h : hs) {
        auto sentence = [&](const Formula& f) {
          if (f.subject.value >= kb.num_terms() || f.predicate.value >= kb.num_terms()) {
            Formula g = f;
            auto word = [&](TermId t) {
              return t.value < kb.num_terms() ? id.word(t) : "fab" + std::to_string(t.value);
            };
            Substitution tmp({word(g.subject), word(g.predicate)});
            return render(Formula{g.quantifier, TermId{0}, TermId{1}}, tmp);
          }
          return render(f, id);
        };
        try {
          HintRecord r{kb.id, Task::premise_selection, render(h, id), {}};
          for (const auto& f : assistant.suggest_premises(kb, h).premises) r.sentences.push_back(sentence(f));
          out << r.to_json().dump() << "\n";
          ++written;
        } catch (const std::invalid_argument&) {
        } catch (const no_hint&) {
        }
        if (!has_contradiction_task(inf.syllogism_type)) continue;
        try {
          HintRecord r{kb.id, Task::proof_by_contradiction, render(h, id),
                       {sentence(assistant.suggest_contradiction(kb, h).formula)}};
          out << r.to_json().dump() << "\n";
          ++written;
        } catch (const std::invalid_argument&) {
        } catch (const no_hint&) {
        }
      }
    }
  }
  return written;
}

struct RemoteConfig {
  std::string endpoint;  // e.g. http://127.0.0.1:8080/assist
  double timeout_seconds = 10.0;

  static RemoteConfig from_env() {
    RemoteConfig c;
    if (const char* e = std::getenv("SYLLO_ASSISTANT_ENDPOINT")) c.endpoint = e;
    return c;
  }
};

/// Talks to a model server: POST {schema, task, kb_text, hypothesis_text} and
/// expects {"sentences": [...]} back. Transport or format problems surface as
/// no_hint with a diagnostic.
class RemoteAssistant : public Assistant {
 public:
  explicit RemoteAssistant(RemoteConfig config) : config_(std::move(config)) {
    const auto scheme_end = config_.endpoint.find("://");
    if (scheme_end == std::string::npos) throw std::invalid_argument("endpoint must look like http://host:port/path");
    const auto path_start = config_.endpoint.find('/', scheme_end + 3);
    base_ = config_.endpoint.substr(0, path_start);
    path_ = path_start == std::string::npos ? "/" : config_.endpoint.substr(path_start);
  }

  std::string name() const override { return "remote"; }

  PremiseHint suggest_premises(const KnowledgeBase& kb, const Formula& h) const override {
    PremiseHint hint;
    hint.source = HintSource::remote;
    const Substitution id = identity_substitution(kb);
    SentenceParser parser(id);
    for (const auto& s : request(kb, h, Task::premise_selection)) {
      auto parsed = parse_or_no_hint(parser, s);
      hint.fabricated_terms |= parsed.fabricated;
      hint.premises.push_back(parsed.formula);
    }
    return hint;
  }

  ContradictionHint suggest_contradiction(const KnowledgeBase& kb, const Formula& h) const override {
    const Substitution id = identity_substitution(kb);
    SentenceParser parser(id);
    auto sentences = request(kb, h, Task::proof_by_contradiction);
    if (sentences.empty()) throw no_hint("remote assistant returned no sentence");
    auto parsed = parse_or_no_hint(parser, sentences.front());
    return {parsed.formula, HintSource::remote, NoiseMode::exact, parsed.fabricated};
  }

 private:
  static ParsedSentence parse_or_no_hint(SentenceParser& parser, const std::string& s) {
    try {
      return parser.parse(s);
    } catch (const malformed_sentence& e) {
      throw no_hint(std::string("remote output unparseable: ") + e.what());
    }
  }

  std::vector<std::string> request(const KnowledgeBase& kb, const Formula& h, Task task) const {
    const Substitution id = identity_substitution(kb);
    std::vector<std::string> sentences;
    for (const auto& f : kb.formulas()) sentences.push_back(render(f, id));
    nlohmann::ordered_json body{{"schema", "syllo-assist/1"},
                                {"task", task_name(task)},
                                {"kb_text", join_sentences(sentences)},
                                {"hypothesis_text", render(h, id)}};
    httplib::Client client(base_);
    const auto secs = static_cast<time_t>(config_.timeout_seconds);
    const auto usecs = static_cast<time_t>((config_.timeout_seconds - static_cast<double>(secs)) * 1e6);
    client.set_connection_timeout(secs, usecs);
    client.set_read_timeout(secs, usecs);
    auto res = client.Post(path_, body.dump(), "application/json");
    if (!res) throw no_hint("remote transport failure: " + httplib::to_string(res.error()));
    if (res->status != 200) throw no_hint("remote status " + std::to_string(res->status));
    try {
      auto j = nlohmann::json::parse(res->body);
      return j.at("sentences").get<std::vector<std::string>>();
    } catch (const std::exception& e) {
      throw no_hint(std::string("remote response malformed: ") + e.what());
    }
  }

  RemoteConfig config_;
  std::string base_, path_;
};

}  // namespace syllo
