#pragma once

#include <algorithm>
#include <span>
#include <string>
#include <unordered_set>
#include <vector>

#include <json.hpp>

#include "syllo/formula.hpp"

namespace syllo {

/// A set of formulas over a named vocabulary. Formula order is insertion order;
/// membership is set semantics.
class KnowledgeBase {
 public:
  KnowledgeBase() = default;
  explicit KnowledgeBase(Vocabulary vocab) : vocab_(std::move(vocab)) {}

  /// Convenience: parse `<Q> <s> <p>` lines, interning terms in order of appearance.
  static KnowledgeBase from_symbolic(std::initializer_list<std::string_view> lines) {
    KnowledgeBase kb;
    for (auto line : lines) kb.add(parse_symbolic_interning(line, kb.vocab_));
    return kb;
  }

  /// Returns false when the formula was already present.
  bool add(const Formula& f) {
    if (!f.well_formed()) throw std::invalid_argument("formula subject equals predicate");
    if (f.subject.value >= vocab_.size() || f.predicate.value >= vocab_.size())
      throw std::out_of_range("formula term not in vocabulary");
    if (!members_.insert(f).second) return false;
    formulas_.push_back(f);
    return true;
  }

  bool remove(const Formula& f) {
    if (members_.erase(f) == 0) return false;
    formulas_.erase(std::find(formulas_.begin(), formulas_.end(), f));
    return true;
  }

  bool contains(const Formula& f) const { return members_.count(f) != 0; }

  std::span<const Formula> formulas() const noexcept { return formulas_; }
  std::size_t size() const noexcept { return formulas_.size(); }
  bool empty() const noexcept { return formulas_.empty(); }

  const Vocabulary& vocabulary() const noexcept { return vocab_; }
  Vocabulary& vocabulary() noexcept { return vocab_; }
  std::size_t num_terms() const noexcept { return vocab_.size(); }

  std::vector<TermId> terms() const {
    std::vector<TermId> out(vocab_.size());
    for (std::uint32_t i = 0; i < out.size(); ++i) out[i] = TermId{i};
    return out;
  }

  TermId term(std::string_view name) const {
    if (auto id = vocab_.find(name)) return *id;
    throw std::out_of_range("unknown term '" + std::string(name) + "'");
  }
  Formula formula(std::string_view symbolic) const { return parse_symbolic(symbolic, vocab_); }
  std::string text(const Formula& f) const { return to_symbolic(f, vocab_); }

  std::size_t count(Quantifier q) const {
    return static_cast<std::size_t>(std::count_if(
        formulas_.begin(), formulas_.end(), [q](const Formula& f) { return f.quantifier == q; }));
  }

  /// Order-independent content hash of the formula set.
  std::uint64_t fingerprint() const {
    std::vector<std::uint64_t> keys;
    keys.reserve(formulas_.size());
    for (const auto& f : formulas_) keys.push_back(f.key());
    std::sort(keys.begin(), keys.end());
    std::uint64_t h = 0x5eed5eed5eedULL;
    for (auto k : keys) h = hash_combine(h, k);
    return h;
  }

  std::string id;
  nlohmann::ordered_json meta = nlohmann::ordered_json::object();

 private:
  Vocabulary vocab_;
  std::vector<Formula> formulas_;
  std::unordered_set<Formula> members_;
};

}  // namespace syllo
