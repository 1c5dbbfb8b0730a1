#pragma once

// Baseline symbolic prover: derive (trivial and rule-based proofs), proof by
// contradiction over all formula pairs, and proof reconstruction from the
// partial-proof store.

#include <algorithm>
#include <array>
#include <chrono>
#include <deque>
#include <limits>
#include <optional>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "syllo/proof.hpp"
#include "syllo/semantics.hpp"

namespace syllo {

inline constexpr std::uint64_t kDefaultBudget = 10'000'000;

class budget_exceeded : public std::runtime_error {
 public:
  budget_exceeded() : std::runtime_error("derive budget exceeded") {}
};

enum class Outcome : std::uint8_t { proved, refuted_by_exhaustion, budget_exceeded };

constexpr const char* outcome_name(Outcome o) noexcept {
  constexpr const char* names[] = {"proved", "refuted-by-exhaustion", "budget-exceeded"};
  return names[static_cast<int>(o)];
}

struct StepReport {
  Formula hypothesis;
  Outcome outcome = Outcome::refuted_by_exhaustion;
  std::uint64_t steps = 0;
  std::uint64_t pbc_pairs_tried = 0;
  std::uint64_t seed = 0;
  std::chrono::nanoseconds wall_time{0};
  // Hybrid runs only: steps spent in hinted derive, hinted pbc, and fallback.
  std::array<std::uint64_t, 3> phase_steps{};
  std::size_t fabricated_premises = 0;
};

/// A premise set the search may draw trivial leaves from, with its vocabulary.
class AmbientSet {
 public:
  explicit AmbientSet(std::vector<Formula> fs) : formulas_(std::move(fs)) {
    std::sort(formulas_.begin(), formulas_.end());
    formulas_.erase(std::unique(formulas_.begin(), formulas_.end()), formulas_.end());
    members_.insert(formulas_.begin(), formulas_.end());
    terms_ = terms_of(formulas_);
    fingerprint_ = 0xa3b1e7ULL;
    for (const auto& f : formulas_) fingerprint_ = hash_combine(fingerprint_, f.key());
  }

  explicit AmbientSet(std::span<const Formula> fs)
      : AmbientSet(std::vector<Formula>(fs.begin(), fs.end())) {}

  AmbientSet with(const Formula& extra) const {
    auto fs = formulas_;
    fs.push_back(extra);
    return AmbientSet(std::move(fs));
  }

  bool contains(const Formula& f) const { return members_.count(f) != 0; }
  std::span<const Formula> formulas() const noexcept { return formulas_; }
  const std::vector<TermId>& terms() const noexcept { return terms_; }
  std::uint64_t fingerprint() const noexcept { return fingerprint_; }

  friend bool operator==(const AmbientSet& a, const AmbientSet& b) {
    return a.formulas_ == b.formulas_;
  }

 private:
  std::vector<Formula> formulas_;
  std::unordered_set<Formula> members_;
  std::vector<TermId> terms_;
  std::uint64_t fingerprint_ = 0;
};

/// Mutable state of one proof attempt: partial-proof store, failure cache,
/// step counter and seed. Not shared between attempts.
class SearchState {
 public:
  explicit SearchState(std::uint64_t seed, std::uint64_t budget = kDefaultBudget)
      : seed_(seed), budget_(budget) {}

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t budget() const noexcept { return budget_; }
  std::uint64_t steps() const noexcept { return steps_; }
  std::uint64_t pbc_pairs_tried() const noexcept { return pbc_pairs_; }

  /// When off, failed goals are re-explored on every visit (differential testing).
  bool failure_caching = true;

  std::size_t register_ambient(AmbientSet ambient) {
    auto [lo, hi] = by_fingerprint_.equal_range(ambient.fingerprint());
    for (auto it = lo; it != hi; ++it)
      if (ambients_[it->second] == ambient) return it->second;
    ambients_.push_back(std::move(ambient));
    by_fingerprint_.emplace(ambients_.back().fingerprint(), ambients_.size() - 1);
    return ambients_.size() - 1;
  }

  const AmbientSet& ambient(std::size_t index) const { return ambients_.at(index); }

  const PartialProof* partial(const Formula& f, std::size_t ambient) const {
    auto it = delta_.find(key(f, ambient));
    return it == delta_.end() ? nullptr : &it->second;
  }
  bool failed(const Formula& f, std::size_t ambient) const {
    return failures_.count(key(f, ambient)) != 0;
  }
  std::size_t delta_size() const noexcept { return delta_.size(); }
  std::size_t failure_count() const noexcept { return failures_.size(); }

  /// Charges one derive invocation against the budget.
  void count_step() {
    if (steps_ >= budget_) throw budget_exceeded();
    ++steps_;
  }
  void count_pbc_pair() noexcept { ++pbc_pairs_; }

  void record(std::size_t ambient, PartialProof pp) {
    delta_.try_emplace(key(pp.conclusion, ambient), std::move(pp));
  }
  void record_failure(const Formula& f, std::size_t ambient) {
    if (failure_caching) failures_.insert(key(f, ambient));
  }

 private:

  struct Key {
    std::uint64_t formula;
    std::size_t ambient;
    friend bool operator==(const Key&, const Key&) = default;
  };
  struct KeyHash {
    std::size_t operator()(const Key& k) const noexcept { return hash_combine(k.formula, k.ambient); }
  };
  static Key key(const Formula& f, std::size_t ambient) { return {f.key(), ambient}; }

  std::uint64_t seed_;
  std::uint64_t budget_;
  std::uint64_t steps_ = 0;
  std::uint64_t pbc_pairs_ = 0;
  std::deque<AmbientSet> ambients_;
  std::unordered_multimap<std::uint64_t, std::size_t> by_fingerprint_;
  std::unordered_map<Key, PartialProof, KeyHash> delta_;
  std::unordered_set<Key, KeyHash> failures_;
};

/// One backward-chaining step for a goal: the rule schema and its premises.
struct RuleCandidate {
  Rule rule;
  std::array<Formula, 2> premises;
  std::uint64_t order;
  std::size_t arity() const noexcept { return rule_arity(rule); }
};

/// Every way to conclude `goal` by one rule application with middle terms from
/// `terms`, in seeded pseudo-random order. O-goals have no candidates.
inline std::vector<RuleCandidate> rule_candidates(const Formula& goal, std::span<const TermId> terms,
                                                  std::uint64_t seed) {
  std::vector<RuleCandidate> out;
  const TermId a = goal.subject, c = goal.predicate;
  auto order = [&](Rule r, TermId middle) {
    return hash_values(seed, goal.key(), static_cast<std::uint64_t>(r), middle.value);
  };
  switch (goal.quantifier) {
    case Quantifier::A:
      for (TermId b : terms)
        if (b != a && b != c) out.push_back({Rule::r1, {A(a, b), A(b, c)}, order(Rule::r1, b)});
      break;
    case Quantifier::E:
      for (TermId b : terms)
        if (b != a && b != c) out.push_back({Rule::r2, {A(a, b), E(b, c)}, order(Rule::r2, b)});
      out.push_back({Rule::r3, {E(c, a), E(c, a)}, order(Rule::r3, c)});
      break;
    case Quantifier::I:
      out.push_back({Rule::r4, {A(c, a), A(c, a)}, order(Rule::r4, c)});
      break;
    case Quantifier::O:
      break;
  }
  std::sort(out.begin(), out.end(),
            [](const RuleCandidate& x, const RuleCandidate& y) { return x.order < y.order; });
  return out;
}

/// Iterative derive over one ambient set.
///
/// A goal met again while still open on the work stack counts as underivable at
/// that point, so its failure depends on that open goal. Such failures stay
/// provisional: they become final when the earliest goal they depend on fails,
/// and they are dropped if any goal they depended on later succeeds.
class Deriver {
 public:
  Deriver(SearchState& state, std::size_t ambient)
      : state_(state), ambient_index_(ambient), ambient_(state.ambient(ambient)) {}

  bool run(const Formula& goal) {
    Resolution r = enter(goal);
    if (!r.pushed) return r.value;
    bool value = false;
    std::size_t low = kNone;
    while (true) {
      Frame& top = stack_.back();
      if (top.next_candidate == top.candidates.size()) {
        const std::size_t index = stack_.size() - 1;
        value = false;
        if (top.low >= index) {
          finalize_from(top.mark);
          state_.record_failure(top.goal, ambient_index_);
          low = kNone;
        } else {
          provisional_.push_back(top.goal.key());
          provisional_low_[top.goal.key()] = top.low;
          low = top.low;
        }
        open_.erase(top.goal.key());
        stack_.pop_back();
      } else {
        const RuleCandidate& cand = top.candidates[top.next_candidate];
        if (top.next_premise == cand.arity()) {
          if (top.hit) drop_from(top.mark);
          state_.record(ambient_index_,
                        PartialProof{{cand.premises.begin(), cand.premises.begin() + cand.arity()},
                                     top.goal, ProofType::rule, cand.rule});
          value = true;
          low = kNone;
          open_.erase(top.goal.key());
          stack_.pop_back();
        } else {
          const Formula premise = cand.premises[top.next_premise];
          Resolution child = enter(premise);
          if (child.pushed) continue;
          advance(stack_.back(), child.value, child.low);
          continue;
        }
      }
      if (stack_.empty()) return value;
      advance(stack_.back(), value, low);
    }
  }

 private:
  static constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

  struct Frame {
    Formula goal;
    std::vector<RuleCandidate> candidates;
    std::size_t mark = 0;  // provisional_ size when pushed
    std::size_t next_candidate = 0;
    std::size_t next_premise = 0;
    std::size_t low = kNone;
    bool hit = false;
  };
  struct Resolution {
    bool pushed;
    bool value;
    std::size_t low;
  };

  static void advance(Frame& f, bool ok, std::size_t low) {
    if (ok) {
      ++f.next_premise;
    } else {
      ++f.next_candidate;
      f.next_premise = 0;
      f.low = std::min(f.low, low);
    }
  }

  void finalize_from(std::size_t mark) {
    for (std::size_t i = mark; i < provisional_.size(); ++i) {
      const std::uint64_t k = provisional_[i];
      provisional_low_.erase(k);
      state_.record_failure(formula_from_key(k), ambient_index_);
    }
    provisional_.resize(mark);
  }

  void drop_from(std::size_t mark) {
    for (std::size_t i = mark; i < provisional_.size(); ++i) provisional_low_.erase(provisional_[i]);
    provisional_.resize(mark);
  }

  static Formula formula_from_key(std::uint64_t k) {
    return Formula{static_cast<Quantifier>(k >> 62),
                   TermId{static_cast<std::uint32_t>((k >> 31) & 0x7fffffffULL)},
                   TermId{static_cast<std::uint32_t>(k & 0x7fffffffULL)}};
  }

  Resolution enter(const Formula& goal) {
    state_.count_step();
    if (ambient_.contains(goal)) {
      state_.record(ambient_index_, PartialProof{{}, goal, ProofType::trivial, Rule::r1});
      return {false, true, kNone};
    }
    if (state_.partial(goal, ambient_index_)) return {false, true, kNone};
    if (state_.failed(goal, ambient_index_)) return {false, false, kNone};
    if (auto it = open_.find(goal.key()); it != open_.end()) {
      stack_[it->second].hit = true;
      return {false, false, it->second};
    }
    if (state_.failure_caching) {
      if (auto it = provisional_low_.find(goal.key()); it != provisional_low_.end())
        return {false, false, it->second};
    }
    open_.emplace(goal.key(), stack_.size());
    stack_.push_back(Frame{goal, rule_candidates(goal, ambient_.terms(), state_.seed()),
                           provisional_.size()});
    return {true, false, kNone};
  }

  SearchState& state_;
  std::size_t ambient_index_;
  const AmbientSet& ambient_;
  std::vector<Frame> stack_;
  std::unordered_map<std::uint64_t, std::size_t> open_;
  std::vector<std::uint64_t> provisional_;
  std::unordered_map<std::uint64_t, std::size_t> provisional_low_;
};

/// True iff `h` follows from the ambient set by trivial and rule-based proofs.
/// Throws budget_exceeded when the step budget runs out.
inline bool derive(const Formula& h, std::size_t ambient, SearchState& state) {
  return Deriver(state, ambient).run(h);
}

/// Candidate contradiction formulas over a vocabulary, in seeded order. With a
/// hint, the hinted formula comes first and is not repeated.
inline std::vector<Formula> contradiction_candidates(const Formula& h, std::span<const TermId> terms,
                                                     std::uint64_t seed,
                                                     std::optional<Formula> hint = std::nullopt) {
  std::vector<std::pair<std::uint64_t, Formula>> keyed;
  keyed.reserve(terms.size() * terms.size() * 4);
  for (TermId s : terms)
    for (TermId p : terms)
      if (s != p)
        for (Quantifier q : kAllQuantifiers) {
          Formula f{q, s, p};
          if (hint && f == *hint) continue;
          keyed.emplace_back(hash_values(seed ^ 0x7bcULL, h.key(), f.key()), f);
        }
  std::sort(keyed.begin(), keyed.end(),
            [](const auto& x, const auto& y) { return x.first < y.first; });
  std::vector<Formula> out;
  out.reserve(keyed.size() + 1);
  if (hint && hint->well_formed()) out.push_back(*hint);
  for (auto& [k, f] : keyed) out.push_back(f);
  return out;
}

/// Proof by contradiction: finds F with ambient |- negate(F) and
/// ambient + {negate(h)} |- F. Records ({F, negate(F)}, h, (iii)) on success.
inline bool pbc(const Formula& h, std::size_t ambient, SearchState& state,
                std::optional<Formula> hint = std::nullopt) {
  const AmbientSet& base = state.ambient(ambient);
  const std::size_t assumed = state.register_ambient(base.with(negate(h)));
  auto vocab = state.ambient(assumed).terms();
  for (TermId t : {h.subject, h.predicate})
    if (!std::binary_search(vocab.begin(), vocab.end(), t))
      vocab.insert(std::lower_bound(vocab.begin(), vocab.end(), t), t);
  for (const Formula& f : contradiction_candidates(h, vocab, state.seed(), hint)) {
    state.count_pbc_pair();
    if (derive(negate(f), ambient, state) && derive(f, assumed, state)) {
      state.record(ambient, PartialProof{{f, negate(f)}, h, ProofType::contradiction, Rule::r1});
      return true;
    }
  }
  return false;
}

class incomplete_derivation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Rebuilds the proof of `h` from the partial-proof store.
inline Proof get_steps(const Formula& h, std::size_t ambient, SearchState& state) {
  const PartialProof* pp = state.partial(h, ambient);
  if (!pp) throw incomplete_derivation("no stored derivation for goal");
  switch (pp->type) {
    case ProofType::trivial:
      return Proof::trivial(h);
    case ProofType::rule: {
      std::vector<Proof> children;
      for (const auto& premise : pp->premises) children.push_back(get_steps(premise, ambient, state));
      return Proof::by_rule(pp->rule, h, std::move(children));
    }
    case ProofType::contradiction: {
      const Formula f = pp->premises.at(0);
      const std::size_t assumed = state.register_ambient(state.ambient(ambient).with(negate(h)));
      Proof positive = get_steps(f, assumed, state);
      Proof negative = get_steps(negate(f), ambient, state);
      return Proof::by_contradiction(h, std::move(positive), std::move(negative));
    }
  }
  throw incomplete_derivation("corrupt partial proof");
}

struct ProveResult {
  std::optional<Proof> proof;
  StepReport report;
};

/// Derive first, then proof by contradiction, over the given ambient set.
inline ProveResult prove_in(const Formula& h, std::size_t ambient, SearchState& state) {
  const auto start = std::chrono::steady_clock::now();
  ProveResult result;
  result.report.hypothesis = h;
  result.report.seed = state.seed();
  try {
    if (derive(h, ambient, state) || pbc(h, ambient, state)) {
      result.proof = get_steps(h, ambient, state);
      result.report.outcome = Outcome::proved;
    } else {
      result.report.outcome = Outcome::refuted_by_exhaustion;
    }
  } catch (const budget_exceeded&) {
    result.report.outcome = Outcome::budget_exceeded;
  }
  result.report.steps = state.steps();
  result.report.pbc_pairs_tried = state.pbc_pairs_tried();
  result.report.wall_time = std::chrono::duration_cast<std::chrono::nanoseconds>(
      std::chrono::steady_clock::now() - start);
  return result;
}

inline ProveResult prove(const Formula& h, std::span<const Formula> kb, SearchState& state) {
  return prove_in(h, state.register_ambient(AmbientSet(kb)), state);
}

inline ProveResult prove(const Formula& h, const KnowledgeBase& kb, SearchState& state) {
  return prove(h, kb.formulas(), state);
}

inline ProveResult prove(const Formula& h, const KnowledgeBase& kb, std::uint64_t seed,
                         std::uint64_t budget = kDefaultBudget) {
  SearchState state(seed, budget);
  return prove(h, kb, state);
}

}  // namespace syllo
