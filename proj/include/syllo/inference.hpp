#pragma once

// Minimal inferences of the seven syllogism types, enumerated by matching the
// type schemas against the A-graph of a knowledge base, plus gold answers for
// the premise-selection and contradiction tasks.
//
//   (1) {a..x, y..d, O a d}             |- O x y
//   (2) {x..y}                          |- A x y
//   (3) {a..x, y..r, a..q, E r q}       |- O x y
//   (4) {a..x, a..y}                    |- I x y
//   (5) {a..x, y..d, e..f, I a e, E d f}|- O x y
//   (6) {x..q, y..r, E q r}             |- E x y
//   (7) {a..x, c..y, I a c}             |- I x y
//
// where u..v is an A-chain (possibly empty when u = v).

#include <algorithm>
#include <array>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <span>
#include <stdexcept>
#include <unordered_set>
#include <vector>

#include "syllo/knowledge_base.hpp"
#include "syllo/semantics.hpp"

namespace syllo {

struct MinimalInference {
  int syllogism_type = 0;
  std::vector<Formula> premises;  // sorted
  Formula conclusion;             // canonical
  std::vector<std::size_t> chain_lengths;

  friend bool operator==(const MinimalInference&, const MinimalInference&) = default;
};

/// Scalar A-chain length used for bucketing: the longest chain slot.
inline std::size_t chain_length_of(const MinimalInference& inf) {
  if (inf.chain_lengths.empty()) return 0;
  return *std::max_element(inf.chain_lengths.begin(), inf.chain_lengths.end());
}

/// Types whose gold answer has a contradiction formula.
constexpr bool has_contradiction_task(int syllogism_type) noexcept {
  return syllogism_type != 2 && syllogism_type != 6;
}

/// A-graph view of a formula set: reachability and all simple A-paths.
class AGraph {
 public:
  static constexpr std::size_t kMaxPaths = 16;

  AGraph(std::span<const Formula> fs, std::size_t num_terms)
      : n_(num_terms), out_(num_terms), reach_(num_terms * num_terms, 0) {
    for (const auto& f : fs) {
      switch (f.quantifier) {
        case Quantifier::A: out_[f.subject.value].push_back(f.predicate.value); break;
        case Quantifier::E: e_edges_.push_back(f); break;
        case Quantifier::I: i_edges_.push_back(f); break;
        case Quantifier::O: o_edges_.push_back(f); break;
      }
    }
    for (auto& o : out_) std::sort(o.begin(), o.end());
    for (std::size_t s = 0; s < n_; ++s) {
      std::vector<std::uint32_t> todo{static_cast<std::uint32_t>(s)};
      reach_[s * n_ + s] = 1;
      while (!todo.empty()) {
        auto u = todo.back();
        todo.pop_back();
        for (auto v : out_[u])
          if (!reach_[s * n_ + v]) {
            reach_[s * n_ + v] = 1;
            todo.push_back(v);
          }
      }
    }
  }

  std::size_t num_terms() const noexcept { return n_; }
  /// u reaches v through zero or more A-edges.
  bool reaches(TermId u, TermId v) const { return reach_[u.value * n_ + v.value] != 0; }

  std::vector<TermId> up(TermId a) const {
    std::vector<TermId> out;
    for (std::uint32_t v = 0; v < n_; ++v)
      if (reach_[a.value * n_ + v]) out.push_back(TermId{v});
    return out;
  }
  std::vector<TermId> down(TermId b) const {
    std::vector<TermId> out;
    for (std::uint32_t u = 0; u < n_; ++u)
      if (reach_[u * n_ + b.value]) out.push_back(TermId{u});
    return out;
  }

  /// All simple A-paths from u to v as formula lists (one empty path when u = v).
  std::vector<std::vector<Formula>> paths(TermId u, TermId v) const {
    std::vector<std::vector<Formula>> result;
    if (!reaches(u, v)) return result;
    if (u == v) {
      result.emplace_back();
      return result;
    }
    std::vector<Formula> current;
    std::vector<char> visited(n_, 0);
    visited[u.value] = 1;
    auto dfs = [&](auto& self, std::uint32_t at) -> void {
      if (result.size() >= kMaxPaths) return;
      if (at == v.value) {
        result.push_back(current);
        return;
      }
      for (auto next : out_[at]) {
        if (visited[next] || !reach_[next * n_ + v.value]) continue;
        visited[next] = 1;
        current.push_back(A(TermId{at}, TermId{next}));
        self(self, next);
        current.pop_back();
        visited[next] = 0;
      }
    };
    dfs(dfs, u.value);
    return result;
  }

  const std::vector<Formula>& e_edges() const noexcept { return e_edges_; }
  const std::vector<Formula>& i_edges() const noexcept { return i_edges_; }
  const std::vector<Formula>& o_edges() const noexcept { return o_edges_; }

  bool is_forest() const {
    std::vector<int> indegree(n_, 0);
    for (const auto& o : out_)
      for (auto v : o)
        if (++indegree[v] > 1) return false;
    for (std::size_t u = 0; u < n_; ++u)
      for (auto v : out_[u])
        if (reach_[v * n_ + u]) return false;
    return true;
  }

 private:
  std::size_t n_;
  std::vector<std::vector<std::uint32_t>> out_;
  std::vector<char> reach_;
  std::vector<Formula> e_edges_, i_edges_, o_edges_;
};

namespace detail {

class SchemaMatcher {
 public:
  explicit SchemaMatcher(const AGraph& g) : g_(g) {}

  std::map<Formula, std::vector<MinimalInference>> run() {
    const std::size_t n = g_.num_terms();
    for (std::uint32_t xi = 0; xi < n; ++xi) {
      TermId x{xi};
      // (2) and (4)
      for (TermId y : g_.up(x))
        if (y != x) chains({}, A(x, y), 2, {{x, y}});
      const auto above = g_.up(x);
      for (std::size_t i = 0; i < above.size(); ++i)
        for (std::size_t j = i + 1; j < above.size(); ++j)
          chains({}, I(above[i], above[j]), 4, {{x, above[i]}, {x, above[j]}});
    }
    for (const Formula& e : g_.i_edges())
      for (auto [a, c] : {std::pair{e.subject, e.predicate}, std::pair{e.predicate, e.subject}})
        for (TermId x : g_.up(a))
          for (TermId y : g_.up(c))
            if (x != y) chains({e}, I(x, y), 7, {{a, x}, {c, y}});
    for (const Formula& e : g_.e_edges())
      for (auto [q, r] : {std::pair{e.subject, e.predicate}, std::pair{e.predicate, e.subject}}) {
        for (TermId x : g_.down(q))
          for (TermId y : g_.down(r))
            if (x != y) chains({e}, E(x, y), 6, {{x, q}, {y, r}});
        for (TermId a : g_.down(q))
          for (TermId x : g_.up(a))
            for (TermId y : g_.down(r))
              if (x != y) chains({e}, O(x, y), 3, {{a, x}, {y, r}, {a, q}});
      }
    for (const Formula& o : g_.o_edges())
      for (TermId x : g_.up(o.subject))
        for (TermId y : g_.down(o.predicate))
          if (x != y) chains({o}, O(x, y), 1, {{o.subject, x}, {y, o.predicate}});
    for (const Formula& i : g_.i_edges())
      for (auto [a, e] : {std::pair{i.subject, i.predicate}, std::pair{i.predicate, i.subject}})
        for (const Formula& ee : g_.e_edges())
          for (auto [d, f] : {std::pair{ee.subject, ee.predicate}, std::pair{ee.predicate, ee.subject}}) {
            if (!g_.reaches(e, f)) continue;
            for (TermId x : g_.up(a))
              for (TermId y : g_.down(d))
                if (x != y) chains({i, ee}, O(x, y), 5, {{a, x}, {y, d}, {e, f}});
          }

    std::map<Formula, std::vector<MinimalInference>> minimal;
    for (auto& [conclusion, cands] : candidates_) minimal.emplace(conclusion, minimize(std::move(cands)));
    return minimal;
  }

 private:
  using Slot = std::pair<TermId, TermId>;

  void chains(std::vector<Formula> fixed, Formula conclusion, int type, std::vector<Slot> slots) {
    std::vector<std::vector<std::vector<Formula>>> options;
    for (auto [u, v] : slots) {
      options.push_back(g_.paths(u, v));
      if (options.back().empty()) return;
    }
    std::vector<std::size_t> pick(slots.size(), 0);
    while (true) {
      MinimalInference inf;
      inf.syllogism_type = type;
      inf.conclusion = canonical(conclusion);
      inf.premises = fixed;
      for (std::size_t s = 0; s < slots.size(); ++s) {
        const auto& path = options[s][pick[s]];
        inf.premises.insert(inf.premises.end(), path.begin(), path.end());
        inf.chain_lengths.push_back(path.size());
      }
      std::sort(inf.premises.begin(), inf.premises.end());
      inf.premises.erase(std::unique(inf.premises.begin(), inf.premises.end()), inf.premises.end());
      candidates_[inf.conclusion].push_back(std::move(inf));
      std::size_t s = 0;
      while (s < slots.size() && ++pick[s] == options[s].size()) pick[s++] = 0;
      if (s == slots.size()) break;
    }
  }

  static std::vector<MinimalInference> minimize(std::vector<MinimalInference> cands) {
    std::stable_sort(cands.begin(), cands.end(), [](const auto& a, const auto& b) {
      return a.premises.size() < b.premises.size();
    });
    std::vector<MinimalInference> kept;
    for (auto& c : cands) {
      const bool dominated = std::any_of(kept.begin(), kept.end(), [&](const auto& k) {
        return std::includes(c.premises.begin(), c.premises.end(), k.premises.begin(), k.premises.end());
      });
      if (!dominated) kept.push_back(std::move(c));
    }
    return kept;
  }

  const AGraph& g_;
  std::map<Formula, std::vector<MinimalInference>> candidates_;
};

}  // namespace detail

/// Every minimal premise set per (canonical) derivable conclusion.
inline std::map<Formula, std::vector<MinimalInference>> minimal_premise_sets(
    std::span<const Formula> fs, std::size_t num_terms) {
  AGraph graph(fs, num_terms);
  return detail::SchemaMatcher(graph).run();
}

inline std::map<Formula, std::vector<MinimalInference>> minimal_premise_sets(const KnowledgeBase& kb) {
  return minimal_premise_sets(kb.formulas(), kb.num_terms());
}

/// All minimal inferences of a (non-redundant) KB, ordered by conclusion.
inline std::vector<MinimalInference> enumerate_minimal(const KnowledgeBase& kb) {
  std::vector<MinimalInference> out;
  for (auto& [conclusion, sets] : minimal_premise_sets(kb))
    for (auto& inf : sets) out.push_back(std::move(inf));
  return out;
}

/// Derivability using only trivial and rule-based proofs, in closed form:
/// A by A-paths, E by an E premise between the up-sets, I by r4 on an A-path.
class DirectDerivability {
 public:
  DirectDerivability(std::span<const Formula> fs, std::size_t num_terms)
      : n_(num_terms), reach_(num_terms * num_terms, 0) {
    for (std::size_t i = 0; i < n_; ++i) reach_[i * n_ + i] = 1;
    for (const auto& f : fs) add(f);
  }

  void add(const Formula& f) {
    members_.insert(f);
    if (f.quantifier == Quantifier::E) e_edges_.push_back(f);
    if (f.quantifier != Quantifier::A) return;
    const auto s = f.subject.value, p = f.predicate.value;
    if (s >= n_ || p >= n_) return;
    if (reach_[s * n_ + p]) return;
    std::vector<std::uint32_t> below, above;
    for (std::uint32_t u = 0; u < n_; ++u)
      if (reach_[u * n_ + s]) below.push_back(u);
    for (std::uint32_t v = 0; v < n_; ++v)
      if (reach_[p * n_ + v]) above.push_back(v);
    for (auto u : below)
      for (auto v : above) reach_[u * n_ + v] = 1;
  }

  bool derivable(const Formula& f) const {
    if (!f.well_formed()) return false;
    if (members_.count(f)) return true;
    const auto s = f.subject.value, p = f.predicate.value;
    if (s >= n_ || p >= n_) return false;
    switch (f.quantifier) {
      case Quantifier::A: return reach_[s * n_ + p] != 0;
      case Quantifier::I: return reach_[p * n_ + s] != 0;
      case Quantifier::O: return false;
      case Quantifier::E:
        for (const auto& e : e_edges_) {
          const auto q = e.subject.value, r = e.predicate.value;
          if (q >= n_ || r >= n_) continue;
          if ((reach_[s * n_ + q] && reach_[p * n_ + r]) || (reach_[s * n_ + r] && reach_[p * n_ + q]))
            return true;
        }
        return false;
    }
    return false;
  }

 private:
  std::size_t n_;
  std::vector<char> reach_;
  std::vector<Formula> e_edges_;
  std::unordered_set<Formula> members_;
};

/// True iff F works as the contradiction formula for h: the base derives
/// negate(F), and base plus negate(h) derives F, both by direct proofs.
inline bool is_contradiction_witness(const DirectDerivability& base, const DirectDerivability& assumed,
                                     const Formula& f) {
  return base.derivable(negate(f)) && assumed.derivable(f);
}

struct GoldAnswer {
  Formula hypothesis;
  int syllogism_type = 0;
  std::vector<Formula> premise_selection;
  std::optional<Formula> pbc_formula;
};

class not_derivable : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class non_minimal_query : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Gold answers for every minimal inference of one KB.
class GoldTable {
 public:
  explicit GoldTable(const KnowledgeBase& kb)
      : num_terms_(kb.num_terms()),
        formulas_(kb.formulas().begin(), kb.formulas().end()),
        base_(formulas_, num_terms_) {
    for (auto& inf : enumerate_minimal(kb)) {
      const Formula c = inf.conclusion;
      by_conclusion_.emplace(c, std::move(inf));
    }
  }

  const std::multimap<Formula, MinimalInference>& inferences() const noexcept { return by_conclusion_; }

  const MinimalInference* find(const Formula& h) const {
    auto it = by_conclusion_.find(canonical(h));
    return it == by_conclusion_.end() ? nullptr : &it->second;
  }

  /// First witness in the fixed order: quantifier I, E, A, O; then subject and
  /// predicate ascending. Witnesses are derived from the minimal premise set of
  /// h when it has one (so they also hold for the whole KB), else from the KB.
  std::optional<Formula> canonical_contradiction(const Formula& h) const {
    const MinimalInference* inf = find(h);
    const DirectDerivability base = inf ? DirectDerivability(inf->premises, num_terms_) : base_;
    DirectDerivability assumed = base;
    assumed.add(negate(h));
    for (Quantifier q : {Quantifier::I, Quantifier::E, Quantifier::A, Quantifier::O})
      for (std::uint32_t s = 0; s < num_terms_; ++s)
        for (std::uint32_t p = 0; p < num_terms_; ++p) {
          Formula f{q, TermId{s}, TermId{p}};
          if (f.well_formed() && is_contradiction_witness(base, assumed, f)) return f;
        }
    return std::nullopt;
  }

  GoldAnswer gold_for(const Formula& h) const {
    if (h.subject.value >= num_terms_ || h.predicate.value >= num_terms_ || !h.well_formed())
      throw not_derivable("hypothesis is not over the KB vocabulary");
    const MinimalInference* inf = find(h);
    if (!inf) {
      std::vector<Formula> with_neg = formulas_;
      with_neg.push_back(negate(h));
      if (!is_consistent(with_neg))
        throw non_minimal_query("hypothesis is derivable but has no typed minimal inference");
      throw not_derivable("hypothesis is not derivable from the KB");
    }
    GoldAnswer g;
    g.hypothesis = h;
    g.syllogism_type = inf->syllogism_type;
    g.premise_selection = inf->premises;
    if (has_contradiction_task(inf->syllogism_type)) g.pbc_formula = canonical_contradiction(h);
    return g;
  }

  const DirectDerivability& direct() const noexcept { return base_; }

 private:
  std::size_t num_terms_;
  std::vector<Formula> formulas_;
  DirectDerivability base_;
  std::multimap<Formula, MinimalInference> by_conclusion_;
};

inline GoldAnswer gold_for(const KnowledgeBase& kb, const Formula& h) { return GoldTable(kb).gold_for(h); }

struct NonRedundancyReport {
  bool non_redundant = true;
  bool sampled = false;
  std::size_t formulas_checked = 0;
  std::optional<Formula> counterexample;
  std::vector<std::vector<Formula>> premise_sets;  // two distinct minimal sets
};

namespace detail {

inline bool semantically_entails(std::vector<Formula>& scratch, std::span<const Formula> premises,
                                 const Formula& h) {
  scratch.assign(premises.begin(), premises.end());
  scratch.push_back(negate(h));
  return !is_consistent(scratch);
}

// Deletion-based minimal subset of `premises` entailing h.
inline std::vector<Formula> shrink(std::vector<Formula> premises, const Formula& h,
                                   std::vector<Formula>& scratch) {
  for (std::size_t i = 0; i < premises.size();) {
    std::vector<Formula> without = premises;
    without.erase(without.begin() + static_cast<std::ptrdiff_t>(i));
    if (semantically_entails(scratch, without, h))
      premises = std::move(without);
    else
      ++i;
  }
  std::sort(premises.begin(), premises.end());
  return premises;
}

}  // namespace detail

/// Checks that every entailed formula has exactly one minimal premise subset.
/// Works from the semantics alone: for a minimal set M of h, another minimal
/// set exists iff dropping some member of M from the KB keeps h entailed.
/// Above `max_hypotheses` candidate conclusions a seeded sample is audited.
inline NonRedundancyReport verify_non_redundant(const KnowledgeBase& kb,
                                                std::size_t max_hypotheses = 200'000,
                                                std::uint64_t seed = 1) {
  NonRedundancyReport report;
  std::vector<Formula> hypotheses;
  for (std::uint32_t s = 0; s < kb.num_terms(); ++s)
    for (std::uint32_t p = 0; p < kb.num_terms(); ++p)
      if (s != p)
        for (Quantifier q : kAllQuantifiers) {
          Formula f{q, TermId{s}, TermId{p}};
          if (canonical(f) == f) hypotheses.push_back(f);
        }
  if (hypotheses.size() > max_hypotheses) {
    std::mt19937_64 rng(seed);
    std::shuffle(hypotheses.begin(), hypotheses.end(), rng);
    hypotheses.resize(max_hypotheses);
    std::sort(hypotheses.begin(), hypotheses.end());
    report.sampled = true;
  }
  const std::vector<Formula> all(kb.formulas().begin(), kb.formulas().end());
  std::vector<Formula> scratch;
  for (const Formula& h : hypotheses) {
    if (!detail::semantically_entails(scratch, all, h)) continue;
    ++report.formulas_checked;
    const auto minimal = detail::shrink(all, h, scratch);
    for (const Formula& m : minimal) {
      std::vector<Formula> without;
      for (const auto& f : all)
        if (f != m) without.push_back(f);
      if (detail::semantically_entails(scratch, without, h)) {
        report.non_redundant = false;
        report.counterexample = h;
        report.premise_sets = {minimal, detail::shrink(without, h, scratch)};
        return report;
      }
    }
  }
  return report;
}

struct KbStats {
  std::size_t premises = 0;
  std::size_t terms = 0;
  /// Minimal inferences per type (index 1..7), symmetric conclusions counted once.
  std::array<std::size_t, 8> inferences_by_type{};
  /// Valid hypotheses per type: symmetric conclusions count in both orientations.
  std::array<std::size_t, 8> hypotheses_by_type{};
  /// Contradiction-task hypotheses per type (types 2 and 6 excluded).
  std::array<std::size_t, 8> pbc_hypotheses_by_type{};
  /// type -> chain length -> count of minimal inferences.
  std::map<int, std::map<std::size_t, std::size_t>> length_histogram;
  std::size_t longest_chain = 0;

  std::size_t total_inferences() const {
    std::size_t t = 0;
    for (int i = 1; i <= 7; ++i) t += inferences_by_type[i];
    return t;
  }
  std::size_t total_hypotheses() const {
    std::size_t t = 0;
    for (int i = 1; i <= 7; ++i) t += hypotheses_by_type[i];
    return t;
  }
};

inline KbStats kb_stats(const KnowledgeBase& kb, std::span<const MinimalInference> inferences) {
  KbStats st;
  st.premises = kb.size();
  st.terms = kb.num_terms();
  for (const auto& inf : inferences) {
    const int t = inf.syllogism_type;
    const std::size_t weight = is_symmetric(inf.conclusion.quantifier) ? 2 : 1;
    ++st.inferences_by_type[t];
    st.hypotheses_by_type[t] += weight;
    if (has_contradiction_task(t)) st.pbc_hypotheses_by_type[t] += weight;
    ++st.length_histogram[t][chain_length_of(inf)];
    if (t == 2) st.longest_chain = std::max(st.longest_chain, chain_length_of(inf));
  }
  return st;
}

inline KbStats kb_stats(const KnowledgeBase& kb) {
  const auto infs = enumerate_minimal(kb);
  return kb_stats(kb, infs);
}

}  // namespace syllo
