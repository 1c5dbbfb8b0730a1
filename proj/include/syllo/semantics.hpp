#pragma once

// Set-theoretic semantics: terms denote non-empty subsets of a finite universe.

#include <algorithm>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <span>
#include <stdexcept>
#include <vector>

#include "syllo/formula.hpp"

namespace syllo {

struct Interpretation {
  std::uint32_t universe_size = 0;
  std::map<TermId, std::set<std::uint32_t>> assignment;

  bool valid() const {
    return std::all_of(assignment.begin(), assignment.end(), [&](const auto& kv) {
      return !kv.second.empty() && *kv.second.rbegin() < universe_size;
    });
  }
};

class malformed_interpretation : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

inline bool evaluate(const Formula& f, const Interpretation& m) {
  auto lookup = [&](TermId t) -> const std::set<std::uint32_t>& {
    auto it = m.assignment.find(t);
    if (it == m.assignment.end()) throw malformed_interpretation("term is not assigned");
    return it->second;
  };
  const auto& a = lookup(f.subject);
  const auto& b = lookup(f.predicate);
  const bool subset = std::includes(b.begin(), b.end(), a.begin(), a.end());
  const bool overlap = std::any_of(a.begin(), a.end(), [&](auto x) { return b.count(x) != 0; });
  switch (f.quantifier) {
    case Quantifier::A: return subset;
    case Quantifier::E: return !overlap;
    case Quantifier::I: return overlap;
    case Quantifier::O: return !subset;
  }
  return false;
}

inline std::vector<TermId> terms_of(std::span<const Formula> fs) {
  std::vector<TermId> out;
  for (const auto& f : fs) {
    out.push_back(f.subject);
    out.push_back(f.predicate);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

inline std::size_t default_universe_bound(std::span<const Formula> fs) {
  return terms_of(fs).size() + 1;
}

namespace detail {

// Each universe element is a "type": the set of terms containing it. A and E
// formulas restrict which types may exist (2-literal clauses, each with a negative
// literal), I/O formulas and non-emptiness each demand a witness type. Propagating
// the witness literals through the clauses decides whether such a type exists;
// unassigned terms can then be set false.
class TypeConstraints {
 public:
  TypeConstraints(std::span<const Formula> fs, const std::vector<TermId>& terms)
      : terms_(terms), up_(terms.size()), down_(terms.size()), excl_(terms.size()) {
    for (const auto& f : fs) {
      const int s = index(f.subject), p = index(f.predicate);
      switch (f.quantifier) {
        case Quantifier::A:
          up_[s].push_back(p);
          down_[p].push_back(s);
          break;
        case Quantifier::E:
          excl_[s].push_back(p);
          excl_[p].push_back(s);
          break;
        case Quantifier::I: requirements_.push_back({{s, true}, {p, true}}); break;
        case Quantifier::O: requirements_.push_back({{s, true}, {p, false}}); break;
      }
    }
    for (int t = 0; t < static_cast<int>(terms.size()); ++t) requirements_.push_back({{t, true}});
  }

  using Literal = std::pair<int, bool>;
  using Requirement = std::vector<Literal>;

  const std::vector<Requirement>& requirements() const noexcept { return requirements_; }
  std::size_t num_terms() const noexcept { return terms_.size(); }
  TermId term(int i) const { return terms_[static_cast<std::size_t>(i)]; }

  // 0 unknown, 1 true, 2 false. Returns false on conflict.
  bool propagate(const std::vector<Literal>& literals, std::vector<std::uint8_t>& value) const {
    value.assign(terms_.size(), 0);
    std::vector<Literal> queue(literals.begin(), literals.end());
    while (!queue.empty()) {
      auto [t, positive] = queue.back();
      queue.pop_back();
      const std::uint8_t want = positive ? 1 : 2;
      if (value[t] == want) continue;
      if (value[t] != 0) return false;
      value[t] = want;
      if (positive) {
        for (int v : up_[t]) queue.emplace_back(v, true);
        for (int v : excl_[t]) queue.emplace_back(v, false);
      } else {
        for (int v : down_[t]) queue.emplace_back(v, false);
      }
    }
    return true;
  }

 private:
  int index(TermId t) const {
    auto it = std::lower_bound(terms_.begin(), terms_.end(), t);
    return static_cast<int>(it - terms_.begin());
  }

  std::vector<TermId> terms_;
  std::vector<std::vector<int>> up_, down_, excl_;
  std::vector<Requirement> requirements_;
};

class ModelSearch {
 public:
  ModelSearch(const TypeConstraints& c, std::size_t max_bins) : c_(c), max_bins_(max_bins) {}

  bool run() { return place(0); }

  Interpretation model() const {
    Interpretation m;
    m.universe_size = static_cast<std::uint32_t>(bins_.size());
    std::vector<std::uint8_t> value;
    for (std::uint32_t e = 0; e < bins_.size(); ++e) {
      c_.propagate(bins_[e], value);
      for (std::size_t t = 0; t < value.size(); ++t)
        if (value[t] == 1) m.assignment[c_.term(static_cast<int>(t))].insert(e);
    }
    return m;
  }

 private:
  bool place(std::size_t r) {
    const auto& reqs = c_.requirements();
    if (r == reqs.size()) return true;
    std::vector<std::uint8_t> value;
    for (std::size_t b = 0; b < bins_.size(); ++b) {
      auto trial = bins_[b];
      trial.insert(trial.end(), reqs[r].begin(), reqs[r].end());
      if (!c_.propagate(trial, value)) continue;
      std::swap(bins_[b], trial);
      if (place(r + 1)) return true;
      std::swap(bins_[b], trial);
    }
    if (bins_.size() < max_bins_ && c_.propagate(reqs[r], value)) {
      bins_.push_back(reqs[r]);
      if (place(r + 1)) return true;
      bins_.pop_back();
    }
    return false;
  }

  const TypeConstraints& c_;
  std::size_t max_bins_;
  std::vector<std::vector<TypeConstraints::Literal>> bins_;
};

}  // namespace detail

/// Exhaustive search for a model with at most `max_universe` elements.
/// Deterministic for a given formula set.
inline std::optional<Interpretation> find_model(std::span<const Formula> fs,
                                                std::size_t max_universe) {
  if (max_universe < 1) throw std::invalid_argument("max_universe must be at least 1");
  const auto terms = terms_of(fs);
  detail::TypeConstraints constraints(fs, terms);
  // Witnesses live on separate elements, so an individually unsatisfiable
  // requirement refutes every universe size.
  std::vector<std::uint8_t> value;
  for (const auto& req : constraints.requirements())
    if (!constraints.propagate(req, value)) return std::nullopt;
  detail::ModelSearch search(constraints, max_universe);
  if (!search.run()) return std::nullopt;
  return search.model();
}

inline std::optional<Interpretation> find_model(std::span<const Formula> fs) {
  return find_model(fs, default_universe_bound(fs));
}

/// Unbounded consistency: every witness requirement is satisfiable on its own.
inline bool is_consistent(std::span<const Formula> fs) {
  const auto terms = terms_of(fs);
  detail::TypeConstraints constraints(fs, terms);
  std::vector<std::uint8_t> value;
  for (const auto& req : constraints.requirements())
    if (!constraints.propagate(req, value)) return false;
  return true;
}

/// A random model of a consistent set: one witness element per term and per
/// I/O formula, each grown by random extra terms where A and E allow, plus
/// `extra_elements` free elements. Returns nullopt when a witness cannot exist.
inline std::optional<Interpretation> random_model(std::span<const Formula> fs, std::mt19937_64& rng,
                                                  std::size_t extra_elements = 4, double grow = 0.3) {
  const auto terms = terms_of(fs);
  const std::size_t n = terms.size();
  auto idx = [&](TermId t) {
    return static_cast<std::size_t>(std::lower_bound(terms.begin(), terms.end(), t) - terms.begin());
  };
  std::vector<std::vector<std::size_t>> up(n), excl(n);
  for (const auto& f : fs) {
    const auto s = idx(f.subject), p = idx(f.predicate);
    if (f.quantifier == Quantifier::A) up[s].push_back(p);
    if (f.quantifier == Quantifier::E) {
      excl[s].push_back(p);
      excl[p].push_back(s);
    }
  }
  using Element = std::vector<char>;
  auto add = [&](Element& e, std::size_t t) {
    std::vector<std::size_t> stack{t};
    while (!stack.empty()) {
      const auto x = stack.back();
      stack.pop_back();
      if (e[x]) continue;
      e[x] = 1;
      for (auto y : up[x]) stack.push_back(y);
    }
  };
  auto admissible = [&](const Element& e, std::optional<std::size_t> forbidden) {
    if (forbidden && e[*forbidden]) return false;
    for (std::size_t x = 0; x < n; ++x)
      if (e[x])
        for (auto y : excl[x])
          if (e[y]) return false;
    return true;
  };
  std::bernoulli_distribution coin(grow);
  auto witness = [&](std::vector<std::size_t> seed, std::optional<std::size_t> forbidden) -> std::optional<Element> {
    Element e(n, 0);
    for (auto t : seed) add(e, t);
    if (!admissible(e, forbidden)) return std::nullopt;
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    std::shuffle(order.begin(), order.end(), rng);
    for (auto t : order) {
      if (e[t] || !coin(rng)) continue;
      Element trial = e;
      add(trial, t);
      if (admissible(trial, forbidden)) e = std::move(trial);
    }
    return e;
  };

  std::vector<Element> elements;
  auto push = [&](std::optional<Element> e) {
    if (!e) return false;
    elements.push_back(std::move(*e));
    return true;
  };
  for (std::size_t t = 0; t < n; ++t)
    if (!push(witness({t}, std::nullopt))) return std::nullopt;
  for (const auto& f : fs) {
    const auto s = idx(f.subject), p = idx(f.predicate);
    if (f.quantifier == Quantifier::I && !push(witness({s, p}, std::nullopt))) return std::nullopt;
    if (f.quantifier == Quantifier::O && !push(witness({s}, p))) return std::nullopt;
  }
  if (n)
    for (std::size_t k = 0; k < extra_elements; ++k) push(witness({rng() % n}, std::nullopt));

  Interpretation m;
  m.universe_size = static_cast<std::uint32_t>(elements.size());
  for (std::size_t t = 0; t < n; ++t) {
    auto& set = m.assignment[terms[t]];
    for (std::uint32_t i = 0; i < elements.size(); ++i)
      if (elements[i][t]) set.insert(i);
  }
  return m;
}

/// Model-theoretic entailment: premises together with the negated hypothesis have
/// no model within the default universe bound.
inline bool entails_by_models(std::span<const Formula> premises, const Formula& h) {
  std::vector<Formula> fs(premises.begin(), premises.end());
  fs.push_back(negate(h));
  return !find_model(fs).has_value();
}

}  // namespace syllo
