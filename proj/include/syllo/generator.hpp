#pragma once

// Random knowledge bases as edge-labelled graphs: an A-forest (one tree per
// subgraph, rooted at its smallest set) plus extra I, E and O edges, each kept
// only if the KB stays consistent and every derivable formula keeps a unique
// minimal premise set.

#include <array>
#include <cmath>
#include <cstdint>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "syllo/inference.hpp"

namespace syllo {

struct CountRange {
  std::size_t min = 1;
  std::size_t max = 1;
};

struct ExtraEdges {
  std::size_t e = 0;
  std::size_t i = 0;
  std::size_t o = 0;
};

struct GenParams {
  std::size_t num_subgraphs = 4;
  CountRange max_chain_len{5, 5};
  /// Vertices per subgraph; clamped below by chain length + 1.
  CountRange nodes_per_subgraph{10, 10};
  ExtraEdges extra_edge_counts{2, 2, 4};
  std::uint64_t seed = 1;
  std::size_t max_retries = 50;
  std::size_t attempts_per_edge = 120;
  /// Probability that an E edge is placed to create a type (5) inference.
  double type5_bias = 0.0;
  /// Probability that the second endpoint of an I edge is also drawn near a root.
  double i_shallow_bias = 0.5;
  /// Probability that the subject of an O edge is drawn near a root.
  double o_shallow_bias = 0.5;
  /// Each extra edge is the best of this many valid candidates, judged by how
  /// close the per-type hypothesis counts get to target_mix.
  std::size_t candidates_per_edge = 6;
  /// Number of complete knowledge bases drawn per call; the one closest to
  /// target_mix is returned.
  std::size_t profile_candidates = 4;
  /// Relative hypothesis counts per type (index 1..7); all zero disables the preference.
  std::array<double, 8> target_mix{0, 68, 152, 245, 513, 42, 110, 203};
  /// Order in which the extra edge kinds are placed.
  std::string edge_order = "IEO";
  /// Require every structurally possible inference type to occur.
  bool require_all_types = true;

  void validate() const {
    if (num_subgraphs < 1) throw std::invalid_argument("num_subgraphs must be >= 1");
    if (max_chain_len.min < 1 || max_chain_len.min > max_chain_len.max)
      throw std::invalid_argument("max_chain_len must satisfy 1 <= min <= max");
    {
      std::string sorted = edge_order;
      std::sort(sorted.begin(), sorted.end());
      if (sorted != "EIO") throw std::invalid_argument("edge_order must be a permutation of EIO");
    }
    if (nodes_per_subgraph.min > nodes_per_subgraph.max)
      throw std::invalid_argument("nodes_per_subgraph min > max");
    for (double b : {type5_bias, i_shallow_bias, o_shallow_bias})
      if (!(b >= 0.0 && b <= 1.0)) throw std::invalid_argument("bias outside [0,1]");
  }
};

/// 4 subgraphs with A-chains of length 5.
inline GenParams paper_params_short(std::uint64_t seed) {
  GenParams p;
  p.num_subgraphs = 4;
  p.max_chain_len = {5, 5};
  p.nodes_per_subgraph = {9, 9};
  p.extra_edge_counts = {3, 3, 6};
  p.seed = seed;
  return p;
}

/// 2 subgraphs with A-chains of length 7 to 10.
inline GenParams paper_params_long(std::uint64_t seed) {
  GenParams p;
  p.num_subgraphs = 2;
  p.max_chain_len = {7, 10};
  p.nodes_per_subgraph = {18, 18};
  p.extra_edge_counts = {1, 3, 6};
  p.seed = seed;
  return p;
}

/// Alternates the two paper configurations.
inline GenParams paper_params(std::size_t index, std::uint64_t seed) {
  return index % 2 == 0 ? paper_params_short(seed) : paper_params_long(seed);
}

/// Small KBs for exhaustive cross-checks (at most `max_terms` terms).
inline GenParams small_params(std::uint64_t seed, std::size_t max_terms = 12) {
  std::mt19937_64 rng(seed);
  GenParams p;
  p.num_subgraphs = 1 + rng() % 3;
  const std::size_t per = std::max<std::size_t>(2, max_terms / p.num_subgraphs);
  const std::size_t chain = 1 + rng() % std::min<std::size_t>(4, per - 1);
  p.max_chain_len = {chain, chain};
  p.nodes_per_subgraph = {chain + 1, per};
  p.extra_edge_counts = {rng() % 3, rng() % 3, rng() % 4};
  p.require_all_types = false;
  p.profile_candidates = 1;
  p.seed = seed;
  return p;
}

class generation_failure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

// Oriented hypothesis counts per type, or nullopt when some conclusion has two
// minimal premise sets.
inline std::optional<std::array<std::size_t, 8>> structural_audit(std::span<const Formula> fs,
                                                                  std::size_t num_terms) {
  std::array<std::size_t, 8> counts{};
  for (const auto& [conclusion, sets] : minimal_premise_sets(fs, num_terms)) {
    if (sets.size() != 1) return std::nullopt;
    counts[sets.front().syllogism_type] += is_symmetric(conclusion.quantifier) ? 2 : 1;
  }
  return counts;
}

// Squared log distance between counts and the target mix scaled to the KB's type (4) count.
inline double mix_distance(const std::array<std::size_t, 8>& counts, const std::array<double, 8>& mix) {
  if (mix[4] <= 0) return 0.0;
  const double scale = static_cast<double>(counts[4]) / mix[4];
  double d = 0.0;
  for (int t : {1, 3, 5, 6, 7}) {
    const double x = std::log((static_cast<double>(counts[t]) + 1.0) / (mix[t] * scale + 1.0));
    d += x * x;
  }
  return d;
}

class KbBuilder {
 public:
  KbBuilder(const GenParams& p, std::uint64_t seed) : p_(p), rng_(seed) {}

  std::vector<Formula> build() {
    for (std::size_t g = 0; g < p_.num_subgraphs; ++g) grow_tree();
    for (char kind : p_.edge_order) {
      switch (kind) {
        case 'E': for (std::size_t k = 0; k < p_.extra_edge_counts.e; ++k) place([&] { return random_e(); }); break;
        case 'I': for (std::size_t k = 0; k < p_.extra_edge_counts.i; ++k) place([&] { return random_i(); }); break;
        case 'O': for (std::size_t k = 0; k < p_.extra_edge_counts.o; ++k) place([&] { return random_o(); }); break;
      }
    }
    return formulas_;
  }

  std::size_t num_terms() const noexcept { return tree_.size(); }
  std::vector<std::size_t> chain_lengths() const { return tree_chain_; }

 private:
  std::size_t uniform(std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng_);
  }
  template <class V>
  const auto& pick(const V& v) {
    return v[uniform(0, v.size() - 1)];
  }

  TermId fresh(std::size_t tree, std::size_t depth, std::optional<TermId> parent) {
    TermId t{static_cast<std::uint32_t>(tree_.size())};
    tree_.push_back(tree);
    depth_.push_back(depth);
    parent_.push_back(parent);
    if (parent) formulas_.push_back(A(*parent, t));
    return t;
  }

  void grow_tree() {
    const std::size_t tree = tree_chain_.size();
    const std::size_t len = uniform(p_.max_chain_len.min, p_.max_chain_len.max);
    const std::size_t nodes = std::max(len + 1, uniform(p_.nodes_per_subgraph.min, p_.nodes_per_subgraph.max));
    tree_chain_.push_back(len);
    std::vector<TermId> members{fresh(tree, 0, std::nullopt)};
    for (std::size_t d = 1; d <= len; ++d) members.push_back(fresh(tree, d, members.back()));
    while (members.size() < nodes) {
      std::vector<TermId> open;
      for (TermId m : members)
        if (depth_[m.value] < len) open.push_back(m);
      TermId parent = pick(open);
      members.push_back(fresh(tree, depth_[parent.value] + 1, parent));
    }
  }

  TermId random_term() { return TermId{static_cast<std::uint32_t>(uniform(0, tree_.size() - 1))}; }

  // A random vertex moved a random number of steps towards its root.
  TermId shallow_term() {
    TermId t = random_term();
    for (std::size_t up = uniform(0, depth_[t.value]); up > 0; --up) t = *parent_[t.value];
    return t;
  }

  // A random vertex moved up to a deepest leaf of its subtree.
  TermId deep_term() {
    TermId t = random_term();
    while (true) {
      std::vector<TermId> kids = children(t), best;
      if (kids.empty()) return t;
      std::size_t h = 0;
      for (TermId k : kids) h = std::max(h, height(k));
      for (TermId k : kids)
        if (height(k) == h) best.push_back(k);
      t = pick(best);
    }
  }

  std::size_t height(TermId t) const {
    std::size_t h = 0;
    for (TermId k : children(t)) h = std::max(h, 1 + height(k));
    return h;
  }

  std::vector<TermId> children(TermId t) const {
    std::vector<TermId> kids;
    for (std::uint32_t k = 0; k < tree_.size(); ++k)
      if (parent_[k] == t) kids.push_back(TermId{k});
    return kids;
  }

  std::optional<Formula> random_i() {
    TermId a = shallow_term(), c = uniform(0, 1) ? shallow_term() : random_term();
    if (tree_[a.value] == tree_[c.value]) return std::nullopt;
    return canonical(I(a, c));
  }

  std::optional<Formula> random_e() {
    std::vector<Formula> is;
    for (const auto& f : formulas_)
      if (f.quantifier == Quantifier::I) is.push_back(f);
    TermId q = deep_term(), r = deep_term();
    if (!is.empty() && std::bernoulli_distribution(p_.type5_bias)(rng_)) {
      const Formula& i = pick(is);
      TermId e = uniform(0, 1) ? i.subject : i.predicate;
      std::vector<TermId> above;
      for (TermId t = e;;) {
        above.push_back(t);
        std::vector<TermId> kids = children(t);
        if (kids.empty() || uniform(0, 2) == 0) break;
        t = pick(kids);
      }
      q = pick(above);
    }
    if (tree_[q.value] == tree_[r.value]) return std::nullopt;
    return canonical(E(q, r));
  }

  std::optional<Formula> random_o() {
    TermId a = std::bernoulli_distribution(p_.o_shallow_bias)(rng_) ? shallow_term() : random_term();
    TermId d = random_term();
    if (a == d) return std::nullopt;
    return O(a, d);
  }

  template <class Gen>
  void place(Gen gen) {
    std::optional<Formula> best;
    double best_score = 0.0;
    std::size_t valid = 0;
    for (std::size_t attempt = 0; attempt < p_.attempts_per_edge && valid < p_.candidates_per_edge; ++attempt) {
      auto f = gen();
      if (!f) continue;
      if (std::find(formulas_.begin(), formulas_.end(), *f) != formulas_.end()) continue;
      if (std::find(formulas_.begin(), formulas_.end(), canonical(negate(*f))) != formulas_.end()) continue;
      formulas_.push_back(*f);
      if (is_consistent(formulas_)) {
        if (auto counts = structural_audit(formulas_, tree_.size())) {
          ++valid;
          const double score = mix_distance(*counts, p_.target_mix);
          if (!best || score < best_score) {
            best = *f;
            best_score = score;
          }
        }
      }
      formulas_.pop_back();
    }
    if (best) formulas_.push_back(*best);
    else ++missed_;
  }

 public:
  std::size_t missed_edges() const noexcept { return missed_; }

 private:
  const GenParams& p_;
  std::mt19937_64 rng_;
  std::vector<std::size_t> tree_, depth_, tree_chain_;
  std::vector<std::optional<TermId>> parent_;
  std::vector<Formula> formulas_;
  std::size_t missed_ = 0;
};

inline std::vector<int> possible_types(const GenParams& p) {
  std::vector<int> t{2};
  const bool pair_of_nodes = p.nodes_per_subgraph.max >= 2;
  if (pair_of_nodes) t.push_back(4);
  if (p.extra_edge_counts.o) t.push_back(1);
  if (p.extra_edge_counts.e && p.num_subgraphs >= 2) {
    t.push_back(3);
    t.push_back(6);
  }
  if (p.extra_edge_counts.i && p.num_subgraphs >= 2) t.push_back(7);
  if (p.extra_edge_counts.i && p.extra_edge_counts.e && p.num_subgraphs >= 2) t.push_back(5);
  return t;
}

}  // namespace detail

inline nlohmann::ordered_json params_json(const GenParams& p) {
  nlohmann::ordered_json j;
  j["num_subgraphs"] = p.num_subgraphs;
  j["max_chain_len"] = {p.max_chain_len.min, p.max_chain_len.max};
  j["nodes_per_subgraph"] = {p.nodes_per_subgraph.min, p.nodes_per_subgraph.max};
  j["extra_edges"] = {{"E", p.extra_edge_counts.e}, {"I", p.extra_edge_counts.i}, {"O", p.extra_edge_counts.o}};
  j["edge_order"] = p.edge_order;
  j["type5_bias"] = p.type5_bias;
  j["i_shallow_bias"] = p.i_shallow_bias;
  j["o_shallow_bias"] = p.o_shallow_bias;
  j["candidates_per_edge"] = p.candidates_per_edge;
  j["profile_candidates"] = p.profile_candidates;
  j["target_mix"] = std::vector<double>(p.target_mix.begin() + 1, p.target_mix.end());
  return j;
}

inline KnowledgeBase generate_kb(const GenParams& params) {
  params.validate();
  std::string last_problem = "no attempt";
  std::optional<KnowledgeBase> best;
  double best_score = 0.0;
  std::size_t accepted = 0;
  const std::size_t wanted = std::max<std::size_t>(1, params.profile_candidates);
  for (std::size_t attempt = 0; attempt < std::max<std::size_t>(1, params.max_retries); ++attempt) {
    detail::KbBuilder builder(params, hash_values(params.seed, attempt));
    const auto formulas = builder.build();
    Vocabulary vocab;
    for (std::size_t t = 0; t < builder.num_terms(); ++t) vocab.intern("x" + std::to_string(t + 1));
    KnowledgeBase kb(std::move(vocab));
    for (const auto& f : formulas) kb.add(f);

    const KbStats st = kb_stats(kb);
    if (params.require_all_types) {
      std::ostringstream missing;
      for (int t : detail::possible_types(params))
        if (st.inferences_by_type[t] == 0) missing << " " << t;
      if (!missing.str().empty()) {
        last_problem = "missing inference types:" + missing.str();
        continue;
      }
    }
    const double score = detail::mix_distance(st.hypotheses_by_type, params.target_mix);
    if (!best || score < best_score) {
      std::ostringstream id;
      id << "kb-" << std::hex << params.seed;
      kb.id = id.str();
      kb.meta["seed"] = params.seed;
      kb.meta["attempt"] = attempt;
      kb.meta["params"] = params_json(params);
      kb.meta["chain_lengths"] = builder.chain_lengths();
      kb.meta["stats"] = {{"premises", st.premises},
                          {"terms", st.terms},
                          {"hypotheses", st.total_hypotheses()},
                          {"inferences", st.total_inferences()}};
      best = std::move(kb);
      best_score = score;
    }
    if (++accepted == wanted) break;
  }
  if (best) return std::move(*best);
  throw generation_failure("generation failed after " + std::to_string(params.max_retries) +
                           " retries (seed " + std::to_string(params.seed) + "): " + last_problem);
}

}  // namespace syllo
