#pragma once

// Syllogistic formulas: four quantifiers over an ordered pair of terms.

#include <array>
#include <compare>
#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "syllo/hash.hpp"

namespace syllo {

enum class Quantifier : std::uint8_t { A = 0, E = 1, I = 2, O = 3 };

inline constexpr std::array<Quantifier, 4> kAllQuantifiers{Quantifier::A, Quantifier::E,
                                                           Quantifier::I, Quantifier::O};

constexpr char quantifier_char(Quantifier q) noexcept { return "AEIO"[static_cast<int>(q)]; }

constexpr std::optional<Quantifier> quantifier_from_char(char c) noexcept {
  switch (c) {
    case 'A': return Quantifier::A;
    case 'E': return Quantifier::E;
    case 'I': return Quantifier::I;
    case 'O': return Quantifier::O;
    default: return std::nullopt;
  }
}

constexpr bool is_symmetric(Quantifier q) noexcept {
  return q == Quantifier::E || q == Quantifier::I;
}

struct TermId {
  std::uint32_t value = 0;
  friend constexpr auto operator<=>(TermId, TermId) = default;
};

struct Formula {
  Quantifier quantifier = Quantifier::A;
  TermId subject;
  TermId predicate;

  friend constexpr bool operator==(const Formula&, const Formula&) = default;
  friend constexpr auto operator<=>(const Formula& a, const Formula& b) {
    if (auto c = a.subject <=> b.subject; c != 0) return c;
    if (auto c = a.predicate <=> b.predicate; c != 0) return c;
    return a.quantifier <=> b.quantifier;
  }

  constexpr std::uint64_t key() const noexcept {
    return (static_cast<std::uint64_t>(quantifier) << 62) |
           (static_cast<std::uint64_t>(subject.value) << 31) | predicate.value;
  }
  constexpr bool well_formed() const noexcept { return subject != predicate; }
};

constexpr Formula make_formula(Quantifier q, TermId s, TermId p) noexcept { return {q, s, p}; }
constexpr Formula A(TermId s, TermId p) noexcept { return {Quantifier::A, s, p}; }
constexpr Formula E(TermId s, TermId p) noexcept { return {Quantifier::E, s, p}; }
constexpr Formula I(TermId s, TermId p) noexcept { return {Quantifier::I, s, p}; }
constexpr Formula O(TermId s, TermId p) noexcept { return {Quantifier::O, s, p}; }

/// Contradictory formula: A<->O and E<->I, terms unchanged.
constexpr Formula negate(const Formula& f) noexcept {
  constexpr std::array<Quantifier, 4> flip{Quantifier::O, Quantifier::I, Quantifier::E,
                                           Quantifier::A};
  return {flip[static_cast<int>(f.quantifier)], f.subject, f.predicate};
}

/// I/E formulas oriented with the smaller subject; A/O unchanged.
constexpr Formula canonical(const Formula& f) noexcept {
  if (is_symmetric(f.quantifier) && f.predicate < f.subject)
    return {f.quantifier, f.predicate, f.subject};
  return f;
}

struct FormulaHash {
  std::size_t operator()(const Formula& f) const noexcept { return mix64(f.key()); }
};

/// A path of A-formulas t0 -> t1 -> ... -> tn.
class AChain {
 public:
  explicit AChain(std::vector<TermId> terms) : terms_(std::move(terms)) {
    if (terms_.size() < 2) throw std::invalid_argument("A-chain needs at least two terms");
    for (std::size_t i = 0; i < terms_.size(); ++i)
      for (std::size_t j = i + 1; j < terms_.size(); ++j)
        if (terms_[i] == terms_[j]) throw std::invalid_argument("A-chain terms must be distinct");
  }

  std::size_t length() const noexcept { return terms_.size() - 1; }
  const std::vector<TermId>& terms() const noexcept { return terms_; }
  TermId source() const noexcept { return terms_.front(); }
  TermId target() const noexcept { return terms_.back(); }

  std::vector<Formula> formulas() const {
    std::vector<Formula> out;
    out.reserve(length());
    for (std::size_t i = 0; i + 1 < terms_.size(); ++i) out.push_back(A(terms_[i], terms_[i + 1]));
    return out;
  }

 private:
  std::vector<TermId> terms_;
};

class parse_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bidirectional term-name table. Ids are dense and assigned in insertion order.
class Vocabulary {
 public:
  Vocabulary() = default;
  explicit Vocabulary(const std::vector<std::string>& names) {
    for (const auto& n : names) intern(n);
  }

  TermId intern(std::string_view name) {
    if (auto it = index_.find(std::string(name)); it != index_.end()) return it->second;
    TermId id{static_cast<std::uint32_t>(names_.size())};
    names_.emplace_back(name);
    index_.emplace(names_.back(), id);
    return id;
  }

  std::optional<TermId> find(std::string_view name) const {
    if (auto it = index_.find(std::string(name)); it != index_.end()) return it->second;
    return std::nullopt;
  }

  const std::string& name(TermId id) const {
    if (id.value >= names_.size()) throw std::out_of_range("unknown term id");
    return names_[id.value];
  }

  std::size_t size() const noexcept { return names_.size(); }
  const std::vector<std::string>& names() const noexcept { return names_; }

  friend bool operator==(const Vocabulary& a, const Vocabulary& b) { return a.names_ == b.names_; }

 private:
  std::vector<std::string> names_;
  std::unordered_map<std::string, TermId> index_;
};

/// `<Q> <subject> <predicate>`, single-space separated.
inline std::string to_symbolic(const Formula& f, const Vocabulary& vocab) {
  std::string out(1, quantifier_char(f.quantifier));
  out += ' ';
  out += vocab.name(f.subject);
  out += ' ';
  out += vocab.name(f.predicate);
  return out;
}

namespace detail {
inline std::vector<std::string_view> split_spaces(std::string_view text) {
  std::vector<std::string_view> parts;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && (text[i] == ' ' || text[i] == '\t' || text[i] == '\r')) ++i;
    std::size_t j = i;
    while (j < text.size() && text[j] != ' ' && text[j] != '\t' && text[j] != '\r') ++j;
    if (j > i) parts.push_back(text.substr(i, j - i));
    i = j;
  }
  return parts;
}
}  // namespace detail

namespace detail {
template <typename Resolve>
Formula parse_symbolic_with(std::string_view text, Resolve&& resolve) {
  const auto parts = split_spaces(text);
  if (parts.size() != 3 || parts[0].size() != 1)
    throw parse_error("malformed formula: '" + std::string(text) + "'");
  const auto q = quantifier_from_char(parts[0][0]);
  if (!q) throw parse_error("unknown quantifier in '" + std::string(text) + "'");
  Formula f{*q, resolve(parts[1]), resolve(parts[2])};
  if (!f.well_formed()) throw parse_error("subject equals predicate in '" + std::string(text) + "'");
  return f;
}
}  // namespace detail

/// Parses `<Q> <term> <term>` against a fixed vocabulary.
inline Formula parse_symbolic(std::string_view text, const Vocabulary& vocab) {
  return detail::parse_symbolic_with(text, [&](std::string_view name) {
    if (auto id = vocab.find(name)) return *id;
    throw parse_error("unknown term '" + std::string(name) + "'");
  });
}

/// Same, but unknown terms are added to the vocabulary.
inline Formula parse_symbolic_interning(std::string_view text, Vocabulary& vocab) {
  return detail::parse_symbolic_with(text, [&](std::string_view name) { return vocab.intern(name); });
}

}  // namespace syllo

template <>
struct std::hash<syllo::Formula> : syllo::FormulaHash {};

template <>
struct std::hash<syllo::TermId> {
  std::size_t operator()(syllo::TermId t) const noexcept { return syllo::mix64(t.value); }
};
