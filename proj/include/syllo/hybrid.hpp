#pragma once

// The prover with its search narrowed by assistant hints:
//   phase 1  derive over NP = hinted premises that are in the KB
//   phase 2  proof by contradiction over NP, hinted pair first
//   phase 3  the unrestricted prover when phases 1 and 2 fail

#include <memory>
#include <string>
#include <vector>

#include "syllo/assistant.hpp"
#include "syllo/prover.hpp"

namespace syllo {

struct HybridDiagnostics {
  bool premise_hint = false;
  bool contradiction_hint = false;
  std::vector<std::string> notes;
};

struct HybridResult {
  std::optional<Proof> proof;
  StepReport report;
  HybridDiagnostics diagnostics;
};

namespace detail {

// Maps hinted premises onto KB members (either orientation for I/E).
inline std::vector<Formula> restrict_to_kb(const KnowledgeBase& kb, const std::vector<Formula>& hinted,
                                           std::size_t& fabricated) {
  std::vector<Formula> out;
  for (const auto& f : hinted) {
    const Formula flipped{f.quantifier, f.predicate, f.subject};
    if (kb.contains(f)) out.push_back(f);
    else if (is_symmetric(f.quantifier) && kb.contains(flipped)) out.push_back(flipped);
    else ++fabricated;
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace detail

/// Either assistant may be null (no hint). With no hints at all this is the
/// baseline prover, step for step.
inline HybridResult hybrid_prove(const Formula& h, const KnowledgeBase& kb, const Assistant* premise_assistant,
                                 const Assistant* pbc_assistant, SearchState& state) {
  const auto start = std::chrono::steady_clock::now();
  HybridResult result;
  auto& report = result.report;
  report.hypothesis = h;
  report.seed = state.seed();

  std::optional<std::vector<Formula>> np;
  if (premise_assistant) {
    try {
      auto hint = premise_assistant->suggest_premises(kb, h);
      np = detail::restrict_to_kb(kb, hint.premises, report.fabricated_premises);
      result.diagnostics.premise_hint = true;
      if (report.fabricated_premises)
        result.diagnostics.notes.push_back(std::to_string(report.fabricated_premises) +
                                           " hinted premises not in KB");
    } catch (const std::exception& e) {
      result.diagnostics.notes.push_back(std::string("no premise hint: ") + e.what());
    }
  }
  std::optional<Formula> f_hint;
  if (pbc_assistant) {
    try {
      auto hint = pbc_assistant->suggest_contradiction(kb, h);
      if (hint.formula.well_formed() && !hint.fabricated_terms && hint.formula.subject.value < kb.num_terms() &&
          hint.formula.predicate.value < kb.num_terms()) {
        f_hint = hint.formula;
        result.diagnostics.contradiction_hint = true;
      } else {
        result.diagnostics.notes.push_back("contradiction hint outside KB vocabulary");
      }
    } catch (const std::exception& e) {
      result.diagnostics.notes.push_back(std::string("no contradiction hint: ") + e.what());
    }
  }

  std::uint64_t mark = 0;
  int phase = 0;
  auto close_phase = [&] {
    report.phase_steps[phase] += state.steps() - mark;
    mark = state.steps();
  };

  try {
    const std::size_t full = state.register_ambient(AmbientSet(kb.formulas()));
    bool proved = false;
    bool refuted = false;
    std::size_t where = full;
    if (np || f_hint) {
      // Without NP the hinted search already covers the whole KB.
      where = np ? state.register_ambient(AmbientSet(*np)) : full;
      proved = derive(h, where, state);
      close_phase();
      if (!proved) {
        phase = 1;
        proved = pbc(h, where, state, f_hint);
        close_phase();
      }
      refuted = !proved && !np;
    }
    if (!proved && !refuted) {
      phase = 2;
      where = full;
      proved = derive(h, full, state) || pbc(h, full, state);
      close_phase();
    }
    if (proved) {
      result.proof = get_steps(h, where, state);
      report.outcome = Outcome::proved;
    } else {
      report.outcome = Outcome::refuted_by_exhaustion;
    }
  } catch (const budget_exceeded&) {
    report.outcome = Outcome::budget_exceeded;
    close_phase();
  }
  report.steps = state.steps();
  report.pbc_pairs_tried = state.pbc_pairs_tried();
  report.wall_time =
      std::chrono::duration_cast<std::chrono::nanoseconds>(std::chrono::steady_clock::now() - start);
  return result;
}

inline HybridResult hybrid_prove(const Formula& h, const KnowledgeBase& kb, const Assistant* premise_assistant,
                                 const Assistant* pbc_assistant, std::uint64_t seed,
                                 std::uint64_t budget = kDefaultBudget) {
  SearchState state(seed, budget);
  return hybrid_prove(h, kb, premise_assistant, pbc_assistant, state);
}

/// One prover configuration: no assistants means the symbolic baseline.
struct ProverConfig {
  std::string name;
  std::shared_ptr<const Assistant> premise_assistant;
  std::shared_ptr<const Assistant> pbc_assistant;

  bool symbolic() const noexcept { return !premise_assistant && !pbc_assistant; }
};

inline HybridResult run_config(const ProverConfig& c, const Formula& h, const KnowledgeBase& kb, std::uint64_t seed,
                               std::uint64_t budget = kDefaultBudget) {
  if (c.symbolic()) {
    auto r = prove(h, kb, seed, budget);
    r.report.phase_steps[2] = r.report.steps;
    return {std::move(r.proof), r.report, {}};
  }
  return hybrid_prove(h, kb, c.premise_assistant.get(), c.pbc_assistant.get(), seed, budget);
}

struct ComparisonRow {
  std::string config;
  StepReport report;
  /// Steps of the first configuration divided by this row's steps.
  double step_ratio = 1.0;
};

inline std::vector<ComparisonRow> compare_runs(const Formula& h, const KnowledgeBase& kb,
                                               const std::vector<ProverConfig>& configs, std::uint64_t seed,
                                               std::uint64_t budget = kDefaultBudget) {
  if (configs.size() < 2) throw std::invalid_argument("compare_runs needs at least two configurations");
  std::vector<ComparisonRow> rows;
  for (const auto& c : configs) rows.push_back({c.name, run_config(c, h, kb, seed, budget).report, 1.0});
  const double base = static_cast<double>(std::max<std::uint64_t>(1, rows.front().report.steps));
  for (auto& r : rows) r.step_ratio = base / static_cast<double>(std::max<std::uint64_t>(1, r.report.steps));
  return rows;
}

}  // namespace syllo
