// acceptance [N|all]: one PASS/FAIL line per criterion.

#include <chrono>
#include <cstdio>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "syllo/bench.hpp"
#include "syllo/generator.hpp"
#include "syllo/text.hpp"

using namespace syllo;

namespace {

struct Verdict {
  bool pass = false;
  std::string detail;
};

std::string fmt(double x, int prec = 3) {
  std::ostringstream s;
  s << std::fixed << std::setprecision(prec) << x;
  return s.str();
}

std::vector<KnowledgeBase> paper_kbs(std::size_t n, std::uint64_t first_seed) {
  std::vector<KnowledgeBase> kbs;
  for (std::size_t k = 0; k < n; ++k) kbs.push_back(generate_kb(paper_params(k, first_seed + k)));
  return kbs;
}

std::vector<Formula> all_hypotheses(std::size_t terms) {
  std::vector<Formula> out;
  for (std::uint32_t s = 0; s < terms; ++s)
    for (std::uint32_t p = 0; p < terms; ++p)
      if (s != p)
        for (Quantifier q : kAllQuantifiers) out.push_back(Formula{q, TermId{s}, TermId{p}});
  return out;
}

Formula flip(const Formula& f) { return Formula{f.quantifier, f.predicate, f.subject}; }

// ---- 1: soundness under fuzzing

Verdict soundness() {
  const std::size_t n_kbs = 10, per_kb = 1000;
  const auto kbs = paper_kbs(n_kbs, 1000);
  const OracleAssistant oracle;
  const NoisyAssistant noisy(noise_preset("t5-compositional"));
  NoiseProfile hopeless = noise_preset("t5-compositional");
  hopeless.premise_accuracy = hopeless.pbc_accuracy = hopeless.padding_rate = 0.0;
  const NoisyAssistant wrong(hopeless);
  const std::array<const Assistant*, 3> helpers{&oracle, &noisy, &wrong};

  std::size_t attempts = 0, proofs = 0, violations = 0, bad_models = 0, budget = 0, model_checks = 0;
  std::mt19937_64 rng(2024);
  for (const auto& kb : kbs) {
    std::vector<Interpretation> models;
    for (std::uint64_t k = 0; k < 100; ++k) {
      std::mt19937_64 mrng(hash_values(kb.fingerprint(), k));
      auto m = random_model(kb.formulas(), mrng, 2 + k % 8, 0.1 + 0.05 * static_cast<double>(k % 10));
      if (!m || !std::all_of(kb.formulas().begin(), kb.formulas().end(), [&](auto& f) { return evaluate(f, *m); }))
        ++bad_models;
      else
        models.push_back(std::move(*m));
    }
    if (auto m = find_model(kb.formulas())) models.push_back(std::move(*m));
    else ++bad_models;

    const auto infs = enumerate_minimal(kb);
    const auto n = static_cast<std::uint32_t>(kb.num_terms());
    for (std::size_t a = 0; a < per_kb; ++a, ++attempts) {
      Formula h;
      if (rng() % 2 == 0) {
        h = infs[rng() % infs.size()].conclusion;
        if (is_symmetric(h.quantifier) && rng() % 2) h = flip(h);
      } else {
        const auto s = static_cast<std::uint32_t>(rng() % n);
        h = Formula{kAllQuantifiers[rng() % 4], TermId{s}, TermId{(s + 1 + static_cast<std::uint32_t>(rng() % (n - 1))) % n}};
      }
      const Assistant* helper = helpers[a % helpers.size()];
      const std::uint64_t seed = rng();
      const auto base = prove(h, kb, seed);
      const auto hyb = hybrid_prove(h, kb, helper, helper, seed);
      for (const auto* r : {&base.proof, &hyb.proof}) {
        if (!*r) continue;
        ++proofs;
        if (!check_proof(**r, kb, h)) ++violations;
      }
      for (const auto* rep : {&base.report, &hyb.report}) {
        if (rep->outcome == Outcome::budget_exceeded) ++budget;
        if (rep->outcome != Outcome::proved) continue;
        for (const auto& m : models) {
          ++model_checks;
          if (!evaluate(h, m)) ++violations;
        }
      }
      if ((base.proof.has_value()) != (base.report.outcome == Outcome::proved)) ++violations;
      if ((hyb.proof.has_value()) != (hyb.report.outcome == Outcome::proved)) ++violations;
    }
  }
  return {violations == 0 && bad_models == 0,
          "attempts=" + std::to_string(attempts) + " kbs=" + std::to_string(n_kbs) + " proofs_checked=" +
              std::to_string(proofs) + " model_evaluations=" + std::to_string(model_checks) +
              " violations=" + std::to_string(violations) + " unusable_models=" + std::to_string(bad_models) +
              " budget_exceeded=" + std::to_string(budget)};
}

// ---- 2: prover = enumeration = models

Verdict completeness() {
  std::size_t kbs = 0, hypotheses = 0, discrepancies = 0, entailed = 0;
  for (std::uint64_t seed = 1; seed <= 200; ++seed) {
    const auto kb = generate_kb(small_params(seed));
    ++kbs;
    std::set<Formula> enumerated;
    for (const auto& inf : enumerate_minimal(kb)) enumerated.insert(canonical(inf.conclusion));
    std::vector<Formula> scratch;
    for (const auto& h : all_hypotheses(kb.num_terms())) {
      ++hypotheses;
      const bool proved = prove(h, kb, seed).report.outcome == Outcome::proved;
      const bool listed = enumerated.count(canonical(h)) != 0;
      scratch.assign(kb.formulas().begin(), kb.formulas().end());
      scratch.push_back(negate(h));
      const bool by_models = !find_model(scratch).has_value();
      entailed += by_models;
      if (proved != listed || listed != by_models) {
        if (discrepancies < 5)
          std::cout << "  discrepancy " << kb.id << " " << kb.text(h) << " prover=" << proved << " enum=" << listed
                    << " models=" << by_models << "\n";
        ++discrepancies;
      }
    }
  }
  return {discrepancies == 0, "kbs=" + std::to_string(kbs) + " hypotheses=" + std::to_string(hypotheses) +
                                  " entailed=" + std::to_string(entailed) +
                                  " discrepancies=" + std::to_string(discrepancies)};
}

// ---- 3: non-redundancy

// Every minimal entailing subset by enumeration; false when some hypothesis has two.
bool unique_minimal_sets(const KnowledgeBase& kb) {
  const auto fs = kb.formulas();
  const std::size_t n = fs.size();
  std::vector<Formula> sub(fs.begin(), fs.end());
  for (const auto& h : all_hypotheses(kb.num_terms())) {
    if (canonical(h) != h) continue;
    sub.assign(fs.begin(), fs.end());
    sub.push_back(negate(h));
    if (is_consistent(sub)) continue;
    std::vector<std::uint32_t> minimal;
    for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
      if (std::any_of(minimal.begin(), minimal.end(), [&](auto m) { return (m & mask) == m; })) continue;
      sub.clear();
      for (std::size_t i = 0; i < n; ++i)
        if (mask >> i & 1u) sub.push_back(fs[i]);
      sub.push_back(negate(h));
      if (!is_consistent(sub)) minimal.push_back(mask);
    }
    if (minimal.size() > 1) return false;
  }
  return true;
}

Verdict non_redundancy() {
  std::size_t small = 0, small_fail = 0, disagree = 0;
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    const auto kb = generate_kb(small_params(seed));
    ++small;
    const bool brute = unique_minimal_sets(kb);
    small_fail += !brute;
    disagree += brute != verify_non_redundant(kb).non_redundant;
  }
  std::size_t large = 0, large_fail = 0, sampled = 0;
  for (const auto& kb : paper_kbs(20, 3000)) {
    ++large;
    const auto r = verify_non_redundant(kb);
    large_fail += !r.non_redundant;
    sampled += r.sampled;
  }
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    GenParams p;
    p.seed = 3100 + seed;
    const auto r = verify_non_redundant(generate_kb(p));
    ++large;
    large_fail += !r.non_redundant;
    sampled += r.sampled;
  }
  return {small_fail == 0 && large_fail == 0 && disagree == 0 && sampled == 0,
          "brute_force_kbs=" + std::to_string(small) + " failures=" + std::to_string(small_fail) +
              " audit_disagreements=" + std::to_string(disagree) + " audited_kbs=" + std::to_string(large) +
              " failures=" + std::to_string(large_fail) + " sampled=" + std::to_string(sampled)};
}

// ---- 4, 5: step counts

BenchResult run_paper_bench(std::vector<ProverConfig> configs, BenchPlan& plan) {
  plan.kbs = paper_kbs(10, 4000);
  plan.configs = std::move(configs);
  const auto result = run_bench(plan);
  for (const auto& s : result.slate.shortfalls)
    std::cout << "  shortfall " << s.kb_id << " type " << s.syllogism_type << ": " << s.found << "/" << s.wanted
              << "\n";
  std::cout << "  slate=" << result.slate.items.size() << " runs=" << result.runs.size() << "\n";
  std::cout << "  " << std::left << std::setw(28) << "config" << std::right;
  for (int t = 1; t <= 7; ++t) std::cout << std::setw(7) << ("t" + std::to_string(t));
  std::cout << std::setw(9) << "all" << std::setw(7) << "sd" << std::setw(7) << "acc" << "\n";
  for (const auto& c : result.configs) {
    std::cout << "  " << std::left << std::setw(28) << c.name << std::right;
    for (int t = 1; t <= 7; ++t)
      std::cout << std::setw(7) << (c.by_type.count(t) ? fmt(c.by_type.at(t).mean_log10, 2) : "-");
    std::cout << std::setw(9) << fmt(c.overall.mean_log10, 2) << std::setw(7) << fmt(c.overall.sd_log10, 2)
              << std::setw(7) << fmt(c.overall.accuracy(), 3) << "\n";
  }
  return result;
}

Verdict hybrid_speedup() {
  auto oracle = std::make_shared<OracleAssistant>();
  BenchPlan plan;
  const auto r = run_paper_bench({{"baseline", nullptr, nullptr}, {"hybrid-oracle", oracle, oracle}}, plan);
  const double gap = r.configs[0].overall.mean_log10 - r.configs[1].overall.mean_log10;
  const bool complete = r.configs[0].overall.proved == r.configs[0].overall.runs &&
                        r.configs[1].overall.proved == r.configs[1].overall.runs;
  return {gap >= 2.0 && complete && r.check_failures == 0,
          "baseline=10^" + fmt(r.configs[0].overall.mean_log10, 2) + " hybrid-oracle=10^" +
              fmt(r.configs[1].overall.mean_log10, 2) + " ratio=10^" + fmt(gap, 2) + " (need >= 10^2)" +
              " check_failures=" + std::to_string(r.check_failures)};
}

Verdict noisy_robustness() {
  auto oracle = std::make_shared<OracleAssistant>();
  std::vector<ProverConfig> configs{{"baseline", nullptr, nullptr}, {"hybrid-oracle", oracle, oracle}};
  for (const char* preset :
       {"t5-compositional", "t5-recursive", "t5-overall", "gpt-compositional", "gpt-recursive", "gpt-overall"}) {
    auto a = std::make_shared<NoisyAssistant>(noise_preset(preset));
    configs.push_back({std::string("noisy:") + preset, a, a});
  }
  BenchPlan plan;
  const auto r = run_paper_bench(configs, plan);
  std::size_t mismatches = 0;
  const std::size_t per_config = r.slate.items.size() * plan.repetitions;
  for (std::size_t c = 1; c < r.configs.size(); ++c)
    for (std::size_t i = 0; i < per_config; ++i)
      mismatches += r.runs[c * per_config + i].report.outcome != r.runs[i].report.outcome;
  const double gap = r.configs[2].overall.mean_log10 - r.configs[1].overall.mean_log10;
  return {gap <= 1.0 && mismatches == 0 && r.check_failures == 0,
          "hybrid-oracle=10^" + fmt(r.configs[1].overall.mean_log10, 2) + " noisy:t5-compositional=10^" +
              fmt(r.configs[2].overall.mean_log10, 2) + " factor=10^" + fmt(gap, 2) + " (need <= 10^1)" +
              " verdict_mismatches=" + std::to_string(mismatches) + "/" +
              std::to_string(per_config * (r.configs.size() - 1))};
}

// ---- 6: dataset statistics

Verdict dataset_statistics() {
  constexpr std::size_t n = 30;
  const std::array<double, 8> paper{0, 68, 152, 245, 513, 42, 110, 203};
  double premises = 0, hypotheses = 0;
  std::array<double, 8> by_type{};
  for (const auto& kb : paper_kbs(n, 6000)) {
    const auto st = kb_stats(kb);
    premises += static_cast<double>(st.premises);
    hypotheses += static_cast<double>(st.total_hypotheses());
    for (int t = 1; t <= 7; ++t) by_type[t] += static_cast<double>(st.hypotheses_by_type[t]);
  }
  premises /= n;
  hypotheses /= n;
  for (auto& v : by_type) v /= n;
  std::cout << "  type   mean   reference\n";
  for (int t = 1; t <= 7; ++t)
    std::cout << "  " << t << std::setw(10) << fmt(by_type[t], 1) << std::setw(8) << paper[t] << "\n";
  const std::array<int, 7> order{4, 3, 7, 2, 6, 1, 5};
  bool ranked = true;
  for (std::size_t i = 0; i + 1 < order.size(); ++i) ranked &= by_type[order[i]] > by_type[order[i + 1]];
  const bool prem_ok = premises >= 32.0 && premises <= 48.0;
  const bool hyp_ok = hypotheses >= 1333 * 0.7 && hypotheses <= 1333 * 1.3;
  return {prem_ok && hyp_ok && ranked, "kbs=30 mean_premises=" + fmt(premises, 1) + " (32..48) mean_hypotheses=" +
                                           fmt(hypotheses, 1) + " (933..1733) rank_order_4>3>7>2>6>1>5=" +
                                           (ranked ? "yes" : "no")};
}

// ---- 7: split correctness

Verdict split_correctness() {
  const auto kbs = paper_kbs(6, 7000);
  std::map<int, std::set<std::size_t>> lengths;
  for (const auto& kb : kbs)
    for (const auto& inf : enumerate_minimal(kb)) lengths[inf.syllogism_type].insert(chain_length_of(inf));

  std::size_t records = 0, violations = 0;
  for (Task task : {Task::premise_selection, Task::proof_by_contradiction}) {
    ExportOptions whole;
    whole.task = task;
    std::size_t total = 0;
    export_dataset(kbs, whole, [&](const DatasetRecord&) { ++total; });
    for (SplitKind kind : {SplitKind::compositional, SplitKind::recursive}) {
      ExportOptions opt;
      opt.task = task;
      opt.split = make_split(kind, kbs);
      for (const auto& [t, ls] : lengths) {
        const std::size_t lo = *ls.begin(), hi = *ls.rbegin();
        std::set<std::size_t> want;
        for (auto l : ls)
          if (kind == SplitKind::compositional ? l <= lo + 4 : l + 4 >= hi) want.insert(l);
        std::set<std::size_t> got;
        for (auto l : opt.split.excluded_lengths[t])
          if (ls.count(l)) got.insert(l);
        if (got != want) {
          std::cout << "  excluded lengths for type " << t << " are not the five extreme length values\n";
          ++violations;
        }
      }
      std::size_t parts = 0;
      for (Partition part : {Partition::train, Partition::test}) {
        opt.partition = part;
        std::ostringstream out;
        ExportSummary summary;
        try {
          summary = export_dataset(kbs, opt, out);
        } catch (const empty_split&) {
          continue;
        }
        const auto manifest = summary.manifest(opt);
        std::istringstream in(out.str());
        std::size_t n = 0;
        std::map<std::pair<int, std::size_t>, std::size_t> counts;
        for (std::string line; std::getline(in, line); ++n) {
          const auto r = DatasetRecord::from_json(nlohmann::ordered_json::parse(line));
          const bool excluded = opt.split.excluded(r.syllogism_type, r.chain_length);
          if (excluded != (part == Partition::test)) ++violations;
          ++counts[{r.syllogism_type, r.chain_length}];
        }
        if (manifest["records"] != n) ++violations;
        for (const auto& [k, c] : counts)
          if (manifest["counts"][std::to_string(k.first)][std::to_string(k.second)] != c) ++violations;
        records += n;
        parts += n;
      }
      if (parts != total) {
        std::cout << "  train + test = " << parts << " but the full export has " << total << "\n";
        ++violations;
      }
    }
  }
  return {violations == 0 && records > 0,
          "records_checked=" + std::to_string(records) + " violations=" + std::to_string(violations)};
}

// ---- 8: text round trip

Verdict text_round_trip() {
  std::mt19937_64 rng(8);
  std::size_t failures = 0;
  for (int k = 0; k < 100000; ++k) {
    const auto terms = static_cast<std::uint32_t>(2 + rng() % 40);
    const auto sub = random_substitution(terms, rng());
    const auto s = static_cast<std::uint32_t>(rng() % terms);
    const Formula f{kAllQuantifiers[rng() % 4], TermId{s}, TermId{(s + 1 + static_cast<std::uint32_t>(rng() % (terms - 1))) % terms}};
    try {
      if (parse(render(f, sub, {.delimit = rng() % 2 == 0}), sub) != f) ++failures;
    } catch (const std::exception&) {
      ++failures;
    }
  }
  const Substitution fig3({"preac", "verde", "usni", "goed", "itil", "entpi", "ondy", "ramer"});
  auto f = [](Quantifier q, std::uint32_t a, std::uint32_t b) { return Formula{q, TermId{a - 1}, TermId{b - 1}}; };
  using Q = Quantifier;
  const std::vector<std::pair<Formula, std::string>> sentences{
      {f(Q::A, 1, 2), "All preac are verde"}, {f(Q::A, 2, 3), "All verde are usni"},
      {f(Q::A, 4, 5), "All goed are itil"},   {f(Q::A, 6, 7), "All entpi are ondy"},
      {f(Q::A, 7, 8), "All ondy are ramer"},  {f(Q::E, 3, 8), "No usni are ramer"},
      {f(Q::I, 1, 4), "Some preac are goed"}, {f(Q::O, 3, 1), "Some usni are not preac"}};
  std::size_t fig3_ok = 0;
  for (const auto& [formula, text] : sentences) fig3_ok += render(formula, fig3) == text;
  return {failures == 0 && fig3_ok == sentences.size(),
          "round_trips=100000 failures=" + std::to_string(failures) + " fig3_sentences=" + std::to_string(fig3_ok) +
              "/8"};
}

// ---- 9: what is not reproduced

Verdict not_reproduced() {
  struct Row {
    const char* preset;
    double premise, pbc;
  };
  const std::vector<Row> table{{"t5-overall", 0.94, 0.93},       {"gpt-overall", 0.94, 0.95},
                               {"t5-compositional", 0.84, 0.67}, {"gpt-compositional", 0.76, 0.85},
                               {"t5-recursive", 0.80, 0.71},     {"gpt-recursive", 0.82, 0.86}};
  std::size_t ok = 0;
  for (const auto& row : table) {
    const auto p = noise_preset(row.preset);
    ok += std::abs(p.premise_accuracy - row.premise) < 1e-12 && std::abs(p.pbc_accuracy - row.pbc) < 1e-12;
  }
  const auto kb = generate_kb(small_params(9));
  const NoisyAssistant noisy(noise_preset("t5-compositional"));
  const auto infs = enumerate_minimal(kb);
  std::size_t exact = 0, draws = 0;
  for (std::uint64_t stream = 0; stream < 20000; ++stream) {
    const auto& inf = infs[stream % infs.size()];
    exact += noisy.premises_draw(kb, inf.conclusion, stream).mode == NoiseMode::exact;
    ++draws;
  }
  const double rate = static_cast<double>(exact) / static_cast<double>(draws);
  std::cout << "  model training and its accuracy and cost tables are out of scope; the accuracies enter only as\n"
               "  noise profile parameters and no other criterion trains or calls a model\n";
  return {ok == table.size() && std::abs(rate - 0.84) < 0.02,
          "noise_presets_matching_table=" + std::to_string(ok) + "/" + std::to_string(table.size()) +
              " sampled_premise_accuracy=" + fmt(rate, 3) + " (0.84)"};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<const char*, Verdict (*)()>> criteria{
      {"soundness under fuzzing", soundness},
      {"three-way completeness", completeness},
      {"non-redundancy", non_redundancy},
      {"hybrid speedup", hybrid_speedup},
      {"noisy assistant robustness", noisy_robustness},
      {"dataset statistics", dataset_statistics},
      {"split correctness", split_correctness},
      {"text round trip", text_round_trip},
      {"not reproduced at desk scale", not_reproduced},
  };
  std::vector<std::size_t> which;
  const std::string arg = argc > 1 ? argv[1] : "all";
  if (arg == "all") {
    for (std::size_t i = 1; i <= criteria.size(); ++i) which.push_back(i);
  } else {
    const auto i = std::strtoul(arg.c_str(), nullptr, 10);
    if (i < 1 || i > criteria.size()) {
      std::cerr << "usage: acceptance [1-" << criteria.size() << "|all]\n";
      return 2;
    }
    which.push_back(i);
  }
  bool all = true;
  for (auto i : which) {
    const auto start = std::chrono::steady_clock::now();
    const Verdict v = criteria[i - 1].second();
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::cout << "criterion " << i << " (" << criteria[i - 1].first << "): " << (v.pass ? "PASS" : "FAIL") << " "
              << v.detail << " time=" << fmt(secs, 1) << "s" << std::endl;
    all &= v.pass;
  }
  return all ? 0 : 1;
}
