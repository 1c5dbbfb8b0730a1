#pragma once

// Evaluation protocol: sample a slate of hypotheses per KB and type, run each
// prover configuration several times with shared seeds, and report geometric
// mean step counts and accuracies.

#include <atomic>
#include <cmath>
#include <iomanip>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <thread>

#include "syllo/hybrid.hpp"

namespace syllo {

struct BenchPlan {
  std::vector<KnowledgeBase> kbs;
  std::size_t per_type_samples = 10;
  std::size_t min_chain_len = 2;
  std::size_t repetitions = 5;
  std::vector<ProverConfig> configs;
  std::uint64_t seed = 1;
  std::uint64_t budget = kDefaultBudget;
  std::size_t threads = 0;  // 0: hardware concurrency

  void validate() const {
    if (per_type_samples % 2 != 0) throw std::invalid_argument("per_type_samples must be even");
    if (min_chain_len < 1) throw std::invalid_argument("min_chain_len must be >= 1");
    if (repetitions < 1) throw std::invalid_argument("repetitions must be >= 1");
  }
};

struct SlateItem {
  std::size_t kb = 0;  // index into the plan's KBs
  Formula hypothesis;
  int syllogism_type = 0;
  std::size_t chain_length = 0;
};

struct Shortfall {
  std::string kb_id;
  int syllogism_type = 0;
  std::size_t found = 0;
  std::size_t wanted = 0;
};

struct Slate {
  std::vector<SlateItem> items;
  std::vector<Shortfall> shortfalls;
};

/// Per KB and type: half the samples from the shortest chains, half from the
/// longest, without replacement, ties broken by a seeded hash.
inline Slate sample_slate(std::span<const KnowledgeBase> kbs, const BenchPlan& plan) {
  plan.validate();
  Slate slate;
  const std::size_t half = plan.per_type_samples / 2;
  for (std::size_t k = 0; k < kbs.size(); ++k) {
    const auto& kb = kbs[k];
    std::map<int, std::vector<std::pair<std::pair<std::size_t, std::uint64_t>, Formula>>> by_type;
    for (const auto& inf : enumerate_minimal(kb)) {
      const std::size_t len = chain_length_of(inf);
      if (len < plan.min_chain_len) continue;
      const std::uint64_t tie = hash_values(plan.seed, kb.fingerprint(), inf.conclusion.key());
      Formula h = inf.conclusion;
      if (is_symmetric(h.quantifier) && (tie >> 63)) h = Formula{h.quantifier, h.predicate, h.subject};
      by_type[inf.syllogism_type].push_back({{len, tie}, h});
    }
    for (int t = 1; t <= 7; ++t) {
      auto& cands = by_type[t];
      std::sort(cands.begin(), cands.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
      std::vector<std::size_t> chosen;
      if (cands.size() <= plan.per_type_samples) {
        for (std::size_t i = 0; i < cands.size(); ++i) chosen.push_back(i);
        if (cands.size() < plan.per_type_samples)
          slate.shortfalls.push_back({kb.id, t, cands.size(), plan.per_type_samples});
      } else {
        for (std::size_t i = 0; i < half; ++i) chosen.push_back(i);
        for (std::size_t i = cands.size() - half; i < cands.size(); ++i) chosen.push_back(i);
      }
      for (std::size_t i : chosen) slate.items.push_back({k, cands[i].second, t, cands[i].first.first});
    }
  }
  return slate;
}

struct Aggregate {
  std::size_t runs = 0;
  std::size_t proved = 0;
  std::size_t budget_failures = 0;
  double mean_log10 = 0.0;  // over proved runs
  double sd_log10 = 0.0;
  double geomean() const { return std::pow(10.0, mean_log10); }
  double accuracy() const { return runs ? static_cast<double>(proved) / static_cast<double>(runs) : 0.0; }
};

struct ConfigResult {
  std::string name;
  Aggregate overall;
  std::map<int, Aggregate> by_type;
  std::map<std::pair<int, std::size_t>, Aggregate> by_type_length;
};

struct RunRecord {
  std::size_t config = 0;
  std::size_t item = 0;
  std::size_t repetition = 0;
  StepReport report;
  bool proof_checked = false;
};

struct BenchResult {
  Slate slate;
  std::vector<std::string> kb_ids;
  std::vector<ConfigResult> configs;
  std::vector<RunRecord> runs;  // sorted by (config, item, repetition)
  std::size_t check_failures = 0;
};

inline Aggregate aggregate(std::span<const StepReport* const> reports) {
  Aggregate a;
  std::vector<double> logs;
  for (const StepReport* r : reports) {
    ++a.runs;
    if (r->outcome == Outcome::proved) {
      ++a.proved;
      logs.push_back(std::log10(static_cast<double>(std::max<std::uint64_t>(1, r->steps))));
    } else if (r->outcome == Outcome::budget_exceeded) {
      ++a.budget_failures;
    }
  }
  if (!logs.empty()) {
    for (double l : logs) a.mean_log10 += l;
    a.mean_log10 /= static_cast<double>(logs.size());
    for (double l : logs) a.sd_log10 += (l - a.mean_log10) * (l - a.mean_log10);
    a.sd_log10 = logs.size() > 1 ? std::sqrt(a.sd_log10 / static_cast<double>(logs.size() - 1)) : 0.0;
  }
  return a;
}

inline std::uint64_t run_seed(std::uint64_t plan_seed, std::size_t item, std::size_t rep) {
  return hash_values(plan_seed, 0xbe7c, item, rep);
}

/// Runs every (config, item, repetition) on a worker pool; every proof is
/// validated with check_proof.
inline BenchResult run_bench(const Slate& slate, const BenchPlan& plan) {
  plan.validate();
  BenchResult result;
  result.slate = slate;
  for (const auto& kb : plan.kbs) result.kb_ids.push_back(kb.id);
  const std::size_t n_items = slate.items.size();
  const std::size_t total = plan.configs.size() * n_items * plan.repetitions;
  result.runs.resize(total);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t job; (job = next.fetch_add(1)) < total;) {
      const std::size_t c = job / (n_items * plan.repetitions);
      const std::size_t item = (job / plan.repetitions) % n_items;
      const std::size_t rep = job % plan.repetitions;
      const SlateItem& it = slate.items[item];
      const KnowledgeBase& kb = plan.kbs.at(it.kb);
      auto r = run_config(plan.configs[c], it.hypothesis, kb, run_seed(plan.seed, item, rep), plan.budget);
      RunRecord rec{c, item, rep, r.report, false};
      if (r.proof) rec.proof_checked = check_proof(*r.proof, kb, it.hypothesis);
      result.runs[job] = rec;
    }
  };
  std::size_t threads = plan.threads ? plan.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = std::min(threads, std::max<std::size_t>(1, total));
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  for (std::size_t c = 0; c < plan.configs.size(); ++c) {
    ConfigResult cr;
    cr.name = plan.configs[c].name;
    std::vector<const StepReport*> all;
    std::map<int, std::vector<const StepReport*>> per_type;
    std::map<std::pair<int, std::size_t>, std::vector<const StepReport*>> per_len;
    for (const auto& run : result.runs) {
      if (run.config != c) continue;
      const auto& it = slate.items[run.item];
      all.push_back(&run.report);
      per_type[it.syllogism_type].push_back(&run.report);
      per_len[{it.syllogism_type, it.chain_length}].push_back(&run.report);
      if (run.report.outcome == Outcome::proved && !run.proof_checked) ++result.check_failures;
    }
    cr.overall = aggregate(all);
    for (auto& [t, v] : per_type) cr.by_type[t] = aggregate(v);
    for (auto& [k, v] : per_len) cr.by_type_length[k] = aggregate(v);
    result.configs.push_back(std::move(cr));
  }
  return result;
}

inline BenchResult run_bench(const BenchPlan& plan) { return run_bench(sample_slate(plan.kbs, plan), plan); }

inline constexpr const char* kBenchCsvSchema = "syllo-bench-csv/1";

/// One row per (config, sample, repetition), stable column order.
inline void emit_csv(const BenchResult& r, const BenchPlan& plan, std::ostream& out, bool wall_time = false) {
  out << "schema,config,kb_id,hypothesis,type,chain_length,repetition,seed,outcome,steps,pbc_pairs,"
         "phase1_steps,phase2_steps,phase3_steps,fabricated_premises,proof_checked";
  if (wall_time) out << ",wall_ns";
  out << "\n";
  for (const auto& run : r.runs) {
    const auto& it = r.slate.items[run.item];
    const auto& kb = plan.kbs.at(it.kb);
    const auto& rep = run.report;
    out << kBenchCsvSchema << ',' << r.configs[run.config].name << ',' << kb.id << ',' << kb.text(it.hypothesis)
        << ',' << it.syllogism_type << ',' << it.chain_length << ',' << run.repetition << ',' << rep.seed << ','
        << outcome_name(rep.outcome) << ',' << rep.steps << ',' << rep.pbc_pairs_tried << ','
        << rep.phase_steps[0] << ',' << rep.phase_steps[1] << ',' << rep.phase_steps[2] << ','
        << rep.fabricated_premises << ',' << (run.proof_checked ? 1 : 0);
    if (wall_time) out << ',' << rep.wall_time.count();
    out << "\n";
  }
}

inline nlohmann::ordered_json aggregate_json(const Aggregate& a) {
  auto round9 = [](double x) { return std::round(x * 1e9) / 1e9; };
  return {{"runs", a.runs},
          {"proved", a.proved},
          {"budget_exceeded", a.budget_failures},
          {"accuracy", round9(a.accuracy())},
          {"log10_mean", round9(a.mean_log10)},
          {"log10_sd", round9(a.sd_log10)},
          {"geomean_steps", round9(a.geomean())}};
}

/// Summary: one entry per configuration with geomean and sd, plus breakdowns.
inline nlohmann::ordered_json summary_json(const BenchResult& r, const BenchPlan& plan) {
  nlohmann::ordered_json j;
  j["schema"] = "syllo-bench-summary/1";
  j["seed"] = plan.seed;
  j["repetitions"] = plan.repetitions;
  j["budget"] = plan.budget;
  j["slate_size"] = r.slate.items.size();
  j["check_failures"] = r.check_failures;
  auto& sf = j["shortfalls"] = nlohmann::ordered_json::array();
  for (const auto& s : r.slate.shortfalls)
    sf.push_back({{"kb_id", s.kb_id}, {"type", s.syllogism_type}, {"found", s.found}, {"wanted", s.wanted}});
  auto& cs = j["configs"] = nlohmann::ordered_json::array();
  for (const auto& c : r.configs) {
    nlohmann::ordered_json e;
    e["name"] = c.name;
    e["overall"] = aggregate_json(c.overall);
    auto& bt = e["by_type"] = nlohmann::ordered_json::object();
    for (const auto& [t, a] : c.by_type) bt[std::to_string(t)] = aggregate_json(a);
    auto& bl = e["by_type_length"] = nlohmann::ordered_json::object();
    for (const auto& [k, a] : c.by_type_length) bl[std::to_string(k.first) + ":" + std::to_string(k.second)] = aggregate_json(a);
    cs.push_back(std::move(e));
  }
  return j;
}

/// Fixed-width text table mirroring a mean/sd-per-configuration plot.
inline void emit_summary_table(const BenchResult& r, std::ostream& out) {
  out << std::left << std::setw(32) << "config" << std::right << std::setw(12) << "log10_mean" << std::setw(10)
      << "log10_sd" << std::setw(14) << "geomean" << std::setw(10) << "accuracy" << "\n";
  for (const auto& c : r.configs) {
    out << std::left << std::setw(32) << c.name << std::right << std::fixed << std::setprecision(3) << std::setw(12)
        << c.overall.mean_log10 << std::setw(10) << c.overall.sd_log10 << std::setprecision(1) << std::setw(14)
        << c.overall.geomean() << std::setprecision(3) << std::setw(10) << c.overall.accuracy() << "\n";
  }
}

class config_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// `key = value` lines; '#' starts a comment. Later keys override earlier ones.
class KeyValueConfig {
 public:
  static KeyValueConfig parse(std::istream& in) {
    KeyValueConfig c;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
      auto trim = [](std::string s) {
        const auto b = s.find_first_not_of(" \t\r");
        if (b == std::string::npos) return std::string{};
        return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
      };
      line = trim(line);
      if (line.empty()) continue;
      const auto eq = line.find('=');
      if (eq == std::string::npos)
        throw config_error("config line " + std::to_string(lineno) + ": expected key = value");
      auto key = trim(line.substr(0, eq));
      if (key.empty()) throw config_error("config line " + std::to_string(lineno) + ": empty key");
      c.values_[key] = trim(line.substr(eq + 1));
    }
    return c;
  }

  void set(const std::string& key, std::string value) { values_[key] = std::move(value); }
  bool has(const std::string& key) const { return values_.count(key) != 0; }
  std::string get(const std::string& key, const std::string& fallback = {}) const {
    auto it = values_.find(key);
    return it == values_.end() ? fallback : it->second;
  }
  template <class T>
  T get_as(const std::string& key, T fallback) const {
    auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    std::istringstream ss(it->second);
    T v{};
    if (!(ss >> v) || !(ss >> std::ws).eof()) throw config_error("config key '" + key + "': bad value '" + it->second + "'");
    return v;
  }
  std::vector<std::string> get_list(const std::string& key) const {
    std::vector<std::string> out;
    std::stringstream ss(get(key));
    for (std::string item; std::getline(ss, item, ',');) {
      const auto b = item.find_first_not_of(" \t");
      if (b == std::string::npos) continue;
      out.push_back(item.substr(b, item.find_last_not_of(" \t") - b + 1));
    }
    return out;
  }
  const std::map<std::string, std::string>& values() const noexcept { return values_; }

 private:
  std::map<std::string, std::string> values_;
};

}  // namespace syllo
