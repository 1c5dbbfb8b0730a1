// syllo: command-line front end for the syllogistic prover toolkit.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

#include "syllo/bench.hpp"
#include "syllo/generator.hpp"
#include "syllo/kb_io.hpp"

using namespace syllo;
namespace fs = std::filesystem;

namespace {

enum Exit : int {
  ok = 0,
  not_proved = 1,
  usage = 2,
  io = 3,
  format = 4,
  generation = 5,
  budget = 6,
  invalid_proof = 7,
  assistant = 8,
  incomplete = 9,
  split = 10,
  internal = 70,
};

struct cli_failure : std::runtime_error {
  cli_failure(Exit c, std::string kind, const std::string& msg) : std::runtime_error(msg), code(c), kind(std::move(kind)) {}
  Exit code;
  std::string kind;
};

int report_error(Exit code, const std::string& kind, const std::string& msg) {
  std::cerr << "syllo-error code=" << code << " kind=" << kind << " message=" << nlohmann::json(msg).dump() << "\n";
  return code;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw cli_failure(Exit::io, "io", "cannot write " + path);
  return out;
}

KnowledgeBase read_kb_file(const std::string& path) {
  if (!fs::exists(path)) throw cli_failure(Exit::io, "io", "no such file " + path);
  return load_kb(path);
}

std::vector<KnowledgeBase> read_kb_files(const std::vector<std::string>& paths) {
  std::vector<KnowledgeBase> kbs;
  for (const auto& p : paths) kbs.push_back(read_kb_file(p));
  return kbs;
}

// ---- gen-kb

struct GenArgs {
  std::string preset = "paper";
  std::uint64_t seed = 1;
  std::size_t count = 1;
  std::string out;
  std::string out_dir;
  bool dot = false;
  std::optional<std::size_t> subgraphs, chain_min, chain_max, nodes_min, nodes_max, extra_e, extra_i, extra_o,
      candidates;
};

GenParams params_for(const GenArgs& a, std::size_t index, std::uint64_t seed) {
  GenParams p;
  if (a.preset == "paper") p = paper_params(index, seed);
  else if (a.preset == "short") p = paper_params_short(seed);
  else if (a.preset == "long") p = paper_params_long(seed);
  else if (a.preset == "small") p = small_params(seed);
  else if (a.preset == "default") p.seed = seed;
  else throw cli_failure(Exit::usage, "usage", "unknown preset " + a.preset);
  if (a.subgraphs) p.num_subgraphs = *a.subgraphs;
  if (a.chain_min) p.max_chain_len.min = *a.chain_min;
  if (a.chain_max) p.max_chain_len.max = *a.chain_max;
  if (a.nodes_min) p.nodes_per_subgraph.min = *a.nodes_min;
  if (a.nodes_max) p.nodes_per_subgraph.max = *a.nodes_max;
  if (a.extra_e) p.extra_edge_counts.e = *a.extra_e;
  if (a.extra_i) p.extra_edge_counts.i = *a.extra_i;
  if (a.extra_o) p.extra_edge_counts.o = *a.extra_o;
  if (a.candidates) p.profile_candidates = *a.candidates;
  return p;
}

std::vector<KnowledgeBase> generate_many(const GenArgs& a) {
  std::vector<KnowledgeBase> kbs;
  for (std::size_t k = 0; k < a.count; ++k) {
    try {
      kbs.push_back(generate_kb(params_for(a, k, a.seed + k)));
    } catch (const std::invalid_argument& e) {
      throw cli_failure(Exit::usage, "usage", e.what());
    }
  }
  return kbs;
}

int run_gen(const GenArgs& a) {
  if (a.count > 1 && a.out_dir.empty()) throw cli_failure(Exit::usage, "usage", "--count > 1 needs --out-dir");
  const auto kbs = generate_many(a);
  for (const auto& kb : kbs) {
    std::string path = a.out;
    if (!a.out_dir.empty()) {
      fs::create_directories(a.out_dir);
      path = (fs::path(a.out_dir) / (kb.id + ".kb")).string();
    }
    if (path.empty()) {
      std::cout << (a.dot ? kb_to_dot(kb) : write_kb(kb));
      continue;
    }
    open_out(path) << write_kb(kb);
    if (a.dot) open_out(path + ".dot") << kb_to_dot(kb);
  }
  return Exit::ok;
}

// ---- enum

int run_enum(const std::vector<std::string>& kb_paths, const std::string& fmt, bool stats_only) {
  for (const auto& kb : read_kb_files(kb_paths)) {
    const auto infs = enumerate_minimal(kb);
    if (stats_only) {
      const auto st = kb_stats(kb, infs);
      nlohmann::ordered_json j{{"kb_id", kb.id}, {"premises", st.premises}, {"terms", st.terms},
                               {"hypotheses", st.total_hypotheses()}, {"longest_chain", st.longest_chain}};
      for (int t = 1; t <= 7; ++t) j["hypotheses_by_type"][std::to_string(t)] = st.hypotheses_by_type[t];
      std::cout << j.dump() << "\n";
      continue;
    }
    for (const auto& inf : infs) {
      if (fmt == "json") {
        nlohmann::ordered_json j{{"kb_id", kb.id}, {"type", inf.syllogism_type}, {"conclusion", kb.text(inf.conclusion)}};
        auto& ps = j["premises"] = nlohmann::ordered_json::array();
        for (const auto& p : inf.premises) ps.push_back(kb.text(p));
        j["chain_lengths"] = inf.chain_lengths;
        std::cout << j.dump() << "\n";
        continue;
      }
      std::cout << kb.id << '\t' << inf.syllogism_type << '\t' << chain_length_of(inf) << '\t'
                << kb.text(inf.conclusion) << '\t';
      for (std::size_t i = 0; i < inf.premises.size(); ++i) std::cout << (i ? "; " : "") << kb.text(inf.premises[i]);
      std::cout << "\n";
    }
  }
  return Exit::ok;
}

// ---- export-dataset

struct ExportArgs {
  std::vector<std::string> kbs;
  std::string out;
  std::string manifest;
  std::string task = "premise-selection";
  std::string split = "overall";
  std::string partition = "train";
  std::size_t subs = 1;
  std::size_t perms = 1;
  std::uint64_t seed = 1;
  bool no_delimit = false;
};

int run_export(const ExportArgs& a) {
  const auto kbs = read_kb_files(a.kbs);
  ExportOptions opt;
  try {
    opt.task = task_from_name(a.task);
    opt.split = make_split(split_from_name(a.split), kbs);
  } catch (const std::invalid_argument& e) {
    throw cli_failure(Exit::usage, "usage", e.what());
  }
  if (a.partition != "train" && a.partition != "test")
    throw cli_failure(Exit::usage, "usage", "partition must be train or test");
  opt.partition = a.partition == "train" ? Partition::train : Partition::test;
  opt.subs_per_kb = a.subs;
  opt.perms_per_kb = a.perms;
  opt.seed = a.seed;
  opt.delimit = !a.no_delimit;
  auto out = open_out(a.out);
  ExportSummary summary;
  try {
    summary = export_dataset(kbs, opt, out);
  } catch (const empty_split& e) {
    throw cli_failure(Exit::split, "empty-split", e.what());
  }
  open_out(a.manifest.empty() ? a.out + ".manifest.json" : a.manifest) << summary.manifest(opt).dump(2) << "\n";
  return Exit::ok;
}

// ---- assistants

struct AssistantArgs {
  std::string kind = "none";
  std::string noise = "t5-compositional";
  std::uint64_t noise_seed = 1;
  std::uint64_t stream = 0;
  std::string hints;
  std::string endpoint;
};

std::shared_ptr<const Assistant> make_assistant(const AssistantArgs& a) {
  try {
    if (a.kind == "none") return nullptr;
    if (a.kind == "oracle") return std::make_shared<OracleAssistant>();
    if (a.kind == "noisy") {
      auto p = noise_preset(a.noise);
      p.seed = a.noise_seed;
      return std::make_shared<NoisyAssistant>(p, a.stream);
    }
    if (a.kind == "file") {
      if (a.hints.empty()) throw cli_failure(Exit::usage, "usage", "--assistant file needs --hints");
      std::ifstream in(a.hints);
      if (!in) throw cli_failure(Exit::io, "io", "cannot open hint file " + a.hints);
      return std::make_shared<FileAssistant>(read_hint_records(in));
    }
    if (a.kind == "remote") {
      RemoteConfig c = RemoteConfig::from_env();
      if (!a.endpoint.empty()) c.endpoint = a.endpoint;
      if (c.endpoint.empty())
        throw cli_failure(Exit::assistant, "assistant", "remote assistant needs --endpoint or SYLLO_ASSISTANT_ENDPOINT");
      return std::make_shared<RemoteAssistant>(c);
    }
  } catch (const std::invalid_argument& e) {
    throw cli_failure(Exit::assistant, "assistant", e.what());
  }
  throw cli_failure(Exit::usage, "usage", "unknown assistant " + a.kind);
}

// Builds a one-run result so the prove report shares the bench CSV layout.
void emit_single_row(const KnowledgeBase& kb, const std::string& config, const HybridResult& r, std::ostream& out) {
  const Formula& h = r.report.hypothesis;
  SlateItem item{0, h, 0, 0};
  for (const auto& inf : enumerate_minimal(kb))
    if (inf.conclusion == canonical(h)) {
      item.syllogism_type = inf.syllogism_type;
      item.chain_length = chain_length_of(inf);
    }
  BenchPlan plan;
  plan.kbs = {kb};
  BenchResult result;
  result.slate.items = {item};
  result.configs.push_back({config, {}, {}, {}});
  RunRecord run{0, 0, 0, r.report, r.proof && check_proof(*r.proof, kb, h)};
  result.runs = {run};
  emit_csv(result, plan, out);
}

// ---- prove

struct ProveArgs {
  std::string kb;
  std::string hypothesis;
  std::uint64_t seed = 1;
  std::uint64_t budget = kDefaultBudget;
  AssistantArgs assistant;
  bool emit_proof = false;
  std::string proof_out;
};

int run_prove(const ProveArgs& a) {
  const auto kb = read_kb_file(a.kb);
  Formula h;
  try {
    h = kb.formula(a.hypothesis);
  } catch (const std::exception& e) {
    throw cli_failure(Exit::format, "hypothesis", e.what());
  }
  const auto helper = make_assistant(a.assistant);
  const ProverConfig config{helper ? "hybrid-" + helper->name() : "baseline", helper, helper};
  const auto r = run_config(config, h, kb, a.seed, a.budget);
  emit_single_row(kb, config.name, r, std::cout);
  if (r.proof) {
    if (a.emit_proof) std::cout << dump_proof(*r.proof, kb.vocabulary());
    if (!a.proof_out.empty()) open_out(a.proof_out) << dump_proof(*r.proof, kb.vocabulary());
    if (!check_proof(*r.proof, kb, h)) throw cli_failure(Exit::internal, "internal", "prover returned an invalid proof");
  }
  for (const auto& note : r.diagnostics.notes) std::cerr << "note: " << note << "\n";
  switch (r.report.outcome) {
    case Outcome::proved: return Exit::ok;
    case Outcome::refuted_by_exhaustion:
      return report_error(Exit::not_proved, "refuted", kb.text(h) + " does not follow from " + kb.id);
    case Outcome::budget_exceeded:
      return report_error(Exit::budget, "budget-exceeded", "step budget " + std::to_string(a.budget) + " exhausted");
  }
  return Exit::internal;
}

// ---- check-proof

int run_check(const std::string& kb_path, const std::string& proof_path, const std::string& hypothesis) {
  const auto kb = read_kb_file(kb_path);
  std::ifstream in(proof_path);
  if (!in) throw cli_failure(Exit::io, "io", "cannot open " + proof_path);
  Proof p;
  try {
    p = parse_proof(in, kb.vocabulary());
  } catch (const std::exception& e) {
    throw cli_failure(Exit::format, "proof-format", e.what());
  }
  const Formula h = hypothesis.empty() ? p.conclusion : kb.formula(hypothesis);
  if (!check_proof(p, kb, h)) throw cli_failure(Exit::invalid_proof, "invalid-proof", "proof does not check against " + kb.id);
  std::cout << "valid " << kb.text(h) << "\n";
  return Exit::ok;
}

// ---- bench

struct BenchArgs {
  std::string plan;
  std::vector<std::string> kbs;
  std::optional<std::uint64_t> seed, budget;
  std::optional<std::size_t> repetitions, threads, samples;
  std::string configs;
  std::string csv;
  std::string summary;
  bool allow_failures = false;
  bool wall_time = false;
};

ProverConfig config_from_name(const std::string& name, const KeyValueConfig& kv) {
  AssistantArgs a;
  a.endpoint = kv.get("endpoint");
  a.hints = kv.get("hints");
  a.noise_seed = kv.get_as<std::uint64_t>("noise_seed", 1);
  std::string premise_only;
  if (name == "baseline") return {name, nullptr, nullptr};
  if (name == "hybrid-oracle" || name == "oracle") a.kind = "oracle";
  else if (name.rfind("noisy:", 0) == 0) {
    a.kind = "noisy";
    a.noise = name.substr(6);
  } else if (name == "file" || name == "remote") a.kind = name;
  else throw cli_failure(Exit::format, "plan", "unknown config '" + name + "'");
  auto helper = make_assistant(a);
  return {name, helper, helper};
}

int run_bench_cmd(const BenchArgs& a) {
  KeyValueConfig kv;
  if (!a.plan.empty()) {
    std::ifstream in(a.plan);
    if (!in) throw cli_failure(Exit::io, "io", "cannot open plan " + a.plan);
    kv = KeyValueConfig::parse(in);
  }
  auto join = [](const std::vector<std::string>& v) {
    std::string s;
    for (const auto& x : v) s += (s.empty() ? "" : ",") + x;
    return s;
  };
  if (!a.kbs.empty()) kv.set("kbs", join(a.kbs));
  if (a.seed) kv.set("seed", std::to_string(*a.seed));
  if (a.budget) kv.set("budget", std::to_string(*a.budget));
  if (a.repetitions) kv.set("repetitions", std::to_string(*a.repetitions));
  if (a.threads) kv.set("threads", std::to_string(*a.threads));
  if (a.samples) kv.set("per_type_samples", std::to_string(*a.samples));
  if (!a.configs.empty()) kv.set("configs", a.configs);
  if (!a.csv.empty()) kv.set("csv", a.csv);
  if (!a.summary.empty()) kv.set("summary", a.summary);
  if (a.allow_failures) kv.set("allow_failures", "1");

  BenchPlan plan;
  plan.kbs = read_kb_files(kv.get_list("kbs"));
  if (const auto n = kv.get_as<std::size_t>("generate", 0)) {
    GenArgs g;
    g.preset = kv.get("preset", "paper");
    g.seed = kv.get_as<std::uint64_t>("generate_seed", 1);
    g.count = n;
    for (auto& kb : generate_many(g)) plan.kbs.push_back(std::move(kb));
  }
  if (plan.kbs.empty()) throw cli_failure(Exit::usage, "usage", "bench needs kbs or generate in the plan");
  plan.per_type_samples = kv.get_as<std::size_t>("per_type_samples", plan.per_type_samples);
  plan.min_chain_len = kv.get_as<std::size_t>("min_chain_len", plan.min_chain_len);
  plan.repetitions = kv.get_as<std::size_t>("repetitions", plan.repetitions);
  plan.seed = kv.get_as<std::uint64_t>("seed", plan.seed);
  plan.budget = kv.get_as<std::uint64_t>("budget", plan.budget);
  plan.threads = kv.get_as<std::size_t>("threads", 0);
  auto names = kv.get_list("configs");
  if (names.empty()) names = {"baseline", "hybrid-oracle"};
  for (const auto& n : names) plan.configs.push_back(config_from_name(n, kv));
  try {
    plan.validate();
  } catch (const std::invalid_argument& e) {
    throw cli_failure(Exit::format, "plan", e.what());
  }

  const auto slate = sample_slate(plan.kbs, plan);
  for (const auto& s : slate.shortfalls)
    std::cerr << "note: shortfall kb=" << s.kb_id << " type=" << s.syllogism_type << " found=" << s.found
              << " wanted=" << s.wanted << "\n";
  const auto result = run_bench(slate, plan);
  const bool wall = a.wall_time || kv.get_as<int>("wall_time", 0) != 0;
  if (kv.has("csv")) {
    auto out = open_out(kv.get("csv"));
    emit_csv(result, plan, out, wall);
  }
  if (kv.has("summary")) open_out(kv.get("summary")) << summary_json(result, plan).dump(2) << "\n";
  emit_summary_table(result, std::cout);

  if (result.check_failures)
    throw cli_failure(Exit::invalid_proof, "invalid-proof",
                      std::to_string(result.check_failures) + " proofs failed the checker");
  std::size_t unfinished = 0;
  for (const auto& c : result.configs) unfinished += c.overall.runs - c.overall.proved;
  if (unfinished && kv.get_as<int>("allow_failures", 0) == 0)
    throw cli_failure(Exit::incomplete, "incomplete", std::to_string(unfinished) + " runs did not complete a proof");
  return Exit::ok;
}

// ---- dump-hints

int run_dump_hints(const std::vector<std::string>& kb_paths, const AssistantArgs& a, const std::string& out_path) {
  const auto kbs = read_kb_files(kb_paths);
  const auto helper = make_assistant(a);
  if (!helper) throw cli_failure(Exit::usage, "usage", "dump-hints needs an assistant");
  std::size_t n = 0;
  if (out_path.empty()) {
    n = dump_hints(kbs, *helper, std::cout);
  } else {
    auto out = open_out(out_path);
    n = dump_hints(kbs, *helper, out);
  }
  std::cerr << "note: wrote " << n << " hints\n";
  return Exit::ok;
}

void add_assistant_flags(CLI::App* cmd, AssistantArgs& a) {
  cmd->add_option("--assistant", a.kind, "Hint source")
      ->check(CLI::IsMember({"none", "oracle", "noisy", "file", "remote"}));
  cmd->add_option("--noise", a.noise, "Noise preset for --assistant noisy");
  cmd->add_option("--noise-seed", a.noise_seed, "Seed of the noisy assistant");
  cmd->add_option("--noise-stream", a.stream, "Independent draw stream of the noisy assistant");
  cmd->add_option("--hints", a.hints, "Hint file for --assistant file");
  cmd->add_option("--endpoint", a.endpoint, "Model server URL for --assistant remote (else SYLLO_ASSISTANT_ENDPOINT)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Syllogistic prover toolkit"};
  app.require_subcommand(1);

  GenArgs gen;
  auto* gen_cmd = app.add_subcommand("gen-kb", "Generate knowledge bases");
  gen_cmd->add_option("--preset", gen.preset, "paper | short | long | small | default")
      ->check(CLI::IsMember({"paper", "short", "long", "small", "default"}));
  gen_cmd->add_option("--seed", gen.seed, "First seed; KB k uses seed + k");
  gen_cmd->add_option("--count", gen.count, "Number of KBs")->check(CLI::PositiveNumber);
  gen_cmd->add_option("--out", gen.out, "Output file (single KB); stdout if omitted");
  gen_cmd->add_option("--out-dir", gen.out_dir, "Directory for <id>.kb files");
  gen_cmd->add_flag("--dot", gen.dot, "Also write Graphviz output");
  gen_cmd->add_option("--subgraphs", gen.subgraphs, "Number of A-trees");
  gen_cmd->add_option("--chain-min", gen.chain_min, "Smallest maximal A-chain length");
  gen_cmd->add_option("--chain-max", gen.chain_max, "Largest maximal A-chain length");
  gen_cmd->add_option("--nodes-min", gen.nodes_min, "Fewest terms per A-tree");
  gen_cmd->add_option("--nodes-max", gen.nodes_max, "Most terms per A-tree");
  gen_cmd->add_option("--extra-e", gen.extra_e, "Extra E edges");
  gen_cmd->add_option("--extra-i", gen.extra_i, "Extra I edges");
  gen_cmd->add_option("--extra-o", gen.extra_o, "Extra O edges");
  gen_cmd->add_option("--profile-candidates", gen.candidates, "Complete KBs drawn per output KB");

  std::vector<std::string> enum_kbs;
  std::string enum_format = "table";
  bool enum_stats = false;
  auto* enum_cmd = app.add_subcommand("enum", "List minimal inferences");
  enum_cmd->add_option("--kb", enum_kbs, "KB files")->required();
  enum_cmd->add_option("--format", enum_format, "table | json")->check(CLI::IsMember({"table", "json"}));
  enum_cmd->add_flag("--stats", enum_stats, "Per-type counts only");

  ExportArgs ex;
  auto* ex_cmd = app.add_subcommand("export-dataset", "Write natural-language dataset records");
  ex_cmd->add_option("--kb", ex.kbs, "KB files")->required();
  ex_cmd->add_option("--out", ex.out, "Records (JSON Lines)")->required();
  ex_cmd->add_option("--manifest", ex.manifest, "Manifest path (default <out>.manifest.json)");
  ex_cmd->add_option("--task", ex.task, "premise-selection | proof-by-contradiction");
  ex_cmd->add_option("--split", ex.split, "overall | compositional | recursive");
  ex_cmd->add_option("--partition", ex.partition, "train | test");
  ex_cmd->add_option("--subs", ex.subs, "Pseudoword substitutions per KB");
  ex_cmd->add_option("--perms", ex.perms, "Premise orders per substitution");
  ex_cmd->add_option("--seed", ex.seed, "Export seed");
  ex_cmd->add_flag("--no-delimit", ex.no_delimit, "Do not wrap terms in braces");

  ProveArgs pr;
  auto* pr_cmd = app.add_subcommand("prove", "Prove one hypothesis");
  pr_cmd->add_option("--kb", pr.kb, "KB file")->required();
  pr_cmd->add_option("--hypothesis", pr.hypothesis, "Symbolic hypothesis, e.g. \"A x6 x11\"")->required();
  pr_cmd->add_option("--seed", pr.seed, "Search seed");
  pr_cmd->add_option("--budget", pr.budget, "Step budget");
  add_assistant_flags(pr_cmd, pr.assistant);
  pr_cmd->add_flag("--emit-proof", pr.emit_proof, "Print the proof tree after the report row");
  pr_cmd->add_option("--proof-out", pr.proof_out, "Write the proof tree to a file");

  std::string ck_kb, ck_proof, ck_h;
  auto* ck_cmd = app.add_subcommand("check-proof", "Validate a proof dump");
  ck_cmd->add_option("--kb", ck_kb, "KB file")->required();
  ck_cmd->add_option("--proof", ck_proof, "Proof dump")->required();
  ck_cmd->add_option("--hypothesis", ck_h, "Expected conclusion (default: the proof's root)");

  BenchArgs be;
  auto* be_cmd = app.add_subcommand("bench", "Run a benchmark plan");
  be_cmd->add_option("--plan", be.plan, "key = value plan file");
  be_cmd->add_option("--kb", be.kbs, "KB files (override plan kbs)");
  be_cmd->add_option("--seed", be.seed, "Plan seed");
  be_cmd->add_option("--budget", be.budget, "Step budget per run");
  be_cmd->add_option("--repetitions", be.repetitions, "Runs per sample");
  be_cmd->add_option("--samples", be.samples, "Samples per KB and type (even)");
  be_cmd->add_option("--threads", be.threads, "Worker threads (0: all cores)");
  be_cmd->add_option("--configs", be.configs, "Comma list: baseline, hybrid-oracle, noisy:<preset>, file, remote");
  be_cmd->add_option("--csv", be.csv, "Per-run CSV");
  be_cmd->add_option("--summary", be.summary, "Summary JSON");
  be_cmd->add_flag("--allow-failures", be.allow_failures, "Exit 0 even if some runs did not finish");
  be_cmd->add_flag("--wall-time", be.wall_time, "Add a wall_ns column to the CSV");

  std::vector<std::string> dh_kbs;
  std::string dh_out;
  AssistantArgs dh_assistant;
  dh_assistant.kind = "oracle";
  auto* dh_cmd = app.add_subcommand("dump-hints", "Write assistant hints to a hint file");
  dh_cmd->add_option("--kb", dh_kbs, "KB files")->required();
  dh_cmd->add_option("--out", dh_out, "Hint file (stdout if omitted)");
  add_assistant_flags(dh_cmd, dh_assistant);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return report_error(Exit::usage, "usage", e.what());
  }

  try {
    if (*gen_cmd) return run_gen(gen);
    if (*enum_cmd) return run_enum(enum_kbs, enum_format, enum_stats);
    if (*ex_cmd) return run_export(ex);
    if (*pr_cmd) return run_prove(pr);
    if (*ck_cmd) return run_check(ck_kb, ck_proof, ck_h);
    if (*be_cmd) return run_bench_cmd(be);
    if (*dh_cmd) return run_dump_hints(dh_kbs, dh_assistant, dh_out);
  } catch (const cli_failure& e) {
    return report_error(e.code, e.kind, e.what());
  } catch (const kb_format_error& e) {
    return report_error(Exit::format, "kb-format", e.what());
  } catch (const parse_error& e) {
    return report_error(Exit::format, "formula", e.what());
  } catch (const hint_file_error& e) {
    return report_error(Exit::format, "hint-file", e.what());
  } catch (const config_error& e) {
    return report_error(Exit::format, "plan", e.what());
  } catch (const generation_failure& e) {
    return report_error(Exit::generation, "generation", e.what());
  } catch (const std::exception& e) {
    return report_error(Exit::internal, "internal", e.what());
  }
  return Exit::internal;
}
