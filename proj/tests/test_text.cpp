#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "syllo/generator.hpp"
#include "syllo/text.hpp"

using namespace syllo;

namespace {

Substitution fig3() {
  return Substitution({"preac", "verde", "usni", "goed", "itil", "entpi", "ondy", "ramer"});
}

Formula f(Quantifier q, std::uint32_t s, std::uint32_t p) { return Formula{q, TermId{s - 1}, TermId{p - 1}}; }

}  // namespace

TEST(Render, Fig3Sentences) {
  const auto s = fig3();
  using Q = Quantifier;
  const std::vector<std::pair<Formula, std::string>> cases{
      {f(Q::A, 1, 2), "All preac are verde"},     {f(Q::A, 2, 3), "All verde are usni"},
      {f(Q::A, 4, 5), "All goed are itil"},       {f(Q::A, 6, 7), "All entpi are ondy"},
      {f(Q::A, 7, 8), "All ondy are ramer"},      {f(Q::E, 3, 8), "No usni are ramer"},
      {f(Q::I, 1, 4), "Some preac are goed"},     {f(Q::O, 3, 1), "Some usni are not preac"},
  };
  for (const auto& [formula, sentence] : cases) {
    EXPECT_EQ(render(formula, s), sentence);
    EXPECT_EQ(parse(sentence, s), formula);
  }
  EXPECT_EQ(render(f(Q::O, 3, 1), s, {.delimit = true}), "Some {usni} are not {preac}");
  EXPECT_EQ(parse("Some {usni} are not {preac}.", s), f(Q::O, 3, 1));
  EXPECT_THROW(render(f(Q::A, 1, 9), s), missing_term);
}

TEST(Parse, Errors) {
  const auto s = fig3();
  EXPECT_THROW(parse("Every preac is verde", s), malformed_sentence);
  EXPECT_THROW(parse("All preac are", s), malformed_sentence);
  EXPECT_THROW(parse("All preac are preac", s), malformed_sentence);
  EXPECT_THROW(parse("Some preac are not", s), malformed_sentence);
  EXPECT_THROW(parse("No gleeb are usni", s), missing_term);
}

TEST(Parse, FabricatedTerms) {
  const auto s = fig3();
  SentenceParser parser(s);
  const auto r = parser.parse("No gleeb are usni");
  EXPECT_TRUE(r.fabricated);
  EXPECT_EQ(r.unknown_words, std::vector<std::string>{"gleeb"});
  EXPECT_EQ(r.formula.subject, TermId{8});
  EXPECT_EQ(r.formula.predicate, TermId{2});
  EXPECT_EQ(parser.parse("All gleeb are zorp").formula, (Formula{Quantifier::A, TermId{8}, TermId{9}}));
  EXPECT_EQ(parser.fresh_terms(), 2u);
  EXPECT_FALSE(parser.parse("All preac are verde").fabricated);
}

TEST(Substitution, PseudowordsAreWellFormed) {
  const auto& block = detail::english_blocklist();
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const auto s = random_substitution(40, seed);
    std::set<std::string> seen;
    for (std::uint32_t t = 0; t < 40; ++t) {
      const auto& w = s.word(TermId{t});
      EXPECT_GE(w.size(), 3u);
      EXPECT_LE(w.size(), 8u);
      EXPECT_TRUE(std::all_of(w.begin(), w.end(), [](char c) { return c >= 'a' && c <= 'z'; })) << w;
      EXPECT_FALSE(block.count(w)) << w;
      EXPECT_TRUE(seen.insert(w).second) << w;
      EXPECT_EQ(s.find(w), TermId{t});
    }
  }
  EXPECT_EQ(random_substitution(10, 3).word(TermId{4}), random_substitution(10, 3).word(TermId{4}));
  EXPECT_THROW(Substitution({"aaa", "aaa"}), std::invalid_argument);
}

TEST(RoundTrip, RandomFormulas) {
  std::mt19937_64 rng(99);
  for (int k = 0; k < 10000; ++k) {
    const auto s = random_substitution(12, rng());
    const auto a = static_cast<std::uint32_t>(rng() % 12);
    const auto b = static_cast<std::uint32_t>((a + 1 + rng() % 11) % 12);
    const Formula x{kAllQuantifiers[rng() % 4], TermId{a}, TermId{b}};
    ASSERT_EQ(parse(render(x, s, {.delimit = (k % 2) == 0}), s), x);
  }
}

TEST(Sentences, SplitJoinAndInput) {
  const std::vector<std::string> v{"All a are b", "No b are c"};
  EXPECT_EQ(join_sentences(v), "All a are b. No b are c");
  EXPECT_EQ(split_sentences("All a are b. No b are c."), v);
  EXPECT_EQ(input_text(v, "Some a are not c"), "All a are b. No b are c. Hypothesis: Some a are not c");
  EXPECT_EQ(premise_permutation(5, 7, 0), (std::vector<std::size_t>{0, 1, 2, 3, 4}));
  auto p = premise_permutation(5, 7, 1);
  std::sort(p.begin(), p.end());
  EXPECT_EQ(p, (std::vector<std::size_t>{0, 1, 2, 3, 4}));
}

namespace {

struct Corpus {
  std::vector<KnowledgeBase> kbs;
  Corpus() {
    for (std::uint64_t seed = 1; seed <= 4; ++seed) kbs.push_back(generate_kb(small_params(seed)));
  }
};

const Corpus& corpus() {
  static Corpus c;
  return c;
}

std::vector<DatasetRecord> collect(const ExportOptions& opt, ExportSummary* summary = nullptr) {
  std::vector<DatasetRecord> out;
  auto s = export_dataset(corpus().kbs, opt, [&](const DatasetRecord& r) { out.push_back(r); });
  if (summary) *summary = s;
  return out;
}

}  // namespace

TEST(Export, RecordCountMatchesHypotheses) {
  ExportOptions opt;
  opt.subs_per_kb = 3;
  opt.perms_per_kb = 2;
  std::size_t hyps = 0;
  for (const auto& kb : corpus().kbs) hyps += kb_stats(kb).total_hypotheses();
  ExportSummary summary;
  const auto records = collect(opt, &summary);
  EXPECT_EQ(records.size(), hyps * 3 * 2);
  EXPECT_EQ(summary.records, records.size());

  opt.task = Task::proof_by_contradiction;
  std::size_t pbc = 0;
  for (const auto& kb : corpus().kbs) {
    const auto st = kb_stats(kb);
    for (int t = 1; t <= 7; ++t) pbc += st.pbc_hypotheses_by_type[t];
  }
  const auto pbc_records = collect(opt);
  EXPECT_EQ(pbc_records.size(), pbc * 3 * 2);
  for (const auto& r : pbc_records) EXPECT_TRUE(r.syllogism_type != 2 && r.syllogism_type != 6);
}

TEST(Export, OutputsAppearVerbatimInInput) {
  ExportOptions opt;
  opt.perms_per_kb = 3;
  for (const auto& r : collect(opt)) {
    const auto kb_part = r.input.substr(0, r.input.find(". Hypothesis: "));
    const auto kb_sentences = split_sentences(kb_part);
    for (const auto& s : split_sentences(r.output))
      EXPECT_NE(std::find(kb_sentences.begin(), kb_sentences.end(), s), kb_sentences.end()) << s;
  }
}

TEST(Export, IdentityPermutationKeepsKbOrder) {
  ExportOptions opt;
  opt.delimit = false;
  const auto records = collect(opt);
  const auto& kb = corpus().kbs.front();
  const auto sub = random_substitution(kb.num_terms(), hash_values(hash_values(opt.seed, kb.fingerprint()), 0x5ab, 0));
  std::vector<std::string> expected;
  for (const auto& x : kb.formulas()) expected.push_back(render(x, sub));
  const auto& r = records.front();
  EXPECT_EQ(r.input.substr(0, r.input.find(". Hypothesis: ")), join_sentences(expected));
}

TEST(Export, PermutationsPreserveGold) {
  ExportOptions opt;
  opt.perms_per_kb = 3;
  opt.delimit = false;
  std::map<std::tuple<std::string, std::size_t, std::string>, std::set<std::string>> outputs;
  for (const auto& r : collect(opt)) {
    auto sentences = split_sentences(r.output);
    std::sort(sentences.begin(), sentences.end());
    outputs[{r.kb_id, r.substitution_id, r.hypothesis}].insert(join_sentences(sentences));
  }
  for (const auto& [key, outs] : outputs) EXPECT_EQ(outs.size(), 1u);
}

TEST(Export, SplitExclusion) {
  for (SplitKind kind : {SplitKind::compositional, SplitKind::recursive}) {
    ExportOptions opt;
    opt.split = make_split(kind, corpus().kbs);
    ASSERT_FALSE(opt.split.excluded_lengths.empty());
    for (Partition part : {Partition::train, Partition::test}) {
      opt.partition = part;
      std::vector<DatasetRecord> records;
      try {
        records = collect(opt);
      } catch (const empty_split&) {
        continue;
      }
      for (const auto& r : records)
        EXPECT_EQ(opt.split.excluded(r.syllogism_type, r.chain_length), part == Partition::test);
    }
  }
  const auto comp = make_split(SplitKind::compositional, corpus().kbs);
  EXPECT_EQ(comp.excluded_lengths.at(2), (std::set<std::size_t>{1, 2, 3, 4, 5}));
}

TEST(Export, EmptySplit) {
  ExportOptions opt;
  opt.split.kind = SplitKind::compositional;
  for (int t = 1; t <= 7; ++t)
    for (std::size_t l = 0; l < 40; ++l) opt.split.excluded_lengths[t].insert(l);
  EXPECT_THROW(collect(opt), empty_split);
}

TEST(Export, RecordJsonRoundTrip) {
  ExportOptions opt;
  std::ostringstream out;
  const auto summary = export_dataset(corpus().kbs, opt, out);
  std::istringstream in(out.str());
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    const auto j = nlohmann::ordered_json::parse(line);
    EXPECT_EQ(j["schema"], "syllo-record/1");
    EXPECT_EQ(DatasetRecord::from_json(j).to_json(), j);
    ++n;
  }
  EXPECT_EQ(n, summary.records);
  const auto m = summary.manifest(opt);
  EXPECT_EQ(m["schema"], "syllo-manifest/1");
  EXPECT_EQ(m["records"], n);
}
