#include <gtest/gtest.h>

#include "syllo/generator.hpp"
#include "syllo/kb_io.hpp"
#include "syllo/semantics.hpp"

using namespace syllo;

namespace {

std::size_t count_a(const KnowledgeBase& kb) { return kb.count(Quantifier::A); }

}  // namespace

TEST(Generator, DegenerateTree) {
  GenParams p;
  p.num_subgraphs = 1;
  p.max_chain_len = {1, 1};
  p.nodes_per_subgraph = {2, 2};
  p.extra_edge_counts = {0, 0, 0};
  const auto kb = generate_kb(p);
  ASSERT_EQ(kb.size(), 1u);
  EXPECT_EQ(kb.text(kb.formulas()[0]), "A x1 x2");
}

TEST(Generator, SeedDeterminism) {
  const auto a = generate_kb(paper_params_short(17));
  const auto b = generate_kb(paper_params_short(17));
  const auto c = generate_kb(paper_params_short(18));
  EXPECT_EQ(write_kb(a), write_kb(b));
  EXPECT_NE(a.fingerprint(), c.fingerprint());
}

TEST(Generator, PaperPresetsSatisfyInvariants) {
  for (std::size_t k = 0; k < 4; ++k) {
    const auto p = paper_params(k, 500 + k);
    const auto kb = generate_kb(p);
    SCOPED_TRACE(kb.id);
    EXPECT_TRUE(is_consistent(kb.formulas()));
    const auto report = verify_non_redundant(kb);
    EXPECT_TRUE(report.non_redundant);
    EXPECT_FALSE(report.sampled);

    const AGraph g(kb.formulas(), kb.num_terms());
    EXPECT_TRUE(g.is_forest());
    EXPECT_EQ(count_a(kb), kb.num_terms() - p.num_subgraphs);

    const auto st = kb_stats(kb);
    for (int t = 1; t <= 7; ++t) EXPECT_GT(st.inferences_by_type[t], 0u) << "type " << t;
    EXPECT_GE(st.longest_chain, p.max_chain_len.min);
    EXPECT_LE(st.longest_chain, p.max_chain_len.max);
    EXPECT_GT(st.premises, 25u);
    EXPECT_LT(st.premises, 60u);
  }
}

TEST(Generator, SmallKbsHaveModels) {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto kb = generate_kb(small_params(seed));
    EXPECT_LE(kb.num_terms(), 12u);
    EXPECT_TRUE(find_model(kb.formulas()).has_value()) << seed;
    EXPECT_TRUE(verify_non_redundant(kb).non_redundant) << seed;
  }
}

TEST(Generator, NoExtraEdges) {
  GenParams p = paper_params_short(3);
  p.extra_edge_counts = {0, 0, 0};
  const auto st = kb_stats(generate_kb(p));
  for (int t : {1, 3, 5, 6, 7}) EXPECT_EQ(st.hypotheses_by_type[t], 0u);
  EXPECT_GT(st.hypotheses_by_type[2], 0u);
  EXPECT_GT(st.hypotheses_by_type[4], 0u);
}

TEST(Generator, MetaRecordsProvenance) {
  const auto kb = generate_kb(paper_params_long(9));
  EXPECT_EQ(kb.id, "kb-9");
  EXPECT_EQ(kb.meta["seed"], 9);
  EXPECT_EQ(kb.meta["params"]["num_subgraphs"], 2);
  EXPECT_EQ(kb.meta["stats"]["premises"], kb.size());
}

TEST(Generator, InvalidParams) {
  GenParams p;
  p.num_subgraphs = 0;
  EXPECT_THROW(generate_kb(p), std::invalid_argument);
  p = GenParams{};
  p.max_chain_len = {3, 2};
  EXPECT_THROW(generate_kb(p), std::invalid_argument);
  p = GenParams{};
  p.edge_order = "EEO";
  EXPECT_THROW(generate_kb(p), std::invalid_argument);
  p = GenParams{};
  p.i_shallow_bias = 1.5;
  EXPECT_THROW(generate_kb(p), std::invalid_argument);
}

TEST(Generator, FailureCarriesDiagnostics) {
  GenParams p = paper_params_short(1);
  p.attempts_per_edge = 0;
  p.max_retries = 3;
  try {
    generate_kb(p);
    FAIL() << "expected generation_failure";
  } catch (const generation_failure& e) {
    EXPECT_NE(std::string(e.what()).find("missing inference types"), std::string::npos);
  }
}
