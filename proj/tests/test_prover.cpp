#include <gtest/gtest.h>

#include <random>

#include "syllo/kb_io.hpp"
#include "syllo/prover.hpp"
#include "syllo/semantics.hpp"

using namespace syllo;

namespace {

KnowledgeBase fig2() { return load_kb(std::string(SYLLO_TEST_DATA) + "/fig2.kb"); }

std::vector<Formula> random_consistent(std::mt19937_64& rng, std::uint32_t terms, int n) {
  for (;;) {
    std::vector<Formula> fs;
    for (int k = 0; k < n; ++k) {
      const auto s = static_cast<std::uint32_t>(rng() % terms);
      const auto p = static_cast<std::uint32_t>((s + 1 + rng() % (terms - 1)) % terms);
      fs.push_back(Formula{kAllQuantifiers[rng() % 4], TermId{s}, TermId{p}});
    }
    if (find_model(fs)) return fs;
  }
}

}  // namespace

TEST(Prover, Fig2Examples) {
  const auto kb = fig2();
  for (auto h : {"A x6 x11", "I x10 x11", "O x8 x2", "O x10 x6", "E x6 x1", "I x4 x10", "O x5 x1"}) {
    const auto r = prove(kb.formula(h), kb, 1);
    ASSERT_EQ(r.report.outcome, Outcome::proved) << h;
    EXPECT_TRUE(check_proof(*r.proof, kb, kb.formula(h))) << h;
    EXPECT_GT(r.report.steps, 0u);
  }
  for (auto h : {"A x1 x6", "O x1 x2", "E x1 x2"}) {
    const auto r = prove(kb.formula(h), kb, 1);
    EXPECT_EQ(r.report.outcome, Outcome::refuted_by_exhaustion) << h;
    EXPECT_FALSE(r.proof);
  }
}

TEST(Prover, DeriveUsesRulesOnly) {
  const auto kb = fig2();
  SearchState st(3);
  const auto amb = st.register_ambient(AmbientSet(kb.formulas()));
  EXPECT_TRUE(derive(kb.formula("E x6 x1"), amb, st));
  EXPECT_FALSE(derive(kb.formula("O x8 x2"), amb, st));
  EXPECT_TRUE(pbc(kb.formula("O x8 x2"), amb, st));
  const Proof p = get_steps(kb.formula("O x8 x2"), amb, st);
  EXPECT_EQ(p.type, ProofType::contradiction);
  EXPECT_TRUE(check_proof(p, kb, kb.formula("O x8 x2")));
}

TEST(Prover, AgreesWithModelSemantics) {
  std::mt19937_64 rng(11);
  int proved = 0, refuted = 0;
  for (int round = 0; round < 120; ++round) {
    const auto fs = random_consistent(rng, 5, 3 + static_cast<int>(rng() % 4));
    for (std::uint32_t s = 0; s < 5; ++s)
      for (std::uint32_t p = 0; p < 5; ++p) {
        if (s == p) continue;
        const Formula h{kAllQuantifiers[rng() % 4], TermId{s}, TermId{p}};
        SearchState st(round);
        const auto r = prove(h, fs, st);
        ASSERT_NE(r.report.outcome, Outcome::budget_exceeded);
        const bool entailed = entails_by_models(fs, h);
        ASSERT_EQ(r.report.outcome == Outcome::proved, entailed) << "round " << round;
        if (r.proof) {
          EXPECT_TRUE(check_proof(*r.proof, fs, h));
          ++proved;
        } else {
          ++refuted;
        }
      }
  }
  EXPECT_GT(proved, 100);
  EXPECT_GT(refuted, 100);
}

TEST(Prover, FailureCacheDoesNotChangeOutcomes) {
  std::mt19937_64 rng(5);
  for (int round = 0; round < 40; ++round) {
    const auto fs = random_consistent(rng, 5, 5);
    for (Quantifier q : kAllQuantifiers) {
      const Formula h{q, TermId{0}, TermId{4}};
      SearchState cached(round), uncached(round, 2'000'000);
      uncached.failure_caching = false;
      const auto a = prove(h, fs, cached);
      const auto b = prove(h, fs, uncached);
      ASSERT_NE(b.report.outcome, Outcome::budget_exceeded);
      EXPECT_EQ(a.report.outcome, b.report.outcome);
      EXPECT_LE(a.report.steps, b.report.steps);
      if (a.proof) EXPECT_TRUE(check_proof(*a.proof, fs, h));
      if (b.proof) EXPECT_TRUE(check_proof(*b.proof, fs, h));
    }
  }
}

TEST(Prover, SeedDeterminism) {
  const auto kb = fig2();
  const Formula h = kb.formula("O x10 x6");
  const auto a = prove(h, kb, 42);
  const auto b = prove(h, kb, 42);
  EXPECT_EQ(a.report.steps, b.report.steps);
  EXPECT_EQ(a.report.pbc_pairs_tried, b.report.pbc_pairs_tried);
  EXPECT_EQ(*a.proof, *b.proof);
  std::set<std::uint64_t> distinct;
  for (std::uint64_t seed = 0; seed < 8; ++seed) distinct.insert(prove(h, kb, seed).report.steps);
  EXPECT_GT(distinct.size(), 1u);
}

TEST(Prover, BudgetExceeded) {
  const auto kb = fig2();
  const auto r = prove(kb.formula("O x10 x6"), kb, 1, 5);
  EXPECT_EQ(r.report.outcome, Outcome::budget_exceeded);
  EXPECT_EQ(r.report.steps, 5u);
  EXPECT_FALSE(r.proof);
  EXPECT_STREQ(outcome_name(r.report.outcome), "budget-exceeded");
}

TEST(Prover, HintedContradictionComesFirst) {
  const auto kb = fig2();
  const Formula h = kb.formula("O x8 x2");
  const Formula hint = kb.formula("O x4 x5");
  const auto cands = contradiction_candidates(h, kb.terms(), 9, hint);
  ASSERT_FALSE(cands.empty());
  EXPECT_EQ(cands.front(), hint);
  EXPECT_EQ(std::count(cands.begin(), cands.end(), hint), 1);
  EXPECT_EQ(cands.size(), kb.num_terms() * (kb.num_terms() - 1) * 4);
}
