#include <gtest/gtest.h>

#include "kmtree/lemmas.hpp"

using namespace kmtree;

TEST(Sweeps, NoViolationsAtAcceptanceRadii) {
  for (auto rep : {verify_wordsincoxetergroup(6), verify_not_both_down(7), verify_mingallinrep(8),
                   verify_subset_lemma(10)}) {
    EXPECT_EQ(rep.violation_count, 0) << rep.lemma;
    EXPECT_GT(rep.tuples_checked, 0) << rep.lemma;
    EXPECT_TRUE(rep.pass());
  }
}

TEST(Sweeps, MonotoneInRadius) {
  EXPECT_LT(verify_subset_lemma(6).tuples_checked, verify_subset_lemma(8).tuples_checked);
  EXPECT_LT(verify_not_both_down(4).tuples_checked, verify_not_both_down(6).tuples_checked);
}

TEST(Mutants, EveryRegisteredMutantIsCaught) {
  auto ms = lemma_mutants();
  ASSERT_EQ(ms.size(), 4u);
  for (auto& m : ms) {
    auto rep = m.run(4);
    EXPECT_GE(rep.violation_count, 1) << m.lemma;
    EXPECT_FALSE(rep.violations.empty());
  }
}

// regression pins for the mutant sweeps at radius 4
TEST(Mutants, ViolationCountsPinned) {
  auto ms = lemma_mutants();
  std::vector<long> want{1260, 24, 6, 6};
  for (std::size_t i = 0; i < ms.size(); ++i) EXPECT_EQ(ms[i].run(4).violation_count, want[i]) << ms[i].lemma;
}

TEST(Sweeps, RadiusCaps) {
  EXPECT_THROW(verify_subset_lemma(13), ResourceError);
  EXPECT_THROW(verify_wordsincoxetergroup(1), std::invalid_argument);
}

TEST(Sweeps, ReportShape) {
  auto j = verify_not_both_down(5).to_json(false);
  for (auto k : {"lemma", "radius", "tuples_checked", "violation_count", "violations", "pass"}) EXPECT_TRUE(j.contains(k)) << k;
  EXPECT_FALSE(j.contains("elapsed_ms"));
  EXPECT_EQ(j["details"]["labelings"], 6);
}
