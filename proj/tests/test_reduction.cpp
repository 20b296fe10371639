#include <gtest/gtest.h>

#include <random>

#include "kmtree/reduction.hpp"

using namespace kmtree;

namespace {

std::string reduce(const std::string& s) { return theorem35_reduce(parse_word(s)).output.str(); }

}  // namespace

TEST(Parse, RoundTripAndErrors) {
  for (std::string s : {"u_sr,u_t,u_sr,1", "u_s*u_t,u_sr,u_t*u_s", "1", "u_rt*u_tr,1"})
    EXPECT_EQ(parse_word(s).str(), s);
  EXPECT_EQ(parse_word("u_tr*u_rt").str(), "u_rt*u_tr,1");
  EXPECT_EQ(parse_word("u_s*u_s").str(), "1");
  EXPECT_THROW(parse_word(""), std::invalid_argument);
  EXPECT_THROW(parse_word("u_sr,,u_t"), std::invalid_argument);
  EXPECT_THROW(parse_word("u_rs"), std::invalid_argument);
  EXPECT_THROW(parse_word("u_sr*u_t"), std::invalid_argument);
}

TEST(Reduce, RuleA) {
  auto r = theorem35_reduce(parse_word("u_sr,1,u_sr,u_t"));
  EXPECT_EQ(r.output.str(), "u_t");
  ASSERT_EQ(r.steps.size(), 1u);
  EXPECT_EQ(r.steps[0].rule, "(a)");
  EXPECT_TRUE(r.pass());
  EXPECT_EQ(reduce("u_sr,u_s,u_sr"), "u_s");
}

TEST(Reduce, RulesBiAndBii) {
  auto r = theorem35_reduce(parse_word("u_tr,1,u_tr"));
  EXPECT_EQ(r.output.str(), "1");
  EXPECT_EQ(r.steps.at(0).rule, "(b)(i)");
  auto m = theorem35_reduce(parse_word("u_tr,u_rt"));
  EXPECT_EQ(m.output.str(), "u_rt*u_tr,1");
  EXPECT_EQ(m.steps.at(0).rule, "(b)(ii)");
  EXPECT_EQ(m.steps[0].n_before, 2u);
  EXPECT_EQ(m.steps[0].n_after, 1u);
}

TEST(Reduce, ConstrainedWordsAreFixedPoints) {
  for (std::string s : {"u_sr,u_t,u_sr", "u_s*u_t,u_sr,u_t*u_s", "u_tr,u_s,u_rt"}) {
    auto r = theorem35_reduce(parse_word(s));
    EXPECT_TRUE(r.steps.empty()) << s;
    EXPECT_EQ(r.output, r.input);
  }
}

TEST(Reduce, RandomWordsTerminateSoundly) {
  std::mt19937_64 rng(7);
  auto& H = h_group();
  for (int i = 0; i < 2000; ++i) {
    auto w = random_altword(rng);
    auto r = theorem35_reduce(w);
    ASSERT_TRUE(r.pass()) << r.to_json().dump();
    EXPECT_LE(r.output.n(), w.n());
    EXPECT_EQ(H.product().mul(w.evaluate(), H.product().inv(r.output.evaluate())), H.product().id());
    // idempotent
    EXPECT_TRUE(theorem35_reduce(r.output).steps.empty());
  }
}

TEST(Enumeration, CountsPinned) {
  std::vector<std::size_t> want{4, 38, 194, 1322};
  for (int k = 1; k <= 4; ++k) EXPECT_EQ(constrained_words(k).size(), want[k - 1]) << k;
}

TEST(Enumeration, ConstrainedWordsAreNotTheIdentity) {
  auto& H = h_group();
  for (auto& w : constrained_words(4)) {
    EXPECT_FALSE(first_constraint_violation(w));
    EXPECT_FALSE(H.product().is_identity(w.evaluate())) << w.str();
  }
  // an unconstrained word can be trivial
  EXPECT_TRUE(H.product().is_identity(parse_word("u_sr,1,u_sr").evaluate()));
}

TEST(Trace, ReplayCompletes) {
  for (std::string s : {"u_sr", "u_tr,u_s", "u_sr,u_t,u_tr", "u_rt*u_tr,u_s*u_t,u_sr,u_t", "u_s,u_rt,u_s,u_tr"}) {
    auto c = lemma33_trace(parse_word(s));
    auto j = c.to_json();
    EXPECT_TRUE(c.pass()) << j.dump(1);
    EXPECT_FALSE(c.assumptions.empty());
  }
}

TEST(Trace, CounterGrowsAlongTheWord) {
  auto j = lemma33_trace(parse_word("u_sr,u_t,u_tr")).to_json();
  auto& steps = j["checks"][1]["data"]["steps"];
  ASSERT_EQ(steps.size(), 2u);
  EXPECT_EQ(steps[0]["case"], "base");
  EXPECT_EQ(steps[1]["case"], "(b)(i)");
  EXPECT_EQ(j["checks"][2]["data"]["delta"], "srstr");
}
