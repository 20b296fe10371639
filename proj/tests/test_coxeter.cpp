#include <gtest/gtest.h>

#include <random>

#include "kmtree/coxeter.hpp"
#include "oracles.hpp"

using namespace kmtree;

namespace {

std::string random_word(std::mt19937_64& rng, int n) {
  std::string w;
  for (int i = 0; i < n; ++i) w.push_back(kLetters[rng() % 3]);
  return w;
}

}  // namespace

// frozen from oracle::ball_sizes(8)
constexpr std::size_t kBall[] = {1, 4, 10, 22, 43, 79, 142, 250, 436};

TEST(Oracle, BallSizesFrozen) {
  auto o = oracle::ball_sizes(8);
  ASSERT_EQ(o.size(), 9u);
  for (int L = 0; L <= 8; ++L) EXPECT_EQ(o[L], kBall[L]) << L;
}

TEST(Ball, MatchesOracle) {
  for (int L = 0; L <= 8; ++L) EXPECT_EQ(ball(L).size(), kBall[L]) << L;
  EXPECT_EQ(ball(2).size(), 10u);
  EXPECT_EQ(ball(4).size(), 43u);
}

TEST(Ball, ElementsAgreeWithOracleNormalForms) {
  std::set<std::string> mine;
  for (auto& w : ball(6)) mine.insert(w.word());
  std::set<std::string> theirs;
  for (auto& w : ball(6)) theirs.insert(oracle::normalize(w.word()));
  EXPECT_EQ(mine, theirs);
}

TEST(Ball, CapIsEnforced) {
  EXPECT_THROW(ball(11), ResourceError);
  EXPECT_THROW(ball(-1), std::invalid_argument);
  EXPECT_EQ(ball(12, 12).size(), 3898u);
}

TEST(Normalize, AgreesWithBraidOracleOnRandomWords) {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 400; ++i) {
    auto w = random_word(rng, 1 + static_cast<int>(rng() % 9));
    EXPECT_EQ(normal_form(w), oracle::normalize(w)) << w;
  }
}

TEST(Normalize, GroupLaws) {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 300; ++i) {
    CoxElt a(random_word(rng, 6)), b(random_word(rng, 6)), c(random_word(rng, 6));
    EXPECT_EQ((a * b) * c, a * (b * c));
    EXPECT_TRUE((a * a.inverse()).is_identity());
    EXPECT_EQ(a.inverse().length(), a.length());
    EXPECT_LE((a * b).length(), a.length() + b.length());
    for (char g : kLetters) EXPECT_EQ(std::abs(static_cast<long>((a * g).length()) - static_cast<long>(a.length())), 1);
  }
  for (char x : kLetters)
    for (char y : kLetters)
      if (x != y) EXPECT_EQ(CoxElt(longest(x, y)), CoxElt(longest(y, x)));
  EXPECT_TRUE(CoxElt("ss").is_identity());
  EXPECT_EQ(CoxElt("stststst").length(), 0u);
}

TEST(Roots, InversionSetHasLengthManyRoots) {
  for (auto& w : ball(6)) {
    auto phi = inversion_set(w);
    EXPECT_EQ(phi.size(), w.length());
    for (auto& a : phi) {
      EXPECT_TRUE(a.positive);
      EXPECT_TRUE(member(CoxElt(), a));
      EXPECT_FALSE(member(w, a)) << w.str() << " " << a.str();
    }
  }
}

TEST(Roots, MembershipOfSimpleRoots) {
  for (char g : kLetters) {
    auto a = simple_root(g);
    EXPECT_TRUE(member(CoxElt(), a));
    EXPECT_FALSE(member(CoxElt(std::string(1, g)), a));
    auto b = opposite(a);
    EXPECT_FALSE(member(CoxElt(), b));
    EXPECT_EQ(b.refl, a.refl);
  }
}

TEST(Roots, RootsAreHalfSpacesSwappedByReflection) {
  std::mt19937_64 rng(3);
  auto B = ball(5);
  for (int i = 0; i < 60; ++i) {
    auto a = root_from(random_word(rng, 4), kLetters[rng() % 3]);
    for (auto& w : B) EXPECT_NE(member(w, a), member(a.refl * w, a));
  }
}

TEST(Residues, GateProperty) {
  for (auto& x : ball(5))
    for (std::string J : {"rs", "rt", "st"})
      for (auto& b : ball(2)) {
        Residue R(J, b);
        auto p = proj(R, x);
        EXPECT_TRUE(R.contains(p));
        for (auto& y : R.chambers())
          EXPECT_EQ((x.inverse() * y).length(), (x.inverse() * p).length() + (p.inverse() * y).length());
      }
}

TEST(Residues, ChambersAndTypes) {
  Residue R("ts", CoxElt("r"));
  EXPECT_EQ(R.J, "st");
  EXPECT_EQ(R.chambers().size(), 8u);
  EXPECT_EQ(gate(R).word(), "r");
  EXPECT_EQ(R.str(), "R_st(r)");
  EXPECT_THROW(Residue("rst", CoxElt()), std::invalid_argument);
}

TEST(Prefixes, PrefixSetMatchesPrefixOrder) {
  for (auto& w : ball(5)) {
    auto C = prefix_set(w);
    std::set<CoxElt> S(C.begin(), C.end());
    for (auto& v : ball(5)) EXPECT_EQ(S.count(v) > 0, prefix_leq(v, w)) << v.str() << " " << w.str();
  }
}

TEST(Galleries, RejectsNonReduced) {
  EXPECT_THROW(Gallery("ss"), std::invalid_argument);
  auto seq = inversion_sequence(Gallery("srs"));
  ASSERT_EQ(seq.size(), 3u);
  EXPECT_EQ(seq[0], simple_root('s'));
  EXPECT_EQ(seq[1], root_from("s", 'r'));
}
