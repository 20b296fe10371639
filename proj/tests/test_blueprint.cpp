#include <gtest/gtest.h>

#include "kmtree/blueprint.hpp"
#include "kmtree/quadrangle.hpp"
#include "oracles.hpp"

using namespace kmtree;

namespace {

std::map<int, int> order_profile(const BlueprintGroup& G) {
  std::map<int, int> prof;
  for (Mask x = 0; x < G.order(); ++x) {
    int k = 1;
    for (Mask y = x; y != 0; y = G.mul(y, x)) ++k;
    ++prof[k];
  }
  return prof;
}

}  // namespace

TEST(Orders, TwoToTheLengthUpToSeven) {
  auto M = kac_moody_blueprint();
  for (auto& w : ball(7)) {
    BlueprintGroup G(Gallery(w.word()), M);
    EXPECT_EQ(G.order(), Mask(1) << w.length()) << w.str();
  }
}

TEST(Orders, GeneratorsGenerateEverything) {
  for (auto& w : ball(5)) {
    if (w.is_identity()) continue;
    auto G = km_group(w);
    std::vector<Mask> gens;
    for (int i = 0; i < G->rank(); ++i) gens.push_back(G->gen(i));
    auto S = oracle::closure(gens, Mask(0), [&](Mask a, Mask b) { return G->mul(a, b); });
    EXPECT_EQ(S.size(), G->order()) << w.str();
  }
}

TEST(Orders, AssociativeWithInverses) {
  for (auto& w : ball(4)) {
    auto G = km_group(w);
    Mask n = G->order();
    for (Mask x = 0; x < n; ++x) {
      EXPECT_EQ(G->mul(x, G->inv(x)), 0u);
      for (Mask y = 0; y < n; ++y)
        for (Mask z = 0; z < n; z += 3) EXPECT_EQ(G->mul(G->mul(x, y), z), G->mul(x, G->mul(y, z)));
    }
  }
}

// U_{r_st} against the unipotent radical of the Borel subgroup in the rank-2 model
TEST(Orders, LongestRankTwoElementMatchesTheModelBorel) {
  auto Q = build_quadrangle();
  std::map<int, int> model;
  for (int b : Q.M.borel_plus()) ++model[Q.M.order_of(b)];
  for (std::string J : {"st", "rs", "rt"}) {
    auto G = km_group(longest(J[0], J[1]));
    EXPECT_EQ(order_profile(*G), model) << J;
  }
  // D8 x C2
  EXPECT_EQ(model, (std::map<int, int>{{1, 1}, {2, 11}, {4, 4}}));
}

TEST(Independence, AllGalleriesUpToSix) {
  auto M = kac_moody_blueprint();
  for (auto& w : ball(6)) {
    auto r = gallery_independence(w, M);
    EXPECT_TRUE(r.ok) << w.str() << " " << r.gallery_a << " vs " << r.gallery_b;
  }
}

TEST(Independence, CountsPairsOverSeveralGalleries) {
  auto r = gallery_independence(CoxElt("stst"), kac_moody_blueprint());
  EXPECT_TRUE(r.ok);
  EXPECT_EQ(r.pairs_checked, 2 * 6);
}

TEST(V, EightListedElementsAndIndexTwo) {
  for (std::string J : {"rs", "rt", "st"}) {
    auto V = subgroup_V(Residue(J, CoxElt()));
    auto& G = *V.ambient;
    EXPECT_EQ(V.order(), 8u);
    EXPECT_EQ(G.order(), 16u);
    Mask x = G.gen(simple_root(J[0])), y = G.gen(simple_root(J[1]));
    std::set<Mask> listed{0, x, y, G.mul(x, y), G.mul(y, x), G.product({x, y, x}), G.product({y, x, y}),
                          G.product({x, y, x, y})};
    EXPECT_EQ(listed, std::set<Mask>(V.elements.begin(), V.elements.end()));
    EXPECT_EQ(G.product({x, y, x, y}), G.product({y, x, y, x}));
  }
}

TEST(V, DihedralOfOrderEight) {
  auto V = subgroup_V(Residue("st", CoxElt()));
  auto& G = *V.ambient;
  std::map<int, int> prof;
  for (Mask v : V.elements) {
    int k = 1;
    for (Mask z = v; z != 0; z = G.mul(z, v)) ++k;
    ++prof[k];
  }
  EXPECT_EQ(prof, (std::map<int, int>{{1, 1}, {2, 5}, {4, 2}}));
}

TEST(Subgroups, IntersectionOfRootSubgroups) {
  auto G = km_group(CoxElt("s" + longest('r', 't')));
  auto A = U_in(G, CoxElt("sr")), B = U_in(G, CoxElt("st"));
  auto C = intersect_subgroups(A, B);
  EXPECT_EQ(C, U_in(G, CoxElt("s")));
  EXPECT_EQ(C.order(), 2u);
}

TEST(Inclusions, AlongGalleriesAndRoots) {
  for (auto& w : ball(5))
    for (char u : kLetters)
      if ((w * u).length() > w.length() && !w.is_identity()) EXPECT_TRUE(inclusion(w.word(), u).verify());
  EXPECT_THROW(inclusion("st", 't'), std::invalid_argument);
  auto m = root_inclusion(km_group(CoxElt("sr")), km_group(CoxElt("s" + longest('r', 't'))));
  EXPECT_TRUE(m.verify());
}

TEST(Blueprint, CommutatorsLieInOpenIntervals) {
  auto G = km_group(CoxElt("stst"));
  // only the outermost pair has a nontrivial commutator, the product of the two inner roots
  EXPECT_EQ(G->commutator(0, 3).size(), 2u);
  EXPECT_TRUE(G->commutator(0, 2).empty());
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j)
      for (int p : G->commutator(i, j)) {
        EXPECT_GT(p, i);
        EXPECT_LT(p, j);
      }
}
