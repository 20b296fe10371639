#include <gtest/gtest.h>

#include "kmtree/quadrangle.hpp"

using namespace kmtree;

namespace {

const Quadrangle& model() {
  static const Quadrangle Q = build_quadrangle();
  return Q;
}

bool preserves_form(Mat4 m) {
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      if (symp(mat_apply(m, 1 << i), mat_apply(m, 1 << j)) != symp(1 << i, 1 << j)) return false;
  return true;
}

bool invertible(Mat4 m) {
  std::set<int> img;
  for (int v = 0; v < 16; ++v) img.insert(mat_apply(m, static_cast<std::uint8_t>(v)));
  return img.size() == 16;
}

}  // namespace

// brute force over all 2^16 matrices
TEST(Oracle, SymplecticGroupOrder) {
  int n = 0;
  for (int m = 0; m < 1 << 16; ++m)
    if (invertible(static_cast<Mat4>(m)) && preserves_form(static_cast<Mat4>(m))) ++n;
  EXPECT_EQ(n, 720);
  EXPECT_EQ(model().M.group_order(), 720u);
}

TEST(Oracle, FlagCount) {
  // totally isotropic lines: pairs {x, y} of distinct nonzero vectors with symp = 0, three points each
  int lines = 0;
  for (int x = 1; x < 16; ++x)
    for (int y = x + 1; y < 16; ++y)
      if (!symp(x, y) && (x ^ y) > y) ++lines;
  EXPECT_EQ(lines, 15);
  EXPECT_EQ(lines * 3, 45);
  EXPECT_EQ(model().M.chamber_count(), 45u);
}

TEST(Model, BorelAndPanels) {
  auto& Q = model();
  EXPECT_EQ(Q.M.borel_order(), 16u);
  for (int x = 0; x < 45; ++x)
    for (char s : {'s', 't'}) EXPECT_EQ(Q.M.panel({-1, x}, s).size(), 3u);
}

// |{d : l(c, d) = k}| = 2^k times the number of Weyl elements of length k
TEST(Model, SpheresAroundAChamber) {
  auto& Q = model();
  std::vector<int> got(5, 0);
  for (int y = 0; y < 45; ++y) ++got.at(Q.l(Q.c(), {-1, y}));
  EXPECT_EQ(got, (std::vector<int>{1, 4, 8, 16, 16}));
}

TEST(Model, DistancesAreAMetric) {
  auto& M = model().M;
  for (int x = 0; x < 45; ++x)
    for (int y = 0; y < 45; ++y) {
      TwinChamber X{-1, x}, Y{-1, y};
      EXPECT_EQ(M.dist_len(X, Y), M.dist_len(Y, X));
      EXPECT_EQ(M.dist_len(X, Y) == 0, x == y);
      EXPECT_EQ(CoxElt(M.weyl_distance(X, Y)).inverse(), CoxElt(M.weyl_distance(Y, X)));
    }
}

TEST(Model, RootElementsAndAction) {
  auto& Q = model();
  EXPECT_EQ(Q.M.order_of(Q.us), 2);
  EXPECT_EQ(Q.M.order_of(Q.ut), 2);
  EXPECT_NE(Q.us, Q.ut);
  // u_s u_t has order 4 and V has 8 elements
  EXPECT_EQ(Q.M.order_of(Q.M.mul(Q.us, Q.ut)), 4);
  std::set<int> V;
  for (auto& w : v_words()) V.insert(Q.h(w));
  EXPECT_EQ(V.size(), 8u);
  EXPECT_EQ(Q.h("stst"), Q.h("tsts"));
}

TEST(Model, ItemizedDistancesOfTheLemma) {
  auto& Q = model();
  EXPECT_EQ(Q.l(Q.c_s(), Q.dot(Q.c_s(), "t")), 3u);
  EXPECT_EQ(Q.l(Q.c_s(), Q.dot(Q.c_t(), "st")), 4u);
  EXPECT_EQ(Q.l(Q.c(), Q.c_s()), 1u);
  EXPECT_EQ(Q.l(Q.c(), Q.c_t()), 1u);
}

TEST(Suites, AllPass) {
  auto& Q = model();
  for (auto rep : {verify_axioms(Q), verify_diagram(Q), verify_lemma_Uplus(Q), verify_rt_relabel(Q)}) {
    EXPECT_EQ(rep.violation_count, 0) << rep.lemma << " " << rep.to_json().dump();
    EXPECT_GT(rep.tuples_checked, 0);
  }
}

TEST(Suites, RelabeledDistances) {
  auto rep = verify_rt_relabel(model());
  EXPECT_EQ(rep.extra["delta(c,c.u_rt)"], "rtr");
  EXPECT_EQ(CoxElt(rep.extra["delta(c,c.u_rt u_tr)"].get<std::string>()), CoxElt("rtrt"));
}

// a perturbed root element must break the lemma sweep
TEST(Suites, WrongRootElementIsDetected) {
  Quadrangle Q = model();
  Q.ut = Q.M.mul(Q.us, Q.ut);
  EXPECT_GT(verify_lemma_Uplus(Q).violation_count, 0);
}
