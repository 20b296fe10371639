#include <gtest/gtest.h>

#include "kmtree/certificates.hpp"

using namespace kmtree;

namespace {

void expect_all_pass(const std::vector<Certificate>& cs) {
  for (auto& c : cs) {
    auto j = c.to_json();
    EXPECT_TRUE(c.pass()) << j.dump(1);
    EXPECT_FALSE(c.checks.empty()) << c.lemma;
  }
}

std::set<std::string> lemmas_of(const std::vector<Certificate>& cs) {
  std::set<std::string> out;
  for (auto& c : cs) out.insert(c.lemma);
  return out;
}

}  // namespace

TEST(Pipeline, BaseResidue) {
  auto cs = section4_pipeline(Residue("st", CoxElt()));
  expect_all_pass(cs);
  // both letters give the ",s" variants and the G_-1 / K cap G pieces
  EXPECT_GE(cs.size(), 11u);
  auto top = cert_main(Residue("st", CoxElt()));
  EXPECT_TRUE(lemmas_of(cs).count(top.lemma));
}

TEST(Pipeline, FirstLevelResidue) {
  auto cs = section4_pipeline(Residue("st", CoxElt("r")));
  expect_all_pass(cs);
  EXPECT_TRUE(lemmas_of(cs).count(cert_corollary(Residue("st", CoxElt("r"))).lemma));
}

TEST(Pipeline, AssumptionsNameTheMissingOracle) {
  auto cs = section4_pipeline(Residue("rt", CoxElt()));
  auto as = assumptions_of(cs);
  ASSERT_FALSE(as.empty());
  for (auto& a : as) EXPECT_NE(a.find(steps::kWP), std::string::npos) << a;
}

TEST(Pipeline, ResidueOutsideT1Fails) {
  auto cs = section4_pipeline(Residue("st", CoxElt("rsr")));
  ASSERT_EQ(cs.size(), 1u);
  EXPECT_FALSE(cs[0].pass());
}

TEST(Pipeline, DefaultResidues) {
  auto rs = pipeline_residues();
  ASSERT_EQ(rs.size(), 6u);
  EXPECT_EQ(rs[0].str(), "R_rs(1)");
  EXPECT_EQ(gate(rs[3]).length(), 1u);
}

TEST(Controls, WrongIntersectionIsCaught) {
  auto G = U_group(CoxElt("s" + longest('r', 't')));
  Certificate c;
  EXPECT_TRUE(steps::intersection(c, "right", *G, steps::U_("sr"), steps::U_("st"), steps::U_("s")));
  EXPECT_FALSE(steps::intersection(c, "wrong", *G, steps::U_("sr"), steps::U_("st"), {}));
  EXPECT_FALSE(c.pass());
  Certificate d;
  EXPECT_TRUE(steps::containment(d, "in", *G, steps::U_("s"), steps::U_("sr")));
  EXPECT_FALSE(steps::containment(d, "out", *G, steps::U_("sr"), steps::U_("st")));
}

TEST(Controls, HomSpotDetectsMissingRootsAndCollisions) {
  auto small = U_group(CoxElt("sr")), big = U_group(CoxElt("srt"));
  EXPECT_TRUE(steps::hom_spot(*small, *big, 4).pass());
  EXPECT_TRUE(steps::hom_spot(*big, *small, 4).missing_roots);
  // the free product of U_s and U_t maps onto V with a kernel
  TreeOfGroups T;
  T.add_vertex("U_s", U_group(CoxElt("s")));
  T.add_vertex("U_t", U_group(CoxElt("t")));
  T.add_edge(0, 1, U_group(CoxElt()), {U_group(CoxElt("s"))->id()}, {U_group(CoxElt("t"))->id()});
  TreeProduct F(T, "U_s*U_t");
  auto h = steps::hom_spot(F, *V_group(CoxElt(), 's', 't'), 5);
  EXPECT_FALSE(h.pass());
  EXPECT_GT(h.collisions, 0);
}

TEST(Controls, TreeConditionsRejectABrokenFamily) {
  auto O = build_construction(Kind::O_R, Residue("st", CoxElt()));
  Certificate c;
  steps::Family good{{0, 1, 2}, {steps::V_("s", 'r', 't'), steps::U_(longest('s', 't')), steps::V_("t", 'r', 's')}};
  EXPECT_TRUE(steps::tree_conditions(c, "whole tree", O.tree, good));
  // drop a root shared by the first edge on one side only
  steps::Family bad = good;
  auto shared = steps::common(bad.H[0], bad.H[1]);
  ASSERT_FALSE(shared.empty());
  bad.H[1].erase(std::find(bad.H[1].begin(), bad.H[1].end(), shared.front()));
  EXPECT_FALSE(steps::tree_conditions(c, "broken", O.tree, bad));
}
