#include <gtest/gtest.h>

#include "kmtree/colimit.hpp"
#include "kmtree/constructions.hpp"

using namespace kmtree;

namespace {

const std::vector<Kind> kKinds{Kind::V_R, Kind::O_R, Kind::V_Rs, Kind::O_Rs, Kind::H_R, Kind::K_Rs};

}  // namespace

TEST(Classify, GateAndFlag) {
  auto t = classify(Residue("st", CoxElt("r")));
  EXPECT_EQ(t.w.word(), "r");
  EXPECT_EQ(t.i, 1);
  EXPECT_EQ(t.r, 'r');
  EXPECT_TRUE(t.in_T1);
  EXPECT_FALSE(classify(Residue("st", CoxElt("rsr"))).in_T1);
  EXPECT_THROW(classify(Residue("s", CoxElt())), std::invalid_argument);
}

TEST(Classify, ResiduesOfTheFirstTwoLevels) {
  EXPECT_EQ(residues_R(0).size(), 3u);
  auto R1 = residues_R(1);
  ASSERT_EQ(R1.size(), 3u);
  std::set<std::string> names;
  for (auto& R : R1) names.insert(R.str());
  EXPECT_EQ(names, (std::set<std::string>{"R_st(r)", "R_rt(s)", "R_rs(t)"}));
  for (int i = 0; i <= 1; ++i)
    for (auto& R : residues_R(i)) EXPECT_TRUE(classify(R).in_T1) << R.str();
}

// a V vertex is index 2 in U_{w r_J}; a U vertex has order 2^l(w)
TEST(Shapes, VertexAndEdgeOrdersAtTheBaseResidue) {
  Residue R("st", CoxElt());
  std::map<Kind, std::vector<int>> vert{{Kind::V_R, {4, 8, 4}},          {Kind::O_R, {16, 16, 16}},
                                        {Kind::V_Rs, {8, 8, 4}},         {Kind::O_Rs, {8, 16, 16, 16}},
                                        {Kind::H_R, {32, 32, 16, 32, 32}}, {Kind::K_Rs, {32, 32, 16, 16}}};
  std::map<Kind, std::vector<int>> edge{{Kind::V_R, {2, 2}},       {Kind::O_R, {4, 4}},        {Kind::V_Rs, {2, 2}},
                                        {Kind::O_Rs, {4, 4, 4}},   {Kind::H_R, {8, 8, 8, 8}}, {Kind::K_Rs, {8, 8, 4}}};
  for (auto k : kKinds) {
    auto c = build_construction(k, R);
    EXPECT_EQ(c.vertex_orders(), vert[k]) << c.name();
    EXPECT_EQ(c.edge_orders(), edge[k]) << c.name();
  }
}

TEST(Shapes, OrdersFollowTheVertexWords) {
  for (int i = 0; i <= 1; ++i)
    for (auto& R : residues_R(i))
      for (auto k : kKinds) {
        auto c = build_construction(k, R);
        for (std::size_t v = 0; v < c.specs.size(); ++v) {
          auto& sp = c.specs[v];
          int want = sp.is_V ? 1 << (sp.w.length() + 3) : 1 << sp.w.length();
          EXPECT_EQ(c.vertex_orders()[v], want) << c.name() << " vertex " << v;
        }
        // every edge group is generated by the roots its two ends share
        auto rs = root_support_check(c.tree);
        EXPECT_TRUE(rs["pass"].get<bool>()) << c.name() << " " << rs.dump();
      }
}

TEST(Shapes, DistinguishedLetterSwapsTheEnds) {
  Residue R("st", CoxElt());
  auto a = build_construction(Kind::V_Rs, R, 's'), b = build_construction(Kind::V_Rs, R, 't');
  EXPECT_EQ(a.tree.names.front(), "U_srs");
  EXPECT_EQ(b.tree.names.front(), "U_trt");
  EXPECT_NE(a.name(), b.name());
  EXPECT_THROW(build_construction(Kind::V_Rs, R, 'r'), PreconditionError);
}

TEST(Preconditions, OutsideT1IsRejected) {
  for (auto k : kKinds) EXPECT_THROW(build_construction(k, Residue("st", CoxElt("rsr"))), PreconditionError);
  try {
    build_construction(Kind::V_R, Residue("rt", CoxElt("sts")));
    FAIL();
  } catch (const PreconditionError& e) {
    EXPECT_NE(std::string(e.what()).find("T_{i,1}"), std::string::npos);
  }
}

TEST(Preconditions, CommaVariantsNeedLengthThree) {
  // at R_rt(rs) the condition fails for r and holds for t
  EXPECT_NO_THROW(build_construction(Kind::V_R, Residue("rt", CoxElt("rs"))));
  EXPECT_THROW(build_construction(Kind::V_Rs, Residue("rt", CoxElt("rs")), 'r'), PreconditionError);
  EXPECT_NO_THROW(build_construction(Kind::V_Rs, Residue("rt", CoxElt("rs")), 't'));
  EXPECT_THROW(build_construction(Kind::O_Rs, Residue("st", CoxElt("tr")), 't'), PreconditionError);
}

TEST(Generators, GeneratingSetsOnLevelsZeroAndOne) {
  for (int i = 0; i <= 1; ++i)
    for (auto& R : residues_R(i))
      for (auto k : kKinds) {
        auto c = build_construction(k, R);
        auto cert = generating_set_check(c);
        auto j = cert.to_json();
        EXPECT_TRUE(cert.pass()) << j.dump(1);
      }
}

TEST(Generators, ContainmentSweepRejectsAWrongPair) {
  // -a_s is not inside a_t
  EXPECT_FALSE(opposite_contained(simple_root('s'), simple_root('t'), 6));
  EXPECT_TRUE(opposite_contained(simple_root('s'), opposite(simple_root('s')), 6));
}

TEST(Colimits, GeneratorListsForEveryLabeling) {
  auto labs = all_labelings();
  ASSERT_EQ(labs.size(), 6u);
  for (auto& lab : labs) {
    auto cert = dset_check(lab);
    auto j = cert.to_json();
    EXPECT_TRUE(cert.pass()) << j.dump(1);
  }
  auto lab = labs.front();
  EXPECT_EQ(build_colimit("G_st", lab).generators.size(), 7u);
  EXPECT_EQ(build_colimit("G_-1", lab).generators.size(), 9u);
  EXPECT_EQ(build_colimit("G_0", lab).generators.size(), 15u);
}

TEST(Colimits, CanonicalIsoNeedsTheSameGenerators) {
  auto lab = all_labelings().front();
  auto a = build_colimit("G_st", lab).node(), b = build_colimit("G_-1", lab).node();
  EXPECT_TRUE(canonical_iso(*a, *a)["pass"].get<bool>());
  EXPECT_FALSE(canonical_iso(*a, *b)["pass"].get<bool>());
  EXPECT_TRUE(decomposition_check(*b)["pass"].get<bool>());
}
