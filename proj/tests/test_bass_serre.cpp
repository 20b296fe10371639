#include <gtest/gtest.h>

#include <numeric>

#include "kmtree/constructions.hpp"
#include "oracles.hpp"

using namespace kmtree;

namespace {

std::vector<Elem> all_letters(const TreeProduct& P) {
  std::vector<Elem> out;
  auto& T = P.tree();
  for (std::size_t v = 0; v < T.size(); ++v)
    for (auto& g : T.groups[v]->letters()) out.push_back(P.letter(static_cast<int>(v), g));
  return out;
}

/// Z_a *_{Z_2} Z_b with the order-2 subgroups identified
TreeOfGroups cyclic_amalgam(int a, int b) {
  TreeOfGroups T;
  T.add_vertex("Z" + std::to_string(a), FiniteGroup::cyclic(a, "Z" + std::to_string(a)));
  T.add_vertex("Z" + std::to_string(b), FiniteGroup::cyclic(b, "Z" + std::to_string(b)));
  T.add_edge(0, 1, FiniteGroup::cyclic(2, "Z2"), {{0}, {a / 2}}, {{0}, {b / 2}});
  return T;
}

void expect_counts(const TreeProduct& P, std::uint64_t A, std::uint64_t B, std::uint64_t C, int L) {
  // spheres in the word metric over all vertex-group letters, accumulated
  auto got = ball_counts(P, all_letters(P), L);
  std::partial_sum(got.begin(), got.end(), got.begin());
  auto want = oracle::amalgam_ball(A, B, C, L);
  ASSERT_EQ(got.size(), want.size());
  for (std::size_t i = 0; i < got.size(); ++i) EXPECT_EQ(got[i], want[i]) << P.name() << " radius " << i;
}

}  // namespace

TEST(Oracle, AmalgamBallFrozen) {
  // Z4 *_{Z2} Z6: 1, then 4+6-2-1 = 7, then 2*(1*2 + 2*1) = 8, ...
  auto b = oracle::amalgam_ball(4, 6, 2, 3);
  EXPECT_EQ(b, (std::vector<std::uint64_t>{1, 8, 16, 28}));
}

TEST(BallCounts, CyclicAmalgamsMatchTheOracle) {
  for (auto [a, b] : {std::pair{4, 6}, std::pair{2, 4}, std::pair{6, 8}}) {
    auto T = cyclic_amalgam(a, b);
    ASSERT_TRUE(validate(T).ok());
    TreeProduct P(T, "Z");
    expect_counts(P, a, b, 2, 5);
  }
}

TEST(BallCounts, RootGroupAmalgamsMatchTheOracle) {
  // U_sr *_{U_s} V_{r_st} and V_{r_st} *_{U_t} U_trt
  auto T1 = hat_sequence({{"U_sr", U_group(CoxElt("sr"))}, {"V", V_group(CoxElt(), 's', 't')}});
  auto T2 = hat_sequence({{"V", V_group(CoxElt(), 's', 't')}, {"U_trt", U_group(CoxElt("trt"))}});
  ASSERT_EQ(T1.edges[0].group->size(), 2);
  ASSERT_EQ(T2.edges[0].group->size(), 2);
  expect_counts(TreeProduct(T1, "A"), 4, 8, 2, 4);
  expect_counts(TreeProduct(T2, "B"), 8, 8, 2, 4);
}

TEST(Validate, RejectsBrokenTrees) {
  auto T = cyclic_amalgam(4, 6);
  T.edges[0].omega[1] = {1};  // not a homomorphism from Z2
  T.edges[1].alpha[1] = {1};
  EXPECT_FALSE(validate(T).ok());
  TreeOfGroups D;
  D.add_vertex("a", FiniteGroup::cyclic(2, "a"));
  D.add_vertex("b", FiniteGroup::cyclic(2, "b"));
  auto v = validate(D);
  EXPECT_FALSE(v.ok());
  EXPECT_EQ(v.issues.front(), "edge count is not 2(|V|-1)");
}

TEST(NormalForms, BatteriesOnEveryConstruction) {
  Residue R("st", CoxElt());
  for (auto k : {Kind::V_R, Kind::O_R, Kind::V_Rs, Kind::O_Rs, Kind::H_R, Kind::K_Rs}) {
    auto c = build_construction(k, R);
    TreeProduct P(c.tree, c.name());
    auto b = nf_battery(P, 1500, 3);
    EXPECT_EQ(b.failures, 0) << c.name() << " " << b.to_json().dump();
    EXPECT_GT(b.trials, 6000);
  }
}

TEST(NormalForms, BrittonOnAlternatingWords) {
  auto T = cyclic_amalgam(4, 6);
  TreeProduct P(T, "Z");
  // (1 in Z4 \ Z2)(1 in Z6 \ Z2) alternating words are never trivial
  for (int n = 1; n <= 12; ++n) {
    TPWord w;
    for (int i = 0; i < n; ++i) w.push_back({i % 2, {1}});
    EXPECT_FALSE(P.is_identity(P.evaluate(w))) << n;
    EXPECT_EQ(P.syllables(P.evaluate(w)), static_cast<std::size_t>(n));
  }
  // the central element of order 2 is shared
  EXPECT_EQ(P.letter(0, {2}), P.letter(1, {3}));
}

TEST(Moves, ContractAndFoldReplay) {
  auto H = build_construction(Kind::H_R, Residue("st", CoxElt()));
  auto c = contract(H.tree, {1, 2, 3}, "mid");
  EXPECT_EQ(c.tree.size(), 3u);
  EXPECT_TRUE(validate(c.tree).ok());
  auto mc = check_move(H.tree, c, 1500, 3);
  EXPECT_TRUE(mc.pass()) << mc.to_json().dump();

  auto V = build_construction(Kind::V_Rs, Residue("st", CoxElt()));
  auto& G0 = *V.tree.groups[0];
  auto sub = root_subgroup_in(G0, inversion_set(CoxElt("sr")));
  std::vector<Elem> Hels{G0.id()};
  Hels.insert(Hels.end(), sub.second.begin(), sub.second.end());
  auto f = fold(V.tree, V.tree.edge_between(0, 1), Hels, "U_sr");
  EXPECT_EQ(f.tree.size(), 4u);
  EXPECT_TRUE(validate(f.tree).ok());
  EXPECT_TRUE(check_move(V.tree, f, 1500, 3).pass());
}

TEST(Moves, TamperedMoveIsRejected) {
  auto H = build_construction(Kind::H_R, Residue("st", CoxElt()));
  auto c = contract(H.tree, {1, 2}, "mid");
  auto honest = c.forward;
  c.forward = [honest](const TPWord& w) {
    auto x = honest(w);
    return TPWord(x.begin(), x.begin() + static_cast<long>(x.size() / 2));
  };
  EXPECT_FALSE(check_move(H.tree, c, 300, 2).pass());
}

TEST(Moves, FoldNeedsTheEdgeImage) {
  auto V = build_construction(Kind::V_R, Residue("st", CoxElt()));
  auto& G0 = *V.tree.groups[0];
  EXPECT_ANY_THROW(fold(V.tree, V.tree.edge_between(0, 1), {G0.id()}, "trivial"));
}

TEST(Subtree, ConditionsHoldForVRInOR) {
  Residue R("st", CoxElt());
  auto VR = build_construction(Kind::V_R, R), OR = build_construction(Kind::O_R, R);
  SubtreeFamily f;
  f.vertices = {0, 1, 2};
  for (int v = 0; v < 3; ++v) {
    auto [pred, gens] = root_subgroup_in(*OR.tree.groups[v], VR.specs[v].roots());
    f.contains.push_back(pred);
    f.generators.push_back(gens);
  }
  EXPECT_TRUE(check_subtree_conditions(OR.tree, f).pass());
}

TEST(Subtree, MismatchedPreimagesFail) {
  auto OR = build_construction(Kind::O_R, Residue("st", CoxElt()));
  SubtreeFamily f;
  f.vertices = {0, 1};
  auto& G0 = *OR.tree.groups[0];
  f.contains = {[&G0](const Elem& x) { return G0.is_identity(x); }, [](const Elem&) { return true; }};
  f.generators = {{}, OR.tree.groups[1]->letters()};
  EXPECT_FALSE(check_subtree_conditions(OR.tree, f).pass());
}

TEST(Intersection, FactorsMeetInTheEdgeGroup) {
  auto T = cyclic_amalgam(4, 6);
  TreeProduct P(T, "Z", {1, 0});
  std::set<Elem> C{P.letter(0, {0}), P.letter(0, {2})};
  std::vector<Elem> a{P.letter(0, {1})};
  auto r = ball_intersection(
      P, a, [&](const Elem& x) { return P.in_prefix(x, 1); }, [&](const Elem& x) { return C.count(x) > 0; }, 4);
  EXPECT_TRUE(r.pass()) << r.to_json().dump();
  EXPECT_EQ(r.a_elements, 4);
  EXPECT_EQ(r.in_b, 2);
  auto wrong = ball_intersection(
      P, a, [&](const Elem& x) { return P.in_prefix(x, 1); }, [&](const Elem& x) { return P.is_identity(x); }, 4);
  EXPECT_FALSE(wrong.pass());
}

TEST(Rerooting, PreferredFamilyGivesSupportedNormalForms) {
  Residue R("st", CoxElt());
  auto VR = build_construction(Kind::V_R, R), OR = build_construction(Kind::O_R, R);
  std::vector<TreeProduct::Pred> preds;
  for (int v = 0; v < 3; ++v) preds.push_back(root_subgroup_in(*OR.tree.groups[v], VR.specs[v].roots()).first);
  auto P = rerooted(OR.tree, {0, 1, 2}, preds, "O_R/V_R");
  EXPECT_TRUE(P->preferences_consistent());
  for (auto& a : VR.roots()) EXPECT_TRUE(P->in_preferred(P->root_elem(a)));
  // a generator of O_R outside V_R
  for (auto& [a, e] : P->roots())
    if (!VR.roots().count(a)) EXPECT_FALSE(P->in_preferred(e)) << a.str();
}
