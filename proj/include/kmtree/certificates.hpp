#pragma once
// Certificates for the injectivity lemmas on V_R, O_R, V_{R,s}, O_{R,s}, H_R, K_{R,s} and the colimits G_st, G_-1, G_0.

#include <future>

#include "kmtree/colimit.hpp"
#include "kmtree/quadrangle.hpp"

namespace kmtree {

namespace steps {

using Roots = std::vector<Root>;

inline Roots U_(const std::string& w) { return inversion_set(CoxElt(w)); }
inline Roots V_(const std::string& w, char x, char y) { return V_roots(CoxElt(w), x, y); }
inline std::string L(char a, char b) { return longest(a, b); }
inline std::string Un(const std::string& w) { return "U_" + word_or_one(w); }
inline std::string Vn(const std::string& w, char x, char y) {
  if (x > y) std::swap(x, y);
  return "V_" + w + "r_" + std::string{x, y};
}

inline Roots common(const Roots& a, const Roots& b) {
  Roots out;
  for (auto& x : a)
    if (std::find(b.begin(), b.end(), x) != b.end()) out.push_back(x);
  return out;
}
inline bool roots_within(const Roots& a, const std::set<Root>& b) {
  for (auto& x : a)
    if (!b.count(x)) return false;
  return true;
}

/// elements of <u_a : a in roots> inside G
inline std::set<Elem> span(const Group& G, const Roots& roots) {
  std::vector<Elem> gens;
  for (auto& a : roots) {
    if (!G.has_root(a)) throw std::logic_error(G.name() + " has no generator for a root of the subgroup");
    gens.push_back(G.root_elem(a));
  }
  auto els = generate_in(G, gens, 1 << 16);
  return {els.begin(), els.end()};
}

/// displayed A cap B = C inside a named ambient
inline bool intersection(Certificate& cert, const std::string& desc, const Group& amb, const Roots& A, const Roots& B,
                         const Roots& C) {
  auto a = span(amb, A), b = span(amb, B), c = span(amb, C);
  std::set<Elem> ab;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::inserter(ab, ab.end()));
  return cert.add(desc, ab == c,
                  {{"ambient", amb.name()}, {"A", a.size()}, {"B", b.size()}, {"A_cap_B", ab.size()}, {"C", c.size()}});
}

inline bool containment(Certificate& cert, const std::string& desc, const Group& amb, const Roots& A, const Roots& B) {
  auto a = span(amb, A), b = span(amb, B);
  bool ok = std::includes(b.begin(), b.end(), a.begin(), a.end());
  return cert.add(desc, ok, {{"ambient", amb.name()}, {"A", a.size()}, {"B", b.size()}});
}

/** \brief Subgroups H_v <= G_v on a subtree, given by root sets. */
struct Family {
  std::vector<int> vertices;
  std::vector<Roots> H;
};

inline SubtreeFamily subtree_family(const TreeOfGroups& G, const Family& f) {
  SubtreeFamily s;
  s.vertices = f.vertices;
  for (std::size_t i = 0; i < f.vertices.size(); ++i) {
    auto [pred, letters] = root_subgroup_in(*G.groups[f.vertices[i]], f.H[i], 1 << 16);
    s.contains.push_back(pred);
    s.generators.push_back(letters);
  }
  return s;
}

/// conditions of the injectivity criterion; each H_e is <u_a : a common to the adjacent H's>
inline bool tree_conditions(Certificate& cert, const std::string& desc, const TreeOfGroups& G, const Family& f,
                   int spot_radius = 2) {
  auto fam = subtree_family(G, f);
  std::map<int, std::vector<Elem>> given;
  for (std::size_t i = 0; i < f.vertices.size(); ++i)
    for (std::size_t j = 0; j < f.vertices.size(); ++j) {
      int e = G.edge_between(f.vertices[i], f.vertices[j]);
      if (e < 0 || i == j) continue;
      e -= e % 2;
      auto& E = G.edges[e];
      std::vector<Elem> els{E.group->id()};
      for (auto& x : root_subgroup_in(*E.group, common(f.H[i], f.H[j])).second) els.push_back(x);
      given[e] = els;
    }
  auto rep = check_subtree_conditions(G, fam, given, spot_radius);
  return cert.add(desc, rep.pass(), rep.to_json());
}

/// G re-rooted at the family's subtree, preferring H: in_preferred decides membership in <H>
inline std::shared_ptr<TreeProduct> family_product(const TreeOfGroups& G, const Family& f, std::string name) {
  std::vector<TreeProduct::Pred> preds;
  for (auto& p : subtree_family(G, f).contains) preds.push_back(p);
  return rerooted(G, f.vertices, preds, std::move(name));
}

/** \brief Root-letter ball of X mapped into Y by x_a -> x_a: well defined and injective on the ball. */
struct HomSpot {
  long elements = 0, inconsistent = 0, collisions = 0;
  int radius = 0;
  bool missing_roots = false;
  bool pass() const { return !missing_roots && inconsistent == 0 && collisions == 0; }
  json to_json() const {
    return {{"radius", radius}, {"elements", elements}, {"inconsistent", inconsistent},
            {"collisions", collisions}, {"missing_roots", missing_roots}, {"pass", pass()}};
  }
};

inline HomSpot hom_spot(const Group& X, const Group& Y, int radius, std::size_t cap = 300000) {
  HomSpot h;
  std::vector<std::pair<Elem, Elem>> gens;
  for (auto& [a, e] : X.roots()) {
    if (!Y.has_root(a)) {
      h.missing_roots = true;
      return h;
    }
    gens.push_back({e, Y.root_elem(a)});
  }
  std::unordered_map<Elem, Elem, ElemHash> img{{X.id(), Y.id()}};
  std::vector<Elem> frontier{X.id()};
  for (int k = 0; k < radius && img.size() < cap; ++k) {
    std::vector<Elem> next;
    for (auto& x : frontier) {
      Elem y = img.at(x);
      for (auto& [gx, gy] : gens) {
        Elem x2 = X.mul(x, gx), y2 = Y.mul(y, gy);
        auto [it, fresh] = img.emplace(x2, y2);
        if (fresh) next.push_back(std::move(x2));
        else if (it->second != y2) ++h.inconsistent;
      }
    }
    frontier = std::move(next);
    h.radius = k + 1;
  }
  std::unordered_set<Elem, ElemHash> ys;
  for (auto& [x, y] : img) ys.insert(y);
  h.elements = static_cast<long>(img.size());
  h.collisions = static_cast<long>(img.size() - ys.size());
  return h;
}

inline bool injective_spot(Certificate& cert, const std::string& desc, const Group& X, const Group& Y, int radius = 5) {
  auto h = hom_spot(X, Y, radius);
  return cert.add(desc, h.pass(), h.to_json());
}

/// nonidentity elements of the listed vertex groups, as elements of P
inline std::vector<Elem> syllable_letters(const TreeProduct& P, const std::vector<int>& vertices) {
  std::vector<Elem> out;
  for (int v : vertices)
    for (auto& g : P.tree().groups[v]->letters()) out.push_back(P.letter(v, g));
  return out;
}

inline NodePtr seq(const std::string& name, const std::vector<VertexSpec>& specs) {
  std::vector<NodePtr> parts;
  for (auto& v : specs) parts.push_back(leaf(v.group()));
  return path(name, parts);
}
inline NodePtr seq(const Construction& c) { return seq(c.name(), c.specs); }
inline NodePtr U(const std::string& w) { return leaf(U_group(CoxElt(w))); }
inline NodePtr V(const std::string& w, char x, char y) { return leaf(V_group(CoxElt(w), x, y)); }

/// consecutive lines are canonically isomorphic
inline bool iso_chain(Certificate& cert, const std::string& desc, const std::vector<NodePtr>& lines) {
  json steps = json::array();
  bool ok = true;
  for (std::size_t i = 0; i + 1 < lines.size(); ++i) {
    auto j = canonical_iso(*lines[i], *lines[i + 1]);
    ok = ok && j["pass"].get<bool>();
    steps.push_back(j);
  }
  return cert.add(desc, ok, {{"steps", lines.size() - 1}, {"isomorphisms", steps}});
}

inline bool hom_check(Certificate& cert, const std::string& desc, const Node& X, const Node& Y) {
  auto j = canonical_hom(X, Y);
  return cert.add(desc, j["pass"].get<bool>(), j);
}

inline bool move_check(Certificate& cert, const std::string& desc, const TreeOfGroups& before, const Move& m,
                       long words, int radius) {
  auto mc = check_move(before, m, words, radius);
  json d = mc.to_json();
  d["move"] = m.info;
  return cert.add(desc, mc.pass(), d);
}

inline bool words_in(Certificate& cert, const std::vector<std::string>& words, const std::vector<CoxElt>& C,
                     const std::string& cname) {
  std::set<CoxElt> in(C.begin(), C.end());
  bool ok = true;
  std::string list;
  for (auto& w : words) {
    ok = ok && in.count(CoxElt(w));
    list += (list.empty() ? "" : ", ") + w;
  }
  return cert.add(list + " in " + cname, ok);
}

/// index of the vertex of T whose group has exactly the given roots, or -1
inline int vertex_with_roots(const TreeOfGroups& T, const Roots& r) {
  std::set<Root> want(r.begin(), r.end());
  for (std::size_t v = 0; v < T.size(); ++v)
    if (T.groups[v]->root_set() == want) return static_cast<int>(v);
  return -1;
}

/// family of the sub-construction `sub` inside `amb`: each sub vertex lands in the ambient vertex containing its roots
inline std::optional<Family> place(const std::vector<VertexSpec>& sub, const TreeOfGroups& amb,
                                   const std::vector<Roots>& filler = {}) {
  Family f;
  std::vector<Roots> H(amb.size());
  std::vector<bool> used(amb.size(), false);
  for (auto& v : sub) {
    auto r = v.roots();
    int hit = -1;
    for (std::size_t a = 0; a < amb.size(); ++a)
      if (!used[a] && roots_within(r, amb.groups[a]->root_set())) {
        hit = static_cast<int>(a);
        break;
      }
    if (hit < 0) return std::nullopt;
    used[hit] = true;
    H[hit] = r;
  }
  // ambient vertices between placed ones take the filler subgroups, in order
  std::size_t k = 0;
  for (std::size_t a = 0; a < amb.size(); ++a) {
    if (used[a]) f.vertices.push_back(static_cast<int>(a));
  }
  int lo = *std::min_element(f.vertices.begin(), f.vertices.end());
  int hi = *std::max_element(f.vertices.begin(), f.vertices.end());
  f.vertices.clear();
  for (int a = lo; a <= hi; ++a) {
    if (!used[a]) {
      if (k >= filler.size()) return std::nullopt;
      H[a] = filler[k++];
    }
    f.vertices.push_back(a);
    f.H.push_back(H[a]);
  }
  return f;
}

inline const char* kWP = "no word-problem oracle for ";

}  // namespace steps

// ---------------------------------------------------------------- lemma certificates

/// V_R -> O_R is injective.
inline Certificate cert_VR_OR(const Residue& R) {
  using namespace steps;
  auto VR = build_construction(Kind::V_R, R), OR = build_construction(Kind::O_R, R);
  char s = VR.s, t = VR.t, r = VR.r;
  std::string w = VR.tag.w.word();
  Certificate c;
  c.lemma = "V_R -> O_R injective";
  c.residue = R.str();
  containment(c, Un(w + s + r) + " <= " + Vn(w + s, r, t), *U_group(CoxElt(w + s + L(r, t))), U_(w + s + r),
              V_(w + s, r, t));
  containment(c, Vn(w, s, t) + " <= " + Un(w + L(s, t)), *U_group(CoxElt(w + L(s, t))), V_(w, s, t), U_(w + L(s, t)));
  containment(c, Un(w + t + r) + " <= " + Vn(w + t, r, s), *U_group(CoxElt(w + t + L(r, s))), U_(w + t + r),
              V_(w + t, r, s));
  intersection(c, Un(w + s + r) + " cap " + Un(w + s + t) + " = " + Un(w + s), *U_group(CoxElt(w + s + L(r, t))),
               U_(w + s + r), U_(w + s + t), U_(w + s));
  intersection(c, Vn(w, s, t) + " cap " + Un(w + s + t) + " = " + Un(w + s), *U_group(CoxElt(w + L(s, t))),
               V_(w, s, t), U_(w + s + t), U_(w + s));
  intersection(c, Vn(w, s, t) + " cap " + Un(w + t + s) + " = " + Un(w + t), *U_group(CoxElt(w + L(s, t))),
               V_(w, s, t), U_(w + t + s), U_(w + t));
  intersection(c, Un(w + t + r) + " cap " + Un(w + t + s) + " = " + Un(w + t), *U_group(CoxElt(w + t + L(r, s))),
               U_(w + t + r), U_(w + t + s), U_(w + t));
  auto f = place(VR.specs, OR.tree);
  c.add("vertex groups of V_R lie in the vertex groups of O_R", f.has_value());
  if (f) tree_conditions(c, "subtree conditions for V_R in O_R", OR.tree, *f);
  TreeProduct PV(VR.tree, "V_R"), PO(OR.tree, "O_R");
  hom_check(c, "relators of V_R hold in O_R", *leaf(std::make_shared<TreeProduct>(VR.tree, "V_R")),
            *leaf(std::make_shared<TreeProduct>(OR.tree, "O_R")));
  injective_spot(c, "V_R -> O_R injective on the root-letter ball", PV, PO, 6);
  return c;
}

/// V_R -> V_{R,s}, O_R -> O_{R,s}, V_{R,s} -> O_{R,s} injective; V_{R,s} *_{V_R} O_R = U_{wsrs} *_{U_wsr} O_R = O_{R,s}.
inline Certificate cert_VRs_ORs(const Residue& R, char s_letter, int move_words = 2000, int move_radius = 3) {
  using namespace steps;
  auto VR = build_construction(Kind::V_R, R, s_letter), OR = build_construction(Kind::O_R, R, s_letter);
  auto VRs = build_construction(Kind::V_Rs, R, s_letter), ORs = build_construction(Kind::O_Rs, R, s_letter);
  char s = VR.s, r = VR.r;
  std::string w = VR.tag.w.word();
  Certificate c;
  c.lemma = "V_{R,s} -> O_{R,s} injective";
  c.residue = R.str() + " s=" + s;
  c.add("l(w_R srs) = l(w_R) + 3", len(w + s + r + s) == w.size() + 3);

  // V_{R,s}: fold U_wsr into the first edge, then contract it with the rest
  auto& T = VRs.tree;
  auto H = root_subgroup_in(*T.groups[0], U_(w + s + r));
  std::vector<Elem> Hels{T.groups[0]->id()};
  Hels.insert(Hels.end(), H.second.begin(), H.second.end());
  auto f1 = fold(T, T.edge_between(0, 1), Hels, Un(w + s + r));
  move_check(c, "fold " + Un(w + s + r) + " into V_{R,s}", T, f1, move_words, move_radius);
  auto c1 = contract(f1.tree, {1, 2, 3}, "V_R");
  move_check(c, "contract to " + Un(w + s + r + s) + " *_" + Un(w + s + r) + " V_R", f1.tree, c1, move_words,
             move_radius);
  auto c2 = contract(ORs.tree, {1, 2, 3}, "O_R");
  move_check(c, "contract O_{R,s} to " + Un(w + s + r + s) + " *_" + Un(w + s + r) + " O_R", ORs.tree, c2,
             move_words, move_radius);

  TreeProduct PVR(VR.tree, "V_R"), POR(OR.tree, "O_R"), PVRs(VRs.tree, "V_{R,s}"), PORs(ORs.tree, "O_{R,s}");
  injective_spot(c, "V_R -> V_{R,s} injective on the root-letter ball", PVR, PVRs);
  injective_spot(c, "O_R -> O_{R,s} injective on the root-letter ball", POR, PORs, 4);

  // criterion on U_wsrs *_{U_wsr} O_R with the family (U_wsrs, V_R)
  auto fam = place(VR.specs, OR.tree);
  if (c.add("vertex groups of V_R lie in the vertex groups of O_R", fam.has_value())) {
    auto OP = family_product(OR.tree, *fam, "O_R");
    c.add("preference family V_R on O_R is consistent", OP->preferences_consistent());
    auto N = hat_sequence({{Un(w + s + r + s), U_group(CoxElt(w + s + r + s))}, {"O_R", OP}});
    SubtreeFamily sf;
    sf.vertices = {0, 1};
    sf.contains = {[](const Elem&) { return true; }, [OP](const Elem& x) { return OP->in_preferred(x); }};
    sf.generators = {N.groups[0]->letters(), {}};
    for (auto& a : VR.roots()) sf.generators[1].push_back(OP->root_elem(a));
    std::vector<Elem> all;
    for (int i = 0; i < N.edges[0].group->size(); ++i) all.push_back({i});
    auto rep = check_subtree_conditions(N, sf, {{0, all}}, 2);
    c.add("subtree conditions for U_wsrs *_{U_wsr} V_R in U_wsrs *_{U_wsr} O_R", rep.pass(), rep.to_json());
  }
  injective_spot(c, "V_{R,s} -> O_{R,s} injective on the root-letter ball", PVRs, PORs, 4);

  iso_chain(c, "V_{R,s} *_{V_R} O_R = U_wsrs *_{U_wsr} O_R = O_{R,s}",
            {path("V_{R,s} *_{V_R} O_R", {seq(VRs), seq(OR)}, {seq(VR)}),
             path("U_wsrs *_{U_wsr} O_R", {U(w + s + r + s), seq(OR)}, {U(w + s + r)}), seq(ORs)});
  iso_chain(c, "V_{R,s} = U_wsrs *_{U_wsr} V_R",
            {seq(VRs), path("U_wsrs *_{U_wsr} V_R", {U(w + s + r + s), seq(VR)}, {U(w + s + r)})});
  return c;
}

/// O_R -> K_{R,s}, K_{R,t} injective and H_R = K_{R,s} *_{O_R} K_{R,t}.
inline Certificate cert_HR_KK(const Residue& R) {
  using namespace steps;
  auto tag = classify(R);
  Certificate c;
  c.lemma = "H_R = K_{R,s} *_{O_R} K_{R,t}";
  c.residue = R.str();
  std::string w = tag.w.word();
  char r = tag.r;
  for (auto [x, y] : {std::pair{tag.s, tag.t}, std::pair{tag.t, tag.s}}) {
    auto OR = build_construction(Kind::O_R, R, x), K = build_construction(Kind::K_Rs, R, x);
    std::string kx = std::string("K_{R,") + x + "}";
    // K with its two middle vertices merged
    auto inner = hat_sequence({{Vn(w + x + y, r, x), V_group(CoxElt(w + x + y), r, x)},
                               {Un(w + L(x, y)), U_group(CoxElt(w + L(x, y)))}});
    auto mid = rerooted(inner, {1}, {}, Vn(w + x + y, r, x) + "*" + Un(w + L(x, y)));
    auto G = hat_sequence({{Un(w + x + L(r, y)), U_group(CoxElt(w + x + L(r, y)))},
                           {mid->name(), mid},
                           {Vn(w + y, r, x), V_group(CoxElt(w + y), r, x)}});
    intersection(c, Vn(w + x, r, y) + " cap " + Un(w + x + y + r) + " = " + Un(w + x + y),
                 *U_group(CoxElt(w + x + L(r, y))), V_(w + x, r, y), U_(w + x + y + r), U_(w + x + y));
    intersection(c, Un(w + L(x, y)) + " cap " + Un(w + x + y + r) + " = " + Un(w + x + y), *mid, U_(w + L(x, y)),
                 U_(w + x + y + r), U_(w + x + y));
    Family f{{0, 1, 2}, {V_(w + x, r, y), U_(w + L(x, y)), V_(w + y, r, x)}};
    containment(c, Vn(w + x, r, y) + " <= " + Un(w + x + L(r, y)), *U_group(CoxElt(w + x + L(r, y))),
                V_(w + x, r, y), U_(w + x + L(r, y)));
    tree_conditions(c, "subtree conditions for O_R in " + kx + " (middle vertices merged)", G, f);
    TreeProduct PO(OR.tree, "O_R"), PK(K.tree, kx);
    injective_spot(c, "O_R -> " + kx + " injective on the root-letter ball", PO, PK, 4);
  }
  char s = tag.s, t = tag.t;
  auto OR = build_construction(Kind::O_R, R, s), Ks = build_construction(Kind::K_Rs, R, s),
       Kt = build_construction(Kind::K_Rs, R, t), HR = build_construction(Kind::H_R, R, s);
  auto A = path("A", {U(w + s + L(r, t)), V(w + s + t, r, s), U(w + L(s, t))});
  auto C0 = path("C_0", {V(w + s, r, t), U(w + L(s, t))});
  auto B = path("B", {V(w + t + s, r, t), U(w + t + L(r, s))});
  auto Vt = V(w + t, r, s);
  auto nOR = seq(OR), nKs = seq(Ks), nKt = seq(Kt);
  std::vector<NodePtr> lines{
      seq(HR),
      path("A *_{U_wtst} B", {A, B}, {U(w + t + s + t)}),
      path("A *_{C0} C0 *_{U_wtst} B", {A, C0, B}, {C0, U(w + t + s + t)}),
      path("A *_{C0} K_{R,t}", {A, nKt}, {C0}),
      path("A *_{C0} O_R *_{O_R} K_{R,t}", {A, nOR, nKt}, {C0, nOR}),
      path("(A *_{C0} O_R) *_{O_R} K_{R,t}", {path("A *_{C0} O_R", {A, nOR}, {C0}), nKt}, {nOR}),
      path("(A *_{C0} C0 *_{U_wts} V) *_{O_R} K_{R,t}", {path("A *_{C0} C0 *_{U_wts} V", {A, C0, Vt}, {C0, U(w + t + s)}), nKt},
           {nOR}),
      path("(A *_{U_wts} V) *_{O_R} K_{R,t}", {path("A *_{U_wts} V", {A, Vt}, {U(w + t + s)}), nKt}, {nOR}),
      path("K_{R,s} *_{O_R} K_{R,t}", {nKs, nKt}, {nOR})};
  iso_chain(c, "chain of seven intermediate decompositions from H_R to K_{R,s} *_{O_R} K_{R,t}", lines);
  return c;
}

/// T = R_{rt}(w_R ts) lies in T_{i+2,1} and V_T -> H_R is injective (t the given letter).
inline Certificate cert_VT_HR(const Residue& R, char t_letter) {
  using namespace steps;
  auto tag = classify(R);
  char t = t_letter, s = t == tag.s ? tag.t : tag.s, r = tag.r;
  std::string w = tag.w.word();
  Certificate c;
  c.lemma = "V_T -> H_R injective";
  c.residue = R.str() + " t=" + t;
  std::string J{r, t};
  std::sort(J.begin(), J.end());
  Residue T(J, CoxElt(w + t + s));
  auto tt = classify(T);
  c.add("T = " + T.str() + " lies in T_{i+2,1}", tt.in_T1 && tt.i == tag.i + 2, tt.to_json());
  auto HR = build_construction(Kind::H_R, R, s);
  auto VT = build_construction(Kind::V_R, T);
  auto S = hat_sequence({{HR.tree.names[2], HR.tree.groups[2]},
                         {HR.tree.names[3], HR.tree.groups[3]},
                         {HR.tree.names[4], HR.tree.groups[4]}});
  TreeProduct PS(S, "S"), PH(HR.tree, "H_R"), PV(VT.tree, "V_T");
  injective_spot(c, "last three vertices of H_R -> H_R injective on the root-letter ball", PS, PH, 4);
  auto f = place(VT.specs, S);
  if (c.add("vertex groups of V_T lie in the last three vertex groups of H_R", f.has_value()))
    tree_conditions(c, "subtree conditions for V_T in " + HR.tree.names[2] + " * " + HR.tree.names[3] + " * " + HR.tree.names[4],
           S, *f);
  injective_spot(c, "V_T -> H_R injective on the root-letter ball", PV, PH, 4);
  return c;
}

/// V_T -> O_{R,s} and K_{R,s} -> O_{R,s} *_{V_T} O_T injective, K_{R,s} cap O_{R,s} = O_R, with T = R_{rt}(w_R s).
inline Certificate cert_K_cap_O(const Residue& R, char s_letter, int move_words = 2000, int move_radius = 3) {
  using namespace steps;
  auto ORs = build_construction(Kind::O_Rs, R, s_letter), Ks = build_construction(Kind::K_Rs, R, s_letter),
       OR = build_construction(Kind::O_R, R, s_letter);
  char s = ORs.s, t = ORs.t, r = ORs.r;
  std::string w = ORs.tag.w.word();
  Certificate c;
  c.lemma = "K_{R,s} cap O_{R,s} = O_R";
  c.residue = R.str() + " s=" + s;
  std::string J{r, t};
  std::sort(J.begin(), J.end());
  Residue T(J, CoxElt(w + s));
  auto VT = build_construction(Kind::V_R, T), OT = build_construction(Kind::O_R, T);
  c.add("T = " + T.str(), true, classify(T).to_json());

  // O_{R,s} = V_T *_{U_wsts} U_{w r_st} ^* V_{wt r_rs}: fold U_wsts off U_{w r_st}, contract the first three
  auto& X = ORs.tree;
  auto H = root_subgroup_in(*X.groups[2], U_(w + s + t + s));
  std::vector<Elem> Hels{X.groups[2]->id()};
  Hels.insert(Hels.end(), H.second.begin(), H.second.end());
  auto f1 = fold(X, X.edge_between(2, 1), Hels, Un(w + s + t + s));
  move_check(c, "fold " + Un(w + s + t + s) + " into O_{R,s}", X, f1, move_words, move_radius);
  auto c1 = contract(f1.tree, {0, 1, 4}, "V_T");
  move_check(c, "contract to V_T *_" + Un(w + s + t + s) + " " + Un(w + L(s, t)) + " * " + Vn(w + t, r, s), f1.tree,
             c1, move_words, move_radius);
  c.add("the contracted vertex has the generators of V_T", c1.tree.groups[0]->root_set() == VT.roots());
  iso_chain(c, "V_T = " + Un(w + s + r + s) + " * " + Vn(w + s, r, t) + " * " + Un(w + s + t + s),
            {seq(VT), path("V_T'", {U(w + s + r + s), V(w + s, r, t), U(w + s + t + s)})});
  TreeProduct PVT(VT.tree, "V_T"), PORs(ORs.tree, "O_{R,s}");
  injective_spot(c, "V_T -> O_{R,s} injective on the root-letter ball", PVT, PORs, 4);

  auto nVT = seq(VT), nOT = seq(OT);
  auto UR = U(w + L(s, t)), Vt = V(w + t, r, s), Usts = U(w + s + t + s);
  auto OT_rev = path("O_T", {V(w + s + t, r, s), U(w + s + L(r, t)), V(w + s + r, s, t)});
  auto Z = std::vector<VertexSpec>{VertexSpec::V(w + s + r, s, t), VertexSpec::U(w + s + L(r, t)),
                                   VertexSpec::V(w + s + t, r, s), VertexSpec::U(w + L(s, t)), VertexSpec::V(w + t, r, s)};
  std::vector<NodePtr> lines{
      path("O_{R,s} *_{V_T} O_T", {seq(ORs), nOT}, {nVT}),
      path("(V_T *_{U_wsts} U ^* V) *_{V_T} O_T", {path("V_T * U * V", {nVT, UR, Vt}, {Usts}), nOT}, {nVT}),
      path("V ^* U *_{U_wsts} V_T *_{V_T} O_T", {Vt, UR, nVT, nOT}, {nullptr, Usts, nVT}),
      path("V ^* U *_{U_wsts} O_T", {Vt, UR, OT_rev}, {nullptr, Usts}),
      path("K_{R,s} *_{U_wsrt} V_{wsr r_st}", {seq(Ks), V(w + s + r, s, t)}, {U(w + s + r + t)}),
      seq("Z", Z)};
  iso_chain(c, "O_{R,s} *_{V_T} O_T = K_{R,s} *_{U_wsrt} V_{wsr r_st}", lines);

  auto Zt = tree_of(Z);
  TreeProduct PZ(Zt, "Z"), PK(Ks.tree, "K_{R,s}");
  injective_spot(c, "K_{R,s} -> O_{R,s} *_{V_T} O_T injective on the root-letter ball", PK, PZ, 4);
  Family fO{{0, 1, 2, 3, 4}, {U_(w + s + r + s), V_(w + s, r, t), U_(w + s + t + s), U_(w + L(s, t)), V_(w + t, r, s)}};
  Family fR{{1, 2, 3, 4}, {V_(w + s, r, t), U_(w + s + t + s), U_(w + L(s, t)), V_(w + t, r, s)}};
  tree_conditions(c, "subtree conditions for O_{R,s} in Z", Zt, fO);
  tree_conditions(c, "subtree conditions for O_R in Z", Zt, fR);
  auto P1 = family_product(Zt, fO, "Z/O_{R,s}");
  auto P2 = family_product(Zt, fR, "Z/O_R");
  std::vector<Elem> kl;
  for (auto& a : Ks.roots()) kl.push_back(P1->root_elem(a));
  auto res = ball_intersection(
      *P1, kl, [&](const Elem& x) { return P1->in_preferred(x); },
      [&](const Elem& x) { return P2->in_preferred(P2->evaluate(P1->to_word(x))); }, 5);
  c.add("K_{R,s} cap O_{R,s} = O_R on the root-letter ball of K_{R,s}", res.pass(), res.to_json());
  return c;
}

/// G_-1 = G_st *_{V_{R,s}} O_{R,s} for R = R_st(1).
inline Certificate cert_G_minus1(const Residue& R, char s_letter) {
  using namespace steps;
  auto VRs = build_construction(Kind::V_Rs, R, s_letter), ORs = build_construction(Kind::O_Rs, R, s_letter);
  char s = VRs.s, t = VRs.t, r = VRs.r;
  Labeling lab{r, s, t};
  Certificate c;
  c.lemma = "G_-1 = G_st *_{V_{R,s}} O_{R,s}";
  c.residue = R.str() + " s=" + s;
  auto Gst = build_colimit("G_st", lab), Gm1 = build_colimit("G_-1", lab), G0 = build_colimit("G_0", lab);
  auto nst = Gst.node(), nm1 = Gm1.node(), n0 = G0.node();
  words_in(c, {std::string{s, r, s}, std::string{t, r}}, Gst.C, "C_r");
  hom_check(c, "x_a -> x_a: G_st -> G_0", *nst, *n0);
  hom_check(c, "x_a -> x_a: G_st -> G_-1", *nst, *nm1);
  hom_check(c, "x_a -> x_a: V_{R,s} -> G_st", *seq(VRs), *nst);
  hom_check(c, "x_a -> x_a: V_{R,s} -> O_{R,s} (normal forms)", *seq(VRs),
            *leaf(std::make_shared<TreeProduct>(ORs.tree, "O_{R,s}")));
  auto ro = ORs.roots();
  c.add("G_st has 7 generators", Gst.generators.size() == 7, {{"count", Gst.generators.size()}});
  c.add("O_{R,s} has 7 generators", ro.size() == 7, {{"count", ro.size()}});
  std::set<Root> shared;
  std::set_intersection(ro.begin(), ro.end(), Gst.generators.begin(), Gst.generators.end(),
                        std::inserter(shared, shared.end()));
  std::set<Root> want{simple_root(s), simple_root(t), root_from(std::string{s}, r), root_from(std::string{s, r}, s),
                      root_from(std::string{t}, r)};
  c.add("shared generators are a_s, a_t, s a_r, sr a_s, t a_r", shared == want, {{"shared", shared.size()}});
  std::set<Root> uni = ro;
  uni.insert(Gst.generators.begin(), Gst.generators.end());
  c.add("generators of the amalgam biject with those of G_-1 (9)", uni == Gm1.generators, {{"count", uni.size()}});
  iso_chain(c, "G_st *_{V_{R,s}} O_{R,s} = G_-1",
            {path("G_st *_{V_{R,s}} O_{R,s}", {nst, seq(ORs)}, {seq(VRs)}), nm1});

  // the comparison group: <x_{a_s}, x_{a_t}> in the rank-2 model has at most 8 elements
  auto Q = build_quadrangle();
  auto Vg = V_group(CoxElt(), s, t);
  auto rel = cayley_relators(*Vg);
  long bad = 0;
  for (auto& x : rel) {
    auto ev = [&](const std::vector<Root>& ws) {
      int g = Q.M.identity();
      for (auto& a : ws) g = Q.M.mul(g, a == simple_root(s) ? Q.us : Q.ut);
      return g;
    };
    if (ev(x.lhs) != ev(x.rhs)) ++bad;
  }
  std::set<int> sub{Q.M.identity()};
  std::vector<int> todo{Q.M.identity()};
  while (!todo.empty()) {
    int g = todo.back();
    todo.pop_back();
    for (int h : {Q.us, Q.ut})
      if (sub.insert(Q.M.mul(g, h)).second) todo.push_back(Q.M.mul(g, h));
  }
  c.add("relators of V_{r_st} hold for u_s, u_t in the rank-2 model; the image has 8 elements",
        bad == 0 && sub.size() == 8, {{"relators", rel.size()}, {"failing", bad}, {"image", sub.size()}});
  c.assume(std::string("V_{R,s} -> G_st injective: factors through G_0 and the Kac-Moody group; ") + kWP +
           "G_st or G_0 (finite evidence: the reduce/trace suite on U_sr *_{U_s} V *_{U_t} U_trt)");
  return c;
}

/// For R = R_st(r): V_R, V_{R,s} -> G_-1 injective, D_R = G_-1 *_{V_{R,s}} O_{R,s}, G_0 = star of the D_T.
inline Certificate cert_G0_star(const Residue& R, char s_letter) {
  using namespace steps;
  auto VR = build_construction(Kind::V_R, R, s_letter), OR = build_construction(Kind::O_R, R, s_letter);
  auto VRs = build_construction(Kind::V_Rs, R, s_letter), ORs = build_construction(Kind::O_Rs, R, s_letter);
  char s = VR.s, t = VR.t, r = VR.r;
  std::string w = VR.tag.w.word();
  Labeling lab{r, s, t};
  Certificate c;
  c.lemma = "G_0 = star of D_T over G_-1";
  c.residue = R.str() + " s=" + s;
  auto Gm1 = build_colimit("G_-1", lab), G0 = build_colimit("G_0", lab);
  auto nm1 = Gm1.node(), n0 = G0.node();
  words_in(c, {w + s + r + s, w + t + r}, Gm1.C, "C_-1");
  hom_check(c, "x_a -> x_a: V_R -> G_-1", *seq(VR), *nm1);
  hom_check(c, "x_a -> x_a: V_{R,s} -> G_-1", *seq(VRs), *nm1);
  std::string J{r, s};
  std::sort(J.begin(), J.end());
  Residue T(J, CoxElt());
  auto OTr = build_construction(Kind::O_Rs, T, r);
  std::vector<int> at;
  for (auto& v : VRs.specs) at.push_back(vertex_with_roots(OTr.tree, v.roots()));
  bool sub = std::find(at.begin(), at.end(), -1) == at.end() && OTr.tree.connected(at);
  c.add("V_{R,s} is the subtree of O_{T,r} on its own vertex groups, T = " + T.str(), sub, {{"vertices", at}});
  TreeProduct PVR(VR.tree, "V_R"), PVRs(VRs.tree, "V_{R,s}"), POT(OTr.tree, "O_{T,r}");
  injective_spot(c, "V_R -> V_{R,s} injective on the root-letter ball", PVR, PVRs);
  injective_spot(c, "V_{R,s} -> O_{T,r} injective on the root-letter ball", PVRs, POT, 4);
  c.assume(std::string("O_{T,r} -> G_-1 injective: vertex group of G_-1 = G_rs *_{V_{T,r}} O_{T,r}; ") + kWP + "G_-1");
  iso_chain(c, "G_-1 *_{V_R} O_R = G_-1 *_{V_{R,s}} O_{R,s}",
            {path("G_-1 *_{V_R} O_R", {nm1, seq(OR)}, {seq(VR)}),
             path("G_-1 *_{V_{R,s}} V_{R,s} *_{V_R} O_R", {nm1, seq(VRs), seq(OR)}, {seq(VRs), seq(VR)}),
             path("G_-1 *_{V_{R,s}} (V_{R,s} *_{V_R} O_R)",
                  {nm1, path("V_{R,s} *_{V_R} O_R", {seq(VRs), seq(OR)}, {seq(VR)})}, {seq(VRs)}),
             path("G_-1 *_{V_{R,s}} O_{R,s}", {nm1, seq(ORs)}, {seq(VRs)})});

  // the star over all of R_1
  auto star = std::make_shared<Node>();
  star->name = "star of D_T over G_-1";
  star->tree = true;
  star->parts.push_back(nm1);
  std::set<Root> fresh_all;
  bool disjoint = true, maximal_in_C0 = true;
  std::vector<std::string> names;
  for (auto& T1 : residues_R(1)) {
    auto OT = build_construction(Kind::O_R, T1), VT = build_construction(Kind::V_R, T1);
    names.push_back(T1.str());
    for (auto& v : OT.specs)
      for (auto& m : v.maximal_words())
        if (std::find(G0.C.begin(), G0.C.end(), m) == G0.C.end()) maximal_in_C0 = false;
    star->parts.push_back(seq(OT));
    star->edges.push_back({0, static_cast<int>(star->parts.size()) - 1, seq(VT)});
    for (auto& a : OT.roots())
      if (!Gm1.generators.count(a) && !fresh_all.insert(a).second) disjoint = false;
  }
  c.add("maximal words of every O_T, T in R_1, lie in C_0", maximal_in_C0, {{"T", names}});
  c.add("new generators of distinct D_T are distinct", disjoint, {{"new", fresh_all.size()}});
  std::set<Root> uni = Gm1.generators;
  uni.insert(fresh_all.begin(), fresh_all.end());
  c.add("generators of the star biject with those of G_0 (15)", uni == G0.generators, {{"count", uni.size()}});
  iso_chain(c, "star of D_T over G_-1 = G_0", {star, n0});
  return c;
}

/// For R = R_J(1), s in J: K_{R,s} -> D_T injective and K_{R,s} cap G_-1 = O_R, T = R_rt(s).
inline Certificate cert_K_cap_G(const Residue& R, char s_letter) {
  using namespace steps;
  auto OR = build_construction(Kind::O_R, R, s_letter), ORs = build_construction(Kind::O_Rs, R, s_letter),
       Ks = build_construction(Kind::K_Rs, R, s_letter);
  char s = OR.s, t = OR.t, r = OR.r;
  Certificate c;
  c.lemma = "K_{R,s} cap G_-1 = O_R";
  c.residue = R.str() + " s=" + s;
  std::string J{r, t};
  std::sort(J.begin(), J.end());
  Residue T(J, CoxElt(std::string{s}));
  auto OT = build_construction(Kind::O_R, T), VT = build_construction(Kind::V_R, T);
  std::string sv{s};
  // X = U_{s r_rt} ^* V_{st r_rs}, a subtree of O_T
  std::vector<VertexSpec> Xs{VertexSpec::U(sv + L(r, t)), VertexSpec::V(sv + t, r, s)};
  std::vector<int> xi;
  for (auto& v : Xs) xi.push_back(vertex_with_roots(OT.tree, v.roots()));
  bool xsub = std::find(xi.begin(), xi.end(), -1) == xi.end() && OT.tree.connected(xi);
  c.add("X is a subtree of O_T, T = " + T.str(), xsub, {{"vertices", xi}});
  TreeProduct PO(OR.tree, "O_R"), PORs(ORs.tree, "O_{R,s}");
  injective_spot(c, "O_R -> O_{R,s} injective on the root-letter ball", PO, PORs, 4);
  c.assume(std::string("O_{R,s} -> G_-1 injective (vertex group of G_-1 = G_st *_{V_{R,s}} O_{R,s}); ") + kWP + "G_-1");
  auto fV = place(VT.specs, OT.tree);
  if (c.add("vertex groups of V_T lie in the vertex groups of O_T", fV.has_value() && xsub)) {
    tree_conditions(c, "subtree conditions for V_T in O_T", OT.tree, *fV);
    auto PV = family_product(OT.tree, *fV, "O_T/V_T");
    Family fY{xi, {}};
    for (int v : xi) fY.H.push_back(fV->H[std::find(fV->vertices.begin(), fV->vertices.end(), v) - fV->vertices.begin()]);
    auto PY = family_product(OT.tree, fY, "O_T/Y");
    auto res = ball_intersection(
        *PV, syllable_letters(*PV, xi), [&](const Elem& x) { return PV->in_preferred(x); },
        [&](const Elem& x) { return PY->in_preferred(PY->evaluate(PV->to_word(x))); }, 4);
    c.add("X cap V_T = " + Vn(sv, r, t) + " ^* " + Un(sv + t + s) + " in O_T, syllable length <= 4", res.pass(),
          res.to_json());
  }
  // O_R cap V_T = Y in O_{R,s}
  auto fV2 = place(VT.specs, ORs.tree);
  if (c.add("vertex groups of V_T lie in the first three vertex groups of O_{R,s}", fV2.has_value())) {
    tree_conditions(c, "subtree conditions for V_T in O_{R,s}", ORs.tree, *fV2);
    Family fY2{{1, 2}, {V_(sv, r, t), U_(sv + t + s)}};
    auto PV = family_product(ORs.tree, *fV2, "O_{R,s}/V_T");
    auto PY = family_product(ORs.tree, fY2, "O_{R,s}/Y");
    auto res = ball_intersection(
        *PV, syllable_letters(*PV, {1, 2, 3}), [&](const Elem& x) { return PV->in_preferred(x); },
        [&](const Elem& x) { return PY->in_preferred(PY->evaluate(PV->to_word(x))); }, 4);
    c.add("O_R cap V_T = " + Vn(sv, r, t) + " ^* " + Un(sv + t + s) + " in O_{R,s}, syllable length <= 4", res.pass(),
          res.to_json());
  }
  auto nX = path("X", {U(sv + L(r, t)), V(sv + t, r, s)});
  auto nY = path("Y", {V(sv, r, t), U(sv + t + s)});
  iso_chain(c, "X *_Y O_R = K_{R,s}",
            {path("X *_Y O_R", {nX, seq(OR)}, {nY}),
             path("X *_Y (Y *_U U ^* V)", {nX, path("Y * U * V", {nY, U(L(s, t)), V(std::string{t}, r, s)}, {U(sv + t + s)})},
                  {nY}),
             seq(Ks)});
  c.assume(std::string("X *_Y O_R -> D_T = O_T *_{V_T} G_-1 injective: criterion over a colimit vertex; ") + kWP +
           "G_-1");
  c.assume(std::string("K_{R,s} cap G_-1 = O_R in D_T; ") + kWP + "G_-1");
  return c;
}

/// For R = R_st(1): the canonical H_R -> G_0 exists and is injective.
inline Certificate cert_main(const Residue& R) {
  using namespace steps;
  auto tag = classify(R);
  char s = tag.s, t = tag.t, r = tag.r;
  Certificate c;
  c.lemma = "H_R -> G_0 injective";
  c.residue = R.str();
  auto G0 = build_colimit("G_0", {r, s, t});
  auto n0 = G0.node();
  words_in(c, {s + L(r, t), L(s, t), t + L(r, s)}, G0.C, "C_0");
  auto HR = build_construction(Kind::H_R, R, s), Ks = build_construction(Kind::K_Rs, R, s),
       Kt = build_construction(Kind::K_Rs, R, t), OR = build_construction(Kind::O_R, R, s);
  hom_check(c, "x_a -> x_a: H_R -> G_0", *seq(HR), *n0);
  auto KK = path("K_{R,s} *_{O_R} K_{R,t}", {seq(Ks), seq(Kt)}, {seq(OR)});
  iso_chain(c, "H_R = K_{R,s} *_{O_R} K_{R,t}", {seq(HR), KK});
  hom_check(c, "x_a -> x_a: K_{R,s} *_{O_R} K_{R,t} -> G_0", *KK, *n0);
  c.assume(std::string("D_{R_rt(s)} *_{G_-1} D_{R_rs(t)} -> G_0 injective: subtree of the star of D_T; ") + kWP +
           "G_0");
  c.assume(std::string("K_{R,s} -> D_{R_rt(s)}, K_{R,t} -> D_{R_rs(t)} injective with intersections O_R (colimit "
                       "steps of the K_{R,s} cap G_-1 certificate); ") + kWP + "G_-1");
  c.assume(std::string("criterion for K_{R,s} *_{O_R} K_{R,t} -> D *_{G_-1} D with a colimit vertex; ") + kWP + "G_-1");
  return c;
}

/// For R = R_st(r), T = R_rt(rs), T' = R_rs(rt): V_T, V_T' -> G_0 and H_R -> (G_0 *_{V_T} O_T) *_{G_0} (G_0 *_{V_T'} O_T').
inline Certificate cert_corollary(const Residue& R) {
  using namespace steps;
  auto tag = classify(R);
  char s = tag.s, t = tag.t, r = tag.r;
  std::string w = tag.w.word();
  Certificate c;
  c.lemma = "H_R -> amalgam over G_0 injective";
  c.residue = R.str();
  auto G0 = build_colimit("G_0", {r, s, t});
  auto n0 = G0.node();
  auto sorted = [](std::string j) {
    std::sort(j.begin(), j.end());
    return j;
  };
  Residue T(sorted({r, t}), CoxElt(w + s)), Tp(sorted({r, s}), CoxElt(w + t));
  std::vector<Root> fresh{root_from(w + s + r, t), root_from(w + s + t, r), root_from(w + t + r, s),
                          root_from(w + t + s, r)};
  std::set<Root> fs(fresh.begin(), fresh.end());
  bool above = true;
  for (auto& b : fresh)
    for (auto& x : G0.C) above = above && member(x, b);
  c.add("the four new generators are distinct", fs.size() == 4);
  c.add("C_0 lies in each of the four new roots", above);
  for (auto& TT : {T, Tp}) {
    auto VT = build_construction(Kind::V_R, TT);
    hom_check(c, "x_a -> x_a: V_T -> G_0, T = " + TT.str(), *seq(VT), *n0);
    // V_T inside H_Z with Z = R_{type}(1)
    char x = TT.J[0] == r ? TT.J[1] : TT.J[0];  // T = R_{r x}(w y)
    char y = x == s ? t : s;
    Residue Z(sorted({r, y}), CoxElt());
    auto HZ = build_construction(Kind::H_R, Z, y);
    TreeProduct PV(VT.tree, "V_T"), PH(HZ.tree, "H_Z");
    injective_spot(c, "V_T -> H_Z injective on the root-letter ball, Z = " + Z.str(), PV, PH, 4);
  }
  c.assume(std::string("H_Z -> G_0 injective (H_R -> G_0 certificate), so V_T -> G_0 is injective; ") + kWP + "G_0");
  c.assume(std::string("V_T -> O_{R,s} -> G_0 injective and O_{R,s} *_{V_T} O_T -> G_0 *_{V_T} O_T injective; ") + kWP +
           "G_0");
  c.assume(std::string("(O_{R,s} *_{V_T} O_T) cap G_0 = O_{R,s} and the final criterion over G_0; ") + kWP + "G_0");
  return c;
}

// ---------------------------------------------------------------- pipeline

/// residues used: R_J(1) for the three types, and the three residues of R_1
inline std::vector<Residue> pipeline_residues() {
  std::vector<Residue> out = residues_R(0);
  for (auto& R : residues_R(1)) out.push_back(R);
  return out;
}

/// Certificates for every lemma whose class contains R.
inline std::vector<Certificate> section4_pipeline(const Residue& R, bool parallel = true) {
  auto tag = classify(R);
  if (!tag.in_T1) {
    Certificate c;
    c.lemma = "residue class";
    c.residue = R.str();
    c.add("R lies in T_{i,1}", false, tag.to_json());
    return {c};
  }
  std::string w = tag.w.word();
  std::vector<std::function<Certificate()>> jobs;
  jobs.push_back([R] { return cert_VR_OR(R); });
  for (char x : {tag.s, tag.t}) {
    char y = x == tag.s ? tag.t : tag.s;
    if (len(w + x + tag.r + x) == w.size() + 3) {
      jobs.push_back([R, x] { return cert_VRs_ORs(R, x); });
      jobs.push_back([R, x] { return cert_K_cap_O(R, x); });
    }
    jobs.push_back([R, y] { return cert_VT_HR(R, y); });
  }
  jobs.push_back([R] { return cert_HR_KK(R); });
  for (Kind k : {Kind::V_R, Kind::O_R, Kind::H_R}) jobs.push_back([R, k] { return generating_set_check(build_construction(k, R)); });
  for (char x : {tag.s, tag.t}) {
    if (len(w + x + tag.r + x) == w.size() + 3)
      for (Kind k : {Kind::V_Rs, Kind::O_Rs})
        jobs.push_back([R, k, x] { return generating_set_check(build_construction(k, R, x)); });
    jobs.push_back([R, x] { return generating_set_check(build_construction(Kind::K_Rs, R, x)); });
  }
  if (tag.i == 0) {
    for (char x : {tag.s, tag.t}) {
      jobs.push_back([R, x] { return cert_G_minus1(R, x); });
      jobs.push_back([R, x] { return cert_K_cap_G(R, x); });
    }
    jobs.push_back([R] { return cert_main(R); });
  }
  if (tag.i == 1 && tag.w.word() == std::string{tag.r}) {
    for (char x : {tag.s, tag.t}) jobs.push_back([R, x] { return cert_G0_star(R, x); });
    jobs.push_back([R] { return cert_corollary(R); });
  }
  std::vector<Certificate> out;
  if (parallel) {
    std::vector<std::future<Certificate>> fs;
    for (auto& j : jobs) fs.push_back(std::async(std::launch::async, j));
    for (auto& f : fs) out.push_back(f.get());
  } else {
    for (auto& j : jobs) out.push_back(j());
  }
  return out;
}

/// every assumption text across the certificates, once
inline std::vector<std::string> assumptions_of(const std::vector<Certificate>& cs) {
  std::vector<std::string> out;
  for (auto& c : cs)
    for (auto& a : c.assumptions)
      if (std::find(out.begin(), out.end(), a) == out.end()) out.push_back(a);
  return out;
}

}  // namespace kmtree
