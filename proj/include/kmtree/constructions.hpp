#pragma once
// The named sequences of root groups over rank-2 residues, and their residue classes.

#include <mutex>

#include "kmtree/bass_serre.hpp"

namespace kmtree {

struct PreconditionError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

inline std::string word_or_one(const std::string& w) { return w.empty() ? "1" : w; }

/** \brief w_R, the class index i and the T_{i,1} flag of a rank-2 residue. */
struct ResidueClassTag {
  std::string residue;
  CoxElt w;
  int i = 0;
  char r = 0, s = 0, t = 0;  // type {s, t}, third letter r
  bool in_T1 = false;

  json to_json() const {
    return {{"residue", residue}, {"w_R", w.str()}, {"i", i}, {"type", std::string{s, t}}, {"in_T_i1", in_T1}};
  }
};

inline ResidueClassTag classify(const Residue& R) {
  if (R.J.size() != 2) throw std::invalid_argument("rank-2 residue expected: " + R.str());
  ResidueClassTag tag;
  tag.residue = R.str();
  tag.w = gate(R);
  tag.i = static_cast<int>(tag.w.length());
  tag.s = R.J[0];
  tag.t = R.J[1];
  tag.r = static_cast<char>('r' + 's' + 't' - tag.s - tag.t);
  auto& w = tag.w.word();
  tag.in_T1 = len(w + tag.s + tag.r) == w.size() + 2 && len(w + tag.t + tag.r) == w.size() + 2;
  return tag;
}

/// residues of R_i: the gate has length i and both type letters ascend
inline std::vector<Residue> residues_R(int i) {
  std::vector<Residue> out;
  for (auto& w : ball(i))
    if (static_cast<int>(w.length()) == i)
      for (std::string J : {"rs", "rt", "st"})
        if ((w * J[0]).length() == w.length() + 1 && (w * J[1]).length() == w.length() + 1) out.push_back(Residue(J, w));
  return out;
}

// ---------------------------------------------------------------- vertex groups

/// U_w with all of Phi(w) as root labels, cached
inline FinitePtr U_group(const CoxElt& w) {
  static std::mutex mu;
  static std::map<std::string, FinitePtr> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[w.word()];
  if (!slot) slot = FiniteGroup::from_blueprint(*km_group(w), "U_" + word_or_one(w.word()));
  return slot;
}

/// V_{w r_{xy}} = <U_{wx}, U_{wy}>, inside U_{w r_{xy}}
inline FinitePtr V_group(const CoxElt& w, char x, char y) {
  if (x > y) std::swap(x, y);
  if ((w * x).length() != w.length() + 1 || (w * y).length() != w.length() + 1)
    throw PreconditionError("V_" + w.str() + "r_" + x + y + " needs l(w" + x + ") = l(w" + y + ") = l(w)+1");
  static std::mutex mu;
  static std::map<std::string, FinitePtr> cache;
  std::string key = w.word() + "|" + x + y;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[key];
  if (!slot) {
    auto roots = V_roots(w, x, y);
    auto amb = km_group(w * CoxElt(longest(x, y)));
    slot = FiniteGroup::from_subgroup(root_subgroup(amb, roots), roots,
                                      "V_" + w.word() + "r_" + std::string{x, y});
  }
  return slot;
}

/** \brief A vertex of a construction: U_w, or V_{w r_{xy}}. */
struct VertexSpec {
  bool is_V = false;
  CoxElt w;
  char x = 0, y = 0;

  static VertexSpec U(const std::string& w) { return {false, CoxElt(w), 0, 0}; }
  static VertexSpec V(const std::string& w, char x, char y) { return {true, CoxElt(w), x, y}; }
  FinitePtr group() const { return is_V ? V_group(w, x, y) : U_group(w); }
  /// the elements v with Phi(v) among the generators
  std::vector<CoxElt> maximal_words() const {
    if (is_V) return {w * x, w * y};
    return {w};
  }
  std::vector<Root> roots() const { return is_V ? V_roots(w, x, y) : inversion_set(w); }
};

enum class Kind { V_R, O_R, V_Rs, O_Rs, H_R, K_Rs };

inline std::string kind_name(Kind k) {
  switch (k) {
    case Kind::V_R: return "V_R";
    case Kind::O_R: return "O_R";
    case Kind::V_Rs: return "V_{R,s}";
    case Kind::O_Rs: return "O_{R,s}";
    case Kind::H_R: return "H_R";
    case Kind::K_Rs: return "K_{R,s}";
  }
  return "?";
}

inline Kind parse_kind(std::string_view k) {
  for (Kind x : {Kind::V_R, Kind::O_R, Kind::V_Rs, Kind::O_Rs, Kind::H_R, Kind::K_Rs})
    if (kind_name(x) == k) return x;
  if (k == "V_Rs") return Kind::V_Rs;
  if (k == "O_Rs") return Kind::O_Rs;
  if (k == "K_Rs") return Kind::K_Rs;
  throw std::invalid_argument("unknown construction " + std::string(k));
}

/** \brief A named sequence of vertex groups joined by hat edges. */
struct Construction {
  Kind kind;
  ResidueClassTag tag;
  char r, s, t;  // s is the distinguished letter of the ",s" variants
  std::vector<VertexSpec> specs;
  TreeOfGroups tree;

  std::string name() const {
    std::string n = kind_name(kind);
    if (kind == Kind::V_Rs || kind == Kind::O_Rs || kind == Kind::K_Rs) n.replace(n.find(",s"), 2, std::string(",") + s);
    return n + " @ " + tag.residue;
  }
  std::vector<int> vertex_orders() const {
    std::vector<int> o;
    for (auto& g : tree.groups) o.push_back(std::static_pointer_cast<const FiniteGroup>(g)->size());
    return o;
  }
  std::vector<int> edge_orders() const {
    std::vector<int> o;
    for (std::size_t e = 0; e < tree.edges.size(); e += 2) o.push_back(tree.edges[e].group->size());
    return o;
  }
  std::set<Root> roots() const {
    std::set<Root> out;
    for (auto& v : specs)
      for (auto& a : v.roots()) out.insert(a);
    return out;
  }
  json to_json() const {
    return {{"construction", name()},
            {"class", tag.to_json()},
            {"vertices", tree.names},
            {"vertex_orders", vertex_orders()},
            {"edge_orders", edge_orders()}};
  }
};

inline TreeOfGroups tree_of(const std::vector<VertexSpec>& specs) {
  std::vector<std::pair<std::string, GroupPtr>> vs;
  for (auto& v : specs) {
    auto g = v.group();
    vs.push_back({g->name(), g});
  }
  return hat_sequence(vs);
}

/// The vertex sequence of a construction at R; s_letter picks the distinguished letter (default: R's first).
inline std::vector<VertexSpec> construction_specs(Kind kind, const ResidueClassTag& tag, char s, char t, char r) {
  std::string w = tag.w.word();
  auto L = [](char a, char b) { return longest(a, b); };
  using VS = VertexSpec;
  switch (kind) {
    case Kind::V_R:
      return {VS::U(w + s + r), VS::V(w, s, t), VS::U(w + t + r)};
    case Kind::O_R:
      return {VS::V(w + s, r, t), VS::U(w + L(s, t)), VS::V(w + t, r, s)};
    case Kind::V_Rs:
      return {VS::U(w + s + r + s), VS::V(w, s, t), VS::U(w + t + r)};
    case Kind::O_Rs:
      return {VS::U(w + s + r + s), VS::V(w + s, r, t), VS::U(w + L(s, t)), VS::V(w + t, r, s)};
    case Kind::H_R:
      return {VS::U(w + s + L(r, t)), VS::V(w + s + t, r, s), VS::U(w + L(s, t)), VS::V(w + t + s, r, t),
              VS::U(w + t + L(r, s))};
    case Kind::K_Rs:
      return {VS::U(w + s + L(r, t)), VS::V(w + s + t, r, s), VS::U(w + L(s, t)), VS::V(w + t, r, s)};
  }
  return {};
}

/// R must lie in T_{i,1}; the ",s" variants of V and O also need l(w_R s r s) = l(w_R) + 3.
inline Construction build_construction(Kind kind, const Residue& R, char s_letter = 0) {
  auto tag = classify(R);
  char s = tag.s, t = tag.t, r = tag.r;
  if (s_letter) {
    if (s_letter != tag.s && s_letter != tag.t)
      throw PreconditionError(std::string("letter ") + s_letter + " is not in the type of " + R.str());
    if (s_letter == tag.t) std::swap(s, t);
  }
  auto& w = tag.w.word();
  if (!tag.in_T1) {
    std::string which = len(w + s + r) != w.size() + 2 ? std::string{s, r} : std::string{t, r};
    throw PreconditionError(R.str() + " is not in T_{i,1}: l(w_R " + which + ") != l(w_R)+2");
  }
  if ((kind == Kind::V_Rs || kind == Kind::O_Rs) && len(w + s + r + s) != w.size() + 3)
    throw PreconditionError(R.str() + ": l(w_R " + std::string{s, r, s} + ") != l(w_R)+3");
  Construction c{kind, tag, r, s, t, construction_specs(kind, tag, s, t, r), {}};
  c.tree = tree_of(c.specs);
  auto v = validate(c.tree);
  if (!v.ok()) throw std::logic_error(c.name() + ": " + v.issues.front());
  return c;
}

/// every root labels a subtree of vertices, and adjacent vertices share exactly the edge group's roots
inline json root_support_check(const TreeOfGroups& T) {
  std::map<Root, std::vector<int>> support;
  for (std::size_t v = 0; v < T.size(); ++v)
    for (auto& [a, e] : T.groups[v]->roots()) support[a].push_back(static_cast<int>(v));
  long disconnected = 0;
  for (auto& [a, vs] : support)
    if (!T.connected(vs)) ++disconnected;
  long hat_mismatch = 0, not_root_generated = 0;
  for (std::size_t e = 0; e < T.edges.size(); e += 2) {
    auto& E = T.edges[e];
    auto ra = T.groups[E.o]->root_set(), rb = T.groups[E.t]->root_set(), rc = E.group->root_set();
    std::set<Root> common;
    std::set_intersection(ra.begin(), ra.end(), rb.begin(), rb.end(), std::inserter(common, common.end()));
    if (common != rc) ++hat_mismatch;
    std::vector<Elem> gens;
    for (auto& a : rc) gens.push_back(E.group->root_elem(a));
    if (generate_in(*E.group, gens).size() != static_cast<std::size_t>(E.group->size())) ++not_root_generated;
  }
  return {{"roots", support.size()},
          {"disconnected_supports", disconnected},
          {"edges_not_common_roots", hat_mismatch},
          {"edges_not_root_generated", not_root_generated},
          {"pass", disconnected == 0 && hat_mismatch == 0 && not_root_generated == 0}};
}

/// -a subset of b, by a member sweep over ball(radius)
inline bool opposite_contained(const Root& a, const Root& b, int radius = 8) {
  for (auto& x : ball(radius))
    if (!member(x, a) && !member(x, b)) return false;
  return true;
}

/// The root set equals the union of Phi over the maximal words; for V_R also the two containments used.
inline Certificate generating_set_check(const Construction& c, int radius = 8) {
  Certificate cert;
  cert.lemma = "generating set of " + c.name();
  cert.residue = c.tag.residue;
  std::set<Root> want;
  for (auto& v : c.specs)
    for (auto& m : v.maximal_words())
      for (auto& a : inversion_set(m)) want.insert(a);
  TreeProduct P(c.tree, c.name());
  cert.add("generated by {u_a : some maximal word lies outside a}", P.root_set() == want,
           {{"generators", P.root_set().size()}, {"expected", want.size()}});
  cert.add("distinct roots give one generator each", P.roots_consistent());
  cert.add("root supports are subtrees and edges carry the common roots", root_support_check(c.tree)["pass"].get<bool>(),
           root_support_check(c.tree));
  if (c.kind == Kind::V_R) {
    auto& w = c.tag.w.word();
    Root a = root_from(w + c.s, c.r);
    bool c1 = opposite_contained(root_from(w, c.t), a, radius);
    Root b = root_from(w, c.s);
    bool c2 = opposite_contained(root_from(w + c.t, c.r), b, radius);
    cert.add("-w_R a_t inside w_R s a_r (ball sweep)", c1, {{"radius", radius}});
    cert.add("-w_R t a_r inside w_R a_s (ball sweep)", c2, {{"radius", radius}});
    // so u_{w s a_r} is a generator of the first vertex only
    int holders = 0;
    for (auto& g : c.tree.groups) holders += g->has_root(a);
    cert.add("u_{w_R s a_r} generates only in U_{w_R sr}", holders == 1, {{"vertices", holders}});
  }
  return cert;
}

}  // namespace kmtree
