#pragma once
// Trees of groups with finite edge groups and the word problem in their tree products.

#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <random>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include "kmtree/blueprint.hpp"
#include "kmtree/coxeter.hpp"
#include "kmtree/report.hpp"

namespace kmtree {

/// Canonical element encoding: two encodings are equal iff the elements are.
using Elem = std::vector<int>;

struct ElemHash {
  std::size_t operator()(const Elem& e) const {
    std::size_t h = e.size();
    for (int x : e) h = (h * 1000003u) ^ static_cast<std::size_t>(x + 0x9e3779b9);
    return h;
  }
};

struct TreeError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/** \brief Group with canonical encodings, optionally carrying root-group generators u_a. */
class Group {
 public:
  virtual ~Group() = default;
  virtual Elem id() const = 0;
  virtual Elem mul(const Elem& a, const Elem& b) const = 0;
  virtual Elem inv(const Elem& a) const = 0;
  virtual bool finite() const { return false; }
  /// letters generating the group: nontrivial elements of the finite pieces
  virtual std::vector<Elem> letters() const = 0;
  virtual bool valid(const Elem& a) const = 0;

  bool is_identity(const Elem& a) const { return a == id(); }
  const std::string& name() const { return name_; }
  const std::map<Root, Elem>& roots() const { return roots_; }
  bool has_root(const Root& a) const { return roots_.count(a) > 0; }
  const Elem& root_elem(const Root& a) const { return roots_.at(a); }
  std::set<Root> root_set() const {
    std::set<Root> out;
    for (auto& [a, e] : roots_) out.insert(a);
    return out;
  }
  Elem product(const std::vector<Elem>& xs) const {
    Elem out = id();
    for (auto& x : xs) out = mul(out, x);
    return out;
  }

 protected:
  std::string name_;
  std::map<Root, Elem> roots_;
};

using GroupPtr = std::shared_ptr<const Group>;

/// subgroup generated inside any group, by breadth-first closure (elements in discovery order, identity first)
inline std::vector<Elem> generate_in(const Group& G, const std::vector<Elem>& gens, std::size_t cap = 4096) {
  std::vector<Elem> out{G.id()};
  std::unordered_set<Elem, ElemHash> seen{G.id()};
  for (std::size_t i = 0; i < out.size(); ++i)
    for (auto& g : gens) {
      Elem y = G.mul(out[i], g);
      if (seen.insert(y).second) {
        out.push_back(y);
        if (out.size() > cap) throw ResourceError("generated subgroup exceeds " + std::to_string(cap));
      }
    }
  return out;
}

/** \brief Finite group given by its multiplication table; element 0 is the identity. */
class FiniteGroup : public Group {
 public:
  FiniteGroup(std::string name, int n, std::vector<int> table, std::vector<std::string> names = {})
      : n_(n), table_(std::move(table)), names_(std::move(names)) {
    name_ = std::move(name);
    if (n <= 0 || table_.size() != static_cast<std::size_t>(n) * n) throw TreeError(name_ + ": bad table size");
    for (int a = 0; a < n; ++a)
      if (m(0, a) != a || m(a, 0) != a) throw TreeError(name_ + ": element 0 is not the identity");
    inv_.assign(n, -1);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        if (m(a, b) == 0) inv_[a] = b;
    for (int a = 0; a < n; ++a)
      if (inv_[a] < 0) throw TreeError(name_ + ": element without inverse");
    if (names_.empty())
      for (int a = 0; a < n; ++a) names_.push_back(std::to_string(a));
  }

  static std::shared_ptr<FiniteGroup> cyclic(int n, std::string name) {
    std::vector<int> t(static_cast<std::size_t>(n) * n);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) t[a * n + b] = (a + b) % n;
    return std::make_shared<FiniteGroup>(std::move(name), n, std::move(t));
  }

  /// elements given inside an ambient group; closed under multiplication, identity first
  static std::shared_ptr<FiniteGroup> from_elements(const Group& amb, const std::vector<Elem>& els, std::string name) {
    std::unordered_map<Elem, int, ElemHash> idx;
    for (std::size_t i = 0; i < els.size(); ++i) idx[els[i]] = static_cast<int>(i);
    if (els.empty() || els[0] != amb.id()) throw TreeError(name + ": identity must come first");
    int n = static_cast<int>(els.size());
    std::vector<int> t(static_cast<std::size_t>(n) * n);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) {
        auto it = idx.find(amb.mul(els[a], els[b]));
        if (it == idx.end()) throw TreeError(name + ": not closed under multiplication");
        t[a * n + b] = it->second;
      }
    auto G = std::make_shared<FiniteGroup>(std::move(name), n, std::move(t));
    for (auto& [a, e] : amb.roots()) {
      auto it = idx.find(e);
      if (it != idx.end()) G->roots_[a] = {it->second};
    }
    G->ambient_elems_ = els;
    return G;
  }

  /// U_w with all of Phi(w) as root generators
  static std::shared_ptr<FiniteGroup> from_blueprint(const BlueprintGroup& B, std::string name) {
    int n = static_cast<int>(B.order());
    std::vector<int> t(static_cast<std::size_t>(n) * n);
    std::vector<std::string> names;
    for (int a = 0; a < n; ++a) {
      names.push_back(B.element_str(static_cast<Mask>(a)));
      for (int b = 0; b < n; ++b) t[a * n + b] = static_cast<int>(B.mul(static_cast<Mask>(a), static_cast<Mask>(b)));
    }
    auto G = std::make_shared<FiniteGroup>(std::move(name), n, std::move(t), std::move(names));
    for (auto& a : B.roots()) G->roots_[a] = {static_cast<int>(B.gen(a))};
    return G;
  }

  /// subgroup of a blueprint group with the given root generators
  static std::shared_ptr<FiniteGroup> from_subgroup(const Subgroup& S, const std::vector<Root>& gens, std::string name) {
    auto& B = *S.ambient;
    int n = static_cast<int>(S.order());
    std::map<Mask, int> idx;
    for (int i = 0; i < n; ++i) idx[S.elements[i]] = i;
    std::vector<int> t(static_cast<std::size_t>(n) * n);
    std::vector<std::string> names;
    for (int a = 0; a < n; ++a) {
      names.push_back(B.element_str(S.elements[a]));
      for (int b = 0; b < n; ++b) t[a * n + b] = idx.at(B.mul(S.elements[a], S.elements[b]));
    }
    auto G = std::make_shared<FiniteGroup>(std::move(name), n, std::move(t), std::move(names));
    for (auto& a : gens) G->roots_[a] = {idx.at(B.gen(a))};
    return G;
  }

  int size() const { return n_; }
  int m(int a, int b) const { return table_[static_cast<std::size_t>(a) * n_ + b]; }
  int inverse(int a) const { return inv_[a]; }
  const std::string& elem_name(int a) const { return names_[a]; }
  /// when built from elements of another group, the element each index stands for
  const std::vector<Elem>& ambient_elements() const { return ambient_elems_; }

  Elem id() const override { return {0}; }
  Elem mul(const Elem& a, const Elem& b) const override { return {m(a[0], b[0])}; }
  Elem inv(const Elem& a) const override { return {inv_[a[0]]}; }
  bool finite() const override { return true; }
  bool valid(const Elem& a) const override { return a.size() == 1 && a[0] >= 0 && a[0] < n_; }
  std::vector<Elem> letters() const override {
    std::vector<Elem> out;
    for (int a = 1; a < n_; ++a) out.push_back({a});
    return out;
  }
  std::vector<Elem> elements() const {
    std::vector<Elem> out;
    for (int a = 0; a < n_; ++a) out.push_back({a});
    return out;
  }
  bool associative() const {
    for (int a = 0; a < n_; ++a)
      for (int b = 0; b < n_; ++b)
        for (int c = 0; c < n_; ++c)
          if (m(m(a, b), c) != m(a, m(b, c))) return false;
    return true;
  }
  void set_root(const Root& a, int e) { roots_[a] = {e}; }

 private:
  int n_;
  std::vector<int> table_;
  std::vector<int> inv_;
  std::vector<std::string> names_;
  std::vector<Elem> ambient_elems_;
};

using FinitePtr = std::shared_ptr<const FiniteGroup>;

/** \brief Finite tree with vertex groups, finite edge groups and boundary monomorphisms. */
struct TreeOfGroups {
  struct Edge {
    int o, t;
    int inverse;
    FinitePtr group;
    std::vector<Elem> alpha;  // G_e -> G_o, indexed by edge element
    std::vector<Elem> omega;  // G_e -> G_t
  };
  std::vector<std::string> names;
  std::vector<GroupPtr> groups;
  std::vector<Edge> edges;

  int add_vertex(std::string name, GroupPtr g) {
    names.push_back(std::move(name));
    groups.push_back(std::move(g));
    return static_cast<int>(groups.size()) - 1;
  }
  /// adds e and e^{-1}; returns e
  int add_edge(int o, int t, FinitePtr G, std::vector<Elem> alpha, std::vector<Elem> omega) {
    int e = static_cast<int>(edges.size());
    edges.push_back({o, t, e + 1, G, alpha, omega});
    edges.push_back({t, o, e, G, std::move(omega), std::move(alpha)});
    return e;
  }
  std::size_t size() const { return groups.size(); }
  std::vector<int> edges_from(int v) const {
    std::vector<int> out;
    for (std::size_t e = 0; e < edges.size(); ++e)
      if (edges[e].o == v) out.push_back(static_cast<int>(e));
    return out;
  }
  int edge_between(int u, int v) const {
    for (std::size_t e = 0; e < edges.size(); ++e)
      if (edges[e].o == u && edges[e].t == v) return static_cast<int>(e);
    return -1;
  }
  int vertex(const std::string& n) const {
    for (std::size_t i = 0; i < names.size(); ++i)
      if (names[i] == n) return static_cast<int>(i);
    throw TreeError("unknown vertex " + n);
  }
  /// true if the vertex set induces a connected subgraph
  bool connected(const std::vector<int>& vs) const {
    if (vs.empty()) return false;
    std::set<int> in(vs.begin(), vs.end()), seen{vs[0]};
    std::vector<int> todo{vs[0]};
    while (!todo.empty()) {
      int v = todo.back();
      todo.pop_back();
      for (int e : edges_from(v))
        if (in.count(edges[e].t) && seen.insert(edges[e].t).second) todo.push_back(edges[e].t);
    }
    return seen.size() == in.size();
  }
};

struct Validation {
  std::vector<std::string> issues;
  bool ok() const { return issues.empty(); }
  json to_json() const { return {{"pass", ok()}, {"issues", issues}}; }
};

/// tree-ness, involution laws, boundary maps injective homomorphisms
inline Validation validate(const TreeOfGroups& T) {
  Validation v;
  auto bad = [&](std::string s) { v.issues.push_back(std::move(s)); };
  std::size_t n = T.size();
  if (n == 0) bad("empty tree");
  if (T.edges.size() != 2 * (n ? n - 1 : 0)) bad("edge count is not 2(|V|-1)");
  for (std::size_t e = 0; e < T.edges.size(); ++e) {
    auto& E = T.edges[e];
    std::string tag = "edge " + std::to_string(e) + ": ";
    if (E.o < 0 || E.t < 0 || E.o >= static_cast<int>(n) || E.t >= static_cast<int>(n)) {
      bad(tag + "endpoint out of range");
      continue;
    }
    if (E.inverse < 0 || E.inverse >= static_cast<int>(T.edges.size()) || E.inverse == static_cast<int>(e)) {
      bad(tag + "inverse is not a fixed-point-free involution");
      continue;
    }
    auto& I = T.edges[E.inverse];
    if (I.inverse != static_cast<int>(e)) bad(tag + "inverse is not an involution");
    if (E.o != I.t || E.t != I.o) bad(tag + "o(e) != t(e^-1)");
    if (E.group != I.group) bad(tag + "G_e != G_{e^-1}");
    if (E.alpha != I.omega || E.omega != I.alpha) bad(tag + "alpha_{e^-1} != omega_e");
    if (E.o == E.t) bad(tag + "loop");
    auto& C = *E.group;
    for (auto [map, G] : {std::pair{&E.alpha, T.groups[E.o]}, std::pair{&E.omega, T.groups[E.t]}}) {
      if (map->size() != static_cast<std::size_t>(C.size())) {
        bad(tag + "boundary map has wrong size");
        continue;
      }
      bool typed = true;
      for (auto& x : *map) typed = typed && G->valid(x);
      if (!typed) {
        bad(tag + "boundary image outside the vertex group");
        continue;
      }
      bool hom = true;
      for (int a = 0; a < C.size() && hom; ++a)
        for (int b = 0; b < C.size() && hom; ++b) hom = G->mul((*map)[a], (*map)[b]) == (*map)[C.m(a, b)];
      if (!hom) bad(tag + "boundary map is not a homomorphism");
      std::unordered_set<Elem, ElemHash> img(map->begin(), map->end());
      if (img.size() != map->size()) bad(tag + "boundary map has a kernel");
    }
  }
  if (n > 0) {
    std::vector<int> all(n);
    for (std::size_t i = 0; i < n; ++i) all[i] = static_cast<int>(i);
    if (!T.connected(all)) bad("underlying graph is not connected");
  }
  return v;
}

/// Edge group generated by the common root generators, mapped u_a -> u_a (the hat convention).
inline int add_hat_edge(TreeOfGroups& T, int u, int v, std::size_t cap = 4096) {
  auto& A = *T.groups[u];
  auto& B = *T.groups[v];
  std::vector<Root> common;
  for (auto& [a, e] : A.roots())
    if (B.has_root(a)) common.push_back(a);
  bool from_a = A.finite() || !B.finite();
  auto& S = from_a ? A : B;
  auto& O = from_a ? B : A;
  std::vector<Elem> gens;
  for (auto& a : common) gens.push_back(S.root_elem(a));
  // breadth-first, remembering one word per element
  std::vector<Elem> els{S.id()};
  std::vector<Elem> other{O.id()};
  std::unordered_map<Elem, int, ElemHash> idx{{S.id(), 0}};
  for (std::size_t i = 0; i < els.size(); ++i)
    for (std::size_t g = 0; g < gens.size(); ++g) {
      Elem y = S.mul(els[i], gens[g]);
      if (idx.emplace(y, static_cast<int>(els.size())).second) {
        els.push_back(y);
        other.push_back(O.mul(other[i], O.root_elem(common[g])));
        if (els.size() > cap) throw ResourceError("edge group exceeds cap");
      }
    }
  auto C = FiniteGroup::from_elements(S, els, "<" + T.names[u] + "," + T.names[v] + ">");
  auto& al = from_a ? els : other;
  auto& om = from_a ? other : els;
  return T.add_edge(u, v, C, al, om);
}

/// Sequence of groups joined by hat edges.
inline TreeOfGroups hat_sequence(const std::vector<std::pair<std::string, GroupPtr>>& vs) {
  TreeOfGroups T;
  for (auto& [n, g] : vs) T.add_vertex(n, g);
  for (std::size_t i = 1; i < vs.size(); ++i) add_hat_edge(T, static_cast<int>(i) - 1, static_cast<int>(i));
  return T;
}

/// (vertex, element of that vertex group)
using TPWord = std::vector<std::pair<int, Elem>>;

/** \brief Tree product as nested amalgams over finite edge groups, with canonical normal forms.

Vertices are attached in a connected order starting at the root. Coset representatives are the
least encodings in their coset; with a preference family H_v on a prefix of that order, cosets
meeting H are represented inside H, so H-elements have H-supported normal forms. */
class TreeProduct : public Group {
 public:
  using Pred = std::function<bool(const Elem&)>;

  TreeProduct(TreeOfGroups T, std::string name = "G_T", std::vector<int> order = {}, std::vector<Pred> pref = {})
      : T_(std::move(T)), pref_(std::move(pref)) {
    name_ = std::move(name);
    auto val = validate(T_);
    if (!val.ok()) throw TreeError(name_ + ": " + val.issues.front());
    int n = static_cast<int>(T_.size());
    if (order.empty()) {
      // breadth-first from vertex 0
      std::vector<bool> seen(n, false);
      order.push_back(0);
      seen[0] = true;
      for (std::size_t i = 0; i < order.size(); ++i)
        for (int e : T_.edges_from(order[i]))
          if (!seen[T_.edges[e].t]) {
            seen[T_.edges[e].t] = true;
            order.push_back(T_.edges[e].t);
          }
    }
    if (static_cast<int>(order.size()) != n) throw TreeError(name_ + ": attach order must list every vertex once");
    pos_.assign(n, -1);
    for (int j = 0; j < n; ++j) {
      if (order[j] < 0 || order[j] >= n || pos_[order[j]] >= 0) throw TreeError(name_ + ": bad attach order");
      pos_[order[j]] = j;
    }
    pref_.resize(n);
    pref_levels_ = 0;
    while (pref_levels_ < n && pref_[order[pref_levels_]]) ++pref_levels_;
    for (int j = pref_levels_; j < n; ++j)
      if (pref_[order[j]]) throw TreeError(name_ + ": preferences must cover a prefix of the attach order");

    levels_.resize(n);
    levels_[0].v = order[0];
    for (int j = 1; j < n; ++j) {
      auto& L = levels_[j];
      L.v = order[j];
      L.edge = -1;
      for (int e : T_.edges_from(L.v))
        if (pos_[T_.edges[e].t] < j) {
          if (L.edge >= 0) throw TreeError(name_ + ": attach order is not a tree order");
          L.edge = T_.edges[e].inverse;  // parent -> v
        }
      if (L.edge < 0) throw TreeError(name_ + ": attach order is not connected");
      auto& E = T_.edges[L.edge];
      int C = E.group->size();
      for (int c = 0; c < C; ++c) {
        L.a_img.push_back(lift(j - 1, pos_[E.o], E.alpha[c]));
        L.b_img.push_back(E.omega[c]);
      }
      for (int c = 0; c < C; ++c) {
        L.a_index[L.a_img[c]] = c;
        L.b_index[L.b_img[c]] = c;
      }
      if (j < pref_levels_) {
        L.c_pref.resize(C);
        for (int c = 0; c < C; ++c) {
          bool pa = in_pref_at(j - 1, L.a_img[c]);
          bool pb = pref_[L.v](L.b_img[c]);
          L.c_pref[c] = pa;
          if (pa != pb) pref_consistent_ = false;
        }
      }
    }
    top_ = n - 1;
    for (int v = 0; v < n; ++v)
      for (auto& [a, e] : T_.groups[v]->roots()) {
        Elem x = letter(v, e);
        auto [it, fresh] = roots_.emplace(a, x);
        if (!fresh && it->second != x) roots_consistent_ = false;
      }
  }

  const TreeOfGroups& tree() const { return T_; }
  int root_vertex() const { return levels_[0].v; }
  std::vector<int> attach_order() const {
    std::vector<int> o;
    for (auto& L : levels_) o.push_back(L.v);
    return o;
  }
  /// all copies of a root generator define the same element
  bool roots_consistent() const { return roots_consistent_; }
  /// the preference family satisfies alpha^{-1}(H_o) = omega^{-1}(H_t) on every preferred edge
  bool preferences_consistent() const { return pref_consistent_; }
  int preferred_levels() const { return pref_levels_; }

  Elem id() const override { return id_at(top_); }
  Elem mul(const Elem& a, const Elem& b) const override { return mul_at(top_, a, b); }
  Elem inv(const Elem& a) const override { return inv_at(top_, a); }
  bool valid(const Elem& a) const override {
    try {
      return mul(a, id()) == a;
    } catch (...) {
      return false;
    }
  }
  std::vector<Elem> letters() const override {
    std::vector<Elem> out;
    for (std::size_t v = 0; v < T_.size(); ++v)
      for (auto& g : T_.groups[v]->letters()) out.push_back(letter(static_cast<int>(v), g));
    return out;
  }

  /// the element g of G_v as an element of G_T
  Elem letter(int v, const Elem& g) const {
    if (v < 0 || v >= static_cast<int>(T_.size())) throw TreeError("letter: vertex out of range");
    if (!T_.groups[v]->valid(g)) throw TreeError("letter: element not in the vertex group " + T_.names[v]);
    return lift(top_, pos_[v], g);
  }
  Elem evaluate(const TPWord& w) const {
    Elem x = id();
    for (auto& [v, g] : w) x = mul(x, letter(v, g));
    return x;
  }
  /// reduced letters of the normal form, edge part folded into the last letter's side
  TPWord to_word(const Elem& x) const {
    TPWord out;
    word_at(top_, x, out);
    return out;
  }
  /// number of vertex letters in the normal form
  std::size_t syllables(const Elem& x) const { return to_word(x).size(); }

  /// x lies in the product of the first k attached vertices
  bool in_prefix(const Elem& x, int k) const {
    Elem y = x;
    for (int j = top_; j >= k && j >= 1; --j) {
      auto nf = decode(y);
      for (auto& [side, g] : nf.xs)
        if (side != 0) return false;
      Elem a = levels_[j].a_img[nf.c];
      y = nf.xs.empty() ? a : mul_at(j - 1, nf.xs[0].second, a);
    }
    return true;
  }
  /// x lies in the product of the preferred subgroups (needs x in the preferred prefix)
  bool in_preferred(const Elem& x) const {
    if (pref_levels_ == 0) return false;
    if (!in_prefix(x, pref_levels_)) return false;
    Elem y = x;
    for (int j = top_; j >= pref_levels_; --j) {
      auto nf = decode(y);
      Elem a = levels_[j].a_img[nf.c];
      y = nf.xs.empty() ? a : mul_at(j - 1, nf.xs[0].second, a);
    }
    return in_pref_at(pref_levels_ - 1, y);
  }
  /// vertex v's element if x lies in G_v (v the root), else nullopt
  std::optional<Elem> in_root_vertex(const Elem& x) const {
    if (!in_prefix(x, 1)) return std::nullopt;
    Elem y = x;
    for (int j = top_; j >= 1; --j) {
      auto nf = decode(y);
      Elem a = levels_[j].a_img[nf.c];
      y = nf.xs.empty() ? a : mul_at(j - 1, nf.xs[0].second, a);
    }
    return y;
  }

 private:
  struct Level {
    int v = 0;
    int edge = -1;
    std::vector<Elem> a_img, b_img;
    std::map<Elem, int> a_index, b_index;
    std::vector<char> c_pref;
    mutable std::unordered_map<Elem, std::pair<Elem, int>, ElemHash> cache[2];
    std::shared_ptr<std::mutex> mu = std::make_shared<std::mutex>();
  };
  static constexpr std::size_t kCacheCap = 1'000'000;
  struct NF {
    std::vector<std::pair<int, Elem>> xs;  // side 0 = A (earlier vertices), 1 = B (this vertex)
    int c = 0;
  };

  static NF decode(const Elem& e) {
    NF nf;
    std::size_t p = 0;
    int k = e.at(p++);
    for (int i = 0; i < k; ++i) {
      int side = e.at(p++);
      int len = e.at(p++);
      nf.xs.push_back({side, Elem(e.begin() + static_cast<long>(p), e.begin() + static_cast<long>(p + len))});
      p += static_cast<std::size_t>(len);
    }
    nf.c = e.at(p);
    return nf;
  }
  static Elem encode(const NF& nf) {
    Elem e{static_cast<int>(nf.xs.size())};
    for (auto& [side, g] : nf.xs) {
      e.push_back(side);
      e.push_back(static_cast<int>(g.size()));
      e.insert(e.end(), g.begin(), g.end());
    }
    e.push_back(nf.c);
    return e;
  }

  const Group& vgroup(int j) const { return *T_.groups[levels_[j].v]; }

  Elem id_at(int j) const { return j == 0 ? vgroup(0).id() : Elem{0, 0}; }
  Elem side_mul(int j, int side, const Elem& a, const Elem& b) const {
    return side == 0 ? mul_at(j - 1, a, b) : vgroup(j).mul(a, b);
  }
  Elem side_inv(int j, int side, const Elem& a) const { return side == 0 ? inv_at(j - 1, a) : vgroup(j).inv(a); }
  Elem side_id(int j, int side) const { return side == 0 ? id_at(j - 1) : vgroup(j).id(); }
  const Elem& embed(int j, int side, int c) const { return side == 0 ? levels_[j].a_img[c] : levels_[j].b_img[c]; }
  bool side_pref(int j, int side, const Elem& a) const {
    return side == 0 ? in_pref_at(j - 1, a) : pref_[levels_[j].v](a);
  }

  bool in_pref_at(int j, const Elem& x) const {
    if (j == 0) return pref_[levels_[0].v](x);
    auto nf = decode(x);
    for (auto& [side, g] : nf.xs)
      if (!side_pref(j, side, g)) return false;
    return levels_[j].c_pref[nf.c] != 0;
  }

  /// z = rep * embed(c), rep the canonical representative of z C
  std::pair<Elem, int> decompose(int j, int side, const Elem& z) const {
    auto& L = levels_[j];
    auto& ix = side == 0 ? L.a_index : L.b_index;
    if (auto it = ix.find(z); it != ix.end()) return {side_id(j, side), it->second};
    auto& cache = L.cache[side];
    {
      std::lock_guard<std::mutex> lock(*L.mu);
      if (auto it = cache.find(z); it != cache.end()) return it->second;
    }
    auto out = decompose_uncached(j, side, z);
    std::lock_guard<std::mutex> lock(*L.mu);
    if (cache.size() > kCacheCap) cache.clear();
    cache.emplace(z, out);
    return out;
  }
  std::pair<Elem, int> decompose_uncached(int j, int side, const Elem& z) const {
    auto& L = levels_[j];
    int C = static_cast<int>(L.a_img.size());
    bool use_pref = j < pref_levels_;
    std::optional<Elem> best, best_pref;
    int best_c = 0, best_pref_c = 0;
    for (int c = 0; c < C; ++c) {
      Elem cand = side_mul(j, side, z, embed(j, side, c));  // z * e(c); z = cand * e(c)^{-1}
      if (!best || cand < *best) {
        best = cand;
        best_c = c;
      }
      if (use_pref && side_pref(j, side, cand) && (!best_pref || cand < *best_pref)) {
        best_pref = cand;
        best_pref_c = c;
      }
    }
    Elem rep = best_pref ? *best_pref : *best;
    int c = best_pref ? best_pref_c : best_c;
    auto& ix = side == 0 ? L.a_index : L.b_index;
    // z = rep * e(c)^{-1}
    int cinv = ix.at(side_inv(j, side, embed(j, side, c)));
    return {rep, cinv};
  }

  void push_letter(int j, NF& nf, int side, const Elem& g) const {
    Elem y = side_mul(j, side, embed(j, side, nf.c), g);
    Elem z = y;
    if (!nf.xs.empty() && nf.xs.back().first == side) {
      z = side_mul(j, side, nf.xs.back().second, y);
      nf.xs.pop_back();
    }
    auto [rep, c] = decompose(j, side, z);
    if (rep != side_id(j, side)) nf.xs.push_back({side, rep});
    nf.c = c;
  }

  Elem mul_at(int j, const Elem& a, const Elem& b) const {
    if (j == 0) return vgroup(0).mul(a, b);
    NF x = decode(a);
    NF y = decode(b);
    for (auto& [side, g] : y.xs) push_letter(j, x, side, g);
    push_letter(j, x, 1, levels_[j].b_img[y.c]);
    return encode(x);
  }
  Elem inv_at(int j, const Elem& a) const {
    if (j == 0) return vgroup(0).inv(a);
    NF x = decode(a);
    auto& L = levels_[j];
    NF out;
    out.c = L.b_index.at(vgroup(j).inv(L.b_img[x.c]));
    for (auto it = x.xs.rbegin(); it != x.xs.rend(); ++it) push_letter(j, out, it->first, side_inv(j, it->first, it->second));
    return encode(out);
  }
  /// element of the vertex at level i, as an element of level j >= i
  Elem lift(int j, int i, const Elem& g) const {
    if (j == i) {
      if (j == 0) return g;
      NF nf;
      push_letter(j, nf, 1, g);
      return encode(nf);
    }
    Elem a = lift(j - 1, i, g);
    NF nf;
    push_letter(j, nf, 0, a);
    return encode(nf);
  }
  void word_at(int j, const Elem& x, TPWord& out) const {
    auto put = [&](int v, const Elem& g) {
      if (T_.groups[v]->is_identity(g)) return;
      if (!out.empty() && out.back().first == v) {
        out.back().second = T_.groups[v]->mul(out.back().second, g);
        if (T_.groups[v]->is_identity(out.back().second)) out.pop_back();
      } else {
        out.push_back({v, g});
      }
    };
    if (j == 0) {
      put(levels_[0].v, x);
      return;
    }
    auto nf = decode(x);
    for (auto& [side, g] : nf.xs) {
      if (side == 0) {
        TPWord sub;
        word_at(j - 1, g, sub);
        for (auto& [v, h] : sub) put(v, h);
      } else {
        put(levels_[j].v, g);
      }
    }
    put(levels_[j].v, levels_[j].b_img[nf.c]);
  }

  TreeOfGroups T_;
  std::vector<Pred> pref_;
  int pref_levels_ = 0;
  std::vector<int> pos_;
  std::vector<Level> levels_;
  int top_ = 0;
  bool roots_consistent_ = true;
  bool pref_consistent_ = true;
};

using TreeProductPtr = std::shared_ptr<const TreeProduct>;

/// the same tree of groups re-rooted, optionally with a preference family on a prefix
inline std::shared_ptr<TreeProduct> rerooted(const TreeOfGroups& T, std::vector<int> first,
                                             std::vector<TreeProduct::Pred> pref = {}, std::string name = "G_T") {
  // breadth-first from the listed vertices, keeping them first
  std::vector<int> order;
  std::vector<bool> seen(T.size(), false);
  for (int v : first) {
    order.push_back(v);
    seen[v] = true;
  }
  for (std::size_t i = 0; i < order.size(); ++i)
    for (int e : T.edges_from(order[i]))
      if (!seen[T.edges[e].t]) {
        seen[T.edges[e].t] = true;
        order.push_back(T.edges[e].t);
      }
  // listed vertices must themselves be a connected tree order
  std::vector<int> ordered;
  std::vector<bool> put(T.size(), false);
  if (!first.empty()) {
    ordered.push_back(first[0]);
    put[first[0]] = true;
    std::set<int> in(first.begin(), first.end());
    for (std::size_t i = 0; i < ordered.size(); ++i)
      for (int e : T.edges_from(ordered[i])) {
        int t = T.edges[e].t;
        if (in.count(t) && !put[t]) {
          put[t] = true;
          ordered.push_back(t);
        }
      }
    if (ordered.size() != first.size()) throw TreeError("listed vertices do not form a subtree");
    for (std::size_t i = 0; i < ordered.size(); ++i)
      for (int e : T.edges_from(ordered[i])) {
        int t = T.edges[e].t;
        if (!put[t]) {
          put[t] = true;
          ordered.push_back(t);
        }
      }
    order = ordered;
  }
  std::vector<TreeProduct::Pred> p(T.size());
  for (std::size_t i = 0; i < pref.size() && i < first.size(); ++i) p[first[i]] = pref[i];
  // preferences were given in the order of `first`; re-index by vertex
  if (!pref.empty()) {
    std::vector<TreeProduct::Pred> q(T.size());
    for (std::size_t i = 0; i < first.size(); ++i) q[first[i]] = pref[i];
    p = q;
  }
  return std::make_shared<TreeProduct>(T, std::move(name), order, p);
}

/// elements of the ball of the given letter radius, layer by layer
inline std::vector<std::vector<Elem>> ball_layers(const Group& G, const std::vector<Elem>& letters, int n,
                                                  std::size_t cap = 3'000'000) {
  std::vector<std::vector<Elem>> layers{{G.id()}};
  std::unordered_set<Elem, ElemHash> seen{G.id()};
  for (int k = 0; k < n; ++k) {
    std::vector<Elem> next;
    for (auto& x : layers.back())
      for (auto& l : letters) {
        Elem y = G.mul(x, l);
        if (seen.insert(y).second) {
          next.push_back(std::move(y));
          if (seen.size() > cap) throw ResourceError("ball exceeds " + std::to_string(cap) + " elements");
        }
      }
    layers.push_back(std::move(next));
  }
  return layers;
}

inline std::vector<std::size_t> ball_counts(const Group& G, const std::vector<Elem>& letters, int n) {
  std::vector<std::size_t> out;
  for (auto& l : ball_layers(G, letters, n)) out.push_back(l.size());
  return out;
}

inline TPWord random_word(const TreeOfGroups& T, std::mt19937_64& rng, int max_len) {
  TPWord w;
  int n = std::uniform_int_distribution<int>(0, max_len)(rng);
  for (int i = 0; i < n; ++i) {
    int v = std::uniform_int_distribution<int>(0, static_cast<int>(T.size()) - 1)(rng);
    auto ls = T.groups[v]->letters();
    if (ls.empty()) continue;
    w.push_back({v, ls[std::uniform_int_distribution<std::size_t>(0, ls.size() - 1)(rng)]});
  }
  return w;
}

/** \brief Result of a structural move together with its translation maps on words. */
struct Move {
  std::string kind;
  TreeOfGroups tree;
  std::function<TPWord(const TPWord&)> forward;  // old words -> new words
  std::function<TPWord(const TPWord&)> back;     // new words -> old words
  json info = json::object();
};

/// Contract a subtree to one vertex carrying its tree product (placed at the smallest listed index).
inline Move contract(const TreeOfGroups& T, std::vector<int> S, std::string name = "") {
  if (S.empty()) throw TreeError("not-a-subtree: empty vertex set");
  std::set<int> in(S.begin(), S.end());
  for (int v : S)
    if (v < 0 || v >= static_cast<int>(T.size())) throw TreeError("not-a-subtree: vertex out of range");
  if (!T.connected(S)) throw TreeError("not-a-subtree: vertices are not connected");
  std::sort(S.begin(), S.end());
  TreeOfGroups inner;
  std::map<int, int> inner_of;
  for (int v : S) inner_of[v] = inner.add_vertex(T.names[v], T.groups[v]);
  for (std::size_t e = 0; e < T.edges.size(); e += 2) {
    auto& E = T.edges[e];
    if (in.count(E.o) && in.count(E.t)) inner.add_edge(inner_of[E.o], inner_of[E.t], E.group, E.alpha, E.omega);
  }
  if (name.empty()) {
    name = "(";
    for (std::size_t i = 0; i < S.size(); ++i) name += (i ? "*" : "") + T.names[S[i]];
    name += ")";
  }
  auto P = std::make_shared<TreeProduct>(inner, name);
  TreeOfGroups out;
  std::vector<int> new_of(T.size(), -1);
  int star = -1;
  for (std::size_t v = 0; v < T.size(); ++v) {
    if (in.count(static_cast<int>(v))) {
      if (star < 0) star = out.add_vertex(name, P);
      new_of[v] = star;
    } else {
      new_of[v] = out.add_vertex(T.names[v], T.groups[v]);
    }
  }
  auto map_into = [in, inner_of, P](int v, const Elem& g) { return in.count(v) ? P->letter(inner_of.at(v), g) : g; };
  for (std::size_t e = 0; e < T.edges.size(); e += 2) {
    auto& E = T.edges[e];
    if (in.count(E.o) && in.count(E.t)) continue;
    std::vector<Elem> al, om;
    for (auto& x : E.alpha) al.push_back(map_into(E.o, x));
    for (auto& x : E.omega) om.push_back(map_into(E.t, x));
    out.add_edge(new_of[E.o], new_of[E.t], E.group, al, om);
  }
  Move m;
  m.kind = "contract";
  m.tree = out;
  m.forward = [=](const TPWord& w) {
    TPWord r;
    for (auto& [v, g] : w) r.push_back({new_of[v], map_into(v, g)});
    return r;
  };
  std::map<int, int> outer_of;
  for (auto& [v, i] : inner_of) outer_of[i] = v;
  std::vector<int> old_of(out.size(), -1);
  for (std::size_t v = 0; v < T.size(); ++v)
    if (!in.count(static_cast<int>(v))) old_of[new_of[v]] = static_cast<int>(v);
  m.back = [=](const TPWord& w) {
    TPWord r;
    for (auto& [v, g] : w) {
      if (v == star) {
        for (auto& [iv, h] : P->to_word(g)) r.push_back({outer_of.at(iv), h});
      } else {
        r.push_back({old_of[v], g});
      }
    }
    return r;
  };
  m.info = {{"contracted", S.size()}, {"vertex", star}, {"name", name}};
  return m;
}

/// Subdivide e with a new vertex x carrying H, where alpha_e(G_e) <= H <= G_{o(e)}.
inline Move fold(const TreeOfGroups& T, int e, const std::vector<Elem>& H, std::string name = "") {
  if (e < 0 || e >= static_cast<int>(T.edges.size())) throw TreeError("fold: edge out of range");
  auto& E = T.edges[e];
  auto& Go = *T.groups[E.o];
  std::vector<Elem> els{Go.id()};
  std::unordered_set<Elem, ElemHash> hs{Go.id()};
  for (auto& h : H) {
    if (!Go.valid(h)) throw TreeError("fold: H not intermediate (element outside G_o(e))");
    if (hs.insert(h).second) els.push_back(h);
  }
  for (auto& a : els)
    for (auto& b : els)
      if (!hs.count(Go.mul(a, b))) throw TreeError("fold: H not intermediate (not a subgroup)");
  for (auto& x : E.alpha)
    if (!hs.count(x)) throw TreeError("fold: H not intermediate (does not contain the edge group)");
  if (name.empty()) name = T.names[E.o] + "'";
  auto Hx = FiniteGroup::from_elements(Go, els, name);
  TreeOfGroups out;
  for (std::size_t v = 0; v < T.size(); ++v) out.add_vertex(T.names[v], T.groups[v]);
  int x = out.add_vertex(name, Hx);
  std::map<Elem, int> hidx;
  for (std::size_t i = 0; i < els.size(); ++i) hidx[els[i]] = static_cast<int>(i);
  for (std::size_t f = 0; f < T.edges.size(); f += 2) {
    int g = static_cast<int>(f);
    if (g == e || g == E.inverse) continue;
    auto& F = T.edges[f];
    out.add_edge(F.o, F.t, F.group, F.alpha, F.omega);
  }
  std::vector<Elem> id_map, into_h;
  for (int i = 0; i < Hx->size(); ++i) id_map.push_back({i});
  out.add_edge(E.o, x, Hx, els, id_map);
  for (auto& a : E.alpha) into_h.push_back({hidx.at(a)});
  out.add_edge(x, E.t, E.group, into_h, E.omega);
  Move m;
  m.kind = "fold";
  m.tree = out;
  m.forward = [](const TPWord& w) { return w; };
  int o = E.o;
  m.back = [=](const TPWord& w) {
    TPWord r;
    for (auto& [v, g] : w) r.push_back(v == x ? std::pair<int, Elem>{o, els[g[0]]} : std::pair<int, Elem>{v, g});
    return r;
  };
  m.info = {{"edge", e}, {"new_vertex", x}, {"H_order", els.size()}, {"edge_order", E.group->size()}};
  return m;
}

/** \brief Round trips and ball counts certifying that a move is an isomorphism. */
struct MoveCheck {
  long words = 0;
  long round_trip_failures = 0;
  long identity_mismatches = 0;
  std::vector<std::size_t> counts_old, counts_new;
  bool pass() const { return round_trip_failures == 0 && identity_mismatches == 0 && counts_old == counts_new; }
  json to_json() const {
    return {{"words", words},
            {"round_trip_failures", round_trip_failures},
            {"identity_mismatches", identity_mismatches},
            {"ball_counts_old", counts_old},
            {"ball_counts_new", counts_new},
            {"pass", pass()}};
  }
};

inline MoveCheck check_move(const TreeOfGroups& old_tree, const Move& m, long words = 10000, int count_radius = 4,
                            std::uint64_t seed = 1) {
  MoveCheck r;
  TreeProduct A(old_tree, "old"), B(m.tree, "new");
  std::mt19937_64 rng(seed);
  for (long i = 0; i < words; ++i) {
    auto w = random_word(old_tree, rng, 12);
    Elem x = A.evaluate(w);
    Elem y = B.evaluate(m.forward(w));
    ++r.words;
    if (A.evaluate(m.back(B.to_word(y))) != x) ++r.round_trip_failures;
    if (A.is_identity(x) != B.is_identity(y)) ++r.identity_mismatches;
  }
  // same generating letters on both sides
  std::vector<Elem> la, lb;
  for (std::size_t v = 0; v < old_tree.size(); ++v)
    for (auto& g : old_tree.groups[v]->letters()) {
      TPWord w{{static_cast<int>(v), g}};
      la.push_back(A.evaluate(w));
      lb.push_back(B.evaluate(m.forward(w)));
    }
  r.counts_old = ball_counts(A, la, count_radius);
  r.counts_new = ball_counts(B, lb, count_radius);
  return r;
}

/** \brief Batteries on a tree product: idempotence, inverses, homomorphy, Britton property. */
struct BatteryResult {
  long trials = 0;
  long failures = 0;
  std::vector<std::string> first_failures;
  json to_json() const { return {{"trials", trials}, {"failures", failures}, {"first", first_failures}}; }
};

inline BatteryResult nf_battery(const TreeProduct& P, long n = 10000, std::uint64_t seed = 7) {
  BatteryResult r;
  std::mt19937_64 rng(seed);
  auto& T = P.tree();
  auto fail = [&](std::string s) {
    ++r.failures;
    if (r.first_failures.size() < 10) r.first_failures.push_back(std::move(s));
  };
  for (long i = 0; i < n; ++i) {
    auto wa = random_word(T, rng, 10);
    auto wb = random_word(T, rng, 10);
    Elem a = P.evaluate(wa), b = P.evaluate(wb);
    r.trials += 4;
    if (P.evaluate(P.to_word(a)) != a) fail("nf not idempotent");
    if (!P.is_identity(P.mul(a, P.inv(a)))) fail("x x^-1 != 1");
    TPWord wab = wa;
    wab.insert(wab.end(), wb.begin(), wb.end());
    if (P.evaluate(wab) != P.mul(a, b)) fail("nf(ab) != nf(nf(a) nf(b))");
    // a reduced word (alternating through distinct vertices, no letter in an adjacent edge group) is never 1
    auto red = P.to_word(a);
    if (!red.empty() && P.is_identity(P.evaluate(red))) fail("reduced nonempty word is the identity");
  }
  for (std::size_t v = 0; v < T.size(); ++v)
    for (auto& g : T.groups[v]->letters()) {
      ++r.trials;
      if (P.is_identity(P.letter(static_cast<int>(v), g))) fail("vertex group does not embed at " + T.names[v]);
    }
  return r;
}

/** \brief A subgroup family on a subtree, for the injectivity criterion of trees of groups. */
struct SubtreeFamily {
  std::vector<int> vertices;                         // subtree of the ambient tree
  std::vector<TreeProduct::Pred> contains;           // H_v as a predicate on G_v
  std::vector<std::vector<Elem>> generators;         // letters of H_v inside G_v, for spot checks
};

/// H_v generated inside G_v by the given roots (finite G_v)
inline std::pair<TreeProduct::Pred, std::vector<Elem>> root_subgroup_in(const Group& G, const std::vector<Root>& roots,
                                                                        std::size_t cap = 4096) {
  std::vector<Elem> gens;
  for (auto& a : roots) gens.push_back(G.root_elem(a));
  auto els = generate_in(G, gens, cap);
  auto set = std::make_shared<std::unordered_set<Elem, ElemHash>>(els.begin(), els.end());
  std::vector<Elem> letters;
  for (auto& e : els)
    if (!G.is_identity(e)) letters.push_back(e);
  return {[set](const Elem& x) { return set->count(x) > 0; }, letters};
}

struct SubtreeReport {
  bool containment = true, preimages = true, edge_groups = true;
  long spot_checked = 0, spot_failures = 0;
  int spot_radius = 0;
  json edges = json::array();
  std::vector<std::string> issues;
  bool pass() const { return containment && preimages && edge_groups && spot_failures == 0; }
  json to_json() const {
    return {{"pass", pass()},         {"containment", containment}, {"preimages_equal", preimages},
            {"edge_groups", edge_groups}, {"edges", edges},             {"spot_radius", spot_radius},
            {"spot_checked", spot_checked}, {"spot_failures", spot_failures}, {"issues", issues}};
  }
};

/// Conditions (i)-(iii) on every edge of the subtree; H_e is taken to be the common preimage unless given.
inline SubtreeReport check_subtree_conditions(const TreeOfGroups& G, const SubtreeFamily& H,
                                              const std::map<int, std::vector<Elem>>& given_edge_groups = {},
                                              int spot_radius = 3) {
  SubtreeReport rep;
  std::map<int, int> idx;
  for (std::size_t i = 0; i < H.vertices.size(); ++i) idx[H.vertices[i]] = static_cast<int>(i);
  if (!G.connected(H.vertices)) {
    rep.containment = false;
    rep.issues.push_back("vertices do not form a subtree");
    return rep;
  }
  // (i): the generators lie in G_v
  for (std::size_t i = 0; i < H.vertices.size(); ++i)
    for (auto& g : H.generators[i])
      if (!G.groups[H.vertices[i]]->valid(g) || !H.contains[i](g)) {
        rep.containment = false;
        rep.issues.push_back("H_v not inside G_v at " + G.names[H.vertices[i]]);
        break;
      }
  for (std::size_t e = 0; e < G.edges.size(); e += 2) {
    auto& E = G.edges[e];
    if (!idx.count(E.o) || !idx.count(E.t)) continue;
    std::vector<int> po, pt;
    for (int c = 0; c < E.group->size(); ++c) {
      if (H.contains[idx[E.o]](E.alpha[c])) po.push_back(c);
      if (H.contains[idx[E.t]](E.omega[c])) pt.push_back(c);
    }
    bool same = po == pt;
    json j = {{"edge", G.names[E.o] + " - " + G.names[E.t]},
              {"edge_order", E.group->size()},
              {"preimage_o", po.size()},
              {"preimage_t", pt.size()},
              {"equal", same}};
    if (!same) {
      rep.preimages = false;
      rep.issues.push_back("preimages differ on " + G.names[E.o] + " - " + G.names[E.t]);
    }
    auto it = given_edge_groups.find(static_cast<int>(e));
    if (it != given_edge_groups.end()) {
      std::set<int> he;
      for (auto& c : it->second) he.insert(c[0]);
      bool eq = he == std::set<int>(po.begin(), po.end());
      j["H_e_equals_preimage"] = eq;
      if (!eq) {
        rep.edge_groups = false;
        rep.issues.push_back("H_e differs from the preimage on " + G.names[E.o] + " - " + G.names[E.t]);
      }
    }
    rep.edges.push_back(j);
  }
  if (!rep.containment || !rep.preimages || !rep.edge_groups || spot_radius <= 0) return rep;
  // spot check nu(H_T') cap G_v = H_v on the ball of H-letters
  rep.spot_radius = spot_radius;
  for (std::size_t i = 0; i < H.vertices.size(); ++i) {
    int v = H.vertices[i];
    auto P = rerooted(G, {v});
    std::vector<Elem> letters;
    for (std::size_t k = 0; k < H.vertices.size(); ++k)
      for (auto& g : H.generators[k]) letters.push_back(P->letter(H.vertices[k], g));
    std::size_t budget = 200000;
    auto layers = ball_layers(*P, letters, spot_radius, 4 * budget);
    for (auto& layer : layers)
      for (auto& x : layer) {
        ++rep.spot_checked;
        if (auto g = P->in_root_vertex(x); g && !H.contains[i](*g)) ++rep.spot_failures;
      }
  }
  return rep;
}

/// Elements of A (given by letters in the ambient product) of letter length <= n lying in B.
struct IntersectionResult {
  long a_elements = 0;
  long in_b = 0;
  long in_b_not_c = 0;
  long c_not_in_b = 0;
  int radius = 0;
  bool pass() const { return in_b_not_c == 0 && c_not_in_b == 0; }
  json to_json() const {
    return {{"radius", radius}, {"A_elements", a_elements}, {"in_B", in_b},
            {"in_B_not_C", in_b_not_c}, {"C_not_in_B", c_not_in_b}, {"pass", pass()}};
  }
};

/// B and C are membership tests on the ambient product; C is the claimed intersection.
inline IntersectionResult ball_intersection(const Group& G, const std::vector<Elem>& a_letters,
                                            const std::function<bool(const Elem&)>& in_b,
                                            const std::function<bool(const Elem&)>& in_c, int n) {
  IntersectionResult r;
  r.radius = n;
  for (auto& layer : ball_layers(G, a_letters, n))
    for (auto& x : layer) {
      ++r.a_elements;
      bool b = in_b(x), c = in_c(x);
      if (b) ++r.in_b;
      if (b && !c) ++r.in_b_not_c;
      if (c && !b) ++r.c_not_in_b;
    }
  return r;
}

}  // namespace kmtree
