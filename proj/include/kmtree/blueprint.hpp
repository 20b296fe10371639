#pragma once
// Finite 2-groups U_w given by a commutator blueprint, multiplied by collection.

#include <cstdint>
#include <functional>
#include <memory>
#include <sstream>

#include "kmtree/coxeter.hpp"

namespace kmtree {

using Mask = std::uint32_t;

/// M^G_{a,b} for a before b in G, as an ordered subset of the open interval (a, b).
using CommutatorBlueprint = std::function<std::vector<Root>(const Gallery&, const Root&, const Root&)>;

inline CommutatorBlueprint kac_moody_blueprint() {
  return [](const Gallery& G, const Root& a, const Root& b) -> std::vector<Root> {
    auto pc = pair_class(a, b);
    if (pc.kind != PairKind::FiniteOrder) return {};
    auto open = open_interval(a, b, G);
    if (open.size() != 2) return {};
    return open;
  };
}

struct BlueprintError : std::logic_error {
  using std::logic_error::logic_error;
};

namespace detail {

// Multiset {(letter, #letters to the right that are <= letter)}; strictly decreases per rewrite.
inline std::vector<std::pair<int, int>> collection_measure(const std::vector<int>& w) {
  std::vector<std::pair<int, int>> m;
  for (std::size_t i = 0; i < w.size(); ++i) {
    int c = 0;
    for (std::size_t j = i + 1; j < w.size(); ++j)
      if (w[j] <= w[i]) ++c;
    m.emplace_back(w[i], c);
  }
  std::sort(m.begin(), m.end());
  return m;
}

// Dershowitz-Manna: after < before
inline bool multiset_less(const std::vector<std::pair<int, int>>& after,
                          const std::vector<std::pair<int, int>>& before) {
  std::vector<std::pair<int, int>> removed, added;
  std::set_difference(before.begin(), before.end(), after.begin(), after.end(), std::back_inserter(removed));
  std::set_difference(after.begin(), after.end(), before.begin(), before.end(), std::back_inserter(added));
  if (removed.empty()) return false;
  return added.empty() || added.back() < removed.back();
}

}  // namespace detail

/** \brief U_w for one minimal gallery G, elements are exponent bit-vectors over Phi(G). */
class BlueprintGroup {
 public:
  static constexpr int kMaxRank = 16;
  static constexpr std::size_t kTableCap = 256;

  BlueprintGroup(const Gallery& G, const CommutatorBlueprint& M, bool check_measure = true)
      : gallery_(G), roots_(inversion_sequence(G)), check_measure_(check_measure) {
    k_ = static_cast<int>(roots_.size());
    if (k_ > kMaxRank) throw ResourceError("blueprint rank too large");
    comm_.assign(k_, std::vector<std::vector<int>>(k_));
    for (int i = 0; i < k_; ++i)
      for (int j = i + 1; j < k_; ++j) {
        for (auto& g : M(G, roots_[i], roots_[j])) {
          int p = index_of(g);
          if (p <= i || p >= j) throw BlueprintError("commutator letter outside the open interval");
          comm_[i][j].push_back(p);
        }
        std::sort(comm_[i][j].begin(), comm_[i][j].end());
      }
    Mask n = order();
    perm_.assign(k_, std::vector<Mask>(n));
    for (int j = 0; j < k_; ++j)
      for (Mask x = 0; x < n; ++x) perm_[j][x] = collect_mask(x, j);
    verify_relations();
  }

  const Gallery& gallery() const { return gallery_; }
  const std::vector<Root>& roots() const { return roots_; }
  int rank() const { return k_; }
  Mask order() const { return Mask(1) << k_; }
  CoxElt w() const { return gallery_.end(); }
  const std::vector<int>& commutator(int i, int j) const { return comm_[i][j]; }

  int index_of(const Root& a) const {
    for (int i = 0; i < k_; ++i)
      if (roots_[i] == a) return i;
    return -1;
  }
  Mask gen(int i) const { return Mask(1) << i; }
  Mask gen(const Root& a) const {
    int i = index_of(a);
    if (i < 0) throw std::invalid_argument("root not in Phi(w): " + a.str());
    return gen(i);
  }

  Mask times_gen(Mask x, int j) const { return perm_[j][x]; }
  Mask mul(Mask x, Mask y) const {
    if (!table_.empty()) return table_[x * order() + y];
    for (int j = 0; j < k_; ++j)
      if (y >> j & 1) x = perm_[j][x];
    return x;
  }
  Mask inv(Mask x) const {
    Mask out = 0;
    for (int j = k_ - 1; j >= 0; --j)
      if (x >> j & 1) out = perm_[j][out];
    return out;
  }
  Mask product(const std::vector<Mask>& xs) const {
    Mask p = 0;
    for (auto x : xs) p = mul(p, x);
    return p;
  }

  /// full table for order <= kTableCap
  void build_table() {
    if (!table_.empty() || order() > kTableCap) return;
    std::vector<Mask> t(static_cast<std::size_t>(order()) * order());
    for (Mask x = 0; x < order(); ++x)
      for (Mask y = 0; y < order(); ++y) t[x * order() + y] = mul(x, y);
    table_ = std::move(t);
  }
  bool has_table() const { return !table_.empty(); }

  std::string element_str(Mask x) const {
    if (!x) return "1";
    std::string out;
    for (int i = 0; i < k_; ++i)
      if (x >> i & 1) out += (out.empty() ? "" : "*") + std::string("u") + std::to_string(i + 1);
    return out;
  }

  /// "group w=<word> gallery=<type> order=<n>" then n rows of n indices
  std::string export_table() const {
    std::ostringstream os;
    os << "group w=" << w().str() << " gallery=" << gallery_.type << " order=" << order() << '\n';
    for (Mask x = 0; x < order(); ++x) {
      for (Mask y = 0; y < order(); ++y) os << (y ? " " : "") << mul(x, y);
      os << '\n';
    }
    return os.str();
  }

  long swaps_performed() const { return swaps_; }

 private:
  // sorted word of x followed by letter j, collected to a sorted word
  Mask collect_mask(Mask x, int j) {
    std::vector<int> w;
    for (int i = 0; i < k_; ++i)
      if (x >> i & 1) w.push_back(i);
    w.push_back(j);
    auto meas = check_measure_ ? detail::collection_measure(w) : std::vector<std::pair<int, int>>{};
    for (;;) {
      std::size_t i = 0;
      while (i + 1 < w.size() && w[i] < w[i + 1]) ++i;
      if (i + 1 >= w.size()) break;
      int a = w[i], b = w[i + 1];
      if (a == b) {
        w.erase(w.begin() + static_cast<long>(i), w.begin() + static_cast<long>(i) + 2);
      } else {
        // u_a u_b = u_b P u_a where [u_b, u_a] = P, b < a
        std::vector<int> rep{b};
        rep.insert(rep.end(), comm_[b][a].begin(), comm_[b][a].end());
        rep.push_back(a);
        w.erase(w.begin() + static_cast<long>(i), w.begin() + static_cast<long>(i) + 2);
        w.insert(w.begin() + static_cast<long>(i), rep.begin(), rep.end());
      }
      ++swaps_;
      if (check_measure_) {
        auto next = detail::collection_measure(w);
        if (!detail::multiset_less(next, meas)) throw BlueprintError("collection measure did not decrease");
        meas = std::move(next);
      }
    }
    Mask out = 0;
    for (int i : w) out |= Mask(1) << i;
    return out;
  }

  // u_i^2 = 1 and [u_i, u_j] = prod M; the permutation group is then the presented group.
  void verify_relations() const {
    Mask n = order();
    for (Mask x = 0; x < n; ++x)
      for (int i = 0; i < k_; ++i) {
        if (perm_[i][perm_[i][x]] != x) throw BlueprintError("generator is not an involution");
        for (int j = i + 1; j < k_; ++j) {
          Mask lhs = perm_[j][perm_[i][perm_[j][perm_[i][x]]]];
          Mask rhs = x;
          for (int p : comm_[i][j]) rhs = perm_[p][rhs];
          if (lhs != rhs) throw BlueprintError("commutator relation fails: collection not confluent");
        }
      }
  }

  Gallery gallery_;
  std::vector<Root> roots_;
  int k_ = 0;
  bool check_measure_;
  long swaps_ = 0;
  std::vector<std::vector<std::vector<int>>> comm_;
  std::vector<std::vector<Mask>> perm_;
  std::vector<Mask> table_;
};

/// Shared Kac-Moody blueprint groups keyed by gallery type.
inline std::shared_ptr<const BlueprintGroup> km_group(const std::string& gallery_type) {
  static std::mutex mu;
  static std::map<std::string, std::shared_ptr<const BlueprintGroup>> cache;
  {
    std::lock_guard lk(mu);
    auto it = cache.find(gallery_type);
    if (it != cache.end()) return it->second;
  }
  auto g = std::make_shared<BlueprintGroup>(Gallery(gallery_type), kac_moody_blueprint());
  g->build_table();
  std::lock_guard lk(mu);
  return cache.emplace(gallery_type, std::move(g)).first->second;
}

inline std::shared_ptr<const BlueprintGroup> km_group(const CoxElt& w) { return km_group(w.word()); }

struct IndependenceResult {
  bool ok = true;
  std::string gallery_a, gallery_b;  // first conflict
  int pairs_checked = 0;
};

/// The relations of every gallery of Min(w) hold in the collection group of every other.
inline IndependenceResult gallery_independence(const CoxElt& w, const CommutatorBlueprint& M) {
  IndependenceResult res;
  auto words = reduced_words(w);
  std::vector<BlueprintGroup> groups;
  for (auto& ty : words) groups.emplace_back(Gallery(ty), M, false);
  for (std::size_t a = 0; a < groups.size(); ++a)
    for (std::size_t b = 0; b < groups.size(); ++b) {
      if (a == b) continue;
      auto& G = groups[a];
      auto& H = groups[b];
      for (int i = 0; i < G.rank(); ++i)
        for (int j = i + 1; j < G.rank(); ++j) {
          ++res.pairs_checked;
          Mask ui = H.gen(G.roots()[i]), uj = H.gen(G.roots()[j]);
          Mask lhs = H.product({ui, uj, ui, uj});
          Mask rhs = 0;
          for (int p : G.commutator(i, j)) rhs = H.mul(rhs, H.gen(G.roots()[p]));
          if (lhs != rhs) {
            res.ok = false;
            res.gallery_a = G.gallery().type;
            res.gallery_b = H.gallery().type;
            return res;
          }
        }
    }
  return res;
}

/** \brief Subgroup of a blueprint group, kept as a sorted element list plus generators. */
struct Subgroup {
  std::shared_ptr<const BlueprintGroup> ambient;
  std::vector<Mask> elements;
  std::vector<Mask> gens;

  std::size_t order() const { return elements.size(); }
  bool contains(Mask x) const { return std::binary_search(elements.begin(), elements.end(), x); }
  friend bool operator==(const Subgroup& a, const Subgroup& b) { return a.elements == b.elements; }
};

inline Subgroup generate(std::shared_ptr<const BlueprintGroup> amb, const std::vector<Mask>& gens) {
  std::set<Mask> seen{0};
  std::vector<Mask> todo{0};
  while (!todo.empty()) {
    Mask x = todo.back();
    todo.pop_back();
    for (Mask g : gens) {
      Mask y = amb->mul(x, g);
      if (seen.insert(y).second) todo.push_back(y);
    }
  }
  return {std::move(amb), {seen.begin(), seen.end()}, gens};
}

/// <u_a : a in roots> inside the ambient group
inline Subgroup root_subgroup(std::shared_ptr<const BlueprintGroup> amb, const std::vector<Root>& roots) {
  std::vector<Mask> gens;
  for (auto& a : roots) gens.push_back(amb->gen(a));
  return generate(std::move(amb), gens);
}

/// U_v embedded in the ambient group (requires Phi(v) inside the ambient inversion set)
inline Subgroup U_in(std::shared_ptr<const BlueprintGroup> amb, const CoxElt& v) {
  return root_subgroup(std::move(amb), inversion_set(v));
}

inline Subgroup intersect_subgroups(const Subgroup& a, const Subgroup& b) {
  if (a.ambient != b.ambient) throw std::invalid_argument("subgroups in different ambients");
  std::vector<Mask> out;
  std::set_intersection(a.elements.begin(), a.elements.end(), b.elements.begin(), b.elements.end(),
                        std::back_inserter(out));
  return {a.ambient, out, {}};
}

/// root generators of V_{w r_{xy}}: Phi(wx) and Phi(wy)
inline std::vector<Root> V_roots(const CoxElt& w, char x, char y) {
  std::vector<Root> out = inversion_set(w * x);
  for (auto& a : inversion_set(w * y))
    if (std::find(out.begin(), out.end(), a) == out.end()) out.push_back(a);
  return out;
}

/// V_{w r_{xy}} = <U_{wx}, U_{wy}> inside U_{w r_{xy}}, for a residue of type {x, y}.
inline Subgroup subgroup_V(const Residue& R) {
  if (R.J.size() != 2) throw std::invalid_argument("V needs a rank-2 residue");
  CoxElt w = gate(R);
  auto amb = km_group(w * CoxElt(longest(R.J[0], R.J[1])));
  return root_subgroup(amb, V_roots(w, R.J[0], R.J[1]));
}

/** \brief Injective homomorphism between blueprint groups given on generators. */
struct GroupMono {
  std::shared_ptr<const BlueprintGroup> source, target;
  std::vector<Mask> images;  // per source generator

  Mask apply(Mask x) const {
    Mask out = 0;
    for (int i = 0; i < source->rank(); ++i)
      if (x >> i & 1) out = target->mul(out, images[i]);
    return out;
  }

  /// relations of the source hold on the images and the image has full size
  bool verify() const {
    auto& S = *source;
    for (int i = 0; i < S.rank(); ++i) {
      if (target->mul(images[i], images[i]) != 0) return false;
      for (int j = i + 1; j < S.rank(); ++j) {
        Mask lhs = target->product({images[i], images[j], images[i], images[j]});
        Mask rhs = 0;
        for (int p : S.commutator(i, j)) rhs = target->mul(rhs, images[p]);
        if (lhs != rhs) return false;
      }
    }
    std::set<Mask> img;
    for (Mask x = 0; x < S.order(); ++x) img.insert(apply(x));
    return img.size() == S.order();
  }
};

/// U_w -> U_{wu} along the gallery extended by u
inline GroupMono inclusion(const std::string& gallery_type, char u) {
  if (len(gallery_type + u) != gallery_type.size() + 1) throw std::invalid_argument("l(wu) != l(w)+1");
  GroupMono m{km_group(gallery_type), km_group(gallery_type + u), {}};
  for (int i = 0; i < m.source->rank(); ++i) m.images.push_back(m.target->gen(m.source->roots()[i]));
  if (!m.verify()) throw BlueprintError("inclusion is not an injective homomorphism");
  return m;
}

/// Monomorphism between groups whose inversion sets are nested, generator to same-root generator.
inline GroupMono root_inclusion(std::shared_ptr<const BlueprintGroup> src, std::shared_ptr<const BlueprintGroup> dst) {
  GroupMono m{src, dst, {}};
  for (auto& a : src->roots()) m.images.push_back(dst->gen(a));
  if (!m.verify()) throw BlueprintError("root inclusion is not an injective homomorphism");
  return m;
}

}  // namespace kmtree
