#pragma once
// Coxeter group of type (4,4,4) on letters r < s < t.

#include <algorithm>
#include <array>
#include <compare>
#include <cstdint>
#include <fstream>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <shared_mutex>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace kmtree {

struct ResourceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline constexpr char kLetters[3] = {'r', 's', 't'};

inline int gen_index(char c) {
  switch (c) {
    case 'r': return 0;
    case 's': return 1;
    case 't': return 2;
  }
  throw std::invalid_argument(std::string("not a generator: ") + c);
}

/** \brief a + b*sqrt(2) with overflow-checked int64 parts. */
struct Zr2 {
  std::int64_t a = 0, b = 0;

  friend bool operator==(const Zr2&, const Zr2&) = default;

  static std::int64_t add_(std::int64_t x, std::int64_t y) {
    std::int64_t r;
    if (__builtin_add_overflow(x, y, &r)) throw std::overflow_error("Zr2 overflow");
    return r;
  }
  static std::int64_t mul_(std::int64_t x, std::int64_t y) {
    std::int64_t r;
    if (__builtin_mul_overflow(x, y, &r)) throw std::overflow_error("Zr2 overflow");
    return r;
  }
  friend Zr2 operator+(Zr2 x, Zr2 y) { return {add_(x.a, y.a), add_(x.b, y.b)}; }
  friend Zr2 operator-(Zr2 x) { return {mul_(x.a, -1), mul_(x.b, -1)}; }
  friend Zr2 operator-(Zr2 x, Zr2 y) { return x + (-y); }
  friend Zr2 operator*(Zr2 x, Zr2 y) {
    return {add_(mul_(x.a, y.a), mul_(2, mul_(x.b, y.b))), add_(mul_(x.a, y.b), mul_(x.b, y.a))};
  }
  Zr2 times_sqrt2() const { return {mul_(2, b), a}; }

  // -1, 0, +1
  int sign() const {
    if (a >= 0 && b >= 0) return (a == 0 && b == 0) ? 0 : 1;
    if (a <= 0 && b <= 0) return -1;
    __int128 a2 = static_cast<__int128>(a) * a;
    __int128 b2 = 2 * static_cast<__int128>(b) * b;
    if (a > 0) return a2 > b2 ? 1 : -1;  // b < 0
    return b2 > a2 ? 1 : -1;              // a < 0, b > 0
  }
};

using Vec3 = std::array<Zr2, 3>;

inline Vec3 basis(int i) {
  Vec3 v{};
  v[i] = {1, 0};
  return v;
}

// sigma_i(v) = v - 2B(e_i, v) e_i with 2B(e_i, e_j) = -sqrt2 off the diagonal.
inline void reflect(Vec3& v, int i) {
  Zr2 others = v[(i + 1) % 3] + v[(i + 2) % 3];
  v[i] = others.times_sqrt2() - v[i];
}

inline bool is_negative(const Vec3& v) {
  for (auto& c : v)
    if (c.sign() < 0) return true;
  return false;
}
inline bool is_positive(const Vec3& v) { return !is_negative(v); }

/// 2B(x, y)
inline Zr2 form2(const Vec3& x, const Vec3& y) {
  Zr2 diag{}, off{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      if (i == j) diag = diag + x[i] * y[j];
      else off = off + x[i] * y[j];
    }
  return Zr2{2, 0} * diag - off.times_sqrt2();
}

/// w(v) where w is given by its letters: the rightmost letter acts first.
inline Vec3 act(std::string_view w, Vec3 v) {
  for (auto it = w.rbegin(); it != w.rend(); ++it) reflect(v, gen_index(*it));
  return v;
}

/// ShortLex normal form of an arbitrary word, by repeatedly stripping the least left descent.
inline std::string normal_form(std::string_view letters) {
  std::array<Vec3, 3> col{basis(0), basis(1), basis(2)};  // columns of w^{-1}
  for (char c : letters) {
    int g = gen_index(c);
    for (auto& v : col) reflect(v, g);
  }
  std::string out;
  for (;;) {
    int a = -1;
    for (int i = 0; i < 3; ++i)
      if (is_negative(col[i])) { a = i; break; }
    if (a < 0) break;
    out.push_back(kLetters[a]);
    Vec3 old = col[a];
    for (int b = 0; b < 3; ++b) {
      if (b == a) continue;
      for (int k = 0; k < 3; ++k) col[b][k] = col[b][k] + old[k].times_sqrt2();
    }
    for (auto& c : col[a]) c = -c;
  }
  return out;
}

/** \brief Memo of normalizations, optionally persisted as "word<TAB>normal_form" lines. */
class NormCache {
 public:
  static constexpr const char* kHeader = "# kmtree-normal-form-cache v1 order=r<s<t";

  std::string get(std::string_view letters) {
    {
      std::shared_lock lk(mu_);
      auto it = map_.find(std::string(letters));
      if (it != map_.end()) return it->second;
    }
    std::string nf = normal_form(letters);
    std::unique_lock lk(mu_);
    map_.emplace(std::string(letters), nf);
    return nf;
  }
  std::size_t size() const {
    std::shared_lock lk(mu_);
    return map_.size();
  }
  // Unknown header or malformed record: the file is ignored (the cache is advisory).
  bool load(const std::string& path) {
    std::ifstream in(path);
    if (!in) return false;
    std::string line;
    if (!std::getline(in, line) || line != kHeader) return false;
    std::unordered_map<std::string, std::string> fresh;
    while (std::getline(in, line)) {
      auto tab = line.find('\t');
      if (tab == std::string::npos) return false;
      std::string w = line.substr(0, tab), nf = line.substr(tab + 1);
      if (normal_form(nf) != nf) return false;
      fresh.emplace(std::move(w), std::move(nf));
    }
    std::unique_lock lk(mu_);
    for (auto& [k, v] : fresh) map_.emplace(k, v);
    return true;
  }
  bool save(const std::string& path) const {
    std::ofstream out(path);
    if (!out) return false;
    out << kHeader << '\n';
    std::shared_lock lk(mu_);
    std::map<std::string, std::string> sorted(map_.begin(), map_.end());
    for (auto& [k, v] : sorted) out << k << '\t' << v << '\n';
    return static_cast<bool>(out);
  }

 private:
  mutable std::shared_mutex mu_;
  std::unordered_map<std::string, std::string> map_;
};

/** \brief Element of W stored as its ShortLex normal form. */
class CoxElt {
 public:
  CoxElt() = default;
  explicit CoxElt(std::string_view letters) : w_(normal_form(letters)) {}
  static CoxElt from_normal(std::string nf) {
    CoxElt e;
    e.w_ = std::move(nf);
    return e;
  }

  const std::string& word() const { return w_; }
  std::size_t length() const { return w_.size(); }
  bool is_identity() const { return w_.empty(); }
  std::string str() const { return w_.empty() ? std::string("1") : w_; }

  CoxElt operator*(const CoxElt& o) const { return CoxElt(w_ + o.w_); }
  CoxElt operator*(char g) const { return CoxElt(w_ + g); }
  CoxElt inverse() const { return CoxElt(std::string(w_.rbegin(), w_.rend())); }

  friend bool operator==(const CoxElt&, const CoxElt&) = default;
  friend std::strong_ordering operator<=>(const CoxElt& x, const CoxElt& y) {
    if (auto c = x.w_.size() <=> y.w_.size(); c != 0) return c;
    return x.w_ <=> y.w_;
  }

 private:
  std::string w_;
};

struct CoxEltHash {
  std::size_t operator()(const CoxElt& e) const { return std::hash<std::string>()(e.word()); }
};

inline CoxElt elt(std::string_view letters) { return CoxElt(letters); }
inline std::size_t len(std::string_view letters) { return normal_form(letters).size(); }

/// length-only check: is the letter sequence a reduced word
inline bool is_reduced(std::string_view letters) { return len(letters) == letters.size(); }

inline constexpr int kDefaultMaxRadius = 10;

/// Elements of length <= L sorted by (length, ShortLex).
inline std::vector<CoxElt> ball(int L, int max_radius = kDefaultMaxRadius) {
  if (L < 0) throw std::invalid_argument("negative radius");
  if (L > max_radius)
    throw ResourceError("radius " + std::to_string(L) + " exceeds cap " + std::to_string(max_radius));
  std::vector<CoxElt> out{CoxElt()};
  std::vector<CoxElt> layer{CoxElt()};
  for (int k = 0; k < L; ++k) {
    std::set<CoxElt> next;
    for (auto& x : layer)
      for (char g : kLetters) {
        CoxElt y = x * g;
        if (y.length() == x.length() + 1) next.insert(y);
      }
    layer.assign(next.begin(), next.end());
    out.insert(out.end(), layer.begin(), layer.end());
  }
  return out;
}

/// All reduced expressions of w, sorted.
inline std::vector<std::string> reduced_words(const CoxElt& w) {
  static std::mutex mu;
  static std::unordered_map<std::string, std::vector<std::string>> memo;
  {
    std::lock_guard lk(mu);
    auto it = memo.find(w.word());
    if (it != memo.end()) return it->second;
  }
  std::vector<std::string> out;
  if (w.is_identity()) {
    out.push_back("");
  } else {
    for (char g : kLetters) {
      CoxElt v = w * g;
      if (v.length() + 1 == w.length())
        for (auto& p : reduced_words(v)) out.push_back(p + g);
    }
    std::sort(out.begin(), out.end());
  }
  std::lock_guard lk(mu);
  memo.emplace(w.word(), out);
  return out;
}

/** \brief Half-space of W, canonically (reflection, contains-identity bit). */
struct Root {
  CoxElt refl;
  bool positive = true;
  Vec3 vec{};         // v(e_g); w is in the root iff w^{-1}(vec) is positive
  std::string wit_v;  // witness: root = wit_v . alpha_{wit_g}
  char wit_g = 'r';

  friend bool operator==(const Root& x, const Root& y) {
    return x.refl == y.refl && x.positive == y.positive;
  }
  friend std::strong_ordering operator<=>(const Root& x, const Root& y) {
    if (auto c = x.refl <=> y.refl; c != 0) return c;
    return x.positive <=> y.positive;
  }
  std::string str() const { return (positive ? "+" : "-") + refl.str(); }
};

struct RootHash {
  std::size_t operator()(const Root& a) const {
    return std::hash<std::string>()(a.refl.word()) * 2 + (a.positive ? 1 : 0);
  }
};

/// v . alpha_g
inline Root root_from(std::string_view v, char g) {
  Root a;
  std::string vs(v);
  a.refl = CoxElt(vs + g + std::string(vs.rbegin(), vs.rend()));
  a.vec = act(vs, basis(gen_index(g)));
  a.positive = is_positive(a.vec);
  a.wit_v = normal_form(vs);
  a.wit_g = g;
  return a;
}
inline Root root_from(const CoxElt& v, char g) { return root_from(v.word(), g); }
inline Root simple_root(char g) { return root_from("", g); }

inline Root opposite(const Root& a) {
  Root b = a;
  b.positive = !a.positive;
  for (auto& c : b.vec) c = -c;
  b.wit_v = normal_form(a.wit_v + a.wit_g);
  return b;
}

/// w . alpha
inline Root act(const CoxElt& w, const Root& a) { return root_from(w.word() + a.wit_v, a.wit_g); }

inline bool member(const CoxElt& w, const Root& a) {
  bool up = (a.refl * w).length() > w.length();
  return a.positive ? up : !up;
}

struct Labeling {
  char r, s, t;
  std::string map(std::string_view abstract) const {
    std::string out;
    for (char c : abstract) out.push_back(c == 'r' ? r : c == 's' ? s : t);
    return out;
  }
  std::string name() const { return std::string{r, s, t}; }
};

/// The six orderings of the letters; "rst" is the identity labeling.
inline std::vector<Labeling> all_labelings() {
  std::string p = "rst";
  std::vector<Labeling> out;
  do out.push_back({p[0], p[1], p[2]});
  while (std::next_permutation(p.begin(), p.end()));
  return out;
}

/// r_{xy}: the longest element of <x, y>, written starting with x.
inline std::string longest(char x, char y) { return std::string{x, y, x, y}; }

/** \brief Minimal gallery from 1_W of the given type. */
struct Gallery {
  std::string type;

  explicit Gallery(std::string ty) : type(std::move(ty)) {
    if (!is_reduced(type)) throw std::invalid_argument("gallery type not reduced: " + type);
  }
  CoxElt chamber(std::size_t i) const { return CoxElt(std::string_view(type).substr(0, i)); }
  CoxElt end() const { return CoxElt(type); }
  std::size_t size() const { return type.size(); }
};

/// alpha_i = s_1...s_{i-1} . alpha_{s_i}
inline std::vector<Root> inversion_sequence(const Gallery& G) {
  std::vector<Root> out;
  for (std::size_t i = 0; i < G.type.size(); ++i)
    out.push_back(root_from(std::string_view(G.type).substr(0, i), G.type[i]));
  return out;
}

/// Phi(w) as a sorted set
inline std::vector<Root> inversion_set(const CoxElt& w) {
  if (w.is_identity()) return {};
  auto seq = inversion_sequence(Gallery(w.word()));
  std::sort(seq.begin(), seq.end());
  return seq;
}

enum class PairKind { Equal, Opposite, FiniteOrder, Nested, AntiNested };

struct PairClass {
  PairKind kind;
  int order = 0;     // order of r_a r_b, 0 if infinite
  int contains = 0;  // +1: a inside b, -1: b inside a (nested pairs only)
};

// Sign of 2B(x, y) at which infinite-order pairs are nested rather than
// complementary; calibrated against ball membership and pinned by a test.
inline constexpr int kNestSign = +1;

inline int reflection_order(const CoxElt& x) {
  CoxElt p = x;
  for (int k = 1; k <= 8; ++k) {
    if (p.is_identity()) return k;
    p = p * x;
  }
  return 0;
}

inline PairClass pair_class(const Root& a, const Root& b) {
  if (a.refl == b.refl) return {a.positive == b.positive ? PairKind::Equal : PairKind::Opposite};
  Zr2 c = form2(a.vec, b.vec);
  bool finite = (Zr2{2, 0} - c).sign() > 0 && (Zr2{2, 0} + c).sign() > 0;
  if (finite) {
    int m = c.sign() == 0 ? 2 : 4;
    int direct = reflection_order(a.refl * b.refl);
    if (direct != m) throw std::logic_error("form and word order disagree");
    return {PairKind::FiniteOrder, m};
  }
  if (c.sign() != kNestSign) return {PairKind::AntiNested};
  // The a-side chamber next to the wall of a lies on one side of the wall of b.
  bool inside = member(CoxElt::from_normal(a.wit_v), b);
  return {PairKind::Nested, 0, inside ? +1 : -1};
}

inline bool prenilpotent(const Root& a, const Root& b) {
  auto pc = pair_class(a, b);
  return pc.kind == PairKind::Equal || pc.kind == PairKind::FiniteOrder || pc.kind == PairKind::Nested;
}

/// Roots of the finite dihedral subsystem spanned by a and b (finite-order pairs).
inline std::vector<Root> dihedral_roots(const Root& a, const Root& b) {
  std::vector<Root> out{a, b, opposite(a), opposite(b)};
  for (std::size_t i = 0; i < out.size(); ++i)
    for (const CoxElt* r : {&a.refl, &b.refl}) {
      Root g = act(*r, out[i]);
      if (std::find(out.begin(), out.end(), g) == out.end()) out.push_back(g);
    }
  std::sort(out.begin(), out.end());
  return out;
}

/// gamma in [a, b] for roots of one finite dihedral subsystem: gamma is a nonnegative combination.
inline bool in_dihedral_interval(const Root& a, const Root& b, const Root& g) {
  Zr2 C = form2(a.vec, b.vec), X = form2(g.vec, a.vec), Y = form2(g.vec, b.vec);
  Zr2 two{2, 0};
  return (two * X - C * Y).sign() >= 0 && (two * Y - C * X).sign() >= 0;
}

struct Interval {
  std::vector<Root> roots;  // ordered by the gallery
  bool approximate = false;
};

/// Closed interval [a, b] inside Phi(G); for infinite-order pairs a ball of radius L approximates.
inline Interval interval(const Root& a, const Root& b, const Gallery& G, int L = 8) {
  auto seq = inversion_sequence(G);
  auto pos = [&](const Root& x) -> long {
    auto it = std::find(seq.begin(), seq.end(), x);
    return it == seq.end() ? -1 : it - seq.begin();
  };
  if (pos(a) < 0 || pos(b) < 0) throw std::invalid_argument("root not in Phi(G)");
  if (pos(a) > pos(b)) throw std::invalid_argument("endpoints out of gallery order");
  Interval out;
  if (a == b) {
    out.roots = {a};
    return out;
  }
  auto pc = pair_class(a, b);
  std::vector<Root> found;
  if (pc.kind == PairKind::FiniteOrder) {
    for (auto& g : dihedral_roots(a, b))
      if (in_dihedral_interval(a, b, g)) found.push_back(g);
  } else {
    out.approximate = true;
    auto B = ball(L, L);
    for (auto& g : seq) {
      bool ok = true;
      for (auto& w : B) {
        bool ia = member(w, a), ib = member(w, b), ig = member(w, g);
        if ((ia && ib && !ig) || (!ia && !ib && ig)) { ok = false; break; }
      }
      if (ok) found.push_back(g);
    }
  }
  for (auto& g : found)
    if (pos(g) < 0) throw std::logic_error("interval leaves Phi(G): " + g.str());
  std::sort(found.begin(), found.end(), [&](const Root& x, const Root& y) { return pos(x) < pos(y); });
  out.roots = std::move(found);
  return out;
}

inline std::vector<Root> open_interval(const Root& a, const Root& b, const Gallery& G) {
  auto iv = interval(a, b, G).roots;
  std::vector<Root> out;
  for (auto& g : iv)
    if (!(g == a) && !(g == b)) out.push_back(g);
  return out;
}

/// Elements of the standard parabolic <J>, J given as letters (at most two).
inline std::vector<CoxElt> parabolic(std::string_view J) {
  if (J.size() > 2) throw std::invalid_argument("non-spherical type " + std::string(J));
  std::vector<CoxElt> out{CoxElt()};
  if (J.size() == 1) out.push_back(CoxElt(J));
  if (J.size() == 2) {
    for (int n = 1; n <= 4; ++n)
      for (char x : J) {
        std::string w;
        for (int i = 0; i < n; ++i) w.push_back(i % 2 ? (x == J[0] ? J[1] : J[0]) : x);
        CoxElt e(w);
        if (std::find(out.begin(), out.end(), e) == out.end()) out.push_back(e);
      }
  }
  std::sort(out.begin(), out.end());
  return out;
}

/** \brief J-residue of a chamber, J spherical. */
struct Residue {
  std::string J;
  CoxElt base;

  Residue(std::string j, CoxElt b) : J(std::move(j)), base(std::move(b)) {
    std::sort(J.begin(), J.end());
    J.erase(std::unique(J.begin(), J.end()), J.end());
    if (J.size() > 2) throw std::invalid_argument("non-spherical residue type " + J);
  }
  std::vector<CoxElt> chambers() const {
    std::vector<CoxElt> out;
    for (auto& u : parabolic(J)) out.push_back(base * u);
    std::sort(out.begin(), out.end());
    return out;
  }
  bool contains(const CoxElt& x) const {
    auto ch = chambers();
    return std::find(ch.begin(), ch.end(), x) != ch.end();
  }
  std::string str() const { return "R_" + J + "(" + base.str() + ")"; }
};

inline CoxElt proj(const Residue& R, const CoxElt& x) {
  auto ch = R.chambers();
  CoxElt xi = x.inverse();
  CoxElt best = ch.front();
  std::size_t bl = (xi * best).length();
  int ties = 0;
  for (auto& y : ch) {
    std::size_t l = (xi * y).length();
    if (l < bl) { bl = l; best = y; ties = 0; }
    else if (l == bl && !(y == best)) ++ties;
  }
  if (ties) throw std::logic_error("projection not unique");
  return best;
}

inline CoxElt gate(const Residue& R) { return proj(R, CoxElt()); }

inline bool prefix_leq(const CoxElt& a, const CoxElt& b) {
  return a.length() + (a.inverse() * b).length() == b.length();
}

/// C(w): all prefixes of reduced expressions of w
inline std::vector<CoxElt> prefix_set(const CoxElt& w) {
  std::set<CoxElt> seen{w};
  std::vector<CoxElt> todo{w};
  while (!todo.empty()) {
    CoxElt x = todo.back();
    todo.pop_back();
    for (char g : kLetters) {
      CoxElt y = x * g;
      if (y.length() < x.length() && seen.insert(y).second) todo.push_back(y);
    }
  }
  return {seen.begin(), seen.end()};
}

}  // namespace kmtree
