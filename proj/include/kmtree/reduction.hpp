#pragma once
// Words h_0 g_1 h_1 ... g_n h_n in U_sr *_{U_s} V *_{U_t} U_trt: reduction and the chamber-distance replay.

#include <sstream>

#include "kmtree/constructions.hpp"
#include "kmtree/quadrangle.hpp"

namespace kmtree {

/// g-alphabet; RTTR is the single symbol u_rt u_tr
enum class GSym { SR, TR, RT, RTTR };

inline std::string gsym_name(GSym g) {
  switch (g) {
    case GSym::SR: return "u_sr";
    case GSym::TR: return "u_tr";
    case GSym::RT: return "u_rt";
    case GSym::RTTR: return "u_rt*u_tr";
  }
  return "?";
}
inline bool t_class(GSym g) { return g != GSym::SR; }
inline bool rt_class(GSym g) { return g == GSym::RT || g == GSym::RTTR; }

/** \brief H = U_sr *_{U_s} V_{r_st} *_{U_t} U_trt with its alphabets. */
class HGroup {
 public:
  HGroup() {
    auto Usr = U_group(CoxElt("sr"));
    V_ = V_group(CoxElt(), 's', 't');
    Utrt_ = U_group(CoxElt("trt"));
    P_ = std::make_shared<TreeProduct>(hat_sequence({{"U_sr", Usr}, {"V", V_}, {"U_trt", Utrt_}}), "H");
    // words over u_s, u_t for the elements of V
    Root as = simple_root('s'), at = simple_root('t');
    vword_.assign(V_->size(), "?");
    vword_[0] = "";
    std::vector<int> todo{0};
    for (std::size_t i = 0; i < todo.size(); ++i)
      for (auto [ch, a] : {std::pair{'s', as}, std::pair{'t', at}}) {
        int y = V_->m(todo[i], V_->root_elem(a)[0]);
        if (vword_[y] == "?") {
          vword_[y] = vword_[todo[i]] + ch;
          todo.push_back(y);
        }
      }
    us_ = V_->root_elem(as)[0];
    ut_ = V_->root_elem(at)[0];
    g_elem_[0] = Utrt_->id()[0];  // unused for SR
    g_elem_[1] = Utrt_->root_elem(root_from("t", 'r'))[0];
    g_elem_[2] = Utrt_->root_elem(root_from("r", 't'))[0];
    g_elem_[3] = Utrt_->m(g_elem_[2], g_elem_[1]);
  }

  const TreeProduct& product() const { return *P_; }
  const FiniteGroup& V() const { return *V_; }
  int u_s() const { return us_; }
  int u_t() const { return ut_; }
  int vmul(int a, int b) const { return V_->m(a, b); }
  /// u_s / u_t word of a V element ("" for 1)
  const std::string& vword(int h) const { return vword_[h]; }
  std::string vname(int h) const {
    if (h == 0) return "1";
    std::string out;
    for (char c : vword_[h]) out += std::string(out.empty() ? "" : "*") + "u_" + c;
    return out;
  }
  Elem g_elem(GSym g) const {
    if (g == GSym::SR) return P_->letter(0, P_->tree().groups[0]->root_elem(root_from("s", 'r')));
    return P_->letter(2, {g_elem_[static_cast<int>(g)]});
  }
  Elem h_elem(int h) const { return P_->letter(1, {h}); }
  /// product of two t-class symbols inside U_trt, if it is again a symbol
  std::optional<GSym> t_product(GSym a, GSym b) const {
    int x = Utrt_->m(g_elem_[static_cast<int>(a)], g_elem_[static_cast<int>(b)]);
    for (GSym g : {GSym::TR, GSym::RT, GSym::RTTR})
      if (g_elem_[static_cast<int>(g)] == x) return g;
    return std::nullopt;
  }

 private:
  FinitePtr V_, Utrt_;
  std::shared_ptr<TreeProduct> P_;
  std::vector<std::string> vword_;
  int us_ = 0, ut_ = 0;
  int g_elem_[4] = {0, 0, 0, 0};
};

inline const HGroup& h_group() {
  static const HGroup H;
  return H;
}

/** \brief h_0 g_1 h_1 ... g_n h_n; h has n+1 entries (indices into V). */
struct AltWord {
  std::vector<int> h{0};
  std::vector<GSym> g;

  std::size_t n() const { return g.size(); }
  /// number of g's plus nontrivial h's
  std::size_t syllables() const {
    std::size_t k = g.size();
    for (int x : h) k += x != 0;
    return k;
  }
  friend bool operator==(const AltWord&, const AltWord&) = default;

  std::string str(const HGroup& H = h_group()) const {
    std::vector<std::string> items;
    if (h[0] != 0 || g.empty()) items.push_back(H.vname(h[0]));
    for (std::size_t i = 0; i < g.size(); ++i) {
      items.push_back(gsym_name(g[i]));
      items.push_back(H.vname(h[i + 1]));
    }
    std::string out;
    for (auto& x : items) out += (out.empty() ? "" : ",") + x;
    return out;
  }
  Elem evaluate(const HGroup& H = h_group()) const {
    auto& P = H.product();
    Elem x = H.h_elem(h[0]);
    for (std::size_t i = 0; i < g.size(); ++i) x = P.mul(P.mul(x, H.g_elem(g[i])), H.h_elem(h[i + 1]));
    return x;
  }
};

/// "u_sr,1,u_sr,u_t": g symbols, V elements as *-products of u_s/u_t or 1; identity h's fill gaps
inline AltWord parse_word(std::string_view spec, const HGroup& H = h_group()) {
  AltWord w;
  std::stringstream ss{std::string(spec)};
  std::string item;
  bool any = false;
  while (std::getline(ss, item, ',')) {
    item.erase(std::remove_if(item.begin(), item.end(), ::isspace), item.end());
    if (item.empty()) throw std::invalid_argument("empty item in word");
    any = true;
    std::vector<std::string> factors;
    std::stringstream fs(item);
    std::string f;
    while (std::getline(fs, f, '*')) factors.push_back(f);
    std::multiset<std::string> fset(factors.begin(), factors.end());
    if (factors.size() == 1 && (f == "u_sr" || f == "u_tr" || f == "u_rt")) {
      w.g.push_back(f == "u_sr" ? GSym::SR : f == "u_tr" ? GSym::TR : GSym::RT);
      w.h.push_back(0);
      continue;
    }
    if (fset == std::multiset<std::string>{"u_rt", "u_tr"}) {
      w.g.push_back(GSym::RTTR);
      w.h.push_back(0);
      continue;
    }
    int v = 0;
    for (auto& x : factors) {
      if (x == "1") continue;
      if (x == "u_s") v = H.vmul(v, H.u_s());
      else if (x == "u_t") v = H.vmul(v, H.u_t());
      else throw std::invalid_argument("letter outside the allowed alphabets: " + item);
    }
    w.h.back() = H.vmul(w.h.back(), v);
  }
  if (!any) throw std::invalid_argument("empty word");
  return w;
}

/// h_i not in {1, u_s} between two u_sr; h_i not in {1, u_t} between two t-class symbols
inline std::optional<std::size_t> first_constraint_violation(const AltWord& w, const HGroup& H = h_group()) {
  for (std::size_t i = 0; i + 1 < w.g.size(); ++i) {
    int hi = w.h[i + 1];
    if (w.g[i] == GSym::SR && w.g[i + 1] == GSym::SR && (hi == 0 || hi == H.u_s())) return i;
    if (t_class(w.g[i]) && t_class(w.g[i + 1]) && (hi == 0 || hi == H.u_t())) return i;
  }
  return std::nullopt;
}

struct ReduceStep {
  std::string rule;
  std::size_t i;  // 1-based position of g_i
  std::size_t n_before, n_after;
};

struct ReduceResult {
  AltWord input, output;
  std::vector<ReduceStep> steps;
  bool sound = false;        // equal normal forms in H
  bool constrained = false;  // output satisfies both clauses
  bool decreasing = true;    // n drops at every step

  bool pass() const { return sound && constrained && decreasing; }
  json to_json() const {
    json st = json::array();
    for (auto& s : steps) st.push_back({{"rule", s.rule}, {"i", s.i}, {"n_before", s.n_before}, {"n_after", s.n_after}});
    return {{"input", input.str()}, {"output", output.str()}, {"steps", st},
            {"sound", sound},       {"constrained", constrained}, {"n_decreasing", decreasing}, {"pass", pass()}};
  }
};

/// Rewrites the leftmost reducible pair until none is left.
inline ReduceResult theorem35_reduce(const AltWord& in, const HGroup& H = h_group()) {
  ReduceResult res;
  res.input = in;
  AltWord w = in;
  while (auto i = first_constraint_violation(w, H)) {
    std::size_t k = *i, n0 = w.n();
    GSym a = w.g[k], b = w.g[k + 1];
    std::string rule;
    if (a == b) {
      rule = a == GSym::SR ? "(a)" : "(b)(i)";
      w.h[k] = H.vmul(H.vmul(w.h[k], w.h[k + 1]), w.h[k + 2]);
      w.g.erase(w.g.begin() + static_cast<long>(k), w.g.begin() + static_cast<long>(k) + 2);
      w.h.erase(w.h.begin() + static_cast<long>(k) + 1, w.h.begin() + static_cast<long>(k) + 3);
    } else {
      rule = "(b)(ii)";
      auto p = H.t_product(a, b);
      if (!p) throw std::logic_error("product of t-class symbols left the alphabet");
      w.h[k] = H.vmul(w.h[k], w.h[k + 1]);
      w.g[k] = *p;
      w.g.erase(w.g.begin() + static_cast<long>(k) + 1);
      w.h.erase(w.h.begin() + static_cast<long>(k) + 1);
    }
    res.steps.push_back({rule, k + 1, n0, w.n()});
    if (w.n() >= n0) res.decreasing = false;
  }
  res.output = w;
  res.constrained = !first_constraint_violation(w, H);
  res.sound = in.evaluate(H) == w.evaluate(H);
  return res;
}

inline AltWord random_altword(std::mt19937_64& rng, int max_n = 8) {
  AltWord w;
  int n = std::uniform_int_distribution<int>(0, max_n)(rng);
  std::uniform_int_distribution<int> hv(0, 7), gv(0, 3), coin(0, 2);
  w.h[0] = coin(rng) ? 0 : hv(rng);
  for (int i = 0; i < n; ++i) {
    w.g.push_back(static_cast<GSym>(gv(rng)));
    // identity h's are frequent so the rules fire
    w.h.push_back(coin(rng) == 0 ? 0 : hv(rng));
  }
  return w;
}

/// all constrained g_1 h_1 ... g_n h_n (h_0 = 1, n >= 1) with at most `max_syllables` syllables
inline std::vector<AltWord> constrained_words(int max_syllables, const HGroup& H = h_group()) {
  std::vector<AltWord> out;
  AltWord cur;
  std::function<void(int)> rec = [&](int budget) {
    if (!cur.g.empty()) out.push_back(cur);
    if (budget < 1) return;
    for (int gi = 0; gi < 4; ++gi)
      for (int h = 0; h < H.V().size(); ++h) {
        int cost = 1 + (h != 0);
        if (cost > budget) continue;
        GSym g = static_cast<GSym>(gi);
        if (!cur.g.empty()) {
          int prev_h = cur.h.back();
          GSym pg = cur.g.back();
          if (pg == GSym::SR && g == GSym::SR && (prev_h == 0 || prev_h == H.u_s())) continue;
          if (t_class(pg) && t_class(g) && (prev_h == 0 || prev_h == H.u_t())) continue;
        }
        cur.g.push_back(g);
        cur.h.push_back(h);
        rec(budget - cost);
        cur.g.pop_back();
        cur.h.pop_back();
      }
  };
  rec(max_syllables);
  return out;
}

// ---------------------------------------------------------------- the replay

/** \brief Model of the two rank-2 residues R_st(c) and R_rt(c) around c = B_-.

The rt residue is the same quadrangle with model letter s read as r; the two share the t-panel of c. */
struct ResidueModels {
  Quadrangle Q;
  int u_rt = 0, u_tr = 0, u_rttr = 0;  // rt-model elements

  ResidueModels() : Q(build_quadrangle()) {
    auto& M = Q.M;
    u_rt = M.mul(M.mul(M.n_s(), Q.ut), M.inv(M.n_s()));
    u_tr = M.mul(M.mul(M.n_t(), Q.us), M.inv(M.n_t()));
    u_rttr = M.mul(u_rt, u_tr);
  }
  std::string st_dist(TwinChamber x, TwinChamber y) const { return Q.M.weyl_distance(x, y); }
  std::string rt_dist(TwinChamber x, TwinChamber y) const {
    auto w = Q.M.weyl_distance(x, y);
    for (auto& ch : w) ch = ch == 's' ? 'r' : ch;
    return w;
  }
  /// projection onto a panel of the model (model letters)
  TwinChamber proj_panel(TwinChamber panel_of, char type, TwinChamber x) const {
    auto P = Q.M.panel(panel_of, type);
    TwinChamber best = P.front();
    for (auto& y : P)
      if (Q.l(x, y) < Q.l(x, best)) best = y;
    return best;
  }
};

inline const ResidueModels& residue_models() {
  static const ResidueModels R;
  return R;
}

inline std::string step_case(const AltWord& w, std::size_t k) {
  if (k == 0) return "base";
  GSym prev = w.g[k - 1], cur = w.g[k];
  if (!rt_class(prev)) return rt_class(cur) ? "(b)(ii)" : "(b)(i)";
  if (cur == GSym::TR) return "(c)(i)";
  if (rt_class(cur)) return "(c)(ii)";
  return "(c)(iii)";
}

/// Replays the induction on concrete chambers: the projection P of c.g onto R_st and D = delta(c.g, P).
inline Certificate lemma33_trace(const AltWord& input, const HGroup& H = h_group(),
                                 const ResidueModels& RM = residue_models()) {
  Certificate cert;
  cert.lemma = "Normal form (proof replay)";
  cert.residue = "R_st(c), R_rt(c)";
  cert.assume("replay of the induction on the two rank-2 residues at c, not an independent proof of the statement in G");
  cert.assume("proj_{R_st}(c.u_er) = c_e and delta(c_e, c_e.u_er) = r for e in {s, t} (root groups on r-panels)");
  cert.assume("R_rt(c) with u_rt, u_tr is the quadrangle model relabelled s -> r, sharing the t-panel of c");
  AltWord w = input;
  if (w.h[0] != 0) {
    // h_0 g_1 ... g_n h_n is conjugate to g_1 ... g_n (h_n h_0)
    w.h.back() = H.vmul(w.h.back(), w.h[0]);
    w.h[0] = 0;
    cert.add("leading h_0 conjugated to the end", true, {{"word", w.str(H)}});
  }
  if (w.g.empty()) {
    cert.add("n >= 1", false);
    return cert;
  }
  if (auto v = first_constraint_violation(w, H)) {
    cert.add("constraints on h_i", false, {{"position", *v + 1}});
    return cert;
  }
  auto& Q = RM.Q;
  auto& M = Q.M;
  TwinChamber c = Q.c();
  struct Branch {
    TwinChamber P;
    CoxElt D;
  };
  std::vector<Branch> branches{{c, CoxElt()}};
  long length_claims = 0, failures = 0;
  json steps = json::array();
  auto claim = [&](bool ok) {
    ++length_claims;
    if (!ok) ++failures;
    return ok;
  };
  auto additive = [&](const CoxElt& a, const std::string& b) {
    CoxElt ab = a * CoxElt(b);
    claim(ab.length() == a.length() + b.size());
    return ab;
  };
  bool increasing = true;
  for (std::size_t k = 0; k < w.n(); ++k) {
    GSym g = w.g[k];
    int hk = Q.h(H.vword(w.h[k + 1]));
    std::string cs = step_case(w, k);
    std::vector<Branch> next;
    json st = {{"k", k + 1}, {"g", gsym_name(g)}, {"case", cs}};
    std::vector<std::size_t> counters;
    bool via_a = false, split = false;
    for (auto& B : branches) {
      if (!rt_class(g)) {
        char e = g == GSym::SR ? 's' : 't';
        TwinChamber ce = e == 's' ? Q.c_s() : Q.c_t();
        std::string d = RM.st_dist(B.P, ce);
        if (cs == "(b)(i)") claim(d.size() >= (w.g[k - 1] == g ? 3u : 2u));
        if (cs == "(c)(i)") claim(d.size() >= 2);
        if (cs == "(c)(iii)") claim(d.size() >= 2 || d == "s");
        CoxElt De = additive(B.D, d);
        for (char u : {'s', 't'}) claim(len(De.word() + 'r' + u) == De.length() + 2);
        Branch nb{Q.dot(ce, hk), De * 'r'};
        if (nb.D.length() <= B.D.length()) increasing = false;
        next.push_back(nb);
      } else {
        int gm = g == GSym::RT ? RM.u_rt : RM.u_rttr;
        TwinChamber p = RM.proj_panel(c, 't', B.P);
        CoxElt Dp = additive(B.D, RM.st_dist(B.P, p));
        std::vector<TwinChamber> hats;
        CoxElt Dhat;
        if ((Dp * 'r').length() == Dp.length() + 1) {
          hats = {p};
          Dhat = Dp;
          via_a = true;
        } else {
          for (auto& y : M.panel(p, 's'))
            if (!(y == p)) hats.push_back(y);
          Dhat = Dp * 'r';
          split = true;
        }
        claim((Dhat * 'r').length() == Dhat.length() + 1 && (Dhat * 't').length() == Dhat.length() + 1);
        TwinChamber cg = Q.dot(c, gm);
        for (auto& ph : hats) {
          TwinChamber q = RM.proj_panel(cg, 't', ph);
          CoxElt Dq = additive(Dhat, RM.rt_dist(ph, q));
          claim((Dq * 's').length() == Dq.length() + 1 && (Dq * 't').length() == Dq.length() + 1);
          TwinChamber back = Q.dot(q, gm);
          auto Pt = M.panel(c, 't');
          claim(std::find(Pt.begin(), Pt.end(), back) != Pt.end());
          claim(len(Dq.word() + "srs") == Dq.length() + 3);
          if (Dq.length() <= B.D.length()) increasing = false;
          next.push_back({Q.dot(back, hk), Dq});
        }
      }
    }
    for (auto& nb : next) counters.push_back(nb.D.length());
    st["branches"] = next.size();
    st["counter"] = counters;
    if (via_a) st["via"] = "(a)";
    if (split) st["split"] = "proj onto the r-panel of p not determined; both chambers carried";
    steps.push_back(st);
    branches = std::move(next);
  }
  std::size_t final_min = branches.front().D.length();
  for (auto& b : branches) final_min = std::min(final_min, b.D.length());
  cert.add("every invoked length claim holds at the concrete Weyl words", failures == 0,
           {{"claims", length_claims}, {"failures", failures}});
  cert.add("distance counter strictly increases", increasing, {{"steps", steps}});
  cert.add("final counter > 0, so g_1 h_1 ... g_n h_n moves c off R_st", final_min > 0,
           {{"counter", final_min}, {"branches", branches.size()}, {"delta", branches.front().D.str()}});
  return cert;
}

}  // namespace kmtree
