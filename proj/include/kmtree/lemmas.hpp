#pragma once
// Exhaustive ball sweeps of the length and root lemmas, with mutants.

#include <functional>
#include <map>

#include "kmtree/coxeter.hpp"
#include "kmtree/report.hpp"

namespace kmtree {

enum class Mutant { None, PlusTwo, BothUp, WrongGamma, ShortConclusion };

namespace detail {

inline SweepReport start(const std::string& id, int L, Mutant m) {
  SweepReport rep;
  rep.lemma = id;
  rep.radius = L;
  rep.extra["labelings"] = 6;
  if (m != Mutant::None) rep.extra["mutant"] = static_cast<int>(m);
  return rep;
}

inline void require(int L, int lo, int cap) {
  if (L < lo) throw std::invalid_argument("radius below " + std::to_string(lo));
  if (L > cap) throw ResourceError("radius " + std::to_string(L) + " exceeds cap " + std::to_string(cap));
}

}  // namespace detail

/// l(w w' r f) = l(w) + l(w') + 1 + l(f)
inline SweepReport verify_wordsincoxetergroup(int L, Mutant m = Mutant::None, int cap = 12) {
  detail::require(L, 2, cap);
  Stopwatch sw;
  auto rep = detail::start("wordsincoxetergroup", L, m);
  const long extra = m == Mutant::PlusTwo ? 2 : 1;
  auto B = ball(L, cap);
  for (auto& lab : all_labelings()) {
    char s = lab.s, t = lab.t, r = lab.r;
    std::vector<CoxElt> wps;
    for (auto& u : parabolic(std::string{s, t}))
      if (u.length() >= 2) wps.push_back(u);
    for (auto& w : B) {
      long lw = static_cast<long>(w.length());
      if ((w * s).length() != w.length() + 1 || (w * t).length() != w.length() + 1) continue;
      for (auto& wp : wps)
        for (std::string f : {std::string(), std::string(1, s), std::string(1, t)}) {
          ++rep.tuples_checked;
          long got = static_cast<long>(len(w.word() + wp.word() + r + f));
          long want = lw + static_cast<long>(wp.length()) + extra + static_cast<long>(f.size());
          if (got != want)
            rep.violate({{"labeling", lab.name()}, {"w", w.str()}, {"w'", wp.str()}, {"f", f.empty() ? "1" : f},
                         {"length", got}, {"expected", want}});
        }
    }
  }
  rep.elapsed_ms = sw.ms();
  return rep;
}

/// l(w)+2 in {l(wsr), l(wtr)}; and l(wsr) = l(w) forces l(wsrt) = l(w)+1
inline SweepReport verify_not_both_down(int L, Mutant m = Mutant::None, int cap = 12) {
  detail::require(L, 1, cap);
  Stopwatch sw;
  auto rep = detail::start("not both down", L, m);
  long second_vacuous = 0;
  for (auto& lab : all_labelings()) {
    char r = lab.r, s = lab.s, t = lab.t;
    for (auto& w : ball(L, cap)) {
      std::size_t lw = w.length();
      if ((w * s).length() != lw + 1 || (w * t).length() != lw + 1) {
        ++rep.vacuous;
        continue;
      }
      ++rep.tuples_checked;
      std::size_t lsr = len(w.word() + s + r), ltr = len(w.word() + t + r);
      bool first = m == Mutant::BothUp ? (lsr == lw + 2 && ltr == lw + 2) : (lsr == lw + 2 || ltr == lw + 2);
      if (!first)
        rep.violate({{"labeling", lab.name()}, {"w", w.str()}, {"clause", 1}, {"l(wsr)", lsr}, {"l(wtr)", ltr}});
      if (lsr != lw) {
        ++second_vacuous;
        continue;
      }
      std::size_t lsrt = len(w.word() + s + r + t);
      if (lsrt != lw + 1)
        rep.violate({{"labeling", lab.name()}, {"w", w.str()}, {"clause", 2}, {"l(wsrt)", lsrt}});
    }
  }
  rep.extra["second_clause_vacuous"] = second_vacuous;
  rep.elapsed_ms = sw.ms();
  return rep;
}

/// Galleries of type (r,s,t,r) from every d0 in ball(L-4): beta strictly inside both late roots.
inline SweepReport verify_mingallinrep(int L, Mutant m = Mutant::None, int cap = 12) {
  detail::require(L, 4, cap);
  Stopwatch sw;
  auto rep = detail::start("mingallinrep", L, m);
  auto B = ball(L, cap);
  auto starts = ball(L - 4, cap);
  long disagreements = 0;
  for (auto& lab : all_labelings()) {
    std::string ty = lab.map("rstr");
    for (auto& d0 : starts) {
      Root beta = root_from(d0, ty[0]);  // contains d0, wall {d0, d1}
      std::vector<Root> gammas;
      if (m == Mutant::WrongGamma) gammas.push_back(root_from(d0.word() + ty.substr(0, 1), ty[1]));
      else {
        gammas.push_back(root_from(d0.word() + ty.substr(0, 2), ty[2]));
        gammas.push_back(root_from(d0.word() + ty.substr(0, 3), ty[3]));
      }
      for (auto& g : gammas) {
        ++rep.tuples_checked;
        bool by_ball = true;
        for (auto& w : B)
          if (member(w, beta) && !member(w, g)) { by_ball = false; break; }
        auto pc = pair_class(beta, g);
        bool by_form = pc.kind == PairKind::Nested && pc.contains == +1;
        if (by_ball != by_form) ++disagreements;
        bool strict = !(beta == g);
        if (!(by_ball && by_form && strict))
          rep.violate({{"labeling", lab.name()}, {"d0", d0.str()}, {"beta", beta.str()}, {"gamma", g.str()},
                       {"ball", by_ball}, {"form", by_form}});
      }
    }
  }
  rep.extra["method_disagreements"] = disagreements;
  rep.elapsed_ms = sw.ms();
  return rep;
}

/// tstr.a_s meet stsr.a_t minus {r_st r} lies in r_st.a_r
inline SweepReport verify_subset_lemma(int L, Mutant m = Mutant::None, int cap = 12) {
  detail::require(L, m == Mutant::None ? 5 : 1, cap);  // mutants also run below the lemma's minimum
  Stopwatch sw;
  auto rep = detail::start("Subset contained in certain root", L, m);
  long boundary = 0;
  for (auto& lab : all_labelings()) {
    Root h1 = root_from(lab.map("tstr"), lab.s);
    Root h2 = root_from(lab.map("stsr"), lab.t);
    Root concl = root_from(lab.map(m == Mutant::ShortConclusion ? "sts" : "stst"), lab.r);
    CoxElt excluded(lab.map("stst") + lab.r);
    for (auto& w : ball(L, cap)) {
      bool in1 = member(w, h1);
      bool in2 = member(w, h2);
      if (!in1 || !in2) {
        ++rep.vacuous;
        continue;
      }
      if (w == excluded) {
        ++boundary;
        continue;
      }
      ++rep.tuples_checked;
      if (!member(w, concl)) rep.violate({{"labeling", lab.name()}, {"w", w.str()}});
    }
  }
  rep.extra["boundary_cases"] = boundary;
  rep.elapsed_ms = sw.ms();
  return rep;
}

struct RegisteredMutant {
  std::string lemma;
  Mutant mutant;
  std::function<SweepReport(int)> run;
};

inline std::vector<RegisteredMutant> lemma_mutants() {
  return {
      {"wordsincoxetergroup", Mutant::PlusTwo, [](int L) { return verify_wordsincoxetergroup(L, Mutant::PlusTwo); }},
      {"not both down", Mutant::BothUp, [](int L) { return verify_not_both_down(L, Mutant::BothUp); }},
      {"mingallinrep", Mutant::WrongGamma, [](int L) { return verify_mingallinrep(L, Mutant::WrongGamma); }},
      {"Subset contained in certain root", Mutant::ShortConclusion,
       [](int L) { return verify_subset_lemma(L, Mutant::ShortConclusion); }},
  };
}

}  // namespace kmtree
