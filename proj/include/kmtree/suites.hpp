#pragma once
// Whole-module suites as the CLI and the acceptance gate run them.

#include "kmtree/lemmas.hpp"
#include "kmtree/certificates.hpp"
#include "kmtree/reduction.hpp"

namespace kmtree {

inline constexpr int kCoxeterCap = 12;
inline constexpr int kBlueprintCap = 8;

/** \brief One suite's documents; pass iff every document passes. */
struct SuiteResult {
  std::string suite;
  json config = json::object();
  std::vector<json> documents;
  double elapsed_ms = 0;

  bool pass() const {
    if (documents.empty()) return false;
    for (auto& d : documents)
      if (!d.value("pass", false)) return false;
    return true;
  }
  json to_json(bool with_time = true) const {
    json j;
    j["suite"] = suite;
    j["config"] = config;
    j["pass"] = pass();
    j["documents"] = documents;
    if (with_time) j["elapsed_ms"] = elapsed_ms;
    return j;
  }
};

/// ball sizes, regression pins and per-element consistency of the kernel
inline SuiteResult verify_coxeter(int radius) {
  detail::require(radius, 0, kCoxeterCap);
  Stopwatch sw;
  SuiteResult out{"coxeter", {{"radius", radius}}};
  SweepReport rep;
  rep.lemma = "ball consistency";
  rep.radius = radius;
  auto B = ball(radius, kCoxeterCap);
  std::vector<std::size_t> sizes;
  for (auto& w : B) {
    std::size_t l = w.length();
    if (l >= sizes.size()) sizes.resize(l + 1, 0);
    ++sizes[l];
    ++rep.tuples_checked;
    bool ok = normal_form(w.word()) == w.word() && (w * w.inverse()).is_identity() &&
              inversion_set(w).size() == l;
    for (char g : kLetters) {
      std::size_t l2 = (w * g).length();
      ok = ok && (l2 == l + 1 || l2 + 1 == l);
    }
    if (!ok) rep.violate({{"w", w.str()}});
  }
  std::vector<std::size_t> cumulative;
  std::size_t acc = 0;
  for (auto n : sizes) cumulative.push_back(acc += n);
  rep.extra["ball_sizes"] = cumulative;
  if (radius >= 2 && cumulative[2] != 10) rep.violate({{"pin", "|ball(2)| = 10"}, {"got", cumulative[2]}});
  if (radius >= 4 && cumulative[4] != 43) rep.violate({{"pin", "|ball(4)| = 43"}, {"got", cumulative[4]}});
  rep.elapsed_ms = sw.ms();
  out.documents.push_back(rep.to_json(false));
  out.elapsed_ms = sw.ms();
  return out;
}

/// the four lemma sweeps at their radii, plus each registered mutant at radius 4
inline SuiteResult verify_lemmas(int words_radius = 6, int not_both_down_radius = 7, int mingallery_radius = 8,
                                 int subset_radius = 10) {
  Stopwatch sw;
  SuiteResult out{"lemmas",
                  {{"wordsincoxetergroup", words_radius},
                   {"not_both_down", not_both_down_radius},
                   {"mingallinrep", mingallery_radius},
                   {"subset", subset_radius}}};
  std::vector<std::future<SweepReport>> fs;
  fs.push_back(std::async(std::launch::async, [=] { return verify_wordsincoxetergroup(words_radius); }));
  fs.push_back(std::async(std::launch::async, [=] { return verify_not_both_down(not_both_down_radius); }));
  fs.push_back(std::async(std::launch::async, [=] { return verify_mingallinrep(mingallery_radius); }));
  fs.push_back(std::async(std::launch::async, [=] { return verify_subset_lemma(subset_radius); }));
  for (auto& f : fs) out.documents.push_back(f.get().to_json(false));
  for (auto& m : lemma_mutants()) {
    auto rep = m.run(4);
    json j = rep.to_json(false);
    // a mutant document passes when the sweep catches it
    j = {{"lemma", m.lemma + " (mutant)"}, {"violation_count", rep.violation_count}, {"pass", rep.violation_count > 0}};
    out.documents.push_back(j);
  }
  out.elapsed_ms = sw.ms();
  return out;
}

/// |U_w| = 2^l(w) up to max_length, gallery independence up to min(max_length, 6), V_{r_xy} of index 2
inline SuiteResult verify_blueprint(int max_length) {
  detail::require(max_length, 0, kBlueprintCap);
  Stopwatch sw;
  SuiteResult out{"blueprint", {{"max_length", max_length}}};
  auto M = kac_moody_blueprint();
  SweepReport orders;
  orders.lemma = "order of U_w";
  orders.radius = max_length;
  SweepReport indep;
  indep.lemma = "gallery independence";
  indep.radius = std::min(max_length, 6);
  for (auto& w : ball(max_length, kBlueprintCap)) {
    ++orders.tuples_checked;
    BlueprintGroup G(Gallery(w.word()), M);
    if (G.order() != (Mask(1) << w.length())) orders.violate({{"w", w.str()}, {"order", G.order()}});
    if (static_cast<int>(w.length()) <= indep.radius) {
      ++indep.tuples_checked;
      auto r = gallery_independence(w, M);
      if (!r.ok) indep.violate({{"w", w.str()}, {"a", r.gallery_a}, {"b", r.gallery_b}});
    }
  }
  out.documents.push_back(orders.to_json(false));
  out.documents.push_back(indep.to_json(false));

  SweepReport v;
  v.lemma = "V_{r_xy} has the eight listed elements and index 2";
  for (std::string J : {"rs", "rt", "st"}) {
    ++v.tuples_checked;
    Residue R(J, CoxElt());
    auto V = subgroup_V(R);
    auto& amb = V.ambient;
    Mask ux = amb->gen(simple_root(J[0])), uy = amb->gen(simple_root(J[1]));
    std::set<Mask> listed{0, ux, uy};
    for (auto& p : {std::vector<Mask>{ux, uy}, {uy, ux}, {ux, uy, ux}, {uy, ux, uy}, {ux, uy, ux, uy}})
      listed.insert(amb->product(p));
    bool same = std::set<Mask>(V.elements.begin(), V.elements.end()) == listed;
    bool braid = amb->product({ux, uy, ux, uy}) == amb->product({uy, ux, uy, ux});
    if (!same || !braid || V.order() != 8 || amb->order() != 2 * V.order())
      v.violate({{"type", J}, {"order", V.order()}, {"ambient", amb->order()}, {"listed", listed.size()}});
  }
  out.documents.push_back(v.to_json(false));
  out.elapsed_ms = sw.ms();
  return out;
}

/// rank-2 model: constants, axioms, the figure, the U_+ lemma and the relabeled model
inline SuiteResult verify_quadrangle() {
  Stopwatch sw;
  SuiteResult out{"quadrangle"};
  auto Q = build_quadrangle();
  SweepReport consts;
  consts.lemma = "model constants";
  auto pin = [&](const char* what, std::size_t got, std::size_t want) {
    ++consts.tuples_checked;
    if (got != want) consts.violate({{"what", what}, {"got", got}, {"want", want}});
  };
  pin("group order", Q.M.group_order(), 720);
  pin("chambers", Q.M.chamber_count(), 45);
  pin("Borel order", Q.M.borel_order(), 16);
  for (char x : {'s', 't'}) pin("panel size", Q.M.panel(Q.c(), x).size(), 3);
  consts.extra = {{"u_s", Q.us}, {"u_t", Q.ut}, {"action", Q.right_action ? "right" : "left"}};
  out.documents.push_back(consts.to_json(false));
  out.documents.push_back(verify_axioms(Q).to_json(false));
  out.documents.push_back(verify_diagram(Q).to_json(false));
  out.documents.push_back(verify_lemma_Uplus(Q).to_json(false));
  out.documents.push_back(verify_rt_relabel(Q).to_json(false));
  out.elapsed_ms = sw.ms();
  return out;
}

/// normal-form batteries on every construction at R_st(1), then contract/fold replays with ball counts
inline SuiteResult verify_bass_serre(long words = 10000, int move_radius = 4) {
  Stopwatch sw;
  SuiteResult out{"bass-serre", {{"words", words}, {"move_radius", move_radius}, {"residue", "R_st(1)"}}};
  Residue R("st", CoxElt());
  std::vector<std::future<json>> fs;
  for (auto k : {Kind::V_R, Kind::O_R, Kind::V_Rs, Kind::O_Rs, Kind::H_R, Kind::K_Rs})
    fs.push_back(std::async(std::launch::async, [R, k, words] {
      auto c = build_construction(k, R);
      TreeProduct P(c.tree, c.name());
      auto b = nf_battery(P, words, 3);
      json j = {{"lemma", "normal-form battery " + c.name()}};
      j.update(b.to_json());
      j["pass"] = b.failures == 0 && b.trials >= words;
      return j;
    }));
  auto move_doc = [move_radius](std::string what, const TreeOfGroups& before, const Move& m) {
    // H_R's syllable ball of radius 4 has about 3.4M elements, past the engine cap
    int radius = before.size() >= 5 ? std::min(move_radius, 3) : move_radius;
    auto mc = check_move(before, m, 2000, radius);
    json j = {{"lemma", what}, {"radius", radius}};
    j.update(mc.to_json());
    j["pass"] = mc.pass();
    return j;
  };
  auto contraction = [R, move_doc](Kind k, std::vector<int> S) {
    return [=] {
      auto c = build_construction(k, R);
      return move_doc("contract " + c.name(), c.tree, contract(c.tree, S));
    };
  };
  fs.push_back(std::async(std::launch::async, contraction(Kind::V_R, {0, 1})));
  fs.push_back(std::async(std::launch::async, contraction(Kind::O_Rs, {1, 2})));
  fs.push_back(std::async(std::launch::async, contraction(Kind::H_R, {1, 2, 3})));
  fs.push_back(std::async(std::launch::async, [R, move_doc] {
    // U_srs folded onto its U_sr subgroup across the edge to V
    auto c = build_construction(Kind::V_Rs, R);
    auto& G0 = *c.tree.groups[0];
    std::vector<Elem> H{G0.id()};
    for (auto& x : root_subgroup_in(G0, inversion_set(CoxElt("sr"))).second) H.push_back(x);
    return move_doc("fold " + c.name(), c.tree, fold(c.tree, c.tree.edge_between(0, 1), H, "U_sr"));
  }));
  for (auto& f : fs) out.documents.push_back(f.get());
  out.elapsed_ms = sw.ms();
  return out;
}

/// "1:st", "r:st" style residue names; the word may be any word in r, s, t
inline Residue parse_residue(const std::string& spec) {
  auto colon = spec.find(':');
  if (colon == std::string::npos) throw std::invalid_argument("residue must look like <word>:<type>, got " + spec);
  std::string w = spec.substr(0, colon), J = spec.substr(colon + 1);
  if (w == "1") w.clear();
  for (char c : w + J)
    if (c != 'r' && c != 's' && c != 't') throw std::invalid_argument("letter '" + std::string(1, c) + "' in " + spec);
  if (J.size() != 2 || J[0] == J[1]) throw std::invalid_argument("type must be two distinct letters: " + spec);
  return Residue(J, CoxElt(w));
}

/// certificates for the given residues (default: R_J(1) and R_1), plus the generating-set check per labeling
inline SuiteResult verify_pipeline(std::vector<Residue> residues = {}) {
  Stopwatch sw;
  bool defaults = residues.empty();
  if (defaults) residues = pipeline_residues();
  SuiteResult out{"section4"};
  std::vector<std::string> names;
  for (auto& R : residues) names.push_back(R.str());
  out.config["residues"] = names;
  if (defaults)
    for (auto& lab : all_labelings()) out.documents.push_back(dset_check(lab).to_json());
  std::vector<std::future<std::vector<Certificate>>> fs;
  for (auto& R : residues) fs.push_back(std::async(std::launch::async, [R] { return section4_pipeline(R); }));
  std::vector<Certificate> all;
  for (auto& f : fs)
    for (auto& c : f.get()) {
      out.documents.push_back(c.to_json());
      all.push_back(std::move(c));
    }
  // enumerate the steps left to a word-problem oracle
  json a = json::array();
  for (auto& s : assumptions_of(all)) a.push_back(s);
  out.documents.push_back({{"lemma", "assumption-tagged steps"}, {"assumptions", a}, {"pass", true}});
  out.elapsed_ms = sw.ms();
  return out;
}

/// 10^4 random reductions and the exhaustive constrained sweep with proof replay
inline SuiteResult verify_reduction(long random_words = 10000, int max_syllables = 6, std::uint64_t seed = 35) {
  Stopwatch sw;
  SuiteResult out{"reduction", {{"random_words", random_words}, {"max_syllables", max_syllables}, {"seed", seed}}};
  SweepReport red;
  red.lemma = "reduction terminates, decreases n and preserves the normal form";
  std::mt19937_64 rng(seed);
  for (long i = 0; i < random_words; ++i) {
    auto w = random_altword(rng);
    auto r = theorem35_reduce(w);
    ++red.tuples_checked;
    if (!r.pass()) red.violate({{"word", w.str()}});
  }
  out.documents.push_back(red.to_json(false));
  SweepReport ex;
  ex.lemma = "constrained words are non-identity and the replay completes";
  ex.radius = max_syllables;
  auto& H = h_group();
  for (auto& w : constrained_words(max_syllables)) {
    ++ex.tuples_checked;
    bool nonid = !H.product().is_identity(w.evaluate());
    bool traced = lemma33_trace(w).pass();
    if (!nonid || !traced) ex.violate({{"word", w.str()}, {"non_identity", nonid}, {"trace", traced}});
  }
  out.documents.push_back(ex.to_json(false));
  out.elapsed_ms = sw.ms();
  return out;
}

}  // namespace kmtree
