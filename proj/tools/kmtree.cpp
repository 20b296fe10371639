// kmtree: run the verification suites, reduce and trace words, emit the aggregated report.

#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <thread>

#include "CLI11.hpp"
#include "kmtree/suites.hpp"

using namespace kmtree;
namespace fs = std::filesystem;

namespace {

constexpr const char* kVersion = "1.0.0";

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  int coxeter_radius = 8;
  int blueprint_max_length = 7;
  int words_radius = 6, not_both_down_radius = 7, mingallery_radius = 8, subset_radius = 10;
  std::vector<std::string> residues;
  std::string cache_dir;
  std::string out;
  int jobs = 0;
  bool json_stdout = false;

  json to_json() const {
    return {{"coxeter_radius", coxeter_radius},
            {"blueprint_max_length", blueprint_max_length},
            {"lemma_radii",
             {{"wordsincoxetergroup", words_radius},
              {"not_both_down", not_both_down_radius},
              {"mingallinrep", mingallery_radius},
              {"subset", subset_radius}}},
            {"residues", residues},
            {"generator_order", "r < s < t"}};
  }
};

using Job = std::function<SuiteResult()>;

/// flag errors carry the flag name
template <class F>
auto with_flag(const std::string& flag, F f) {
  try {
    return f();
  } catch (const ResourceError& e) {
    throw UsageError(flag + ": " + e.what());
  } catch (const std::invalid_argument& e) {
    throw UsageError(flag + ": " + e.what());
  }
}

std::string cache_key(const std::string& suite, const json& cfg) {
  return suite + "-" + std::to_string(std::hash<std::string>()(cfg.dump())) + ".json";
}

/// suite results keyed by suite name and config; a miss runs the job and stores the result
SuiteResult cached(const RunConfig& rc, const std::string& suite, const json& cfg, const Job& job) {
  if (rc.cache_dir.empty()) return job();
  fs::path p = fs::path(rc.cache_dir) / cache_key(suite, cfg);
  if (fs::exists(p)) {
    std::ifstream in(p);
    json j = json::parse(in, nullptr, false);
    if (!j.is_discarded() && j.value("config_key", json()) == cfg) {
      SuiteResult r{j["suite"], j["config"]};
      for (auto& d : j["documents"]) r.documents.push_back(d);
      return r;
    }
  }
  auto r = job();
  std::error_code ec;
  fs::create_directories(rc.cache_dir, ec);
  std::ofstream o(p);
  if (o) {
    json j = r.to_json(false);
    j["config_key"] = cfg;
    o << j.dump() << "\n";
  }
  return r;
}

std::vector<SuiteResult> run_pool(const std::vector<Job>& jobs, int n_workers) {
  std::vector<SuiteResult> out(jobs.size());
  std::vector<std::exception_ptr> errs(jobs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next++) < jobs.size();) {
      try {
        out[i] = jobs[i]();
      } catch (...) {
        errs[i] = std::current_exception();
      }
    }
  };
  int n = std::max(1, std::min<int>(n_workers, static_cast<int>(jobs.size())));
  std::vector<std::thread> ts;
  for (int k = 0; k < n; ++k) ts.emplace_back(worker);
  for (auto& t : ts) t.join();
  for (auto& e : errs)
    if (e) std::rethrow_exception(e);
  return out;
}

json report_of(const RunConfig& rc, const std::vector<SuiteResult>& rs) {
  json j;
  j["tool"] = "kmtree";
  j["version"] = kVersion;
  j["config"] = rc.to_json();
  bool pass = !rs.empty();
  json suites = json::array();
  for (auto& r : rs) {
    pass = pass && r.pass();
    suites.push_back(r.to_json());
  }
  j["suites"] = suites;
  j["pass"] = pass;
  return j;
}

void print_summary(const std::vector<SuiteResult>& rs) {
  for (auto& r : rs) {
    std::cout << (r.pass() ? "PASS " : "FAIL ") << r.suite << "\n";
    for (auto& d : r.documents) {
      std::cout << "  " << (d.value("pass", false) ? "ok   " : "FAIL ") << d.value("lemma", std::string("?"));
      if (d.contains("residue")) std::cout << " [" << d["residue"].get<std::string>() << "]";
      if (d.contains("violation_count")) std::cout << ": " << d["violation_count"].get<long>() << " violations";
      if (d.contains("assumptions") && !d["assumptions"].empty())
        std::cout << " (" << d["assumptions"].size() << " assumptions)";
      std::cout << "\n";
    }
  }
}

int finish(const RunConfig& rc, const std::vector<SuiteResult>& rs) {
  if (rs.empty()) throw UsageError("empty selection: no suite to run");
  auto rep = report_of(rc, rs);
  if (!rc.out.empty()) {
    std::ofstream o(rc.out);
    if (!o) throw UsageError("--out: cannot write " + rc.out);
    o << rep.dump(2) << "\n";
  }
  if (rc.json_stdout)
    std::cout << rep.dump(2) << "\n";
  else
    print_summary(rs);
  return rep["pass"].get<bool>() ? 0 : 1;
}

std::vector<Residue> parse_residues(const std::vector<std::string>& specs) {
  std::vector<Residue> out;
  for (auto& s : specs) out.push_back(with_flag("--residue", [&] { return parse_residue(s); }));
  return out;
}

Job job_coxeter(const RunConfig& rc) {
  int L = rc.coxeter_radius;
  return [&rc, L] { return cached(rc, "coxeter", {{"radius", L}}, [L] { return verify_coxeter(L); }); };
}
Job job_lemmas(const RunConfig& rc) {
  return [&rc] {
    return cached(rc, "lemmas", rc.to_json()["lemma_radii"], [&rc] {
      return verify_lemmas(rc.words_radius, rc.not_both_down_radius, rc.mingallery_radius, rc.subset_radius);
    });
  };
}
Job job_blueprint(const RunConfig& rc) {
  int L = rc.blueprint_max_length;
  return [&rc, L] { return cached(rc, "blueprint", {{"max_length", L}}, [L] { return verify_blueprint(L); }); };
}
Job job_quadrangle(const RunConfig& rc) {
  return [&rc] { return cached(rc, "quadrangle", json::object(), [] { return verify_quadrangle(); }); };
}
Job job_pipeline(const RunConfig& rc, std::vector<Residue> rs) {
  return [&rc, rs] { return cached(rc, "section4", {{"residues", rc.residues}}, [rs] { return verify_pipeline(rs); }); };
}
Job job_bass_serre(const RunConfig& rc) {
  return [&rc] { return cached(rc, "bass-serre", json::object(), [] { return verify_bass_serre(); }); };
}
Job job_reduction(const RunConfig& rc) {
  return [&rc] { return cached(rc, "reduction", json::object(), [] { return verify_reduction(); }); };
}

void check_caps(const RunConfig& rc) {
  with_flag("--radius", [&] { return detail::require(rc.coxeter_radius, 0, kCoxeterCap), 0; });
  with_flag("--max-length", [&] { return detail::require(rc.blueprint_max_length, 0, kBlueprintCap), 0; });
  with_flag("--subset-radius", [&] { return detail::require(rc.subset_radius, 2, 12), 0; });
}

// ---------------------------------------------------------------- nf

GroupPtr group_of(const json& v) {
  if (v.contains("U")) return U_group(CoxElt(v["U"].get<std::string>()));
  if (v.contains("V")) {
    auto ty = v.at("type").get<std::string>();
    if (ty.size() != 2) throw std::invalid_argument("V vertex needs a two-letter type");
    return V_group(CoxElt(v["V"].get<std::string>()), ty[0], ty[1]);
  }
  throw std::invalid_argument("vertex needs a \"U\" or \"V\" entry: " + v.dump());
}

/// {"construction": "H_R", "residue": "1:st", "s": "s"} or {"sequence": [{"U": "sr"}, {"V": "", "type": "st"}, ...]}
TreeOfGroups load_tree(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("--tree: cannot read " + path);
  json j = json::parse(in, nullptr, false);
  if (j.is_discarded()) throw UsageError("--tree: not a JSON document: " + path);
  return with_flag("--tree", [&] {
    if (j.contains("construction")) {
      std::string s = j.value("s", std::string());
      return build_construction(parse_kind(j["construction"].get<std::string>()),
                                parse_residue(j.at("residue").get<std::string>()), s.empty() ? 0 : s[0])
          .tree;
    }
    std::vector<std::pair<std::string, GroupPtr>> vs;
    for (auto& v : j.at("sequence")) {
      auto g = group_of(v);
      vs.push_back({g->name(), g});
    }
    if (vs.empty()) throw std::invalid_argument("empty sequence");
    auto T = hat_sequence(vs);
    auto val = validate(T);
    if (!val.ok()) throw std::invalid_argument(val.issues.front());
    return T;
  });
}

/// "0:+s*+srs,2:+t,1:1": vertex index, then a product of root generators named by sign and reflection
TPWord parse_tp_word(const TreeOfGroups& T, const std::string& spec) {
  TPWord w;
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ',')) {
    auto colon = item.find(':');
    if (colon == std::string::npos) throw UsageError("--word: item '" + item + "' is not <vertex>:<roots>");
    int v = std::stoi(item.substr(0, colon));
    if (v < 0 || v >= static_cast<int>(T.size())) throw UsageError("--word: no vertex " + std::to_string(v));
    auto& G = *T.groups[v];
    Elem g = G.id();
    std::stringstream rs(item.substr(colon + 1));
    std::string r;
    while (std::getline(rs, r, '*')) {
      if (r == "1") continue;
      auto it = std::find_if(G.roots().begin(), G.roots().end(), [&](auto& kv) { return kv.first.str() == r; });
      if (it == G.roots().end()) throw UsageError("--word: root " + r + " is not a generator of " + G.name());
      g = G.mul(g, it->second);
    }
    w.push_back({v, g});
  }
  if (w.empty()) throw UsageError("--word: empty word");
  return w;
}

std::string elem_str(const Group& G, const Elem& e) {
  if (auto F = dynamic_cast<const FiniteGroup*>(&G)) return F->elem_name(e[0]);
  return "?";
}

int run_nf(const std::string& tree_file, const std::string& word) {
  auto T = load_tree(tree_file);
  TreeProduct P(T, "G_T");
  auto w = parse_tp_word(T, word);
  Elem x = P.evaluate(w);
  json syl = json::array();
  for (auto& [v, g] : P.to_word(x)) syl.push_back({{"vertex", v}, {"group", T.names[v]}, {"element", elem_str(*T.groups[v], g)}});
  json j = {{"input", word}, {"normal_form", syl}, {"syllables", syl.size()}, {"identity", P.is_identity(x)}};
  std::cout << j.dump(2) << "\n";
  return 0;
}

// ---------------------------------------------------------------- reduce / trace

AltWord word_arg(const std::string& spec) {
  try {
    return parse_word(spec);
  } catch (const std::exception& e) {
    throw UsageError(std::string("--word: ") + e.what());
  }
}

int run_reduce(const std::string& spec) {
  auto r = theorem35_reduce(word_arg(spec));
  std::cout << r.output.str() << "\n";
  std::cerr << r.to_json().dump(2) << "\n";
  return r.pass() ? 0 : 1;
}

int run_trace(const std::string& spec) {
  auto c = lemma33_trace(word_arg(spec));
  std::cout << c.to_json().dump(2) << "\n";
  return c.pass() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "kmtree: finite verification of the rank-3 (4,4,4) tree-product constructions.\n"
      "Words for reduce/trace are comma-separated items: u_sr, u_tr, u_rt, u_rt*u_tr (one symbol),\n"
      "and V elements as *-products of u_s, u_t or 1, e.g. \"u_sr,u_s*u_t,u_sr,u_t\".\n"
      "Exit status: 0 all checks pass, 1 a violation or failed check, 2 usage error."};
  app.require_subcommand(1);
  app.fallthrough();
  RunConfig rc;
  if (const char* d = std::getenv("KMTREE_CACHE_DIR")) rc.cache_dir = d;
  app.add_option("--cache-dir", rc.cache_dir, "cache directory for suite results (env KMTREE_CACHE_DIR)");
  app.add_option("-j,--jobs", rc.jobs, "worker threads (default: hardware concurrency)");
  app.add_flag("--json", rc.json_stdout, "print the report document instead of the summary");

  auto* verify = app.add_subcommand("verify", "run one suite");
  verify->require_subcommand(0, 1);
  verify->fallthrough();
  verify->add_option("--out", rc.out, "also write the report document here");
  auto* v_cox = verify->add_subcommand("coxeter", "ball sizes and kernel consistency");
  v_cox->add_option("--radius", rc.coxeter_radius, "ball radius (cap 12)");
  auto* v_lem = verify->add_subcommand("lemmas", "length and root lemma sweeps with their mutants");
  v_lem->add_option("--subset-radius", rc.subset_radius, "radius of the subset sweep");
  auto* v_bp = verify->add_subcommand("blueprint", "orders, gallery independence and V");
  v_bp->add_option("--max-length", rc.blueprint_max_length, "largest l(w) (cap 8)");
  auto* v_q = verify->add_subcommand("quadrangle", "rank-2 model sweeps");
  auto* v_pipe = verify->add_subcommand("section4", "construction certificates");
  v_pipe->add_option("--residue", rc.residues, "<word>:<type>, e.g. 1:st or r:st (repeatable)");
  auto* v_bs = verify->add_subcommand("bass-serre", "normal-form batteries and move replays");
  auto* v_red = verify->add_subcommand("reduction", "random reductions and the constrained-word sweep");

  std::string word, tree;
  auto* reduce = app.add_subcommand("reduce", "reduce an alternating word to a constrained one");
  reduce->add_option("--word", word, "word specification")->required();
  auto* trace = app.add_subcommand("trace", "replay the normal-form induction on a constrained word");
  trace->add_option("--word", word, "word specification")->required();
  auto* nf = app.add_subcommand("nf", "normal form in a tree product");
  nf->add_option("--tree", tree, "JSON tree spec")->required();
  nf->add_option("--word", word, "<vertex>:<root>*<root>,... with roots named like +s or +srs")->required();
  auto* report = app.add_subcommand("report", "run every suite and write the aggregated report");
  report->add_option("--out", rc.out, "report path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc_ = app.exit(e);
    return rc_ == 0 ? 0 : 2;
  }
  if (rc.jobs <= 0) rc.jobs = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));

  try {
    check_caps(rc);
    if (reduce->parsed()) return run_reduce(word);
    if (trace->parsed()) return run_trace(word);
    if (nf->parsed()) return run_nf(tree, word);
    std::vector<Job> jobs;
    if (report->parsed()) {
      rc.residues.clear();
      jobs = {job_coxeter(rc),    job_lemmas(rc),  job_blueprint(rc),
              job_quadrangle(rc), job_bass_serre(rc), job_reduction(rc), job_pipeline(rc, {})};
    } else {
      if (v_cox->parsed()) jobs.push_back(job_coxeter(rc));
      if (v_lem->parsed()) jobs.push_back(job_lemmas(rc));
      if (v_bp->parsed()) jobs.push_back(job_blueprint(rc));
      if (v_q->parsed()) jobs.push_back(job_quadrangle(rc));
      if (v_bs->parsed()) jobs.push_back(job_bass_serre(rc));
      if (v_red->parsed()) jobs.push_back(job_reduction(rc));
      if (v_pipe->parsed()) jobs.push_back(job_pipeline(rc, parse_residues(rc.residues)));
    }
    if (jobs.empty()) throw UsageError("empty selection: name a suite after 'verify'");
    return finish(rc, run_pool(jobs, rc.jobs));
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
