#pragma once

#include <chrono>
#include <string>
#include <vector>

#include "json.hpp"

namespace kmtree {

using json = nlohmann::ordered_json;

/** \brief Outcome of an exhaustive sweep. */
struct SweepReport {
  std::string lemma;
  int radius = 0;
  long tuples_checked = 0;
  long vacuous = 0;
  long violation_count = 0;
  std::vector<json> violations;  // first kMaxKept counterexamples
  json extra = json::object();
  double elapsed_ms = 0;

  static constexpr std::size_t kMaxKept = 50;

  bool pass() const { return violation_count == 0; }

  void violate(json tuple) {
    ++violation_count;
    if (violations.size() < kMaxKept) violations.push_back(std::move(tuple));
  }

  json to_json(bool with_time = true) const {
    json j;
    j["lemma"] = lemma;
    j["radius"] = radius;
    j["tuples_checked"] = tuples_checked;
    j["vacuous"] = vacuous;
    j["violation_count"] = violation_count;
    j["violations"] = violations;
    j["pass"] = pass();
    if (!extra.empty()) j["details"] = extra;
    if (with_time) j["elapsed_ms"] = elapsed_ms;
    return j;
  }
};

class Stopwatch {
 public:
  double ms() const {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0_).count();
  }

 private:
  std::chrono::steady_clock::time_point t0_ = std::chrono::steady_clock::now();
};

/** \brief A list of finite checks for one lemma. */
struct Certificate {
  struct Check {
    std::string description;
    bool pass;
    json data;
  };
  std::string lemma;
  std::string residue;
  std::vector<Check> checks;
  std::vector<std::string> assumptions;

  bool pass() const {
    for (auto& c : checks)
      if (!c.pass) return false;
    return !checks.empty();
  }
  bool add(std::string description, bool ok, json data = json::object()) {
    checks.push_back({std::move(description), ok, std::move(data)});
    return ok;
  }
  void assume(std::string a) { assumptions.push_back(std::move(a)); }

  json to_json() const {
    json j;
    j["lemma"] = lemma;
    j["residue"] = residue;
    json cs = json::array();
    for (auto& c : checks) {
      json x;
      x["description"] = c.description;
      x["pass"] = c.pass;
      if (!c.data.empty()) x["data"] = c.data;
      cs.push_back(x);
    }
    j["checks"] = cs;
    j["assumptions"] = assumptions;
    j["pass"] = pass();
    return j;
  }
};

}  // namespace kmtree
