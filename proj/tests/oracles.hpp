#pragma once
// Independent oracles. None of these use the reflection representation or the tree-product engine.

#include <algorithm>
#include <cstdint>
#include <map>
#include <queue>
#include <set>
#include <string>
#include <vector>

namespace oracle {

/// all words reachable by braid moves xyxy <-> yxyx (every m = 4)
inline std::set<std::string> braid_class(const std::string& w) {
  std::set<std::string> seen{w};
  std::vector<std::string> todo{w};
  while (!todo.empty()) {
    std::string x = todo.back();
    todo.pop_back();
    for (std::size_t i = 0; i + 4 <= x.size(); ++i) {
      char a = x[i], b = x[i + 1];
      if (a != b && x[i + 2] == a && x[i + 3] == b) {
        std::string y = x;
        y[i] = b, y[i + 1] = a, y[i + 2] = b, y[i + 3] = a;
        if (seen.insert(y).second) todo.push_back(y);
      }
    }
  }
  return seen;
}

/// Tits' word problem: delete an xx from some braid-equivalent word until none exists,
/// then take the ShortLex-least word of the class.
inline std::string normalize(std::string w) {
  for (;;) {
    bool cut = false;
    for (auto& x : braid_class(w)) {
      for (std::size_t i = 0; i + 1 < x.size(); ++i)
        if (x[i] == x[i + 1]) {
          w = x.substr(0, i) + x.substr(i + 2);
          cut = true;
          break;
        }
      if (cut) break;
    }
    if (!cut) return *braid_class(w).begin();
  }
}

/// ball sizes |{w : l(w) <= L}| for L = 0..n, by BFS over normal forms
inline std::vector<std::size_t> ball_sizes(int n) {
  std::set<std::string> seen{""};
  std::vector<std::string> layer{""};
  std::vector<std::size_t> out{1};
  for (int k = 0; k < n; ++k) {
    std::vector<std::string> next;
    for (auto& x : layer)
      for (char g : {'r', 's', 't'}) {
        std::string y = normalize(x + g);
        if (y.size() == x.size() + 1 && seen.insert(y).second) next.push_back(y);
      }
    layer = std::move(next);
    out.push_back(seen.size());
  }
  return out;
}

/// Elements of A *_C B with syllable length <= L (letters: nonidentity elements of A and B).
/// Normal forms c r_1 ... r_n with nontrivial transversal elements of alternating factors.
inline std::vector<std::uint64_t> amalgam_ball(std::uint64_t A, std::uint64_t B, std::uint64_t C, int L) {
  std::uint64_t a = A / C - 1, b = B / C - 1;
  std::vector<std::uint64_t> exact{1};
  for (int n = 1; n <= L; ++n) {
    std::uint64_t from_a = 1, from_b = 1;
    for (int i = 0; i < n; ++i) {
      from_a *= (i % 2 == 0) ? a : b;
      from_b *= (i % 2 == 0) ? b : a;
    }
    std::uint64_t k = C * (from_a + from_b);
    if (n == 1) k += C - 1;  // C \ {1} sits in both factors
    exact.push_back(k);
  }
  std::vector<std::uint64_t> out;
  std::uint64_t acc = 0;
  for (auto k : exact) out.push_back(acc += k);
  return out;
}

/// elements of a finite group given by a multiplication function, by closure from generators
template <class Mul, class T>
std::set<T> closure(const std::vector<T>& gens, const T& id, Mul mul) {
  std::set<T> seen{id};
  std::queue<T> q;
  q.push(id);
  while (!q.empty()) {
    T x = q.front();
    q.pop();
    for (auto& g : gens) {
      T y = mul(x, g);
      if (seen.insert(y).second) q.push(y);
    }
  }
  return seen;
}

}  // namespace oracle
