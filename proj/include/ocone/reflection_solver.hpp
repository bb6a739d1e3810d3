#pragma once

// Reflection words on Lambda^m.
//
// A word (a_1, ..., a_k) acts left to right: the result is
// Theta^{a_k}( ... Theta^{a_1}(s)).  The solver builds words over levels
// {0,1,2} that carry any walk to the alternating path (0,1,0,1,...), by
// induction on the horizon; any two walks are then joined through that
// path using that every Theta^a is an involution.  The orbit graph is an
// independent breadth-first oracle over the same action.

#include <algorithm>
#include <cstdint>
#include <deque>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <utility>
#include <vector>

#include "ocone/path.hpp"

namespace ocone {

struct ReflectionWord {
  std::vector<int> levels;

  [[nodiscard]] std::size_t size() const { return levels.size(); }
  [[nodiscard]] bool empty() const { return levels.empty(); }

  friend bool operator==(const ReflectionWord&, const ReflectionWord&) = default;

  ReflectionWord& operator+=(const ReflectionWord& o) {
    levels.insert(levels.end(), o.levels.begin(), o.levels.end());
    return *this;
  }
  friend ReflectionWord operator+(ReflectionWord a, const ReflectionWord& b) { return a += b; }

  [[nodiscard]] ReflectionWord reversed() const {
    return ReflectionWord{std::vector<int>(levels.rbegin(), levels.rend())};
  }

  /// Cancels adjacent equal letters (Theta^a Theta^a = id).  The walk visits
  /// a subset of the same intermediate paths, so effectiveness is kept.
  [[nodiscard]] ReflectionWord reduced() const {
    std::vector<int> out;
    for (int a : levels) {
      if (!out.empty() && out.back() == a)
        out.pop_back();
      else
        out.push_back(a);
    }
    return ReflectionWord{std::move(out)};
  }
};

template <PathLike P>
P apply_word(const P& s, const ReflectionWord& w) {
  P cur = s;
  for (int a : w.levels) cur = reflect(cur, a);
  return cur;
}

/// s in Lambda_a^m, i.e. T_a(s) <= m - 1, equivalently Theta^a(s) != s.
inline bool is_effective(const WalkPath& s, int a) {
  const HitTime t = first_passage(s, a);
  return t.is_finite() && s.horizon() >= 1 && t.index() <= s.horizon() - 1;
}

/// Every letter moves the current path.
inline bool is_effective_word(const WalkPath& s, const ReflectionWord& w) {
  WalkPath cur = s;
  for (int a : w.levels) {
    if (!is_effective(cur, a)) return false;
    cur = reflect(cur, a);
  }
  return true;
}

/// (0,1,0,1,...) of horizon m.
inline WalkPath alternating_path(std::size_t m) {
  std::vector<int> v(m + 1, 0);
  for (std::size_t k = 1; k <= m; ++k) v[k] = (k % 2 == 1) ? 1 : 0;
  return WalkPath(std::move(v));
}

/// Alternating path of horizon m-1 followed by one more value.
inline WalkPath alternating_then(std::size_t m_minus_1, int last) {
  std::vector<int> v = alternating_path(m_minus_1).values();
  v.push_back(last);
  return WalkPath(std::move(v));
}

/// Shortest word from s to t over the given levels, by BFS on Lambda^m.
/// Returns nullopt when t is not in the orbit of s.
inline std::optional<ReflectionWord> bfs_shortest_word(const WalkPath& s, const WalkPath& t,
                                                       const std::vector<int>& levels) {
  if (s.horizon() != t.horizon()) throw std::invalid_argument("bfs_shortest_word: horizons differ");
  if (s == t) return ReflectionWord{};
  std::map<WalkPath, std::pair<WalkPath, int>> parent;
  std::deque<WalkPath> queue{s};
  parent.emplace(s, std::make_pair(s, 0));
  while (!queue.empty()) {
    WalkPath u = std::move(queue.front());
    queue.pop_front();
    for (int a : levels) {
      WalkPath v = reflect(u, a);
      if (parent.contains(v)) continue;
      parent.emplace(v, std::make_pair(u, a));
      if (v == t) {
        std::vector<int> word;
        for (WalkPath x = v; x != s;) {
          const auto& [prev, level] = parent.at(x);
          word.push_back(level);
          x = prev;
        }
        std::reverse(word.begin(), word.end());
        return ReflectionWord{std::move(word)};
      }
      queue.push_back(std::move(v));
    }
  }
  return std::nullopt;
}

/// Constructive solver over levels {0,1,2}.  Memoizes words to the
/// alternating path per (horizon, code), so one instance amortizes work
/// across many queries.  Not thread-safe; use one instance per thread.
class ReflectionSolver {
 public:
  static constexpr std::size_t kMaxHorizon = 63;

  /// Word w with apply_word(s, w) = alternating_path(m); every letter effective.
  ReflectionWord to_alternating(const WalkPath& s) {
    if (s.horizon() > kMaxHorizon) throw std::out_of_range("ReflectionSolver: horizon above 63");
    const auto key = std::make_pair(s.horizon(), s.to_bits());
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    ReflectionWord w = s.horizon() <= 3 ? base_case(s) : inductive_step(s);
    memo_.emplace(key, w);
    return w;
  }

  /// Word carrying s to t: route through the alternating path and back.
  ReflectionWord solve(const WalkPath& s, const WalkPath& t) {
    if (s.horizon() != t.horizon())
      throw std::invalid_argument("solve: horizons differ (" + std::to_string(s.horizon()) + " vs " +
                                  std::to_string(t.horizon()) + ")");
    if (s == t) return {};
    return (to_alternating(s) + to_alternating(t).reversed()).reduced();
  }

  /// Middle word used to carry (alt^(m-1), -1, -2) to (alt^(m-1), -1, 0),
  /// chosen by application among the two conjugations of Theta^-1 by 0/1.
  static ReflectionWord middle_word_odd(std::size_t m) {
    const WalkPath from = [&] {
      std::vector<int> v = alternating_path(m - 1).values();
      v.push_back(-1);
      v.push_back(-2);
      return WalkPath(std::move(v));
    }();
    std::vector<int> goal = alternating_path(m - 1).values();
    goal.push_back(-1);
    goal.push_back(0);
    for (const ReflectionWord& candidate : {ReflectionWord{{0, 1, 0}}, ReflectionWord{{1, 0, 1}}})
      if (apply_word(from, candidate).values() == goal && is_effective_word(from, candidate)) return candidate;
    throw std::logic_error("middle_word_odd: no candidate conjugation maps the target");
  }

 private:
  ReflectionWord base_case(const WalkPath& s) {
    const std::size_t m = s.horizon();
    const WalkPath target = alternating_path(m);
    if (s == target) return {};
    auto w = bfs_shortest_word(s, target, {0, 1, 2});
    if (!w) throw std::logic_error("ReflectionSolver: base case unreachable");
    return *w;
  }

  // s has horizon n = m + 1 >= 4.
  ReflectionWord inductive_step(const WalkPath& s) {
    const std::size_t n = s.horizon();
    const std::size_t m = n - 1;
    const WalkPath prefix = truncate(s, m);
    ReflectionWord b = to_alternating(prefix);
    // Effective letters on the prefix act at times <= m-1, so they flip steps
    // m and m+1 together and the product of the last two steps is invariant.
    if (s.increment(m) * s.increment(m + 1) == -1) return b;

    const WalkPath sub_target = (m % 2 == 0) ? alternating_then(m - 1, 2) : alternating_then(m - 1, -1);
    const ReflectionWord d = solve(prefix, sub_target);
    const ReflectionWord middle = (m % 2 == 0) ? ReflectionWord{{2}} : middle_word_odd(m);
    ReflectionWord w = d + middle + d.reversed() + b;
    return w.reduced();
  }

  std::map<std::pair<std::size_t, std::uint64_t>, ReflectionWord> memo_;
};

inline ReflectionWord solve_to_alternating(const WalkPath& s) {
  if (s.horizon() < 1) throw std::invalid_argument("solve_to_alternating: horizon must be at least 1");
  return ReflectionSolver{}.to_alternating(s);
}

inline ReflectionWord solve(const WalkPath& s, const WalkPath& t) { return ReflectionSolver{}.solve(s, t); }

// ---------------------------------------------------------------------------
// Orbit graph

struct OrbitReport {
  std::size_t m = 0;
  std::vector<int> levels;
  std::vector<int> component;          // component id per walk code
  std::vector<std::size_t> component_sizes;
  std::vector<std::size_t> component_diameters;  // empty unless requested

  [[nodiscard]] std::size_t n_components() const { return component_sizes.size(); }
  [[nodiscard]] std::size_t max_component_diameter() const {
    return component_diameters.empty() ? 0
                                       : *std::max_element(component_diameters.begin(), component_diameters.end());
  }
  [[nodiscard]] bool connected(const WalkPath& s, const WalkPath& t) const {
    return component.at(s.to_bits()) == component.at(t.to_bits());
  }
};

/// Neighbour table: next[code * L + i] = code of reflect(walk(code), levels[i]).
inline std::vector<std::uint32_t> orbit_adjacency(std::size_t m, const std::vector<int>& levels) {
  const std::size_t n = std::size_t{1} << m;
  std::vector<std::uint32_t> next(n * levels.size());
  for (std::uint64_t c = 0; c < n; ++c) {
    const WalkPath w = WalkPath::from_bits(c, m);
    for (std::size_t i = 0; i < levels.size(); ++i)
      next[c * levels.size() + i] = static_cast<std::uint32_t>(reflect(w, levels[i]).to_bits());
  }
  return next;
}

inline OrbitReport orbit_graph(std::size_t m, std::vector<int> levels, bool with_diameters = true,
                               std::size_t cap = 12) {
  if (m < 1) throw std::invalid_argument("orbit_graph: horizon must be at least 1");
  if (m > cap) throw std::out_of_range("orbit_graph: horizon " + std::to_string(m) + " above cap " + std::to_string(cap));
  std::sort(levels.begin(), levels.end());
  levels.erase(std::unique(levels.begin(), levels.end()), levels.end());

  const std::size_t n = std::size_t{1} << m;
  const std::size_t deg = levels.size();
  const auto next = orbit_adjacency(m, levels);

  OrbitReport r;
  r.m = m;
  r.levels = levels;
  r.component.assign(n, -1);
  std::vector<std::uint32_t> queue;
  queue.reserve(n);
  for (std::uint32_t root = 0; root < n; ++root) {
    if (r.component[root] >= 0) continue;
    const int id = static_cast<int>(r.component_sizes.size());
    queue.assign(1, root);
    r.component[root] = id;
    for (std::size_t head = 0; head < queue.size(); ++head)
      for (std::size_t i = 0; i < deg; ++i) {
        const std::uint32_t v = next[queue[head] * deg + i];
        if (r.component[v] < 0) {
          r.component[v] = id;
          queue.push_back(v);
        }
      }
    r.component_sizes.push_back(queue.size());
  }

  if (with_diameters) {
    r.component_diameters.assign(r.component_sizes.size(), 0);
    std::vector<int> dist(n, -1);
    for (std::uint32_t src = 0; src < n; ++src) {
      std::fill(dist.begin(), dist.end(), -1);
      queue.assign(1, src);
      dist[src] = 0;
      int ecc = 0;
      for (std::size_t head = 0; head < queue.size(); ++head) {
        const std::uint32_t u = queue[head];
        ecc = std::max(ecc, dist[u]);
        for (std::size_t i = 0; i < deg; ++i) {
          const std::uint32_t v = next[u * deg + i];
          if (dist[v] < 0) {
            dist[v] = dist[u] + 1;
            queue.push_back(v);
          }
        }
      }
      auto& d = r.component_diameters[static_cast<std::size_t>(r.component[src])];
      d = std::max(d, static_cast<std::size_t>(ecc));
    }
  }
  return r;
}

}  // namespace ocone
