#pragma once

// Monte Carlo tests of reflection invariance and of independence between
// the embedded walk and the quadratic variation.  Statistics are Pearson
// chi-square on cylinder sets (path prefixes of a given depth).

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "ocone/path_io.hpp"
#include "ocone/samplers.hpp"
#include "ocone/stat_tests.hpp"

namespace ocone {

struct TestReport {
  std::string test;  // "reflect-two-sample" | "independence"
  SamplerSpec spec;
  int level = 0;     // reflect-two-sample only
  double statistic = 0;
  std::size_t dof = 0;
  double p_value = 1;
  std::size_t n_samples = 0;
  std::size_t depth = 0;
  double alpha = 0.01;
  bool reject = false;
  std::size_t rows = 0;
  std::size_t columns = 0;
  std::vector<CellContribution> witness_cells;

  [[nodiscard]] std::string decision() const { return reject ? "reject" : "accept"; }
};

namespace detail {

inline TestReport finish_report(TestReport r, const ChiSquareResult& c) {
  r.statistic = c.statistic;
  r.dof = c.dof;
  r.p_value = c.p_value;
  r.rows = c.rows;
  r.columns = c.columns;
  r.witness_cells = c.top_cells;
  r.reject = r.p_value < r.alpha;
  return r;
}

inline void check_depth(const SamplerSpec& spec, std::size_t depth) {
  if (!is_discrete(spec.kind))
    throw std::invalid_argument("test: kind '" + std::string(to_string(spec.kind)) + "' has no discrete paths");
  if (depth > spec.horizon)
    throw std::invalid_argument("test: depth " + std::to_string(depth) + " exceeds horizon " +
                                std::to_string(spec.horizon));
}

}  // namespace detail

/// Seed of the second, independent sample in two-sample designs.
inline std::uint64_t companion_seed(std::uint64_t seed) { return rng::splitmix64(seed ^ 0x5EEDC0DE5EEDC0DEULL); }

/// Chi-square two-sample test: cylinders of depth d for M against those of
/// Theta^a(M'), with M' an independent copy.
inline TestReport reflect_two_sample_test(const SamplerSpec& spec, int a, std::size_t n, std::size_t depth,
                                          double alpha = 0.01, std::size_t workers = 1) {
  detail::check_depth(spec, depth);
  SamplerSpec other = spec;
  other.seed = companion_seed(spec.seed);
  const auto xs = sample_paths(spec, n, workers);
  const auto ys = sample_paths(other, n, workers);

  ContingencyTable table;
  for (const auto& p : xs) table.add("M", to_text(truncate(p, depth)));
  for (const auto& p : ys) table.add("reflected", to_text(truncate(reflect(p, a), depth)));
  const ChiSquareResult c = table.test();
  if (c.columns < 2 && table.column_count() > 1)
    throw UndersizedSample("reflect test: all cylinders merged into one; increase n");

  TestReport r;
  r.test = "reflect-two-sample";
  r.spec = spec;
  r.level = a;
  r.n_samples = n;
  r.depth = depth;
  r.alpha = alpha;
  return detail::finish_report(r, c);
}

/// Chi-square independence between the [M]-trajectory on [0, depth] and the
/// embedded walk of M extended by an independent fair walk to `depth` steps.
/// For a process of the product form the extended walk is a fair walk
/// independent of [M].
inline TestReport ocone_independence_test(const SamplerSpec& spec, std::size_t n, std::size_t depth,
                                          double alpha = 0.01, std::size_t workers = 1) {
  detail::check_depth(spec, depth);
  const auto xs = sample_paths(spec, n, workers);
  std::vector<std::pair<std::string, std::string>> keys(n);
  parallel_for(n, workers, [&](std::size_t i) {
    const SkipFreePath m = truncate(xs[i], depth);
    const std::string row = to_text(quadratic_variation(m));
    const WalkPath s = embedded_walk(m).walk;
    std::vector<int> steps;
    for (std::size_t k = 1; k <= s.horizon(); ++k) steps.push_back(s.increment(k));
    auto g = rng::stream_for(spec.seed, i, rng::Stream::auxiliary);
    rng::SignSource signs(g);
    while (steps.size() < depth) steps.push_back(signs.next());
    keys[i] = {row, to_text(WalkPath::from_increments(steps))};
  });
  ContingencyTable table;
  for (const auto& [row, col] : keys) table.add(row, col);
  const ChiSquareResult c = table.test();
  if (table.row_count() > 1 && (c.rows < 2 || c.columns < 2))
    throw UndersizedSample("independence test: table collapsed after merging; increase n");

  TestReport r;
  r.test = "independence";
  r.spec = spec;
  r.n_samples = n;
  r.depth = depth;
  r.alpha = alpha;
  return detail::finish_report(r, c);
}

struct ExactConsistency {
  double max_abs_z = 0;
  std::string worst_cell;
  std::size_t cells = 0;
  bool impossible_cell_seen = false;  // a cylinder of exact mass 0 was sampled
};

/// Empirical cylinder frequencies against the exact cylinder masses;
/// z = (count/n - p) / sqrt(p(1-p)/n) per cylinder of positive mass.
inline ExactConsistency compare_to_exact(const std::vector<SkipFreePath>& samples, const PathLaw& exact) {
  const std::size_t depth = exact.horizon();
  std::map<SkipFreePath, std::uint64_t> counts;
  for (const auto& p : samples) ++counts[truncate(p, depth)];
  const double n = static_cast<double>(samples.size());
  ExactConsistency r;
  r.cells = exact.size();
  for (const auto& [p, c] : counts)
    if (exact.mass(p) == 0) r.impossible_cell_seen = true;
  for (const auto& [p, w] : exact.support()) {
    const double prob = static_cast<double>(w);
    const auto it = counts.find(p);
    const double freq = it == counts.end() ? 0.0 : static_cast<double>(it->second) / n;
    const double se = std::sqrt(prob * (1 - prob) / n);
    const double z = se > 0 ? std::abs(freq - prob) / se : (freq == prob ? 0.0 : INFINITY);
    if (z > r.max_abs_z) {
      r.max_abs_z = z;
      r.worst_cell = to_text(p);
    }
  }
  return r;
}

}  // namespace ocone
