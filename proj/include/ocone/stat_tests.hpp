#pragma once

// Pearson chi-square on contingency tables with deterministic merging of
// sparse categories.  Categories are kept in lexicographic order of their
// labels; a sparse category is folded into its smaller adjacent neighbour.

#include <boost/math/special_functions/gamma.hpp>

#include <algorithm>
#include <cstdint>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace ocone {

class UndersizedSample : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct CellContribution {
  std::string row;
  std::string column;
  double observed = 0;
  double expected = 0;
  double contribution = 0;  // (O - E)^2 / E
};

struct ChiSquareResult {
  double statistic = 0;
  std::size_t dof = 0;
  double p_value = 1;
  std::size_t rows = 0;     // after merging
  std::size_t columns = 0;  // after merging
  std::vector<CellContribution> top_cells;  // largest contributions first
};

/// Upper tail of the chi-square distribution.
inline double chi_square_sf(double statistic, std::size_t dof) {
  if (dof == 0) return 1.0;
  if (statistic <= 0) return 1.0;
  return boost::math::gamma_q(static_cast<double>(dof) / 2.0, statistic / 2.0);
}

/// Rows x columns table of counts keyed by labels.
class ContingencyTable {
 public:
  void add(const std::string& row, const std::string& column, std::uint64_t count = 1) {
    cells_[{row, column}] += count;
    rows_.emplace(row);
    columns_.emplace(column);
  }

  [[nodiscard]] std::uint64_t total() const {
    std::uint64_t t = 0;
    for (const auto& [k, c] : cells_) t += c;
    return t;
  }
  [[nodiscard]] std::size_t row_count() const { return rows_.size(); }
  [[nodiscard]] std::size_t column_count() const { return columns_.size(); }
  [[nodiscard]] const std::map<std::pair<std::string, std::string>, std::uint64_t>& cells() const { return cells_; }

  /// Merges sparse rows/columns until every expected count reaches
  /// min_expected (or one category is left on a side), then runs the test.
  [[nodiscard]] ChiSquareResult test(double min_expected = 5.0, std::size_t top = 3) const {
    std::vector<std::string> row_labels(rows_.begin(), rows_.end());
    std::vector<std::string> col_labels(columns_.begin(), columns_.end());
    std::vector<std::vector<double>> t(row_labels.size(), std::vector<double>(col_labels.size(), 0.0));
    for (const auto& [key, c] : cells_) {
      const auto i = static_cast<std::size_t>(std::lower_bound(row_labels.begin(), row_labels.end(), key.first) -
                                              row_labels.begin());
      const auto j = static_cast<std::size_t>(std::lower_bound(col_labels.begin(), col_labels.end(), key.second) -
                                              col_labels.begin());
      t[i][j] += static_cast<double>(c);
    }
    const double n = static_cast<double>(total());
    if (n == 0) throw UndersizedSample("chi-square: empty table");

    auto row_sum = [&](std::size_t i) {
      double s = 0;
      for (double x : t[i]) s += x;
      return s;
    };
    auto col_sum = [&](std::size_t j) {
      double s = 0;
      for (const auto& r : t) s += r[j];
      return s;
    };
    auto argmin = [](const std::vector<double>& v) {
      return static_cast<std::size_t>(std::min_element(v.begin(), v.end()) - v.begin());
    };
    // Fold entry k of a label list into its smaller neighbour.
    auto merge_partner = [](const std::vector<double>& sums, std::size_t k) {
      if (k == 0) return std::size_t{1};
      if (k + 1 == sums.size()) return k - 1;
      return sums[k - 1] <= sums[k + 1] ? k - 1 : k + 1;
    };

    for (;;) {
      std::vector<double> rs(t.size()), cs(col_labels.size());
      for (std::size_t i = 0; i < t.size(); ++i) rs[i] = row_sum(i);
      for (std::size_t j = 0; j < cs.size(); ++j) cs[j] = col_sum(j);
      const std::size_t ri = argmin(rs), cj = argmin(cs);
      if (rs[ri] * cs[cj] / n >= min_expected) break;
      const bool can_rows = t.size() > 1, can_cols = cs.size() > 1;
      if (!can_rows && !can_cols) break;
      const bool merge_col = can_cols && (!can_rows || cs[cj] / n <= rs[ri] / n);
      if (merge_col) {
        const std::size_t p = merge_partner(cs, cj);
        const std::size_t lo = std::min(p, cj), hi = std::max(p, cj);
        for (auto& r : t) {
          r[lo] += r[hi];
          r.erase(r.begin() + static_cast<std::ptrdiff_t>(hi));
        }
        col_labels[lo] += "|" + col_labels[hi];
        col_labels.erase(col_labels.begin() + static_cast<std::ptrdiff_t>(hi));
      } else {
        const std::size_t p = merge_partner(rs, ri);
        const std::size_t lo = std::min(p, ri), hi = std::max(p, ri);
        for (std::size_t j = 0; j < t[lo].size(); ++j) t[lo][j] += t[hi][j];
        t.erase(t.begin() + static_cast<std::ptrdiff_t>(hi));
        row_labels[lo] += "|" + row_labels[hi];
        row_labels.erase(row_labels.begin() + static_cast<std::ptrdiff_t>(hi));
      }
    }

    ChiSquareResult r;
    r.rows = t.size();
    r.columns = col_labels.size();
    r.dof = (r.rows - 1) * (r.columns - 1);
    std::vector<CellContribution> cells;
    for (std::size_t i = 0; i < t.size(); ++i) {
      const double ri = row_sum(i);
      for (std::size_t j = 0; j < col_labels.size(); ++j) {
        const double e = ri * col_sum(j) / n;
        if (e <= 0) continue;
        const double c = (t[i][j] - e) * (t[i][j] - e) / e;
        r.statistic += c;
        cells.push_back({row_labels[i], col_labels[j], t[i][j], e, c});
      }
    }
    r.p_value = chi_square_sf(r.statistic, r.dof);
    std::stable_sort(cells.begin(), cells.end(),
                     [](const CellContribution& a, const CellContribution& b) { return a.contribution > b.contribution; });
    if (cells.size() > top) cells.resize(top);
    r.top_cells = std::move(cells);
    return r;
  }

 private:
  std::map<std::pair<std::string, std::string>, std::uint64_t> cells_;
  std::set<std::string> rows_;
  std::set<std::string> columns_;
};

}  // namespace ocone
