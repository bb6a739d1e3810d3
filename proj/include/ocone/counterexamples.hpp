#pragma once

// Two skip-free processes that are invariant under Theta^0 and Theta^1 but
// are not Ocone.
//
//   CE1: steps e1, e2, e2, e4, e5, ...  (step 3 repeats step 2)
//   CE2: step n has the sign of e_k for n in [2^k, 2^{k+1} - 1], and step 1
//        has the sign of e_0, so signs are constant on dyadic blocks.

#include <bit>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "ocone/path_law.hpp"

namespace ocone {

inline constexpr std::size_t kCe1Cap = 16;
inline constexpr std::size_t kCe2Cap = 31;

/// Number of free signs that drive CE1 up to horizon m.
inline std::size_t ce1_sign_count(std::size_t m) { return m >= 3 ? m - 1 : m; }

/// CE1 path from its free signs (e1, e2, e4, e5, ...).
inline WalkPath ce1_path(const std::vector<int>& signs, std::size_t m) {
  if (signs.size() < ce1_sign_count(m)) throw std::invalid_argument("ce1_path: not enough signs");
  std::vector<int> steps;
  steps.reserve(m);
  for (std::size_t n = 1; n <= m; ++n) {
    const std::size_t idx = n <= 2 ? n - 1 : (n == 3 ? 1 : n - 2);
    steps.push_back(signs[idx]);
  }
  return WalkPath::from_increments(steps);
}

inline ProcessSpec ce1_spec() {
  return {"ce1", [](std::size_t m, const EmitPath& emit) {
            const std::size_t k = ce1_sign_count(m);
            const Rational w = inverse_power_of_two(k);
            std::vector<int> signs(k);
            for (std::uint64_t c = 0; c < (std::uint64_t{1} << k); ++c) {
              for (std::size_t i = 0; i < k; ++i) signs[i] = ((c >> i) & 1U) ? 1 : -1;
              emit(ce1_path(signs, m).as_skip_free(), w);
            }
          }};
}

inline PathLaw ce1_law(std::size_t m) {
  if (m > kCe1Cap) throw std::out_of_range("ce1_law: horizon above " + std::to_string(kCe1Cap));
  return enumerate_law(ce1_spec(), m, kCe1Cap);
}

/// Block index of step n >= 1: floor(log2 n).
inline std::size_t ce2_block(std::size_t n) { return static_cast<std::size_t>(std::bit_width(n)) - 1; }

/// Number of dyadic blocks touched by steps 1..m.
inline std::size_t ce2_block_count(std::size_t m) { return m == 0 ? 0 : ce2_block(m) + 1; }

inline bool ce2_block_complete(std::size_t m) { return std::has_single_bit(m + 1) && m >= 1; }

inline WalkPath ce2_path(const std::vector<int>& bits, std::size_t m) {
  if (bits.size() < ce2_block_count(m))
    throw std::invalid_argument("ce2_path: need " + std::to_string(ce2_block_count(m)) + " signs for horizon " +
                                std::to_string(m) + ", got " + std::to_string(bits.size()));
  for (int b : bits)
    if (b != 1 && b != -1) throw std::invalid_argument("ce2_path: signs must be +-1");
  std::vector<int> steps;
  steps.reserve(m);
  for (std::size_t n = 1; n <= m; ++n) steps.push_back(bits[ce2_block(n)]);
  return WalkPath::from_increments(steps);
}

inline ProcessSpec ce2_spec() {
  return {"ce2", [](std::size_t m, const EmitPath& emit) {
            const std::size_t k = ce2_block_count(m);
            const Rational w = inverse_power_of_two(k);
            std::vector<int> bits(k);
            for (std::uint64_t c = 0; c < (std::uint64_t{1} << k); ++c) {
              for (std::size_t i = 0; i < k; ++i) bits[i] = ((c >> i) & 1U) ? 1 : -1;
              emit(ce2_path(bits, m).as_skip_free(), w);
            }
          }};
}

inline PathLaw ce2_law(std::size_t m) {
  if (m > kCe2Cap) throw std::out_of_range("ce2_law: horizon above " + std::to_string(kCe2Cap));
  return enumerate_law(ce2_spec(), m, kCe2Cap);
}

struct LevelInvariance {
  int level = 0;
  LawComparison comparison;
};

struct InvarianceReport {
  std::string process;
  std::size_t m = 0;
  std::vector<LevelInvariance> levels;

  [[nodiscard]] const LevelInvariance& at(int a) const {
    for (const auto& l : levels)
      if (l.level == a) return l;
    throw std::out_of_range("InvarianceReport: level " + std::to_string(a) + " not tested");
  }
};

inline InvarianceReport invariance_report(const std::string& name, const PathLaw& law, const std::vector<int>& levels) {
  InvarianceReport r{name, law.horizon(), {}};
  for (int a : levels) r.levels.push_back({a, laws_equal(law, pushforward_reflect(law, a))});
  return r;
}

inline InvarianceReport ce1_invariance_report(std::size_t m, const std::vector<int>& levels = {0, 1, 2, 3}) {
  return invariance_report("ce1", ce1_law(m), levels);
}

inline InvarianceReport ce2_invariance_report(std::size_t m, const std::vector<int>& levels = {0, 1, 2}) {
  if (!ce2_block_complete(m) || m > kCe2Cap)
    throw std::invalid_argument("ce2_invariance_report: horizon must be one of 1, 3, 7, 15, 31");
  return invariance_report("ce2", ce2_law(m), levels);
}

}  // namespace ocone
