#pragma once

// Integer paths with steps in {-1,0,+1} and the elementary transforms on
// them: first passage, reflection after the first passage, reflection after
// the first exit from [-a,a], quadratic variation, the embedded walk read off
// at successive increases of the quadratic variation, and pasting of an
// auxiliary walk after the last increase.

#include <compare>
#include <concepts>
#include <cstdint>
#include <cstdlib>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "ocone/hit_time.hpp"

namespace ocone {

/// Raised when pasting needs more auxiliary walk steps than were supplied.
class InsufficientRandomness : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

namespace detail {

inline void check_skip_free(std::span<const int> v, const char* what) {
  if (v.empty() || v.front() != 0) throw std::invalid_argument(std::string(what) + ": path must start at 0");
  for (std::size_t k = 1; k < v.size(); ++k)
    if (std::abs(v[k] - v[k - 1]) > 1)
      throw std::invalid_argument(std::string(what) + ": step larger than 1 at index " + std::to_string(k));
}

inline void check_walk(std::span<const int> v) {
  check_skip_free(v, "WalkPath");
  for (std::size_t k = 1; k < v.size(); ++k)
    if (v[k] == v[k - 1]) throw std::invalid_argument("WalkPath: flat step at index " + std::to_string(k));
}

inline std::vector<int> partial_sums(std::span<const int> steps) {
  std::vector<int> v(steps.size() + 1, 0);
  for (std::size_t k = 0; k < steps.size(); ++k) v[k + 1] = v[k] + steps[k];
  return v;
}

}  // namespace detail

/// Skip-free path (v_0 = 0, |v_k - v_{k-1}| <= 1). Flat steps allowed.
class SkipFreePath {
 public:
  SkipFreePath() : values_{0} {}
  explicit SkipFreePath(std::vector<int> values) : values_(std::move(values)) {
    detail::check_skip_free(values_, "SkipFreePath");
  }

  static SkipFreePath from_increments(std::span<const int> steps) {
    return SkipFreePath(detail::partial_sums(steps));
  }

  [[nodiscard]] std::size_t horizon() const { return values_.size() - 1; }
  [[nodiscard]] const std::vector<int>& values() const { return values_; }
  [[nodiscard]] int operator[](std::size_t k) const { return values_[k]; }
  [[nodiscard]] int increment(std::size_t k) const { return values_[k] - values_[k - 1]; }

  friend bool operator==(const SkipFreePath&, const SkipFreePath&) = default;
  friend auto operator<=>(const SkipFreePath& a, const SkipFreePath& b) { return a.values_ <=> b.values_; }

 private:
  std::vector<int> values_;
};

/// Element of Lambda^m: a path whose steps are all +-1.
///
/// Canonical encoding: bit k-1 of the code is set iff step k is +1, so
/// Lambda^m is enumerated by the integers 0 .. 2^m - 1 (m <= 63).
class WalkPath {
 public:
  WalkPath() : values_{0} {}
  explicit WalkPath(std::vector<int> values) : values_(std::move(values)) { detail::check_walk(values_); }

  static WalkPath from_increments(std::span<const int> steps) { return WalkPath(detail::partial_sums(steps)); }

  static WalkPath from_bits(std::uint64_t bits, std::size_t m) {
    if (m > 63) throw std::out_of_range("WalkPath::from_bits: horizon above 63");
    if (m < 64 && (bits >> m) != 0) throw std::invalid_argument("WalkPath::from_bits: code has bits above horizon");
    std::vector<int> v(m + 1, 0);
    for (std::size_t k = 0; k < m; ++k) v[k + 1] = v[k] + (((bits >> k) & 1U) ? 1 : -1);
    WalkPath w;
    w.values_ = std::move(v);
    return w;
  }

  [[nodiscard]] std::uint64_t to_bits() const {
    if (horizon() > 63) throw std::out_of_range("WalkPath::to_bits: horizon above 63");
    std::uint64_t bits = 0;
    for (std::size_t k = 1; k < values_.size(); ++k)
      if (values_[k] > values_[k - 1]) bits |= std::uint64_t{1} << (k - 1);
    return bits;
  }

  [[nodiscard]] std::size_t horizon() const { return values_.size() - 1; }
  [[nodiscard]] const std::vector<int>& values() const { return values_; }
  [[nodiscard]] int operator[](std::size_t k) const { return values_[k]; }
  [[nodiscard]] int increment(std::size_t k) const { return values_[k] - values_[k - 1]; }
  [[nodiscard]] SkipFreePath as_skip_free() const { return SkipFreePath(values_); }

  friend bool operator==(const WalkPath&, const WalkPath&) = default;
  friend auto operator<=>(const WalkPath& a, const WalkPath& b) { return a.values_ <=> b.values_; }

 private:
  std::vector<int> values_;
};

/// [M]_0..[M]_m; steps in {0,1}.
class QuadraticVariation {
 public:
  QuadraticVariation() : values_{0} {}
  explicit QuadraticVariation(std::vector<int> values) : values_(std::move(values)) {
    if (values_.empty() || values_.front() != 0) throw std::invalid_argument("QuadraticVariation: must start at 0");
    for (std::size_t k = 1; k < values_.size(); ++k) {
      int d = values_[k] - values_[k - 1];
      if (d != 0 && d != 1) throw std::invalid_argument("QuadraticVariation: steps must be 0 or 1");
    }
  }

  [[nodiscard]] const std::vector<int>& values() const { return values_; }
  [[nodiscard]] int final_value() const { return values_.back(); }
  [[nodiscard]] std::size_t horizon() const { return values_.size() - 1; }
  [[nodiscard]] int operator[](std::size_t k) const { return values_[k]; }

  friend bool operator==(const QuadraticVariation&, const QuadraticVariation&) = default;
  friend auto operator<=>(const QuadraticVariation& a, const QuadraticVariation& b) {
    return a.values_ <=> b.values_;
  }

 private:
  std::vector<int> values_;
};

template <class P>
concept PathLike = std::same_as<P, SkipFreePath> || std::same_as<P, WalkPath>;

namespace detail {

template <PathLike P>
P rebuild(std::vector<int> v) {
  return P(std::move(v));
}

inline std::vector<int> flip_after(const std::vector<int>& v, std::size_t pivot) {
  std::vector<int> out(v);
  const int anchor = v[pivot];
  for (std::size_t k = pivot + 1; k < v.size(); ++k) out[k] = 2 * anchor - v[k];
  return out;
}

}  // namespace detail

/// T_a = inf{k >= 0 : v_k = a}, infinite when the level is never reached.
template <PathLike P>
HitTime first_passage(const P& p, int a) {
  const auto& v = p.values();
  for (std::size_t k = 0; k < v.size(); ++k)
    if (v[k] == a) return HitTime(k);
  return HitTime::infinity();
}

/// Theta^a: keep the path up to T_a and mirror it about a afterwards.
template <PathLike P>
P reflect(const P& p, int a) {
  const HitTime t = first_passage(p, a);
  if (t.is_infinite()) return p;
  return detail::rebuild<P>(detail::flip_after(p.values(), t.index()));
}

/// sigma_a = inf{k : |v_k| = a}.
template <PathLike P>
HitTime first_exit(const P& p, int a) {
  if (a < 0) throw std::invalid_argument("first_exit: level must be nonnegative");
  const auto& v = p.values();
  for (std::size_t k = 0; k < v.size(); ++k)
    if (std::abs(v[k]) == a) return HitTime(k);
  return HitTime::infinity();
}

/// Psi^a: flip every increment strictly after the first exit time sigma_a.
template <PathLike P>
P exit_reflect(const P& p, int a) {
  const HitTime s = first_exit(p, a);
  if (s.is_infinite()) return p;
  return detail::rebuild<P>(detail::flip_after(p.values(), s.index()));
}

template <PathLike P>
QuadraticVariation quadratic_variation(const P& p) {
  const auto& v = p.values();
  std::vector<int> q(v.size(), 0);
  for (std::size_t k = 1; k < v.size(); ++k) q[k] = q[k - 1] + (v[k] - v[k - 1]) * (v[k] - v[k - 1]);
  return QuadraticVariation(std::move(q));
}

/// (v_0, ..., v_j).
template <PathLike P>
P truncate(const P& p, std::size_t j) {
  if (j > p.horizon()) throw std::out_of_range("truncate: index beyond horizon");
  const auto& v = p.values();
  return detail::rebuild<P>(std::vector<int>(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(j) + 1));
}

/// First index at which the quadratic variation reaches its final value.
inline std::size_t stagnation_index(const QuadraticVariation& qv) {
  const int last = qv.final_value();
  for (std::size_t k = 0; k < qv.values().size(); ++k)
    if (qv[k] == last) return k;
  return qv.horizon();
}

struct EmbeddedWalk {
  WalkPath walk;                 // S^M_0 .. S^M_K with K = [M]_m
  std::size_t stagnation_index;  // first k with [M]_k = [M]_m; S^M is constant beyond K
};

/// S^M = (M_{tau_n}) for n = 0..[M]_m, tau_n the n-th increase of [M].
template <PathLike P>
EmbeddedWalk embedded_walk(const P& p) {
  const auto& v = p.values();
  std::vector<int> s{0};
  for (std::size_t k = 1; k < v.size(); ++k)
    if (v[k] != v[k - 1]) s.push_back(v[k]);
  return EmbeddedWalk{WalkPath(std::move(s)), stagnation_index(quadratic_variation(p))};
}

/// X_k = M_k for k < T and M_T + aux_{k-T} for k >= T, where T is the first
/// index achieving the final quadratic variation on [0, m].
inline SkipFreePath paste_walk(const SkipFreePath& p, const WalkPath& aux) {
  const std::size_t t = stagnation_index(quadratic_variation(p));
  const std::size_t need = p.horizon() - t;
  if (aux.horizon() < need)
    throw InsufficientRandomness("paste_walk: auxiliary walk has " + std::to_string(aux.horizon()) +
                                 " steps, " + std::to_string(need) + " needed");
  std::vector<int> x(p.values().begin(), p.values().begin() + static_cast<std::ptrdiff_t>(t) + 1);
  for (std::size_t j = 1; j <= need; ++j) x.push_back(p[t] + aux[j]);
  return SkipFreePath(std::move(x));
}

}  // namespace ocone
