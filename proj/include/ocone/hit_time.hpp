#pragma once

#include <compare>
#include <cstddef>
#include <limits>
#include <ostream>
#include <stdexcept>

namespace ocone {

/// Hitting index that may be infinite (the level is never reached).
///
/// Infinity is a distinguished state, not a large number: it compares
/// greater than every finite index, and asking for its index throws.
class HitTime {
 public:
  constexpr HitTime() = default;  // infinity
  constexpr explicit HitTime(std::size_t index) : finite_(true), index_(index) {}

  static constexpr HitTime infinity() { return HitTime{}; }

  [[nodiscard]] constexpr bool is_finite() const { return finite_; }
  [[nodiscard]] constexpr bool is_infinite() const { return !finite_; }

  [[nodiscard]] std::size_t index() const {
    if (!finite_) throw std::logic_error("HitTime: index() on infinite hitting time");
    return index_;
  }

  friend constexpr bool operator==(const HitTime& a, const HitTime& b) {
    return a.finite_ == b.finite_ && (!a.finite_ || a.index_ == b.index_);
  }
  friend constexpr std::strong_ordering operator<=>(const HitTime& a, const HitTime& b) {
    if (a.finite_ != b.finite_) return a.finite_ ? std::strong_ordering::less : std::strong_ordering::greater;
    if (!a.finite_) return std::strong_ordering::equal;
    return a.index_ <=> b.index_;
  }
  friend constexpr bool operator==(const HitTime& a, std::size_t k) { return a.finite_ && a.index_ == k; }
  friend constexpr std::strong_ordering operator<=>(const HitTime& a, std::size_t k) {
    if (!a.finite_) return std::strong_ordering::greater;
    return a.index_ <=> k;
  }

  friend std::ostream& operator<<(std::ostream& os, const HitTime& t) {
    if (t.finite_) return os << t.index_;
    return os << "inf";
  }

 private:
  bool finite_ = false;
  std::size_t index_ = 0;
};

}  // namespace ocone
