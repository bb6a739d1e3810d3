#pragma once

// Continuous-time lattice processes: pure-jump paths on eta*Z with jumps of
// size exactly eta.

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "ocone/hit_time.hpp"
#include "ocone/path.hpp"

namespace ocone {

class LatticePath {
 public:
  LatticePath(double mesh, std::vector<double> jump_times, std::vector<int> jump_signs, double horizon)
      : mesh_(mesh), jump_times_(std::move(jump_times)), jump_signs_(std::move(jump_signs)), horizon_(horizon) {
    if (!(mesh_ > 0.0)) throw std::invalid_argument("LatticePath: mesh must be positive");
    if (jump_times_.size() != jump_signs_.size())
      throw std::invalid_argument("LatticePath: jump times and signs differ in length");
    for (std::size_t k = 0; k < jump_times_.size(); ++k) {
      if (jump_signs_[k] != 1 && jump_signs_[k] != -1)
        throw std::invalid_argument("LatticePath: jump signs must be +-1");
      if (jump_times_[k] < 0.0 || (k > 0 && !(jump_times_[k] > jump_times_[k - 1])))
        throw std::invalid_argument("LatticePath: jump times must be nonnegative and strictly increasing");
    }
    if (!jump_times_.empty() && jump_times_.back() > horizon_)
      throw std::invalid_argument("LatticePath: jump after horizon");
  }

  [[nodiscard]] double mesh() const { return mesh_; }
  [[nodiscard]] double horizon() const { return horizon_; }
  [[nodiscard]] const std::vector<double>& jump_times() const { return jump_times_; }
  [[nodiscard]] const std::vector<int>& jump_signs() const { return jump_signs_; }
  [[nodiscard]] std::size_t jump_count() const { return jump_times_.size(); }

  /// Number of jumps tau_k <= t.
  [[nodiscard]] std::size_t jumps_up_to(double t) const {
    return static_cast<std::size_t>(std::upper_bound(jump_times_.begin(), jump_times_.end(), t) - jump_times_.begin());
  }

  /// Lattice index sum_{k : tau_k <= t} sign_k; the value is mesh() times this.
  [[nodiscard]] long level_at(double t) const {
    long s = 0;
    const std::size_t n = jumps_up_to(t);
    for (std::size_t k = 0; k < n; ++k) s += jump_signs_[k];
    return s;
  }

  [[nodiscard]] double value_at(double t) const { return mesh_ * static_cast<double>(level_at(t)); }

  /// [M]_t = eta^2 * #{k : tau_k <= t}.
  [[nodiscard]] double qv_at(double t) const {
    return mesh_ * mesh_ * static_cast<double>(jumps_up_to(t));
  }

  friend bool operator==(const LatticePath&, const LatticePath&) = default;

 private:
  double mesh_;
  std::vector<double> jump_times_;
  std::vector<int> jump_signs_;
  double horizon_;
};

/// S^M with values divided by the mesh, i.e. the integer walk of jump signs.
struct LatticeEmbedding {
  WalkPath walk;      // S^M / eta
  double mesh;        // eta
  std::vector<double> jump_times;

  /// S^M_k in lattice units (multiply by mesh for the value).
  [[nodiscard]] double value(std::size_t k) const { return mesh * walk[k]; }
};

inline LatticeEmbedding lattice_embedded_walk(const LatticePath& l) {
  return LatticeEmbedding{WalkPath::from_increments(l.jump_signs()), l.mesh(), l.jump_times()};
}

/// Reconstruction M_t = S^M_{eta^-2 [M]_t}.
inline double reconstruct_value(const LatticeEmbedding& e, const LatticePath& l, double t) {
  const double steps = l.qv_at(t) / (e.mesh * e.mesh);
  return e.value(static_cast<std::size_t>(std::llround(steps)));
}

/// First jump time at which the path sits at level k*eta (0 for k = 0).
inline std::optional<double> lattice_first_passage(const LatticePath& l, long k) {
  if (k == 0) return 0.0;
  long s = 0;
  for (std::size_t j = 0; j < l.jump_count(); ++j) {
    s += l.jump_signs()[j];
    if (s == k) return l.jump_times()[j];
  }
  return std::nullopt;
}

/// Theta^{k*eta} on a lattice path: flip all jump signs strictly after T_{k*eta}.
inline LatticePath reflect(const LatticePath& l, long k) {
  std::vector<int> signs = l.jump_signs();
  long s = 0;
  std::size_t first = signs.size();
  if (k == 0) {
    first = 0;
  } else {
    for (std::size_t j = 0; j < signs.size(); ++j) {
      s += signs[j];
      if (s == k) {
        first = j + 1;
        break;
      }
    }
  }
  for (std::size_t j = first; j < signs.size(); ++j) signs[j] = -signs[j];
  return LatticePath(l.mesh(), l.jump_times(), std::move(signs), l.horizon());
}

}  // namespace ocone
