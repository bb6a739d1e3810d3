#pragma once

// Exact finitely supported laws on skip-free paths of a fixed horizon.
// Masses are arbitrary-precision rationals; nothing in here uses a tolerance.

#include <boost/multiprecision/cpp_int.hpp>

#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "ocone/path.hpp"

namespace ocone {

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

inline std::string to_string(const Rational& r) {
  const BigInt num = boost::multiprecision::numerator(r);
  const BigInt den = boost::multiprecision::denominator(r);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

/// 1 / 2^k.
inline Rational inverse_power_of_two(std::size_t k) {
  BigInt den = 1;
  den <<= static_cast<unsigned>(k);
  return Rational(BigInt(1), den);
}

class PathLaw {
 public:
  using Support = std::map<SkipFreePath, Rational>;

  PathLaw() : horizon_(0), support_{{SkipFreePath{}, Rational(1)}} {}

  /// Validates: one horizon, positive masses, total exactly 1.
  PathLaw(std::size_t horizon, Support support) : horizon_(horizon), support_(std::move(support)) {
    Rational total = 0;
    for (const auto& [p, w] : support_) {
      if (p.horizon() != horizon_)
        throw std::invalid_argument("PathLaw: path of horizon " + std::to_string(p.horizon()) + " in law of horizon " +
                                    std::to_string(horizon_));
      if (w <= 0) throw std::invalid_argument("PathLaw: masses must be positive");
      total += w;
    }
    if (total != 1) throw std::invalid_argument("PathLaw: masses sum to " + to_string(total) + ", not 1");
  }

  /// Merges repeated paths and drops zero masses before validating.
  static PathLaw from_entries(std::size_t horizon, const std::vector<std::pair<SkipFreePath, Rational>>& entries) {
    Support s;
    for (const auto& [p, w] : entries) {
      if (w < 0) throw std::invalid_argument("PathLaw: negative mass");
      if (w == 0) continue;
      s[p] += w;
    }
    return PathLaw(horizon, std::move(s));
  }

  [[nodiscard]] std::size_t horizon() const { return horizon_; }
  [[nodiscard]] const Support& support() const { return support_; }
  [[nodiscard]] std::size_t size() const { return support_.size(); }

  [[nodiscard]] Rational mass(const SkipFreePath& p) const {
    auto it = support_.find(p);
    return it == support_.end() ? Rational(0) : it->second;
  }

  friend bool operator==(const PathLaw&, const PathLaw&) = default;

 private:
  std::size_t horizon_;
  Support support_;
};

// ---------------------------------------------------------------------------
// Process specifications

using EmitPath = std::function<void(const SkipFreePath&, const Rational&)>;

/// Generator of (path, mass) pairs at a requested horizon.  Repeated paths
/// are allowed and merged by enumerate_law.
struct ProcessSpec {
  std::string name;
  std::function<void(std::size_t m, const EmitPath&)> generate;
};

/// Law of an increasing skip-free time change A (A_0 = 0, steps in {0,1}).
using TimeChangeLaw = std::vector<std::pair<QuadraticVariation, Rational>>;

inline ProcessSpec bernoulli_walk_spec() {
  return {"bernoulli-walk", [](std::size_t m, const EmitPath& emit) {
            if (m > 62) throw std::out_of_range("bernoulli-walk: horizon too large to enumerate");
            const Rational w = inverse_power_of_two(m);
            for (std::uint64_t c = 0; c < (std::uint64_t{1} << m); ++c)
              emit(WalkPath::from_bits(c, m).as_skip_free(), w);
          }};
}

inline ProcessSpec zero_process_spec() {
  return {"zero", [](std::size_t m, const EmitPath& emit) { emit(SkipFreePath(std::vector<int>(m + 1, 0)), Rational(1)); }};
}

/// M_n = S_{A_n}: a fair walk S time changed by an independent A.
inline ProcessSpec ocone_time_change_spec(TimeChangeLaw time_change) {
  for (const auto& [a, w] : time_change)
    if (w < 0) throw std::invalid_argument("ocone-time-change: negative mass in time-change law");
  return {"ocone-time-change", [tc = std::move(time_change)](std::size_t m, const EmitPath& emit) {
            for (const auto& [a, w] : tc) {
              if (a.horizon() < m)
                throw std::invalid_argument("ocone-time-change: time change shorter than requested horizon");
              const auto steps = static_cast<std::size_t>(a[m]);
              const Rational each = w * inverse_power_of_two(steps);
              for (std::uint64_t c = 0; c < (std::uint64_t{1} << steps); ++c) {
                const WalkPath s = WalkPath::from_bits(c, steps);
                std::vector<int> v(m + 1);
                for (std::size_t n = 0; n <= m; ++n) v[n] = s[static_cast<std::size_t>(a[n])];
                emit(SkipFreePath(std::move(v)), each);
              }
            }
          }};
}

/// Walk S whose time change depends on S itself: after the first step, A
/// advances every step when S_1 = +1 and every other step when S_1 = -1.
inline ProcessSpec dependent_time_change_spec() {
  return {"dependent-time-change", [](std::size_t m, const EmitPath& emit) {
            const Rational w = inverse_power_of_two(m);
            for (std::uint64_t c = 0; c < (std::uint64_t{1} << m); ++c) {
              const WalkPath s = WalkPath::from_bits(c, m);
              std::vector<int> v(m + 1, 0);
              std::size_t a = 0;
              for (std::size_t n = 1; n <= m; ++n) {
                if (n == 1 || s[1] > 0 || n % 2 == 0) ++a;
                v[n] = s[a];
              }
              emit(SkipFreePath(std::move(v)), w);
            }
          }};
}

/// Fixed table; paths longer than the requested horizon are truncated.
inline ProcessSpec table_spec(std::vector<std::pair<SkipFreePath, Rational>> table, std::string name = "table") {
  return {std::move(name), [t = std::move(table)](std::size_t m, const EmitPath& emit) {
            for (const auto& [p, w] : t) {
              if (p.horizon() < m) throw std::invalid_argument("table: path shorter than requested horizon");
              emit(truncate(p, m), w);
            }
          }};
}

inline constexpr std::size_t kDefaultLawCap = 16;

inline PathLaw enumerate_law(const ProcessSpec& spec, std::size_t m, std::size_t cap = kDefaultLawCap) {
  if (m > cap)
    throw std::out_of_range("enumerate_law: horizon " + std::to_string(m) + " above cap " + std::to_string(cap));
  PathLaw::Support s;
  spec.generate(m, [&](const SkipFreePath& p, const Rational& w) {
    if (w < 0) throw std::invalid_argument(spec.name + ": negative mass");
    if (w != 0) s[p] += w;
  });
  return PathLaw(m, std::move(s));
}

// ---------------------------------------------------------------------------
// Transforms and comparisons

inline PathLaw pushforward_reflect(const PathLaw& law, int a) {
  PathLaw::Support s;
  for (const auto& [p, w] : law.support()) s[reflect(p, a)] += w;
  return PathLaw(law.horizon(), std::move(s));
}

/// Law of the quadratic-variation trajectory.
inline std::map<QuadraticVariation, Rational> qv_marginal(const PathLaw& law) {
  std::map<QuadraticVariation, Rational> out;
  for (const auto& [p, w] : law.support()) out[quadratic_variation(p)] += w;
  return out;
}

struct Discrepancy {
  SkipFreePath path;
  Rational left;
  Rational right;
};

struct LawComparison {
  bool equal = true;
  std::optional<Discrepancy> witness;  // lexicographically first differing path
  explicit operator bool() const { return equal; }
};

inline LawComparison laws_equal(const PathLaw& l1, const PathLaw& l2) {
  if (l1.horizon() != l2.horizon())
    throw std::invalid_argument("laws_equal: horizons differ (" + std::to_string(l1.horizon()) + " vs " +
                                std::to_string(l2.horizon()) + ")");
  auto i = l1.support().begin();
  auto j = l2.support().begin();
  const auto e1 = l1.support().end();
  const auto e2 = l2.support().end();
  while (i != e1 || j != e2) {
    if (j == e2 || (i != e1 && i->first < j->first))
      return {false, Discrepancy{i->first, i->second, Rational(0)}};
    if (i == e1 || j->first < i->first)
      return {false, Discrepancy{j->first, Rational(0), j->second}};
    if (i->second != j->second) return {false, Discrepancy{i->first, i->second, j->second}};
    ++i;
    ++j;
  }
  return {true, std::nullopt};
}

// ---------------------------------------------------------------------------
// Conditional law of the embedded walk given the quadratic variation

struct QvClass {
  Rational mass;           // P([M] = this trajectory)
  std::size_t steps = 0;   // final quadratic variation K; walks live in Lambda^K
  std::map<WalkPath, Rational> conditional;

  [[nodiscard]] Rational conditional_mass(const WalkPath& w) const {
    auto it = conditional.find(w);
    return it == conditional.end() ? Rational(0) : it->second;
  }

  [[nodiscard]] bool is_uniform() const {
    if (steps >= 63) return false;
    if (conditional.size() != (std::size_t{1} << steps)) return false;
    const Rational u = inverse_power_of_two(steps);
    for (const auto& [w, p] : conditional)
      if (p != u) return false;
    return true;
  }
};

using ConditionalEmbeddedLaw = std::map<QuadraticVariation, QvClass>;

inline ConditionalEmbeddedLaw conditional_embedded_law(const PathLaw& law) {
  ConditionalEmbeddedLaw out;
  for (const auto& [p, w] : law.support()) {
    const QuadraticVariation q = quadratic_variation(p);
    auto& cls = out[q];
    cls.mass += w;
    cls.steps = static_cast<std::size_t>(q.final_value());
    cls.conditional[embedded_walk(p).walk] += w;
  }
  for (auto& [q, cls] : out)
    for (auto& [walk, w] : cls.conditional) w /= cls.mass;
  return out;
}

// ---------------------------------------------------------------------------
// Ocone check

/// Pastes an independent fair walk after the last increase of [M] in every
/// supported path, spreading its mass uniformly over the extensions.
inline PathLaw paste_fair_walk(const PathLaw& law) {
  PathLaw::Support s;
  for (const auto& [p, w] : law.support()) {
    const std::size_t need = p.horizon() - stagnation_index(quadratic_variation(p));
    const Rational each = w * inverse_power_of_two(need);
    for (std::uint64_t c = 0; c < (std::uint64_t{1} << need); ++c)
      s[paste_walk(p, WalkPath::from_bits(c, need))] += each;
  }
  return PathLaw(law.horizon(), std::move(s));
}

struct OconeWitness {
  enum class Kind { reflection, non_uniform, product };
  Kind kind = Kind::non_uniform;
  QuadraticVariation qv_class;
  int level = 0;              // reflection witnesses only
  WalkPath walk;              // walk whose conditional mass is off
  Rational mass;              // conditional mass of walk in qv_class
  Rational reference;         // what it should equal
};

inline const char* to_string(OconeWitness::Kind k) {
  switch (k) {
    case OconeWitness::Kind::reflection: return "reflection";
    case OconeWitness::Kind::non_uniform: return "non-uniform";
    case OconeWitness::Kind::product: return "product";
  }
  return "?";
}

struct OconeReport {
  bool is_product = true;
  bool embedded_uniform = true;
  bool pasted = false;
  Rational stagnating_mass;  // mass of paths with [M]_m < m
  std::size_t n_classes = 0;
  std::optional<OconeWitness> witness;

  [[nodiscard]] bool is_ocone() const { return is_product && embedded_uniform; }
};

struct OconeCheckOptions {
  bool pasted = false;
  std::vector<int> witness_levels{0, 1, 2};
};

namespace detail {

inline std::map<WalkPath, Rational> project_prefix(const std::map<WalkPath, Rational>& law, std::size_t len) {
  std::map<WalkPath, Rational> out;
  for (const auto& [w, p] : law) out[truncate(w, len)] += p;
  return out;
}

inline std::optional<OconeWitness> reflection_witness(const QuadraticVariation& q, const QvClass& cls,
                                                      const std::vector<int>& levels) {
  for (const auto& [u, p] : cls.conditional)
    for (int a : levels) {
      const WalkPath v = reflect(u, a);
      const Rational pv = cls.conditional_mass(v);
      if (pv != p) return OconeWitness{OconeWitness::Kind::reflection, q, a, v, pv, p};
    }
  return std::nullopt;
}

}  // namespace detail

/// Exact finite-horizon Ocone check.
///
/// is_product: the conditional law of the embedded walk given [M] does not
/// depend on the [M]-class, compared on the common prefix of any two
/// classes (a class with K increases only determines K walk steps).
/// embedded_uniform: each conditional is uniform on Lambda^K.
inline OconeReport ocone_check(const PathLaw& input, const OconeCheckOptions& opt = {}) {
  const PathLaw law = opt.pasted ? paste_fair_walk(input) : input;
  OconeReport r;
  r.pasted = opt.pasted;
  for (const auto& [p, w] : input.support())
    if (static_cast<std::size_t>(quadratic_variation(p).final_value()) < input.horizon()) r.stagnating_mass += w;

  const ConditionalEmbeddedLaw cond = conditional_embedded_law(law);
  r.n_classes = cond.size();

  for (const auto& [q, cls] : cond) {
    if (cls.is_uniform()) continue;
    r.embedded_uniform = false;
    if (!r.witness) {
      r.witness = detail::reflection_witness(q, cls, opt.witness_levels);
      if (!r.witness) {
        const Rational u = inverse_power_of_two(cls.steps);
        for (std::uint64_t c = 0; c < (std::uint64_t{1} << cls.steps); ++c) {
          const WalkPath w = WalkPath::from_bits(c, cls.steps);
          if (cls.conditional_mass(w) != u) {
            r.witness = OconeWitness{OconeWitness::Kind::non_uniform, q, 0, w, cls.conditional_mass(w), u};
            break;
          }
        }
      }
    }
  }

  // Reference class: the one with the most walk steps.
  const QvClass* ref = nullptr;
  for (const auto& [q, cls] : cond)
    if (ref == nullptr || cls.steps > ref->steps) ref = &cls;
  for (const auto& [q, cls] : cond) {
    if (&cls == ref) continue;
    const auto projected = detail::project_prefix(ref->conditional, cls.steps);
    if (projected == cls.conditional) continue;
    r.is_product = false;
    if (!r.witness) {
      for (const auto& [w, p] : projected)
        if (cls.conditional_mass(w) != p) {
          r.witness = OconeWitness{OconeWitness::Kind::product, q, 0, w, cls.conditional_mass(w), p};
          break;
        }
      for (const auto& [w, p] : cls.conditional)
        if (!r.witness && !projected.contains(w))
          r.witness = OconeWitness{OconeWitness::Kind::product, q, 0, w, p, Rational(0)};
    }
    break;
  }
  return r;
}

}  // namespace ocone
