#pragma once

// Seeded samplers.  Sample i of a run depends only on (seed, i): each draw
// opens its own counter-derived streams, with the walk and the time change
// on separate streams.

#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "ocone/continuous_bridge.hpp"
#include "ocone/counterexamples.hpp"
#include "ocone/parallel.hpp"
#include "ocone/path_law.hpp"
#include "ocone/rng.hpp"

namespace ocone {

enum class SamplerKind {
  bernoulli_walk,
  ocone_time_change,
  ce1,
  ce2,
  brownian_grid,
  brownian_walk,
  dependent_time_change,
};

inline std::string_view to_string(SamplerKind k) {
  switch (k) {
    case SamplerKind::bernoulli_walk: return "bernoulli-walk";
    case SamplerKind::ocone_time_change: return "ocone-time-change";
    case SamplerKind::ce1: return "ce1";
    case SamplerKind::ce2: return "ce2";
    case SamplerKind::brownian_grid: return "brownian-grid";
    case SamplerKind::brownian_walk: return "brownian-walk";
    case SamplerKind::dependent_time_change: return "dependent-time-change";
  }
  return "?";
}

inline SamplerKind parse_sampler_kind(std::string_view s) {
  for (auto k : {SamplerKind::bernoulli_walk, SamplerKind::ocone_time_change, SamplerKind::ce1, SamplerKind::ce2,
                 SamplerKind::brownian_grid, SamplerKind::brownian_walk, SamplerKind::dependent_time_change})
    if (to_string(k) == s) return k;
  throw std::invalid_argument("unknown sampler kind '" + std::string(s) + "'");
}

struct SamplerSpec {
  SamplerKind kind = SamplerKind::bernoulli_walk;
  std::size_t horizon = 8;                    // discrete kinds: number of steps
  double time_horizon = 1.0;                  // continuous kinds
  std::size_t grid_steps = 64;                // Gaussian-increment kinds
  double walk_step = 1.0 / 16;                // brownian-walk spatial step
  double stagnation_probability = 0.5;        // discrete ocone-time-change: P(A stays put)
  std::vector<double> rates{0.5, 2.0};        // continuous ocone-time-change: rate per half
  std::uint64_t seed = 0;
};

inline bool is_discrete(SamplerKind k) {
  return k == SamplerKind::bernoulli_walk || k == SamplerKind::ocone_time_change || k == SamplerKind::ce1 ||
         k == SamplerKind::ce2 || k == SamplerKind::dependent_time_change;
}

inline bool is_continuous(SamplerKind k) {
  return k == SamplerKind::brownian_grid || k == SamplerKind::brownian_walk ||
         k == SamplerKind::ocone_time_change || k == SamplerKind::dependent_time_change;
}

inline void validate(const SamplerSpec& s) {
  if (!(s.time_horizon > 0.0)) throw std::invalid_argument("sampler: time horizon must be positive");
  if (s.grid_steps == 0 || s.grid_steps % 2 != 0) throw std::invalid_argument("sampler: grid steps must be even and positive");
  if (!(s.walk_step > 0.0)) throw std::invalid_argument("sampler: walk step must be positive");
  if (!(s.stagnation_probability >= 0.0 && s.stagnation_probability < 1.0))
    throw std::invalid_argument("sampler: stagnation probability must lie in [0, 1)");
  if (s.rates.empty()) throw std::invalid_argument("sampler: need at least one time-change rate");
  for (double r : s.rates)
    if (!(r > 0.0)) throw std::invalid_argument("sampler: time-change rates must be positive");
  if (s.kind == SamplerKind::ce1 && s.horizon > kCe1Cap) throw std::invalid_argument("sampler: ce1 horizon above cap");
  if (s.kind == SamplerKind::ce2 && s.horizon > kCe2Cap) throw std::invalid_argument("sampler: ce2 horizon above cap");
  if (s.horizon > 4096) throw std::invalid_argument("sampler: horizon too large");
}

// ---------------------------------------------------------------------------
// Discrete paths

inline SkipFreePath draw_path(const SamplerSpec& spec, std::size_t index) {
  const std::size_t m = spec.horizon;
  auto g = rng::stream_for(spec.seed, index, rng::Stream::primary);
  rng::SignSource signs(g);
  switch (spec.kind) {
    case SamplerKind::bernoulli_walk: {
      std::vector<int> steps(m);
      for (auto& d : steps) d = signs.next();
      return SkipFreePath::from_increments(steps);
    }
    case SamplerKind::ocone_time_change: {
      auto tc = rng::stream_for(spec.seed, index, rng::Stream::time_change);
      std::vector<int> v(m + 1, 0);
      int s = 0;
      for (std::size_t n = 1; n <= m; ++n) {
        if (tc.uniform() >= spec.stagnation_probability) s += signs.next();
        v[n] = s;
      }
      return SkipFreePath(std::move(v));
    }
    case SamplerKind::ce1: {
      std::vector<int> e(ce1_sign_count(m));
      for (auto& x : e) x = signs.next();
      return ce1_path(e, m).as_skip_free();
    }
    case SamplerKind::ce2: {
      std::vector<int> e(ce2_block_count(m));
      for (auto& x : e) x = signs.next();
      return ce2_path(e, m).as_skip_free();
    }
    case SamplerKind::dependent_time_change: {
      std::vector<int> walk{0};
      std::vector<int> v(m + 1, 0);
      std::size_t a = 0;
      for (std::size_t n = 1; n <= m; ++n) {
        if (n == 1 || walk[1] > 0 || n % 2 == 0) {
          ++a;
          walk.push_back(walk.back() + signs.next());
        }
        v[n] = walk[a];
      }
      return SkipFreePath(std::move(v));
    }
    default:
      throw std::invalid_argument("sampler: kind '" + std::string(to_string(spec.kind)) + "' has no discrete paths");
  }
}

inline std::vector<SkipFreePath> sample_paths(const SamplerSpec& spec, std::size_t n, std::size_t workers = 1) {
  validate(spec);
  if (n == 0) throw std::invalid_argument("sample: n must be at least 1");
  if (!is_discrete(spec.kind))
    throw std::invalid_argument("sample: kind '" + std::string(to_string(spec.kind)) + "' has no discrete paths");
  std::vector<SkipFreePath> out(n);
  parallel_for(n, workers, [&](std::size_t i) { out[i] = draw_path(spec, i); });
  return out;
}

/// Exact law of the discrete sampler at the given depth, when one exists.
inline std::optional<PathLaw> exact_law(const SamplerSpec& spec, std::size_t depth) {
  switch (spec.kind) {
    case SamplerKind::bernoulli_walk: return enumerate_law(bernoulli_walk_spec(), depth);
    case SamplerKind::ce1: return ce1_law(depth);
    case SamplerKind::ce2: return ce2_law(depth);
    case SamplerKind::dependent_time_change: return enumerate_law(dependent_time_change_spec(), depth);
    case SamplerKind::ocone_time_change: {
      // Doubles are dyadic rationals, so this conversion is exact.
      const Rational stay(spec.stagnation_probability);
      const Rational move = 1 - stay;
      TimeChangeLaw tc;
      for (std::uint64_t c = 0; c < (std::uint64_t{1} << depth); ++c) {
        std::vector<int> a{0};
        Rational w = 1;
        for (std::size_t n = 0; n < depth; ++n) {
          const bool adv = (c >> n) & 1U;
          a.push_back(a.back() + (adv ? 1 : 0));
          w *= adv ? move : stay;
        }
        if (w != 0) tc.emplace_back(QuadraticVariation(std::move(a)), w);
      }
      return enumerate_law(ocone_time_change_spec(std::move(tc)), depth);
    }
    default: return std::nullopt;
  }
}

// ---------------------------------------------------------------------------
// Continuous paths

namespace detail {

inline void uniform_grid(std::vector<double>& t, std::size_t n, double horizon) {
  t.resize(n + 1);
  for (std::size_t i = 0; i <= n; ++i) t[i] = horizon * static_cast<double>(i) / static_cast<double>(n);
  t[n] = horizon;
}

/// Brownian motion evaluated at the nondecreasing clock values a[i].
inline void brownian_at_clock(rng::Xoshiro256& g, const std::vector<double>& clock, std::vector<double>& x) {
  std::normal_distribution<double> normal;
  x.resize(clock.size());
  x[0] = 0.0;
  for (std::size_t i = 1; i < clock.size(); ++i) x[i] = x[i - 1] + std::sqrt(clock[i] - clock[i - 1]) * normal(g);
}

}  // namespace detail

/// Overwrites out with sample `index`; reuses its storage.
inline void draw_continuous_into(const SamplerSpec& spec, std::size_t index, ContinuousSample& out) {
  auto& path = out.path;
  auto& qv = out.qv;
  const double horizon = spec.time_horizon;
  auto g = rng::stream_for(spec.seed, index, rng::Stream::primary);
  switch (spec.kind) {
    case SamplerKind::brownian_walk: {
      const double d = spec.walk_step;
      const auto n = static_cast<std::size_t>(std::llround(horizon / (d * d)));
      if (n == 0) throw std::invalid_argument("sampler: walk step too large for the horizon");
      const double dt = d * d;
      if (path.times.size() != n + 1 || path.times.back() != static_cast<double>(n) * dt) {
        path.times.resize(n + 1);
        for (std::size_t i = 0; i <= n; ++i) path.times[i] = static_cast<double>(i) * dt;
      }
      path.values.resize(n + 1);
      rng::SignSource signs(g);
      long level = 0;
      path.values[0] = 0.0;
      for (std::size_t i = 1; i <= n; ++i) {
        level += signs.next();
        path.values[i] = d * static_cast<double>(level);
      }
      path.exact_crossing = true;
      qv.times = {0.0, path.times.back()};
      qv.values = qv.times;
      return;
    }
    case SamplerKind::brownian_grid: {
      detail::uniform_grid(path.times, spec.grid_steps, horizon);
      detail::brownian_at_clock(g, path.times, path.values);
      path.exact_crossing = false;
      qv.times = path.times;
      qv.values = path.times;
      return;
    }
    case SamplerKind::ocone_time_change:
    case SamplerKind::dependent_time_change: {
      const std::size_t n = spec.grid_steps;
      detail::uniform_grid(path.times, n, horizon);
      std::vector<double>& clock = qv.values;
      clock.assign(n + 1, 0.0);
      qv.times = path.times;
      const std::size_t half = n / 2;
      if (spec.kind == SamplerKind::ocone_time_change) {
        auto tc = rng::stream_for(spec.seed, index, rng::Stream::time_change);
        const double r1 = spec.rates[tc() % spec.rates.size()];
        const double r2 = spec.rates[tc() % spec.rates.size()];
        for (std::size_t i = 1; i <= n; ++i)
          clock[i] = clock[i - 1] + (i <= half ? r1 : r2) * (path.times[i] - path.times[i - 1]);
        detail::brownian_at_clock(g, clock, path.values);
      } else {
        // Rate 1 on the first half; afterwards rate 2 or 1/2 by the sign of M at mid-horizon.
        std::normal_distribution<double> normal;
        path.values.assign(n + 1, 0.0);
        for (std::size_t i = 1; i <= n; ++i) {
          double rate = 1.0;
          if (i > half) rate = path.values[half] > 0.0 ? 2.0 : 0.5;
          clock[i] = clock[i - 1] + rate * (path.times[i] - path.times[i - 1]);
          path.values[i] = path.values[i - 1] + std::sqrt(clock[i] - clock[i - 1]) * normal(g);
        }
      }
      path.exact_crossing = false;
      return;
    }
    default:
      throw std::invalid_argument("sampler: kind '" + std::string(to_string(spec.kind)) + "' has no continuous paths");
  }
}

inline ContinuousSample draw_continuous(const SamplerSpec& spec, std::size_t index) {
  ContinuousSample s;
  draw_continuous_into(spec, index, s);
  return s;
}

inline std::vector<ContinuousSample> sample_continuous(const SamplerSpec& spec, std::size_t n, std::size_t workers = 1) {
  validate(spec);
  if (n == 0) throw std::invalid_argument("sample: n must be at least 1");
  if (!is_continuous(spec.kind))
    throw std::invalid_argument("sample: kind '" + std::string(to_string(spec.kind)) + "' has no continuous paths");
  std::vector<ContinuousSample> out(n);
  parallel_for(n, workers, [&](std::size_t i) { draw_continuous_into(spec, i, out[i]); });
  return out;
}

}  // namespace ocone
