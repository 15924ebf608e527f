#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "pcsreg/error.hpp"
#include "pcsreg/frames.hpp"
#include "pcsreg/generator.hpp"
#include "pcsreg/resolver.hpp"
#include "pcsreg/scene.hpp"

namespace pcsreg {

// Tolerance for "equal to the maximum" and for score ties.
inline constexpr double kScoreTieTolerance = 1e-12;

struct Score {
  int appropriateness = 0;     // 1 iff the target is (one of) the most probable
  double effectiveness = 0.0;  // probability the listener resolves to the target
  double total() const { return appropriateness + effectiveness; }
};

inline Score score(const Denotation& d, std::size_t target) {
  if (!d.resolvable()) return {};
  Score s;
  s.effectiveness = d[target];
  s.appropriateness = d[target] >= d.max() - kScoreTieTolerance ? 1 : 0;
  return s;
}

inline Score score(const ExpressionTree& tree, std::size_t target, const Scene& scene,
                   const PreferenceTable& prefs, const ResolverOptions& opts = {}) {
  return score(denote(tree, scene, prefs, opts), target);
}

struct Selection {
  std::size_t index = 0;  // into the candidate list
  Score score;
};

// Ranking used to break exact score ties: frame-consistent strategies, then
// canonical frame order, then the shorter sentence.
inline bool tie_break_before(const CandidateExpression& a, const CandidateExpression& b) {
  if (a.strategy.consistent() != b.strategy.consistent()) return a.strategy.consistent();
  const auto ka = a.strategy.kinds(), kb = b.strategy.kinds();
  if (ka != kb) return ka < kb;
  return a.surface.size() < b.surface.size();
}

// Scores every candidate (identical trees are denoted once) and returns the
// argmax of appropriateness + effectiveness.
inline std::vector<Score> score_all(const std::vector<CandidateExpression>& candidates, std::size_t target,
                                    const Scene& scene, const PreferenceTable& prefs,
                                    const ResolverOptions& opts = {}) {
  std::map<std::string, Score> cache;
  std::vector<Score> scores;
  scores.reserve(candidates.size());
  for (const auto& c : candidates) {
    auto it = cache.find(c.surface);
    if (it == cache.end()) it = cache.emplace(c.surface, score(c.tree, target, scene, prefs, opts)).first;
    scores.push_back(it->second);
  }
  return scores;
}

inline Selection select_best(const std::vector<CandidateExpression>& candidates, std::size_t target,
                             const Scene& scene, const PreferenceTable& prefs,
                             const ResolverOptions& opts = {}) {
  if (candidates.empty()) throw Error(Errc::kEmptyCandidates, "no candidate expressions to select from");
  const auto scores = score_all(candidates, target, scene, prefs, opts);
  std::size_t best = 0;
  for (std::size_t i = 1; i < candidates.size(); ++i) {
    const double diff = scores[i].total() - scores[best].total();
    if (diff > kScoreTieTolerance ||
        (std::abs(diff) <= kScoreTieTolerance && tie_break_before(candidates[i], candidates[best])))
      best = i;
  }
  return {best, scores[best]};
}

// Greedy per-unit choice: the applicable frame with the highest preference
// for that unit's landmark type. Ignores the resolution model.
inline CandidateExpression select_greedy_max(const LandmarkChain& chain, const Scene& scene,
                                             const PreferenceTable& prefs) {
  std::vector<FrameKind> kinds;
  for (const auto& entry : chain.stack.entries()) {
    const LandmarkType type = landmark_type(scene[entry.entity]);
    std::optional<FrameKind> best;
    for (FrameKind f : kAllFrameKinds) {
      if (!frame_at_landmark(f, scene, entry.entity)) continue;
      if (!best || prefs(type, f) > prefs(type, *best)) best = f;
    }
    kinds.push_back(*best);  // egocentric always applies
  }
  return *realize_strategy(chain, scene, kinds);
}

enum class Method { kPcsreg, kMax, kRobot, kHuman, kRandom };

inline constexpr Method kAllMethods[] = {Method::kPcsreg, Method::kMax, Method::kRobot, Method::kHuman,
                                         Method::kRandom};

inline std::string_view to_string(Method m) {
  switch (m) {
    case Method::kPcsreg: return "pcsreg";
    case Method::kMax: return "max";
    case Method::kRobot: return "robot";
    case Method::kHuman: return "human";
    case Method::kRandom: return "random";
  }
  return "?";
}

inline std::optional<Method> method_from_string(std::string_view s) {
  for (Method m : kAllMethods)
    if (to_string(m) == s) return m;
  return std::nullopt;
}

// Uniform integer in [0, n) by rejection, so the draw is identical across
// standard library implementations.
inline std::size_t uniform_index(std::mt19937_64& rng, std::size_t n) {
  const std::uint64_t bound = static_cast<std::uint64_t>(n);
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
  std::uint64_t x;
  do x = rng();
  while (x >= limit);
  return static_cast<std::size_t>(x % bound);
}

// Perspective baselines. kRobot / kHuman fix every unit to the egocentric /
// addressee-centred frame; kRandom draws one applicable strategy uniformly.
inline CandidateExpression select_baseline(Method kind, const LandmarkChain& chain, const Scene& scene,
                                           std::optional<std::uint64_t> seed = {}) {
  switch (kind) {
    case Method::kRobot:
    case Method::kHuman: {
      const FrameKind f = kind == Method::kRobot ? FrameKind::kEgocentric : FrameKind::kAddresseeCentered;
      return *realize_strategy(chain, scene, std::vector<FrameKind>(chain.k(), f));
    }
    case Method::kRandom: {
      if (!seed) throw Error(Errc::kConfig, "the random baseline requires a seed");
      auto space = expression_space(chain, scene);
      std::mt19937_64 rng(*seed);
      return std::move(space[uniform_index(rng, space.size())]);
    }
    default:
      throw Error(Errc::kConfig, "not a baseline method: " + std::string(to_string(kind)));
  }
}

// Runs one generation method on an already built chain.
inline CandidateExpression generate_with(Method method, const LandmarkChain& chain, const Scene& scene,
                                         const PreferenceTable& prefs, std::optional<std::uint64_t> seed = {},
                                         const ResolverOptions& opts = {}) {
  switch (method) {
    case Method::kPcsreg: {
      auto space = expression_space(chain, scene);
      const Selection sel = select_best(space, chain.target, scene, prefs, opts);
      return std::move(space[sel.index]);
    }
    case Method::kMax: return select_greedy_max(chain, scene, prefs);
    default: return select_baseline(method, chain, scene, seed);
  }
}

}  // namespace pcsreg
