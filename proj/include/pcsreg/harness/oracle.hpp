#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <optional>
#include <vector>

#include "pcsreg/error.hpp"
#include "pcsreg/frames.hpp"
#include "pcsreg/resolver.hpp"
#include "pcsreg/scene.hpp"

// Brute-force reference for the resolution model. It enumerates every joint
// assignment of one entity per NP and one frame kind per PP, multiplies the
// factors along the whole path and marginalizes onto the root entity. It
// does not share code with denote() beyond the scene and phrase matching.

namespace pcsreg::harness {

inline constexpr std::size_t kOracleMaxDepth = 3;
inline constexpr std::size_t kOracleMaxEntities = 8;

namespace detail {

// Quadrant classification by projection onto the frame axes, ties in the
// order front, behind, left, right.
inline Preposition quadrant(Vec2 target, Vec2 anchor, Vec2 front) {
  const double dx = target.x - anchor.x, dy = target.y - anchor.y;
  const double len = std::sqrt(dx * dx + dy * dy);
  const double fl = std::sqrt(front.x * front.x + front.y * front.y);
  const double along = (dx * front.x + dy * front.y) / (len * fl);
  const double across = (dx * -front.y + dy * front.x) / (len * fl);  // toward the left
  const std::array<double, 4> score = {along, -along, across, -across};
  std::size_t best = 0;
  for (std::size_t i = 1; i < 4; ++i)
    if (score[i] > score[best] + 1e-12) best = i;
  return static_cast<Preposition>(best);
}

inline std::optional<Vec2> front_axis(FrameKind f, const Scene& scene, std::size_t anchor) {
  switch (f) {
    case FrameKind::kEgocentric: return scene.speaker().heading();
    case FrameKind::kAddresseeCentered: return scene.listener().heading();
    case FrameKind::kExtrinsic: return scene.north();
    case FrameKind::kIntrinsic:
      if (!scene[anchor].orientation) return std::nullopt;
      return scene[anchor].heading();
  }
  return std::nullopt;
}

}  // namespace detail

inline Denotation oracle_denote(const ExpressionTree& tree, const Scene& scene, const PreferenceTable& prefs) {
  std::vector<const AttributePhrase*> heads;
  std::vector<Preposition> preps;
  for (const ExpressionTree* t = &tree;; t = &t->landmark()) {
    heads.push_back(&t->head());
    if (t->is_leaf()) break;
    preps.push_back(t->prep());
  }
  const std::size_t depth = preps.size();
  const std::size_t n = scene.size();
  if (depth > kOracleMaxDepth || n > kOracleMaxEntities)
    throw Error(Errc::kSizeLimit, "oracle limited to depth 3 and 8 entities");

  // Uniform leaf weight per NP; an empty consistent set kills every path.
  std::vector<double> leaf_weight(heads.size());
  for (std::size_t i = 0; i < heads.size(); ++i) {
    std::size_t count = 0;
    for (std::size_t o = 0; o < n; ++o) count += matches(*heads[i], scene[o]) ? 1 : 0;
    if (count == 0) return Denotation::unresolvable(n);
    leaf_weight[i] = 1.0 / static_cast<double>(count);
  }

  std::vector<double> mass(n, 0.0);
  std::vector<std::size_t> ent(depth + 1, 0), frm(depth, 0);
  const std::size_t total_paths = [&] {
    std::size_t p = 1;
    for (std::size_t i = 0; i <= depth; ++i) p *= n;
    for (std::size_t i = 0; i < depth; ++i) p *= kFrameKindCount;
    return p;
  }();

  for (std::size_t code = 0; code < total_paths; ++code) {
    std::size_t c = code;
    for (auto& e : ent) { e = c % n; c /= n; }
    for (auto& f : frm) { f = c % kFrameKindCount; c /= kFrameKindCount; }

    double w = 1.0;
    for (std::size_t i = 0; i <= depth && w > 0.0; ++i)
      w *= matches(*heads[i], scene[ent[i]]) ? leaf_weight[i] : 0.0;
    for (std::size_t i = 0; i < depth && w > 0.0; ++i) {
      const std::size_t o = ent[i], anchor = ent[i + 1];
      if (o == anchor) { w = 0.0; break; }
      const auto kind = static_cast<FrameKind>(frm[i]);
      const auto axis = detail::front_axis(kind, scene, anchor);
      if (!axis) { w = 0.0; break; }
      w *= prefs(landmark_type(scene[anchor]), kind);
      if (detail::quadrant(scene[o].centroid, scene[anchor].centroid, *axis) != preps[i]) w = 0.0;
    }
    mass[ent[0]] += w;
  }
  return Denotation::from_mass(std::move(mass));
}

}  // namespace pcsreg::harness
