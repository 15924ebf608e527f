#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string_view>

#include "pcsreg/error.hpp"
#include "pcsreg/frames.hpp"
#include "pcsreg/geometry.hpp"
#include "pcsreg/scene.hpp"

namespace pcsreg {

// Projective prepositions only. Canonical order is the tie-break.
enum class Preposition { kFront, kBehind, kLeft, kRight };

inline constexpr std::array<Preposition, 4> kAllPrepositions = {
    Preposition::kFront, Preposition::kBehind, Preposition::kLeft, Preposition::kRight};

// Degrees closer than this are treated as an exact tie.
inline constexpr double kRelationTieTolerance = 1e-12;

inline std::string_view to_string(Preposition p) {
  switch (p) {
    case Preposition::kFront: return "front";
    case Preposition::kBehind: return "behind";
    case Preposition::kLeft: return "left";
    case Preposition::kRight: return "right";
  }
  return "?";
}

inline std::optional<Preposition> preposition_from_string(std::string_view s) {
  for (Preposition p : kAllPrepositions)
    if (to_string(p) == s) return p;
  return std::nullopt;
}

inline std::string_view surface(Preposition p) {
  switch (p) {
    case Preposition::kFront: return "in front of";
    case Preposition::kBehind: return "behind";
    case Preposition::kLeft: return "to the left of";
    case Preposition::kRight: return "to the right of";
  }
  return "?";
}

// "in front of me", "on my left", ... `listener` selects the you/your forms.
inline std::string_view person_surface(Preposition p, bool listener) {
  switch (p) {
    case Preposition::kFront: return listener ? "in front of you" : "in front of me";
    case Preposition::kBehind: return listener ? "behind you" : "behind me";
    case Preposition::kLeft: return listener ? "on your left" : "on my left";
    case Preposition::kRight: return listener ? "on your right" : "on my right";
  }
  return "?";
}

inline Vec2 direction(Preposition p, const FrameInstance& frame) {
  switch (p) {
    case Preposition::kFront: return frame.front;
    case Preposition::kBehind: return frame.behind();
    case Preposition::kLeft: return frame.left();
    case Preposition::kRight: return frame.right();
  }
  return frame.front;
}

// Angle-only fuzzy membership: max(0, cos θ) between the displacement from
// the landmark and the preposition's canonical direction.
inline double membership(Vec2 target, Vec2 landmark, Preposition p, const FrameInstance& frame) {
  const Vec2 d = target - landmark;
  const double len = norm(d);
  if (len < kPositionEpsilon)
    throw Error(Errc::kCoincidentPoints, "target and landmark centroids coincide");
  const Vec2 axis = direction(p, frame);
  return std::clamp(dot(d, axis) / (len * norm(axis)), 0.0, 1.0);
}

inline double membership(const Entity& target, Vec2 landmark, Preposition p,
                         const FrameInstance& frame) {
  return membership(target.centroid, landmark, p, frame);
}

// Argmax membership; exact ties go to the earlier preposition.
inline Preposition relation(Vec2 target, Vec2 landmark, const FrameInstance& frame) {
  Preposition best = Preposition::kFront;
  double best_degree = -1.0;
  for (Preposition p : kAllPrepositions) {
    const double d = membership(target, landmark, p, frame);
    if (d > best_degree + kRelationTieTolerance) {
      best = p;
      best_degree = d;
    }
  }
  return best;
}

inline Preposition relation(const Entity& target, const Entity& landmark,
                            const FrameInstance& frame) {
  return relation(target.centroid, landmark.centroid, frame);
}

inline Preposition relation(const Entity& target, Vec2 landmark, const FrameInstance& frame) {
  return relation(target.centroid, landmark, frame);
}

}  // namespace pcsreg
