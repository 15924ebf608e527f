#pragma once

#include <cstddef>
#include <cstdint>
#include <numbers>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "pcsreg/error.hpp"
#include "pcsreg/geometry.hpp"
#include "pcsreg/harness/rng.hpp"
#include "pcsreg/optimizer.hpp"  // uniform_index
#include "pcsreg/scene.hpp"

namespace pcsreg::harness {

// An object the sampler must include, placed at a random position.
struct ObjectTemplate {
  std::string category;
  std::optional<std::string> color;
  std::optional<std::string> shape;
  bool oriented = false;
};

struct SceneSpec {
  std::size_t min_objects = 3;
  std::size_t max_objects = 8;
  std::vector<std::string> categories = {"block", "cuboid", "car", "triangle", "cylinder"};
  std::vector<std::string> oriented_categories = {"car"};
  std::vector<std::string> colors = {"red", "yellow", "blue", "green"};
  std::vector<std::string> shapes = {"round", "square"};
  double shape_probability = 0.5;
  // Chance that one object copies another's visual description.
  double duplicate_probability = 0.75;
  double min_separation = 0.12;
  double object_extent = 0.8;  // objects lie in [-e, e]^2
  std::vector<ObjectTemplate> forced;
  int max_retries = 1000;
};

namespace detail {

template <typename T>
const T& pick(std::mt19937_64& rng, const std::vector<T>& pool) {
  return pool[uniform_index(rng, pool.size())];
}

inline bool is_oriented_category(const SceneSpec& spec, const std::string& category) {
  for (const auto& c : spec.oriented_categories)
    if (c == category) return true;
  return false;
}

}  // namespace detail

// Speaker and listener face each other across a 2 m x 2 m table; objects
// are scattered uniformly in the middle with a minimum separation.
inline Scene sample_scene(std::uint64_t seed, const SceneSpec& spec = {}) {
  if (spec.categories.empty() || spec.colors.empty())
    throw Error(Errc::kConfig, "category and color pools must not be empty");
  if (spec.min_objects == 0 || spec.min_objects > spec.max_objects || spec.forced.size() > spec.max_objects)
    throw Error(Errc::kConfig, "invalid object-count range");

  std::mt19937_64 rng(seed);
  const std::size_t lo = std::max(spec.min_objects, spec.forced.size());
  const std::size_t n = lo + uniform_index(rng, spec.max_objects - lo + 1);

  std::vector<ObjectTemplate> looks = spec.forced;
  while (looks.size() < n) {
    ObjectTemplate t;
    t.category = detail::pick(rng, spec.categories);
    t.color = detail::pick(rng, spec.colors);
    if (!spec.shapes.empty() && uniform01(rng) < spec.shape_probability) t.shape = detail::pick(rng, spec.shapes);
    t.oriented = detail::is_oriented_category(spec, t.category);
    looks.push_back(std::move(t));
  }
  if (n >= 2 && spec.forced.size() < n && uniform01(rng) < spec.duplicate_probability) {
    const std::size_t dst = spec.forced.size() + uniform_index(rng, n - spec.forced.size());
    std::size_t src = uniform_index(rng, n - 1);
    if (src >= dst) ++src;
    looks[dst] = looks[src];
  }

  std::vector<Entity> entities;
  entities.push_back({"speaker", EntityKind::kSpeaker, "robot", {}, {}, {0.0, -1.0}, std::numbers::pi / 2});
  entities.push_back({"listener", EntityKind::kListener, "person", {}, {}, {0.0, 1.0}, -std::numbers::pi / 2});

  for (std::size_t i = 0; i < n; ++i) {
    Vec2 pos;
    bool placed = false;
    for (int attempt = 0; attempt < spec.max_retries && !placed; ++attempt) {
      pos = {uniform(rng, -spec.object_extent, spec.object_extent),
             uniform(rng, -spec.object_extent, spec.object_extent)};
      placed = true;
      for (const Entity& e : entities)
        if (distance(e.centroid, pos) < spec.min_separation) placed = false;
    }
    if (!placed) throw Error(Errc::kPlacementFailure, "could not place object " + std::to_string(i + 1));
    Entity e;
    e.id = "o" + std::to_string(i + 1);
    e.kind = EntityKind::kObject;
    e.category = looks[i].category;
    e.color = looks[i].color;
    e.shape = looks[i].shape;
    e.centroid = pos;
    if (looks[i].oriented) e.orientation = uniform(rng, -std::numbers::pi, std::numbers::pi);
    entities.push_back(std::move(e));
  }
  return Scene(std::move(entities), {0.0, 1.0}, {{-1.0, -1.0}, {1.0, 1.0}});
}

}  // namespace pcsreg::harness
