#pragma once

#include <array>
#include <cstdio>
#include <numbers>
#include <string>
#include <vector>

#include <sys/wait.h>

#include "pcsreg/harness/comparison.hpp"
#include "pcsreg/harness/oracle.hpp"
#include "pcsreg/pcsreg.hpp"

namespace pcsreg::test {

inline constexpr double kHalfPi = std::numbers::pi / 2;

inline Entity object(std::string id, std::string category, Vec2 pos, std::optional<std::string> color = {},
                     std::optional<std::string> shape = {}, std::optional<double> heading = {}) {
  Entity e;
  e.id = std::move(id);
  e.category = std::move(category);
  e.centroid = pos;
  e.color = std::move(color);
  e.shape = std::move(shape);
  e.orientation = heading;
  return e;
}

inline Entity speaker(Vec2 pos = {0, -1}, double heading = kHalfPi) {
  Entity e = object("speaker", "robot", pos, {}, {}, heading);
  e.kind = EntityKind::kSpeaker;
  return e;
}

inline Entity listener(Vec2 pos = {0, 1}, double heading = -kHalfPi) {
  Entity e = object("listener", "person", pos, {}, {}, heading);
  e.kind = EntityKind::kListener;
  return e;
}

// Four objects around a square C; speaker and listener face each other.
inline Scene square_scene() {
  return Scene({object("A", "object", {0, -0.5}), object("B", "object", {0.5, 0}),
                object("C", "object", {0, 0}, {}, "square"), object("D", "object", {0, 0.5}), speaker(),
                listener()});
}

inline PreferenceTable square_prefs() { return PreferenceTable::uniform_rows({0.4, 0.6, 0.0, 0.0}); }

inline ExpressionTree square_expression() {
  AttributePhrase head, square;
  head.category = "object";
  square.shape = "square";
  return ExpressionTree::compound(head, Preposition::kFront, ExpressionTree::leaf(square));
}

// Two yellow blocks either side of a red car facing away from the speaker.
inline Scene car_scene() {
  return Scene({speaker(), listener(), object("car", "car", {0, 0}, "red", {}, kHalfPi),
                object("A", "block", {-0.4, 0}, "yellow"), object("B", "block", {0.4, 0}, "yellow")});
}

// Random phrase describing some entity of the scene (attributes dropped at
// random), occasionally a person pronoun when `allow_person`.
inline AttributePhrase random_phrase(std::mt19937_64& rng, const Scene& scene, bool allow_person) {
  const std::size_t i = uniform_index(rng, scene.size());
  const Entity& e = scene[i];
  if (e.is_agent()) {
    if (allow_person)
      return AttributePhrase::of_person(e.kind == EntityKind::kSpeaker ? Person::kSpeakerSelf : Person::kListenerSelf);
    return random_phrase(rng, scene, allow_person);
  }
  AttributePhrase a;
  a.category = e.category;
  if (e.color && rng() % 2) a.color = e.color;
  if (e.shape && rng() % 2) a.shape = e.shape;
  return a;
}

// Right-branching tree of the given depth; only the innermost landmark may
// be a pronoun.
inline ExpressionTree random_tree(std::mt19937_64& rng, const Scene& scene, std::size_t depth) {
  if (depth == 0) return ExpressionTree::leaf(random_phrase(rng, scene, false));
  std::optional<ExpressionTree> tree = ExpressionTree::leaf(random_phrase(rng, scene, true));
  for (std::size_t d = 0; d < depth; ++d)
    tree = ExpressionTree::compound(random_phrase(rng, scene, false),
                                    kAllPrepositions[uniform_index(rng, 4)], *tree);
  return *tree;
}

inline std::size_t idx(const Scene& s, std::string_view id) { return *s.index_of(id); }

struct ShellResult {
  int code = -1;
  std::string out;
};

// Runs a shell command, capturing stdout; stderr is discarded.
inline ShellResult shell(const std::string& cmd) {
  ShellResult r;
  FILE* p = popen((cmd + " 2>/dev/null").c_str(), "r");
  if (!p) return r;
  std::array<char, 4096> buf;
  std::size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), p)) > 0) r.out.append(buf.data(), n);
  const int status = pclose(p);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

}  // namespace pcsreg::test
