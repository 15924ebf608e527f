#pragma once

#include <cmath>
#include <cstddef>
#include <fstream>
#include <istream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include <json.hpp>

#include "pcsreg/error.hpp"
#include "pcsreg/geometry.hpp"

namespace pcsreg {

enum class EntityKind { kObject, kSpeaker, kListener };

enum class LandmarkType { kSpeaker, kListener, kOrientedObject, kUnorientedObject };

inline constexpr std::size_t kLandmarkTypeCount = 4;

inline std::string_view to_string(EntityKind k) {
  switch (k) {
    case EntityKind::kObject: return "object";
    case EntityKind::kSpeaker: return "speaker";
    case EntityKind::kListener: return "listener";
  }
  return "?";
}

inline std::string_view to_string(LandmarkType t) {
  switch (t) {
    case LandmarkType::kSpeaker: return "speaker";
    case LandmarkType::kListener: return "listener";
    case LandmarkType::kOrientedObject: return "oriented_object";
    case LandmarkType::kUnorientedObject: return "unoriented_object";
  }
  return "?";
}

struct Entity {
  std::string id;
  EntityKind kind = EntityKind::kObject;
  std::string category;
  std::optional<std::string> color;
  std::optional<std::string> shape;
  Vec2 centroid;
  // Heading in radians, counterclockwise from +x. Present iff oriented.
  std::optional<double> orientation;

  bool referable_as_target() const { return kind == EntityKind::kObject; }
  bool is_agent() const { return kind != EntityKind::kObject; }
  bool oriented() const { return orientation.has_value(); }
  Vec2 heading() const { return heading_vector(orientation.value_or(0.0)); }

  friend bool operator==(const Entity&, const Entity&) = default;
};

inline LandmarkType landmark_type(const Entity& e) {
  switch (e.kind) {
    case EntityKind::kSpeaker: return LandmarkType::kSpeaker;
    case EntityKind::kListener: return LandmarkType::kListener;
    case EntityKind::kObject: break;
  }
  return e.oriented() ? LandmarkType::kOrientedObject
                      : LandmarkType::kUnorientedObject;
}

// Immutable world model. Construction validates every invariant, so a Scene
// value that exists is always well formed.
class Scene {
 public:
  Scene(std::vector<Entity> entities, Vec2 north = {0.0, 1.0},
        Rect table = {{-1.0, -1.0}, {1.0, 1.0}})
      : entities_(std::move(entities)), north_(north), table_(table) {
    validate();
  }

  const std::vector<Entity>& entities() const { return entities_; }
  std::size_t size() const { return entities_.size(); }
  const Entity& operator[](std::size_t i) const { return entities_[i]; }
  Vec2 north() const { return north_; }
  const Rect& table() const { return table_; }

  std::optional<std::size_t> index_of(std::string_view id) const {
    for (std::size_t i = 0; i < entities_.size(); ++i)
      if (entities_[i].id == id) return i;
    return std::nullopt;
  }

  const Entity& entity(std::string_view id) const {
    auto i = index_of(id);
    if (!i) throw Error(Errc::kInvalidTarget, "unknown entity id '" + std::string(id) + "'");
    return entities_[*i];
  }

  std::size_t speaker_index() const { return speaker_; }
  std::size_t listener_index() const { return listener_; }
  const Entity& speaker() const { return entities_[speaker_]; }
  const Entity& listener() const { return entities_[listener_]; }

  friend bool operator==(const Scene& a, const Scene& b) {
    return a.entities_ == b.entities_ && a.north_ == b.north_ && a.table_ == b.table_;
  }

 private:
  void validate() {
    if (std::abs(norm(north_) - 1.0) > 1e-9)
      throw Error(Errc::kInvalidField, "north must be a unit vector", "north");
    if (!(table_.min.x <= table_.max.x && table_.min.y <= table_.max.y))
      throw Error(Errc::kInvalidField, "table min must not exceed max", "table");

    std::unordered_set<std::string> ids;
    std::optional<std::size_t> speaker, listener;
    for (std::size_t i = 0; i < entities_.size(); ++i) {
      const Entity& e = entities_[i];
      const std::string where = "entities[" + std::to_string(i) + "]";
      if (e.id.empty()) throw Error(Errc::kInvalidField, "empty id", where + ".id");
      if (!ids.insert(e.id).second)
        throw Error(Errc::kDuplicateId, "duplicate id '" + e.id + "'", where + ".id");
      if (!std::isfinite(e.centroid.x) || !std::isfinite(e.centroid.y))
        throw Error(Errc::kInvalidField, "non-finite position", where + ".pos");
      if (!table_.contains(e.centroid))
        throw Error(Errc::kOutOfExtent, "position of '" + e.id + "' lies outside the table",
                    where + ".pos");
      if (e.orientation && !std::isfinite(*e.orientation))
        throw Error(Errc::kInvalidField, "non-finite heading", where + ".heading");
      if (e.is_agent()) {
        auto& slot = e.kind == EntityKind::kSpeaker ? speaker : listener;
        if (slot)
          throw Error(Errc::kInvalidField,
                      "more than one " + std::string(to_string(e.kind)), where + ".kind");
        if (!e.oriented())
          throw Error(Errc::kInvalidField,
                      std::string(to_string(e.kind)) + " must have a heading", where + ".heading");
        slot = i;
      }
      for (std::size_t j = 0; j < i; ++j) {
        if (distance(entities_[j].centroid, e.centroid) < kPositionEpsilon)
          throw Error(Errc::kCentroidCollision,
                      "'" + e.id + "' coincides with '" + entities_[j].id + "'", where + ".pos");
      }
    }
    if (!speaker) throw Error(Errc::kMissingAgent, "scene has no speaker", "entities");
    if (!listener) throw Error(Errc::kMissingAgent, "scene has no listener", "entities");
    speaker_ = *speaker;
    listener_ = *listener;
  }

  std::vector<Entity> entities_;
  Vec2 north_;
  Rect table_;
  std::size_t speaker_ = 0;
  std::size_t listener_ = 0;
};

namespace detail {

inline const nlohmann::json& require(const nlohmann::json& obj, const char* key,
                                     const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end())
    throw Error(Errc::kSceneParse, "missing field", where.empty() ? key : where + "." + key);
  return *it;
}

inline Vec2 read_point(const nlohmann::json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    throw Error(Errc::kSceneParse, "expected [x, y]", where);
  return {j[0].get<double>(), j[1].get<double>()};
}

inline std::optional<std::string> read_optional_string(const nlohmann::json& obj,
                                                       const char* key,
                                                       const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return std::nullopt;
  if (!it->is_string()) throw Error(Errc::kSceneParse, "expected string or null", where + "." + key);
  return it->get<std::string>();
}

}  // namespace detail

inline Scene scene_from_json(const nlohmann::json& doc) {
  using detail::require;
  if (!doc.is_object()) throw Error(Errc::kSceneParse, "scene document must be an object");

  Vec2 north{0.0, 1.0};
  if (auto it = doc.find("north"); it != doc.end()) north = detail::read_point(*it, "north");

  Rect table{{-1.0, -1.0}, {1.0, 1.0}};
  if (auto it = doc.find("table"); it != doc.end()) {
    if (!it->is_object()) throw Error(Errc::kSceneParse, "expected object", "table");
    table.min = detail::read_point(require(*it, "min", "table"), "table.min");
    table.max = detail::read_point(require(*it, "max", "table"), "table.max");
  }

  const auto& list = require(doc, "entities", "");
  if (!list.is_array()) throw Error(Errc::kSceneParse, "expected array", "entities");

  std::vector<Entity> entities;
  entities.reserve(list.size());
  for (std::size_t i = 0; i < list.size(); ++i) {
    const auto& item = list[i];
    const std::string where = "entities[" + std::to_string(i) + "]";
    if (!item.is_object()) throw Error(Errc::kSceneParse, "expected object", where);
    Entity e;
    const auto& id = require(item, "id", where);
    if (!id.is_string()) throw Error(Errc::kSceneParse, "expected string", where + ".id");
    e.id = id.get<std::string>();

    const auto& kind = require(item, "kind", where);
    const std::string k = kind.is_string() ? kind.get<std::string>() : "";
    if (k == "object") e.kind = EntityKind::kObject;
    else if (k == "speaker") e.kind = EntityKind::kSpeaker;
    else if (k == "listener") e.kind = EntityKind::kListener;
    else throw Error(Errc::kSceneParse, "kind must be object, speaker or listener", where + ".kind");

    const auto& category = require(item, "category", where);
    if (!category.is_string())
      throw Error(Errc::kSceneParse, "expected string", where + ".category");
    e.category = category.get<std::string>();
    e.color = detail::read_optional_string(item, "color", where);
    e.shape = detail::read_optional_string(item, "shape", where);
    e.centroid = detail::read_point(require(item, "pos", where), where + ".pos");
    if (auto it = item.find("heading"); it != item.end() && !it->is_null()) {
      if (!it->is_number()) throw Error(Errc::kSceneParse, "expected number or null", where + ".heading");
      e.orientation = it->get<double>();
    }
    entities.push_back(std::move(e));
  }
  return Scene(std::move(entities), north, table);
}

inline Scene load_scene(std::istream& source) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(source);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(Errc::kSceneParse, e.what());
  }
  return scene_from_json(doc);
}

inline Scene load_scene_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::kSceneParse, "cannot open '" + path + "'");
  return load_scene(in);
}

inline nlohmann::json scene_to_json(const Scene& scene) {
  nlohmann::json entities = nlohmann::json::array();
  for (const Entity& e : scene.entities()) {
    nlohmann::json j;
    j["id"] = e.id;
    j["kind"] = std::string(to_string(e.kind));
    j["category"] = e.category;
    j["color"] = e.color ? nlohmann::json(*e.color) : nlohmann::json(nullptr);
    j["shape"] = e.shape ? nlohmann::json(*e.shape) : nlohmann::json(nullptr);
    j["pos"] = {e.centroid.x, e.centroid.y};
    j["heading"] = e.orientation ? nlohmann::json(*e.orientation) : nlohmann::json(nullptr);
    entities.push_back(std::move(j));
  }
  return {{"north", {scene.north().x, scene.north().y}},
          {"table",
           {{"min", {scene.table().min.x, scene.table().min.y}},
            {"max", {scene.table().max.x, scene.table().max.y}}}},
          {"entities", std::move(entities)}};
}

}  // namespace pcsreg
