#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "pcsreg/error.hpp"
#include "pcsreg/geometry.hpp"
#include "pcsreg/scene.hpp"

namespace pcsreg {

// Canonical order doubles as the deterministic tie-break everywhere.
enum class FrameKind { kEgocentric, kAddresseeCentered, kIntrinsic, kExtrinsic };

inline constexpr std::size_t kFrameKindCount = 4;
inline constexpr std::array<FrameKind, kFrameKindCount> kAllFrameKinds = {
    FrameKind::kEgocentric, FrameKind::kAddresseeCentered, FrameKind::kIntrinsic,
    FrameKind::kExtrinsic};

inline std::string_view to_string(FrameKind k) {
  switch (k) {
    case FrameKind::kEgocentric: return "egocentric";
    case FrameKind::kAddresseeCentered: return "addressee";
    case FrameKind::kIntrinsic: return "intrinsic";
    case FrameKind::kExtrinsic: return "extrinsic";
  }
  return "?";
}

inline std::optional<FrameKind> frame_kind_from_string(std::string_view s) {
  for (FrameKind k : kAllFrameKinds)
    if (to_string(k) == s) return k;
  return std::nullopt;
}

struct FrameInstance {
  FrameKind kind = FrameKind::kEgocentric;
  std::optional<std::string> origin;  // entity id; none for extrinsic
  Vec2 front{0.0, 1.0};

  // Viewer's right is clockwise from front when seen from above.
  Vec2 right() const { return rotate_cw90(front); }
  Vec2 behind() const { return -front; }
  Vec2 left() const { return rotate_ccw90(front); }

  FrameInstance rotated(int quarter_turns) const {
    FrameInstance f = *this;
    f.front = rotate_quarter_turns(front, quarter_turns);
    return f;
  }
};

inline FrameInstance frame_instance(FrameKind kind, const Scene& scene,
                                    std::optional<std::string_view> intrinsic_origin = {}) {
  switch (kind) {
    case FrameKind::kEgocentric:
      return {kind, scene.speaker().id, scene.speaker().heading()};
    case FrameKind::kAddresseeCentered:
      return {kind, scene.listener().id, scene.listener().heading()};
    case FrameKind::kExtrinsic:
      return {kind, std::nullopt, scene.north()};
    case FrameKind::kIntrinsic: {
      if (!intrinsic_origin)
        throw Error(Errc::kFramePrecondition, "intrinsic frame requires an origin entity");
      auto idx = scene.index_of(*intrinsic_origin);
      if (!idx)
        throw Error(Errc::kFramePrecondition,
                    "intrinsic origin '" + std::string(*intrinsic_origin) + "' not in scene");
      const Entity& e = scene[*idx];
      if (!e.oriented())
        throw Error(Errc::kFramePrecondition,
                    "intrinsic origin '" + e.id + "' has no orientation");
      return {kind, e.id, e.heading()};
    }
  }
  throw Error(Errc::kFramePrecondition, "unknown frame kind");
}

// Frame instantiated at a landmark, or nullopt when the frame kind does not
// apply there (intrinsic at an unoriented landmark).
inline std::optional<FrameInstance> frame_at_landmark(FrameKind kind, const Scene& scene,
                                                      std::size_t landmark) {
  if (kind == FrameKind::kIntrinsic && !scene[landmark].oriented()) return std::nullopt;
  return frame_instance(kind, scene, scene[landmark].id);
}

// Probability over FrameKind in canonical order.
using FrameDistribution = std::array<double, kFrameKindCount>;

inline bool is_normalized(std::span<const double> p, double tol = 1e-9) {
  double sum = 0.0;
  for (double v : p) {
    if (!(v >= 0.0 && v <= 1.0)) return false;
    sum += v;
  }
  return std::abs(sum - 1.0) <= tol;
}

inline FrameDistribution renormalized(FrameDistribution p) {
  double sum = 0.0;
  for (double v : p) sum += v;
  for (double& v : p) v /= sum;
  return p;
}

// Shannon entropy in bits, with 0 lg 0 = 0.
inline double preference_entropy(std::span<const double> p) {
  if (!is_normalized(p))
    throw Error(Errc::kNotNormalized, "preference distribution does not sum to 1");
  double h = 0.0;
  for (double v : p)
    if (v > 0.0) h -= v * std::log2(v);
  return h;
}

class PreferenceTable {
 public:
  explicit PreferenceTable(std::array<FrameDistribution, kLandmarkTypeCount> rows)
      : rows_(rows) {
    for (std::size_t i = 0; i < rows_.size(); ++i)
      if (!is_normalized(rows_[i]))
        throw Error(Errc::kNotNormalized, "row does not sum to 1",
                    std::string(to_string(static_cast<LandmarkType>(i))));
  }

  // Same distribution for every landmark type.
  static PreferenceTable uniform_rows(const FrameDistribution& row) {
    return PreferenceTable({row, row, row, row});
  }

  const FrameDistribution& row(LandmarkType t) const {
    return rows_[static_cast<std::size_t>(t)];
  }
  double operator()(LandmarkType t, FrameKind f) const {
    return row(t)[static_cast<std::size_t>(f)];
  }

  friend bool operator==(const PreferenceTable&, const PreferenceTable&) = default;

 private:
  std::array<FrameDistribution, kLandmarkTypeCount> rows_;
};

// Observed frame usage per landmark type, as collected from a human-human
// tabletop corpus (463 coded relation units).
inline PreferenceTable default_preferences() {
  return PreferenceTable({
      renormalized({1.0, 0.0, 0.0, 0.0}),
      renormalized({0.0408, 0.9592, 0.0, 0.0}),
      renormalized({0.045, 0.045, 0.905, 0.005}),
      renormalized({0.6667, 0.2014, 0.1181, 0.0138}),
  });
}

inline constexpr std::array<const char*, kLandmarkTypeCount> kPreferenceKeys = {
    "speaker", "listener", "oriented_object", "unoriented_object"};

// Rows must sum to 1 within 1e-6 and are renormalized on load.
inline PreferenceTable preferences_from_json(const nlohmann::json& doc) {
  if (!doc.is_object()) throw Error(Errc::kConfig, "preference document must be an object");
  std::array<FrameDistribution, kLandmarkTypeCount> rows{};
  for (std::size_t i = 0; i < kLandmarkTypeCount; ++i) {
    const char* key = kPreferenceKeys[i];
    auto it = doc.find(key);
    if (it == doc.end()) throw Error(Errc::kConfig, "missing row", key);
    if (!it->is_array() || it->size() != kFrameKindCount)
      throw Error(Errc::kConfig, "expected 4 numbers", key);
    double sum = 0.0;
    for (std::size_t j = 0; j < kFrameKindCount; ++j) {
      if (!(*it)[j].is_number()) throw Error(Errc::kConfig, "expected number", key);
      rows[i][j] = (*it)[j].get<double>();
      if (rows[i][j] < 0.0) throw Error(Errc::kConfig, "negative probability", key);
      sum += rows[i][j];
    }
    if (std::abs(sum - 1.0) > 1e-6) throw Error(Errc::kNotNormalized, "row does not sum to 1", key);
    rows[i] = renormalized(rows[i]);
  }
  return PreferenceTable(rows);
}

inline PreferenceTable load_preferences_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::kConfig, "cannot open '" + path + "'");
  try {
    return preferences_from_json(nlohmann::json::parse(in));
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(Errc::kConfig, e.what(), path);
  }
}

inline nlohmann::json preferences_to_json(const PreferenceTable& table) {
  nlohmann::json doc = nlohmann::json::object();
  for (std::size_t i = 0; i < kLandmarkTypeCount; ++i) {
    const auto& r = table.row(static_cast<LandmarkType>(i));
    doc[kPreferenceKeys[i]] = {r[0], r[1], r[2], r[3]};
  }
  return doc;
}

// One distribution per relation unit of the current landmark chain; unit 0
// is the outermost (target, landmark) pair.
struct PreferenceState {
  std::vector<FrameDistribution> units;
  int iteration_count = 0;

  friend bool operator==(const PreferenceState&, const PreferenceState&) = default;
};

inline PreferenceState initial_preference_state(std::span<const LandmarkType> chain,
                                                const PreferenceTable& base) {
  PreferenceState s;
  s.units.reserve(chain.size());
  for (LandmarkType t : chain) s.units.push_back(base.row(t));
  return s;
}

// Content window [-left, right] around a relation unit. Only [0, 1] is
// supported.
struct ContextWindow {
  int left = 0;
  int right = 1;
};

// Units whose landmark is an unoriented object take over the current
// distribution of their right neighbour. All units update simultaneously
// from the state at iteration c; the rightmost unit never changes.
inline PreferenceState update_preferences(const PreferenceState& state,
                                          std::span<const LandmarkType> chain,
                                          ContextWindow window = {}) {
  if (window.left != 0 || window.right != 1)
    throw Error(Errc::kConfig, "only the [0, 1] content window is supported");
  if (state.units.size() != chain.size())
    throw Error(Errc::kLengthMismatch, "preference state length " +
                                           std::to_string(state.units.size()) +
                                           " != chain length " + std::to_string(chain.size()));
  PreferenceState next = state;
  for (std::size_t i = 0; i + 1 < chain.size(); ++i)
    if (chain[i] == LandmarkType::kUnorientedObject) next.units[i] = state.units[i + 1];
  ++next.iteration_count;
  return next;
}

}  // namespace pcsreg
