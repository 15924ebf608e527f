#pragma once

// JSON Schema (draft 2020-12) documents printed by `pcsreg schema`.

namespace pcsreg::cli {

inline constexpr const char* kSceneSchema = R"({
  "$schema": "https://json-schema.org/draft/2020-12/schema",
  "title": "pcsreg scene",
  "type": "object",
  "required": ["entities"],
  "properties": {
    "north": {"type": "array", "items": {"type": "number"}, "minItems": 2, "maxItems": 2},
    "table": {
      "type": "object",
      "required": ["min", "max"],
      "properties": {
        "min": {"type": "array", "items": {"type": "number"}, "minItems": 2, "maxItems": 2},
        "max": {"type": "array", "items": {"type": "number"}, "minItems": 2, "maxItems": 2}
      }
    },
    "entities": {
      "type": "array",
      "items": {
        "type": "object",
        "required": ["id", "kind", "category", "pos"],
        "properties": {
          "id": {"type": "string", "minLength": 1},
          "kind": {"enum": ["object", "speaker", "listener"]},
          "category": {"type": "string"},
          "color": {"type": ["string", "null"]},
          "shape": {"type": ["string", "null"]},
          "pos": {"type": "array", "items": {"type": "number"}, "minItems": 2, "maxItems": 2},
          "heading": {"type": ["number", "null"], "description": "radians, counterclockwise from +x"}
        }
      }
    }
  }
})";

inline constexpr const char* kPreferencesSchema = R"({
  "$schema": "https://json-schema.org/draft/2020-12/schema",
  "title": "pcsreg frame preferences",
  "description": "Rows are (egocentric, addressee, intrinsic, extrinsic) and must sum to 1 +- 1e-6.",
  "type": "object",
  "required": ["speaker", "listener", "oriented_object", "unoriented_object"],
  "properties": {
    "speaker": {"$ref": "#/$defs/row"},
    "listener": {"$ref": "#/$defs/row"},
    "oriented_object": {"$ref": "#/$defs/row"},
    "unoriented_object": {"$ref": "#/$defs/row"}
  },
  "$defs": {
    "row": {"type": "array", "items": {"type": "number", "minimum": 0, "maximum": 1}, "minItems": 4, "maxItems": 4}
  }
})";

inline constexpr const char* kConfigSchema = R"({
  "$schema": "https://json-schema.org/draft/2020-12/schema",
  "title": "pcsreg evaluation config",
  "type": "object",
  "properties": {
    "seed": {"type": "integer", "minimum": 0},
    "n_scenes": {"type": "integer", "minimum": 1},
    "trials_per_expression": {"type": "integer", "minimum": 1},
    "methods": {
      "type": "array",
      "minItems": 1,
      "items": {"enum": ["pcsreg", "max", "robot", "human", "random"]}
    },
    "trials_override": {"type": "object", "additionalProperties": {"type": "integer", "minimum": 1}},
    "min_objects": {"type": "integer", "minimum": 1},
    "max_objects": {"type": "integer", "minimum": 1},
    "true_prefs": {"description": "preferences document"},
    "assumed_prefs": {"description": "preferences document"},
    "consistency_coupling": {"type": "number", "minimum": 0, "maximum": 1},
    "record_trials": {"type": "boolean"}
  }
})";

}  // namespace pcsreg::cli
