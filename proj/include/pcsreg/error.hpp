#pragma once

#include <stdexcept>
#include <string>

namespace pcsreg {

enum class Errc {
  kSceneParse,
  kDuplicateId,
  kMissingAgent,
  kCentroidCollision,
  kOutOfExtent,
  kInvalidField,
  kNotNormalized,
  kFramePrecondition,
  kCoincidentPoints,
  kExpressionParse,
  kTopologicalPreposition,
  kLengthMismatch,
  kInvalidTarget,
  kNoDiscriminatingLandmark,
  kChainTooLong,
  kEmptyCandidates,
  kSizeLimit,
  kPlacementFailure,
  kConfig,
};

// Every failure in the library surfaces as this type. `field` names the
// offending document location (e.g. "entities[3].pos") when there is one.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message, std::string field = {})
      : std::runtime_error(field.empty() ? message : field + ": " + message),
        code_(code),
        field_(std::move(field)) {}

  Errc code() const noexcept { return code_; }
  const std::string& field() const noexcept { return field_; }

 private:
  Errc code_;
  std::string field_;
};

}  // namespace pcsreg
