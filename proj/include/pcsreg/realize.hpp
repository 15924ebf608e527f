#pragma once

#include <string>

#include "pcsreg/prepositions.hpp"
#include "pcsreg/resolver.hpp"

namespace pcsreg {

// "the {color} {shape} {category}", or "me" / "you" for pronoun phrases.
inline std::string realize(const AttributePhrase& a) {
  if (a.person) return *a.person == Person::kSpeakerSelf ? "me" : "you";
  std::string out = "the";
  for (const auto* part : {&a.color, &a.shape, &a.category})
    if (*part) out += " " + **part;
  return out;
}

inline std::string realize(const ExpressionTree& tree) {
  std::string out = realize(tree.head());
  if (tree.is_leaf()) return out;
  const ExpressionTree& lm = tree.landmark();
  if (lm.is_leaf() && lm.head().person) {
    const bool listener = *lm.head().person == Person::kListenerSelf;
    return out + " " + std::string(person_surface(tree.prep(), listener));
  }
  return out + " " + std::string(surface(tree.prep())) + " " + realize(lm);
}

}  // namespace pcsreg
