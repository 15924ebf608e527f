#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "pcsreg/error.hpp"
#include "pcsreg/prepositions.hpp"
#include "pcsreg/resolver.hpp"
#include "pcsreg/scene.hpp"

// Parser for the template language emitted by realize():
//
//   S  -> NP
//   NP -> NP PP | "the" [color] [shape] [category] | "me" | "you"
//   PP -> IN NP | "on my left" | "on your right" | ...
//
// Each PP attaches to the NP immediately on its left, which makes the
// resulting trees right-branching.

namespace pcsreg {

// Words the scene can be described with, lowercased.
struct Lexicon {
  std::set<std::string> colors;
  std::set<std::string> shapes;
  std::set<std::string> categories;
};

inline Lexicon lexicon_from_scene(const Scene& scene) {
  Lexicon lex;
  for (const Entity& e : scene.entities()) {
    if (e.is_agent()) continue;
    lex.categories.insert(to_lower(e.category));
    if (e.color) lex.colors.insert(to_lower(*e.color));
    if (e.shape) lex.shapes.insert(to_lower(*e.shape));
  }
  return lex;
}

namespace detail {

inline const std::set<std::string>& topological_words() {
  static const std::set<std::string> words = {
      "near", "next", "beside", "besides", "by", "close", "far", "between", "among",
      "around", "inside", "outside", "within", "against", "adjacent", "touching"};
  return words;
}

class ExpressionParser {
 public:
  ExpressionParser(std::string_view text, const Lexicon& lex) : lex_(lex) {
    std::istringstream in{to_lower(text)};
    for (std::string tok; in >> tok;) tokens_.push_back(tok);
  }

  ExpressionTree parse() {
    if (tokens_.empty()) throw Error(Errc::kExpressionParse, "empty expression");
    ExpressionTree tree = parse_np(/*allow_person=*/false);
    if (pos_ != tokens_.size()) fail_at(pos_, "unexpected token");
    return tree;
  }

 private:
  struct PrepMatch {
    Preposition prep;
    std::size_t length;
    std::optional<Person> person;  // set for the fused "on my left" forms
  };

  bool at(std::size_t i, std::string_view word) const {
    return i < tokens_.size() && tokens_[i] == word;
  }

  bool match_words(std::size_t i, std::initializer_list<std::string_view> words) const {
    for (std::string_view w : words)
      if (!at(i++, w)) return false;
    return true;
  }

  std::optional<PrepMatch> match_prep(std::size_t i) const {
    if (match_words(i, {"in", "front", "of"})) return PrepMatch{Preposition::kFront, 3, {}};
    if (match_words(i, {"behind"})) return PrepMatch{Preposition::kBehind, 1, {}};
    for (std::string_view lead : {"to", "on"}) {
      if (match_words(i, {lead, "the", "left", "of"})) return PrepMatch{Preposition::kLeft, 4, {}};
      if (match_words(i, {lead, "the", "right", "of"})) return PrepMatch{Preposition::kRight, 4, {}};
    }
    for (auto [owner, person] : {std::pair{"my", Person::kSpeakerSelf},
                                 std::pair{"your", Person::kListenerSelf}}) {
      if (match_words(i, {"on", owner, "left"})) return PrepMatch{Preposition::kLeft, 3, person};
      if (match_words(i, {"on", owner, "right"})) return PrepMatch{Preposition::kRight, 3, person};
    }
    return std::nullopt;
  }

  [[noreturn]] void fail_at(std::size_t i, const std::string& what) const {
    const std::string tok = i < tokens_.size() ? tokens_[i] : "<end>";
    if (topological_words().count(tok))
      throw Error(Errc::kTopologicalPreposition,
                  "'" + tok + "' is not a projective preposition; only front/behind/left/right "
                  "relations are supported");
    throw Error(Errc::kExpressionParse, what + " '" + tok + "' at word " + std::to_string(i + 1));
  }

  ExpressionTree parse_np(bool allow_person) {
    if (allow_person && (at(pos_, "me") || at(pos_, "you"))) {
      const Person p = at(pos_, "me") ? Person::kSpeakerSelf : Person::kListenerSelf;
      ++pos_;
      return ExpressionTree::leaf(AttributePhrase::of_person(p));
    }
    if (!at(pos_, "the")) fail_at(pos_, "expected 'the' but found");
    ++pos_;
    const std::size_t begin = pos_;
    while (pos_ < tokens_.size() && !match_prep(pos_)) {
      if (topological_words().count(tokens_[pos_])) fail_at(pos_, "");
      ++pos_;
    }
    AttributePhrase head = classify(begin, pos_);
    auto pp = match_prep(pos_);
    if (!pp) return ExpressionTree::leaf(std::move(head));
    pos_ += pp->length;
    if (pp->person)
      return ExpressionTree::compound(std::move(head), pp->prep,
                                      ExpressionTree::leaf(AttributePhrase::of_person(*pp->person)));
    if (pos_ >= tokens_.size()) fail_at(pos_, "missing landmark after preposition at");
    return ExpressionTree::compound(std::move(head), pp->prep, parse_np(/*allow_person=*/true));
  }

  // Splits the words of a basic NP into [color] [shape] [category...],
  // trying the readings with the fewest modifiers first.
  AttributePhrase classify(std::size_t begin, std::size_t end) const {
    if (begin == end) fail_at(begin, "empty noun phrase before");
    const std::size_t n = end - begin;
    for (auto [c, s] : {std::pair{0u, 0u}, {0u, 1u}, {1u, 0u}, {1u, 1u}}) {
      if (c + s > n) continue;
      AttributePhrase a;
      if (c) {
        if (!lex_.colors.count(tokens_[begin])) continue;
        a.color = tokens_[begin];
      }
      if (s) {
        if (!lex_.shapes.count(tokens_[begin + c])) continue;
        a.shape = tokens_[begin + c];
      }
      std::string category;
      for (std::size_t i = begin + c + s; i < end; ++i) {
        if (!category.empty()) category += ' ';
        category += tokens_[i];
      }
      if (!category.empty()) {
        if (!lex_.categories.count(category)) continue;
        a.category = category;
      }
      if (a.valid()) return a;
    }
    // Words outside the scene vocabulary still make a well-formed NP; it
    // just denotes nothing. Read them positionally: [color] [shape] category.
    if (n > 3) fail_at(begin, "noun phrase too long at");
    AttributePhrase a;
    a.category = tokens_[end - 1];
    if (n == 3) {
      a.color = tokens_[begin];
      a.shape = tokens_[begin + 1];
    } else if (n == 2) {
      (lex_.shapes.count(tokens_[begin]) ? a.shape : a.color) = tokens_[begin];
    }
    return a;
  }

  const Lexicon& lex_;
  std::vector<std::string> tokens_;
  std::size_t pos_ = 0;
};

}  // namespace detail

inline ExpressionTree parse_expression(std::string_view text, const Lexicon& lexicon) {
  return detail::ExpressionParser(text, lexicon).parse();
}

}  // namespace pcsreg
