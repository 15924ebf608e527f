#pragma once

#include <algorithm>
#include <cctype>
#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "pcsreg/error.hpp"
#include "pcsreg/frames.hpp"
#include "pcsreg/prepositions.hpp"
#include "pcsreg/scene.hpp"

namespace pcsreg {

enum class Person { kSpeakerSelf, kListenerSelf };

inline std::string to_lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

inline bool iequals(std::string_view a, std::string_view b) {
  return a.size() == b.size() && to_lower(a) == to_lower(b);
}

// The basic NP "the red round block", or the pronoun NPs "me" / "you".
struct AttributePhrase {
  std::optional<std::string> category;
  std::optional<std::string> color;
  std::optional<std::string> shape;
  std::optional<Person> person;

  static AttributePhrase of_person(Person p) {
    AttributePhrase a;
    a.person = p;
    return a;
  }

  bool empty() const { return !category && !color && !shape && !person; }
  bool valid() const { return !empty() && (!person || (!category && !color && !shape)); }

  friend bool operator==(const AttributePhrase&, const AttributePhrase&) = default;
};

inline bool matches(const AttributePhrase& x, const Entity& e) {
  if (x.person) {
    return (*x.person == Person::kSpeakerSelf && e.kind == EntityKind::kSpeaker) ||
           (*x.person == Person::kListenerSelf && e.kind == EntityKind::kListener);
  }
  if (e.kind != EntityKind::kObject) return false;
  auto field_ok = [](const std::optional<std::string>& want, const std::optional<std::string>& have) {
    return !want || (have && iequals(*want, *have));
  };
  return (!x.category || iequals(*x.category, e.category)) && field_ok(x.color, e.color) &&
         field_ok(x.shape, e.shape);
}

// Indices (scene order) of the entities consistent with the phrase.
inline std::vector<std::size_t> consistent_set(const AttributePhrase& x, const Scene& scene) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < scene.size(); ++i)
    if (matches(x, scene[i])) out.push_back(i);
  return out;
}

// Right-branching NP: either a basic NP, or head NP + PP(prep, landmark NP).
// Subtrees are shared immutably, so copies are cheap.
class ExpressionTree {
 public:
  static ExpressionTree leaf(AttributePhrase head) {
    if (!head.valid()) throw Error(Errc::kExpressionParse, "invalid attribute phrase");
    ExpressionTree t;
    t.head_ = std::move(head);
    return t;
  }

  static ExpressionTree compound(AttributePhrase head, Preposition prep, ExpressionTree landmark) {
    ExpressionTree t = leaf(std::move(head));
    if (t.head_.person)
      throw Error(Errc::kExpressionParse, "a pronoun cannot take a prepositional phrase");
    t.prep_ = prep;
    t.landmark_ = std::make_shared<const ExpressionTree>(std::move(landmark));
    return t;
  }

  const AttributePhrase& head() const { return head_; }
  bool is_leaf() const { return !prep_.has_value(); }
  Preposition prep() const { return *prep_; }
  const ExpressionTree& landmark() const { return *landmark_; }

  // Number of relation units.
  std::size_t depth() const { return is_leaf() ? 0 : 1 + landmark_->depth(); }

  friend bool operator==(const ExpressionTree& a, const ExpressionTree& b) {
    if (a.head_ != b.head_ || a.prep_ != b.prep_) return false;
    return a.is_leaf() || *a.landmark_ == *b.landmark_;
  }

 private:
  ExpressionTree() = default;

  AttributePhrase head_;
  std::optional<Preposition> prep_;
  std::shared_ptr<const ExpressionTree> landmark_;
};

// Distribution over scene entities (indexed like Scene::entities()), or the
// unresolvable marker when no entity carries mass.
class Denotation {
 public:
  static Denotation unresolvable(std::size_t n) { return Denotation(std::vector<double>(n, 0.0), false); }

  // Normalizes `mass`; zero total mass yields the unresolvable marker.
  static Denotation from_mass(std::vector<double> mass) {
    double total = 0.0;
    for (double m : mass) total += m;
    if (!(total > 0.0)) return unresolvable(mass.size());
    for (double& m : mass) m /= total;
    return Denotation(std::move(mass), true);
  }

  bool resolvable() const { return resolvable_; }
  std::size_t size() const { return probs_.size(); }
  std::span<const double> probs() const { return probs_; }
  double operator[](std::size_t i) const { return probs_[i]; }

  double max() const {
    double m = 0.0;
    for (double p : probs_) m = std::max(m, p);
    return m;
  }

  // Highest-probability entity, ties to the lowest index.
  std::optional<std::size_t> argmax() const {
    if (!resolvable_) return std::nullopt;
    std::size_t best = 0;
    for (std::size_t i = 1; i < probs_.size(); ++i)
      if (probs_[i] > probs_[best]) best = i;
    return best;
  }

 private:
  Denotation(std::vector<double> p, bool ok) : probs_(std::move(p)), resolvable_(ok) {}

  std::vector<double> probs_;
  bool resolvable_;
};

struct ResolverOptions {
  // Weight the relation base case by its fuzzy degree instead of 0/1.
  bool fuzzy_base = false;
  // Relations with a lower membership degree count as false.
  double min_degree = 0.0;
};

namespace detail {

inline Denotation denote_leaf(const AttributePhrase& x, const Scene& scene) {
  std::vector<double> mass(scene.size(), 0.0);
  for (std::size_t i : consistent_set(x, scene)) mass[i] = 1.0;
  return Denotation::from_mass(std::move(mass));
}

// Unnormalized PP mass: sum over landmark candidates and frame kinds.
inline std::vector<double> pp_mass(Preposition r, const Denotation& landmark, const Scene& scene,
                                   const PreferenceTable& prefs, const ResolverOptions& opts) {
  std::vector<double> mass(scene.size(), 0.0);
  for (std::size_t lm = 0; lm < scene.size(); ++lm) {
    const double p_lm = landmark[lm];
    if (p_lm <= 0.0) continue;
    const LandmarkType type = landmark_type(scene[lm]);
    for (FrameKind f : kAllFrameKinds) {
      const double p_f = prefs(type, f);
      if (p_f <= 0.0) continue;
      auto frame = frame_at_landmark(f, scene, lm);
      if (!frame) continue;
      for (std::size_t o = 0; o < scene.size(); ++o) {
        if (o == lm) continue;
        const Vec2 target = scene[o].centroid, anchor = scene[lm].centroid;
        const double degree = membership(target, anchor, r, *frame);
        if (degree < opts.min_degree) continue;
        double base;
        if (opts.fuzzy_base) base = degree;
        else base = relation(target, anchor, *frame) == r ? 1.0 : 0.0;
        mass[o] += base * p_f * p_lm;
      }
    }
  }
  return mass;
}

}  // namespace detail

// Listener resolution model. Basic NPs are uniform over their consistent
// set; a PP marginalizes over landmark entity and frame kind (weighted by the
// landmark type's preference row); an NP with a PP multiplies its head and PP
// distributions and renormalizes.
inline Denotation denote(const ExpressionTree& tree, const Scene& scene,
                         const PreferenceTable& prefs, const ResolverOptions& opts = {}) {
  Denotation head = detail::denote_leaf(tree.head(), scene);
  if (tree.is_leaf() || !head.resolvable()) return head;

  const Denotation landmark = denote(tree.landmark(), scene, prefs, opts);
  if (!landmark.resolvable()) return Denotation::unresolvable(scene.size());

  const Denotation pp =
      Denotation::from_mass(detail::pp_mass(tree.prep(), landmark, scene, prefs, opts));
  if (!pp.resolvable()) return pp;

  std::vector<double> mass(scene.size(), 0.0);
  for (std::size_t o = 0; o < scene.size(); ++o) mass[o] = head[o] * pp[o];
  return Denotation::from_mass(std::move(mass));
}

// ---------------------------------------------------------------------------
// Structured JSON form: {"head": {...}, "prep": "front", "landmark": {...}}.

inline nlohmann::json attributes_to_json(const AttributePhrase& a) {
  nlohmann::json j = nlohmann::json::object();
  if (a.person) j["person"] = *a.person == Person::kSpeakerSelf ? "speaker" : "listener";
  if (a.category) j["category"] = *a.category;
  if (a.color) j["color"] = *a.color;
  if (a.shape) j["shape"] = *a.shape;
  return j;
}

inline nlohmann::json tree_to_json(const ExpressionTree& t) {
  nlohmann::json j;
  j["head"] = attributes_to_json(t.head());
  if (!t.is_leaf()) {
    j["prep"] = std::string(to_string(t.prep()));
    j["landmark"] = tree_to_json(t.landmark());
  }
  return j;
}

inline AttributePhrase attributes_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw Error(Errc::kExpressionParse, "head must be an object", "head");
  AttributePhrase a;
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (it->is_null()) continue;
    if (!it->is_string())
      throw Error(Errc::kExpressionParse, "attribute must be a string", "head." + it.key());
    const std::string v = it->get<std::string>();
    if (it.key() == "category") a.category = v;
    else if (it.key() == "color") a.color = v;
    else if (it.key() == "shape") a.shape = v;
    else if (it.key() == "person") {
      if (v == "speaker") a.person = Person::kSpeakerSelf;
      else if (v == "listener") a.person = Person::kListenerSelf;
      else throw Error(Errc::kExpressionParse, "person must be speaker or listener", "head.person");
    } else {
      throw Error(Errc::kExpressionParse, "unknown attribute", "head." + it.key());
    }
  }
  if (!a.valid()) throw Error(Errc::kExpressionParse, "invalid attribute phrase", "head");
  return a;
}

inline ExpressionTree tree_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("head"))
    throw Error(Errc::kExpressionParse, "expression node needs a head");
  AttributePhrase head = attributes_from_json(j.at("head"));
  const bool has_prep = j.contains("prep"), has_landmark = j.contains("landmark");
  if (!has_prep && !has_landmark) return ExpressionTree::leaf(std::move(head));
  if (!has_prep || !has_landmark)
    throw Error(Errc::kExpressionParse, "prep and landmark must appear together");
  const auto& p = j.at("prep");
  auto prep = p.is_string() ? preposition_from_string(p.get<std::string>()) : std::nullopt;
  if (!prep)
    throw Error(Errc::kTopologicalPreposition,
                "only projective prepositions front/behind/left/right are supported", "prep");
  return ExpressionTree::compound(std::move(head), *prep, tree_from_json(j.at("landmark")));
}

}  // namespace pcsreg
