#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <tuple>
#include <vector>

#include "pcsreg/error.hpp"
#include "pcsreg/frames.hpp"
#include "pcsreg/prepositions.hpp"
#include "pcsreg/realize.hpp"
#include "pcsreg/resolver.hpp"
#include "pcsreg/scene.hpp"

namespace pcsreg {

// Content selection: visual description, landmark selection ordered by
// preference entropy, the landmark stack with its preference-update loop,
// and enumeration of the expression space over frame strategies.

struct VisualDescription {
  AttributePhrase attrs;
  bool distinguishing = false;

  friend bool operator==(const VisualDescription&, const VisualDescription&) = default;
};

// Thrown when no expression can single out the target. Carries the
// best-effort (ambiguous) description so callers can still report it.
class AmbiguityError : public Error {
 public:
  AmbiguityError(const std::string& message, std::string best_effort)
      : Error(Errc::kNoDiscriminatingLandmark, message), best_effort_(std::move(best_effort)) {}

  const std::string& best_effort() const { return best_effort_; }

 private:
  std::string best_effort_;
};

// Domain of entity indices the generator is still describing against.
using Domain = std::vector<std::size_t>;

inline Domain full_domain(const Scene& scene) {
  Domain d(scene.size());
  for (std::size_t i = 0; i < d.size(); ++i) d[i] = i;
  return d;
}

inline std::size_t count_matching(const AttributePhrase& a, const Domain& domain, const Scene& scene) {
  return static_cast<std::size_t>(std::count_if(
      domain.begin(), domain.end(), [&](std::size_t i) { return matches(a, scene[i]); }));
}

// Incremental algorithm over (category, color, shape). Category is always
// kept; further attributes are added while some distractor still matches.
inline VisualDescription describe_visual(std::size_t target, const Domain& domain,
                                         const Scene& scene) {
  const Entity& e = scene[target];
  if (e.is_agent()) {
    return {AttributePhrase::of_person(e.kind == EntityKind::kSpeaker ? Person::kSpeakerSelf
                                                                      : Person::kListenerSelf),
            true};
  }
  VisualDescription d;
  d.attrs.category = to_lower(e.category);
  auto ambiguous = [&] { return count_matching(d.attrs, domain, scene) > 1; };
  if (ambiguous() && e.color) d.attrs.color = to_lower(*e.color);
  if (ambiguous() && e.shape) d.attrs.shape = to_lower(*e.shape);
  d.distinguishing = count_matching(d.attrs, domain, scene) == 1;
  return d;
}

// Preference row used to rank a candidate landmark.
using PreferenceLookup = std::function<FrameDistribution(std::size_t entity)>;

inline PreferenceLookup table_lookup(const Scene& scene, const PreferenceTable& table) {
  return [&scene, &table](std::size_t i) { return table.row(landmark_type(scene[i])); };
}

struct LandmarkChoice {
  VisualDescription description;
  std::optional<std::size_t> landmark;
};

// Candidate landmarks in priority order: ascending preference entropy, then
// distance to the target, then id.
inline std::vector<std::size_t> landmark_candidates(std::size_t target, const AttributePhrase& attrs,
                                                    const Domain& domain, const Scene& scene,
                                                    const PreferenceLookup& prefs) {
  struct Ranked {
    double entropy;
    double dist;
    const std::string* id;
    std::size_t index;
  };
  std::vector<Ranked> ranked;
  for (std::size_t o : domain) {
    if (o == target || matches(attrs, scene[o])) continue;
    const FrameDistribution row = prefs(o);
    ranked.push_back({preference_entropy(row), distance(scene[o].centroid, scene[target].centroid),
                      &scene[o].id, o});
  }
  std::sort(ranked.begin(), ranked.end(), [](const Ranked& a, const Ranked& b) {
    return std::tie(a.entropy, a.dist, *a.id) < std::tie(b.entropy, b.dist, *b.id);
  });
  std::vector<std::size_t> out;
  out.reserve(ranked.size());
  for (const Ranked& r : ranked) out.push_back(r.index);
  return out;
}

// True when the target's relation to `landmark` under `frame` differs from
// every distractor's relation to it.
inline bool discriminates(std::size_t target, std::size_t landmark, std::span<const std::size_t> distractors,
                          const Scene& scene, const FrameInstance& frame) {
  const Preposition r = relation(scene[target], scene[landmark], frame);
  return std::none_of(distractors.begin(), distractors.end(), [&](std::size_t d) {
    return relation(scene[d], scene[landmark], frame) == r;
  });
}

inline std::vector<std::size_t> distractors_of(std::size_t target, const AttributePhrase& attrs,
                                               const Domain& domain, const Scene& scene) {
  std::vector<std::size_t> out;
  for (std::size_t o : domain)
    if (o != target && matches(attrs, scene[o])) out.push_back(o);
  return out;
}

// Modified locative incremental algorithm. Landmarks are chosen under a
// single default frame; prepositions are decided later per strategy.
inline LandmarkChoice m_lia(std::size_t target, const Domain& domain, const Scene& scene,
                            const PreferenceLookup& prefs, const FrameInstance& default_frame) {
  LandmarkChoice choice{describe_visual(target, domain, scene), std::nullopt};
  if (choice.description.distinguishing) return choice;

  const auto distractors = distractors_of(target, choice.description.attrs, domain, scene);
  for (std::size_t q : landmark_candidates(target, choice.description.attrs, domain, scene, prefs)) {
    if (discriminates(target, q, distractors, scene, default_frame)) {
      choice.landmark = q;
      return choice;
    }
  }
  throw AmbiguityError("no discriminating landmark for '" + scene[target].id + "'",
                       realize(choice.description.attrs));
}

// Last-in-first-out store of selected landmarks. The bottom entry is the
// first landmark (next to the target); the top is the uniquely described
// anchor.
class LandmarkStack {
 public:
  struct Entry {
    std::size_t entity;
    VisualDescription description;
  };

  void push(Entry e) {
    for (const Entry& x : entries_)
      if (x.entity == e.entity) throw Error(Errc::kInvalidField, "landmark pushed twice");
    entries_.push_back(std::move(e));
  }
  Entry pop() {
    Entry e = std::move(entries_.back());
    entries_.pop_back();
    return e;
  }
  const Entry& top() const { return entries_.back(); }
  bool empty() const { return entries_.empty(); }
  std::size_t size() const { return entries_.size(); }
  // Push order.
  std::span<const Entry> entries() const { return entries_; }

 private:
  std::vector<Entry> entries_;
};

struct ChainOptions {
  FrameKind default_kind = FrameKind::kEgocentric;
  // Rotates the default frame's axes by multiples of 90 degrees.
  int default_quarter_turns = 0;
  // When set, the default frame kind is drawn from {egocentric, addressee,
  // extrinsic} with this seed instead of using default_kind.
  std::optional<std::uint64_t> random_default_seed;
  std::size_t max_units = 4;
};

inline FrameInstance default_frame(const Scene& scene, const ChainOptions& opts) {
  FrameKind kind = opts.default_kind;
  if (opts.random_default_seed) {
    static constexpr FrameKind kChoices[] = {FrameKind::kEgocentric, FrameKind::kAddresseeCentered,
                                             FrameKind::kExtrinsic};
    std::mt19937_64 rng(*opts.random_default_seed);
    kind = kChoices[rng() % 3];
  }
  if (kind == FrameKind::kIntrinsic)
    throw Error(Errc::kFramePrecondition, "the default frame cannot be intrinsic");
  return frame_instance(kind, scene).rotated(opts.default_quarter_turns);
}

struct LandmarkChain {
  std::size_t target = 0;
  // descriptions[0] describes the target, descriptions[i] landmark i-1.
  std::vector<VisualDescription> descriptions;
  LandmarkStack stack;
  PreferenceState preferences;
  FrameInstance default_frame;
  int outer_iterations = 0;

  std::size_t k() const { return stack.size(); }

  std::vector<std::size_t> landmarks() const {
    std::vector<std::size_t> out;
    for (const auto& e : stack.entries()) out.push_back(e.entity);
    return out;
  }

  std::vector<LandmarkType> landmark_types(const Scene& scene) const {
    std::vector<LandmarkType> out;
    for (const auto& e : stack.entries()) out.push_back(landmark_type(scene[e.entity]));
    return out;
  }

  // Entity being located by relation unit i.
  std::size_t unit_target(std::size_t i) const { return i == 0 ? target : stack.entries()[i - 1].entity; }
};

namespace detail {

struct UnitOverride {
  std::size_t entity;
  FrameDistribution row;
};

inline LandmarkChain build_chain_once(std::size_t target, const Scene& scene,
                                      const PreferenceTable& base,
                                      const std::vector<std::optional<UnitOverride>>& overrides,
                                      const FrameInstance& frame, std::size_t max_units) {
  LandmarkChain chain;
  chain.target = target;
  chain.default_frame = frame;
  Domain domain = full_domain(scene);
  std::size_t current = target;
  std::optional<std::size_t> pending;  // landmark awaiting its own description

  for (std::size_t unit = 0;; ++unit) {
    PreferenceLookup prefs = [&, unit](std::size_t o) {
      if (unit < overrides.size() && overrides[unit] && overrides[unit]->entity == o)
        return overrides[unit]->row;
      return base.row(landmark_type(scene[o]));
    };
    LandmarkChoice choice = m_lia(current, domain, scene, prefs, frame);
    if (pending) chain.stack.push({*pending, choice.description});
    chain.descriptions.push_back(choice.description);
    if (!choice.landmark) break;
    if (chain.descriptions.size() > max_units)
      throw AmbiguityError("landmark chain exceeds " + std::to_string(max_units) + " relation units",
                           realize(chain.descriptions.front().attrs));
    std::erase_if(domain, [&](std::size_t o) { return matches(choice.description.attrs, scene[o]); });
    pending = choice.landmark;
    current = *choice.landmark;
  }
  return chain;
}

}  // namespace detail

// Repeatedly selects the landmark chain, re-estimates the per-unit frame
// preferences and rebuilds until the preferences no longer change.
inline LandmarkChain build_landmark_chain(std::size_t target, const Scene& scene,
                                          const PreferenceTable& base, const ChainOptions& opts = {}) {
  if (target >= scene.size() || !scene[target].referable_as_target())
    throw Error(Errc::kInvalidTarget, "target is not a referable object");
  const FrameInstance frame = default_frame(scene, opts);

  std::vector<std::optional<detail::UnitOverride>> overrides;
  int iteration_count = 0;
  // Each changing update fixes at least one more unit, so k + 1 rounds suffice.
  const int max_rounds = static_cast<int>(opts.max_units) + 1;
  for (int round = 1;; ++round) {
    LandmarkChain chain = detail::build_chain_once(target, scene, base, overrides, frame, opts.max_units);
    const auto lms = chain.landmarks();
    const auto types = chain.landmark_types(scene);

    PreferenceState current = initial_preference_state(types, base);
    current.iteration_count = iteration_count;
    for (std::size_t i = 0; i < lms.size(); ++i)
      if (i < overrides.size() && overrides[i] && overrides[i]->entity == lms[i])
        current.units[i] = overrides[i]->row;

    PreferenceState next = update_preferences(current, types);
    iteration_count = next.iteration_count;
    if (next.units == current.units || round >= max_rounds) {
      chain.preferences = std::move(next);
      chain.outer_iterations = round;
      return chain;
    }
    overrides.assign(lms.size(), std::nullopt);
    for (std::size_t i = 0; i < lms.size(); ++i) overrides[i] = detail::UnitOverride{lms[i], next.units[i]};
  }
}

// ---------------------------------------------------------------------------
// Expression space.

struct StrategyStep {
  FrameKind kind;
  std::optional<std::string> origin;

  friend bool operator==(const StrategyStep&, const StrategyStep&) = default;
};

// One frame per relation unit, outermost unit first.
struct Strategy {
  std::vector<StrategyStep> steps;

  std::size_t size() const { return steps.size(); }
  bool consistent() const {
    return std::all_of(steps.begin(), steps.end(),
                       [&](const StrategyStep& s) { return s.kind == steps.front().kind; });
  }
  std::vector<FrameKind> kinds() const {
    std::vector<FrameKind> out;
    for (const auto& s : steps) out.push_back(s.kind);
    return out;
  }

  friend bool operator==(const Strategy&, const Strategy&) = default;
};

struct CandidateExpression {
  ExpressionTree tree;
  Strategy strategy;
  std::string surface;
};

// Pops the stack to nest landmark phrases innermost-first, choosing each
// unit's preposition under the frame the strategy assigns to it. Returns
// nullopt when a frame does not apply at its landmark.
inline std::optional<CandidateExpression> realize_strategy(const LandmarkChain& chain, const Scene& scene,
                                                           std::span<const FrameKind> kinds) {
  const std::size_t k = chain.k();
  if (kinds.size() != k) throw Error(Errc::kLengthMismatch, "strategy length differs from chain length");

  Strategy strategy;
  std::vector<Preposition> preps(k);
  for (std::size_t i = 0; i < k; ++i) {
    const std::size_t lm = chain.stack.entries()[i].entity;
    auto frame = frame_at_landmark(kinds[i], scene, lm);
    if (!frame) return std::nullopt;
    preps[i] = relation(scene[chain.unit_target(i)], scene[lm], *frame);
    strategy.steps.push_back({kinds[i], frame->origin});
  }

  LandmarkStack stack = chain.stack;
  std::optional<ExpressionTree> tree;
  for (std::size_t i = k; i-- > 0;) {
    LandmarkStack::Entry e = stack.pop();
    ExpressionTree landmark = tree ? *tree : ExpressionTree::leaf(e.description.attrs);
    tree = ExpressionTree::compound(chain.descriptions[i].attrs, preps[i], std::move(landmark));
  }
  if (!tree) tree = ExpressionTree::leaf(chain.descriptions.front().attrs);
  std::string text = realize(*tree);
  return CandidateExpression{std::move(*tree), std::move(strategy), std::move(text)};
}

// All strategies in F^k in lexicographic frame order (first unit most
// significant), skipping those with an inapplicable frame.
inline std::vector<CandidateExpression> expression_space(const LandmarkChain& chain, const Scene& scene,
                                                         std::span<const FrameKind> frames = kAllFrameKinds) {
  std::vector<CandidateExpression> out;
  const std::size_t k = chain.k();
  std::vector<std::size_t> digits(k, 0);
  std::vector<FrameKind> kinds(k);
  while (true) {
    for (std::size_t i = 0; i < k; ++i) kinds[i] = frames[digits[i]];
    if (auto c = realize_strategy(chain, scene, kinds)) out.push_back(std::move(*c));
    std::size_t i = k;
    while (i > 0 && ++digits[i - 1] == frames.size()) digits[--i] = 0;
    if (i == 0) break;
  }
  return out;
}

}  // namespace pcsreg
