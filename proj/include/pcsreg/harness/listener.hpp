#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <random>
#include <vector>

#include "pcsreg/frames.hpp"
#include "pcsreg/harness/rng.hpp"
#include "pcsreg/prepositions.hpp"
#include "pcsreg/resolver.hpp"
#include "pcsreg/scene.hpp"

namespace pcsreg::harness {

struct ListenerOptions {
  // Probability of reusing the frame kind just used for the deeper unit
  // instead of sampling independently.
  double consistency_coupling = 0.0;
  // Only frames under which some head candidate fits are considered, so a
  // listener reinterprets rather than giving up on a frame that yields no
  // referent. With false, a sampled frame with no survivor means confusion.
  bool cooperative = true;
};

// A single simulated person resolving an expression. Working bottom-up,
// the listener commits to one landmark entity, samples one frame kind from
// the preference row of that landmark, keeps the head candidates standing in
// the stated relation, and commits to the most probable survivor. When no
// frame leaves a survivor the listener is confused.
//
// For a single relation unit whose landmark phrase has one referent, the
// expected accuracy equals the denotation mass of the target.
class SimulatedListener {
 public:
  SimulatedListener(const ExpressionTree& tree, const Scene& scene, const PreferenceTable& true_prefs,
                    ListenerOptions opts = {})
      : scene_(scene), prefs_(true_prefs), opts_(opts), tree_(tree) {
    for (const ExpressionTree* t = &tree_;; t = &t->landmark()) {
      nodes_.push_back(t);
      denotations_.push_back(denote(*t, scene, true_prefs));
      if (t->is_leaf()) break;
    }
  }
  SimulatedListener(const SimulatedListener&) = delete;
  SimulatedListener& operator=(const SimulatedListener&) = delete;

  // Identified entity index, or nullopt when confused.
  std::optional<std::size_t> sample(std::mt19937_64& rng) const {
    std::optional<std::size_t> current = commit(nodes_.size() - 1, all_candidates(nodes_.size() - 1));
    std::optional<FrameKind> previous;
    for (std::size_t i = nodes_.size() - 1; i-- > 0 && current;) {
      const auto weights = frame_weights(i, *current, previous);
      double total = 0.0;
      for (double w : weights) total += w;
      if (!(total > 0.0)) return std::nullopt;
      double u = uniform01(rng) * total;
      std::size_t f = 0, last_positive = 0;
      for (std::size_t j = 0; j < kFrameKindCount; ++j)
        if (weights[j] > 0.0) last_positive = j;
      for (f = 0; f < last_positive; ++f) {
        if (weights[f] > 0.0 && u < weights[f]) break;
        u -= weights[f];
      }
      previous = static_cast<FrameKind>(f);
      current = commit(i, survivors(i, *current, *previous));
    }
    return current;
  }

  // Exact outcome distribution by enumerating every frame path; the entry
  // for nullopt is the confusion probability.
  std::map<std::optional<std::size_t>, double> outcome_distribution() const {
    std::map<std::optional<std::size_t>, double> out;
    const auto start = commit(nodes_.size() - 1, all_candidates(nodes_.size() - 1));
    enumerate(nodes_.size() - 1, start, std::nullopt, 1.0, out);
    return out;
  }

  double expected_accuracy(std::size_t target) const {
    const auto dist = outcome_distribution();
    auto it = dist.find(target);
    return it == dist.end() ? 0.0 : it->second;
  }

 private:
  std::vector<std::size_t> all_candidates(std::size_t node) const {
    return consistent_set(nodes_[node]->head(), scene_);
  }

  // Head candidates of node i related to `landmark` by the node's
  // preposition under `kind` at that landmark.
  std::vector<std::size_t> survivors(std::size_t i, std::size_t landmark, FrameKind kind) const {
    std::vector<std::size_t> out;
    auto frame = frame_at_landmark(kind, scene_, landmark);
    if (!frame) return out;
    for (std::size_t o : all_candidates(i))
      if (o != landmark && relation(scene_[o], scene_[landmark], *frame) == nodes_[i]->prep()) out.push_back(o);
    return out;
  }

  // Highest node denotation among the candidates, ties by id.
  std::optional<std::size_t> pick(std::size_t node, const std::vector<std::size_t>& candidates) const {
    const Denotation& d = denotations_[node];
    std::optional<std::size_t> best;
    for (std::size_t o : candidates) {
      const double p = d.resolvable() ? d[o] : 0.0;
      if (!best) { best = o; continue; }
      const double pb = d.resolvable() ? d[*best] : 0.0;
      if (p > pb || (p == pb && scene_[o].id < scene_[*best].id)) best = o;
    }
    return best;
  }

  // Entity the listener settles on for node i. A cooperative listener only
  // commits to a landmark that leaves the enclosing unit some usable frame,
  // when there is one.
  std::optional<std::size_t> commit(std::size_t node, const std::vector<std::size_t>& candidates) const {
    if (opts_.cooperative && node > 0) {
      std::vector<std::size_t> usable;
      for (std::size_t o : candidates) {
        double total = 0.0;
        for (double w : frame_weights(node - 1, o, std::nullopt)) total += w;
        if (total > 0.0) usable.push_back(o);
      }
      if (!usable.empty()) return pick(node, usable);
    }
    return pick(node, candidates);
  }

  // Frame sampling weights for resolving node i against `landmark`.
  FrameDistribution frame_weights(std::size_t node, std::size_t landmark, std::optional<FrameKind> previous) const {
    FrameDistribution w{};
    const auto& row = prefs_.row(landmark_type(scene_[landmark]));
    double total = 0.0;
    for (FrameKind f : kAllFrameKinds) {
      const auto i = static_cast<std::size_t>(f);
      const bool usable = opts_.cooperative ? !survivors(node, landmark, f).empty()
                                            : frame_at_landmark(f, scene_, landmark).has_value();
      w[i] = usable ? row[i] : 0.0;
      total += w[i];
    }
    if (!(total > 0.0)) return w;
    for (double& v : w) v /= total;
    const double c = opts_.consistency_coupling;
    if (c > 0.0 && previous && w[static_cast<std::size_t>(*previous)] > 0.0) {
      for (double& v : w) v *= 1.0 - c;
      w[static_cast<std::size_t>(*previous)] += c;
    }
    return w;
  }

  void enumerate(std::size_t node, std::optional<std::size_t> current, std::optional<FrameKind> previous,
                 double p, std::map<std::optional<std::size_t>, double>& out) const {
    if (!current || node == 0) {
      out[current] += p;
      return;
    }
    const std::size_t i = node - 1;
    const auto weights = frame_weights(i, *current, previous);
    double total = 0.0;
    for (double w : weights) total += w;
    if (!(total > 0.0)) {
      out[std::nullopt] += p;
      return;
    }
    for (FrameKind f : kAllFrameKinds) {
      const double w = weights[static_cast<std::size_t>(f)] / total;
      if (w <= 0.0) continue;
      enumerate(i, commit(i, survivors(i, *current, f)), f, p * w, out);
    }
  }

  const Scene& scene_;
  PreferenceTable prefs_;
  ListenerOptions opts_;
  ExpressionTree tree_;
  std::vector<const ExpressionTree*> nodes_;  // root first
  std::vector<Denotation> denotations_;
};

inline std::optional<std::size_t> simulate_listener(const ExpressionTree& tree, const Scene& scene,
                                                    const PreferenceTable& true_prefs, std::mt19937_64& rng,
                                                    ListenerOptions opts = {}) {
  return SimulatedListener(tree, scene, true_prefs, opts).sample(rng);
}

}  // namespace pcsreg::harness
