// Acceptance checks, one PASS/FAIL line per criterion. Exit status is
// nonzero when any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "support.hpp"

using namespace pcsreg;
using namespace pcsreg::test;

namespace {

constexpr double kSquareTolerance = 1e-9;
constexpr double kOracleTolerance = 1e-9;
constexpr std::size_t kOraclePairs = 1000;
constexpr std::size_t kPropertyScenes = 200;
constexpr std::uint64_t kPropertySeed = 2024;
constexpr std::uint64_t kComparisonSeed = 42;
constexpr std::size_t kComparisonScenes = 200;
constexpr std::size_t kComparisonTrials = 20;
constexpr double kRandomMargin = 0.05;

struct Outcome {
  bool ok = true;
  std::string detail;
};

struct Criterion {
  int id;
  std::string name;
  double budget_seconds;
  std::function<Outcome()> check;
};

// A successful generation: scene, target and its chain.
struct Generated {
  Scene scene;
  std::size_t target;
  LandmarkChain chain;
};

std::vector<Generated> g_generated;  // filled by criteria 4 and 6

Scene property_scene(std::size_t i) { return harness::sample_scene(harness::derive_seed(kPropertySeed, {i})); }

Outcome square() {
  const Scene s = square_scene();
  const ExpressionTree t = square_expression();
  const Denotation d = denote(t, s, square_prefs());
  const Denotation square = denote(t.landmark(), s, square_prefs());
  const Denotation object = denote(ExpressionTree::leaf(t.head()), s, square_prefs());
  const double want[] = {0.6, 0.0, 0.0, 0.4};
  double err = 0.0;
  for (std::size_t i = 0; i < 4; ++i) {
    err = std::max(err, std::abs(d[i] - want[i]));
    err = std::max(err, std::abs(object[i] - 0.25));
    err = std::max(err, std::abs(square[i] - (i == 2 ? 1.0 : 0.0)));
  }
  return {d.resolvable() && err <= kSquareTolerance, "max error " + std::to_string(err)};
}

Outcome default_table() {
  const PreferenceTable t = default_preferences();
  const FrameDistribution rows[] = {
      {1.0, 0.0, 0.0, 0.0}, {0.0408, 0.9592, 0.0, 0.0}, {0.045, 0.045, 0.905, 0.005}, {0.6667, 0.2014, 0.1181, 0.0138}};
  bool ok = true;
  double h[4];
  for (std::size_t i = 0; i < 4; ++i) {
    ok = ok && t.row(static_cast<LandmarkType>(i)) == rows[i];
    h[i] = preference_entropy(t.row(static_cast<LandmarkType>(i)));
  }
  ok = ok && h[0] < h[1] && h[1] < h[2] && h[2] < h[3];
  char buf[128];
  std::snprintf(buf, sizeof buf, "entropies %.4f < %.4f < %.4f < %.4f", h[0], h[1], h[2], h[3]);
  return {ok, buf};
}

Outcome oracle() {
  harness::SceneSpec spec;
  spec.max_objects = 4;  // six entities with speaker and listener
  double worst = 0.0;
  std::size_t mismatched = 0;
  for (std::size_t i = 0; i < kOraclePairs; ++i) {
    const Scene scene = harness::sample_scene(harness::derive_seed(kPropertySeed, {9, i}), spec);
    std::mt19937_64 rng(harness::derive_seed(kPropertySeed, {10, i}));
    const ExpressionTree tree = random_tree(rng, scene, i % 3);
    const PreferenceTable prefs = i % 2 ? default_preferences() : square_prefs();
    const Denotation a = denote(tree, scene, prefs), b = harness::oracle_denote(tree, scene, prefs);
    if (a.resolvable() != b.resolvable()) ++mismatched;
    for (std::size_t k = 0; k < scene.size(); ++k) worst = std::max(worst, std::abs(a[k] - b[k]));
  }
  return {mismatched == 0 && worst <= kOracleTolerance,
          std::to_string(kOraclePairs) + " pairs, max |diff| " + std::to_string(worst)};
}

Outcome optimality() {
  const PreferenceTable prefs = default_preferences();
  std::size_t checked = 0, bad = 0, failed = 0;
  for (std::size_t i = 0; i < kPropertyScenes; ++i) {
    const Scene scene = property_scene(i);
    for (std::size_t t : harness::ambiguous_targets(scene)) {
      std::optional<LandmarkChain> chain;
      try {
        chain = build_landmark_chain(t, scene, prefs);
      } catch (const AmbiguityError&) {
        ++failed;
        continue;
      }
      const auto space = expression_space(*chain, scene);
      const Selection sel = select_best(space, t, scene, prefs);
      double best = 0.0;
      for (const auto& c : space) best = std::max(best, score(c.tree, t, scene, prefs).total());
      const double greedy = score(select_greedy_max(*chain, scene, prefs).tree, t, scene, prefs).total();
      if (std::abs(sel.score.total() - best) > kScoreTieTolerance || sel.score.total() + kScoreTieTolerance < greedy)
        ++bad;
      ++checked;
      g_generated.push_back({scene, t, std::move(*chain)});
    }
  }
  return {bad == 0 && checked > 0, std::to_string(checked) + " targets, " + std::to_string(bad) + " violations, " +
                                       std::to_string(failed) + " without a chain"};
}

Outcome convergence() {
  std::size_t bad = 0, worst = 0;
  for (const auto& g : g_generated) {
    if (static_cast<std::size_t>(g.chain.outer_iterations) > g.chain.k() + 1) ++bad;
    worst = std::max(worst, static_cast<std::size_t>(g.chain.outer_iterations));
  }
  return {bad == 0 && !g_generated.empty(),
          std::to_string(g_generated.size()) + " chains, most rounds " + std::to_string(worst)};
}

Outcome ordering() {
  harness::TrialConfig cfg;
  cfg.seed = kComparisonSeed;
  cfg.n_scenes = kComparisonScenes;
  cfg.trials_per_expression = kComparisonTrials;
  const auto r = harness::run_comparison(cfg);
  const double p = r.accuracy(Method::kPcsreg), m = r.accuracy(Method::kMax), robot = r.accuracy(Method::kRobot),
               human = r.accuracy(Method::kHuman), rnd = r.accuracy(Method::kRandom);
  for (std::size_t s = 0; s < cfg.n_scenes; ++s) {
    const Scene scene = harness::sample_scene(harness::derive_seed(cfg.seed, {harness::kSceneStream, s}));
    for (std::size_t t : harness::ambiguous_targets(scene)) {
      try {
        g_generated.push_back({scene, t, build_landmark_chain(t, scene, cfg.assumed_prefs)});
      } catch (const AmbiguityError&) {
      }
    }
  }
  char buf[200];
  std::snprintf(buf, sizeof buf, "pcsreg %.4f, max %.4f, robot %.4f, human %.4f, random %.4f", p, m, robot, human,
                rnd);
  return {p >= m && m >= std::min(robot, human) && p > rnd + kRandomMargin, buf};
}

Outcome discriminating() {
  std::size_t units = 0, bad = 0;
  for (const auto& g : g_generated) {
    const Scene& s = g.scene;
    Domain domain = full_domain(s);
    for (std::size_t i = 0; i < g.chain.k(); ++i) {
      const std::size_t t = g.chain.unit_target(i), lm = g.chain.landmarks()[i];
      const AttributePhrase& attrs = g.chain.descriptions[i].attrs;
      const auto distractors = distractors_of(t, attrs, domain, s);
      const bool landmark_ok = lm != t && !matches(attrs, s[lm]);
      const Preposition r = relation(s[t], s[lm], g.chain.default_frame);
      bool unique = true;
      for (std::size_t d : distractors) unique = unique && relation(s[d], s[lm], g.chain.default_frame) != r;
      if (!landmark_ok || !unique) ++bad;
      ++units;
      std::erase_if(domain, [&](std::size_t o) { return matches(attrs, s[o]); });
    }
  }
  return {bad == 0 && units > 0, std::to_string(units) + " relation units, " + std::to_string(bad) + " violations"};
}

Outcome rotation() {
  const PreferenceTable prefs = default_preferences();
  std::size_t checked = 0, bad = 0;
  auto landmarks = [&](const Scene& s, std::size_t t, int q) -> std::optional<std::vector<std::size_t>> {
    ChainOptions o;
    o.default_quarter_turns = q;
    try {
      return build_landmark_chain(t, s, prefs, o).landmarks();
    } catch (const AmbiguityError&) {
      return std::nullopt;
    }
  };
  for (std::size_t i = 0; i < kPropertyScenes; ++i) {
    const Scene scene = property_scene(i);
    for (std::size_t t : harness::ambiguous_targets(scene)) {
      const auto base = landmarks(scene, t, 0);
      for (int q = 1; q < 4; ++q) bad += landmarks(scene, t, q) == base ? 0 : 1;
      ++checked;
    }
  }
  return {bad == 0 && checked > 0, std::to_string(checked) + " targets x 3 rotations, " + std::to_string(bad) +
                                       " differences"};
}

Outcome determinism() {
  const std::string cli = PCSREG_CLI_PATH, data = PCSREG_DATA_DIR;
  const std::vector<std::string> cmds = {
      " generate --scene " + data + "/car_scene.json --target A",
      " generate --scene " + data + "/car_scene.json --target A --json --method random --seed 5",
      " resolve --scene " + data + "/square_scene.json --prefs " + data +
          "/square_prefs.json --expr 'the object in front of the square' --json",
      " explain --scene " + data + "/car_scene.json --target B",
      " evaluate --config " + data + "/evaluate_default.json --json",
      " schema all"};
  std::size_t bad = 0;
  for (const auto& c : cmds) {
    const ShellResult a = shell(cli + c), b = shell(cli + c);
    if (a.code != 0 || a.out.empty() || a.out != b.out) ++bad;
  }
  return {bad == 0, std::to_string(cmds.size()) + " commands, " + std::to_string(bad) + " differing or failing"};
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "square denotation", 1, square},
      {2, "default preference table", 1, default_table},
      {3, "oracle equivalence", 60, oracle},
      {4, "optimality and dominance", 120, optimality},
      {5, "preference fixed point within k+1 rounds", 10, convergence},
      {6, "method ordering", 300, ordering},
      {7, "discriminating landmarks", 10, discriminating},
      {8, "default frame rotation", 120, rotation},
      {9, "cli determinism", 60, determinism},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool pass = o.ok && secs < c.budget_seconds;
    failures += pass ? 0 : 1;
    std::printf("%s criterion %d (%s): %s [%.3fs / %.0fs]\n", pass ? "PASS" : "FAIL", c.id, c.name.c_str(),
                o.detail.c_str(), secs, c.budget_seconds);
  }
  return failures == 0 ? 0 : 1;
}
