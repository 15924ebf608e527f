#pragma once

#include <cstddef>
#include <cstdint>
#include <iomanip>
#include <map>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "pcsreg/error.hpp"
#include "pcsreg/frames.hpp"
#include "pcsreg/generator.hpp"
#include "pcsreg/harness/listener.hpp"
#include "pcsreg/harness/rng.hpp"
#include "pcsreg/harness/scene_sampler.hpp"
#include "pcsreg/optimizer.hpp"
#include "pcsreg/scene.hpp"

namespace pcsreg::harness {

struct TrialConfig {
  std::uint64_t seed = 42;
  std::size_t n_scenes = 100;
  std::size_t trials_per_expression = 20;
  // Per-method trial counts overriding trials_per_expression.
  std::map<Method, std::size_t> trials_override;
  // Ground-truth listener model, and the table the generator assumes.
  PreferenceTable true_prefs = default_preferences();
  PreferenceTable assumed_prefs = default_preferences();
  std::vector<Method> methods = {Method::kPcsreg, Method::kMax, Method::kRobot, Method::kHuman, Method::kRandom};
  SceneSpec scene_spec;
  double consistency_coupling = 0.0;
  bool record_trials = false;

  std::size_t trials_for(Method m) const {
    auto it = trials_override.find(m);
    return it == trials_override.end() ? trials_per_expression : it->second;
  }
};

// Counts for one (method, complexity bucket) cell.
struct MethodStats {
  std::size_t expressions = 0;
  std::size_t trials = 0;
  std::size_t correct = 0;
  std::size_t confused = 0;
  double effectiveness_sum = 0.0;  // sum of omega2 under the true preferences
  double listener_expectation_sum = 0.0;

  double accuracy() const { return trials ? static_cast<double>(correct) / trials : 0.0; }
  double expected_accuracy() const { return expressions ? effectiveness_sum / expressions : 0.0; }
  double expected_listener_accuracy() const { return expressions ? listener_expectation_sum / expressions : 0.0; }

  MethodStats& operator+=(const MethodStats& o) {
    expressions += o.expressions;
    trials += o.trials;
    correct += o.correct;
    confused += o.confused;
    effectiveness_sum += o.effectiveness_sum;
    listener_expectation_sum += o.listener_expectation_sum;
    return *this;
  }
};

inline constexpr const char* kBuckets[] = {"k=1", "k>1", "failed"};

struct TrialRecord {
  std::size_t scene = 0;
  std::string target;
  Method method = Method::kPcsreg;
  std::size_t k = 0;
  std::size_t trial = 0;
  std::string surface;
  std::string identified;  // empty when confused or generation failed
  bool correct = false;
};

struct TrialReport {
  std::uint64_t seed = 0;
  std::size_t scenes = 0;
  std::size_t targets = 0;
  std::vector<Method> methods;
  std::map<Method, std::map<std::string, MethodStats>> by_bucket;
  std::vector<TrialRecord> records;

  MethodStats total(Method m) const {
    MethodStats s;
    auto it = by_bucket.find(m);
    if (it != by_bucket.end())
      for (const auto& [bucket, stats] : it->second) s += stats;
    return s;
  }
  double accuracy(Method m) const { return total(m).accuracy(); }
};

inline constexpr std::uint64_t kSceneStream = 1;
inline constexpr std::uint64_t kTrialStream = 2;
inline constexpr std::uint64_t kRandomBaselineStream = 3;

// Targets worth a spatial expression: objects whose visual description alone
// does not single them out.
inline std::vector<std::size_t> ambiguous_targets(const Scene& scene) {
  std::vector<std::size_t> out;
  const Domain all = full_domain(scene);
  for (std::size_t i = 0; i < scene.size(); ++i)
    if (scene[i].referable_as_target() && !describe_visual(i, all, scene).distinguishing) out.push_back(i);
  return out;
}

// Listener randomness depends on (seed, scene, target, trial) only, so every
// method faces the same simulated people.
inline TrialReport run_comparison(const TrialConfig& cfg) {
  if (cfg.methods.empty()) throw Error(Errc::kConfig, "methods must not be empty", "methods");
  if (cfg.n_scenes == 0) throw Error(Errc::kConfig, "n_scenes must be positive", "n_scenes");
  if (cfg.trials_per_expression == 0)
    throw Error(Errc::kConfig, "trials_per_expression must be positive", "trials_per_expression");

  TrialReport report;
  report.seed = cfg.seed;
  report.scenes = cfg.n_scenes;
  report.methods = cfg.methods;
  for (Method m : cfg.methods)
    for (const char* b : kBuckets) report.by_bucket[m][b];

  const ListenerOptions listener_opts{cfg.consistency_coupling};
  for (std::size_t s = 0; s < cfg.n_scenes; ++s) {
    const Scene scene = sample_scene(derive_seed(cfg.seed, {kSceneStream, s}), cfg.scene_spec);
    for (std::size_t target : ambiguous_targets(scene)) {
      ++report.targets;
      std::optional<LandmarkChain> chain;
      try {
        chain = build_landmark_chain(target, scene, cfg.assumed_prefs);
      } catch (const AmbiguityError&) {
      }

      for (Method m : cfg.methods) {
        const std::size_t trials = cfg.trials_for(m);
        if (!chain) {
          MethodStats& st = report.by_bucket[m]["failed"];
          ++st.expressions;
          st.trials += trials;
          if (cfg.record_trials)
            for (std::size_t t = 0; t < trials; ++t)
              report.records.push_back({s, scene[target].id, m, 0, t, "", "", false});
          continue;
        }
        const CandidateExpression expr =
            generate_with(m, *chain, scene, cfg.assumed_prefs,
                          derive_seed(cfg.seed, {kRandomBaselineStream, s, target}));
        const SimulatedListener listener(expr.tree, scene, cfg.true_prefs, listener_opts);
        MethodStats& st = report.by_bucket[m][chain->k() == 1 ? "k=1" : "k>1"];
        ++st.expressions;
        st.effectiveness_sum += score(expr.tree, target, scene, cfg.true_prefs).effectiveness;
        st.listener_expectation_sum += listener.expected_accuracy(target);
        for (std::size_t t = 0; t < trials; ++t) {
          std::mt19937_64 rng(derive_seed(cfg.seed, {kTrialStream, s, target, t}));
          const auto who = listener.sample(rng);
          const bool ok = who && *who == target;
          ++st.trials;
          st.correct += ok ? 1 : 0;
          st.confused += who ? 0 : 1;
          if (cfg.record_trials)
            report.records.push_back(
                {s, scene[target].id, m, chain->k(), t, expr.surface, who ? scene[*who].id : "", ok});
        }
      }
    }
  }
  return report;
}

// ---------------------------------------------------------------------------
// Configuration and report documents.

inline TrialConfig trial_config_from_json(const nlohmann::json& doc) {
  if (!doc.is_object()) throw Error(Errc::kConfig, "config must be an object");
  TrialConfig cfg;
  auto get_count = [&](const char* key, std::size_t& out) {
    if (!doc.contains(key)) return;
    const auto& v = doc.at(key);
    if (!v.is_number_integer() || v.get<long long>() <= 0) throw Error(Errc::kConfig, "must be a positive integer", key);
    out = v.get<std::size_t>();
  };
  if (doc.contains("seed")) {
    if (!doc.at("seed").is_number_unsigned()) throw Error(Errc::kConfig, "must be a non-negative integer", "seed");
    cfg.seed = doc.at("seed").get<std::uint64_t>();
  }
  get_count("n_scenes", cfg.n_scenes);
  get_count("trials_per_expression", cfg.trials_per_expression);
  get_count("min_objects", cfg.scene_spec.min_objects);
  get_count("max_objects", cfg.scene_spec.max_objects);
  if (cfg.scene_spec.min_objects > cfg.scene_spec.max_objects)
    throw Error(Errc::kConfig, "min_objects exceeds max_objects", "min_objects");
  if (doc.contains("methods")) {
    const auto& ms = doc.at("methods");
    if (!ms.is_array()) throw Error(Errc::kConfig, "must be an array", "methods");
    cfg.methods.clear();
    for (const auto& m : ms) {
      auto parsed = m.is_string() ? method_from_string(m.get<std::string>()) : std::nullopt;
      if (!parsed) throw Error(Errc::kConfig, "unknown method " + m.dump(), "methods");
      cfg.methods.push_back(*parsed);
    }
    if (cfg.methods.empty()) throw Error(Errc::kConfig, "must not be empty", "methods");
  }
  if (doc.contains("trials_override")) {
    const auto& o = doc.at("trials_override");
    if (!o.is_object()) throw Error(Errc::kConfig, "must be an object", "trials_override");
    for (auto it = o.begin(); it != o.end(); ++it) {
      auto m = method_from_string(it.key());
      if (!m || !it->is_number_integer() || it->get<long long>() <= 0)
        throw Error(Errc::kConfig, "expected method: positive integer", "trials_override." + it.key());
      cfg.trials_override[*m] = it->get<std::size_t>();
    }
  }
  if (doc.contains("true_prefs")) cfg.true_prefs = preferences_from_json(doc.at("true_prefs"));
  if (doc.contains("assumed_prefs")) cfg.assumed_prefs = preferences_from_json(doc.at("assumed_prefs"));
  if (doc.contains("consistency_coupling")) {
    const auto& c = doc.at("consistency_coupling");
    if (!c.is_number() || c.get<double>() < 0.0 || c.get<double>() > 1.0)
      throw Error(Errc::kConfig, "must be a number in [0, 1]", "consistency_coupling");
    cfg.consistency_coupling = c.get<double>();
  }
  if (doc.contains("record_trials")) {
    if (!doc.at("record_trials").is_boolean()) throw Error(Errc::kConfig, "must be a boolean", "record_trials");
    cfg.record_trials = doc.at("record_trials").get<bool>();
  }
  return cfg;
}

inline nlohmann::json stats_to_json(const MethodStats& s) {
  return {{"expressions", s.expressions},
          {"trials", s.trials},
          {"correct", s.correct},
          {"confused", s.confused},
          {"accuracy", s.accuracy()},
          {"expected_accuracy", s.expected_accuracy()},
          {"expected_listener_accuracy", s.expected_listener_accuracy()}};
}

inline nlohmann::json report_to_json(const TrialReport& r) {
  nlohmann::json methods = nlohmann::json::object();
  for (Method m : r.methods) {
    nlohmann::json j = stats_to_json(r.total(m));
    nlohmann::json buckets = nlohmann::json::object();
    for (const char* b : kBuckets) buckets[b] = stats_to_json(r.by_bucket.at(m).at(b));
    j["by_complexity"] = std::move(buckets);
    methods[std::string(to_string(m))] = std::move(j);
  }
  return {{"seed", r.seed}, {"scenes", r.scenes}, {"targets", r.targets}, {"methods", std::move(methods)}};
}

inline std::string report_to_text(const TrialReport& r) {
  std::ostringstream out;
  out << std::fixed << std::setprecision(4);
  out << std::left << std::setw(8) << "method" << std::right << std::setw(10) << "accuracy" << std::setw(10)
      << "omega2" << std::setw(10) << "listener" << std::setw(9) << "trials" << std::setw(10) << "acc k=1"
      << std::setw(10) << "acc k>1" << std::setw(9) << "failed" << '\n';
  for (Method m : r.methods) {
    const MethodStats all = r.total(m);
    const auto& b = r.by_bucket.at(m);
    out << std::left << std::setw(8) << to_string(m) << std::right << std::setw(10) << all.accuracy()
        << std::setw(10) << all.expected_accuracy() << std::setw(10) << all.expected_listener_accuracy()
        << std::setw(9) << all.trials << std::setw(10) << b.at("k=1").accuracy() << std::setw(10)
        << b.at("k>1").accuracy() << std::setw(9) << b.at("failed").trials << '\n';
  }
  out << "scenes " << r.scenes << ", targets " << r.targets << ", seed " << r.seed << '\n';
  return out.str();
}

inline std::string records_to_csv(const TrialReport& r) {
  std::ostringstream out;
  out << "scene,target,method,k,trial,identified,correct,surface\n";
  for (const auto& t : r.records)
    out << t.scene << ',' << t.target << ',' << to_string(t.method) << ',' << t.k << ',' << t.trial << ','
        << t.identified << ',' << (t.correct ? 1 : 0) << ",\"" << t.surface << "\"\n";
  return out.str();
}

}  // namespace pcsreg::harness
