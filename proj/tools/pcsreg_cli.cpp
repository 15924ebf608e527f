// pcsreg: generate, resolve and explain spatial referring expressions for
// symbolic tabletop scenes, and run the simulated-listener comparison.
//
// Exit codes: 0 ok, 1 usage, 2 invalid scene/prefs/config, 3 invalid target,
// 4 generation failed (ambiguous), 5 expression parse failure.

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <iterator>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>
#include <spdlog/sinks/stdout_sinks.h>
#include <spdlog/spdlog.h>

#include "pcsreg/harness/comparison.hpp"
#include "pcsreg/pcsreg.hpp"
#include "schemas.hpp"

namespace {

using nlohmann::json;
using namespace pcsreg;

enum ExitCode { kOk = 0, kUsage = 1, kBadInput = 2, kBadTarget = 3, kGenerationFailed = 4, kParseFailed = 5 };

struct ExitError {
  int code;
  std::string message;
};

void setup_logging() {
  auto logger = spdlog::stderr_logger_mt("pcsreg");
  logger->set_pattern("[%l] %v");
  spdlog::set_default_logger(logger);
  const char* env = std::getenv("PCSREG_LOG");
  const std::string level = env ? env : "error";
  if (level == "debug") spdlog::set_level(spdlog::level::debug);
  else if (level == "info") spdlog::set_level(spdlog::level::info);
  else spdlog::set_level(spdlog::level::err);
}

Scene read_scene(const std::string& path) {
  try {
    Scene scene = load_scene_file(path);
    spdlog::info("loaded scene '{}' with {} entities", path, scene.size());
    return scene;
  } catch (const Error& e) {
    throw ExitError{kBadInput, std::string("invalid scene: ") + e.what()};
  }
}

PreferenceTable read_prefs(const std::string& path) {
  if (path.empty()) return default_preferences();
  try {
    return load_preferences_file(path);
  } catch (const Error& e) {
    throw ExitError{kBadInput, std::string("invalid preferences: ") + e.what()};
  }
}

std::size_t read_target(const Scene& scene, const std::string& id) {
  auto idx = scene.index_of(id);
  if (!idx) throw ExitError{kBadTarget, "unknown target '" + id + "'"};
  if (!scene[*idx].referable_as_target()) throw ExitError{kBadTarget, "'" + id + "' cannot be a target"};
  return *idx;
}

// Drops imperative prefixes ("pick up ...") and trailing punctuation; verb
// phrases are not part of the expression grammar.
std::string strip_imperative(std::string text) {
  static const char* kPrefixes[] = {"pick up ", "give me ", "hand me ", "bring me ", "point to ",
                                    "point at ", "take ",    "grab ",    "show me "};
  auto trim = [](std::string s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return std::string();
    const auto e = s.find_last_not_of(" \t\r\n.!?");
    return s.substr(b, e - b + 1);
  };
  text = trim(text);
  for (const char* p : kPrefixes) {
    const std::string prefix = p;
    if (text.size() > prefix.size() && to_lower(text.substr(0, prefix.size())) == prefix)
      return trim(text.substr(prefix.size()));
  }
  return text;
}

ExpressionTree read_expression(const std::string& arg, const Scene& scene) {
  std::string text = arg;
  if (!text.empty() && text.front() == '@') {
    std::ifstream in(text.substr(1));
    if (!in) throw ExitError{kParseFailed, "cannot open expression file '" + text.substr(1) + "'"};
    text.assign(std::istreambuf_iterator<char>(in), {});
  }
  try {
    const auto first = text.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && text[first] == '{') return tree_from_json(json::parse(text));
    return parse_expression(strip_imperative(text), lexicon_from_scene(scene));
  } catch (const json::exception& e) {
    throw ExitError{kParseFailed, std::string("cannot parse expression: ") + e.what()};
  } catch (const Error& e) {
    throw ExitError{kParseFailed, std::string("cannot parse expression: ") + e.what()};
  }
}

json strategy_json(const Strategy& s) {
  json out = json::array();
  for (const auto& step : s.steps)
    out.push_back({{"frame", std::string(to_string(step.kind))},
                   {"origin", step.origin ? json(*step.origin) : json(nullptr)}});
  return out;
}

json denotation_json(const Denotation& d, const Scene& scene) {
  if (!d.resolvable()) return nullptr;
  json out = json::object();
  for (std::size_t i = 0; i < scene.size(); ++i)
    if (scene[i].referable_as_target() || d[i] > 0.0) out[scene[i].id] = d[i];
  return out;
}

// ---------------------------------------------------------------------------

struct GenerateArgs {
  std::string scene, target, prefs, method = "pcsreg";
  std::optional<std::uint64_t> seed;
  bool json = false;
};

int run_generate(const GenerateArgs& a) {
  const auto method = method_from_string(a.method);
  if (!method) throw ExitError{kUsage, "unknown method '" + a.method + "'"};
  if (*method == Method::kRandom && !a.seed) throw ExitError{kUsage, "--method random requires --seed"};
  const Scene scene = read_scene(a.scene);
  const PreferenceTable prefs = read_prefs(a.prefs);
  const std::size_t target = read_target(scene, a.target);

  LandmarkChain chain;
  try {
    chain = build_landmark_chain(target, scene, prefs);
  } catch (const AmbiguityError& e) {
    std::cout << e.best_effort() << '\n';
    throw ExitError{kGenerationFailed, std::string("warning: ambiguous expression (") + e.what() +
                                           "); best effort: \"" + e.best_effort() + "\""};
  }
  spdlog::debug("chain k={} after {} preference rounds", chain.k(), chain.outer_iterations);
  const CandidateExpression expr = generate_with(*method, chain, scene, prefs, a.seed);
  const Denotation d = denote(expr.tree, scene, prefs);
  const Score s = score(d, target);

  if (!a.json) {
    std::cout << expr.surface << '\n';
    return kOk;
  }
  json landmarks = json::array();
  for (std::size_t lm : chain.landmarks()) landmarks.push_back(scene[lm].id);
  const json out = {{"target", a.target},
                    {"method", a.method},
                    {"surface", expr.surface},
                    {"tree", tree_to_json(expr.tree)},
                    {"strategy", strategy_json(expr.strategy)},
                    {"landmarks", landmarks},
                    {"k", chain.k()},
                    {"omega1", s.appropriateness},
                    {"omega2", s.effectiveness},
                    {"total", s.total()}};
  std::cout << out.dump(2) << '\n';
  return kOk;
}

struct ResolveArgs {
  std::string scene, expr, prefs, target;
  bool json = false;
};

int run_resolve(const ResolveArgs& a) {
  const Scene scene = read_scene(a.scene);
  const PreferenceTable prefs = read_prefs(a.prefs);
  std::optional<std::size_t> target;
  if (!a.target.empty()) target = read_target(scene, a.target);
  const ExpressionTree tree = read_expression(a.expr, scene);
  const Denotation d = denote(tree, scene, prefs);

  std::vector<std::size_t> order;
  for (std::size_t i = 0; i < scene.size(); ++i)
    if (scene[i].referable_as_target() || (d.resolvable() && d[i] > 0.0)) order.push_back(i);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return d[x] > d[y]; });

  if (a.json) {
    json out = {{"expression", realize(tree)},
                {"tree", tree_to_json(tree)},
                {"resolvable", d.resolvable()},
                {"denotation", denotation_json(d, scene)}};
    if (d.resolvable()) out["argmax"] = scene[*d.argmax()].id;
    if (target) {
      const Score s = score(d, *target);
      out["target"] = a.target;
      out["omega1"] = s.appropriateness;
      out["omega2"] = s.effectiveness;
      out["total"] = s.total();
    }
    std::cout << out.dump(2) << '\n';
    return kOk;
  }
  if (!d.resolvable()) {
    std::cout << "unresolvable\n";
    return kOk;
  }
  for (std::size_t i : order) std::cout << fmt::format("{}\t{:.6f}\n", scene[i].id, d[i]);
  std::cout << "argmax\t" << scene[*d.argmax()].id << '\n';
  if (target) {
    const Score s = score(d, *target);
    std::cout << fmt::format("omega1\t{}\nomega2\t{:.6f}\n", s.appropriateness, s.effectiveness);
  }
  return kOk;
}

struct ExplainArgs {
  std::string scene, target, prefs;
};

int run_explain(const ExplainArgs& a) {
  const Scene scene = read_scene(a.scene);
  const PreferenceTable prefs = read_prefs(a.prefs);
  const std::size_t target = read_target(scene, a.target);
  LandmarkChain chain;
  try {
    chain = build_landmark_chain(target, scene, prefs);
  } catch (const AmbiguityError& e) {
    throw ExitError{kGenerationFailed, std::string("warning: ambiguous expression (") + e.what() +
                                           "); best effort: \"" + e.best_effort() + "\""};
  }
  const auto space = expression_space(chain, scene);
  const Selection sel = select_best(space, target, scene, prefs);

  json candidates = json::array();
  for (const auto& c : space) {
    const Denotation d = denote(c.tree, scene, prefs);
    const Score s = score(d, target);
    candidates.push_back({{"surface", c.surface},
                          {"strategy", strategy_json(c.strategy)},
                          {"omega1", s.appropriateness},
                          {"omega2", s.effectiveness},
                          {"total", s.total()},
                          {"denotation", denotation_json(d, scene)}});
  }
  json landmarks = json::array();
  for (std::size_t lm : chain.landmarks()) landmarks.push_back(scene[lm].id);
  json preference_units = json::array();
  for (const auto& u : chain.preferences.units) preference_units.push_back(u);
  const json out = {{"target", a.target},
                    {"k", chain.k()},
                    {"landmarks", landmarks},
                    {"preference_rounds", chain.outer_iterations},
                    {"unit_preferences", preference_units},
                    {"candidates", candidates},
                    {"selected", sel.index}};
  std::cout << out.dump(2) << '\n';
  return kOk;
}

struct EvaluateArgs {
  std::string config, out;
  bool json = false;
};

int run_evaluate(const EvaluateArgs& a) {
  harness::TrialConfig cfg;
  if (!a.config.empty()) {
    std::ifstream in(a.config);
    if (!in) throw ExitError{kBadInput, "cannot open config '" + a.config + "'"};
    try {
      cfg = harness::trial_config_from_json(json::parse(in));
    } catch (const json::exception& e) {
      throw ExitError{kBadInput, std::string("invalid config: ") + e.what()};
    } catch (const Error& e) {
      throw ExitError{kBadInput, std::string("invalid config: ") + e.what()};
    }
  }
  harness::TrialReport report;
  try {
    report = harness::run_comparison(cfg);
  } catch (const Error& e) {
    throw ExitError{kBadInput, std::string("invalid config: ") + e.what()};
  }
  const std::string report_json = harness::report_to_json(report).dump(2) + "\n";
  const std::string report_text = harness::report_to_text(report);
  if (!a.out.empty()) {
    std::filesystem::create_directories(a.out);
    const std::filesystem::path dir(a.out);
    std::ofstream(dir / "report.json") << report_json;
    std::ofstream(dir / "report.txt") << report_text;
    if (cfg.record_trials) std::ofstream(dir / "trials.csv") << harness::records_to_csv(report);
    spdlog::info("wrote reports to {}", a.out);
  }
  std::cout << (a.json ? report_json : report_text);
  return kOk;
}

int run_schema(const std::string& which) {
  if (which == "scene") std::cout << cli::kSceneSchema << '\n';
  else if (which == "prefs") std::cout << cli::kPreferencesSchema << '\n';
  else if (which == "config") std::cout << cli::kConfigSchema << '\n';
  else if (which.empty() || which == "all") {
    const json all = {{"scene", json::parse(cli::kSceneSchema)},
                      {"prefs", json::parse(cli::kPreferencesSchema)},
                      {"config", json::parse(cli::kConfigSchema)}};
    std::cout << all.dump(2) << '\n';
  } else {
    throw ExitError{kUsage, "unknown schema '" + which + "' (scene, prefs, config, all)"};
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  setup_logging();
  CLI::App app{"Perspective-corrected spatial referring expressions for tabletop scenes"};
  app.require_subcommand(1, 1);

  GenerateArgs gen;
  auto* generate = app.add_subcommand("generate", "Generate the best referring expression for a target");
  generate->add_option("--scene", gen.scene, "Scene JSON file")->required();
  generate->add_option("--target", gen.target, "Target entity id")->required();
  generate->add_option("--prefs", gen.prefs, "Frame preference JSON file");
  generate->add_option("--method", gen.method, "pcsreg|max|robot|human|random");
  generate->add_option("--seed", gen.seed, "Seed for the random baseline");
  generate->add_flag("--json", gen.json, "Emit tree, strategy and scores as JSON");

  ResolveArgs res;
  auto* resolve = app.add_subcommand("resolve", "Resolve an expression to a distribution over entities");
  resolve->add_option("--scene", res.scene, "Scene JSON file")->required();
  resolve->add_option("--expr", res.expr, "Expression text, JSON tree, or @FILE")->required();
  resolve->add_option("--prefs", res.prefs, "Frame preference JSON file");
  resolve->add_option("--target", res.target, "Report omega1/omega2 for this entity");
  resolve->add_flag("--json", res.json, "Emit JSON");

  ExplainArgs exp;
  auto* explain = app.add_subcommand("explain", "Score every candidate in the expression space");
  explain->add_option("--scene", exp.scene, "Scene JSON file")->required();
  explain->add_option("--target", exp.target, "Target entity id")->required();
  explain->add_option("--prefs", exp.prefs, "Frame preference JSON file");

  EvaluateArgs ev;
  auto* evaluate = app.add_subcommand("evaluate", "Compare methods against simulated listeners");
  evaluate->add_option("--config", ev.config, "Evaluation config JSON file");
  evaluate->add_option("--out", ev.out, "Directory for report.json / report.txt");
  evaluate->add_flag("--json", ev.json, "Print the JSON report instead of the table");

  std::string which;
  auto* schema = app.add_subcommand("schema", "Print JSON schemas for input documents");
  schema->add_option("which", which, "scene|prefs|config|all");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*generate) return run_generate(gen);
    if (*resolve) return run_resolve(res);
    if (*explain) return run_explain(exp);
    if (*evaluate) return run_evaluate(ev);
    if (*schema) return run_schema(which);
  } catch (const ExitError& e) {
    std::cerr << e.message << '\n';
    return e.code;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kBadInput;
  }
  return kUsage;
}
