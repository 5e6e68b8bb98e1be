// scsp: generate weeks, simulate reactive strategies, tune reaction
// probabilities and export the day model in LP format.
#include <filesystem>
#include <functional>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>

#include <CLI11.hpp>

#include "scsp/mip.hpp"
#include "scsp/report.hpp"
#include "scsp/tuner.hpp"

namespace fs = std::filesystem;
using namespace scsp;

namespace {

// Options of one subcommand, so a config file or manifest can fill anything
// not given on the command line, and the resolved values can be recorded.
class Args {
 public:
  explicit Args(CLI::App* app) : app_(app) {}

  template <class T>
  CLI::Option* option(const std::string& name, T& var, const std::string& help) {
    auto* opt = app_->add_option("--" + name, var, help);
    entries_.push_back({name, opt, [&var] { return Json(var); },
                        [&var](const Json& j) { var = j.get<T>(); }});
    return opt;
  }

  CLI::Option* flag(const std::string& name, bool& var, const std::string& help) {
    auto* opt = app_->add_flag("--" + name, var, help);
    entries_.push_back({name, opt, [&var] { return Json(var); },
                        [&var](const Json& j) { var = j.get<bool>(); }});
    return opt;
  }

  bool given(const std::string& name) const { return given_.count(name) != 0; }

  /// Values from `config` for every option not given as a flag.
  void resolve(const Json& config) {
    for (const auto& e : entries_)
      if (e.opt->count() > 0) given_.insert(e.name);
    if (config.is_null()) return;
    if (!config.is_object()) throw ConfigError("config must be a JSON object");
    for (const auto& [key, value] : config.items()) {
      auto it = std::find_if(entries_.begin(), entries_.end(),
                             [&](const Entry& e) { return e.name == key; });
      if (it == entries_.end())
        throw ConfigError("unknown config key '" + key + "' for " + app_->get_name());
      if (it->opt->count() > 0) continue;
      try {
        it->set(value);
      } catch (const nlohmann::json::exception&) {
        throw ConfigError("config key '" + key + "' has the wrong type");
      }
      given_.insert(key);
    }
  }

  Json dump(const std::set<std::string>& skip = {}) const {
    Json j = Json::object();
    for (const auto& e : entries_)
      if (!skip.count(e.name)) j[e.name] = e.get();
    return j;
  }

 private:
  struct Entry {
    std::string name;
    CLI::Option* opt;
    std::function<Json()> get;
    std::function<void(const Json&)> set;
  };
  CLI::App* app_;
  std::vector<Entry> entries_;
  std::set<std::string> given_;
};

Json read_json(const std::string& path) {
  try {
    return Json::parse(read_text_file(path));
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("'" + path + "' is not valid JSON: " + e.what());
  }
}

struct Common {
  std::string config;
  std::string manifest;
};

// Config precedence: flags, then --config, then the manifest being replayed.
Json load_config(const Common& c, const std::string& command) {
  Json merged = Json::object();
  if (!c.manifest.empty()) {
    Json m = read_json(c.manifest);
    if (m.value("command", std::string()) != command)
      throw ConfigError("manifest '" + c.manifest + "' was written by another command");
    merged = m.at("args");
  }
  if (!c.config.empty()) {
    Json cfg = read_json(c.config);
    if (!cfg.is_object()) throw ConfigError("config '" + c.config + "' must be a JSON object");
    for (const auto& [k, v] : cfg.items()) merged[k] = v;
  }
  return merged;
}

void write_manifest(const std::string& path, const std::string& command, const Json& args,
                    const std::vector<std::string>& outputs,
                    const std::vector<std::string>& nondeterministic = {}) {
  Json m{{"schema", kSchemaVersion},
         {"command", command},
         {"args", args},
         {"outputs", outputs},
         {"nondeterministic_outputs", nondeterministic}};
  write_text_file(path, m.dump(2) + "\n");
}

void ensure_parent(const std::string& path) {
  auto parent = fs::path(path).parent_path();
  if (!parent.empty()) fs::create_directories(parent);
}

ReplicationSource load_source(const std::string& instance, const std::string& params) {
  if (!instance.empty() && !params.empty())
    throw ConfigError("give either --instance or --params, not both");
  if (!instance.empty()) return week_from_json(read_json(instance));
  if (!params.empty()) return gen_params_from_json(read_json(params));
  GenParams p;
  p.normalise();
  return p;
}

std::vector<UpdateStrategy> parse_strategies(const std::string& s) {
  if (s == "all") return {kAllStrategies.begin(), kAllStrategies.end()};
  std::vector<UpdateStrategy> out;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, ','))
    if (!item.empty()) out.push_back(strategy_from_string(item));
  if (out.empty()) throw ConfigError("no update strategy given");
  return out;
}

ReactionPolicy load_policy(const std::string& path, const std::vector<UpdateStrategy>& needed) {
  if (path.empty()) return ReactionPolicy::tuned_defaults();
  Json j = read_json(path);
  for (auto s : needed)
    for (auto k : kAllKinds) {
      std::string kn(to_string(k)), sn(to_string(s));
      if (!j.contains(kn) || !j[kn].contains(sn))
        throw ConfigError("policy '" + path + "' is missing cell " + sn + "/" + kn);
    }
  return policy_from_json(j, true);
}

// ---------------------------------------------------------------------------

struct GenerateCmd {
  std::string params, out;
  std::uint64_t seed = 1;

  void run(Args& args) {
    GenParams p = params.empty() ? GenParams{} : gen_params_from_json(read_json(params));
    if (args.given("seed"))
      p.seed = seed;
    else
      seed = p.seed;
    std::mt19937_64 rng(p.seed);
    WeekInstance w = generate_week(p, rng);
    ensure_parent(out);
    write_text_file(out, to_json(w).dump() + "\n");
    write_manifest(out + ".manifest.json", "generate", args.dump(),
                   {fs::path(out).filename().string()});
    std::cout << "wrote " << out << " (waiting list " << w.waiting_list_size << ", "
              << w.elective_requests.size() << " elective and " << w.nonelective_requests.size()
              << " non-elective requests)\n";
  }
};

struct SimulateCmd {
  std::string instance, params, policy, strategy = "all", out;
  int replications = 10;
  std::uint64_t seed = 1;
  bool check = false;
  bool no_detail = false;

  void run(Args& args) {
    auto source = load_source(instance, params);
    auto strategies = parse_strategies(strategy);
    auto pol = load_policy(policy, strategies);
    fs::create_directories(out);
    SimOptions opt;
    opt.check_feasibility = check;

    std::vector<ReplicationSummary> rows;
    std::vector<std::string> outputs{"metrics.csv", "runs.csv"};
    for (auto s : strategies) {
      rows.push_back(run_replications(source, pol, s, replications, seed, opt));
      std::cerr << to_string(s) << ": utilisation " << fmt(rows.back().utilisation.mean, 2)
                << " h, " << fmt(rows.back().updates.mean, 1) << " updates per week\n";
      if (no_detail) continue;
      // Replication 0 again, with its trace and realised day schedules.
      SimOptions detail = opt;
      detail.record_trace = true;
      detail.keep_day_schedules = true;
      std::mt19937_64 rng(stream_seed(seed, 0));
      WeekInstance generated;
      const WeekInstance* week = std::get_if<WeekInstance>(&source);
      if (!week) {
        generated = generate_week(std::get<GenParams>(source), rng);
        week = &generated;
      }
      auto res = simulate_week(*week, pol, s, rng, detail);
      std::string name(to_string(s));
      write_text_file((fs::path(out) / ("trace_" + name + ".jsonl")).string(),
                      trace_jsonl(res.trace));
      outputs.push_back("trace_" + name + ".jsonl");
      fs::create_directories(fs::path(out) / "gantt");
      for (std::size_t d = 0; d < res.days.size(); ++d) {
        std::string file = "gantt/" + name + "_day" + std::to_string(d) + ".svg";
        write_text_file((fs::path(out) / file).string(),
                        gantt_svg(res.days[d], name + " day " + std::to_string(d)));
        outputs.push_back(file);
      }
    }
    write_text_file((fs::path(out) / "metrics.csv").string(), metrics_csv(rows));
    write_text_file((fs::path(out) / "runs.csv").string(), runs_csv(rows));
    write_text_file((fs::path(out) / "timing.csv").string(), timing_csv(rows));
    write_manifest((fs::path(out) / "manifest.json").string(), "simulate", args.dump({"out"}),
                   outputs, {"timing.csv"});
    std::cout << metrics_csv(rows);
  }
};

struct TuneCmd {
  std::string instance, params, strategy = "UP1", out;
  int runs = 10, iterations = 100, patience = 20;
  double scale = 0.2;
  std::uint64_t seed = 1;

  void run(Args& args) {
    auto source = load_source(instance, params);
    TunerConfig cfg;
    cfg.strategy = strategy_from_string(strategy);
    cfg.n_runs = runs;
    cfg.max_iterations = iterations;
    cfg.perturbation_scale = scale;
    cfg.patience = patience;
    cfg.seed = seed;
    cfg.validate();
    std::mt19937_64 rng(stream_seed(seed, 0x70657274ULL));
    auto result = tune(cfg, source, rng);
    fs::create_directories(out);
    write_text_file((fs::path(out) / "policy.json").string(), to_json(result.best).dump(2) + "\n");
    write_text_file((fs::path(out) / "trace.csv").string(), tuning_trace_csv(result.trace));
    write_manifest((fs::path(out) / "manifest.json").string(), "tune", args.dump({"out"}),
                   {"policy.json", "trace.csv"});
    std::cout << "best utilisation " << fmt(result.trace.empty() ? 0.0 : result.trace.back().best_utilisation, 3)
              << " after " << result.trace.size() << " iterations"
              << (result.converged ? " (converged)" : "") << "\n";
  }
};

struct ExportMipCmd {
  std::string instance, out;
  int day = 0;

  void run(Args& args) {
    if (instance.empty()) throw ConfigError("--instance is required");
    auto week = week_from_json(read_json(instance));
    auto inst = planning_instance(week, day);
    ensure_parent(out);
    write_text_file(out, write_lp(build_mip(inst)));
    write_manifest(out + ".manifest.json", "export-mip", args.dump(),
                   {fs::path(out).filename().string()});
    std::cout << "wrote " << out << " (" << inst.patients.size() << " patients)\n";
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Reactive surgical case sequencing"};
  app.require_subcommand(1);

  Common common;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", common.config, "JSON file with option values (flags win)");
    sub->add_option("--manifest", common.manifest, "replay the arguments of a previous run");
  };

  GenerateCmd gen;
  auto* g = app.add_subcommand("generate", "draw a week of demand and disruptions");
  Args gargs(g);
  gargs.option("params", gen.params, "generator parameters (JSON)");
  gargs.option("seed", gen.seed, "random seed (default: the parameters' seed)");
  gargs.option("out", gen.out, "output week file");
  add_common(g);

  SimulateCmd sim;
  auto* s = app.add_subcommand("simulate", "simulate update strategies over replications");
  Args sargs(s);
  sargs.option("instance", sim.instance, "week file");
  sargs.option("params", sim.params, "generator parameters; each replication draws a week");
  sargs.option("policy", sim.policy, "reaction probabilities (JSON)");
  sargs.option("strategy", sim.strategy, "UP1..UP4, UC, UA, a comma list or 'all'");
  sargs.option("replications", sim.replications, "replications per strategy");
  sargs.option("seed", sim.seed, "base seed");
  sargs.option("out", sim.out, "output directory");
  sargs.flag("check", sim.check, "check feasibility after every update");
  sargs.flag("no-detail", sim.no_detail, "skip traces and Gantt charts");
  add_common(s);

  TuneCmd tun;
  auto* t = app.add_subcommand("tune", "tune reaction probabilities for one strategy");
  Args targs(t);
  targs.option("instance", tun.instance, "calibration week file");
  targs.option("params", tun.params, "generator parameters; each run draws a week");
  targs.option("strategy", tun.strategy, "update strategy to tune");
  targs.option("runs", tun.runs, "simulations per evaluation");
  targs.option("iterations", tun.iterations, "maximum iterations");
  targs.option("patience", tun.patience, "stop after this many iterations without improvement");
  targs.option("scale", tun.scale, "perturbation scale in (0, 1]");
  targs.option("seed", tun.seed, "seed");
  targs.option("out", tun.out, "output directory");
  add_common(t);

  ExportMipCmd mip;
  auto* m = app.add_subcommand("export-mip", "write one day's model in LP format");
  Args margs(m);
  margs.option("instance", mip.instance, "week file");
  margs.option("day", mip.day, "day index");
  margs.option("out", mip.out, "output LP file");
  add_common(m);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    auto run = [&](auto& cmd, Args& args, CLI::App* sub, bool needs_out) {
      args.resolve(load_config(common, sub->get_name()));
      if (needs_out && !args.given("out")) throw ConfigError("--out is required");
      cmd.run(args);
    };
    if (*g) run(gen, gargs, g, true);
    if (*s) run(sim, sargs, s, true);
    if (*t) run(tun, targs, t, true);
    if (*m) run(mip, margs, m, true);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const StructuralError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
