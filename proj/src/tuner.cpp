#include "scsp/tuner.hpp"

#include <sstream>

#include "scsp/report.hpp"

namespace scsp {

void TunerConfig::validate() const {
  if (n_runs < 1) throw ConfigError("tuner: n_runs must be at least 1");
  if (max_iterations < 1) throw ConfigError("tuner: max_iterations must be at least 1");
  if (!(perturbation_scale > 0.0) || perturbation_scale > 1.0)
    throw ConfigError("tuner: perturbation_scale must lie in (0, 1]");
  if (patience < 1) throw ConfigError("tuner: patience must be at least 1");
}

Json to_json(const TunerConfig& c) {
  return Json{{"strategy", std::string(to_string(c.strategy))},
              {"n_runs", c.n_runs},
              {"max_iterations", c.max_iterations},
              {"perturbation_scale", c.perturbation_scale},
              {"patience", c.patience},
              {"seed", c.seed}};
}

TunerConfig tuner_config_from_json(const Json& j) {
  if (!j.is_object()) throw ConfigError("tuner config must be a JSON object");
  TunerConfig c;
  try {
    if (j.contains("strategy")) c.strategy = strategy_from_string(j.at("strategy").get<std::string>());
    c.n_runs = j.value("n_runs", c.n_runs);
    c.max_iterations = j.value("max_iterations", c.max_iterations);
    c.perturbation_scale = j.value("perturbation_scale", c.perturbation_scale);
    c.patience = j.value("patience", c.patience);
    c.seed = j.value("seed", c.seed);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("tuner config: ") + e.what());
  }
  c.validate();
  return c;
}

ReactionPolicy perturb(const ReactionPolicy& policy, UpdateStrategy strategy, DisruptionKind kind,
                       double scale, std::mt19937_64& rng) {
  if (!(scale > 0.0) || scale > 1.0) throw ConfigError("perturbation scale must lie in (0, 1]");
  auto w = policy.vector(strategy, kind);
  std::uniform_real_distribution<double> noise(-scale, scale);
  double sum = 0.0;
  for (double& x : w) {
    x = std::max(0.0, x + noise(rng));
    sum += x;
  }
  if (sum <= 0.0) std::fill(w.begin(), w.end(), 1.0);
  ReactionPolicy out = policy;
  out.set(strategy, kind, std::move(w));
  return out;
}

TuningResult tune(const TunerConfig& config, const ReplicationSource& calibration,
                  std::mt19937_64& rng) {
  config.validate();
  TuningResult result;
  result.best = ReactionPolicy::prior();
  ReactionPolicy candidate = result.best;
  double best = 0.0;
  std::size_t kind = 0;
  int stale = 0;
  for (int it = 0; it < config.max_iterations; ++it) {
    double u = run_replications(calibration, candidate, config.strategy, config.n_runs,
                                config.seed)
                   .utilisation.mean;
    TuningStep step{it, kAllKinds[kind], candidate, u, u > best, 0.0};
    if (step.accepted) {
      best = u;
      result.best = candidate;
      stale = 0;
    } else {
      candidate = result.best;
      kind = (kind + 1) % kAllKinds.size();
      ++stale;
    }
    step.best_utilisation = best;
    result.trace.push_back(std::move(step));
    if (stale >= config.patience) {
      result.converged = true;
      break;
    }
    candidate = perturb(candidate, config.strategy, kAllKinds[kind],
                        config.perturbation_scale, rng);
  }
  return result;
}

std::string tuning_trace_csv(const std::vector<TuningStep>& trace) {
  std::ostringstream out;
  out << "iteration,kind,mean_utilisation,accepted,best_utilisation\n";
  for (const auto& s : trace)
    out << s.iteration << ',' << to_string(s.kind) << ',' << fmt(s.mean_utilisation) << ','
        << (s.accepted ? 1 : 0) << ',' << fmt(s.best_utilisation) << '\n';
  return out.str();
}

}  // namespace scsp
