#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "scsp/simulator.hpp"

namespace scsp {

struct TunerConfig {
  UpdateStrategy strategy = UpdateStrategy::UP1;
  int n_runs = 10;
  int max_iterations = 100;
  double perturbation_scale = 0.2;
  int patience = 20;  // iterations without improvement before stopping
  std::uint64_t seed = 1;

  void validate() const;
};

Json to_json(const TunerConfig& c);
TunerConfig tuner_config_from_json(const Json& j);

struct TuningStep {
  int iteration = 0;
  DisruptionKind kind = DisruptionKind::D1;  // the vector perturbed to form the candidate
  ReactionPolicy candidate;
  double mean_utilisation = 0.0;
  bool accepted = false;
  double best_utilisation = 0.0;  // after this iteration's decision
};

struct TuningResult {
  ReactionPolicy best;
  std::vector<TuningStep> trace;
  bool converged = false;  // stopped by patience rather than the iteration cap
};

/// Adds uniform noise in [-scale, scale] to each legal weight of one cell,
/// clamps at zero and renormalises; an all-zero result becomes uniform.
ReactionPolicy perturb(const ReactionPolicy& policy, UpdateStrategy strategy, DisruptionKind kind,
                       double scale, std::mt19937_64& rng);

/// Hill climbing over one strategy's reaction probabilities. Every
/// candidate is scored by mean weekly utilisation over the same n_runs
/// replication seeds; `rng` drives the perturbations only.
TuningResult tune(const TunerConfig& config, const ReplicationSource& calibration,
                  std::mt19937_64& rng);

std::string tuning_trace_csv(const std::vector<TuningStep>& trace);

}  // namespace scsp
