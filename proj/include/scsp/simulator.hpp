#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <variant>
#include <vector>

#include "scsp/instancegen.hpp"
#include "scsp/objective.hpp"
#include "scsp/reactive.hpp"

namespace scsp {

struct SimOptions {
  bool check_feasibility = false;  // after every update; throws on violation
  bool record_trace = false;
  bool keep_day_schedules = false;
};

struct TraceEntry {
  int day = 0;
  Instant at = 0.0;
  Disruption disruption;  // ids are global
  Reaction reaction = Reaction::R0;
};

Json to_json(const TraceEntry& e);

/// Realised schedule of one day with the day's patients (global ids in
/// `global_id`), kept for Gantt export.
struct DaySchedule {
  Instance instance;
  Schedule schedule;
  std::vector<PatientId> global_id;
};

struct SimulationResult {
  MetricsSnapshot weekly;  // sums over days; NE wait is the mean over treated arrivals
  std::vector<MetricsSnapshot> daily;
  int updates = 0;
  std::vector<double> update_latencies;  // seconds
  int disruptions = 0;
  int overruns = 0;
  std::vector<PatientId> untreated_electives;     // planned, not cancelled, not operated
  std::vector<PatientId> untreated_nonelectives;  // still waiting at the end of the week
  int feasibility_checks = 0;
  std::vector<TraceEntry> trace;
  std::vector<DaySchedule> days;
};

SimulationResult simulate_week(const WeekInstance& week, const ReactionPolicy& policy,
                               UpdateStrategy strategy, std::mt19937_64& rng,
                               const SimOptions& options = {});

/// Perfect-knowledge planning view of one day: that day's planned electives
/// that do not cancel plus the day's non-elective arrivals, with broken
/// rooms marked down. `global_ids`, when given, receives the id mapping.
Instance planning_instance(const WeekInstance& week, int day,
                           std::vector<PatientId>* global_ids = nullptr);

struct Stat {
  double mean = 0.0;
  double se = 0.0;  // standard error of the mean, 0 for a single run
};

Stat summarize(const std::vector<double>& xs);

struct RunRecord {
  int replication = 0;
  std::uint64_t seed = 0;
  MetricsSnapshot weekly;
  int updates = 0;
  double mean_update_seconds = 0.0;
  double runtime_seconds = 0.0;
};

struct ReplicationSummary {
  UpdateStrategy strategy = UpdateStrategy::UC;
  std::vector<RunRecord> runs;
  Stat utilisation, overtime, nonelective_wait, patients_treated, updates;
  Stat runtime_seconds, update_seconds;
};

/// A fixed week, or generator parameters from which each replication draws
/// its own week.
using ReplicationSource = std::variant<WeekInstance, GenParams>;

/// Replication i uses stream_seed(base_seed, i); runs execute in parallel
/// and the result does not depend on the thread count.
ReplicationSummary run_replications(const ReplicationSource& source, const ReactionPolicy& policy,
                                    UpdateStrategy strategy, int n, std::uint64_t base_seed,
                                    const SimOptions& options = {});

/// Single-threaded reference with identical results.
ReplicationSummary run_replications_serial(const ReplicationSource& source,
                                           const ReactionPolicy& policy, UpdateStrategy strategy,
                                           int n, std::uint64_t base_seed,
                                           const SimOptions& options = {});

}  // namespace scsp
