#include <chrono>
#include <exception>

#include "scsp/simulator.hpp"

namespace scsp {

namespace {

RunRecord run_one(const ReplicationSource& source, const ReactionPolicy& policy,
                  UpdateStrategy strategy, int i, std::uint64_t base_seed,
                  const SimOptions& options) {
  RunRecord rec;
  rec.replication = i;
  rec.seed = stream_seed(base_seed, static_cast<std::uint64_t>(i));
  std::mt19937_64 rng(rec.seed);
  WeekInstance generated;
  const WeekInstance* week = std::get_if<WeekInstance>(&source);
  if (!week) {
    generated = generate_week(std::get<GenParams>(source), rng);
    week = &generated;
  }
  auto t0 = std::chrono::steady_clock::now();
  auto res = simulate_week(*week, policy, strategy, rng, options);
  rec.runtime_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  rec.weekly = res.weekly;
  rec.updates = res.updates;
  rec.mean_update_seconds = summarize(res.update_latencies).mean;
  return rec;
}

ReplicationSummary summarise_runs(UpdateStrategy strategy, std::vector<RunRecord> runs) {
  ReplicationSummary s;
  s.strategy = strategy;
  std::vector<double> u, o, w, p, n, rt, ut;
  for (const auto& r : runs) {
    u.push_back(r.weekly.utilisation);
    o.push_back(r.weekly.overtime);
    w.push_back(r.weekly.mean_nonelective_wait);
    p.push_back(r.weekly.patients_treated);
    n.push_back(r.updates);
    rt.push_back(r.runtime_seconds);
    ut.push_back(r.mean_update_seconds);
  }
  s.utilisation = summarize(u);
  s.overtime = summarize(o);
  s.nonelective_wait = summarize(w);
  s.patients_treated = summarize(p);
  s.updates = summarize(n);
  s.runtime_seconds = summarize(rt);
  s.update_seconds = summarize(ut);
  s.runs = std::move(runs);
  return s;
}

void check_count(int n) {
  if (n < 1) throw ConfigError("replication count must be at least 1");
}

}  // namespace

ReplicationSummary run_replications(const ReplicationSource& source, const ReactionPolicy& policy,
                                    UpdateStrategy strategy, int n, std::uint64_t base_seed,
                                    const SimOptions& options) {
  check_count(n);
  std::vector<RunRecord> runs(static_cast<std::size_t>(n));
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(n));
#pragma omp parallel for schedule(dynamic)
  for (int i = 0; i < n; ++i) {
    try {
      runs[static_cast<std::size_t>(i)] = run_one(source, policy, strategy, i, base_seed, options);
    } catch (...) {
      errors[static_cast<std::size_t>(i)] = std::current_exception();
    }
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  return summarise_runs(strategy, std::move(runs));
}

ReplicationSummary run_replications_serial(const ReplicationSource& source,
                                           const ReactionPolicy& policy, UpdateStrategy strategy,
                                           int n, std::uint64_t base_seed,
                                           const SimOptions& options) {
  check_count(n);
  std::vector<RunRecord> runs;
  for (int i = 0; i < n; ++i) runs.push_back(run_one(source, policy, strategy, i, base_seed, options));
  return summarise_runs(strategy, std::move(runs));
}

}  // namespace scsp
