#include "scsp/objective.hpp"

#include <algorithm>

namespace scsp {

Hours window_contribution(Instant prep_begin, Instant cleanup_end, Hours lambda) {
  return std::min(lambda, std::max(cleanup_end, 0.0)) -
         std::max(0.0, std::min(prep_begin, lambda));
}

Hours contribution(const Placement& pl, const Patient& p, const HorizonParams& hz) {
  return window_contribution(pl.start - p.setup, pl.end + p.cleanup, hz.lambda);
}

Hours utilisation(const Schedule& schedule, const Instance& inst) {
  Hours total = 0.0;
  for (const auto& pl : schedule.placements())
    total += contribution(pl, inst.patient(pl.patient), inst.horizon);
  return total;
}

Hours overtime(const Schedule& schedule, const Instance& inst) {
  Hours total = 0.0;
  for (const auto& pl : schedule.placements()) {
    const auto& p = inst.patient(pl.patient);
    total += p.duration + p.setup + p.cleanup - contribution(pl, p, inst.horizon);
  }
  return total;
}

Hours mean_nonelective_wait(const Schedule& schedule, const Instance& inst) {
  Hours sum = 0.0;
  int n = 0;
  for (const auto& p : inst.patients) {
    if (p.cls != PatientClass::NonElective) continue;
    ++n;
    if (const auto* pl = schedule.find(p.id)) sum += pl->start - p.arrival;
  }
  return n == 0 ? 0.0 : sum / n;
}

int patients_treated(const Schedule& schedule) { return static_cast<int>(schedule.size()); }

MetricsSnapshot evaluate_metrics(const Schedule& schedule, const Instance& inst) {
  return MetricsSnapshot{utilisation(schedule, inst), overtime(schedule, inst),
                         mean_nonelective_wait(schedule, inst), patients_treated(schedule)};
}

}  // namespace scsp
