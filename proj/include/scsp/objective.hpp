#pragma once

#include "scsp/domain.hpp"

namespace scsp {

/// Hours of room occupancy (setup through cleanup) that fall inside the
/// standard opening window [0, lambda]. Always in [0, lambda].
Hours contribution(const Placement& placement, const Patient& patient,
                   const HorizonParams& horizon);

/// Same quantity from raw occupancy bounds.
Hours window_contribution(Instant prep_begin, Instant cleanup_end, Hours lambda);

Hours utilisation(const Schedule& schedule, const Instance& instance);
Hours overtime(const Schedule& schedule, const Instance& instance);

/// Mean of (start - arrival) over non-elective patients; 0 when there are none.
Hours mean_nonelective_wait(const Schedule& schedule, const Instance& instance);

int patients_treated(const Schedule& schedule);

struct MetricsSnapshot {
  Hours utilisation = 0.0;
  Hours overtime = 0.0;
  Hours mean_nonelective_wait = 0.0;
  int patients_treated = 0;
};

MetricsSnapshot evaluate_metrics(const Schedule& schedule, const Instance& instance);

}  // namespace scsp
