#pragma once

#include <string>
#include <vector>

#include "scsp/simulator.hpp"

namespace scsp {

/// Fixed-precision decimal used by every CSV writer.
std::string fmt(double x, int precision = 6);

/// One row per strategy: utilisation, overtime, non-elective wait and
/// patients treated with standard errors, plus the mean update count.
/// Contains no wall-clock values, so it is reproducible byte for byte.
std::string metrics_csv(const std::vector<ReplicationSummary>& rows);

/// Per-replication detail, also free of wall-clock values.
std::string runs_csv(const std::vector<ReplicationSummary>& rows);

/// Runtime per week and time per update.
std::string timing_csv(const std::vector<ReplicationSummary>& rows);

std::string trace_jsonl(const std::vector<TraceEntry>& trace);

/// One lane per room over the day; the opening window is shaded, surgeries
/// are dark blocks with lighter setup and cleanup flanks.
std::string gantt_svg(const DaySchedule& day, const std::string& title);

}  // namespace scsp
