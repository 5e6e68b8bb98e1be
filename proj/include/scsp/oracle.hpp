#pragma once

#include <functional>

#include "scsp/domain.hpp"

namespace scsp {

struct OracleLimits {
  int max_patients = 6;
  int max_rooms = 2;
  int max_surgeons = 3;
};

/// Visits every append-packed schedule: each inclusion subset that contains
/// all mandatory patients, every room/surgeon assignment and every append
/// order, with starts from earliest_append_start. Add-electives that would
/// end after lambda are pruned. Schedules can repeat across orders.
void enumerate_packed_schedules(const Instance& instance, Instant now,
                                const std::function<void(const Schedule&)>& visit);

struct OracleResult {
  Schedule schedule;
  Hours utilisation = 0.0;
  long long enumerated = 0;
};

/// Best feasible packed schedule by utilisation; ties keep the first found.
/// Throws ConfigError beyond the limits, and ScspError when no packed
/// schedule is feasible.
OracleResult exhaustive_oracle(const Instance& instance, Instant now = kNegInf,
                               const OracleLimits& limits = {});

}  // namespace scsp
