#include "scsp/oracle.hpp"

#include <algorithm>

#include "scsp/objective.hpp"

namespace scsp {

namespace {

struct Enumerator {
  const Instance& inst;
  Instant now;
  const std::function<void(const Schedule&)>& visit;
  Schedule schedule;
  int mandatory_left = 0;
  std::vector<std::vector<RoomId>> rooms_for;

  void dfs(const Cursors& cursors) {
    if (mandatory_left == 0) visit(schedule);
    for (const auto& p : inst.patients) {
      if (schedule.included(p.id)) continue;
      for (RoomId r : rooms_for[static_cast<std::size_t>(p.id)]) {
        for (SurgeonId h : p.eligible_surgeons) {
          Instant z = earliest_append_start(p, inst.surgeon(h), inst.room(r), cursors,
                                            inst.horizon, now);
          if (p.cls == PatientClass::UnscheduledElective &&
              z + p.duration > inst.horizon.lambda + kTimeEps)
            continue;
          auto pl = make_placement(p, r, h, z);
          schedule.place(pl);
          mandatory_left -= p.mandatory();
          Cursors next = cursors;
          next.occupy(pl, p);
          dfs(next);
          mandatory_left += p.mandatory();
          schedule.remove(p.id);
        }
      }
    }
  }
};

}  // namespace

void enumerate_packed_schedules(const Instance& inst, Instant now,
                                const std::function<void(const Schedule&)>& visit) {
  Enumerator e{inst, now, visit, Schedule(inst.patients.size()), 0, {}};
  for (const auto& p : inst.patients) {
    e.mandatory_left += p.mandatory();
    e.rooms_for.push_back(suitable_rooms(inst, p.specialty));
  }
  e.dfs(Cursors(inst.rooms.size(), inst.surgeons.size()));
}

OracleResult exhaustive_oracle(const Instance& inst, Instant now, const OracleLimits& lim) {
  inst.validate();
  if (static_cast<int>(inst.patients.size()) > lim.max_patients ||
      static_cast<int>(inst.rooms.size()) > lim.max_rooms ||
      static_cast<int>(inst.surgeons.size()) > lim.max_surgeons)
    throw ConfigError("instance exceeds the exhaustive oracle's size limits");

  OracleResult best;
  bool found = false;
  enumerate_packed_schedules(inst, now, [&](const Schedule& s) {
    ++best.enumerated;
    double u = utilisation(s, inst);
    if (found && u <= best.utilisation) return;
    if (!check_feasibility(s, inst).ok()) return;
    best.schedule = s;
    best.utilisation = u;
    found = true;
  });
  if (!found) throw ScspError("no feasible packed schedule exists");
  return best;
}

}  // namespace scsp
