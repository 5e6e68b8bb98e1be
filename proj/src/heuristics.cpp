#include "scsp/heuristics.hpp"

#include <algorithm>
#include <limits>
#include <map>

namespace scsp {

SchedulingState SchedulingState::empty(const Instance& instance, Instant now) {
  return SchedulingState{Schedule(instance.patients.size()),
                         Cursors(instance.rooms.size(), instance.surgeons.size()), now};
}

SchedulingState SchedulingState::from(Schedule schedule, const Instance& instance, Instant now) {
  Cursors c = Cursors::from(schedule, instance);
  return SchedulingState{std::move(schedule), std::move(c), now};
}

void SchedulingState::place(const Placement& pl, const Instance& instance) {
  schedule.place(pl);
  cursors.occupy(pl, instance.patient(pl.patient));
}

bool SchedulingState::consistent(const Instance& instance) const {
  Cursors fresh = Cursors::from(schedule, instance);
  return fresh.room == cursors.room && fresh.surgeon == cursors.surgeon;
}

std::optional<Choice> best_append(const Patient& p, const Instance& inst, const Cursors& cursors,
                                  Instant now, std::optional<RoomId> only_room) {
  std::optional<Choice> best;
  for (const auto& r : inst.rooms) {
    if (only_room && r.id != *only_room) continue;
    if (!r.working || !r.equipped_for(p.specialty)) continue;
    for (SurgeonId h : p.eligible_surgeons) {
      Instant z = earliest_append_start(p, inst.surgeon(h), r, cursors, inst.horizon, now);
      bool better = !best || z < best->start ||
                    (z == best->start && (r.id < best->room ||
                                          (r.id == best->room && h < best->surgeon)));
      if (better) best = Choice{r.id, h, z};
    }
  }
  return best;
}

namespace {

bool place_best(const Patient& p, SchedulingState& st, const Instance& inst,
                std::optional<RoomId> only_room = std::nullopt) {
  auto c = best_append(p, inst, st.cursors, st.now, only_room);
  if (!c) return false;
  st.place(make_placement(p, c->room, c->surgeon, c->start), inst);
  return true;
}

std::vector<PatientId> by_due_date(std::vector<PatientId> ids, const Instance& inst) {
  std::stable_sort(ids.begin(), ids.end(), [&](PatientId a, PatientId b) {
    const auto& pa = inst.patient(a);
    const auto& pb = inst.patient(b);
    return pa.due_date != pb.due_date ? pa.due_date < pb.due_date : a < b;
  });
  return ids;
}

}  // namespace

BuildResult block_schedule(const Instance& inst, std::span<const PatientId> queue, Instant now) {
  auto st = SchedulingState::empty(inst, now);
  BuildResult out;

  std::map<RoomId, std::vector<PatientId>> per_room;
  for (const auto& [pid, entry] : inst.mss_assignment) per_room[entry.room].push_back(pid);

  // MSS lists in working rooms.
  for (const auto& r : inst.rooms) {
    if (!r.working) continue;
    for (PatientId pid : by_due_date(per_room[r.id], inst)) {
      const auto& p = inst.patient(pid);
      const auto& entry = inst.mss_assignment.at(pid);
      Instant z = earliest_append_start(p, inst.surgeon(entry.surgeon), r, st.cursors,
                                        inst.horizon, now);
      st.place(make_placement(p, r.id, entry.surgeon, z), inst);
    }
  }

  // Lists of broken-down rooms become urgent work for any suitable room.
  for (const auto& r : inst.rooms) {
    if (r.working) continue;
    for (PatientId pid : by_due_date(per_room[r.id], inst))
      if (!place_best(inst.patient(pid), st, inst)) out.unplaceable.push_back(pid);
  }

  // Non-elective drain into reserved rooms, per specialty.
  std::vector<PatientId> waiting(queue.begin(), queue.end());
  std::stable_sort(waiting.begin(), waiting.end(), [&](PatientId a, PatientId b) {
    return inst.patient(a).arrival < inst.patient(b).arrival;
  });
  std::vector<char> done(inst.patients.size(), 0);
  for (SpecialtyId s = 0; s < inst.specialties; ++s) {
    std::vector<PatientId> mine;
    for (PatientId pid : waiting)
      if (inst.patient(pid).specialty == s) mine.push_back(pid);
    if (mine.empty()) continue;
    std::vector<RoomId> reserved;
    for (const auto& r : inst.rooms)
      if (r.working && r.reserved_for_specialty(s) && r.equipped_for(s)) reserved.push_back(r.id);

    std::size_t next = 0;
    while (next < mine.size()) {
      bool any_room = false;
      for (RoomId r : reserved) {
        if (next == mine.size()) break;
        if (st.cursors.room[static_cast<std::size_t>(r)] >= inst.horizon.lambda) continue;
        any_room = true;
        const auto& p = inst.patient(mine[next]);
        if (place_best(p, st, inst, r)) {
          done[static_cast<std::size_t>(p.id)] = 1;
          ++next;
        }
      }
      if (!any_room) break;
    }
  }

  for (PatientId pid : waiting) {
    if (done[static_cast<std::size_t>(pid)]) continue;
    if (!place_best(inst.patient(pid), st, inst)) out.unplaceable.push_back(pid);
  }

  out.schedule = std::move(st.schedule);
  return out;
}

std::vector<PatientId> open_schedule(std::span<const PatientId> patients, SchedulingState& st,
                                     const Instance& inst) {
  std::vector<PatientId> unplaceable;
  for (PatientId pid : patients)
    if (!place_best(inst.patient(pid), st, inst)) unplaceable.push_back(pid);
  return unplaceable;
}

std::optional<Choice> add_elective_fit(const Patient& p, const Instance& inst,
                                       const Cursors& cursors, Instant now,
                                       std::optional<RoomId> only_room) {
  const auto& hz = inst.horizon;
  Instant notice_bound = std::max(now, hz.tau) + p.notice;
  if (notice_bound + p.duration > hz.lambda + kTimeEps) return std::nullopt;
  std::optional<Choice> best;
  for (const auto& r : inst.rooms) {
    if (only_room && r.id != *only_room) continue;
    if (!r.working || !r.equipped_for(p.specialty)) continue;
    if (cursors.room[static_cast<std::size_t>(r.id)] + p.setup + p.duration > hz.lambda + kTimeEps)
      continue;
    for (SurgeonId h : p.eligible_surgeons) {
      Instant z = std::max(
          earliest_append_start(p, inst.surgeon(h), r, cursors, hz, now), notice_bound);
      if (z + p.duration > hz.lambda + kTimeEps) continue;
      bool better = !best || z < best->start ||
                    (z == best->start && (r.id < best->room ||
                                          (r.id == best->room && h < best->surgeon)));
      if (better) best = Choice{r.id, h, z};
    }
  }
  return best;
}

bool add_elective_before(const Patient& a, const Patient& b) {
  if (a.due_date != b.due_date) return a.due_date < b.due_date;
  if (a.days_waiting != b.days_waiting) return a.days_waiting > b.days_waiting;
  return a.id < b.id;
}

std::optional<PatientId> select_add_elective(std::span<const PatientId> waiting_list,
                                             const SchedulingState& st, const Instance& inst,
                                             Instant now, std::optional<RoomId> only_room) {
  std::vector<PatientId> order(waiting_list.begin(), waiting_list.end());
  std::sort(order.begin(), order.end(), [&](PatientId a, PatientId b) {
    return add_elective_before(inst.patient(a), inst.patient(b));
  });
  for (PatientId pid : order) {
    const auto& p = inst.patient(pid);
    if (p.cls != PatientClass::UnscheduledElective || st.schedule.included(pid)) continue;
    if (add_elective_fit(p, inst, st.cursors, now, only_room)) return pid;
  }
  return std::nullopt;
}

AddElectivePool::AddElectivePool(const Instance& inst, std::span<const PatientId> waiting)
    : by_specialty_(static_cast<std::size_t>(inst.specialties)),
      shortest_(static_cast<std::size_t>(inst.specialties), std::numeric_limits<Hours>::infinity()) {
  for (PatientId pid : waiting) {
    const auto& p = inst.patient(pid);
    if (p.cls != PatientClass::UnscheduledElective) continue;
    auto s = static_cast<std::size_t>(p.specialty);
    by_specialty_[s].push_back(pid);
    shortest_[s] = std::min(shortest_[s], p.setup + p.duration);
  }
  for (auto& list : by_specialty_)
    std::sort(list.begin(), list.end(), [&](PatientId a, PatientId b) {
      return add_elective_before(inst.patient(a), inst.patient(b));
    });
}

std::optional<std::pair<PatientId, Choice>> AddElectivePool::select(
    const Instance& inst, const Cursors& cursors, Instant now,
    std::optional<RoomId> only_room) const {
  std::optional<std::pair<PatientId, Choice>> best;
  for (SpecialtyId s = 0; s < static_cast<SpecialtyId>(by_specialty_.size()); ++s) {
    Instant room_free = kNegInf;
    if (only_room) {
      if (!inst.room(*only_room).equipped_for(s)) continue;
      room_free = cursors.room[static_cast<std::size_t>(*only_room)];
      if (room_free + shortest_[static_cast<std::size_t>(s)] > inst.horizon.lambda + kTimeEps)
        continue;
    }
    for (PatientId pid : by_specialty_[static_cast<std::size_t>(s)]) {
      const auto& p = inst.patient(pid);
      if (best && !add_elective_before(p, inst.patient(best->first))) break;
      if (room_free + p.setup + p.duration > inst.horizon.lambda + kTimeEps) continue;
      if (auto c = add_elective_fit(p, inst, cursors, now, only_room)) {
        best = std::pair{pid, *c};
        break;
      }
    }
  }
  return best;
}

void AddElectivePool::erase(const Patient& p) {
  auto& list = by_specialty_.at(static_cast<std::size_t>(p.specialty));
  list.erase(std::remove(list.begin(), list.end(), p.id), list.end());
}

void AddElectivePool::insert(const Patient& p, const Instance& inst) {
  auto& list = by_specialty_.at(static_cast<std::size_t>(p.specialty));
  auto& lo = shortest_[static_cast<std::size_t>(p.specialty)];
  lo = std::min(lo, p.setup + p.duration);
  auto it = std::lower_bound(list.begin(), list.end(), p.id, [&](PatientId a, PatientId b) {
    return add_elective_before(inst.patient(a), inst.patient(b));
  });
  if (it != list.end() && *it == p.id) return;
  list.insert(it, p.id);
}

std::size_t AddElectivePool::size() const {
  std::size_t n = 0;
  for (const auto& l : by_specialty_) n += l.size();
  return n;
}

}  // namespace scsp
