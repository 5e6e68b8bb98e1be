// Small hand-built and random instances shared by the unit tests.
#pragma once

#include <algorithm>
#include <numeric>
#include <random>
#include <vector>

#include "scsp/heuristics.hpp"
#include "scsp/objective.hpp"

namespace scsp::fixture {

inline Instance basic(int rooms, int surgeons, int specialties = 1) {
  Instance inst;
  inst.specialties = specialties;
  for (int r = 0; r < rooms; ++r) {
    OperatingRoom room;
    room.id = r;
    for (int s = 0; s < specialties; ++s) room.equipped_specialties.push_back(s);
    inst.rooms.push_back(room);
  }
  for (int h = 0; h < surgeons; ++h) inst.surgeons.push_back({h, 0.0});
  return inst;
}

inline Patient& add(Instance& inst, PatientClass cls, Hours duration,
                    std::vector<SurgeonId> surgeons = {0}, SpecialtyId spec = 0) {
  Patient p;
  p.id = static_cast<PatientId>(inst.patients.size());
  p.cls = cls;
  p.specialty = spec;
  p.duration = duration;
  p.eligible_surgeons = std::move(surgeons);
  inst.patients.push_back(p);
  return inst.patients.back();
}

struct RandomShape {
  int patients = 5;
  int rooms = 2;
  int surgeons = 2;
  int specialties = 2;
  bool add_electives = true;
  bool broken_rooms = false;
};

/// Room 0 is equipped for everything, so every patient has a suitable room
/// unless it is broken (then only when another room fits).
inline Instance random_instance(std::mt19937_64& rng, const RandomShape& shape) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  auto pick = [&](int n) { return static_cast<int>(rng() % static_cast<std::uint64_t>(n)); };
  Instance inst = basic(shape.rooms, shape.surgeons, shape.specialties);
  for (auto& r : inst.rooms) {
    if (r.id > 0) {
      r.equipped_specialties.clear();
      for (int s = 0; s < shape.specialties; ++s)
        if (u(rng) < 0.6) r.equipped_specialties.push_back(s);
      if (r.equipped_specialties.empty()) r.equipped_specialties.push_back(pick(shape.specialties));
    }
    r.release_time = u(rng) < 0.3 ? std::round(u(rng) * 8.0) / 4.0 : 0.0;
  }
  if (shape.broken_rooms && shape.rooms > 1 && u(rng) < 0.5) inst.rooms[1].working = false;
  for (auto& h : inst.surgeons) h.release_time = u(rng) < 0.3 ? std::round(u(rng) * 8.0) / 4.0 : 0.0;

  for (int i = 0; i < shape.patients; ++i) {
    double c = u(rng);
    PatientClass cls = c < 0.45   ? PatientClass::ScheduledElective
                       : c < 0.75 ? PatientClass::NonElective
                                  : PatientClass::UnscheduledElective;
    if (!shape.add_electives && cls == PatientClass::UnscheduledElective)
      cls = PatientClass::ScheduledElective;
    std::vector<SurgeonId> hs;
    for (int h = 0; h < shape.surgeons; ++h)
      if (u(rng) < 0.5) hs.push_back(h);
    if (hs.empty()) hs.push_back(pick(shape.surgeons));
    auto& p = add(inst, cls, 0.5 + std::round(u(rng) * 10.0) / 4.0, hs, pick(shape.specialties));
    // A positive gap keeps back-to-back surgeries apart by more than the
    // ordering epsilon of the linear model.
    p.setup = 0.25 + std::round(u(rng)) / 4.0;
    p.cleanup = std::round(u(rng) * 2.0) / 4.0;
    p.urgency_category = 1 + pick(3);
    p.days_waiting = pick(200);
    p.due_date = due_date_for(p.urgency_category, p.days_waiting);
    if (cls == PatientClass::NonElective) p.arrival = std::round(u(rng) * 40.0) / 4.0 - 1.0;
    if (cls == PatientClass::UnscheduledElective) p.notice = std::round(u(rng) * 8.0) / 4.0;
  }
  // MSS for scheduled electives: a suitable room (broken ones allowed) and an eligible surgeon.
  for (const auto& p : inst.patients) {
    if (p.cls != PatientClass::ScheduledElective) continue;
    std::vector<RoomId> ok;
    for (const auto& r : inst.rooms)
      if (r.equipped_for(p.specialty)) ok.push_back(r.id);
    inst.mss_assignment[p.id] = {ok[static_cast<std::size_t>(pick(static_cast<int>(ok.size())))],
                                 p.eligible_surgeons[static_cast<std::size_t>(
                                     pick(static_cast<int>(p.eligible_surgeons.size())))]};
  }
  // A broken room may leave a patient without a suitable working room.
  for (auto& p : inst.patients)
    if (suitable_rooms(inst, p.specialty).empty()) inst.rooms[1].working = true;
  inst.validate();
  return inst;
}

inline std::vector<PatientId> ids_of(const Instance& inst, PatientClass cls) {
  std::vector<PatientId> out;
  for (const auto& p : inst.patients)
    if (p.cls == cls) out.push_back(p.id);
  return out;
}

/// Feasible schedule with random assignment, random order, random idle gaps
/// and a random subset of add-electives.
inline Schedule random_feasible_schedule(const Instance& inst, std::mt19937_64& rng,
                                         Instant now = kNegInf) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<PatientId> order(inst.patients.size());
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  auto st = SchedulingState::empty(inst, now);
  for (PatientId pid : order) {
    const auto& p = inst.patient(pid);
    if (p.cls == PatientClass::UnscheduledElective && u(rng) < 0.4) continue;
    std::vector<std::pair<RoomId, SurgeonId>> combos;
    for (RoomId r : suitable_rooms(inst, p.specialty))
      for (SurgeonId h : p.eligible_surgeons) combos.emplace_back(r, h);
    if (combos.empty()) continue;
    auto [r, h] = combos[rng() % combos.size()];
    Instant z = earliest_append_start(p, inst.surgeon(h), inst.room(r), st.cursors, inst.horizon,
                                      now) +
                (u(rng) < 0.5 ? 0.0 : std::round(u(rng) * 8.0) / 4.0);
    if (p.cls == PatientClass::UnscheduledElective && z + p.duration > inst.horizon.lambda)
      continue;
    st.place(make_placement(p, r, h, z), inst);
  }
  return st.schedule;
}

/// The linearised model is only valid while every occupied interval ends
/// before Big-M.
inline Instant latest_cleanup_end(const Schedule& s, const Instance& inst) {
  Instant last = kNegInf;
  for (const auto& pl : s.placements()) last = std::max(last, pl.end + inst.patient(pl.patient).cleanup);
  return last;
}

}  // namespace scsp::fixture
