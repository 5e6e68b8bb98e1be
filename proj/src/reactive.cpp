#include "scsp/reactive.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace scsp {

namespace {

bool started(const Placement& pl, Instant now) { return pl.start < now; }

template <class Pred>
std::vector<Placement> take(SchedulingState& st, Pred pred) {
  std::vector<Placement> out;
  for (const auto& pl : st.schedule.placements())
    if (!started(pl, st.now) && pred(pl)) out.push_back(pl);
  for (const auto& pl : out) st.schedule.remove(pl.patient);
  return out;
}

void refresh(SchedulingState& st, const Instance& inst) {
  st.cursors = Cursors::from(st.schedule, inst);
}

int class_rank(PatientClass c) {
  switch (c) {
    case PatientClass::NonElective: return 0;
    case PatientClass::ScheduledElective: return 1;
    default: return 2;
  }
}

void rebuild_order(std::vector<PatientId>& ids, const Instance& inst) {
  std::sort(ids.begin(), ids.end(), [&](PatientId a, PatientId b) {
    const auto& pa = inst.patient(a);
    const auto& pb = inst.patient(b);
    int ra = class_rank(pa.cls), rb = class_rank(pb.cls);
    if (ra != rb) return ra < rb;
    if (ra == 0) return pa.arrival != pb.arrival ? pa.arrival < pb.arrival : a < b;
    if (ra == 1) return pa.due_date != pb.due_date ? pa.due_date < pb.due_date : a < b;
    return add_elective_before(pa, pb);
  });
}

// Open-schedules `ids` onto the current state. Add-electives that would end
// after lambda go back to the pool. Returns unplaceable mandatory patients.
std::vector<PatientId> rebuild(SchedulingState& st, const Instance& inst,
                               std::vector<PatientId> ids, AddElectivePool& pool) {
  rebuild_order(ids, inst);
  std::vector<PatientId> bad;
  for (PatientId pid : ids) {
    const auto& p = inst.patient(pid);
    auto c = best_append(p, inst, st.cursors, st.now);
    if (!p.mandatory()) {
      if (c && c->start + p.duration <= inst.horizon.lambda + kTimeEps)
        st.place(make_placement(p, c->room, c->surgeon, c->start), inst);
      else if (!p.cancelled)
        pool.insert(p, inst);
      continue;
    }
    if (!c) {
      bad.push_back(pid);
      continue;
    }
    st.place(make_placement(p, c->room, c->surgeon, c->start), inst);
  }
  return bad;
}

std::vector<PatientId> ids_of(const std::vector<Placement>& pls) {
  std::vector<PatientId> ids;
  ids.reserve(pls.size());
  for (const auto& pl : pls) ids.push_back(pl.patient);
  return ids;
}

void full_rebuild(SchedulingState& st, const Instance& inst, AddElectivePool& pool,
                  std::vector<PatientId> extra) {
  auto ids = ids_of(take(st, [](const Placement&) { return true; }));
  ids.insert(ids.end(), extra.begin(), extra.end());
  refresh(st, inst);
  auto bad = rebuild(st, inst, std::move(ids), pool);
  if (!bad.empty())
    throw UnplaceableError(bad.front(), "patient " + std::to_string(bad.front()) +
                                            " has no working suitable room and eligible surgeon");
}

template <class Pred>
void partial_rebuild(SchedulingState& st, const Instance& inst, AddElectivePool& pool,
                     Pred pred, std::vector<PatientId> extra = {}) {
  auto ids = ids_of(take(st, pred));
  ids.insert(ids.end(), extra.begin(), extra.end());
  refresh(st, inst);
  auto bad = rebuild(st, inst, std::move(ids), pool);
  if (!bad.empty()) full_rebuild(st, inst, pool, std::move(bad));
}

// Re-times the removed `set` in its old start order, keeping each room's sequence.
// `later` forbids any start from decreasing; otherwise the new start is the
// earliest gap after the previous surgery of the same room.
void shift(SchedulingState& st, const Instance& inst, AddElectivePool& pool,
           std::vector<Placement> set, bool later) {
  std::sort(set.begin(), set.end(), [](const Placement& a, const Placement& b) {
    return a.start != b.start ? a.start < b.start : a.patient < b.patient;
  });
  std::map<RoomId, Instant> room_free;
  for (const auto& pl : set) {
    const auto& p = inst.patient(pl.patient);
    Instant lb = start_lower_bound(p, inst.surgeon(pl.surgeon), inst.room(pl.room), inst.horizon,
                                   st.now);
    if (later) lb = std::max(lb, pl.start);
    if (auto it = room_free.find(pl.room); it != room_free.end())
      lb = std::max(lb, it->second + p.setup);
    Instant z = earliest_gap_start(p, pl.surgeon, pl.room, st.schedule, inst, lb);
    if (!p.mandatory() && z + p.duration > inst.horizon.lambda + kTimeEps) {
      pool.insert(p, inst);
      continue;
    }
    st.schedule.place(make_placement(p, pl.room, pl.surgeon, z));
    room_free[pl.room] = z + p.duration + p.cleanup;
  }
  refresh(st, inst);
}

void shift_room_earlier(SchedulingState& st, const Instance& inst, AddElectivePool& pool,
                        RoomId r) {
  shift(st, inst, pool, take(st, [&](const Placement& pl) { return pl.room == r; }), false);
}

void append_add_elective(SchedulingState& st, const Instance& inst, AddElectivePool& pool,
                         RoomId r) {
  auto pick = pool.select(inst, st.cursors, st.now, r);
  if (!pick) return;
  const auto& p = inst.patient(pick->first);
  st.place(make_placement(p, pick->second.room, pick->second.surgeon, pick->second.start), inst);
  pool.erase(p);
}

void require(bool ok, const Disruption& d, Reaction r) {
  if (!ok)
    throw ConfigError("reaction " + std::string(to_string(r)) + " is not legal for " +
                      std::string(to_string(d.kind)));
}

}  // namespace

void react(SchedulingState& st, const Disruption& d, Reaction r, const Instance& inst,
           AddElectivePool& pool) {
  require(is_legal(d.kind, r), d, r);
  const auto all = [](const Placement&) { return true; };
  const auto room_is = [&](const Placement& pl) { return pl.room == d.room; };
  const auto room_or_surgeon = [&](const Placement& pl) {
    return pl.room == d.room || pl.surgeon == d.surgeon;
  };

  switch (d.kind) {
    case DisruptionKind::D1: {
      if (r == Reaction::R0 || st.schedule.included(d.patient)) return;
      if (r == Reaction::R2) {
        partial_rebuild(st, inst, pool, all, {d.patient});
        return;
      }
      const auto& p = inst.patient(d.patient);
      auto c = best_append(p, inst, st.cursors, st.now);
      if (!c)
        throw UnplaceableError(p.id, "non-elective " + std::to_string(p.id) +
                                         " has no working suitable room and eligible surgeon");
      st.place(make_placement(p, c->room, c->surgeon, c->start), inst);
      return;
    }
    case DisruptionKind::D2:
      if (r == Reaction::R1)
        partial_rebuild(st, inst, pool, room_is);
      else
        partial_rebuild(st, inst, pool, all);
      return;
    case DisruptionKind::D3:
    case DisruptionKind::D4: {
      bool over = d.kind == DisruptionKind::D4;
      if (r == Reaction::R0) return;
      if (r == Reaction::R1a) {
        if (over)
          shift(st, inst, pool, take(st, room_or_surgeon), true);
        else
          shift_room_earlier(st, inst, pool, d.room);
      } else if (r == Reaction::R1b) {
        partial_rebuild(st, inst, pool, room_or_surgeon);
      } else {
        partial_rebuild(st, inst, pool, all);
      }
      return;
    }
    case DisruptionKind::D5: {
      if (const auto* pl = st.schedule.find(d.patient); pl && !started(*pl, st.now)) {
        st.schedule.remove(d.patient);
        refresh(st, inst);
      }
      if (r == Reaction::R1)
        shift_room_earlier(st, inst, pool, d.room);
      else if (r == Reaction::R2)
        partial_rebuild(st, inst, pool, all);
      return;
    }
    case DisruptionKind::D6:
      if (r == Reaction::R0) return;
      if (r == Reaction::R2) partial_rebuild(st, inst, pool, all);
      append_add_elective(st, inst, pool, d.room);
      return;
    case DisruptionKind::D7: {
      if (r == Reaction::R0) return;
      if (r == Reaction::R2) {
        partial_rebuild(st, inst, pool, all);
        return;
      }
      std::set<SurgeonId> surgeons;
      for (const auto& pl : st.schedule.placements())
        if (pl.room == d.room && !started(pl, st.now)) surgeons.insert(pl.surgeon);
      partial_rebuild(st, inst, pool, [&](const Placement& pl) {
        return pl.room == d.room || surgeons.count(pl.surgeon) != 0;
      });
      return;
    }
  }
}

namespace {

AddElectivePool pool_from(const Schedule& schedule, const Instance& inst) {
  std::vector<PatientId> waiting;
  for (const auto& p : inst.patients)
    if (p.cls == PatientClass::UnscheduledElective && !p.cancelled && !schedule.included(p.id))
      waiting.push_back(p.id);
  return AddElectivePool(inst, waiting);
}

std::vector<Disruption> detect_overtime(const SchedulingState& st, const Instance& inst) {
  std::vector<Instant> last(inst.rooms.size(), kNegInf);
  for (const auto& pl : st.schedule.placements()) {
    if (started(pl, st.now)) continue;
    auto& l = last[static_cast<std::size_t>(pl.room)];
    l = std::max(l, pl.end + inst.patient(pl.patient).cleanup);
  }
  std::vector<Disruption> out;
  for (const auto& r : inst.rooms) {
    if (!r.working) continue;
    // Remaining work in the room decides; a room whose only late surgery is
    // already under way has nothing left to react with.
    if (last[static_cast<std::size_t>(r.id)] == kNegInf) continue;
    if (st.cursors.room[static_cast<std::size_t>(r.id)] > inst.horizon.lambda + kTimeEps)
      out.push_back(Disruption::expected_overtime(r.id, st.now));
  }
  return out;
}

std::vector<Disruption> detect_undertime(const SchedulingState& st, const Instance& inst,
                                         const AddElectivePool& pool) {
  std::vector<Disruption> out;
  for (const auto& r : inst.rooms) {
    if (!r.working) continue;
    if (st.cursors.room[static_cast<std::size_t>(r.id)] >= inst.horizon.lambda) continue;
    if (pool.select(inst, st.cursors, st.now, r.id))
      out.push_back(Disruption::expected_undertime(r.id, st.now));
  }
  return out;
}

}  // namespace

Schedule react(Schedule schedule, const Disruption& d, Reaction r, const Instance& inst,
               Instant now) {
  auto pool = pool_from(schedule, inst);
  auto st = SchedulingState::from(std::move(schedule), inst, now);
  react(st, d, r, inst, pool);
  return std::move(st.schedule);
}

std::vector<Disruption> detect_derived(const SchedulingState& st, const Instance& inst,
                                       const AddElectivePool& pool) {
  auto out = detect_overtime(st, inst);
  auto under = detect_undertime(st, inst, pool);
  out.insert(out.end(), under.begin(), under.end());
  return out;
}

ReactiveEngine::ReactiveEngine(const Instance& instance, Schedule initial, AddElectivePool pool,
                               const ReactionPolicy& policy, UpdateStrategy strategy)
    : inst_(instance),
      state_(SchedulingState::from(std::move(initial), instance, kNegInf)),
      pool_(std::move(pool)),
      policy_(policy),
      strategy_(strategy) {}

std::vector<ReactionStep> ReactiveEngine::update(std::span<const Disruption> pending,
                                                 Instant now, std::mt19937_64& rng) {
  state_.now = now;
  // Durations may have been realised since the last pass.
  refresh(state_, inst_);
  std::vector<ReactionStep> steps;

  auto queued = std::move(queued_);
  queued_.clear();
  for (PatientId pid : queued) {
    auto d = Disruption::arrival(pid, now);
    react(state_, d, Reaction::R1, inst_, pool_);
    steps.push_back({d, Reaction::R1});
  }

  for (const auto& d : pending) {
    Reaction r = sample_reaction(policy_, strategy_, d.kind, rng);
    if (d.kind == DisruptionKind::D1 && r == Reaction::R0 && !state_.schedule.included(d.patient))
      queued_.push_back(d.patient);
    else
      react(state_, d, r, inst_, pool_);
    steps.push_back({d, r});
  }

  for (const auto& d : detect_overtime(state_, inst_)) {
    Reaction r = sample_reaction(policy_, strategy_, d.kind, rng);
    react(state_, d, r, inst_, pool_);
    steps.push_back({d, r});
  }
  for (const auto& d : detect_undertime(state_, inst_, pool_)) {
    Reaction r = sample_reaction(policy_, strategy_, d.kind, rng);
    react(state_, d, r, inst_, pool_);
    steps.push_back({d, r});
  }
  return steps;
}

}  // namespace scsp
