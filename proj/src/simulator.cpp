#include "scsp/simulator.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <unordered_map>

namespace scsp {

Json to_json(const TraceEntry& e) {
  Json j = to_json(e.disruption);
  j["day"] = e.day;
  j["update_at"] = e.at;
  j["reaction"] = std::string(to_string(e.reaction));
  return j;
}

namespace {

constexpr Instant kDayLength = 24.0;
constexpr double kInf = std::numeric_limits<double>::infinity();

class WeekRun {
 public:
  WeekRun(const WeekInstance& week, const ReactionPolicy& policy, UpdateStrategy strategy,
          std::mt19937_64& rng, const SimOptions& opt)
      : w_(week), policy_(policy), strategy_(strategy), opt_(opt) {
    run_seed_ = rng() ^ week.realisation_seed;
    react_rng_.seed(stream_seed(run_seed_, std::numeric_limits<std::uint64_t>::max()));
    const auto n = week.base.patients.size();
    treated_.assign(n, 0);
    planned_.assign(n, 0);
    for (const auto& day : week.mss)
      for (const auto& [g, e] : day) planned_[static_cast<std::size_t>(g)] = 1;
    for (PatientId g = 0; g < week.waiting_list_size; ++g) waiting_.push_back(g);
    room_release_.assign(week.base.rooms.size(), 0.0);
    surgeon_release_.assign(week.base.surgeons.size(), 0.0);
  }

  SimulationResult run() {
    for (int d = 0; d < w_.days(); ++d) run_day(d);
    for (const auto& c : carried_) res_.untreated_nonelectives.push_back(c.first);
    res_.weekly.mean_nonelective_wait = ne_treated_ == 0 ? 0.0 : ne_wait_sum_ / ne_treated_;
    return std::move(res_);
  }

 private:
  struct Day {
    Instance inst;
    std::vector<PatientId> gid;
    std::vector<double> actual;
    std::vector<char> revealed;
  };

  const WeekInstance& w_;
  const ReactionPolicy& policy_;
  UpdateStrategy strategy_;
  SimOptions opt_;
  std::uint64_t run_seed_ = 0;
  std::mt19937_64 react_rng_;
  SimulationResult res_;

  std::vector<char> treated_, planned_;
  std::vector<PatientId> waiting_;
  std::vector<std::pair<PatientId, Instant>> carried_;  // global id, arrival in week hours
  std::vector<Instant> room_release_, surgeon_release_;
  double ne_wait_sum_ = 0.0;
  int ne_treated_ = 0;

  PatientId add(Day& day, PatientId g, PatientClass cls, int d) {
    Patient p = w_.base.patient(g);
    p.id = static_cast<PatientId>(day.inst.patients.size());
    p.cls = cls;
    if (p.elective()) {
      p.days_waiting += d;
      p.due_date -= d;
    }
    day.inst.patients.push_back(std::move(p));
    day.gid.push_back(g);
    day.actual.push_back(std::numeric_limits<double>::quiet_NaN());
    day.revealed.push_back(0);
    return day.inst.patients.back().id;
  }

  double actual(Day& day, PatientId l) {
    auto& a = day.actual[static_cast<std::size_t>(l)];
    if (std::isnan(a)) {
      PatientId g = day.gid[static_cast<std::size_t>(l)];
      const auto& base = w_.base.patient(g);
      const auto& models = base.cls == PatientClass::NonElective ? w_.nonelective_durations
                                                                 : w_.elective_durations;
      std::mt19937_64 rng(stream_seed(run_seed_, static_cast<std::uint64_t>(g)));
      a = realize_duration(base.duration, models.at(static_cast<std::size_t>(base.specialty)), rng);
    }
    return a;
  }

  Instant reveal_time(Day& day, const Placement& pl) {
    return pl.start + std::min(actual(day, pl.patient), day.inst.patient(pl.patient).duration);
  }

  void record(const Day& day, int d, Instant t, const std::vector<ReactionStep>& steps) {
    if (!opt_.record_trace) return;
    for (const auto& s : steps) {
      TraceEntry e{d, t, s.disruption, s.reaction};
      if (e.disruption.patient >= 0)
        e.disruption.patient = day.gid[static_cast<std::size_t>(e.disruption.patient)];
      res_.trace.push_back(e);
    }
  }

  void check(const Day& day, const ReactiveEngine& eng, int d, Instant t) {
    ++res_.feasibility_checks;
    auto rep = check_feasibility(eng.state().schedule, day.inst);
    std::erase_if(rep.violations, [&](const Violation& v) {
      // Arrivals held back by a do-nothing reaction wait for the next update.
      if (v.constraint == 32) return day.inst.patient(v.patient).cls == PatientClass::NonElective;
      // An add-elective already under way may overrun past lambda.
      if (v.constraint == 35) return eng.state().schedule.anaesthetised(v.patient, t);
      return false;
    });
    if (!rep.ok())
      throw ScspError("infeasible schedule after update on day " + std::to_string(d) + " at " +
                      std::to_string(t) + ": " + rep.summary());
  }

  void run_day(int d) {
    Day day;
    const auto& base = w_.base;
    day.inst.horizon = base.horizon;
    day.inst.specialties = base.specialties;
    day.inst.rooms = base.rooms;
    day.inst.surgeons = base.surgeons;
    const auto& broken = w_.breakdowns[static_cast<std::size_t>(d)];
    for (auto& r : day.inst.rooms) {
      r.release_time = room_release_[static_cast<std::size_t>(r.id)];
      if (std::find(broken.begin(), broken.end(), r.id) != broken.end()) r.working = false;
    }
    for (auto& h : day.inst.surgeons) h.release_time = surgeon_release_[static_cast<std::size_t>(h.id)];

    std::unordered_map<PatientId, PatientId> local_of;
    for (const auto& [g, e] : w_.mss[static_cast<std::size_t>(d)]) {
      PatientId l = add(day, g, PatientClass::ScheduledElective, d);
      day.inst.mss_assignment[l] = e;
      local_of[g] = l;
    }
    std::vector<PatientId> known_ne;
    for (const auto& [g, arrival] : carried_) {
      PatientId l = add(day, g, PatientClass::NonElective, d);
      day.inst.patients.back().arrival = arrival - d * kDayLength;
      known_ne.push_back(l);
    }
    carried_.clear();
    std::vector<PatientId> pu;
    if (d < kWeekdays)
      for (PatientId g : waiting_)
        if (!treated_[static_cast<std::size_t>(g)] && !planned_[static_cast<std::size_t>(g)])
          pu.push_back(add(day, g, PatientClass::UnscheduledElective, d));
    if (opt_.check_feasibility) day.inst.validate();

    auto built = block_schedule(day.inst, known_ne, 0.0);
    if (!built.unplaceable.empty())
      throw UnplaceableError(day.gid[static_cast<std::size_t>(built.unplaceable.front())],
                             "patient has no suitable room on day " + std::to_string(d));
    ReactiveEngine eng(day.inst, std::move(built.schedule), AddElectivePool(day.inst, pu),
                       policy_, strategy_);
    auto& sched = eng.state().schedule;

    std::vector<Disruption> pending;
    for (RoomId r : broken) pending.push_back(Disruption::breakdown(r, 0.0));
    for (PatientId g : w_.cancellations[static_cast<std::size_t>(d)]) {
      PatientId l = local_of.at(g);
      day.inst.patients[static_cast<std::size_t>(l)].cancelled = true;
      if (const auto* pl = sched.find(l)) {
        auto copy = *pl;
        sched.remove(l);
        pending.push_back(Disruption::cancellation(copy, 0.0));
      }
    }

    std::vector<Request> arrivals;
    for (const auto& r : w_.nonelective_requests)
      if (r.day == d) arrivals.push_back(r);
    std::size_t next_arrival = 0;

    const Hours per = period(strategy_);
    const Instant last_tick = in_hours_only(strategy_) ? base.horizon.lambda : kDayLength;
    long tick_index = 0;
    auto tick_at = [&](long k) {
      if (per <= 0) return kInf;
      Instant t = static_cast<double>(k) * per;
      bool ok = in_hours_only(strategy_) ? t <= last_tick + kTimeEps : t < last_tick - kTimeEps;
      return ok ? t : kInf;
    };

    res_.disruptions += static_cast<int>(pending.size());
    for (;;) {
      Instant t_arr = next_arrival < arrivals.size() ? arrivals[next_arrival].at : kInf;
      Instant t_surg = kInf;
      for (const auto& pl : sched.placements())
        if (!day.revealed[static_cast<std::size_t>(pl.patient)])
          t_surg = std::min(t_surg, reveal_time(day, pl));
      Instant t_tick = tick_at(tick_index);
      Instant t = std::min({t_arr, t_surg, t_tick});
      if (t >= kDayLength) break;

      while (next_arrival < arrivals.size() && arrivals[next_arrival].at <= t) {
        const auto& r = arrivals[next_arrival++];
        PatientId l = add(day, r.patient, PatientClass::NonElective, d);
        day.inst.patients.back().arrival = r.at;
        sched.resize(day.inst.patients.size());
        pending.push_back(Disruption::arrival(l, r.at));
        ++res_.disruptions;
      }
      std::vector<Placement> ending;
      for (const auto& pl : sched.placements())
        if (!day.revealed[static_cast<std::size_t>(pl.patient)] && reveal_time(day, pl) <= t)
          ending.push_back(pl);
      for (auto pl : ending) {
        auto& p = day.inst.patients[static_cast<std::size_t>(pl.patient)];
        day.revealed[static_cast<std::size_t>(pl.patient)] = 1;
        double act = actual(day, pl.patient);
        if (act == p.duration) continue;
        Hours expected = p.duration;
        p.duration = act;
        pl.end = pl.start + act;
        sched.update(pl);
        pending.push_back(Disruption::duration_change(pl, expected, act, t));
        ++res_.disruptions;
        if (act > expected) ++res_.overruns;
      }
      if (t_tick <= t) ++tick_index;

      if (!should_update(strategy_, pending, t, base.horizon,
                         static_cast<int>(eng.queued().size())))
        continue;
      auto t0 = std::chrono::steady_clock::now();
      auto steps = eng.update(pending, t, react_rng_);
      auto dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      res_.update_latencies.push_back(dt);
      ++res_.updates;
      record(day, d, t, steps);
      pending.clear();
      if (opt_.check_feasibility) check(day, eng, d, t);
    }
    close_day(d, day, sched);
  }

  void close_day(int d, Day& day, Schedule& sched) {
    std::vector<PatientId> unstarted;
    for (const auto& pl : sched.placements())
      if (pl.start >= kDayLength) unstarted.push_back(pl.patient);
    for (PatientId l : unstarted) sched.remove(l);
    for (const auto& pl0 : sched.placements()) {
      auto pl = pl0;
      if (!day.revealed[static_cast<std::size_t>(pl.patient)]) {
        double act = actual(day, pl.patient);
        day.inst.patients[static_cast<std::size_t>(pl.patient)].duration = act;
        pl.end = pl.start + act;
        sched.update(pl);
      }
    }

    MetricsSnapshot m;
    m.utilisation = utilisation(sched, day.inst);
    m.overtime = overtime(sched, day.inst);
    m.patients_treated = patients_treated(sched);
    double wait = 0.0;
    int ne = 0;
    std::fill(room_release_.begin(), room_release_.end(), 0.0);
    std::fill(surgeon_release_.begin(), surgeon_release_.end(), 0.0);
    for (const auto& pl : sched.placements()) {
      const auto& p = day.inst.patient(pl.patient);
      treated_[static_cast<std::size_t>(day.gid[static_cast<std::size_t>(pl.patient)])] = 1;
      if (p.cls == PatientClass::NonElective) {
        wait += pl.start - p.arrival;
        ++ne;
      }
      Instant spill = pl.end + p.cleanup - kDayLength;
      auto& rr = room_release_[static_cast<std::size_t>(pl.room)];
      auto& sr = surgeon_release_[static_cast<std::size_t>(pl.surgeon)];
      rr = std::max(rr, spill);
      sr = std::max(sr, spill);
    }
    m.mean_nonelective_wait = ne == 0 ? 0.0 : wait / ne;
    ne_wait_sum_ += wait;
    ne_treated_ += ne;
    res_.daily.push_back(m);
    res_.weekly.utilisation += m.utilisation;
    res_.weekly.overtime += m.overtime;
    res_.weekly.patients_treated += m.patients_treated;

    for (const auto& p : day.inst.patients) {
      if (sched.included(p.id)) continue;
      PatientId g = day.gid[static_cast<std::size_t>(p.id)];
      if (p.cls == PatientClass::NonElective)
        carried_.emplace_back(g, p.arrival + d * kDayLength);
      else if (p.cls == PatientClass::ScheduledElective && !p.cancelled)
        res_.untreated_electives.push_back(g);
    }
    for (const auto& r : w_.elective_requests)
      if (r.day == d) waiting_.push_back(r.patient);

    if (opt_.keep_day_schedules)
      res_.days.push_back(DaySchedule{std::move(day.inst), sched, std::move(day.gid)});
  }
};

}  // namespace

SimulationResult simulate_week(const WeekInstance& week, const ReactionPolicy& policy,
                               UpdateStrategy strategy, std::mt19937_64& rng,
                               const SimOptions& options) {
  for (auto k : kAllKinds) policy.vector(strategy, k);  // ConfigError names a missing cell
  return WeekRun(week, policy, strategy, rng, options).run();
}

Instance planning_instance(const WeekInstance& week, int day,
                           std::vector<PatientId>* global_ids) {
  if (day < 0 || day >= week.days())
    throw ConfigError("day " + std::to_string(day) + " is outside the week (0-" +
                      std::to_string(week.days() - 1) + ")");
  const auto d = static_cast<std::size_t>(day);
  Instance inst;
  inst.horizon = week.base.horizon;
  inst.specialties = week.base.specialties;
  inst.rooms = week.base.rooms;
  inst.surgeons = week.base.surgeons;
  for (RoomId r : week.breakdowns[d]) inst.rooms[static_cast<std::size_t>(r)].working = false;
  std::vector<PatientId> ids;
  auto add = [&](PatientId g, PatientClass cls) {
    Patient p = week.base.patient(g);
    p.id = static_cast<PatientId>(inst.patients.size());
    p.cls = cls;
    if (p.elective()) {
      p.days_waiting += day;
      p.due_date -= day;
    }
    inst.patients.push_back(std::move(p));
    ids.push_back(g);
    return inst.patients.back().id;
  };
  const auto& cancelled = week.cancellations[d];
  for (const auto& [g, e] : week.mss[d]) {
    if (std::find(cancelled.begin(), cancelled.end(), g) != cancelled.end()) continue;
    inst.mss_assignment[add(g, PatientClass::ScheduledElective)] = e;
  }
  for (const auto& r : week.nonelective_requests)
    if (r.day == day) inst.patients[static_cast<std::size_t>(add(r.patient, PatientClass::NonElective))].arrival = r.at;
  inst.validate();
  if (global_ids) *global_ids = std::move(ids);
  return inst;
}

Stat summarize(const std::vector<double>& xs) {
  Stat s;
  if (xs.empty()) return s;
  double n = static_cast<double>(xs.size());
  for (double x : xs) s.mean += x;
  s.mean /= n;
  if (xs.size() > 1) {
    double ss = 0.0;
    for (double x : xs) ss += (x - s.mean) * (x - s.mean);
    s.se = std::sqrt(ss / (n - 1.0) / n);
  }
  return s;
}

}  // namespace scsp
