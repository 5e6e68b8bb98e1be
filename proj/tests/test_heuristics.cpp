#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "fixtures.hpp"

using namespace scsp;
using scsp::fixture::add;
using scsp::fixture::basic;
using PC = PatientClass;

TEST_CASE("block: MSS list in due-date order") {
  auto inst = basic(2, 1);
  add(inst, PC::ScheduledElective, 1).due_date = 90;
  add(inst, PC::ScheduledElective, 1).due_date = 30;
  inst.mss_assignment[0] = {1, 0};
  inst.mss_assignment[1] = {1, 0};
  auto res = block_schedule(inst, {}, 0.0);
  REQUIRE(res.unplaceable.empty());
  CHECK(res.schedule.find(1)->start < res.schedule.find(0)->start);
  CHECK(res.schedule.find(0)->room == 1);
  CHECK(check_feasibility(res.schedule, inst).ok());
}

TEST_CASE("block: broken room's patient moves to a suitable room") {
  auto inst = basic(2, 1);
  inst.rooms[1].working = false;
  add(inst, PC::ScheduledElective, 2);
  inst.mss_assignment[0] = {1, 0};
  auto res = block_schedule(inst, {}, 0.0);
  REQUIRE(res.schedule.included(0));
  CHECK(res.schedule.find(0)->room == 0);
  CHECK(check_feasibility(res.schedule, inst).ok());
}

TEST_CASE("block: non-electives drain into their reserved room in arrival order") {
  auto inst = basic(2, 2);
  inst.rooms[1].reserved_for = {0};
  add(inst, PC::NonElective, 1, {0, 1}).arrival = 0.5;
  add(inst, PC::NonElective, 1, {0, 1}).arrival = 0.0;
  std::vector<PatientId> queue{0, 1};
  auto res = block_schedule(inst, queue, 0.0);
  REQUIRE(res.schedule.size() == 2);
  CHECK(res.schedule.find(0)->room == 1);
  CHECK(res.schedule.find(1)->room == 1);
  CHECK(res.schedule.find(1)->start < res.schedule.find(0)->start);
}

TEST_CASE("block: reserved room stops taking work once it reaches lambda") {
  auto inst = basic(2, 3);
  inst.rooms[1].reserved_for = {0};
  for (int i = 0; i < 3; ++i) add(inst, PC::NonElective, 5.0, {i}).arrival = 0.0;
  std::vector<PatientId> queue{0, 1, 2};
  auto res = block_schedule(inst, queue, 0.0);
  // Two fill the reserved room past lambda, the third goes to room 0.
  CHECK(res.schedule.find(0)->room == 1);
  CHECK(res.schedule.find(1)->room == 1);
  CHECK(res.schedule.find(2)->room == 0);
}

TEST_CASE("block: unplaceable patients are reported") {
  auto inst = basic(2, 1, 2);
  inst.rooms[0].equipped_specialties = {0};
  inst.rooms[1].equipped_specialties = {1};
  inst.rooms[1].working = false;
  add(inst, PC::ScheduledElective, 1, {0}, 1);
  inst.mss_assignment[0] = {1, 0};
  auto res = block_schedule(inst, {}, 0.0);
  CHECK(res.unplaceable == std::vector<PatientId>{0});
}

TEST_CASE("open: earliest surgeon wins") {
  auto inst = basic(2, 2);
  inst.surgeons[0].release_time = 1.0;
  inst.surgeons[1].release_time = 0.5;
  add(inst, PC::ScheduledElective, 1, {0, 1});
  auto st = SchedulingState::empty(inst, 0.0);
  std::vector<PatientId> ids{0};
  CHECK(open_schedule(ids, st, inst).empty());
  CHECK(st.schedule.find(0)->surgeon == 1);
  CHECK(st.schedule.find(0)->start == 0.5);
}

TEST_CASE("open: room release binds") {
  auto inst = basic(2, 1, 2);
  inst.rooms[0].equipped_specialties = {0};
  inst.rooms[1].equipped_specialties = {1};
  inst.rooms[1].release_time = 4.0;
  add(inst, PC::ScheduledElective, 1, {0}, 1);
  auto st = SchedulingState::empty(inst, 0.0);
  std::vector<PatientId> ids{0};
  open_schedule(ids, st, inst);
  CHECK(st.schedule.find(0)->start == 4.0);
}

TEST_CASE("open: each step is the enumerated minimum and the run is deterministic") {
  std::mt19937_64 rng(8);
  fixture::RandomShape shape;
  shape.patients = 4;
  shape.rooms = 2;
  shape.surgeons = 3;
  for (int trial = 0; trial < 200; ++trial) {
    auto inst = fixture::random_instance(rng, shape);
    std::vector<PatientId> order{0, 1, 2, 3};
    std::shuffle(order.begin(), order.end(), rng);
    auto st = SchedulingState::empty(inst, 0.0);
    for (PatientId pid : order) {
      const auto& p = inst.patient(pid);
      Instant best = std::numeric_limits<double>::infinity();
      for (const auto& r : inst.rooms) {
        if (!r.working || !r.equipped_for(p.specialty)) continue;
        for (SurgeonId h : p.eligible_surgeons)
          best = std::min(best, earliest_append_start(p, inst.surgeon(h), r, st.schedule, inst, 0.0));
      }
      std::vector<PatientId> one{pid};
      REQUIRE(open_schedule(one, st, inst).empty());
      REQUIRE(st.schedule.find(pid)->start == best);
      REQUIRE(st.consistent(inst));
    }
    auto again = SchedulingState::empty(inst, 0.0);
    open_schedule(order, again, inst);
    REQUIRE(again.schedule == st.schedule);
  }
}

TEST_CASE("both heuristics emit feasible schedules and keep MSS assignments") {
  std::mt19937_64 rng(99);
  fixture::RandomShape shape;
  shape.patients = 12;
  shape.rooms = 4;
  shape.surgeons = 4;
  shape.specialties = 3;
  shape.add_electives = false;
  shape.broken_rooms = true;
  for (int trial = 0; trial < 1000; ++trial) {
    auto inst = fixture::random_instance(rng, shape);
    if (trial % 2 == 0) inst.rooms.back().reserved_for = {0, 1};
    auto ne = fixture::ids_of(inst, PC::NonElective);
    auto res = block_schedule(inst, ne, 0.0);
    REQUIRE(res.unplaceable.empty());
    auto rep = check_feasibility(res.schedule, inst);
    REQUIRE_MESSAGE(rep.ok(), rep.summary());
    for (const auto& [pid, entry] : inst.mss_assignment) {
      if (!inst.room(entry.room).working) continue;
      const auto* pl = res.schedule.find(pid);
      REQUIRE(pl->room == entry.room);
      REQUIRE(pl->surgeon == entry.surgeon);
    }
    std::vector<PatientId> all(inst.patients.size());
    std::iota(all.begin(), all.end(), 0);
    auto st = SchedulingState::empty(inst, 0.0);
    REQUIRE(open_schedule(all, st, inst).empty());
    REQUIRE(check_feasibility(st.schedule, inst).ok());
  }
}

TEST_CASE("add-elective fit respects notice and lambda") {
  auto inst = basic(1, 2);
  add(inst, PC::ScheduledElective, 4.75, {1});  // room busy until 5.25 with cleanup
  auto& ue = add(inst, PC::UnscheduledElective, 2.0, {0});
  ue.notice = 2.0;
  auto st = SchedulingState::empty(inst, 3.0);
  st.place(make_placement(inst.patient(0), 0, 1, 0.25), inst);
  auto c = add_elective_fit(inst.patient(1), inst, st.cursors, 3.0);
  REQUIRE(c);
  CHECK(c->start == 5.5);
  std::vector<PatientId> wl{1};
  CHECK(select_add_elective(wl, st, inst, 3.0) == PatientId{1});
  inst.patients[1].duration = 5.0;
  CHECK_FALSE(add_elective_fit(inst.patient(1), inst, st.cursors, 3.0));
  CHECK_FALSE(select_add_elective(wl, st, inst, 3.0));
  CHECK_FALSE(select_add_elective({}, st, inst, 3.0));
  // Notice counts from now once the day has started.
  inst.patients[1].duration = 1.0;
  auto late = add_elective_fit(inst.patient(1), inst, st.cursors, 7.0);
  REQUIRE(late);
  CHECK(late->start == 9.0);
}

TEST_CASE("add-elective priority") {
  Patient a, b;
  a.id = 1;
  b.id = 2;
  a.due_date = 5;
  b.due_date = 9;
  CHECK(add_elective_before(a, b));
  b.due_date = 5;
  b.days_waiting = 10;
  CHECK(add_elective_before(b, a));
  b.days_waiting = 0;
  CHECK(add_elective_before(a, b));
}

TEST_CASE("pool selection agrees with the plain selection rule") {
  std::mt19937_64 rng(1234);
  fixture::RandomShape shape;
  shape.patients = 14;
  shape.rooms = 3;
  shape.surgeons = 3;
  shape.specialties = 3;
  for (int trial = 0; trial < 500; ++trial) {
    auto inst = fixture::random_instance(rng, shape);
    auto waiting = fixture::ids_of(inst, PC::UnscheduledElective);
    AddElectivePool pool(inst, waiting);
    REQUIRE(pool.size() == waiting.size());
    Instant now = std::uniform_real_distribution<double>(0.0, 6.0)(rng);
    std::vector<PatientId> mandatory;
    for (const auto& p : inst.patients)
      if (p.mandatory()) mandatory.push_back(p.id);
    auto st = SchedulingState::empty(inst, now);
    open_schedule(mandatory, st, inst);
    // Fill greedily with both selectors in lockstep.
    while (true) {
      auto plain = select_add_elective(waiting, st, inst, now);
      auto pooled = pool.select(inst, st.cursors, now, std::nullopt);
      REQUIRE(plain.has_value() == pooled.has_value());
      if (!plain) break;
      REQUIRE(*plain == pooled->first);
      const auto& p = inst.patient(*plain);
      auto c = pooled->second;
      REQUIRE(c.start >= std::max(now, inst.horizon.tau) + p.notice - 1e-12);
      REQUIRE(c.start + p.duration <= inst.horizon.lambda + 1e-9);
      st.place(make_placement(p, c.room, c.surgeon, c.start), inst);
      pool.erase(p);
      waiting.erase(std::find(waiting.begin(), waiting.end(), p.id));
    }
    // Per-room selection too.
    for (const auto& r : inst.rooms) {
      if (!r.working) continue;
      auto pooled = pool.select(inst, st.cursors, now, r.id);
      auto plain = select_add_elective(waiting, st, inst, now, r.id);
      REQUIRE(plain.has_value() == pooled.has_value());
      if (plain) REQUIRE(*plain == pooled->first);
    }
    REQUIRE(check_feasibility(st.schedule, inst).ok());
  }
}

TEST_CASE("pool insert keeps order and ignores duplicates") {
  auto inst = basic(1, 1);
  for (int i = 0; i < 3; ++i) {
    auto& p = add(inst, PC::UnscheduledElective, 1);
    p.due_date = 10 - i;
  }
  std::vector<PatientId> none;
  AddElectivePool pool(inst, none);
  pool.insert(inst.patient(0), inst);
  pool.insert(inst.patient(2), inst);
  pool.insert(inst.patient(2), inst);
  CHECK(pool.size() == 2);
  auto st = SchedulingState::empty(inst, 0.0);
  auto pick = pool.select(inst, st.cursors, 0.0, std::nullopt);
  REQUIRE(pick);
  CHECK(pick->first == 2);
}
