#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "fixtures.hpp"
#include "scsp/json_io.hpp"

using namespace scsp;
using scsp::fixture::add;
using scsp::fixture::basic;
using PC = PatientClass;

namespace {

Placement pl(PatientId p, Instant s, Instant e, RoomId r = 0, SurgeonId h = 0) {
  return Placement{p, r, h, s, e};
}

bool naive_intersect(double a0, double a1, double b0, double b1) {
  // Measure of the intersection of two half-open intervals.
  return std::min(a1, b1) - std::max(a0, b0) > 0.0;
}

}  // namespace

TEST_CASE("overlap examples") {
  CHECK(overlaps(pl(0, 2, 4), pl(1, 3, 5)));
  CHECK_FALSE(overlaps(pl(0, 2, 4), pl(1, 4, 6)));
  CHECK(overlaps(pl(0, 0, 10), pl(1, 3, 4)));
  CHECK_THROWS_AS(overlaps(pl(0, 1, 2), pl(0, 1, 2)), std::invalid_argument);
}

TEST_CASE("overlap matches interval intersection and is symmetric") {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> q(0, 48);
  for (int i = 0; i < 10000; ++i) {
    double a0 = q(rng) / 4.0, b0 = q(rng) / 4.0;
    double a1 = a0 + (1 + q(rng)) / 8.0, b1 = b0 + (1 + q(rng)) / 8.0;
    auto a = pl(0, a0, a1), b = pl(1, b0, b1);
    REQUIRE(overlaps(a, b) == naive_intersect(a0, a1, b0, b1));
    REQUIRE(overlaps(a, b) == overlaps(b, a));
  }
}

TEST_CASE("horizon validation") {
  HorizonParams h;
  CHECK_NOTHROW(h.validate());
  h.lambda = 30;
  CHECK_THROWS_AS(h.validate(), ConfigError);
  h = {};
  h.big_m = 10;
  CHECK_THROWS_AS(h.validate(), ConfigError);
}

TEST_CASE("feasibility: room double booking") {
  auto inst = basic(1, 2);
  add(inst, PC::ScheduledElective, 2, {0});
  add(inst, PC::ScheduledElective, 2, {1});
  for (auto& p : inst.patients) p.setup = p.cleanup = 0;
  Schedule s(2);
  s.place(pl(0, 0, 2, 0, 0));
  s.place(pl(1, 1, 3, 0, 1));
  auto rep = check_feasibility(s, inst);
  CHECK(rep.has(24));
  CHECK_FALSE(rep.has(23));
}

TEST_CASE("feasibility: excluded non-elective") {
  auto inst = basic(1, 1);
  add(inst, PC::NonElective, 1);
  Schedule s(1);
  auto rep = check_feasibility(s, inst);
  REQUIRE(rep.violations.size() == 1);
  CHECK(rep.violations[0].constraint == 32);
}

TEST_CASE("feasibility: room gap between consecutive surgeries") {
  auto inst = basic(1, 2);
  add(inst, PC::ScheduledElective, 2, {0});
  add(inst, PC::ScheduledElective, 1, {1});
  Schedule ok(2);
  ok.place(pl(0, 0, 2, 0, 0));
  ok.place(pl(1, 2.5, 3.5, 0, 1));
  CHECK(check_feasibility(ok, inst).ok());
  Schedule bad(2);
  bad.place(pl(0, 0, 2, 0, 0));
  bad.place(pl(1, 2.4, 3.4, 0, 1));
  auto rep = check_feasibility(bad, inst);
  CHECK(rep.has(27));
  CHECK(rep.violations.size() == 1);
}

TEST_CASE("feasibility: every single-constraint breach is reported") {
  auto inst = basic(2, 2, 2);
  inst.rooms[1].equipped_specialties = {1};
  inst.rooms[0].release_time = 1.0;
  inst.surgeons[1].release_time = 2.0;
  add(inst, PC::ScheduledElective, 1, {0});
  auto& ne = add(inst, PC::NonElective, 1, {1});
  ne.arrival = 5.0;
  auto& ue = add(inst, PC::UnscheduledElective, 2, {0});
  ue.notice = 2.0;

  auto violations_of = [&](std::vector<Placement> pls) {
    Schedule s(inst.patients.size());
    for (auto& x : pls) s.place(x);
    return check_feasibility(s, inst);
  };
  // baseline feasible: p0 room0 [1,2], p1 room0 [5,6] surgeon1, p2 room0 [6.5,8.5]
  auto base = std::vector<Placement>{pl(0, 1, 2, 0, 0), pl(1, 5, 6, 0, 1), pl(2, 6.5, 8.5, 0, 0)};
  CHECK(violations_of(base).ok());

  auto v = base;
  v[0] = pl(0, 0.5, 1.5, 0, 0);
  CHECK(violations_of(v).has(19));
  v = base;
  v[1] = pl(1, 5, 6, 0, 0);
  v[1].surgeon = 1;
  inst.surgeons[1].release_time = 5.5;
  CHECK(violations_of(v).has(20));
  inst.surgeons[1].release_time = 2.0;
  v = base;
  v[0].end = 2.5;
  CHECK(violations_of(v).has(25));
  v = base;
  v[0].room = 1;
  CHECK(violations_of(v).has(28));
  v = base;
  v[0].surgeon = 1;
  CHECK(violations_of(v).has(29));
  v = base;
  v[1] = pl(1, 4, 5, 0, 1);
  CHECK(violations_of(v).has(34));
  v = base;
  v[2] = pl(2, 8.5, 10.5, 0, 0);
  CHECK(violations_of(v).has(35));
  v = base;
  v[2] = pl(2, 1.5, 3.5, 1, 0);
  inst.rooms[1].equipped_specialties = {0, 1};
  CHECK(violations_of(v).has(33));
  inst.rooms[1].equipped_specialties = {1};
  inst.rooms[0].working = false;
  CHECK(violations_of(base).has(18));
  inst.rooms[0].working = true;
  inst.horizon.tau = 1.5;
  CHECK(violations_of(base).has(31));
}

TEST_CASE("feasibility: dangling references are structural") {
  auto inst = basic(1, 1);
  add(inst, PC::ScheduledElective, 1);
  Schedule s(1);
  s.place(pl(0, 0, 1, 3, 0));
  CHECK_THROWS_AS(check_feasibility(s, inst), StructuralError);
  Schedule wrong(5);
  CHECK_THROWS_AS(check_feasibility(wrong, inst), StructuralError);
  CHECK_THROWS_AS(s.place(pl(7, 0, 1)), StructuralError);
}

TEST_CASE("earliest_append_start examples") {
  auto inst = basic(1, 1);
  add(inst, PC::ScheduledElective, 3);
  add(inst, PC::ScheduledElective, 1);
  auto& ne = add(inst, PC::NonElective, 1);
  ne.arrival = 11.0;
  Schedule s(3);
  CHECK(earliest_append_start(inst.patient(0), inst.surgeon(0), inst.room(0), s, inst, 0.0) == 0.0);
  s.place(make_placement(inst.patient(0), 0, 0, 0.0));
  CHECK(earliest_append_start(inst.patient(1), inst.surgeon(0), inst.room(0), s, inst, 0.0) ==
        doctest::Approx(3.5));
  CHECK(earliest_append_start(inst.patient(2), inst.surgeon(0), inst.room(0), s, inst, 0.0) ==
        11.0);
}

TEST_CASE("earliest_append_start is tight") {
  std::mt19937_64 rng(5);
  fixture::RandomShape shape;
  shape.patients = 6;
  shape.surgeons = 3;
  int checked = 0;
  for (int trial = 0; trial < 300; ++trial) {
    auto inst = fixture::random_instance(rng, shape);
    auto sched = fixture::random_feasible_schedule(inst, rng);
    REQUIRE(check_feasibility(sched, inst).ok());
    // Take one placed patient out and append it again on every combination.
    for (const auto& p : inst.patients) {
      if (!sched.included(p.id)) continue;
      Schedule rest = sched;
      rest.remove(p.id);
      for (RoomId r : suitable_rooms(inst, p.specialty)) {
        for (SurgeonId h : p.eligible_surgeons) {
          Instant z = earliest_append_start(p, inst.surgeon(h), inst.room(r), rest, inst, kNegInf);
          if (p.cls == PC::UnscheduledElective && z + p.duration > inst.horizon.lambda) continue;
          Schedule at = rest;
          at.place(make_placement(p, r, h, z));
          REQUIRE(check_feasibility(at, inst).ok());
          Schedule early = rest;
          early.place(make_placement(p, r, h, z - 1e-6));
          REQUIRE_FALSE(check_feasibility(early, inst).ok());
          ++checked;
        }
      }
    }
  }
  CHECK(checked > 1000);
}

TEST_CASE("earliest_gap_start fills holes") {
  auto inst = basic(1, 1);
  add(inst, PC::ScheduledElective, 1);
  add(inst, PC::ScheduledElective, 1);
  add(inst, PC::ScheduledElective, 1);
  for (auto& p : inst.patients) p.setup = p.cleanup = 0;
  Schedule s(3);
  s.place(pl(0, 0, 1));
  s.place(pl(1, 3, 4));
  CHECK(earliest_gap_start(inst.patient(2), 0, 0, s, inst, 0.0) == 1.0);
  CHECK(earliest_gap_start(inst.patient(2), 0, 0, s, inst, 2.5) == 4.0);
}

TEST_CASE("schedule container") {
  Schedule s(3);
  s.place(pl(2, 1, 2));
  s.place(pl(0, 0, 1));
  CHECK(s.size() == 2);
  CHECK(s.included(2));
  CHECK_FALSE(s.included(1));
  CHECK_THROWS_AS(s.place(pl(2, 5, 6)), StructuralError);
  s.remove(2);
  CHECK_FALSE(s.included(2));
  CHECK(s.find(0)->end == 1);
  CHECK(s.anaesthetised(0, 0.5));
  CHECK_FALSE(s.anaesthetised(0, 0.0));
  s.place(pl(1, 5, 6));
  auto sorted = s.sorted();
  CHECK(sorted.front().patient == 0);
  CHECK_THROWS_AS(s.resize(1), StructuralError);
}

TEST_CASE("due dates") {
  CHECK(due_date_for(1, 10) == 20);
  CHECK(due_date_for(2, 100) == -10);
  CHECK(category_limit_days(3) == 360);
  CHECK_THROWS_AS(category_limit_days(4), ConfigError);
}

TEST_CASE("instance validation") {
  auto inst = basic(1, 1);
  add(inst, PC::ScheduledElective, 1);
  inst.mss_assignment[0] = {0, 0};
  CHECK_NOTHROW(inst.validate());
  inst.patients[0].eligible_surgeons = {3};
  CHECK_THROWS_AS(inst.validate(), StructuralError);
  inst.patients[0].eligible_surgeons = {0};
  inst.mss_assignment[0] = {2, 0};
  CHECK_THROWS_AS(inst.validate(), StructuralError);
  inst.mss_assignment.clear();
  inst.patients[0].duration = 0;
  CHECK_THROWS_AS(inst.validate(), StructuralError);
}

TEST_CASE("instance and schedule JSON round trip") {
  std::mt19937_64 rng(3);
  auto inst = fixture::random_instance(rng, {});
  inst.patients[0].cancelled = true;
  auto back = instance_from_json(Json::parse(to_json(inst).dump()));
  CHECK(to_json(back).dump() == to_json(inst).dump());
  CHECK(back.patients[0].cancelled);
  auto s = fixture::random_feasible_schedule(inst, rng);
  auto sb = schedule_from_json(Json::parse(to_json(s).dump()), inst.patients.size());
  CHECK(sb == s);
  Json bad = to_json(inst);
  bad["schema"] = "other";
  CHECK_THROWS_AS(instance_from_json(bad), StructuralError);
}
