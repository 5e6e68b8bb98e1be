#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numeric>
#include <set>

#include "scsp/instancegen.hpp"

using namespace scsp;

namespace {

WeekInstance week(GenParams p, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return generate_week(std::move(p), rng);
}

GenParams small() {
  GenParams p;
  p.waiting_list_mean = 60;
  return p;
}

struct Moments {
  double mean = 0, var = 0;
};

Moments moments(const std::vector<double>& xs) {
  Moments m;
  m.mean = std::accumulate(xs.begin(), xs.end(), 0.0) / xs.size();
  for (double x : xs) m.var += (x - m.mean) * (x - m.mean);
  m.var /= xs.size() - 1;
  return m;
}

}  // namespace

TEST_CASE("same seed gives the same week") {
  auto a = to_json(week(GenParams{}, 5)).dump();
  auto b = to_json(week(GenParams{}, 5)).dump();
  CHECK(a == b);
  CHECK(a != to_json(week(GenParams{}, 6)).dump());
}

TEST_CASE("week JSON round trip") {
  auto w = week(small(), 2);
  auto text = to_json(w).dump();
  auto back = week_from_json(Json::parse(text));
  CHECK(to_json(back).dump() == text);
  Json bad = Json::parse(text);
  bad.erase("mss");
  CHECK_THROWS_AS(week_from_json(bad), StructuralError);
}

TEST_CASE("generator parameters JSON") {
  GenParams p;
  p.normalise();
  p.cancellation_prob = 0.1;
  auto back = gen_params_from_json(Json::parse(to_json(p).dump()));
  CHECK(to_json(back).dump() == to_json(p).dump());
  Json j = to_json(p);
  j["breakdown_prob"] = 1.5;
  CHECK_THROWS_AS(gen_params_from_json(j).normalise(), ConfigError);
  GenParams neg;
  neg.nonelective_requests_per_week = -1;
  CHECK_THROWS_AS(neg.normalise(), ConfigError);
  GenParams flat;
  flat.normalise();
  flat.elective_durations[0].spread = 0.0;
  flat.elective_durations[0].noise = -0.1;
  CHECK_THROWS_AS(flat.normalise(), ConfigError);
}

TEST_CASE("no disruption probability means no disruptions") {
  auto p = small();
  p.cancellation_prob = 0;
  p.breakdown_prob = 0;
  for (std::uint64_t s = 0; s < 20; ++s) {
    auto w = week(p, s);
    for (const auto& c : w.cancellations) REQUIRE(c.empty());
    for (const auto& b : w.breakdowns) REQUIRE(b.empty());
  }
  p.cancellation_prob = 1;
  auto w = week(p, 1);
  for (int d = 0; d < w.days(); ++d)
    CHECK(w.cancellations[static_cast<std::size_t>(d)].size() ==
          w.mss[static_cast<std::size_t>(d)].size());
}

TEST_CASE("generated patients are well formed") {
  for (std::uint64_t s = 0; s < 5; ++s) {
    auto w = week(GenParams{}, s);
    for (const auto& p : w.base.patients) {
      REQUIRE(p.duration > 0);
      REQUIRE(p.setup > 0);
      REQUIRE(p.cleanup > 0);
      REQUIRE_FALSE(p.eligible_surgeons.empty());
      REQUIRE(p.days_waiting >= 0);
      if (p.cls != PatientClass::NonElective)
        REQUIRE(p.due_date == due_date_for(p.urgency_category, p.days_waiting));
    }
    for (const auto& r : w.elective_requests) {
      REQUIRE(r.day >= 0);
      REQUIRE(r.day < kWeekdays);
      REQUIRE(r.at >= 0);
      REQUIRE(r.at < 24);
    }
    for (const auto& r : w.nonelective_requests) {
      REQUIRE(r.day < kDaysPerWeek);
      REQUIRE(w.base.patient(r.patient).cls == PatientClass::NonElective);
    }
    for (int d = kWeekdays; d < kDaysPerWeek; ++d)
      REQUIRE(w.mss[static_cast<std::size_t>(d)].empty());
    // No patient planned twice, and a surgeon works one room per day.
    std::set<PatientId> planned;
    for (const auto& day : w.mss) {
      std::map<SurgeonId, RoomId> room_of;
      for (const auto& [pid, e] : day) {
        REQUIRE(planned.insert(pid).second);
        auto [it, fresh] = room_of.emplace(e.surgeon, e.room);
        REQUIRE(it->second == e.room);
        (void)fresh;
        REQUIRE(w.base.room(e.room).equipped_for(w.base.patient(pid).specialty));
      }
    }
    CHECK(w.base.rooms.size() == 21);
  }
}

TEST_CASE("realised durations are lognormal around the expected value") {
  GenParams p;
  p.normalise();
  p.elective_durations[3].noise = 0.5;
  std::mt19937_64 rng(7);
  std::vector<double> xs(10000);
  for (auto& x : xs) x = realize_duration(2.0, p, 3, PatientClass::ScheduledElective, rng);
  std::nth_element(xs.begin(), xs.begin() + 5000, xs.end());
  CHECK(std::abs(xs[5000] / 2.0 - 1.0) < 0.05);

  std::vector<double> logs(100000);
  for (auto& x : logs) {
    double v = realize_duration(2.0, p, 3, PatientClass::ScheduledElective, rng);
    REQUIRE(v > 0);
    x = std::log(v);
  }
  auto m = moments(logs);
  double skew = 0;
  for (double x : logs) skew += std::pow(x - m.mean, 3);
  skew /= logs.size() * std::pow(m.var, 1.5);
  CHECK(std::abs(skew) < 0.1);
  CHECK(std::sqrt(m.var) == doctest::Approx(0.5).epsilon(0.02));

  DurationModel degenerate{2.0, 0.3, 0.0};
  CHECK(realize_duration(1.75, degenerate, rng) == 1.75);
  DurationModel tiny{2.0, 0.3, 1e-12};
  CHECK(realize_duration(1.75, tiny, rng) == doctest::Approx(1.75));
  CHECK_THROWS_AS(realize_duration(0.0, degenerate, rng), ConfigError);
}

TEST_CASE("waiting-list size is Poisson around its mean") {
  GenParams p;
  const double mu = p.waiting_list_mean;
  // Waiting-list sizes of five observed weeks.
  for (double x : {2759.0, 2768.0, 2780.0, 2791.0, 2802.0}) CHECK(std::abs(x - mu) <= 3 * std::sqrt(mu));
  std::vector<double> sizes;
  for (std::uint64_t s = 0; s < 60; ++s) sizes.push_back(week(p, 100 + s).waiting_list_size);
  auto m = moments(sizes);
  CHECK(std::abs(m.mean - mu) <= 3 * std::sqrt(mu / sizes.size()));
  for (double x : sizes) CHECK(std::abs(x - mu) <= 4 * std::sqrt(mu));
}

TEST_CASE("request streams have Poisson weekly counts") {
  auto p = small();
  std::vector<double> ne, el;
  for (std::uint64_t s = 0; s < 400; ++s) {
    auto w = week(p, 1000 + s);
    ne.push_back(static_cast<double>(w.nonelective_requests.size()));
    el.push_back(static_cast<double>(w.elective_requests.size()));
  }
  auto mn = moments(ne), me = moments(el);
  CHECK(std::abs(mn.mean - 113.0) <= 3 * std::sqrt(mn.var / ne.size()));
  CHECK(std::abs(me.mean - 360.0) <= 3 * std::sqrt(me.var / el.size()));
  CHECK(mn.var / mn.mean >= 0.75);
  CHECK(mn.var / mn.mean <= 1.25);
}

TEST_CASE("stream seeds differ per index and are reproducible") {
  std::set<std::uint64_t> seen;
  for (std::uint64_t i = 0; i < 1000; ++i) REQUIRE(seen.insert(stream_seed(42, i)).second);
  CHECK(stream_seed(42, 3) == stream_seed(42, 3));
  CHECK(stream_seed(42, 3) != stream_seed(43, 3));
}
