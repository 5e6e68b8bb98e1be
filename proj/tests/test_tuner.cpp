#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "scsp/tuner.hpp"

using namespace scsp;
using US = UpdateStrategy;
using DK = DisruptionKind;

namespace {

TunerConfig small_config() {
  TunerConfig c;
  c.n_runs = 3;
  c.max_iterations = 12;
  c.seed = 5;
  return c;
}

GenParams calibration() {
  GenParams p;
  p.waiting_list_mean = 800;
  return p;
}

int cells_differing(const ReactionPolicy& a, const ReactionPolicy& b, DK* which = nullptr) {
  int n = 0;
  for (US s : kAllStrategies)
    for (DK k : kAllKinds)
      if (a.has(s, k) != b.has(s, k) || (a.has(s, k) && a.vector(s, k) != b.vector(s, k))) {
        ++n;
        if (which) *which = k;
      }
  return n;
}

}  // namespace

TEST_CASE("perturbation keeps distributions legal") {
  auto pol = ReactionPolicy::tuned_defaults();
  std::mt19937_64 rng(4);
  for (int i = 0; i < 10000; ++i) {
    DK k = kAllKinds[static_cast<std::size_t>(i) % kAllKinds.size()];
    US s = kAllStrategies[static_cast<std::size_t>(i / 7) % kAllStrategies.size()];
    auto out = perturb(pol, s, k, 1.0, rng);
    const auto& v = out.vector(s, k);
    double sum = 0;
    for (double x : v) {
      REQUIRE(x >= 0.0);
      sum += x;
    }
    REQUIRE(std::abs(sum - 1.0) <= 1e-9);
    REQUIRE(out.probability(s, DK::D2, Reaction::R0) == 0.0);
    REQUIRE(out.probability(s, DK::D4, Reaction::R0) == 0.0);
    DK changed = k;
    REQUIRE(cells_differing(pol, out, &changed) <= 1);
    REQUIRE(changed == k);
    pol = out;
  }
}

TEST_CASE("tiny perturbation changes nothing measurable") {
  auto pol = ReactionPolicy::tuned_defaults();
  std::mt19937_64 rng(1);
  auto out = perturb(pol, US::UA, DK::D3, 1e-12, rng);
  const auto& a = pol.vector(US::UA, DK::D3);
  const auto& b = out.vector(US::UA, DK::D3);
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(b[i] == doctest::Approx(a[i]).epsilon(1e-9));
  CHECK_THROWS_AS(perturb(pol, US::UA, DK::D3, 0.0, rng), ConfigError);
  CHECK_THROWS_AS(perturb(pol, US::UA, DK::D3, 1.5, rng), ConfigError);
}

TEST_CASE("a do-nothing vector can be knocked off its corner") {
  auto pol = ReactionPolicy::prior();
  std::mt19937_64 rng(2);
  int moved = 0;
  for (int i = 0; i < 200; ++i)
    moved += perturb(pol, US::UP1, DK::D1, 0.2, rng).probability(US::UP1, DK::D1, Reaction::R0) < 1.0;
  CHECK(moved > 0);
}

TEST_CASE("configuration validation and JSON") {
  TunerConfig c;
  CHECK_NOTHROW(c.validate());
  c.n_runs = 0;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = {};
  c.max_iterations = 0;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = {};
  c.perturbation_scale = 0;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c.perturbation_scale = 1.01;
  CHECK_THROWS_AS(c.validate(), ConfigError);

  auto s = small_config();
  s.strategy = US::UA;
  auto back = tuner_config_from_json(Json::parse(to_json(s).dump()));
  CHECK(to_json(back).dump() == to_json(s).dump());
  Json bad = to_json(s);
  bad["n_runs"] = "three";
  CHECK_THROWS_AS(tuner_config_from_json(bad), ConfigError);
  bad = to_json(s);
  bad["strategy"] = "UP9";
  CHECK_THROWS_AS(tuner_config_from_json(bad), ConfigError);
}

TEST_CASE("a single iteration returns the first evaluated policy") {
  auto c = small_config();
  c.max_iterations = 1;
  std::mt19937_64 rng(3);
  auto res = tune(c, calibration(), rng);
  REQUIRE(res.trace.size() == 1);
  CHECK(res.trace[0].accepted);
  CHECK(res.trace[0].mean_utilisation > 0);
  CHECK(res.best == ReactionPolicy::prior());
  CHECK_FALSE(res.converged);
  // The score is the mean over the configured replication seeds.
  auto direct = run_replications(calibration(), ReactionPolicy::prior(), c.strategy, c.n_runs, c.seed);
  CHECK(res.trace[0].mean_utilisation == direct.utilisation.mean);
}

TEST_CASE("hill climbing trace") {
  auto c = small_config();
  std::mt19937_64 rng(3);
  auto res = tune(c, calibration(), rng);
  REQUIRE_FALSE(res.trace.empty());
  CHECK(res.trace.size() <= static_cast<std::size_t>(c.max_iterations));
  CHECK(res.trace[0].accepted);
  CHECK(res.trace[0].candidate == ReactionPolicy::prior());

  double best = 0.0;
  ReactionPolicy incumbent = ReactionPolicy::prior();
  for (std::size_t i = 0; i < res.trace.size(); ++i) {
    const auto& st = res.trace[i];
    CHECK(st.iteration == static_cast<int>(i));
    if (i > 0) {
      DK changed = st.kind;
      CHECK(cells_differing(incumbent, st.candidate, &changed) <= 1);
      CHECK(changed == st.kind);
    }
    CHECK(st.accepted == (st.mean_utilisation > best));
    if (st.accepted) {
      best = st.mean_utilisation;
      incumbent = st.candidate;
    }
    CHECK(st.best_utilisation == best);
    if (i > 0) CHECK(st.best_utilisation >= res.trace[i - 1].best_utilisation);
    // After a rejection the next candidate perturbs the following kind.
    if (i > 0 && !res.trace[i - 1].accepted) {
      auto prev = static_cast<int>(res.trace[i - 1].kind);
      CHECK(static_cast<int>(st.kind) == prev % 7 + 1);
    }
  }
  CHECK(res.best == incumbent);

  std::mt19937_64 again(3);
  auto res2 = tune(c, calibration(), again);
  CHECK(tuning_trace_csv(res2.trace) == tuning_trace_csv(res.trace));
  CHECK(res2.best == res.best);
}

TEST_CASE("patience stops the search") {
  auto c = small_config();
  c.patience = 1;
  c.max_iterations = 50;
  std::mt19937_64 rng(8);
  auto res = tune(c, calibration(), rng);
  REQUIRE(res.converged);
  CHECK_FALSE(res.trace.back().accepted);
  for (std::size_t i = 0; i + 1 < res.trace.size(); ++i) CHECK(res.trace[i].accepted);
}

TEST_CASE("trace CSV layout") {
  TuningStep s;
  s.iteration = 2;
  s.kind = DK::D4;
  s.mean_utilisation = 1.5;
  s.accepted = true;
  s.best_utilisation = 1.5;
  CHECK(tuning_trace_csv({s}) ==
        "iteration,kind,mean_utilisation,accepted,best_utilisation\n2,D4,1.500000,1,1.500000\n");
}
