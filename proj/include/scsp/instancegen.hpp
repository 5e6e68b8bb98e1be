#pragma once

#include <array>
#include <cstdint>
#include <random>
#include <vector>

#include "scsp/domain.hpp"
#include "scsp/json_io.hpp"

namespace scsp {

/// Independent stream seed for replication or patient `i` of a run.
std::uint64_t stream_seed(std::uint64_t base, std::uint64_t i);

/// Lognormal duration model of one (specialty, class): expected durations
/// have median `median` and log-sd `spread` across patients; the realised
/// duration has the expected value as median and log-sd `noise`.
struct DurationModel {
  Hours median = 2.0;
  double spread = 0.35;
  double noise = 0.3;
};

struct WaitModel {
  double intercept = 0.0;
  double slope = 0.8;     // on the category's preferred maximum wait
  double noise_sd = 0.5;  // as a fraction of the preferred maximum
};

struct GenParams {
  std::uint64_t seed = 1;
  HorizonParams horizon;

  int rooms = 21;
  int reserved_rooms = 2;  // emergency rooms, equipped for every specialty
  int specialties = 27;
  int rooms_per_specialty = 3;
  int surgeons_per_specialty_min = 3;
  int surgeons_per_specialty_max = 5;

  double waiting_list_mean = 2780.0;
  std::vector<double> specialty_weights;         // empty = uniform
  std::array<double, 3> category_weights{0.2, 0.3, 0.5};
  double elective_requests_per_week = 360.0;
  double nonelective_requests_per_week = 113.0;

  std::vector<DurationModel> elective_durations;     // per specialty; empty = defaults
  std::vector<DurationModel> nonelective_durations;  // per specialty; empty = defaults
  Hours min_duration = 0.25;
  Hours max_duration = 6.0;

  std::array<WaitModel, 3> wait_models{};
  Hours setup = 0.25;
  Hours cleanup = 0.25;
  Hours notice = 2.0;

  double mss_fill = 0.9;  // share of the opening window planned per room
  double cancellation_prob = 0.05;
  double breakdown_prob = 0.008;

  /// Fills defaulted vectors and checks ranges; throws ConfigError.
  void normalise();
};

Json to_json(const GenParams& p);
GenParams gen_params_from_json(const Json& j);

struct Request {
  PatientId patient = 0;
  int day = 0;
  Instant at = 0.0;  // hours since the opening of `day`
};

inline constexpr int kDaysPerWeek = 7;
inline constexpr int kWeekdays = 5;

/// A week of demand and disruptions. `base` holds every patient with global
/// ids: the initial waiting list, then elective requests, then
/// non-elective arrivals (arrival is within its own day).
struct WeekInstance {
  Instance base;
  int waiting_list_size = 0;
  std::vector<Request> elective_requests;
  std::vector<Request> nonelective_requests;
  std::vector<std::map<PatientId, MssEntry>> mss;  // per day
  std::vector<std::vector<PatientId>> cancellations;
  std::vector<std::vector<RoomId>> breakdowns;
  std::uint64_t realisation_seed = 0;
  std::vector<DurationModel> elective_durations;
  std::vector<DurationModel> nonelective_durations;

  int days() const { return static_cast<int>(mss.size()); }
  void validate() const;
};

Json to_json(const WeekInstance& w);
WeekInstance week_from_json(const Json& j);

WeekInstance generate_week(GenParams params, std::mt19937_64& rng);

Hours realize_duration(Hours expected, const GenParams& params, SpecialtyId specialty,
                       PatientClass cls, std::mt19937_64& rng);
Hours realize_duration(Hours expected, const DurationModel& model, std::mt19937_64& rng);

}  // namespace scsp
