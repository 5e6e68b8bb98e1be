#pragma once

#include <optional>
#include <span>
#include <vector>

#include "scsp/domain.hpp"

namespace scsp {

struct SchedulingState {
  Schedule schedule;
  Cursors cursors;
  Instant now = 0.0;

  static SchedulingState empty(const Instance& instance, Instant now);
  static SchedulingState from(Schedule schedule, const Instance& instance, Instant now);

  void place(const Placement& pl, const Instance& instance);
  /// True when the cursors equal a from-scratch recomputation.
  bool consistent(const Instance& instance) const;
};

struct Choice {
  RoomId room = -1;
  SurgeonId surgeon = -1;
  Instant start = 0.0;
};

/// Minimum earliest_append_start over every (eligible surgeon x suitable
/// working room) pair; ties go to the lowest room id, then surgeon id.
/// `only_room` restricts the rooms considered.
std::optional<Choice> best_append(const Patient& patient, const Instance& instance,
                                  const Cursors& cursors, Instant now,
                                  std::optional<RoomId> only_room = std::nullopt);

struct BuildResult {
  Schedule schedule;
  std::vector<PatientId> unplaceable;
};

/// Initial daily schedule under a modified block policy:
///  1. each working room (ascending id) receives its MSS patients in
///     ascending due date, with their MSS surgeon;
///  2. MSS patients of broken-down rooms are treated as urgent and appended
///     to any suitable room;
///  3. waiting non-electives are drained per specialty into the rooms
///     reserved for that specialty, longest-waiting first, until every
///     reserved room's timeline reaches lambda;
///  4. leftovers go wherever their start (hence their wait) is smallest.
BuildResult block_schedule(const Instance& instance, std::span<const PatientId> nonelective_queue,
                           Instant now);

/// Greedy open scheduling: each patient in turn goes to the surgeon-room
/// pair with the earliest append start. Returns the patients that have no
/// suitable pair.
std::vector<PatientId> open_schedule(std::span<const PatientId> patients, SchedulingState& state,
                                     const Instance& instance);

/// Placement for an add-elective that respects notice from `now` and ends
/// by lambda, or nothing.
std::optional<Choice> add_elective_fit(const Patient& patient, const Instance& instance,
                                       const Cursors& cursors, Instant now,
                                       std::optional<RoomId> only_room = std::nullopt);

/// Priority order for add-electives: earliest due date, then longest wait,
/// then lowest id.
bool add_elective_before(const Patient& a, const Patient& b);

std::optional<PatientId> select_add_elective(std::span<const PatientId> waiting_list,
                                             const SchedulingState& state,
                                             const Instance& instance, Instant now,
                                             std::optional<RoomId> only_room = std::nullopt);

/// Waiting list indexed by specialty and kept in add-elective priority order,
/// for repeated selection against a changing schedule.
class AddElectivePool {
 public:
  AddElectivePool() = default;
  AddElectivePool(const Instance& instance, std::span<const PatientId> waiting);

  std::optional<std::pair<PatientId, Choice>> select(const Instance& instance,
                                                     const Cursors& cursors, Instant now,
                                                     std::optional<RoomId> only_room) const;
  void erase(const Patient& patient);
  void insert(const Patient& patient, const Instance& instance);
  std::size_t size() const;

 private:
  std::vector<std::vector<PatientId>> by_specialty_;
  std::vector<Hours> shortest_;  // lower bound on setup + duration per specialty
};

}  // namespace scsp
