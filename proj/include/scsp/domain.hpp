#pragma once

#include <cstddef>
#include <limits>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace scsp {

/// Time in hours since 08:00 of the scheduling day. May be negative for
/// pre-opening urgent starts and may exceed 24 for surgeries that run past
/// the end of the simulated day.
using Instant = double;
using Hours = double;

using PatientId = int;
using RoomId = int;
using SurgeonId = int;
using SpecialtyId = int;

inline constexpr double kTimeEps = 1e-9;
inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();

class ScspError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Dangling or otherwise malformed references, as opposed to a constraint
/// violation on well-formed data.
class StructuralError : public ScspError {
 public:
  using ScspError::ScspError;
};

class ConfigError : public ScspError {
 public:
  using ScspError::ScspError;
};

/// No (eligible surgeon x suitable working room) pair exists for a patient.
class UnplaceableError : public ScspError {
 public:
  UnplaceableError(PatientId p, const std::string& what)
      : ScspError(what), patient(p) {}
  PatientId patient;
};

struct HorizonParams {
  Instant tau = 0.0;           // schedule start
  Hours lambda = 10.0;         // standard opening length
  Hours lambda_star = 24.0;    // hours in a day
  double big_m = 24.0;

  void validate() const;
};

enum class PatientClass { ScheduledElective, UnscheduledElective, NonElective };

const char* to_string(PatientClass c);
PatientClass patient_class_from_string(const std::string& s);

struct Patient {
  PatientId id = 0;
  PatientClass cls = PatientClass::ScheduledElective;
  SpecialtyId specialty = 0;
  Hours duration = 1.0;  // expected surgery duration from start of anaesthesia
  Hours setup = 0.25;
  Hours cleanup = 0.25;
  Hours notice = 0.0;    // unscheduled electives only
  Instant arrival = 0.0; // non-electives only
  std::vector<SurgeonId> eligible_surgeons;
  int urgency_category = 3;
  int days_waiting = 0;
  int due_date = 0;  // days from today, negative when overdue
  bool cancelled = false;  // day-of-surgery cancellation, never operated

  bool eligible(SurgeonId h) const;
  bool mandatory() const { return !cancelled && cls != PatientClass::UnscheduledElective; }
  bool elective() const { return cls != PatientClass::NonElective; }
  Hours footprint() const { return setup + duration + cleanup; }
};

struct Surgeon {
  SurgeonId id = 0;
  Instant release_time = 0.0;
};

struct OperatingRoom {
  RoomId id = 0;
  bool working = true;
  Instant release_time = 0.0;
  std::vector<SpecialtyId> equipped_specialties;
  std::vector<SpecialtyId> reserved_for;

  bool equipped_for(SpecialtyId s) const;
  bool reserved_for_specialty(SpecialtyId s) const;
};

struct MssEntry {
  RoomId room = 0;
  SurgeonId surgeon = 0;
};

struct Instance {
  HorizonParams horizon;
  std::vector<OperatingRoom> rooms;
  std::vector<Surgeon> surgeons;
  int specialties = 1;
  std::vector<Patient> patients;
  std::map<PatientId, MssEntry> mss_assignment;

  /// Throws StructuralError on non-dense ids, dangling references or an MSS
  /// entry that references an unsuitable room or ineligible surgeon.
  void validate() const;

  const Patient& patient(PatientId p) const { return patients.at(static_cast<std::size_t>(p)); }
  const OperatingRoom& room(RoomId r) const { return rooms.at(static_cast<std::size_t>(r)); }
  const Surgeon& surgeon(SurgeonId h) const { return surgeons.at(static_cast<std::size_t>(h)); }
};

struct Placement {
  PatientId patient = 0;
  RoomId room = 0;
  SurgeonId surgeon = 0;
  Instant start = 0.0;
  Instant end = 0.0;

  bool operator==(const Placement&) const = default;
};

/// One optional placement per patient; a patient is included iff it has a
/// placement. Placements are kept compact so iteration cost scales with the
/// number of scheduled surgeries, not with the waiting list.
class Schedule {
 public:
  Schedule() = default;
  explicit Schedule(std::size_t patient_count);

  std::size_t patient_count() const { return index_.size(); }
  void resize(std::size_t patient_count);

  bool included(PatientId p) const;
  const Placement* find(PatientId p) const;
  std::span<const Placement> placements() const { return placements_; }
  std::size_t size() const { return placements_.size(); }

  void place(const Placement& pl);
  void remove(PatientId p);
  void update(const Placement& pl);

  /// Anaesthesia begins at the surgery start; a placement whose start is
  /// strictly before `now` can no longer be moved.
  bool anaesthetised(PatientId p, Instant now) const;

  /// Placements ordered by (start, patient id).
  std::vector<Placement> sorted() const;

  bool operator==(const Schedule& other) const;

 private:
  std::vector<Placement> placements_;
  std::vector<int> index_;
};

bool overlaps(const Placement& a, const Placement& b);

struct Violation {
  int constraint = 0;
  PatientId patient = -1;
  PatientId other = -1;
  std::string detail;
};

struct FeasibilityReport {
  std::vector<Violation> violations;

  bool ok() const { return violations.empty(); }
  bool has(int constraint) const;
  std::string summary() const;
};

FeasibilityReport check_feasibility(const Schedule& schedule, const Instance& instance);

/// Per-room and per-surgeon "free from" times: the latest cleanup end among
/// the placements on each timeline.
struct Cursors {
  std::vector<Instant> room;
  std::vector<Instant> surgeon;

  Cursors() = default;
  Cursors(std::size_t rooms, std::size_t surgeons);
  static Cursors from(const Schedule& schedule, const Instance& instance);
  void occupy(const Placement& pl, const Patient& patient);
};

/// Lower bound on Z from release times, class rules and `now`, ignoring the
/// existing placements.
Instant start_lower_bound(const Patient& patient, const Surgeon& surgeon,
                          const OperatingRoom& room, const HorizonParams& horizon,
                          Instant now);

Instant earliest_append_start(const Patient& patient, const Surgeon& surgeon,
                              const OperatingRoom& room, const Cursors& cursors,
                              const HorizonParams& horizon, Instant now);

Instant earliest_append_start(const Patient& patient, const Surgeon& surgeon,
                              const OperatingRoom& room, const Schedule& schedule,
                              const Instance& instance, Instant now);

/// Smallest Z >= lower_bound at which the patient fits into the room and
/// surgeon timelines without conflicting with any existing placement,
/// including gaps between placements.
Instant earliest_gap_start(const Patient& patient, SurgeonId surgeon, RoomId room,
                           const Schedule& schedule, const Instance& instance,
                           Instant lower_bound);

Placement make_placement(const Patient& patient, RoomId room, SurgeonId surgeon,
                         Instant start);

/// Suitable working rooms for a specialty, ascending id.
std::vector<RoomId> suitable_rooms(const Instance& instance, SpecialtyId s);

/// Due date in days: category limit minus days already waited.
int due_date_for(int urgency_category, int days_waiting);
int category_limit_days(int urgency_category);

}  // namespace scsp
