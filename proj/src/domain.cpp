#include "scsp/domain.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace scsp {

void HorizonParams::validate() const {
  if (!std::isfinite(tau) || !std::isfinite(lambda) || !std::isfinite(lambda_star))
    throw ConfigError("horizon values must be finite");
  if (!(lambda > 0.0) || lambda > lambda_star)
    throw ConfigError("horizon requires 0 < lambda <= lambda_star");
  if (big_m < lambda_star) throw ConfigError("big_m must be at least lambda_star");
}

const char* to_string(PatientClass c) {
  switch (c) {
    case PatientClass::ScheduledElective: return "scheduled_elective";
    case PatientClass::UnscheduledElective: return "unscheduled_elective";
    case PatientClass::NonElective: return "non_elective";
  }
  return "?";
}

PatientClass patient_class_from_string(const std::string& s) {
  if (s == "scheduled_elective") return PatientClass::ScheduledElective;
  if (s == "unscheduled_elective") return PatientClass::UnscheduledElective;
  if (s == "non_elective") return PatientClass::NonElective;
  throw StructuralError("unknown patient class '" + s + "'");
}

bool Patient::eligible(SurgeonId h) const {
  return std::find(eligible_surgeons.begin(), eligible_surgeons.end(), h) !=
         eligible_surgeons.end();
}

bool OperatingRoom::equipped_for(SpecialtyId s) const {
  return std::find(equipped_specialties.begin(), equipped_specialties.end(), s) !=
         equipped_specialties.end();
}

bool OperatingRoom::reserved_for_specialty(SpecialtyId s) const {
  return std::find(reserved_for.begin(), reserved_for.end(), s) != reserved_for.end();
}

void Instance::validate() const {
  horizon.validate();
  for (std::size_t i = 0; i < rooms.size(); ++i) {
    const auto& r = rooms[i];
    if (r.id != static_cast<int>(i)) throw StructuralError("room ids must be dense");
    if (r.working && r.equipped_specialties.empty())
      throw StructuralError("working room " + std::to_string(r.id) + " has no specialties");
    for (auto s : r.equipped_specialties)
      if (s < 0 || s >= specialties) throw StructuralError("room references unknown specialty");
  }
  for (std::size_t i = 0; i < surgeons.size(); ++i)
    if (surgeons[i].id != static_cast<int>(i)) throw StructuralError("surgeon ids must be dense");
  for (std::size_t i = 0; i < patients.size(); ++i) {
    const auto& p = patients[i];
    if (p.id != static_cast<int>(i)) throw StructuralError("patient ids must be dense");
    if (p.specialty < 0 || p.specialty >= specialties)
      throw StructuralError("patient " + std::to_string(p.id) + " has unknown specialty");
    if (!(p.duration > 0.0) || p.setup < 0.0 || p.cleanup < 0.0)
      throw StructuralError("patient " + std::to_string(p.id) + " has invalid durations");
    if (p.eligible_surgeons.empty())
      throw StructuralError("patient " + std::to_string(p.id) + " has no eligible surgeon");
    for (auto h : p.eligible_surgeons)
      if (h < 0 || h >= static_cast<int>(surgeons.size()))
        throw StructuralError("patient " + std::to_string(p.id) + " references unknown surgeon");
  }
  for (const auto& [pid, entry] : mss_assignment) {
    if (pid < 0 || pid >= static_cast<int>(patients.size()))
      throw StructuralError("mss references unknown patient");
    const auto& p = patients[static_cast<std::size_t>(pid)];
    if (p.cls != PatientClass::ScheduledElective)
      throw StructuralError("mss entry for non-scheduled patient " + std::to_string(pid));
    if (entry.room < 0 || entry.room >= static_cast<int>(rooms.size()))
      throw StructuralError("mss references unknown room");
    if (entry.surgeon < 0 || entry.surgeon >= static_cast<int>(surgeons.size()))
      throw StructuralError("mss references unknown surgeon");
    if (!rooms[static_cast<std::size_t>(entry.room)].equipped_for(p.specialty))
      throw StructuralError("mss room unsuitable for patient " + std::to_string(pid));
    if (!p.eligible(entry.surgeon))
      throw StructuralError("mss surgeon ineligible for patient " + std::to_string(pid));
  }
}

// ---------------------------------------------------------------------------

Schedule::Schedule(std::size_t patient_count) : index_(patient_count, -1) {}

void Schedule::resize(std::size_t patient_count) {
  if (patient_count < index_.size())
    for (std::size_t p = patient_count; p < index_.size(); ++p)
      if (index_[p] >= 0) throw StructuralError("cannot shrink schedule below a placed patient");
  index_.resize(patient_count, -1);
}

bool Schedule::included(PatientId p) const {
  return p >= 0 && static_cast<std::size_t>(p) < index_.size() &&
         index_[static_cast<std::size_t>(p)] >= 0;
}

const Placement* Schedule::find(PatientId p) const {
  if (!included(p)) return nullptr;
  return &placements_[static_cast<std::size_t>(index_[static_cast<std::size_t>(p)])];
}

void Schedule::place(const Placement& pl) {
  if (pl.patient < 0 || static_cast<std::size_t>(pl.patient) >= index_.size())
    throw StructuralError("placement references unknown patient " + std::to_string(pl.patient));
  if (included(pl.patient))
    throw StructuralError("patient " + std::to_string(pl.patient) + " already placed");
  index_[static_cast<std::size_t>(pl.patient)] = static_cast<int>(placements_.size());
  placements_.push_back(pl);
}

void Schedule::remove(PatientId p) {
  if (!included(p)) return;
  auto at = static_cast<std::size_t>(index_[static_cast<std::size_t>(p)]);
  auto last = placements_.size() - 1;
  if (at != last) {
    placements_[at] = placements_[last];
    index_[static_cast<std::size_t>(placements_[at].patient)] = static_cast<int>(at);
  }
  placements_.pop_back();
  index_[static_cast<std::size_t>(p)] = -1;
}

void Schedule::update(const Placement& pl) {
  if (!included(pl.patient))
    throw StructuralError("patient " + std::to_string(pl.patient) + " is not placed");
  placements_[static_cast<std::size_t>(index_[static_cast<std::size_t>(pl.patient)])] = pl;
}

bool Schedule::anaesthetised(PatientId p, Instant now) const {
  const auto* pl = find(p);
  return pl != nullptr && pl->start < now;
}

std::vector<Placement> Schedule::sorted() const {
  std::vector<Placement> out(placements_.begin(), placements_.end());
  std::sort(out.begin(), out.end(), [](const Placement& a, const Placement& b) {
    return a.start != b.start ? a.start < b.start : a.patient < b.patient;
  });
  return out;
}

bool Schedule::operator==(const Schedule& other) const {
  if (index_.size() != other.index_.size() || placements_.size() != other.placements_.size())
    return false;
  for (const auto& pl : placements_) {
    const auto* o = other.find(pl.patient);
    if (o == nullptr || !(*o == pl)) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------

bool overlaps(const Placement& a, const Placement& b) {
  if (a.patient == b.patient)
    throw std::invalid_argument("overlaps() requires placements of distinct patients");
  return a.start < b.end && b.start < a.end;
}

bool FeasibilityReport::has(int constraint) const {
  return std::any_of(violations.begin(), violations.end(),
                     [&](const Violation& v) { return v.constraint == constraint; });
}

std::string FeasibilityReport::summary() const {
  std::ostringstream os;
  os << violations.size() << " violation(s)";
  std::size_t shown = 0;
  for (const auto& v : violations) {
    if (shown++ == 8) {
      os << "; ...";
      break;
    }
    os << "; (" << v.constraint << ") p" << v.patient;
    if (v.other >= 0) os << "/p" << v.other;
    if (!v.detail.empty()) os << " " << v.detail;
  }
  return os.str();
}

namespace {

void check_pairs(const std::vector<const Placement*>& line, const Instance& inst,
                 int overlap_constraint, int gap_constraint, FeasibilityReport& rep) {
  for (std::size_t i = 0; i < line.size(); ++i) {
    for (std::size_t j = i + 1; j < line.size(); ++j) {
      const auto& a = *line[i];
      const auto& b = *line[j];
      if (overlaps(a, b)) {
        rep.violations.push_back({overlap_constraint, a.patient, b.patient, "overlap"});
        continue;
      }
      const auto& first = a.start <= b.start ? a : b;
      const auto& second = a.start <= b.start ? b : a;
      double need = first.end + inst.patient(first.patient).cleanup +
                    inst.patient(second.patient).setup;
      if (second.start < need - kTimeEps)
        rep.violations.push_back({gap_constraint, first.patient, second.patient,
                                  "setup/cleanup gap"});
    }
  }
}

}  // namespace

FeasibilityReport check_feasibility(const Schedule& schedule, const Instance& inst) {
  FeasibilityReport rep;
  const auto& hz = inst.horizon;
  if (schedule.patient_count() != inst.patients.size())
    throw StructuralError("schedule sized for " + std::to_string(schedule.patient_count()) +
                          " patients, instance has " + std::to_string(inst.patients.size()));

  std::vector<std::vector<const Placement*>> by_room(inst.rooms.size());
  std::vector<std::vector<const Placement*>> by_surgeon(inst.surgeons.size());

  for (const auto& pl : schedule.placements()) {
    if (pl.room < 0 || pl.room >= static_cast<int>(inst.rooms.size()))
      throw StructuralError("placement of patient " + std::to_string(pl.patient) +
                            " references unknown room " + std::to_string(pl.room));
    if (pl.surgeon < 0 || pl.surgeon >= static_cast<int>(inst.surgeons.size()))
      throw StructuralError("placement of patient " + std::to_string(pl.patient) +
                            " references unknown surgeon " + std::to_string(pl.surgeon));
    const auto& p = inst.patient(pl.patient);
    const auto& r = inst.room(pl.room);
    const auto& h = inst.surgeon(pl.surgeon);
    by_room[static_cast<std::size_t>(pl.room)].push_back(&pl);
    by_surgeon[static_cast<std::size_t>(pl.surgeon)].push_back(&pl);

    if (!r.working) rep.violations.push_back({18, pl.patient, -1, "room not working"});
    if (pl.start < r.release_time - kTimeEps)
      rep.violations.push_back({19, pl.patient, -1, "before room release"});
    if (pl.start < h.release_time - kTimeEps)
      rep.violations.push_back({20, pl.patient, -1, "before surgeon release"});
    if (std::abs(pl.end - (pl.start + p.duration)) > kTimeEps)
      rep.violations.push_back({25, pl.patient, -1, "end != start + duration"});
    if (!r.equipped_for(p.specialty))
      rep.violations.push_back({28, pl.patient, -1, "room not equipped"});
    if (!p.eligible(pl.surgeon))
      rep.violations.push_back({29, pl.patient, -1, "surgeon not qualified"});
    if (p.elective() && pl.start < hz.tau - kTimeEps)
      rep.violations.push_back({31, pl.patient, -1, "elective before schedule start"});
    if (p.cls == PatientClass::UnscheduledElective) {
      if (pl.start < hz.tau + p.notice - kTimeEps)
        rep.violations.push_back({33, pl.patient, -1, "insufficient notice"});
      if (pl.end > hz.lambda + kTimeEps)
        rep.violations.push_back({35, pl.patient, -1, "add-elective into overtime"});
    }
    if (p.cls == PatientClass::NonElective && pl.start < p.arrival - kTimeEps)
      rep.violations.push_back({34, pl.patient, -1, "before arrival"});
  }

  for (const auto& p : inst.patients)
    if (p.mandatory() && !schedule.included(p.id))
      rep.violations.push_back({32, p.id, -1, "mandatory patient excluded"});

  for (const auto& line : by_surgeon) check_pairs(line, inst, 23, 26, rep);
  for (const auto& line : by_room) check_pairs(line, inst, 24, 27, rep);
  return rep;
}

// ---------------------------------------------------------------------------

Cursors::Cursors(std::size_t rooms, std::size_t surgeons)
    : room(rooms, kNegInf), surgeon(surgeons, kNegInf) {}

Cursors Cursors::from(const Schedule& schedule, const Instance& instance) {
  Cursors c(instance.rooms.size(), instance.surgeons.size());
  for (const auto& pl : schedule.placements()) c.occupy(pl, instance.patient(pl.patient));
  return c;
}

void Cursors::occupy(const Placement& pl, const Patient& patient) {
  double free_at = pl.end + patient.cleanup;
  auto& r = room[static_cast<std::size_t>(pl.room)];
  auto& h = surgeon[static_cast<std::size_t>(pl.surgeon)];
  r = std::max(r, free_at);
  h = std::max(h, free_at);
}

Instant start_lower_bound(const Patient& patient, const Surgeon& surgeon,
                          const OperatingRoom& room, const HorizonParams& hz, Instant now) {
  double z = std::max({room.release_time, surgeon.release_time, now});
  switch (patient.cls) {
    case PatientClass::ScheduledElective: z = std::max(z, hz.tau); break;
    case PatientClass::UnscheduledElective: z = std::max(z, hz.tau + patient.notice); break;
    case PatientClass::NonElective: z = std::max(z, patient.arrival); break;
  }
  return z;
}

Instant earliest_append_start(const Patient& patient, const Surgeon& surgeon,
                              const OperatingRoom& room, const Cursors& cursors,
                              const HorizonParams& hz, Instant now) {
  double z = start_lower_bound(patient, surgeon, room, hz, now);
  z = std::max(z, cursors.room[static_cast<std::size_t>(room.id)] + patient.setup);
  z = std::max(z, cursors.surgeon[static_cast<std::size_t>(surgeon.id)] + patient.setup);
  return z;
}

Instant earliest_append_start(const Patient& patient, const Surgeon& surgeon,
                              const OperatingRoom& room, const Schedule& schedule,
                              const Instance& instance, Instant now) {
  return earliest_append_start(patient, surgeon, room, Cursors::from(schedule, instance),
                               instance.horizon, now);
}

Instant earliest_gap_start(const Patient& patient, SurgeonId surgeon, RoomId room,
                           const Schedule& schedule, const Instance& instance,
                           Instant lower_bound) {
  std::vector<const Placement*> others;
  for (const auto& pl : schedule.placements())
    if (pl.patient != patient.id && (pl.room == room || pl.surgeon == surgeon))
      others.push_back(&pl);

  std::vector<double> candidates{lower_bound};
  for (const auto* q : others) {
    double after = q->end + instance.patient(q->patient).cleanup + patient.setup;
    if (after > lower_bound) candidates.push_back(after);
  }
  std::sort(candidates.begin(), candidates.end());

  for (double z : candidates) {
    bool fits = true;
    for (const auto* q : others) {
      const auto& qp = instance.patient(q->patient);
      bool after_q = z >= q->end + qp.cleanup + patient.setup - kTimeEps;
      bool before_q = q->start >= z + patient.duration + patient.cleanup + qp.setup - kTimeEps;
      if (!after_q && !before_q) {
        fits = false;
        break;
      }
    }
    if (fits) return z;
  }
  return candidates.back();  // unreachable: the last candidate follows every placement
}

Placement make_placement(const Patient& patient, RoomId room, SurgeonId surgeon, Instant start) {
  return Placement{patient.id, room, surgeon, start, start + patient.duration};
}

std::vector<RoomId> suitable_rooms(const Instance& instance, SpecialtyId s) {
  std::vector<RoomId> out;
  for (const auto& r : instance.rooms)
    if (r.working && r.equipped_for(s)) out.push_back(r.id);
  return out;
}

int category_limit_days(int urgency_category) {
  switch (urgency_category) {
    case 1: return 30;
    case 2: return 90;
    case 3: return 360;
    default: throw ConfigError("urgency category must be 1, 2 or 3");
  }
}

int due_date_for(int urgency_category, int days_waiting) {
  return category_limit_days(urgency_category) - days_waiting;
}

}  // namespace scsp
