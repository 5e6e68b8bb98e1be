#include "scsp/json_io.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace scsp {

namespace {

void require_schema(const Json& j) {
  if (!j.contains("schema") || j.at("schema") != kSchemaVersion)
    throw StructuralError(std::string("expected schema '") + kSchemaVersion + "'");
}

template <class T>
T get_or(const Json& j, const char* key, T fallback) {
  return j.contains(key) ? j.at(key).get<T>() : fallback;
}

}  // namespace

Json to_json(const HorizonParams& h) {
  return Json{{"tau", h.tau}, {"lambda", h.lambda}, {"lambda_star", h.lambda_star},
              {"big_m", h.big_m}};
}

HorizonParams horizon_from_json(const Json& j) {
  HorizonParams h;
  h.tau = get_or(j, "tau", h.tau);
  h.lambda = get_or(j, "lambda", h.lambda);
  h.lambda_star = get_or(j, "lambda_star", h.lambda_star);
  h.big_m = get_or(j, "big_m", h.lambda_star);
  return h;
}

Json to_json(const Patient& p) {
  Json j{{"id", p.id},
         {"class", to_string(p.cls)},
         {"specialty", p.specialty},
         {"duration", p.duration},
         {"setup", p.setup},
         {"cleanup", p.cleanup}};
  if (p.cls == PatientClass::UnscheduledElective) j["notice"] = p.notice;
  if (p.cls == PatientClass::NonElective) j["arrival"] = p.arrival;
  j["eligible_surgeons"] = p.eligible_surgeons;
  j["urgency_category"] = p.urgency_category;
  j["days_waiting"] = p.days_waiting;
  j["due_date"] = p.due_date;
  if (p.cancelled) j["cancelled"] = true;
  return j;
}

Patient patient_from_json(const Json& j) {
  try {
    Patient p;
    p.id = j.at("id").get<int>();
    p.cls = patient_class_from_string(j.at("class").get<std::string>());
    p.specialty = j.at("specialty").get<int>();
    p.duration = j.at("duration").get<double>();
    p.setup = get_or(j, "setup", p.setup);
    p.cleanup = get_or(j, "cleanup", p.cleanup);
    if (p.cls == PatientClass::UnscheduledElective) p.notice = j.at("notice").get<double>();
    if (p.cls == PatientClass::NonElective) p.arrival = j.at("arrival").get<double>();
    p.eligible_surgeons = j.at("eligible_surgeons").get<std::vector<int>>();
    p.urgency_category = get_or(j, "urgency_category", p.urgency_category);
    p.days_waiting = get_or(j, "days_waiting", p.days_waiting);
    p.due_date = get_or(j, "due_date", due_date_for(p.urgency_category, p.days_waiting));
    p.cancelled = get_or(j, "cancelled", false);
    return p;
  } catch (const nlohmann::json::exception& e) {
    throw StructuralError(std::string("bad patient record: ") + e.what());
  }
}

Json to_json(const Instance& inst) {
  Json rooms = Json::array();
  for (const auto& r : inst.rooms) {
    Json jr{{"id", r.id},
            {"working", r.working},
            {"release_time", r.release_time},
            {"equipped_specialties", r.equipped_specialties}};
    if (!r.reserved_for.empty()) jr["reserved_for"] = r.reserved_for;
    rooms.push_back(std::move(jr));
  }
  Json surgeons = Json::array();
  for (const auto& h : inst.surgeons)
    surgeons.push_back(Json{{"id", h.id}, {"release_time", h.release_time}});
  Json patients = Json::array();
  for (const auto& p : inst.patients) patients.push_back(to_json(p));
  Json mss = Json::array();
  for (const auto& [pid, e] : inst.mss_assignment)
    mss.push_back(Json{{"patient", pid}, {"room", e.room}, {"surgeon", e.surgeon}});
  return Json{{"schema", kSchemaVersion},   {"horizon", to_json(inst.horizon)},
              {"specialties", inst.specialties}, {"rooms", rooms},
              {"surgeons", surgeons},         {"patients", patients},
              {"mss_assignment", mss}};
}

Instance instance_from_json(const Json& j) {
  require_schema(j);
  Instance inst;
  try {
    inst.horizon = horizon_from_json(j.at("horizon"));
    inst.specialties = j.at("specialties").get<int>();
    for (const auto& jr : j.at("rooms")) {
      OperatingRoom r;
      r.id = jr.at("id").get<int>();
      r.working = get_or(jr, "working", true);
      r.release_time = get_or(jr, "release_time", 0.0);
      r.equipped_specialties = jr.at("equipped_specialties").get<std::vector<int>>();
      r.reserved_for = get_or(jr, "reserved_for", std::vector<int>{});
      inst.rooms.push_back(std::move(r));
    }
    for (const auto& jh : j.at("surgeons"))
      inst.surgeons.push_back(
          Surgeon{jh.at("id").get<int>(), get_or(jh, "release_time", 0.0)});
    for (const auto& jp : j.at("patients")) inst.patients.push_back(patient_from_json(jp));
    if (j.contains("mss_assignment"))
      for (const auto& je : j.at("mss_assignment"))
        inst.mss_assignment[je.at("patient").get<int>()] =
            MssEntry{je.at("room").get<int>(), je.at("surgeon").get<int>()};
  } catch (const nlohmann::json::exception& e) {
    throw StructuralError(std::string("bad instance: ") + e.what());
  }
  inst.validate();
  return inst;
}

Json to_json(const Schedule& s) {
  auto pls = std::vector<Placement>(s.placements().begin(), s.placements().end());
  std::sort(pls.begin(), pls.end(),
            [](const Placement& a, const Placement& b) { return a.patient < b.patient; });
  Json arr = Json::array();
  for (const auto& pl : pls)
    arr.push_back(Json{{"patient", pl.patient},
                       {"room", pl.room},
                       {"surgeon", pl.surgeon},
                       {"start", pl.start},
                       {"end", pl.end}});
  return Json{{"schema", kSchemaVersion}, {"placements", arr}};
}

Schedule schedule_from_json(const Json& j, std::size_t patient_count) {
  require_schema(j);
  Schedule s(patient_count);
  try {
    for (const auto& jp : j.at("placements"))
      s.place(Placement{jp.at("patient").get<int>(), jp.at("room").get<int>(),
                        jp.at("surgeon").get<int>(), jp.at("start").get<double>(),
                        jp.at("end").get<double>()});
  } catch (const nlohmann::json::exception& e) {
    throw StructuralError(std::string("bad schedule: ") + e.what());
  }
  return s;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write '" + path + "'");
  out << text;
}

}  // namespace scsp
