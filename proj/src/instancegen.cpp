#include "scsp/instancegen.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "scsp/heuristics.hpp"

namespace scsp {

std::uint64_t stream_seed(std::uint64_t base, std::uint64_t i) {
  // splitmix64 finaliser over the golden-ratio offset
  std::uint64_t z = base ^ (i * 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

void GenParams::normalise() {
  horizon.validate();
  auto bad = [](const std::string& what) { throw ConfigError("generator: " + what); };
  if (rooms < 1 || reserved_rooms < 0 || reserved_rooms >= rooms) bad("room counts out of range");
  if (specialties < 1) bad("need at least one specialty");
  if (rooms_per_specialty < 1) bad("rooms_per_specialty must be positive");
  if (surgeons_per_specialty_min < 1 || surgeons_per_specialty_max < surgeons_per_specialty_min)
    bad("surgeon counts out of range");
  if (waiting_list_mean < 0 || elective_requests_per_week < 0 ||
      nonelective_requests_per_week < 0)
    bad("rates must be non-negative");
  for (double p : {cancellation_prob, breakdown_prob, mss_fill})
    if (p < 0.0 || p > 1.0) bad("probabilities must lie in [0, 1]");
  if (setup < 0 || cleanup < 0 || notice < 0) bad("buffers must be non-negative");
  if (!(min_duration > 0) || max_duration < min_duration) bad("duration bounds out of range");

  const auto n = static_cast<std::size_t>(specialties);
  if (specialty_weights.empty()) specialty_weights.assign(n, 1.0);
  if (specialty_weights.size() != n) bad("specialty_weights needs one entry per specialty");
  for (double w : specialty_weights)
    if (w < 0) bad("weights must be non-negative");
  for (double w : category_weights)
    if (w < 0) bad("weights must be non-negative");
  if (std::accumulate(specialty_weights.begin(), specialty_weights.end(), 0.0) <= 0 ||
      std::accumulate(category_weights.begin(), category_weights.end(), 0.0) <= 0)
    bad("weights must have a positive sum");

  if (elective_durations.empty()) {
    for (std::size_t s = 0; s < n; ++s) {
      double frac = n > 1 ? static_cast<double>((s * 11) % n) / static_cast<double>(n - 1) : 0.5;
      elective_durations.push_back({1.8 + 2.0 * frac, 0.35, 0.3});
    }
  }
  if (nonelective_durations.empty()) nonelective_durations.assign(n, {1.5, 0.4, 0.35});
  if (elective_durations.size() != n || nonelective_durations.size() != n)
    bad("duration models need one entry per specialty");
  for (const auto* models : {&elective_durations, &nonelective_durations})
    for (const auto& m : *models)
      if (!(m.median > 0) || m.spread < 0 || m.noise < 0)
        bad("lognormal median must be positive and scales non-negative");
}

namespace {

Json to_json(const DurationModel& m) {
  return Json{{"median", m.median}, {"spread", m.spread}, {"noise", m.noise}};
}

DurationModel duration_model_from_json(const Json& j) {
  DurationModel m;
  m.median = j.value("median", m.median);
  m.spread = j.value("spread", m.spread);
  m.noise = j.value("noise", m.noise);
  return m;
}

Json models_to_json(const std::vector<DurationModel>& v) {
  Json a = Json::array();
  for (const auto& m : v) a.push_back(to_json(m));
  return a;
}

std::vector<DurationModel> models_from_json(const Json& j) {
  std::vector<DurationModel> v;
  for (const auto& e : j) v.push_back(duration_model_from_json(e));
  return v;
}

}  // namespace

Json to_json(const GenParams& p) {
  Json waits = Json::array();
  for (const auto& w : p.wait_models)
    waits.push_back({{"intercept", w.intercept}, {"slope", w.slope}, {"noise_sd", w.noise_sd}});
  return Json{{"schema", kSchemaVersion},
              {"seed", p.seed},
              {"horizon", to_json(p.horizon)},
              {"rooms", p.rooms},
              {"reserved_rooms", p.reserved_rooms},
              {"specialties", p.specialties},
              {"rooms_per_specialty", p.rooms_per_specialty},
              {"surgeons_per_specialty_min", p.surgeons_per_specialty_min},
              {"surgeons_per_specialty_max", p.surgeons_per_specialty_max},
              {"waiting_list_mean", p.waiting_list_mean},
              {"specialty_weights", p.specialty_weights},
              {"category_weights", p.category_weights},
              {"elective_requests_per_week", p.elective_requests_per_week},
              {"nonelective_requests_per_week", p.nonelective_requests_per_week},
              {"elective_durations", models_to_json(p.elective_durations)},
              {"nonelective_durations", models_to_json(p.nonelective_durations)},
              {"min_duration", p.min_duration},
              {"max_duration", p.max_duration},
              {"wait_models", waits},
              {"setup", p.setup},
              {"cleanup", p.cleanup},
              {"notice", p.notice},
              {"mss_fill", p.mss_fill},
              {"cancellation_prob", p.cancellation_prob},
              {"breakdown_prob", p.breakdown_prob}};
}

GenParams gen_params_from_json(const Json& j) {
  if (!j.is_object()) throw ConfigError("generator parameters must be a JSON object");
  GenParams p;
  try {
    p.seed = j.value("seed", p.seed);
    if (j.contains("horizon")) p.horizon = horizon_from_json(j.at("horizon"));
    p.rooms = j.value("rooms", p.rooms);
    p.reserved_rooms = j.value("reserved_rooms", p.reserved_rooms);
    p.specialties = j.value("specialties", p.specialties);
    p.rooms_per_specialty = j.value("rooms_per_specialty", p.rooms_per_specialty);
    p.surgeons_per_specialty_min = j.value("surgeons_per_specialty_min", p.surgeons_per_specialty_min);
    p.surgeons_per_specialty_max = j.value("surgeons_per_specialty_max", p.surgeons_per_specialty_max);
    p.waiting_list_mean = j.value("waiting_list_mean", p.waiting_list_mean);
    p.specialty_weights = j.value("specialty_weights", p.specialty_weights);
    p.category_weights = j.value("category_weights", p.category_weights);
    p.elective_requests_per_week = j.value("elective_requests_per_week", p.elective_requests_per_week);
    p.nonelective_requests_per_week =
        j.value("nonelective_requests_per_week", p.nonelective_requests_per_week);
    if (j.contains("elective_durations"))
      p.elective_durations = models_from_json(j.at("elective_durations"));
    if (j.contains("nonelective_durations"))
      p.nonelective_durations = models_from_json(j.at("nonelective_durations"));
    p.min_duration = j.value("min_duration", p.min_duration);
    p.max_duration = j.value("max_duration", p.max_duration);
    if (j.contains("wait_models")) {
      const auto& w = j.at("wait_models");
      if (!w.is_array() || w.size() != 3) throw ConfigError("wait_models needs three entries");
      for (std::size_t c = 0; c < 3; ++c) {
        p.wait_models[c].intercept = w[c].value("intercept", p.wait_models[c].intercept);
        p.wait_models[c].slope = w[c].value("slope", p.wait_models[c].slope);
        p.wait_models[c].noise_sd = w[c].value("noise_sd", p.wait_models[c].noise_sd);
      }
    }
    p.setup = j.value("setup", p.setup);
    p.cleanup = j.value("cleanup", p.cleanup);
    p.notice = j.value("notice", p.notice);
    p.mss_fill = j.value("mss_fill", p.mss_fill);
    p.cancellation_prob = j.value("cancellation_prob", p.cancellation_prob);
    p.breakdown_prob = j.value("breakdown_prob", p.breakdown_prob);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("generator parameters: ") + e.what());
  }
  p.normalise();
  return p;
}

void WeekInstance::validate() const {
  base.validate();
  auto n = static_cast<int>(base.patients.size());
  auto check = [&](PatientId p) {
    if (p < 0 || p >= n) throw StructuralError("week references unknown patient");
  };
  if (cancellations.size() != mss.size() || breakdowns.size() != mss.size())
    throw StructuralError("week day tables disagree in length");
  for (const auto& r : elective_requests) check(r.patient);
  for (const auto& r : nonelective_requests) check(r.patient);
  for (const auto& day : mss)
    for (const auto& [p, e] : day) {
      check(p);
      if (e.room < 0 || e.room >= static_cast<int>(base.rooms.size()) ||
          !base.patient(p).eligible(e.surgeon) ||
          !base.room(e.room).equipped_for(base.patient(p).specialty))
        throw StructuralError("MSS entry for patient " + std::to_string(p) + " is unsuitable");
    }
  for (const auto& day : cancellations)
    for (PatientId p : day) check(p);
  for (const auto& day : breakdowns)
    for (RoomId r : day)
      if (r < 0 || r >= static_cast<int>(base.rooms.size()))
        throw StructuralError("breakdown references unknown room");
  auto s = static_cast<std::size_t>(base.specialties);
  if (elective_durations.size() != s || nonelective_durations.size() != s)
    throw StructuralError("week needs one duration model per specialty");
}

namespace {

Json requests_to_json(const std::vector<Request>& rs) {
  Json a = Json::array();
  for (const auto& r : rs) a.push_back({{"patient", r.patient}, {"day", r.day}, {"at", r.at}});
  return a;
}

std::vector<Request> requests_from_json(const Json& j) {
  std::vector<Request> rs;
  for (const auto& e : j) rs.push_back({e.at("patient").get<PatientId>(), e.at("day").get<int>(),
                                        e.at("at").get<double>()});
  return rs;
}

}  // namespace

Json to_json(const WeekInstance& w) {
  Json mss = Json::array();
  for (const auto& day : w.mss) {
    Json d = Json::array();
    for (const auto& [p, e] : day) d.push_back({p, e.room, e.surgeon});
    mss.push_back(d);
  }
  return Json{{"schema", kSchemaVersion},
              {"waiting_list_size", w.waiting_list_size},
              {"realisation_seed", w.realisation_seed},
              {"elective_durations", models_to_json(w.elective_durations)},
              {"nonelective_durations", models_to_json(w.nonelective_durations)},
              {"elective_requests", requests_to_json(w.elective_requests)},
              {"nonelective_requests", requests_to_json(w.nonelective_requests)},
              {"mss", mss},
              {"cancellations", w.cancellations},
              {"breakdowns", w.breakdowns},
              {"base", to_json(w.base)}};
}

WeekInstance week_from_json(const Json& j) {
  if (!j.is_object() || j.value("schema", std::string()) != kSchemaVersion)
    throw StructuralError(std::string("expected a week with schema '") + kSchemaVersion + "'");
  WeekInstance w;
  try {
    w.base = instance_from_json(j.at("base"));
    w.waiting_list_size = j.at("waiting_list_size").get<int>();
    w.realisation_seed = j.at("realisation_seed").get<std::uint64_t>();
    w.elective_durations = models_from_json(j.at("elective_durations"));
    w.nonelective_durations = models_from_json(j.at("nonelective_durations"));
    w.elective_requests = requests_from_json(j.at("elective_requests"));
    w.nonelective_requests = requests_from_json(j.at("nonelective_requests"));
    for (const auto& d : j.at("mss")) {
      std::map<PatientId, MssEntry> day;
      for (const auto& e : d) day[e.at(0).get<int>()] = MssEntry{e.at(1).get<int>(), e.at(2).get<int>()};
      w.mss.push_back(std::move(day));
    }
    w.cancellations = j.at("cancellations").get<std::vector<std::vector<PatientId>>>();
    w.breakdowns = j.at("breakdowns").get<std::vector<std::vector<RoomId>>>();
  } catch (const nlohmann::json::exception& e) {
    throw StructuralError(std::string("malformed week: ") + e.what());
  }
  w.validate();
  return w;
}

Hours realize_duration(Hours expected, const DurationModel& model, std::mt19937_64& rng) {
  if (!(expected > 0)) throw ConfigError("expected duration must be positive");
  if (model.noise <= 0) return expected;
  return expected * std::exp(model.noise * std::normal_distribution<double>(0.0, 1.0)(rng));
}

Hours realize_duration(Hours expected, const GenParams& params, SpecialtyId specialty,
                       PatientClass cls, std::mt19937_64& rng) {
  const auto& models =
      cls == PatientClass::NonElective ? params.nonelective_durations : params.elective_durations;
  return realize_duration(expected, models.at(static_cast<std::size_t>(specialty)), rng);
}

namespace {

struct Builder {
  GenParams& p;
  std::mt19937_64& rng;
  Instance inst;
  std::vector<std::vector<SurgeonId>> surgeons_of;

  Hours draw_expected(const DurationModel& m) {
    double z = std::normal_distribution<double>(0.0, 1.0)(rng);
    return std::clamp(m.median * std::exp(m.spread * z), p.min_duration, p.max_duration);
  }

  int draw_days_waiting(int category) {
    const auto& w = p.wait_models[static_cast<std::size_t>(category - 1)];
    double limit = category_limit_days(category);
    double noise = std::normal_distribution<double>(0.0, w.noise_sd * limit)(rng);
    return std::max(0, static_cast<int>(std::lround(w.intercept + w.slope * limit + noise)));
  }

  int draw_category() {
    std::discrete_distribution<int> d(p.category_weights.begin(), p.category_weights.end());
    return d(rng) + 1;
  }

  Patient& add_patient(PatientClass cls, SpecialtyId s) {
    Patient pt;
    pt.id = static_cast<PatientId>(inst.patients.size());
    pt.cls = cls;
    pt.specialty = s;
    pt.setup = p.setup;
    pt.cleanup = p.cleanup;
    if (cls != PatientClass::NonElective) pt.notice = p.notice;
    inst.patients.push_back(pt);
    return inst.patients.back();
  }

  void build_resources() {
    inst.horizon = p.horizon;
    inst.specialties = p.specialties;
    int elective_rooms = p.rooms - p.reserved_rooms;
    for (RoomId r = 0; r < p.rooms; ++r) {
      OperatingRoom room;
      room.id = r;
      if (r >= elective_rooms) {
        room.equipped_specialties.resize(static_cast<std::size_t>(p.specialties));
        std::iota(room.equipped_specialties.begin(), room.equipped_specialties.end(), 0);
        room.reserved_for = room.equipped_specialties;
      }
      inst.rooms.push_back(room);
    }
    // Each specialty is equipped in rooms_per_specialty elective rooms,
    // spread over the suite by fixed strides.
    const int strides[] = {0, 7, 13, 3, 11, 5, 17, 2};
    for (SpecialtyId s = 0; s < p.specialties; ++s) {
      std::vector<RoomId> chosen;
      for (int k = 0; static_cast<int>(chosen.size()) < std::min(p.rooms_per_specialty, elective_rooms);
           ++k) {
        int stride = k < 8 ? strides[k] : k;
        RoomId r = (s + stride) % elective_rooms;
        while (std::find(chosen.begin(), chosen.end(), r) != chosen.end())
          r = (r + 1) % elective_rooms;
        chosen.push_back(r);
      }
      for (RoomId r : chosen) inst.rooms[static_cast<std::size_t>(r)].equipped_specialties.push_back(s);
    }
    for (auto& room : inst.rooms) std::sort(room.equipped_specialties.begin(), room.equipped_specialties.end());

    std::uniform_int_distribution<int> count(p.surgeons_per_specialty_min, p.surgeons_per_specialty_max);
    surgeons_of.resize(static_cast<std::size_t>(p.specialties));
    for (SpecialtyId s = 0; s < p.specialties; ++s) {
      int n = count(rng);
      for (int i = 0; i < n; ++i) {
        SurgeonId h = static_cast<SurgeonId>(inst.surgeons.size());
        inst.surgeons.push_back(Surgeon{h, 0.0});
        surgeons_of[static_cast<std::size_t>(s)].push_back(h);
      }
    }
  }

  double specialty_share(SpecialtyId s) const {
    double total = std::accumulate(p.specialty_weights.begin(), p.specialty_weights.end(), 0.0);
    return p.specialty_weights[static_cast<std::size_t>(s)] / total;
  }

  // Thinned Poisson: one independent count per (specialty, surgeon, category).
  void build_waiting_list() {
    double cat_total = std::accumulate(p.category_weights.begin(), p.category_weights.end(), 0.0);
    for (SpecialtyId s = 0; s < p.specialties; ++s) {
      const auto& hs = surgeons_of[static_cast<std::size_t>(s)];
      for (SurgeonId h : hs) {
        for (int c = 1; c <= 3; ++c) {
          double mean = p.waiting_list_mean * specialty_share(s) / static_cast<double>(hs.size()) *
                        p.category_weights[static_cast<std::size_t>(c - 1)] / cat_total;
          int n = mean > 0 ? std::poisson_distribution<int>(mean)(rng) : 0;
          for (int i = 0; i < n; ++i) {
            Patient& pt = add_patient(PatientClass::UnscheduledElective, s);
            pt.eligible_surgeons = {h};
            pt.urgency_category = c;
            pt.duration = draw_expected(p.elective_durations[static_cast<std::size_t>(s)]);
            pt.days_waiting = draw_days_waiting(c);
            pt.due_date = due_date_for(c, pt.days_waiting);
          }
        }
      }
    }
  }

  // Arrival times of a homogeneous Poisson process per specialty over the
  // given days, merged and sorted.
  std::vector<std::pair<double, SpecialtyId>> stream(double per_week, int first_day, int days) {
    std::vector<std::pair<double, SpecialtyId>> out;
    for (SpecialtyId s = 0; s < p.specialties; ++s) {
      double mean = per_week * specialty_share(s);
      int n = mean > 0 ? std::poisson_distribution<int>(mean)(rng) : 0;
      std::uniform_real_distribution<double> at(first_day * 24.0, (first_day + days) * 24.0);
      for (int i = 0; i < n; ++i) out.emplace_back(at(rng), s);
    }
    std::sort(out.begin(), out.end());
    return out;
  }
};

}  // namespace

WeekInstance generate_week(GenParams params, std::mt19937_64& rng) {
  params.normalise();
  Builder b{params, rng, {}, {}};
  b.build_resources();
  b.build_waiting_list();

  WeekInstance w;
  w.waiting_list_size = static_cast<int>(b.inst.patients.size());
  w.elective_durations = params.elective_durations;
  w.nonelective_durations = params.nonelective_durations;

  for (const auto& [t, s] : b.stream(params.elective_requests_per_week, 0, kWeekdays)) {
    Patient& pt = b.add_patient(PatientClass::UnscheduledElective, s);
    const auto& hs = b.surgeons_of[static_cast<std::size_t>(s)];
    pt.eligible_surgeons = {hs[std::uniform_int_distribution<std::size_t>(0, hs.size() - 1)(rng)]};
    pt.urgency_category = b.draw_category();
    pt.duration = b.draw_expected(params.elective_durations[static_cast<std::size_t>(s)]);
    pt.due_date = due_date_for(pt.urgency_category, 0);
    int day = static_cast<int>(t / 24.0);
    w.elective_requests.push_back({pt.id, day, t - day * 24.0});
  }
  for (const auto& [t, s] : b.stream(params.nonelective_requests_per_week, 0, kDaysPerWeek)) {
    Patient& pt = b.add_patient(PatientClass::NonElective, s);
    pt.eligible_surgeons = b.surgeons_of[static_cast<std::size_t>(s)];
    pt.urgency_category = 1;
    pt.duration = b.draw_expected(params.nonelective_durations[static_cast<std::size_t>(s)]);
    int day = static_cast<int>(t / 24.0);
    pt.arrival = t - day * 24.0;
    w.nonelective_requests.push_back({pt.id, day, pt.arrival});
  }

  // Master surgical schedule for the weekdays, drawn from the initial list.
  const Instance& inst = b.inst;
  std::vector<std::vector<PatientId>> list_of(inst.surgeons.size());
  for (PatientId pid = 0; pid < w.waiting_list_size; ++pid)
    list_of[static_cast<std::size_t>(inst.patient(pid).eligible_surgeons.front())].push_back(pid);
  for (auto& l : list_of)
    std::sort(l.begin(), l.end(), [&](PatientId a, PatientId c) {
      return add_elective_before(inst.patient(a), inst.patient(c));
    });
  std::vector<char> planned(static_cast<std::size_t>(w.waiting_list_size), 0);
  const double budget = params.mss_fill * (params.horizon.lambda - params.horizon.tau);
  w.mss.resize(kDaysPerWeek);
  for (int day = 0; day < kWeekdays; ++day) {
    std::vector<char> busy(inst.surgeons.size(), 0);
    for (const auto& room : inst.rooms) {
      if (!room.reserved_for.empty() || room.equipped_specialties.empty()) continue;
      const auto& specs = room.equipped_specialties;
      for (std::size_t k = 0; k < specs.size(); ++k) {
        SpecialtyId s = specs[(static_cast<std::size_t>(day + room.id) + k) % specs.size()];
        const auto& hs = b.surgeons_of[static_cast<std::size_t>(s)];
        SurgeonId chosen = -1;
        for (std::size_t i = 0; i < hs.size(); ++i) {
          SurgeonId h = hs[(static_cast<std::size_t>(day) + i) % hs.size()];
          if (!busy[static_cast<std::size_t>(h)]) {
            chosen = h;
            break;
          }
        }
        if (chosen < 0) continue;
        busy[static_cast<std::size_t>(chosen)] = 1;
        double used = 0.0;
        for (PatientId pid : list_of[static_cast<std::size_t>(chosen)]) {
          if (planned[static_cast<std::size_t>(pid)]) continue;
          const auto& pt = inst.patient(pid);
          if (pt.specialty != s) continue;
          if (used + pt.footprint() > budget + kTimeEps) continue;
          used += pt.footprint();
          planned[static_cast<std::size_t>(pid)] = 1;
          w.mss[static_cast<std::size_t>(day)][pid] = MssEntry{room.id, chosen};
        }
        break;
      }
    }
  }

  std::bernoulli_distribution cancel(params.cancellation_prob);
  std::bernoulli_distribution breakdown(params.breakdown_prob);
  w.cancellations.resize(kDaysPerWeek);
  w.breakdowns.resize(kDaysPerWeek);
  for (int day = 0; day < kDaysPerWeek; ++day) {
    for (const auto& [pid, e] : w.mss[static_cast<std::size_t>(day)])
      if (cancel(rng)) w.cancellations[static_cast<std::size_t>(day)].push_back(pid);
    for (const auto& room : inst.rooms)
      if (breakdown(rng)) w.breakdowns[static_cast<std::size_t>(day)].push_back(room.id);
  }
  w.realisation_seed = rng();
  w.base = std::move(b.inst);
  w.validate();
  return w;
}

}  // namespace scsp
