#include "scsp/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace scsp {

std::string fmt(double x, int precision) {
  if (x == 0.0) x = 0.0;  // no "-0.000000"
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", precision, x);
  return buf;
}

std::string metrics_csv(const std::vector<ReplicationSummary>& rows) {
  std::ostringstream out;
  out << "strategy,replications,utilisation,utilisation_se,overtime,overtime_se,"
         "nonelective_wait,nonelective_wait_se,patients_treated,patients_treated_se,"
         "updates,updates_se\n";
  for (const auto& r : rows) {
    out << to_string(r.strategy) << ',' << r.runs.size();
    for (const Stat* s : {&r.utilisation, &r.overtime, &r.nonelective_wait, &r.patients_treated,
                          &r.updates})
      out << ',' << fmt(s->mean) << ',' << fmt(s->se);
    out << '\n';
  }
  return out.str();
}

std::string runs_csv(const std::vector<ReplicationSummary>& rows) {
  std::ostringstream out;
  out << "strategy,replication,seed,utilisation,overtime,nonelective_wait,patients_treated,"
         "updates\n";
  for (const auto& r : rows)
    for (const auto& run : r.runs)
      out << to_string(r.strategy) << ',' << run.replication << ',' << run.seed << ','
          << fmt(run.weekly.utilisation) << ',' << fmt(run.weekly.overtime) << ','
          << fmt(run.weekly.mean_nonelective_wait) << ',' << run.weekly.patients_treated << ','
          << run.updates << '\n';
  return out.str();
}

std::string timing_csv(const std::vector<ReplicationSummary>& rows) {
  std::ostringstream out;
  out << "strategy,runtime_s,runtime_s_se,update_time_s,update_time_s_se\n";
  for (const auto& r : rows)
    out << to_string(r.strategy) << ',' << fmt(r.runtime_seconds.mean) << ','
        << fmt(r.runtime_seconds.se) << ',' << fmt(r.update_seconds.mean, 9) << ','
        << fmt(r.update_seconds.se, 9) << '\n';
  return out.str();
}

std::string trace_jsonl(const std::vector<TraceEntry>& trace) {
  std::string out;
  for (const auto& e : trace) {
    out += to_json(e).dump();
    out += '\n';
  }
  return out;
}

namespace {

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

std::string gantt_svg(const DaySchedule& day, const std::string& title) {
  const auto& inst = day.instance;
  const double lambda = inst.horizon.lambda;
  double t_max = 24.0;
  for (const auto& pl : day.schedule.placements())
    t_max = std::max(t_max, pl.end + inst.patient(pl.patient).cleanup);
  t_max = std::ceil(t_max);

  const double left = 70, top = 30, lane = 22, px_per_hour = 40;
  const double width = left + t_max * px_per_hour + 20;
  const double height = top + lane * static_cast<double>(inst.rooms.size()) + 30;
  auto x = [&](double t) { return fmt(left + t * px_per_hour, 2); };
  auto w = [&](double dt) { return fmt(std::max(0.0, dt) * px_per_hour, 2); };

  std::ostringstream s;
  s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fmt(width, 0) << "\" height=\""
    << fmt(height, 0) << "\" font-family=\"sans-serif\" font-size=\"10\">\n";
  s << "<text x=\"" << fmt(left, 0) << "\" y=\"18\" font-size=\"13\">" << escape(title)
    << "</text>\n";
  s << "<rect x=\"" << x(0) << "\" y=\"" << fmt(top, 2) << "\" width=\"" << w(lambda)
    << "\" height=\"" << fmt(lane * static_cast<double>(inst.rooms.size()), 2)
    << "\" fill=\"#eef3fb\"/>\n";
  for (int h = 0; h <= static_cast<int>(t_max); ++h) {
    s << "<line x1=\"" << x(h) << "\" y1=\"" << fmt(top, 2) << "\" x2=\"" << x(h) << "\" y2=\""
      << fmt(height - 25, 2) << "\" stroke=\"#ddd\"/>\n";
    s << "<text x=\"" << x(h) << "\" y=\"" << fmt(height - 12, 2)
      << "\" text-anchor=\"middle\">" << h << "</text>\n";
  }
  for (const auto& r : inst.rooms) {
    double y = top + lane * r.id;
    s << "<text x=\"4\" y=\"" << fmt(y + 15, 2) << "\">OR " << r.id << (r.working ? "" : " (down)")
      << "</text>\n";
    if (!r.working)
      s << "<rect x=\"" << x(0) << "\" y=\"" << fmt(y + 2, 2) << "\" width=\"" << w(t_max)
        << "\" height=\"" << fmt(lane - 4, 2) << "\" fill=\"#f4dede\"/>\n";
  }
  for (const auto& pl : day.schedule.sorted()) {
    const auto& p = inst.patient(pl.patient);
    double y = top + lane * pl.room + 2;
    const char* fill = p.cls == PatientClass::NonElective      ? "#b03a2e"
                       : p.cls == PatientClass::ScheduledElective ? "#1f4e79"
                                                                  : "#1e8449";
    s << "<rect x=\"" << x(pl.start - p.setup) << "\" y=\"" << fmt(y, 2) << "\" width=\""
      << w(p.setup) << "\" height=\"" << fmt(lane - 4, 2) << "\" fill=\"#aab7c4\"/>\n";
    s << "<rect x=\"" << x(pl.start) << "\" y=\"" << fmt(y, 2) << "\" width=\""
      << w(pl.end - pl.start) << "\" height=\"" << fmt(lane - 4, 2) << "\" fill=\"" << fill
      << "\"><title>patient " << day.global_id.at(static_cast<std::size_t>(pl.patient))
      << " surgeon " << pl.surgeon << " " << fmt(pl.start, 2) << "-" << fmt(pl.end, 2)
      << "</title></rect>\n";
    s << "<rect x=\"" << x(pl.end) << "\" y=\"" << fmt(y, 2) << "\" width=\"" << w(p.cleanup)
      << "\" height=\"" << fmt(lane - 4, 2) << "\" fill=\"#aab7c4\"/>\n";
  }
  s << "</svg>\n";
  return s.str();
}

}  // namespace scsp
