#include "scsp/mip.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <sstream>

#include "scsp/objective.hpp"

namespace scsp {

int MipModel::var_index(const std::string& name) const {
  auto it = by_name_.find(name);
  if (it == by_name_.end()) throw StructuralError("unknown model variable '" + name + "'");
  return it->second;
}

int MipModel::add_variable(std::string name, VarType type, double lower, double upper) {
  if (by_name_.count(name)) throw StructuralError("duplicate model variable '" + name + "'");
  int idx = static_cast<int>(variables.size());
  by_name_[name] = idx;
  variables.push_back(MipVariable{std::move(name), type, lower, upper});
  return idx;
}

std::map<int, int> MipModel::family_counts() const {
  std::map<int, int> out;
  for (const auto& c : constraints) ++out[c.family];
  return out;
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string nm(const char* base, std::initializer_list<int> idx) {
  std::string s = base;
  for (int i : idx) {
    s += '_';
    s += std::to_string(i);
  }
  return s;
}

std::string fmt_num(double v) {
  if (v == 0.0) return "0";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

struct Builder {
  MipModel& m;

  int var(const std::string& name) const { return m.var_index(name); }

  void add(int family, std::string name, std::vector<MipTerm> terms, Sense sense, double rhs) {
    terms.erase(std::remove_if(terms.begin(), terms.end(),
                               [](const MipTerm& t) { return t.coef == 0.0; }),
                terms.end());
    m.constraints.push_back(MipConstraint{std::move(name), family, std::move(terms), sense, rhs});
  }
};

}  // namespace

MipModel build_mip(const Instance& inst) {
  inst.validate();
  if (std::none_of(inst.rooms.begin(), inst.rooms.end(),
                   [](const OperatingRoom& r) { return r.working; }))
    throw ConfigError("export refused: instance has no working room");

  const auto& hz = inst.horizon;
  const int P = static_cast<int>(inst.patients.size());
  const int R = static_cast<int>(inst.rooms.size());
  const int H = static_cast<int>(inst.surgeons.size());
  const double M = hz.big_m;
  const double L = hz.lambda;
  const double LS = hz.lambda_star;

  MipModel m;
  m.big_m = M;
  Builder b{m};

  for (int p = 0; p < P; ++p) m.add_variable(nm("eps", {p}), VarType::Binary, 0, 1);
  for (int p = 0; p < P; ++p)
    for (int r = 0; r < R; ++r) m.add_variable(nm("X", {p, r}), VarType::Binary, 0, 1);
  for (int p = 0; p < P; ++p)
    for (int h = 0; h < H; ++h) m.add_variable(nm("Y", {p, h}), VarType::Binary, 0, 1);
  for (int p = 0; p < P; ++p)
    for (int q = 0; q < P; ++q)
      if (p != q) m.add_variable(nm("U", {p, q}), VarType::Binary, 0, 1);
  for (int p = 0; p < P; ++p) m.add_variable(nm("Z", {p}), VarType::Continuous, -kInf, kInf);
  for (int p = 0; p < P; ++p) m.add_variable(nm("Zs", {p}), VarType::Continuous, -kInf, kInf);
  for (int p = 0; p < P; ++p)
    for (int j = 1; j <= 4; ++j) {
      m.add_variable(nm("dp", {j, p}), VarType::Continuous, 0, kInf);
      m.add_variable(nm("dm", {j, p}), VarType::Continuous, 0, kInf);
      m.add_variable(nm("e", {j, p}), VarType::Binary, 0, 1);
    }
  for (int p = 0; p < P; ++p) m.add_variable(nm("Omega", {p}), VarType::Continuous, 0, kInf);

  auto v = [&](const char* base, std::initializer_list<int> idx) { return b.var(nm(base, idx)); };

  for (int p = 0; p < P; ++p) m.objective.push_back({1.0, v("Omega", {p})});

  // Objective linearisation.
  for (int p = 0; p < P; ++p) {
    const auto& pt = inst.patients[static_cast<std::size_t>(p)];
    b.add(3, nm("c3", {p}), {{1, v("Omega", {p})}, {-L, v("eps", {p})}}, Sense::LessEqual, 0);
    b.add(4, nm("c4", {p}), {{1, v("Omega", {p})}, {1, v("dm", {3, p})}, {1, v("dp", {4, p})}},
          Sense::LessEqual, L);
    b.add(5, nm("c5", {p}),
          {{1, v("Omega", {p})}, {-L, v("eps", {p})}, {1, v("dm", {3, p})}, {1, v("dp", {4, p})}},
          Sense::GreaterEqual, 0);
    b.add(6, nm("c6", {p}), {{1, v("Zs", {p})}, {-1, v("dp", {1, p})}, {1, v("dm", {1, p})}},
          Sense::Equal, -pt.cleanup);
    b.add(7, nm("c7", {p}), {{1, v("Z", {p})}, {-1, v("dp", {2, p})}, {1, v("dm", {2, p})}},
          Sense::Equal, pt.setup + L);
    b.add(8, nm("c8", {p}), {{1, v("dp", {1, p})}, {-1, v("dp", {3, p})}, {1, v("dm", {3, p})}},
          Sense::Equal, L);
    b.add(9, nm("c9", {p}), {{-1, v("dm", {2, p})}, {-1, v("dp", {4, p})}, {1, v("dm", {4, p})}},
          Sense::Equal, -L);
    for (int j = 1; j <= 4; ++j)
      b.add(10, nm("c10", {j, p}), {{1, v("dp", {j, p})}, {-M, v("e", {j, p})}},
            Sense::LessEqual, 0);
    for (int j = 1; j <= 4; ++j)
      b.add(11, nm("c11", {j, p}), {{1, v("dm", {j, p})}, {M, v("e", {j, p})}},
            Sense::LessEqual, M);
  }

  // Assignment and timing.
  for (int p = 0; p < P; ++p) {
    std::vector<MipTerm> t;
    for (int r = 0; r < R; ++r) t.push_back({1, v("X", {p, r})});
    t.push_back({-1, v("eps", {p})});
    b.add(17, nm("c17", {p}), std::move(t), Sense::Equal, 0);
  }
  for (int r = 0; r < R; ++r) {
    std::vector<MipTerm> t;
    for (int p = 0; p < P; ++p) t.push_back({1, v("X", {p, r})});
    b.add(18, nm("c18", {r}), std::move(t), Sense::LessEqual,
          inst.rooms[static_cast<std::size_t>(r)].working ? P : 0);
  }
  for (int p = 0; p < P; ++p)
    for (int r = 0; r < R; ++r)
      b.add(19, nm("c19", {p, r}),
            {{1, v("Z", {p})}, {-inst.rooms[static_cast<std::size_t>(r)].release_time, v("X", {p, r})}},
            Sense::GreaterEqual, 0);
  for (int p = 0; p < P; ++p) {
    std::vector<MipTerm> t{{1, v("Z", {p})}};
    for (int h = 0; h < H; ++h)
      t.push_back({-inst.surgeons[static_cast<std::size_t>(h)].release_time, v("Y", {p, h})});
    b.add(20, nm("c20", {p}), std::move(t), Sense::GreaterEqual, 0);
  }
  for (int p = 0; p < P; ++p)
    for (int q = 0; q < P; ++q) {
      if (p == q) continue;
      b.add(21, nm("c21", {p, q}),
            {{1, v("Z", {p})}, {-1, v("Zs", {q})}, {-LS, v("eps", {p})}, {-LS, v("eps", {q})},
             {LS, v("U", {p, q})}},
            Sense::GreaterEqual, m.strict_eps - 2 * LS);
    }
  for (int p = 0; p < P; ++p)
    for (int q = 0; q < P; ++q) {
      if (p == q) continue;
      b.add(22, nm("c22", {p, q}), {{1, v("Zs", {q})}, {-1, v("Z", {p})}, {-LS, v("U", {p, q})}},
            Sense::GreaterEqual, -LS);
    }
  for (int p = 0; p < P; ++p)
    for (int q = 0; q < P; ++q) {
      if (p == q) continue;
      for (int h = 0; h < H; ++h)
        b.add(23, nm("c23", {p, q, h}),
              {{1, v("Y", {p, h})}, {1, v("Y", {q, h})}, {1, v("U", {p, q})}, {1, v("U", {q, p})}},
              Sense::LessEqual, 3);
    }
  for (int p = 0; p < P; ++p)
    for (int q = 0; q < P; ++q) {
      if (p == q) continue;
      for (int r = 0; r < R; ++r)
        b.add(24, nm("c24", {p, q, r}),
              {{1, v("X", {p, r})}, {1, v("X", {q, r})}, {1, v("U", {p, q})}, {1, v("U", {q, p})}},
              Sense::LessEqual, 3);
    }
  for (int p = 0; p < P; ++p)
    b.add(25, nm("c25", {p}),
          {{1, v("Zs", {p})}, {-1, v("Z", {p})},
           {-inst.patients[static_cast<std::size_t>(p)].duration, v("eps", {p})}},
          Sense::Equal, 0);
  for (int p = 0; p < P; ++p)
    for (int q = 0; q < P; ++q) {
      if (p == q) continue;
      double gap = inst.patients[static_cast<std::size_t>(q)].setup +
                   inst.patients[static_cast<std::size_t>(p)].cleanup;
      for (int h = 0; h < H; ++h)
        b.add(26, nm("c26", {p, q, h}),
              {{1, v("Z", {q})}, {-1, v("Zs", {p})}, {-M, v("U", {p, q})}, {-M, v("Y", {p, h})},
               {-M, v("Y", {q, h})}},
              Sense::GreaterEqual, gap - 3 * M);
    }
  for (int p = 0; p < P; ++p)
    for (int q = 0; q < P; ++q) {
      if (p == q) continue;
      double gap = inst.patients[static_cast<std::size_t>(q)].setup +
                   inst.patients[static_cast<std::size_t>(p)].cleanup;
      for (int r = 0; r < R; ++r)
        b.add(27, nm("c27", {p, q, r}),
              {{1, v("Z", {q})}, {-1, v("Zs", {p})}, {-M, v("U", {p, q})}, {-M, v("X", {p, r})},
               {-M, v("X", {q, r})}},
              Sense::GreaterEqual, gap - 3 * M);
    }
  for (int p = 0; p < P; ++p) {
    const auto& pt = inst.patients[static_cast<std::size_t>(p)];
    for (int r = 0; r < R; ++r)
      b.add(28, nm("c28", {p, r}), {{1, v("X", {p, r})}}, Sense::LessEqual,
            inst.rooms[static_cast<std::size_t>(r)].equipped_for(pt.specialty) ? 1 : 0);
  }
  for (int p = 0; p < P; ++p) {
    const auto& pt = inst.patients[static_cast<std::size_t>(p)];
    for (int h = 0; h < H; ++h)
      b.add(29, nm("c29", {p, h}), {{1, v("Y", {p, h})}}, Sense::LessEqual,
            pt.eligible(h) ? 1 : 0);
  }
  for (int p = 0; p < P; ++p) {
    std::vector<MipTerm> t;
    for (int h = 0; h < H; ++h) t.push_back({1, v("Y", {p, h})});
    t.push_back({-1, v("eps", {p})});
    b.add(30, nm("c30", {p}), std::move(t), Sense::Equal, 0);
  }
  for (int p = 0; p < P; ++p) {
    const auto& pt = inst.patients[static_cast<std::size_t>(p)];
    if (pt.elective())
      b.add(31, nm("c31", {p}), {{1, v("Z", {p})}, {-hz.tau, v("eps", {p})}},
            Sense::GreaterEqual, 0);
  }
  for (int p = 0; p < P; ++p)
    if (inst.patients[static_cast<std::size_t>(p)].mandatory())
      b.add(32, nm("c32", {p}), {{1, v("eps", {p})}}, Sense::Equal, 1);
  for (int p = 0; p < P; ++p) {
    const auto& pt = inst.patients[static_cast<std::size_t>(p)];
    if (pt.cls == PatientClass::UnscheduledElective)
      b.add(33, nm("c33", {p}), {{1, v("Z", {p})}, {-(hz.tau + pt.notice), v("eps", {p})}},
            Sense::GreaterEqual, 0);
  }
  for (int p = 0; p < P; ++p) {
    const auto& pt = inst.patients[static_cast<std::size_t>(p)];
    if (pt.cls == PatientClass::NonElective)
      b.add(34, nm("c34", {p}), {{1, v("Z", {p})}, {-pt.arrival, v("eps", {p})}},
            Sense::GreaterEqual, 0);
  }
  for (int p = 0; p < P; ++p)
    if (inst.patients[static_cast<std::size_t>(p)].cls == PatientClass::UnscheduledElective)
      b.add(35, nm("c35", {p}), {{1, v("Zs", {p})}}, Sense::LessEqual, L);

  return m;
}

std::map<int, int> expected_family_counts(const Instance& inst) {
  const int P = static_cast<int>(inst.patients.size());
  const int R = static_cast<int>(inst.rooms.size());
  const int H = static_cast<int>(inst.surgeons.size());
  int elective = 0, mandatory = 0, unscheduled = 0, nonelective = 0;
  for (const auto& p : inst.patients) {
    elective += p.elective();
    mandatory += p.mandatory();
    unscheduled += p.cls == PatientClass::UnscheduledElective;
    nonelective += p.cls == PatientClass::NonElective;
  }
  const int pairs = P * (P - 1);
  std::map<int, int> c;
  for (int f : {3, 4, 5, 6, 7, 8, 9, 17, 20, 25, 30}) c[f] = P;
  c[10] = c[11] = 4 * P;
  c[18] = R;
  c[19] = c[28] = P * R;
  c[29] = P * H;
  c[21] = c[22] = pairs;
  c[23] = c[26] = pairs * H;
  c[24] = c[27] = pairs * R;
  c[31] = elective;
  c[32] = mandatory;
  c[33] = c[35] = unscheduled;
  c[34] = nonelective;
  std::erase_if(c, [](const auto& kv) { return kv.second == 0; });
  return c;
}

// ---------------------------------------------------------------------------

namespace {

void write_terms(std::ostringstream& os, const MipModel& m, const std::vector<MipTerm>& terms,
                 std::size_t indent) {
  std::size_t col = indent;
  bool first = true;
  for (const auto& t : terms) {
    std::string piece;
    double c = t.coef;
    if (first) {
      if (c < 0) piece += "- ";
    } else {
      piece += c < 0 ? " - " : " + ";
    }
    double a = std::abs(c);
    if (a != 1.0) piece += fmt_num(a) + " ";
    piece += m.variables[static_cast<std::size_t>(t.var)].name;
    if (col + piece.size() > 200) {
      os << "\n  ";
      col = 2;
    }
    os << piece;
    col += piece.size();
    first = false;
  }
  if (terms.empty()) os << "0 " << m.variables.front().name;
}

const char* sense_str(Sense s) {
  switch (s) {
    case Sense::LessEqual: return "<=";
    case Sense::GreaterEqual: return ">=";
    case Sense::Equal: return "=";
  }
  return "=";
}

}  // namespace

std::string write_lp(const MipModel& m) {
  std::ostringstream os;
  os << "\\ Surgical case sequencing model (schema scsp-1)\n";
  os << "\\ Strict ordering constraints c21 are written as >= with epsilon "
     << fmt_num(m.strict_eps) << " hours\n";
  os << "\\ Big-M = " << fmt_num(m.big_m) << "\n";
  os << "\\ Variables: " << m.variables.size() << "  Constraints: " << m.constraints.size()
     << "\n";
  os << "Maximize\n obj: ";
  write_terms(os, m, m.objective, 6);
  os << "\nSubject To\n";
  for (const auto& c : m.constraints) {
    os << " " << c.name << ": ";
    write_terms(os, m, c.terms, c.name.size() + 3);
    os << " " << sense_str(c.sense) << " " << fmt_num(c.rhs) << "\n";
  }
  // Sorted by name so a parsed model (whose variable order follows first
  // use) writes the same text.
  std::vector<const MipVariable*> vars;
  for (const auto& v : m.variables) vars.push_back(&v);
  std::sort(vars.begin(), vars.end(),
            [](const MipVariable* a, const MipVariable* b) { return a->name < b->name; });
  os << "Bounds\n";
  for (const auto* v : vars) {
    if (v->type == VarType::Binary) continue;
    if (std::isinf(v->lower) && std::isinf(v->upper)) {
      os << " " << v->name << " free\n";
    } else if (v->lower != 0.0 || !std::isinf(v->upper)) {
      os << " " << fmt_num(v->lower) << " <= " << v->name << " <= "
         << (std::isinf(v->upper) ? std::string("+inf") : fmt_num(v->upper)) << "\n";
    }
  }
  os << "Binaries\n";
  for (const auto* v : vars)
    if (v->type == VarType::Binary) os << " " << v->name << "\n";
  os << "End\n";
  return os.str();
}

namespace {

double parse_number(const std::string& tok) {
  if (tok == "+inf" || tok == "inf" || tok == "+infinity") return kInf;
  if (tok == "-inf" || tok == "-infinity") return -kInf;
  double v = 0.0;
  const char* first = tok.data();
  if (*first == '+') ++first;
  auto res = std::from_chars(first, tok.data() + tok.size(), v);
  if (res.ec != std::errc() || res.ptr != tok.data() + tok.size())
    throw StructuralError("bad number '" + tok + "' in LP text");
  return v;
}

bool is_number(const std::string& tok) {
  if (tok.empty()) return false;
  char c = tok[0];
  return std::isdigit(static_cast<unsigned char>(c)) || c == '.' ||
         ((c == '-' || c == '+') && tok.size() > 1);
}

// Parses "[+|-] [coef] name ..." up to a relation token or end.
std::vector<std::pair<double, std::string>> parse_expr(const std::vector<std::string>& toks,
                                                       std::size_t& i) {
  std::vector<std::pair<double, std::string>> out;
  double sign = 1.0;
  double coef = 1.0;
  while (i < toks.size()) {
    const auto& t = toks[i];
    if (t == "<=" || t == ">=" || t == "=" || t == "<" || t == ">") break;
    if (t == "+") {
      sign = 1.0;
    } else if (t == "-") {
      sign = -1.0;
    } else if (is_number(t)) {
      coef = parse_number(t);
    } else {
      out.emplace_back(sign * coef, t);
      sign = 1.0;
      coef = 1.0;
    }
    ++i;
  }
  return out;
}

std::vector<std::string> tokenize(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream is(s);
  std::string t;
  while (is >> t) out.push_back(t);
  return out;
}

}  // namespace

MipModel parse_lp(const std::string& text) {
  enum class Sec { None, Obj, Rows, Bounds, Binaries, Done };
  Sec sec = Sec::None;
  std::string obj_text, rows_text;
  std::vector<std::string> bound_lines, binary_names;
  double big_m = 24.0, strict_eps = 1e-6;

  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] == '\\') {
      auto num_after = [&](const std::string& key, double& out) {
        auto k = line.find(key);
        if (k != std::string::npos) out = parse_number(tokenize(line.substr(k + key.size())).at(0));
      };
      num_after("Big-M = ", big_m);
      num_after("epsilon ", strict_eps);
      continue;
    }
    std::string trimmed = line;
    trimmed.erase(0, trimmed.find_first_not_of(' '));
    if (trimmed == "Maximize") { sec = Sec::Obj; continue; }
    if (trimmed == "Subject To") { sec = Sec::Rows; continue; }
    if (trimmed == "Bounds") { sec = Sec::Bounds; continue; }
    if (trimmed == "Binaries") { sec = Sec::Binaries; continue; }
    if (trimmed == "End") { sec = Sec::Done; continue; }
    switch (sec) {
      case Sec::Obj: obj_text += " " + trimmed; break;
      case Sec::Rows: rows_text += " " + trimmed; break;
      case Sec::Bounds: bound_lines.push_back(trimmed); break;
      case Sec::Binaries:
        for (auto& t : tokenize(trimmed)) binary_names.push_back(t);
        break;
      default: throw StructuralError("LP text outside any section: '" + trimmed + "'");
    }
  }

  MipModel m;
  m.big_m = big_m;
  m.strict_eps = strict_eps;
  auto var_of = [&](const std::string& name) {
    auto it = m.by_name_.find(name);
    if (it != m.by_name_.end()) return it->second;
    return m.add_variable(name, VarType::Continuous, 0.0, kInf);
  };

  {
    auto toks = tokenize(obj_text);
    std::size_t i = 0;
    if (i < toks.size() && toks[i].back() == ':') ++i;
    for (auto& [c, n] : parse_expr(toks, i)) m.objective.push_back({c, var_of(n)});
  }
  {
    auto toks = tokenize(rows_text);
    std::size_t i = 0;
    while (i < toks.size()) {
      if (toks[i].back() != ':') throw StructuralError("expected constraint name at '" + toks[i] + "'");
      MipConstraint c;
      c.name = toks[i].substr(0, toks[i].size() - 1);
      auto us = c.name.find('_');
      c.family = std::stoi(c.name.substr(1, us == std::string::npos ? std::string::npos : us - 1));
      ++i;
      for (auto& [coef, n] : parse_expr(toks, i)) c.terms.push_back({coef, var_of(n)});
      if (i + 1 >= toks.size()) throw StructuralError("truncated constraint " + c.name);
      const auto& rel = toks[i];
      c.sense = rel == "=" ? Sense::Equal : (rel[0] == '<' ? Sense::LessEqual : Sense::GreaterEqual);
      c.rhs = parse_number(toks[i + 1]);
      i += 2;
      m.constraints.push_back(std::move(c));
    }
  }
  for (const auto& bl : bound_lines) {
    auto toks = tokenize(bl);
    if (toks.size() == 2 && toks[1] == "free") {
      auto& v = m.variables[static_cast<std::size_t>(var_of(toks[0]))];
      v.lower = -kInf;
      v.upper = kInf;
    } else if (toks.size() == 5 && toks[1] == "<=" && toks[3] == "<=") {
      auto& v = m.variables[static_cast<std::size_t>(var_of(toks[2]))];
      v.lower = parse_number(toks[0]);
      v.upper = parse_number(toks[4]);
    } else {
      throw StructuralError("unsupported bound line '" + bl + "'");
    }
  }
  for (const auto& n : binary_names) {
    auto& v = m.variables[static_cast<std::size_t>(var_of(n))];
    v.type = VarType::Binary;
    v.lower = 0.0;
    v.upper = 1.0;
  }
  return m;
}

// ---------------------------------------------------------------------------

MipAssignment assignment_from_schedule(const Schedule& schedule, const Instance& inst) {
  const auto& hz = inst.horizon;
  const int P = static_cast<int>(inst.patients.size());
  const int R = static_cast<int>(inst.rooms.size());
  const int H = static_cast<int>(inst.surgeons.size());
  MipAssignment a;
  std::vector<double> z(static_cast<std::size_t>(P), 0.0), zs(static_cast<std::size_t>(P), 0.0);

  for (int p = 0; p < P; ++p) {
    const auto* pl = schedule.find(p);
    const auto& pt = inst.patients[static_cast<std::size_t>(p)];
    a[nm("eps", {p})] = pl ? 1 : 0;
    for (int r = 0; r < R; ++r) a[nm("X", {p, r})] = (pl && pl->room == r) ? 1 : 0;
    for (int h = 0; h < H; ++h) a[nm("Y", {p, h})] = (pl && pl->surgeon == h) ? 1 : 0;
    if (pl) {
      z[static_cast<std::size_t>(p)] = pl->start;
      zs[static_cast<std::size_t>(p)] = pl->end;
    }
    double Z = z[static_cast<std::size_t>(p)], Zs = zs[static_cast<std::size_t>(p)];
    a[nm("Z", {p})] = Z;
    a[nm("Zs", {p})] = Zs;

    auto split = [&](int j, double value) {
      double plus = std::max(value, 0.0), minus = std::max(-value, 0.0);
      a[nm("dp", {j, p})] = plus;
      a[nm("dm", {j, p})] = minus;
      a[nm("e", {j, p})] = plus > 0.0 ? 1 : 0;
      return std::pair{plus, minus};
    };
    auto [d1p, d1m] = split(1, Zs + pt.cleanup);
    auto [d2p, d2m] = split(2, Z - pt.setup - hz.lambda);
    auto [d3p, d3m] = split(3, d1p - hz.lambda);
    auto [d4p, d4m] = split(4, hz.lambda - d2m);
    (void)d1m; (void)d2p; (void)d3p; (void)d4m;
    a[nm("Omega", {p})] = pl ? hz.lambda - d3m - d4p : 0.0;
  }
  for (int p = 0; p < P; ++p)
    for (int q = 0; q < P; ++q) {
      if (p == q) continue;
      bool both = schedule.included(p) && schedule.included(q);
      bool before = z[static_cast<std::size_t>(p)] - zs[static_cast<std::size_t>(q)] < 1e-6;
      a[nm("U", {p, q})] = (both && before) ? 1 : 0;
    }
  return a;
}

MipEvaluation evaluate(const MipModel& m, const MipAssignment& assignment, double tol) {
  MipEvaluation ev;
  std::vector<double> x(m.variables.size(), 0.0);
  for (std::size_t i = 0; i < m.variables.size(); ++i) {
    const auto& v = m.variables[i];
    auto it = assignment.find(v.name);
    if (it == assignment.end()) throw StructuralError("assignment lacks variable " + v.name);
    x[i] = it->second;
    bool bad = x[i] < v.lower - tol || x[i] > v.upper + tol;
    if (v.type == VarType::Binary && std::abs(x[i] - std::round(x[i])) > tol) bad = true;
    if (bad) {
      ev.feasible = false;
      ev.violated.push_back("domain:" + v.name);
    }
  }
  for (const auto& c : m.constraints) {
    double lhs = 0.0;
    for (const auto& t : c.terms) lhs += t.coef * x[static_cast<std::size_t>(t.var)];
    double scale = tol * std::max(1.0, std::abs(c.rhs));
    bool ok = c.sense == Sense::LessEqual      ? lhs <= c.rhs + scale
              : c.sense == Sense::GreaterEqual ? lhs >= c.rhs - scale
                                               : std::abs(lhs - c.rhs) <= scale;
    if (!ok) {
      ev.feasible = false;
      ev.violated.push_back(c.name);
    }
  }
  for (const auto& t : m.objective) ev.objective += t.coef * x[static_cast<std::size_t>(t.var)];
  return ev;
}

}  // namespace scsp
