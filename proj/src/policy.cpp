#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "scsp/reactive.hpp"

namespace scsp {

namespace {

constexpr std::array<std::string_view, 7> kKindNames{"D1", "D2", "D3", "D4", "D5", "D6", "D7"};
constexpr std::array<std::string_view, 5> kReactionNames{"R0", "R1", "R1a", "R1b", "R2"};
constexpr std::array<std::string_view, 6> kStrategyNames{"UP1", "UP2", "UP3", "UP4", "UC", "UA"};

constexpr std::array<Reaction, 3> kAppendStyle{Reaction::R0, Reaction::R1, Reaction::R2};
constexpr std::array<Reaction, 2> kBreakdown{Reaction::R1, Reaction::R2};
constexpr std::array<Reaction, 4> kShiftOrRebuild{Reaction::R0, Reaction::R1a, Reaction::R1b,
                                                   Reaction::R2};
constexpr std::array<Reaction, 3> kOvertime{Reaction::R1a, Reaction::R1b, Reaction::R2};

std::size_t kind_index(DisruptionKind k) { return static_cast<std::size_t>(k) - 1; }

template <std::size_t N>
std::size_t lookup(const std::array<std::string_view, N>& names, std::string_view s,
                   const char* what) {
  for (std::size_t i = 0; i < N; ++i)
    if (names[i] == s) return i;
  throw ConfigError("unknown " + std::string(what) + " '" + std::string(s) + "'");
}

}  // namespace

std::string_view to_string(DisruptionKind k) { return kKindNames.at(kind_index(k)); }
std::string_view to_string(Reaction r) { return kReactionNames.at(static_cast<std::size_t>(r)); }
std::string_view to_string(UpdateStrategy s) {
  return kStrategyNames.at(static_cast<std::size_t>(s));
}

DisruptionKind disruption_kind_from_string(std::string_view s) {
  return static_cast<DisruptionKind>(lookup(kKindNames, s, "disruption kind") + 1);
}
Reaction reaction_from_string(std::string_view s) {
  return static_cast<Reaction>(lookup(kReactionNames, s, "reaction"));
}
UpdateStrategy strategy_from_string(std::string_view s) {
  return static_cast<UpdateStrategy>(lookup(kStrategyNames, s, "update strategy"));
}

Hours period(UpdateStrategy s) {
  switch (s) {
    case UpdateStrategy::UP1:
    case UpdateStrategy::UP3:
      return 0.25;
    case UpdateStrategy::UP2:
    case UpdateStrategy::UP4:
      return 0.5;
    default:
      return 0.0;
  }
}

bool in_hours_only(UpdateStrategy s) {
  return s == UpdateStrategy::UP3 || s == UpdateStrategy::UP4;
}

std::span<const Reaction> legal_reactions(DisruptionKind k) {
  switch (k) {
    case DisruptionKind::D2:
      return kBreakdown;
    case DisruptionKind::D3:
    case DisruptionKind::D7:
      return kShiftOrRebuild;
    case DisruptionKind::D4:
      return kOvertime;
    default:
      return kAppendStyle;
  }
}

bool is_legal(DisruptionKind k, Reaction r) {
  auto legal = legal_reactions(k);
  return std::find(legal.begin(), legal.end(), r) != legal.end();
}

Disruption Disruption::arrival(PatientId p, Instant at) {
  Disruption d;
  d.kind = DisruptionKind::D1;
  d.at = at;
  d.patient = p;
  return d;
}

Disruption Disruption::breakdown(RoomId r, Instant at) {
  Disruption d;
  d.kind = DisruptionKind::D2;
  d.at = at;
  d.room = r;
  return d;
}

Disruption Disruption::duration_change(const Placement& pl, Hours expected, Hours actual,
                                       Instant at) {
  Disruption d;
  d.kind = actual < expected ? DisruptionKind::D3 : DisruptionKind::D4;
  d.at = at;
  d.patient = pl.patient;
  d.room = pl.room;
  d.surgeon = pl.surgeon;
  d.expected = expected;
  d.actual = actual;
  return d;
}

Disruption Disruption::cancellation(const Placement& pl, Instant at) {
  Disruption d;
  d.kind = DisruptionKind::D5;
  d.at = at;
  d.patient = pl.patient;
  d.room = pl.room;
  d.surgeon = pl.surgeon;
  return d;
}

Disruption Disruption::expected_undertime(RoomId r, Instant at) {
  Disruption d;
  d.kind = DisruptionKind::D6;
  d.at = at;
  d.room = r;
  return d;
}

Disruption Disruption::expected_overtime(RoomId r, Instant at) {
  Disruption d;
  d.kind = DisruptionKind::D7;
  d.at = at;
  d.room = r;
  return d;
}

Json to_json(const Disruption& d) {
  Json j;
  j["kind"] = std::string(to_string(d.kind));
  j["at"] = d.at;
  if (d.patient >= 0) j["patient"] = d.patient;
  if (d.room >= 0) j["room"] = d.room;
  if (d.surgeon >= 0) j["surgeon"] = d.surgeon;
  if (d.kind == DisruptionKind::D3 || d.kind == DisruptionKind::D4) {
    j["expected"] = d.expected;
    j["actual"] = d.actual;
  }
  return j;
}

namespace {

bool on_tick(Instant now, Hours p) {
  double k = now / p;
  return std::abs(k - std::round(k)) < 1e-9;
}

}  // namespace

bool should_update(UpdateStrategy s, std::span<const Disruption> pending, Instant now,
                   const HorizonParams& hz, int queued_nonelectives) {
  auto any = [&](auto pred) { return std::any_of(pending.begin(), pending.end(), pred); };
  auto kind_is = [](DisruptionKind k) {
    return [k](const Disruption& d) { return d.kind == k; };
  };
  switch (s) {
    case UpdateStrategy::UC:
      return !pending.empty();
    case UpdateStrategy::UA: {
      auto arrivals = std::count_if(pending.begin(), pending.end(), kind_is(DisruptionKind::D1));
      if (arrivals + queued_nonelectives >= 3) return true;
      return any([](const Disruption& d) {
        switch (d.kind) {
          case DisruptionKind::D2:
          case DisruptionKind::D4:
          case DisruptionKind::D5:
            return true;
          case DisruptionKind::D3:
            return d.expected - d.actual > 0.5;
          default:
            return false;
        }
      });
    }
    default: {
      if (any(kind_is(DisruptionKind::D2)) || any(kind_is(DisruptionKind::D4))) return true;
      if (in_hours_only(s) && (now < hz.tau - kTimeEps || now > hz.lambda + kTimeEps))
        return false;
      return on_tick(now, period(s));
    }
  }
}

namespace {

using Cell = std::map<Reaction, double>;

// Tuned probabilities; rows are disruptions, one cell per strategy.
ReactionPolicy build_tuned() {
  using enum UpdateStrategy;
  using enum DisruptionKind;
  using R = Reaction;
  const std::map<DisruptionKind, std::map<UpdateStrategy, Cell>> table{
      {D1,
       {{UA, {{R::R0, 1}}},
        {UC, {{R::R1, 1}}},
        {UP1, {{R::R0, 1}}},
        {UP2, {{R::R0, 1}}},
        {UP3, {{R::R0, 1}}},
        {UP4, {{R::R0, 1}}}}},
      {D2,
       {{UA, {{R::R2, 1}}},
        {UC, {{R::R2, 1}}},
        {UP1, {{R::R1, 1}}},
        {UP2, {{R::R1, 1}}},
        {UP3, {{R::R2, 1}}},
        {UP4, {{R::R1, 0.5}, {R::R2, 0.5}}}}},
      {D3,
       {{UA, {{R::R2, 1}}},
        {UC, {{R::R0, 0.5}, {R::R2, 0.5}}},
        {UP1, {{R::R1a, 1}}},
        {UP2, {{R::R2, 1}}},
        {UP3, {{R::R0, 0.5}, {R::R1a, 0.5}}},
        {UP4, {{R::R1a, 1}}}}},
      {D4,
       {{UA, {{R::R1a, 0.33}, {R::R1b, 0.33}, {R::R2, 0.33}}},
        {UC, {{R::R1a, 0.5}, {R::R1b, 0.25}, {R::R2, 0.25}}},
        {UP1, {{R::R1a, 1}}},
        {UP2, {{R::R1a, 0.33}, {R::R1b, 0.33}, {R::R2, 0.33}}},
        {UP3, {{R::R1a, 1}}},
        {UP4, {{R::R1a, 1}}}}},
      {D5,
       {{UA, {{R::R0, 0.5}, {R::R1, 0.5}}},
        {UC, {{R::R0, 1}}},
        {UP1, {{R::R1, 1}}},
        {UP2, {{R::R1, 1}}},
        {UP3, {{R::R1, 1}}},
        {UP4, {{R::R1, 1}}}}},
      {D6,
       {{UA, {{R::R1, 1}}},
        {UC, {{R::R0, 0.5}, {R::R1, 0.5}}},
        {UP1, {{R::R0, 0.25}, {R::R1, 0.5}, {R::R2, 0.25}}},
        {UP2, {{R::R1, 0.5}, {R::R2, 0.5}}},
        {UP3, {{R::R1, 0.5}, {R::R2, 0.5}}},
        {UP4, {{R::R0, 0.5}, {R::R1, 0.5}}}}},
      {D7,
       {{UA, {{R::R1b, 1}}},
        {UC, {{R::R1b, 1}}},
        {UP1, {{R::R0, 1}}},
        {UP2, {{R::R1a, 1}}},
        {UP3, {{R::R2, 1}}},
        {UP4, {{R::R0, 1}}}}},
  };
  ReactionPolicy p;
  for (const auto& [kind, row] : table) {
    for (const auto& [strategy, cell] : row) {
      auto legal = legal_reactions(kind);
      std::vector<double> w(legal.size(), 0.0);
      for (const auto& [r, prob] : cell)
        w[static_cast<std::size_t>(std::find(legal.begin(), legal.end(), r) - legal.begin())] =
            prob;
      p.set(strategy, kind, std::move(w));
    }
  }
  return p;
}

std::vector<double> prior_vector(DisruptionKind k) {
  auto legal = legal_reactions(k);
  std::vector<double> w(legal.size(), 0.0);
  if (legal.front() == Reaction::R0)
    w.front() = 1.0;
  else
    std::fill(w.begin(), w.end(), 1.0 / static_cast<double>(w.size()));
  return w;
}

std::string cell_name(UpdateStrategy s, DisruptionKind k) {
  return std::string(to_string(s)) + "/" + std::string(to_string(k));
}

}  // namespace

ReactionPolicy ReactionPolicy::tuned_defaults() {
  static const ReactionPolicy tuned = build_tuned();
  return tuned;
}

ReactionPolicy ReactionPolicy::prior() {
  ReactionPolicy p;
  for (auto s : kAllStrategies)
    for (auto k : kAllKinds) p.set(s, k, prior_vector(k));
  return p;
}

bool ReactionPolicy::has(UpdateStrategy s, DisruptionKind k) const {
  return cells_.count({s, k}) != 0;
}

const std::vector<double>& ReactionPolicy::vector(UpdateStrategy s, DisruptionKind k) const {
  auto it = cells_.find({s, k});
  if (it == cells_.end()) throw ConfigError("policy has no cell " + cell_name(s, k));
  return it->second;
}

double ReactionPolicy::probability(UpdateStrategy s, DisruptionKind k, Reaction r) const {
  auto legal = legal_reactions(k);
  auto it = std::find(legal.begin(), legal.end(), r);
  if (it == legal.end()) return 0.0;
  return vector(s, k)[static_cast<std::size_t>(it - legal.begin())];
}

void ReactionPolicy::set(UpdateStrategy s, DisruptionKind k, std::vector<double> w) {
  if (w.size() != legal_reactions(k).size())
    throw ConfigError("policy cell " + cell_name(s, k) + " has the wrong length");
  double sum = 0.0;
  for (double x : w) {
    if (!(x >= 0.0) || !std::isfinite(x))
      throw ConfigError("policy cell " + cell_name(s, k) + " has a negative entry");
    sum += x;
  }
  if (!(sum > 0.0)) throw ConfigError("policy cell " + cell_name(s, k) + " sums to zero");
  for (double& x : w) x /= sum;
  cells_[{s, k}] = std::move(w);
}

Json to_json(const ReactionPolicy& policy) {
  Json j;
  j["schema"] = kSchemaVersion;
  for (auto k : kAllKinds) {
    Json row;
    auto legal = legal_reactions(k);
    for (auto s : kAllStrategies) {
      if (!policy.has(s, k)) continue;
      Json cell = Json::object();
      const auto& w = policy.vector(s, k);
      for (std::size_t i = 0; i < legal.size(); ++i)
        if (w[i] > 0.0) cell[std::string(to_string(legal[i]))] = w[i];
      row[std::string(to_string(s))] = cell;
    }
    j[std::string(to_string(k))] = row;
  }
  return j;
}

ReactionPolicy policy_from_json(const Json& j, bool fill_missing) {
  if (!j.is_object()) throw ConfigError("policy must be a JSON object");
  ReactionPolicy p;
  for (auto k : kAllKinds) {
    auto legal = legal_reactions(k);
    const std::string kname(to_string(k));
    for (auto s : kAllStrategies) {
      const std::string sname(to_string(s));
      if (!j.contains(kname) || !j[kname].contains(sname)) {
        if (!fill_missing) throw ConfigError("policy is missing cell " + cell_name(s, k));
        p.set(s, k, prior_vector(k));
        continue;
      }
      const Json& cell = j[kname][sname];
      if (!cell.is_object()) throw ConfigError("policy cell " + cell_name(s, k) + " malformed");
      std::vector<double> w(legal.size(), 0.0);
      for (const auto& [rname, prob] : cell.items()) {
        Reaction r = reaction_from_string(rname);
        if (!is_legal(k, r)) {
          if (prob.get<double>() == 0.0) continue;
          throw ConfigError("reaction " + rname + " is not legal for " + kname);
        }
        w[static_cast<std::size_t>(std::find(legal.begin(), legal.end(), r) - legal.begin())] =
            prob.get<double>();
      }
      p.set(s, k, std::move(w));
    }
  }
  return p;
}

Reaction sample_reaction(const ReactionPolicy& policy, UpdateStrategy s, DisruptionKind k,
                         std::mt19937_64& rng) {
  const auto& w = policy.vector(s, k);
  auto legal = legal_reactions(k);
  double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
  double acc = 0.0;
  std::size_t last = 0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (w[i] <= 0.0) continue;
    last = i;
    acc += w[i];
    if (u < acc) return legal[i];
  }
  return legal[last];
}

}  // namespace scsp
