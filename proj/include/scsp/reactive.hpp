#pragma once

#include <array>
#include <map>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "scsp/heuristics.hpp"
#include "scsp/json_io.hpp"

namespace scsp {

enum class DisruptionKind { D1 = 1, D2, D3, D4, D5, D6, D7 };
enum class Reaction { R0, R1, R1a, R1b, R2 };
enum class UpdateStrategy { UP1, UP2, UP3, UP4, UC, UA };

inline constexpr std::array<DisruptionKind, 7> kAllKinds{
    DisruptionKind::D1, DisruptionKind::D2, DisruptionKind::D3, DisruptionKind::D4,
    DisruptionKind::D5, DisruptionKind::D6, DisruptionKind::D7};
inline constexpr std::array<UpdateStrategy, 6> kAllStrategies{
    UpdateStrategy::UP1, UpdateStrategy::UP2, UpdateStrategy::UP3,
    UpdateStrategy::UP4, UpdateStrategy::UC,  UpdateStrategy::UA};

std::string_view to_string(DisruptionKind k);
std::string_view to_string(Reaction r);
std::string_view to_string(UpdateStrategy s);
DisruptionKind disruption_kind_from_string(std::string_view s);
Reaction reaction_from_string(std::string_view s);
UpdateStrategy strategy_from_string(std::string_view s);

/// Tick period in hours; 0 for the event-driven strategies.
Hours period(UpdateStrategy s);
bool in_hours_only(UpdateStrategy s);

std::span<const Reaction> legal_reactions(DisruptionKind k);
bool is_legal(DisruptionKind k, Reaction r);

struct Disruption {
  DisruptionKind kind = DisruptionKind::D1;
  Instant at = 0.0;
  PatientId patient = -1;
  RoomId room = -1;
  SurgeonId surgeon = -1;
  Hours expected = 0.0;  // D3/D4 only
  Hours actual = 0.0;

  Hours deviation() const { return actual - expected; }

  static Disruption arrival(PatientId p, Instant at);
  static Disruption breakdown(RoomId r, Instant at);
  static Disruption duration_change(const Placement& pl, Hours expected, Hours actual, Instant at);
  static Disruption cancellation(const Placement& pl, Instant at);
  static Disruption expected_undertime(RoomId r, Instant at);
  static Disruption expected_overtime(RoomId r, Instant at);
};

Json to_json(const Disruption& d);

/// `queued_nonelectives` counts arrivals deferred by an earlier do-nothing
/// reaction; they count towards the adaptive waiting threshold.
bool should_update(UpdateStrategy strategy, std::span<const Disruption> pending, Instant now,
                   const HorizonParams& horizon = {}, int queued_nonelectives = 0);

/// Probability vectors per (strategy, disruption kind), aligned with
/// legal_reactions(kind).
class ReactionPolicy {
 public:
  static ReactionPolicy tuned_defaults();
  /// Do-nothing where legal; uniform over legal repairs for D2 and D4.
  static ReactionPolicy prior();

  bool has(UpdateStrategy s, DisruptionKind k) const;
  const std::vector<double>& vector(UpdateStrategy s, DisruptionKind k) const;
  double probability(UpdateStrategy s, DisruptionKind k, Reaction r) const;
  /// Normalises a non-negative vector of positive sum; throws ConfigError
  /// otherwise or when an illegal reaction gets mass.
  void set(UpdateStrategy s, DisruptionKind k, std::vector<double> weights);

  bool operator==(const ReactionPolicy&) const = default;

 private:
  std::map<std::pair<UpdateStrategy, DisruptionKind>, std::vector<double>> cells_;
};

Json to_json(const ReactionPolicy& policy);
/// With `fill_missing`, absent cells take the prior; otherwise an absent
/// cell is a ConfigError naming it.
ReactionPolicy policy_from_json(const Json& j, bool fill_missing = true);

Reaction sample_reaction(const ReactionPolicy& policy, UpdateStrategy s, DisruptionKind k,
                         std::mt19937_64& rng);

/// Applies one reaction. Placements that started before `state.now` are
/// never touched. Add-electives that no longer fit go back to `pool`.
/// Throws ConfigError for an illegal (kind, reaction) pair and
/// UnplaceableError when a mandatory patient has nowhere to go even after a
/// full rebuild.
void react(SchedulingState& state, const Disruption& d, Reaction r, const Instance& instance,
           AddElectivePool& pool);

/// Convenience form: P_U is every unscheduled elective not in the schedule.
Schedule react(Schedule schedule, const Disruption& d, Reaction r, const Instance& instance,
               Instant now);

/// D7 for each room with remaining work that ends after lambda, then D6 for
/// each working room whose idle tail can take an add-elective.
std::vector<Disruption> detect_derived(const SchedulingState& state, const Instance& instance,
                                       const AddElectivePool& pool);

struct ReactionStep {
  Disruption disruption;
  Reaction reaction = Reaction::R0;
};

/// One simulation's reactive scheduler for a single day.
class ReactiveEngine {
 public:
  ReactiveEngine(const Instance& instance, Schedule initial, AddElectivePool pool,
                 const ReactionPolicy& policy, UpdateStrategy strategy);

  /// Queued arrivals first, then each pending disruption, then one round of
  /// derived disruptions (D7 before D6).
  std::vector<ReactionStep> update(std::span<const Disruption> pending, Instant now,
                                   std::mt19937_64& rng);

  SchedulingState& state() { return state_; }
  const SchedulingState& state() const { return state_; }
  AddElectivePool& pool() { return pool_; }
  const std::vector<PatientId>& queued() const { return queued_; }

 private:
  const Instance& inst_;
  SchedulingState state_;
  AddElectivePool pool_;
  const ReactionPolicy& policy_;
  UpdateStrategy strategy_;
  std::vector<PatientId> queued_;
};

}  // namespace scsp
