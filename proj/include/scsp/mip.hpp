#pragma once

#include <map>
#include <string>
#include <vector>

#include "scsp/domain.hpp"

namespace scsp {

/// Symbolic linearised sequencing model: objective sum(Omega_p), the
/// min/max linearisation families (3)-(12) and the sequencing constraints
/// (17)-(35). Constraint numbers are kept as `family` for auditing.
enum class VarType { Continuous, Binary };
enum class Sense { LessEqual, GreaterEqual, Equal };

struct MipVariable {
  std::string name;
  VarType type = VarType::Continuous;
  double lower = 0.0;
  double upper = std::numeric_limits<double>::infinity();
};

struct MipTerm {
  double coef = 0.0;
  int var = 0;
};

struct MipConstraint {
  std::string name;
  int family = 0;
  std::vector<MipTerm> terms;
  Sense sense = Sense::LessEqual;
  double rhs = 0.0;
};

struct MipModel {
  std::vector<MipVariable> variables;
  std::vector<MipConstraint> constraints;
  std::vector<MipTerm> objective;  // maximised
  double big_m = 24.0;
  double strict_eps = 1e-6;

  int var_index(const std::string& name) const;
  int add_variable(std::string name, VarType type, double lower, double upper);
  std::map<int, int> family_counts() const;

 private:
  std::map<std::string, int> by_name_;
  friend MipModel parse_lp(const std::string& text);
};

/// Throws ConfigError when the instance has no working room.
MipModel build_mip(const Instance& instance);

/// Closed-form constraint count per family for an instance's dimensions.
std::map<int, int> expected_family_counts(const Instance& instance);

/// CPLEX-LP text; byte-stable for a given model.
std::string write_lp(const MipModel& model);

/// Reads the LP dialect produced by write_lp.
MipModel parse_lp(const std::string& text);

using MipAssignment = std::map<std::string, double>;

/// Values for every model variable induced by a concrete schedule: inclusion,
/// room/surgeon one-hots, ordering indicators, times and the linearisation
/// auxiliaries. Excluded patients get Z = Z* = 0.
MipAssignment assignment_from_schedule(const Schedule& schedule, const Instance& instance);

struct MipEvaluation {
  bool feasible = true;
  double objective = 0.0;
  std::vector<std::string> violated;
};

MipEvaluation evaluate(const MipModel& model, const MipAssignment& assignment,
                       double tolerance = 1e-7);

}  // namespace scsp
