#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace fkpp {

enum class ErrorKind {
  ParameterDomain,
  Regime,
  Domain,
  Numeric,
  Stiffness,
  Feasibility,
  Schedule,
  Inconclusive,
  Config,
  Audit,
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

#define FKPP_ERROR_CLASS(Name, Kind)                                             \
  class Name : public Error {                                                    \
   public:                                                                       \
    explicit Name(const std::string& what) : Error(ErrorKind::Kind, what) {}     \
  };

FKPP_ERROR_CLASS(ParameterError, ParameterDomain)
FKPP_ERROR_CLASS(RegimeError, Regime)
FKPP_ERROR_CLASS(DomainError, Domain)
FKPP_ERROR_CLASS(NumericError, Numeric)
FKPP_ERROR_CLASS(ScheduleError, Schedule)
FKPP_ERROR_CLASS(AuditError, Audit)

#undef FKPP_ERROR_CLASS

class StiffnessError : public Error {
 public:
  StiffnessError(const std::string& what, double t, double dt)
      : Error(ErrorKind::Stiffness, what), t(t), dt(dt) {}
  double t;
  double dt;
};

class FeasibilityError : public Error {
 public:
  FeasibilityError(const std::string& what, double worstXi, double worstValue)
      : Error(ErrorKind::Feasibility, what), worstXi(worstXi), worstValue(worstValue) {}
  double worstXi;
  double worstValue;
};

// Shooting ran out of budget without a SUB/SUPER verdict; keeps the last trajectory.
class InconclusiveError : public Error {
 public:
  InconclusiveError(const std::string& what, double c, std::vector<std::pair<double, double>> trajectory)
      : Error(ErrorKind::Inconclusive, what), c(c), trajectory(std::move(trajectory)) {}
  double c;
  std::vector<std::pair<double, double>> trajectory;
};

struct ConfigIssue {
  int line = 0;  // 0 when not tied to a line
  std::string field;
  std::string message;
};

class ConfigError : public Error {
 public:
  explicit ConfigError(std::vector<ConfigIssue> issues);
  std::vector<ConfigIssue> issues;
};

// Process exit code for an error of the given kind.
int exit_code_for(ErrorKind kind);

}  // namespace fkpp
