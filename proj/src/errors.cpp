#include "fkpp/errors.hpp"

namespace fkpp {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::ParameterDomain: return "parameter_domain";
    case ErrorKind::Regime: return "regime";
    case ErrorKind::Domain: return "domain";
    case ErrorKind::Numeric: return "numeric";
    case ErrorKind::Stiffness: return "stiffness";
    case ErrorKind::Feasibility: return "feasibility";
    case ErrorKind::Schedule: return "schedule";
    case ErrorKind::Inconclusive: return "inconclusive";
    case ErrorKind::Config: return "config";
    case ErrorKind::Audit: return "audit";
  }
  return "unknown";
}

static std::string join_issues(const std::vector<ConfigIssue>& issues) {
  std::string out = "invalid configuration";
  for (const auto& is : issues) {
    out += "\n  ";
    if (is.line > 0) out += "line " + std::to_string(is.line) + ": ";
    if (!is.field.empty()) out += is.field + ": ";
    out += is.message;
  }
  return out;
}

ConfigError::ConfigError(std::vector<ConfigIssue> list)
    : Error(ErrorKind::Config, join_issues(list)), issues(std::move(list)) {}

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Config: return 2;
    case ErrorKind::Audit: return 4;
    default: return 3;
  }
}

}  // namespace fkpp
