#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "slakit/catalog.hpp"
#include "slakit/timestamp.hpp"
#include "slakit/vocabulary.hpp"

namespace slakit {

enum class ConstraintScope { application, activity, layer, model };

std::string_view to_string(ConstraintScope s);

/// number (numeric and percentage metrics), boolean, or string (enum and
/// string metrics).
using ConstraintValue = std::variant<double, bool, std::string>;

struct Constraint {
  std::string metric_id;
  ConstraintScope scope = ConstraintScope::application;
  Priority priority = Priority::normal;
  Operator op = Operator::eq;
  ConstraintValue value;
  std::string unit;  // empty means "no unit"

  bool operator==(const Constraint&) const = default;
};

struct SlaHeader {
  std::string application_type;
  UtcSeconds agreement_start;
  UtcSeconds agreement_end;

  bool operator==(const SlaHeader&) const = default;
};

enum class FindingCode {
  operator_not_allowed,
  value_out_of_range,
  value_type_mismatch,
  unit_mismatch,
  enum_value_unknown,
  unknown_metric,
  unknown_activity,
  duplicate_node_id,
  dangling_edge,
  workflow_cycle,
  empty_workflow,
  window_inverted,
  schema_version_unsupported,
  mapping_mismatch,
};

/// Registry name, e.g. "OPERATOR_NOT_ALLOWED".
std::string_view to_string(FindingCode code);

enum class Severity { error, warning };

std::string_view to_string(Severity s);

struct Finding {
  FindingCode code = FindingCode::unknown_metric;
  Severity severity = Severity::error;
  std::string path;
  std::string message;

  bool operator==(const Finding&) const = default;
};

/// Orders by (path, code name), the order every validator reports in.
bool finding_less(const Finding& a, const Finding& b);
void sort_findings(std::vector<Finding>& findings);

/// Checks every constraint rule against `def` and returns one finding per
/// violated rule, sorted. Findings carry `path` verbatim.
std::vector<Finding> check_constraint(const MetricDefinition& def, const Constraint& c,
                                      const std::string& path = "constraint");

class ConstraintError : public std::runtime_error {
 public:
  explicit ConstraintError(std::vector<Finding> findings);

  /// Code of the first (sorted) finding.
  FindingCode code() const noexcept { return findings_.front().code; }
  const std::vector<Finding>& findings() const noexcept { return findings_; }

 private:
  std::vector<Finding> findings_;
};

/// Builds a constraint on `def`; throws ConstraintError when
/// check_constraint would report anything.
Constraint make_constraint(const MetricDefinition& def, ConstraintScope scope, Priority priority,
                           Operator op, ConstraintValue value, std::string unit);

}  // namespace slakit
