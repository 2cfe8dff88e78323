#include "slakit/model.hpp"

#include <algorithm>
#include <sstream>

namespace slakit {

std::string_view to_string(ConstraintScope s) {
  switch (s) {
    case ConstraintScope::application: return "application";
    case ConstraintScope::activity: return "activity";
    case ConstraintScope::layer: return "layer";
    case ConstraintScope::model: return "model";
  }
  return "?";
}

std::string_view to_string(FindingCode code) {
  switch (code) {
    case FindingCode::operator_not_allowed: return "OPERATOR_NOT_ALLOWED";
    case FindingCode::value_out_of_range: return "VALUE_OUT_OF_RANGE";
    case FindingCode::value_type_mismatch: return "VALUE_TYPE_MISMATCH";
    case FindingCode::unit_mismatch: return "UNIT_MISMATCH";
    case FindingCode::enum_value_unknown: return "ENUM_VALUE_UNKNOWN";
    case FindingCode::unknown_metric: return "UNKNOWN_METRIC";
    case FindingCode::unknown_activity: return "UNKNOWN_ACTIVITY";
    case FindingCode::duplicate_node_id: return "DUPLICATE_NODE_ID";
    case FindingCode::dangling_edge: return "DANGLING_EDGE";
    case FindingCode::workflow_cycle: return "WORKFLOW_CYCLE";
    case FindingCode::empty_workflow: return "EMPTY_WORKFLOW";
    case FindingCode::window_inverted: return "WINDOW_INVERTED";
    case FindingCode::schema_version_unsupported: return "SCHEMA_VERSION_UNSUPPORTED";
    case FindingCode::mapping_mismatch: return "MAPPING_MISMATCH";
  }
  return "?";
}

std::string_view to_string(Severity s) { return s == Severity::error ? "error" : "warning"; }

bool finding_less(const Finding& a, const Finding& b) {
  if (a.path != b.path) return a.path < b.path;
  return to_string(a.code) < to_string(b.code);
}

void sort_findings(std::vector<Finding>& findings) {
  std::stable_sort(findings.begin(), findings.end(), finding_less);
}

namespace {

bool value_has_type(ValueType type, const ConstraintValue& v) {
  switch (type) {
    case ValueType::numeric:
    case ValueType::percentage: return std::holds_alternative<double>(v);
    case ValueType::boolean: return std::holds_alternative<bool>(v);
    case ValueType::enumeration:
    case ValueType::string: return std::holds_alternative<std::string>(v);
  }
  return false;
}

std::string describe_value(const ConstraintValue& v) {
  if (const auto* d = std::get_if<double>(&v)) {
    std::ostringstream ss;
    ss << *d;
    return ss.str();
  }
  if (const auto* b = std::get_if<bool>(&v)) return *b ? "true" : "false";
  return "'" + std::get<std::string>(v) + "'";
}

std::string unit_label(const std::string& unit) { return unit.empty() ? "none" : "'" + unit + "'"; }

}  // namespace

std::vector<Finding> check_constraint(const MetricDefinition& def, const Constraint& c,
                                      const std::string& path) {
  std::vector<Finding> out;
  auto add = [&](FindingCode code, std::string message) {
    out.push_back({code, Severity::error, path, std::move(message)});
  };

  if (c.metric_id != def.metric_id) {
    add(FindingCode::unknown_metric,
        "constraint names '" + c.metric_id + "' but was checked against '" + def.metric_id + "'");
  }
  if (!def.allows(c.op)) {
    add(FindingCode::operator_not_allowed,
        "operator " + std::string(to_string(c.op)) + " is not allowed for " + def.metric_id);
  }
  if (!value_has_type(def.value_type, c.value)) {
    add(FindingCode::value_type_mismatch, "value " + describe_value(c.value) + " is not of type " +
                                              std::string(to_string(def.value_type)));
  } else if (def.numeric_range && !def.numeric_range->contains(std::get<double>(c.value))) {
    std::ostringstream ss;
    ss << "value " << describe_value(c.value) << " outside [" << def.numeric_range->min << ", "
       << def.numeric_range->max << "]";
    add(FindingCode::value_out_of_range, ss.str());
  } else if (def.value_type == ValueType::enumeration &&
             std::find(def.enum_values.begin(), def.enum_values.end(),
                       std::get<std::string>(c.value)) == def.enum_values.end()) {
    add(FindingCode::enum_value_unknown,
        "value " + describe_value(c.value) + " is not one of the values of " + def.metric_id);
  }
  if (c.unit != def.unit) {
    add(FindingCode::unit_mismatch,
        "unit " + unit_label(c.unit) + " does not match " + unit_label(def.unit));
  }
  sort_findings(out);
  return out;
}

namespace {

std::string join_messages(const std::vector<Finding>& findings) {
  std::string out;
  for (const auto& f : findings) {
    if (!out.empty()) out += "; ";
    out += std::string(to_string(f.code)) + ": " + f.message;
  }
  return out;
}

}  // namespace

ConstraintError::ConstraintError(std::vector<Finding> findings)
    : std::runtime_error(join_messages(findings)), findings_(std::move(findings)) {}

Constraint make_constraint(const MetricDefinition& def, ConstraintScope scope, Priority priority,
                           Operator op, ConstraintValue value, std::string unit) {
  Constraint c{def.metric_id, scope, priority, op, std::move(value), std::move(unit)};
  auto findings = check_constraint(def, c);
  if (!findings.empty()) throw ConstraintError(std::move(findings));
  return c;
}

}  // namespace slakit
