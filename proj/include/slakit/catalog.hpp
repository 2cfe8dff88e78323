#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "slakit/vocabulary.hpp"

namespace slakit {

/// Closed interval. Either bound may be infinite ("inf" / "-inf" in tables).
struct NumericRange {
  double min = 0.0;
  double max = 0.0;

  bool contains(double v) const { return v >= min && v <= max; }
  bool operator==(const NumericRange&) const = default;
};

/// One catalog row: a named SLO or configuration metric.
struct MetricDefinition {
  std::string metric_id;
  std::string display_name;
  Category category = Category::slo;
  ValueType value_type = ValueType::numeric;
  std::string unit;  // empty means "no unit"
  std::optional<NumericRange> numeric_range;
  std::vector<std::string> enum_values;  // non-empty iff value_type == enumeration
  std::vector<Operator> allowed_operators;

  bool allows(Operator op) const;
  bool operator==(const MetricDefinition&) const = default;
};

struct ResourceSchema {
  std::string resource_id;
  ResourceKind kind = ResourceKind::deployment_layer;
  std::string display_name;
  std::vector<MetricDefinition> metrics;

  const MetricDefinition* find(std::string_view metric_id) const;
  bool operator==(const ResourceSchema&) const = default;
};

struct ActivityDefinition {
  std::string activity_name;
  std::string deployment_layer;
  std::optional<std::string> programming_model;
  std::vector<MetricDefinition> own_metrics;

  bool operator==(const ActivityDefinition&) const = default;
};

enum class MetricScope { activity, layer, model };

std::string_view to_string(MetricScope s);

/// An activity merged with the metrics of its deployment layer and, when
/// mapped, its programming model. Metric identity is (scope, metric_id).
struct ActivitySchema {
  std::string activity_name;
  std::string deployment_layer;
  std::optional<std::string> programming_model;
  std::vector<MetricDefinition> activity_metrics;
  std::vector<MetricDefinition> layer_metrics;
  std::vector<MetricDefinition> model_metrics;

  const MetricDefinition* find(MetricScope scope, std::string_view metric_id) const;
  std::size_t metric_count() const {
    return activity_metrics.size() + layer_metrics.size() + model_metrics.size();
  }
  bool operator==(const ActivitySchema&) const = default;
};

/// Immutable once loaded; only load_catalog constructs a populated instance.
class Catalog {
 public:
  const std::vector<ActivityDefinition>& activities() const { return activities_; }
  const std::map<std::string, ResourceSchema>& resources() const { return resources_; }
  const std::vector<MetricDefinition>& application_slos() const { return application_slos_; }
  const std::string& version() const { return version_; }

  const ActivityDefinition* find_activity(std::string_view name) const;
  const ResourceSchema* find_resource(std::string_view id) const;
  const MetricDefinition* find_application_slo(std::string_view metric_id) const;

  bool operator==(const Catalog&) const = default;

 private:
  friend Catalog load_catalog(const std::filesystem::path& root);

  std::vector<ActivityDefinition> activities_;
  std::map<std::string, ResourceSchema> resources_;
  std::vector<MetricDefinition> application_slos_;
  std::string version_;
};

enum class CatalogErrc {
  catalog_not_found,
  table_parse_error,
  dangling_reference,
  duplicate_identifier,
  empty_catalog,
  activity_not_found,
};

std::string_view to_string(CatalogErrc e);

class CatalogError : public std::runtime_error {
 public:
  CatalogError(CatalogErrc code, const std::string& message, std::filesystem::path file = {},
               std::size_t line = 0);

  CatalogErrc code() const noexcept { return code_; }
  const std::filesystem::path& file() const noexcept { return file_; }
  std::size_t line() const noexcept { return line_; }

 private:
  CatalogErrc code_;
  std::filesystem::path file_;
  std::size_t line_;
};

/// Loads a catalog directory:
///   catalog.txt               version string (optional)
///   manifest.csv              activity,file,deployment_layer,programming_model
///   activities/<file>.csv     metric table per activity
///   resources/<id>.csv        metric table, preceded by "#kind=..." comment
///   application.csv           application-level SLO metrics (optional)
Catalog load_catalog(const std::filesystem::path& root);

std::vector<std::string> list_activities(const Catalog& catalog);

/// Throws CatalogError(activity_not_found).
ActivitySchema resolve_activity_schema(const Catalog& catalog, std::string_view activity_name);

const std::vector<MetricDefinition>& list_application_slos(const Catalog& catalog);

}  // namespace slakit
