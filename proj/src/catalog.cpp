#include "slakit/catalog.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include "slakit/csv.hpp"

namespace fs = std::filesystem;

namespace slakit {

namespace {

constexpr std::string_view kMetricHeader[] = {
    "metric_id", "display_name", "category",    "value_type",        "unit",
    "range_min", "range_max",    "enum_values", "allowed_operators",
};
constexpr std::string_view kManifestHeader[] = {"activity", "file", "deployment_layer",
                                                "programming_model"};

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CatalogError(CatalogErrc::catalog_not_found, "cannot open file", path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

[[noreturn]] void table_error(const fs::path& file, std::size_t line, const std::string& msg) {
  throw CatalogError(CatalogErrc::table_parse_error, msg, file, line);
}

std::vector<csv::Row> parse_table(const fs::path& file, std::vector<std::string>* comments = nullptr) {
  try {
    return csv::parse(read_file(file), comments);
  } catch (const csv::ParseError& e) {
    table_error(file, e.line(), e.what());
  }
}

template <std::size_t N>
void expect_header(const fs::path& file, const std::vector<csv::Row>& rows,
                   const std::string_view (&header)[N]) {
  if (rows.empty()) table_error(file, 1, "missing header row");
  const auto& fields = rows.front().fields;
  if (fields.size() != N || !std::equal(fields.begin(), fields.end(), std::begin(header))) {
    std::string expected;
    for (std::size_t i = 0; i < N; ++i) {
      if (i) expected += ',';
      expected += header[i];
    }
    table_error(file, rows.front().line, "unexpected header, expected " + expected);
  }
}

std::optional<double> parse_bound(std::string_view cell) {
  if (cell == "inf" || cell == "+inf") return std::numeric_limits<double>::infinity();
  if (cell == "-inf") return -std::numeric_limits<double>::infinity();
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
  if (ec != std::errc{} || ptr != cell.data() + cell.size() || !std::isfinite(v)) return std::nullopt;
  return v;
}

MetricDefinition parse_metric_row(const fs::path& file, const csv::Row& row) {
  const auto& f = row.fields;
  if (f.size() != std::size(kMetricHeader)) {
    table_error(file, row.line,
                "expected " + std::to_string(std::size(kMetricHeader)) + " fields, got " +
                    std::to_string(f.size()));
  }
  MetricDefinition m;
  m.metric_id = f[0];
  if (!is_identifier(m.metric_id)) table_error(file, row.line, "invalid metric_id '" + f[0] + "'");
  m.display_name = f[1].empty() ? f[0] : f[1];

  auto category = parse_category(f[2]);
  if (!category) table_error(file, row.line, "invalid category '" + f[2] + "'");
  m.category = *category;

  auto type = parse_value_type(f[3]);
  if (!type) table_error(file, row.line, "invalid value_type '" + f[3] + "'");
  m.value_type = *type;
  m.unit = f[4];

  const bool numeric = m.value_type == ValueType::numeric || m.value_type == ValueType::percentage;
  if (numeric) {
    auto lo = parse_bound(f[5]);
    auto hi = parse_bound(f[6]);
    if (!lo || !hi) table_error(file, row.line, "numeric metric needs range_min and range_max");
    if (*lo > *hi) table_error(file, row.line, "range_min exceeds range_max");
    if (m.value_type == ValueType::percentage && (*lo < 0.0 || *hi > 100.0)) {
      table_error(file, row.line, "percentage range must lie within [0, 100]");
    }
    m.numeric_range = NumericRange{*lo, *hi};
  } else if (!f[5].empty() || !f[6].empty()) {
    table_error(file, row.line, "range given for non-numeric metric");
  }

  m.enum_values = csv::split_pipe(f[7]);
  if (m.value_type == ValueType::enumeration) {
    if (m.enum_values.empty()) table_error(file, row.line, "enum metric needs enum_values");
    std::set<std::string> seen;
    for (const auto& v : m.enum_values) {
      if (v.empty()) table_error(file, row.line, "empty enum value");
      if (!seen.insert(v).second) table_error(file, row.line, "duplicate enum value '" + v + "'");
    }
  } else if (!m.enum_values.empty()) {
    table_error(file, row.line, "enum_values given for non-enum metric");
  }

  for (const auto& token : csv::split_pipe(f[8])) {
    auto op = parse_operator(token);
    if (!op) table_error(file, row.line, "unknown operator '" + token + "'");
    if (std::find(m.allowed_operators.begin(), m.allowed_operators.end(), *op) !=
        m.allowed_operators.end()) {
      table_error(file, row.line, "duplicate operator '" + token + "'");
    }
    if (!numeric && *op != Operator::eq && *op != Operator::neq) {
      table_error(file, row.line, "operator '" + token + "' requires a numeric metric");
    }
    m.allowed_operators.push_back(*op);
  }
  if (m.allowed_operators.empty()) table_error(file, row.line, "allowed_operators is empty");
  return m;
}

std::vector<MetricDefinition> parse_metric_table(const fs::path& file,
                                                 std::vector<std::string>* comments = nullptr) {
  auto rows = parse_table(file, comments);
  expect_header(file, rows, kMetricHeader);
  std::vector<MetricDefinition> metrics;
  std::set<std::string> ids;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    auto m = parse_metric_row(file, rows[i]);
    if (!ids.insert(m.metric_id).second) {
      throw CatalogError(CatalogErrc::duplicate_identifier, "duplicate metric_id '" + m.metric_id + "'",
                         file, rows[i].line);
    }
    metrics.push_back(std::move(m));
  }
  return metrics;
}

ResourceSchema load_resource(const fs::path& file) {
  ResourceSchema r;
  r.resource_id = file.stem().string();
  if (!is_identifier(r.resource_id)) {
    table_error(file, 0, "resource file name is not a valid resource_id");
  }
  std::vector<std::string> comments;
  r.metrics = parse_metric_table(file, &comments);

  std::optional<ResourceKind> kind;
  for (const auto& c : comments) {
    if (c.rfind("kind=", 0) == 0) {
      kind = parse_resource_kind(c.substr(5));
      if (!kind) table_error(file, 1, "unknown resource kind '" + c.substr(5) + "'");
    } else if (c.rfind("display_name=", 0) == 0) {
      r.display_name = c.substr(13);
    }
  }
  if (!kind) table_error(file, 1, "missing #kind= comment line");
  r.kind = *kind;
  if (r.display_name.empty()) r.display_name = r.resource_id;
  return r;
}

bool safe_file_stem(std::string_view s) {
  return !s.empty() && s.find('/') == s.npos && s.find('\\') == s.npos && s != "." && s != "..";
}

std::string trim_line(std::string s) {
  while (!s.empty() && (s.back() == '\n' || s.back() == '\r' || s.back() == ' ')) s.pop_back();
  return s;
}

}  // namespace

bool MetricDefinition::allows(Operator op) const {
  return std::find(allowed_operators.begin(), allowed_operators.end(), op) != allowed_operators.end();
}

const MetricDefinition* ResourceSchema::find(std::string_view metric_id) const {
  for (const auto& m : metrics) {
    if (m.metric_id == metric_id) return &m;
  }
  return nullptr;
}

std::string_view to_string(MetricScope s) {
  switch (s) {
    case MetricScope::activity: return "activity";
    case MetricScope::layer: return "layer";
    case MetricScope::model: return "model";
  }
  return "?";
}

const MetricDefinition* ActivitySchema::find(MetricScope scope, std::string_view metric_id) const {
  const std::vector<MetricDefinition>* list = nullptr;
  switch (scope) {
    case MetricScope::activity: list = &activity_metrics; break;
    case MetricScope::layer: list = &layer_metrics; break;
    case MetricScope::model: list = &model_metrics; break;
  }
  for (const auto& m : *list) {
    if (m.metric_id == metric_id) return &m;
  }
  return nullptr;
}

const ActivityDefinition* Catalog::find_activity(std::string_view name) const {
  for (const auto& a : activities_) {
    if (a.activity_name == name) return &a;
  }
  return nullptr;
}

const ResourceSchema* Catalog::find_resource(std::string_view id) const {
  auto it = resources_.find(std::string(id));
  return it == resources_.end() ? nullptr : &it->second;
}

const MetricDefinition* Catalog::find_application_slo(std::string_view metric_id) const {
  for (const auto& m : application_slos_) {
    if (m.metric_id == metric_id) return &m;
  }
  return nullptr;
}

std::string_view to_string(CatalogErrc e) {
  switch (e) {
    case CatalogErrc::catalog_not_found: return "CatalogNotFound";
    case CatalogErrc::table_parse_error: return "TableParseError";
    case CatalogErrc::dangling_reference: return "DanglingReference";
    case CatalogErrc::duplicate_identifier: return "DuplicateIdentifier";
    case CatalogErrc::empty_catalog: return "EmptyCatalog";
    case CatalogErrc::activity_not_found: return "ActivityNotFound";
  }
  return "?";
}

namespace {

std::string describe(CatalogErrc code, const std::string& message, const fs::path& file,
                     std::size_t line) {
  std::string out(to_string(code));
  if (!file.empty()) {
    out += " in " + file.string();
    if (line > 0) out += ":" + std::to_string(line);
  }
  return out + ": " + message;
}

}  // namespace

CatalogError::CatalogError(CatalogErrc code, const std::string& message, fs::path file,
                           std::size_t line)
    : std::runtime_error(describe(code, message, file, line)),
      code_(code),
      file_(std::move(file)),
      line_(line) {}

Catalog load_catalog(const fs::path& root) {
  std::error_code ec;
  if (!fs::is_directory(root, ec)) {
    throw CatalogError(CatalogErrc::catalog_not_found, "catalog directory does not exist", root);
  }
  const fs::path manifest_path = root / "manifest.csv";
  if (!fs::is_regular_file(manifest_path, ec)) {
    throw CatalogError(CatalogErrc::catalog_not_found, "manifest.csv is missing", manifest_path);
  }

  Catalog catalog;

  const fs::path version_path = root / "catalog.txt";
  if (fs::is_regular_file(version_path, ec)) {
    std::istringstream in(read_file(version_path));
    std::string first;
    std::getline(in, first);
    catalog.version_ = trim_line(first);
  }

  const fs::path resources_dir = root / "resources";
  if (fs::is_directory(resources_dir, ec)) {
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(resources_dir)) {
      if (entry.is_regular_file() && entry.path().extension() == ".csv") files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    for (const auto& file : files) {
      auto resource = load_resource(file);
      auto id = resource.resource_id;
      if (!catalog.resources_.emplace(id, std::move(resource)).second) {
        throw CatalogError(CatalogErrc::duplicate_identifier, "duplicate resource_id '" + id + "'", file);
      }
    }
  }

  const fs::path app_path = root / "application.csv";
  if (fs::is_regular_file(app_path, ec)) catalog.application_slos_ = parse_metric_table(app_path);

  auto rows = parse_table(manifest_path);
  expect_header(manifest_path, rows, kManifestHeader);
  std::set<std::string> names;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto& row = rows[i];
    if (row.fields.size() != std::size(kManifestHeader)) {
      table_error(manifest_path, row.line, "expected 4 fields, got " + std::to_string(row.fields.size()));
    }
    ActivityDefinition a;
    a.activity_name = row.fields[0];
    if (a.activity_name.empty()) table_error(manifest_path, row.line, "empty activity name");
    if (!names.insert(a.activity_name).second) {
      throw CatalogError(CatalogErrc::duplicate_identifier,
                         "duplicate activity '" + a.activity_name + "'", manifest_path, row.line);
    }

    std::string stem = row.fields[1];
    if (!safe_file_stem(stem)) table_error(manifest_path, row.line, "invalid file reference");
    if (stem.size() < 4 || stem.compare(stem.size() - 4, 4, ".csv") != 0) stem += ".csv";
    const fs::path activity_path = root / "activities" / stem;
    if (!fs::is_regular_file(activity_path, ec)) {
      table_error(manifest_path, row.line, "activity table " + activity_path.string() + " not found");
    }

    a.deployment_layer = row.fields[2];
    const auto* layer = catalog.find_resource(a.deployment_layer);
    if (layer == nullptr || layer->kind != ResourceKind::deployment_layer) {
      throw CatalogError(CatalogErrc::dangling_reference,
                         "activity '" + a.activity_name + "' names unknown deployment layer '" +
                             a.deployment_layer + "'",
                         manifest_path, row.line);
    }
    if (!row.fields[3].empty()) {
      a.programming_model = row.fields[3];
      const auto* model = catalog.find_resource(row.fields[3]);
      if (model == nullptr || model->kind != ResourceKind::programming_model) {
        throw CatalogError(CatalogErrc::dangling_reference,
                           "activity '" + a.activity_name + "' names unknown programming model '" +
                               row.fields[3] + "'",
                           manifest_path, row.line);
      }
    }
    a.own_metrics = parse_metric_table(activity_path);
    catalog.activities_.push_back(std::move(a));
  }

  if (catalog.activities_.empty()) {
    throw CatalogError(CatalogErrc::empty_catalog, "manifest lists no activities", manifest_path);
  }
  return catalog;
}

std::vector<std::string> list_activities(const Catalog& catalog) {
  std::vector<std::string> names;
  names.reserve(catalog.activities().size());
  for (const auto& a : catalog.activities()) names.push_back(a.activity_name);
  return names;
}

ActivitySchema resolve_activity_schema(const Catalog& catalog, std::string_view activity_name) {
  const auto* activity = catalog.find_activity(activity_name);
  if (activity == nullptr) {
    throw CatalogError(CatalogErrc::activity_not_found,
                       "no activity named '" + std::string(activity_name) + "'");
  }
  ActivitySchema schema;
  schema.activity_name = activity->activity_name;
  schema.deployment_layer = activity->deployment_layer;
  schema.programming_model = activity->programming_model;
  schema.activity_metrics = activity->own_metrics;
  schema.layer_metrics = catalog.find_resource(activity->deployment_layer)->metrics;
  if (activity->programming_model) {
    schema.model_metrics = catalog.find_resource(*activity->programming_model)->metrics;
  }
  return schema;
}

const std::vector<MetricDefinition>& list_application_slos(const Catalog& catalog) {
  return catalog.application_slos();
}

}  // namespace slakit
