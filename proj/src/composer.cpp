#include "slakit/composer.hpp"

#include <cmath>
#include <map>
#include <set>

#include "slakit/digest.hpp"

namespace slakit {

using ojson = nlohmann::ordered_json;

SlaDocument compose(SlaHeader header, std::vector<Constraint> app_slos, Workflow workflow) {
  if (header.agreement_start >= header.agreement_end) {
    throw ComposeError("agreement window is inverted: start " + format_utc(header.agreement_start) +
                       " is not before end " + format_utc(header.agreement_end));
  }
  SlaDocument doc;
  doc.header = std::move(header);
  doc.app_slos = std::move(app_slos);
  doc.workflow = std::move(workflow);
  return doc;
}

ValidationReport validate_document(const Catalog& catalog, const SlaDocument& doc) {
  ValidationReport report;
  auto& out = report.findings;
  if (doc.schema_version != kSchemaVersion) {
    out.push_back({FindingCode::schema_version_unsupported, Severity::error, "schema_version",
                   "schema version '" + doc.schema_version + "' is not supported"});
  }
  if (doc.header.agreement_start >= doc.header.agreement_end) {
    out.push_back({FindingCode::window_inverted, Severity::error, "header",
                   "agreement_start must be before agreement_end"});
  }
  for (std::size_t i = 0; i < doc.app_slos.size(); ++i) {
    const auto& c = doc.app_slos[i];
    const std::string path = "app_slos[" + std::to_string(i) + "]";
    const auto* def = catalog.find_application_slo(c.metric_id);
    if (def == nullptr) {
      out.push_back({FindingCode::unknown_metric, Severity::error, path,
                     "'" + c.metric_id + "' is not an application-level SLO"});
      continue;
    }
    auto found = check_constraint(*def, c, path);
    out.insert(out.end(), found.begin(), found.end());
  }
  auto wf = validate_workflow(catalog, doc.workflow);
  out.insert(out.end(), wf.begin(), wf.end());
  sort_findings(out);

  report.valid = true;
  for (const auto& f : out) {
    if (f.severity == Severity::error) report.valid = false;
  }
  return report;
}

// ---------------------------------------------------------------------------
// Serialization

namespace {

constexpr double kMaxExactInteger = 9007199254740992.0;  // 2^53

ojson number_to_json(double v) {
  if (std::isfinite(v) && std::trunc(v) == v && std::fabs(v) < kMaxExactInteger) {
    return ojson(static_cast<std::int64_t>(v));
  }
  return ojson(v);
}

ojson value_to_json(const ConstraintValue& v) {
  if (const auto* d = std::get_if<double>(&v)) return number_to_json(*d);
  if (const auto* b = std::get_if<bool>(&v)) return ojson(*b);
  return ojson(std::get<std::string>(v));
}

ojson constraint_to_json(const Constraint& c) {
  ojson j = ojson::object();
  j["metric_id"] = c.metric_id;
  j["priority"] = std::string(to_string(c.priority));
  j["operator"] = std::string(to_string(c.op));
  j["value"] = value_to_json(c.value);
  j["unit"] = c.unit.empty() ? ojson(nullptr) : ojson(c.unit);
  return j;
}

ojson constraints_to_json(const std::vector<Constraint>& cs) {
  ojson arr = ojson::array();
  for (const auto& c : cs) arr.push_back(constraint_to_json(c));
  return arr;
}

ojson node_to_json(const ActivityNode& n) {
  ojson j = ojson::object();
  j["id"] = n.node_id;
  j["name"] = n.activity_name;
  ojson layer = ojson::object();
  layer["name"] = n.mapping.deployment_layer;
  layer["constraints"] = constraints_to_json(n.layer_constraints);
  j["deployment_layer"] = std::move(layer);
  if (n.mapping.programming_model) {
    ojson model = ojson::object();
    model["name"] = *n.mapping.programming_model;
    model["constraints"] = constraints_to_json(n.model_constraints);
    j["programming_model"] = std::move(model);
  } else {
    j["programming_model"] = nullptr;
  }
  j["constraints"] = constraints_to_json(n.activity_constraints);
  return j;
}

/// Node emission order: topological when the graph allows it, as written
/// otherwise.
std::vector<const ActivityNode*> emission_order(const Workflow& w) {
  std::vector<const ActivityNode*> out;
  std::map<std::string, const ActivityNode*> by_id;
  for (const auto& n : w.nodes) by_id.emplace(n.node_id, &n);
  const auto order = by_id.size() == w.nodes.size() ? topological_order(w) : std::vector<std::string>{};
  if (order.size() == w.nodes.size() && !w.nodes.empty()) {
    for (const auto& id : order) {
      auto it = by_id.find(id);
      if (it == by_id.end()) break;
      out.push_back(it->second);
    }
  }
  if (out.size() != w.nodes.size()) {
    out.clear();
    for (const auto& n : w.nodes) out.push_back(&n);
  }
  return out;
}

}  // namespace

std::string serialize_canonical(const SlaDocument& doc) {
  ojson root = ojson::object();
  root["schema_version"] = doc.schema_version;

  ojson app = ojson::object();
  app["type"] = doc.header.application_type;
  app["agreement_start"] = format_utc(doc.header.agreement_start);
  app["agreement_end"] = format_utc(doc.header.agreement_end);
  root["application"] = std::move(app);

  root["slos"] = constraints_to_json(doc.app_slos);

  ojson activities = ojson::array();
  for (const auto* n : emission_order(doc.workflow)) activities.push_back(node_to_json(*n));

  std::set<Edge> edges(doc.workflow.edges.begin(), doc.workflow.edges.end());
  ojson edge_arr = ojson::array();
  for (const auto& e : edges) {
    ojson je = ojson::object();
    je["from"] = e.from;
    je["to"] = e.to;
    edge_arr.push_back(std::move(je));
  }
  ojson wf = ojson::object();
  wf["activities"] = std::move(activities);
  wf["edges"] = std::move(edge_arr);
  root["workflow"] = std::move(wf);

  return root.dump(-1, ' ', false, nlohmann::json::error_handler_t::strict);
}

std::string document_id(const SlaDocument& doc) { return sha256_hex(serialize_canonical(doc)); }

// ---------------------------------------------------------------------------
// Parsing

std::string_view to_string(ParseErrc e) {
  switch (e) {
    case ParseErrc::json_syntax: return "JsonSyntaxError";
    case ParseErrc::schema_version_unsupported: return "SchemaVersionUnsupported";
    case ParseErrc::schema_shape: return "SchemaShapeError";
  }
  return "?";
}

ParseError::ParseError(ParseErrc code, std::string path, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + " at " + path + ": " + message),
      code_(code),
      path_(std::move(path)) {}

namespace {

using json = nlohmann::json;

[[noreturn]] void shape_error(const std::string& path, const std::string& message) {
  throw ParseError(ParseErrc::schema_shape, path, message);
}

class Reader {
 public:
  explicit Reader(bool lenient, const Catalog* catalog) : lenient_(lenient), catalog_(catalog) {}

  SlaDocument document(const json& root) {
    expect_object(root, "$");
    SlaDocument doc;
    if (root.contains("schema_version") || !lenient_) {
      doc.schema_version = string_field(root, "schema_version", "$");
      if (doc.schema_version != kSchemaVersion) {
        throw ParseError(ParseErrc::schema_version_unsupported, "$.schema_version",
                         "unsupported schema version '" + doc.schema_version + "'");
      }
    }
    expect_keys(root, "$", {"schema_version", "application", "slos", "workflow"},
                lenient_ ? std::set<std::string>{"application", "workflow"}
                         : std::set<std::string>{"schema_version", "application", "slos", "workflow"});

    doc.header = header(root.at("application"), "$.application");
    if (root.contains("slos")) {
      doc.app_slos = constraints(root.at("slos"), "$.slos", ConstraintScope::application);
    }
    doc.workflow = workflow(root.at("workflow"), "$.workflow");
    return doc;
  }

 private:
  static void expect_object(const json& j, const std::string& path) {
    if (!j.is_object()) shape_error(path, "expected an object");
  }

  static void expect_keys(const json& j, const std::string& path, std::set<std::string> allowed,
                          const std::set<std::string>& required) {
    for (const auto& key : required) {
      if (!j.contains(key)) shape_error(path, "missing required key '" + key + "'");
    }
    for (const auto& [key, _] : j.items()) {
      if (!allowed.count(key)) shape_error(path, "unexpected key '" + key + "'");
    }
  }

  static std::string string_field(const json& j, const std::string& key, const std::string& path) {
    if (!j.contains(key)) shape_error(path, "missing required key '" + key + "'");
    const auto& v = j.at(key);
    if (!v.is_string()) shape_error(path + "." + key, "expected a string");
    return v.get<std::string>();
  }

  static UtcSeconds timestamp_field(const json& j, const std::string& key, const std::string& path) {
    auto text = string_field(j, key, path);
    auto t = parse_utc(text);
    if (!t) shape_error(path + "." + key, "expected an ISO-8601 UTC timestamp like 2024-01-01T00:00:00Z");
    return *t;
  }

  SlaHeader header(const json& j, const std::string& path) {
    expect_object(j, path);
    expect_keys(j, path, {"type", "agreement_start", "agreement_end"},
                {"type", "agreement_start", "agreement_end"});
    SlaHeader h;
    h.application_type = string_field(j, "type", path);
    h.agreement_start = timestamp_field(j, "agreement_start", path);
    h.agreement_end = timestamp_field(j, "agreement_end", path);
    return h;
  }

  Constraint constraint(const json& j, const std::string& path, ConstraintScope scope) {
    expect_object(j, path);
    expect_keys(j, path, {"metric_id", "priority", "operator", "value", "unit"},
                {"metric_id", "priority", "operator", "value", "unit"});
    Constraint c;
    c.scope = scope;
    c.metric_id = string_field(j, "metric_id", path);
    auto priority = parse_priority(string_field(j, "priority", path));
    if (!priority) shape_error(path + ".priority", "priority must be one of high, normal, low");
    c.priority = *priority;
    auto op = parse_operator(string_field(j, "operator", path));
    if (!op) shape_error(path + ".operator", "operator must be one of lt, lte, gt, gte, eq, neq");
    c.op = *op;

    const auto& v = j.at("value");
    if (v.is_number()) {
      c.value = v.get<double>();
    } else if (v.is_boolean()) {
      c.value = v.get<bool>();
    } else if (v.is_string()) {
      c.value = v.get<std::string>();
    } else {
      shape_error(path + ".value", "expected a number, boolean or string");
    }

    const auto& unit = j.at("unit");
    if (unit.is_string()) {
      c.unit = unit.get<std::string>();
    } else if (!unit.is_null()) {
      shape_error(path + ".unit", "expected a string or null");
    }
    return c;
  }

  std::vector<Constraint> constraints(const json& j, const std::string& path, ConstraintScope scope) {
    if (!j.is_array()) shape_error(path, "expected an array");
    std::vector<Constraint> out;
    for (std::size_t i = 0; i < j.size(); ++i) {
      out.push_back(constraint(j[i], path + "[" + std::to_string(i) + "]", scope));
    }
    return out;
  }

  /// Returns the bound name; fills `out` with its constraints.
  std::string binding(const json& j, const std::string& path, ConstraintScope scope,
                      std::vector<Constraint>& out) {
    if (lenient_ && j.is_string()) return j.get<std::string>();
    expect_object(j, path);
    expect_keys(j, path, {"name", "constraints"},
                lenient_ ? std::set<std::string>{"name"} : std::set<std::string>{"name", "constraints"});
    if (j.contains("constraints")) out = constraints(j.at("constraints"), path + ".constraints", scope);
    return string_field(j, "name", path);
  }

  ActivityNode node(const json& j, const std::string& path) {
    expect_object(j, path);
    const std::set<std::string> all{"id", "name", "deployment_layer", "programming_model", "constraints"};
    expect_keys(j, path, all, lenient_ ? std::set<std::string>{"id", "name"} : all);
    ActivityNode n;
    n.node_id = string_field(j, "id", path);
    n.activity_name = string_field(j, "name", path);

    const ActivityDefinition* known =
        (lenient_ && catalog_ != nullptr) ? catalog_->find_activity(n.activity_name) : nullptr;

    if (j.contains("deployment_layer")) {
      n.mapping.deployment_layer =
          binding(j.at("deployment_layer"), path + ".deployment_layer", ConstraintScope::layer,
                  n.layer_constraints);
    } else if (known != nullptr) {
      n.mapping.deployment_layer = known->deployment_layer;
    }

    if (j.contains("programming_model") && !j.at("programming_model").is_null()) {
      n.mapping.programming_model =
          binding(j.at("programming_model"), path + ".programming_model", ConstraintScope::model,
                  n.model_constraints);
    } else if (!j.contains("programming_model") && known != nullptr) {
      n.mapping.programming_model = known->programming_model;
    }

    if (j.contains("constraints")) {
      n.activity_constraints = constraints(j.at("constraints"), path + ".constraints", ConstraintScope::activity);
    }
    return n;
  }

  Workflow workflow(const json& j, const std::string& path) {
    expect_object(j, path);
    expect_keys(j, path, {"activities", "edges"},
                lenient_ ? std::set<std::string>{"activities"} : std::set<std::string>{"activities", "edges"});
    Workflow w;
    const auto& acts = j.at("activities");
    if (!acts.is_array()) shape_error(path + ".activities", "expected an array");
    for (std::size_t i = 0; i < acts.size(); ++i) {
      w.nodes.push_back(node(acts[i], path + ".activities[" + std::to_string(i) + "]"));
    }
    if (j.contains("edges")) {
      const auto& edges = j.at("edges");
      if (!edges.is_array()) shape_error(path + ".edges", "expected an array");
      for (std::size_t k = 0; k < edges.size(); ++k) {
        const std::string epath = path + ".edges[" + std::to_string(k) + "]";
        expect_object(edges[k], epath);
        expect_keys(edges[k], epath, {"from", "to"}, {"from", "to"});
        w.edges.push_back({string_field(edges[k], "from", epath), string_field(edges[k], "to", epath)});
      }
    }
    return w;
  }

  bool lenient_;
  const Catalog* catalog_;
};

json parse_json(std::string_view bytes) {
  try {
    return json::parse(bytes.begin(), bytes.end());
  } catch (const json::parse_error& e) {
    throw ParseError(ParseErrc::json_syntax, "$", e.what());
  }
}

}  // namespace

SlaDocument parse(std::string_view bytes) { return Reader(false, nullptr).document(parse_json(bytes)); }

SlaDocument parse_draft(std::string_view bytes, const Catalog& catalog) {
  return Reader(true, &catalog).document(parse_json(bytes));
}

ojson finding_to_json(const Finding& f) {
  ojson j = ojson::object();
  j["code"] = std::string(to_string(f.code));
  j["severity"] = std::string(to_string(f.severity));
  j["path"] = f.path;
  j["message"] = f.message;
  return j;
}

ojson report_to_json(const ValidationReport& report) {
  ojson j = ojson::object();
  j["valid"] = report.valid;
  ojson arr = ojson::array();
  for (const auto& f : report.findings) arr.push_back(finding_to_json(f));
  j["findings"] = std::move(arr);
  return j;
}

}  // namespace slakit
