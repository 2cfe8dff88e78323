#include "slakit/service.hpp"

#include <cmath>
#include <iostream>

#include "httplib.h"
#include "slakit/composer.hpp"

namespace slakit {

using ojson = nlohmann::ordered_json;

namespace {

HttpResponse json_response(int status, const ojson& body) { return {status, "application/json", body.dump()}; }

HttpResponse error_response(int status, std::string_view code, const std::string& message) {
  ojson body = ojson::object();
  body["code"] = std::string(code);
  body["message"] = message;
  return json_response(status, body);
}

ojson bound_to_json(double v) { return std::isfinite(v) ? ojson(v) : ojson(nullptr); }

ojson metrics_to_json(const std::vector<MetricDefinition>& metrics) {
  ojson arr = ojson::array();
  for (const auto& m : metrics) arr.push_back(metric_to_json(m));
  return arr;
}

ojson summary_json(const StoredSlaSummary& s) {
  ojson j = ojson::object();
  j["id"] = s.id;
  j["application_type"] = s.application_type;
  j["created_at"] = s.created_at;
  j["size_bytes"] = s.size_bytes;
  return j;
}

/// Outcome of reading a request body as a document: either a document or a
/// ready-made error response.
struct BodyParse {
  std::optional<SlaDocument> doc;
  std::optional<HttpResponse> error;
  bool version_unsupported = false;
};

BodyParse parse_body(std::string_view body, std::size_t limit) {
  BodyParse out;
  if (body.size() > limit) {
    out.error = error_response(413, "BODY_TOO_LARGE",
                               "request body exceeds " + std::to_string(limit) + " bytes");
    return out;
  }
  try {
    out.doc = parse(body);
  } catch (const ParseError& e) {
    if (e.code() == ParseErrc::schema_version_unsupported) {
      out.version_unsupported = true;
      return out;
    }
    ojson err = ojson::object();
    err["code"] = "JSON_SYNTAX";
    err["message"] = e.what();
    err["path"] = e.path();
    out.error = json_response(400, err);
  }
  return out;
}

ValidationReport version_report() {
  ValidationReport r;
  r.valid = false;
  r.findings.push_back({FindingCode::schema_version_unsupported, Severity::error, "schema_version",
                        "schema version is not supported; expected " + std::string(kSchemaVersion)});
  return r;
}

HttpResponse store_error_response(const StoreError& e) {
  switch (e.code()) {
    case StoreErrc::not_found: return error_response(404, "NOT_FOUND", e.what());
    case StoreErrc::locked: return error_response(503, "STORE_LOCKED", e.what());
    case StoreErrc::corrupt_document: return error_response(500, "CORRUPT_DOCUMENT", e.what());
    case StoreErrc::io_error: break;
  }
  return error_response(500, "STORE_IO_ERROR", e.what());
}

}  // namespace

ojson metric_to_json(const MetricDefinition& m) {
  ojson j = ojson::object();
  j["metric_id"] = m.metric_id;
  j["display_name"] = m.display_name;
  j["category"] = std::string(to_string(m.category));
  j["value_type"] = std::string(to_string(m.value_type));
  j["unit"] = m.unit.empty() ? ojson(nullptr) : ojson(m.unit);
  if (m.numeric_range) {
    ojson range = ojson::object();
    range["min"] = bound_to_json(m.numeric_range->min);
    range["max"] = bound_to_json(m.numeric_range->max);
    j["range"] = std::move(range);
  } else {
    j["range"] = nullptr;
  }
  j["enum_values"] = m.value_type == ValueType::enumeration ? ojson(m.enum_values) : ojson(nullptr);
  ojson ops = ojson::array();
  for (auto op : m.allowed_operators) ops.push_back(std::string(to_string(op)));
  j["allowed_operators"] = std::move(ops);
  return j;
}

SlaService::SlaService(ServiceConfig config)
    : SlaService(load_catalog(config.catalog_path), config) {}

SlaService::SlaService(Catalog catalog, ServiceConfig config)
    : catalog_(std::move(catalog)), config_(std::move(config)), store_(config_.store_path) {
  if (config_.request_body_limit == 0) throw std::invalid_argument("request_body_limit must be positive");
}

HttpResponse SlaService::list_activities() const {
  ojson arr = ojson::array();
  for (const auto& a : catalog_.activities()) {
    ojson e = ojson::object();
    e["name"] = a.activity_name;
    e["deployment_layer"] = a.deployment_layer;
    e["programming_model"] = a.programming_model ? ojson(*a.programming_model) : ojson(nullptr);
    arr.push_back(std::move(e));
  }
  return json_response(200, arr);
}

HttpResponse SlaService::activity_schema(std::string_view name) const {
  if (catalog_.find_activity(name) == nullptr) {
    return error_response(404, "UNKNOWN_ACTIVITY", "activity '" + std::string(name) + "' is not in the catalog");
  }
  const auto schema = resolve_activity_schema(catalog_, name);
  ojson j = ojson::object();
  j["name"] = schema.activity_name;
  j["deployment_layer"] = schema.deployment_layer;
  j["programming_model"] = schema.programming_model ? ojson(*schema.programming_model) : ojson(nullptr);
  ojson groups = ojson::object();
  groups["activity"] = metrics_to_json(schema.activity_metrics);
  groups["layer"] = metrics_to_json(schema.layer_metrics);
  groups["model"] = metrics_to_json(schema.model_metrics);
  j["metrics"] = std::move(groups);
  return json_response(200, j);
}

HttpResponse SlaService::application_slos() const {
  return json_response(200, metrics_to_json(list_application_slos(catalog_)));
}

HttpResponse SlaService::validate(std::string_view body) const {
  auto parsed = parse_body(body, config_.request_body_limit);
  if (parsed.error) return *parsed.error;
  if (parsed.version_unsupported) return json_response(200, report_to_json(version_report()));
  return json_response(200, report_to_json(validate_document(catalog_, *parsed.doc)));
}

HttpResponse SlaService::create(std::string_view body) {
  auto parsed = parse_body(body, config_.request_body_limit);
  if (parsed.error) return *parsed.error;
  if (parsed.version_unsupported) return json_response(422, report_to_json(version_report()));
  const auto report = validate_document(catalog_, *parsed.doc);
  if (!report.valid) return json_response(422, report_to_json(report));
  try {
    const std::string id = store_.put(*parsed.doc);
    ojson out = ojson::object();
    out["id"] = id;
    for (const auto& s : store_.list()) {
      if (s.id == id) out["summary"] = summary_json(s);
    }
    return json_response(201, out);
  } catch (const StoreError& e) {
    return store_error_response(e);
  }
}

HttpResponse SlaService::get_sla(std::string_view id) const {
  try {
    return {200, "application/json", store_.get_bytes(std::string(id))};
  } catch (const StoreError& e) {
    return store_error_response(e);
  }
}

HttpResponse SlaService::list_slas() const {
  try {
    ojson arr = ojson::array();
    for (const auto& s : store_.list()) arr.push_back(summary_json(s));
    return json_response(200, arr);
  } catch (const StoreError& e) {
    return store_error_response(e);
  }
}

void SlaService::mount(httplib::Server& server) {
  server.set_payload_max_length(config_.request_body_limit);

  auto send = [](httplib::Response& res, const HttpResponse& r) {
    res.status = r.status;
    res.set_content(r.body, r.content_type);
  };

  server.Get("/healthz", [](const httplib::Request&, httplib::Response& res) {
    res.set_content("ok", "text/plain");
  });
  server.Get("/catalog/activities", [this, send](const httplib::Request&, httplib::Response& res) {
    send(res, list_activities());
  });
  server.Get(R"(/catalog/activities/(.+))", [this, send](const httplib::Request& req, httplib::Response& res) {
    send(res, activity_schema(req.matches[1].str()));
  });
  server.Get("/catalog/application-slos", [this, send](const httplib::Request&, httplib::Response& res) {
    send(res, application_slos());
  });
  server.Post("/sla/validate", [this, send](const httplib::Request& req, httplib::Response& res) {
    send(res, validate(req.body));
  });
  server.Post("/sla", [this, send](const httplib::Request& req, httplib::Response& res) {
    send(res, create(req.body));
  });
  server.Get("/slas", [this, send](const httplib::Request&, httplib::Response& res) { send(res, list_slas()); });
  server.Get(R"(/slas/([^/]+))", [this, send](const httplib::Request& req, httplib::Response& res) {
    send(res, get_sla(req.matches[1].str()));
  });

  if (config_.static_dir && std::filesystem::is_directory(*config_.static_dir)) {
    server.set_mount_point("/", config_.static_dir->string());
  }

  server.set_post_routing_handler([this](const httplib::Request& req, httplib::Response& res) {
    const auto origin = req.get_header_value("Origin");
    if (origin.empty()) return;
    for (const auto& allowed : config_.cors_origins) {
      if (allowed == origin || allowed == "*") {
        res.set_header("Access-Control-Allow-Origin", origin);
        res.set_header("Vary", "Origin");
        return;
      }
    }
  });

  server.set_error_handler([](const httplib::Request&, httplib::Response& res) {
    if (!res.body.empty()) return httplib::Server::HandlerResponse::Unhandled;
    HttpResponse r;
    switch (res.status) {
      case 404: r = error_response(404, "NOT_FOUND", "no such resource"); break;
      case 413: r = error_response(413, "BODY_TOO_LARGE", "request body too large"); break;
      default: r = error_response(res.status, "HTTP_" + std::to_string(res.status), "request failed"); break;
    }
    res.set_content(r.body, r.content_type);
    return httplib::Server::HandlerResponse::Handled;
  });
}

std::pair<std::string, int> parse_bind_address(std::string_view address) {
  const auto colon = address.rfind(':');
  if (colon == std::string_view::npos || colon == 0 || colon + 1 == address.size()) {
    throw std::invalid_argument("bind address must look like host:port");
  }
  int port = 0;
  for (char c : address.substr(colon + 1)) {
    if (c < '0' || c > '9') throw std::invalid_argument("port is not a number");
    port = port * 10 + (c - '0');
    if (port > 65535) throw std::invalid_argument("port out of range");
  }
  return {std::string(address.substr(0, colon)), port};
}

bool serve(SlaService& service) {
  const auto [host, port] = parse_bind_address(service.config().bind_address);
  httplib::Server server;
  service.mount(server);
  std::cerr << "serving on http://" << host << ":" << port << "\n";
  return server.listen(host, port);
}

}  // namespace slakit
