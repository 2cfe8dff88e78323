#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "slakit/catalog.hpp"
#include "slakit/store.hpp"

namespace httplib {
class Server;
}

namespace slakit {

struct ServiceConfig {
  std::filesystem::path catalog_path;
  std::filesystem::path store_path;
  std::string bind_address = "127.0.0.1:8080";
  std::size_t request_body_limit = 1 << 20;
  /// Origins echoed in Access-Control-Allow-Origin. Empty: same origin only.
  std::vector<std::string> cors_origins;
  /// Wizard assets served under GET / when the directory exists.
  std::optional<std::filesystem::path> static_dir;
};

struct HttpResponse {
  int status = 200;
  std::string content_type = "application/json";
  std::string body;
};

/// Route handlers as plain functions of the request, so they can be driven
/// without a socket. The service keeps no SLA state of its own; everything
/// lives in the store directory.
class SlaService {
 public:
  /// Loads the catalog; throws CatalogError.
  explicit SlaService(ServiceConfig config);
  SlaService(Catalog catalog, ServiceConfig config);

  const Catalog& catalog() const { return catalog_; }
  const ServiceConfig& config() const { return config_; }

  HttpResponse list_activities() const;                       // GET /catalog/activities
  HttpResponse activity_schema(std::string_view name) const;  // GET /catalog/activities/{name}
  HttpResponse application_slos() const;                      // GET /catalog/application-slos
  HttpResponse validate(std::string_view body) const;         // POST /sla/validate
  HttpResponse create(std::string_view body);                 // POST /sla
  HttpResponse get_sla(std::string_view id) const;            // GET /slas/{id}
  HttpResponse list_slas() const;                             // GET /slas

  void mount(httplib::Server& server);

 private:
  Catalog catalog_;
  ServiceConfig config_;
  SlaStore store_;
};

/// "host:port" -> (host, port). Throws std::invalid_argument.
std::pair<std::string, int> parse_bind_address(std::string_view address);

/// Blocks serving until the process is stopped. Returns false when the
/// address cannot be bound.
bool serve(SlaService& service);

nlohmann::ordered_json metric_to_json(const MetricDefinition& m);

}  // namespace slakit
