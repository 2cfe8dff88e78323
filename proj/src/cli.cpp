#include "slakit/cli.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "slakit/composer.hpp"
#include "slakit/service.hpp"
#include "slakit/store.hpp"

namespace slakit::cli {

namespace {

using ojson = nlohmann::ordered_json;

/// Raised inside command bodies to leave with a specific exit code.
struct Exit {
  int code;
};

std::string read_input(const std::string& source, std::istream& in, std::ostream& err) {
  std::ostringstream ss;
  if (source == "-") {
    ss << in.rdbuf();
    return ss.str();
  }
  std::ifstream file(source, std::ios::binary);
  if (!file) {
    err << "error: cannot read " << source << "\n";
    throw Exit{kIoError};
  }
  ss << file.rdbuf();
  return ss.str();
}

Catalog open_catalog(const std::string& dir, std::ostream& err) {
  if (dir.empty()) {
    err << "error: no catalog directory; pass --catalog or set SLA_CATALOG_DIR\n";
    throw Exit{kUsage};
  }
  try {
    return load_catalog(dir);
  } catch (const CatalogError& e) {
    err << "error: " << e.what() << "\n";
    throw Exit{kIoError};
  }
}

SlaStore open_store(const std::string& dir, std::ostream& err) {
  if (dir.empty()) {
    err << "error: no store directory; pass --store or set SLA_STORE_DIR\n";
    throw Exit{kUsage};
  }
  return SlaStore(dir);
}

int store_failure(const StoreError& e, std::ostream& err) {
  err << "error: " << e.what() << "\n";
  switch (e.code()) {
    case StoreErrc::not_found:
    case StoreErrc::corrupt_document: return kValidationFailure;
    case StoreErrc::io_error:
    case StoreErrc::locked: break;
  }
  return kIoError;
}

int cmd_catalog_list(const std::string& catalog_dir, std::ostream& out, std::ostream& err) {
  auto catalog = open_catalog(catalog_dir, err);
  ojson arr = ojson::array();
  for (const auto& a : catalog.activities()) {
    ojson e = ojson::object();
    e["name"] = a.activity_name;
    e["deployment_layer"] = a.deployment_layer;
    e["programming_model"] = a.programming_model ? ojson(*a.programming_model) : ojson(nullptr);
    arr.push_back(std::move(e));
  }
  out << arr.dump() << "\n";
  return kOk;
}

int cmd_catalog_show(const std::string& catalog_dir, const std::string& activity, std::ostream& out,
                     std::ostream& err) {
  auto catalog = open_catalog(catalog_dir, err);
  SlaService service(std::move(catalog), ServiceConfig{});
  auto r = service.activity_schema(activity);
  if (r.status != 200) {
    err << "error: activity '" << activity << "' is not in the catalog\n";
    return kValidationFailure;
  }
  out << r.body << "\n";
  return kOk;
}

int cmd_validate(const std::string& catalog_dir, const std::string& source, std::istream& in,
                 std::ostream& out, std::ostream& err) {
  auto catalog = open_catalog(catalog_dir, err);
  const std::string bytes = read_input(source, in, err);
  ValidationReport report;
  try {
    report = validate_document(catalog, parse(bytes));
  } catch (const ParseError& e) {
    if (e.code() != ParseErrc::schema_version_unsupported) {
      err << "error: " << e.what() << "\n";
      return kValidationFailure;
    }
    report.valid = false;
    report.findings.push_back({FindingCode::schema_version_unsupported, Severity::error, "schema_version",
                               e.what()});
  }
  out << report_to_json(report).dump() << "\n";
  if (!report.valid) {
    err << report.findings.size() << " finding(s)\n";
    return kValidationFailure;
  }
  return kOk;
}

int cmd_build(const std::string& catalog_dir, const std::string& source, std::istream& in, std::ostream& out,
              std::ostream& err) {
  auto catalog = open_catalog(catalog_dir, err);
  const std::string bytes = read_input(source, in, err);
  SlaDocument doc;
  try {
    doc = parse_draft(bytes, catalog);
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kValidationFailure;
  }
  const auto report = validate_document(catalog, doc);
  if (!report.valid) {
    err << report_to_json(report).dump() << "\n";
    return kValidationFailure;
  }
  doc.workflow = build_workflow(std::move(doc.workflow.nodes), std::move(doc.workflow.edges));
  out << serialize_canonical(doc);
  err << document_id(doc) << "\n";
  return kOk;
}

int cmd_store_put(const std::string& store_dir, const std::string& catalog_dir, const std::string& source,
                  std::istream& in, std::ostream& out, std::ostream& err) {
  auto store = open_store(store_dir, err);
  const std::string bytes = read_input(source, in, err);
  SlaDocument doc;
  try {
    doc = parse(bytes);
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kValidationFailure;
  }
  if (!catalog_dir.empty()) {
    const auto report = validate_document(open_catalog(catalog_dir, err), doc);
    if (!report.valid) {
      err << report_to_json(report).dump() << "\n";
      return kValidationFailure;
    }
  }
  try {
    out << store.put(doc) << "\n";
  } catch (const StoreError& e) {
    return store_failure(e, err);
  }
  return kOk;
}

int cmd_store_get(const std::string& store_dir, const std::string& id, std::ostream& out, std::ostream& err) {
  auto store = open_store(store_dir, err);
  try {
    out << store.get_bytes(id);
  } catch (const StoreError& e) {
    return store_failure(e, err);
  }
  return kOk;
}

int cmd_store_list(const std::string& store_dir, std::ostream& out, std::ostream& err) {
  auto store = open_store(store_dir, err);
  try {
    ojson arr = ojson::array();
    for (const auto& s : store.list()) {
      ojson j = ojson::object();
      j["id"] = s.id;
      j["application_type"] = s.application_type;
      j["created_at"] = s.created_at;
      j["size_bytes"] = s.size_bytes;
      arr.push_back(std::move(j));
    }
    out << arr.dump() << "\n";
  } catch (const StoreError& e) {
    return store_failure(e, err);
  }
  return kOk;
}

int cmd_store_delete(const std::string& store_dir, const std::string& id, std::ostream& err) {
  auto store = open_store(store_dir, err);
  try {
    store.remove(id);
  } catch (const StoreError& e) {
    return store_failure(e, err);
  }
  err << "deleted " << id << "\n";
  return kOk;
}

int cmd_serve(ServiceConfig config, std::ostream& err) {
  if (config.catalog_path.empty() || config.store_path.empty()) {
    err << "error: serve needs --catalog and --store\n";
    return kUsage;
  }
  try {
    parse_bind_address(config.bind_address);
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  }
  try {
    SlaService service(std::move(config));
    if (!serve(service)) {
      err << "error: cannot listen on " << service.config().bind_address << "\n";
      return kIoError;
    }
  } catch (const CatalogError& e) {
    err << "error: " << e.what() << "\n";
    return kIoError;
  }
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err) {
  CLI::App app{"Compose, validate and store SLAs for multi-layer IoT applications", "sla"};
  app.require_subcommand(1);

  std::string catalog_dir;
  std::string store_dir;
  auto add_catalog = [&](CLI::App* cmd) {
    cmd->add_option("--catalog", catalog_dir, "Catalog directory")->envname("SLA_CATALOG_DIR");
  };
  auto add_store = [&](CLI::App* cmd) {
    cmd->add_option("--store", store_dir, "Store directory")->envname("SLA_STORE_DIR");
  };

  auto* catalog_cmd = app.add_subcommand("catalog", "Inspect the metric catalog");
  catalog_cmd->require_subcommand(1);
  auto* catalog_list = catalog_cmd->add_subcommand("list", "List workflow activities");
  add_catalog(catalog_list);
  std::string activity;
  auto* catalog_show = catalog_cmd->add_subcommand("show", "Show the merged metric schema of an activity");
  catalog_show->add_option("activity", activity, "Activity name")->required();
  add_catalog(catalog_show);

  std::string source;
  auto* validate_cmd = app.add_subcommand("validate", "Validate an SLA document");
  validate_cmd->add_option("file", source, "Document path, or - for stdin")->required();
  add_catalog(validate_cmd);

  auto* build_cmd = app.add_subcommand("build", "Build a canonical SLA document from a draft");
  build_cmd->add_option("--from", source, "Draft path, or - for stdin")->required();
  add_catalog(build_cmd);

  auto* store_cmd = app.add_subcommand("store", "Manage stored SLA documents");
  store_cmd->require_subcommand(1);
  auto* store_put = store_cmd->add_subcommand("put", "Store a document; prints its id");
  store_put->add_option("file", source, "Document path, or - for stdin")->required();
  add_store(store_put);
  store_put->add_option("--catalog", catalog_dir, "Validate against this catalog before storing");
  std::string id;
  auto* store_get = store_cmd->add_subcommand("get", "Print stored canonical bytes");
  store_get->add_option("id", id, "Document id")->required();
  add_store(store_get);
  auto* store_list = store_cmd->add_subcommand("list", "List stored document summaries");
  add_store(store_list);
  auto* store_delete = store_cmd->add_subcommand("delete", "Remove a stored document");
  store_delete->add_option("id", id, "Document id")->required();
  add_store(store_delete);

  ServiceConfig config;
  std::string bind = config.bind_address;
  std::string static_dir;
  auto* serve_cmd = app.add_subcommand("serve", "Run the HTTP service");
  add_catalog(serve_cmd);
  add_store(serve_cmd);
  serve_cmd->add_option("--bind", bind, "host:port to listen on")->capture_default_str();
  serve_cmd->add_option("--body-limit", config.request_body_limit, "Maximum request body in bytes")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  serve_cmd->add_option("--cors-origin", config.cors_origins, "Allowed cross-origin client (repeatable)");
  serve_cmd->add_option("--static-dir", static_dir, "Directory of wizard assets served under /");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    err << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n";
    err << app.help();
    return kUsage;
  }

  try {
    if (*catalog_list) return cmd_catalog_list(catalog_dir, out, err);
    if (*catalog_show) return cmd_catalog_show(catalog_dir, activity, out, err);
    if (*validate_cmd) return cmd_validate(catalog_dir, source, in, out, err);
    if (*build_cmd) return cmd_build(catalog_dir, source, in, out, err);
    if (*store_put) return cmd_store_put(store_dir, catalog_dir, source, in, out, err);
    if (*store_get) return cmd_store_get(store_dir, id, out, err);
    if (*store_list) return cmd_store_list(store_dir, out, err);
    if (*store_delete) return cmd_store_delete(store_dir, id, err);
    if (*serve_cmd) {
      config.catalog_path = catalog_dir;
      config.store_path = store_dir;
      config.bind_address = bind;
      if (!static_dir.empty()) config.static_dir = static_dir;
      return cmd_serve(std::move(config), err);
    }
  } catch (const Exit& e) {
    return e.code;
  }
  err << app.help();
  return kUsage;
}

}  // namespace slakit::cli
