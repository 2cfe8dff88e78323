// End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
// exits non-zero when any criterion fails.
#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <functional>
#include <iostream>
#include <map>
#include <set>
#include <sstream>

#include "oracles/generators.hpp"
#include "oracles/live_server.hpp"
#include "oracles/oracles.hpp"
#include "oracles/rhms.hpp"
#include "oracles/support.hpp"
#include "slakit/digest.hpp"
#include "slakit/service.hpp"
#include "slakit/store.hpp"

using namespace slakit;
namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

struct Failure {
  std::string detail;
};

void expect(bool ok, const std::string& detail) {
  if (!ok) throw Failure{detail};
}

const Catalog& shipped() {
  static const Catalog catalog = load_catalog(support::default_catalog());
  return catalog;
}

void golden_scenario() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto golden = support::read_file(support::data_dir() / "rhms_golden.json");
  const auto draft = support::read_file(support::data_dir() / "rhms_draft.json");

  auto from_draft = parse_draft(draft, shipped());
  const auto report = validate_document(shipped(), from_draft);
  expect(report.valid && report.findings.empty(), "draft has findings: " + report_to_json(report).dump());
  from_draft.workflow = build_workflow(from_draft.workflow.nodes, from_draft.workflow.edges);
  expect(serialize_canonical(from_draft) == golden, "draft does not serialize to the golden bytes");

  const auto built = rhms::document(shipped());
  expect(validate_document(shipped(), built).findings.empty(), "API-built document has findings");
  expect(serialize_canonical(built) == golden, "API-built document does not serialize to the golden bytes");

  const auto id = document_id(from_draft);
  expect(is_sha256_hex(id), "id is not 64 lowercase hex: " + id);
  expect(id == document_id(built) && id == document_id(parse(golden)), "id is not stable");
  expect(id == support::external_sha256(support::data_dir() / "rhms_golden.json"), "id differs from sha256sum");

  const auto elapsed = std::chrono::steady_clock::now() - t0;
  expect(elapsed < std::chrono::seconds(1), "took longer than 1 s");
}

void mapping_conformance() {
  const auto rta = resolve_activity_schema(shipped(), "Real-time Analysis");
  expect(rta.deployment_layer == "cloud" && rta.programming_model == std::optional<std::string>{"stream_processing"},
         "Real-time Analysis mapping is wrong");
  const auto cap = resolve_activity_schema(shipped(), "Capture Event of Interest (EoI)");
  expect(cap.deployment_layer == "iot_device" && !cap.programming_model.has_value(),
         "Capture Event of Interest (EoI) mapping is wrong");
}

void round_trip() {
  gen::Rng rng(1001);
  for (int i = 0; i < 1000; ++i) {
    const auto doc = gen::valid_document(rng, shipped());
    const auto bytes = serialize_canonical(doc);
    expect(parse(bytes) == doc, "parse(serialize(d)) != d at iteration " + std::to_string(i));
    expect(serialize_canonical(parse(bytes)) == bytes, "serialize not idempotent at iteration " + std::to_string(i));
  }
}

void dag_oracle() {
  gen::Rng rng(1002);
  int cyclic = 0;
  for (int i = 0; i < 10000; ++i) {
    const std::size_t n = 1 + gen::pick(rng, 6);
    std::vector<std::string> ids;
    for (std::size_t k = 0; k < n; ++k) ids.push_back("v" + std::to_string(k));
    const double density = std::uniform_real_distribution<double>(0.0, 0.5)(rng);
    std::vector<Edge> edges;
    std::vector<std::pair<std::string, std::string>> pairs;
    for (const auto& a : ids) {
      for (const auto& b : ids) {
        if (gen::coin(rng, density)) {
          edges.push_back({a, b});
          pairs.emplace_back(a, b);
        }
      }
    }
    const bool expected = oracle::has_cycle_by_paths(ids, pairs);
    const auto witness = find_cycle(ids, edges);
    expect(witness.has_value() == expected, "disagreement on graph " + std::to_string(i));
    cyclic += expected;
  }
  expect(cyclic > 1000 && cyclic < 9000, "sample is unbalanced: " + std::to_string(cyclic) + " cyclic");
}

void constraint_oracle() {
  gen::Rng rng(1003);
  std::vector<MetricDefinition> catalog_metrics = shipped().application_slos();
  for (const auto& [_, r] : shipped().resources()) catalog_metrics.insert(catalog_metrics.end(), r.metrics.begin(), r.metrics.end());
  for (int i = 0; i < 10000; ++i) {
    const auto def = i % 2 ? gen::random_metric(rng) : gen::choose(rng, catalog_metrics);
    const auto c = gen::random_constraint(rng, def);
    expect(oracle::keys_of(check_constraint(def, c, "c")) == oracle::check_constraint(def, c, "c"),
           "disagreement on constraint " + std::to_string(i));
  }
}

/// Content hash of every file under the given source directories.
std::map<std::string, std::string> source_snapshot() {
  std::map<std::string, std::string> out;
  for (const char* sub : {"src", "include", "tools"}) {
    for (const auto& e : fs::recursive_directory_iterator(support::source_dir() / sub)) {
      if (e.is_regular_file()) out[e.path().string()] = sha256_hex(support::read_file(e.path()));
    }
  }
  return out;
}

void extendibility() {
  const auto before = source_snapshot();
  support::TempDir dir;
  const auto root = support::copy_catalog(dir);
  support::write_file(root / "activities" / "detect_anomaly.csv",
                      "metric_id,display_name,category,value_type,unit,range_min,range_max,enum_values,allowed_operators\n"
                      "detection_accuracy,Detection accuracy,slo,percentage,percent,0,100,,gte|gt\n");
  {
    std::ofstream manifest(root / "manifest.csv", std::ios::app);
    manifest << "Detect anomaly,detect_anomaly,edge,\n";
  }

  const auto cli = support::run_command(support::quote(support::sla_binary()) + " catalog list --catalog " +
                                        support::quote(root.string()) + " 2>/dev/null");
  expect(cli.exit_code == 0, "sla catalog list failed");
  bool listed = false;
  for (const auto& a : json::parse(cli.out)) listed = listed || a["name"] == "Detect anomaly";
  expect(listed, "new activity missing from sla catalog list");

  ServiceConfig config;
  config.catalog_path = root;
  config.store_path = dir / "store";
  SlaService service(config);
  {
    support::LiveServer live(service);
    auto client = live.client();
    auto res = client.Get("/catalog/activities");
    expect(res && res->status == 200, "GET /catalog/activities failed");
    bool served = false;
    for (const auto& a : json::parse(res->body)) served = served || a["name"] == "Detect anomaly";
    expect(served, "new activity missing from GET /catalog/activities");

    const auto& catalog = service.catalog();
    auto n1 = make_node(catalog, "n1", "Examine captured EoI");
    auto n2 = make_node(catalog, "n2", "Detect anomaly");
    const auto schema = resolve_activity_schema(catalog, "Detect anomaly");
    n2.activity_constraints.push_back(make_constraint(*schema.find(MetricScope::activity, "detection_accuracy"),
                                                      ConstraintScope::activity, Priority::high, Operator::gte, 95.0,
                                                      "percent"));
    const auto doc = compose({"Remote Health Monitoring", *parse_utc("2024-01-01T00:00:00Z"),
                              *parse_utc("2025-01-01T00:00:00Z")},
                             {}, build_workflow({n1, n2}, {{"n1", "n2"}}));
    expect(validate_document(catalog, doc).valid, "document using the new activity is invalid");
    res = client.Post("/sla/validate", serialize_canonical(doc), "application/json");
    expect(res && res->status == 200 && json::parse(res->body)["valid"] == true,
           "service rejects the document using the new activity");
  }
  expect(source_snapshot() == before, "source tree changed");
}

void store_integrity() {
  support::TempDir dir;
  const auto root = dir / "store";
  const auto& catalog = shipped();
  std::vector<pid_t> children;
  for (int w = 0; w < 4; ++w) {
    const pid_t pid = ::fork();
    expect(pid >= 0, "fork failed");
    if (pid == 0) {
      int code = 0;
      try {
        gen::Rng rng(2000 + w);
        SlaStore store(root);
        for (int i = 0; i < 100; ++i) store.put(gen::valid_document(rng, catalog));
      } catch (const std::exception& e) {
        std::cerr << "writer " << w << ": " << e.what() << "\n";
        code = 1;
      }
      ::_exit(code);
    }
    children.push_back(pid);
  }
  for (pid_t pid : children) {
    int status = 0;
    ::waitpid(pid, &status, 0);
    expect(WIFEXITED(status) && WEXITSTATUS(status) == 0, "a writer process failed");
  }

  std::set<std::string> expected;
  for (int w = 0; w < 4; ++w) {
    gen::Rng rng(2000 + w);
    for (int i = 0; i < 100; ++i) expected.insert(document_id(gen::valid_document(rng, catalog)));
  }

  SlaStore store(root);
  const auto listed = store.list();
  expect(listed == store.rescan(), "index differs from a directory rescan");
  std::set<std::string> ids;
  for (const auto& s : listed) ids.insert(s.id);
  expect(ids.size() == listed.size(), "index has duplicate entries");
  expect(ids == expected, "index does not hold exactly the written documents");

  const auto sums = support::run_command("cd " + support::quote((root / "slas").string()) + " && sha256sum *.json");
  expect(sums.exit_code == 0, "sha256sum failed");
  std::istringstream lines(sums.out);
  std::string hash;
  std::string name;
  std::size_t files = 0;
  while (lines >> hash >> name) {
    expect(name == hash + ".json", "file " + name + " has sha256 " + hash);
    ++files;
  }
  expect(files == expected.size(), "unexpected number of stored files");
}

/// Bodies: canonical serializations of fuzzed documents, some with the text
/// damaged so they no longer parse.
std::string random_body(gen::Rng& rng) {
  std::string body = serialize_canonical(gen::mutated_document(rng, shipped()));
  switch (gen::pick(rng, 8)) {
    case 0: body.resize(gen::pick(rng, body.size())); break;
    case 1: body[gen::pick(rng, body.size())] = '}'; break;
    case 2: {
      auto j = json::parse(body, nullptr, false);
      if (!j.is_discarded()) body = j.dump(2);
      break;
    }
    default: break;
  }
  return body;
}

void service_differential() {
  support::TempDir dir;
  ServiceConfig config;
  config.catalog_path = support::default_catalog();
  config.store_path = dir / "store";
  SlaService service(config);
  support::LiveServer live(service);
  auto client = live.client();
  gen::Rng rng(1004);
  for (int i = 0; i < 200; ++i) {
    const auto body = random_body(rng);
    auto res = client.Post("/sla/validate", body, "application/json");
    expect(static_cast<bool>(res), "request " + std::to_string(i) + " failed");
    SlaDocument doc;
    try {
      doc = parse(body);
    } catch (const ParseError& e) {
      if (e.code() == ParseErrc::schema_version_unsupported) {
        const auto r = json::parse(res->body);
        expect(res->status == 200 && r["valid"] == false && r["findings"][0]["code"] == "SCHEMA_VERSION_UNSUPPORTED",
               "body " + std::to_string(i) + ": unsupported version not reported");
      } else {
        expect(res->status == 400 && json::parse(res->body)["code"] == "JSON_SYNTAX",
               "body " + std::to_string(i) + ": expected 400, got " + std::to_string(res->status));
      }
      continue;
    }
    const auto expected = report_to_json(validate_document(shipped(), doc)).dump();
    expect(res->status == 200, "body " + std::to_string(i) + ": status " + std::to_string(res->status));
    expect(res->body == expected, "body " + std::to_string(i) + ": report differs");
  }
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<void()>>> criteria{
      {"golden scenario", golden_scenario},
      {"mapping conformance", mapping_conformance},
      {"round trip", round_trip},
      {"dag oracle equivalence", dag_oracle},
      {"constraint validator equivalence", constraint_oracle},
      {"store integrity", store_integrity},
      {"extendibility", extendibility},
      {"service differential", service_differential},
  };
  int failed = 0;
  for (const auto& [name, check] : criteria) {
    try {
      check();
      std::cout << "PASS " << name << std::endl;
    } catch (const Failure& f) {
      ++failed;
      std::cout << "FAIL " << name << ": " << f.detail << std::endl;
    } catch (const std::exception& e) {
      ++failed;
      std::cout << "FAIL " << name << ": " << e.what() << std::endl;
    }
  }
  return failed == 0 ? 0 : 1;
}
