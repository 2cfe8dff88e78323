#include "doctest.h"
#include "oracles/support.hpp"
#include "slakit/composer.hpp"

using support::TempDir;
using support::quote;
using json = nlohmann::json;

namespace {

std::string sla() { return quote(support::sla_binary()); }
std::string catalog_flag() { return " --catalog " + quote(support::default_catalog().string()); }
std::string data(const std::string& name) { return quote((support::data_dir() / name).string()); }

support::CommandResult run(const std::string& args) { return support::run_command(sla() + " " + args + " 2>/dev/null"); }

std::string golden() { return support::read_file(support::data_dir() / "rhms_golden.json"); }

}  // namespace

TEST_CASE("cli: catalog list and show") {
  auto r = run("catalog list" + catalog_flag());
  CHECK(r.exit_code == 0);
  CHECK(json::parse(r.out).size() == 5);

  r = run("catalog show 'Real-time Analysis'" + catalog_flag());
  CHECK(r.exit_code == 0);
  CHECK(json::parse(r.out)["programming_model"] == "stream_processing");

  CHECK(run("catalog show Frobnicate" + catalog_flag()).exit_code == 1);
  CHECK(run("catalog list --catalog /nonexistent/catalog").exit_code == 3);
}

TEST_CASE("cli: validate exit codes") {
  auto r = run("validate " + data("rhms_golden.json") + catalog_flag());
  CHECK(r.exit_code == 0);
  CHECK(r.out == "{\"valid\":true,\"findings\":[]}\n");

  CHECK(run("validate" + catalog_flag()).exit_code == 2);
  CHECK(run("frobnicate").exit_code == 2);

  TempDir dir;
  auto doc = json::parse(golden());
  doc["workflow"]["edges"].push_back({{"from", "n5"}, {"to", "n1"}});
  support::write_file(dir / "cycle.json", doc.dump());
  r = run("validate " + quote((dir / "cycle.json").string()) + catalog_flag());
  CHECK(r.exit_code == 1);
  CHECK(json::parse(r.out)["findings"][0]["code"] == "WORKFLOW_CYCLE");

  support::write_file(dir / "broken.json", "{");
  CHECK(run("validate " + quote((dir / "broken.json").string()) + catalog_flag()).exit_code == 1);
  CHECK(run("validate " + quote((dir / "missing.json").string()) + catalog_flag()).exit_code == 3);
}

TEST_CASE("cli: build produces the canonical golden bytes") {
  auto r = run("build --from " + data("rhms_draft.json") + catalog_flag());
  CHECK(r.exit_code == 0);
  CHECK(r.out == golden());

  auto both = support::run_command(sla() + " build --from " + data("rhms_draft.json") + catalog_flag() + " 2>&1 >/dev/null");
  CHECK(both.out.find(support::external_sha256(support::data_dir() / "rhms_golden.json")) != std::string::npos);

  // application SLOs may be omitted
  TempDir dir;
  auto draft = json::parse(support::read_file(support::data_dir() / "rhms_draft.json"));
  draft.erase("slos");
  support::write_file(dir / "draft.json", draft.dump());
  r = run("build --from " + quote((dir / "draft.json").string()) + catalog_flag());
  CHECK(r.exit_code == 0);
  CHECK(json::parse(r.out)["slos"].empty());
}

TEST_CASE("cli: build output pipes into validate") {
  const auto r = support::run_command(sla() + " build --from - " + catalog_flag() + " < " + data("rhms_draft.json") +
                                      " 2>/dev/null | " + sla() + " validate -" + catalog_flag());
  CHECK(r.exit_code == 0);
  CHECK(json::parse(r.out)["valid"] == true);
}

TEST_CASE("cli: store round trip") {
  TempDir dir;
  const std::string store = " --store " + quote((dir / "store").string());
  auto r = run("store put " + data("rhms_golden.json") + store);
  REQUIRE(r.exit_code == 0);
  const std::string id = r.out.substr(0, r.out.find('\n'));
  CHECK(id == support::external_sha256(support::data_dir() / "rhms_golden.json"));

  r = run("store get " + id + store);
  CHECK(r.exit_code == 0);
  CHECK(r.out == golden());

  r = run("store list" + store);
  CHECK(r.exit_code == 0);
  CHECK(r.out.find(id) != std::string::npos);

  CHECK(run("store delete " + id + store).exit_code == 0);
  CHECK(run("store get " + id + store).exit_code == 1);
  CHECK(run("store delete " + id + store).exit_code == 1);
  CHECK(run("store list").exit_code == 2);
}

TEST_CASE("cli: directories from the environment") {
  TempDir dir;
  const std::string env = "SLA_CATALOG_DIR=" + quote(support::default_catalog().string()) +
                          " SLA_STORE_DIR=" + quote((dir / "store").string()) + " ";
  auto r = support::run_command(env + sla() + " validate " + data("rhms_golden.json") + " 2>/dev/null");
  CHECK(r.exit_code == 0);
  r = support::run_command(env + sla() + " store put --catalog " + quote(support::default_catalog().string()) + " " +
                           data("rhms_golden.json") + " 2>/dev/null");
  CHECK(r.exit_code == 0);
  r = support::run_command(env + sla() + " store list 2>/dev/null");
  CHECK(r.exit_code == 0);
  CHECK(json::parse(r.out).size() == 1);
}
