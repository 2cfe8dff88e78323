#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "slakit/catalog.hpp"
#include "slakit/model.hpp"
#include "slakit/workflow.hpp"

namespace slakit {

inline constexpr std::string_view kSchemaVersion = "1.0";

struct SlaDocument {
  std::string schema_version{kSchemaVersion};
  SlaHeader header;
  std::vector<Constraint> app_slos;
  Workflow workflow;

  bool operator==(const SlaDocument&) const = default;
};

struct ValidationReport {
  std::vector<Finding> findings;
  bool valid = true;

  bool operator==(const ValidationReport&) const = default;
};

class ComposeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Throws ComposeError when agreement_start >= agreement_end.
SlaDocument compose(SlaHeader header, std::vector<Constraint> app_slos, Workflow workflow);

ValidationReport validate_document(const Catalog& catalog, const SlaDocument& doc);

/// Canonical UTF-8 JSON: fixed key order, no whitespace, activities in
/// topological order, edges sorted, integral numbers without a fraction and
/// other numbers in shortest round-trip form.
std::string serialize_canonical(const SlaDocument& doc);

enum class ParseErrc { json_syntax, schema_version_unsupported, schema_shape };

std::string_view to_string(ParseErrc e);

class ParseError : public std::runtime_error {
 public:
  ParseError(ParseErrc code, std::string path, const std::string& message);

  ParseErrc code() const noexcept { return code_; }
  /// JSONPath of the offending value ("$" for the root).
  const std::string& path() const noexcept { return path_; }

 private:
  ParseErrc code_;
  std::string path_;
};

/// Accepts any JSON of the document shape, regardless of key order and
/// whitespace. Unknown or missing keys are shape errors. The workflow is kept
/// as written; no graph checks happen here.
SlaDocument parse(std::string_view bytes);

/// Lenient form used for hand-written drafts: schema_version, slos, edges and
/// per-node constraint lists may be omitted, and a node's deployment_layer /
/// programming_model may be omitted or given as a bare name. Omitted bindings
/// are filled from the catalog mapping.
SlaDocument parse_draft(std::string_view bytes, const Catalog& catalog);

/// Lowercase hex SHA-256 of serialize_canonical(doc).
std::string document_id(const SlaDocument& doc);

nlohmann::ordered_json finding_to_json(const Finding& f);
nlohmann::ordered_json report_to_json(const ValidationReport& report);

}  // namespace slakit
