// The remote health monitoring scenario assembled through the library API.
#pragma once

#include "slakit/composer.hpp"

namespace rhms {

inline slakit::SlaDocument document(const slakit::Catalog& catalog) {
  using namespace slakit;
  SlaHeader header{"Remote Health Monitoring", *parse_utc("2024-01-01T00:00:00Z"), *parse_utc("2025-01-01T00:00:00Z")};

  std::vector<Constraint> slos{make_constraint(*catalog.find_application_slo("end_to_end_response_time"),
                                               ConstraintScope::application, Priority::high, Operator::lt, 60.0,
                                               "seconds")};

  std::vector<ActivityNode> nodes;
  std::vector<Edge> edges;
  const char* names[] = {"Capture Event of Interest (EoI)", "Examine captured EoI", "Ingest data",
                         "Real-time Analysis", "Store structured data"};
  for (int i = 0; i < 5; ++i) {
    nodes.push_back(make_node(catalog, "n" + std::to_string(i + 1), names[i]));
    if (i > 0) edges.push_back({"n" + std::to_string(i), "n" + std::to_string(i + 1)});
  }
  const auto schema = resolve_activity_schema(catalog, "Ingest data");
  nodes[2].layer_constraints.push_back(make_constraint(*schema.find(MetricScope::layer, "network_connectivity"),
                                                       ConstraintScope::layer, Priority::high, Operator::eq, 100.0,
                                                       "percent"));
  return compose(header, std::move(slos), build_workflow(std::move(nodes), std::move(edges)));
}

}  // namespace rhms
