#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "slakit/catalog.hpp"
#include "slakit/model.hpp"

namespace slakit {

/// Where an activity is deployed and which programming model it needs.
struct Mapping {
  std::string deployment_layer;
  std::optional<std::string> programming_model;

  bool operator==(const Mapping&) const = default;
};

/// One workflow node. `mapping` is the layer/model binding recorded in the
/// document; validation checks it against the catalog.
struct ActivityNode {
  std::string node_id;
  std::string activity_name;
  Mapping mapping;
  std::vector<Constraint> layer_constraints;
  std::vector<Constraint> model_constraints;
  std::vector<Constraint> activity_constraints;

  bool operator==(const ActivityNode&) const = default;
};

struct Edge {
  std::string from;
  std::string to;

  auto operator<=>(const Edge&) const = default;
};

/// A Workflow may hold an arbitrary graph (e.g. one parsed from user input);
/// build_workflow only returns valid DAGs.
struct Workflow {
  std::vector<ActivityNode> nodes;
  std::vector<Edge> edges;

  bool operator==(const Workflow&) const = default;
};

enum class WorkflowErrc { empty_workflow, duplicate_node_id, dangling_edge, workflow_cycle };

class WorkflowError : public std::runtime_error {
 public:
  WorkflowError(WorkflowErrc code, const std::string& message, std::vector<std::string> witness = {})
      : std::runtime_error(message), code_(code), witness_(std::move(witness)) {}

  WorkflowErrc code() const noexcept { return code_; }
  /// For workflow_cycle: node ids along one cycle, first node not repeated.
  const std::vector<std::string>& witness() const noexcept { return witness_; }

 private:
  WorkflowErrc code_;
  std::vector<std::string> witness_;
};

/// Validates the graph and returns it in canonical form: nodes reordered
/// into topological_order, edges sorted by (from, to) with duplicates removed.
Workflow build_workflow(std::vector<ActivityNode> nodes, std::vector<Edge> edges);

/// Kahn's algorithm with ascending node_id tie-break. Requires a valid DAG.
std::vector<std::string> topological_order(const Workflow& w);

/// First cycle met by a DFS that visits nodes and successors in ascending
/// node_id order; nullopt for acyclic graphs. Edges naming unknown nodes are
/// ignored.
std::optional<std::vector<std::string>> find_cycle(const std::vector<std::string>& node_ids,
                                                   const std::vector<Edge>& edges);

/// Throws CatalogError(activity_not_found).
Mapping map_activity(const Catalog& catalog, std::string_view activity_name);

/// Node with the catalog mapping filled in and no constraints.
ActivityNode make_node(const Catalog& catalog, std::string node_id, std::string_view activity_name);

/// Structural findings plus per-constraint findings. Paths:
///   workflow.activities[i].{id,name}
///   workflow.activities[i].layer.name / .layer.constraints[j]
///   workflow.activities[i].model.name / .model.constraints[j]
///   workflow.activities[i].constraints[j]
///   workflow.edges[k]
std::vector<Finding> validate_workflow(const Catalog& catalog, const Workflow& w);

bool is_structural(FindingCode code);

}  // namespace slakit
