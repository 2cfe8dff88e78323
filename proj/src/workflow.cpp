#include "slakit/workflow.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <queue>
#include <set>

namespace slakit {

namespace {

std::string join_ids(const std::vector<std::string>& ids, std::string_view sep) {
  std::string out;
  for (const auto& id : ids) {
    if (!out.empty()) out += sep;
    out += id;
  }
  return out;
}

std::string node_path(std::size_t i) { return "workflow.activities[" + std::to_string(i) + "]"; }

}  // namespace

std::optional<std::vector<std::string>> find_cycle(const std::vector<std::string>& node_ids,
                                                   const std::vector<Edge>& edges) {
  std::map<std::string, std::set<std::string>> succ;
  for (const auto& id : node_ids) succ[id];
  for (const auto& e : edges) {
    if (succ.count(e.from) && succ.count(e.to)) succ[e.from].insert(e.to);
  }

  enum class Color { white, gray, black };
  std::map<std::string, Color> color;
  for (const auto& [id, _] : succ) color[id] = Color::white;
  std::vector<std::string> stack;
  std::optional<std::vector<std::string>> cycle;

  std::function<bool(const std::string&)> visit = [&](const std::string& u) {
    color[u] = Color::gray;
    stack.push_back(u);
    for (const auto& v : succ[u]) {
      if (color[v] == Color::gray) {
        auto start = std::find(stack.begin(), stack.end(), v);
        cycle.emplace(start, stack.end());
        return true;
      }
      if (color[v] == Color::white && visit(v)) return true;
    }
    stack.pop_back();
    color[u] = Color::black;
    return false;
  };

  for (const auto& [id, _] : succ) {
    if (color[id] == Color::white && visit(id)) break;
  }
  return cycle;
}

std::vector<std::string> topological_order(const Workflow& w) {
  std::map<std::string, std::size_t> indegree;
  std::map<std::string, std::vector<std::string>> succ;
  for (const auto& n : w.nodes) indegree[n.node_id];
  for (const auto& e : w.edges) {
    succ[e.from].push_back(e.to);
    ++indegree[e.to];
  }

  std::priority_queue<std::string, std::vector<std::string>, std::greater<>> ready;
  for (const auto& [id, deg] : indegree) {
    if (deg == 0) ready.push(id);
  }
  std::vector<std::string> order;
  order.reserve(indegree.size());
  while (!ready.empty()) {
    std::string u = ready.top();
    ready.pop();
    for (const auto& v : succ[u]) {
      if (--indegree[v] == 0) ready.push(v);
    }
    order.push_back(std::move(u));
  }
  return order;
}

Workflow build_workflow(std::vector<ActivityNode> nodes, std::vector<Edge> edges) {
  if (nodes.empty()) throw WorkflowError(WorkflowErrc::empty_workflow, "workflow has no activities");

  std::set<std::string> ids;
  for (const auto& n : nodes) {
    if (!ids.insert(n.node_id).second) {
      throw WorkflowError(WorkflowErrc::duplicate_node_id, "duplicate node id '" + n.node_id + "'");
    }
  }
  for (const auto& e : edges) {
    if (!ids.count(e.from) || !ids.count(e.to)) {
      throw WorkflowError(WorkflowErrc::dangling_edge,
                          "edge " + e.from + " -> " + e.to + " names an unknown node");
    }
  }
  std::vector<std::string> id_list(ids.begin(), ids.end());
  if (auto cycle = find_cycle(id_list, edges)) {
    throw WorkflowError(WorkflowErrc::workflow_cycle, "workflow contains a cycle: " + join_ids(*cycle, " -> "),
                        *cycle);
  }

  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

  Workflow w{std::move(nodes), std::move(edges)};
  const auto order = topological_order(w);
  std::map<std::string, std::size_t> rank;
  for (std::size_t i = 0; i < order.size(); ++i) rank[order[i]] = i;
  std::sort(w.nodes.begin(), w.nodes.end(), [&](const ActivityNode& a, const ActivityNode& b) {
    return rank[a.node_id] < rank[b.node_id];
  });
  return w;
}

Mapping map_activity(const Catalog& catalog, std::string_view activity_name) {
  const auto* a = catalog.find_activity(activity_name);
  if (a == nullptr) {
    throw CatalogError(CatalogErrc::activity_not_found,
                       "no activity named '" + std::string(activity_name) + "'");
  }
  return Mapping{a->deployment_layer, a->programming_model};
}

ActivityNode make_node(const Catalog& catalog, std::string node_id, std::string_view activity_name) {
  ActivityNode n;
  n.mapping = map_activity(catalog, activity_name);
  n.node_id = std::move(node_id);
  n.activity_name = std::string(activity_name);
  return n;
}

bool is_structural(FindingCode code) {
  return code == FindingCode::empty_workflow || code == FindingCode::duplicate_node_id ||
         code == FindingCode::dangling_edge || code == FindingCode::workflow_cycle;
}

namespace {

void check_scoped(const ActivitySchema& schema, MetricScope scope, const std::vector<Constraint>& constraints,
                  const std::string& prefix, std::vector<Finding>& out) {
  for (std::size_t j = 0; j < constraints.size(); ++j) {
    const auto& c = constraints[j];
    const std::string path = prefix + "[" + std::to_string(j) + "]";
    const auto* def = schema.find(scope, c.metric_id);
    if (def == nullptr) {
      out.push_back({FindingCode::unknown_metric, Severity::error, path,
                     "metric '" + c.metric_id + "' is not defined in the " +
                         std::string(to_string(scope)) + " scope of '" + schema.activity_name + "'"});
      continue;
    }
    auto found = check_constraint(*def, c, path);
    out.insert(out.end(), found.begin(), found.end());
  }
}

void check_node(const Catalog& catalog, const ActivityNode& node, std::size_t i, std::vector<Finding>& out) {
  const std::string base = node_path(i);
  if (catalog.find_activity(node.activity_name) == nullptr) {
    out.push_back({FindingCode::unknown_activity, Severity::error, base + ".name",
                   "activity '" + node.activity_name + "' is not in the catalog"});
    return;
  }
  const ActivitySchema schema = resolve_activity_schema(catalog, node.activity_name);

  if (node.mapping.deployment_layer != schema.deployment_layer) {
    out.push_back({FindingCode::mapping_mismatch, Severity::error, base + ".layer.name",
                   "activity '" + node.activity_name + "' is deployed on '" + schema.deployment_layer +
                       "', not '" + node.mapping.deployment_layer + "'"});
  }
  check_scoped(schema, MetricScope::layer, node.layer_constraints, base + ".layer.constraints", out);

  if (!schema.programming_model) {
    if (node.mapping.programming_model) {
      out.push_back({FindingCode::mapping_mismatch, Severity::error, base + ".model.name",
                     "activity '" + node.activity_name + "' maps to no programming model"});
    } else if (!node.model_constraints.empty()) {
      out.push_back({FindingCode::mapping_mismatch, Severity::error, base + ".model.constraints",
                     "model constraints given but activity '" + node.activity_name +
                         "' maps to no programming model"});
    }
  } else {
    if (node.mapping.programming_model != schema.programming_model) {
      out.push_back({FindingCode::mapping_mismatch, Severity::error, base + ".model.name",
                     "activity '" + node.activity_name + "' requires programming model '" +
                         *schema.programming_model + "'"});
    }
    check_scoped(schema, MetricScope::model, node.model_constraints, base + ".model.constraints", out);
  }

  check_scoped(schema, MetricScope::activity, node.activity_constraints, base + ".constraints", out);
}

}  // namespace

std::vector<Finding> validate_workflow(const Catalog& catalog, const Workflow& w) {
  std::vector<Finding> out;
  if (w.nodes.empty()) {
    out.push_back({FindingCode::empty_workflow, Severity::error, "workflow.activities",
                   "workflow has no activities"});
  }

  std::set<std::string> ids;
  for (std::size_t i = 0; i < w.nodes.size(); ++i) {
    if (!ids.insert(w.nodes[i].node_id).second) {
      out.push_back({FindingCode::duplicate_node_id, Severity::error, node_path(i) + ".id",
                     "duplicate node id '" + w.nodes[i].node_id + "'"});
    }
  }
  for (std::size_t k = 0; k < w.edges.size(); ++k) {
    const auto& e = w.edges[k];
    if (!ids.count(e.from) || !ids.count(e.to)) {
      out.push_back({FindingCode::dangling_edge, Severity::error,
                     "workflow.edges[" + std::to_string(k) + "]",
                     "edge " + e.from + " -> " + e.to + " names an unknown node"});
    }
  }
  if (auto cycle = find_cycle(std::vector<std::string>(ids.begin(), ids.end()), w.edges)) {
    out.push_back({FindingCode::workflow_cycle, Severity::error, "workflow.edges",
                   "cycle: " + join_ids(*cycle, " -> ") + " -> " + cycle->front()});
  }

  for (std::size_t i = 0; i < w.nodes.size(); ++i) check_node(catalog, w.nodes[i], i, out);
  sort_findings(out);
  return out;
}

}  // namespace slakit
