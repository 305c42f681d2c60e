#include "tempograph/inference.hpp"
#include "tempograph/interval_algebra.hpp"
#include "tempograph/temporal_graph.hpp"

namespace tempograph {

namespace {

// Question-time node, every document-time node, and their TimeLink edges
// into the question-time node.
std::pair<std::vector<Node>, std::vector<Edge>> dt2qt_parts(const TemporalGraph& g) {
  std::vector<Node> nodes;
  for (const Node& n : g.nodes()) {
    if (n.kind != NodeKind::kDocEvent) nodes.push_back(n);
  }
  std::vector<Edge> edges;
  for (const Edge& e : g.edges()) {
    if (e.provenance == EdgeProvenance::kTimeLink && e.dst == g.question_time() &&
        g.node(e.src).kind == NodeKind::kDocTime) {
      edges.push_back(e);
    }
  }
  return {std::move(nodes), std::move(edges)};
}

}  // namespace

TemporalGraph select_subgraph(const TemporalGraph& g, GraphVariant variant) {
  if (variant == GraphVariant::kFull) return g;
  auto [nodes, edges] = dt2qt_parts(g);
  switch (variant) {
    case GraphVariant::kFull:
    case GraphVariant::kDT2QT:
      break;
    case GraphVariant::kDTE2QT:
      for (const auto& [id, relation] : infer_all(g)) {
        if (relation == TemporalRelation::kUndetermined) continue;
        nodes.push_back(g.node(id));
        edges.push_back({id, g.question_time(), relation, EdgeProvenance::kInferred});
      }
      break;
    case GraphVariant::kAllTime: {
      std::vector<const Node*> times;
      for (const Node& n : g.nodes()) {
        if (n.kind == NodeKind::kDocTime && n.interval) times.push_back(&n);
      }
      for (std::size_t i = 0; i < times.size(); ++i) {
        for (std::size_t j = i + 1; j < times.size(); ++j) {
          edges.push_back({times[i]->id, times[j]->id, relate(*times[i]->interval, *times[j]->interval),
                           EdgeProvenance::kTimeLink});
        }
      }
      break;
    }
  }
  return TemporalGraph(std::move(nodes), std::move(edges));
}

}  // namespace tempograph
