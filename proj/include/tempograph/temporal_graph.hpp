#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "tempograph/annotation.hpp"
#include "tempograph/chronon.hpp"
#include "tempograph/relation.hpp"

namespace tempograph {

using NodeId = std::int32_t;

enum class NodeKind { kQuestionTime, kDocTime, kDocEvent };
enum class EdgeProvenance { kAnnotation, kTimeLink, kInferred };

std::string_view kind_name(NodeKind kind);
std::string_view provenance_name(EdgeProvenance provenance);

// Offsets index the question text for the question-time node and the
// document text otherwise.
struct Node {
  NodeId id = 0;
  NodeKind kind = NodeKind::kDocEvent;
  std::size_t char_start = 0;
  std::size_t char_end = 0;
  std::string surface;
  std::optional<TimeInterval> interval;

  friend bool operator==(const Node&, const Node&) = default;
};

struct Edge {
  NodeId src = 0;
  NodeId dst = 0;
  TemporalRelation relation = TemporalRelation::kOverlap;
  EdgeProvenance provenance = EdgeProvenance::kAnnotation;

  friend bool operator==(const Edge&, const Edge&) = default;
};

// One step of an undirected walk over stored edges. A reversed hop walks
// an edge against its stored direction and carries the inverse relation.
struct Hop {
  NodeId from = 0;
  NodeId to = 0;
  TemporalRelation relation = TemporalRelation::kOverlap;
  std::size_t edge = 0;
  bool reversed = false;

  friend bool operator==(const Hop&, const Hop&) = default;
};

// Immutable directed graph. Edges are stored forward only; hops() exposes
// both directions.
class TemporalGraph {
 public:
  TemporalGraph() = default;

  // Nodes may come in any order; they are kept sorted by id. Throws
  // std::invalid_argument if an invariant is violated: duplicate ids, not
  // exactly one question-time node, an event with an interval, a
  // question-time node without one, a self-loop, a dangling endpoint, an
  // UNDETERMINED label, or a duplicate (src, dst, relation).
  TemporalGraph(std::vector<Node> nodes, std::vector<Edge> edges);

  const std::vector<Node>& nodes() const { return nodes_; }
  const std::vector<Edge>& edges() const { return edges_; }

  bool has_node(NodeId id) const;
  const Node& node(NodeId id) const;
  std::size_t index_of(NodeId id) const;
  NodeId question_time() const { return question_time_; }

  // Sorted by (to, forward before reversed, edge index).
  std::span<const Hop> hops(NodeId id) const;

  friend bool operator==(const TemporalGraph& a, const TemporalGraph& b) {
    return a.nodes_ == b.nodes_ && a.edges_ == b.edges_;
  }

 private:
  std::vector<Node> nodes_;
  std::vector<Edge> edges_;
  std::vector<std::size_t> hop_offsets_;
  std::vector<Hop> hop_list_;
  NodeId question_time_ = 0;
};

struct BuildDiagnostics {
  std::size_t unnormalizable_timexes = 0;
  std::size_t dropped_events = 0;
  std::size_t skipped_tlinks = 0;
  std::vector<std::string> warnings;
};

struct GraphBuild {
  TemporalGraph graph;
  BuildDiagnostics diagnostics;
};

// Question-time node gets id 0; document nodes follow in document order.
// Timex intervals come from the annotation value when parse_timex_value
// accepts it, otherwise from normalize_timex on the surface; a timex with
// neither becomes an interval-less node without a TimeLink edge. Events
// lying inside a timex span are dropped. Throws BadAnnotation when
// check_annotations reports anything.
GraphBuild build_graph(std::string_view question_text, const QuestionTimeSpan& qspan,
                       const AnnotatedDocument& doc);

enum class GraphVariant { kFull, kDT2QT, kDTE2QT, kAllTime };

std::string_view variant_name(GraphVariant v);
std::optional<GraphVariant> parse_variant(std::string_view text);

// Node ids are preserved from the full graph.
TemporalGraph select_subgraph(const TemporalGraph& g, GraphVariant variant);

struct GraphStats {
  std::size_t nodes = 0;
  std::size_t edges = 0;
  double mean_in_degree = 0.0;
  double mean_out_degree = 0.0;
};

GraphStats graph_stats(const TemporalGraph& g);
std::size_t in_degree(const TemporalGraph& g, NodeId id);
std::size_t out_degree(const TemporalGraph& g, NodeId id);

struct MeanGraphStats {
  std::size_t graphs_counted = 0;
  double nodes = 0.0;
  double edges = 0.0;
  double in_degree = 0.0;
  double out_degree = 0.0;
};

// Corpus means of the per-graph statistics. Sums are accumulated in call
// order, so merge in a fixed order for reproducible output.
class StatsAccumulator {
 public:
  void add(const GraphStats& s);
  void merge(const StatsAccumulator& other);
  std::size_t graphs() const { return graphs_; }
  MeanGraphStats mean() const;

 private:
  std::size_t graphs_ = 0;
  double nodes_ = 0;
  double edges_ = 0;
  double in_ = 0;
  double out_ = 0;
};

nlohmann::json to_json(const TemporalGraph& g);
nlohmann::json to_json(const GraphStats& s);
nlohmann::json to_json(const MeanGraphStats& s);

}  // namespace tempograph
