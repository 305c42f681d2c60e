#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "tempograph/temporal_graph.hpp"

namespace tempograph {

using Path = std::vector<Hop>;
using RelationMap = std::map<NodeId, TemporalRelation>;

// Breadth-first shortest path over stored edges walked in either direction.
// Among equal-length paths the lexicographically smallest sequence of node
// ids wins; between parallel edges a forward edge beats a reversed one,
// then the lower edge index wins. from == to gives an empty path; nullopt
// when disconnected.
std::optional<Path> shortest_path(const TemporalGraph& g, NodeId from, NodeId to);

// Left fold of compose over the hop labels. Empty path -> SIMULTANEOUS.
// Stops at the first UNDETERMINED.
TemporalRelation fold_path(std::span<const Hop> path);

// Relation of `event` relative to the question-time node, or UNDETERMINED
// when no path exists or the fold is ambiguous.
TemporalRelation infer_relation(const TemporalGraph& g, NodeId event);

// Every event node -> infer_relation. Shares one BFS from the question-time
// node and walks the events in parallel.
RelationMap infer_all(const TemporalGraph& g);

// Reference: one infer_relation call per event, single-threaded.
RelationMap infer_all_serial(const TemporalGraph& g);

// Bitmask (bit = relation id, UNDETERMINED = bit 6) of the folds over every
// shortest path from `from` to `to`; 0 when disconnected.
std::uint8_t shortest_path_fold_set(const TemporalGraph& g, NodeId from, NodeId to);

struct PathConflict {
  NodeId event = 0;
  TemporalRelation chosen = TemporalRelation::kUndetermined;
  std::uint8_t alternatives = 0;
};

// Events whose equal-length shortest paths fold to two or more different
// determined relations. The tie-broken path's answer is still the one used.
std::vector<PathConflict> find_path_conflicts(const TemporalGraph& g);

}  // namespace tempograph
