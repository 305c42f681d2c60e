#include "tempograph/inference.hpp"

#include <algorithm>
#include <deque>
#include <limits>

#include <omp.h>

#include "tempograph/interval_algebra.hpp"

namespace tempograph {

namespace {

constexpr std::size_t kUnreached = std::numeric_limits<std::size_t>::max();

// Hop distance from every node (by index) to `target`.
std::vector<std::size_t> distances_to(const TemporalGraph& g, NodeId target) {
  std::vector<std::size_t> dist(g.nodes().size(), kUnreached);
  std::deque<NodeId> queue{target};
  dist[g.index_of(target)] = 0;
  while (!queue.empty()) {
    const NodeId u = queue.front();
    queue.pop_front();
    const std::size_t du = dist[g.index_of(u)];
    for (const Hop& h : g.hops(u)) {
      std::size_t& dv = dist[g.index_of(h.to)];
      if (dv == kUnreached) {
        dv = du + 1;
        queue.push_back(h.to);
      }
    }
  }
  return dist;
}

// Greedy descent along the distance field; hops() ordering makes the first
// admissible hop the lexicographically smallest continuation.
std::optional<Path> descend(const TemporalGraph& g, const std::vector<std::size_t>& dist,
                            NodeId from) {
  std::size_t d = dist[g.index_of(from)];
  if (d == kUnreached) return std::nullopt;
  Path path;
  path.reserve(d);
  NodeId u = from;
  while (d > 0) {
    for (const Hop& h : g.hops(u)) {
      if (dist[g.index_of(h.to)] == d - 1) {
        path.push_back(h);
        u = h.to;
        break;
      }
    }
    --d;
  }
  return path;
}

TemporalRelation fold_or_undetermined(const std::optional<Path>& path) {
  return path ? fold_path(*path) : TemporalRelation::kUndetermined;
}

std::vector<NodeId> event_ids(const TemporalGraph& g) {
  std::vector<NodeId> out;
  for (const Node& n : g.nodes()) {
    if (n.kind == NodeKind::kDocEvent) out.push_back(n.id);
  }
  return out;
}

}  // namespace

std::optional<Path> shortest_path(const TemporalGraph& g, NodeId from, NodeId to) {
  return descend(g, distances_to(g, to), from);
}

TemporalRelation fold_path(std::span<const Hop> path) {
  TemporalRelation acc = TemporalRelation::kSimultaneous;
  for (const Hop& h : path) {
    acc = compose(acc, h.relation);
    if (acc == TemporalRelation::kUndetermined) break;
  }
  return acc;
}

TemporalRelation infer_relation(const TemporalGraph& g, NodeId event) {
  return fold_or_undetermined(shortest_path(g, event, g.question_time()));
}

RelationMap infer_all_serial(const TemporalGraph& g) {
  RelationMap out;
  for (NodeId id : event_ids(g)) out.emplace(id, infer_relation(g, id));
  return out;
}

RelationMap infer_all(const TemporalGraph& g) {
  const std::vector<NodeId> events = event_ids(g);
  const std::vector<std::size_t> dist = distances_to(g, g.question_time());
  std::vector<TemporalRelation> results(events.size());
  const auto n = static_cast<std::ptrdiff_t>(events.size());
#pragma omp parallel for schedule(dynamic, 16) if (n > 64)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    results[i] = fold_or_undetermined(descend(g, dist, events[i]));
  }
  RelationMap out;
  for (std::size_t i = 0; i < events.size(); ++i) out.emplace(events[i], results[i]);
  return out;
}

std::uint8_t shortest_path_fold_set(const TemporalGraph& g, NodeId from, NodeId to) {
  const std::vector<std::size_t> dist = distances_to(g, to);
  const std::size_t start = g.index_of(from);
  if (dist[start] == kUnreached) return 0;

  // Nodes on some shortest path, processed farthest-first.
  std::vector<std::uint8_t> states(g.nodes().size(), 0);
  states[start] = 1u << relation_id(TemporalRelation::kSimultaneous);
  std::vector<std::size_t> order;
  for (std::size_t i = 0; i < dist.size(); ++i) {
    if (dist[i] != kUnreached && dist[i] <= dist[start]) order.push_back(i);
  }
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return dist[a] > dist[b]; });
  for (std::size_t i : order) {
    if (states[i] == 0 || dist[i] == 0) continue;
    for (const Hop& h : g.hops(g.nodes()[i].id)) {
      const std::size_t j = g.index_of(h.to);
      if (dist[j] != dist[i] - 1) continue;
      for (std::size_t r = 0; r <= kRelationCount; ++r) {
        if (states[i] & (1u << r)) {
          states[j] |= static_cast<std::uint8_t>(
              1u << relation_id(compose(static_cast<TemporalRelation>(r), h.relation)));
        }
      }
    }
  }
  return states[g.index_of(to)];
}

std::vector<PathConflict> find_path_conflicts(const TemporalGraph& g) {
  std::vector<PathConflict> out;
  for (NodeId id : event_ids(g)) {
    const std::uint8_t folds = shortest_path_fold_set(g, id, g.question_time());
    const std::uint8_t determined =
        folds & static_cast<std::uint8_t>(~(1u << relation_id(TemporalRelation::kUndetermined)));
    if (determined != 0 && (determined & (determined - 1)) != 0) {
      out.push_back({id, infer_relation(g, id), determined});
    }
  }
  return out;
}

}  // namespace tempograph
