#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "tempograph/inference.hpp"
#include "tempograph/interval_algebra.hpp"

using namespace tempograph;
using R = TemporalRelation;

namespace {

Node qt_node() { return {0, NodeKind::kQuestionTime, 0, 4, "1990", whole_year(1990)}; }
Node time_node(NodeId id, int year) { return {id, NodeKind::kDocTime, 0, 4, std::to_string(year), whole_year(year)}; }
Node event_node(NodeId id) { return {id, NodeKind::kDocEvent, 0, 1, "e", std::nullopt}; }
Edge edge(NodeId s, NodeId d, R r) { return {s, d, r, EdgeProvenance::kAnnotation}; }

std::vector<R> labels(const Path& p) {
  std::vector<R> out;
  for (const Hop& h : p) out.push_back(h.relation);
  return out;
}

std::vector<NodeId> visited(NodeId from, const Path& p) {
  std::vector<NodeId> out{from};
  for (const Hop& h : p) out.push_back(h.to);
  return out;
}

// The oracle's pick: among all minimum-length simple paths, the smallest
// node sequence, then the preferred edge per hop.
std::optional<oracle::SimplePath> oracle_shortest(const TemporalGraph& g, int from, int to) {
  const auto paths = oracle::all_simple_paths(g, from, to);
  if (paths.empty()) return std::nullopt;
  std::size_t best_len = SIZE_MAX;
  for (const auto& p : paths) best_len = std::min(best_len, p.labels.size());
  std::optional<oracle::SimplePath> best;
  for (const auto& p : paths) {
    if (p.labels.size() != best_len) continue;
    if (!best || std::tie(p.nodes, p.via) < std::tie(best->nodes, best->via)) best = p;
  }
  return best;
}

}  // namespace

TEST_CASE("shortest path: trivial and chain") {
  const TemporalGraph g({qt_node(), event_node(1), time_node(2, 1980)},
                        {edge(1, 2, R::kBefore), edge(2, 0, R::kIncludes)});
  CHECK(shortest_path(g, 1, 1)->empty());
  const auto p = shortest_path(g, 1, 0);
  REQUIRE(p);
  CHECK(labels(*p) == std::vector<R>{R::kBefore, R::kIncludes});
  CHECK(fold_path(*p) == R::kBefore);
  CHECK(infer_relation(g, 1) == R::kBefore);

  // walking back against stored directions inverts the labels
  const auto back = shortest_path(g, 0, 1);
  REQUIRE(back);
  CHECK(labels(*back) == std::vector<R>{R::kIncludedBy, R::kAfter});
  CHECK((*back)[0].reversed);
}

TEST_CASE("shortest path: diamond takes the smaller intermediate id") {
  // 3 -> {1, 2} -> 0, listed so that id 2 is seen first
  const TemporalGraph g({qt_node(), time_node(1, 1980), time_node(2, 1985), event_node(3)},
                        {edge(3, 2, R::kBefore), edge(2, 0, R::kBefore), edge(3, 1, R::kAfter),
                         edge(1, 0, R::kBefore)});
  const auto p = shortest_path(g, 3, 0);
  REQUIRE(p);
  CHECK(visited(3, *p) == std::vector<NodeId>{3, 1, 0});
  const auto o = oracle_shortest(g, 3, 0);
  REQUIRE(o);
  CHECK(o->nodes == std::vector<int>{3, 1, 0});
  // two shortest paths: (AFTER, BEFORE) -> U and (BEFORE, BEFORE) -> BEFORE
  CHECK(infer_relation(g, 3) == R::kUndetermined);
  CHECK(shortest_path_fold_set(g, 3, 0) == ((1u << 6) | (1u << relation_id(R::kBefore))));
}

TEST_CASE("infer: worked examples") {
  {
    const TemporalGraph g({qt_node(), event_node(1), time_node(2, 1990)},
                          {edge(1, 2, R::kSimultaneous), edge(2, 0, R::kSimultaneous)});
    CHECK(infer_relation(g, 1) == R::kSimultaneous);
  }
  {
    const TemporalGraph g({qt_node(), event_node(1), time_node(2, 1990)},
                          {edge(1, 2, R::kBefore), edge(2, 0, R::kAfter)});
    CHECK(infer_relation(g, 1) == R::kUndetermined);
  }
  {
    const TemporalGraph g({qt_node(), event_node(1), event_node(2)}, {edge(1, 2, R::kBefore)});
    CHECK(!shortest_path(g, 1, 0));
    CHECK(infer_relation(g, 1) == R::kUndetermined);
    CHECK(shortest_path_fold_set(g, 1, 0) == 0);
  }
  CHECK(infer_all(TemporalGraph({qt_node(), time_node(1, 1980)}, {edge(1, 0, R::kBefore)})).empty());
}

TEST_CASE("infer: Washington fixture") {
  const auto doc = oracle::washington_document();
  const std::string q = oracle::kWashingtonQuestion;
  const TemporalGraph g = build_graph(q, *extract_question_time(q), doc).graph;
  const RelationMap all = infer_all(g);
  CHECK(all.size() == 4);
  auto rel = [&](const char* surface) {
    for (const Node& n : g.nodes())
      if (n.surface == surface) return all.at(n.id);
    FAIL("missing " << surface);
    return R::kUndetermined;
  };
  CHECK(rel("created") == R::kBefore);
  CHECK(rel("named") == R::kUndetermined);  // after creation says nothing about 1776
  CHECK(rel("resigned") == R::kAfter);
  CHECK(rel("elected") == R::kAfter);
}

TEST_CASE("infer: random graphs against all-simple-paths enumeration") {
  std::mt19937_64 rng(2024);
  std::size_t unanimous = 0, events = 0;
  for (int trial = 0; trial < 50; ++trial) {
    const TemporalGraph g = oracle::random_graph(rng, 8, 14);
    const RelationMap all = infer_all(g);
    CHECK(all == infer_all_serial(g));
    for (const Node& n : g.nodes()) {
      if (n.kind != NodeKind::kDocEvent) continue;
      ++events;
      REQUIRE(all.count(n.id));
      CHECK(all.at(n.id) == infer_relation(g, n.id));

      const auto best = oracle_shortest(g, n.id, 0);
      const auto p = shortest_path(g, n.id, 0);
      REQUIRE(best.has_value() == p.has_value());
      if (!best) {
        CHECK(all.at(n.id) == R::kUndetermined);
        continue;
      }
      CHECK(visited(n.id, *p) == std::vector<NodeId>(best->nodes.begin(), best->nodes.end()));
      CHECK(all.at(n.id) == oracle::fold(best->labels));

      // fold set over every shortest path
      std::uint8_t expected_set = 0;
      std::set<R> folds;
      for (const auto& sp : oracle::all_simple_paths(g, n.id, 0)) {
        const R f = oracle::fold(sp.labels);
        folds.insert(f);
        if (sp.labels.size() == best->labels.size()) expected_set |= static_cast<std::uint8_t>(1u << relation_id(f));
      }
      CHECK(shortest_path_fold_set(g, n.id, 0) == expected_set);
      if (folds.size() == 1) {
        ++unanimous;
        CHECK(all.at(n.id) == *folds.begin());
      }
    }
  }
  CHECK(events > 50);
  CHECK(unanimous > 10);
}

TEST_CASE("fold: reversing a path inverts a determined result") {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 200; ++trial) {
    const TemporalGraph g = oracle::random_graph(rng, 8, 14);
    for (const Node& a : g.nodes())
      for (const Node& b : g.nodes()) {
        const auto p = shortest_path(g, a.id, b.id);
        if (!p) continue;
        Path rev;
        for (auto it = p->rbegin(); it != p->rend(); ++it) {
          rev.push_back({it->to, it->from, inverse(it->relation), it->edge, !it->reversed});
        }
        const R f = fold_path(*p), r = fold_path(rev);
        if (f != R::kUndetermined && r != R::kUndetermined) CHECK(r == inverse(f));
      }
  }
}

TEST_CASE("fold: an undetermined prefix stays undetermined") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 2000; ++trial) {
    Path p;
    const int len = 1 + static_cast<int>(rng() % 6);
    for (int i = 0; i < len; ++i) p.push_back({i, i + 1, static_cast<R>(rng() % 6), 0, false});
    std::vector<R> ls = labels(p);
    CHECK(fold_path(p) == oracle::fold(ls));
    for (int k = 1; k < len; ++k) {
      if (fold_path(std::span<const Hop>(p).first(static_cast<std::size_t>(k))) == R::kUndetermined) {
        CHECK(fold_path(p) == R::kUndetermined);
      }
    }
  }
  CHECK(fold_path({}) == R::kSimultaneous);
}

TEST_CASE("conflicting shortest paths are reported") {
  const TemporalGraph g({qt_node(), time_node(1, 1990), time_node(2, 1990), event_node(3)},
                        {edge(3, 1, R::kBefore), edge(1, 0, R::kSimultaneous), edge(3, 2, R::kAfter),
                         edge(2, 0, R::kSimultaneous)});
  CHECK(infer_relation(g, 3) == R::kBefore);
  const auto conflicts = find_path_conflicts(g);
  REQUIRE(conflicts.size() == 1);
  CHECK(conflicts[0].event == 3);
  CHECK(conflicts[0].chosen == R::kBefore);
  CHECK(conflicts[0].alternatives == ((1u << relation_id(R::kBefore)) | (1u << relation_id(R::kAfter))));
}
