#pragma once

// Independent reference implementations used only by the tests. None of
// these call into the library code they check.

#include <algorithm>
#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "tempograph/annotation.hpp"
#include "tempograph/chronon.hpp"
#include "tempograph/relation.hpp"
#include "tempograph/temporal_graph.hpp"

namespace oracle {

using tempograph::TemporalRelation;

// --- calendar: plain day counting from 0001-01-01 ---------------------------

inline bool leap(int y) { return (y % 4 == 0 && y % 100 != 0) || y % 400 == 0; }

inline int month_length(int y, int m) {
  static const int len[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
  return m == 2 && leap(y) ? 29 : len[m - 1];
}

// Days since 0001-01-01 (positive years only).
inline long days_from_epoch(int y, int m, int d) {
  long n = 0;
  for (int yy = 1; yy < y; ++yy) n += leap(yy) ? 366 : 365;
  for (int mm = 1; mm < m; ++mm) n += month_length(y, mm);
  return n + d - 1;
}

// --- relations: the six definitions, written out separately ----------------

struct Iv {
  long s, e;  // closed; LONG_MIN / LONG_MAX for unbounded
};

inline bool is_simultaneous(Iv a, Iv b) { return a.s == b.s && a.e == b.e; }
inline bool is_before(Iv a, Iv b) { return a.e < b.s; }
inline bool is_after(Iv a, Iv b) { return a.s > b.e; }
inline bool is_includes(Iv a, Iv b) { return a.s <= b.s && b.e <= a.e && !is_simultaneous(a, b); }
inline bool is_included_by(Iv a, Iv b) { return b.s <= a.s && a.e <= b.e && !is_simultaneous(a, b); }
inline bool is_overlap(Iv a, Iv b) {
  return !is_before(a, b) && !is_after(a, b) && !is_includes(a, b) && !is_included_by(a, b) &&
         !is_simultaneous(a, b) && a.s <= b.e && b.s <= a.e;
}

// Every relation whose predicate holds.
inline std::vector<TemporalRelation> holding(Iv a, Iv b) {
  std::vector<TemporalRelation> out;
  if (is_before(a, b)) out.push_back(TemporalRelation::kBefore);
  if (is_after(a, b)) out.push_back(TemporalRelation::kAfter);
  if (is_includes(a, b)) out.push_back(TemporalRelation::kIncludes);
  if (is_included_by(a, b)) out.push_back(TemporalRelation::kIncludedBy);
  if (is_simultaneous(a, b)) out.push_back(TemporalRelation::kSimultaneous);
  if (is_overlap(a, b)) out.push_back(TemporalRelation::kOverlap);
  return out;
}

inline TemporalRelation inverse_of(TemporalRelation r) {
  switch (r) {
    case TemporalRelation::kBefore: return TemporalRelation::kAfter;
    case TemporalRelation::kAfter: return TemporalRelation::kBefore;
    case TemporalRelation::kIncludes: return TemporalRelation::kIncludedBy;
    case TemporalRelation::kIncludedBy: return TemporalRelation::kIncludes;
    default: return r;
  }
}

// --- graphs ----------------------------------------------------------------

// Random graph: question time 0, a few time nodes with intervals, the rest
// events; up to max_edges distinct stored edges with random labels.
inline tempograph::TemporalGraph random_graph(std::mt19937_64& rng, int max_nodes, int max_edges) {
  using namespace tempograph;
  const int n = 2 + static_cast<int>(rng() % static_cast<unsigned>(max_nodes - 1));
  std::vector<Node> nodes;
  for (int i = 0; i < n; ++i) {
    Node node;
    node.id = i;
    node.surface = "n" + std::to_string(i);
    if (i == 0) {
      node.kind = NodeKind::kQuestionTime;
    } else {
      node.kind = rng() % 3 == 0 ? NodeKind::kDocTime : NodeKind::kDocEvent;
    }
    if (node.kind != NodeKind::kDocEvent) node.interval = whole_year(1900 + i);
    nodes.push_back(node);
  }
  std::set<std::tuple<int, int, int>> seen;
  std::vector<Edge> edges;
  const int m = static_cast<int>(rng() % static_cast<unsigned>(max_edges + 1));
  for (int k = 0; k < m * 3 && static_cast<int>(edges.size()) < m; ++k) {
    const int a = static_cast<int>(rng() % n), b = static_cast<int>(rng() % n);
    const int r = static_cast<int>(rng() % 6);
    if (a == b || !seen.insert({a, b, r}).second) continue;
    edges.push_back({a, b, static_cast<TemporalRelation>(r), EdgeProvenance::kAnnotation});
  }
  return TemporalGraph(nodes, edges);
}

struct Step {
  int to;
  TemporalRelation relation;
  bool reversed;
  int edge;
};

// Undirected adjacency with inverse labels on reversed edges.
inline std::map<int, std::vector<Step>> adjacency(const tempograph::TemporalGraph& g) {
  std::map<int, std::vector<Step>> adj;
  for (std::size_t i = 0; i < g.edges().size(); ++i) {
    const auto& e = g.edges()[i];
    adj[e.src].push_back({e.dst, e.relation, false, static_cast<int>(i)});
    adj[e.dst].push_back({e.src, inverse_of(e.relation), true, static_cast<int>(i)});
  }
  return adj;
}

// Every simple path from -> to, as label sequences, with node sequences.
struct SimplePath {
  std::vector<int> nodes;
  std::vector<TemporalRelation> labels;
  std::vector<std::pair<bool, int>> via;  // (reversed, edge index) per hop
};

inline std::vector<SimplePath> all_simple_paths(const tempograph::TemporalGraph& g, int from, int to) {
  const auto adj = adjacency(g);
  std::vector<SimplePath> out;
  SimplePath cur{{from}, {}, {}};
  std::set<int> on_path{from};
  std::function<void(int)> dfs = [&](int u) {
    if (u == to) {
      out.push_back(cur);
      return;
    }
    auto it = adj.find(u);
    if (it == adj.end()) return;
    for (const Step& s : it->second) {
      if (on_path.count(s.to)) continue;
      on_path.insert(s.to);
      cur.nodes.push_back(s.to);
      cur.labels.push_back(s.relation);
      cur.via.push_back({s.reversed, s.edge});
      dfs(s.to);
      cur.nodes.pop_back();
      cur.labels.pop_back();
      cur.via.pop_back();
      on_path.erase(s.to);
    }
  };
  dfs(from);
  return out;
}

// Composition straight from interval semantics on a small window: the set
// of relate(A, C) outcomes over all A, B, C with relate(A,B)=r1 and
// relate(B,C)=r2. Built once, lazily.
inline const std::array<std::set<TemporalRelation>, 36>& semantic_composition() {
  static const auto table = [] {
    std::array<std::set<TemporalRelation>, 36> t;
    std::vector<Iv> ivs;
    for (long s = 0; s < 7; ++s)
      for (long e = s; e < 7; ++e) ivs.push_back({s, e});
    for (Iv a : ivs)
      for (Iv b : ivs)
        for (Iv c : ivs) {
          const auto r1 = holding(a, b).at(0), r2 = holding(b, c).at(0), r3 = holding(a, c).at(0);
          t[static_cast<int>(r1) * 6 + static_cast<int>(r2)].insert(r3);
        }
    return t;
  }();
  return table;
}

inline TemporalRelation fold(const std::vector<TemporalRelation>& labels) {
  const auto& t = semantic_composition();
  TemporalRelation acc = TemporalRelation::kSimultaneous;
  for (TemporalRelation r : labels) {
    if (acc == TemporalRelation::kUndetermined) return acc;
    const auto& outcomes = t[static_cast<int>(acc) * 6 + static_cast<int>(r)];
    acc = outcomes.size() == 1 ? *outcomes.begin() : TemporalRelation::kUndetermined;
  }
  return acc;
}

// --- the Washington fixture -------------------------------------------------

inline const char* kWashingtonQuestion = "What was George Washington's position between 1776 - 1780?";

inline tempograph::AnnotatedDocument washington_document() {
  using namespace tempograph;
  AnnotatedDocument doc;
  doc.id = "washington";
  doc.text =
      "Congress created the Continental Army on June 14, 1775 and named Washington its "
      "commander. He resigned the command in December 1783 and was elected president in 1789.";
  auto span = [&](const std::string& s) {
    const std::size_t p = doc.text.find(s);
    return std::pair{p, p + s.size()};
  };
  for (const char* e : {"created", "named", "resigned", "elected"}) {
    auto [b, en] = span(e);
    doc.events.push_back({b, en, e});
  }
  const std::pair<const char*, const char*> times[] = {
      {"June 14, 1775", "1775-06-14"}, {"December 1783", "1783-12"}, {"1789", "1789"}};
  for (auto [s, v] : times) {
    auto [b, en] = span(s);
    doc.timexes.push_back({b, en, s, v});
  }
  using K = AnnotationRef::Kind;
  doc.tlinks = {
      {{K::kEvent, 0}, {K::kTimex, 0}, "INCLUDED_BY"},
      {{K::kEvent, 1}, {K::kEvent, 0}, "AFTER"},
      {{K::kEvent, 2}, {K::kTimex, 1}, "INCLUDED_BY"},
      {{K::kEvent, 3}, {K::kTimex, 2}, "INCLUDED_BY"},
  };
  return doc;
}

}  // namespace oracle
