#include "tempograph/temporal_graph.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>
#include <tuple>

#include "tempograph/errors.hpp"
#include "tempograph/interval_algebra.hpp"

namespace tempograph {

using nlohmann::json;

std::string_view kind_name(NodeKind kind) {
  switch (kind) {
    case NodeKind::kQuestionTime: return "question_time";
    case NodeKind::kDocTime: return "doc_time";
    case NodeKind::kDocEvent: return "doc_event";
  }
  return "doc_event";
}

std::string_view provenance_name(EdgeProvenance provenance) {
  switch (provenance) {
    case EdgeProvenance::kAnnotation: return "annotation";
    case EdgeProvenance::kTimeLink: return "time_link";
    case EdgeProvenance::kInferred: return "inferred";
  }
  return "annotation";
}

TemporalGraph::TemporalGraph(std::vector<Node> nodes, std::vector<Edge> edges)
    : nodes_(std::move(nodes)), edges_(std::move(edges)) {
  std::sort(nodes_.begin(), nodes_.end(), [](const Node& a, const Node& b) { return a.id < b.id; });
  std::size_t question_nodes = 0;
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    const Node& n = nodes_[i];
    if (i > 0 && nodes_[i - 1].id == n.id) {
      throw std::invalid_argument("duplicate node id " + std::to_string(n.id));
    }
    if (n.kind == NodeKind::kQuestionTime) {
      ++question_nodes;
      question_time_ = n.id;
      if (!n.interval) throw std::invalid_argument("question-time node without interval");
    }
    if (n.kind == NodeKind::kDocEvent && n.interval) {
      throw std::invalid_argument("event node " + std::to_string(n.id) + " carries an interval");
    }
  }
  if (question_nodes != 1) {
    throw std::invalid_argument("graph needs exactly one question-time node, found " +
                                std::to_string(question_nodes));
  }

  std::set<std::tuple<NodeId, NodeId, TemporalRelation>> seen;
  for (const Edge& e : edges_) {
    if (!has_node(e.src) || !has_node(e.dst)) {
      throw std::invalid_argument("edge endpoint missing: " + std::to_string(e.src) + " -> " +
                                  std::to_string(e.dst));
    }
    if (e.src == e.dst) throw std::invalid_argument("self-loop on node " + std::to_string(e.src));
    if (!is_stored_relation(e.relation)) throw std::invalid_argument("UNDETERMINED edge label");
    if (!seen.emplace(e.src, e.dst, e.relation).second) {
      throw std::invalid_argument("duplicate edge " + std::to_string(e.src) + " -> " +
                                  std::to_string(e.dst));
    }
  }

  std::vector<std::vector<Hop>> per_node(nodes_.size());
  for (std::size_t k = 0; k < edges_.size(); ++k) {
    const Edge& e = edges_[k];
    per_node[index_of(e.src)].push_back({e.src, e.dst, e.relation, k, false});
    per_node[index_of(e.dst)].push_back({e.dst, e.src, inverse(e.relation), k, true});
  }
  hop_offsets_.reserve(nodes_.size() + 1);
  hop_offsets_.push_back(0);
  for (auto& list : per_node) {
    std::sort(list.begin(), list.end(), [](const Hop& a, const Hop& b) {
      return std::tie(a.to, a.reversed, a.edge) < std::tie(b.to, b.reversed, b.edge);
    });
    hop_list_.insert(hop_list_.end(), list.begin(), list.end());
    hop_offsets_.push_back(hop_list_.size());
  }
}

bool TemporalGraph::has_node(NodeId id) const {
  auto it = std::lower_bound(nodes_.begin(), nodes_.end(), id,
                             [](const Node& n, NodeId v) { return n.id < v; });
  return it != nodes_.end() && it->id == id;
}

std::size_t TemporalGraph::index_of(NodeId id) const {
  auto it = std::lower_bound(nodes_.begin(), nodes_.end(), id,
                             [](const Node& n, NodeId v) { return n.id < v; });
  if (it == nodes_.end() || it->id != id) {
    throw std::out_of_range("no node with id " + std::to_string(id));
  }
  return static_cast<std::size_t>(it - nodes_.begin());
}

const Node& TemporalGraph::node(NodeId id) const { return nodes_[index_of(id)]; }

std::span<const Hop> TemporalGraph::hops(NodeId id) const {
  const std::size_t i = index_of(id);
  return std::span<const Hop>(hop_list_).subspan(hop_offsets_[i], hop_offsets_[i + 1] - hop_offsets_[i]);
}

GraphBuild build_graph(std::string_view question_text, const QuestionTimeSpan& qspan,
                       const AnnotatedDocument& doc) {
  if (auto findings = check_annotations(doc); !findings.empty()) {
    throw BadAnnotation(findings.front().message);
  }
  if (qspan.char_end > question_text.size() ||
      question_text.substr(qspan.char_start, qspan.char_end - qspan.char_start) != qspan.surface) {
    throw BadAnnotation("question-time span does not match the question text");
  }

  GraphBuild out;
  BuildDiagnostics& diag = out.diagnostics;

  // Document order: by start, then end, timexes before events, then input order.
  struct Item {
    std::size_t start, end;
    AnnotationRef ref;
  };
  std::vector<Item> items;
  for (std::size_t i = 0; i < doc.timexes.size(); ++i) {
    items.push_back({doc.timexes[i].start, doc.timexes[i].end, {AnnotationRef::Kind::kTimex, i}});
  }
  for (std::size_t i = 0; i < doc.events.size(); ++i) {
    const auto& ev = doc.events[i];
    const bool inside_timex = std::any_of(doc.timexes.begin(), doc.timexes.end(), [&](const auto& t) {
      return t.start <= ev.start && ev.end <= t.end;
    });
    if (inside_timex) {
      ++diag.dropped_events;
      diag.warnings.push_back("event e" + std::to_string(i) + " \"" + ev.surface +
                              "\" lies inside a time expression; dropped");
      continue;
    }
    items.push_back({ev.start, ev.end, {AnnotationRef::Kind::kEvent, i}});
  }
  auto order_key = [](const Item& i) {
    return std::make_tuple(i.start, i.end, i.ref.kind == AnnotationRef::Kind::kTimex ? 0 : 1);
  };
  std::stable_sort(items.begin(), items.end(),
                   [&](const Item& a, const Item& b) { return order_key(a) < order_key(b); });

  std::vector<Node> nodes;
  nodes.push_back({0, NodeKind::kQuestionTime, qspan.char_start, qspan.char_end, qspan.surface,
                   qspan.interval});
  std::vector<std::optional<NodeId>> event_ids(doc.events.size());
  std::vector<std::optional<NodeId>> timex_ids(doc.timexes.size());
  for (const Item& item : items) {
    const NodeId id = static_cast<NodeId>(nodes.size());
    if (item.ref.kind == AnnotationRef::Kind::kTimex) {
      const auto& t = doc.timexes[item.ref.index];
      std::optional<TimeInterval> interval = parse_timex_value(t.value);
      if (!interval) {
        try {
          interval = normalize_timex(t.surface);
        } catch (const UnsupportedPattern&) {
        } catch (const MalformedDate&) {
        }
      }
      if (!interval) {
        ++diag.unnormalizable_timexes;
        diag.warnings.push_back("timex t" + std::to_string(item.ref.index) + " \"" + t.surface +
                                "\" could not be normalized");
      }
      nodes.push_back({id, NodeKind::kDocTime, t.start, t.end, t.surface, interval});
      timex_ids[item.ref.index] = id;
    } else {
      const auto& ev = doc.events[item.ref.index];
      nodes.push_back({id, NodeKind::kDocEvent, ev.start, ev.end, ev.surface, std::nullopt});
      event_ids[item.ref.index] = id;
    }
  }

  std::vector<Edge> edges;
  std::set<std::tuple<NodeId, NodeId, TemporalRelation>> seen;
  for (const auto& link : doc.tlinks) {
    auto resolve = [&](const AnnotationRef& ref) {
      return ref.kind == AnnotationRef::Kind::kEvent ? event_ids[ref.index] : timex_ids[ref.index];
    };
    const auto src = resolve(link.source);
    const auto dst = resolve(link.target);
    if (!src || !dst) {
      ++diag.skipped_tlinks;
      continue;
    }
    const TemporalRelation rel = *parse_relation(link.relation);
    if (seen.emplace(*src, *dst, rel).second) {
      edges.push_back({*src, *dst, rel, EdgeProvenance::kAnnotation});
    }
  }
  for (const Node& n : nodes) {
    if (n.kind != NodeKind::kDocTime || !n.interval) continue;
    const TemporalRelation rel = relate(*n.interval, qspan.interval);
    if (seen.emplace(n.id, 0, rel).second) {
      edges.push_back({n.id, 0, rel, EdgeProvenance::kTimeLink});
    }
  }

  out.graph = TemporalGraph(std::move(nodes), std::move(edges));
  return out;
}

std::string_view variant_name(GraphVariant v) {
  switch (v) {
    case GraphVariant::kFull: return "full";
    case GraphVariant::kDT2QT: return "dt2qt";
    case GraphVariant::kDTE2QT: return "dte2qt";
    case GraphVariant::kAllTime: return "alltime";
  }
  return "full";
}

std::optional<GraphVariant> parse_variant(std::string_view text) {
  for (GraphVariant v : {GraphVariant::kFull, GraphVariant::kDT2QT, GraphVariant::kDTE2QT,
                         GraphVariant::kAllTime}) {
    if (text == variant_name(v)) return v;
  }
  return std::nullopt;
}

std::size_t in_degree(const TemporalGraph& g, NodeId id) {
  return static_cast<std::size_t>(std::count_if(g.edges().begin(), g.edges().end(),
                                                [&](const Edge& e) { return e.dst == id; }));
}

std::size_t out_degree(const TemporalGraph& g, NodeId id) {
  return static_cast<std::size_t>(std::count_if(g.edges().begin(), g.edges().end(),
                                                [&](const Edge& e) { return e.src == id; }));
}

GraphStats graph_stats(const TemporalGraph& g) {
  GraphStats s;
  s.nodes = g.nodes().size();
  s.edges = g.edges().size();
  if (s.nodes > 0) {
    // Every stored edge adds one in- and one out-degree.
    s.mean_in_degree = static_cast<double>(s.edges) / static_cast<double>(s.nodes);
    s.mean_out_degree = s.mean_in_degree;
  }
  return s;
}

void StatsAccumulator::add(const GraphStats& s) {
  ++graphs_;
  nodes_ += static_cast<double>(s.nodes);
  edges_ += static_cast<double>(s.edges);
  in_ += s.mean_in_degree;
  out_ += s.mean_out_degree;
}

void StatsAccumulator::merge(const StatsAccumulator& other) {
  graphs_ += other.graphs_;
  nodes_ += other.nodes_;
  edges_ += other.edges_;
  in_ += other.in_;
  out_ += other.out_;
}

MeanGraphStats StatsAccumulator::mean() const {
  MeanGraphStats m;
  m.graphs_counted = graphs_;
  if (graphs_ == 0) return m;
  const double n = static_cast<double>(graphs_);
  m.nodes = nodes_ / n;
  m.edges = edges_ / n;
  m.in_degree = in_ / n;
  m.out_degree = out_ / n;
  return m;
}

namespace {

json interval_json(const std::optional<TimeInterval>& iv) {
  if (!iv) return nullptr;
  return {{"start", iv->start ? json(to_string(*iv->start)) : json("-inf")},
          {"end", iv->end ? json(to_string(*iv->end)) : json("+inf")}};
}

}  // namespace

json to_json(const TemporalGraph& g) {
  json nodes = json::array();
  for (const Node& n : g.nodes()) {
    nodes.push_back({{"id", n.id},
                     {"kind", kind_name(n.kind)},
                     {"start", n.char_start},
                     {"end", n.char_end},
                     {"text", n.surface},
                     {"interval", interval_json(n.interval)}});
  }
  json edges = json::array();
  for (const Edge& e : g.edges()) {
    edges.push_back({{"src", e.src},
                     {"dst", e.dst},
                     {"relation", relation_name(e.relation)},
                     {"provenance", provenance_name(e.provenance)}});
  }
  return {{"nodes", nodes}, {"edges", edges}};
}

json to_json(const MeanGraphStats& s) {
  return {{"graphs", s.graphs_counted},
          {"mean_nodes", s.nodes},
          {"mean_edges", s.edges},
          {"mean_in_degree", s.in_degree},
          {"mean_out_degree", s.out_degree}};
}

json to_json(const GraphStats& s) {
  return {{"nodes", s.nodes},
          {"edges", s.edges},
          {"mean_in_degree", s.mean_in_degree},
          {"mean_out_degree", s.mean_out_degree}};
}

}  // namespace tempograph
