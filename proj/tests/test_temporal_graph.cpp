#include <doctest.h>

#include <algorithm>
#include <set>

#include "oracles.hpp"
#include "tempograph/errors.hpp"
#include "tempograph/inference.hpp"
#include "tempograph/interval_algebra.hpp"
#include "tempograph/synthetic.hpp"
#include "tempograph/temporal_graph.hpp"

using namespace tempograph;
using R = TemporalRelation;
using K = AnnotationRef::Kind;

namespace {

struct Built {
  std::string question;
  QuestionTimeSpan qspan;
  AnnotatedDocument doc;
  GraphBuild build;
};

Built build(std::string question, AnnotatedDocument doc) {
  Built b{std::move(question), {}, std::move(doc), {}};
  b.qspan = *extract_question_time(b.question);
  b.build = build_graph(b.question, b.qspan, b.doc);
  return b;
}

// Appends surface to doc.text and annotates it.
void add_timex(AnnotatedDocument& doc, const std::string& s, const std::string& value = "") {
  doc.text += doc.text.empty() ? "" : " ";
  doc.timexes.push_back({doc.text.size(), doc.text.size() + s.size(), s, value});
  doc.text += s;
}
void add_event(AnnotatedDocument& doc, const std::string& s) {
  doc.text += doc.text.empty() ? "" : " ";
  doc.events.push_back({doc.text.size(), doc.text.size() + s.size(), s});
  doc.text += s;
}

const Node* find_surface(const TemporalGraph& g, const std::string& s) {
  for (const Node& n : g.nodes())
    if (n.surface == s) return &n;
  return nullptr;
}

bool has_edge(const TemporalGraph& g, NodeId src, NodeId dst, R r) {
  return std::any_of(g.edges().begin(), g.edges().end(),
                     [&](const Edge& e) { return e.src == src && e.dst == dst && e.relation == r; });
}

void check_span_integrity(const std::string& question, const std::string& text, const TemporalGraph& g) {
  for (const Node& n : g.nodes()) {
    const std::string& owner = n.kind == NodeKind::kQuestionTime ? question : text;
    REQUIRE(n.char_end <= owner.size());
    CHECK(owner.substr(n.char_start, n.char_end - n.char_start) == n.surface);
  }
}

}  // namespace

TEST_CASE("build: Washington fixture") {
  const Built b = build(oracle::kWashingtonQuestion, oracle::washington_document());
  const TemporalGraph& g = b.build.graph;
  CHECK(g.question_time() == 0);
  CHECK(g.node(0).surface == "between 1776 - 1780");
  const Node* june = find_surface(g, "June 14, 1775");
  REQUIRE(june);
  CHECK(june->kind == NodeKind::kDocTime);
  CHECK(has_edge(g, june->id, 0, R::kBefore));
  CHECK(has_edge(g, find_surface(g, "December 1783")->id, 0, R::kAfter));
  CHECK(g.nodes().size() == 8);
  CHECK(g.edges().size() == 4 + 3);
  // ids follow document order
  for (std::size_t i = 2; i < g.nodes().size(); ++i) CHECK(g.nodes()[i - 1].char_start < g.nodes()[i].char_start);
  check_span_integrity(b.question, b.doc.text, g);
  CHECK(build_graph(b.question, b.qspan, b.doc).graph == g);
}

TEST_CASE("build: empty document") {
  const Built b = build("Who led it in 1990?", AnnotatedDocument{"x", "Nothing dated here.", {}, {}, {}});
  CHECK(b.build.graph.nodes().size() == 1);
  CHECK(b.build.graph.edges().empty());
  CHECK(graph_stats(b.build.graph).nodes == 1);
  CHECK(graph_stats(b.build.graph).mean_in_degree == 0.0);
}

TEST_CASE("build: time links are relate(doc time, question time)") {
  AnnotatedDocument doc;
  add_timex(doc, "1980");
  add_timex(doc, "1990");
  const Built b = build("In 1985, who was mayor?", doc);
  const TemporalGraph& g = b.build.graph;
  CHECK(has_edge(g, 1, 0, R::kBefore));
  CHECK(has_edge(g, 2, 0, R::kAfter));
  for (const Edge& e : g.edges()) CHECK(e.provenance == EdgeProvenance::kTimeLink);
}

TEST_CASE("build: timex values, fallbacks and unnormalizable surfaces") {
  AnnotatedDocument doc;
  add_timex(doc, "that year", "1990");          // value wins
  add_timex(doc, "March 1991", "");             // surface fallback
  add_timex(doc, "the spring", "");             // neither
  add_timex(doc, "today", "PRESENT_REF");       // neither
  const Built b = build("What happened in 1990?", doc);
  const TemporalGraph& g = b.build.graph;
  CHECK(g.node(1).interval == whole_year(1990));
  CHECK(g.node(2).interval == whole_month(1991, 3));
  CHECK(!g.node(3).interval);
  CHECK(!g.node(4).interval);
  CHECK(b.build.diagnostics.unnormalizable_timexes == 2);
  CHECK(g.edges().size() == 2);
  // completeness: one time link per normalized time node
  for (const Node& n : g.nodes()) {
    if (n.kind != NodeKind::kDocTime) continue;
    const auto links = std::count_if(g.edges().begin(), g.edges().end(), [&](const Edge& e) {
      return e.src == n.id && e.dst == 0 && e.provenance == EdgeProvenance::kTimeLink;
    });
    CHECK(links == (n.interval ? 1 : 0));
  }
}

TEST_CASE("build: events inside a timex span are dropped") {
  AnnotatedDocument doc;
  add_timex(doc, "Christmas Day 1990", "1990-12-25");
  doc.events.push_back({0, 9, "Christmas"});
  add_event(doc, "married");
  doc.tlinks.push_back({{K::kEvent, 0}, {K::kTimex, 0}, "INCLUDED_BY"});
  doc.tlinks.push_back({{K::kEvent, 1}, {K::kTimex, 0}, "AFTER"});
  const Built b = build("Who married in 1990?", doc);
  CHECK(b.build.diagnostics.dropped_events == 1);
  CHECK(b.build.diagnostics.skipped_tlinks == 1);
  CHECK(b.build.graph.nodes().size() == 3);
  CHECK(!find_surface(b.build.graph, "Christmas"));
}

TEST_CASE("build: bad annotations") {
  AnnotatedDocument doc;
  add_timex(doc, "1990");
  add_event(doc, "won");
  const QuestionTimeSpan q = *extract_question_time("Who won in 1990?");

  AnnotatedDocument bad = doc;
  bad.tlinks.push_back({{K::kEvent, 0}, {K::kTimex, 3}, "BEFORE"});
  CHECK_THROWS_AS(build_graph("Who won in 1990?", q, bad), BadAnnotation);
  bad = doc;
  bad.tlinks.push_back({{K::kEvent, 0}, {K::kTimex, 0}, "VAGUE"});
  CHECK_THROWS_AS(build_graph("Who won in 1990?", q, bad), BadAnnotation);
  bad = doc;
  bad.events[0].end = 99;
  CHECK_THROWS_AS(build_graph("Who won in 1990?", q, bad), BadAnnotation);

  const auto findings = check_annotations(bad);
  REQUIRE(findings.size() == 1);
  CHECK(findings[0].code == "span_out_of_range");
  CHECK(findings[0].end == 99u);
}

TEST_CASE("select: variant sizes") {
  AnnotatedDocument doc;
  for (int i = 0; i < 3; ++i) {
    add_event(doc, "ev" + std::to_string(i));
    add_timex(doc, std::to_string(1980 + 5 * i));
  }
  add_event(doc, "ev3");
  add_event(doc, "ev4");
  doc.tlinks = {{{K::kEvent, 0}, {K::kTimex, 0}, "INCLUDED_BY"},
                {{K::kEvent, 1}, {K::kTimex, 1}, "INCLUDED_BY"},
                {{K::kEvent, 2}, {K::kEvent, 3}, "BEFORE"},
                {{K::kEvent, 3}, {K::kTimex, 2}, "BEFORE"}};
  const Built b = build("Who ruled in 1985?", doc);
  const TemporalGraph& full = b.build.graph;
  CHECK(full.nodes().size() == 9);
  CHECK(full.edges().size() == 7);
  CHECK(select_subgraph(full, GraphVariant::kFull) == full);

  const TemporalGraph dt = select_subgraph(full, GraphVariant::kDT2QT);
  CHECK(dt.nodes().size() == 4);
  CHECK(dt.edges().size() == 3);
  CHECK(in_degree(dt, 0) == 3);

  const TemporalGraph all = select_subgraph(full, GraphVariant::kAllTime);
  CHECK(all.nodes().size() == 4);
  CHECK(all.edges().size() == 3 + 3);

  const TemporalGraph dte = select_subgraph(full, GraphVariant::kDTE2QT);
  const RelationMap inferred = infer_all(full);
  const auto determined = std::count_if(inferred.begin(), inferred.end(),
                                        [](const auto& kv) { return kv.second != R::kUndetermined; });
  CHECK(dte.nodes().size() == 4 + static_cast<std::size_t>(determined));
  CHECK(dte.edges().size() == 3 + static_cast<std::size_t>(determined));
  for (const Edge& e : dte.edges()) {
    if (e.provenance != EdgeProvenance::kInferred) continue;
    CHECK(e.dst == 0);
    CHECK(inferred.at(e.src) == e.relation);
  }
}

TEST_CASE("select: variants nest on the synthetic corpus") {
  SyntheticOptions opts;
  opts.documents = 60;
  for (const auto& ex : synthetic_corpus(opts)) {
    std::optional<QuestionTimeSpan> q;
    try {
      q = extract_question_time(ex.question);
    } catch (const MalformedDate&) {
      continue;
    }
    if (!q) continue;
    const TemporalGraph full = build_graph(ex.question, *q, *ex.annotation).graph;
    check_span_integrity(ex.question, ex.context, full);
    const TemporalGraph dt = select_subgraph(full, GraphVariant::kDT2QT);
    const TemporalGraph dte = select_subgraph(full, GraphVariant::kDTE2QT);
    for (const Node& n : dt.nodes()) CHECK(dte.has_node(n.id));
    for (const Node& n : dte.nodes()) CHECK(full.has_node(n.id));
    for (const Edge& e : dt.edges()) CHECK(std::find(dte.edges().begin(), dte.edges().end(), e) != dte.edges().end());
    for (const Edge& e : dt.edges()) CHECK(std::find(full.edges().begin(), full.edges().end(), e) != full.edges().end());
    const GraphStats s = graph_stats(dt);
    CHECK(s.edges == in_degree(dt, 0));
  }
}

TEST_CASE("graph invariants are enforced") {
  Node qt{0, NodeKind::kQuestionTime, 0, 4, "1990", whole_year(1990)};
  Node ev{1, NodeKind::kDocEvent, 0, 3, "won", std::nullopt};
  CHECK_NOTHROW(TemporalGraph({qt, ev}, {{1, 0, R::kBefore, EdgeProvenance::kAnnotation}}));
  CHECK_THROWS_AS(TemporalGraph({ev}, {}), std::invalid_argument);
  CHECK_THROWS_AS(TemporalGraph({qt, ev}, {{1, 1, R::kBefore, EdgeProvenance::kAnnotation}}), std::invalid_argument);
  CHECK_THROWS_AS(TemporalGraph({qt, ev}, {{1, 0, R::kUndetermined, EdgeProvenance::kAnnotation}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(TemporalGraph({qt, ev}, {{1, 0, R::kBefore, EdgeProvenance::kAnnotation},
                                          {1, 0, R::kBefore, EdgeProvenance::kTimeLink}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(TemporalGraph({qt, ev}, {{1, 7, R::kBefore, EdgeProvenance::kAnnotation}}), std::invalid_argument);
  Node bad_ev = ev;
  bad_ev.interval = whole_year(1);
  CHECK_THROWS_AS(TemporalGraph({qt, bad_ev}, {}), std::invalid_argument);
}

TEST_CASE("stats accumulator") {
  StatsAccumulator acc;
  acc.add({1, 0, 0.0, 0.0});
  acc.add({3, 2, 2.0 / 3, 2.0 / 3});
  const MeanGraphStats m = acc.mean();
  CHECK(m.graphs_counted == 2);
  CHECK(m.nodes == doctest::Approx(2.0));
  CHECK(m.edges == doctest::Approx(1.0));
  CHECK(m.in_degree == doctest::Approx(1.0 / 3));
  CHECK(StatsAccumulator().mean().nodes == 0.0);
}

TEST_CASE("annotation json round trip and truncation") {
  const AnnotatedDocument doc = oracle::washington_document();
  const nlohmann::json j = to_json(doc);
  CHECK(j.at("schema") == "tg-annot/1");
  CHECK(j.at("tlinks")[0].at("source") == "e0");
  const AnnotatedDocument back = annotation_from_json(j);
  CHECK(to_json(back) == j);

  nlohmann::json wrong = j;
  wrong["schema"] = "tg-annot/9";
  CHECK_THROWS_AS(annotation_from_json(wrong), BadAnnotation);
  wrong = j;
  wrong["tlinks"][0]["source"] = "x1";
  CHECK_THROWS_AS(annotation_from_json(wrong), BadAnnotation);

  const AnnotatedDocument cut = truncate_document(doc, doc.text.find("He resigned"));
  CHECK(cut.events.size() == 2);
  CHECK(cut.timexes.size() == 1);
  CHECK(cut.tlinks.size() == 2);
  CHECK(check_annotations(cut).empty());

  // cut never splits a multi-byte character
  const AnnotatedDocument accented = truncate_document({"a", "Zoë", {}, {}, {}}, 3);
  CHECK(accented.text == "Zo");
}

TEST_CASE("stub annotator finds timexes only") {
  const AnnotatedDocument doc = stub_annotate("s", "Born in 1901, she taught from 1928 to 1965.");
  CHECK(doc.events.empty());
  REQUIRE(doc.timexes.size() == 2);
  CHECK(doc.timexes[1].surface == "from 1928 to 1965");
  CHECK(check_annotations(doc).empty());
}

TEST_CASE("graph json dump") {
  const Built b = build(oracle::kWashingtonQuestion, oracle::washington_document());
  const nlohmann::json j = to_json(b.build.graph);
  CHECK(j.at("nodes").size() == 8);
  CHECK(j.at("nodes")[0].at("kind") == "question_time");
  CHECK(j.at("edges").size() == 7);
}
