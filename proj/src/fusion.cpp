#include "tempograph/fusion.hpp"

#include <algorithm>
#include <array>
#include <stdexcept>

#include "tempograph/errors.hpp"

namespace tempograph {

using nlohmann::json;

std::string open_delimiter(std::string_view label, bool pad) {
  std::string out = "<" + std::string(label) + ">";
  if (pad) out += ' ';
  return out;
}

std::string close_delimiter(std::string_view label, bool pad) {
  std::string out = pad ? " " : "";
  out += "</" + std::string(label) + ">";
  return out;
}

std::string unfused_serialization(std::string_view question, std::string_view context) {
  std::string out = "question: ";
  out += question;
  out += " context: ";
  out += context;
  return out;
}

namespace {

constexpr std::array<std::string_view, 8> kAllLabels = {
    kQuestionTimeLabel, kNodeLabel, "before", "after", "includes", "included by",
    "simultaneous", "overlap"};

struct Mark {
  std::size_t start;
  std::size_t end;
  std::string label;
};

class Builder {
 public:
  explicit Builder(bool pad) : pad_(pad) {}

  void plain(std::string_view text) {
    for (char c : text) {
      out_.source_map.push_back(out_.text.size());
      out_.text += c;
    }
  }

  void marked(std::string_view text, std::vector<Mark> marks) {
    std::sort(marks.begin(), marks.end(), [](const Mark& a, const Mark& b) {
      return std::tie(a.start, a.end) < std::tie(b.start, b.end);
    });
    for (std::size_t i = 0; i < marks.size(); ++i) {
      const Mark& m = marks[i];
      if (m.start >= m.end || m.end > text.size()) {
        throw std::out_of_range("marker span [" + std::to_string(m.start) + ", " +
                                std::to_string(m.end) + ") outside text");
      }
      if (i > 0 && m.start < marks[i - 1].end) {
        throw OverlapConflict("spans [" + std::to_string(marks[i - 1].start) + ", " +
                              std::to_string(marks[i - 1].end) + ") and [" +
                              std::to_string(m.start) + ", " + std::to_string(m.end) +
                              ") overlap");
      }
    }
    std::size_t pos = 0;
    for (const Mark& m : marks) {
      plain(text.substr(pos, m.start - pos));
      out_.text += open_delimiter(m.label, pad_);
      const std::size_t content_start = out_.text.size();
      plain(text.substr(m.start, m.end - m.start));
      const std::size_t content_end = out_.text.size();
      out_.text += close_delimiter(m.label, pad_);
      out_.marker_spans.push_back({m.label, content_start, content_end});
      pos = m.end;
    }
    plain(text.substr(pos));
  }

  std::size_t size() const { return out_.text.size(); }
  FusedSequence& result() { return out_; }

  FusedSequence finish() {
    out_.source_map.push_back(out_.text.size());
    return std::move(out_);
  }

 private:
  bool pad_;
  FusedSequence out_;
};

void check_question_span(std::string_view question, const QuestionTimeSpan& qspan) {
  if (qspan.char_end > question.size() || qspan.char_start >= qspan.char_end ||
      question.substr(qspan.char_start, qspan.char_end - qspan.char_start) != qspan.surface) {
    throw std::invalid_argument("question-time span does not match the question text");
  }
}

FusedSequence serialize(std::string_view question, const QuestionTimeSpan& qspan,
                        std::string_view context, std::string_view question_label,
                        std::vector<Mark> context_marks, bool pad) {
  check_question_span(question, qspan);
  Builder b(pad);
  b.plain("question: ");
  const std::size_t qb = b.size();
  b.marked(question, {{qspan.char_start, qspan.char_end, std::string(question_label)}});
  const std::size_t qe = b.size();
  b.plain(" context: ");
  const std::size_t cb = b.size();
  b.marked(context, std::move(context_marks));
  const std::size_t ce = b.size();
  FusedSequence out = b.finish();
  out.question_begin = qb;
  out.question_end = qe;
  out.context_begin = cb;
  out.context_end = ce;
  return out;
}

std::vector<std::string> delimiter_strings(bool pad) {
  std::vector<std::string> out;
  for (std::string_view label : kAllLabels) {
    out.push_back(open_delimiter(label, pad));
    out.push_back(close_delimiter(label, pad));
  }
  std::sort(out.begin(), out.end(),
            [](const std::string& a, const std::string& b) { return a.size() > b.size(); });
  return out;
}

// Text with delimiters removed, plus how many were removed.
std::pair<std::string, std::size_t> remove_delimiters(std::string_view text, bool pad) {
  static const std::vector<std::string> plain_delims = delimiter_strings(false);
  static const std::vector<std::string> padded_delims = delimiter_strings(true);
  const auto& delims = pad ? padded_delims : plain_delims;
  std::string out;
  out.reserve(text.size());
  std::size_t removed = 0;
  std::size_t i = 0;
  while (i < text.size()) {
    bool hit = false;
    if (text[i] == '<' || (pad && text[i] == ' ')) {
      for (const std::string& d : delims) {
        if (text.substr(i, d.size()) == d) {
          i += d.size();
          ++removed;
          hit = true;
          break;
        }
      }
    }
    if (!hit) out += text[i++];
  }
  return {std::move(out), removed};
}

}  // namespace

RelationMap err_relations(const TemporalGraph& full, GraphVariant variant) {
  RelationMap out;
  for (const Edge& e : full.edges()) {
    if (e.provenance == EdgeProvenance::kTimeLink && e.dst == full.question_time() &&
        full.node(e.src).kind == NodeKind::kDocTime) {
      out[e.src] = e.relation;
    }
  }
  if (variant == GraphVariant::kDTE2QT || variant == GraphVariant::kFull) {
    for (const auto& [id, relation] : infer_all(full)) {
      if (relation != TemporalRelation::kUndetermined) out[id] = relation;
    }
  }
  return out;
}

FusedSequence err_serialize(std::string_view question, const QuestionTimeSpan& qspan,
                            std::string_view context, const TemporalGraph& g,
                            const RelationMap& relations, FusionOptions options) {
  std::vector<Mark> marks;
  for (const auto& [id, relation] : relations) {
    if (relation == TemporalRelation::kUndetermined) continue;
    const Node& n = g.node(id);
    if (n.kind == NodeKind::kQuestionTime) continue;
    const TemporalRelation shown = options.merge3 ? merge3(relation) : relation;
    marks.push_back({n.char_start, n.char_end, std::string(relation_label(shown))});
  }
  return serialize(question, qspan, context, kQuestionTimeLabel, std::move(marks),
                   options.pad_delimiters);
}

std::string strip_markers(const FusedSequence& fused) {
  std::string out;
  if (fused.source_map.empty()) return out;
  out.reserve(fused.source_map.size() - 1);
  for (std::size_t k = 0; k + 1 < fused.source_map.size(); ++k) out += fused.text[fused.source_map[k]];
  return out;
}

std::string strip_delimiter_text(std::string_view text, bool pad) {
  return remove_delimiters(text, pad).first;
}

GnnExport gnn_export(std::string_view question, const QuestionTimeSpan& qspan,
                     std::string_view context, const TemporalGraph& g) {
  const Node& qt = g.node(g.question_time());
  std::vector<const Node*> doc_nodes;
  for (const Node& n : g.nodes()) {
    if (n.kind != NodeKind::kQuestionTime) doc_nodes.push_back(&n);
  }
  std::sort(doc_nodes.begin(), doc_nodes.end(), [](const Node* a, const Node* b) {
    return std::tie(a->char_start, a->char_end, a->id) < std::tie(b->char_start, b->char_end, b->id);
  });

  std::vector<Mark> marks;
  for (const Node* n : doc_nodes) marks.push_back({n->char_start, n->char_end, std::string(kNodeLabel)});
  FusedSequence fused = serialize(question, qspan, context, kNodeLabel, std::move(marks), false);

  GnnExport ex;
  ex.marked_text = std::move(fused.text);
  ex.marker_spans = std::move(fused.marker_spans);
  ex.nodes.push_back({qt.id, qt.kind, 0});
  for (const Node* n : doc_nodes) ex.nodes.push_back({n->id, n->kind, ex.nodes.size()});
  for (const Edge& e : g.edges()) ex.edges.push_back({e.src, e.dst, relation_id(e.relation)});
  return ex;
}

json to_json(const GnnExport& ex, std::string_view id) {
  json vocab = json::array();
  for (TemporalRelation r : kRelationVocabulary) vocab.push_back(relation_name(r));
  json nodes = json::array();
  for (const GnnNode& n : ex.nodes) {
    const MarkerSpan& span = ex.marker_spans.at(n.marker);
    nodes.push_back({{"id", n.id},
                     {"kind", kind_name(n.kind)},
                     {"marker", n.marker},
                     {"start", span.start},
                     {"end", span.end}});
  }
  json edges = json::array();
  for (const GnnEdge& e : ex.edges) {
    edges.push_back({{"src", e.src}, {"dst", e.dst}, {"relation", e.relation}});
  }
  return {{"schema", kGnnSchema}, {"id", id},       {"marked_text", ex.marked_text},
          {"relation_vocabulary", vocab}, {"nodes", nodes}, {"edges", edges}};
}

GnnExport gnn_export_from_json(const json& j) {
  if (j.value("schema", std::string()) != kGnnSchema) {
    throw std::runtime_error("not a tg-gnn/1 document");
  }
  GnnExport ex;
  ex.marked_text = j.at("marked_text").get<std::string>();
  const json& vocab = j.at("relation_vocabulary");
  if (vocab.size() != kRelationCount) throw std::runtime_error("relation vocabulary must have 6 entries");
  for (std::size_t r = 0; r < kRelationCount; ++r) {
    if (vocab[r] != relation_name(kRelationVocabulary[r])) {
      throw std::runtime_error("unexpected relation vocabulary order");
    }
  }
  for (const json& n : j.at("nodes")) {
    const std::string kind = n.at("kind").get<std::string>();
    NodeKind k = NodeKind::kDocEvent;
    if (kind == kind_name(NodeKind::kQuestionTime)) {
      k = NodeKind::kQuestionTime;
    } else if (kind == kind_name(NodeKind::kDocTime)) {
      k = NodeKind::kDocTime;
    } else if (kind != kind_name(NodeKind::kDocEvent)) {
      throw std::runtime_error("unknown node kind " + kind);
    }
    ex.nodes.push_back({n.at("id").get<NodeId>(), k, n.at("marker").get<std::size_t>()});
    ex.marker_spans.push_back(
        {std::string(kNodeLabel), n.at("start").get<std::size_t>(), n.at("end").get<std::size_t>()});
  }
  for (const json& e : j.at("edges")) {
    const auto rel = e.at("relation").get<std::size_t>();
    if (rel >= kRelationCount) throw std::runtime_error("relation id out of range");
    ex.edges.push_back({e.at("src").get<NodeId>(), e.at("dst").get<NodeId>(), rel});
  }
  return ex;
}

std::string build_icl_prompt(std::string_view instruction, std::span<const PromptShot> shots,
                             const PromptTarget& target, bool fused) {
  std::string out = "Instruction: ";
  out += instruction;
  if (fused) {
    out += ' ';
    out += kFusedInstructionNote;
  }
  out += "\n\n";
  for (const PromptShot& shot : shots) {
    out += "Context: " + shot.context + "\n";
    out += "Question: " + shot.question + "\n";
    out += "Answer: ";
    out += shot.answers.empty() ? std::string(kNoAnswer) : shot.answers.front();
    out += "\n\n";
  }
  out += "Context: " + target.context + "\n";
  out += "Question: " + target.question + "\n";
  out += "Answer:";
  return out;
}

std::size_t count_whitespace_pieces(std::string_view text) {
  std::size_t count = 0;
  bool in_piece = false;
  for (char c : text) {
    const bool space = c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
    if (!space && !in_piece) ++count;
    in_piece = !space;
  }
  return count;
}

std::size_t count_marker_pieces(std::string_view text) {
  // Padded forms first so their inner space does not split the content.
  const auto [unpadded, padded_count] = remove_delimiters(text, true);
  const auto [rest, plain_count] = remove_delimiters(unpadded, false);
  return count_whitespace_pieces(rest) + padded_count + plain_count;
}

std::pair<std::size_t, std::size_t> length_report(std::string_view before,
                                                  const FusedSequence& after,
                                                  const TokenCounter& counter) {
  return {counter(before), counter(after.text)};
}

}  // namespace tempograph
