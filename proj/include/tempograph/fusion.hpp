#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "tempograph/chronon.hpp"
#include "tempograph/inference.hpp"
#include "tempograph/temporal_graph.hpp"

namespace tempograph {

inline constexpr std::string_view kQuestionTimeLabel = "question time";
inline constexpr std::string_view kNodeLabel = "e";
inline constexpr std::string_view kGnnSchema = "tg-gnn/1";

// Label and wrapped content span, as offsets into the fused text.
struct MarkerSpan {
  std::string label;
  std::size_t start = 0;
  std::size_t end = 0;

  friend bool operator==(const MarkerSpan&, const MarkerSpan&) = default;
};

struct FusedSequence {
  std::string text;
  std::vector<MarkerSpan> marker_spans;
  // source_map[k] is the fused offset of unfused offset k; one entry per
  // unfused byte plus the end offset.
  std::vector<std::size_t> source_map;
  // Fused offsets of the (marked) question and context bodies.
  std::size_t question_begin = 0;
  std::size_t question_end = 0;
  std::size_t context_begin = 0;
  std::size_t context_end = 0;

  std::string_view question() const {
    return std::string_view(text).substr(question_begin, question_end - question_begin);
  }
  std::string_view context() const {
    return std::string_view(text).substr(context_begin, context_end - context_begin);
  }
};

struct FusionOptions {
  // Collapse INCLUDES, INCLUDED_BY and SIMULTANEOUS into OVERLAP.
  bool merge3 = false;
  // "<before> x </before>" instead of "<before>x</before>".
  bool pad_delimiters = false;
};

std::string open_delimiter(std::string_view label, bool pad = false);
std::string close_delimiter(std::string_view label, bool pad = false);

// "question: <question> context: <context>"
std::string unfused_serialization(std::string_view question, std::string_view context);

// Labels context nodes for ERR: TimeLink relations of document-time nodes,
// plus inferred relations of events for the DTE2QT and Full variants.
// UNDETERMINED results are left out.
RelationMap err_relations(const TemporalGraph& full, GraphVariant variant);

// ERR fusion. The question-time span is wrapped in question-time
// delimiters; each context node in `relations` (UNDETERMINED skipped) is
// wrapped in the delimiters of its relation. Throws OverlapConflict when
// two wrapped spans overlap.
FusedSequence err_serialize(std::string_view question, const QuestionTimeSpan& qspan,
                            std::string_view context, const TemporalGraph& g,
                            const RelationMap& relations, FusionOptions options = {});

// Recovers the unfused serialization through source_map.
std::string strip_markers(const FusedSequence& fused);

// Deletes every ERR / GNN delimiter occurrence from text.
std::string strip_delimiter_text(std::string_view text, bool pad = false);

struct GnnNode {
  NodeId id = 0;
  NodeKind kind = NodeKind::kDocEvent;
  std::size_t marker = 0;

  friend bool operator==(const GnnNode&, const GnnNode&) = default;
};

struct GnnEdge {
  NodeId src = 0;
  NodeId dst = 0;
  std::size_t relation = 0;  // index into kRelationVocabulary

  friend bool operator==(const GnnEdge&, const GnnEdge&) = default;
};

struct GnnExport {
  std::string marked_text;
  std::vector<GnnNode> nodes;  // marker order
  std::vector<GnnEdge> edges;
  std::vector<MarkerSpan> marker_spans;

  friend bool operator==(const GnnExport&, const GnnExport&) = default;
};

// Wraps every node of g in <e></e>: the question-time node first, then
// document nodes by ascending offset. Throws OverlapConflict.
GnnExport gnn_export(std::string_view question, const QuestionTimeSpan& qspan,
                     std::string_view context, const TemporalGraph& g);

nlohmann::json to_json(const GnnExport& ex, std::string_view id);
// Throws std::runtime_error on schema mismatch.
GnnExport gnn_export_from_json(const nlohmann::json& j);

inline constexpr std::string_view kNoAnswer = "no answer";
inline constexpr std::string_view kDefaultInstruction =
    "Use the context to answer the question. Reply \"no answer\" when the context does not "
    "contain the answer.";
inline constexpr std::string_view kFusedInstructionNote =
    "Tags such as <before>...</before> mark how each time in the context relates to the "
    "<question time> tag in the question.";

struct PromptShot {
  std::string context;
  std::string question;
  std::vector<std::string> answers;  // empty = unanswerable
};

struct PromptTarget {
  std::string context;
  std::string question;
};

// "Instruction: ..." then one Context/Question/Answer block per shot, then
// the target's Context/Question and a bare "Answer:" cue. With `fused`,
// kFusedInstructionNote is appended to the instruction.
std::string build_icl_prompt(std::string_view instruction, std::span<const PromptShot> shots,
                             const PromptTarget& target, bool fused);

using TokenCounter = std::function<std::size_t(std::string_view)>;

std::size_t count_whitespace_pieces(std::string_view text);

// Delimiters, padded or not, count as one piece each and do not split the
// surrounding words; everything else is split on whitespace. (A marked
// surface that itself starts or ends with a space can be miscounted.)
std::size_t count_marker_pieces(std::string_view text);

std::pair<std::size_t, std::size_t> length_report(std::string_view before,
                                                  const FusedSequence& after,
                                                  const TokenCounter& counter = count_marker_pieces);

}  // namespace tempograph
