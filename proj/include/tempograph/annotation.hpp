#pragma once

// Ingestion boundary for externally produced event/timex/TLINK annotations.
// On disk this is the "tg-annot/1" JSON schema (docs/annotation-schema.md).

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace tempograph {

inline constexpr std::string_view kAnnotationSchema = "tg-annot/1";

struct EventAnnotation {
  std::size_t start = 0;
  std::size_t end = 0;
  std::string surface;
};

struct TimexAnnotation {
  std::size_t start = 0;
  std::size_t end = 0;
  std::string surface;
  std::string value;  // normalized value text, may be empty
};

// "e<i>" names the i-th event, "t<i>" the i-th timex.
struct AnnotationRef {
  enum class Kind { kEvent, kTimex };
  Kind kind = Kind::kEvent;
  std::size_t index = 0;

  friend bool operator==(const AnnotationRef&, const AnnotationRef&) = default;
};

std::optional<AnnotationRef> parse_annotation_ref(std::string_view text);
std::string to_string(const AnnotationRef& ref);

struct TlinkAnnotation {
  AnnotationRef source;
  AnnotationRef target;
  std::string relation;  // one of the six relation names
};

struct AnnotatedDocument {
  std::string id;
  std::string text;
  std::vector<EventAnnotation> events;
  std::vector<TimexAnnotation> timexes;
  std::vector<TlinkAnnotation> tlinks;
};

struct AnnotationFinding {
  std::string code;  // span_out_of_range, surface_mismatch, bad_ref, unknown_relation, self_link
  std::string message;
  std::optional<std::size_t> start;
  std::optional<std::size_t> end;
};

// Checks every AnnotatedDocument invariant; an empty result means valid.
std::vector<AnnotationFinding> check_annotations(const AnnotatedDocument& doc);

// Throws BadAnnotation on schema violations (missing fields, wrong types,
// malformed refs). Semantic checks are left to check_annotations.
AnnotatedDocument annotation_from_json(const nlohmann::json& j);
nlohmann::json to_json(const AnnotatedDocument& doc);

// Keeps the first `budget` bytes of text and drops annotations that no
// longer fit, together with their tlinks (refs are renumbered).
AnnotatedDocument truncate_document(const AnnotatedDocument& doc, std::size_t budget);

// Timex-only annotator: every time expression chronon recognizes in the
// text becomes a timex with an empty value. No events, no tlinks.
AnnotatedDocument stub_annotate(std::string id, std::string text);

}  // namespace tempograph
