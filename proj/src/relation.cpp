#include "tempograph/relation.hpp"

#include <cctype>
#include <string>

namespace tempograph {

std::string_view relation_name(TemporalRelation r) {
  switch (r) {
    case TemporalRelation::kBefore: return "BEFORE";
    case TemporalRelation::kAfter: return "AFTER";
    case TemporalRelation::kIncludes: return "INCLUDES";
    case TemporalRelation::kIncludedBy: return "INCLUDED_BY";
    case TemporalRelation::kSimultaneous: return "SIMULTANEOUS";
    case TemporalRelation::kOverlap: return "OVERLAP";
    case TemporalRelation::kUndetermined: return "UNDETERMINED";
  }
  return "UNDETERMINED";
}

std::string_view relation_label(TemporalRelation r) {
  switch (r) {
    case TemporalRelation::kBefore: return "before";
    case TemporalRelation::kAfter: return "after";
    case TemporalRelation::kIncludes: return "includes";
    case TemporalRelation::kIncludedBy: return "included by";
    case TemporalRelation::kSimultaneous: return "simultaneous";
    case TemporalRelation::kOverlap: return "overlap";
    case TemporalRelation::kUndetermined: return "undetermined";
  }
  return "undetermined";
}

std::optional<TemporalRelation> parse_relation(std::string_view text, bool allow_undetermined) {
  std::string norm;
  norm.reserve(text.size());
  for (char c : text) {
    norm += c == ' ' ? '_' : static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  }
  for (TemporalRelation r : kRelationVocabulary) {
    if (norm == relation_name(r)) return r;
  }
  if (allow_undetermined && norm == "UNDETERMINED") return TemporalRelation::kUndetermined;
  return std::nullopt;
}

}  // namespace tempograph
