#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string_view>

namespace tempograph {

// The six stored relations, in the fixed vocabulary order used by every
// export, plus UNDETERMINED for inference results that no rule forces.
enum class TemporalRelation : std::uint8_t {
  kBefore = 0,
  kAfter = 1,
  kIncludes = 2,
  kIncludedBy = 3,
  kSimultaneous = 4,
  kOverlap = 5,
  kUndetermined = 6,
};

inline constexpr std::size_t kRelationCount = 6;

inline constexpr std::array<TemporalRelation, kRelationCount> kRelationVocabulary = {
    TemporalRelation::kBefore,     TemporalRelation::kAfter,
    TemporalRelation::kIncludes,   TemporalRelation::kIncludedBy,
    TemporalRelation::kSimultaneous, TemporalRelation::kOverlap,
};

constexpr std::size_t relation_id(TemporalRelation r) { return static_cast<std::size_t>(r); }

constexpr bool is_stored_relation(TemporalRelation r) {
  return r != TemporalRelation::kUndetermined;
}

constexpr TemporalRelation inverse(TemporalRelation r) {
  switch (r) {
    case TemporalRelation::kBefore: return TemporalRelation::kAfter;
    case TemporalRelation::kAfter: return TemporalRelation::kBefore;
    case TemporalRelation::kIncludes: return TemporalRelation::kIncludedBy;
    case TemporalRelation::kIncludedBy: return TemporalRelation::kIncludes;
    default: return r;
  }
}

// {SIMULTANEOUS, INCLUDES, INCLUDED_BY, OVERLAP} -> OVERLAP.
constexpr TemporalRelation merge3(TemporalRelation r) {
  switch (r) {
    case TemporalRelation::kIncludes:
    case TemporalRelation::kIncludedBy:
    case TemporalRelation::kSimultaneous:
      return TemporalRelation::kOverlap;
    default:
      return r;
  }
}

// Upper-case token, e.g. "INCLUDED_BY". Used in the golden table and JSON.
std::string_view relation_name(TemporalRelation r);

// Lower-case delimiter label with internal space, e.g. "included by".
std::string_view relation_label(TemporalRelation r);

// Accepts the canonical token ("INCLUDED_BY") and the spaced form
// ("INCLUDED BY"), case-insensitively. UNDETERMINED is accepted only when
// allow_undetermined is set.
std::optional<TemporalRelation> parse_relation(std::string_view text,
                                               bool allow_undetermined = false);

}  // namespace tempograph
