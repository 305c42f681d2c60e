#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>

#include "tempograph/chronon.hpp"
#include "tempograph/relation.hpp"

namespace tempograph {

// Relation of closed integer intervals [a_start, a_end] and [b_start, b_end].
// SIMULTANEOUS iff equal; BEFORE iff a_end < b_start; AFTER iff
// a_start > b_end; INCLUDES iff a covers b (shared endpoints allowed);
// INCLUDED_BY the mirror; OVERLAP otherwise.
TemporalRelation relate_endpoints(std::int64_t a_start, std::int64_t a_end,
                                  std::int64_t b_start, std::int64_t b_end);

// Day-granularity relation; unbounded endpoints compare as -inf / +inf.
TemporalRelation relate(const TimeInterval& a, const TimeInterval& b);

// (first hop, second hop) -> implied relation, row-major over the vocabulary.
struct CompositionTable {
  std::array<TemporalRelation, kRelationCount * kRelationCount> cells{};

  TemporalRelation at(TemporalRelation first, TemporalRelation second) const {
    return cells[relation_id(first) * kRelationCount + relation_id(second)];
  }
  TemporalRelation& at(TemporalRelation first, TemporalRelation second) {
    return cells[relation_id(first) * kRelationCount + relation_id(second)];
  }

  friend bool operator==(const CompositionTable&, const CompositionTable&) = default;
};

// The checked-in table (data/composition_table.txt), compiled in.
const CompositionTable& frozen_composition_table();

// Frozen-table lookup. UNDETERMINED in either argument yields UNDETERMINED.
TemporalRelation compose(TemporalRelation first, TemporalRelation second);

// Bit i of a mask is set when relation i was observed as relate(A, C).
using OutcomeMask = std::uint8_t;
using CompositionOutcomes = std::array<OutcomeMask, kRelationCount * kRelationCount>;

// Enumerates every triple of closed integer intervals with endpoints in
// [0, window) and records, per (relate(A,B), relate(B,C)) cell, the set of
// relate(A,C) outcomes. Three intervals have at most six distinct
// endpoints, so any window >= 6 covers every order type, including those
// with unbounded endpoints.
CompositionOutcomes enumerate_composition_outcomes(int window);
CompositionOutcomes enumerate_composition_outcomes_serial(int window);

// Singleton outcome sets become the cell, anything else UNDETERMINED.
// Throws OracleInconsistency if the result breaks inverse symmetry.
CompositionTable build_composition_table(int window = 8);
CompositionTable build_composition_table_serial(int window = 8);

// Throws OracleInconsistency when
// compose(inverse(s), inverse(r)) != inverse(compose(r, s)) for a
// determined cell.
void check_inverse_symmetry(const CompositionTable& table);

// 36 lines "R1 R2 -> R3\n" in vocabulary order.
std::string format_composition_table(const CompositionTable& table);

// Inverse of format_composition_table; throws std::runtime_error on any
// deviation from the exact layout.
CompositionTable parse_composition_table(std::string_view text);

}  // namespace tempograph
