#include "tempograph/interval_algebra.hpp"

#include <limits>
#include <sstream>
#include <stdexcept>
#include <vector>

#include <omp.h>

#include "tempograph/errors.hpp"

namespace tempograph {

TemporalRelation relate_endpoints(std::int64_t a_start, std::int64_t a_end,
                                  std::int64_t b_start, std::int64_t b_end) {
  if (a_start == b_start && a_end == b_end) return TemporalRelation::kSimultaneous;
  if (a_end < b_start) return TemporalRelation::kBefore;
  if (a_start > b_end) return TemporalRelation::kAfter;
  if (a_start <= b_start && b_end <= a_end) return TemporalRelation::kIncludes;
  if (b_start <= a_start && a_end <= b_end) return TemporalRelation::kIncludedBy;
  return TemporalRelation::kOverlap;
}

namespace {

constexpr std::int64_t kNegInf = std::numeric_limits<std::int64_t>::min();
constexpr std::int64_t kPosInf = std::numeric_limits<std::int64_t>::max();

std::int64_t start_key(const TimeInterval& iv) { return iv.start ? day_number(*iv.start) : kNegInf; }
std::int64_t end_key(const TimeInterval& iv) { return iv.end ? day_number(*iv.end) : kPosInf; }

using R = TemporalRelation;
constexpr R B = R::kBefore;
constexpr R A = R::kAfter;
constexpr R I = R::kIncludes;
constexpr R D = R::kIncludedBy;
constexpr R S = R::kSimultaneous;
constexpr R O = R::kOverlap;
constexpr R U = R::kUndetermined;

// Generated by build_composition_table(8); must match data/composition_table.txt.
// Rows: first hop; columns: second hop; order B A I D S O.
constexpr CompositionTable kFrozen{{
    B, U, B, U, B, U,  //
    U, A, A, U, A, U,  //
    U, U, I, U, I, U,  //
    B, A, U, D, D, U,  //
    B, A, I, D, S, O,  //
    U, U, U, U, O, U,  //
}};

struct Interval {
  int start;
  int end;
};

std::vector<Interval> window_intervals(int window) {
  std::vector<Interval> out;
  for (int s = 0; s < window; ++s) {
    for (int e = s; e < window; ++e) out.push_back({s, e});
  }
  return out;
}

R relate_iv(const Interval& a, const Interval& b) {
  return relate_endpoints(a.start, a.end, b.start, b.end);
}

CompositionTable table_from_outcomes(const CompositionOutcomes& outcomes) {
  CompositionTable table;
  for (std::size_t cell = 0; cell < outcomes.size(); ++cell) {
    const OutcomeMask mask = outcomes[cell];
    R value = U;
    if (mask != 0 && (mask & (mask - 1)) == 0) {
      for (std::size_t r = 0; r < kRelationCount; ++r) {
        if (mask == (1u << r)) value = static_cast<R>(r);
      }
    }
    table.cells[cell] = value;
  }
  return table;
}

std::size_t cell_index(R first, R second) {
  return relation_id(first) * kRelationCount + relation_id(second);
}

}  // namespace

TemporalRelation relate(const TimeInterval& a, const TimeInterval& b) {
  return relate_endpoints(start_key(a), end_key(a), start_key(b), end_key(b));
}

const CompositionTable& frozen_composition_table() { return kFrozen; }

TemporalRelation compose(TemporalRelation first, TemporalRelation second) {
  if (!is_stored_relation(first) || !is_stored_relation(second)) return U;
  return kFrozen.at(first, second);
}

CompositionOutcomes enumerate_composition_outcomes_serial(int window) {
  const std::vector<Interval> ivs = window_intervals(window);
  CompositionOutcomes outcomes{};
  for (const Interval& a : ivs) {
    for (const Interval& b : ivs) {
      const R ab = relate_iv(a, b);
      for (const Interval& c : ivs) {
        outcomes[cell_index(ab, relate_iv(b, c))] |=
            static_cast<OutcomeMask>(1u << relation_id(relate_iv(a, c)));
      }
    }
  }
  return outcomes;
}

CompositionOutcomes enumerate_composition_outcomes(int window) {
  const std::vector<Interval> ivs = window_intervals(window);
  const auto n = static_cast<std::ptrdiff_t>(ivs.size());
  CompositionOutcomes outcomes{};
#pragma omp parallel
  {
    CompositionOutcomes local{};
#pragma omp for schedule(static)
    for (std::ptrdiff_t ia = 0; ia < n; ++ia) {
      const Interval& a = ivs[ia];
      for (const Interval& b : ivs) {
        const R ab = relate_iv(a, b);
        for (const Interval& c : ivs) {
          local[cell_index(ab, relate_iv(b, c))] |=
              static_cast<OutcomeMask>(1u << relation_id(relate_iv(a, c)));
        }
      }
    }
#pragma omp critical(tempograph_composition_merge)
    for (std::size_t k = 0; k < local.size(); ++k) outcomes[k] |= local[k];
  }
  return outcomes;
}

void check_inverse_symmetry(const CompositionTable& table) {
  for (R r : kRelationVocabulary) {
    for (R s : kRelationVocabulary) {
      const R forward = table.at(r, s);
      if (forward == U) continue;
      const R mirrored = table.at(inverse(s), inverse(r));
      if (mirrored != inverse(forward)) {
        throw OracleInconsistency("composition cell (" + std::string(relation_name(r)) + ", " +
                                  std::string(relation_name(s)) + ") = " +
                                  std::string(relation_name(forward)) + " but mirrored cell = " +
                                  std::string(relation_name(mirrored)));
      }
    }
  }
}

CompositionTable build_composition_table(int window) {
  CompositionTable table = table_from_outcomes(enumerate_composition_outcomes(window));
  check_inverse_symmetry(table);
  return table;
}

CompositionTable build_composition_table_serial(int window) {
  CompositionTable table = table_from_outcomes(enumerate_composition_outcomes_serial(window));
  check_inverse_symmetry(table);
  return table;
}

std::string format_composition_table(const CompositionTable& table) {
  std::string out;
  for (R r : kRelationVocabulary) {
    for (R s : kRelationVocabulary) {
      out += relation_name(r);
      out += ' ';
      out += relation_name(s);
      out += " -> ";
      out += relation_name(table.at(r, s));
      out += '\n';
    }
  }
  return out;
}

CompositionTable parse_composition_table(std::string_view text) {
  CompositionTable table;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t count = 0;
  while (std::getline(in, line)) {
    if (count >= table.cells.size()) throw std::runtime_error("composition table: too many lines");
    std::istringstream fields(line);
    std::string first, second, arrow, result, extra;
    fields >> first >> second >> arrow >> result;
    const R expect_first = kRelationVocabulary[count / kRelationCount];
    const R expect_second = kRelationVocabulary[count % kRelationCount];
    const auto parsed = parse_relation(result, true);
    if (first != relation_name(expect_first) || second != relation_name(expect_second) ||
        arrow != "->" || !parsed || (fields >> extra)) {
      throw std::runtime_error("composition table: malformed line " + std::to_string(count + 1) +
                               ": " + line);
    }
    table.cells[count++] = *parsed;
  }
  if (count != table.cells.size()) throw std::runtime_error("composition table: expected 36 lines");
  if (format_composition_table(table) != text) {
    throw std::runtime_error("composition table: not in canonical layout");
  }
  return table;
}

}  // namespace tempograph
