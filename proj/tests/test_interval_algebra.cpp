#include <doctest.h>

#include <climits>
#include <fstream>
#include <random>
#include <sstream>

#include "oracles.hpp"
#include "tempograph/errors.hpp"
#include "tempograph/interval_algebra.hpp"

using namespace tempograph;
using R = TemporalRelation;

namespace {

TimeInterval years(int a, int b) { return make_interval(CalendarDate{a, 1, 1}, CalendarDate{b, 12, 31}); }

std::string golden_text() {
  std::ifstream in(std::string(TEMPOGRAPH_DATA_DIR) + "/composition_table.txt");
  REQUIRE(in);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("relate: worked examples") {
  CHECK(relate(years(2022, 2022), years(1789, 1797)) == R::kAfter);
  CHECK(relate(years(1980, 1980), years(1980, 1980)) == R::kSimultaneous);
  CHECK(relate(single_day({1775, 6, 14}), years(1776, 1780)) == R::kBefore);
  CHECK(relate(years(1928, 1965), normalize_timex("before Jun 1926")) == R::kAfter);
}

TEST_CASE("relate: shared endpoints") {
  CHECK(relate_endpoints(0, 5, 0, 3) == R::kIncludes);
  CHECK(relate_endpoints(0, 3, 0, 5) == R::kIncludedBy);
  CHECK(relate_endpoints(0, 5, 3, 5) == R::kIncludes);
  CHECK(relate_endpoints(0, 3, 3, 5) == R::kOverlap);  // meets on a shared day
  CHECK(relate_endpoints(0, 2, 3, 5) == R::kBefore);
  const TimeInterval all{};
  CHECK(relate(all, all) == R::kSimultaneous);
  CHECK(relate(all, years(1, 1)) == R::kIncludes);
}

TEST_CASE("relate: exactly one relation, exhaustive over a width-10 window") {
  std::size_t pairs = 0;
  for (long as = 0; as < 10; ++as)
    for (long ae = as; ae < 10; ++ae)
      for (long bs = 0; bs < 10; ++bs)
        for (long be = bs; be < 10; ++be) {
          const auto held = oracle::holding({as, ae}, {bs, be});
          REQUIRE(held.size() == 1);
          const R r = relate_endpoints(as, ae, bs, be);
          REQUIRE(r == held[0]);
          REQUIRE(relate_endpoints(bs, be, as, ae) == inverse(r));
          ++pairs;
        }
  CHECK(pairs == 55 * 55);
}

TEST_CASE("relate: antisymmetry on random pairs with unbounded endpoints") {
  std::mt19937_64 rng(7);
  auto endpoint = [&](bool start) -> std::optional<CalendarDate> {
    if (rng() % 8 == 0) return std::nullopt;
    (void)start;
    return from_day_number(static_cast<std::int64_t>(rng() % 4000));
  };
  for (int i = 0; i < 100000; ++i) {
    auto s1 = endpoint(true), e1 = endpoint(false), s2 = endpoint(true), e2 = endpoint(false);
    if (s1 && e1 && *e1 < *s1) std::swap(s1, e1);
    if (s2 && e2 && *e2 < *s2) std::swap(s2, e2);
    const TimeInterval a{s1, e1}, b{s2, e2};
    const R ab = relate(a, b);
    REQUIRE(ab != R::kUndetermined);
    REQUIRE(relate(b, a) == inverse(ab));
    const oracle::Iv oa{s1 ? day_number(*s1) : LONG_MIN, e1 ? day_number(*e1) : LONG_MAX};
    const oracle::Iv ob{s2 ? day_number(*s2) : LONG_MIN, e2 ? day_number(*e2) : LONG_MAX};
    const auto held = oracle::holding(oa, ob);
    REQUIRE(held.size() == 1);
    REQUIRE(held[0] == ab);
  }
}

TEST_CASE("compose: worked examples") {
  CHECK(compose(R::kBefore, R::kIncludes) == R::kBefore);
  CHECK(compose(R::kOverlap, R::kSimultaneous) == R::kOverlap);
  CHECK(compose(R::kBefore, R::kAfter) == R::kUndetermined);
  CHECK(compose(R::kAfter, R::kAfter) == R::kAfter);
  CHECK(compose(R::kUndetermined, R::kBefore) == R::kUndetermined);
  CHECK(compose(R::kBefore, R::kUndetermined) == R::kUndetermined);
}

TEST_CASE("composition table: invariants") {
  const CompositionTable& t = frozen_composition_table();
  for (R r : kRelationVocabulary) {
    CHECK(t.at(r, R::kSimultaneous) == r);
    CHECK(t.at(R::kSimultaneous, r) == r);
    for (R s : kRelationVocabulary) {
      if (t.at(r, s) != R::kUndetermined) CHECK(t.at(inverse(s), inverse(r)) == inverse(t.at(r, s)));
    }
  }
  CHECK_NOTHROW(check_inverse_symmetry(t));
  CHECK(t.at(R::kSimultaneous, R::kBefore) == R::kBefore);
  CHECK(t.at(R::kIncludes, R::kIncludedBy) == R::kUndetermined);
}

TEST_CASE("composition table: generated == frozen == golden file") {
  const CompositionTable built = build_composition_table();
  CHECK(built == frozen_composition_table());
  CHECK(build_composition_table_serial() == built);
  const std::string golden = golden_text();
  CHECK(parse_composition_table(golden) == built);
  CHECK(format_composition_table(built) == golden);
}

TEST_CASE("composition table: every cell matches an independent semantic oracle") {
  const auto& sem = oracle::semantic_composition();
  const CompositionTable& t = frozen_composition_table();
  for (R r1 : kRelationVocabulary)
    for (R r2 : kRelationVocabulary) {
      const auto& outcomes = sem[relation_id(r1) * 6 + relation_id(r2)];
      REQUIRE(!outcomes.empty());
      const R expected = outcomes.size() == 1 ? *outcomes.begin() : R::kUndetermined;
      CHECK_MESSAGE(t.at(r1, r2) == expected, relation_name(r1), " ", relation_name(r2));
    }
  // (INCLUDES, INCLUDED_BY) is ambiguous among INCLUDES, OVERLAP, SIMULTANEOUS, ...
  const auto& amb = sem[relation_id(R::kIncludes) * 6 + relation_id(R::kIncludedBy)];
  CHECK(amb.count(R::kIncludes));
  CHECK(amb.count(R::kOverlap));
  CHECK(amb.count(R::kSimultaneous));
  const auto& ba = sem[relation_id(R::kBefore) * 6 + relation_id(R::kAfter)];
  CHECK(ba.count(R::kBefore));
  CHECK(ba.count(R::kAfter));
  CHECK(ba.count(R::kOverlap));
}

TEST_CASE("composition table: sound in a wider window") {
  const CompositionOutcomes wide = enumerate_composition_outcomes(10);
  CHECK(wide == enumerate_composition_outcomes_serial(10));
  const CompositionTable& t = frozen_composition_table();
  for (std::size_t i = 0; i < wide.size(); ++i) {
    const R cell = t.cells[i];
    if (cell == R::kUndetermined) {
      CHECK(__builtin_popcount(wide[i]) > 1);
    } else {
      CHECK(wide[i] == (1u << relation_id(cell)));
    }
  }
}

TEST_CASE("composition table: strict text format") {
  const std::string golden = golden_text();
  CHECK_THROWS(parse_composition_table(golden.substr(0, golden.size() - 1) + " \n"));
  CHECK_THROWS(parse_composition_table(golden.substr(golden.find('\n') + 1)));
  // well-formed but different content parses to a different table
  std::string changed = golden;
  changed.replace(0, golden.find('\n'), "BEFORE BEFORE -> AFTER");
  CHECK(parse_composition_table(changed) != frozen_composition_table());
  // lines out of vocabulary order are rejected
  const std::size_t nl = golden.find('\n');
  const std::size_t nl2 = golden.find('\n', nl + 1);
  CHECK_THROWS(parse_composition_table(golden.substr(nl + 1, nl2 - nl) + golden.substr(0, nl + 1) +
                                       golden.substr(nl2 + 1)));
}

TEST_CASE("relation names") {
  CHECK(relation_name(R::kIncludedBy) == "INCLUDED_BY");
  CHECK(relation_label(R::kIncludedBy) == "included by");
  CHECK(parse_relation("included by") == R::kIncludedBy);
  CHECK(parse_relation("Overlap") == R::kOverlap);
  CHECK(!parse_relation("VAGUE"));
  CHECK(!parse_relation("UNDETERMINED"));
  CHECK(parse_relation("UNDETERMINED", true) == R::kUndetermined);
  CHECK(merge3(R::kIncludes) == R::kOverlap);
  CHECK(merge3(R::kBefore) == R::kBefore);
}
