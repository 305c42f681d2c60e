#pragma once

// Time-expression recognition and normalization to day-granularity intervals.
//
// Supported grammar (closed list). An atom is one of
//   Y                 four-digit year              "1956"
//   the year Y                                     "the year 2022"
//   Month Y           full or 3-letter month name  "Apr 1956", "December 1992"
//   Month D, Y        comma optional               "June 14, 1775"
// A core is an atom or a range
//   from A to B | between A - B | between A and B | A - B
// (the dash may be '-' or an en dash, with or without surrounding spaces).
// An expression is a core, optionally preceded by one of
//   before | after | since | as of | in
// Keywords are case-insensitive; month names must start upper-case so the
// modal verb "may" is never read as a month.
//
// Offsets are byte offsets into UTF-8 text, end exclusive.

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace tempograph {

struct CalendarDate {
  int year = 1970;
  unsigned month = 1;
  unsigned day = 1;

  friend constexpr auto operator<=>(const CalendarDate&, const CalendarDate&) = default;
};

bool is_leap_year(int year);
unsigned days_in_month(int year, unsigned month);
bool is_valid(const CalendarDate& d);

// Days since 1970-01-01 (proleptic Gregorian).
std::int64_t day_number(const CalendarDate& d);
CalendarDate from_day_number(std::int64_t n);
CalendarDate next_day(const CalendarDate& d);
CalendarDate previous_day(const CalendarDate& d);

// "YYYY-MM-DD"; negative years print with a leading '-'.
std::string to_string(const CalendarDate& d);

// Closed interval; a missing start is -inf, a missing end is +inf.
struct TimeInterval {
  std::optional<CalendarDate> start;
  std::optional<CalendarDate> end;

  friend bool operator==(const TimeInterval&, const TimeInterval&) = default;
};

// Throws MalformedDate when either date is invalid or start > end.
TimeInterval make_interval(std::optional<CalendarDate> start, std::optional<CalendarDate> end);
TimeInterval single_day(const CalendarDate& d);
TimeInterval whole_year(int year);
TimeInterval whole_month(int year, unsigned month);

bool contains(const TimeInterval& iv, const CalendarDate& d);

// "[1789-01-01, 1797-12-31]", "(-inf, 1956-03-31]", "[2000-01-01, +inf)".
std::string to_string(const TimeInterval& iv);

enum class TimexPrefix { kNone, kBefore, kAfter, kSince, kAsOf, kIn };
enum class TimexCore { kAtom, kFromTo, kBetweenDash, kBetweenAnd, kDashRange };
enum class TimexAtom { kYear, kTheYear, kMonthYear, kFullDate };

// Which grammar production produced a match; the atom kind is that of the
// first (or only) atom in the core.
struct TimexShape {
  TimexPrefix prefix = TimexPrefix::kNone;
  TimexCore core = TimexCore::kAtom;
  TimexAtom atom = TimexAtom::kYear;

  friend bool operator==(const TimexShape&, const TimexShape&) = default;
};

std::string describe(const TimexShape& shape);

// Purely syntactic match; the named date may still be invalid.
struct TimexMatch {
  std::size_t begin = 0;
  std::size_t end = 0;
  TimexShape shape;
};

// Longest expression starting exactly at pos, which must be a word start.
std::optional<TimexMatch> match_timex_at(std::string_view text, std::size_t pos);

// Leftmost-longest, non-overlapping matches, scanning left to right.
std::vector<TimexMatch> scan_time_expressions(std::string_view text);

struct QuestionTimeSpan {
  std::string surface;
  std::size_t char_start = 0;
  std::size_t char_end = 0;
  TimeInterval interval;

  friend bool operator==(const QuestionTimeSpan&, const QuestionTimeSpan&) = default;
};

// Longest match anywhere in the question (leftmost on ties). Throws
// MalformedDate if the chosen match names an impossible date.
std::optional<QuestionTimeSpan> extract_question_time(std::string_view question);

// Normalizes a complete time expression (surrounding whitespace ignored).
// The anchor is reserved for relative expressions, which the grammar does
// not yet cover.
// Throws UnsupportedPattern or MalformedDate.
TimeInterval normalize_timex(std::string_view surface,
                             std::optional<CalendarDate> anchor = std::nullopt);

// TIMEX3-style value strings: "YYYY", "YYYY-MM", "YYYY-MM-DD". Anything
// else (PRESENT_REF, durations, ...) yields nullopt; an impossible date
// also yields nullopt.
std::optional<TimeInterval> parse_timex_value(std::string_view value);

}  // namespace tempograph
