#include "tempograph/chronon.hpp"

#include <array>
#include <cctype>
#include <charconv>
#include <chrono>
#include <cstdio>

#include "tempograph/errors.hpp"

namespace tempograph {

namespace chr = std::chrono;

bool is_leap_year(int year) { return chr::year{year}.is_leap(); }

unsigned days_in_month(int year, unsigned month) {
  if (month < 1 || month > 12) return 0;
  return static_cast<unsigned>(
      chr::year_month_day_last{chr::year{year}, chr::month_day_last{chr::month{month}}}.day());
}

bool is_valid(const CalendarDate& d) {
  return chr::year_month_day{chr::year{d.year}, chr::month{d.month}, chr::day{d.day}}.ok();
}

std::int64_t day_number(const CalendarDate& d) {
  const chr::sys_days days{chr::year_month_day{chr::year{d.year}, chr::month{d.month}, chr::day{d.day}}};
  return days.time_since_epoch().count();
}

CalendarDate from_day_number(std::int64_t n) {
  const chr::year_month_day ymd{chr::sys_days{chr::days{n}}};
  return {static_cast<int>(ymd.year()), static_cast<unsigned>(ymd.month()),
          static_cast<unsigned>(ymd.day())};
}

CalendarDate next_day(const CalendarDate& d) { return from_day_number(day_number(d) + 1); }
CalendarDate previous_day(const CalendarDate& d) { return from_day_number(day_number(d) - 1); }

std::string to_string(const CalendarDate& d) {
  std::array<char, 32> buf{};
  const int y = d.year < 0 ? -d.year : d.year;
  std::snprintf(buf.data(), buf.size(), "%s%04d-%02u-%02u", d.year < 0 ? "-" : "", y, d.month, d.day);
  return buf.data();
}

TimeInterval make_interval(std::optional<CalendarDate> start, std::optional<CalendarDate> end) {
  if (start && !is_valid(*start)) throw MalformedDate("invalid date " + to_string(*start));
  if (end && !is_valid(*end)) throw MalformedDate("invalid date " + to_string(*end));
  if (start && end && *end < *start) {
    throw MalformedDate("interval end " + to_string(*end) + " precedes start " + to_string(*start));
  }
  return {start, end};
}

TimeInterval single_day(const CalendarDate& d) { return make_interval(d, d); }

TimeInterval whole_year(int year) {
  return {CalendarDate{year, 1, 1}, CalendarDate{year, 12, 31}};
}

TimeInterval whole_month(int year, unsigned month) {
  if (month < 1 || month > 12) throw MalformedDate("month out of range");
  return {CalendarDate{year, month, 1}, CalendarDate{year, month, days_in_month(year, month)}};
}

bool contains(const TimeInterval& iv, const CalendarDate& d) {
  return (!iv.start || *iv.start <= d) && (!iv.end || d <= *iv.end);
}

std::string to_string(const TimeInterval& iv) {
  std::string out = iv.start ? "[" + to_string(*iv.start) : "(-inf";
  out += ", ";
  out += iv.end ? to_string(*iv.end) + "]" : "+inf)";
  return out;
}

std::string describe(const TimexShape& shape) {
  static constexpr std::array<std::string_view, 6> kPrefix = {"", "before ", "after ",
                                                              "since ", "as of ", "in "};
  static constexpr std::array<std::string_view, 5> kCore = {"", "from-to ", "between-dash ",
                                                            "between-and ", "dash-range "};
  static constexpr std::array<std::string_view, 4> kAtom = {"year", "the-year", "month-year",
                                                            "full-date"};
  std::string out;
  out += kPrefix[static_cast<std::size_t>(shape.prefix)];
  out += kCore[static_cast<std::size_t>(shape.core)];
  out += kAtom[static_cast<std::size_t>(shape.atom)];
  return out;
}

namespace {

bool is_alnum(char c) { return std::isalnum(static_cast<unsigned char>(c)) != 0; }
bool is_alpha(char c) { return std::isalpha(static_cast<unsigned char>(c)) != 0; }
bool is_digit(char c) { return c >= '0' && c <= '9'; }
bool is_space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r'; }
char lower(char c) { return static_cast<char>(std::tolower(static_cast<unsigned char>(c))); }

constexpr std::array<std::string_view, 12> kMonthNames = {
    "january", "february", "march",     "april",   "may",      "june",
    "july",    "august",   "september", "october", "november", "december"};

struct AtomSyntax {
  TimexAtom kind = TimexAtom::kYear;
  int year = 0;
  unsigned month = 0;
  unsigned day = 0;
};

struct CoreSyntax {
  TimexCore kind = TimexCore::kAtom;
  AtomSyntax first;
  AtomSyntax second;
};

struct ExprSyntax {
  TimexPrefix prefix = TimexPrefix::kNone;
  CoreSyntax core;
  std::size_t end = 0;
};

template <typename T>
struct Parsed {
  T value;
  std::size_t end;
};

// Recursive-descent recognizer. Every token parser requires a word boundary
// after the token, so any successful parse ends on a boundary.
class Grammar {
 public:
  explicit Grammar(std::string_view text) : text_(text) {}

  std::optional<Parsed<ExprSyntax>> expr(std::size_t pos) const {
    std::optional<Parsed<ExprSyntax>> best;
    auto consider = [&](TimexPrefix prefix, std::optional<Parsed<CoreSyntax>> core) {
      if (core && (!best || core->end > best->end)) {
        best = Parsed<ExprSyntax>{ExprSyntax{prefix, core->value, core->end}, core->end};
      }
    };
    consider(TimexPrefix::kNone, this->core(pos));
    static constexpr std::array<std::pair<std::string_view, TimexPrefix>, 5> kPrefixes = {{
        {"before", TimexPrefix::kBefore},
        {"after", TimexPrefix::kAfter},
        {"since", TimexPrefix::kSince},
        {"as of", TimexPrefix::kAsOf},
        {"in", TimexPrefix::kIn},
    }};
    for (const auto& [word, prefix] : kPrefixes) {
      if (auto p = keyword(pos, word)) {
        if (auto q = spaces(*p)) consider(prefix, this->core(*q));
      }
    }
    return best;
  }

 private:
  std::optional<Parsed<CoreSyntax>> core(std::size_t pos) const {
    std::optional<Parsed<CoreSyntax>> best;
    auto consider = [&](std::optional<Parsed<CoreSyntax>> c) {
      if (c && (!best || c->end > best->end)) best = c;
    };
    if (auto a = atom(pos)) {
      consider(Parsed<CoreSyntax>{{TimexCore::kAtom, a->value, {}}, a->end});
      if (auto d = dash(a->end)) {
        if (auto b = atom(*d)) consider(Parsed<CoreSyntax>{{TimexCore::kDashRange, a->value, b->value}, b->end});
      }
    }
    if (auto p = keyword_then_space(pos, "from")) {
      if (auto a = atom(*p)) {
        if (auto s = spaces(a->end)) {
          if (auto t = keyword_then_space(*s, "to")) {
            if (auto b = atom(*t)) consider(Parsed<CoreSyntax>{{TimexCore::kFromTo, a->value, b->value}, b->end});
          }
        }
      }
    }
    if (auto p = keyword_then_space(pos, "between")) {
      if (auto a = atom(*p)) {
        if (auto d = dash(a->end)) {
          if (auto b = atom(*d)) consider(Parsed<CoreSyntax>{{TimexCore::kBetweenDash, a->value, b->value}, b->end});
        }
        if (auto s = spaces(a->end)) {
          if (auto t = keyword_then_space(*s, "and")) {
            if (auto b = atom(*t)) consider(Parsed<CoreSyntax>{{TimexCore::kBetweenAnd, a->value, b->value}, b->end});
          }
        }
      }
    }
    return best;
  }

  std::optional<Parsed<AtomSyntax>> atom(std::size_t pos) const {
    if (auto m = month(pos)) {
      if (auto s = spaces(m->end)) {
        // Month D, Y
        if (auto d = number(*s, 1, 2)) {
          std::size_t p = d->end;
          if (p < text_.size() && text_[p] == ',') ++p;
          if (auto s2 = spaces(p)) {
            if (auto y = number(*s2, 4, 4)) {
              return Parsed<AtomSyntax>{{TimexAtom::kFullDate, y->value, m->value,
                                         static_cast<unsigned>(d->value)},
                                        y->end};
            }
          }
        }
        // Month Y
        if (auto y = number(*s, 4, 4)) {
          return Parsed<AtomSyntax>{{TimexAtom::kMonthYear, y->value, m->value, 0}, y->end};
        }
      }
      return std::nullopt;
    }
    if (auto p = keyword_then_space(pos, "the")) {
      if (auto q = keyword_then_space(*p, "year")) {
        if (auto y = number(*q, 4, 4)) {
          return Parsed<AtomSyntax>{{TimexAtom::kTheYear, y->value, 0, 0}, y->end};
        }
      }
      return std::nullopt;
    }
    if (auto y = number(pos, 4, 4)) {
      return Parsed<AtomSyntax>{{TimexAtom::kYear, y->value, 0, 0}, y->end};
    }
    return std::nullopt;
  }

  std::optional<Parsed<unsigned>> month(std::size_t pos) const {
    if (pos >= text_.size() || !std::isupper(static_cast<unsigned char>(text_[pos]))) {
      return std::nullopt;
    }
    std::size_t end = pos;
    while (end < text_.size() && is_alpha(text_[end])) ++end;
    std::string word;
    for (std::size_t i = pos; i < end; ++i) word += lower(text_[i]);
    for (unsigned m = 0; m < kMonthNames.size(); ++m) {
      const std::string_view full = kMonthNames[m];
      const bool abbrev = word.size() == 3 && full.substr(0, 3) == word;
      if (word == full || abbrev || (m == 8 && word == "sept")) {
        if (word != full && end < text_.size() && text_[end] == '.') ++end;
        return Parsed<unsigned>{m + 1, end};
      }
    }
    return std::nullopt;
  }

  // Exactly min..max digits, not followed by another letter or digit.
  std::optional<Parsed<int>> number(std::size_t pos, std::size_t min_digits,
                                    std::size_t max_digits) const {
    std::size_t end = pos;
    while (end < text_.size() && is_digit(text_[end])) ++end;
    const std::size_t n = end - pos;
    if (n < min_digits || n > max_digits) return std::nullopt;
    if (end < text_.size() && is_alnum(text_[end])) return std::nullopt;
    int value = 0;
    std::from_chars(text_.data() + pos, text_.data() + end, value);
    return Parsed<int>{value, end};
  }

  std::optional<std::size_t> keyword(std::size_t pos, std::string_view word) const {
    std::size_t p = pos;
    for (char c : word) {
      if (c == ' ') {
        auto s = spaces(p);
        if (!s) return std::nullopt;
        p = *s;
        continue;
      }
      if (p >= text_.size() || lower(text_[p]) != c) return std::nullopt;
      ++p;
    }
    if (p < text_.size() && is_alnum(text_[p])) return std::nullopt;
    return p;
  }

  std::optional<std::size_t> keyword_then_space(std::size_t pos, std::string_view word) const {
    auto p = keyword(pos, word);
    return p ? spaces(*p) : std::nullopt;
  }

  // One or more whitespace characters.
  std::optional<std::size_t> spaces(std::size_t pos) const {
    std::size_t p = pos;
    while (p < text_.size() && is_space(text_[p])) ++p;
    if (p == pos) return std::nullopt;
    return p;
  }

  // Optional spaces, '-' or en dash, optional spaces.
  std::optional<std::size_t> dash(std::size_t pos) const {
    std::size_t p = pos;
    while (p < text_.size() && is_space(text_[p])) ++p;
    if (p < text_.size() && text_[p] == '-') {
      ++p;
    } else if (text_.substr(p, 3) == "\xE2\x80\x93") {
      p += 3;
    } else {
      return std::nullopt;
    }
    while (p < text_.size() && is_space(text_[p])) ++p;
    return p;
  }

  std::string_view text_;
};

TimeInterval evaluate(const AtomSyntax& a) {
  switch (a.kind) {
    case TimexAtom::kYear:
    case TimexAtom::kTheYear:
      return whole_year(a.year);
    case TimexAtom::kMonthYear:
      return whole_month(a.year, a.month);
    case TimexAtom::kFullDate: {
      const CalendarDate d{a.year, a.month, a.day};
      if (!is_valid(d)) {
        throw MalformedDate("no such date: " + std::string(kMonthNames[a.month - 1]) + " " +
                            std::to_string(a.day) + ", " + std::to_string(a.year));
      }
      return single_day(d);
    }
  }
  return {};
}

TimeInterval evaluate(const CoreSyntax& c) {
  const TimeInterval first = evaluate(c.first);
  if (c.kind == TimexCore::kAtom) return first;
  const TimeInterval second = evaluate(c.second);
  return make_interval(first.start, second.end);
}

TimeInterval evaluate(const ExprSyntax& e) {
  const TimeInterval x = evaluate(e.core);
  switch (e.prefix) {
    case TimexPrefix::kNone:
    case TimexPrefix::kIn:
    case TimexPrefix::kAsOf:
      return x;
    case TimexPrefix::kBefore:
      return {std::nullopt, previous_day(*x.start)};
    case TimexPrefix::kAfter:
      return {next_day(*x.end), std::nullopt};
    case TimexPrefix::kSince:
      return {x.start, std::nullopt};
  }
  return x;
}

TimexShape shape_of(const ExprSyntax& e) { return {e.prefix, e.core.kind, e.core.first.kind}; }

bool word_start(std::string_view text, std::size_t pos) {
  return pos < text.size() && is_alnum(text[pos]) && (pos == 0 || !is_alnum(text[pos - 1]));
}

}  // namespace

std::optional<TimexMatch> match_timex_at(std::string_view text, std::size_t pos) {
  if (!word_start(text, pos)) return std::nullopt;
  auto parsed = Grammar(text).expr(pos);
  if (!parsed) return std::nullopt;
  return TimexMatch{pos, parsed->end, shape_of(parsed->value)};
}

std::vector<TimexMatch> scan_time_expressions(std::string_view text) {
  std::vector<TimexMatch> out;
  const Grammar grammar(text);
  std::size_t pos = 0;
  while (pos < text.size()) {
    if (word_start(text, pos)) {
      if (auto parsed = grammar.expr(pos)) {
        out.push_back({pos, parsed->end, shape_of(parsed->value)});
        pos = parsed->end;
        continue;
      }
    }
    ++pos;
  }
  return out;
}

std::optional<QuestionTimeSpan> extract_question_time(std::string_view question) {
  const Grammar grammar(question);
  std::optional<Parsed<ExprSyntax>> best;
  std::size_t best_begin = 0;
  for (std::size_t pos = 0; pos < question.size(); ++pos) {
    if (!word_start(question, pos)) continue;
    auto parsed = grammar.expr(pos);
    if (parsed && (!best || parsed->end - pos > best->end - best_begin)) {
      best = parsed;
      best_begin = pos;
    }
  }
  if (!best) return std::nullopt;
  return QuestionTimeSpan{std::string(question.substr(best_begin, best->end - best_begin)),
                          best_begin, best->end, evaluate(best->value)};
}

TimeInterval normalize_timex(std::string_view surface, std::optional<CalendarDate> /*anchor*/) {
  std::size_t b = 0;
  std::size_t e = surface.size();
  while (b < e && is_space(surface[b])) ++b;
  while (e > b && is_space(surface[e - 1])) --e;
  const std::string_view trimmed = surface.substr(b, e - b);
  auto parsed = trimmed.empty() ? std::nullopt : Grammar(trimmed).expr(0);
  if (!parsed || parsed->end != trimmed.size()) {
    throw UnsupportedPattern("unsupported time expression: \"" + std::string(surface) + "\"");
  }
  return evaluate(parsed->value);
}

std::optional<TimeInterval> parse_timex_value(std::string_view value) {
  auto digits = [&](std::size_t pos, std::size_t n) -> std::optional<int> {
    if (pos + n > value.size()) return std::nullopt;
    int v = 0;
    for (std::size_t i = pos; i < pos + n; ++i) {
      if (!is_digit(value[i])) return std::nullopt;
      v = v * 10 + (value[i] - '0');
    }
    return v;
  };
  const auto year = digits(0, 4);
  if (!year) return std::nullopt;
  if (value.size() == 4) return whole_year(*year);
  if (value.size() < 7 || value[4] != '-') return std::nullopt;
  const auto month = digits(5, 2);
  if (!month || *month < 1 || *month > 12) return std::nullopt;
  if (value.size() == 7) return whole_month(*year, static_cast<unsigned>(*month));
  if (value.size() != 10 || value[7] != '-') return std::nullopt;
  const auto day = digits(8, 2);
  if (!day) return std::nullopt;
  const CalendarDate d{*year, static_cast<unsigned>(*month), static_cast<unsigned>(*day)};
  if (!is_valid(d)) return std::nullopt;
  return single_day(d);
}

}  // namespace tempograph
