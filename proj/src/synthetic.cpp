#include "tempograph/synthetic.hpp"

#include <array>
#include <cstdio>
#include <fstream>
#include <random>
#include <string>
#include <string_view>

#include "tempograph/chronon.hpp"

namespace tempograph {

namespace {

constexpr std::array<std::string_view, 10> kPeople = {
    "George Washington", "Knox Cunningham", "Zoë Baird",   "José Martí",     "Ada Lovelace",
    "Henrik Ibsen",      "Marie Curie",     "Łukasz Nowak", "Grace Hopper", "Nguyễn Văn An"};
constexpr std::array<std::string_view, 8> kOrgs = {
    "the Continental Army", "the Royal Society", "Ålesund FK",      "the senate",
    "the city council",     "the university",    "São Paulo Press", "the navy"};
constexpr std::array<std::string_view, 8> kVerbs = {"joined", "left",  "founded", "created",
                                                    "led",    "moved", "signed",  "visited"};
constexpr std::array<std::string_view, 12> kMonths = {
    "January", "February", "March", "April", "May", "June", "July", "August", "September",
    "October", "November", "December"};
constexpr std::array<std::string_view, 5> kVague = {"the spring", "that decade", "last winter",
                                                    "the following summer", "a year later"};
constexpr std::array<std::string_view, 4> kRelations = {"BEFORE", "AFTER", "OVERLAP", "SIMULTANEOUS"};

class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  // Portable: avoids std::uniform_int_distribution, whose output differs
  // between standard libraries.
  std::size_t below(std::size_t n) { return static_cast<std::size_t>(rng_() % n); }
  bool chance(unsigned percent) { return below(100) < percent; }
  int year() { return 1700 + static_cast<int>(below(320)); }
  template <typename C>
  std::string_view pick(const C& c) { return c[below(c.size())]; }

 private:
  std::mt19937_64 rng_;
};

struct Timex {
  std::string surface;
  std::string value;
  bool full_date = false;
};

std::string pad2(unsigned v) {
  char buf[12];
  std::snprintf(buf, sizeof buf, "%02u", v);
  return buf;
}

Timex random_timex(Gen& g) {
  const int y = g.year();
  const std::string ys = std::to_string(y);
  switch (g.below(7)) {
    case 0: return {ys, ys};
    case 1: return {"the year " + ys, ys};
    case 2: {
      const unsigned m = static_cast<unsigned>(g.below(12)) + 1;
      const std::string_view name = kMonths[m - 1];
      const std::string surface =
          g.chance(50) ? std::string(name) + " " + ys : std::string(name.substr(0, 3)) + " " + ys;
      return {surface, ys + "-" + pad2(m)};
    }
    case 3: {
      const unsigned m = static_cast<unsigned>(g.below(12)) + 1;
      const unsigned d = static_cast<unsigned>(g.below(days_in_month(y, m))) + 1;
      return {std::string(kMonths[m - 1]) + " " + std::to_string(d) + ", " + ys,
              ys + "-" + pad2(m) + "-" + pad2(d), true};
    }
    case 4: {
      const int y2 = y + 1 + static_cast<int>(g.below(15));
      return {"from " + ys + " to " + std::to_string(y2), ""};
    }
    case 5: return {ys, ""};  // value-less: falls back to the surface
    default: return {std::string(g.pick(kVague)), ""};  // unnormalizable
  }
}

std::string question_time(Gen& g) {
  const int y = g.year();
  const std::string ys = std::to_string(y);
  switch (g.below(9)) {
    case 0: return "in " + ys;
    case 1: return "before " + std::string(kMonths[g.below(12)].substr(0, 3)) + " " + ys;
    case 2: return "after " + ys;
    case 3: return "since " + std::string(g.pick(kMonths)) + " " + ys;
    case 4: return "as of " + ys;
    case 5: return "from " + ys + " to " + std::to_string(y + 1 + static_cast<int>(g.below(10)));
    case 6: return "between " + ys + " - " + std::to_string(y + 1 + static_cast<int>(g.below(10)));
    case 7: return "between " + ys + " and " + std::to_string(y + 1 + static_cast<int>(g.below(10)));
    default: return "in the year " + ys;
  }
}

class DocBuilder {
 public:
  std::size_t event(std::string_view surface) {
    doc.events.push_back({doc.text.size(), doc.text.size() + surface.size(), std::string(surface)});
    doc.text += surface;
    return doc.events.size() - 1;
  }
  std::size_t timex(const Timex& t) {
    doc.timexes.push_back({doc.text.size(), doc.text.size() + t.surface.size(), t.surface, t.value});
    doc.text += t.surface;
    return doc.timexes.size() - 1;
  }
  void plain(std::string_view s) { doc.text += s; }

  AnnotatedDocument doc;
};

AnnotationRef ev(std::size_t i) { return {AnnotationRef::Kind::kEvent, i}; }
AnnotationRef tx(std::size_t i) { return {AnnotationRef::Kind::kTimex, i}; }

DatasetExample make_example(Gen& g, std::size_t index, const SyntheticOptions& options) {
  char id[32];
  std::snprintf(id, sizeof id, "syn-%05zu", index);
  DatasetExample ex;
  ex.id = id;
  const std::string_view person = g.pick(kPeople);

  const unsigned kind = static_cast<unsigned>(g.below(100));
  if (kind < 10) {
    ex.question = "Which team did " + std::string(person) + " play for?";
  } else if (kind < 12) {
    ex.question = "Where did " + std::string(person) + " live on Feb 30, " + std::to_string(g.year()) + "?";
  } else {
    ex.question = "Which position did " + std::string(person) + " hold " + question_time(g) + "?";
  }

  DocBuilder b;
  const std::size_t passages = 1 + g.below(options.max_passages);
  std::string last_org;
  for (std::size_t p = 0; p < passages; ++p) {
    if (p > 0) b.plain("\n");
    const std::size_t sentences = 1 + g.below(options.max_sentences);
    for (std::size_t s = 0; s < sentences; ++s) {
      if (s > 0) b.plain(" ");
      const Timex t = random_timex(g);
      last_org = std::string(g.pick(kOrgs));
      b.plain(std::string(g.pick(kPeople)) + " ");
      const std::size_t e1 = b.event(g.pick(kVerbs));
      b.plain(" " + last_org + (t.full_date ? " on " : t.surface.starts_with("from") ? " " : " in "));
      const std::size_t t1 = b.timex(t);
      if (g.chance(85)) b.doc.tlinks.push_back({ev(e1), tx(t1), "INCLUDED_BY"});
      if (g.chance(40)) {
        b.plain(" and later ");
        const std::size_t e2 = b.event(g.pick(kVerbs));
        b.plain(" " + std::string(g.pick(kOrgs)));
        b.doc.tlinks.push_back({ev(e1), ev(e2), "BEFORE"});
        if (g.chance(30) && e2 > 1) {
          b.doc.tlinks.push_back({ev(e2), ev(g.below(e2 - 1)), std::string(g.pick(kRelations))});
        }
      }
      b.plain(".");
    }
  }
  b.doc.id = ex.id;
  ex.context = b.doc.text;
  ex.annotation = std::move(b.doc);
  if (g.chance(75)) ex.answers.push_back(last_org);
  return ex;
}

}  // namespace

std::vector<DatasetExample> synthetic_corpus(const SyntheticOptions& options) {
  Gen g(options.seed);
  std::vector<DatasetExample> out;
  out.reserve(options.documents);
  for (std::size_t i = 0; i < options.documents; ++i) out.push_back(make_example(g, i, options));
  return out;
}

void write_corpus(const std::vector<DatasetExample>& corpus, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir / "annotations");
  std::ofstream data(dir / "dataset.jsonl", std::ios::binary);
  for (const DatasetExample& ex : corpus) {
    DatasetExample bare = ex;
    bare.annotation.reset();
    data << to_json(bare).dump() << '\n';
    if (ex.annotation) {
      std::ofstream(dir / "annotations" / (ex.id + ".json"), std::ios::binary)
          << to_json(*ex.annotation).dump(2) << '\n';
    }
  }
}

}  // namespace tempograph
