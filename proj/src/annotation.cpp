#include "tempograph/annotation.hpp"

#include <charconv>

#include "tempograph/chronon.hpp"
#include "tempograph/errors.hpp"
#include "tempograph/relation.hpp"

namespace tempograph {

using nlohmann::json;

std::optional<AnnotationRef> parse_annotation_ref(std::string_view text) {
  if (text.size() < 2) return std::nullopt;
  AnnotationRef ref;
  if (text[0] == 'e') {
    ref.kind = AnnotationRef::Kind::kEvent;
  } else if (text[0] == 't') {
    ref.kind = AnnotationRef::Kind::kTimex;
  } else {
    return std::nullopt;
  }
  const char* first = text.data() + 1;
  const char* last = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(first, last, ref.index);
  if (ec != std::errc() || ptr != last) return std::nullopt;
  return ref;
}

std::string to_string(const AnnotationRef& ref) {
  return (ref.kind == AnnotationRef::Kind::kEvent ? "e" : "t") + std::to_string(ref.index);
}

namespace {

void check_span(const AnnotatedDocument& doc, std::string_view what, std::size_t i,
                std::size_t start, std::size_t end, const std::string& surface,
                std::vector<AnnotationFinding>& out) {
  const std::string name = std::string(what) + " " + std::to_string(i);
  if (start >= end || end > doc.text.size()) {
    out.push_back({"span_out_of_range",
                   name + ": span [" + std::to_string(start) + ", " + std::to_string(end) +
                       ") outside text of length " + std::to_string(doc.text.size()),
                   start, end});
    return;
  }
  if (doc.text.compare(start, end - start, surface) != 0) {
    out.push_back({"surface_mismatch",
                   name + ": text at [" + std::to_string(start) + ", " + std::to_string(end) +
                       ") is \"" + doc.text.substr(start, end - start) + "\", annotation says \"" +
                       surface + "\"",
                   start, end});
  }
}

bool ref_in_range(const AnnotatedDocument& doc, const AnnotationRef& ref) {
  const std::size_t n =
      ref.kind == AnnotationRef::Kind::kEvent ? doc.events.size() : doc.timexes.size();
  return ref.index < n;
}

template <typename T>
T required(const json& j, const char* key) {
  if (!j.contains(key)) throw BadAnnotation(std::string("missing field \"") + key + "\"");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw BadAnnotation(std::string("field \"") + key + "\": " + e.what());
  }
}

AnnotationRef required_ref(const json& j, const char* key) {
  const auto text = required<std::string>(j, key);
  auto ref = parse_annotation_ref(text);
  if (!ref) throw BadAnnotation("malformed annotation reference \"" + text + "\"");
  return *ref;
}

}  // namespace

std::vector<AnnotationFinding> check_annotations(const AnnotatedDocument& doc) {
  std::vector<AnnotationFinding> out;
  for (std::size_t i = 0; i < doc.events.size(); ++i) {
    const auto& e = doc.events[i];
    check_span(doc, "event", i, e.start, e.end, e.surface, out);
  }
  for (std::size_t i = 0; i < doc.timexes.size(); ++i) {
    const auto& t = doc.timexes[i];
    check_span(doc, "timex", i, t.start, t.end, t.surface, out);
  }
  for (std::size_t i = 0; i < doc.tlinks.size(); ++i) {
    const auto& l = doc.tlinks[i];
    const std::string name = "tlink " + std::to_string(i);
    for (const AnnotationRef* ref : {&l.source, &l.target}) {
      if (!ref_in_range(doc, *ref)) {
        out.push_back({"bad_ref", name + ": reference " + to_string(*ref) + " out of range", {}, {}});
      }
    }
    if (l.source == l.target) {
      out.push_back({"self_link", name + ": source and target are both " + to_string(l.source), {}, {}});
    }
    if (!parse_relation(l.relation)) {
      out.push_back({"unknown_relation", name + ": unknown relation label \"" + l.relation + "\"", {}, {}});
    }
  }
  return out;
}

AnnotatedDocument annotation_from_json(const json& j) {
  if (!j.is_object()) throw BadAnnotation("annotation must be a JSON object");
  if (j.contains("schema") && j.at("schema") != kAnnotationSchema) {
    throw BadAnnotation("unsupported annotation schema " + j.at("schema").dump());
  }
  AnnotatedDocument doc;
  doc.id = j.value("id", std::string());
  doc.text = required<std::string>(j, "text");
  for (const auto& e : j.value("events", json::array())) {
    doc.events.push_back({required<std::size_t>(e, "start"), required<std::size_t>(e, "end"),
                          required<std::string>(e, "text")});
  }
  for (const auto& t : j.value("timexes", json::array())) {
    doc.timexes.push_back({required<std::size_t>(t, "start"), required<std::size_t>(t, "end"),
                           required<std::string>(t, "text"), t.value("value", std::string())});
  }
  for (const auto& l : j.value("tlinks", json::array())) {
    doc.tlinks.push_back({required_ref(l, "source"), required_ref(l, "target"),
                          required<std::string>(l, "relation")});
  }
  return doc;
}

json to_json(const AnnotatedDocument& doc) {
  json events = json::array();
  for (const auto& e : doc.events) {
    events.push_back({{"start", e.start}, {"end", e.end}, {"text", e.surface}});
  }
  json timexes = json::array();
  for (const auto& t : doc.timexes) {
    json item = {{"start", t.start}, {"end", t.end}, {"text", t.surface}};
    if (!t.value.empty()) item["value"] = t.value;
    timexes.push_back(std::move(item));
  }
  json tlinks = json::array();
  for (const auto& l : doc.tlinks) {
    tlinks.push_back({{"source", to_string(l.source)},
                      {"target", to_string(l.target)},
                      {"relation", l.relation}});
  }
  return {{"schema", kAnnotationSchema}, {"id", doc.id},         {"text", doc.text},
          {"events", events},            {"timexes", timexes}, {"tlinks", tlinks}};
}

AnnotatedDocument truncate_document(const AnnotatedDocument& doc, std::size_t budget) {
  if (doc.text.size() <= budget) return doc;
  std::size_t cut = budget;
  while (cut > 0 && (static_cast<unsigned char>(doc.text[cut]) & 0xC0) == 0x80) --cut;

  AnnotatedDocument out;
  out.id = doc.id;
  out.text = doc.text.substr(0, cut);
  std::vector<std::optional<std::size_t>> event_map(doc.events.size());
  std::vector<std::optional<std::size_t>> timex_map(doc.timexes.size());
  for (std::size_t i = 0; i < doc.events.size(); ++i) {
    if (doc.events[i].end <= cut) {
      event_map[i] = out.events.size();
      out.events.push_back(doc.events[i]);
    }
  }
  for (std::size_t i = 0; i < doc.timexes.size(); ++i) {
    if (doc.timexes[i].end <= cut) {
      timex_map[i] = out.timexes.size();
      out.timexes.push_back(doc.timexes[i]);
    }
  }
  // Refs that were already out of range stay out of range.
  auto remap = [&](const AnnotationRef& ref) -> std::optional<AnnotationRef> {
    const bool event = ref.kind == AnnotationRef::Kind::kEvent;
    const auto& map = event ? event_map : timex_map;
    if (ref.index >= map.size()) {
      const std::size_t kept = event ? out.events.size() : out.timexes.size();
      return AnnotationRef{ref.kind, kept + (ref.index - map.size())};
    }
    if (!map[ref.index]) return std::nullopt;
    return AnnotationRef{ref.kind, *map[ref.index]};
  };
  for (const auto& l : doc.tlinks) {
    auto src = remap(l.source);
    auto dst = remap(l.target);
    if (src && dst) out.tlinks.push_back({*src, *dst, l.relation});
  }
  return out;
}

AnnotatedDocument stub_annotate(std::string id, std::string text) {
  AnnotatedDocument doc;
  doc.id = std::move(id);
  doc.text = std::move(text);
  for (const TimexMatch& m : scan_time_expressions(doc.text)) {
    doc.timexes.push_back({m.begin, m.end, doc.text.substr(m.begin, m.end - m.begin), {}});
  }
  return doc;
}

}  // namespace tempograph
