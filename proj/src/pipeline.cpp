#include "tempograph/pipeline.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include <omp.h>

#include "tempograph/chronon.hpp"
#include "tempograph/errors.hpp"
#include "tempograph/inference.hpp"
#include "tempograph/log.hpp"

namespace tempograph {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string dump_line(const json& j) {
  return j.dump(-1, ' ', false, json::error_handler_t::replace);
}

json read_json_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return json::parse(in);
}

void write_lines(const fs::path& path, const std::vector<std::string>& lines) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  for (const std::string& line : lines) out << line << '\n';
}

}  // namespace

DatasetExample example_from_json(const json& j) {
  if (!j.is_object()) throw DatasetError("example must be a JSON object");
  DatasetExample ex;
  try {
    ex.id = j.at("id").get<std::string>();
    ex.question = j.at("question").get<std::string>();
    const json& ctx = j.at("context");
    if (ctx.is_array()) {
      for (std::size_t i = 0; i < ctx.size(); ++i) {
        if (i > 0) ex.context += '\n';
        ex.context += ctx[i].get<std::string>();
      }
    } else {
      ex.context = ctx.get<std::string>();
    }
    if (j.contains("answers")) ex.answers = j.at("answers").get<std::vector<std::string>>();
    if (j.contains("annotation_ref")) ex.annotation_ref = j.at("annotation_ref").get<std::string>();
  } catch (const json::exception& e) {
    throw DatasetError(e.what());
  }
  if (j.contains("annotation")) {
    try {
      ex.annotation = annotation_from_json(j.at("annotation"));
    } catch (const BadAnnotation& e) {
      throw DatasetError(std::string("inline annotation: ") + e.what());
    }
  }
  return ex;
}

json to_json(const DatasetExample& ex) {
  json j = {{"id", ex.id}, {"question", ex.question}, {"context", ex.context}, {"answers", ex.answers}};
  if (ex.annotation) j["annotation"] = to_json(*ex.annotation);
  if (ex.annotation_ref) j["annotation_ref"] = *ex.annotation_ref;
  return j;
}

std::vector<DatasetExample> load_dataset(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw DatasetError("cannot open dataset " + path.string());
  std::vector<DatasetExample> out;
  std::set<std::string> ids;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      out.push_back(example_from_json(json::parse(line)));
    } catch (const json::exception& e) {
      throw DatasetError(path.string() + ":" + std::to_string(line_no) + ": " + e.what());
    } catch (const DatasetError& e) {
      throw DatasetError(path.string() + ":" + std::to_string(line_no) + ": " + e.what());
    }
    if (!ids.insert(out.back().id).second) {
      throw DatasetError(path.string() + ":" + std::to_string(line_no) + ": duplicate id \"" +
                         out.back().id + "\"");
    }
  }
  return out;
}

std::string_view mode_name(FusionMode mode) {
  switch (mode) {
    case FusionMode::kErr: return "err";
    case FusionMode::kGnn: return "gnn";
    case FusionMode::kPrompt: return "prompt";
  }
  return "err";
}

std::optional<FusionMode> parse_mode(std::string_view text) {
  for (FusionMode m : {FusionMode::kErr, FusionMode::kGnn, FusionMode::kPrompt}) {
    if (text == mode_name(m)) return m;
  }
  return std::nullopt;
}

std::string output_file_name(FusionMode mode) {
  switch (mode) {
    case FusionMode::kErr: return "fused.jsonl";
    case FusionMode::kGnn: return "gnn.jsonl";
    case FusionMode::kPrompt: return "prompts.jsonl";
  }
  return "fused.jsonl";
}

namespace {

AnnotatedDocument resolve_annotation(const DatasetExample& ex, const RunConfig& config) {
  if (ex.annotation) return *ex.annotation;
  if (!config.annotations_dir) return stub_annotate(ex.id, ex.context);
  const fs::path path = ex.annotation_ref ? *config.annotations_dir / *ex.annotation_ref
                                          : *config.annotations_dir / (ex.id + ".json");
  if (!fs::exists(path)) throw BadAnnotation("no annotation file " + path.string());
  json j;
  try {
    j = read_json_file(path);
  } catch (const json::exception& e) {
    throw BadAnnotation(path.string() + ": " + e.what());
  }
  return annotation_from_json(j);
}

json marker_spans_json(const std::vector<MarkerSpan>& spans) {
  json out = json::array();
  for (const MarkerSpan& s : spans) out.push_back({{"label", s.label}, {"start", s.start}, {"end", s.end}});
  return out;
}

json passthrough_record(const DatasetExample& ex, const RunConfig& config,
                        const std::string& context, const std::vector<PromptShot>& shots) {
  const std::string unfused = unfused_serialization(ex.question, context);
  switch (config.mode) {
    case FusionMode::kErr:
      return {{"id", ex.id}, {"text", unfused}, {"marker_spans", json::array()}, {"fused", false}};
    case FusionMode::kGnn:
      return {{"schema", kGnnSchema},
              {"id", ex.id},
              {"marked_text", unfused},
              {"relation_vocabulary", json::array()},
              {"nodes", json::array()},
              {"edges", json::array()}};
    case FusionMode::kPrompt:
      return {{"id", ex.id},
              {"prompt", build_icl_prompt(config.instruction, shots, {context, ex.question},
                                          config.prompt_fused)},
              {"answers", ex.answers},
              {"fused", false}};
  }
  return {};
}

ExampleResult skipped(const std::string& id, std::string error) {
  ExampleResult r;
  r.id = id;
  r.error = std::move(error);
  return r;
}

}  // namespace

ExampleResult process_example(const DatasetExample& ex, const RunConfig& config,
                              const std::vector<PromptShot>& shots) {
  ExampleResult r;
  r.id = ex.id;
  try {
    const auto qspan = extract_question_time(ex.question);
    if (!qspan) {
      std::string context = ex.context;
      if (config.context_char_budget) {
        context = truncate_document(AnnotatedDocument{ex.id, context, {}, {}, {}},
                                    *config.context_char_budget)
                      .text;
      }
      r.outcome = ExampleOutcome::kPassthrough;
      r.record = passthrough_record(ex, config, context, shots);
      r.tokens_before = r.tokens_after = count_marker_pieces(unfused_serialization(ex.question, context));
      return r;
    }

    AnnotatedDocument doc = resolve_annotation(ex, config);
    if (doc.text != ex.context) throw BadAnnotation("annotation text differs from the example context");
    if (config.context_char_budget) doc = truncate_document(doc, *config.context_char_budget);
    const std::string& context = doc.text;

    GraphBuild built = build_graph(ex.question, *qspan, doc);
    for (const std::string& w : built.diagnostics.warnings) log(LogLevel::kInfo, ex.id + ": " + w);
    const TemporalGraph& full = built.graph;
    const TemporalGraph sub = select_subgraph(full, config.variant);

    const RelationMap inferred = infer_all(full);
    r.events = inferred.size();
    r.undetermined_events = static_cast<std::size_t>(std::count_if(
        inferred.begin(), inferred.end(),
        [](const auto& kv) { return kv.second == TemporalRelation::kUndetermined; }));
    const auto conflicts = find_path_conflicts(full);
    r.path_conflicts = conflicts.size();
    for (const PathConflict& c : conflicts) {
      log(LogLevel::kDebug, ex.id + ": event " + std::to_string(c.event) +
                                " has shortest paths folding to different relations; using " +
                                std::string(relation_name(c.chosen)));
    }

    const FusedSequence fused =
        err_serialize(ex.question, *qspan, context, full, err_relations(full, config.variant),
                      {config.merge3, config.pad_delimiters});
    const auto [before, after] = length_report(unfused_serialization(ex.question, context), fused);
    r.tokens_before = before;
    r.tokens_after = after;

    switch (config.mode) {
      case FusionMode::kErr:
        r.record = {{"id", ex.id},
                    {"text", fused.text},
                    {"marker_spans", marker_spans_json(fused.marker_spans)},
                    {"fused", true}};
        break;
      case FusionMode::kGnn:
        r.record = to_json(gnn_export(ex.question, *qspan, context, sub), ex.id);
        break;
      case FusionMode::kPrompt: {
        const PromptTarget target =
            config.prompt_fused
                ? PromptTarget{std::string(fused.context()), std::string(fused.question())}
                : PromptTarget{context, ex.question};
        r.record = {{"id", ex.id},
                    {"prompt", build_icl_prompt(config.instruction, shots, target, config.prompt_fused)},
                    {"answers", ex.answers},
                    {"fused", config.prompt_fused}};
        break;
      }
    }
    r.full_stats = graph_stats(full);
    r.variant_stats = graph_stats(sub);
    r.diagnostics = std::move(built.diagnostics);
    r.diagnostics.warnings.clear();
    r.outcome = ExampleOutcome::kProcessed;
  } catch (const MalformedDate& e) {
    r = skipped(ex.id, std::string("malformed_date: ") + e.what());
  } catch (const BadAnnotation& e) {
    r = skipped(ex.id, std::string("bad_annotation: ") + e.what());
  } catch (const OverlapConflict& e) {
    r = skipped(ex.id, std::string("overlap_conflict: ") + e.what());
  } catch (const std::exception& e) {
    r = skipped(ex.id, std::string("error: ") + e.what());
  }
  if (r.outcome == ExampleOutcome::kSkipped) log(LogLevel::kWarn, ex.id + ": skipped: " + r.error);
  return r;
}

std::vector<ExampleResult> process_all(const std::vector<DatasetExample>& examples,
                                       const RunConfig& config, const std::vector<PromptShot>& shots) {
  std::vector<ExampleResult> results(examples.size());
  const auto n = static_cast<std::ptrdiff_t>(examples.size());
  const int threads = static_cast<int>(std::max<std::size_t>(1, config.workers));
#pragma omp parallel for num_threads(threads) schedule(dynamic)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    results[i] = process_example(examples[i], config, shots);
  }
  std::sort(results.begin(), results.end(),
            [](const ExampleResult& a, const ExampleResult& b) { return a.id < b.id; });
  return results;
}

std::vector<ExampleResult> process_all(const std::vector<DatasetExample>& examples,
                                       const RunConfig& config) {
  return process_all(examples, config, {});
}

void RunReport::add(const ExampleResult& r) {
  ++total;
  switch (r.outcome) {
    case ExampleOutcome::kProcessed: ++processed; break;
    case ExampleOutcome::kPassthrough: ++passthrough; break;
    case ExampleOutcome::kSkipped:
      ++skipped;
      errors.emplace_back(r.id, r.error);
      return;
  }
  if (r.full_stats) full_graphs.add(*r.full_stats);
  if (r.variant_stats) variant_graphs.add(*r.variant_stats);
  unnormalizable_timexes += r.diagnostics.unnormalizable_timexes;
  dropped_events += r.diagnostics.dropped_events;
  skipped_tlinks += r.diagnostics.skipped_tlinks;
  events += r.events;
  undetermined_events += r.undetermined_events;
  path_conflicts += r.path_conflicts;
  ++length_examples;
  tokens_before_sum += static_cast<double>(r.tokens_before);
  tokens_after_sum += static_cast<double>(r.tokens_after);
}

namespace {

json length_json(std::size_t examples, double before_sum, double after_sum) {
  const double n = examples == 0 ? 1.0 : static_cast<double>(examples);
  return {{"examples", examples},
          {"mean_tokens_before", examples == 0 ? 0.0 : before_sum / n},
          {"mean_tokens_after", examples == 0 ? 0.0 : after_sum / n}};
}

}  // namespace

json RunReport::to_json(const RunConfig& config) const {
  json errs = json::array();
  for (const auto& [id, message] : errors) errs.push_back({{"id", id}, {"error", message}});
  json budget = config.context_char_budget ? json(*config.context_char_budget) : json(nullptr);
  return {
      {"schema", "tg-report/1"},
      {"config",
       {{"variant", variant_name(config.variant)},
        {"mode", mode_name(config.mode)},
        {"merge3", config.merge3},
        {"pad_delimiters", config.pad_delimiters},
        {"context_char_budget", budget},
        {"stub_annotator", !config.annotations_dir.has_value()}}},
      {"counts",
       {{"total", total}, {"processed", processed}, {"skipped", skipped}, {"unfused_passthrough", passthrough}}},
      {"graph", tempograph::to_json(full_graphs.mean())},
      {"variant_graph", tempograph::to_json(variant_graphs.mean())},
      {"diagnostics",
       {{"unnormalizable_timexes", unnormalizable_timexes},
        {"dropped_events", dropped_events},
        {"skipped_tlinks", skipped_tlinks},
        {"events", events},
        {"undetermined_events", undetermined_events},
        {"path_conflicts", path_conflicts}}},
      {"length", length_json(length_examples, tokens_before_sum, tokens_after_sum)},
      {"errors", errs},
  };
}

json graph_record(const ExampleResult& r) {
  static constexpr const char* kOutcome[] = {"processed", "passthrough", "skipped"};
  json j = {{"id", r.id},
            {"outcome", kOutcome[static_cast<int>(r.outcome)]},
            {"full", r.full_stats ? to_json(*r.full_stats) : json(nullptr)},
            {"variant", r.variant_stats ? to_json(*r.variant_stats) : json(nullptr)},
            {"unnormalizable_timexes", r.diagnostics.unnormalizable_timexes},
            {"dropped_events", r.diagnostics.dropped_events},
            {"skipped_tlinks", r.diagnostics.skipped_tlinks},
            {"events", r.events},
            {"undetermined_events", r.undetermined_events},
            {"path_conflicts", r.path_conflicts},
            {"tokens_before", r.tokens_before},
            {"tokens_after", r.tokens_after}};
  if (!r.error.empty()) j["error"] = r.error;
  return j;
}

namespace {

std::vector<PromptShot> prepare_shots(const RunConfig& config) {
  std::vector<PromptShot> shots;
  if (!config.shots_path) return shots;
  RunConfig shot_config = config;
  shot_config.mode = FusionMode::kErr;
  for (const DatasetExample& ex : load_dataset(*config.shots_path)) {
    PromptShot shot{ex.context, ex.question, ex.answers};
    if (config.prompt_fused) {
      const ExampleResult r = process_example(ex, shot_config);
      if (r.outcome == ExampleOutcome::kProcessed) {
        // Re-split the fused "question: ... context: ..." line.
        const std::string text = r.record.at("text").get<std::string>();
        const std::size_t sep = text.find(" context: ");
        const std::string_view head = "question: ";
        shot.question = text.substr(head.size(), sep - head.size());
        shot.context = text.substr(sep + std::string_view(" context: ").size());
      }
    }
    shots.push_back(std::move(shot));
  }
  return shots;
}

}  // namespace

RunReport run(const RunConfig& config, const fs::path& dataset) {
  const std::vector<DatasetExample> examples = load_dataset(dataset);
  const std::vector<PromptShot> shots =
      config.mode == FusionMode::kPrompt ? prepare_shots(config) : std::vector<PromptShot>{};
  log(LogLevel::kInfo, "processing " + std::to_string(examples.size()) + " examples with " +
                           std::to_string(config.workers) + " worker(s)");
  const std::vector<ExampleResult> results = process_all(examples, config, shots);

  RunReport report;
  std::vector<std::string> records;
  std::vector<std::string> graphs;
  for (const ExampleResult& r : results) {
    report.add(r);
    if (r.outcome != ExampleOutcome::kSkipped) records.push_back(dump_line(r.record));
    graphs.push_back(dump_line(graph_record(r)));
  }

  fs::create_directories(config.out_dir);
  write_lines(config.out_dir / output_file_name(config.mode), records);
  write_lines(config.out_dir / "graphs.jsonl", graphs);
  std::ofstream(config.out_dir / "report.json", std::ios::binary)
      << report.to_json(config).dump(2, ' ', false, json::error_handler_t::replace) << '\n';
  return report;
}

json recount_report(const fs::path& out_dir) {
  std::ifstream in(out_dir / "graphs.jsonl");
  if (!in) throw std::runtime_error("cannot open " + (out_dir / "graphs.jsonl").string());
  std::size_t total = 0, processed = 0, skipped = 0, passthrough = 0, length_examples = 0;
  std::size_t full_n = 0, variant_n = 0;
  double full[4] = {0, 0, 0, 0};
  double variant[4] = {0, 0, 0, 0};
  double before = 0, after = 0;
  json diag = {{"unnormalizable_timexes", 0}, {"dropped_events", 0}, {"skipped_tlinks", 0},
               {"events", 0},                 {"undetermined_events", 0}, {"path_conflicts", 0}};
  auto accumulate = [](const json& s, double* sums) {
    sums[0] += s.at("nodes").get<double>();
    sums[1] += s.at("edges").get<double>();
    sums[2] += s.at("mean_in_degree").get<double>();
    sums[3] += s.at("mean_out_degree").get<double>();
  };
  auto means = [](std::size_t n, const double* sums) {
    const double d = n == 0 ? 1.0 : static_cast<double>(n);
    return json{{"graphs", n},
                {"mean_nodes", n == 0 ? 0.0 : sums[0] / d},
                {"mean_edges", n == 0 ? 0.0 : sums[1] / d},
                {"mean_in_degree", n == 0 ? 0.0 : sums[2] / d},
                {"mean_out_degree", n == 0 ? 0.0 : sums[3] / d}};
  };
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const json g = json::parse(line);
    ++total;
    const std::string outcome = g.at("outcome");
    if (outcome == "skipped") {
      ++skipped;
      continue;
    }
    (outcome == "processed" ? processed : passthrough) += 1;
    if (!g.at("full").is_null()) {
      ++full_n;
      accumulate(g.at("full"), full);
    }
    if (!g.at("variant").is_null()) {
      ++variant_n;
      accumulate(g.at("variant"), variant);
    }
    for (auto& [key, value] : diag.items()) value = value.get<std::size_t>() + g.at(key).get<std::size_t>();
    ++length_examples;
    before += g.at("tokens_before").get<double>();
    after += g.at("tokens_after").get<double>();
  }
  return {{"counts",
           {{"total", total}, {"processed", processed}, {"skipped", skipped}, {"unfused_passthrough", passthrough}}},
          {"graph", means(full_n, full)},
          {"variant_graph", means(variant_n, variant)},
          {"diagnostics", diag},
          {"length", length_json(length_examples, before, after)}};
}

ValidationReport validate_annotations(const fs::path& path) {
  ValidationReport report;
  std::vector<fs::path> files;
  if (fs::is_directory(path)) {
    for (const auto& entry : fs::directory_iterator(path)) {
      if (entry.is_regular_file() && entry.path().extension() == ".json") files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
  } else if (fs::exists(path)) {
    files.push_back(path);
  } else {
    throw std::runtime_error("no such file or directory: " + path.string());
  }

  for (const fs::path& file : files) {
    ++report.files;
    const std::string name = file.filename().string();
    std::vector<json> docs;
    try {
      if (file.extension() == ".jsonl") {
        std::ifstream in(file);
        std::string line;
        while (std::getline(in, line)) {
          if (!line.empty()) docs.push_back(json::parse(line));
        }
      } else {
        json j = read_json_file(file);
        if (j.is_array()) {
          for (auto& d : j) docs.push_back(std::move(d));
        } else {
          docs.push_back(std::move(j));
        }
      }
    } catch (const std::exception& e) {
      report.findings.push_back({name, "", {"schema", e.what(), {}, {}}});
      continue;
    }
    for (const json& j : docs) {
      ++report.documents;
      const std::string id = j.is_object() ? j.value("id", std::string()) : std::string();
      try {
        for (AnnotationFinding& f : check_annotations(annotation_from_json(j))) {
          report.findings.push_back({name, id, std::move(f)});
        }
      } catch (const BadAnnotation& e) {
        report.findings.push_back({name, id, {"schema", e.what(), {}, {}}});
      }
    }
  }
  return report;
}

}  // namespace tempograph
