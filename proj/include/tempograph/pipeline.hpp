#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "tempograph/annotation.hpp"
#include "tempograph/fusion.hpp"
#include "tempograph/temporal_graph.hpp"

namespace tempograph {

// File-level dataset problem: unreadable file, bad JSON, missing field,
// duplicate id. Fatal for a run.
class DatasetError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct DatasetExample {
  std::string id;
  std::string question;
  // Passages are joined with '\n' in file order.
  std::string context;
  std::vector<std::string> answers;  // empty = unanswerable
  std::optional<AnnotatedDocument> annotation;
  std::optional<std::string> annotation_ref;
};

DatasetExample example_from_json(const nlohmann::json& j);
nlohmann::json to_json(const DatasetExample& ex);

// One JSON object per line; blank lines ignored. Throws DatasetError.
std::vector<DatasetExample> load_dataset(const std::filesystem::path& path);

enum class FusionMode { kErr, kGnn, kPrompt };

std::string_view mode_name(FusionMode mode);
std::optional<FusionMode> parse_mode(std::string_view text);

struct RunConfig {
  GraphVariant variant = GraphVariant::kDT2QT;
  FusionMode mode = FusionMode::kErr;
  bool merge3 = false;
  bool pad_delimiters = false;
  // Without a directory every example goes through stub_annotate.
  std::optional<std::filesystem::path> annotations_dir;
  std::filesystem::path out_dir;
  std::size_t workers = 1;
  std::optional<std::size_t> context_char_budget;
  // Prompt mode.
  std::optional<std::filesystem::path> shots_path;
  std::string instruction{kDefaultInstruction};
  bool prompt_fused = true;
};

enum class ExampleOutcome { kProcessed, kPassthrough, kSkipped };

// Everything one example contributes to the outputs and the report.
struct ExampleResult {
  std::string id;
  ExampleOutcome outcome = ExampleOutcome::kSkipped;
  std::string error;
  nlohmann::json record;  // output line (absent when skipped)
  std::optional<GraphStats> full_stats;
  std::optional<GraphStats> variant_stats;
  BuildDiagnostics diagnostics;
  std::size_t events = 0;
  std::size_t undetermined_events = 0;
  std::size_t path_conflicts = 0;
  std::size_t tokens_before = 0;
  std::size_t tokens_after = 0;
};

// Pure per-example pipeline: extract question time, build the graph,
// select the variant, infer, fuse. Per-example failures are captured in
// the result, never thrown.
ExampleResult process_example(const DatasetExample& example, const RunConfig& config,
                              const std::vector<PromptShot>& shots = {});

struct RunReport {
  std::size_t total = 0;
  std::size_t processed = 0;
  std::size_t skipped = 0;
  std::size_t passthrough = 0;
  StatsAccumulator full_graphs;
  StatsAccumulator variant_graphs;
  std::size_t unnormalizable_timexes = 0;
  std::size_t dropped_events = 0;
  std::size_t skipped_tlinks = 0;
  std::size_t events = 0;
  std::size_t undetermined_events = 0;
  std::size_t path_conflicts = 0;
  std::size_t length_examples = 0;
  double tokens_before_sum = 0.0;
  double tokens_after_sum = 0.0;
  std::vector<std::pair<std::string, std::string>> errors;  // (id, message), sorted by id

  void add(const ExampleResult& r);
  nlohmann::json to_json(const RunConfig& config) const;
};

// Results sorted by id. Uses config.workers threads.
std::vector<ExampleResult> process_all(const std::vector<DatasetExample>& examples,
                                       const RunConfig& config);
std::vector<ExampleResult> process_all(const std::vector<DatasetExample>& examples,
                                       const RunConfig& config, const std::vector<PromptShot>& shots);

// Loads the dataset, processes it, writes <mode file>.jsonl, graphs.jsonl
// and report.json into config.out_dir. Throws DatasetError on file-level
// problems.
RunReport run(const RunConfig& config, const std::filesystem::path& dataset);

std::string output_file_name(FusionMode mode);

// Output line for graphs.jsonl.
nlohmann::json graph_record(const ExampleResult& r);

// Recomputes the report aggregates from graphs.jsonl lines.
nlohmann::json recount_report(const std::filesystem::path& out_dir);

struct ValidationFinding {
  std::string file;
  std::string document_id;
  AnnotationFinding finding;
};

struct ValidationReport {
  std::size_t files = 0;
  std::size_t documents = 0;
  std::vector<ValidationFinding> findings;
};

// Checks every tg-annot/1 document in a file or a directory of *.json
// files. Unparseable documents become "schema" findings.
ValidationReport validate_annotations(const std::filesystem::path& path);

}  // namespace tempograph
