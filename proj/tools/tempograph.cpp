// tempograph: batch driver for temporal-graph construction and fusion.
//
//   tempograph run --dataset F [--annotations D] --variant dt2qt --mode err --out DIR
//   tempograph validate --annotations D
//   tempograph stats --out DIR
//   tempograph synth --docs N --seed S --out DIR
//   tempograph table [--window W] [--check FILE]
//
// Exit status: 0 success, 1 fatal error, 2 success with skipped examples
// (run) or with findings (validate).

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "tempograph/interval_algebra.hpp"
#include "tempograph/log.hpp"
#include "tempograph/pipeline.hpp"
#include "tempograph/synthetic.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace tempograph;

namespace {

constexpr int kOk = 0;
constexpr int kFatal = 1;
constexpr int kPartial = 2;

int cmd_run(const RunConfig& config, const fs::path& dataset) {
  const RunReport report = run(config, dataset);
  std::printf("%zu examples: %zu processed, %zu passthrough, %zu skipped -> %s\n", report.total,
              report.processed, report.passthrough, report.skipped, config.out_dir.c_str());
  for (const auto& [id, message] : report.errors) std::fprintf(stderr, "skipped %s: %s\n", id.c_str(), message.c_str());
  return report.skipped > 0 ? kPartial : kOk;
}

int cmd_validate(const fs::path& path) {
  const ValidationReport report = validate_annotations(path);
  for (const ValidationFinding& f : report.findings) {
    std::printf("%s: %s: %s: %s", f.file.c_str(), f.document_id.c_str(), f.finding.code.c_str(),
                f.finding.message.c_str());
    if (f.finding.start && f.finding.end) std::printf(" [%zu, %zu)", *f.finding.start, *f.finding.end);
    std::printf("\n");
  }
  std::printf("%zu file(s), %zu document(s), %zu finding(s)\n", report.files, report.documents,
              report.findings.size());
  return report.findings.empty() ? kOk : kPartial;
}

// Numbers compare within 1e-9 relative; everything else exactly.
bool same(const json& a, const json& b) {
  if (a.is_number() && b.is_number()) {
    const double x = a.get<double>(), y = b.get<double>();
    return std::fabs(x - y) <= 1e-9 * std::max(1.0, std::fabs(x));
  }
  if (a.is_object() && b.is_object()) {
    if (a.size() != b.size()) return false;
    for (auto it = a.begin(); it != a.end(); ++it) {
      if (!b.contains(it.key()) || !same(*it, b.at(it.key()))) return false;
    }
    return true;
  }
  return a == b;
}

int cmd_stats(const fs::path& out_dir) {
  std::ifstream in(out_dir / "report.json");
  if (!in) throw std::runtime_error("no report.json in " + out_dir.string());
  const json report = json::parse(in);
  const json recount = recount_report(out_dir);

  const json& c = report.at("counts");
  std::printf("examples      %6zu (processed %zu, passthrough %zu, skipped %zu)\n",
              c.at("total").get<std::size_t>(), c.at("processed").get<std::size_t>(),
              c.at("unfused_passthrough").get<std::size_t>(), c.at("skipped").get<std::size_t>());
  std::printf("%-12s %8s %8s %8s %8s %8s\n", "graph", "graphs", "nodes", "edges", "in-deg", "out-deg");
  for (const char* key : {"graph", "variant_graph"}) {
    const json& g = report.at(key);
    std::printf("%-12s %8zu %8.2f %8.2f %8.2f %8.2f\n", key, g.at("graphs").get<std::size_t>(),
                g.at("mean_nodes").get<double>(), g.at("mean_edges").get<double>(),
                g.at("mean_in_degree").get<double>(), g.at("mean_out_degree").get<double>());
  }
  const json& len = report.at("length");
  std::printf("length       before %.2f  after %.2f  (%zu examples)\n", len.at("mean_tokens_before").get<double>(),
              len.at("mean_tokens_after").get<double>(), len.at("examples").get<std::size_t>());
  for (const auto& [key, value] : report.at("diagnostics").items()) {
    std::printf("%-24s %zu\n", key.c_str(), value.get<std::size_t>());
  }

  bool ok = true;
  for (const auto& [key, value] : recount.items()) {
    if (!same(value, report.at(key))) {
      std::fprintf(stderr, "recount mismatch in \"%s\":\n  report  %s\n  recount %s\n", key.c_str(),
                   report.at(key).dump().c_str(), value.dump().c_str());
      ok = false;
    }
  }
  std::printf("recount: %s\n", ok ? "matches report" : "MISMATCH");
  return ok ? kOk : kFatal;
}

int cmd_table(int window, const std::string& check) {
  const CompositionTable table = build_composition_table(window);
  const std::string text = format_composition_table(table);
  if (check.empty()) {
    std::cout << text;
    return kOk;
  }
  std::ifstream in(check);
  if (!in) throw std::runtime_error("cannot open " + check);
  std::stringstream golden;
  golden << in.rdbuf();
  if (parse_composition_table(golden.str()).cells != table.cells) {
    std::fprintf(stderr, "generated table differs from %s\n", check.c_str());
    return kFatal;
  }
  std::printf("%s matches the window-%d oracle\n", check.c_str(), window);
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Temporal-graph construction and fusion for time-sensitive QA"};
  app.require_subcommand(1);

  RunConfig config;
  std::string dataset, annotations, out_dir, variant = "dt2qt", mode = "err", shots, instruction;
  std::size_t budget = 0;
  bool unfused_prompt = false;
  auto* run_cmd = app.add_subcommand("run", "Build graphs and write fused outputs");
  run_cmd->add_option("--dataset", dataset, "Dataset JSONL")->required()->check(CLI::ExistingFile);
  run_cmd->add_option("--annotations", annotations, "Directory of tg-annot/1 files (default: stub annotator)")
      ->check(CLI::ExistingDirectory);
  run_cmd->add_option("--variant", variant, "full|dt2qt|dte2qt|alltime")
      ->check(CLI::IsMember({"full", "dt2qt", "dte2qt", "alltime"}));
  run_cmd->add_option("--mode", mode, "err|gnn|prompt")->check(CLI::IsMember({"err", "gnn", "prompt"}));
  run_cmd->add_flag("--merge3", config.merge3, "Collapse labels to before/after/overlap");
  run_cmd->add_flag("--pad", config.pad_delimiters, "Space-pad delimiter contents");
  run_cmd->add_option("--workers", config.workers, "Worker threads")->check(CLI::Range(1, 256));
  run_cmd->add_option("--budget", budget, "Context byte budget (0 = no truncation)");
  run_cmd->add_option("--shots", shots, "Prompt mode: dataset JSONL of demonstration examples")
      ->check(CLI::ExistingFile);
  run_cmd->add_option("--instruction", instruction, "Prompt mode: instruction text");
  run_cmd->add_flag("--unfused-prompt", unfused_prompt, "Prompt mode: use raw question/context");
  run_cmd->add_option("--out", out_dir, "Output directory")->required();

  std::string validate_path;
  auto* validate_cmd = app.add_subcommand("validate", "Check annotation files");
  validate_cmd->add_option("--annotations", validate_path, "File or directory")->required();

  std::string stats_dir;
  auto* stats_cmd = app.add_subcommand("stats", "Summarize a run and recount its report");
  stats_cmd->add_option("--out", stats_dir, "Run output directory")->required()->check(CLI::ExistingDirectory);

  SyntheticOptions synth;
  std::string synth_dir;
  auto* synth_cmd = app.add_subcommand("synth", "Write a synthetic corpus");
  synth_cmd->add_option("--docs", synth.documents, "Number of examples");
  synth_cmd->add_option("--seed", synth.seed, "Generator seed");
  synth_cmd->add_option("--out", synth_dir, "Output directory")->required();

  int window = 8;
  std::string check;
  auto* table_cmd = app.add_subcommand("table", "Print the oracle composition table");
  table_cmd->add_option("--window", window, "Endpoint window width")->check(CLI::Range(2, 16));
  table_cmd->add_option("--check", check, "Compare against a golden table file");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run_cmd) {
      config.variant = *parse_variant(variant);
      config.mode = *parse_mode(mode);
      config.out_dir = out_dir;
      if (!annotations.empty()) config.annotations_dir = annotations;
      if (budget > 0) config.context_char_budget = budget;
      if (!shots.empty()) config.shots_path = shots;
      if (!instruction.empty()) config.instruction = instruction;
      config.prompt_fused = !unfused_prompt;
      return cmd_run(config, dataset);
    }
    if (*validate_cmd) return cmd_validate(validate_path);
    if (*stats_cmd) return cmd_stats(stats_dir);
    if (*synth_cmd) {
      write_corpus(synthetic_corpus(synth), synth_dir);
      std::printf("wrote %zu examples to %s\n", synth.documents, synth_dir.c_str());
      return kOk;
    }
    if (*table_cmd) return cmd_table(window, check);
  } catch (const std::exception& e) {
    log(LogLevel::kError, e.what());
    return kFatal;
  }
  return kOk;
}
