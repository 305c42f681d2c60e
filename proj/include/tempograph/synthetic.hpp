#pragma once

// Deterministic synthetic QA corpus with tg-annot/1 annotations, for tests,
// benchmarks and demos. Same (size, seed) -> same corpus, on every platform.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <vector>

#include "tempograph/pipeline.hpp"

namespace tempograph {

struct SyntheticOptions {
  std::size_t documents = 100;
  std::uint64_t seed = 20230501;
  std::size_t max_passages = 3;
  std::size_t max_sentences = 6;
};

// Every example carries an inline annotation. The mix includes questions
// without a time expression, a few impossible dates, multi-passage contexts,
// non-ASCII names, value-less timexes and timexes chronon cannot normalize.
std::vector<DatasetExample> synthetic_corpus(const SyntheticOptions& options);

// Writes <dir>/dataset.jsonl (annotations stripped) and
// <dir>/annotations/<id>.json.
void write_corpus(const std::vector<DatasetExample>& corpus, const std::filesystem::path& dir);

}  // namespace tempograph
