#ifndef EAG_NOISING_HPP
#define EAG_NOISING_HPP

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "eag/corpus.hpp"
#include "eag/random.hpp"
#include "eag/vocabulary.hpp"

namespace eag {

struct NoiseConfig {
  double beta = 0.5;  // per-position noise probability
  // insert, remove, substitute; must sum to 1 within 1e-12
  std::array<double, 3> op_weights = {1.0 / 3, 1.0 / 3, 1.0 / 3};
  std::uint64_t seed = 0;
  SampleMode sample_mode = SampleMode::Frequency;
  std::size_t max_ops_per_sentence = 0;  // 0 = no cap

  void validate() const;  // throws UsageError
};

struct NoiseOutcome {
  std::vector<std::string> tokens;
  std::uint32_t inserts = 0;
  std::uint32_t removes = 0;
  std::uint32_t substitutions = 0;

  std::uint32_t ops() const { return inserts + removes + substitutions; }
};

// Single left-to-right pass over the original positions of y. Each position
// is corrupted with probability beta by exactly one operation: remove the
// token, insert a vocabulary sample immediately before it, or substitute it
// with a vocabulary sample.
NoiseOutcome noise(std::span<const std::string> y, const NoiseConfig& cfg,
                   const Vocabulary& vocab, RandomSource& rng);

struct TrainingExample {
  std::vector<std::string> source;  // x2 ++ <sep> ++ noised y2
  std::vector<std::string> target;  // y2 verbatim
  std::uint32_t ops = 0;

  std::string source_line() const;
  std::string target_line() const;
};

TrainingExample make_training_example(const Sentence& x2, const Sentence& y2,
                                      const NoiseConfig& cfg,
                                      const Vocabulary& vocab,
                                      RandomSource& rng);

enum class TrainingFormat { Text, Jsonl };

struct EmitCounts {
  std::size_t pairs = 0;
  std::uint64_t positions = 0;
  std::uint64_t ops = 0;
};

// Writes one generator training example per corpus pair, in corpus order.
// The vocabulary is built from the corpus' other side. Per-pair rng streams
// are derived from (seed, corpus_id, pair index), so output is independent
// of worker count.
// Text format: parallel source/target files. Jsonl: one object per line in
// out_src, out_tgt ignored.
EmitCounts emit_training_set(const BitextCorpus& corpus,
                             const NoiseConfig& cfg, const std::string& out_src,
                             const std::string& out_tgt,
                             TrainingFormat format = TrainingFormat::Text);

}  // namespace eag

#endif  // EAG_NOISING_HPP
