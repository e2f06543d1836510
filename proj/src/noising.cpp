#include "eag/noising.hpp"

#include <omp.h>

#include <cmath>
#include <fstream>

#include <nlohmann/json.hpp>

#include "eag/errors.hpp"

namespace eag {

void NoiseConfig::validate() const {
  if (beta < 0.0 || beta > 1.0) throw UsageError("beta must be in [0, 1]");
  double sum = 0.0;
  for (double w : op_weights) {
    if (w < 0.0) throw UsageError("op weights must be non-negative");
    sum += w;
  }
  if (std::abs(sum - 1.0) > 1e-12)
    throw UsageError("op weights must sum to 1");
}

NoiseOutcome noise(std::span<const std::string> y, const NoiseConfig& cfg,
                   const Vocabulary& vocab, RandomSource& rng) {
  cfg.validate();
  const bool needs_vocab = cfg.op_weights[0] > 0.0 || cfg.op_weights[2] > 0.0;
  if (needs_vocab && cfg.beta > 0.0 && vocab.empty())
    throw DataError(
        "noising with positive insert/substitute weight needs a non-empty "
        "vocabulary");

  NoiseOutcome out;
  out.tokens.reserve(y.size() + 2);
  for (std::size_t t = 0; t < y.size(); ++t) {
    bool capped = cfg.max_ops_per_sentence != 0 &&
                  out.ops() >= cfg.max_ops_per_sentence;
    if (!capped && rng.uniform01() < cfg.beta) {
      double pick = rng.uniform01();
      if (pick < cfg.op_weights[0]) {
        out.tokens.push_back(vocab.sample(rng, cfg.sample_mode));
        out.tokens.push_back(y[t]);
        ++out.inserts;
      } else if (pick < cfg.op_weights[0] + cfg.op_weights[1]) {
        ++out.removes;  // token t dropped
      } else {
        out.tokens.push_back(vocab.sample(rng, cfg.sample_mode));
        ++out.substitutions;
      }
    } else {
      out.tokens.push_back(y[t]);
    }
  }
  return out;
}

namespace {

std::string join_tokens(const std::vector<std::string>& tokens) {
  std::string out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i) out += ' ';
    out += tokens[i];
  }
  return out;
}

}  // namespace

std::string TrainingExample::source_line() const { return join_tokens(source); }
std::string TrainingExample::target_line() const { return join_tokens(target); }

TrainingExample make_training_example(const Sentence& x2, const Sentence& y2,
                                      const NoiseConfig& cfg,
                                      const Vocabulary& vocab,
                                      RandomSource& rng) {
  NoiseOutcome noised = noise(y2.tokens, cfg, vocab, rng);
  TrainingExample ex;
  ex.source.reserve(x2.tokens.size() + 1 + noised.tokens.size());
  ex.source.insert(ex.source.end(), x2.tokens.begin(), x2.tokens.end());
  ex.source.push_back(kSepToken);
  ex.source.insert(ex.source.end(), noised.tokens.begin(),
                   noised.tokens.end());
  ex.target = y2.tokens;
  ex.ops = noised.ops();
  return ex;
}

EmitCounts emit_training_set(const BitextCorpus& corpus,
                             const NoiseConfig& cfg, const std::string& out_src,
                             const std::string& out_tgt,
                             TrainingFormat format) {
  if (corpus.size() == 0)
    throw DataError("cannot emit training data from an empty corpus: " +
                    corpus.corpus_id);
  cfg.validate();
  Vocabulary vocab = build_vocabulary(corpus, CorpusSide::Other);

  const std::size_t n = corpus.size();
  std::vector<TrainingExample> examples(n);
#pragma omp parallel for schedule(static)
  for (std::size_t i = 0; i < n; ++i) {
    RandomSource rng = derive_rng(cfg.seed, corpus.corpus_id, i);
    examples[i] =
        make_training_example(corpus.pivot[i], corpus.other[i], cfg, vocab, rng);
  }

  EmitCounts counts;
  counts.pairs = n;
  for (std::size_t i = 0; i < n; ++i) {
    counts.positions += corpus.other[i].size();
    counts.ops += examples[i].ops;
  }

  auto open = [](const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write " + path);
    return out;
  };

  if (format == TrainingFormat::Jsonl) {
    std::ofstream out = open(out_src);
    for (std::size_t i = 0; i < n; ++i) {
      nlohmann::json rec{{"source", examples[i].source_line()},
                         {"target", examples[i].target_line()},
                         {"meta",
                          {{"corpus", corpus.corpus_id}, {"index", i}}}};
      out << rec.dump() << '\n';
    }
    if (!out) throw DataError("write failure on " + out_src);
  } else {
    std::ofstream src = open(out_src);
    std::ofstream tgt = open(out_tgt);
    for (std::size_t i = 0; i < n; ++i) {
      src << examples[i].source_line() << '\n';
      tgt << examples[i].target_line() << '\n';
    }
    if (!src) throw DataError("write failure on " + out_src);
    if (!tgt) throw DataError("write failure on " + out_tgt);
  }
  return counts;
}

}  // namespace eag
