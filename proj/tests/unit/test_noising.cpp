#include <doctest.h>

#include <cmath>
#include <set>

#include "eag/errors.hpp"
#include "eag/noising.hpp"
#include "../support/oracles.hpp"
#include "../support/synthetic.hpp"

using namespace eag;
using eag::testing::corpus_from_token_rows;
using eag::testing::oracle_edit_distance;

namespace {

using Tokens = std::vector<std::string>;

Vocabulary vocab_of(std::initializer_list<const char*> tokens) {
  std::vector<Vocabulary::Entry> entries;
  for (const char* t : tokens) entries.push_back({t, 1});
  return Vocabulary::from_counts(std::move(entries), "test");
}

NoiseConfig uniform_cfg(double beta, std::uint64_t seed = 0) {
  NoiseConfig cfg;
  cfg.beta = beta;
  cfg.seed = seed;
  cfg.sample_mode = SampleMode::Uniform;
  return cfg;
}

}  // namespace

TEST_CASE("beta zero is the identity") {
  Vocabulary vocab = vocab_of({"v1", "v2"});
  RandomSource rng(1);
  for (int iter = 0; iter < 50; ++iter) {
    Tokens y = eag::testing::random_tokens(rng, 10, rng.uniform_index(12));
    NoiseOutcome out = noise(y, uniform_cfg(0.0), vocab, rng);
    CHECK(out.tokens == y);
    CHECK(out.ops() == 0);
  }
}

TEST_CASE("noising is deterministic under a fixed seed") {
  Vocabulary vocab = vocab_of({"v1", "v2", "v3"});
  Tokens y{"a", "b", "c", "d", "e", "f", "g"};
  NoiseConfig cfg = uniform_cfg(0.6);
  RandomSource r1(42), r2(42);
  NoiseOutcome one = noise(y, cfg, vocab, r1);
  NoiseOutcome two = noise(y, cfg, vocab, r2);
  CHECK(one.tokens == two.tokens);
  CHECK(one.ops() == two.ops());
}

TEST_CASE("empty vocabulary is an error only when sampling is possible") {
  Vocabulary empty = Vocabulary::from_counts({}, "none");
  Tokens y{"a", "b"};
  RandomSource rng(3);
  CHECK_THROWS_AS(noise(y, uniform_cfg(0.5), empty, rng), DataError);

  NoiseConfig remove_only = uniform_cfg(1.0);
  remove_only.op_weights = {0.0, 1.0, 0.0};
  NoiseOutcome out = noise(y, remove_only, empty, rng);
  CHECK(out.tokens.empty());
  CHECK(out.removes == 2);
}

TEST_CASE("noise rate and op mix match the configuration") {
  // >= 1e5 positions, uniform weights
  eag::testing::SynthOpts opts;
  opts.vocab = 200;
  opts.min_len = 8;
  opts.max_len = 12;
  BitextCorpus corpus = eag::testing::synth_corpus(1, 7, opts);
  Vocabulary vocab = vocab_of({"n1", "n2", "n3", "n4"});

  for (double beta : {0.1, 0.5}) {
    NoiseConfig cfg = uniform_cfg(beta, 11);
    std::uint64_t positions = 0, ins = 0, rem = 0, sub = 0;
    RandomSource rng(1234);
    while (positions < 120000) {
      Tokens y = eag::testing::random_tokens(rng, 200, 10);
      NoiseOutcome out = noise(y, cfg, vocab, rng);
      positions += y.size();
      ins += out.inserts;
      rem += out.removes;
      sub += out.substitutions;
    }
    double total_ops = double(ins + rem + sub);
    double rate = total_ops / double(positions);
    CHECK(std::abs(rate - beta) < 0.02);
    CHECK(std::abs(double(ins) / total_ops - 1.0 / 3) < 0.02);
    CHECK(std::abs(double(rem) / total_ops - 1.0 / 3) < 0.02);
    CHECK(std::abs(double(sub) / total_ops - 1.0 / 3) < 0.02);
  }
}

TEST_CASE("skewed op weights are honored") {
  Vocabulary vocab = vocab_of({"x"});
  NoiseConfig cfg = uniform_cfg(1.0);
  cfg.op_weights = {0.0, 0.0, 1.0};
  Tokens y{"a", "b", "c"};
  RandomSource rng(5);
  NoiseOutcome out = noise(y, cfg, vocab, rng);
  CHECK(out.substitutions == 3);
  CHECK(out.tokens == Tokens{"x", "x", "x"});
}

TEST_CASE("insertion lands immediately before the noised position") {
  Vocabulary vocab = vocab_of({"NEW"});
  NoiseConfig cfg = uniform_cfg(1.0);
  cfg.op_weights = {1.0, 0.0, 0.0};
  Tokens y{"a", "b"};
  RandomSource rng(6);
  NoiseOutcome out = noise(y, cfg, vocab, rng);
  CHECK(out.tokens == Tokens{"NEW", "a", "NEW", "b"});
  CHECK(out.inserts == 2);
}

TEST_CASE("vocabulary closure and length bounds hold") {
  Vocabulary vocab = vocab_of({"n1", "n2"});
  std::set<std::string> allowed{"n1", "n2"};
  RandomSource rng(7);
  NoiseConfig cfg = uniform_cfg(0.5);
  for (int iter = 0; iter < 200; ++iter) {
    Tokens y = eag::testing::random_tokens(rng, 10, 1 + rng.uniform_index(10));
    NoiseOutcome out = noise(y, cfg, vocab, rng);
    for (const std::string& tok : out.tokens) {
      bool from_y = std::find(y.begin(), y.end(), tok) != y.end();
      CHECK((from_y || allowed.count(tok) == 1));
    }
    CHECK(out.tokens.size() == y.size() + out.inserts - out.removes);
    // each op moves the result by at most one edit
    int dist = oracle_edit_distance(out.tokens, y);
    CHECK(dist <= static_cast<int>(out.ops()));
  }
}

TEST_CASE("op cap limits the noise applied to one sentence") {
  Vocabulary vocab = vocab_of({"x"});
  NoiseConfig cfg = uniform_cfg(1.0);
  cfg.max_ops_per_sentence = 2;
  Tokens y{"a", "b", "c", "d", "e"};
  RandomSource rng(8);
  NoiseOutcome out = noise(y, cfg, vocab, rng);
  CHECK(out.ops() == 2);
}

TEST_CASE("make_training_example builds x2 SEP noised-y2 against y2") {
  Sentence x2 = normalize("hello world", NormConfig{});
  Sentence y2 = normalize("bonjour le monde", NormConfig{});
  Vocabulary vocab = vocab_of({"ignored"});
  RandomSource rng(9);

  TrainingExample ex =
      make_training_example(x2, y2, uniform_cfg(0.0), vocab, rng);
  CHECK(ex.source ==
        Tokens{"hello", "world", "<sep>", "bonjour", "le", "monde"});
  CHECK(ex.target == Tokens{"bonjour", "le", "monde"});
  CHECK(ex.source_line() == "hello world <sep> bonjour le monde");
}

TEST_CASE("a rigged configuration forces the substitution path") {
  Sentence x2 = normalize("hello", NormConfig{});
  Sentence y2 = normalize("bonjour", NormConfig{});
  Vocabulary vocab = vocab_of({"monde"});
  NoiseConfig cfg = uniform_cfg(1.0);
  cfg.op_weights = {0.0, 0.0, 1.0};
  RandomSource rng(10);
  TrainingExample ex = make_training_example(x2, y2, cfg, vocab, rng);
  CHECK(ex.source == Tokens{"hello", "<sep>", "monde"});
  CHECK(ex.target == Tokens{"bonjour"});
}

TEST_CASE("every emitted source carries exactly one separator") {
  eag::testing::SynthOpts opts;
  opts.vocab = 50;
  opts.min_len = 1;
  opts.max_len = 9;
  BitextCorpus corpus = eag::testing::synth_corpus(2000, 13, opts);
  // give the other side real sentences
  corpus.other = corpus.pivot;
  std::reverse(corpus.other.begin(), corpus.other.end());
  Vocabulary vocab = build_vocabulary(corpus, CorpusSide::Other);
  NoiseConfig cfg = uniform_cfg(0.5, 21);
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    RandomSource rng = derive_rng(cfg.seed, corpus.corpus_id, i);
    TrainingExample ex = make_training_example(corpus.pivot[i],
                                               corpus.other[i], cfg, vocab,
                                               rng);
    CHECK(std::count(ex.source.begin(), ex.source.end(),
                     std::string(kSepToken)) == 1);
    CHECK(ex.target == corpus.other[i].tokens);
  }
}

TEST_CASE("emit_training_set writes aligned deterministic files") {
  namespace fs = std::filesystem;
  fs::path dir = eag::testing::make_temp_dir("emit");
  BitextCorpus corpus = corpus_from_token_rows(
      {{"one", "two"}, {"three"}, {"four", "five", "six"}},
      {{"eins", "zwei"}, {"drei"}, {"vier", "fuenf", "sechs"}}, "en", "de",
      "emit-test");

  NoiseConfig cfg = uniform_cfg(0.4, 99);
  EmitCounts counts =
      emit_training_set(corpus, cfg, (dir / "a.src").string(),
                        (dir / "a.tgt").string());
  CHECK(counts.pairs == 3);
  std::string src1 = eag::testing::read_file((dir / "a.src").string());
  std::string tgt1 = eag::testing::read_file((dir / "a.tgt").string());
  CHECK(std::count(src1.begin(), src1.end(), '\n') == 3);
  CHECK(std::count(tgt1.begin(), tgt1.end(), '\n') == 3);
  CHECK(tgt1 == "eins zwei\ndrei\nvier fuenf sechs\n");

  emit_training_set(corpus, cfg, (dir / "b.src").string(),
                    (dir / "b.tgt").string());
  CHECK(src1 == eag::testing::read_file((dir / "b.src").string()));
  CHECK(tgt1 == eag::testing::read_file((dir / "b.tgt").string()));

  // jsonl variant carries the same payload
  emit_training_set(corpus, cfg, (dir / "c.jsonl").string(), "",
                    TrainingFormat::Jsonl);
  std::string jsonl = eag::testing::read_file((dir / "c.jsonl").string());
  CHECK(std::count(jsonl.begin(), jsonl.end(), '\n') == 3);
  CHECK(jsonl.find("\"meta\"") != std::string::npos);
}

TEST_CASE("mean corruption distance tracks beta") {
  // 1k pairs, beta 0.5: mean token edit distance between noised and clean
  // stays within 5% of beta * mean length. A remove next to an insert
  // realigns into one substitution, so the measured distance sits a few
  // percent under the op count; short sentences keep that inside the band.
  eag::testing::SynthOpts opts;
  opts.vocab = 1000;
  opts.min_len = 3;
  opts.max_len = 6;
  BitextCorpus corpus = eag::testing::synth_corpus(1000, 17, opts);
  corpus.other = corpus.pivot;  // noise the pivot-shaped sentences
  Vocabulary vocab = build_vocabulary(corpus, CorpusSide::Other);

  NoiseConfig cfg = uniform_cfg(0.5, 31);
  double dist_sum = 0.0;
  std::uint64_t len_sum = 0;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    RandomSource rng = derive_rng(cfg.seed, corpus.corpus_id, i);
    NoiseOutcome out = noise(corpus.other[i].tokens, cfg, vocab, rng);
    dist_sum += oracle_edit_distance(out.tokens, corpus.other[i].tokens);
    len_sum += corpus.other[i].size();
  }
  double mean_dist = dist_sum / double(corpus.size());
  double expected = cfg.beta * double(len_sum) / double(corpus.size());
  CHECK(std::abs(mean_dist - expected) / expected < 0.05);
}

TEST_CASE("noise config validation") {
  NoiseConfig cfg;
  cfg.beta = 1.5;
  CHECK_THROWS_AS(cfg.validate(), UsageError);
  cfg.beta = 0.5;
  cfg.op_weights = {0.5, 0.5, 0.5};
  CHECK_THROWS_AS(cfg.validate(), UsageError);
  cfg.op_weights = {0.2, 0.3, 0.5};
  CHECK_NOTHROW(cfg.validate());
}
