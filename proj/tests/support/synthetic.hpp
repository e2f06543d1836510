// Seeded corpus builders shared by the unit and acceptance suites.

#ifndef EAG_TESTS_SYNTHETIC_HPP
#define EAG_TESTS_SYNTHETIC_HPP

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "eag/corpus.hpp"
#include "eag/generator.hpp"
#include "eag/random.hpp"

namespace eag::testing {

struct SynthOpts {
  std::size_t vocab = 500;
  std::size_t min_len = 3;
  std::size_t max_len = 30;
  std::string pivot_lang = "en";
  std::string other_lang = "xx";
  std::string corpus_id;
};

std::vector<std::string> random_tokens(RandomSource& rng, std::size_t vocab,
                                       std::size_t len);

// Random bitext: pivot sentences over a w<k> vocabulary, other side a
// synthetic translation tag per line.
BitextCorpus synth_corpus(std::size_t n, std::uint64_t seed,
                          const SynthOpts& opts);

BitextCorpus corpus_from_token_rows(
    const std::vector<std::vector<std::string>>& pivot_rows,
    const std::vector<std::vector<std::string>>& other_rows,
    const std::string& pivot_lang, const std::string& other_lang,
    const std::string& corpus_id);

// Tri-lingual synthetic world for the end-to-end fixture: two corpora whose
// pivot sides differ pairwise by at least `margin` edits except for the
// planted (i, i) pairs, which differ by exactly one substituted word. The
// two non-pivot "languages" are token-wise bijections of the pivot, so the
// expected multi-way corpus is known by construction.
struct FixtureWorld {
  BitextCorpus en_a;  // pivot = x1, other = A(x1)
  BitextCorpus en_b;  // pivot = x2 (one-word divergence), other = B(x2)
  Lexicon lexicon_b;  // pivot token -> B token
  std::vector<std::vector<std::string>> expected_right;  // B(x1_i)
};

FixtureWorld build_fixture_world(std::size_t n, std::uint64_t seed,
                                 std::size_t vocab = 50, int margin = 6);

// Write corpus sides as one-sentence-per-line files; returns the two paths.
std::pair<std::string, std::string> write_corpus_files(
    const BitextCorpus& corpus, const std::filesystem::path& dir,
    const std::string& stem);

void write_lexicon_tsv(const Lexicon& lexicon, const std::string& path);

// Fresh unique directory under the system temp dir.
std::filesystem::path make_temp_dir(const std::string& hint);

std::string read_file(const std::string& path);

}  // namespace eag::testing

#endif
