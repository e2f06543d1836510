#include <doctest.h>

#include <fstream>
#include <set>
#include <unordered_map>

#include "eag/corpus.hpp"
#include "eag/errors.hpp"
#include "eag/vocabulary.hpp"
#include "../support/synthetic.hpp"

using namespace eag;
namespace fs = std::filesystem;

namespace {

void write_lines(const fs::path& path, const std::vector<std::string>& lines) {
  std::ofstream out(path, std::ios::binary);
  for (const std::string& l : lines) out << l << '\n';
}

}  // namespace

TEST_CASE("normalize folds case and collapses whitespace") {
  NormConfig fold{true};
  Sentence s = normalize("The  cat", fold);
  CHECK(s.tokens == std::vector<std::string>{"the", "cat"});

  CHECK(normalize("", fold).tokens.empty());
  CHECK(normalize("a b a", NormConfig{}).tokens ==
        std::vector<std::string>{"a", "b", "a"});
  CHECK(normalize("a b a", NormConfig{}).size() == 3);
}

TEST_CASE("normalize preserves case when folding is off") {
  Sentence s = normalize("The Cat", NormConfig{});
  CHECK(s.tokens == std::vector<std::string>{"The", "Cat"});
}

TEST_CASE("normalize handles tabs, CR and unicode spaces") {
  Sentence s = normalize("a\tb\r", NormConfig{});
  CHECK(s.tokens == std::vector<std::string>{"a", "b"});
  // U+00A0 no-break space
  Sentence nb = normalize("a\xc2\xa0z", NormConfig{});
  CHECK(nb.tokens == std::vector<std::string>{"a", "z"});
}

TEST_CASE("normalize composes NFC") {
  // e + combining acute == precomposed é after NFC
  Sentence decomposed = normalize("caf\x65\xcc\x81", NormConfig{});
  Sentence composed = normalize("caf\xc3\xa9", NormConfig{});
  CHECK(decomposed.tokens == composed.tokens);
}

TEST_CASE("normalize rejects invalid UTF-8") {
  CHECK_THROWS_AS(normalize("ok \xff\xfe", NormConfig{}), DataError);
  CHECK_THROWS_AS(normalize("trunc \xc3", NormConfig{}), DataError);
}

TEST_CASE("normalize strips the separator literal from tokens") {
  CHECK(normalize("foo <sep> bar", NormConfig{}).tokens ==
        std::vector<std::string>{"foo", "bar"});
  CHECK(normalize("a<sep>b", NormConfig{}).tokens ==
        std::vector<std::string>{"ab"});
  // removal must not splice a fresh occurrence together
  CHECK(normalize("<se<sep>p>x", NormConfig{}).tokens ==
        std::vector<std::string>{"x"});
}

TEST_CASE("normalize is idempotent on re-joined tokens") {
  NormConfig norm{true};
  for (const char* raw :
       {"The  CAT  sat", " a\tb ", "x<sep>y z", "caf\xc3\xa9 mix"}) {
    Sentence first = normalize(raw, norm);
    Sentence again = normalize(first.joined(), norm);
    CHECK(again.tokens == first.tokens);
  }
}

TEST_CASE("load_bitext keeps aligned pairs and drops empty sides") {
  fs::path dir = eag::testing::make_temp_dir("corpus");
  LanguageTag en{"en"}, de{"de"};

  SUBCASE("identity case") {
    write_lines(dir / "p.txt", {"a b", "c", "d e f"});
    write_lines(dir / "o.txt", {"x", "y z", "w"});
    BitextCorpus c =
        load_bitext((dir / "p.txt").string(), (dir / "o.txt").string(), en, de,
                    NormConfig{});
    CHECK(c.size() == 3);
    CHECK(c.dropped == 0);
    CHECK(c.pivot[2].tokens == std::vector<std::string>{"d", "e", "f"});
  }

  SUBCASE("line count mismatch names both counts") {
    write_lines(dir / "p4.txt", {"1", "2", "3", "4"});
    write_lines(dir / "o5.txt", {"1", "2", "3", "4", "5"});
    try {
      load_bitext((dir / "p4.txt").string(), (dir / "o5.txt").string(), en, de,
                  NormConfig{});
      FAIL("expected DataError");
    } catch (const DataError& e) {
      std::string msg = e.what();
      CHECK(msg.find("4") != std::string::npos);
      CHECK(msg.find("5") != std::string::npos);
    }
  }

  SUBCASE("whitespace-only side is dropped and counted") {
    write_lines(dir / "pw.txt", {"a", "   ", "c"});
    write_lines(dir / "ow.txt", {"x", "y", "z"});
    BitextCorpus c = load_bitext((dir / "pw.txt").string(),
                                 (dir / "ow.txt").string(), en, de,
                                 NormConfig{});
    CHECK(c.size() == 2);
    CHECK(c.dropped == 1);
    CHECK(c.pivot[1].tokens == std::vector<std::string>{"c"});
  }

  SUBCASE("undecodable bytes are reported with a line number") {
    write_lines(dir / "pb.txt", {"fine", "bad \xff"});
    write_lines(dir / "ob.txt", {"x", "y"});
    try {
      load_bitext((dir / "pb.txt").string(), (dir / "ob.txt").string(), en, de,
                  NormConfig{});
      FAIL("expected DataError");
    } catch (const DataError& e) {
      CHECK(std::string(e.what()).find("line 2") != std::string::npos);
    }
  }
}

TEST_CASE("load_bitext_tsv splits on the first tab") {
  fs::path dir = eag::testing::make_temp_dir("tsv");
  write_lines(dir / "c.tsv", {"a b\tx y", "c\tz"});
  BitextCorpus c = load_bitext_tsv((dir / "c.tsv").string(), LanguageTag{"en"},
                                   LanguageTag{"fr"}, NormConfig{});
  CHECK(c.size() == 2);
  CHECK(c.pivot[0].tokens == std::vector<std::string>{"a", "b"});
  CHECK(c.other[0].tokens == std::vector<std::string>{"x", "y"});

  write_lines(dir / "bad.tsv", {"no tab here"});
  CHECK_THROWS_AS(load_bitext_tsv((dir / "bad.tsv").string(),
                                  LanguageTag{"en"}, LanguageTag{"fr"},
                                  NormConfig{}),
                  DataError);
}

TEST_CASE("loading the same files twice is byte-identical") {
  fs::path dir = eag::testing::make_temp_dir("det");
  write_lines(dir / "p.txt", {"A  b", "C d"});
  write_lines(dir / "o.txt", {"x", "y"});
  auto load = [&] {
    return load_bitext((dir / "p.txt").string(), (dir / "o.txt").string(),
                       LanguageTag{"en"}, LanguageTag{"de"}, NormConfig{});
  };
  BitextCorpus one = load(), two = load();
  REQUIRE(one.size() == two.size());
  for (std::size_t i = 0; i < one.size(); ++i) {
    CHECK(one.pivot[i].tokens == two.pivot[i].tokens);
    CHECK(one.other[i].raw == two.other[i].raw);
  }
}

TEST_CASE("language tags are validated") {
  CHECK(LanguageTag::parse("de").code == "de");
  CHECK_THROWS_AS(LanguageTag::parse(""), UsageError);
  CHECK_THROWS_AS(LanguageTag::parse("D E"), UsageError);
  CHECK_THROWS_AS(LanguageTag::parse("DE"), UsageError);
}

TEST_CASE("build_vocabulary counts the chosen side") {
  BitextCorpus c = eag::testing::corpus_from_token_rows(
      {{"p", "q"}, {"p"}}, {{"a", "b"}, {"b", "c"}}, "en", "de", "t");
  Vocabulary v = build_vocabulary(c, CorpusSide::Other);
  CHECK(v.count("a") == 1);
  CHECK(v.count("b") == 2);
  CHECK(v.count("c") == 1);
  CHECK(v.count("zz") == 0);
  CHECK(v.total() == 4);

  Vocabulary p = build_vocabulary(c, CorpusSide::Pivot);
  CHECK(p.count("p") == 2);
  CHECK(p.total() == 3);
}

TEST_CASE("build_vocabulary rejects an empty corpus") {
  BitextCorpus empty;
  empty.corpus_id = "empty";
  CHECK_THROWS_AS(build_vocabulary(empty, CorpusSide::Other), DataError);
}

TEST_CASE("vocabulary of a single pair") {
  BitextCorpus c = eag::testing::corpus_from_token_rows({{"x"}}, {{"x"}}, "en",
                                                        "de", "t");
  Vocabulary v = build_vocabulary(c, CorpusSide::Other);
  CHECK(v.entries().size() == 1);
  CHECK(v.total() == 1);
}

TEST_CASE("vocabulary entry set matches an independent count") {
  // 10k synthetic lines over a known 100-token alphabet
  eag::testing::SynthOpts opts;
  opts.vocab = 100;
  opts.min_len = 2;
  opts.max_len = 12;
  BitextCorpus c = eag::testing::synth_corpus(10000, 7, opts);
  // pivot side carries the alphabet; recount independently
  std::unordered_map<std::string, std::uint64_t> recount;
  std::uint64_t positions = 0;
  for (const Sentence& s : c.pivot)
    for (const std::string& t : s.tokens) {
      ++recount[t];
      ++positions;
    }
  Vocabulary v = build_vocabulary(c, CorpusSide::Pivot);
  CHECK(v.entries().size() == recount.size());
  CHECK(v.total() == positions);
  std::uint64_t sum = 0;
  for (const auto& e : v.entries()) {
    CHECK(recount.at(e.token) == e.count);
    sum += e.count;
  }
  CHECK(sum == v.total());
  // every entry is from the alphabet
  std::set<std::string> alphabet;
  for (std::size_t k = 0; k < opts.vocab; ++k)
    alphabet.insert("w" + std::to_string(k));
  for (const auto& e : v.entries()) CHECK(alphabet.count(e.token) == 1);
}

TEST_CASE("vocabulary sampling is seed-reproducible") {
  BitextCorpus c = eag::testing::corpus_from_token_rows(
      {{"p"}, {"p"}}, {{"a", "b", "c"}, {"c", "c", "d"}}, "en", "de", "t");
  Vocabulary v = build_vocabulary(c, CorpusSide::Other);
  RandomSource r1(99), r2(99);
  for (int i = 0; i < 100; ++i)
    CHECK(v.sample(r1, SampleMode::Frequency) ==
          v.sample(r2, SampleMode::Frequency));
  RandomSource r3(1), r4(1);
  for (int i = 0; i < 100; ++i)
    CHECK(v.sample(r3, SampleMode::Uniform) ==
          v.sample(r4, SampleMode::Uniform));
}
