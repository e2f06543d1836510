#include <doctest.h>

#include <nlohmann/json.hpp>

#include "eag/errors.hpp"
#include "eag/stats.hpp"

using namespace eag;

TEST_CASE("stats matrix is symmetric with a zero diagonal") {
  CorpusStats stats = stats_matrix({{"en", "de", 100},
                                    {"en", "fr", 200},
                                    {"de", "fr", 7}});
  CHECK(stats.languages == std::vector<std::string>{"de", "en", "fr"});
  for (std::size_t i = 0; i < stats.languages.size(); ++i) {
    CHECK(stats.counts[i][i] == 0);
    for (std::size_t j = 0; j < stats.languages.size(); ++j)
      CHECK(stats.counts[i][j] == stats.counts[j][i]);
  }
  CHECK(stats.at("en", "de") == 100);
  CHECK(stats.at("de", "en") == 100);
  CHECK(stats.at("de", "fr") == 7);
}

TEST_CASE("original corpora only populate the pivot row and column") {
  CorpusStats stats = stats_matrix({{"en", "de", 10}, {"en", "fr", 20}});
  CHECK(stats.at("de", "fr") == 0);
  CHECK(stats.at("en", "de") == 10);
  CHECK(stats.at("en", "fr") == 20);
}

TEST_CASE("duplicate pairs accumulate") {
  CorpusStats stats = stats_matrix({{"a", "b", 1}, {"b", "a", 2}});
  CHECK(stats.at("a", "b") == 3);
}

TEST_CASE("self pairs are rejected") {
  CHECK_THROWS_AS(stats_matrix({{"de", "de", 5}}), DataError);
}

TEST_CASE("render and json forms agree with the matrix") {
  CorpusStats stats = stats_matrix({{"en", "de", 42}});
  std::string table = render_stats_table(stats);
  CHECK(table.find("42") != std::string::npos);
  CHECK(table.find("de") != std::string::npos);

  nlohmann::json doc = nlohmann::json::parse(stats_to_json(stats));
  CHECK(doc["languages"].size() == 2);
  CHECK(doc["counts"][0][1] == 42);
  CHECK(doc["counts"][1][0] == 42);
}
