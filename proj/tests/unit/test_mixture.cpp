#include <doctest.h>

#include <cmath>

#include "eag/errors.hpp"
#include "eag/mixture.hpp"

using namespace eag;

namespace {
using Avail = std::vector<std::pair<std::string, std::uint64_t>>;
}

TEST_CASE("temperature one is exactly proportional") {
  Avail avail{{"a-b", 300}, {"a-c", 100}, {"b-c", 600}};
  std::vector<double> p = temperature_probs(avail, 1.0);
  CHECK(std::abs(p[0] - 0.3) <= 1e-12);
  CHECK(std::abs(p[1] - 0.1) <= 1e-12);
  CHECK(std::abs(p[2] - 0.6) <= 1e-12);
}

TEST_CASE("equal counts split evenly at any temperature") {
  for (double t : {1.0, 2.0, 5.0, 100.0}) {
    MixturePlan plan =
        temperature_sample(Avail{{"x", 100}, {"y", 100}}, t, 100);
    CHECK(plan.slots[0].count == 50);
    CHECK(plan.slots[1].count == 50);
  }
}

TEST_CASE("temperature five flattens a lopsided pair ratio") {
  // 47M cs-en vs 4.5M de-en available examples
  Avail avail{{"cs-en", 47000000}, {"de-en", 4500000}};
  std::vector<double> p = temperature_probs(avail, 5.0);
  double got_ratio = p[0] / p[1];
  double expected = std::pow(47.0 / 4.5, 0.2);
  CHECK(std::abs(got_ratio - expected) < 1e-9);
  CHECK(expected == doctest::Approx(1.599).epsilon(1e-3));
}

TEST_CASE("largest remainder rounding sums to the requested total") {
  MixturePlan plan =
      temperature_sample(Avail{{"a", 3}, {"b", 3}, {"c", 3}}, 1.0, 9);
  std::uint64_t sum = 0;
  for (const auto& s : plan.slots) sum += s.count;
  CHECK(sum == 9);

  // 10/3 each: fractions tie, the first slot takes the remainder
  MixturePlan uneven = temperature_sample(
      Avail{{"a", 30}, {"b", 30}, {"c", 30}}, 1.0, 10);
  CHECK(uneven.slots[0].count == 4);
  CHECK(uneven.slots[1].count == 3);
  CHECK(uneven.slots[2].count == 3);
  sum = 0;
  for (const auto& s : uneven.slots) sum += s.count;
  CHECK(sum == 10);
}

TEST_CASE("clamped slots redistribute their surplus") {
  // T=5 pulls the small slot far above its availability
  MixturePlan plan = temperature_sample(Avail{{"tiny", 2}, {"big", 98}}, 5.0, 80);
  CHECK(plan.slots[0].count == 2);   // clamped to availability
  CHECK(plan.slots[1].count == 78);  // absorbed the surplus
  CHECK(plan.total == 80);
}

TEST_CASE("overcommitted totals are an error") {
  CHECK_THROWS_AS(temperature_sample(Avail{{"a", 5}, {"b", 5}}, 1.0, 11),
                  DataError);
  CHECK_NOTHROW(temperature_sample(Avail{{"a", 5}, {"b", 5}}, 1.0, 10));
}

TEST_CASE("zero-count slots never receive samples") {
  MixturePlan plan = temperature_sample(Avail{{"a", 0}, {"b", 10}}, 5.0, 10);
  CHECK(plan.slots[0].count == 0);
  CHECK(plan.slots[1].count == 10);
  CHECK(plan.slots[0].probability == 0.0);
}

TEST_CASE("temperature below one is rejected") {
  CHECK_THROWS_AS(temperature_probs(Avail{{"a", 1}}, 0.5), UsageError);
}

TEST_CASE("language token formatting") {
  CHECK(prepend_language_token("hello", LanguageTag{"de"}) == "<2de> hello");
  CHECK(prepend_language_token("", LanguageTag{"fr"}) == "<2fr> ");

  std::string line = prepend_language_token("a b c", LanguageTag{"cs"});
  std::string first = line.substr(0, line.find(' '));
  CHECK(is_language_token(first));
  CHECK(is_language_token("<2de>"));
  CHECK_FALSE(is_language_token("<de>"));
  CHECK_FALSE(is_language_token("<2DE>"));
  CHECK_FALSE(is_language_token("<2>"));
  CHECK_FALSE(is_language_token("word"));
}
