#include <doctest.h>

#include <string>
#include <vector>

#include "eag/edit_distance.hpp"
#include "eag/random.hpp"
#include "../support/oracles.hpp"
#include "../support/synthetic.hpp"

using namespace eag;
using eag::testing::oracle_edit_distance;

namespace {

using Tokens = std::vector<std::string>;

Tokens toks(std::initializer_list<const char*> list) {
  Tokens out;
  for (const char* t : list) out.emplace_back(t);
  return out;
}

}  // namespace

TEST_CASE("edit_distance basics") {
  CHECK(edit_distance(toks({"a", "b", "c"}), toks({"a", "b", "c"})) == 0);
  CHECK(edit_distance(Tokens{}, toks({"a", "b"})) == 2);
  CHECK(edit_distance(toks({"a", "b"}), Tokens{}) == 2);
  // frozen from the DP oracle
  CHECK(oracle_edit_distance(toks({"the", "cat", "sat"}),
                             toks({"the", "dog", "sat", "down"})) == 2);
  CHECK(edit_distance(toks({"the", "cat", "sat"}),
                      toks({"the", "dog", "sat", "down"})) == 2);
}

TEST_CASE("edit_distance agrees with the oracle on random pairs") {
  RandomSource rng(101);
  for (int iter = 0; iter < 500; ++iter) {
    Tokens a = eag::testing::random_tokens(rng, 6, rng.uniform_index(12));
    Tokens b = eag::testing::random_tokens(rng, 6, rng.uniform_index(12));
    CHECK(edit_distance(a, b) == oracle_edit_distance(a, b));
  }
}

TEST_CASE("edit_distance satisfies the metric axioms") {
  RandomSource rng(202);
  for (int iter = 0; iter < 300; ++iter) {
    Tokens a = eag::testing::random_tokens(rng, 5, rng.uniform_index(10));
    Tokens b = eag::testing::random_tokens(rng, 5, rng.uniform_index(10));
    Tokens c = eag::testing::random_tokens(rng, 5, rng.uniform_index(10));
    int ab = edit_distance(a, b);
    int ba = edit_distance(b, a);
    int ac = edit_distance(a, c);
    int bc = edit_distance(b, c);
    CHECK(ab == ba);
    CHECK(ac <= ab + bc);
    CHECK((ab == 0) == (a == b));
    CHECK(ab <= static_cast<int>(std::max(a.size(), b.size())));
  }
}

TEST_CASE("bounded_edit_distance basics") {
  CHECK(bounded_edit_distance(toks({"x"}), toks({"x"}), 0) == 0);
  Tokens a = toks({"the", "cat", "sat"});
  Tokens b = toks({"the", "dog", "sat", "down"});
  CHECK_FALSE(bounded_edit_distance(a, b, 1).has_value());  // oracle: 2 > 1
  CHECK(bounded_edit_distance(a, b, 2) == 2);
  CHECK(bounded_edit_distance(a, b, 10) == 2);
  CHECK_FALSE(bounded_edit_distance(a, b, -1).has_value());
}

TEST_CASE("bounded_edit_distance agrees with the full distance") {
  RandomSource rng(303);
  for (int iter = 0; iter < 800; ++iter) {
    Tokens a = eag::testing::random_tokens(rng, 4, rng.uniform_index(14));
    Tokens b = eag::testing::random_tokens(rng, 4, rng.uniform_index(14));
    int full = oracle_edit_distance(a, b);
    int tau = static_cast<int>(rng.uniform_index(8));
    auto banded = bounded_edit_distance(a, b, tau);
    if (full <= tau) {
      REQUIRE(banded.has_value());
      CHECK(*banded == full);
    } else {
      CHECK_FALSE(banded.has_value());
    }
  }
}

TEST_CASE("passes_threshold compares against the exact product") {
  Tokens a = toks({"the", "cat", "sat"});
  Tokens b = toks({"the", "dog", "sat", "down"});
  // distance 2, min length 3
  CHECK_FALSE(passes_threshold(a, b, 0.3));  // budget 0.9
  CHECK(passes_threshold(a, b, 0.7));        // budget 2.1
  CHECK(passes_threshold(a, a, 0.0));
  CHECK(passes_threshold(Tokens{}, Tokens{}, 0.0));
  // gamma = 0 admits only exact matches
  CHECK_FALSE(passes_threshold(toks({"a"}), toks({"b"}), 0.0));
}

TEST_CASE("distance budget floor matches the double comparison") {
  RandomSource rng(404);
  for (int iter = 0; iter < 2000; ++iter) {
    std::size_t la = 1 + rng.uniform_index(40);
    std::size_t lb = 1 + rng.uniform_index(40);
    double gamma = rng.uniform01();
    int d = static_cast<int>(rng.uniform_index(41));
    bool via_double = static_cast<double>(d) <= distance_budget(gamma, la, lb);
    bool via_floor = d <= budget_floor(gamma, la, lb);
    CHECK(via_double == via_floor);
  }
}
