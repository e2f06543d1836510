#ifndef EAG_EDIT_DISTANCE_HPP
#define EAG_EDIT_DISTANCE_HPP

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <vector>

namespace eag {

// Unit-cost token Levenshtein distance, two-row dynamic program.
template <class T>
int edit_distance(std::span<const T> a, std::span<const T> b) {
  const std::size_t n = a.size(), m = b.size();
  if (n == 0) return static_cast<int>(m);
  if (m == 0) return static_cast<int>(n);

  std::vector<int> prev(m + 1), cur(m + 1);
  for (std::size_t j = 0; j <= m; ++j) prev[j] = static_cast<int>(j);
  for (std::size_t i = 1; i <= n; ++i) {
    cur[0] = static_cast<int>(i);
    const T& ai = a[i - 1];
    for (std::size_t j = 1; j <= m; ++j) {
      int sub = prev[j - 1] + (ai == b[j - 1] ? 0 : 1);
      cur[j] = std::min({sub, prev[j] + 1, cur[j - 1] + 1});
    }
    std::swap(prev, cur);
  }
  return prev[m];
}

template <class T>
int edit_distance(const std::vector<T>& a, const std::vector<T>& b) {
  return edit_distance(std::span<const T>(a), std::span<const T>(b));
}

// Banded variant: returns the distance iff it is <= tau, otherwise nullopt.
// Agrees exactly with edit_distance whenever the true distance is <= tau.
template <class T>
std::optional<int> bounded_edit_distance(std::span<const T> a,
                                         std::span<const T> b, int tau) {
  if (tau < 0) return std::nullopt;
  const std::size_t n = a.size(), m = b.size();
  const std::int64_t diff =
      static_cast<std::int64_t>(n) - static_cast<std::int64_t>(m);
  if (diff > tau || -diff > tau) return std::nullopt;
  if (n == 0) return static_cast<int>(m);
  if (m == 0) return static_cast<int>(n);

  const int big = std::numeric_limits<int>::max() / 2;
  std::vector<int> prev(m + 1, big), cur(m + 1, big);
  const std::size_t w = static_cast<std::size_t>(tau);
  for (std::size_t j = 0; j <= std::min(m, w); ++j)
    prev[j] = static_cast<int>(j);
  for (std::size_t i = 1; i <= n; ++i) {
    const std::size_t lo = i > w ? i - w : 0;
    const std::size_t hi = std::min(m, i + w);
    if (lo > hi) return std::nullopt;
    cur[lo] = big;
    if (lo == 0) cur[0] = static_cast<int>(i);
    int row_min = cur[lo];
    const T& ai = a[i - 1];
    for (std::size_t j = std::max<std::size_t>(lo, 1); j <= hi; ++j) {
      int best = prev[j - 1] + (ai == b[j - 1] ? 0 : 1);
      if (j > lo && cur[j - 1] + 1 < best) best = cur[j - 1] + 1;
      if (j < i + w && prev[j] + 1 < best) best = prev[j] + 1;
      cur[j] = best;
      row_min = std::min(row_min, best);
    }
    if (row_min > tau) return std::nullopt;
    std::swap(prev, cur);
  }
  if (prev[m] > tau) return std::nullopt;
  return prev[m];
}

template <class T>
std::optional<int> bounded_edit_distance(const std::vector<T>& a,
                                         const std::vector<T>& b, int tau) {
  return bounded_edit_distance(std::span<const T>(a), std::span<const T>(b),
                               tau);
}

// Edit-distance budget of Eq-style thresholding: gamma * min(|a|, |b|).
// The integer distance is compared against this exact real product.
inline double distance_budget(double gamma, std::size_t la, std::size_t lb) {
  return gamma * static_cast<double>(std::min(la, lb));
}

// Largest integer distance admitted by the budget.
inline int budget_floor(double gamma, std::size_t la, std::size_t lb) {
  return static_cast<int>(distance_budget(gamma, la, lb));
}

template <class T>
bool passes_threshold(std::span<const T> a, std::span<const T> b,
                      double gamma) {
  int tau = budget_floor(gamma, a.size(), b.size());
  auto d = bounded_edit_distance(a, b, tau);
  return d.has_value() &&
         static_cast<double>(*d) <= distance_budget(gamma, a.size(), b.size());
}

template <class T>
bool passes_threshold(const std::vector<T>& a, const std::vector<T>& b,
                      double gamma) {
  return passes_threshold(std::span<const T>(a), std::span<const T>(b), gamma);
}

}  // namespace eag

#endif  // EAG_EDIT_DISTANCE_HPP
