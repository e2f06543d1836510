#include "eag/mixture.hpp"

#include <algorithm>
#include <cmath>

#include "eag/errors.hpp"

namespace eag {

std::vector<double> temperature_probs(
    const std::vector<std::pair<std::string, std::uint64_t>>& available,
    double temperature) {
  if (temperature < 1.0) throw UsageError("temperature must be >= 1");
  std::vector<double> weights(available.size(), 0.0);
  double sum = 0.0;
  for (std::size_t i = 0; i < available.size(); ++i) {
    weights[i] = std::pow(static_cast<double>(available[i].second),
                          1.0 / temperature);
    sum += weights[i];
  }
  if (sum > 0.0)
    for (double& w : weights) w /= sum;
  return weights;
}

namespace {

// Largest-remainder apportionment of `total` across the active slots.
// Fraction ties go to the larger availability, then to input order.
std::vector<std::uint64_t> apportion(
    const std::vector<std::pair<std::string, std::uint64_t>>& slots,
    const std::vector<double>& probs, std::uint64_t total) {
  const std::size_t n = slots.size();
  std::vector<std::uint64_t> counts(n, 0);
  std::vector<std::pair<double, std::size_t>> fractions;
  std::uint64_t assigned = 0;
  for (std::size_t i = 0; i < n; ++i) {
    double raw = probs[i] * static_cast<double>(total);
    counts[i] = static_cast<std::uint64_t>(std::floor(raw));
    assigned += counts[i];
    fractions.emplace_back(raw - std::floor(raw), i);
  }
  std::sort(fractions.begin(), fractions.end(),
            [&](const auto& a, const auto& b) {
              if (a.first != b.first) return a.first > b.first;
              if (slots[a.second].second != slots[b.second].second)
                return slots[a.second].second > slots[b.second].second;
              return a.second < b.second;
            });
  for (std::size_t k = 0; assigned < total && k < fractions.size(); ++k) {
    ++counts[fractions[k].second];
    ++assigned;
  }
  return counts;
}

}  // namespace

MixturePlan temperature_sample(
    const std::vector<std::pair<std::string, std::uint64_t>>& available,
    double temperature, std::uint64_t total) {
  std::uint64_t sum_avail = 0;
  for (const auto& [key, n] : available) sum_avail += n;
  if (total > sum_avail)
    throw DataError("requested " + std::to_string(total) +
                    " examples but only " + std::to_string(sum_avail) +
                    " are available");

  MixturePlan plan;
  plan.temperature = temperature;
  plan.total = total;
  std::vector<double> nominal = temperature_probs(available, temperature);
  plan.slots.resize(available.size());
  for (std::size_t i = 0; i < available.size(); ++i)
    plan.slots[i] = {available[i].first, available[i].second, nominal[i], 0};

  // Apportion, clamp to availability, and redistribute the clamped surplus
  // among the remaining slots by the same rule.
  std::vector<std::size_t> active(available.size());
  for (std::size_t i = 0; i < active.size(); ++i) active[i] = i;
  std::uint64_t remaining = total;
  while (remaining > 0 && !active.empty()) {
    std::vector<std::pair<std::string, std::uint64_t>> sub;
    sub.reserve(active.size());
    for (std::size_t i : active) sub.push_back(available[i]);
    std::vector<std::uint64_t> counts =
        apportion(sub, temperature_probs(sub, temperature), remaining);

    bool clamped = false;
    std::vector<std::size_t> next_active;
    for (std::size_t k = 0; k < active.size(); ++k) {
      std::size_t i = active[k];
      if (counts[k] > available[i].second) {
        plan.slots[i].count = available[i].second;
        remaining -= available[i].second;
        clamped = true;
      } else {
        next_active.push_back(i);
      }
    }
    if (!clamped) {
      for (std::size_t k = 0; k < active.size(); ++k)
        plan.slots[active[k]].count = counts[k];
      remaining = 0;
      break;
    }
    active = std::move(next_active);
  }
  return plan;
}

std::string prepend_language_token(const std::string& source,
                                   const LanguageTag& target_lang) {
  return "<2" + target_lang.code + "> " + source;
}

bool is_language_token(const std::string& field) {
  if (field.size() < 4) return false;
  if (field[0] != '<' || field[1] != '2' || field.back() != '>') return false;
  for (std::size_t i = 2; i + 1 < field.size(); ++i) {
    char c = field[i];
    if (!((c >= 'a' && c <= 'z') || (c >= '0' && c <= '9'))) return false;
  }
  return true;
}

}  // namespace eag
