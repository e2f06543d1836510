#ifndef EAG_MIXTURE_HPP
#define EAG_MIXTURE_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "eag/corpus.hpp"

namespace eag {

struct MixturePlan {
  struct Slot {
    std::string key;  // language pair or target language
    std::uint64_t available = 0;
    double probability = 0.0;  // n^(1/T) / sum
    std::uint64_t count = 0;
  };

  std::vector<Slot> slots;
  std::uint64_t total = 0;
  double temperature = 1.0;
};

// Sampling probabilities p_i = n_i^(1/T) / sum_j n_j^(1/T) over the given
// (key, count) slots, in input order.
std::vector<double> temperature_probs(
    const std::vector<std::pair<std::string, std::uint64_t>>& available,
    double temperature);

// Largest-remainder rounding of p_i * total, clamped to availability with
// the clamped surplus redistributed among the remaining slots by the same
// rule. Errors when total exceeds the summed availability.
MixturePlan temperature_sample(
    const std::vector<std::pair<std::string, std::uint64_t>>& available,
    double temperature, std::uint64_t total);

// "<2xx> " + source, where xx is the target language code.
std::string prepend_language_token(const std::string& source,
                                   const LanguageTag& target_lang);

bool is_language_token(const std::string& field);

}  // namespace eag

#endif  // EAG_MIXTURE_HPP
