#ifndef EAG_STATS_HPP
#define EAG_STATS_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace eag {

// Symmetric language x language matrix of available example counts.
struct CorpusStats {
  std::vector<std::string> languages;            // sorted
  std::vector<std::vector<std::uint64_t>> counts;  // square, zero diagonal

  std::uint64_t at(const std::string& a, const std::string& b) const;
};

struct PairCount {
  std::string lang_a, lang_b;
  std::uint64_t count = 0;
};

CorpusStats stats_matrix(const std::vector<PairCount>& pairs);

std::string render_stats_table(const CorpusStats& stats);
std::string stats_to_json(const CorpusStats& stats);

}  // namespace eag

#endif  // EAG_STATS_HPP
