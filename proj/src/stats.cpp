#include "eag/stats.hpp"

#include <algorithm>
#include <iomanip>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "eag/errors.hpp"

namespace eag {

std::uint64_t CorpusStats::at(const std::string& a,
                              const std::string& b) const {
  auto ia = std::find(languages.begin(), languages.end(), a);
  auto ib = std::find(languages.begin(), languages.end(), b);
  if (ia == languages.end() || ib == languages.end())
    throw DataError("unknown language in stats lookup: " + a + "/" + b);
  return counts[static_cast<std::size_t>(ia - languages.begin())]
               [static_cast<std::size_t>(ib - languages.begin())];
}

CorpusStats stats_matrix(const std::vector<PairCount>& pairs) {
  std::set<std::string> langs;
  for (const PairCount& p : pairs) {
    langs.insert(p.lang_a);
    langs.insert(p.lang_b);
  }
  CorpusStats stats;
  stats.languages.assign(langs.begin(), langs.end());
  const std::size_t n = stats.languages.size();
  stats.counts.assign(n, std::vector<std::uint64_t>(n, 0));
  auto index_of = [&](const std::string& lang) {
    return static_cast<std::size_t>(
        std::find(stats.languages.begin(), stats.languages.end(), lang) -
        stats.languages.begin());
  };
  for (const PairCount& p : pairs) {
    if (p.lang_a == p.lang_b)
      throw DataError("pair count with identical languages: " + p.lang_a);
    std::size_t i = index_of(p.lang_a), j = index_of(p.lang_b);
    stats.counts[i][j] += p.count;
    stats.counts[j][i] += p.count;
  }
  return stats;
}

std::string render_stats_table(const CorpusStats& stats) {
  std::size_t width = 8;
  for (const std::string& lang : stats.languages)
    width = std::max(width, lang.size() + 2);
  for (const auto& row : stats.counts)
    for (std::uint64_t c : row)
      width = std::max(width, std::to_string(c).size() + 2);

  std::ostringstream out;
  out << std::setw(static_cast<int>(width)) << "";
  for (const std::string& lang : stats.languages)
    out << std::setw(static_cast<int>(width)) << lang;
  out << '\n';
  for (std::size_t i = 0; i < stats.languages.size(); ++i) {
    out << std::setw(static_cast<int>(width)) << stats.languages[i];
    for (std::size_t j = 0; j < stats.languages.size(); ++j) {
      if (i == j)
        out << std::setw(static_cast<int>(width)) << "-";
      else
        out << std::setw(static_cast<int>(width)) << stats.counts[i][j];
    }
    out << '\n';
  }
  return out.str();
}

std::string stats_to_json(const CorpusStats& stats) {
  nlohmann::json j{{"languages", stats.languages},
                   {"counts", stats.counts}};
  return j.dump(2);
}

}  // namespace eag
