#include "eag/vocabulary.hpp"

#include <algorithm>
#include <unordered_map>

#include "eag/errors.hpp"

namespace eag {

Vocabulary Vocabulary::from_counts(std::vector<Entry> entries,
                                   std::string source_corpus_id) {
  std::sort(entries.begin(), entries.end(),
            [](const Entry& a, const Entry& b) { return a.token < b.token; });
  Vocabulary v;
  v.entries_ = std::move(entries);
  v.source_corpus_id_ = std::move(source_corpus_id);
  v.cum_.reserve(v.entries_.size());
  for (const Entry& e : v.entries_) {
    v.total_ += e.count;
    v.cum_.push_back(v.total_);
  }
  return v;
}

std::uint64_t Vocabulary::count(const std::string& token) const {
  auto it = std::lower_bound(
      entries_.begin(), entries_.end(), token,
      [](const Entry& e, const std::string& t) { return e.token < t; });
  if (it == entries_.end() || it->token != token) return 0;
  return it->count;
}

const std::string& Vocabulary::sample(RandomSource& rng,
                                      SampleMode mode) const {
  if (entries_.empty()) throw DataError("sampling from an empty vocabulary");
  if (mode == SampleMode::Uniform) {
    return entries_[rng.uniform_index(entries_.size())].token;
  }
  std::uint64_t pick = rng.uniform_index(total_);
  auto it = std::upper_bound(cum_.begin(), cum_.end(), pick);
  return entries_[static_cast<std::size_t>(it - cum_.begin())].token;
}

Vocabulary build_vocabulary(const BitextCorpus& corpus, CorpusSide side) {
  if (corpus.size() == 0)
    throw DataError("cannot build a vocabulary from an empty corpus: " +
                    corpus.corpus_id);
  const std::vector<Sentence>& sents =
      side == CorpusSide::Pivot ? corpus.pivot : corpus.other;
  std::unordered_map<std::string, std::uint64_t> counts;
  for (const Sentence& s : sents)
    for (const std::string& tok : s.tokens) ++counts[tok];

  std::vector<Vocabulary::Entry> entries;
  entries.reserve(counts.size());
  for (auto& [token, count] : counts) entries.push_back({token, count});
  return Vocabulary::from_counts(std::move(entries), corpus.corpus_id);
}

}  // namespace eag
