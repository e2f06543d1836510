#ifndef EAG_VOCABULARY_HPP
#define EAG_VOCABULARY_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "eag/corpus.hpp"
#include "eag/random.hpp"

namespace eag {

enum class SampleMode { Frequency, Uniform };

enum class CorpusSide { Pivot, Other };

// Token occurrence counts of one corpus side. Entries are kept sorted by
// token so seeded sampling is reproducible.
class Vocabulary {
 public:
  struct Entry {
    std::string token;
    std::uint64_t count;
  };

  static Vocabulary from_counts(std::vector<Entry> entries,
                                std::string source_corpus_id);

  const std::vector<Entry>& entries() const { return entries_; }
  std::uint64_t total() const { return total_; }
  const std::string& source_corpus_id() const { return source_corpus_id_; }
  bool empty() const { return entries_.empty(); }
  std::uint64_t count(const std::string& token) const;

  const std::string& sample(RandomSource& rng, SampleMode mode) const;

 private:
  std::vector<Entry> entries_;      // sorted by token
  std::vector<std::uint64_t> cum_;  // inclusive prefix sums of counts
  std::uint64_t total_ = 0;
  std::string source_corpus_id_;
};

// Counts every token occurrence on the chosen side. Empty corpus is an error.
Vocabulary build_vocabulary(const BitextCorpus& corpus, CorpusSide side);

}  // namespace eag

#endif  // EAG_VOCABULARY_HPP
