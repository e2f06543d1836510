#ifndef EAG_SIMJOIN_HPP
#define EAG_SIMJOIN_HPP

#include <cstdint>
#include <iosfwd>
#include <string>
#include <unordered_map>
#include <vector>

#include "eag/corpus.hpp"

namespace eag {

struct JoinConfig {
  double gamma = 0.3;  // in [0, 1)
  int qgram = 2;       // token q-gram size for the count filter
  std::size_t min_tokens = 1;
  std::size_t max_tokens = 0;  // 0 = unlimited
  std::size_t max_pairs_per_example = 0;  // per-left fan-out cap, 0 = unlimited
  int bucket_width = 1;  // length bucket granularity
  bool fold_case = true;  // fold pivot tokens before measuring similarity

  void validate() const;  // throws UsageError
};

// One Eq-1 hit: pivot sides of (left_index, right_index) are within budget.
struct Candidate {
  std::uint32_t left_index = 0;
  std::uint32_t right_index = 0;
  int distance = 0;
  double threshold = 0.0;  // gamma * min(|x1|, |x2|)
};

struct JoinStats {
  std::size_t indexed = 0;        // right-side sentences admitted to the index
  std::size_t skipped_left = 0;   // probes outside [min_tokens, max_tokens]
  std::size_t skipped_right = 0;
  std::size_t verified = 0;       // banded verifications performed
  std::size_t emitted = 0;        // candidates after dedup and fan-out cap
  std::size_t duplicates = 0;     // content-identical quadruples collapsed
};

struct JoinResult {
  std::vector<Candidate> candidates;  // sorted by (left_index, right_index)
  JoinStats stats;
};

// Pivot tokens interned to dense ids; one dictionary is shared by both sides
// of a join so distances reduce to integer compares.
class TokenDict {
 public:
  std::uint32_t intern(const std::string& token);
  std::size_t size() const { return map_.size(); }

 private:
  std::unordered_map<std::string, std::uint32_t> map_;
};

struct IdSentences {
  std::vector<std::vector<std::uint32_t>> rows;
};

// Pivot side of a corpus as interned (optionally case-folded) token ids.
IdSentences intern_pivot(const BitextCorpus& corpus, TokenDict& dict,
                         bool fold_case);

// Inverted q-gram index over the admitted sentences of one interned corpus.
// Postings carry exact sentence lengths; lists are sorted by (length, id).
class SimIndex {
 public:
  struct Posting {
    std::uint32_t len;
    std::uint32_t id;
    std::uint32_t occ;  // occurrences of the gram in sentence id
  };

  SimIndex(const IdSentences& sents, const JoinConfig& cfg);

  const std::vector<Posting>* find(std::uint64_t gram) const;
  // Admitted sentence ids of the given exact token length.
  const std::vector<std::uint32_t>& ids_of_length(std::size_t len) const;
  std::size_t max_length() const { return by_length_.size(); }
  std::size_t indexed() const { return indexed_; }
  std::size_t skipped() const { return skipped_; }
  int qgram() const { return qgram_; }

  // Total posting occurrences; equals the summed q-gram counts of admitted
  // sentences.
  std::uint64_t posting_occurrences() const;

  // Sorted unique sentence ids referenced by any posting.
  std::vector<std::uint32_t> posting_ids() const;

  static std::uint64_t gram_hash(const std::uint32_t* ids, int q);

 private:
  int qgram_;
  std::unordered_map<std::uint64_t, std::vector<Posting>> postings_;
  std::vector<std::vector<std::uint32_t>> by_length_;
  std::vector<std::uint32_t> empty_;
  std::size_t indexed_ = 0;
  std::size_t skipped_ = 0;
};

// Indexed similarity join over the pivot sides: length filter, q-gram count
// filter, banded verification. Filters are loss-free; the result set equals
// the brute-force evaluation. Parallel over left-corpus rows.
JoinResult extract_candidates(const BitextCorpus& left,
                              const BitextCorpus& right,
                              const JoinConfig& cfg);

// Literal all-pairs evaluation of the threshold rule. Serial reference used
// as the test oracle; refuses quadratic work above pair_cap.
JoinResult brute_force_candidates(const BitextCorpus& left,
                                  const BitextCorpus& right, double gamma,
                                  std::uint64_t pair_cap = 16ull << 20);

// One JSON object per line: {left_corpus, right_corpus, left_index,
// right_index, x1, y1, x2, y2, distance, threshold}.
void write_candidates_jsonl(const BitextCorpus& left, const BitextCorpus& right,
                            const std::vector<Candidate>& candidates,
                            std::ostream& out);

struct CandidateRecord {
  std::string left_corpus, right_corpus;
  std::uint32_t left_index = 0, right_index = 0;
  std::vector<std::string> x1, y1, x2, y2;
  int distance = 0;
  double threshold = 0.0;
};

std::vector<CandidateRecord> read_candidates_jsonl(std::istream& in);

}  // namespace eag

#endif  // EAG_SIMJOIN_HPP
