#ifndef EAG_GENERATOR_HPP
#define EAG_GENERATOR_HPP

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "eag/corpus.hpp"
#include "eag/simjoin.hpp"
#include "eag/transport.hpp"

namespace eag {

// Pivot-token to target-token map for the edit-replay generator.
// TSV, one entry per line: pivot TAB target.
struct Lexicon {
  std::unordered_map<std::string, std::string> entries;

  static Lexicon load_tsv(const std::string& path);
  const std::string* find(const std::string& pivot_token) const;
};

struct ReplayOutcome {
  std::vector<std::string> tokens;
  std::uint32_t copied_through = 0;  // pivot tokens missing from the lexicon
  std::uint32_t skipped = 0;         // edits clamped off an empty sequence
};

// Deterministic stand-in generator: computes the x2 -> x1 edit script and
// replays it onto y2, mapping inserted/substituted pivot tokens through the
// lexicon. The k-th pivot edit lands on the k-th position of y2 (source
// position plus the net length shift of earlier edits, clamped).
ReplayOutcome edit_replay_generate(const std::vector<std::string>& x2_pivot,
                                   const std::vector<std::string>& x1_pivot,
                                   const std::vector<std::string>& y2,
                                   const Lexicon& lexicon);

struct FilterConfig {
  double min_ratio = 0.5;  // |hypothesis| / |y2| admission bounds
  double max_ratio = 2.0;
};

enum class RejectReason { Empty, Sep, Ratio };
const char* reject_reason_name(RejectReason reason);

struct Provenance {
  std::string left_corpus, right_corpus;
  std::uint32_t left_index = 0, right_index = 0;
  int distance = 0;
  std::string generator;  // "edit-replay" or a remote generator id
};

struct MultiWayExample {
  std::vector<std::string> pivot;  // x1, verbatim from the candidate
  std::vector<std::string> left;   // y1, verbatim from the candidate
  std::vector<std::string> right;  // generated hypothesis
  LanguageTag left_lang, right_lang;
  Provenance provenance;
};

struct AssembleOutcome {
  std::optional<MultiWayExample> example;
  std::optional<RejectReason> rejection;
};

// Accepts the hypothesis iff it is non-empty, free of the separator token,
// and within the length-ratio bounds relative to y2.
AssembleOutcome assemble_multiway(const CandidateRecord& cand,
                                  const std::vector<std::string>& hypothesis,
                                  const LanguageTag& left_lang,
                                  const LanguageTag& right_lang,
                                  const FilterConfig& filters,
                                  const std::string& generator_id);

struct GenerationRun {
  std::string generator = "edit-replay";  // or "remote"
  FilterConfig filters;
  TransportConfig transport;
  Lexicon lexicon;               // edit-replay only
  std::string checkpoint_path;   // empty = no checkpointing
  std::uint64_t resume_after = 0;  // candidates [0, resume_after) are done
  bool resume = false;
};

struct GenerationReport {
  std::size_t candidates = 0;
  std::size_t accepted = 0;
  std::map<std::string, std::size_t> rejected;  // reason -> count
  std::uint64_t copied_through = 0;
  std::size_t rejected_total() const;
};

// Runs generation + assembly over candidates in order. On a transport
// failure the checkpoint file names the last fully processed candidate
// index so the run can resume.
GenerationReport run_generation(
    const std::vector<CandidateRecord>& candidates,
    const LanguageTag& left_lang, const LanguageTag& right_lang,
    const GenerationRun& run,
    const std::function<void(const MultiWayExample&)>& sink);

void write_multiway_jsonl(const MultiWayExample& ex, std::ostream& out);
std::vector<MultiWayExample> read_multiway_jsonl(std::istream& in);

// Build the generator input "x1 <sep> y2" for one candidate.
std::string generation_source(const CandidateRecord& cand);

}  // namespace eag

#endif  // EAG_GENERATOR_HPP
