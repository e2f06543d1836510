#ifndef EAG_CORPUS_HPP
#define EAG_CORPUS_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace eag {

// Reserved sentence-boundary token. Stripped from corpus tokens at
// normalization time so it can never collide with real text.
inline constexpr const char* kSepToken = "<sep>";

struct LanguageTag {
  std::string code;  // short lowercase identifier, e.g. "de"

  static LanguageTag parse(const std::string& code);
  bool operator==(const LanguageTag& o) const { return code == o.code; }
  bool operator!=(const LanguageTag& o) const { return code != o.code; }
};

struct NormConfig {
  bool fold_case = false;

  std::string norm_id() const { return fold_case ? "nfc-ws-fold" : "nfc-ws"; }
};

struct Sentence {
  std::string raw;                  // input line as read
  std::vector<std::string> tokens;  // normalize(raw, norm_id)
  std::string norm_id;

  bool empty() const { return tokens.empty(); }
  std::size_t size() const { return tokens.size(); }
  std::string joined() const;  // tokens joined with single spaces
};

// NFC composition, whitespace collapapse, optional case folding, whitespace
// split. Tokens equal to or containing the separator literal are cleaned.
// Throws DataError on invalid UTF-8.
Sentence normalize(const std::string& raw, const NormConfig& norm);

// Full Unicode case folding of one token (used for pivot-side similarity).
std::string fold_token(const std::string& token);

struct BitextCorpus {
  std::string corpus_id;
  LanguageTag pivot_lang;
  LanguageTag other_lang;
  std::vector<Sentence> pivot;  // same length as `other`
  std::vector<Sentence> other;
  std::size_t dropped = 0;  // pairs removed because one side normalized empty

  std::size_t size() const { return pivot.size(); }
};

// Two line-aligned files, one sentence per line. Line-count mismatch and
// undecodable bytes are hard errors.
BitextCorpus load_bitext(const std::string& pivot_path,
                         const std::string& other_path,
                         const LanguageTag& pivot_lang,
                         const LanguageTag& other_lang,
                         const NormConfig& norm);

// Single TSV file, pivot column TAB other column.
BitextCorpus load_bitext_tsv(const std::string& path,
                             const LanguageTag& pivot_lang,
                             const LanguageTag& other_lang,
                             const NormConfig& norm);

}  // namespace eag

#endif  // EAG_CORPUS_HPP
