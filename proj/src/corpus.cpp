#include "eag/corpus.hpp"

#include <unicode/normalizer2.h>
#include <unicode/uchar.h>
#include <unicode/unistr.h>

#include <cctype>
#include <fstream>
#include <sstream>

#include "eag/errors.hpp"

namespace eag {

LanguageTag LanguageTag::parse(const std::string& code) {
  if (code.empty()) throw UsageError("language tag must be non-empty");
  for (char c : code) {
    if (std::isspace(static_cast<unsigned char>(c)))
      throw UsageError("language tag '" + code + "' contains whitespace");
    if (std::isupper(static_cast<unsigned char>(c)))
      throw UsageError("language tag '" + code + "' must be lowercase");
  }
  return LanguageTag{code};
}

std::string Sentence::joined() const {
  std::string out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i) out += ' ';
    out += tokens[i];
  }
  return out;
}

namespace {

bool valid_utf8(const std::string& s) {
  const unsigned char* p = reinterpret_cast<const unsigned char*>(s.data());
  std::size_t n = s.size();
  std::size_t i = 0;
  while (i < n) {
    unsigned char c = p[i];
    std::size_t len;
    std::uint32_t cp;
    if (c < 0x80) {
      ++i;
      continue;
    } else if ((c & 0xE0) == 0xC0) {
      len = 2;
      cp = c & 0x1F;
    } else if ((c & 0xF0) == 0xE0) {
      len = 3;
      cp = c & 0x0F;
    } else if ((c & 0xF8) == 0xF0) {
      len = 4;
      cp = c & 0x07;
    } else {
      return false;
    }
    if (i + len > n) return false;
    for (std::size_t k = 1; k < len; ++k) {
      if ((p[i + k] & 0xC0) != 0x80) return false;
      cp = (cp << 6) | (p[i + k] & 0x3F);
    }
    // overlongs, surrogates, out of range
    if (len == 2 && cp < 0x80) return false;
    if (len == 3 && cp < 0x800) return false;
    if (len == 4 && cp < 0x10000) return false;
    if (cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) return false;
    i += len;
  }
  return true;
}

const icu::Normalizer2& nfc() {
  UErrorCode ec = U_ZERO_ERROR;
  const icu::Normalizer2* norm = icu::Normalizer2::getNFCInstance(ec);
  if (U_FAILURE(ec) || norm == nullptr)
    throw DataError("ICU NFC normalizer unavailable");
  return *norm;
}

// Remove every occurrence of the separator literal, rescanning so removals
// cannot splice a new occurrence together.
void strip_sep(std::string& token) {
  const std::string sep = kSepToken;
  std::size_t pos;
  while ((pos = token.find(sep)) != std::string::npos)
    token.erase(pos, sep.size());
}

}  // namespace

std::string fold_token(const std::string& token) {
  icu::UnicodeString u = icu::UnicodeString::fromUTF8(token);
  u.foldCase();
  std::string out;
  u.toUTF8String(out);
  return out;
}

Sentence normalize(const std::string& raw, const NormConfig& norm) {
  if (!valid_utf8(raw)) throw DataError("invalid UTF-8");

  icu::UnicodeString u = icu::UnicodeString::fromUTF8(raw);
  UErrorCode ec = U_ZERO_ERROR;
  icu::UnicodeString composed = nfc().normalize(u, ec);
  if (U_FAILURE(ec)) throw DataError("NFC normalization failed");
  if (norm.fold_case) composed.foldCase();

  Sentence sent;
  sent.raw = raw;
  sent.norm_id = norm.norm_id();

  std::string token;
  auto flush = [&] {
    if (!token.empty()) {
      strip_sep(token);
      if (!token.empty()) sent.tokens.push_back(std::move(token));
      token.clear();
    }
  };
  for (std::int32_t i = 0; i < composed.length();) {
    UChar32 cp = composed.char32At(i);
    i += U16_LENGTH(cp);
    if (u_isUWhiteSpace(cp) || cp == '\t' || cp == '\r' || cp == '\n') {
      flush();
    } else {
      icu::UnicodeString one(cp);
      one.toUTF8String(token);
    }
  }
  flush();
  return sent;
}

namespace {

std::vector<std::string> read_lines(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path);
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) lines.push_back(line);
  if (in.bad()) throw DataError("read error on " + path);
  return lines;
}

std::string basename_of(const std::string& path) {
  std::size_t pos = path.find_last_of('/');
  return pos == std::string::npos ? path : path.substr(pos + 1);
}

BitextCorpus assemble_corpus(std::vector<std::string> pivot_lines,
                             std::vector<std::string> other_lines,
                             const std::string& pivot_name,
                             const std::string& other_name,
                             const LanguageTag& pivot_lang,
                             const LanguageTag& other_lang,
                             const NormConfig& norm) {
  if (pivot_lines.size() != other_lines.size()) {
    std::ostringstream msg;
    msg << "line count mismatch: " << pivot_name << " has "
        << pivot_lines.size() << " lines, " << other_name << " has "
        << other_lines.size();
    throw DataError(msg.str());
  }

  BitextCorpus corpus;
  corpus.corpus_id = pivot_lang.code + "-" + other_lang.code + ":" +
                     basename_of(pivot_name);
  corpus.pivot_lang = pivot_lang;
  corpus.other_lang = other_lang;
  corpus.pivot.reserve(pivot_lines.size());
  corpus.other.reserve(other_lines.size());

  for (std::size_t i = 0; i < pivot_lines.size(); ++i) {
    Sentence p, o;
    try {
      p = normalize(pivot_lines[i], norm);
      o = normalize(other_lines[i], norm);
    } catch (const DataError& e) {
      std::ostringstream msg;
      msg << e.what() << " at line " << (i + 1) << " of " << pivot_name << "/"
          << other_name;
      throw DataError(msg.str());
    }
    if (p.empty() || o.empty()) {
      ++corpus.dropped;
      continue;
    }
    corpus.pivot.push_back(std::move(p));
    corpus.other.push_back(std::move(o));
  }
  return corpus;
}

}  // namespace

BitextCorpus load_bitext(const std::string& pivot_path,
                         const std::string& other_path,
                         const LanguageTag& pivot_lang,
                         const LanguageTag& other_lang,
                         const NormConfig& norm) {
  return assemble_corpus(read_lines(pivot_path), read_lines(other_path),
                         pivot_path, other_path, pivot_lang, other_lang, norm);
}

BitextCorpus load_bitext_tsv(const std::string& path,
                             const LanguageTag& pivot_lang,
                             const LanguageTag& other_lang,
                             const NormConfig& norm) {
  std::vector<std::string> pivot_lines, other_lines;
  std::size_t lineno = 0;
  for (std::string& line : read_lines(path)) {
    ++lineno;
    std::size_t tab = line.find('\t');
    if (tab == std::string::npos) {
      std::ostringstream msg;
      msg << path << ":" << lineno << ": expected two TAB-separated columns";
      throw DataError(msg.str());
    }
    pivot_lines.push_back(line.substr(0, tab));
    other_lines.push_back(line.substr(tab + 1));
  }
  return assemble_corpus(std::move(pivot_lines), std::move(other_lines), path,
                         path, pivot_lang, other_lang, norm);
}

}  // namespace eag
