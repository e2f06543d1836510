#include "eag/simjoin.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "eag/edit_distance.hpp"
#include "eag/errors.hpp"
#include "eag/random.hpp"

namespace eag {

using json = nlohmann::json;

void JoinConfig::validate() const {
  if (gamma < 0.0 || gamma >= 1.0)
    throw UsageError("gamma must be in [0, 1)");
  if (qgram < 1) throw UsageError("qgram must be >= 1");
  if (bucket_width < 1) throw UsageError("bucket_width must be >= 1");
  if (max_tokens != 0 && max_tokens < min_tokens)
    throw UsageError("max_tokens < min_tokens");
}

std::uint32_t TokenDict::intern(const std::string& token) {
  auto [it, inserted] =
      map_.emplace(token, static_cast<std::uint32_t>(map_.size()));
  return it->second;
}

IdSentences intern_pivot(const BitextCorpus& corpus, TokenDict& dict,
                         bool fold_case) {
  IdSentences out;
  out.rows.reserve(corpus.size());
  for (const Sentence& s : corpus.pivot) {
    std::vector<std::uint32_t> row;
    row.reserve(s.tokens.size());
    for (const std::string& tok : s.tokens)
      row.push_back(dict.intern(fold_case ? fold_token(tok) : tok));
    out.rows.push_back(std::move(row));
  }
  return out;
}

std::uint64_t SimIndex::gram_hash(const std::uint32_t* ids, int q) {
  std::uint64_t h = 0x9e3779b97f4a7c15ULL;
  for (int k = 0; k < q; ++k) h = (h ^ (ids[k] + 1)) * 0x100000001b3ULL;
  return splitmix64(h);
}

namespace {

bool admitted(std::size_t len, const JoinConfig& cfg) {
  if (len < cfg.min_tokens) return false;
  if (cfg.max_tokens != 0 && len > cfg.max_tokens) return false;
  return true;
}

// Collect (gram hash, multiplicity) pairs of one sentence.
void sentence_grams(const std::vector<std::uint32_t>& row, int q,
                    std::vector<std::pair<std::uint64_t, std::uint32_t>>& out) {
  out.clear();
  if (row.size() < static_cast<std::size_t>(q)) return;
  for (std::size_t i = 0; i + q <= row.size(); ++i)
    out.emplace_back(SimIndex::gram_hash(row.data() + i, q), 1);
  std::sort(out.begin(), out.end());
  std::size_t w = 0;
  for (std::size_t r = 0; r < out.size(); ++r) {
    if (w > 0 && out[w - 1].first == out[r].first) {
      ++out[w - 1].second;
    } else {
      out[w++] = out[r];
    }
  }
  out.resize(w);
}

// Minimum shared q-grams for sequences of these lengths within distance tau.
long required_shared_grams(std::size_t la, std::size_t lb, int q, int tau) {
  return static_cast<long>(std::max(la, lb)) - q + 1 -
         static_cast<long>(tau) * q;
}

}  // namespace

SimIndex::SimIndex(const IdSentences& sents, const JoinConfig& cfg)
    : qgram_(cfg.qgram) {
  std::vector<std::pair<std::uint64_t, std::uint32_t>> grams;
  for (std::size_t id = 0; id < sents.rows.size(); ++id) {
    const auto& row = sents.rows[id];
    if (!admitted(row.size(), cfg)) {
      ++skipped_;
      continue;
    }
    ++indexed_;
    if (row.size() >= by_length_.size()) by_length_.resize(row.size() + 1);
    by_length_[row.size()].push_back(static_cast<std::uint32_t>(id));
    sentence_grams(row, qgram_, grams);
    for (const auto& [g, occ] : grams)
      postings_[g].push_back({static_cast<std::uint32_t>(row.size()),
                              static_cast<std::uint32_t>(id), occ});
  }
  const std::uint32_t w = static_cast<std::uint32_t>(cfg.bucket_width);
  for (auto& [g, list] : postings_) {
    std::sort(list.begin(), list.end(), [w](const Posting& a, const Posting& b) {
      std::uint32_t ba = a.len / w, bb = b.len / w;
      return ba != bb ? ba < bb : a.id < b.id;
    });
  }
}

const std::vector<SimIndex::Posting>* SimIndex::find(std::uint64_t gram) const {
  auto it = postings_.find(gram);
  return it == postings_.end() ? nullptr : &it->second;
}

const std::vector<std::uint32_t>& SimIndex::ids_of_length(
    std::size_t len) const {
  if (len >= by_length_.size()) return empty_;
  return by_length_[len];
}

std::uint64_t SimIndex::posting_occurrences() const {
  std::uint64_t total = 0;
  for (const auto& [g, list] : postings_)
    for (const Posting& p : list) total += p.occ;
  return total;
}

std::vector<std::uint32_t> SimIndex::posting_ids() const {
  std::vector<std::uint32_t> ids;
  for (const auto& [g, list] : postings_)
    for (const Posting& p : list) ids.push_back(p.id);
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  return ids;
}

namespace {

struct Key128 {
  std::uint64_t a, b;
  bool operator==(const Key128&) const = default;
};

struct Key128Hash {
  std::size_t operator()(const Key128& k) const {
    return k.a ^ (k.b * 0x9e3779b97f4a7c15ULL);
  }
};

std::pair<std::uint64_t, std::uint64_t> hash_tokens(
    const std::vector<std::string>& tokens) {
  std::uint64_t h1 = 0xcbf29ce484222325ULL;
  std::uint64_t h2 = 0x84222325cbf29ce4ULL;
  for (const std::string& t : tokens) {
    std::uint64_t th = fnv1a64(t);
    h1 = (h1 ^ th) * 0x100000001b3ULL;
    h2 = splitmix64(h2 ^ th);
  }
  return {h1, h2};
}

// Per-corpus cache of sentence content hashes, filled on demand.
class ContentHashes {
 public:
  explicit ContentHashes(const BitextCorpus& corpus)
      : corpus_(corpus), have_(corpus.size(), 0), hashes_(corpus.size()) {}

  std::pair<std::uint64_t, std::uint64_t> at(std::uint32_t i) {
    if (!have_[i]) {
      auto hp = hash_tokens(corpus_.pivot[i].tokens);
      auto ho = hash_tokens(corpus_.other[i].tokens);
      hashes_[i] = {splitmix64(hp.first ^ ho.second),
                    splitmix64(hp.second ^ ho.first)};
      have_[i] = 1;
    }
    return hashes_[i];
  }

 private:
  const BitextCorpus& corpus_;
  std::vector<std::uint8_t> have_;
  std::vector<std::pair<std::uint64_t, std::uint64_t>> hashes_;
};

// Content dedup (keep the lexicographically smallest index pair), per-left
// fan-out cap, final (left_index, right_index) sort.
void finalize_candidates(std::vector<Candidate>& cands,
                         const BitextCorpus& left, const BitextCorpus& right,
                         std::size_t max_pairs_per_example, JoinStats& stats) {
  ContentHashes lh(left), rh(right);
  std::unordered_map<Key128, std::size_t, Key128Hash> best;
  best.reserve(cands.size() * 2);
  std::vector<char> keep(cands.size(), 0);
  for (std::size_t idx = 0; idx < cands.size(); ++idx) {
    const Candidate& c = cands[idx];
    auto [la, lb] = lh.at(c.left_index);
    auto [ra, rb] = rh.at(c.right_index);
    Key128 key{splitmix64(la ^ rb), splitmix64(lb ^ ra)};
    auto [it, inserted] = best.emplace(key, idx);
    if (inserted) {
      keep[idx] = 1;
    } else {
      ++stats.duplicates;
      const Candidate& prev = cands[it->second];
      if (std::make_pair(c.left_index, c.right_index) <
          std::make_pair(prev.left_index, prev.right_index)) {
        keep[it->second] = 0;
        keep[idx] = 1;
        it->second = idx;
      }
    }
  }
  std::vector<Candidate> out;
  out.reserve(best.size());
  for (std::size_t idx = 0; idx < cands.size(); ++idx)
    if (keep[idx]) out.push_back(cands[idx]);

  if (max_pairs_per_example > 0) {
    std::sort(out.begin(), out.end(), [](const Candidate& x, const Candidate& y) {
      if (x.left_index != y.left_index) return x.left_index < y.left_index;
      if (x.distance != y.distance) return x.distance < y.distance;
      return x.right_index < y.right_index;
    });
    std::vector<Candidate> capped;
    capped.reserve(out.size());
    std::size_t run_start = 0;
    for (std::size_t i = 0; i <= out.size(); ++i) {
      if (i == out.size() || out[i].left_index != out[run_start].left_index) {
        std::size_t take = std::min(max_pairs_per_example, i - run_start);
        for (std::size_t k = 0; k < take; ++k)
          capped.push_back(out[run_start + k]);
        run_start = i;
      }
    }
    out = std::move(capped);
  }

  std::sort(out.begin(), out.end(), [](const Candidate& x, const Candidate& y) {
    if (x.left_index != y.left_index) return x.left_index < y.left_index;
    return x.right_index < y.right_index;
  });
  stats.emitted = out.size();
  cands = std::move(out);
}

void check_join_langs(const BitextCorpus& left, const BitextCorpus& right) {
  if (left.pivot_lang != right.pivot_lang)
    throw DataError("pivot-language mismatch: " + left.pivot_lang.code +
                    " vs " + right.pivot_lang.code);
  if (left.other_lang == right.other_lang)
    throw DataError("join requires two distinct non-pivot languages, got " +
                    left.other_lang.code + " twice");
}

}  // namespace

JoinResult extract_candidates(const BitextCorpus& left,
                              const BitextCorpus& right,
                              const JoinConfig& cfg) {
  cfg.validate();
  check_join_langs(left, right);
  JoinResult result;
  if (left.size() == 0 || right.size() == 0) return result;

  TokenDict dict;
  IdSentences lrows = intern_pivot(left, dict, cfg.fold_case);
  IdSentences rrows = intern_pivot(right, dict, cfg.fold_case);
  SimIndex index(rrows, cfg);
  result.stats.indexed = index.indexed();
  result.stats.skipped_right = index.skipped();

  const double gamma = cfg.gamma;
  const int q = cfg.qgram;
  const std::size_t n_left = lrows.rows.size();
  const std::size_t n_right = rrows.rows.size();
  const std::uint32_t bw = static_cast<std::uint32_t>(cfg.bucket_width);

  const int n_threads = std::max(1, omp_get_max_threads());
  std::vector<std::vector<Candidate>> locals(n_threads);
  std::vector<JoinStats> local_stats(n_threads);

  std::size_t index_max_len =
      index.max_length() > 0 ? index.max_length() - 1 : 0;

#pragma omp parallel num_threads(n_threads)
  {
    const int tid = omp_get_thread_num();
    std::vector<Candidate>& local = locals[tid];
    JoinStats& lstats = local_stats[tid];

    // Epoch-stamped shared-gram counters, reset lazily per probe.
    std::vector<std::uint32_t> count(n_right, 0), stamp(n_right, 0);
    std::uint32_t epoch = 0;
    std::vector<std::uint32_t> touched;
    std::vector<std::pair<std::uint64_t, std::uint32_t>> grams;
    std::vector<char> fallback;

    auto verify = [&](std::uint32_t i, std::uint32_t j) {
      const auto& a = lrows.rows[i];
      const auto& b = rrows.rows[j];
      int tau = budget_floor(gamma, a.size(), b.size());
      ++lstats.verified;
      auto d = bounded_edit_distance(std::span<const std::uint32_t>(a),
                                     std::span<const std::uint32_t>(b), tau);
      if (d.has_value())
        local.push_back({i, j, *d, distance_budget(gamma, a.size(), b.size())});
    };

#pragma omp for schedule(dynamic, 64)
    for (std::size_t i = 0; i < n_left; ++i) {
      const auto& row = lrows.rows[i];
      const std::size_t la = row.size();
      if (!admitted(la, cfg)) {
        ++lstats.skipped_left;
        continue;
      }

      // Admissible right-side lengths under the length filter.
      std::size_t lo =
          static_cast<std::size_t>(std::floor(la / (1.0 + gamma)));
      lo = lo > 1 ? lo - 1 : 1;
      std::size_t hi =
          static_cast<std::size_t>(std::ceil(la * (1.0 + gamma))) + 1;
      hi = std::min(hi, index_max_len);
      while (lo <= hi &&
             static_cast<double>(la > lo ? la - lo : lo - la) >
                 distance_budget(gamma, la, lo))
        ++lo;
      while (hi >= lo &&
             static_cast<double>(la > hi ? la - hi : hi - la) >
                 distance_budget(gamma, la, hi))
        --hi;
      if (lo > hi) continue;

      // Lengths where the count filter is vacuous (or unindexed) get a
      // direct scan; the rest go through the inverted index.
      fallback.assign(hi - lo + 1, 0);
      bool any_indexed_probe = false;
      for (std::size_t L = lo; L <= hi; ++L) {
        int tau = budget_floor(gamma, la, L);
        if (L < static_cast<std::size_t>(q) ||
            required_shared_grams(la, L, q, tau) <= 0) {
          fallback[L - lo] = 1;
          for (std::uint32_t id : index.ids_of_length(L)) verify(
              static_cast<std::uint32_t>(i), id);
        } else {
          any_indexed_probe = true;
        }
      }

      if (!any_indexed_probe || la < static_cast<std::size_t>(q)) continue;

      ++epoch;
      touched.clear();
      sentence_grams(row, q, grams);
      const std::uint32_t lo_bucket = static_cast<std::uint32_t>(lo) / bw;
      const std::uint32_t hi_bucket = static_cast<std::uint32_t>(hi) / bw;
      for (const auto& [g, mult] : grams) {
        const auto* list = index.find(g);
        if (!list) continue;
        auto it = std::lower_bound(
            list->begin(), list->end(), lo_bucket,
            [bw](const SimIndex::Posting& p, std::uint32_t bucket) {
              return p.len / bw < bucket;
            });
        for (; it != list->end() && it->len / bw <= hi_bucket; ++it) {
          if (it->len < lo || it->len > hi || fallback[it->len - lo]) continue;
          if (stamp[it->id] != epoch) {
            stamp[it->id] = epoch;
            count[it->id] = 0;
            touched.push_back(it->id);
          }
          count[it->id] += std::min(mult, it->occ);
        }
      }
      for (std::uint32_t id : touched) {
        const std::size_t lb = rrows.rows[id].size();
        int tau = budget_floor(gamma, la, lb);
        if (static_cast<long>(count[id]) >=
            required_shared_grams(la, lb, q, tau))
          verify(static_cast<std::uint32_t>(i), id);
      }
    }
  }

  std::vector<Candidate> merged;
  std::size_t total = 0;
  for (const auto& v : locals) total += v.size();
  merged.reserve(total);
  for (auto& v : locals)
    merged.insert(merged.end(), v.begin(), v.end());
  for (const JoinStats& s : local_stats) {
    result.stats.skipped_left += s.skipped_left;
    result.stats.verified += s.verified;
  }

  finalize_candidates(merged, left, right, cfg.max_pairs_per_example,
                      result.stats);
  result.candidates = std::move(merged);
  return result;
}

JoinResult brute_force_candidates(const BitextCorpus& left,
                                  const BitextCorpus& right, double gamma,
                                  std::uint64_t pair_cap) {
  if (gamma < 0.0 || gamma >= 1.0) throw UsageError("gamma must be in [0, 1)");
  check_join_langs(left, right);
  JoinResult result;
  if (left.size() == 0 || right.size() == 0) return result;

  const std::uint64_t pairs =
      static_cast<std::uint64_t>(left.size()) * right.size();
  if (pairs > pair_cap) {
    std::ostringstream msg;
    msg << "brute-force join of " << left.size() << " x " << right.size()
        << " sentences exceeds the size cap (" << pair_cap
        << " pair evaluations); use extract_candidates";
    throw DataError(msg.str());
  }

  TokenDict dict;
  IdSentences lrows = intern_pivot(left, dict, true);
  IdSentences rrows = intern_pivot(right, dict, true);

  for (std::uint32_t i = 0; i < lrows.rows.size(); ++i) {
    const auto& a = lrows.rows[i];
    for (std::uint32_t j = 0; j < rrows.rows.size(); ++j) {
      const auto& b = rrows.rows[j];
      int d = edit_distance(std::span<const std::uint32_t>(a),
                            std::span<const std::uint32_t>(b));
      double budget = distance_budget(gamma, a.size(), b.size());
      if (static_cast<double>(d) <= budget)
        result.candidates.push_back({i, j, d, budget});
    }
  }
  finalize_candidates(result.candidates, left, right, 0, result.stats);
  return result;
}

void write_candidates_jsonl(const BitextCorpus& left, const BitextCorpus& right,
                            const std::vector<Candidate>& candidates,
                            std::ostream& out) {
  for (const Candidate& c : candidates) {
    json rec{{"left_corpus", left.corpus_id},
             {"right_corpus", right.corpus_id},
             {"left_index", c.left_index},
             {"right_index", c.right_index},
             {"x1", left.pivot[c.left_index].joined()},
             {"y1", left.other[c.left_index].joined()},
             {"x2", right.pivot[c.right_index].joined()},
             {"y2", right.other[c.right_index].joined()},
             {"distance", c.distance},
             {"threshold", c.threshold}};
    out << rec.dump() << '\n';
  }
}

namespace {

std::vector<std::string> split_tokens(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream ss(line);
  std::string tok;
  while (ss >> tok) out.push_back(std::move(tok));
  return out;
}

}  // namespace

std::vector<CandidateRecord> read_candidates_jsonl(std::istream& in) {
  std::vector<CandidateRecord> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    json rec;
    try {
      rec = json::parse(line);
    } catch (const json::parse_error& e) {
      throw DataError("bad candidate record at line " +
                      std::to_string(lineno) + ": " + e.what());
    }
    CandidateRecord c;
    c.left_corpus = rec.value("left_corpus", "");
    c.right_corpus = rec.value("right_corpus", "");
    c.left_index = rec.at("left_index").get<std::uint32_t>();
    c.right_index = rec.at("right_index").get<std::uint32_t>();
    c.x1 = split_tokens(rec.at("x1").get<std::string>());
    c.y1 = split_tokens(rec.at("y1").get<std::string>());
    c.x2 = split_tokens(rec.at("x2").get<std::string>());
    c.y2 = split_tokens(rec.at("y2").get<std::string>());
    c.distance = rec.at("distance").get<int>();
    c.threshold = rec.at("threshold").get<double>();
    out.push_back(std::move(c));
  }
  return out;
}

}  // namespace eag
