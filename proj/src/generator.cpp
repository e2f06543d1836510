#include "eag/generator.hpp"

#include <omp.h>

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <fstream>
#include <istream>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>

#include "eag/edit_script.hpp"
#include "eag/errors.hpp"

namespace eag {

using json = nlohmann::json;

Lexicon Lexicon::load_tsv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open lexicon " + path);
  Lexicon lex;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::size_t tab = line.find('\t');
    if (tab == std::string::npos)
      throw DataError(path + ":" + std::to_string(lineno) +
                      ": expected pivot TAB target");
    lex.entries[line.substr(0, tab)] = line.substr(tab + 1);
  }
  return lex;
}

const std::string* Lexicon::find(const std::string& pivot_token) const {
  auto it = entries.find(pivot_token);
  return it == entries.end() ? nullptr : &it->second;
}

ReplayOutcome edit_replay_generate(const std::vector<std::string>& x2_pivot,
                                   const std::vector<std::string>& x1_pivot,
                                   const std::vector<std::string>& y2,
                                   const Lexicon& lexicon) {
  std::vector<std::string> src(x2_pivot.size()), dst(x1_pivot.size());
  std::transform(x2_pivot.begin(), x2_pivot.end(), src.begin(), fold_token);
  std::transform(x1_pivot.begin(), x1_pivot.end(), dst.begin(), fold_token);
  EditScript script = compute_edit_script(src, dst);

  ReplayOutcome out;
  out.tokens = y2;
  auto mapped = [&](const std::string& pivot_token) {
    if (const std::string* t = lexicon.find(pivot_token)) return *t;
    ++out.copied_through;
    return pivot_token;
  };

  long shift = 0;  // net length change from edits already applied
  for (const EditOp& op : script.ops) {
    if (op.kind == EditOp::Kind::Keep) continue;
    long pos = static_cast<long>(op.pos) + shift;
    switch (op.kind) {
      case EditOp::Kind::Insert: {
        pos = std::clamp(pos, 0L, static_cast<long>(out.tokens.size()));
        out.tokens.insert(out.tokens.begin() + pos, mapped(op.token));
        ++shift;
        break;
      }
      case EditOp::Kind::Delete: {
        if (out.tokens.empty()) {
          ++out.skipped;
          break;
        }
        pos = std::clamp(pos, 0L, static_cast<long>(out.tokens.size()) - 1);
        out.tokens.erase(out.tokens.begin() + pos);
        --shift;
        break;
      }
      case EditOp::Kind::Substitute: {
        if (out.tokens.empty()) {
          ++out.skipped;
          break;
        }
        pos = std::clamp(pos, 0L, static_cast<long>(out.tokens.size()) - 1);
        out.tokens[static_cast<std::size_t>(pos)] = mapped(op.token);
        break;
      }
      case EditOp::Kind::Keep:
        break;
    }
  }
  return out;
}

const char* reject_reason_name(RejectReason reason) {
  switch (reason) {
    case RejectReason::Empty:
      return "empty";
    case RejectReason::Sep:
      return "sep";
    case RejectReason::Ratio:
      return "ratio";
  }
  return "unknown";
}

AssembleOutcome assemble_multiway(const CandidateRecord& cand,
                                  const std::vector<std::string>& hypothesis,
                                  const LanguageTag& left_lang,
                                  const LanguageTag& right_lang,
                                  const FilterConfig& filters,
                                  const std::string& generator_id) {
  AssembleOutcome out;
  if (hypothesis.empty()) {
    out.rejection = RejectReason::Empty;
    return out;
  }
  for (const std::string& tok : hypothesis) {
    if (tok == kSepToken) {
      out.rejection = RejectReason::Sep;
      return out;
    }
  }
  if (cand.y2.empty()) {
    out.rejection = RejectReason::Ratio;
    return out;
  }
  double ratio = static_cast<double>(hypothesis.size()) /
                 static_cast<double>(cand.y2.size());
  if (ratio < filters.min_ratio || ratio > filters.max_ratio) {
    out.rejection = RejectReason::Ratio;
    return out;
  }

  MultiWayExample ex;
  ex.pivot = cand.x1;
  ex.left = cand.y1;
  ex.right = hypothesis;
  ex.left_lang = left_lang;
  ex.right_lang = right_lang;
  ex.provenance = {cand.left_corpus, cand.right_corpus, cand.left_index,
                   cand.right_index, cand.distance, generator_id};
  out.example = std::move(ex);
  return out;
}

std::size_t GenerationReport::rejected_total() const {
  std::size_t n = 0;
  for (const auto& [reason, count] : rejected) n += count;
  return n;
}

namespace {

std::string join_tokens(const std::vector<std::string>& tokens) {
  std::string out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i) out += ' ';
    out += tokens[i];
  }
  return out;
}

std::vector<std::string> split_tokens(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream ss(text);
  std::string tok;
  while (ss >> tok) out.push_back(std::move(tok));
  return out;
}

void write_checkpoint(const std::string& path, std::uint64_t last_done) {
  if (path.empty()) return;
  std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    out << json{{"last_done", last_done}}.dump() << '\n';
  }
  std::rename(tmp.c_str(), path.c_str());
}

}  // namespace

std::string generation_source(const CandidateRecord& cand) {
  std::string src = join_tokens(cand.x1);
  src += ' ';
  src += kSepToken;
  src += ' ';
  src += join_tokens(cand.y2);
  return src;
}

GenerationReport run_generation(
    const std::vector<CandidateRecord>& candidates,
    const LanguageTag& left_lang, const LanguageTag& right_lang,
    const GenerationRun& run,
    const std::function<void(const MultiWayExample&)>& sink) {
  GenerationReport report;
  report.candidates = candidates.size();
  const std::size_t start = run.resume ? run.resume_after : 0;

  auto assemble_and_sink = [&](std::size_t idx,
                               const std::vector<std::string>& hyp) {
    AssembleOutcome out = assemble_multiway(candidates[idx], hyp, left_lang,
                                            right_lang, run.filters,
                                            run.generator);
    if (out.example.has_value()) {
      ++report.accepted;
      sink(*out.example);
    } else {
      ++report.rejected[reject_reason_name(*out.rejection)];
    }
  };

  if (run.generator == "edit-replay") {
    const std::size_t n = candidates.size();
    std::vector<ReplayOutcome> outcomes(n);
#pragma omp parallel for schedule(dynamic, 256)
    for (std::size_t i = start; i < n; ++i)
      outcomes[i] = edit_replay_generate(candidates[i].x2, candidates[i].x1,
                                         candidates[i].y2, run.lexicon);
    for (std::size_t i = start; i < n; ++i) {
      report.copied_through += outcomes[i].copied_through;
      assemble_and_sink(i, outcomes[i].tokens);
    }
    write_checkpoint(run.checkpoint_path, n);
    return report;
  }

  if (run.generator != "remote")
    throw UsageError("unknown generator '" + run.generator +
                     "' (expected edit-replay or remote)");

  run.transport.validate();
  const std::size_t batch = run.transport.batch_size;
  std::vector<std::vector<GenerationRequest>> batches;
  for (std::size_t i = start; i < candidates.size(); i += batch) {
    std::vector<GenerationRequest> b;
    for (std::size_t k = i; k < std::min(i + batch, candidates.size()); ++k)
      b.push_back({k, generation_source(candidates[k])});
    batches.push_back(std::move(b));
  }

  // Up to `window` batches in flight; results are consumed in batch order so
  // output order and checkpoints stay monotonic.
  const std::size_t window = std::max<std::size_t>(1, run.transport.window);
  std::vector<std::vector<GenerationResponse>> results(batches.size());
  std::vector<std::exception_ptr> failures(batches.size());
  std::atomic<std::size_t> next{0};
  std::atomic<bool> abort{false};
  std::vector<char> done(batches.size(), 0);
  std::mutex done_mutex;

  auto worker = [&](Transport* own_transport) {
    std::unique_ptr<Transport> owned;
    Transport* t = own_transport;
    if (t == nullptr) {
      owned = make_transport(run.transport);
      t = owned.get();
    }
    for (;;) {
      std::size_t b = next.fetch_add(1);
      if (b >= batches.size() || abort.load()) return;
      try {
        results[b] = remote_generate(batches[b], *t, run.transport);
      } catch (...) {
        failures[b] = std::current_exception();
        abort.store(true);
      }
      std::lock_guard<std::mutex> lock(done_mutex);
      done[b] = 1;
    }
  };

  if (window == 1) {
    std::unique_ptr<Transport> t = make_transport(run.transport);
    worker(t.get());
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < std::min(window, batches.size()); ++w)
      pool.emplace_back(worker, nullptr);
    for (std::thread& th : pool) th.join();
  }

  std::uint64_t processed = start;
  for (std::size_t b = 0; b < batches.size(); ++b) {
    if (failures[b]) {
      write_checkpoint(run.checkpoint_path, processed);
      try {
        std::rethrow_exception(failures[b]);
      } catch (const TransportError& e) {
        std::string note = run.checkpoint_path.empty()
                               ? std::string("")
                               : " (checkpoint: " + run.checkpoint_path +
                                     ", last done " +
                                     std::to_string(processed) + ")";
        if (dynamic_cast<const ProtocolError*>(&e)) throw;
        throw TransportError(std::string(e.what()) + note);
      }
    }
    if (done[b] == 0) {
      // skipped because a later-numbered batch failed first
      write_checkpoint(run.checkpoint_path, processed);
      for (std::size_t f = 0; f < failures.size(); ++f)
        if (failures[f]) std::rethrow_exception(failures[f]);
      throw TransportError("generation aborted before batch " +
                           std::to_string(b));
    }
    for (const GenerationResponse& resp : results[b])
      assemble_and_sink(resp.id, split_tokens(resp.hypothesis));
    processed += batches[b].size();
    write_checkpoint(run.checkpoint_path, processed);
  }
  return report;
}

void write_multiway_jsonl(const MultiWayExample& ex, std::ostream& out) {
  json rec{{"pivot", join_tokens(ex.pivot)},
           {"left", join_tokens(ex.left)},
           {"right", join_tokens(ex.right)},
           {"left_lang", ex.left_lang.code},
           {"right_lang", ex.right_lang.code},
           {"provenance",
            {{"left_corpus", ex.provenance.left_corpus},
             {"right_corpus", ex.provenance.right_corpus},
             {"left_index", ex.provenance.left_index},
             {"right_index", ex.provenance.right_index},
             {"distance", ex.provenance.distance},
             {"generator", ex.provenance.generator}}}};
  out << rec.dump() << '\n';
}

std::vector<MultiWayExample> read_multiway_jsonl(std::istream& in) {
  std::vector<MultiWayExample> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    json rec = json::parse(line);
    MultiWayExample ex;
    ex.pivot = split_tokens(rec.at("pivot").get<std::string>());
    ex.left = split_tokens(rec.at("left").get<std::string>());
    ex.right = split_tokens(rec.at("right").get<std::string>());
    ex.left_lang.code = rec.at("left_lang").get<std::string>();
    ex.right_lang.code = rec.at("right_lang").get<std::string>();
    const json& prov = rec.at("provenance");
    ex.provenance.left_corpus = prov.value("left_corpus", "");
    ex.provenance.right_corpus = prov.value("right_corpus", "");
    ex.provenance.left_index = prov.value("left_index", 0u);
    ex.provenance.right_index = prov.value("right_index", 0u);
    ex.provenance.distance = prov.value("distance", 0);
    ex.provenance.generator = prov.value("generator", "");
    out.push_back(std::move(ex));
  }
  return out;
}

}  // namespace eag
