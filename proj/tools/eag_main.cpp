// eag: builds multi-way aligned corpora from English-centric bitext.
// Subcommands cover the pipeline stages individually (extract, noise,
// train-data, generate, assemble, mix, stats, sweep) plus `run` for the
// whole pass. Exit codes: 0 ok, 1 usage, 2 data, 3 transport.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "eag/corpus.hpp"
#include "eag/errors.hpp"
#include "eag/generator.hpp"
#include "eag/mixture.hpp"
#include "eag/noising.hpp"
#include "eag/pipeline.hpp"
#include "eag/simjoin.hpp"
#include "eag/stats.hpp"
#include "eag/transport.hpp"
#include "eag/vocabulary.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;
using namespace eag;

namespace {

std::vector<double> parse_grid(const std::string& csv) {
  std::vector<double> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    try {
      out.push_back(std::stod(item));
    } catch (const std::exception&) {
      throw UsageError("bad number in grid: '" + item + "'");
    }
  }
  return out;
}

BitextCorpus load_side(const std::string& pivot_path,
                       const std::string& other_path,
                       const std::string& pivot_lang,
                       const std::string& other_lang) {
  NormConfig norm;
  LanguageTag pl = LanguageTag::parse(pivot_lang);
  LanguageTag ol = LanguageTag::parse(other_lang);
  if (other_path.empty()) return load_bitext_tsv(pivot_path, pl, ol, norm);
  return load_bitext(pivot_path, other_path, pl, ol, norm);
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path);
  return out;
}

struct GlobalOpts {
  std::string config_path;
  double gamma = 0.3;
  double beta = 0.5;
  double temperature = 5.0;
  std::uint64_t seed = 0;
  int jobs = 0;
  bool sorted_output = false;
};

// Config file first, explicit flags on top.
PipelineConfig merge_config(const GlobalOpts& g, const CLI::App& app) {
  PipelineConfig cfg;
  if (!g.config_path.empty()) cfg = load_config(g.config_path);
  if (app.count("--gamma")) cfg.gamma = g.gamma;
  if (app.count("--beta")) cfg.beta = g.beta;
  if (app.count("--temperature")) cfg.temperature = g.temperature;
  if (app.count("--seed")) cfg.seed = g.seed;
  if (app.count("--jobs")) cfg.jobs = g.jobs;
  if (app.count("--sorted-output")) cfg.sorted_output = g.sorted_output;
  return cfg;
}

int dispatch(CLI::App& app, const GlobalOpts& g);

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"EAG pipeline: extract candidate aligned examples and "
               "generate multi-way aligned corpora"};
  app.require_subcommand(1);

  GlobalOpts g;
  app.add_option("--config", g.config_path, "JSON config file");
  app.add_option("--gamma", g.gamma, "similarity threshold in [0,1)");
  app.add_option("--beta", g.beta, "per-position noise probability");
  app.add_option("--temperature", g.temperature, "mixture sampling temperature");
  app.add_option("--seed", g.seed, "rng seed");
  app.add_option("--jobs", g.jobs, "worker threads (0 = default)");
  app.add_flag("--sorted-output", g.sorted_output,
               "sort emitted records for byte-reproducible output");

  // extract
  auto* extract = app.add_subcommand(
      "extract", "similarity join of two bitext corpora over the pivot side");
  struct {
    std::string left_pivot, left_other, right_pivot, right_other;
    std::string pivot_lang = "en", left_lang, right_lang;
    std::string out = "-";
    bool stats_only = false;
    int qgram = 2;
    std::size_t min_tokens = 1, max_tokens = 0, max_pairs = 0;
    int bucket_width = 1;
    bool no_fold = false;
  } ex;
  extract->add_option("--left-pivot", ex.left_pivot)->required();
  extract->add_option("--left-other", ex.left_other,
                      "omit when --left-pivot is a two-column TSV");
  extract->add_option("--right-pivot", ex.right_pivot)->required();
  extract->add_option("--right-other", ex.right_other);
  extract->add_option("--pivot-lang", ex.pivot_lang);
  extract->add_option("--left-lang", ex.left_lang)->required();
  extract->add_option("--right-lang", ex.right_lang)->required();
  extract->add_option("--out", ex.out, "output JSONL path, - for stdout");
  extract->add_flag("--stats-only", ex.stats_only,
                    "emit counts instead of candidate records");
  extract->add_option("--qgram", ex.qgram);
  extract->add_option("--min-tokens", ex.min_tokens);
  extract->add_option("--max-tokens", ex.max_tokens);
  extract->add_option("--max-pairs", ex.max_pairs,
                      "per-left fan-out cap, 0 = unlimited");
  extract->add_option("--bucket-width", ex.bucket_width);
  extract->add_flag("--no-fold-case", ex.no_fold,
                    "match pivot sides case-sensitively");

  // noise
  auto* noise_cmd =
      app.add_subcommand("noise", "corrupt target-side sentences");
  struct {
    std::string in, out, vocab_from;
    std::string sample_mode = "uniform";
  } no;
  noise_cmd->add_option("--in", no.in)->required();
  noise_cmd->add_option("--out", no.out)->required();
  noise_cmd->add_option("--vocab-from", no.vocab_from,
                        "build the sampling vocabulary from this file "
                        "instead of --in");
  noise_cmd->add_option("--sample-mode", no.sample_mode,
                        "uniform or frequency");

  // train-data
  auto* train = app.add_subcommand(
      "train-data", "emit generator training examples (source/target)");
  struct {
    std::string pivot, other;
    std::string pivot_lang = "en", other_lang = "xx";
    std::string out_src, out_tgt;
    std::string format = "text";
    std::string sample_mode = "frequency";
  } td;
  train->add_option("--pivot", td.pivot)->required();
  train->add_option("--other", td.other);
  train->add_option("--pivot-lang", td.pivot_lang);
  train->add_option("--other-lang", td.other_lang);
  train->add_option("--out-src", td.out_src)->required();
  train->add_option("--out-tgt", td.out_tgt);
  train->add_option("--format", td.format, "text or jsonl");
  train->add_option("--sample-mode", td.sample_mode);

  // generate
  auto* gen = app.add_subcommand(
      "generate", "produce hypotheses for extracted candidates");
  struct {
    std::string candidates, out;
    std::string generator = "edit-replay";
    std::string lexicon;
    std::string command, url;
    std::size_t batch_size = 64;
    int max_retries = 3;
    int backoff_ms = 50;
    int timeout_ms = 30000;
    std::size_t window = 1;
  } ge;
  gen->add_option("--candidates", ge.candidates)->required();
  gen->add_option("--out", ge.out)->required();
  gen->add_option("--generator", ge.generator, "edit-replay or remote");
  gen->add_option("--lexicon", ge.lexicon, "pivot->target TSV for edit-replay");
  gen->add_option("--command", ge.command, "remote generator subprocess");
  gen->add_option("--url", ge.url, "remote generator http endpoint");
  gen->add_option("--batch-size", ge.batch_size);
  gen->add_option("--max-retries", ge.max_retries);
  gen->add_option("--backoff-ms", ge.backoff_ms);
  gen->add_option("--timeout-ms", ge.timeout_ms);
  gen->add_option("--window", ge.window, "in-flight batches");

  // assemble
  auto* asm_cmd = app.add_subcommand(
      "assemble", "pair hypotheses with candidates into multi-way examples");
  struct {
    std::string candidates, hypotheses, out, report;
    std::string left_lang, right_lang;
    std::string generator_id = "remote";
    double min_ratio = 0.5, max_ratio = 2.0;
  } as;
  asm_cmd->add_option("--candidates", as.candidates)->required();
  asm_cmd->add_option("--hypotheses", as.hypotheses)->required();
  asm_cmd->add_option("--out", as.out)->required();
  asm_cmd->add_option("--report", as.report);
  asm_cmd->add_option("--left-lang", as.left_lang)->required();
  asm_cmd->add_option("--right-lang", as.right_lang)->required();
  asm_cmd->add_option("--generator-id", as.generator_id);
  asm_cmd->add_option("--min-ratio", as.min_ratio);
  asm_cmd->add_option("--max-ratio", as.max_ratio);

  // mix
  auto* mix = app.add_subcommand(
      "mix", "temperature-based mixture plan over constructed corpora");
  struct {
    std::string available, from_dir, out = "-", out_lines;
    std::uint64_t total = 0;
    std::string directions = "both";
  } mi;
  mix->add_option("--available", mi.available,
                  "JSON object key -> example count; omit to scan --from-dir");
  mix->add_option("--from-dir", mi.from_dir,
                  "pipeline output directory with <a>-<b>/multiway.jsonl");
  mix->add_option("--total", mi.total)->required();
  mix->add_option("--out", mi.out, "plan JSON path, - for stdout");
  mix->add_option("--out-lines", mi.out_lines,
                  "also sample training lines into this JSONL");
  mix->add_option("--directions", mi.directions, "both, l2r or r2l");

  // stats
  auto* stats_cmd =
      app.add_subcommand("stats", "language x language example count matrix");
  struct {
    std::string manifest, constructed, out;
  } st;
  stats_cmd->add_option("--manifest", st.manifest)->required();
  stats_cmd->add_option("--constructed", st.constructed,
                        "pipeline output directory");
  stats_cmd->add_option("--out", st.out, "write JSON here as well");

  // sweep
  auto* sweep_cmd = app.add_subcommand(
      "sweep", "gamma/beta grid over the first two manifest corpora");
  struct {
    std::string manifest, gammas, betas, out = "-";
  } sw;
  sweep_cmd->add_option("--manifest", sw.manifest)->required();
  sweep_cmd->add_option("--gammas", sw.gammas, "comma-separated grid");
  sweep_cmd->add_option("--betas", sw.betas, "comma-separated grid");
  sweep_cmd->add_option("--out", sw.out);

  // run
  auto* run_cmd = app.add_subcommand("run", "full pipeline over a manifest");
  struct {
    std::string manifest, out_dir;
    std::string generator;
    std::string command, url;
    bool no_train_data = false;
    bool resume = false;
  } ru;
  run_cmd->add_option("--manifest", ru.manifest);
  run_cmd->add_option("--out", ru.out_dir)->required();
  run_cmd->add_option("--generator", ru.generator, "edit-replay or remote");
  run_cmd->add_option("--command", ru.command);
  run_cmd->add_option("--url", ru.url);
  run_cmd->add_flag("--no-train-data", ru.no_train_data);
  run_cmd->add_flag("--resume", ru.resume);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return kExitUsage;
  }

  try {
    PipelineConfig cfg = merge_config(g, app);
    cfg.finalize();

    if (app.got_subcommand(extract)) {
      BitextCorpus left =
          load_side(ex.left_pivot, ex.left_other, ex.pivot_lang, ex.left_lang);
      BitextCorpus right = load_side(ex.right_pivot, ex.right_other,
                                     ex.pivot_lang, ex.right_lang);
      JoinConfig jc = cfg.join;
      jc.gamma = cfg.gamma;
      if (extract->count("--qgram")) jc.qgram = ex.qgram;
      if (extract->count("--min-tokens")) jc.min_tokens = ex.min_tokens;
      if (extract->count("--max-tokens")) jc.max_tokens = ex.max_tokens;
      if (extract->count("--max-pairs")) jc.max_pairs_per_example = ex.max_pairs;
      if (extract->count("--bucket-width")) jc.bucket_width = ex.bucket_width;
      if (ex.no_fold) jc.fold_case = false;
      JoinResult res = extract_candidates(left, right, jc);
      json stats{{"candidates", res.candidates.size()},
                 {"indexed", res.stats.indexed},
                 {"skipped_left", res.stats.skipped_left},
                 {"skipped_right", res.stats.skipped_right},
                 {"verified", res.stats.verified},
                 {"duplicates", res.stats.duplicates}};
      if (ex.stats_only) {
        if (ex.out == "-") {
          std::cout << stats.dump() << '\n';
        } else {
          open_out(ex.out) << stats.dump() << '\n';
        }
      } else if (ex.out == "-") {
        write_candidates_jsonl(left, right, res.candidates, std::cout);
      } else {
        std::ofstream out = open_out(ex.out);
        write_candidates_jsonl(left, right, res.candidates, out);
      }
      std::cerr << "extract: " << res.candidates.size() << " candidates\n";
      return kExitOk;
    }

    if (app.got_subcommand(noise_cmd)) {
      NormConfig norm;
      std::ifstream in(no.in, std::ios::binary);
      if (!in) throw DataError("cannot open " + no.in);
      std::vector<Sentence> lines;
      std::string raw;
      while (std::getline(in, raw)) lines.push_back(normalize(raw, norm));

      std::vector<Vocabulary::Entry> entries;
      {
        std::unordered_map<std::string, std::uint64_t> counts;
        auto count_file = [&](const std::string& path) {
          std::ifstream vin(path, std::ios::binary);
          if (!vin) throw DataError("cannot open " + path);
          std::string l;
          while (std::getline(vin, l))
            for (const std::string& t : normalize(l, norm).tokens)
              ++counts[t];
        };
        count_file(no.vocab_from.empty() ? no.in : no.vocab_from);
        for (auto& [t, c] : counts) entries.push_back({t, c});
      }
      Vocabulary vocab = Vocabulary::from_counts(std::move(entries), no.in);

      NoiseConfig nc = cfg.noise;
      nc.beta = cfg.beta;
      nc.seed = cfg.seed;
      if (no.sample_mode == "uniform")
        nc.sample_mode = SampleMode::Uniform;
      else if (no.sample_mode == "frequency")
        nc.sample_mode = SampleMode::Frequency;
      else
        throw UsageError("--sample-mode must be uniform or frequency");

      std::ofstream out = open_out(no.out);
      for (std::size_t i = 0; i < lines.size(); ++i) {
        RandomSource rng = derive_rng(nc.seed, "noise:" + no.in, i);
        NoiseOutcome res = noise(lines[i].tokens, nc, vocab, rng);
        for (std::size_t k = 0; k < res.tokens.size(); ++k) {
          if (k) out << ' ';
          out << res.tokens[k];
        }
        out << '\n';
      }
      return kExitOk;
    }

    if (app.got_subcommand(train)) {
      BitextCorpus corpus =
          load_side(td.pivot, td.other, td.pivot_lang, td.other_lang);
      NoiseConfig nc = cfg.noise;
      nc.beta = cfg.beta;
      nc.seed = cfg.seed;
      if (train->count("--sample-mode")) {
        if (td.sample_mode == "uniform")
          nc.sample_mode = SampleMode::Uniform;
        else if (td.sample_mode == "frequency")
          nc.sample_mode = SampleMode::Frequency;
        else
          throw UsageError("--sample-mode must be uniform or frequency");
      }
      TrainingFormat fmt;
      if (td.format == "text") {
        fmt = TrainingFormat::Text;
        if (td.out_tgt.empty())
          throw UsageError("text format needs --out-tgt");
      } else if (td.format == "jsonl") {
        fmt = TrainingFormat::Jsonl;
      } else {
        throw UsageError("--format must be text or jsonl");
      }
      EmitCounts counts =
          emit_training_set(corpus, nc, td.out_src, td.out_tgt, fmt);
      std::cerr << "train-data: " << counts.pairs << " examples, "
                << counts.ops << " noise ops over " << counts.positions
                << " positions\n";
      return kExitOk;
    }

    if (app.got_subcommand(gen)) {
      std::ifstream in(ge.candidates, std::ios::binary);
      if (!in) throw DataError("cannot open " + ge.candidates);
      std::vector<CandidateRecord> cands = read_candidates_jsonl(in);
      std::ofstream out = open_out(ge.out);

      if (ge.generator == "edit-replay") {
        Lexicon lex;
        if (!ge.lexicon.empty()) lex = Lexicon::load_tsv(ge.lexicon);
        for (std::size_t i = 0; i < cands.size(); ++i) {
          ReplayOutcome res =
              edit_replay_generate(cands[i].x2, cands[i].x1, cands[i].y2, lex);
          std::string joined;
          for (std::size_t k = 0; k < res.tokens.size(); ++k) {
            if (k) joined += ' ';
            joined += res.tokens[k];
          }
          out << json{{"id", i}, {"hypothesis", joined}}.dump() << '\n';
        }
      } else if (ge.generator == "remote") {
        TransportConfig tc = cfg.transport;
        if (!ge.command.empty()) {
          tc.mode = TransportConfig::Mode::Subprocess;
          tc.command = ge.command;
        }
        if (!ge.url.empty()) {
          tc.mode = TransportConfig::Mode::Http;
          tc.url = ge.url;
        }
        if (gen->count("--batch-size")) tc.batch_size = ge.batch_size;
        if (gen->count("--max-retries")) tc.max_retries = ge.max_retries;
        if (gen->count("--backoff-ms")) tc.backoff_ms = ge.backoff_ms;
        if (gen->count("--timeout-ms")) tc.timeout_ms = ge.timeout_ms;
        if (gen->count("--window")) tc.window = ge.window;
        std::unique_ptr<Transport> transport = make_transport(tc);
        for (std::size_t i = 0; i < cands.size(); i += tc.batch_size) {
          std::vector<GenerationRequest> batch;
          for (std::size_t k = i;
               k < std::min(i + tc.batch_size, cands.size()); ++k)
            batch.push_back({k, generation_source(cands[k])});
          for (const GenerationResponse& r :
               remote_generate(batch, *transport, tc))
            out << json{{"id", r.id}, {"hypothesis", r.hypothesis}}.dump()
                << '\n';
        }
      } else {
        throw UsageError("--generator must be edit-replay or remote");
      }
      return kExitOk;
    }

    if (app.got_subcommand(asm_cmd)) {
      std::ifstream cin_(as.candidates, std::ios::binary);
      if (!cin_) throw DataError("cannot open " + as.candidates);
      std::vector<CandidateRecord> cands = read_candidates_jsonl(cin_);

      std::ifstream hin(as.hypotheses, std::ios::binary);
      if (!hin) throw DataError("cannot open " + as.hypotheses);
      std::vector<std::vector<std::string>> hyps(cands.size());
      std::vector<char> have(cands.size(), 0);
      std::string line;
      while (std::getline(hin, line)) {
        if (line.empty()) continue;
        json rec = json::parse(line);
        std::size_t id = rec.at("id").get<std::size_t>();
        if (id >= cands.size())
          throw DataError("hypothesis id " + std::to_string(id) +
                          " out of range");
        std::istringstream ss(rec.at("hypothesis").get<std::string>());
        std::string tok;
        while (ss >> tok) hyps[id].push_back(tok);
        have[id] = 1;
      }
      for (std::size_t i = 0; i < cands.size(); ++i)
        if (!have[i])
          throw DataError("no hypothesis for candidate " + std::to_string(i));

      FilterConfig filters{as.min_ratio, as.max_ratio};
      LanguageTag ll = LanguageTag::parse(as.left_lang);
      LanguageTag rl = LanguageTag::parse(as.right_lang);
      std::ofstream out = open_out(as.out);
      std::size_t accepted = 0;
      std::map<std::string, std::size_t> rejected;
      for (std::size_t i = 0; i < cands.size(); ++i) {
        AssembleOutcome res = assemble_multiway(cands[i], hyps[i], ll, rl,
                                                filters, as.generator_id);
        if (res.example.has_value()) {
          ++accepted;
          write_multiway_jsonl(*res.example, out);
        } else {
          ++rejected[reject_reason_name(*res.rejection)];
        }
      }
      json tally{{"candidates", cands.size()},
                 {"accepted", accepted},
                 {"rejected", rejected}};
      if (!as.report.empty()) open_out(as.report) << tally.dump(2) << '\n';
      std::cerr << "assemble: " << tally.dump() << '\n';
      return kExitOk;
    }

    if (app.got_subcommand(mix)) {
      std::vector<std::pair<std::string, std::uint64_t>> available;
      if (!mi.available.empty()) {
        std::ifstream in(mi.available, std::ios::binary);
        if (!in) throw DataError("cannot open " + mi.available);
        json doc;
        in >> doc;
        for (auto it = doc.begin(); it != doc.end(); ++it)
          available.emplace_back(it.key(), it.value().get<std::uint64_t>());
      } else if (!mi.from_dir.empty()) {
        std::vector<std::string> keys;
        for (const auto& entry : fs::directory_iterator(mi.from_dir))
          if (entry.is_directory() &&
              fs::exists(entry.path() / "multiway.jsonl"))
            keys.push_back(entry.path().filename().string());
        std::sort(keys.begin(), keys.end());
        for (const std::string& key : keys) {
          std::ifstream in(fs::path(mi.from_dir) / key / "multiway.jsonl",
                           std::ios::binary);
          std::uint64_t n = 0;
          std::string l;
          while (std::getline(in, l))
            if (!l.empty()) ++n;
          available.emplace_back(key, n);
        }
      } else {
        throw UsageError("mix needs --available or --from-dir");
      }

      MixturePlan plan = temperature_sample(available, cfg.temperature,
                                            mi.total);
      json slots = json::array();
      for (const auto& s : plan.slots)
        slots.push_back({{"key", s.key},
                         {"available", s.available},
                         {"probability", s.probability},
                         {"count", s.count}});
      json plan_json{{"temperature", plan.temperature},
                     {"total", plan.total},
                     {"slots", slots}};
      if (mi.out == "-") {
        std::cout << plan_json.dump(2) << '\n';
      } else {
        open_out(mi.out) << plan_json.dump(2) << '\n';
      }

      if (!mi.out_lines.empty()) {
        if (mi.from_dir.empty())
          throw UsageError("--out-lines needs --from-dir");
        std::ofstream out = open_out(mi.out_lines);
        for (std::size_t s = 0; s < plan.slots.size(); ++s) {
          const auto& slot = plan.slots[s];
          if (slot.count == 0) continue;
          std::ifstream in(fs::path(mi.from_dir) / slot.key / "multiway.jsonl",
                           std::ios::binary);
          if (!in)
            throw DataError("cannot open multiway corpus for " + slot.key);
          std::vector<MultiWayExample> examples = read_multiway_jsonl(in);
          std::vector<std::size_t> order(examples.size());
          for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
          RandomSource rng = derive_rng(cfg.seed, "mix:" + slot.key, s);
          for (std::size_t i = order.size(); i > 1; --i)
            std::swap(order[i - 1], order[rng.uniform_index(i)]);
          for (std::uint64_t k = 0; k < slot.count; ++k) {
            const MultiWayExample& exm = examples[order[k]];
            auto joined = [](const std::vector<std::string>& toks) {
              std::string out_;
              for (std::size_t t = 0; t < toks.size(); ++t) {
                if (t) out_ += ' ';
                out_ += toks[t];
              }
              return out_;
            };
            if (mi.directions == "both" || mi.directions == "l2r")
              out << json{{"source", prepend_language_token(
                                         joined(exm.left), exm.right_lang)},
                          {"target", joined(exm.right)}}
                         .dump()
                  << '\n';
            if (mi.directions == "both" || mi.directions == "r2l")
              out << json{{"source", prepend_language_token(
                                         joined(exm.right), exm.left_lang)},
                          {"target", joined(exm.left)}}
                         .dump()
                  << '\n';
          }
        }
      }
      return kExitOk;
    }

    if (app.got_subcommand(stats_cmd)) {
      std::vector<ManifestEntry> manifest = load_manifest(st.manifest);
      std::vector<PairCount> pairs;
      for (const ManifestEntry& e : manifest) {
        BitextCorpus c =
            load_side(e.pivot_path, e.other_path, e.pivot_lang, e.other_lang);
        pairs.push_back({c.pivot_lang.code, c.other_lang.code, c.size()});
      }
      if (!st.constructed.empty()) {
        for (const auto& entry : fs::directory_iterator(st.constructed)) {
          if (!entry.is_directory()) continue;
          fs::path mw = entry.path() / "multiway.jsonl";
          if (!fs::exists(mw)) continue;
          std::string name = entry.path().filename().string();
          std::size_t dash = name.find('-');
          if (dash == std::string::npos) continue;
          std::ifstream in(mw, std::ios::binary);
          std::uint64_t n = 0;
          std::string l;
          while (std::getline(in, l))
            if (!l.empty()) ++n;
          pairs.push_back({name.substr(0, dash), name.substr(dash + 1), n});
        }
      }
      CorpusStats stats = stats_matrix(pairs);
      std::cout << render_stats_table(stats);
      if (!st.out.empty()) open_out(st.out) << stats_to_json(stats) << '\n';
      return kExitOk;
    }

    if (app.got_subcommand(sweep_cmd)) {
      std::vector<ManifestEntry> manifest = load_manifest(sw.manifest);
      if (manifest.size() < 2)
        throw DataError("sweep needs at least two manifest corpora");
      BitextCorpus left = load_side(manifest[0].pivot_path,
                                    manifest[0].other_path,
                                    manifest[0].pivot_lang,
                                    manifest[0].other_lang);
      BitextCorpus right = load_side(manifest[1].pivot_path,
                                     manifest[1].other_path,
                                     manifest[1].pivot_lang,
                                     manifest[1].other_lang);
      SweepReport report = sweep(left, right, parse_grid(sw.gammas),
                                 parse_grid(sw.betas), cfg);
      if (sw.out == "-") {
        std::cout << report.to_json() << '\n';
      } else {
        open_out(sw.out) << report.to_json() << '\n';
      }
      return kExitOk;
    }

    if (app.got_subcommand(run_cmd)) {
      if (!ru.manifest.empty()) cfg.manifest = load_manifest(ru.manifest);
      cfg.out_dir = ru.out_dir;
      if (!ru.generator.empty()) cfg.generator = ru.generator;
      if (!ru.command.empty()) {
        cfg.transport.mode = TransportConfig::Mode::Subprocess;
        cfg.transport.command = ru.command;
      }
      if (!ru.url.empty()) {
        cfg.transport.mode = TransportConfig::Mode::Http;
        cfg.transport.url = ru.url;
      }
      if (ru.no_train_data) cfg.emit_train_data = false;
      cfg.resume = ru.resume;
      RunReport report = run_pipeline(cfg);
      std::size_t accepted = 0, candidates = 0;
      for (const PairReport& p : report.pairs) {
        accepted += p.accepted;
        candidates += p.candidates;
      }
      std::cerr << "run: " << report.pairs.size() << " language pairs, "
                << candidates << " candidates, " << accepted
                << " multi-way examples -> " << cfg.out_dir << "\n";
      return kExitOk;
    }

    throw UsageError("no subcommand");
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const TransportError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitTransport;
  } catch (const DataError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitData;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitData;
  }
}
