#include "eag/pipeline.hpp"

#include <omp.h>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "eag/errors.hpp"
#include "eag/stats.hpp"

namespace eag {

namespace fs = std::filesystem;
using json = nlohmann::json;

std::vector<ManifestEntry> load_manifest(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open manifest " + path);
  json doc;
  try {
    in >> doc;
  } catch (const json::parse_error& e) {
    throw DataError("manifest " + path + " is not valid JSON: " + e.what());
  }
  const json& list = doc.is_array() ? doc : doc.at("corpora");
  std::vector<ManifestEntry> entries;
  for (const json& item : list) {
    ManifestEntry e;
    e.pivot_path = item.at("pivot_path").get<std::string>();
    e.other_path = item.value("other_path", "");
    e.pivot_lang = item.at("pivot_lang").get<std::string>();
    e.other_lang = item.at("other_lang").get<std::string>();
    e.lexicon_path = item.value("lexicon", "");
    entries.push_back(std::move(e));
  }
  if (entries.empty()) throw DataError("manifest " + path + " lists no corpora");
  return entries;
}

void PipelineConfig::finalize() {
  join.gamma = gamma;
  noise.beta = beta;
  noise.seed = seed;
  if (jobs > 0) omp_set_num_threads(jobs);
}

PipelineConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open config " + path);
  json doc;
  try {
    in >> doc;
  } catch (const json::parse_error& e) {
    throw DataError("config " + path + " is not valid JSON: " + e.what());
  }

  PipelineConfig cfg;
  cfg.gamma = doc.value("gamma", cfg.gamma);
  cfg.beta = doc.value("beta", cfg.beta);
  cfg.temperature = doc.value("temperature", cfg.temperature);
  cfg.seed = doc.value("seed", cfg.seed);
  cfg.jobs = doc.value("jobs", cfg.jobs);
  cfg.sorted_output = doc.value("sorted_output", cfg.sorted_output);
  cfg.generator = doc.value("generator", cfg.generator);
  cfg.out_dir = doc.value("out_dir", cfg.out_dir);
  cfg.emit_train_data = doc.value("emit_train_data", cfg.emit_train_data);

  if (doc.contains("join")) {
    const json& j = doc["join"];
    cfg.join.qgram = j.value("qgram", cfg.join.qgram);
    cfg.join.min_tokens = j.value("min_tokens", cfg.join.min_tokens);
    cfg.join.max_tokens = j.value("max_tokens", cfg.join.max_tokens);
    cfg.join.max_pairs_per_example =
        j.value("max_pairs_per_example", cfg.join.max_pairs_per_example);
    cfg.join.bucket_width = j.value("bucket_width", cfg.join.bucket_width);
    cfg.join.fold_case = j.value("fold_case", cfg.join.fold_case);
  }
  if (doc.contains("noise")) {
    const json& n = doc["noise"];
    if (n.contains("op_weights")) {
      auto w = n["op_weights"].get<std::vector<double>>();
      if (w.size() != 3)
        throw DataError("noise.op_weights must list three weights");
      cfg.noise.op_weights = {w[0], w[1], w[2]};
    }
    std::string mode = n.value("sample_mode", "frequency");
    if (mode == "frequency")
      cfg.noise.sample_mode = SampleMode::Frequency;
    else if (mode == "uniform")
      cfg.noise.sample_mode = SampleMode::Uniform;
    else
      throw DataError("noise.sample_mode must be frequency or uniform");
    cfg.noise.max_ops_per_sentence =
        n.value("max_ops_per_sentence", cfg.noise.max_ops_per_sentence);
  }
  if (doc.contains("filter")) {
    const json& f = doc["filter"];
    cfg.filter.min_ratio = f.value("min_ratio", cfg.filter.min_ratio);
    cfg.filter.max_ratio = f.value("max_ratio", cfg.filter.max_ratio);
  }
  if (doc.contains("transport")) {
    const json& t = doc["transport"];
    std::string mode = t.value("mode", "subprocess");
    if (mode == "subprocess")
      cfg.transport.mode = TransportConfig::Mode::Subprocess;
    else if (mode == "http")
      cfg.transport.mode = TransportConfig::Mode::Http;
    else
      throw DataError("transport.mode must be subprocess or http");
    cfg.transport.command = t.value("command", cfg.transport.command);
    cfg.transport.url = t.value("url", cfg.transport.url);
    cfg.transport.batch_size = t.value("batch_size", cfg.transport.batch_size);
    cfg.transport.max_retries =
        t.value("max_retries", cfg.transport.max_retries);
    cfg.transport.backoff_ms = t.value("backoff_ms", cfg.transport.backoff_ms);
    cfg.transport.timeout_ms = t.value("timeout_ms", cfg.transport.timeout_ms);
    cfg.transport.window = t.value("window", cfg.transport.window);
  }
  if (doc.contains("manifest")) {
    for (const json& item : doc["manifest"]) {
      ManifestEntry e;
      e.pivot_path = item.at("pivot_path").get<std::string>();
      e.other_path = item.value("other_path", "");
      e.pivot_lang = item.at("pivot_lang").get<std::string>();
      e.other_lang = item.at("other_lang").get<std::string>();
      e.lexicon_path = item.value("lexicon", "");
      cfg.manifest.push_back(std::move(e));
    }
  }
  return cfg;
}

std::string RunReport::to_json() const {
  json pairs_json = json::array();
  for (const PairReport& p : pairs) {
    json stages = json::array();
    for (const StageReport& s : p.stages)
      stages.push_back(
          {{"name", s.name}, {"seconds", s.seconds}, {"counts", s.counts}});
    pairs_json.push_back({{"left_lang", p.left_lang},
                          {"right_lang", p.right_lang},
                          {"candidates", p.candidates},
                          {"accepted", p.accepted},
                          {"rejected", p.rejected},
                          {"stages", stages}});
  }
  json doc{{"version", version},
           {"gamma", gamma},
           {"beta", beta},
           {"seed", seed},
           {"pairs", pairs_json}};
  return doc.dump(2);
}

namespace {

BitextCorpus load_entry(const ManifestEntry& e, const NormConfig& norm) {
  LanguageTag pivot = LanguageTag::parse(e.pivot_lang);
  LanguageTag other = LanguageTag::parse(e.other_lang);
  if (e.other_path.empty())
    return load_bitext_tsv(e.pivot_path, pivot, other, norm);
  return load_bitext(e.pivot_path, e.other_path, pivot, other, norm);
}

std::vector<CandidateRecord> materialize_candidates(
    const BitextCorpus& left, const BitextCorpus& right,
    const std::vector<Candidate>& cands) {
  std::vector<CandidateRecord> out;
  out.reserve(cands.size());
  for (const Candidate& c : cands) {
    CandidateRecord r;
    r.left_corpus = left.corpus_id;
    r.right_corpus = right.corpus_id;
    r.left_index = c.left_index;
    r.right_index = c.right_index;
    r.x1 = left.pivot[c.left_index].tokens;
    r.y1 = left.other[c.left_index].tokens;
    r.x2 = right.pivot[c.right_index].tokens;
    r.y2 = right.other[c.right_index].tokens;
    r.distance = c.distance;
    r.threshold = c.threshold;
    out.push_back(std::move(r));
  }
  return out;
}

class StageTimer {
 public:
  StageTimer(PairReport& report, std::string name)
      : report_(report), start_(std::chrono::steady_clock::now()) {
    stage_.name = std::move(name);
  }
  std::map<std::string, std::uint64_t>& counts() { return stage_.counts; }
  ~StageTimer() {
    stage_.seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                      start_)
            .count();
    report_.stages.push_back(stage_);
  }

 private:
  PairReport& report_;
  StageReport stage_;
  std::chrono::steady_clock::time_point start_;
};

}  // namespace

RunReport run_pipeline(const PipelineConfig& cfg_in) {
  PipelineConfig cfg = cfg_in;
  cfg.finalize();
  if (cfg.manifest.size() < 2)
    throw DataError("pipeline needs at least two corpora in the manifest");
  if (cfg.out_dir.empty()) throw UsageError("pipeline needs an output directory");

  NormConfig norm;  // case preserved; the join folds internally
  std::vector<BitextCorpus> corpora;
  corpora.reserve(cfg.manifest.size());
  for (const ManifestEntry& e : cfg.manifest) {
    corpora.push_back(load_entry(e, norm));
    if (corpora.back().pivot_lang != corpora.front().pivot_lang)
      throw DataError("manifest corpora disagree on the pivot language: " +
                      corpora.back().pivot_lang.code + " vs " +
                      corpora.front().pivot_lang.code);
  }
  for (std::size_t i = 0; i < corpora.size(); ++i)
    for (std::size_t j = i + 1; j < corpora.size(); ++j)
      if (corpora[i].other_lang == corpora[j].other_lang)
        throw DataError("manifest lists language " +
                        corpora[i].other_lang.code + " twice");

  fs::create_directories(cfg.out_dir);

  RunReport report;
  report.gamma = cfg.gamma;
  report.beta = cfg.beta;
  report.seed = cfg.seed;

  std::string current_stage;
  try {
    for (std::size_t a = 0; a < corpora.size(); ++a) {
      for (std::size_t b = a + 1; b < corpora.size(); ++b) {
        const BitextCorpus& left = corpora[a];
        const BitextCorpus& right = corpora[b];
        PairReport pair_report;
        pair_report.left_lang = left.other_lang.code;
        pair_report.right_lang = right.other_lang.code;

        fs::path dir = fs::path(cfg.out_dir) /
                       (left.other_lang.code + "-" + right.other_lang.code);
        fs::create_directories(dir);

        current_stage = "extract";
        JoinResult join;
        {
          StageTimer timer(pair_report, "extract");
          join = extract_candidates(left, right, cfg.join);
          timer.counts()["candidates"] = join.candidates.size();
          timer.counts()["verified"] = join.stats.verified;
          timer.counts()["duplicates"] = join.stats.duplicates;
          std::ofstream out(dir / "candidates.jsonl", std::ios::binary);
          if (!out) throw DataError("cannot write " +
                                    (dir / "candidates.jsonl").string());
          write_candidates_jsonl(left, right, join.candidates, out);
        }
        pair_report.candidates = join.candidates.size();

        if (cfg.emit_train_data && right.size() > 0) {
          current_stage = "train-data";
          StageTimer timer(pair_report, "train-data");
          NoiseConfig nc = cfg.noise;
          EmitCounts counts = emit_training_set(
              right, nc, (dir / "train.src").string(),
              (dir / "train.tgt").string(), TrainingFormat::Text);
          timer.counts()["examples"] = counts.pairs;
          timer.counts()["positions"] = counts.positions;
          timer.counts()["ops"] = counts.ops;
        }

        current_stage = "generate";
        {
          StageTimer timer(pair_report, "generate");
          std::vector<CandidateRecord> records =
              materialize_candidates(left, right, join.candidates);
          GenerationRun run;
          run.generator = cfg.generator;
          run.filters = cfg.filter;
          run.transport = cfg.transport;
          run.checkpoint_path = (dir / "generate.ckpt").string();
          if (!cfg.manifest[b].lexicon_path.empty())
            run.lexicon = Lexicon::load_tsv(cfg.manifest[b].lexicon_path);

          if (cfg.resume && fs::exists(run.checkpoint_path)) {
            json ckpt = json::parse(
                std::ifstream(run.checkpoint_path, std::ios::binary));
            run.resume_after = ckpt.value("last_done", 0ull);
            run.resume = run.resume_after > 0;
          }

          std::ofstream out(dir / "multiway.jsonl",
                            run.resume ? std::ios::binary | std::ios::app
                                       : std::ios::binary);
          if (!out)
            throw DataError("cannot write " + (dir / "multiway.jsonl").string());
          GenerationReport gen = run_generation(
              records, left.other_lang, right.other_lang, run,
              [&](const MultiWayExample& ex) { write_multiway_jsonl(ex, out); });
          if (!out) throw DataError("write failure on " +
                                    (dir / "multiway.jsonl").string());
          pair_report.accepted = gen.accepted;
          pair_report.rejected = gen.rejected;
          timer.counts()["accepted"] = gen.accepted;
          timer.counts()["rejected"] = gen.rejected_total();
          timer.counts()["copied_through"] = gen.copied_through;
        }

        report.pairs.push_back(std::move(pair_report));
      }
    }
  } catch (const std::exception& e) {
    std::ofstream out(fs::path(cfg.out_dir) / "report.json",
                      std::ios::binary);
    json failed{{"version", report.version},
                {"failed_stage", current_stage},
                {"error", e.what()}};
    out << failed.dump(2) << '\n';
    throw;
  }

  std::ofstream out(fs::path(cfg.out_dir) / "report.json", std::ios::binary);
  if (!out)
    throw DataError("cannot write " +
                    (fs::path(cfg.out_dir) / "report.json").string());
  out << report.to_json() << '\n';
  return report;
}

std::string SweepReport::to_json() const {
  json gp = json::array();
  for (const SweepPoint& p : gamma_points)
    gp.push_back({{"gamma", p.gamma},
                  {"candidates", p.candidates},
                  {"mean_distance", p.mean_distance}});
  json bp = json::array();
  for (const SweepPoint& p : beta_points)
    bp.push_back({{"beta", p.beta},
                  {"empirical_noise_rate", p.empirical_noise_rate},
                  {"positions", p.positions}});
  return json{{"gamma_points", gp}, {"beta_points", bp}}.dump(2);
}

SweepReport sweep(const BitextCorpus& left, const BitextCorpus& right,
                  const std::vector<double>& gammas,
                  const std::vector<double>& betas,
                  const PipelineConfig& cfg) {
  if (gammas.empty() && betas.empty())
    throw UsageError("sweep needs a non-empty gamma or beta grid");

  SweepReport report;
  for (double gamma : gammas) {
    JoinConfig jc = cfg.join;
    jc.gamma = gamma;
    JoinResult res = extract_candidates(left, right, jc);
    SweepPoint p;
    p.gamma = gamma;
    p.candidates = res.candidates.size();
    double sum = 0.0;
    for (const Candidate& c : res.candidates) sum += c.distance;
    p.mean_distance =
        res.candidates.empty() ? 0.0 : sum / double(res.candidates.size());
    report.gamma_points.push_back(p);
  }

  if (!betas.empty()) {
    Vocabulary vocab = build_vocabulary(right, CorpusSide::Other);
    for (double beta : betas) {
      NoiseConfig nc = cfg.noise;
      nc.beta = beta;
      nc.seed = cfg.seed;
      SweepPoint p;
      p.beta = beta;
      std::uint64_t positions = 0, ops = 0;
      for (std::size_t i = 0; i < right.size(); ++i) {
        RandomSource rng =
            derive_rng(nc.seed, right.corpus_id + ":sweep", i);
        NoiseOutcome out = noise(right.other[i].tokens, nc, vocab, rng);
        positions += right.other[i].size();
        ops += out.ops();
      }
      p.positions = positions;
      p.empirical_noise_rate =
          positions == 0 ? 0.0 : double(ops) / double(positions);
      report.beta_points.push_back(p);
    }
  }
  return report;
}

}  // namespace eag
