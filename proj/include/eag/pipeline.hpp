#ifndef EAG_PIPELINE_HPP
#define EAG_PIPELINE_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "eag/corpus.hpp"
#include "eag/generator.hpp"
#include "eag/noising.hpp"
#include "eag/simjoin.hpp"
#include "eag/transport.hpp"

namespace eag {

struct ManifestEntry {
  std::string pivot_path;
  std::string other_path;  // empty when pivot_path is a TSV
  std::string pivot_lang;
  std::string other_lang;
  std::string lexicon_path;  // pivot -> other map for edit-replay
};

std::vector<ManifestEntry> load_manifest(const std::string& path);

struct PipelineConfig {
  double gamma = 0.3;
  double beta = 0.5;
  double temperature = 5.0;
  std::uint64_t seed = 0;
  int jobs = 0;  // 0 = library default
  bool sorted_output = false;

  JoinConfig join;
  NoiseConfig noise;
  FilterConfig filter;
  TransportConfig transport;
  std::string generator = "edit-replay";

  std::vector<ManifestEntry> manifest;
  std::string out_dir;
  bool emit_train_data = true;
  bool resume = false;  // continue generation from per-pair checkpoints

  // Fill sub-configs from the top-level knobs (gamma -> join.gamma, ...).
  void finalize();
};

// Load a declarative JSON config; fields mirror the CLI flags.
PipelineConfig load_config(const std::string& path);

struct StageReport {
  std::string name;
  double seconds = 0.0;
  std::map<std::string, std::uint64_t> counts;
};

struct PairReport {
  std::string left_lang, right_lang;
  std::size_t candidates = 0;
  std::size_t accepted = 0;
  std::map<std::string, std::size_t> rejected;
  std::vector<StageReport> stages;
};

struct RunReport {
  int version = 1;
  double gamma = 0.0, beta = 0.0;
  std::uint64_t seed = 0;
  std::vector<PairReport> pairs;

  std::string to_json() const;
};

// Full pass: for every unordered pair of non-pivot languages, extract
// candidates, emit generator training data, generate, assemble, and write
// one multi-way corpus under out_dir/<la>-<lb>/. Outputs are sorted and
// seeded, hence byte-identical across reruns and worker counts (the
// edit-replay path).
RunReport run_pipeline(const PipelineConfig& cfg);

struct SweepPoint {
  double gamma = -1.0, beta = -1.0;
  std::size_t candidates = 0;
  double mean_distance = 0.0;
  double empirical_noise_rate = 0.0;
  std::uint64_t positions = 0;
};

struct SweepReport {
  std::vector<SweepPoint> gamma_points;
  std::vector<SweepPoint> beta_points;

  std::string to_json() const;
};

// Data-side hyper-parameter sweep on one corpus pair: candidate counts and
// mean distances per gamma, empirical noise rates per beta.
SweepReport sweep(const BitextCorpus& left, const BitextCorpus& right,
                  const std::vector<double>& gammas,
                  const std::vector<double>& betas, const PipelineConfig& cfg);

}  // namespace eag

#endif  // EAG_PIPELINE_HPP
