// SPDX-License-Identifier: Apache-2.0
//
// seldkit: spatial sound scene synthesis and SELD evaluation toolkit
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SELDKIT_PIPELINE_HPP
#define SELDKIT_PIPELINE_HPP

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#if __has_include(<nlohmann/json.hpp>)
#include <nlohmann/json.hpp>
#else
#include <json.hpp>  // flat vendored copy
#endif

#include "seldkit/common.hpp"
#include "seldkit/event_bank.hpp"
#include "seldkit/features.hpp"
#include "seldkit/metrics.hpp"
#include "seldkit/rir.hpp"
#include "seldkit/room_sim.hpp"
#include "seldkit/scene.hpp"
#include "seldkit/wav.hpp"

namespace seldkit {

// Thrown for problems the invoker caused (bad config, missing inputs);
// anything else escaping the pipeline is an internal failure.
class UserError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Configuration
// ---------------------------------------------------------------------------

struct SplitConfig {
  int split_id = 0;
  std::string role;  // "train", "val", or "test"
  std::vector<std::string> rooms;
};

struct PipelineConfig {
  std::string output_root = ".";
  std::uint64_t seed = 1;
  std::size_t scenes_per_split = 10;  // per (split, room) pair
  double duration = 60.0;             // seconds per scene
  int max_polyphony = 2;              // 2 alternates single/double scenes
  double snr_min_db = 6.0;
  double snr_max_db = 30.0;
  WavSampleFormat sample_format = WavSampleFormat::kFloat32;
  std::vector<SplitConfig> splits;
  std::size_t jobs = 1;
};

// Default split discipline: six splits, one room each, the first held out for
// testing, the second for validation, the rest for training.
inline std::vector<SplitConfig> default_splits() {
  return {
      {1, "test", {"room1"}},  {2, "val", {"room2"}},   {3, "train", {"room3"}},
      {4, "train", {"room4"}}, {5, "train", {"room5"}}, {6, "train", {"room6"}},
  };
}

inline std::map<std::string, RoomSpec> room_table() {
  std::map<std::string, RoomSpec> table;
  for (const RoomSpec& r : build_default_rooms()) table[r.room_id] = r;
  return table;
}

inline void validate_pipeline_config(const PipelineConfig& config) {
  if (config.scenes_per_split == 0) {
    throw UserError("config: scenes_per_split must be positive");
  }
  if (!(config.duration >= 1.0)) {
    throw UserError("config: duration must be at least 1 s");
  }
  if (config.max_polyphony != 1 && config.max_polyphony != 2) {
    throw UserError("config: max_polyphony must be 1 or 2");
  }
  if (!(config.snr_min_db >= 6.0 && config.snr_max_db <= 30.0 &&
        config.snr_min_db <= config.snr_max_db)) {
    throw UserError("config: snr range must sit inside [6, 30] dB");
  }
  if (config.splits.empty()) {
    throw UserError("config: no splits");
  }
  if (config.jobs == 0) {
    throw UserError("config: jobs must be positive");
  }
  const std::map<std::string, RoomSpec> rooms = room_table();
  std::set<int> ids;
  for (const SplitConfig& s : config.splits) {
    if (s.split_id <= 0) {
      throw UserError("config: split ids must be positive");
    }
    if (!ids.insert(s.split_id).second) {
      throw UserError("config: duplicate split id " + std::to_string(s.split_id));
    }
    if (s.role != "train" && s.role != "val" && s.role != "test") {
      throw UserError("config: split " + std::to_string(s.split_id) +
                      " role must be train, val, or test");
    }
    if (s.rooms.empty()) {
      throw UserError("config: split " + std::to_string(s.split_id) + " has no rooms");
    }
    for (const std::string& r : s.rooms) {
      if (rooms.find(r) == rooms.end()) {
        throw UserError("config: unknown room id " + r);
      }
    }
  }
}

inline PipelineConfig default_pipeline_config() {
  PipelineConfig config;
  config.splits = default_splits();
  return config;
}

// Reads the JSON config; absent keys keep their defaults, unknown keys are
// rejected so typos fail loudly.
inline PipelineConfig load_pipeline_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) {
    throw UserError("config: cannot open " + path);
  }
  nlohmann::json j;
  try {
    f >> j;
  } catch (const nlohmann::json::exception& e) {
    throw UserError("config: parse failure in " + path + ": " + e.what());
  }
  PipelineConfig config = default_pipeline_config();
  try {
    for (const auto& [key, value] : j.items()) {
      if (key == "output_root") {
        config.output_root = value.get<std::string>();
      } else if (key == "seed") {
        config.seed = value.get<std::uint64_t>();
      } else if (key == "scenes_per_split") {
        config.scenes_per_split = value.get<std::size_t>();
      } else if (key == "duration_s") {
        config.duration = value.get<double>();
      } else if (key == "max_polyphony") {
        config.max_polyphony = value.get<int>();
      } else if (key == "snr_db") {
        if (value.is_array()) {
          const auto range = value.get<std::vector<double>>();
          if (range.size() != 2) {
            throw UserError("config: snr_db array needs exactly [min, max]");
          }
          config.snr_min_db = range[0];
          config.snr_max_db = range[1];
        } else {
          config.snr_min_db = config.snr_max_db = value.get<double>();
        }
      } else if (key == "sample_format") {
        const std::string fmt = value.get<std::string>();
        if (fmt == "float32") {
          config.sample_format = WavSampleFormat::kFloat32;
        } else if (fmt == "pcm16") {
          config.sample_format = WavSampleFormat::kPcm16;
        } else {
          throw UserError("config: sample_format must be float32 or pcm16");
        }
      } else if (key == "splits") {
        config.splits.clear();
        for (const auto& entry : value) {
          SplitConfig s;
          s.split_id = entry.at("split").get<int>();
          s.role = entry.at("role").get<std::string>();
          s.rooms = entry.at("rooms").get<std::vector<std::string>>();
          config.splits.push_back(std::move(s));
        }
      } else if (key == "jobs") {
        config.jobs = value.get<std::size_t>();
      } else {
        throw UserError("config: unknown key \"" + key + "\" in " + path);
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw UserError("config: bad value in " + path + ": " + e.what());
  }
  validate_pipeline_config(config);
  return config;
}

// The environment variable wins over the config file so scripted runs can
// redirect output without editing configs.
inline std::string resolve_output_root(const PipelineConfig& config) {
  const char* env = std::getenv("SELDKIT_OUTPUT_ROOT");
  if (env != nullptr && env[0] != '\0') return env;
  return config.output_root;
}

// ---------------------------------------------------------------------------
// Manifests
// ---------------------------------------------------------------------------

namespace detail {

inline std::uint64_t fnv1a64(const unsigned char* data, std::size_t n,
                             std::uint64_t h = 14695981039346656037ULL) {
  for (std::size_t i = 0; i < n; ++i) {
    h ^= data[i];
    h *= 1099511628211ULL;
  }
  return h;
}

inline std::uint64_t hash_file(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) {
    throw std::runtime_error("manifest: cannot hash " + path.string());
  }
  std::uint64_t h = 14695981039346656037ULL;
  std::vector<unsigned char> buf(1 << 16);
  while (f) {
    f.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
    h = fnv1a64(buf.data(), static_cast<std::size_t>(f.gcount()), h);
  }
  return h;
}

// Renames over the final path only after the full write succeeded.
template <typename WriteFn>
inline void atomic_write(const std::filesystem::path& path, WriteFn&& write_fn) {
  const std::filesystem::path tmp = path.string() + ".tmp";
  write_fn(tmp.string());
  std::filesystem::rename(tmp, path);
}

}  // namespace detail

// Writes one line per file, `<fnv1a64-hex>  <relative-path>`, sorted by path;
// the content hash makes byte-level reproducibility checkable with diff.
inline void write_manifest(const std::filesystem::path& manifest_path,
                           const std::filesystem::path& root,
                           std::vector<std::string> relpaths) {
  std::sort(relpaths.begin(), relpaths.end());
  detail::atomic_write(manifest_path, [&](const std::string& tmp) {
    std::ofstream f(tmp);
    if (!f) {
      throw std::runtime_error("manifest: cannot open " + tmp);
    }
    for (const std::string& rel : relpaths) {
      char line[32];
      std::snprintf(line, sizeof(line), "%016llx",
                    static_cast<unsigned long long>(detail::hash_file(root / rel)));
      f << line << "  " << rel << "\n";
    }
    if (!f) {
      throw std::runtime_error("manifest: write failure on " + tmp);
    }
  });
}

// ---------------------------------------------------------------------------
// Shared resources
// ---------------------------------------------------------------------------

// Reference circles every room is measured along. Keeping several elevations
// gives moving sources somewhere to continue when a circle ends and spreads
// static directions over more of the sphere.
inline const std::vector<double>& track_elevations_deg() {
  static const std::vector<double> els = {-20.0, 0.0, 20.0};
  return els;
}

namespace detail {

inline std::uint64_t seed_of(Rng rng) { return rng.next_u64(); }

inline std::uint64_t name_hash(const std::string& s) {
  return fnv1a64(reinterpret_cast<const unsigned char*>(s.data()), s.size());
}

constexpr std::uint64_t kStreamBank = 0x62616e6bULL;    // event bank
constexpr std::uint64_t kStreamRirs = 0x72697273ULL;    // room responses
constexpr std::uint64_t kStreamNoise = 0x616d6269ULL;   // ambience
constexpr std::uint64_t kStreamScenes = 0x7363656eULL;  // scene plans

}  // namespace detail

// All trajectory RIR sets for one room in one format. The same (config seed,
// room) pair yields the same tail noise in both formats, so the two formats
// describe one acoustic room.
inline std::vector<TrajectoryRirSet> build_room_trajectories(const RoomSpec& room,
                                                             ArrayFormat format,
                                                             std::uint64_t config_seed) {
  const Rng root = Rng(config_seed).derive(detail::kStreamRirs);
  const TetraArraySpec spec;
  std::vector<TrajectoryRirSet> sets;
  const std::vector<double>& els = track_elevations_deg();
  sets.reserve(els.size());
  for (std::size_t c = 0; c < els.size(); ++c) {
    const std::uint64_t seed =
        detail::seed_of(root.derive(detail::name_hash(room.room_id) + c));
    sets.push_back(simulate_trajectory_rirs(room, build_circle_track(els[c]), spec,
                                            format, seed));
  }
  return sets;
}

// Ambience pool for one room in one format: two rendered segments plus one
// manufactured by summing them.
inline std::vector<AudioBlock> build_room_noise(const std::string& room_id,
                                                ArrayFormat format, double duration,
                                                std::uint64_t config_seed) {
  const Rng root = Rng(config_seed).derive(detail::kStreamNoise);
  const std::uint64_t rh = detail::name_hash(room_id);
  std::vector<AudioBlock> segments;
  segments.push_back(
      render_ambience_segment(detail::seed_of(root.derive(rh * 4 + 0)), duration, format));
  segments.push_back(
      render_ambience_segment(detail::seed_of(root.derive(rh * 4 + 1)), duration, format));
  Rng ext_rng = root.derive(rh * 4 + 2);
  std::vector<AudioBlock> extra = extend_noise(segments, 1, ext_rng, format);
  segments.push_back(std::move(extra.front()));
  return segments;
}

// ---------------------------------------------------------------------------
// File naming
// ---------------------------------------------------------------------------

// "room4" -> 4. Room ids come from the fixed stable, so this is total after
// config validation.
inline int room_number(const std::string& room_id) {
  return std::atoi(room_id.c_str() + 4);
}

inline std::string make_stem(int split_id, const std::string& room_id,
                             std::size_t scene_index) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "fold%d_room%d_mix%03zu", split_id,
                room_number(room_id), scene_index + 1);
  return buf;
}

// Split number out of a "fold<N>_..." stem; -1 when the stem has another shape.
inline int stem_split(const std::string& stem) {
  if (stem.rfind("fold", 0) != 0) return -1;
  int value = 0;
  std::size_t i = 4;
  if (i >= stem.size() || !std::isdigit(static_cast<unsigned char>(stem[i]))) return -1;
  for (; i < stem.size() && std::isdigit(static_cast<unsigned char>(stem[i])); ++i) {
    value = value * 10 + (stem[i] - '0');
  }
  return value;
}

// ---------------------------------------------------------------------------
// synth
// ---------------------------------------------------------------------------

struct SynthSummary {
  std::size_t scenes = 0;
  std::string manifest_path;
};

// Generates the dataset: per (split, room), scenes_per_split scenes rendered
// in both formats from one shared event plan, so the two format trees carry
// identical metadata. Scene audio goes to foa_dev/ and mic_dev/, labels to
// metadata_dev/, and a manifest of content hashes to manifest_synth.txt.
inline SynthSummary run_synth(const PipelineConfig& config) {
  validate_pipeline_config(config);
  namespace fs = std::filesystem;
  const fs::path root = resolve_output_root(config);
  fs::create_directories(root / "foa_dev");
  fs::create_directories(root / "mic_dev");
  fs::create_directories(root / "metadata_dev");

  const Rng root_rng(config.seed);
  const std::vector<EventSample> bank =
      build_event_bank(detail::seed_of(root_rng.derive(detail::kStreamBank)));

  // Group scene jobs by room so each room's RIRs and ambience are built once
  // and dropped before the next room.
  struct SceneJob {
    int split_id;
    std::size_t scene_index;
  };
  std::map<std::string, std::vector<SceneJob>> jobs_by_room;
  for (const SplitConfig& split : config.splits) {
    for (const std::string& room_id : split.rooms) {
      for (std::size_t i = 0; i < config.scenes_per_split; ++i) {
        jobs_by_room[room_id].push_back({split.split_id, i});
      }
    }
  }

  const std::map<std::string, RoomSpec> rooms = room_table();
  std::vector<std::string> relpaths;
  std::mutex relpath_mutex;
  SynthSummary summary;

  for (const auto& [room_id, jobs] : jobs_by_room) {
    const RoomSpec& room = rooms.at(room_id);
    const std::vector<TrajectoryRirSet> traj_foa =
        build_room_trajectories(room, ArrayFormat::kFoa, config.seed);
    const std::vector<TrajectoryRirSet> traj_mic =
        build_room_trajectories(room, ArrayFormat::kMic, config.seed);
    const std::vector<AudioBlock> noise_foa =
        build_room_noise(room_id, ArrayFormat::kFoa, config.duration, config.seed);
    const std::vector<AudioBlock> noise_mic =
        build_room_noise(room_id, ArrayFormat::kMic, config.duration, config.seed);

    const auto render_job = [&](const SceneJob& job) {
      const std::string stem = make_stem(job.split_id, room_id, job.scene_index);
      const std::uint64_t stream =
          (static_cast<std::uint64_t>(job.split_id) * 1009ULL +
           static_cast<std::uint64_t>(room_number(room_id))) *
              100003ULL +
          job.scene_index;
      Rng scene_rng = root_rng.derive(detail::kStreamScenes).derive(stream);

      SceneSpec spec;
      spec.duration = config.duration;
      spec.max_polyphony =
          config.max_polyphony == 2 ? (job.scene_index % 2 == 0 ? 1 : 2) : 1;
      spec.snr_db = scene_rng.uniform(config.snr_min_db, config.snr_max_db);
      spec.seed = scene_rng.next_u64();

      const std::vector<EventPlacement> plan =
          plan_scene(bank, traj_foa, spec, scene_rng);

      std::vector<std::string> produced;
      for (const ArrayFormat format : {ArrayFormat::kFoa, ArrayFormat::kMic}) {
        SceneSpec fmt_spec = spec;
        fmt_spec.format = format;
        const bool foa = format == ArrayFormat::kFoa;
        SceneRecording rec = synthesize_scene(bank, plan, foa ? traj_foa : traj_mic,
                                              foa ? noise_foa : noise_mic, fmt_spec);
        if (config.sample_format == WavSampleFormat::kPcm16) {
          // Headroom for the integer format; float keeps full scale.
          for (auto& ch : rec.audio.channels) {
            for (double& v : ch) v *= 0.25;
          }
        }
        const std::string rel =
            std::string(foa ? "foa_dev/" : "mic_dev/") + stem + ".wav";
        detail::atomic_write(root / rel, [&](const std::string& tmp) {
          write_wav(tmp, rec.audio, config.sample_format);
        });
        produced.push_back(rel);
        if (foa) {
          const std::string meta_rel = "metadata_dev/" + stem + ".csv";
          detail::atomic_write(root / meta_rel, [&](const std::string& tmp) {
            emit_metadata(rec, tmp);
          });
          produced.push_back(meta_rel);
        }
      }
      std::lock_guard<std::mutex> lock(relpath_mutex);
      relpaths.insert(relpaths.end(), produced.begin(), produced.end());
      ++summary.scenes;
    };

    if (config.jobs <= 1 || jobs.size() <= 1) {
      for (const SceneJob& job : jobs) render_job(job);
    } else {
      std::atomic<std::size_t> next{0};
      std::exception_ptr first_error;
      std::mutex error_mutex;
      std::vector<std::thread> workers;
      const std::size_t n_workers = std::min(config.jobs, jobs.size());
      for (std::size_t w = 0; w < n_workers; ++w) {
        workers.emplace_back([&] {
          for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= jobs.size()) return;
            try {
              render_job(jobs[i]);
            } catch (...) {
              std::lock_guard<std::mutex> lock(error_mutex);
              if (!first_error) first_error = std::current_exception();
              return;
            }
          }
        });
      }
      for (std::thread& t : workers) t.join();
      if (first_error) std::rethrow_exception(first_error);
    }
  }

  const fs::path manifest = root / "manifest_synth.txt";
  write_manifest(manifest, root, relpaths);
  summary.manifest_path = manifest.string();
  return summary;
}

// ---------------------------------------------------------------------------
// features
// ---------------------------------------------------------------------------

struct FeaturesSummary {
  std::size_t files = 0;
  std::string stats_path;
  std::string manifest_path;
};

// Extracts the feature stack for every scene of one format. Normalization
// statistics come from the train-role splits alone and are applied to every
// file; the stats and one .feat file per scene land in features_<format>/.
inline FeaturesSummary run_features(const PipelineConfig& config, ArrayFormat format) {
  validate_pipeline_config(config);
  namespace fs = std::filesystem;
  const fs::path root = resolve_output_root(config);
  const std::string fmt = array_format_name(format);
  const fs::path audio_dir = root / (fmt + std::string("_dev"));
  if (!fs::is_directory(audio_dir)) {
    throw UserError("features: missing dataset directory " + audio_dir.string());
  }

  std::vector<std::string> stems;
  for (const auto& entry : fs::directory_iterator(audio_dir)) {
    if (entry.path().extension() == ".wav") {
      stems.push_back(entry.path().stem().string());
    }
  }
  std::sort(stems.begin(), stems.end());
  if (stems.empty()) {
    throw UserError("features: no WAV files in " + audio_dir.string());
  }

  std::set<int> train_splits;
  for (const SplitConfig& s : config.splits) {
    if (s.role == "train") train_splits.insert(s.split_id);
  }
  std::vector<std::string> train_stems;
  for (const std::string& stem : stems) {
    if (train_splits.count(stem_split(stem)) > 0) train_stems.push_back(stem);
  }
  if (train_stems.empty()) {
    throw UserError("features: no train-role files to compute statistics from");
  }

  const MelFilterbank fb;

  // Pass 1: statistics over the train files only.
  std::vector<double> sum, sum_sq;
  std::vector<std::size_t> count;
  for (const std::string& stem : train_stems) {
    const AudioBlock audio = read_wav((audio_dir / (stem + ".wav")).string());
    const FeatureTensor feats = extract_features(audio, format, fb);
    accumulate_norm_stats(feats, sum, sum_sq, count);
  }
  const NormStats stats = finalize_norm_stats(sum, sum_sq, count, format);

  const fs::path feat_dir = root / (std::string("features_") + fmt);
  fs::create_directories(feat_dir);
  const std::string stats_name = "norm_stats.json";
  detail::atomic_write(feat_dir / stats_name, [&](const std::string& tmp) {
    save_norm_stats(stats, tmp);
  });

  // Pass 2: extract, standardize, and persist every file.
  std::vector<std::string> relpaths;
  relpaths.push_back(std::string("features_") + fmt + "/" + stats_name);
  for (const std::string& stem : stems) {
    const AudioBlock audio = read_wav((audio_dir / (stem + ".wav")).string());
    FeatureTensor feats = extract_features(audio, format, fb);
    apply_norm_stats(feats, stats);
    const std::string rel = std::string("features_") + fmt + "/" + stem + ".feat";
    detail::atomic_write(root / rel, [&](const std::string& tmp) {
      save_feature_tensor(feats, tmp, stats_name);
    });
    relpaths.push_back(rel);
  }

  const fs::path manifest = root / (std::string("manifest_features_") + fmt + ".txt");
  write_manifest(manifest, root, relpaths);

  FeaturesSummary summary;
  summary.files = stems.size();
  summary.stats_path = (feat_dir / stats_name).string();
  summary.manifest_path = manifest.string();
  return summary;
}

// ---------------------------------------------------------------------------
// eval
// ---------------------------------------------------------------------------

struct EvalOptions {
  std::string ref_dir;
  std::string pred_dir;
  bool allow_partial = false;
  std::string report_path = "eval_report.txt";
};

struct EvalResult {
  MetricsReport all;
  MetricsReport overlap1;
  MetricsReport overlap2;
  std::size_t files = 0;
  std::size_t files_overlap1 = 0;
  std::size_t files_overlap2 = 0;
  std::vector<std::string> missing_pred;  // stems in ref only
  std::vector<std::string> missing_ref;   // stems in pred only
};

namespace detail {

inline void print_report_block(std::ostream& os, const std::string& label,
                               std::size_t files, const MetricsReport& r) {
  char buf[64];
  os << "[" << label << "]\n";
  os << "files: " << files << "\n";
  const auto line = [&](const char* key, double value) {
    std::snprintf(buf, sizeof(buf), "%s: %.6f\n", key, value);
    os << buf;
  };
  line("er_20", r.er_20);
  line("f_20", r.f_20);
  if (r.le_defined) {
    line("le_cd_deg", r.le_cd);
  } else {
    os << "le_cd_deg: none\n";
  }
  line("lr_cd", r.lr_cd);
  line("er", r.er);
  line("f", r.f_seg);
  if (r.doa_error_defined) {
    line("doa_error_deg", r.doa_error_deg);
  } else {
    os << "doa_error_deg: none\n";
  }
  line("frame_recall", r.frame_recall);
}

}  // namespace detail

inline std::string format_eval_report(const EvalResult& result) {
  std::ostringstream os;
  os << "seld evaluation report\n";
  detail::print_report_block(os, "all", result.files, result.all);
  if (result.files_overlap1 > 0) {
    detail::print_report_block(os, "overlap1", result.files_overlap1, result.overlap1);
  }
  if (result.files_overlap2 > 0) {
    detail::print_report_block(os, "overlap2", result.files_overlap2, result.overlap2);
  }
  return os.str();
}

// Scores every prediction CSV against the reference CSV with the same stem.
// Files are bucketed by the reference's maximum simultaneous event count so
// single-source and two-source material also get separate scores.
inline EvalResult run_eval(const EvalOptions& options) {
  namespace fs = std::filesystem;
  const auto list_stems = [](const std::string& dir) {
    if (!fs::is_directory(dir)) {
      throw UserError("eval: not a directory: " + dir);
    }
    std::vector<std::string> stems;
    for (const auto& entry : fs::directory_iterator(dir)) {
      if (entry.path().extension() == ".csv") {
        stems.push_back(entry.path().stem().string());
      }
    }
    std::sort(stems.begin(), stems.end());
    return stems;
  };
  const std::vector<std::string> ref_stems = list_stems(options.ref_dir);
  const std::vector<std::string> pred_stems = list_stems(options.pred_dir);

  EvalResult result;
  std::vector<std::string> common;
  std::set_intersection(ref_stems.begin(), ref_stems.end(), pred_stems.begin(),
                        pred_stems.end(), std::back_inserter(common));
  std::set_difference(ref_stems.begin(), ref_stems.end(), pred_stems.begin(),
                      pred_stems.end(), std::back_inserter(result.missing_pred));
  std::set_difference(pred_stems.begin(), pred_stems.end(), ref_stems.begin(),
                      ref_stems.end(), std::back_inserter(result.missing_ref));

  if (!options.allow_partial &&
      (!result.missing_pred.empty() || !result.missing_ref.empty())) {
    std::string msg = "eval: file stems do not match;";
    for (const std::string& s : result.missing_pred) msg += " missing prediction " + s;
    for (const std::string& s : result.missing_ref) msg += " missing reference " + s;
    throw UserError(msg);
  }
  if (common.empty()) {
    throw UserError("eval: no common stems between " + options.ref_dir + " and " +
                    options.pred_dir);
  }

  MetricsAccumulator acc_all, acc_o1, acc_o2;
  for (const std::string& stem : common) {
    const std::vector<SeldFrame> ref =
        parse_label_file((fs::path(options.ref_dir) / (stem + ".csv")).string());
    const std::vector<SeldFrame> pred =
        parse_label_file((fs::path(options.pred_dir) / (stem + ".csv")).string());
    std::size_t max_events = 0;
    for (const SeldFrame& f : ref) max_events = std::max(max_events, f.events.size());
    acc_all.add(ref, pred);
    if (max_events >= 2) {
      acc_o2.add(ref, pred);
      ++result.files_overlap2;
    } else {
      acc_o1.add(ref, pred);
      ++result.files_overlap1;
    }
    ++result.files;
  }
  result.all = acc_all.finalize("all");
  result.overlap1 = acc_o1.finalize("overlap1");
  result.overlap2 = acc_o2.finalize("overlap2");

  if (!options.report_path.empty()) {
    detail::atomic_write(options.report_path, [&](const std::string& tmp) {
      std::ofstream f(tmp);
      if (!f) {
        throw std::runtime_error("eval: cannot open report " + tmp);
      }
      f << format_eval_report(result);
      if (!f) {
        throw std::runtime_error("eval: write failure on report " + tmp);
      }
    });
  }
  return result;
}

// ---------------------------------------------------------------------------
// simulate-rirs
// ---------------------------------------------------------------------------

struct RirsSummary {
  std::size_t trajectories = 0;
  std::string manifest_path;
};

// Persists every configured room's trajectory RIR sets for both formats under
// rirs/<room_id>/<format>_el<elevation>/.
inline RirsSummary run_simulate_rirs(const PipelineConfig& config) {
  validate_pipeline_config(config);
  namespace fs = std::filesystem;
  const fs::path root = resolve_output_root(config);
  const fs::path rir_root = root / "rirs";

  std::set<std::string> room_ids;
  for (const SplitConfig& s : config.splits) {
    room_ids.insert(s.rooms.begin(), s.rooms.end());
  }
  const std::map<std::string, RoomSpec> rooms = room_table();

  RirsSummary summary;
  std::vector<std::string> relpaths;
  for (const std::string& room_id : room_ids) {
    for (const ArrayFormat format : {ArrayFormat::kFoa, ArrayFormat::kMic}) {
      const std::vector<TrajectoryRirSet> sets =
          build_room_trajectories(rooms.at(room_id), format, config.seed);
      for (std::size_t c = 0; c < sets.size(); ++c) {
        char traj_id[48];
        std::snprintf(traj_id, sizeof(traj_id), "%s_el%+03d", array_format_name(format),
                      static_cast<int>(std::lround(track_elevations_deg()[c])));
        save_trajectory_rirs(rir_root.string(), sets[c], traj_id);
        ++summary.trajectories;
        const fs::path dir = fs::path("rirs") / room_id / traj_id;
        relpaths.push_back((dir / "directions.csv").string());
        for (std::size_t i = 0; i < sets[c].entries.size(); ++i) {
          char name[32];
          std::snprintf(name, sizeof(name), "rir_%04zu.wav", i);
          relpaths.push_back((dir / name).string());
        }
      }
    }
  }

  const fs::path manifest = root / "manifest_rirs.txt";
  write_manifest(manifest, root, relpaths);
  summary.manifest_path = manifest.string();
  return summary;
}

}  // namespace seldkit

#endif  // SELDKIT_PIPELINE_HPP
