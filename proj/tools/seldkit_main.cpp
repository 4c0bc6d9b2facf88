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

// Command-line front end: synthesize datasets, extract features, score
// predictions, and persist room impulse responses.

#include <cstdio>
#include <exception>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "seldkit/pipeline.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUserError = 1;
constexpr int kExitInternalError = 2;

struct CommonOptions {
  std::string config_path;
  std::string output_root;
  std::uint64_t seed = 0;
  bool seed_set = false;
  std::size_t scenes = 0;
  bool scenes_set = false;
  bool full_size = false;
  std::size_t jobs = 0;
  bool jobs_set = false;
};

void add_common_options(CLI::App* cmd, CommonOptions* opts) {
  cmd->add_option("--config", opts->config_path, "JSON pipeline configuration file");
  cmd->add_option("--output-root", opts->output_root,
                  "Root directory for all outputs (also settable via "
                  "SELDKIT_OUTPUT_ROOT)");
  cmd->add_option("--seed", opts->seed, "Master seed override")
      ->each([opts](const std::string&) { opts->seed_set = true; });
  cmd->add_option("--scenes", opts->scenes, "Scenes per (split, room) pair")
      ->each([opts](const std::string&) { opts->scenes_set = true; });
  cmd->add_flag("--full-size", opts->full_size,
                "Render 100 scenes per (split, room) instead of the default 10");
  cmd->add_option("--jobs", opts->jobs, "Worker threads for scene rendering")
      ->each([opts](const std::string&) { opts->jobs_set = true; });
}

seldkit::PipelineConfig build_config(const CommonOptions& opts) {
  seldkit::PipelineConfig config = opts.config_path.empty()
                                       ? seldkit::default_pipeline_config()
                                       : seldkit::load_pipeline_config(opts.config_path);
  if (!opts.output_root.empty()) config.output_root = opts.output_root;
  if (opts.seed_set) config.seed = opts.seed;
  if (opts.full_size) config.scenes_per_split = 100;
  if (opts.scenes_set) config.scenes_per_split = opts.scenes;
  if (opts.jobs_set) config.jobs = opts.jobs;
  seldkit::validate_pipeline_config(config);
  return config;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"seldkit: spatial sound scene synthesis, features, and scoring"};
  app.require_subcommand(1);

  CommonOptions synth_opts;
  CLI::App* synth = app.add_subcommand(
      "synth", "Synthesize the multichannel dataset in both formats");
  add_common_options(synth, &synth_opts);

  CommonOptions feat_opts;
  std::string feat_format = "foa";
  CLI::App* features =
      app.add_subcommand("features", "Extract feature stacks for one format");
  add_common_options(features, &feat_opts);
  features->add_option("--format", feat_format, "Audio format: foa or mic")
      ->check(CLI::IsMember({"foa", "mic"}));

  seldkit::EvalOptions eval_opts;
  CLI::App* eval =
      app.add_subcommand("eval", "Score prediction CSVs against reference CSVs");
  eval->add_option("--ref", eval_opts.ref_dir, "Directory of reference label CSVs")
      ->required();
  eval->add_option("--pred", eval_opts.pred_dir, "Directory of prediction CSVs")
      ->required();
  eval->add_flag("--allow-partial", eval_opts.allow_partial,
                 "Score the common stems instead of failing on mismatches");
  eval->add_option("--out", eval_opts.report_path,
                   "Report output path (default eval_report.txt)");

  CommonOptions rir_opts;
  CLI::App* rirs = app.add_subcommand(
      "simulate-rirs", "Simulate and persist trajectory RIR sets per room");
  add_common_options(rirs, &rir_opts);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);  // help text, exit 0
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUserError;
  }

  try {
    if (synth->parsed()) {
      const seldkit::PipelineConfig config = build_config(synth_opts);
      const seldkit::SynthSummary summary = seldkit::run_synth(config);
      std::cout << "synthesized " << summary.scenes << " scenes per format\n"
                << "manifest: " << summary.manifest_path << "\n";
    } else if (features->parsed()) {
      const seldkit::PipelineConfig config = build_config(feat_opts);
      const seldkit::ArrayFormat format = feat_format == "mic"
                                              ? seldkit::ArrayFormat::kMic
                                              : seldkit::ArrayFormat::kFoa;
      const seldkit::FeaturesSummary summary = seldkit::run_features(config, format);
      std::cout << "extracted features for " << summary.files << " files\n"
                << "stats: " << summary.stats_path << "\n"
                << "manifest: " << summary.manifest_path << "\n";
    } else if (eval->parsed()) {
      const seldkit::EvalResult result = seldkit::run_eval(eval_opts);
      std::cout << seldkit::format_eval_report(result);
      if (!result.missing_pred.empty() || !result.missing_ref.empty()) {
        std::cout << "unmatched stems skipped: "
                  << result.missing_pred.size() + result.missing_ref.size() << "\n";
      }
      std::cout << "report written to " << eval_opts.report_path << "\n";
    } else if (rirs->parsed()) {
      const seldkit::PipelineConfig config = build_config(rir_opts);
      const seldkit::RirsSummary summary = seldkit::run_simulate_rirs(config);
      std::cout << "wrote " << summary.trajectories << " trajectory RIR sets\n"
                << "manifest: " << summary.manifest_path << "\n";
    }
  } catch (const seldkit::UserError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUserError;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitInternalError;
  }
  return kExitOk;
}
