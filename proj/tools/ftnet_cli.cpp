// tools/ftnet_cli.cpp

// Copyright 2026 The FTNet Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.


// ftnet command line: synth, mix, train, enhance, analyze, metrics.
// Exit status is 0 on success, 1 for unexpected failures, otherwise the
// ErrorKind code of the failure (2 config, 3 usage, 4 shape, 5 format,
// 6 I/O, 7 degenerate input).

#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ftnet/commands.hpp"

namespace {

ftnet::KeyValues ParseOverrides(const std::vector<std::string> &sets) {
  ftnet::KeyValues kv;
  for (const auto &s : sets) {
    const auto eq = s.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw ftnet::UsageError("--set expects key=value, got '" + s + "'");
    }
    kv[ftnet::Trim(s.substr(0, eq))] = ftnet::Trim(s.substr(eq + 1));
  }
  return kv;
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"FTNet time-domain speech enhancement"};
  app.require_subcommand(1);

  ftnet::SynthOptions synth;
  auto *c_synth = app.add_subcommand("synth", "Write a synthetic clean/noise corpus and manifest");
  c_synth->add_option("out_dir", synth.out_dir, "Output directory")->required();
  c_synth->add_option("--train", synth.train, "Train utterances");
  c_synth->add_option("--val", synth.val, "Validation utterances");
  c_synth->add_option("--test", synth.test, "Test utterances");
  c_synth->add_option("--seconds", synth.seconds, "Utterance length in seconds");
  c_synth->add_option("--noise-seconds", synth.noise_seconds, "Length of each noise file");
  c_synth->add_option("--seed", synth.seed, "Seed");

  ftnet::MixOptions mix;
  auto *c_mix = app.add_subcommand("mix", "Mix clean utterances with noise at manifest SNRs");
  c_mix->add_option("manifest", mix.manifest, "clean_path<TAB>snr_db<TAB>split[<TAB>cut]")->required();
  c_mix->add_option("noise_dir", mix.noise_dir, "Directory of noise .wav files")->required();
  c_mix->add_option("out_dir", mix.out_dir, "Output directory")->required();
  c_mix->add_option("--seed", mix.seed, "Seed for cut points");

  ftnet::TrainCommandOptions train;
  std::vector<std::string> train_sets;
  auto *c_train = app.add_subcommand("train", "Train on a mixed dataset");
  c_train->add_option("dataset", train.dataset_dir, "Directory written by 'mix'")->required();
  c_train->add_option("checkpoint", train.checkpoint, "Output checkpoint")->required();
  c_train->add_option("-c,--config", train.config_file, "key = value config file");
  c_train->add_option("--set", train_sets, "Override a config key (key=value)");
  c_train->add_option("--log", train.log_file, "Epoch log (epoch,train_mae,val_mae,lr,action)");
  c_train->add_option("--resume", train.resume, "Continue from this checkpoint");
  c_train->add_option("--val-split", train.val_split, "Split used for validation")
      ->check(CLI::IsMember({"train", "val", "test"}));
  c_train->add_option("--precision", train.precision, "float or double")
      ->check(CLI::IsMember({"float", "double"}));

  ftnet::EnhanceOptions enh;
  std::size_t enh_stages = 0;
  auto *c_enh = app.add_subcommand("enhance", "Enhance a WAV file");
  c_enh->add_option("checkpoint", enh.checkpoint, "Trained checkpoint")->required();
  c_enh->add_option("input", enh.in_wav, "Noisy 16 kHz mono 16-bit WAV")->required();
  c_enh->add_option("output", enh.out_wav, "Enhanced WAV")->required();
  c_enh->add_option("--dump-stages", enh.dump_stages, "Write stage_<l>.wav per stage here");
  c_enh->add_option("--dump-hidden", enh.dump_hidden, "Write hidden-state matrices here");
  auto *stages_opt = c_enh->add_option("--stages", enh_stages, "Stages to run (default: trained Q)")
                         ->check(CLI::PositiveNumber);

  ftnet::AnalyzeOptions ana;
  std::vector<std::string> ana_sets;
  auto *c_ana = app.add_subcommand("analyze", "Report shapes, parameter counts, depth and receptive field");
  c_ana->add_option("-c,--config", ana.config_file, "key = value config file");
  c_ana->add_option("--set", ana_sets, "Override a config key (key=value)");
  c_ana->add_option("--json", ana.json_out, "Also write the report as JSON");

  ftnet::MetricsOptions met;
  auto *c_met = app.add_subcommand("metrics", "SNR of a test signal against the clean reference");
  c_met->add_option("clean", met.clean_wav, "Clean reference")->required();
  c_met->add_option("test", met.test_wav, "Signal under test")->required();
  c_met->add_option("--noisy", met.noisy_wav, "Noisy input, for the improvement figure");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : static_cast<int>(ftnet::ErrorKind::kUsage);
  }

  try {
    if (*c_synth) {
      ftnet::CmdSynth(synth, std::cout);
    } else if (*c_mix) {
      ftnet::CmdMix(mix, std::cout);
    } else if (*c_train) {
      train.overrides = ParseOverrides(train_sets);
      ftnet::CmdTrain(train, std::cout);
    } else if (*c_enh) {
      if (*stages_opt) enh.stages = enh_stages;
      ftnet::CmdEnhance(enh, std::cout);
    } else if (*c_ana) {
      ana.overrides = ParseOverrides(ana_sets);
      ftnet::CmdAnalyze(ana, std::cout);
    } else if (*c_met) {
      ftnet::CmdMetrics(met, std::cout);
    }
  } catch (const ftnet::Error &e) {
    std::cerr << "ftnet: " << e.what() << "\n";
    return e.exit_code();
  } catch (const std::exception &e) {
    std::cerr << "ftnet: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
