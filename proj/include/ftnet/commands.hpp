// ftnet/commands.hpp

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


#ifndef FTNET_COMMANDS_HPP_
#define FTNET_COMMANDS_HPP_

// Library side of the ftnet command line. Each command takes a plain options
// struct, writes its human-readable report to `out`, and returns a summary
// that tests can inspect without parsing text.

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "ftnet/audio.hpp"
#include "ftnet/config.hpp"
#include "ftnet/error.hpp"
#include "ftnet/mixer.hpp"
#include "ftnet/model.hpp"
#include "ftnet/train.hpp"

namespace ftnet {

namespace fs = std::filesystem;

namespace detail {

inline void EnsureDir(const fs::path &dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create directory " + dir.string() + ": " + ec.message());
}

inline void WriteText(const fs::path &path, const std::string &text) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out << text;
  if (!out) throw IoError("short write to " + path.string());
}

inline std::vector<fs::path> WavFilesIn(const fs::path &dir) {
  if (!fs::is_directory(dir)) throw IoError("not a directory: " + dir.string());
  std::vector<fs::path> files;
  for (const auto &e : fs::directory_iterator(dir))
    if (e.is_regular_file() && e.path().extension() == ".wav") files.push_back(e.path());
  std::sort(files.begin(), files.end());
  return files;
}

inline void EchoConfig(std::ostream &out, const KeyValues &kv) {
  for (const auto &[k, v] : kv) out << "# " << k << " = " << v << "\n";
}

}  // namespace detail

// ---------------------------------------------------------------------------
// synth: desk-scale corpus of speech-like tones and filtered noises
// ---------------------------------------------------------------------------

struct SynthOptions {
  std::string out_dir;
  std::size_t train = 16;
  std::size_t val = 4;
  std::size_t test = 2;
  double seconds = 4.0;
  double noise_seconds = 20.0;
  std::uint64_t seed = 1;
};

struct SynthSummary {
  std::string manifest_path;
  std::string noise_dir;
  std::size_t utterances = 0;
};

/// Writes clean/, noise/ and manifest.tsv under out_dir. SNRs walk the
/// allowed grid of each split.
inline SynthSummary CmdSynth(const SynthOptions &o, std::ostream &out) {
  if (o.out_dir.empty()) throw UsageError("synth: output directory required");
  if (!(o.seconds > 0.0) || !(o.noise_seconds > 0.0)) throw UsageError("synth: durations must be positive");
  const fs::path root(o.out_dir);
  detail::EnsureDir(root / "clean");
  detail::EnsureDir(root / "noise");
  Rng rng(DeriveSeed(o.seed, 0x73796e, 0));
  const auto n = static_cast<std::size_t>(o.seconds * kSampleRate);
  const auto nn = static_cast<std::size_t>(o.noise_seconds * kSampleRate);

  const NoiseKind kinds[] = {NoiseKind::kWhite, NoiseKind::kLowpass, NoiseKind::kHighpass,
                             NoiseKind::kBandpass};
  const char *kind_names[] = {"white", "lowpass", "highpass", "bandpass"};
  for (int k = 0; k < 4; ++k) {
    WriteWav(SynthesizeNoise(kinds[k], nn, rng), (root / "noise" / (std::string(kind_names[k]) + ".wav")).string());
  }

  MixManifest m;
  auto emit = [&](Split split, std::size_t count) {
    for (std::size_t i = 0; i < count; ++i) {
      std::ostringstream name;
      name << SplitName(split) << '_' << std::setw(4) << std::setfill('0') << i << ".wav";
      WriteWav(SynthesizeSpeechLike(n, rng), (root / "clean" / name.str()).string());
      const double snr = split == Split::kTest ? (i % 2 == 0 ? -5.0 : -2.0)
                                               : -5.0 + static_cast<double>(i % 16);
      m.records.push_back({"clean/" + name.str(), snr, split, std::nullopt});
    }
  };
  emit(Split::kTrain, o.train);
  emit(Split::kVal, o.val);
  emit(Split::kTest, o.test);
  SynthSummary s;
  s.manifest_path = (root / "manifest.tsv").string();
  s.noise_dir = (root / "noise").string();
  s.utterances = m.records.size();
  detail::WriteText(s.manifest_path, FormatManifest(m));
  out << "synth: " << s.utterances << " utterances, 4 noises -> " << root.string() << "\n";
  return s;
}

// ---------------------------------------------------------------------------
// mix: manifest + noise directory -> noisy/clean WAV pairs
// ---------------------------------------------------------------------------

struct MixOptions {
  std::string manifest;
  std::string noise_dir;
  std::string out_dir;
  std::uint64_t seed = 1;
};

struct PairEntry {
  std::string noisy_path;
  std::string clean_path;
  Split split = Split::kTrain;
  double snr_db = 0.0;
  double measured_snr_db = 0.0;
};

struct MixSummary {
  std::vector<PairEntry> pairs;
  std::string resolved_manifest;
  std::string pairs_list;
};

inline constexpr const char *kPairsFile = "pairs.tsv";
inline constexpr const char *kResolvedManifestFile = "resolved_manifest.tsv";

inline NoiseBank LoadNoiseBank(const std::string &dir, std::uint64_t seed) {
  std::vector<AudioClip> sources;
  for (const auto &f : detail::WavFilesIn(dir)) sources.push_back(ReadWav(f.string()));
  if (sources.empty()) throw IoError("no .wav noise files in " + dir);
  return NoiseBank::Concatenate(sources, seed);
}

/// Writes noisy/ and clean/ WAVs, the resolved manifest (explicit cut points)
/// and pairs.tsv (noisy, clean, split, target SNR) under out_dir.
inline MixSummary CmdMix(const MixOptions &o, std::ostream &out) {
  if (o.out_dir.empty()) throw UsageError("mix: output directory required");
  const MixManifest m = ReadManifest(o.manifest);
  const NoiseBank bank = LoadNoiseBank(o.noise_dir, o.seed);
  const fs::path root(o.out_dir);
  detail::EnsureDir(root / "noisy");
  detail::EnsureDir(root / "clean");
  MixSummary s;
  MixManifest resolved;
  std::string list;
  std::size_t index = 0;
  ForEachPair(m, bank, o.seed, [&](MixedPair &&p) {
    std::ostringstream name;
    name << SplitName(p.record.split) << '_' << std::setw(5) << std::setfill('0') << index++ << '_'
         << fs::path(p.record.clean_path).stem().string() << ".wav";
    PairEntry e;
    e.noisy_path = (root / "noisy" / name.str()).string();
    e.clean_path = (root / "clean" / name.str()).string();
    e.split = p.record.split;
    e.snr_db = p.record.snr_db;
    e.measured_snr_db = p.mix.measured_snr_db;
    WriteWav(p.noisy, e.noisy_path);
    WriteWav(p.clean, e.clean_path);
    list += "noisy/" + name.str() + "\tclean/" + name.str() + "\t" + SplitName(e.split) + "\t" +
            detail::FormatReal(e.snr_db) + "\n";
    MixRecord r = p.record;
    r.clean_path = fs::absolute(r.clean_path).string();
    resolved.records.push_back(r);
    s.pairs.push_back(e);
  });
  s.resolved_manifest = (root / kResolvedManifestFile).string();
  s.pairs_list = (root / kPairsFile).string();
  detail::WriteText(s.resolved_manifest, FormatManifest(resolved));
  detail::WriteText(s.pairs_list, list);
  out << "# seed = " << o.seed << "\n";
  for (const auto &e : s.pairs) {
    out << e.noisy_path << "\t" << SplitName(e.split) << "\ttarget " << e.snr_db << " dB\tmeasured "
        << std::fixed << std::setprecision(3) << e.measured_snr_db << " dB\n"
        << std::defaultfloat;
  }
  out << "mix: " << s.pairs.size() << " pairs -> " << root.string() << "\n";
  return s;
}

/// Reads the pairs.tsv written by CmdMix; paths resolve against its directory.
inline std::vector<PairEntry> ReadPairsList(const std::string &dataset_dir) {
  const fs::path root(dataset_dir);
  const fs::path list = root / kPairsFile;
  std::ifstream in(list);
  if (!in) throw IoError("cannot open " + list.string());
  std::vector<PairEntry> pairs;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::vector<std::string> cols;
    std::stringstream ss(line);
    for (std::string c; std::getline(ss, c, '\t');) cols.push_back(c);
    if (cols.size() != 4) {
      throw FormatError(list.string() + ":" + std::to_string(lineno) + ": expected 4 columns");
    }
    PairEntry e;
    e.noisy_path = (root / cols[0]).string();
    e.clean_path = (root / cols[1]).string();
    e.split = ParseSplit(cols[2]);
    e.snr_db = detail::ParseReal("snr", cols[3]);
    pairs.push_back(e);
  }
  return pairs;
}

inline std::vector<UtterancePair> LoadSplit(const std::vector<PairEntry> &pairs, Split split) {
  std::vector<UtterancePair> out;
  for (const auto &e : pairs) {
    if (e.split != split) continue;
    UtterancePair u{ReadWav(e.noisy_path), ReadWav(e.clean_path)};
    if (u.noisy.size() != u.clean.size()) {
      throw FormatError("pair " + e.noisy_path + ": noisy and clean lengths differ");
    }
    out.push_back(std::move(u));
  }
  return out;
}

// ---------------------------------------------------------------------------
// train
// ---------------------------------------------------------------------------

struct TrainCommandOptions {
  std::string config_file;  // optional key = value file
  KeyValues overrides;      // applied after the file
  std::string dataset_dir;  // output of CmdMix
  std::string checkpoint;   // written after every epoch and at the end
  std::string log_file;     // epoch lines only; empty = none
  std::string resume;       // optional checkpoint to continue from
  std::string val_split = "val";
  std::string precision = "float";
};

struct TrainSummary {
  std::vector<EpochRecord> epochs;
  TrainState state;
  KeyValues resolved;
};

/// Merges the config file and overrides into model and training settings.
/// Unknown keys are rejected.
inline std::pair<ModelConfig, TrainOptions> ResolveTrainConfig(const std::string &file,
                                                               const KeyValues &overrides) {
  KeyValues kv;
  if (!file.empty()) kv = ReadKeyValuesFile(file);
  for (const auto &[k, v] : overrides) kv[k] = v;
  for (const auto &[k, v] : kv) {
    if (!ModelConfig::IsModelKey(k) && !TrainOptions::IsTrainKey(k)) {
      throw ConfigError("unknown configuration key '" + k + "'");
    }
  }
  ModelConfig cfg = ModelConfig::FromKeyValues(kv);
  TrainOptions opt;
  opt.Apply(kv);
  opt.Validate();
  return {cfg, opt};
}

template <typename T>
TrainSummary RunTraining(Trainer<T> &tr, const TrainCommandOptions &o, std::ostream &out) {
  const std::vector<PairEntry> list = ReadPairsList(o.dataset_dir);
  const std::vector<UtterancePair> train = LoadSplit(list, Split::kTrain);
  const std::vector<UtterancePair> val = LoadSplit(list, ParseSplit(o.val_split));
  if (train.empty()) throw UsageError("train: dataset has no train pairs");
  if (val.empty()) throw UsageError("train: dataset has no " + o.val_split + " pairs");

  TrainSummary s;
  s.resolved = tr.config().ToKeyValues();
  for (const auto &[k, v] : tr.options().ToKeyValues()) s.resolved[k] = v;
  s.resolved["precision"] = sizeof(T) == 4 ? "float" : "double";
  detail::EchoConfig(out, s.resolved);
  out << "# train_pairs = " << train.size() << "\n# val_pairs = " << val.size() << "\n";
  out.flush();

  std::ofstream log;
  if (!o.log_file.empty()) {
    log.open(o.log_file, o.resume.empty() ? std::ios::trunc : std::ios::app);
    if (!log) throw IoError("cannot write log " + o.log_file);
  }
  tr.Run(train, val, [&](const EpochRecord &r) {
    const std::string line = FormatLogLine(r);
    out << line << "\n";
    out.flush();
    if (log.is_open()) log << line << "\n" << std::flush;
    s.epochs.push_back(r);
    if (!o.checkpoint.empty()) tr.Save(o.checkpoint);
  });
  if (!o.checkpoint.empty()) tr.Save(o.checkpoint);
  s.state = tr.state();
  return s;
}

inline TrainSummary CmdTrain(const TrainCommandOptions &o, std::ostream &out) {
  if (o.dataset_dir.empty()) throw UsageError("train: dataset directory required");
  if (o.checkpoint.empty()) throw UsageError("train: output checkpoint path required");
  if (!o.resume.empty()) {
    if (!o.config_file.empty() || !o.overrides.empty()) {
      throw UsageError("train: --resume takes its configuration from the checkpoint");
    }
    const auto bytes = ReadFileBytes(o.resume);
    if (CheckpointRealBytes(bytes) == 4) {
      Trainer<float> tr(ParseCheckpoint<float>(bytes));
      return RunTraining(tr, o, out);
    }
    Trainer<double> tr(ParseCheckpoint<double>(bytes));
    return RunTraining(tr, o, out);
  }
  auto [cfg, opt] = ResolveTrainConfig(o.config_file, o.overrides);
  if (o.precision == "float") {
    Trainer<float> tr(cfg, opt);
    return RunTraining(tr, o, out);
  }
  if (o.precision == "double") {
    Trainer<double> tr(cfg, opt);
    return RunTraining(tr, o, out);
  }
  throw ConfigError("precision must be 'float' or 'double'");
}

// ---------------------------------------------------------------------------
// enhance
// ---------------------------------------------------------------------------

struct EnhanceOptions {
  std::string checkpoint;
  std::string in_wav;
  std::string out_wav;
  std::string dump_stages;  // directory for stage_<l>.wav
  std::string dump_hidden;  // directory for stage_<l>/frame_<i>.txt
  std::optional<std::size_t> stages;
  std::size_t frames_per_batch = 64;
};

struct EnhanceResult {
  AudioClip output;
  std::vector<AudioClip> stage_outputs;  // filled when dumping stages
  std::size_t stages = 0;
  std::size_t frames = 0;
};

inline void WriteMatrix(const fs::path &path, std::span<const double> v, std::size_t rows,
                        std::size_t cols) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out.precision(9);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) out << (c ? " " : "") << v[r * cols + c];
    out << "\n";
  }
}

/// Runs every frame of `clip` through `stages` stages and overlap-adds each
/// stage's frames back to the input length.
template <typename T>
EnhanceResult Enhance(const FTNetParams<T> &p, const ModelConfig &cfg, std::size_t hop,
                      const AudioClip &clip, const EnhanceOptions &o) {
  const std::size_t q = o.stages.value_or(cfg.stages);
  if (q < 1) throw UsageError("enhance: --stages must be >= 1");
  const bool keep_stages = !o.dump_stages.empty();
  const bool keep_hidden = !o.dump_hidden.empty();
  const FrameBatch<T> framed = FrameSignal<T>(clip, cfg.frame_len, hop);
  const std::size_t n = framed.frames.shape().batch, f = cfg.frame_len;
  const std::size_t hc = cfg.encoder_channels[0], hl = cfg.frame_len / 2;

  std::vector<std::vector<T>> stage_frames(keep_stages ? q : 1, std::vector<T>(n * f));
  NoGradGuard no_grad;
  const std::size_t step = std::max<std::size_t>(1, o.frames_per_batch);
  for (std::size_t b0 = 0; b0 < n; b0 += step) {
    const std::size_t nb = std::min(step, n - b0);
    const auto all = framed.frames.value();
    std::vector<T> chunk(all.begin() + b0 * f, all.begin() + (b0 + nb) * f);
    const Tensor<T> x = Tensor<T>::FromValues({nb, 1, f}, std::move(chunk));
    const MultistageOutput<T> out = MultistageForward(p, cfg, x, q);
    for (std::size_t l = 0; l < q; ++l) {
      if (!keep_stages && l + 1 < q) continue;
      const auto v = out.estimates[l].value();
      std::copy(v.begin(), v.end(), stage_frames[keep_stages ? l : 0].begin() + b0 * f);
    }
    if (keep_hidden) {
      for (std::size_t l = 0; l < q; ++l) {
        const fs::path dir = fs::path(o.dump_hidden) / ("stage_" + std::to_string(l + 1));
        detail::EnsureDir(dir);
        const auto h = out.hidden[l].value();
        for (std::size_t i = 0; i < nb; ++i) {
          std::vector<double> m(h.begin() + i * hc * hl, h.begin() + (i + 1) * hc * hl);
          std::ostringstream name;
          name << "frame_" << std::setw(5) << std::setfill('0') << b0 + i << ".txt";
          WriteMatrix(dir / name.str(), m, hc, hl);
        }
      }
    }
  }

  auto assemble = [&](std::vector<T> frames) {
    FrameBatch<T> fb{Tensor<T>::FromValues({n, 1, f}, std::move(frames)), hop, clip.size()};
    AudioClip a = OverlapAdd(fb);
    a.sample_rate = clip.sample_rate;
    return a;
  };
  EnhanceResult r;
  r.stages = q;
  r.frames = n;
  if (keep_stages) {
    for (std::size_t l = 0; l < q; ++l) r.stage_outputs.push_back(assemble(stage_frames[l]));
    r.output = r.stage_outputs.back();
  } else {
    r.output = assemble(std::move(stage_frames[0]));
  }
  return r;
}

inline EnhanceResult CmdEnhance(const EnhanceOptions &o, std::ostream &out) {
  if (o.checkpoint.empty() || o.in_wav.empty() || o.out_wav.empty()) {
    throw UsageError("enhance: checkpoint, input and output paths are required");
  }
  const auto bytes = ReadFileBytes(o.checkpoint);
  const AudioClip clip = ReadWav(o.in_wav);
  if (clip.samples.empty()) throw FormatError(o.in_wav + ": no samples");
  EnhanceResult r;
  ModelConfig cfg;
  if (CheckpointRealBytes(bytes) == 4) {
    const Checkpoint<float> ck = ParseCheckpoint<float>(bytes);
    cfg = ck.config;
    r = Enhance(ck.params, ck.config, ck.options.hop, clip, o);
  } else {
    const Checkpoint<double> ck = ParseCheckpoint<double>(bytes);
    cfg = ck.config;
    r = Enhance(ck.params, ck.config, ck.options.hop, clip, o);
  }
  KeyValues kv = cfg.ToKeyValues();
  kv["stages"] = std::to_string(r.stages);
  detail::EchoConfig(out, kv);
  WriteWav(r.output, o.out_wav);
  if (!o.dump_stages.empty()) {
    detail::EnsureDir(o.dump_stages);
    for (std::size_t l = 0; l < r.stage_outputs.size(); ++l) {
      WriteWav(r.stage_outputs[l], (fs::path(o.dump_stages) / ("stage_" + std::to_string(l + 1) + ".wav")).string());
    }
  }
  out << "enhance: " << clip.size() << " samples, " << r.frames << " frames, " << r.stages
      << " stages -> " << o.out_wav << "\n";
  return r;
}

// ---------------------------------------------------------------------------
// analyze
// ---------------------------------------------------------------------------

inline nlohmann::json StructureJson(const ModelConfig &cfg, const StructureReport &r) {
  nlohmann::json j;
  j["config"] = cfg.ToKeyValues();
  j["total_parameters"] = r.parameters.total;
  nlohmann::json layers = nlohmann::json::array();
  for (const auto &[name, count] : r.parameters.per_layer) layers.push_back({{"layer", name}, {"parameters", count}});
  j["parameters"] = layers;
  j["depth_per_stage"] = r.depth_per_stage;
  j["stages"] = cfg.stages;
  j["unrolled_depth"] = r.unrolled_depth(cfg.stages);
  j["glu_receptive_field"] = r.glu_receptive_field;
  nlohmann::json trace = nlohmann::json::array();
  for (const auto &t : r.shape_trace) {
    trace.push_back({{"layer", t.name},
                     {"input", {t.input.channels, t.input.length}},
                     {"output", {t.output.channels, t.output.length}}});
  }
  j["shape_trace"] = trace;
  return j;
}

struct AnalyzeOptions {
  std::string config_file;
  KeyValues overrides;
  std::string json_out;  // optional path
};

struct AnalyzeResult {
  ModelConfig config;
  StructureReport report;
  nlohmann::json json;
};

inline AnalyzeResult CmdAnalyze(const AnalyzeOptions &o, std::ostream &out) {
  KeyValues kv;
  if (!o.config_file.empty()) kv = ReadKeyValuesFile(o.config_file);
  for (const auto &[k, v] : o.overrides) kv[k] = v;
  for (const auto &[k, v] : kv) {
    if (!ModelConfig::IsModelKey(k) && !TrainOptions::IsTrainKey(k)) {
      throw ConfigError("unknown configuration key '" + k + "'");
    }
  }
  AnalyzeResult a;
  a.config = ModelConfig::FromKeyValues(kv);
  a.report = AnalyzeStructure(a.config);
  a.json = StructureJson(a.config, a.report);
  detail::EchoConfig(out, a.config.ToKeyValues());

  out << "\nshape trace (channels x length)\n";
  for (const auto &t : a.report.shape_trace) {
    out << "  " << std::left << std::setw(18) << t.name << std::right << std::setw(5) << t.input.channels
        << " x " << std::setw(5) << t.input.length << "  ->" << std::setw(5) << t.output.channels << " x "
        << std::setw(5) << t.output.length << "\n";
  }
  out << "\nparameters\n";
  for (const auto &[name, count] : a.report.parameters.per_layer) {
    out << "  " << std::left << std::setw(18) << name << std::right << std::setw(10) << count << "\n";
  }
  out << "  " << std::left << std::setw(18) << "total" << std::right << std::setw(10)
      << a.report.parameters.total << "  (" << std::fixed << std::setprecision(3)
      << a.report.parameters.total / 1e6 << " M)\n" << std::defaultfloat;
  out << "\ndepth per stage      " << a.report.depth_per_stage << "\n"
      << "unrolled depth (Q=" << a.config.stages << ") " << a.report.unrolled_depth(a.config.stages) << "\n"
      << "GLU receptive field  " << a.report.glu_receptive_field << "\n";
  if (!o.json_out.empty()) detail::WriteText(o.json_out, a.json.dump(2) + "\n");
  return a;
}

// ---------------------------------------------------------------------------
// metrics
// ---------------------------------------------------------------------------

struct MetricsOptions {
  std::string clean_wav;
  std::string test_wav;
  std::string noisy_wav;  // optional reference for the improvement figure
};

struct MetricsResult {
  double snr_db = 0.0;
  std::optional<double> noisy_snr_db;
  std::optional<double> improvement_db;
};

inline MetricsResult Metrics(const AudioClip &clean, const AudioClip &test, const AudioClip *noisy) {
  MetricsResult r;
  r.snr_db = SnrDb(clean.samples, test.samples);
  if (noisy) {
    r.noisy_snr_db = SnrDb(clean.samples, noisy->samples);
    r.improvement_db = r.snr_db - *r.noisy_snr_db;
  }
  return r;
}

inline MetricsResult CmdMetrics(const MetricsOptions &o, std::ostream &out) {
  const AudioClip clean = ReadWav(o.clean_wav);
  const AudioClip test = ReadWav(o.test_wav);
  std::optional<AudioClip> noisy;
  if (!o.noisy_wav.empty()) noisy = ReadWav(o.noisy_wav);
  const MetricsResult r = Metrics(clean, test, noisy ? &*noisy : nullptr);
  out << std::fixed << std::setprecision(3) << "snr_db " << r.snr_db << "\n";
  if (r.improvement_db) {
    out << "noisy_snr_db " << *r.noisy_snr_db << "\n" << "snr_improvement_db " << *r.improvement_db << "\n";
  }
  out << std::defaultfloat;
  return r;
}

}  // namespace ftnet

#endif  // FTNET_COMMANDS_HPP_
