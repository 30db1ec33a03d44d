// ftnet/mixer.hpp

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

#ifndef FTNET_MIXER_HPP_
#define FTNET_MIXER_HPP_

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "ftnet/audio.hpp"
#include "ftnet/config.hpp"
#include "ftnet/error.hpp"
#include "ftnet/rng.hpp"

namespace ftnet {

/// All noise sources laid end to end; cut points index into `samples`.
struct NoiseBank {
  std::vector<double> samples;
  std::vector<std::size_t> boundaries;  // start offset of each source
  std::uint64_t seed = 0;

  static NoiseBank Concatenate(const std::vector<AudioClip> &sources, std::uint64_t seed) {
    NoiseBank b;
    b.seed = seed;
    for (const auto &s : sources) {
      b.boundaries.push_back(b.samples.size());
      b.samples.insert(b.samples.end(), s.samples.begin(), s.samples.end());
    }
    return b;
  }

  std::size_t size() const { return samples.size(); }
};

/// Uniform start index in [0, bank_len - needed_len].
inline std::size_t DrawCutPoint(const NoiseBank &bank, std::size_t needed_len, Rng &rng) {
  if (bank.size() < needed_len) {
    throw UsageError("noise bank has " + std::to_string(bank.size()) + " samples, " +
                     std::to_string(needed_len) + " needed");
  }
  return static_cast<std::size_t>(rng.UniformInt(bank.size() - needed_len));
}

/// Noise gain that puts clean/noise at `snr_db`: sqrt(E_s / (E_n 10^(snr/10))).
inline double SnrGain(double clean_energy, double noise_energy, double snr_db) {
  if (clean_energy <= 0.0) throw DegenerateInputError("mix: clean signal has zero energy");
  if (noise_energy <= 0.0) throw DegenerateInputError("mix: noise segment has zero energy");
  if (std::isinf(snr_db) && snr_db > 0) return 0.0;
  return std::sqrt(clean_energy / (noise_energy * std::pow(10.0, snr_db / 10.0)));
}

struct MixResult {
  AudioClip mixture;          // (clean + gain * noise) * scale
  AudioClip clean;            // clean * scale
  std::vector<double> noise;  // gain * noise * scale
  double gain = 0.0;
  double scale = 1.0;         // peak normalization, <= 1
  double measured_snr_db = 0.0;
};

/// Additive mixing at a target SNR measured over the whole utterance. If the
/// mixture peak exceeds 1, mixture, clean and noise are all divided by it.
inline MixResult MixAtSnr(const AudioClip &clean, std::span<const double> noise_segment,
                          double snr_db) {
  if (noise_segment.size() != clean.size()) {
    throw UsageError("mix: clean has " + std::to_string(clean.size()) + " samples, noise " +
                     std::to_string(noise_segment.size()));
  }
  MixResult r;
  r.gain = SnrGain(Energy(clean.samples), Energy(noise_segment), snr_db);
  const std::size_t n = clean.size();
  r.noise.resize(n);
  std::vector<double> mix(n);
  double peak = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    r.noise[i] = r.gain * noise_segment[i];
    mix[i] = clean.samples[i] + r.noise[i];
    peak = std::max(peak, std::abs(mix[i]));
  }
  const double ns = Energy(r.noise);
  r.measured_snr_db = ns > 0.0 ? 10.0 * std::log10(Energy(clean.samples) / ns)
                               : std::numeric_limits<double>::infinity();
  r.scale = peak > 1.0 ? 1.0 / peak : 1.0;
  r.clean.sample_rate = r.mixture.sample_rate = clean.sample_rate;
  r.clean.samples.resize(n);
  r.mixture.samples.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    r.clean.samples[i] = clean.samples[i] * r.scale;
    r.mixture.samples[i] = mix[i] * r.scale;
    // Stored noise is the residual so clean + noise reproduces the mixture.
    r.noise[i] = r.mixture.samples[i] - r.clean.samples[i];
  }
  return r;
}

inline constexpr std::size_t kChunkSamples = 4 * kSampleRate;

/// Crop start for a clip of `length` samples; 0 when no crop is needed.
inline std::size_t ChunkOffset(std::size_t length, std::size_t target, Rng &rng) {
  return length > target ? static_cast<std::size_t>(rng.UniformInt(length - target)) : 0;
}

inline AudioClip ApplyChunk(const AudioClip &clip, std::size_t offset, std::size_t target) {
  AudioClip out;
  out.sample_rate = clip.sample_rate;
  out.samples.assign(target, 0.0);
  const std::size_t take = std::min(target, clip.size() - std::min(offset, clip.size()));
  std::copy_n(clip.samples.begin() + static_cast<std::ptrdiff_t>(offset), take, out.samples.begin());
  return out;
}

/// Random crop to `target` samples if longer, zero-pad the tail if shorter.
inline AudioClip ChunkOrPad(const AudioClip &clip, std::size_t target, Rng &rng) {
  if (clip.samples.empty()) throw UsageError("chunk_or_pad: empty clip");
  return ApplyChunk(clip, ChunkOffset(clip.size(), target, rng), target);
}

enum class Split { kTrain, kVal, kTest };

inline const char *SplitName(Split s) {
  switch (s) {
    case Split::kTrain: return "train";
    case Split::kVal: return "val";
    case Split::kTest: return "test";
  }
  return "?";
}

inline Split ParseSplit(const std::string &s) {
  if (s == "train") return Split::kTrain;
  if (s == "val") return Split::kVal;
  if (s == "test") return Split::kTest;
  throw FormatError("unknown split '" + s + "'");
}

struct MixRecord {
  std::string clean_path;
  double snr_db = 0.0;
  Split split = Split::kTrain;
  std::optional<std::size_t> cut_point;  // set in resolved manifests
};

/// Train/val SNRs lie on the integer grid -5..10 dB; test SNRs are -5 or -2.
inline bool SnrAllowed(Split split, double snr_db) {
  if (snr_db != std::round(snr_db)) return false;
  if (split == Split::kTest) return snr_db == -5.0 || snr_db == -2.0;
  return snr_db >= -5.0 && snr_db <= 10.0;
}

struct MixManifest {
  std::vector<MixRecord> records;
};

/// One record per line: clean_path<TAB>snr_db<TAB>split[<TAB>cut_point].
/// Relative paths are resolved against base_dir.
inline MixManifest ParseManifest(const std::string &text, const std::string &base_dir = {}) {
  MixManifest m;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (Trim(line).empty() || line[0] == '#') continue;
    std::vector<std::string> cols;
    std::stringstream ss(line);
    std::string col;
    while (std::getline(ss, col, '\t')) cols.push_back(col);
    const std::string where = "manifest line " + std::to_string(lineno);
    if (cols.size() != 3 && cols.size() != 4) throw FormatError(where + ": expected 3 or 4 tab-separated fields");
    MixRecord r;
    r.clean_path = cols[0];
    if (!base_dir.empty() && std::filesystem::path(r.clean_path).is_relative())
      r.clean_path = (std::filesystem::path(base_dir) / r.clean_path).string();
    try {
      r.snr_db = detail::ParseReal("snr_db", cols[1]);
      if (cols.size() == 4) r.cut_point = static_cast<std::size_t>(detail::ParseInt("cut_point", cols[3]));
    } catch (const ConfigError &e) {
      throw FormatError(where + ": " + e.what());
    }
    r.split = ParseSplit(cols[2]);
    if (!SnrAllowed(r.split, r.snr_db)) {
      throw FormatError(where + ": SNR " + cols[1] + " dB not allowed for split " + cols[2]);
    }
    m.records.push_back(std::move(r));
  }
  return m;
}

inline MixManifest ReadManifest(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open manifest " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ParseManifest(ss.str(), std::filesystem::path(path).parent_path().string());
}

inline std::string FormatManifest(const MixManifest &m) {
  std::string out;
  for (const auto &r : m.records) {
    out += r.clean_path + "\t" + detail::FormatReal(r.snr_db) + "\t" + SplitName(r.split);
    if (r.cut_point) out += "\t" + std::to_string(*r.cut_point);
    out += "\n";
  }
  return out;
}

struct MixedPair {
  AudioClip noisy;
  AudioClip clean;
  MixRecord record;  // cut point always filled in
  MixResult mix;
};

using ClipLoader = std::function<AudioClip(const std::string &)>;

/// Mixes one record. Each record draws from its own stream derived from
/// (seed, index), so records can be produced in any order.
inline MixedPair MixRecordAt(const MixRecord &rec, std::size_t index, const NoiseBank &bank,
                             std::uint64_t seed, const ClipLoader &load = ReadWav) {
  MixedPair p;
  p.record = rec;
  const AudioClip clean = load(rec.clean_path);
  if (clean.samples.empty()) throw UsageError("empty clean utterance " + rec.clean_path);
  Rng rng(DeriveSeed(seed, 0x6d6978 /* "mix" */, index));
  const std::size_t cut = rec.cut_point ? *rec.cut_point : DrawCutPoint(bank, clean.size(), rng);
  if (cut + clean.size() > bank.size()) {
    throw UsageError("cut point " + std::to_string(cut) + " overruns the noise bank");
  }
  p.record.cut_point = cut;
  p.mix = MixAtSnr(clean, std::span<const double>(bank.samples).subspan(cut, clean.size()), rec.snr_db);
  p.noisy = p.mix.mixture;
  p.clean = p.mix.clean;
  return p;
}

/// Visits every record's (noisy, clean) pair in manifest order.
inline void ForEachPair(const MixManifest &m, const NoiseBank &bank, std::uint64_t seed,
                        const std::function<void(MixedPair &&)> &sink,
                        const ClipLoader &load = ReadWav) {
  for (std::size_t i = 0; i < m.records.size(); ++i) sink(MixRecordAt(m.records[i], i, bank, seed, load));
}

inline std::vector<MixedPair> BuildDataset(const MixManifest &m, const NoiseBank &bank,
                                           std::uint64_t seed, const ClipLoader &load = ReadWav) {
  std::vector<MixedPair> out;
  ForEachPair(m, bank, seed, [&](MixedPair &&p) { out.push_back(std::move(p)); }, load);
  return out;
}

// Desk-scale synthetic corpus.

/// Harmonic tone with slowly drifting pitch under a syllable-rate envelope.
inline AudioClip SynthesizeSpeechLike(std::size_t n, Rng &rng) {
  constexpr double kTwoPi = 6.283185307179586;
  const double fs = kSampleRate;
  const double f0 = rng.Uniform(110.0, 220.0);
  const double vib_rate = rng.Uniform(0.5, 2.0), vib_depth = rng.Uniform(0.02, 0.06);
  const double syl = rng.Uniform(2.5, 5.0), syl_phase = rng.Uniform(0.0, kTwoPi);
  const int harmonics = 6;
  std::vector<double> amp(harmonics);
  for (int h = 0; h < harmonics; ++h) amp[h] = rng.Uniform(0.4, 1.0) / (h + 1);
  AudioClip c;
  c.samples.resize(n);
  double phase = 0.0, peak = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double t = i / fs;
    const double f = f0 * (1.0 + vib_depth * std::sin(kTwoPi * vib_rate * t));
    phase += kTwoPi * f / fs;
    double v = 0.0;
    for (int h = 0; h < harmonics; ++h) v += amp[h] * std::sin((h + 1) * phase);
    const double env = std::pow(0.5 * (1.0 - std::cos(kTwoPi * syl * t + syl_phase)), 1.5);
    c.samples[i] = v * (0.15 + 0.85 * env);
    peak = std::max(peak, std::abs(c.samples[i]));
  }
  for (double &v : c.samples) v *= 0.5 / peak;
  return c;
}

enum class NoiseKind { kWhite, kLowpass, kHighpass, kBandpass };

/// Gaussian noise through an RBJ biquad (or none for white).
inline AudioClip SynthesizeNoise(NoiseKind kind, std::size_t n, Rng &rng) {
  constexpr double kPi = 3.141592653589793;
  double b0 = 1, b1 = 0, b2 = 0, a1 = 0, a2 = 0;
  if (kind != NoiseKind::kWhite) {
    const double f = kind == NoiseKind::kLowpass ? 400.0 : kind == NoiseKind::kHighpass ? 3000.0 : 1500.0;
    const double q = kind == NoiseKind::kBandpass ? 2.0 : 0.7071;
    const double w = 2.0 * kPi * f / kSampleRate, cw = std::cos(w), alpha = std::sin(w) / (2.0 * q);
    const double a0 = 1.0 + alpha;
    switch (kind) {
      case NoiseKind::kLowpass:
        b0 = (1 - cw) / 2; b1 = 1 - cw; b2 = (1 - cw) / 2;
        break;
      case NoiseKind::kHighpass:
        b0 = (1 + cw) / 2; b1 = -(1 + cw); b2 = (1 + cw) / 2;
        break;
      default:
        b0 = alpha; b1 = 0; b2 = -alpha;
        break;
    }
    b0 /= a0; b1 /= a0; b2 /= a0;
    a1 = -2 * cw / a0;
    a2 = (1 - alpha) / a0;
  }
  AudioClip c;
  c.samples.resize(n);
  double x1 = 0, x2 = 0, y1 = 0, y2 = 0, peak = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double x = rng.Gaussian();
    const double y = b0 * x + b1 * x1 + b2 * x2 - a1 * y1 - a2 * y2;
    x2 = x1; x1 = x; y2 = y1; y1 = y;
    c.samples[i] = y;
    peak = std::max(peak, std::abs(y));
  }
  for (double &v : c.samples) v *= 0.5 / peak;
  return c;
}

}  // namespace ftnet

#endif  // FTNET_MIXER_HPP_
