// tests/mixer_test.cpp

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

#include <cmath>
#include <filesystem>
#include <limits>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "ftnet/mixer.hpp"

namespace ftnet {
namespace {

namespace fs = std::filesystem;

std::vector<double> RandomSignal(Rng &rng, std::size_t n, double amp = 0.3) {
  std::vector<double> v(n);
  for (double &x : v) x = rng.Uniform(-amp, amp);
  return v;
}

double MeasuredSnr(const std::vector<double> &s, const std::vector<double> &d) {
  return 10.0 * std::log10(Energy(s) / Energy(d));
}

TEST(MixAtSnr, EqualEnergyZeroDbHasUnitGain) {
  AudioClip clean;
  clean.samples = {0.1, -0.2, 0.3, -0.4};
  const std::vector<double> noise{-0.4, 0.3, -0.2, 0.1};
  const MixResult r = MixAtSnr(clean, noise, 0.0);
  EXPECT_EQ(r.gain, 1.0);
  EXPECT_EQ(r.scale, 1.0);
  for (std::size_t i = 0; i < 4; ++i) EXPECT_EQ(r.mixture.samples[i], clean.samples[i] + noise[i]);
}

TEST(MixAtSnr, MinusFiveDbClosedForm) {
  AudioClip clean;
  clean.samples = {0.1, -0.2, 0.3, -0.4};
  const std::vector<double> noise{-0.4, 0.3, -0.2, 0.1};
  const MixResult r = MixAtSnr(clean, noise, -5.0);
  EXPECT_NEAR(r.gain, std::pow(10.0, 0.25), 1e-15);
  EXPECT_NEAR(r.gain, 1.77828, 1e-5);
  EXPECT_NEAR(r.measured_snr_db, -5.0, 1e-12);
  // Re-measured after normalization: scale cancels.
  EXPECT_NEAR(MeasuredSnr(r.clean.samples, r.noise), -5.0, 1e-10);
}

TEST(MixAtSnr, InfiniteSnrLeavesClean) {
  Rng rng(1);
  AudioClip clean;
  clean.samples = RandomSignal(rng, 100);
  const auto noise = RandomSignal(rng, 100);
  const MixResult r = MixAtSnr(clean, noise, std::numeric_limits<double>::infinity());
  EXPECT_EQ(r.gain, 0.0);
  for (std::size_t i = 0; i < 100; ++i) EXPECT_EQ(r.mixture.samples[i], clean.samples[i]);
  EXPECT_LT(MixAtSnr(clean, noise, 200.0).gain, 1e-9);
}

TEST(MixAtSnr, DegenerateAndMismatchedInputs) {
  AudioClip silent;
  silent.samples.assign(10, 0.0);
  AudioClip clean;
  clean.samples.assign(10, 0.1);
  EXPECT_THROW(MixAtSnr(silent, std::vector<double>(10, 0.1), 0.0), DegenerateInputError);
  EXPECT_THROW(MixAtSnr(clean, std::vector<double>(10, 0.0), 0.0), DegenerateInputError);
  EXPECT_THROW(MixAtSnr(clean, std::vector<double>(9, 0.1), 0.0), UsageError);
}

TEST(MixAtSnr, AccuracyOverGridAndPeakNormalization) {
  Rng rng(2);
  for (int snr = -5; snr <= 10; ++snr) {
    AudioClip clean;
    clean.samples = RandomSignal(rng, 4000, 0.9);
    const auto noise = RandomSignal(rng, 4000, 0.9);
    const MixResult r = MixAtSnr(clean, noise, snr);
    EXPECT_NEAR(r.measured_snr_db, snr, 0.01);
    EXPECT_NEAR(MeasuredSnr(r.clean.samples, r.noise), snr, 0.01);
    double peak = 0;
    for (std::size_t i = 0; i < 4000; ++i) {
      peak = std::max(peak, std::abs(r.mixture.samples[i]));
      // Additive model survives normalization bit for bit.
      ASSERT_EQ(r.mixture.samples[i] - r.clean.samples[i], r.noise[i]);
      ASSERT_EQ(r.clean.samples[i], clean.samples[i] * r.scale);
    }
    EXPECT_LE(peak, 1.0 + 1e-12);
  }
}

TEST(CutPoint, SingleValidPointAndDeterminism) {
  NoiseBank bank;
  bank.samples.assign(500, 0.1);
  Rng rng(3);
  for (int i = 0; i < 10; ++i) EXPECT_EQ(DrawCutPoint(bank, 500, rng), 0u);
  EXPECT_THROW(DrawCutPoint(bank, 501, rng), UsageError);
  Rng a(9), b(9);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(DrawCutPoint(bank, 100, a), DrawCutPoint(bank, 100, b));
}

TEST(CutPoint, UniformByChiSquare) {
  NoiseBank bank;
  bank.samples.assign(199, 0.0);  // 100 valid start points for needed = 100
  Rng rng(12345);
  std::vector<int> hist(100, 0);
  const int draws = 100000;
  for (int i = 0; i < draws; ++i) ++hist.at(DrawCutPoint(bank, 100, rng));
  double chi2 = 0;
  for (int h : hist) chi2 += (h - 1000.0) * (h - 1000.0) / 1000.0;
  // Upper 1% point of chi-square with 99 degrees of freedom.
  EXPECT_LT(chi2, 134.6416);
}

TEST(ChunkOrPad, CropPadExact) {
  Rng rng(4);
  AudioClip five;
  for (std::size_t i = 0; i < 5 * 16000; ++i) five.samples.push_back(static_cast<double>(i));
  const AudioClip c = ChunkOrPad(five, kChunkSamples, rng);
  ASSERT_EQ(c.size(), kChunkSamples);
  for (std::size_t i = 1; i < c.size(); ++i) ASSERT_EQ(c.samples[i], c.samples[0] + i);
  EXPECT_LE(c.samples[0], 16000.0);

  AudioClip three;
  three.samples.assign(3 * 16000, 0.5);
  const AudioClip p = ChunkOrPad(three, kChunkSamples, rng);
  ASSERT_EQ(p.size(), kChunkSamples);
  for (std::size_t i = 0; i < p.size(); ++i) ASSERT_EQ(p.samples[i], i < 48000 ? 0.5 : 0.0);

  AudioClip four;
  four.samples = RandomSignal(rng, kChunkSamples);
  EXPECT_EQ(ChunkOrPad(four, kChunkSamples, rng).samples, four.samples);
  EXPECT_THROW(ChunkOrPad(AudioClip{}, kChunkSamples, rng), UsageError);
}

TEST(Manifest, ParseFormatAndGrid) {
  const std::string text = "a.wav\t-5\ttrain\nb.wav\t10\tval\n# comment\nc.wav\t-2\ttest\t42\n";
  const MixManifest m = ParseManifest(text, "/data");
  ASSERT_EQ(m.records.size(), 3u);
  EXPECT_EQ(m.records[0].clean_path, "/data/a.wav");
  EXPECT_EQ(m.records[1].split, Split::kVal);
  EXPECT_FALSE(m.records[1].cut_point.has_value());
  EXPECT_EQ(*m.records[2].cut_point, 42u);
  EXPECT_EQ(ParseManifest(FormatManifest(m)).records.size(), 3u);
  EXPECT_EQ(FormatManifest(ParseManifest(FormatManifest(m))), FormatManifest(m));

  EXPECT_THROW(ParseManifest("a.wav\t11\ttrain\n"), FormatError);
  EXPECT_THROW(ParseManifest("a.wav\t0.5\ttrain\n"), FormatError);
  EXPECT_THROW(ParseManifest("a.wav\t0\ttest\n"), FormatError);
  EXPECT_THROW(ParseManifest("a.wav\t0\tdev\n"), FormatError);
  EXPECT_THROW(ParseManifest("a.wav 0 train\n"), FormatError);
  EXPECT_TRUE(ParseManifest("").records.empty());
}

class DatasetTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / "ftnet_mixer_test";
    fs::remove_all(dir_);
    fs::create_directories(dir_);
    Rng rng(7);
    std::string manifest;
    const int snrs[] = {-5, 0, 3, 10, -2};
    for (int i = 0; i < 5; ++i) {
      AudioClip c = SynthesizeSpeechLike(8000 + 1000 * i, rng);
      const std::string name = "clean" + std::to_string(i) + ".wav";
      WriteWav(c, (dir_ / name).string());
      manifest += name + "\t" + std::to_string(snrs[i]) + "\t" + (i == 4 ? "test" : "train") + "\n";
    }
    std::ofstream(dir_ / "manifest.tsv") << manifest;
    bank_ = NoiseBank::Concatenate({SynthesizeNoise(NoiseKind::kWhite, 20000, rng),
                                    SynthesizeNoise(NoiseKind::kHighpass, 20000, rng)},
                                   11);
  }
  fs::path dir_;
  NoiseBank bank_;
};

TEST_F(DatasetTest, DeterministicAccurateAndAdditive) {
  const MixManifest m = ReadManifest((dir_ / "manifest.tsv").string());
  const auto a = BuildDataset(m, bank_, 99);
  const auto b = BuildDataset(m, bank_, 99);
  ASSERT_EQ(a.size(), 5u);
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].noisy.samples, b[i].noisy.samples);
    EXPECT_EQ(a[i].clean.samples, b[i].clean.samples);
    EXPECT_EQ(*a[i].record.cut_point, *b[i].record.cut_point);
    EXPECT_NEAR(a[i].mix.measured_snr_db, m.records[i].snr_db, 0.1);
    for (std::size_t t = 0; t < a[i].noisy.size(); ++t)
      ASSERT_EQ(a[i].noisy.samples[t] - a[i].clean.samples[t], a[i].mix.noise[t]);
  }
  // A different seed moves the cut points.
  const auto c = BuildDataset(m, bank_, 100);
  bool moved = false;
  for (std::size_t i = 0; i < a.size(); ++i) moved |= *a[i].record.cut_point != *c[i].record.cut_point;
  EXPECT_TRUE(moved);
}

TEST_F(DatasetTest, ResolvedManifestReproducesPairs) {
  const MixManifest m = ReadManifest((dir_ / "manifest.tsv").string());
  const auto a = BuildDataset(m, bank_, 5);
  MixManifest resolved;
  for (const auto &p : a) resolved.records.push_back(p.record);
  const auto b = BuildDataset(ParseManifest(FormatManifest(resolved)), bank_, 12345);
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a[i].noisy.samples, b[i].noisy.samples);
}

TEST_F(DatasetTest, EmptyManifestAndMissingFile) {
  EXPECT_TRUE(BuildDataset(MixManifest{}, bank_, 1).empty());
  MixManifest m;
  m.records.push_back({(dir_ / "nope.wav").string(), 0.0, Split::kTrain, std::nullopt});
  try {
    BuildDataset(m, bank_, 1);
    FAIL();
  } catch (const IoError &e) {
    EXPECT_NE(std::string(e.what()).find("nope.wav"), std::string::npos);
  }
}

TEST(Synthesis, DeterministicAndBounded) {
  Rng a(3), b(3);
  const AudioClip s1 = SynthesizeSpeechLike(16000, a), s2 = SynthesizeSpeechLike(16000, b);
  EXPECT_EQ(s1.samples, s2.samples);
  for (double v : s1.samples) EXPECT_LE(std::abs(v), 0.5 + 1e-12);
  for (auto kind : {NoiseKind::kWhite, NoiseKind::kLowpass, NoiseKind::kHighpass, NoiseKind::kBandpass}) {
    const AudioClip n = SynthesizeNoise(kind, 8000, a);
    EXPECT_GT(Energy(n.samples), 0.0);
    for (double v : n.samples) EXPECT_LE(std::abs(v), 0.5 + 1e-12);
  }
}

}  // namespace
}  // namespace ftnet
