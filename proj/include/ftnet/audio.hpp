// ftnet/audio.hpp

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

#ifndef FTNET_AUDIO_HPP_
#define FTNET_AUDIO_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>
#include <span>
#include <string>
#include <vector>

#include "ftnet/error.hpp"
#include "ftnet/tensor.hpp"

namespace ftnet {

inline constexpr int kSampleRate = 16000;
inline constexpr std::size_t kFrameLen = 2048;
inline constexpr std::size_t kHop = 256;

/// Mono waveform, nominally within [-1, 1].
struct AudioClip {
  std::vector<double> samples;
  int sample_rate = kSampleRate;

  std::size_t size() const { return samples.size(); }
  double seconds() const { return static_cast<double>(samples.size()) / sample_rate; }
};

namespace detail {

inline std::uint32_t ReadLe32(const unsigned char *p) {
  return std::uint32_t(p[0]) | std::uint32_t(p[1]) << 8 | std::uint32_t(p[2]) << 16 |
         std::uint32_t(p[3]) << 24;
}
inline std::uint16_t ReadLe16(const unsigned char *p) {
  return static_cast<std::uint16_t>(p[0] | p[1] << 8);
}
inline void PutLe32(std::vector<unsigned char> &out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<unsigned char>(v >> (8 * i)));
}
inline void PutLe16(std::vector<unsigned char> &out, std::uint16_t v) {
  out.push_back(static_cast<unsigned char>(v));
  out.push_back(static_cast<unsigned char>(v >> 8));
}

}  // namespace detail

/// Parses a RIFF/WAVE byte image holding 16-bit PCM mono at 16 kHz.
inline AudioClip DecodeWav(std::span<const unsigned char> bytes, const std::string &what) {
  auto fail = [&](const std::string &m) { return FormatError(what + ": " + m); };
  if (bytes.size() < 12 || std::memcmp(bytes.data(), "RIFF", 4) != 0 ||
      std::memcmp(bytes.data() + 8, "WAVE", 4) != 0) {
    throw fail("not a RIFF/WAVE file");
  }
  bool have_fmt = false;
  std::uint16_t format = 0, channels = 0, bits = 0;
  std::uint32_t rate = 0;
  std::size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const unsigned char *h = bytes.data() + pos;
    const std::uint32_t len = detail::ReadLe32(h + 4);
    const std::size_t body = pos + 8;
    if (body + len > bytes.size()) throw fail("truncated chunk");
    if (std::memcmp(h, "fmt ", 4) == 0) {
      if (len < 16) throw fail("short fmt chunk");
      const unsigned char *f = bytes.data() + body;
      format = detail::ReadLe16(f);
      channels = detail::ReadLe16(f + 2);
      rate = detail::ReadLe32(f + 4);
      bits = detail::ReadLe16(f + 14);
      have_fmt = true;
    } else if (std::memcmp(h, "data", 4) == 0) {
      if (!have_fmt) throw fail("data chunk before fmt chunk");
      if (format != 1) throw fail("format code " + std::to_string(format) + " (expected PCM, 1)");
      if (channels != 1) throw fail("channel count " + std::to_string(channels) + " (expected 1)");
      if (rate != static_cast<std::uint32_t>(kSampleRate))
        throw fail("sample rate " + std::to_string(rate) + " (expected 16000)");
      if (bits != 16) throw fail("bit depth " + std::to_string(bits) + " (expected 16)");
      AudioClip clip;
      clip.samples.resize(len / 2);
      const unsigned char *d = bytes.data() + body;
      for (std::size_t i = 0; i < clip.samples.size(); ++i) {
        const auto v = static_cast<std::int16_t>(detail::ReadLe16(d + 2 * i));
        clip.samples[i] = static_cast<double>(v) / 32768.0;
      }
      return clip;
    }
    pos = body + len + (len & 1);
  }
  throw fail(have_fmt ? "missing data chunk" : "missing fmt chunk");
}

inline AudioClip ReadWav(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  const std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                         std::istreambuf_iterator<char>());
  return DecodeWav(bytes, path);
}

/// One sample to 16-bit: clamp to [-1, 1], scale by 32768, round half away
/// from zero, saturate at 32767.
inline std::int16_t QuantizeSample(double x) {
  if (std::isnan(x)) x = 0.0;
  x = std::clamp(x, -1.0, 1.0);
  const double q = std::round(x * 32768.0);
  return static_cast<std::int16_t>(std::clamp(q, -32768.0, 32767.0));
}

inline std::vector<unsigned char> EncodeWav(const AudioClip &clip) {
  const std::uint32_t data_len = static_cast<std::uint32_t>(clip.samples.size() * 2);
  std::vector<unsigned char> out;
  out.reserve(44 + data_len);
  out.insert(out.end(), {'R', 'I', 'F', 'F'});
  detail::PutLe32(out, 36 + data_len);
  out.insert(out.end(), {'W', 'A', 'V', 'E', 'f', 'm', 't', ' '});
  detail::PutLe32(out, 16);
  detail::PutLe16(out, 1);                      // PCM
  detail::PutLe16(out, 1);                      // mono
  detail::PutLe32(out, kSampleRate);
  detail::PutLe32(out, kSampleRate * 2);        // byte rate
  detail::PutLe16(out, 2);                      // block align
  detail::PutLe16(out, 16);
  out.insert(out.end(), {'d', 'a', 't', 'a'});
  detail::PutLe32(out, data_len);
  for (double s : clip.samples) detail::PutLe16(out, static_cast<std::uint16_t>(QuantizeSample(s)));
  return out;
}

inline void WriteWav(const AudioClip &clip, const std::string &path) {
  const auto bytes = EncodeWav(clip);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path);
  out.write(reinterpret_cast<const char *>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("write failed for " + path);
}

/// ceil(max(len - frame_len, 0) / hop) + 1
inline std::size_t FrameCount(std::size_t length, std::size_t frame_len, std::size_t hop) {
  const std::size_t over = length > frame_len ? length - frame_len : 0;
  return (over + hop - 1) / hop + 1;
}

/// Frames stacked along the batch axis: (n_frames, 1, frame_len).
template <typename T>
struct FrameBatch {
  Tensor<T> frames;
  std::size_t hop = kHop;
  std::size_t original_length = 0;

  std::size_t frame_len() const { return frames.shape().length; }
  std::size_t count() const { return frames.shape().batch; }
};

/// Rectangular framing; frame i starts at i * hop and the tail is
/// zero-padded.
template <typename T>
FrameBatch<T> FrameSignal(std::span<const double> samples, std::size_t frame_len = kFrameLen,
                          std::size_t hop = kHop) {
  if (samples.empty()) throw UsageError("frame_signal: empty clip");
  if (frame_len == 0 || hop == 0) throw UsageError("frame_signal: frame_len and hop must be positive");
  const std::size_t n = FrameCount(samples.size(), frame_len, hop);
  std::vector<T> v(n * frame_len, T(0));
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t start = i * hop;
    const std::size_t take = std::min(frame_len, samples.size() - std::min(start, samples.size()));
    for (std::size_t t = 0; t < take; ++t) v[i * frame_len + t] = static_cast<T>(samples[start + t]);
  }
  return {Tensor<T>::FromValues({n, 1, frame_len}, std::move(v)), hop, samples.size()};
}

template <typename T>
FrameBatch<T> FrameSignal(const AudioClip &clip, std::size_t frame_len = kFrameLen,
                          std::size_t hop = kHop) {
  return FrameSignal<T>(std::span<const double>(clip.samples), frame_len, hop);
}

/// Number of frames covering each of the first `length` samples.
inline std::vector<unsigned> FrameCoverage(std::size_t n_frames, std::size_t frame_len,
                                           std::size_t hop, std::size_t length) {
  std::vector<unsigned> cover(length, 0);
  for (std::size_t i = 0; i < n_frames; ++i)
    for (std::size_t t = i * hop; t < std::min(length, i * hop + frame_len); ++t) ++cover[t];
  return cover;
}

/// Averages all frame contributions covering each output sample and cuts the
/// result to original_length.
template <typename T>
AudioClip OverlapAdd(const FrameBatch<T> &fb) {
  const Shape s = fb.frames.shape();
  if (s.channels != 1) throw UsageError("overlap_add: frames must have one channel");
  if (fb.hop == 0 || fb.original_length == 0 ||
      s.batch != FrameCount(fb.original_length, s.length, fb.hop)) {
    throw UsageError("overlap_add: " + std::to_string(s.batch) + " frames of " +
                     std::to_string(s.length) + " with hop " + std::to_string(fb.hop) +
                     " cannot cover " + std::to_string(fb.original_length) + " samples");
  }
  std::vector<double> acc(fb.original_length, 0.0);
  const std::vector<unsigned> cover = FrameCoverage(s.batch, s.length, fb.hop, fb.original_length);
  const auto v = fb.frames.value();
  for (std::size_t i = 0; i < s.batch; ++i) {
    const std::size_t start = i * fb.hop;
    for (std::size_t t = 0; t < s.length && start + t < fb.original_length; ++t)
      acc[start + t] += static_cast<double>(v[i * s.length + t]);
  }
  AudioClip out;
  out.samples.resize(fb.original_length);
  for (std::size_t j = 0; j < acc.size(); ++j) out.samples[j] = acc[j] / cover[j];
  return out;
}

inline double Energy(std::span<const double> x) {
  double e = 0.0;
  for (double v : x) e += v * v;
  return e;
}

inline constexpr double kSnrCapDb = 100.0;

/// 10 log10(E_clean / E_(test - clean)), capped at +100 dB.
inline double SnrDb(std::span<const double> clean, std::span<const double> test) {
  if (clean.size() != test.size()) {
    throw UsageError("snr: length mismatch " + std::to_string(clean.size()) + " vs " +
                     std::to_string(test.size()));
  }
  const double es = Energy(clean);
  if (es <= 0.0) throw DegenerateInputError("snr: clean signal has zero energy");
  double er = 0.0;
  for (std::size_t i = 0; i < clean.size(); ++i) er += (test[i] - clean[i]) * (test[i] - clean[i]);
  if (er <= 0.0) return kSnrCapDb;
  return std::min(kSnrCapDb, 10.0 * std::log10(es / er));
}

}  // namespace ftnet

#endif  // FTNET_AUDIO_HPP_
