// ftnet/train.hpp

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


#ifndef FTNET_TRAIN_HPP_
#define FTNET_TRAIN_HPP_

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <limits>
#include <numeric>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "ftnet/audio.hpp"
#include "ftnet/config.hpp"
#include "ftnet/error.hpp"
#include "ftnet/mixer.hpp"
#include "ftnet/model.hpp"
#include "ftnet/optim.hpp"
#include "ftnet/rng.hpp"

namespace ftnet {

/// One noisy / clean utterance pair of equal length.
struct UtterancePair {
  AudioClip noisy;
  AudioClip clean;
};

inline std::vector<UtterancePair> ToUtterancePairs(const std::vector<MixedPair> &pairs) {
  std::vector<UtterancePair> out;
  out.reserve(pairs.size());
  for (const auto &p : pairs) out.push_back({p.noisy, p.clean});
  return out;
}

struct TrainOptions {
  double lr = 2e-4;
  std::size_t minibatch = 2;
  std::size_t chunk_samples = kChunkSamples;
  std::size_t hop = kHop;
  std::size_t max_epochs = 50;
  std::size_t halve_after = 3;  // consecutive validation increases
  std::size_t stop_after = 10;  // cumulative validation increases
  double clip_norm = 0.0;       // 0 disables gradient clipping
  std::size_t max_minibatches = 0;  // 0 = unlimited; counts across epochs
  std::uint64_t seed = 1;

  void Validate() const {
    if (!(lr > 0.0)) throw ConfigError("lr must be positive");
    if (minibatch == 0) throw ConfigError("minibatch must be positive");
    if (chunk_samples == 0) throw ConfigError("chunk_samples must be positive");
    if (hop == 0) throw ConfigError("hop must be positive");
    if (max_epochs == 0) throw ConfigError("max_epochs must be positive");
    if (halve_after == 0 || stop_after == 0) {
      throw ConfigError("halve_after and stop_after must be positive");
    }
    if (clip_norm < 0.0) throw ConfigError("clip_norm must be non-negative");
  }

  KeyValues ToKeyValues() const {
    return {
        {"lr", detail::FormatReal(lr)},
        {"minibatch", std::to_string(minibatch)},
        {"chunk_samples", std::to_string(chunk_samples)},
        {"hop", std::to_string(hop)},
        {"max_epochs", std::to_string(max_epochs)},
        {"halve_after", std::to_string(halve_after)},
        {"stop_after", std::to_string(stop_after)},
        {"clip_norm", detail::FormatReal(clip_norm)},
        {"max_minibatches", std::to_string(max_minibatches)},
        {"train_seed", std::to_string(seed)},
    };
  }

  void Apply(const KeyValues &kv) {
    auto get = [&](const char *k) -> const std::string * {
      auto it = kv.find(k);
      return it == kv.end() ? nullptr : &it->second;
    };
    auto count = [&](const char *k, std::size_t &dst) {
      if (auto v = get(k)) {
        const long long x = detail::ParseInt(k, *v);
        if (x < 0) throw ConfigError(std::string(k) + " must be non-negative");
        dst = static_cast<std::size_t>(x);
      }
    };
    if (auto v = get("lr")) lr = detail::ParseReal("lr", *v);
    if (auto v = get("clip_norm")) clip_norm = detail::ParseReal("clip_norm", *v);
    count("minibatch", minibatch);
    count("chunk_samples", chunk_samples);
    count("hop", hop);
    count("max_epochs", max_epochs);
    count("halve_after", halve_after);
    count("stop_after", stop_after);
    count("max_minibatches", max_minibatches);
    if (auto v = get("train_seed")) seed = static_cast<std::uint64_t>(detail::ParseInt("train_seed", *v));
  }

  static bool IsTrainKey(const std::string &k) {
    for (const auto &[key, value] : TrainOptions{}.ToKeyValues())
      if (k == key) return true;
    return false;
  }

  friend bool operator==(const TrainOptions &, const TrainOptions &) = default;
};

enum class ScheduleAction { kContinue, kHalveLr, kStop };

inline const char *ScheduleActionName(ScheduleAction a) {
  switch (a) {
    case ScheduleAction::kContinue: return "continue";
    case ScheduleAction::kHalveLr: return "halve_lr";
    case ScheduleAction::kStop: return "stop";
  }
  return "?";
}

/// Everything needed to continue a run exactly where it left off.
struct TrainState {
  std::uint64_t epoch = 0;  // completed epochs
  double lr = 2e-4;
  std::vector<double> val_history;
  std::vector<double> train_history;
  std::uint64_t consec_increase = 0;
  std::uint64_t total_increase_events = 0;
  double best_val = std::numeric_limits<double>::infinity();
  std::uint64_t seed = 1;  // root of every per-epoch and per-batch stream
  // position inside the current epoch
  std::uint64_t batch_in_epoch = 0;
  double epoch_loss_sum = 0.0;
  std::uint64_t total_minibatches = 0;
  bool stopped = false;

  static TrainState Initial(const TrainOptions &opt) {
    TrainState s;
    s.lr = opt.lr;
    s.seed = opt.seed;
    return s;
  }

  friend bool operator==(const TrainState &, const TrainState &) = default;
};

/// Applies one epoch's validation loss to the schedule and advances the epoch
/// counter. An increase is a strictly larger loss than the previous epoch's.
inline ScheduleAction ScheduleUpdate(TrainState &s, double val_loss, const TrainOptions &opt) {
  if (!s.val_history.empty() && val_loss > s.val_history.back()) {
    ++s.consec_increase;
    ++s.total_increase_events;
  } else {
    s.consec_increase = 0;
  }
  s.val_history.push_back(val_loss);
  s.best_val = std::min(s.best_val, val_loss);
  ++s.epoch;

  ScheduleAction action = ScheduleAction::kContinue;
  if (s.total_increase_events >= opt.stop_after || s.epoch >= opt.max_epochs) {
    action = ScheduleAction::kStop;
    s.stopped = true;
  } else if (s.consec_increase >= opt.halve_after) {
    s.lr *= 0.5;
    s.consec_increase = 0;
    action = ScheduleAction::kHalveLr;
  }
  return action;
}

namespace detail {

inline constexpr std::uint64_t kShuffleTag = 0x73687566;  // "shuf"
inline constexpr std::uint64_t kCropTag = 0x63726f70;     // "crop"
inline constexpr std::uint64_t kValTag = 0x76616c;        // "val"

/// Frames the same crop of noisy and clean and stacks them into two batches.
template <typename T>
std::pair<Tensor<T>, Tensor<T>> FramePairs(const std::vector<const UtterancePair *> &pairs,
                                           const std::vector<std::size_t> &offsets,
                                           std::size_t frame_len, const TrainOptions &opt) {
  std::vector<T> xs, ys;
  std::size_t frames = 0;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const UtterancePair &p = *pairs[i];
    if (p.noisy.size() != p.clean.size() || p.noisy.size() == 0) {
      throw UsageError("training pair has mismatched or empty noisy/clean clips");
    }
    const AudioClip noisy = ApplyChunk(p.noisy, offsets[i], opt.chunk_samples);
    const AudioClip clean = ApplyChunk(p.clean, offsets[i], opt.chunk_samples);
    const FrameBatch<T> fx = FrameSignal<T>(noisy, frame_len, opt.hop);
    const FrameBatch<T> fy = FrameSignal<T>(clean, frame_len, opt.hop);
    const auto vx = fx.frames.value();
    const auto vy = fy.frames.value();
    xs.insert(xs.end(), vx.begin(), vx.end());
    ys.insert(ys.end(), vy.begin(), vy.end());
    frames += fx.frames.shape().batch;
  }
  const Shape s{frames, 1, frame_len};
  return {Tensor<T>::FromValues(s, std::move(xs)), Tensor<T>::FromValues(s, std::move(ys))};
}

}  // namespace detail

/// Seeded visiting order of the training set for one epoch.
inline std::vector<std::size_t> EpochOrder(std::uint64_t seed, std::uint64_t epoch, std::size_t n) {
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(DeriveSeed(seed, detail::kShuffleTag, epoch));
  for (std::size_t i = n; i > 1; --i) std::swap(order[i - 1], order[rng.UniformInt(i - 1)]);
  return order;
}

inline std::size_t MinibatchesPerEpoch(std::size_t n, const TrainOptions &opt) {
  return (n + opt.minibatch - 1) / opt.minibatch;
}

/// Runs one minibatch: forward through every stage, MAE on the last stage
/// only, backward and an Adam step. Returns the minibatch loss.
template <typename T>
double TrainStep(FTNetParams<T> &p, const ModelConfig &cfg, const TrainState &s,
                 const std::vector<const UtterancePair *> &batch,
                 const std::vector<std::size_t> &offsets, const TrainOptions &opt) {
  auto [x, y] = detail::FramePairs<T>(batch, offsets, cfg.frame_len, opt);
  const MultistageOutput<T> out = MultistageForward(p, cfg, x, cfg.stages);
  const Tensor<T> loss = MaeLoss(out.final_estimate, y);
  const double value = static_cast<double>(loss.item());
  Backward(loss);
  if (opt.clip_norm > 0.0) ClipGradients<T>(p.all(), opt.clip_norm);
  AdamOptions adam;
  adam.lr = s.lr;
  AdamStep<T>(p.all(), adam);
  return value;
}

/// Continues the current epoch from s.batch_in_epoch. `budget` caps the number
/// of minibatches run by this call. Returns true once the epoch is complete,
/// in which case the mean minibatch loss is appended to train_history.
template <typename T>
bool TrainEpoch(FTNetParams<T> &p, const ModelConfig &cfg, TrainState &s,
                const std::vector<UtterancePair> &pairs, const TrainOptions &opt,
                std::size_t budget = std::numeric_limits<std::size_t>::max()) {
  if (pairs.empty()) throw UsageError("train_epoch: empty training set");
  const std::vector<std::size_t> order = EpochOrder(s.seed, s.epoch, pairs.size());
  const std::size_t n_batches = MinibatchesPerEpoch(pairs.size(), opt);
  for (std::size_t done = 0; s.batch_in_epoch < n_batches && done < budget; ++done) {
    const std::size_t b = s.batch_in_epoch;
    Rng crop(DeriveSeed(s.seed, detail::kCropTag, s.epoch, b));
    std::vector<const UtterancePair *> batch;
    std::vector<std::size_t> offsets;
    for (std::size_t i = b * opt.minibatch; i < std::min(pairs.size(), (b + 1) * opt.minibatch); ++i) {
      const UtterancePair &u = pairs[order[i]];
      batch.push_back(&u);
      offsets.push_back(ChunkOffset(u.noisy.size(), opt.chunk_samples, crop));
    }
    s.epoch_loss_sum += TrainStep(p, cfg, s, batch, offsets, opt);
    ++s.batch_in_epoch;
    ++s.total_minibatches;
  }
  if (s.batch_in_epoch < n_batches) return false;
  s.train_history.push_back(s.epoch_loss_sum / static_cast<double>(n_batches));
  s.batch_in_epoch = 0;
  s.epoch_loss_sum = 0.0;
  return true;
}

/// Mean over pairs of the final-stage frame MAE, with a fixed crop per pair.
/// Never records a tape or touches the parameters.
template <typename T>
double Validate(const FTNetParams<T> &p, const ModelConfig &cfg,
                const std::vector<UtterancePair> &pairs, const TrainOptions &opt,
                std::uint64_t seed) {
  if (pairs.empty()) throw UsageError("validate: empty validation set");
  NoGradGuard no_grad;
  double acc = 0.0;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    Rng crop(DeriveSeed(seed, detail::kValTag, i));
    const std::size_t off = ChunkOffset(pairs[i].noisy.size(), opt.chunk_samples, crop);
    auto [x, y] = detail::FramePairs<T>({&pairs[i]}, {off}, cfg.frame_len, opt);
    const MultistageOutput<T> out = MultistageForward(p, cfg, x, cfg.stages);
    acc += static_cast<double>(MaeLoss(out.final_estimate, y).item());
  }
  return acc / static_cast<double>(pairs.size());
}

// ---------------------------------------------------------------------------
// Checkpoints
//
// Little-endian throughout, IEEE-754 reals:
//   magic "FTNETCKP"  u32 version  u32 real_bytes (4 or 8)
//   str model_config  str train_options          (key = value text)
//   TrainState fields in declaration order
//   u64 n_params, then per parameter:
//     str name  u64 x3 shape  u64 step_count  real[size] value, m, v
//   u64 FNV-1a 64 of every preceding byte
// where str is a u64 byte count followed by the bytes and lists are a u64
// count followed by the elements.
// ---------------------------------------------------------------------------

inline constexpr char kCheckpointMagic[8] = {'F', 'T', 'N', 'E', 'T', 'C', 'K', 'P'};
inline constexpr std::uint32_t kCheckpointVersion = 1;

inline std::uint64_t Fnv1a64(std::span<const unsigned char> bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char b : bytes) {
    h ^= b;
    h *= 0x100000001b3ULL;
  }
  return h;
}

namespace detail {

class ByteWriter {
 public:
  void U8(std::uint8_t v) { buf_.push_back(v); }
  void U32(std::uint32_t v) { Le(v, 4); }
  void U64(std::uint64_t v) { Le(v, 8); }
  void F64(double v) { U64(std::bit_cast<std::uint64_t>(v)); }
  void F32(float v) { U32(std::bit_cast<std::uint32_t>(v)); }
  template <typename T>
  void Real(T v) {
    if constexpr (sizeof(T) == 4) F32(v);
    else F64(v);
  }
  void Str(const std::string &s) {
    U64(s.size());
    buf_.insert(buf_.end(), s.begin(), s.end());
  }
  void Raw(const char *p, std::size_t n) { buf_.insert(buf_.end(), p, p + n); }
  std::vector<unsigned char> &bytes() { return buf_; }

 private:
  void Le(std::uint64_t v, int n) {
    for (int i = 0; i < n; ++i) buf_.push_back(static_cast<unsigned char>(v >> (8 * i)));
  }
  std::vector<unsigned char> buf_;
};

class ByteReader {
 public:
  explicit ByteReader(std::span<const unsigned char> b) : b_(b) {}
  std::uint8_t U8() { return Take(1)[0]; }
  std::uint32_t U32() { return static_cast<std::uint32_t>(Le(4)); }
  std::uint64_t U64() { return Le(8); }
  double F64() { return std::bit_cast<double>(U64()); }
  float F32() { return std::bit_cast<float>(U32()); }
  template <typename T>
  T Real() {
    if constexpr (sizeof(T) == 4) return F32();
    else return F64();
  }
  std::string Str() {
    const std::uint64_t n = U64();
    if (n > Remaining()) throw FormatError("checkpoint: truncated string");
    auto s = Take(n);
    return std::string(s.begin(), s.end());
  }
  std::span<const unsigned char> Take(std::size_t n) {
    if (n > Remaining()) throw FormatError("checkpoint: truncated");
    auto s = b_.subspan(pos_, n);
    pos_ += n;
    return s;
  }
  std::size_t Remaining() const { return b_.size() - pos_; }

 private:
  std::uint64_t Le(int n) {
    auto s = Take(static_cast<std::size_t>(n));
    std::uint64_t v = 0;
    for (int i = 0; i < n; ++i) v |= static_cast<std::uint64_t>(s[i]) << (8 * i);
    return v;
  }
  std::span<const unsigned char> b_;
  std::size_t pos_ = 0;
};

inline void WriteReals(ByteWriter &w, const std::vector<double> &v) {
  w.U64(v.size());
  for (double x : v) w.F64(x);
}

inline std::vector<double> ReadReals(ByteReader &r) {
  const std::uint64_t n = r.U64();
  if (n > r.Remaining() / 8) throw FormatError("checkpoint: truncated list");
  std::vector<double> v(n);
  for (auto &x : v) x = r.F64();
  return v;
}

}  // namespace detail

template <typename T>
struct Checkpoint {
  ModelConfig config;
  TrainOptions options;
  TrainState state;
  FTNetParams<T> params;
};

template <typename T>
std::vector<unsigned char> SerializeCheckpoint(const FTNetParams<T> &p, const ModelConfig &cfg,
                                               const TrainOptions &opt, const TrainState &s) {
  static_assert(sizeof(T) == 4 || sizeof(T) == 8);
  detail::ByteWriter w;
  w.Raw(kCheckpointMagic, sizeof kCheckpointMagic);
  w.U32(kCheckpointVersion);
  w.U32(sizeof(T));
  w.Str(FormatKeyValues(cfg.ToKeyValues()));
  w.Str(FormatKeyValues(opt.ToKeyValues()));
  w.U64(s.epoch);
  w.F64(s.lr);
  detail::WriteReals(w, s.val_history);
  detail::WriteReals(w, s.train_history);
  w.U64(s.consec_increase);
  w.U64(s.total_increase_events);
  w.F64(s.best_val);
  w.U64(s.seed);
  w.U64(s.batch_in_epoch);
  w.F64(s.epoch_loss_sum);
  w.U64(s.total_minibatches);
  w.U8(s.stopped ? 1 : 0);
  w.U64(p.size());
  for (const auto &param : p.all()) {
    w.Str(param.name);
    const Shape sh = param.tensor.shape();
    w.U64(sh.batch);
    w.U64(sh.channels);
    w.U64(sh.length);
    w.U64(param.step_count);
    for (T x : param.tensor.value()) w.Real(x);
    for (T x : param.m) w.Real(x);
    for (T x : param.v) w.Real(x);
  }
  const std::uint64_t sum = Fnv1a64(w.bytes());
  w.U64(sum);
  return std::move(w.bytes());
}

/// Parses a checkpoint. Nothing is returned unless the whole file checks out.
template <typename T>
Checkpoint<T> ParseCheckpoint(std::span<const unsigned char> bytes) {
  if (bytes.size() < sizeof kCheckpointMagic + 16) throw FormatError("checkpoint: truncated");
  if (std::memcmp(bytes.data(), kCheckpointMagic, sizeof kCheckpointMagic) != 0) {
    throw FormatError("checkpoint: bad magic");
  }
  detail::ByteReader tail(bytes.subspan(bytes.size() - 8));
  if (tail.U64() != Fnv1a64(bytes.first(bytes.size() - 8))) {
    throw FormatError("checkpoint: checksum mismatch (corrupt or truncated file)");
  }
  detail::ByteReader r(bytes.first(bytes.size() - 8));
  r.Take(sizeof kCheckpointMagic);
  if (const std::uint32_t ver = r.U32(); ver != kCheckpointVersion) {
    throw FormatError("checkpoint: version " + std::to_string(ver) + ", expected " +
                      std::to_string(kCheckpointVersion));
  }
  if (const std::uint32_t rb = r.U32(); rb != sizeof(T)) {
    throw FormatError("checkpoint: stores " + std::to_string(rb) + "-byte reals, reader wants " +
                      std::to_string(sizeof(T)));
  }
  Checkpoint<T> ck;
  try {
    ck.config = ModelConfig::FromKeyValues(ParseKeyValues(r.Str()));
    ck.options.Apply(ParseKeyValues(r.Str()));
  } catch (const ConfigError &e) {
    throw FormatError(std::string("checkpoint: bad config block: ") + e.what());
  }
  TrainState &s = ck.state;
  s.epoch = r.U64();
  s.lr = r.F64();
  s.val_history = detail::ReadReals(r);
  s.train_history = detail::ReadReals(r);
  s.consec_increase = r.U64();
  s.total_increase_events = r.U64();
  s.best_val = r.F64();
  s.seed = r.U64();
  s.batch_in_epoch = r.U64();
  s.epoch_loss_sum = r.F64();
  s.total_minibatches = r.U64();
  s.stopped = r.U8() != 0;

  // The parameter list must match what the stored config builds.
  ck.params = BuildModel<T>(ck.config);
  const std::uint64_t n = r.U64();
  if (n != ck.params.size()) {
    throw FormatError("checkpoint: " + std::to_string(n) + " parameters, config builds " +
                      std::to_string(ck.params.size()));
  }
  for (auto &param : ck.params.all()) {
    const std::string name = r.Str();
    Shape sh;
    sh.batch = r.U64();
    sh.channels = r.U64();
    sh.length = r.U64();
    if (name != param.name || sh != param.tensor.shape()) {
      throw FormatError("checkpoint: parameter '" + name + "' " + sh.str() + " does not match '" +
                        param.name + "' " + param.tensor.shape().str());
    }
    param.step_count = r.U64();
    for (T &x : param.tensor.value()) x = r.Real<T>();
    for (T &x : param.m) x = r.Real<T>();
    for (T &x : param.v) x = r.Real<T>();
  }
  if (r.Remaining() != 0) throw FormatError("checkpoint: trailing bytes");
  return ck;
}

template <typename T>
void SaveCheckpoint(const std::string &path, const FTNetParams<T> &p, const ModelConfig &cfg,
                    const TrainOptions &opt, const TrainState &s) {
  const auto bytes = SerializeCheckpoint(p, cfg, opt, s);
  // Write beside the target and rename so a crash never leaves a torn file.
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write checkpoint " + tmp);
    out.write(reinterpret_cast<const char *>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw IoError("short write to " + tmp);
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw IoError("cannot move checkpoint into place at " + path + ": " + ec.message());
}

inline std::vector<unsigned char> ReadFileBytes(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

template <typename T>
Checkpoint<T> LoadCheckpoint(const std::string &path) {
  const auto bytes = ReadFileBytes(path);
  return ParseCheckpoint<T>(bytes);
}

/// Real width stored in a checkpoint file, 4 or 8.
inline std::uint32_t CheckpointRealBytes(std::span<const unsigned char> bytes) {
  if (bytes.size() < 16 || std::memcmp(bytes.data(), kCheckpointMagic, 8) != 0) {
    throw FormatError("checkpoint: bad magic");
  }
  detail::ByteReader r(bytes.subspan(12, 4));
  return r.U32();
}

// ---------------------------------------------------------------------------
// Run loop
// ---------------------------------------------------------------------------

struct EpochRecord {
  std::uint64_t epoch = 0;  // 1-based
  double train_mae = 0.0;
  double val_mae = 0.0;
  double lr = 0.0;  // rate used during the epoch
  ScheduleAction action = ScheduleAction::kContinue;
};

inline std::string FormatLogLine(const EpochRecord &r) {
  std::ostringstream os;
  os.precision(9);
  os << r.epoch << ',' << r.train_mae << ',' << r.val_mae << ',' << r.lr << ','
     << ScheduleActionName(r.action);
  return os.str();
}

template <typename T>
class Trainer {
 public:
  Trainer(ModelConfig cfg, TrainOptions opt)
      : cfg_(std::move(cfg)), opt_(opt), params_(BuildModel<T>(cfg_)),
        state_(TrainState::Initial(opt_)) {
    cfg_.Validate();
    opt_.Validate();
  }

  explicit Trainer(Checkpoint<T> ck)
      : cfg_(std::move(ck.config)), opt_(ck.options), params_(std::move(ck.params)),
        state_(std::move(ck.state)) {
    opt_.Validate();
  }

  /// Trains until the schedule stops, the minibatch cap is reached, or
  /// `stop_after_minibatches` more minibatches have run in this call.
  /// `on_epoch` sees each completed epoch.
  void Run(const std::vector<UtterancePair> &train, const std::vector<UtterancePair> &val,
           const std::function<void(const EpochRecord &)> &on_epoch = {},
           std::size_t stop_after_minibatches = std::numeric_limits<std::size_t>::max()) {
    if (train.empty()) throw UsageError("train: empty training set");
    if (val.empty()) throw UsageError("train: empty validation set");
    std::size_t ran = 0;
    while (!state_.stopped && ran < stop_after_minibatches) {
      std::size_t budget = stop_after_minibatches - ran;
      if (opt_.max_minibatches > 0) {
        if (state_.total_minibatches >= opt_.max_minibatches) break;
        budget = std::min<std::size_t>(budget, opt_.max_minibatches - state_.total_minibatches);
      }
      const std::uint64_t before = state_.total_minibatches;
      const double lr = state_.lr;
      const bool complete = TrainEpoch(params_, cfg_, state_, train, opt_, budget);
      ran += state_.total_minibatches - before;
      if (!complete) continue;
      EpochRecord rec;
      rec.train_mae = state_.train_history.back();
      rec.val_mae = Validate(params_, cfg_, val, opt_, state_.seed);
      rec.lr = lr;
      rec.action = ScheduleUpdate(state_, rec.val_mae, opt_);
      rec.epoch = state_.epoch;
      if (on_epoch) on_epoch(rec);
    }
  }

  void Save(const std::string &path) const { SaveCheckpoint(path, params_, cfg_, opt_, state_); }
  std::vector<unsigned char> Serialize() const { return SerializeCheckpoint(params_, cfg_, opt_, state_); }

  const ModelConfig &config() const { return cfg_; }
  const TrainOptions &options() const { return opt_; }
  const TrainState &state() const { return state_; }
  FTNetParams<T> &params() { return params_; }
  const FTNetParams<T> &params() const { return params_; }

 private:
  ModelConfig cfg_;
  TrainOptions opt_;
  FTNetParams<T> params_;
  TrainState state_;
};

}  // namespace ftnet

#endif  // FTNET_TRAIN_HPP_
