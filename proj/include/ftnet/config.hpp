// ftnet/config.hpp

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

#ifndef FTNET_CONFIG_HPP_
#define FTNET_CONFIG_HPP_

#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "ftnet/error.hpp"

namespace ftnet {

/// `key = value` lines; '#' starts a comment. Keys are kept sorted so the
/// serialized form is canonical.
using KeyValues = std::map<std::string, std::string>;

inline std::string Trim(const std::string &s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

inline KeyValues ParseKeyValues(const std::string &text) {
  KeyValues kv;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    line = Trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
    }
    kv[Trim(line.substr(0, eq))] = Trim(line.substr(eq + 1));
  }
  return kv;
}

inline KeyValues ReadKeyValuesFile(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ParseKeyValues(ss.str());
}

inline std::string FormatKeyValues(const KeyValues &kv) {
  std::string out;
  for (const auto &[k, v] : kv) out += k + " = " + v + "\n";
  return out;
}

namespace detail {

inline long long ParseInt(const std::string &key, const std::string &v) {
  std::size_t pos = 0;
  long long r = 0;
  try {
    r = std::stoll(v, &pos);
  } catch (...) {
    pos = 0;
  }
  if (pos == 0 || pos != v.size()) throw ConfigError(key + ": not an integer: '" + v + "'");
  return r;
}

inline double ParseReal(const std::string &key, const std::string &v) {
  std::size_t pos = 0;
  double r = 0;
  try {
    r = std::stod(v, &pos);
  } catch (...) {
    pos = 0;
  }
  if (pos == 0 || pos != v.size()) throw ConfigError(key + ": not a number: '" + v + "'");
  return r;
}

inline std::vector<std::size_t> ParseList(const std::string &key, const std::string &v) {
  std::vector<std::size_t> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = Trim(item);
    if (item.empty()) continue;
    const long long x = ParseInt(key, item);
    if (x < 0) throw ConfigError(key + ": negative entry");
    out.push_back(static_cast<std::size_t>(x));
  }
  return out;
}

inline std::string JoinList(const std::vector<std::size_t> &v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s;
}

/// Shortest text that parses back to exactly x.
// Shortest round-trip text, fixed notation for moderate magnitudes.
inline std::string FormatReal(double x) {
  char buf[400];
  const double ax = std::fabs(x);
  const auto fmt = (ax == 0.0 || (ax >= 1e-5 && ax < 1e15))
                       ? std::chars_format::fixed
                       : std::chars_format::scientific;
  const auto r = std::to_chars(buf, buf + sizeof buf, x, fmt);
  return std::string(buf, r.ptr);
}

}  // namespace detail

enum class GruUpdate {
  kPrinted,   // h = (1 - z) * h_hat + z * n
  kStandard,  // h = (1 - z) * h_prev + z * n
};

struct ModelConfig {
  std::size_t frame_len = 2048;
  std::size_t kernel = 11;
  // conv1d_1 (= ConvGRU width), conv1d_2, conv1d_3, conv1d_4, conv1d_5
  std::vector<std::size_t> encoder_channels{16, 16, 32, 64, 128};
  std::vector<std::size_t> glu_dilations{1, 2, 4, 8, 16, 32};
  std::size_t glu_bottleneck = 64;
  std::size_t stages = 3;
  std::uint64_t seed = 1;
  GruUpdate gru_update = GruUpdate::kPrinted;

  static constexpr std::size_t kStridedLayers = 4;

  void Validate() const {
    if (encoder_channels.size() != 5) {
      throw ConfigError("encoder_channels needs exactly 5 entries");
    }
    for (auto c : encoder_channels)
      if (c == 0) throw ConfigError("encoder_channels entries must be positive");
    if (kernel < 3 || kernel % 2 == 0) throw ConfigError("kernel must be odd and >= 3");
    if (frame_len == 0 || frame_len % (std::size_t{1} << kStridedLayers) != 0) {
      throw ConfigError("frame_len must be a positive multiple of 16");
    }
    for (std::size_t i = 0; i < glu_dilations.size(); ++i) {
      const std::size_t d = glu_dilations[i];
      if (d == 0 || (d & (d - 1)) != 0) {
        throw ConfigError("glu_dilations must be powers of two");
      }
      if (i > 0 && d <= glu_dilations[i - 1]) {
        throw ConfigError("glu_dilations must be strictly increasing");
      }
    }
    if (glu_bottleneck == 0) throw ConfigError("glu_bottleneck must be positive");
    if (stages < 1) throw ConfigError("stages must be >= 1");
  }

  KeyValues ToKeyValues() const {
    return {
        {"frame_len", std::to_string(frame_len)},
        {"kernel", std::to_string(kernel)},
        {"encoder_channels", detail::JoinList(encoder_channels)},
        {"glu_dilations", detail::JoinList(glu_dilations)},
        {"glu_bottleneck", std::to_string(glu_bottleneck)},
        {"stages", std::to_string(stages)},
        {"seed", std::to_string(seed)},
        {"gru_update", gru_update == GruUpdate::kPrinted ? "printed" : "standard"},
    };
  }

  /// Applies the model keys found in kv; other keys are left for the caller.
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
    count("frame_len", frame_len);
    count("kernel", kernel);
    count("glu_bottleneck", glu_bottleneck);
    count("stages", stages);
    if (auto v = get("seed")) seed = static_cast<std::uint64_t>(detail::ParseInt("seed", *v));
    if (auto v = get("encoder_channels")) encoder_channels = detail::ParseList("encoder_channels", *v);
    if (auto v = get("glu_dilations")) glu_dilations = detail::ParseList("glu_dilations", *v);
    if (auto v = get("gru_update")) {
      if (*v == "printed") gru_update = GruUpdate::kPrinted;
      else if (*v == "standard") gru_update = GruUpdate::kStandard;
      else throw ConfigError("gru_update must be 'printed' or 'standard'");
    }
  }

  static bool IsModelKey(const std::string &k) {
    static const char *keys[] = {"frame_len", "kernel", "encoder_channels", "glu_dilations",
                                 "glu_bottleneck", "stages", "seed", "gru_update"};
    for (const char *m : keys)
      if (k == m) return true;
    return false;
  }

  static ModelConfig FromKeyValues(const KeyValues &kv) {
    ModelConfig c;
    c.Apply(kv);
    c.Validate();
    return c;
  }

  friend bool operator==(const ModelConfig &, const ModelConfig &) = default;
};

}  // namespace ftnet

#endif  // FTNET_CONFIG_HPP_
