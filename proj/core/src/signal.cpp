/*
 * Copyright 2026 The aad-evalkit Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "aad/signal.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>

#include "aad/errors.hpp"
#include "nlohmann/json.hpp"

static_assert(std::endian::native == std::endian::little,
              "signal files are little-endian; big-endian hosts unsupported");

namespace aad {

void write_signal(const SignalSeries& s, const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open for write: " + path);
  std::vector<float> buf(s.data.size());
  for (std::size_t i = 0; i < s.data.size(); ++i)
    buf[i] = static_cast<float>(s.data[i]);
  f.write(reinterpret_cast<const char*>(buf.data()),
          static_cast<std::streamsize>(buf.size() * sizeof(float)));
  if (!f) throw IoError("write failed: " + path);

  nlohmann::ordered_json side;
  side["channels"] = s.channels;
  side["samples"] = s.samples();
  side["sample_rate_hz"] = s.sample_rate_hz;
  std::ofstream sf(path + ".json");
  if (!sf) throw IoError("cannot open for write: " + path + ".json");
  sf << side.dump(2) << "\n";
}

SignalSeries read_signal(const std::string& path) {
  std::ifstream sf(path + ".json");
  if (!sf) throw IoError("missing sidecar: " + path + ".json");
  nlohmann::json side;
  try {
    sf >> side;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError("sidecar " + path + ".json: " + e.what());
  }

  SignalSeries s;
  s.channels = side.at("channels").get<std::size_t>();
  std::size_t samples = side.at("samples").get<std::size_t>();
  s.sample_rate_hz = side.at("sample_rate_hz").get<double>();

  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open: " + path);
  std::vector<float> buf(s.channels * samples);
  f.read(reinterpret_cast<char*>(buf.data()),
         static_cast<std::streamsize>(buf.size() * sizeof(float)));
  if (static_cast<std::size_t>(f.gcount()) != buf.size() * sizeof(float))
    throw IoError("short read (expected " + std::to_string(buf.size()) +
                  " float32 samples): " + path);
  s.data.assign(buf.begin(), buf.end());
  return s;
}

}  // namespace aad
