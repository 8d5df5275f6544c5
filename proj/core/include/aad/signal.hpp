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

#ifndef AAD_SIGNAL_HPP_
#define AAD_SIGNAL_HPP_

#include <cstddef>
#include <string>
#include <vector>

namespace aad {

// Uniformly sampled real-valued multi-channel series, channel-major storage
// (channel c occupies samples [c*n, (c+1)*n)).
struct SignalSeries {
  std::vector<double> data;
  std::size_t channels = 1;
  double sample_rate_hz = 0.0;

  std::size_t samples() const {
    return channels == 0 ? 0 : data.size() / channels;
  }
  const double* channel(std::size_t c) const { return data.data() + c * samples(); }
  double* channel(std::size_t c) { return data.data() + c * samples(); }
  double at(std::size_t c, std::size_t t) const { return data[c * samples() + t]; }
};

// On-disk format: raw little-endian float32 samples, channel-major, with a
// JSON sidecar `<path>.json` = {channels, samples, sample_rate_hz}. `path`
// names the .f32 file.
void write_signal(const SignalSeries& s, const std::string& path);
SignalSeries read_signal(const std::string& path);

}  // namespace aad

#endif  // AAD_SIGNAL_HPP_
