// rhythmkit/wav.cpp

// Copyright 2026  rhythmkit authors

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

#include "rhythmkit/wav.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>

#include "rhythmkit/errors.hpp"

namespace rhythmkit {

namespace {

uint32_t read_u32(const uint8_t* p) {
  return static_cast<uint32_t>(p[0]) | (static_cast<uint32_t>(p[1]) << 8) |
         (static_cast<uint32_t>(p[2]) << 16) | (static_cast<uint32_t>(p[3]) << 24);
}

uint16_t read_u16(const uint8_t* p) {
  return static_cast<uint16_t>(p[0] | (p[1] << 8));
}

void put_u32(std::string* out, uint32_t v) {
  out->push_back(static_cast<char>(v & 0xFF));
  out->push_back(static_cast<char>((v >> 8) & 0xFF));
  out->push_back(static_cast<char>((v >> 16) & 0xFF));
  out->push_back(static_cast<char>((v >> 24) & 0xFF));
}

void put_u16(std::string* out, uint16_t v) {
  out->push_back(static_cast<char>(v & 0xFF));
  out->push_back(static_cast<char>((v >> 8) & 0xFF));
}

}  // namespace

AudioSignal load_wav(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::vector<uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                             std::istreambuf_iterator<char>());
  if (in.bad()) throw IoError("read failed: " + path);

  if (bytes.size() < 12 || std::memcmp(bytes.data(), "RIFF", 4) != 0 ||
      std::memcmp(bytes.data() + 8, "WAVE", 4) != 0) {
    throw FormatError("not a RIFF/WAVE file: " + path);
  }

  bool have_fmt = false;
  uint16_t channels = 0;
  uint16_t bits = 0;
  uint32_t rate = 0;
  const uint8_t* data = nullptr;
  uint32_t data_size = 0;

  size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const char* id = reinterpret_cast<const char*>(bytes.data() + pos);
    const uint32_t size = read_u32(bytes.data() + pos + 4);
    pos += 8;
    if (pos + size > bytes.size()) throw FormatError("truncated chunk in " + path);
    if (std::memcmp(id, "fmt ", 4) == 0) {
      if (size < 16) throw FormatError("short fmt chunk in " + path);
      const uint16_t audio_format = read_u16(bytes.data() + pos);
      channels = read_u16(bytes.data() + pos + 2);
      rate = read_u32(bytes.data() + pos + 4);
      bits = read_u16(bytes.data() + pos + 14);
      if (audio_format != 1) throw FormatError("not PCM: " + path);
      have_fmt = true;
    } else if (std::memcmp(id, "data", 4) == 0) {
      data = bytes.data() + pos;
      data_size = size;
    }
    pos += size + (size & 1);  // chunks are word-aligned
  }

  if (!have_fmt || data == nullptr) throw FormatError("missing fmt/data chunk: " + path);
  if (channels != 1) throw FormatError("not mono: " + path);
  if (bits != 16) throw FormatError("not 16-bit: " + path);
  if (rate == 0) throw FormatError("zero sample rate: " + path);

  AudioSignal audio;
  audio.sample_rate = static_cast<int>(rate);
  const size_t n = data_size / 2;
  audio.samples.resize(n);
  for (size_t i = 0; i < n; ++i) {
    const int16_t v = static_cast<int16_t>(read_u16(data + 2 * i));
    audio.samples[i] = static_cast<double>(v) / 32768.0;
  }
  return audio;
}

void write_wav(const std::string& path, const AudioSignal& audio) {
  if (audio.sample_rate <= 0) throw ConfigError("sample_rate must be positive");
  std::string payload;
  payload.reserve(44 + 2 * audio.samples.size());
  const uint32_t data_size = static_cast<uint32_t>(2 * audio.samples.size());

  payload.append("RIFF");
  put_u32(&payload, 36 + data_size);
  payload.append("WAVE");
  payload.append("fmt ");
  put_u32(&payload, 16);
  put_u16(&payload, 1);  // PCM
  put_u16(&payload, 1);  // mono
  put_u32(&payload, static_cast<uint32_t>(audio.sample_rate));
  put_u32(&payload, static_cast<uint32_t>(audio.sample_rate) * 2);  // byte rate
  put_u16(&payload, 2);   // block align
  put_u16(&payload, 16);  // bits
  payload.append("data");
  put_u32(&payload, data_size);
  for (double s : audio.samples) {
    const double clipped = std::clamp(s, -1.0, 1.0);
    const int32_t q = static_cast<int32_t>(std::lround(clipped * 32767.0));
    put_u16(&payload, static_cast<uint16_t>(static_cast<int16_t>(q)));
  }

  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path);
  out.write(payload.data(), static_cast<std::streamsize>(payload.size()));
  if (!out) throw IoError("write failed: " + path);
}

}  // namespace rhythmkit
