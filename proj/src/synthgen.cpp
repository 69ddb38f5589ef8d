// rhythmkit/synthgen.cpp

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

#include "rhythmkit/synthgen.hpp"

#include <cmath>
#include <numeric>

#include "rhythmkit/csv.hpp"
#include "rhythmkit/errors.hpp"

namespace rhythmkit {

namespace {

// Prototype generation namespace; any fixed constant works, it only has to
// stay fixed so prototypes are a pure function of (phone_id, dim).
constexpr uint64_t kPrototypeStream = 0x70726F746FULL;

}  // namespace

void RhythmStyle::validate() const {
  if (!(rate > 0.0)) throw ConfigError("rate must be positive");
  if (!(vowel_stretch >= 1.0)) throw ConfigError("vowel_stretch must be >= 1");
  if (!(noise_sd >= 0.0)) throw ConfigError("noise_sd must be >= 0");
}

int SyntheticUtterance::total_frames() const {
  return std::accumulate(reps.begin(), reps.end(), 0);
}

std::vector<int> SyntheticUtterance::frame_phone_index() const {
  std::vector<int> index;
  index.reserve(static_cast<size_t>(total_frames()));
  for (size_t p = 0; p < reps.size(); ++p) {
    for (int k = 0; k < reps[p]; ++k) index.push_back(static_cast<int>(p));
  }
  return index;
}

std::vector<int> sample_phones(Rng& rng, int alphabet_size, int min_len, int max_len) {
  if (alphabet_size < 2) throw ConfigError("alphabet_size must be >= 2");
  if (min_len < 1 || min_len > max_len) throw ConfigError("need 1 <= min_len <= max_len");
  const int length = rng.uniform_int(min_len, max_len);
  std::vector<int> phones(static_cast<size_t>(length));
  phones[0] = rng.uniform_int(0, alphabet_size - 1);
  for (int i = 1; i < length; ++i) {
    // Uniform over the alphabet minus the previous symbol.
    const int draw = rng.uniform_int(0, alphabet_size - 2);
    phones[static_cast<size_t>(i)] = draw >= phones[static_cast<size_t>(i - 1)] ? draw + 1 : draw;
  }
  return phones;
}

std::vector<int> sample_rhythm(Rng& rng, const std::vector<int>& phones,
                               const RhythmStyle& style, int base_reps,
                               double duration_jitter) {
  style.validate();
  if (phones.empty()) throw ConfigError("phones must be nonempty");
  if (base_reps < 1) throw ConfigError("base_reps must be >= 1");
  if (duration_jitter < 0.0) throw ConfigError("duration_jitter must be >= 0");
  std::vector<int> reps;
  reps.reserve(phones.size());
  for (int phone : phones) {
    const double u = rng.uniform(1.0 - duration_jitter, 1.0 + duration_jitter);
    const double stretch = is_vowel(phone) ? style.vowel_stretch : 1.0;
    const long rep = std::lround(base_reps * style.rate * stretch * u);
    reps.push_back(static_cast<int>(std::max(1L, rep)));
  }
  return reps;
}

Eigen::VectorXd phone_prototype(int phone_id, int dim) {
  if (dim < 1) throw ConfigError("dim must be >= 1");
  Rng rng(derive_seed(kPrototypeStream,
                      static_cast<uint64_t>(phone_id) * 1000003ULL + static_cast<uint64_t>(dim)));
  Eigen::VectorXd v(dim);
  for (int i = 0; i < dim; ++i) v(i) = rng.gaussian();
  const double norm = v.norm();
  if (norm < 1e-12) v(0) = 1.0;  // absurdly unlikely; keep the contract anyway
  return v / v.norm();
}

FrameSequence render(const std::vector<int>& phones, const std::vector<int>& reps,
                     int dim, double noise_sd, Rng& rng) {
  if (phones.size() != reps.size()) throw LengthMismatch("phones/reps size differ");
  int total = 0;
  for (int rep : reps) {
    if (rep < 1) throw ConfigError("every rep must be >= 1");
    total += rep;
  }
  FrameSequence seq;
  seq.frames.resize(total, dim);
  Eigen::Index t = 0;
  for (size_t p = 0; p < phones.size(); ++p) {
    const Eigen::VectorXd proto = phone_prototype(phones[p], dim);
    for (int k = 0; k < reps[p]; ++k, ++t) {
      if (noise_sd > 0.0) {
        for (int c = 0; c < dim; ++c) seq.frames(t, c) = proto(c) + rng.gaussian(0.0, noise_sd);
      } else {
        seq.frames.row(t) = proto.transpose();
      }
    }
  }
  return seq;
}

std::pair<SyntheticUtterance, SyntheticUtterance> parallel_pair(
    Rng& rng, const std::vector<int>& phones, const RhythmStyle& style_a,
    const RhythmStyle& style_b, int base_reps, int dim, double duration_jitter) {
  // Independent child streams so the two draws cannot entangle.
  Rng rhythm_a(rng.draw_seed());
  Rng rhythm_b(rng.draw_seed());
  Rng noise_a(rng.draw_seed());
  Rng noise_b(rng.draw_seed());

  SyntheticUtterance a;
  a.phones = phones;
  a.style = style_a;
  a.reps = sample_rhythm(rhythm_a, phones, style_a, base_reps, duration_jitter);
  a.seq = render(phones, a.reps, dim, style_a.noise_sd, noise_a);

  SyntheticUtterance b;
  b.phones = phones;
  b.style = style_b;
  b.reps = sample_rhythm(rhythm_b, phones, style_b, base_reps, duration_jitter);
  b.seq = render(phones, b.reps, dim, style_b.noise_sd, noise_b);

  return {std::move(a), std::move(b)};
}

SyntheticUtterance make_utterance(Rng& rng, int alphabet_size, int min_len, int max_len,
                                  const RhythmStyle& style, int base_reps, int dim,
                                  double duration_jitter) {
  SyntheticUtterance utt;
  utt.phones = sample_phones(rng, alphabet_size, min_len, max_len);
  utt.style = style;
  utt.reps = sample_rhythm(rng, utt.phones, style, base_reps, duration_jitter);
  utt.seq = render(utt.phones, utt.reps, dim, style.noise_sd, rng);
  return utt;
}

void write_utterance_csv(const std::string& path, const SyntheticUtterance& utt) {
  CsvTable table;
  table.header = {"phone_id", "rep"};
  for (size_t p = 0; p < utt.phones.size(); ++p) {
    table.rows.push_back({std::to_string(utt.phones[p]), std::to_string(utt.reps[p])});
  }
  write_csv(path, table);
}

}  // namespace rhythmkit
