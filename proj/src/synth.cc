// svkit/src/synth.cc

// Copyright 2026  svkit authors

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

#include "svkit/synth.h"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <numbers>

#include "svkit/io-util.h"

namespace svkit {

namespace fs = std::filesystem;

namespace {
constexpr int kRate = 8000;
constexpr double kPi = std::numbers::pi;
// Stationary recording background, about 34 dB below the 0.5 peak.
constexpr double kBackgroundLevel = 1e-2;
}  // namespace

SynthSpeaker MakeSynthSpeaker(const std::string &id, uint64_t seed) {
  Rng rng(MixSeed(seed, HashString(id)));
  SynthSpeaker s;
  s.id = id;
  // One resonance per third of the band keeps them ordered and apart.
  const double edges[4] = {300.0, 1000.0, 2100.0, 3200.0};
  for (int k = 0; k < 3; ++k) {
    s.formants[k] = UniformReal(rng, edges[k] + 50.0, edges[k + 1] - 50.0);
    s.bandwidths[k] = UniformReal(rng, 60.0, 160.0);
  }
  s.pitch_hz = UniformReal(rng, 85.0, 250.0);
  s.glottal_pole = UniformReal(rng, 0.82, 0.96);
  return s;
}

namespace {

// Two-pole resonator with unit gain at its centre frequency.
struct Resonator {
  double a1, a2, g, y1 = 0, y2 = 0;
  Resonator(double freq, double bw) {
    const double r = std::exp(-kPi * bw / kRate);
    const double theta = 2.0 * kPi * freq / kRate;
    a1 = 2.0 * r * std::cos(theta);
    a2 = -r * r;
    g = (1.0 - r) * std::sqrt(1.0 - 2.0 * r * std::cos(2.0 * theta) + r * r);
  }
  double Step(double x) {
    double y = g * x + a1 * y1 + a2 * y2;
    y2 = y1;
    y1 = y;
    return y;
  }
};

}  // namespace

Waveform SynthUtterance(const SynthSpeaker &spk, uint64_t seed) {
  Rng rng(MixSeed(seed, HashString(spk.id) ^ 0x7574745fULL));
  const double duration = UniformReal(rng, 3.0, 8.0);
  const size_t total = static_cast<size_t>(duration * kRate);
  std::vector<double> out(total, 0.0);

  // Session-level variation: pitch register and a mild global formant scale.
  const double pitch_scale = std::exp(0.06 * StdNormal(rng));
  const double formant_scale = std::exp(0.02 * StdNormal(rng));
  size_t pos = static_cast<size_t>(UniformReal(rng, 0.05, 0.3) * kRate);
  while (pos < total) {
    const size_t len = static_cast<size_t>(UniformReal(rng, 0.12, 0.35) * kRate);
    const size_t end = std::min(total, pos + len);
    std::array<Resonator, 3> res = {
        Resonator(spk.formants[0] * formant_scale * std::exp(0.07 * StdNormal(rng)),
                  spk.bandwidths[0]),
        Resonator(spk.formants[1] * formant_scale * std::exp(0.07 * StdNormal(rng)),
                  spk.bandwidths[1]),
        Resonator(spk.formants[2] * formant_scale * std::exp(0.05 * StdNormal(rng)),
                  spk.bandwidths[2])};
    const double f0_start = spk.pitch_hz * pitch_scale * std::exp(0.04 * StdNormal(rng));
    const double f0_end = f0_start * std::exp(0.06 * StdNormal(rng));
    const double level = UniformReal(rng, 0.5, 1.0);
    double phase = UniformReal(rng, 0.0, 1.0), src = 0.0;
    for (size_t i = pos; i < end; ++i) {
      const double u = static_cast<double>(i - pos) / std::max<size_t>(1, end - pos - 1);
      const double f0 = f0_start + (f0_end - f0_start) * u;
      phase += f0 / kRate;
      double pulse = 0.0;
      if (phase >= 1.0) {
        phase -= 1.0;
        pulse = 1.0;
      }
      const double aspiration = 0.02 * StdNormal(rng);
      src = spk.glottal_pole * src + (1.0 - spk.glottal_pole) * 40.0 * pulse;
      double y = src + aspiration;
      for (auto &r : res) y = r.Step(y);
      const double env = std::sin(kPi * u);
      out[i] += level * env * env * y;
    }
    pos = end + static_cast<size_t>(UniformReal(rng, 0.04, 0.25) * kRate);
  }
  double peak = 0;
  for (double v : out) peak = std::max(peak, std::abs(v));
  const double scale = peak > 0 ? 0.5 / peak : 1.0;
  for (double &v : out) v = v * scale + kBackgroundLevel * StdNormal(rng);
  return Waveform(std::move(out), kRate);
}

namespace {

std::string UttId(const std::string &spk, int u) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "-u%02d", u);
  return spk + buf;
}

std::string SpeakerId(const std::string &prefix, int s) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%03d", s);
  return prefix + buf;
}

}  // namespace

SynthCorpusData SynthCorpusInMemory(int num_speakers, int utts_per_speaker,
                                    uint64_t seed, const std::string &prefix) {
  if (num_speakers <= 0 || utts_per_speaker <= 0)
    throw DataError("synthetic corpus needs positive speaker and utterance counts");
  SynthCorpusData data;
  for (int s = 0; s < num_speakers; ++s) {
    const std::string spk_id = SpeakerId(prefix, s);
    SynthSpeaker spk = MakeSynthSpeaker(spk_id, seed);
    for (int u = 0; u < utts_per_speaker; ++u) {
      ManifestEntry e;
      e.utt_id = UttId(spk_id, u);
      e.path = "wav/" + e.utt_id + ".wav";
      e.speaker_id = spk_id;
      data.manifest.entries.push_back(e);
      data.audio.push_back(SynthUtterance(spk, MixSeed(seed, 1000 + u)));
    }
  }
  return data;
}

CorpusManifest SynthCorpus(int num_speakers, int utts_per_speaker, uint64_t seed,
                           const std::string &out_dir, const std::string &prefix) {
  SynthCorpusData data = SynthCorpusInMemory(num_speakers, utts_per_speaker, seed, prefix);
  fs::create_directories(fs::path(out_dir) / "wav");
  for (size_t i = 0; i < data.audio.size(); ++i)
    WriteWav(data.audio[i], (fs::path(out_dir) / data.manifest.entries[i].path).string());
  data.manifest.base_dir = out_dir;
  WriteManifest(data.manifest, (fs::path(out_dir) / "manifest.txt").string());
  return data.manifest;
}

namespace {

std::vector<double> Normalized(std::vector<double> x, double peak) {
  double p = 0;
  for (double v : x) p = std::max(p, std::abs(v));
  if (p > 0)
    for (double &v : x) v *= peak / p;
  return x;
}

std::vector<double> ColoredNoise(size_t n, int color, Rng &rng) {
  std::vector<double> x(n);
  double b0 = 0, b1 = 0, b2 = 0, brown = 0;
  for (size_t i = 0; i < n; ++i) {
    double w = StdNormal(rng);
    switch (color) {
      case 0:
        x[i] = w;
        break;
      case 1:  // pink, Paul Kellet's economy filter
        b0 = 0.99765 * b0 + w * 0.0990460;
        b1 = 0.96300 * b1 + w * 0.2965164;
        b2 = 0.57000 * b2 + w * 1.0526913;
        x[i] = b0 + b1 + b2 + w * 0.1848;
        break;
      default:  // brown (leaky integrator)
        brown = 0.995 * brown + 0.1 * w;
        x[i] = brown;
        break;
    }
  }
  return x;
}

std::vector<double> HumNoise(size_t n, Rng &rng) {
  const double base = UniformReal(rng, 0.0, 1.0) < 0.5 ? 50.0 : 60.0;
  std::vector<double> x = ColoredNoise(n, 0, rng);
  for (double &v : x) v *= 0.05;
  for (int h = 1; h <= 6; ++h) {
    const double amp = 1.0 / h, ph = UniformReal(rng, 0, 2 * kPi);
    for (size_t i = 0; i < n; ++i)
      x[i] += amp * std::sin(2 * kPi * base * h * i / kRate + ph);
  }
  return x;
}

std::vector<double> MusicNoise(size_t n, Rng &rng) {
  std::vector<double> x(n, 0.0);
  size_t pos = 0;
  while (pos < n) {
    const size_t len = static_cast<size_t>(UniformReal(rng, 0.15, 0.5) * kRate);
    const double midi = std::round(UniformReal(rng, 45, 84));
    const double f = 440.0 * std::pow(2.0, (midi - 69) / 12.0);
    for (size_t i = pos; i < std::min(n, pos + len); ++i) {
      const double t = static_cast<double>(i - pos) / kRate;
      const double env = std::exp(-3.0 * t);
      for (int h = 1; h <= 5 && f * h < 3900; ++h)
        x[i] += env / h * std::sin(2 * kPi * f * h * t);
    }
    pos += len;
  }
  return x;
}

std::vector<double> BabbleNoise(size_t n, uint64_t seed, int talkers) {
  std::vector<double> x(n, 0.0);
  for (int k = 0; k < talkers; ++k) {
    SynthSpeaker spk = MakeSynthSpeaker("babbler" + std::to_string(k), seed);
    size_t pos = 0;
    for (int u = 0; pos < n; ++u) {
      Waveform w = SynthUtterance(spk, MixSeed(seed, 77 + u));
      for (size_t i = 0; i < w.size() && pos + i < n; ++i) x[pos + i] += w.samples[i];
      pos += w.size();
    }
  }
  return x;
}

}  // namespace

NoiseBank SynthNoiseBank(const SynthBankOptions &opts, uint64_t seed) {
  NoiseBank bank;
  const size_t n = static_cast<size_t>(opts.seconds * kRate);
  auto add_group = [&](const std::string &kind, int train, int dev, auto make) {
    for (int i = 0; i < train + dev; ++i) {
      Rng rng(MixSeed(seed, HashString(kind) + i));
      char id[48];
      std::snprintf(id, sizeof id, "%s%02d", kind.c_str(), i);
      bank.Add(id, Waveform(Normalized(make(rng, i), 0.5), kRate),
               i < train ? Split::kTrain : Split::kDev);
    }
  };
  add_group("stat", opts.stationary_train, opts.stationary_dev, [&](Rng &rng, int i) {
    return i % 4 == 3 ? HumNoise(n, rng) : ColoredNoise(n, i % 4, rng);
  });
  add_group("music", opts.music_train, opts.music_dev,
            [&](Rng &rng, int) { return MusicNoise(n, rng); });
  add_group("babble", opts.babble_train, opts.babble_dev, [&](Rng &rng, int) {
    return BabbleNoise(n, rng(), static_cast<int>(UniformInt(rng, 4, 8)));
  });
  return bank;
}

RoomSet SynthRooms(const SynthBankOptions &opts, uint64_t seed) {
  RoomSet set;
  for (int r = 0; r < opts.rooms_train + opts.rooms_dev; ++r) {
    Rng rng(MixSeed(seed, 0x726f6f6dULL + r));
    RoomModel room;
    char id[32];
    std::snprintf(id, sizeof id, "room%02d", r);
    room.room_id = id;
    room.split = r < opts.rooms_train ? Split::kTrain : Split::kDev;
    room.sample_rate = kRate;
    const double rt60 = UniformReal(rng, 0.2, 0.7);
    const size_t len = static_cast<size_t>(std::min(rt60, 0.5) * kRate);
    for (int k = 0; k < opts.rirs_per_room; ++k) {
      std::vector<double> h(len, 0.0);
      const size_t direct = static_cast<size_t>(UniformInt(rng, 0, 40));
      const double tail_level = UniformReal(rng, 0.15, 0.5);
      h[direct] = 1.0;
      for (size_t i = direct + 1; i < len; ++i) {
        const double t = static_cast<double>(i - direct) / kRate;
        h[i] = tail_level * StdNormal(rng) * std::exp(-6.9 * t / rt60);
      }
      room.rirs.push_back(Normalized(std::move(h), 1.0 - 1.0 / 32768.0));
    }
    set.rooms[room.room_id] = std::move(room);
  }
  return set;
}

}  // namespace svkit
