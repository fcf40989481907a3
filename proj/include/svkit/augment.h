// svkit/augment.h

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

#ifndef SVKIT_AUGMENT_H_
#define SVKIT_AUGMENT_H_

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "svkit/feature.h"
#include "svkit/wave.h"

namespace svkit {

enum class Split { kTrain, kDev };

std::string SplitName(Split s);
Split ParseSplit(const std::string &s);

/// A room with at least two impulse responses (distinct source positions).
struct RoomModel {
  std::string room_id;
  std::vector<std::vector<double>> rirs;
  int sample_rate = 8000;
  Split split = Split::kTrain;

  void Validate() const;
};

struct RoomSet {
  std::map<std::string, RoomModel> rooms;

  const RoomModel &Get(const std::string &id) const;
  std::vector<std::string> Ids(Split split) const;
};

struct NoiseBank {
  std::map<std::string, Waveform> noises;
  std::map<std::string, Split> partition;

  void Add(const std::string &id, Waveform w, Split split);
  const Waveform &Get(const std::string &id) const;
  std::vector<std::string> Ids(Split split) const;
};

/// One reproducible corruption.  noise_id may join several ids with '+',
/// which sums those noises (with independent offsets) before calibration.
struct AugmentSpec {
  std::optional<double> snr_db;
  std::optional<std::string> noise_id;
  std::optional<std::string> room_id;
  std::optional<int> rir_index_speech;
  std::optional<int> rir_index_noise;
  bool apply_telephone = false;
  uint64_t seed = 0;

  void Validate() const;
  /// "snr=<f>;noise=<id>;room=<id>;rir=<i>,<j>;tel=<0|1>;seed=<u64>", unset
  /// fields omitted.
  std::string ToString() const;
  static AugmentSpec Parse(const std::string &text);
  bool operator==(const AugmentSpec &) const = default;
};

/// SNR targets above this are clamped.
constexpr double kMaxSnrDb = 100.0;

/// Repeats (or crops) noise to `length` samples starting at a circular offset
/// drawn from seed.
Waveform FitNoiseLength(const Waveform &noise, size_t length, uint64_t seed);

/// Mean per-sample energy of the A-weighted signal over the sample ranges of
/// active mask frames.
double MaskedAWeightedEnergy(const Waveform &w, const FrameMask &mask);

/// Gain g with E_s / (g^2 E_n) = 10^(snr/10), energies measured by
/// MaskedAWeightedEnergy.  Noise is first fitted to the speech length.
double SnrGain(const Waveform &speech, const Waveform &noise,
               const FrameMask &mask, double snr_db, uint64_t seed = 0);

/// speech + g * noise, rescaled to unit peak if it would clip.
Waveform MixAtSnr(const Waveform &speech, const Waveform &noise,
                  const FrameMask &mask, double snr_db, uint64_t seed = 0);

/// Intermediate signals of one AugmentUtterance call.  output equals
/// output_scale * (speech_reference + scaled_noise) before the optional
/// telephone step.
struct AugmentTrace {
  Waveform speech_reference;
  Waveform scaled_noise;
  FrameMask mask;
  double gain = 0.0;
  double output_scale = 1.0;
};

/// Reverberate speech and noise with two RIRs of one room, calibrate the
/// noise against the reverberated speech over the dry-speech VAD frames, sum,
/// then telephone-filter.  Steps whose fields are unset are skipped.
Waveform AugmentUtterance(const Waveform &speech, const AugmentSpec &spec,
                          const NoiseBank &noises, const RoomSet &rooms,
                          AugmentTrace *trace = nullptr);

/// Bank directories hold WAV files plus "listing.txt" with lines
/// "<id>\t<filename>\t<train|dev>".  For rooms the id is the room id and the
/// line order within a room gives the RIR index.
NoiseBank LoadNoiseBank(const std::string &dir);
void SaveNoiseBank(const NoiseBank &bank, const std::string &dir);
RoomSet LoadRoomSet(const std::string &dir);
void SaveRoomSet(const RoomSet &rooms, const std::string &dir);

}  // namespace svkit

#endif  // SVKIT_AUGMENT_H_
