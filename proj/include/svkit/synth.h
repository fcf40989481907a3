// svkit/synth.h

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

#ifndef SVKIT_SYNTH_H_
#define SVKIT_SYNTH_H_

#include <array>
#include <string>

#include "svkit/augment.h"
#include "svkit/manifest.h"

namespace svkit {

/// A synthetic talker: three resonances excited by a pulse train.
struct SynthSpeaker {
  std::string id;
  std::array<double, 3> formants{};    // Hz, within 300-3200
  std::array<double, 3> bandwidths{};  // Hz
  double pitch_hz = 120.0;
  double glottal_pole = 0.9;  // one-pole source lowpass
};

SynthSpeaker MakeSynthSpeaker(const std::string &id, uint64_t seed);

/// 3-8 s of syllable-like voiced segments separated by pauses, 8 kHz,
/// speech peak 0.5 over a white background of standard deviation 0.01.
/// Deterministic in (speaker, seed).
Waveform SynthUtterance(const SynthSpeaker &spk, uint64_t seed);

/// Writes num_speakers x utts_per_speaker WAV files under out_dir/wav and
/// out_dir/manifest.txt; returns the manifest.  Speaker ids are
/// "<prefix><index>".
CorpusManifest SynthCorpus(int num_speakers, int utts_per_speaker, uint64_t seed,
                           const std::string &out_dir,
                           const std::string &prefix = "spk");

/// In-memory variant used by tests; waveforms indexed like the manifest.
struct SynthCorpusData {
  CorpusManifest manifest;
  std::vector<Waveform> audio;
};
SynthCorpusData SynthCorpusInMemory(int num_speakers, int utts_per_speaker,
                                    uint64_t seed, const std::string &prefix = "spk");

struct SynthBankOptions {
  int stationary_train = 6;
  int stationary_dev = 3;
  int music_train = 2;
  int music_dev = 1;
  int babble_train = 3;
  int babble_dev = 2;
  double seconds = 12.0;
  int rooms_train = 8;
  int rooms_dev = 4;
  int rirs_per_room = 3;
};

/// Stationary (white/pink/brown/hum), music-like and babble noises split
/// into disjoint train/dev groups.
NoiseBank SynthNoiseBank(const SynthBankOptions &opts, uint64_t seed);

/// Exponentially decaying noise-tail RIRs with a direct path; every room
/// has opts.rirs_per_room responses sharing one decay time.
RoomSet SynthRooms(const SynthBankOptions &opts, uint64_t seed);

}  // namespace svkit

#endif  // SVKIT_SYNTH_H_
