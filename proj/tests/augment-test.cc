// svkit/tests/augment-test.cc

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

#include <cmath>
#include <filesystem>
#include <map>
#include <numbers>
#include <set>

#include "doctest.h"
#include "oracles.h"
#include "svkit/augment.h"
#include "svkit/filter.h"
#include "svkit/manifest.h"
#include "svkit/stft.h"
#include "svkit/synth.h"
#include "svkit/vad.h"

using namespace svkit;
namespace fs = std::filesystem;

namespace {

Waveform RandomNoise(size_t n, uint64_t seed, double amp = 0.1) {
  Rng rng(seed);
  std::vector<double> s(n);
  for (auto &v : s) v = amp * StdNormal(rng);
  return Waveform(std::move(s), 8000);
}

struct Banks {
  NoiseBank noises;
  RoomSet rooms;
};

Banks MakeBanks(uint64_t seed) {
  SynthBankOptions o;
  o.seconds = 3.0;
  return Banks{SynthNoiseBank(o, seed), SynthRooms(o, seed)};
}

std::string TempDir(const std::string &name) {
  fs::path dir = fs::temp_directory_path() / "svkit-augment-test" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir.string();
}

CorpusManifest ToyManifest(int speakers, int utts) {
  CorpusManifest m;
  for (int s = 0; s < speakers; ++s)
    for (int u = 0; u < utts; ++u) {
      ManifestEntry e;
      e.speaker_id = "s" + std::to_string(s);
      e.utt_id = e.speaker_id + "-" + std::to_string(u);
      e.path = "wav/" + e.utt_id + ".wav";
      m.entries.push_back(e);
    }
  return m;
}

}  // namespace

TEST_CASE("snr gain closed forms") {
  SynthSpeaker spk = MakeSynthSpeaker("a", 1);
  Waveform s = SynthUtterance(spk, 2);
  FrameMask mask = EnergyVad(s);
  CHECK(SnrGain(s, s, mask, 0.0) == doctest::Approx(1.0).epsilon(1e-12));

  // Equal spectra, speech twice the amplitude: E_s = 4 E_n.
  Waveform n = RandomNoise(s.size(), 5);
  Waveform s2 = n;
  for (double &v : s2.samples) v *= 2.0;
  FrameMask full;
  full.active.assign(NumFrames(s2.size(), 200, 80), true);
  double g = SnrGain(s2, n, full, 10.0);
  CHECK(g == doctest::Approx(std::sqrt(0.4)).epsilon(1e-9));
  Waveform scaled = n;
  for (double &v : scaled.samples) v *= g;
  CHECK(oracle::SnrDb(s2, scaled, full) == doctest::Approx(10.0).epsilon(1e-6));

  double capped = SnrGain(s2, n, full, 1e6);
  CHECK(capped <= 1e-5 * std::sqrt(4.0) * (1 + 1e-12));
}

TEST_CASE("snr gain errors") {
  Waveform s = RandomNoise(4000, 1);
  FrameMask none;
  none.active.assign(NumFrames(s.size(), 200, 80), false);
  CHECK_THROWS_AS(SnrGain(s, s, none, 0.0), DataError);
  FrameMask all;
  all.active.assign(none.size(), true);
  Waveform zero(std::vector<double>(4000, 0.0), 8000);
  CHECK_THROWS_AS(SnrGain(s, zero, all, 0.0), DataError);
  Waveform other = s;
  other.sample_rate = 16000;
  CHECK_THROWS_AS(SnrGain(s, other, all, 0.0), DataError);
}

TEST_CASE("mix at snr re-measures to target over random cases") {
  Rng rng(99);
  for (int trial = 0; trial < 100; ++trial) {
    SynthSpeaker spk = MakeSynthSpeaker("m" + std::to_string(trial % 7), 3);
    Waveform s = SynthUtterance(spk, trial);
    s.samples.resize(8000 * 3);  // shorten for the direct-sum oracle
    Waveform n = RandomNoise(5000 + trial * 97, trial + 1000, UniformReal(rng, 0.01, 0.5));
    FrameMask mask = EnergyVad(s);
    double target = UniformReal(rng, -5.0, 20.0);
    uint64_t seed = rng();
    double g = SnrGain(s, n, mask, target, seed);
    Waveform fitted = FitNoiseLength(n, s.size(), seed);
    Waveform mix = MixAtSnr(s, n, mask, target, seed);
    // Undo the optional peak rescale, recover the scaled noise as residual.
    double scale = 1.0;
    for (size_t i = 0; i < s.size(); ++i) {
      double raw = s.samples[i] + g * fitted.samples[i];
      if (std::abs(raw) > 1e-3) {
        scale = mix.samples[i] / raw;
        break;
      }
    }
    Waveform residual = s;
    for (size_t i = 0; i < s.size(); ++i) residual.samples[i] = mix.samples[i] / scale - s.samples[i];
    if (trial % 10 == 0) CHECK(std::abs(oracle::SnrDb(s, residual, mask) - target) <= 0.1);
    Waveform scaled = fitted;
    for (double &v : scaled.samples) v *= g;
    CHECK(std::abs(10 * std::log10(MaskedAWeightedEnergy(s, mask) /
                                   MaskedAWeightedEnergy(scaled, mask)) - target) <= 0.1);
  }
}

TEST_CASE("mix energy adds for independent noise") {
  SynthSpeaker spk = MakeSynthSpeaker("e", 4);
  Waveform s = SynthUtterance(spk, 9);
  Waveform n = RandomNoise(s.size(), 17, 0.2);
  FrameMask mask = EnergyVad(s);
  double es = MaskedAWeightedEnergy(s, mask), en = MaskedAWeightedEnergy(n, mask);
  double g = SnrGain(s, n, mask, 0.0);
  Waveform mix = s;
  for (size_t i = 0; i < s.size(); ++i) mix.samples[i] += g * n.samples[i];
  double em = MaskedAWeightedEnergy(mix, mask);
  CHECK(std::abs(em - (es + g * g * en)) / em < 0.02);
}

TEST_CASE("fit noise length tiles with a seeded offset") {
  Waveform n({1, 2, 3, 4, 5}, 8000);
  Waveform a = FitNoiseLength(n, 12, 3), b = FitNoiseLength(n, 12, 3);
  CHECK(a.samples == b.samples);
  for (size_t i = 1; i < 12; ++i)
    CHECK(std::fmod(a.samples[i] - a.samples[i - 1] + 5.0, 5.0) == doctest::Approx(1.0));
}

TEST_CASE("augment utterance pipeline subsets") {
  Banks banks = MakeBanks(11);
  SynthSpeaker spk = MakeSynthSpeaker("p", 5);
  Waveform s = SynthUtterance(spk, 1);

  AugmentSpec none;
  CHECK(AugmentUtterance(s, none, banks.noises, banks.rooms).samples == s.samples);

  RoomSet unit;
  RoomModel room;
  room.room_id = "unit";
  room.rirs = {{1.0}, {1.0, 0.0}};
  unit.rooms["unit"] = room;
  AugmentSpec rev;
  rev.room_id = "unit";
  rev.rir_index_speech = 0;
  rev.rir_index_noise = 1;
  CHECK(AugmentUtterance(s, rev, banks.noises, unit).samples == s.samples);

  // Noise-only spec equals a direct mix of the unreverberated inputs.
  AugmentSpec noisy;
  noisy.noise_id = banks.noises.Ids(Split::kTrain).front();
  noisy.snr_db = 7.5;
  noisy.seed = 1234;
  Waveform via_spec = AugmentUtterance(s, noisy, banks.noises, banks.rooms);
  Waveform fitted = FitNoiseLength(banks.noises.Get(*noisy.noise_id), s.size(), MixSeed(1234, 0));
  Waveform direct = MixAtSnr(s, fitted, EnergyVad(s), 7.5);
  CHECK(via_spec.samples == direct.samples);

  AugmentSpec tel;
  tel.apply_telephone = true;
  CHECK(AugmentUtterance(s, tel, banks.noises, banks.rooms).samples == TelephoneFilter(s).samples);
}

TEST_CASE("augment utterance hits the target snr against reverberated speech") {
  Banks banks = MakeBanks(12);
  SynthSpeaker spk = MakeSynthSpeaker("q", 6);
  Waveform s = SynthUtterance(spk, 3);
  s.samples.resize(3 * 8000);
  AugmentSpec spec;
  spec.room_id = banks.rooms.Ids(Split::kTrain).front();
  spec.rir_index_speech = 0;
  spec.rir_index_noise = 2;
  spec.noise_id = banks.noises.Ids(Split::kTrain)[1];
  spec.snr_db = 15.0;
  spec.seed = 42;
  AugmentTrace trace;
  Waveform out = AugmentUtterance(s, spec, banks.noises, banks.rooms, &trace);
  CHECK(trace.mask.size() == EnergyVad(s).size());
  Waveform residual = out;
  for (size_t i = 0; i < out.size(); ++i)
    residual.samples[i] = out.samples[i] / trace.output_scale - trace.speech_reference.samples[i];
  CHECK(std::abs(oracle::SnrDb(trace.speech_reference, residual, trace.mask) - 15.0) <= 0.1);
  CHECK(trace.speech_reference.samples != s.samples);
}

TEST_CASE("augment utterance errors") {
  Banks banks = MakeBanks(13);
  Waveform s = SynthUtterance(MakeSynthSpeaker("r", 1), 1);
  AugmentSpec bad_noise;
  bad_noise.noise_id = "nope";
  bad_noise.snr_db = 5;
  CHECK_THROWS_AS(AugmentUtterance(s, bad_noise, banks.noises, banks.rooms), DataError);
  AugmentSpec no_snr;
  no_snr.noise_id = banks.noises.Ids(Split::kTrain).front();
  CHECK_THROWS_AS(AugmentUtterance(s, no_snr, banks.noises, banks.rooms), DataError);
  AugmentSpec same_rir;
  same_rir.room_id = banks.rooms.Ids(Split::kTrain).front();
  same_rir.rir_index_speech = 1;
  same_rir.rir_index_noise = 1;
  CHECK_THROWS_AS(AugmentUtterance(s, same_rir, banks.noises, banks.rooms), DataError);
  AugmentSpec bad_room = same_rir;
  bad_room.rir_index_noise = 0;
  bad_room.room_id = "ghost";
  CHECK_THROWS_AS(AugmentUtterance(s, bad_room, banks.noises, banks.rooms), DataError);
  bad_room.room_id = same_rir.room_id;
  bad_room.rir_index_noise = 17;
  CHECK_THROWS_AS(AugmentUtterance(s, bad_room, banks.noises, banks.rooms), DataError);
}

TEST_CASE("augment spec text form round-trips for random specs") {
  Rng rng(5);
  for (int i = 0; i < 200; ++i) {
    AugmentSpec s;
    if (rng() % 2) {
      s.noise_id = "stat0" + std::to_string(rng() % 9);
      s.snr_db = UniformReal(rng, -10, 30);
    }
    if (rng() % 2) {
      s.room_id = "room" + std::to_string(rng() % 5);
      s.rir_index_speech = static_cast<int>(rng() % 3);
      s.rir_index_noise = (*s.rir_index_speech + 1) % 3;
    }
    s.apply_telephone = rng() % 2;
    s.seed = rng();
    CHECK(AugmentSpec::Parse(s.ToString()) == s);
  }
  CHECK_THROWS_AS(AugmentSpec::Parse("snr=abc;tel=0;seed=1"), DataError);
  CHECK_THROWS_AS(AugmentSpec::Parse("bogus=1"), DataError);
  CHECK(AugmentSpec::Parse("snr=5;noise=a;room=r;rir=0,1;tel=1;seed=9").ToString() ==
        "snr=5;noise=a;room=r;rir=0,1;tel=1;seed=9");
}

TEST_CASE("manifest file round trip and validation") {
  std::string dir = TempDir("manifest");
  CorpusManifest m = ToyManifest(2, 3);
  m.entries[1].condition = Condition::kNoiseReverb;
  AugmentSpec spec;
  spec.noise_id = "stat00";
  spec.snr_db = 3.25;
  spec.seed = 77;
  m.entries[1].spec = spec;
  WriteManifest(m, dir + "/m.txt");
  CorpusManifest r = ReadManifest(dir + "/m.txt");
  m.SortById();
  CHECK(r.entries == m.entries);
  CHECK(r.base_dir == dir);
  CHECK_THROWS_AS(r.CheckPaths(), DataError);

  m.entries.push_back(m.entries[0]);
  CHECK_THROWS_AS(WriteManifest(m, dir + "/dup.txt"), DataError);
}

TEST_CASE("multicondition manifest") {
  Banks banks = MakeBanks(14);
  AugmentPool pool = AugmentPool::FromBanks(banks.noises, banks.rooms, Split::kTrain);
  ConditionMix mix{{{Condition::kNoise, 1.0}, {Condition::kReverb, 1.0}}, {0, 15}};
  CorpusManifest clean = ToyManifest(2, 5);

  CHECK(BuildMulticonditionManifest(clean, 0.0, mix, pool, 1).entries == clean.entries);

  CorpusManifest all = BuildMulticonditionManifest(clean, 1.0, mix, pool, 1);
  CHECK(all.entries.size() == 20);
  std::map<std::string, int> copies;
  for (size_t i = 10; i < all.entries.size(); ++i) {
    REQUIRE(all.entries[i].spec.has_value());
    ++copies[all.entries[i].path];
  }
  CHECK(copies.size() == 10);

  CorpusManifest a = BuildMulticonditionManifest(clean, 0.3, mix, pool, 7);
  CorpusManifest b = BuildMulticonditionManifest(clean, 0.3, mix, pool, 7);
  CHECK(a.entries.size() == 13);
  CHECK(a.entries == b.entries);
  CHECK(FormatManifest(a) == FormatManifest(b));
  for (size_t i = 0; i < clean.entries.size(); ++i) CHECK(a.entries[i] == clean.entries[i]);
  for (size_t i = 10; i < 13; ++i) {
    const auto &e = a.entries[i];
    if (e.spec->room_id) CHECK(*e.spec->rir_index_speech != *e.spec->rir_index_noise);
  }
  CHECK_THROWS_AS(BuildMulticonditionManifest(clean, 1.5, mix, pool, 1), DataError);
  CHECK_THROWS_AS(BuildMulticonditionManifest(clean, -0.1, mix, pool, 1), DataError);
}

TEST_CASE("replica manifest") {
  Banks banks = MakeBanks(15);
  AugmentPool pool = AugmentPool::FromBanks(banks.noises, banks.rooms, Split::kTrain);
  CorpusManifest clean = ToyManifest(3, 8);
  FrameCounter long_enough = [](const ManifestEntry &) { return size_t{600}; };

  ReplicaRecipe one;
  one.kinds = {{ReplicaKind::kBabble, {13, 20}}};
  CorpusManifest r1 = BuildReplicaManifest(clean, one, 1000, pool, 3, long_enough);
  CHECK(r1.entries.size() == 48);
  for (const auto &e : r1.entries) {
    if (e.condition != Condition::kBabble) continue;
    size_t parts = std::count(e.spec->noise_id->begin(), e.spec->noise_id->end(), '+') + 1;
    CHECK(parts >= 3);
    CHECK(parts <= 7);
    CHECK(*e.spec->snr_db >= 13.0);
    CHECK(*e.spec->snr_db <= 20.0);
  }

  CorpusManifest half = BuildReplicaManifest(clean, one, 12, pool, 3, long_enough);
  CHECK(half.entries.size() == 24 + 12);
  CHECK(FormatManifest(BuildReplicaManifest(clean, one, 12, pool, 3, long_enough)) ==
        FormatManifest(half));

  CorpusManifest full = BuildReplicaManifest(clean, ReplicaRecipe::Default(), 1000, pool, 4,
                                             long_enough);
  CHECK(full.entries.size() == 24 * 6);

  // Speaker s0 keeps only 5 long utterances and no replicas: dropped.
  CorpusManifest few = ToyManifest(2, 8);
  FrameCounter lengths = [](const ManifestEntry &e) {
    int u = std::stoi(e.utt_id.substr(e.utt_id.find('-') + 1));
    if (e.speaker_id == "s0") return size_t(u < 5 ? 700 : 100);
    return size_t(u == 0 ? 499 : 800);
  };
  CorpusManifest f = BuildReplicaManifest(few, one, 0, pool, 5, lengths);
  std::set<std::string> spk;
  for (const auto &e : f.entries) spk.insert(e.speaker_id);
  CHECK(spk == std::set<std::string>{"s1"});
  CHECK(f.entries.size() == 7);  // the 499-frame utterance is excluded

  CHECK_THROWS_AS(BuildReplicaManifest(clean, ReplicaRecipe{}, 10, pool, 1, long_enough),
                  DataError);
}

TEST_CASE("synthetic corpus") {
  std::string dir = TempDir("corpus");
  CorpusManifest m = SynthCorpus(20, 10, 2024, dir);
  CHECK(m.entries.size() == 200);
  size_t files = 0;
  for (auto &p : fs::directory_iterator(fs::path(dir) / "wav")) files += p.is_regular_file();
  CHECK(files == 200);
  CorpusManifest again = ReadManifest(dir + "/manifest.txt");
  again.CheckPaths();
  CHECK(again.Speakers().size() == 20);

  SynthCorpusData a = SynthCorpusInMemory(3, 2, 8), b = SynthCorpusInMemory(3, 2, 8);
  for (size_t i = 0; i < a.audio.size(); ++i) {
    CHECK(a.audio[i].samples == b.audio[i].samples);
    CHECK(a.audio[i].Duration() >= 3.0);
    CHECK(a.audio[i].Duration() <= 8.0);
    CHECK(a.audio[i].sample_rate == 8000);
  }
}

TEST_CASE("synthetic speakers: centroid varies less within than across speakers") {
  SynthCorpusData d = SynthCorpusInMemory(10, 6, 31);
  StftConfig cfg;
  std::map<std::string, std::vector<double>> cent;
  for (size_t i = 0; i < d.audio.size(); ++i) {
    ComplexSpectrogram s = Stft(d.audio[i], cfg);
    Eigen::ArrayXd power = s.frames.array().abs2().colwise().sum();
    Eigen::ArrayXd freqs = Eigen::ArrayXd::LinSpaced(129, 0, 4000);
    cent[d.manifest.entries[i].speaker_id].push_back((power * freqs).sum() / power.sum());
  }
  double within = 0, grand = 0;
  std::vector<double> means;
  for (auto &[spk, c] : cent) {
    double m = 0;
    for (double v : c) m += v / c.size();
    for (double v : c) within += (v - m) * (v - m) / c.size();
    means.push_back(m);
    grand += m / cent.size();
  }
  within /= cent.size();
  double across = 0;
  for (double m : means) across += (m - grand) * (m - grand) / means.size();
  CHECK(within < across);
}

TEST_CASE("noise bank and room set directories") {
  Banks banks = MakeBanks(16);
  std::string nd = TempDir("noise"), rd = TempDir("rooms");
  SaveNoiseBank(banks.noises, nd);
  SaveRoomSet(banks.rooms, rd);
  NoiseBank n = LoadNoiseBank(nd);
  RoomSet r = LoadRoomSet(rd);
  CHECK(n.noises.size() == banks.noises.noises.size());
  CHECK(n.Ids(Split::kDev) == banks.noises.Ids(Split::kDev));
  CHECK(r.rooms.size() == banks.rooms.rooms.size());
  for (const auto &[id, room] : r.rooms) {
    CHECK(room.rirs.size() == 3);
    CHECK(room.split == banks.rooms.Get(id).split);
  }
  std::set<std::string> train, dev;
  for (auto &id : n.Ids(Split::kTrain)) train.insert(id);
  for (auto &id : n.Ids(Split::kDev)) CHECK(train.count(id) == 0);
}
