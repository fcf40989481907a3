// svkit/src/augment.cc

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

#include "svkit/augment.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "svkit/filter.h"
#include "svkit/io-util.h"
#include "svkit/vad.h"

namespace svkit {

namespace fs = std::filesystem;

std::string SplitName(Split s) { return s == Split::kTrain ? "train" : "dev"; }

Split ParseSplit(const std::string &s) {
  if (s == "train") return Split::kTrain;
  if (s == "dev") return Split::kDev;
  throw DataError("unknown split '" + s + "' (expected train|dev)");
}

void RoomModel::Validate() const {
  if (rirs.size() < 2)
    throw DataError("room " + room_id + " needs at least two impulse responses");
  for (const auto &h : rirs)
    if (h.empty()) throw DataError("room " + room_id + " has an empty RIR");
}

const RoomModel &RoomSet::Get(const std::string &id) const {
  auto it = rooms.find(id);
  if (it == rooms.end()) throw DataError("unknown room id: " + id);
  return it->second;
}

std::vector<std::string> RoomSet::Ids(Split split) const {
  std::vector<std::string> ids;
  for (const auto &[id, room] : rooms)
    if (room.split == split) ids.push_back(id);
  return ids;
}

void NoiseBank::Add(const std::string &id, Waveform w, Split split) {
  if (id.find('+') != std::string::npos || id.find(';') != std::string::npos)
    throw DataError("noise id may not contain '+' or ';': " + id);
  noises[id] = std::move(w);
  partition[id] = split;
}

const Waveform &NoiseBank::Get(const std::string &id) const {
  auto it = noises.find(id);
  if (it == noises.end()) throw DataError("unknown noise id: " + id);
  return it->second;
}

std::vector<std::string> NoiseBank::Ids(Split split) const {
  std::vector<std::string> ids;
  for (const auto &[id, s] : partition)
    if (s == split) ids.push_back(id);
  return ids;
}

void AugmentSpec::Validate() const {
  if (noise_id && !snr_db)
    throw DataError("augment spec sets a noise without an SNR");
  if (room_id) {
    if (!rir_index_speech || !rir_index_noise)
      throw DataError("augment spec sets room " + *room_id +
                      " without both RIR indices");
    if (*rir_index_speech == *rir_index_noise)
      throw DataError("augment spec uses the same RIR for speech and noise");
  }
}

namespace {

std::string FormatDouble(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

}  // namespace

std::string AugmentSpec::ToString() const {
  std::ostringstream os;
  if (snr_db) os << "snr=" << FormatDouble(*snr_db) << ';';
  if (noise_id) os << "noise=" << *noise_id << ';';
  if (room_id) os << "room=" << *room_id << ';';
  if (rir_index_speech && rir_index_noise)
    os << "rir=" << *rir_index_speech << ',' << *rir_index_noise << ';';
  os << "tel=" << (apply_telephone ? 1 : 0) << ";seed=" << seed;
  return os.str();
}

AugmentSpec AugmentSpec::Parse(const std::string &text) {
  AugmentSpec spec;
  std::stringstream ss(text);
  std::string field;
  while (std::getline(ss, field, ';')) {
    if (field.empty()) continue;
    auto eq = field.find('=');
    if (eq == std::string::npos)
      throw DataError("malformed augment spec field '" + field + "'");
    std::string key = field.substr(0, eq), val = field.substr(eq + 1);
    try {
      if (key == "snr") {
        double v;
        auto r = std::from_chars(val.data(), val.data() + val.size(), v);
        if (r.ec != std::errc() || r.ptr != val.data() + val.size())
          throw DataError("bad snr");
        spec.snr_db = v;
      } else if (key == "noise") {
        spec.noise_id = val;
      } else if (key == "room") {
        spec.room_id = val;
      } else if (key == "rir") {
        auto comma = val.find(',');
        if (comma == std::string::npos) throw DataError("bad rir");
        spec.rir_index_speech = std::stoi(val.substr(0, comma));
        spec.rir_index_noise = std::stoi(val.substr(comma + 1));
      } else if (key == "tel") {
        if (val != "0" && val != "1") throw DataError("bad tel");
        spec.apply_telephone = val == "1";
      } else if (key == "seed") {
        spec.seed = std::stoull(val);
      } else {
        throw DataError("unknown key");
      }
    } catch (const std::logic_error &) {
      throw DataError("malformed augment spec field '" + field + "'");
    } catch (const DataError &) {
      throw DataError("malformed augment spec field '" + field + "'");
    }
  }
  spec.Validate();
  return spec;
}

Waveform FitNoiseLength(const Waveform &noise, size_t length, uint64_t seed) {
  if (noise.empty()) throw DataError("empty noise signal");
  Rng rng(MixSeed(seed, 0x6e6f697365ULL));
  const size_t off = static_cast<size_t>(UniformInt(rng, 0, noise.size() - 1));
  std::vector<double> out(length);
  for (size_t i = 0; i < length; ++i)
    out[i] = noise.samples[(off + i) % noise.size()];
  return Waveform(std::move(out), noise.sample_rate);
}

double MaskedAWeightedEnergy(const Waveform &w, const FrameMask &mask) {
  auto ranges = ActiveSampleRanges(mask, w.size());
  if (ranges.empty()) throw DataError("VAD mask has no active frames");
  Waveform a = AWeight(w);
  double acc = 0.0;
  size_t count = 0;
  for (auto [b, e] : ranges) {
    for (size_t i = b; i < e; ++i) acc += a.samples[i] * a.samples[i];
    count += e - b;
  }
  return acc / count;
}

namespace {

double GainFromEnergies(double e_speech, double e_noise, double snr_db) {
  if (!(e_noise > 0.0)) throw DataError("noise has zero energy on active frames");
  const double snr = std::min(snr_db, kMaxSnrDb);
  return std::sqrt(e_speech / (e_noise * std::pow(10.0, snr / 10.0)));
}

void CheckRates(const Waveform &a, const Waveform &b) {
  if (a.sample_rate != b.sample_rate)
    throw DataError("sample rate mismatch: " + std::to_string(a.sample_rate) +
                    " vs " + std::to_string(b.sample_rate));
}

Waveform Fitted(const Waveform &noise, size_t len, uint64_t seed) {
  return noise.size() == len ? noise : FitNoiseLength(noise, len, seed);
}

}  // namespace

double SnrGain(const Waveform &speech, const Waveform &noise,
               const FrameMask &mask, double snr_db, uint64_t seed) {
  CheckRates(speech, noise);
  Waveform n = Fitted(noise, speech.size(), seed);
  return GainFromEnergies(MaskedAWeightedEnergy(speech, mask),
                          MaskedAWeightedEnergy(n, mask), snr_db);
}

namespace {

Waveform SumScaled(const Waveform &speech, const Waveform &noise, double g,
                   double *scale_out) {
  Waveform out = speech;
  for (size_t i = 0; i < out.size(); ++i) out.samples[i] += g * noise.samples[i];
  double peak = out.Peak(), scale = 1.0;
  if (peak > 1.0) {
    scale = 1.0 / peak;
    for (double &v : out.samples) v *= scale;
  }
  if (scale_out) *scale_out = scale;
  return out;
}

}  // namespace

Waveform MixAtSnr(const Waveform &speech, const Waveform &noise,
                  const FrameMask &mask, double snr_db, uint64_t seed) {
  CheckRates(speech, noise);
  Waveform n = Fitted(noise, speech.size(), seed);
  double g = GainFromEnergies(MaskedAWeightedEnergy(speech, mask),
                              MaskedAWeightedEnergy(n, mask), snr_db);
  return SumScaled(speech, n, g, nullptr);
}

namespace {

// Sum of the '+'-joined noises, each fitted with its own offset.
Waveform ComposeNoise(const std::string &ids, const NoiseBank &bank, size_t len,
                      uint64_t seed) {
  std::vector<double> acc(len, 0.0);
  int rate = 0;
  std::stringstream ss(ids);
  std::string id;
  uint64_t k = 0;
  while (std::getline(ss, id, '+')) {
    const Waveform &src = bank.Get(id);
    if (rate != 0 && src.sample_rate != rate)
      throw DataError("noise " + id + " has a different sample rate");
    rate = src.sample_rate;
    Waveform fit = FitNoiseLength(src, len, MixSeed(seed, k++));
    for (size_t i = 0; i < len; ++i) acc[i] += fit.samples[i];
  }
  if (rate == 0) throw DataError("empty noise id list");
  return Waveform(std::move(acc), rate);
}

}  // namespace

Waveform AugmentUtterance(const Waveform &speech, const AugmentSpec &spec,
                          const NoiseBank &noises, const RoomSet &rooms,
                          AugmentTrace *trace) {
  spec.Validate();
  speech.Validate();
  const RoomModel *room = nullptr;
  if (spec.room_id) {
    room = &rooms.Get(*spec.room_id);
    room->Validate();
    const int n = static_cast<int>(room->rirs.size());
    for (int idx : {*spec.rir_index_speech, *spec.rir_index_noise})
      if (idx < 0 || idx >= n)
        throw DataError("RIR index " + std::to_string(idx) + " out of range for room " +
                        room->room_id);
    if (room->sample_rate != speech.sample_rate)
      throw DataError("room " + room->room_id + " sample rate differs from speech");
  }
  Waveform reference =
      room ? FirConvolve(speech, room->rirs[*spec.rir_index_speech]) : speech;
  Waveform out = reference;
  AugmentTrace local;
  if (spec.noise_id) {
    Waveform noise = ComposeNoise(*spec.noise_id, noises, speech.size(), spec.seed);
    CheckRates(speech, noise);
    if (room) noise = FirConvolve(noise, room->rirs[*spec.rir_index_noise]);
    local.mask = EnergyVad(speech);
    local.gain = GainFromEnergies(MaskedAWeightedEnergy(reference, local.mask),
                                  MaskedAWeightedEnergy(noise, local.mask),
                                  *spec.snr_db);
    out = SumScaled(reference, noise, local.gain, &local.output_scale);
    local.scaled_noise = noise;
    for (double &v : local.scaled_noise.samples) v *= local.gain;
  }
  if (spec.apply_telephone) out = TelephoneFilter(out);
  if (trace) {
    local.speech_reference = std::move(reference);
    *trace = std::move(local);
  }
  return out;
}

namespace {

struct ListingLine {
  std::string id, file;
  Split split;
};

std::vector<ListingLine> ReadListing(const std::string &dir) {
  const std::string path = (fs::path(dir) / "listing.txt").string();
  std::ifstream is(path);
  if (!is) throw DataError("cannot open bank listing: " + path);
  std::vector<ListingLine> lines;
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    std::stringstream ss(line);
    std::string id, file, split;
    if (!std::getline(ss, id, '\t') || !std::getline(ss, file, '\t') ||
        !std::getline(ss, split, '\t'))
      throw DataError(path + ":" + std::to_string(lineno) +
                      ": expected <id>\\t<file>\\t<split>");
    lines.push_back({id, file, ParseSplit(split)});
  }
  return lines;
}

}  // namespace

NoiseBank LoadNoiseBank(const std::string &dir) {
  NoiseBank bank;
  for (const auto &l : ReadListing(dir)) {
    if (bank.noises.count(l.id)) throw DataError("duplicate noise id " + l.id + " in " + dir);
    bank.Add(l.id, ReadWav((fs::path(dir) / l.file).string()), l.split);
  }
  return bank;
}

void SaveNoiseBank(const NoiseBank &bank, const std::string &dir) {
  fs::create_directories(dir);
  std::ostringstream listing;
  for (const auto &[id, w] : bank.noises) {
    std::string file = id + ".wav";
    WriteWav(w, (fs::path(dir) / file).string());
    listing << id << '\t' << file << '\t' << SplitName(bank.partition.at(id)) << '\n';
  }
  WriteFileAtomic((fs::path(dir) / "listing.txt").string(), listing.str());
}

RoomSet LoadRoomSet(const std::string &dir) {
  RoomSet set;
  for (const auto &l : ReadListing(dir)) {
    Waveform w = ReadWav((fs::path(dir) / l.file).string());
    auto [it, fresh] = set.rooms.try_emplace(l.id);
    RoomModel &room = it->second;
    if (fresh) {
      room.room_id = l.id;
      room.sample_rate = w.sample_rate;
      room.split = l.split;
    } else if (room.split != l.split || room.sample_rate != w.sample_rate) {
      throw DataError("room " + l.id + " has inconsistent split or rate in " + dir);
    }
    room.rirs.push_back(std::move(w.samples));
  }
  for (const auto &[id, room] : set.rooms) room.Validate();
  return set;
}

void SaveRoomSet(const RoomSet &rooms, const std::string &dir) {
  fs::create_directories(dir);
  std::ostringstream listing;
  for (const auto &[id, room] : rooms.rooms) {
    for (size_t i = 0; i < room.rirs.size(); ++i) {
      std::string file = id + "-" + std::to_string(i) + ".wav";
      // RIRs are stored at unit peak; WAV cannot hold values above 1.
      WriteWav(Waveform(room.rirs[i], room.sample_rate), (fs::path(dir) / file).string());
      listing << id << '\t' << file << '\t' << SplitName(room.split) << '\n';
    }
  }
  WriteFileAtomic((fs::path(dir) / "listing.txt").string(), listing.str());
}

}  // namespace svkit
