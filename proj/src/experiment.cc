// svkit/src/experiment.cc

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

#include "svkit/experiment.h"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <map>
#include <optional>
#include <sstream>

#include "svkit/augment.h"
#include "svkit/enhancer.h"
#include "svkit/gmm.h"
#include "svkit/io-util.h"
#include "svkit/ivector.h"
#include "svkit/lda.h"
#include "svkit/manifest.h"
#include "svkit/model-io.h"
#include "svkit/parallel.h"
#include "svkit/plda.h"
#include "svkit/stft.h"
#include "svkit/synth.h"
#include "svkit/trials.h"
#include "svkit/vad.h"
#include "svkit/wave.h"
#include "svkit/xvector.h"

namespace svkit {

namespace fs = std::filesystem;

void StageReport::Add(const std::string &key, const std::string &value) {
  summary.emplace_back(key, value);
}

void StageReport::Add(const std::string &key, double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", value);
  summary.emplace_back(key, buf);
}

std::string StageReport::Line() const {
  std::string out = "stage=" + stage;
  if (reused) out += " reused=1";
  for (const auto &[k, v] : summary) out += " " + k + "=" + v;
  return out;
}

namespace {

struct Banks {
  NoiseBank noises;
  RoomSet rooms;
};

Waveform LoadAudio(const CorpusManifest &m, const ManifestEntry &e, const Banks &banks) {
  Waveform w = ReadWav(m.Resolve(e));
  if (e.spec) w = AugmentUtterance(w, *e.spec, banks.noises, banks.rooms);
  return w;
}

/// Rewrites entry paths so they resolve from `dir`.
CorpusManifest Rebase(const CorpusManifest &m, const std::string &dir) {
  CorpusManifest out = m;
  fs::path base = fs::absolute(dir).lexically_normal();
  for (auto &e : out.entries)
    e.path = fs::absolute(m.Resolve(e)).lexically_normal().lexically_relative(base).string();
  out.base_dir = dir;
  return out;
}

CorpusManifest Subset(const CorpusManifest &m, const std::vector<size_t> &rows) {
  CorpusManifest out;
  out.base_dir = m.base_dir;
  for (size_t i : rows) out.entries.push_back(m.entries[i]);
  return out;
}

/// Activity is detected on the signal as given; the enhancer only changes
/// the features computed over those frames.
class Frontend {
 public:
  Frontend(EmbeddingKind kind, const AeModel *enhancer) : kind_(kind), enhancer_(enhancer) {}

  FeatureMatrix operator()(const Waveform &w) const {
    FrameMask mask = EnergyVad(w);
    if (!enhancer_) return EmbeddingFeatures(w, kind_, mask);
    return EmbeddingFeatures(EnhanceUtterance(*enhancer_, w), kind_, mask);
  }

 private:
  EmbeddingKind kind_;
  const AeModel *enhancer_;
};

std::vector<FeatureMatrix> ComputeFeatures(const CorpusManifest &m, const Banks &banks,
                                           const Frontend &frontend, int workers) {
  std::vector<FeatureMatrix> out(m.entries.size());
  ParallelFor(m.entries.size(), workers, [&](size_t i) {
    out[i] = frontend(LoadAudio(m, m.entries[i], banks));
    if (out[i].NumFrames() == 0)
      throw DataError("no active frames in " + m.entries[i].utt_id);
  });
  return out;
}

ConditionMix Mix(std::initializer_list<Condition> conds, double lo, double hi) {
  ConditionMix mix;
  for (Condition c : conds) mix.weights.emplace_back(c, 1.0);
  mix.snr = {lo, hi};
  return mix;
}

std::string Elapsed(std::chrono::steady_clock::time_point t0) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.1f",
                std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
  return buf;
}

const char *kTestSuffix = "-cor";

}  // namespace

Experiment::Experiment(ExperimentConfig cfg, std::string workdir, int workers, std::ostream *log)
    : cfg_(std::move(cfg)), root_(std::move(workdir)), workers_(std::max(1, workers)), log_(log) {
  cfg_.Validate();
  cfg_.CheckPaths();
  if (root_.empty()) throw UsageError("a work directory is required");
}

std::string Experiment::Path(const std::string &rel) const { return (fs::path(root_) / rel).string(); }

void Experiment::Log(const std::string &msg) const {
  if (log_) *log_ << "[svkit] " << msg << std::endl;
}

std::string Experiment::TrainManifestPath() const {
  return cfg_.train_manifest.empty() ? Path("corpora/train/manifest.txt") : cfg_.train_manifest;
}

std::string Experiment::EvalManifestPath() const {
  return cfg_.eval_manifest.empty() ? Path("corpora/eval/manifest.txt") : cfg_.eval_manifest;
}

std::string Experiment::NoiseBankDir() const {
  return cfg_.noise_bank.empty() ? Path("banks/noise") : cfg_.noise_bank;
}

std::string Experiment::RoomBankDir() const {
  return cfg_.room_bank.empty() ? Path("banks/rooms") : cfg_.room_bank;
}

std::string Experiment::ListPath(const std::string &name) const { return Path("lists/" + name + ".txt"); }

std::string Experiment::PldaListName() const { return "plda-" + PldaRegimeName(cfg_.regime); }

std::string Experiment::EnhancerPath() const { return Path("models/enhancer.svkm"); }

std::string Experiment::ExtractorTag() const {
  return EmbeddingKindName(cfg_.embedding) +
         (cfg_.placement == EnhancePlacement::kTrainExtract ? "-enh" : "-raw");
}

std::string Experiment::FrontendTag() const {
  return EmbeddingKindName(cfg_.embedding) + "-" + EnhancePlacementName(cfg_.placement);
}

std::string Experiment::ExtractorDir() const { return Path("models/" + ExtractorTag()); }
std::string Experiment::EmbeddingDir() const { return Path("embeddings/" + FrontendTag()); }

std::string Experiment::BackendDir() const {
  return Path("models/" + FrontendTag() + "/" + PldaRegimeName(cfg_.regime));
}

std::string Experiment::ScoreDir() const {
  return Path("scores/" + FrontendTag() + "/" + PldaRegimeName(cfg_.regime));
}

std::string Experiment::ReportDir() const {
  return Path("report/" + FrontendTag() + "/" + PldaRegimeName(cfg_.regime));
}

void Experiment::WriteResolvedConfig() const { WriteFileAtomic(Path("config.ini"), cfg_.ToText()); }

StageReport Experiment::SynthCorpora() {
  auto t0 = std::chrono::steady_clock::now();
  StageReport r{"synth-corpus", {}, {}, false};
  uint64_t seed = cfg_.Seed();
  if (cfg_.train_manifest.empty()) {
    Log("synthesizing training corpus");
    auto m = SynthCorpus(cfg_.train_speakers, cfg_.train_utterances,
                         MixSeed(seed, HashString("train-corpus")), Path("corpora/train"), "trn");
    r.Add("train_utterances", std::to_string(m.entries.size()));
    r.artifacts.push_back(TrainManifestPath());
  }
  if (cfg_.eval_manifest.empty()) {
    Log("synthesizing evaluation corpus");
    auto m = SynthCorpus(cfg_.eval_speakers, cfg_.eval_utterances,
                         MixSeed(seed, HashString("eval-corpus")), Path("corpora/eval"), "evl");
    r.Add("eval_utterances", std::to_string(m.entries.size()));
    r.artifacts.push_back(EvalManifestPath());
  }
  SynthBankOptions bank_opts;
  if (cfg_.noise_bank.empty()) {
    NoiseBank bank = SynthNoiseBank(bank_opts, MixSeed(seed, HashString("noise-bank")));
    SaveNoiseBank(bank, NoiseBankDir());
    r.Add("noises", std::to_string(bank.noises.size()));
    r.artifacts.push_back(NoiseBankDir());
  }
  if (cfg_.room_bank.empty()) {
    RoomSet rooms = SynthRooms(bank_opts, MixSeed(seed, HashString("room-bank")));
    SaveRoomSet(rooms, RoomBankDir());
    r.Add("rooms", std::to_string(rooms.rooms.size()));
    r.artifacts.push_back(RoomBankDir());
  }
  r.Add("seconds", Elapsed(t0));
  return r;
}

StageReport Experiment::Augment() {
  auto t0 = std::chrono::steady_clock::now();
  StageReport r{"augment", {}, {}, false};
  uint64_t seed = cfg_.Seed();
  CorpusManifest train = ReadManifest(TrainManifestPath());
  CorpusManifest eval = ReadManifest(EvalManifestPath());
  train.Validate();
  eval.Validate();
  train.CheckPaths();
  eval.CheckPaths();
  NoiseBank noises = LoadNoiseBank(NoiseBankDir());
  RoomSet rooms = LoadRoomSet(RoomBankDir());
  AugmentPool train_pool = AugmentPool::FromBanks(noises, rooms, Split::kTrain);
  AugmentPool test_pool = AugmentPool::FromBanks(noises, rooms, Split::kDev);
  std::string lists = Path("lists");
  auto write = [&](const CorpusManifest &m, const std::string &name) {
    WriteManifest(Rebase(m, lists), ListPath(name));
    r.artifacts.push_back(ListPath(name));
  };

  // Enhancer pairs: every selected utterance once clean and once corrupted
  // by noise, reverberation or both.
  {
    std::vector<size_t> rows(train.entries.size());
    for (size_t i = 0; i < rows.size(); ++i) rows[i] = i;
    size_t cap = cfg_.enh_max_utterances;
    if (cap > 0 && cap < rows.size()) {
      Rng rng(MixSeed(seed, HashString("enhancer-subset")));
      std::shuffle(rows.begin(), rows.end(), rng);
      rows.resize(cap);
      std::sort(rows.begin(), rows.end());
    }
    CorpusManifest m = BuildMulticonditionManifest(
        Subset(train, rows), 1.0,
        Mix({Condition::kNoise, Condition::kReverb, Condition::kNoiseReverb}, cfg_.enh_snr_lo,
            cfg_.enh_snr_hi),
        train_pool, MixSeed(seed, HashString("enhancer-list")));
    if (cfg_.enh_telephone)
      for (auto &e : m.entries)
        if (e.spec) e.spec->apply_telephone = true;
    write(m, "enhancer");
    r.Add("enhancer_entries", std::to_string(m.entries.size()));
  }

  // PLDA regimes share one corruption seed; the corrupted portions have
  // equal size.
  uint64_t mc_seed = MixSeed(seed, HashString("plda-multicondition"));
  write(train, "plda-clean");
  write(BuildMulticonditionManifest(train, cfg_.mc_fraction,
                                    Mix({Condition::kNoise}, cfg_.mc_snr_lo, cfg_.mc_snr_hi),
                                    train_pool, mc_seed),
        "plda-N");
  write(BuildMulticonditionManifest(train, cfg_.mc_fraction,
                                    Mix({Condition::kReverb}, cfg_.mc_snr_lo, cfg_.mc_snr_hi),
                                    train_pool, mc_seed),
        "plda-RR");
  CorpusManifest rrn = BuildMulticonditionManifest(
      train, cfg_.mc_fraction,
      Mix({Condition::kNoise, Condition::kReverb}, cfg_.mc_snr_lo, cfg_.mc_snr_hi), train_pool,
      mc_seed);
  write(rrn, "plda-RR+N");
  r.Add("plda_entries_multicondition", std::to_string(rrn.entries.size()));

  if (cfg_.embedding == EmbeddingKind::kXvector) {
    ReplicaRecipe recipe = ReplicaRecipe::Default();
    recipe.min_frames = static_cast<size_t>(cfg_.xv_min_frames);
    size_t cap = cfg_.xv_replica_cap > 0 ? static_cast<size_t>(cfg_.xv_replica_cap) : SIZE_MAX;
    CorpusManifest m = BuildReplicaManifest(train, recipe, cap, train_pool,
                                            MixSeed(seed, HashString("xvector-replicas")),
                                            WavFrameCounter(train));
    write(m, "xvector-train");
    r.Add("xvector_entries", std::to_string(m.entries.size()));
  }

  // Trials: the first enroll_per_speaker utterances (by id) of each
  // evaluation speaker enroll single-session models, the rest are tests.
  CorpusManifest sorted = eval;
  sorted.SortById();
  std::map<std::string, int> seen;
  std::vector<const ManifestEntry *> enroll, test;
  for (const auto &e : sorted.entries) {
    if (seen[e.speaker_id]++ < cfg_.enroll_per_speaker)
      enroll.push_back(&e);
    else
      test.push_back(&e);
  }
  if (enroll.empty() || test.empty())
    throw DataError(EvalManifestPath() + ": trials need enrollment and test utterances");

  CorpusManifest corrupted;
  corrupted.base_dir = eval.base_dir;
  Condition cond = cfg_.test_noise ? (cfg_.test_reverb ? Condition::kNoiseReverb : Condition::kNoise)
                                   : (cfg_.test_reverb ? Condition::kReverb : Condition::kClean);
  Rng rng(MixSeed(seed, HashString("test-corruption")));
  for (const auto *e : test) {
    ManifestEntry c = *e;
    c.utt_id += kTestSuffix;
    c.condition = cond;
    if (cond != Condition::kClean)
      c.spec = DrawSpec(cond, test_pool, {cfg_.test_snr_db, cfg_.test_snr_db}, rng);
    corrupted.entries.push_back(std::move(c));
  }
  write(eval, "eval-clean");
  write(corrupted, "eval-corrupted");

  TrialList clean_trials, corrupted_trials;
  for (const auto *en : enroll)
    for (const auto *te : test) {
      TrialKey key = en->speaker_id == te->speaker_id ? TrialKey::kTarget : TrialKey::kNontarget;
      clean_trials.trials.push_back({en->utt_id, te->utt_id, key});
      corrupted_trials.trials.push_back({en->utt_id, te->utt_id + kTestSuffix, key});
    }
  WriteTrials(clean_trials, ListPath("trials-clean"));
  WriteTrials(corrupted_trials, ListPath("trials-corrupted"));
  r.artifacts.push_back(ListPath("trials-clean"));
  r.artifacts.push_back(ListPath("trials-corrupted"));
  r.Add("trials", std::to_string(clean_trials.trials.size()));
  r.Add("seconds", Elapsed(t0));
  return r;
}

StageReport Experiment::TrainEnhancer() {
  auto t0 = std::chrono::steady_clock::now();
  StageReport r{"train-enhancer", {}, {}, false};
  uint64_t seed = cfg_.Seed();
  CorpusManifest list = ReadManifest(ListPath("enhancer"));
  Banks banks{LoadNoiseBank(NoiseBankDir()), LoadRoomSet(RoomBankDir())};
  AeConfig ae;
  ae.context = cfg_.enh_context;
  ae.hidden = cfg_.enh_hidden;
  ae.Validate();

  std::vector<const ManifestEntry *> used;
  for (const auto &e : list.entries)
    if (e.spec || cfg_.enh_include_clean) used.push_back(&e);
  if (used.empty()) throw DataError(ListPath("enhancer") + ": no training pairs");
  std::vector<AePair> pairs(used.size());
  ParallelFor(used.size(), workers_, [&](size_t i) {
    const ManifestEntry &e = *used[i];
    Waveform clean = ReadWav(list.Resolve(e));
    Waveform noisy = e.spec ? AugmentUtterance(clean, *e.spec, banks.noises, banks.rooms) : clean;
    pairs[i] = MakeTrainingPair(noisy, clean, ae);
  });
  Log("training enhancer on " + std::to_string(pairs.size()) + " pairs");

  AeTrainOptions opts;
  opts.learning_rate = cfg_.enh_learning_rate;
  opts.momentum = cfg_.enh_momentum;
  opts.batch_size = cfg_.enh_batch;
  opts.epochs = cfg_.enh_epochs;
  opts.dev_fraction = cfg_.enh_dev_fraction;
  opts.seed = MixSeed(seed, HashString("enhancer-train"));
  AeTrainResult res = TrainAe(InitAeModel(ae, MixSeed(seed, HashString("enhancer-init"))), pairs, opts);
  SaveAe(res.model, EnhancerPath());
  r.artifacts.push_back(EnhancerPath());
  r.Add("pairs", std::to_string(pairs.size()));
  r.Add("dev_loss_initial", res.dev_loss.front());
  r.Add("dev_loss_final", res.dev_loss.back());
  r.Add("seconds", Elapsed(t0));
  return r;
}

namespace {

std::optional<AeModel> LoadEnhancerIf(bool wanted, const std::string &path) {
  if (!wanted) return std::nullopt;
  return LoadAe(path);
}

}  // namespace

StageReport Experiment::TrainUbm() {
  auto t0 = std::chrono::steady_clock::now();
  StageReport r{"train-ubm", {}, {}, false};
  if (cfg_.embedding != EmbeddingKind::kIvector)
    throw UsageError("train-ubm needs experiment.embedding = ivector");
  CorpusManifest list = ReadManifest(ListPath(cfg_.extractor_augmented ? "plda-RR+N" : "plda-clean"));
  Banks banks{LoadNoiseBank(NoiseBankDir()), LoadRoomSet(RoomBankDir())};
  auto enh = LoadEnhancerIf(cfg_.placement == EnhancePlacement::kTrainExtract, EnhancerPath());
  auto features = ComputeFeatures(list, banks, Frontend(EmbeddingKind::kIvector, enh ? &*enh : nullptr),
                                  workers_);
  UbmTrainOptions opts;
  opts.num_components = cfg_.ubm_components;
  opts.iters = cfg_.ubm_iters;
  opts.kmeans_iters = cfg_.ubm_kmeans_iters;
  opts.variance_floor = cfg_.ubm_variance_floor;
  opts.seed = MixSeed(cfg_.Seed(), HashString("ubm"));
  Log("training UBM on " + std::to_string(features.size()) + " utterances");
  UbmTrainResult res = svkit::TrainUbm(features, opts, workers_);
  std::string path = ExtractorDir() + "/ubm.svkm";
  SaveUbm(res.ubm, path);
  r.artifacts.push_back(path);
  size_t frames = 0;
  for (const auto &f : features) frames += f.NumFrames();
  r.Add("frames", std::to_string(frames));
  r.Add("log_likelihood", res.log_likelihood.back());
  r.Add("seconds", Elapsed(t0));
  return r;
}

StageReport Experiment::TrainIvector() {
  auto t0 = std::chrono::steady_clock::now();
  StageReport r{"train-ivector", {}, {}, false};
  if (cfg_.embedding != EmbeddingKind::kIvector)
    throw UsageError("train-ivector needs experiment.embedding = ivector");
  GmmUbm ubm = LoadUbm(ExtractorDir() + "/ubm.svkm");
  CorpusManifest list = ReadManifest(ListPath(cfg_.extractor_augmented ? "plda-RR+N" : "plda-clean"));
  Banks banks{LoadNoiseBank(NoiseBankDir()), LoadRoomSet(RoomBankDir())};
  auto enh = LoadEnhancerIf(cfg_.placement == EnhancePlacement::kTrainExtract, EnhancerPath());
  Frontend frontend(EmbeddingKind::kIvector, enh ? &*enh : nullptr);
  std::vector<SuffStats> stats(list.entries.size());
  ParallelFor(stats.size(), workers_, [&](size_t i) {
    stats[i] = AccumulateStats(ubm, frontend(LoadAudio(list, list.entries[i], banks)).data);
  });
  TvTrainOptions opts;
  opts.rank = cfg_.ivector_rank;
  opts.iters = cfg_.ivector_iters;
  opts.seed = MixSeed(cfg_.Seed(), HashString("total-variability"));
  Log("training total-variability model on " + std::to_string(stats.size()) + " utterances");
  TvTrainResult res = TrainTv(stats, ubm, opts, workers_);
  std::string path = ExtractorDir() + "/ivector.svkm";
  SaveIvectorExtractor(res.extractor, path);
  r.artifacts.push_back(path);
  r.Add("utterances", std::to_string(stats.size()));
  r.Add("objective", res.objective.back());
  r.Add("seconds", Elapsed(t0));
  return r;
}

StageReport Experiment::TrainXvector() {
  auto t0 = std::chrono::steady_clock::now();
  StageReport r{"train-xvector", {}, {}, false};
  if (cfg_.embedding != EmbeddingKind::kXvector)
    throw UsageError("train-xvector needs experiment.embedding = xvector");
  CorpusManifest list = ReadManifest(ListPath("xvector-train"));
  Banks banks{LoadNoiseBank(NoiseBankDir()), LoadRoomSet(RoomBankDir())};
  auto enh = LoadEnhancerIf(cfg_.placement == EnhancePlacement::kTrainExtract, EnhancerPath());
  Frontend frontend(EmbeddingKind::kXvector, enh ? &*enh : nullptr);
  size_t n = list.entries.size();
  std::vector<Matrix> features(n);
  std::vector<Eigen::Index> lengths(n);
  std::vector<std::string> speakers(n);
  ParallelFor(n, workers_, [&](size_t i) {
    Waveform w = LoadAudio(list, list.entries[i], banks);
    lengths[i] = NumFrames(w.size(), kFrameLength, kFrameShift);
    features[i] = frontend(w).data;
    speakers[i] = list.entries[i].speaker_id;
  });
  XvectorConfig xc;
  xc.frame_sizes = cfg_.xv_frame_sizes;
  xc.segment_sizes = cfg_.xv_segment_sizes;
  XvectorTrainOptions opts;
  opts.epochs = cfg_.xv_epochs;
  opts.learning_rate = cfg_.xv_learning_rate;
  opts.min_chunk = cfg_.xv_min_chunk;
  opts.max_chunk = cfg_.xv_max_chunk;
  opts.min_frames = cfg_.xv_min_frames;
  opts.seed = MixSeed(cfg_.Seed(), HashString("xvector"));
  Log("training x-vector network on " + std::to_string(n) + " utterances");
  XvectorTrainResult res = svkit::TrainXvector(xc, features, speakers, opts, lengths);
  std::string path = ExtractorDir() + "/xvector.svkm";
  SaveXvector(res.model, path);
  r.artifacts.push_back(path);
  r.Add("utterances", std::to_string(res.utterances_used));
  r.Add("speakers", std::to_string(res.speakers.size()));
  r.Add("loss", res.loss.back());
  r.Add("accuracy", res.accuracy.back());
  r.Add("seconds", Elapsed(t0));
  return r;
}

StageReport Experiment::Extract() {
  auto t0 = std::chrono::steady_clock::now();
  StageReport r{"extract", {}, {}, false};
  Banks banks{LoadNoiseBank(NoiseBankDir()), LoadRoomSet(RoomBankDir())};
  auto enh = LoadEnhancerIf(cfg_.placement != EnhancePlacement::kOff, EnhancerPath());
  Frontend frontend(cfg_.embedding, enh ? &*enh : nullptr);

  std::optional<IvectorExtractor> ivec;
  std::optional<IvectorComputer> computer;
  std::optional<XvectorModel> xvec;
  if (cfg_.embedding == EmbeddingKind::kIvector) {
    ivec = LoadIvectorExtractor(ExtractorDir() + "/ivector.svkm");
    computer.emplace(*ivec);
  } else {
    xvec = LoadXvector(ExtractorDir() + "/xvector.svkm");
  }
  auto embed = [&](const FeatureMatrix &f) -> Vector {
    if (ivec) return computer->Extract(AccumulateStats(ivec->ubm, f.data));
    return ExtractXvector(*xvec, f.data);
  };

  for (const std::string &name : {PldaListName(), std::string("eval-clean"), std::string("eval-corrupted")}) {
    CorpusManifest list = ReadManifest(ListPath(name));
    std::vector<Vector> vecs(list.entries.size());
    ParallelFor(vecs.size(), workers_, [&](size_t i) {
      vecs[i] = embed(frontend(LoadAudio(list, list.entries[i], banks)));
    });
    EmbeddingArchive archive;
    for (size_t i = 0; i < vecs.size(); ++i) archive.Add(list.entries[i].utt_id, vecs[i]);
    std::string path = EmbeddingDir() + "/" + name + ".svke";
    WriteEmbeddings(archive, path);
    r.artifacts.push_back(path);
    r.Add(name, std::to_string(archive.size()));
    Log("extracted " + std::to_string(archive.size()) + " embeddings for " + name);
  }
  r.Add("seconds", Elapsed(t0));
  return r;
}

StageReport Experiment::TrainPlda() {
  auto t0 = std::chrono::steady_clock::now();
  StageReport r{"train-plda", {}, {}, false};
  CorpusManifest list = ReadManifest(ListPath(PldaListName()));
  EmbeddingArchive archive = ReadEmbeddings(EmbeddingDir() + "/" + PldaListName() + ".svke");
  std::map<std::string, std::string> speaker_of;
  for (const auto &e : list.entries) speaker_of[e.utt_id] = e.speaker_id;
  Matrix vectors(archive.size(), archive.Dim());
  std::vector<std::string> labels;
  for (size_t i = 0; i < archive.size(); ++i) {
    const std::string &id = archive.Ids()[i];
    auto it = speaker_of.find(id);
    if (it == speaker_of.end()) throw DataError("embedding " + id + " is not in " + ListPath(PldaListName()));
    vectors.row(i) = archive.At(i).transpose();
    labels.push_back(it->second);
  }
  LdaProjection lda = TrainLda(vectors, labels, cfg_.lda_dim);
  Matrix projected(vectors.rows(), lda.OutDim());
  for (Eigen::Index i = 0; i < vectors.rows(); ++i)
    projected.row(i) = ProjectAndNorm(lda, vectors.row(i).transpose()).transpose();
  PldaTrainOptions opts;
  opts.rank = cfg_.plda_rank;
  opts.iters = cfg_.plda_iters;
  PldaTrainResult res = svkit::TrainPlda(projected, labels, opts);
  SaveLda(lda, BackendDir() + "/lda.svkm");
  SavePlda(res.model, BackendDir() + "/plda.svkm");
  r.artifacts.push_back(BackendDir() + "/lda.svkm");
  r.artifacts.push_back(BackendDir() + "/plda.svkm");
  r.Add("vectors", std::to_string(vectors.rows()));
  r.Add("log_likelihood", res.lower_bound.back());
  r.Add("seconds", Elapsed(t0));
  return r;
}

StageReport Experiment::Score() {
  auto t0 = std::chrono::steady_clock::now();
  StageReport r{"score", {}, {}, false};
  LdaProjection lda = LoadLda(BackendDir() + "/lda.svkm");
  PldaScorer scorer(LoadPlda(BackendDir() + "/plda.svkm"));
  EmbeddingArchive projected(lda.OutDim());
  for (const char *name : {"eval-clean", "eval-corrupted"}) {
    EmbeddingArchive a = ReadEmbeddings(EmbeddingDir() + "/" + name + ".svke");
    for (size_t i = 0; i < a.size(); ++i) projected.Add(a.Ids()[i], ProjectAndNorm(lda, a.At(i)));
  }
  for (const char *cond : {"clean", "corrupted"}) {
    TrialList trials = ReadTrials(ListPath(std::string("trials-") + cond));
    ScoreSet scores = ScoreTrials(scorer, projected, trials, workers_);
    std::string path = ScoreDir() + "/" + cond + ".txt";
    WriteScores(scores, path);
    r.artifacts.push_back(path);
    r.Add(std::string(cond) + "_trials", std::to_string(scores.scores.size()));
  }
  r.Add("seconds", Elapsed(t0));
  return r;
}

StageReport Experiment::Evaluate() {
  StageReport r{"evaluate", {}, {}, false};
  std::vector<ConditionResult> results;
  for (const char *cond : {"clean", "corrupted"}) {
    KeyedScores keyed = JoinKeys(ReadScores(ScoreDir() + "/" + cond + ".txt"),
                                 ReadTrials(ListPath(std::string("trials-") + cond)));
    results.push_back(svkit::Evaluate(cond, keyed, cfg_.operating_points));
  }
  r.artifacts = EmitReport(results, cfg_.operating_points, ReportDir());
  for (const auto &res : results) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.3f", res.eer);
    r.Add("eer_" + res.condition, buf);
    for (size_t i = 0; i < cfg_.operating_points.size(); ++i) {
      std::snprintf(buf, sizeof(buf), "%.4f", res.min_dcf[i].normalized);
      r.Add("min_dcf_" + cfg_.operating_points[i].Name() + "_" + res.condition, buf);
    }
  }
  return r;
}

std::string Experiment::StageFingerprint(const std::string &stage) const {
  std::vector<std::string> sections = {"experiment.seed", "paths", "synth"};
  auto add = [&](std::initializer_list<const char *> more) { sections.insert(sections.end(), more.begin(), more.end()); };
  if (stage != "corpora") add({"trials", "enhancer", "backend", "xvector", "experiment.embedding"});
  bool extractor = stage == "ubm" || stage == "ivector" || stage == "xvector";
  bool downstream = stage == "extract" || stage == "plda" || stage == "score" || stage == "evaluate";
  if (extractor || downstream) add({"ubm", "ivector"});
  if (downstream) add({"experiment.placement", "experiment.regime"});
  if (stage == "evaluate") add({"evaluation"});
  std::string fp = "stage=" + stage + "\n" + cfg_.Fingerprint(sections);
  if (extractor) fp += "extractor=" + ExtractorTag() + "\n";
  return fp;
}

std::vector<StageReport> Experiment::Run() {
  WriteResolvedConfig();
  std::vector<StageReport> reports;
  auto stage = [&](const std::string &key, const std::string &stamp, StageReport (Experiment::*fn)()) {
    std::string path = Path("stamps/" + stamp);
    std::string fp = StageFingerprint(key);
    if (fs::exists(path)) {
      std::vector<char> bytes = ReadFileBytes(path);
      if (std::string(bytes.begin(), bytes.end()) == fp) {
        StageReport r{key, {}, {}, true};
        reports.push_back(r);
        Log("reusing " + stamp);
        return;
      }
      fs::remove(path);
    }
    reports.push_back((this->*fn)());
    Log(reports.back().Line());
    WriteFileAtomic(path, fp);
  };
  std::string cell = FrontendTag() + "-" + PldaRegimeName(cfg_.regime);
  stage("corpora", "corpora", &Experiment::SynthCorpora);
  stage("augment", "augment", &Experiment::Augment);
  if (cfg_.placement != EnhancePlacement::kOff) stage("enhancer", "enhancer", &Experiment::TrainEnhancer);
  if (cfg_.embedding == EmbeddingKind::kIvector) {
    stage("ubm", "ubm-" + ExtractorTag(), &Experiment::TrainUbm);
    stage("ivector", "ivector-" + ExtractorTag(), &Experiment::TrainIvector);
  } else {
    stage("xvector", "xvector-" + ExtractorTag(), &Experiment::TrainXvector);
  }
  stage("extract", "extract-" + cell, &Experiment::Extract);
  stage("plda", "plda-" + cell, &Experiment::TrainPlda);
  stage("score", "score-" + cell, &Experiment::Score);
  stage("evaluate", "evaluate-" + cell, &Experiment::Evaluate);
  return reports;
}

}  // namespace svkit
