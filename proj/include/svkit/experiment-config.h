// svkit/experiment-config.h

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

#ifndef SVKIT_EXPERIMENT_CONFIG_H_
#define SVKIT_EXPERIMENT_CONFIG_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "svkit/frontend.h"
#include "svkit/metrics.h"

namespace svkit {

enum class EnhancePlacement { kOff, kExtractOnly, kTrainExtract };
std::string EnhancePlacementName(EnhancePlacement p);
EnhancePlacement ParseEnhancePlacement(const std::string &s);

/// PLDA training-set variant: clean only, or clean plus a corrupted
/// portion (noise, real reverberation, or both kinds in equal shares).
enum class PldaRegime { kClean, kNoise, kReverb, kReverbNoise };
std::string PldaRegimeName(PldaRegime r);
PldaRegime ParsePldaRegime(const std::string &s);

/// One cell of the experiment grid plus every hyperparameter.  The text
/// form is an INI file; ToText() lists every key with its resolved value.
struct ExperimentConfig {
  // [experiment]
  std::optional<uint64_t> seed;
  EmbeddingKind embedding = EmbeddingKind::kIvector;
  EnhancePlacement placement = EnhancePlacement::kOff;
  PldaRegime regime = PldaRegime::kClean;

  // [paths]; empty corpus and bank paths are synthesized in the work dir.
  std::string train_manifest;
  std::string eval_manifest;
  std::string noise_bank;
  std::string room_bank;

  // [synth]
  int train_speakers = 40;
  int train_utterances = 8;
  int eval_speakers = 20;
  int eval_utterances = 10;

  // [trials]
  int enroll_per_speaker = 3;
  double test_snr_db = 5.0;
  bool test_noise = true;
  bool test_reverb = true;

  // [enhancer]
  int enh_context = 5;
  std::vector<int> enh_hidden = {256, 256, 256};
  int enh_epochs = 5;
  int enh_batch = 256;
  double enh_learning_rate = 0.05;
  double enh_momentum = 0.9;
  double enh_dev_fraction = 0.1;
  double enh_snr_lo = 0.0;
  double enh_snr_hi = 15.0;
  bool enh_include_clean = true;
  bool enh_telephone = false;
  int enh_max_utterances = 0;  // 0 uses every training utterance

  // [ubm]
  int ubm_components = 64;
  int ubm_iters = 10;
  int ubm_kmeans_iters = 5;
  double ubm_variance_floor = 0.01;

  // [ivector]
  int ivector_rank = 50;
  int ivector_iters = 5;
  bool extractor_augmented = false;

  // [xvector]
  std::vector<int> xv_frame_sizes = {64, 64, 64, 64, 128};
  std::vector<int> xv_segment_sizes = {64, 64};
  int xv_epochs = 10;
  double xv_learning_rate = 0.003;
  int xv_min_chunk = 200;
  int xv_max_chunk = 400;
  int xv_min_frames = 500;
  int xv_replica_cap = 0;  // 0 keeps every replica

  // [backend]
  int lda_dim = 20;
  int plda_rank = 20;
  int plda_iters = 10;
  double mc_fraction = 0.3;
  double mc_snr_lo = 0.0;
  double mc_snr_hi = 15.0;

  // [evaluation]
  std::vector<OperatingPoint> operating_points = DefaultOperatingPoints();

  /// Throws UsageError on out-of-range values or a missing seed.
  void Validate() const;
  /// Throws DataError when a configured path does not exist.
  void CheckPaths() const;
  uint64_t Seed() const;

  std::string ToText() const;
  /// Unknown sections or keys are a UsageError.
  static ExperimentConfig FromText(const std::string &text, const std::string &what);
  static ExperimentConfig Load(const std::string &path);

  /// The resolved text of the named sections, used to key cached stages.
  std::string Fingerprint(const std::vector<std::string> &sections) const;
};

}  // namespace svkit

#endif  // SVKIT_EXPERIMENT_CONFIG_H_
