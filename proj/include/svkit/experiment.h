// svkit/experiment.h

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

#ifndef SVKIT_EXPERIMENT_H_
#define SVKIT_EXPERIMENT_H_

#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "svkit/experiment-config.h"

namespace svkit {

/// Outcome of one pipeline stage: key=value summary pairs plus the files
/// written.
struct StageReport {
  std::string stage;
  std::vector<std::pair<std::string, std::string>> summary;
  std::vector<std::string> artifacts;
  bool reused = false;

  void Add(const std::string &key, const std::string &value);
  void Add(const std::string &key, double value);
  /// "stage=<name> k=v ...".
  std::string Line() const;
};

/// The pipeline over one work directory.  Every stage reads its inputs
/// from files written by earlier stages, so stages may run in separate
/// processes.  Work directory layout:
///
///   config.ini                       resolved configuration
///   corpora/{train,eval}/            synthesized corpora (unless configured)
///   banks/{noise,rooms}/             synthesized noise and room banks
///   lists/                           derived manifests and trial lists
///   models/enhancer.svkm
///   models/<extractor>/              ubm.svkm, ivector.svkm or xvector.svkm
///   embeddings/<frontend>/           *.svke
///   models/<frontend>/<regime>/      lda.svkm, plda.svkm
///   scores/<frontend>/<regime>/      clean.txt, corrupted.txt
///   report/<frontend>/<regime>/      summary.csv, det-*.csv, det.svg
///
/// <extractor> is "<kind>-raw" or "<kind>-enh" (enhanced training data);
/// <frontend> is "<kind>-<placement>".
class Experiment {
 public:
  Experiment(ExperimentConfig cfg, std::string workdir, int workers = 1,
             std::ostream *log = nullptr);

  const ExperimentConfig &Config() const { return cfg_; }

  StageReport SynthCorpora();
  StageReport Augment();
  StageReport TrainEnhancer();
  StageReport TrainUbm();
  StageReport TrainIvector();
  StageReport TrainXvector();
  StageReport Extract();
  StageReport TrainPlda();
  StageReport Score();
  StageReport Evaluate();

  /// Every stage of the configured cell in order.  A stage whose stamp
  /// under stamps/ matches the configuration it depends on is skipped, so
  /// cells sharing a work directory share their common stages.
  std::vector<StageReport> Run();

  /// Writes config.ini.
  void WriteResolvedConfig() const;

  std::string Root() const { return root_; }
  std::string TrainManifestPath() const;
  std::string EvalManifestPath() const;
  std::string NoiseBankDir() const;
  std::string RoomBankDir() const;
  std::string ListPath(const std::string &name) const;
  std::string PldaListName() const;
  std::string EnhancerPath() const;
  std::string ExtractorDir() const;
  std::string EmbeddingDir() const;
  std::string BackendDir() const;
  std::string ScoreDir() const;
  std::string ReportDir() const;

 private:
  std::string Path(const std::string &rel) const;
  std::string ExtractorTag() const;
  std::string FrontendTag() const;
  void Log(const std::string &msg) const;
  std::string StageFingerprint(const std::string &stage) const;

  ExperimentConfig cfg_;
  std::string root_;
  int workers_;
  std::ostream *log_;
};

}  // namespace svkit

#endif  // SVKIT_EXPERIMENT_H_
