// svkit/src/cli.cc

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

#include "svkit/cli.h"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>

#include "CLI11.hpp"
#include "svkit/enhancer.h"
#include "svkit/experiment.h"
#include "svkit/metrics.h"
#include "svkit/trials.h"
#include "svkit/wave.h"

namespace svkit {

namespace {

struct GlobalFlags {
  std::string config;
  std::string workdir;
  std::optional<uint64_t> seed;
  int workers = 1;
  bool verbose = false;
};

struct EnhanceFlags {
  std::string in, out, model;
};

struct EvaluateFlags {
  std::string trials, scores, out, condition = "eval";
};

ExperimentConfig LoadConfig(const GlobalFlags &g) {
  ExperimentConfig cfg = g.config.empty() ? ExperimentConfig() : ExperimentConfig::Load(g.config);
  if (g.seed) cfg.seed = g.seed;
  return cfg;
}

Experiment OpenExperiment(const GlobalFlags &g, std::ostream &err) {
  if (g.workdir.empty()) throw UsageError("--workdir is required");
  Experiment ex(LoadConfig(g), g.workdir, g.workers, g.verbose ? &err : nullptr);
  ex.WriteResolvedConfig();
  return ex;
}

std::string Fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
  return buf;
}

std::string RunEvaluateFiles(const GlobalFlags &g, const EvaluateFlags &f) {
  std::vector<OperatingPoint> ops =
      g.config.empty() ? DefaultOperatingPoints() : LoadConfig(g).operating_points;
  KeyedScores keyed = JoinKeys(ReadScores(f.scores), ReadTrials(f.trials));
  ConditionResult res = Evaluate(f.condition, keyed, ops);
  std::string line = "command=evaluate condition=" + f.condition +
                     " targets=" + std::to_string(keyed.target.size()) +
                     " nontargets=" + std::to_string(keyed.nontarget.size()) +
                     " eer=" + Fixed(res.eer, 3);
  for (size_t i = 0; i < ops.size(); ++i)
    line += " min_dcf_" + ops[i].Name() + "=" + Fixed(res.min_dcf[i].normalized, 4);
  if (!f.out.empty()) EmitReport({res}, ops, f.out);
  return line;
}

std::string RunEnhance(const GlobalFlags &g, const EnhanceFlags &f) {
  std::string model = f.model;
  if (model.empty()) {
    if (g.workdir.empty()) throw UsageError("enhance needs --model or --workdir");
    model = (std::filesystem::path(g.workdir) / "models" / "enhancer.svkm").string();
  }
  AeModel m = LoadAe(model);
  Waveform w = ReadWav(f.in);
  Waveform e = EnhanceUtterance(m, w);
  WriteWav(e, f.out);
  return "command=enhance samples=" + std::to_string(e.size()) + " out=" + f.out;
}

std::string StageLine(const std::string &command, const StageReport &r) {
  std::string line = "command=" + command;
  for (const auto &[k, v] : r.summary) line += " " + k + "=" + v;
  return line;
}

}  // namespace

int RunCli(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
  CLI::App app{"svkit: speaker verification experiments with enhancement and augmentation", "svkit"};
  app.require_subcommand(1, 1);
  GlobalFlags g;
  app.add_option("--config", g.config, "experiment configuration (INI)");
  app.add_option("--workdir", g.workdir, "work directory for all artifacts");
  app.add_option("--seed", g.seed, "global seed, overrides experiment.seed");
  app.add_option("--workers", g.workers, "worker threads")->check(CLI::PositiveNumber);
  app.add_flag("--verbose", g.verbose, "progress messages on standard error");

  using StageFn = StageReport (Experiment::*)();
  const std::vector<std::tuple<std::string, std::string, StageFn>> stages = {
      {"synth-corpus", "synthesize corpora and noise/room banks", &Experiment::SynthCorpora},
      {"augment", "derive corrupted manifests and trial lists", &Experiment::Augment},
      {"train-enhancer", "train the denoising autoencoder", &Experiment::TrainEnhancer},
      {"train-ubm", "train the GMM-UBM", &Experiment::TrainUbm},
      {"train-ivector", "train the total-variability model", &Experiment::TrainIvector},
      {"train-xvector", "train the x-vector network", &Experiment::TrainXvector},
      {"extract", "extract embeddings", &Experiment::Extract},
      {"train-plda", "train LDA and PLDA", &Experiment::TrainPlda},
      {"score", "score clean and corrupted trials", &Experiment::Score},
  };
  std::map<CLI::App *, std::function<std::string()>> actions;
  for (const auto &[name, help, fn] : stages) {
    CLI::App *sub = app.add_subcommand(name, help);
    sub->fallthrough();
    std::string command = name;
    StageFn stage = fn;
    actions[sub] = [&g, &err, command, stage] {
      Experiment ex = OpenExperiment(g, err);
      return StageLine(command, (ex.*stage)());
    };
  }

  EnhanceFlags ef;
  CLI::App *enhance = app.add_subcommand("enhance", "enhance one WAV file");
  enhance->fallthrough();
  enhance->add_option("--in", ef.in, "input WAV")->required();
  enhance->add_option("--out", ef.out, "output WAV")->required();
  enhance->add_option("--model", ef.model, "autoencoder model (default <workdir>/models/enhancer.svkm)");
  actions[enhance] = [&] { return RunEnhance(g, ef); };

  EvaluateFlags vf;
  CLI::App *evaluate = app.add_subcommand("evaluate", "EER, minDCF and DET curves");
  evaluate->fallthrough();
  auto *trials_opt = evaluate->add_option("--trials", vf.trials, "trial list with keys");
  auto *scores_opt = evaluate->add_option("--scores", vf.scores, "score file");
  trials_opt->needs(scores_opt);
  scores_opt->needs(trials_opt);
  evaluate->add_option("--out", vf.out, "report directory");
  evaluate->add_option("--condition", vf.condition, "condition label");
  actions[evaluate] = [&] {
    if (!vf.trials.empty()) return RunEvaluateFiles(g, vf);
    Experiment ex = OpenExperiment(g, err);
    return StageLine("evaluate", ex.Evaluate());
  };

  CLI::App *run = app.add_subcommand("run-experiment", "run every stage of one experiment cell");
  run->fallthrough();
  actions[run] = [&] {
    auto t0 = std::chrono::steady_clock::now();
    Experiment ex = OpenExperiment(g, err);
    std::vector<StageReport> reports = ex.Run();
    int reused = 0;
    for (const auto &r : reports) reused += r.reused;
    std::string line = "command=run-experiment embedding=" + EmbeddingKindName(ex.Config().embedding) +
                       " placement=" + EnhancePlacementName(ex.Config().placement) +
                       " regime=" + PldaRegimeName(ex.Config().regime) +
                       " stages=" + std::to_string(reports.size()) + " reused=" + std::to_string(reused);
    StageReport ev = ex.Evaluate();
    for (const auto &[k, v] : ev.summary) line += " " + k + "=" + v;
    line += " seconds=" + Fixed(std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count(), 1);
    return line;
  };

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp &) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError &e) {
    err << "svkit: " << e.what() << "\n\n" << app.help();
    return 1;
  }

  try {
    for (auto &[sub, action] : actions)
      if (sub->parsed()) {
        out << action() << std::endl;
        return 0;
      }
    err << app.help();
    return 1;
  } catch (const UsageError &e) {
    err << "svkit: usage error: " << e.what() << std::endl;
    return 1;
  } catch (const NumericError &e) {
    err << "svkit: numeric failure: " << e.what() << std::endl;
    return 3;
  } catch (const DataError &e) {
    err << "svkit: data error: " << e.what() << std::endl;
    return 2;
  } catch (const std::filesystem::filesystem_error &e) {
    err << "svkit: data error: " << e.what() << std::endl;
    return 2;
  } catch (const std::exception &e) {
    err << "svkit: error: " << e.what() << std::endl;
    return 3;
  }
}

}  // namespace svkit
