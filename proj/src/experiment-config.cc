// svkit/src/experiment-config.cc

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

#include "svkit/experiment-config.h"

#include <charconv>
#include <cmath>
#include <filesystem>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "svkit/io-util.h"
#include "svkit/xvector.h"

namespace svkit {

namespace fs = std::filesystem;

std::string EnhancePlacementName(EnhancePlacement p) {
  switch (p) {
    case EnhancePlacement::kOff: return "off";
    case EnhancePlacement::kExtractOnly: return "extract-only";
    case EnhancePlacement::kTrainExtract: return "train+extract";
  }
  throw UsageError("bad enhancement placement");
}

EnhancePlacement ParseEnhancePlacement(const std::string &s) {
  for (auto p : {EnhancePlacement::kOff, EnhancePlacement::kExtractOnly,
                 EnhancePlacement::kTrainExtract})
    if (EnhancePlacementName(p) == s) return p;
  throw UsageError("unknown enhancement placement '" + s +
                   "' (expected off, extract-only or train+extract)");
}

std::string PldaRegimeName(PldaRegime r) {
  switch (r) {
    case PldaRegime::kClean: return "clean";
    case PldaRegime::kNoise: return "N";
    case PldaRegime::kReverb: return "RR";
    case PldaRegime::kReverbNoise: return "RR+N";
  }
  throw UsageError("bad PLDA regime");
}

PldaRegime ParsePldaRegime(const std::string &s) {
  for (auto r : {PldaRegime::kClean, PldaRegime::kNoise, PldaRegime::kReverb,
                 PldaRegime::kReverbNoise})
    if (PldaRegimeName(r) == s) return r;
  throw UsageError("unknown PLDA regime '" + s + "' (expected clean, N, RR or RR+N)");
}

namespace {

std::string FormatDouble(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

template <class T>
T ParseNumber(const std::string &s, const std::string &key) {
  T v{};
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size())
    throw UsageError("config key " + key + ": cannot parse '" + s + "'");
  return v;
}

bool ParseBool(const std::string &s, const std::string &key) {
  if (s == "true" || s == "1" || s == "yes") return true;
  if (s == "false" || s == "0" || s == "no") return false;
  throw UsageError("config key " + key + ": expected true or false, got '" + s + "'");
}

std::vector<std::string> SplitList(const std::string &s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    auto b = item.find_first_not_of(" \t");
    auto e = item.find_last_not_of(" \t");
    if (b != std::string::npos) out.push_back(item.substr(b, e - b + 1));
  }
  return out;
}

std::string FormatOperatingPoint(const OperatingPoint &op) {
  if (op.c_miss == 1.0 && op.c_fa == 1.0) return FormatDouble(op.p_target);
  return FormatDouble(op.p_target) + ":" + FormatDouble(op.c_miss) + ":" + FormatDouble(op.c_fa);
}

struct Field {
  std::string section;
  std::string key;
  std::function<std::string()> get;
  std::function<void(const std::string &)> set;
};

class FieldTable {
 public:
  explicit FieldTable(ExperimentConfig &c) {
    Section("experiment");
    Add("seed", [&c] { return c.seed ? std::to_string(*c.seed) : std::string(); },
        [&c](const std::string &s) {
          if (s.empty()) c.seed.reset();
          else c.seed = ParseNumber<uint64_t>(s, "experiment.seed");
        });
    Add("embedding", [&c] { return EmbeddingKindName(c.embedding); },
        [&c](const std::string &s) { c.embedding = ParseEmbeddingKind(s); });
    Add("placement", [&c] { return EnhancePlacementName(c.placement); },
        [&c](const std::string &s) { c.placement = ParseEnhancePlacement(s); });
    Add("regime", [&c] { return PldaRegimeName(c.regime); },
        [&c](const std::string &s) { c.regime = ParsePldaRegime(s); });

    Section("paths");
    Str("train_manifest", c.train_manifest);
    Str("eval_manifest", c.eval_manifest);
    Str("noise_bank", c.noise_bank);
    Str("room_bank", c.room_bank);

    Section("synth");
    Int("train_speakers", c.train_speakers);
    Int("train_utterances", c.train_utterances);
    Int("eval_speakers", c.eval_speakers);
    Int("eval_utterances", c.eval_utterances);

    Section("trials");
    Int("enroll_per_speaker", c.enroll_per_speaker);
    Real("test_snr_db", c.test_snr_db);
    Bool("test_noise", c.test_noise);
    Bool("test_reverb", c.test_reverb);

    Section("enhancer");
    Int("context", c.enh_context);
    Ints("hidden", c.enh_hidden);
    Int("epochs", c.enh_epochs);
    Int("batch", c.enh_batch);
    Real("learning_rate", c.enh_learning_rate);
    Real("momentum", c.enh_momentum);
    Real("dev_fraction", c.enh_dev_fraction);
    Real("snr_lo", c.enh_snr_lo);
    Real("snr_hi", c.enh_snr_hi);
    Bool("include_clean", c.enh_include_clean);
    Bool("telephone", c.enh_telephone);
    Int("max_utterances", c.enh_max_utterances);

    Section("ubm");
    Int("components", c.ubm_components);
    Int("iters", c.ubm_iters);
    Int("kmeans_iters", c.ubm_kmeans_iters);
    Real("variance_floor", c.ubm_variance_floor);

    Section("ivector");
    Int("rank", c.ivector_rank);
    Int("iters", c.ivector_iters);
    Bool("augmented", c.extractor_augmented);

    Section("xvector");
    Ints("frame_sizes", c.xv_frame_sizes);
    Ints("segment_sizes", c.xv_segment_sizes);
    Int("epochs", c.xv_epochs);
    Real("learning_rate", c.xv_learning_rate);
    Int("min_chunk", c.xv_min_chunk);
    Int("max_chunk", c.xv_max_chunk);
    Int("min_frames", c.xv_min_frames);
    Int("replica_cap", c.xv_replica_cap);

    Section("backend");
    Int("lda_dim", c.lda_dim);
    Int("plda_rank", c.plda_rank);
    Int("plda_iters", c.plda_iters);
    Real("mc_fraction", c.mc_fraction);
    Real("mc_snr_lo", c.mc_snr_lo);
    Real("mc_snr_hi", c.mc_snr_hi);

    Section("evaluation");
    Add("operating_points",
        [&c] {
          std::string out;
          for (size_t i = 0; i < c.operating_points.size(); ++i)
            out += (i ? "," : "") + FormatOperatingPoint(c.operating_points[i]);
          return out;
        },
        [&c](const std::string &s) {
          c.operating_points.clear();
          for (const auto &item : SplitList(s)) c.operating_points.push_back(OperatingPoint::Parse(item));
        });
  }

  const std::vector<Field> &Fields() const { return fields_; }

  Field *Find(const std::string &section, const std::string &key) {
    for (auto &f : fields_)
      if (f.section == section && f.key == key) return &f;
    return nullptr;
  }

 private:
  void Section(const std::string &s) { section_ = s; }
  void Add(const std::string &key, std::function<std::string()> get,
           std::function<void(const std::string &)> set) {
    fields_.push_back({section_, key, std::move(get), std::move(set)});
  }
  void Str(const std::string &key, std::string &v) {
    Add(key, [&v] { return v; }, [&v](const std::string &s) { v = s; });
  }
  void Int(const std::string &key, int &v) {
    std::string name = section_ + "." + key;
    Add(key, [&v] { return std::to_string(v); },
        [&v, name](const std::string &s) { v = ParseNumber<int>(s, name); });
  }
  void Real(const std::string &key, double &v) {
    std::string name = section_ + "." + key;
    Add(key, [&v] { return FormatDouble(v); },
        [&v, name](const std::string &s) { v = ParseNumber<double>(s, name); });
  }
  void Bool(const std::string &key, bool &v) {
    std::string name = section_ + "." + key;
    Add(key, [&v] { return std::string(v ? "true" : "false"); },
        [&v, name](const std::string &s) { v = ParseBool(s, name); });
  }
  void Ints(const std::string &key, std::vector<int> &v) {
    std::string name = section_ + "." + key;
    Add(key,
        [&v] {
          std::string out;
          for (size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + std::to_string(v[i]);
          return out;
        },
        [&v, name](const std::string &s) {
          v.clear();
          for (const auto &item : SplitList(s)) v.push_back(ParseNumber<int>(item, name));
        });
  }

  std::string section_;
  std::vector<Field> fields_;
};

void Check(bool cond, const std::string &msg) {
  if (!cond) throw UsageError("config: " + msg);
}

}  // namespace

uint64_t ExperimentConfig::Seed() const {
  if (!seed) throw UsageError("config: experiment.seed is required");
  return *seed;
}

void ExperimentConfig::Validate() const {
  Seed();
  Check(train_speakers >= 3 && train_utterances >= 2, "synth needs >= 3 training speakers with >= 2 utterances");
  Check(eval_speakers >= 2 && eval_utterances >= 2, "synth needs >= 2 evaluation speakers with >= 2 utterances");
  Check(enroll_per_speaker >= 1, "trials.enroll_per_speaker must be positive");
  Check(std::isfinite(test_snr_db), "trials.test_snr_db must be finite");
  Check(enh_context >= 0, "enhancer.context must be >= 0");
  Check(!enh_hidden.empty(), "enhancer.hidden must list at least one layer");
  for (int h : enh_hidden) Check(h > 0, "enhancer.hidden sizes must be positive");
  Check(enh_epochs >= 1 && enh_batch >= 1, "enhancer epochs and batch must be positive");
  Check(enh_learning_rate >= 0 && enh_momentum >= 0 && enh_momentum < 1, "bad enhancer optimizer settings");
  Check(enh_dev_fraction > 0 && enh_dev_fraction < 1, "enhancer.dev_fraction must be in (0, 1)");
  Check(enh_snr_lo <= enh_snr_hi, "enhancer SNR range is empty");
  Check(enh_max_utterances >= 0, "enhancer.max_utterances must be >= 0");
  Check(ubm_components >= 1 && ubm_iters >= 0 && ubm_kmeans_iters >= 0, "bad UBM settings");
  Check(ubm_variance_floor > 0, "ubm.variance_floor must be positive");
  Check(ivector_rank >= 1 && ivector_iters >= 0, "bad i-vector settings");
  Check(xv_frame_sizes.size() == XvectorConfig().frame_sizes.size(), "xvector.frame_sizes must list 5 layers");
  for (int s : xv_frame_sizes) Check(s > 0, "xvector layer sizes must be positive");
  Check(!xv_segment_sizes.empty(), "xvector.segment_sizes must list at least one layer");
  for (int s : xv_segment_sizes) Check(s > 0, "xvector layer sizes must be positive");
  Check(xv_epochs >= 1 && xv_learning_rate > 0, "bad x-vector optimizer settings");
  Check(xv_min_chunk >= 1 && xv_max_chunk >= xv_min_chunk, "bad x-vector chunk range");
  Check(xv_min_frames >= 0 && xv_replica_cap >= 0, "bad x-vector data settings");
  Check(lda_dim >= 1, "backend.lda_dim must be positive");
  Check(plda_rank >= 0 && plda_rank <= lda_dim, "backend.plda_rank must be in [0, lda_dim]");
  Check(plda_iters >= 0, "backend.plda_iters must be >= 0");
  Check(mc_fraction >= 0 && mc_fraction <= 1, "backend.mc_fraction must be in [0, 1]");
  Check(mc_snr_lo <= mc_snr_hi, "backend SNR range is empty");
  Check(!operating_points.empty(), "evaluation.operating_points is empty");
  for (const auto &op : operating_points) op.Validate();
}

void ExperimentConfig::CheckPaths() const {
  for (const auto *p : {&train_manifest, &eval_manifest})
    if (!p->empty() && !fs::is_regular_file(*p)) throw DataError("manifest not found: " + *p);
  for (const auto *p : {&noise_bank, &room_bank})
    if (!p->empty() && !fs::is_regular_file(fs::path(*p) / "listing.txt"))
      throw DataError("bank listing not found: " + (fs::path(*p) / "listing.txt").string());
}

std::string ExperimentConfig::ToText() const {
  ExperimentConfig copy = *this;
  FieldTable table(copy);
  std::ostringstream out;
  std::string section;
  for (const auto &f : table.Fields()) {
    if (f.section != section) {
      if (!section.empty()) out << '\n';
      section = f.section;
      out << '[' << section << "]\n";
    }
    out << f.key << " = " << f.get() << '\n';
  }
  return out.str();
}

std::string ExperimentConfig::Fingerprint(const std::vector<std::string> &sections) const {
  ExperimentConfig copy = *this;
  FieldTable table(copy);
  std::set<std::string> wanted(sections.begin(), sections.end());
  std::string out;
  for (const auto &f : table.Fields())
    if (wanted.count(f.section) || wanted.count(f.section + "." + f.key))
      out += f.section + "." + f.key + "=" + f.get() + "\n";
  return out;
}

ExperimentConfig ExperimentConfig::FromText(const std::string &text, const std::string &what) {
  boost::property_tree::ptree tree;
  std::istringstream in(text);
  try {
    boost::property_tree::ini_parser::read_ini(in, tree);
  } catch (const boost::property_tree::ini_parser_error &e) {
    throw UsageError(what + ": " + e.message() + " at line " + std::to_string(e.line()));
  }
  ExperimentConfig cfg;
  FieldTable table(cfg);
  for (const auto &[section, body] : tree) {
    if (body.empty() && !body.data().empty())
      throw UsageError(what + ": key '" + section + "' outside a section");
    for (const auto &[key, value] : body) {
      Field *f = table.Find(section, key);
      if (!f) throw UsageError(what + ": unknown key " + section + "." + key);
      f->set(value.data());
    }
  }
  return cfg;
}

ExperimentConfig ExperimentConfig::Load(const std::string &path) {
  std::vector<char> bytes = ReadFileBytes(path);
  ExperimentConfig cfg = FromText(std::string(bytes.begin(), bytes.end()), path);
  fs::path base = fs::path(path).parent_path();
  for (auto *p : {&cfg.train_manifest, &cfg.eval_manifest, &cfg.noise_bank, &cfg.room_bank})
    if (!p->empty() && fs::path(*p).is_relative()) *p = (base / *p).lexically_normal().string();
  return cfg;
}

}  // namespace svkit
