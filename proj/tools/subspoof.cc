// tools/subspoof.cc

// Copyright 2026  The subspoof Authors
//
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

// Command-line front end: extract, train, score, fuse, evaluate, f0-hist and
// synth-corpus.  Every subcommand accepts --config <file> holding key=value
// lines named after its long flags; flags given on the command line win.

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "subspoof/fusion.h"
#include "subspoof/kv_config.h"
#include "subspoof/pipeline.h"
#include "subspoof/synth.h"

namespace {

using namespace subspoof;
using json = nlohmann::ordered_json;

enum class Format { kText, kCsv, kJsonl };

// Emits one record per call in the chosen format.  Text mode prints
// "key value" pairs on one line; CSV prints a header before the first row.
class Reporter {
 public:
  explicit Reporter(Format format) : format_(format) {}

  void Emit(const json &record) {
    switch (format_) {
      case Format::kJsonl:
        std::cout << record.dump() << '\n';
        break;
      case Format::kCsv: {
        std::string header, row;
        for (const auto &[k, v] : record.items()) {
          header += (header.empty() ? "" : ",") + k;
          row += (row.empty() ? "" : ",") + Plain(v);
        }
        if (header != last_header_) std::cout << header << '\n';
        last_header_ = header;
        std::cout << row << '\n';
        break;
      }
      case Format::kText: {
        std::string line;
        for (const auto &[k, v] : record.items())
          line += (line.empty() ? "" : " ") + k + "=" + Plain(v);
        std::cout << line << '\n';
        break;
      }
    }
  }

 private:
  static std::string Plain(const json &v) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_number_float()) {
      char buf[40];
      std::snprintf(buf, sizeof buf, "%.10g", v.get<double>());
      return buf;
    }
    return v.dump();
  }
  Format format_;
  std::string last_header_;
};

std::string Percent(double fraction) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f%%", 100.0 * fraction);
  return buf;
}

// Rewrites "<sub> ... --config F ..." into "<sub> --k=v ... ..." so that the
// file acts as a set of default flags that explicit flags override.
std::vector<std::string> ExpandConfig(int argc, char **argv, const CLI::App &app) {
  std::vector<std::string> args(argv + 1, argv + argc);
  std::vector<std::string> out;
  std::optional<std::string> config;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) {
      config = args[++i];
    } else if (args[i].rfind("--config=", 0) == 0) {
      config = args[i].substr(9);
    } else {
      out.push_back(args[i]);
    }
  }
  if (!config) return out;
  auto sub = std::find_if(out.begin(), out.end(), [&](const std::string &a) {
    return app.get_subcommand_no_throw(a) != nullptr;
  });
  if (sub == out.end()) Fail("--config needs a subcommand");
  std::vector<std::string> injected;
  for (const auto &[k, v] : ReadKeyValueFile(*config)) injected.push_back("--" + k + "=" + v);
  out.insert(sub + 1, injected.begin(), injected.end());
  return out;
}

std::vector<TrialRecord> Protocol(const std::string &path) { return ParseProtocol(path); }

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"Subband spectrogram anti-spoofing toolkit", "subspoof"};
  app.require_subcommand(1);
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  std::string format_name = "text";
  app.add_option("--format", format_name, "Report format: text, csv or jsonl")
      ->check(CLI::IsMember({"text", "csv", "jsonl"}));
  // Declared only so that --help lists it; ExpandConfig consumes it.
  std::string config_help;
  app.add_option("--config", config_help, "key=value file of default flags");

  auto add_format = [&](CLI::App *sub) {
    sub->add_option("--format", format_name, "Report format: text, csv or jsonl")
        ->check(CLI::IsMember({"text", "csv", "jsonl"}));
    sub->add_option("--config", config_help, "key=value file of default flags");
  };

  // extract
  ExtractOptions ex;
  std::string ex_protocol, ex_audio, ex_out, ex_kind = "lps", ex_band = "f0", ex_dtype = "f32";
  auto *extract = app.add_subcommand("extract", "Compute subband feature files");
  add_format(extract);
  extract->add_option("--protocol", ex_protocol)->required();
  extract->add_option("--audio-dir", ex_audio)->required();
  extract->add_option("--out-dir", ex_out)->required();
  extract->add_option("--kind", ex_kind, "lps, phase, real, imag or magnitude");
  extract->add_option("--band", ex_band, "f0, rest, low, high or full");
  extract->add_option("--frames", ex.frames)->check(CLI::PositiveNumber);
  extract->add_option("--jobs", ex.jobs)->check(CLI::PositiveNumber);
  extract->add_option("--window-len", ex.stft.window_len);
  extract->add_option("--hop", ex.stft.hop);
  extract->add_option("--fft-len", ex.stft.fft_len);
  extract->add_option("--sample-rate", ex.stft.sample_rate_hz);
  extract->add_option("--dtype", ex_dtype)->check(CLI::IsMember({"f32", "f64"}));

  // train
  net::SenetConfig senet;
  net::TrainConfig tc;
  std::string tr_features, tr_dev_features, tr_protocol_train, tr_protocol_dev, tr_checkpoint,
      tr_log;
  auto *train = app.add_subcommand("train", "Train a SENet classifier on feature files");
  add_format(train);
  train->add_option("--features-dir", tr_features)->required();
  train->add_option("--dev-features-dir", tr_dev_features, "Defaults to --features-dir");
  train->add_option("--protocol-train", tr_protocol_train)->required();
  train->add_option("--protocol-dev", tr_protocol_dev)->required();
  train->add_option("--checkpoint", tr_checkpoint)->required();
  train->add_option("--log", tr_log, "CSV log path (epoch,train_loss,dev_eer)");
  train->add_option("--epochs", tc.epochs);
  train->add_option("--lr", tc.adam.learning_rate);
  train->add_option("--batch-size", tc.batch_size);
  train->add_option("--margin", tc.margin);
  train->add_option("--seed", tc.seed);
  train->add_option("--beta1", tc.adam.beta1);
  train->add_option("--beta2", tc.adam.beta2);
  train->add_option("--epsilon", tc.adam.epsilon);
  train->add_option("--weight-decay", tc.adam.weight_decay);
  train->add_option("--lambda-base", tc.lambda.base);
  train->add_option("--lambda-gamma", tc.lambda.gamma);
  train->add_option("--lambda-power", tc.lambda.power);
  train->add_option("--lambda-min", tc.lambda.min);
  train->add_option("--width-multiplier", senet.width_multiplier);
  train->add_option("--se-reduction", senet.se_reduction);

  // score
  std::string sc_checkpoint, sc_features, sc_protocol, sc_out;
  auto *score = app.add_subcommand("score", "Score feature files with a checkpoint");
  add_format(score);
  score->add_option("--checkpoint", sc_checkpoint)->required();
  score->add_option("--features-dir", sc_features)->required();
  score->add_option("--protocol", sc_protocol)->required();
  score->add_option("--out", sc_out)->required();

  // fuse
  std::string fu_a, fu_b, fu_out;
  double fu_weight = 0.5;
  auto *fuse = app.add_subcommand("fuse", "Fuse two score files: w*a + (1-w)*b");
  add_format(fuse);
  fuse->add_option("--scores-a", fu_a)->required();
  fuse->add_option("--scores-b", fu_b)->required();
  fuse->add_option("--weight", fu_weight);
  fuse->add_option("--out", fu_out)->required();

  // evaluate
  std::string ev_scores, ev_protocol, ev_cost, ev_det;
  auto *evaluate = app.add_subcommand("evaluate", "EER and min t-DCF of a score file");
  add_format(evaluate);
  evaluate->add_option("--scores", ev_scores)->required();
  evaluate->add_option("--protocol", ev_protocol)->required();
  evaluate->add_option("--cost-config", ev_cost, "t-DCF cost model (key=value)");
  evaluate->add_option("--det-csv", ev_det, "Write threshold,far,frr rows here");

  // f0-hist
  std::string fh_protocol, fh_audio, fh_out;
  bool fh_split = false;
  int fh_jobs = 1;
  F0Config f0cfg;
  auto *f0hist = app.add_subcommand("f0-hist", "F0 histograms of a corpus");
  add_format(f0hist);
  f0hist->add_option("--protocol", fh_protocol)->required();
  f0hist->add_option("--audio-dir", fh_audio)->required();
  f0hist->add_option("--out", fh_out, "CSV path; with --split-by-label the label is "
                                      "appended to the stem")
      ->required();
  f0hist->add_flag("--split-by-label", fh_split);
  f0hist->add_option("--jobs", fh_jobs)->check(CLI::PositiveNumber);
  f0hist->add_option("--voicing-threshold", f0cfg.voicing_threshold);
  f0hist->add_option("--min-hz", f0cfg.min_hz);
  f0hist->add_option("--max-hz", f0cfg.max_hz);

  // synth-corpus
  SynthConfig sy;
  std::string sy_out;
  auto *synth = app.add_subcommand("synth-corpus", "Generate the synthetic two-class corpus");
  add_format(synth);
  synth->add_option("--out-dir", sy_out)->required();
  synth->add_option("--n-per-class", sy.n_per_class);
  synth->add_option("--seed", sy.seed);
  synth->add_option("--split", sy.split);
  synth->add_option("--duration", sy.duration_s);

  try {
    std::vector<std::string> args = ExpandConfig(argc, argv, app);
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::ParseError &e) {
    return app.exit(e);
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }

  const Format format = format_name == "csv"     ? Format::kCsv
                        : format_name == "jsonl" ? Format::kJsonl
                                                 : Format::kText;
  Reporter report(format);

  try {
    if (extract->parsed()) {
      ex.kind = ParseFeatureKind(ex_kind);
      ex.band = ParseBandName(ex_band);
      ex.dtype = ex_dtype == "f64" ? FeatureDtype::kFloat64 : FeatureDtype::kFloat32;
      auto protocol = Protocol(ex_protocol);
      ExtractReport r = ExtractFeatures(protocol, ex_audio, ex_out, ex);
      for (const auto &f : r.failures)
        report.Emit({{"event", "failure"}, {"trial_id", f.trial_id}, {"error", f.message}});
      report.Emit({{"event", "extract"},
                   {"written", r.written},
                   {"failed", r.failures.size()},
                   {"rows", r.rows},
                   {"frames", r.cols},
                   {"kind", std::string(FeatureKindName(ex.kind))},
                   {"band", std::string(BandNameString(ex.band))}});
      return r.failures.empty() ? 0 : 1;
    }
    if (train->parsed()) {
      tc.Validate();
      auto train_set = LoadExamples(Protocol(tr_protocol_train), tr_features);
      auto dev_set = LoadExamples(Protocol(tr_protocol_dev),
                                  tr_dev_features.empty() ? tr_features : tr_dev_features);
      net::TrainResult r = TrainFromFeatures(
          train_set, dev_set, senet, tc, tr_checkpoint, tr_log, [&](const net::EpochLog &e) {
            report.Emit({{"event", "epoch"},
                         {"epoch", e.epoch},
                         {"train_loss", e.train_loss},
                         {"dev_eer", e.dev_eer}});
          });
      report.Emit({{"event", "train"},
                   {"best_epoch", r.best_epoch},
                   {"best_dev_eer", r.best_dev_eer},
                   {"checkpoint", tr_checkpoint}});
      return 0;
    }
    if (score->parsed()) {
      ScoreSet s = ScoreFeatures(sc_checkpoint, sc_features, Protocol(sc_protocol));
      WriteScores(fs::path(sc_out), s);
      report.Emit({{"event", "score"}, {"trials", s.size()}, {"out", sc_out}});
      return 0;
    }
    if (fuse->parsed()) {
      if (!(fu_weight >= 0.0 && fu_weight <= 1.0))
        Fail("fusion weight must lie in [0, 1], got ", fu_weight);
      ScoreSet s = FuseScores(ReadScores(fs::path(fu_a)), ReadScores(fs::path(fu_b)), fu_weight);
      WriteScores(fs::path(fu_out), s);
      report.Emit({{"event", "fuse"}, {"trials", s.size()}, {"weight", fu_weight},
                   {"out", fu_out}});
      return 0;
    }
    if (evaluate->parsed()) {
      ScoreSet s = ReadScores(fs::path(ev_scores));
      auto protocol = Protocol(ev_protocol);
      s.AttachLabels(protocol);
      std::optional<TdcfCostModel> cost;
      if (!ev_cost.empty()) cost = ReadCostModel(ev_cost);
      EvalReport r = Evaluate(s, cost, ev_det);
      json rec = {{"event", "evaluate"},
                  {"bonafide", r.bonafide},
                  {"spoof", r.spoof},
                  {"eer_percent", format == Format::kText ? json(Percent(r.eer.eer))
                                                          : json(100.0 * r.eer.eer)},
                  {"eer_threshold", r.eer.threshold}};
      if (r.tdcf) {
        rec["min_tdcf"] = r.tdcf->min_tdcf;
        rec["tdcf_threshold"] = r.tdcf->threshold;
      }
      if (format == Format::kText) {
        std::printf("EER %s (threshold %.6g)\n", Percent(r.eer.eer).c_str(), r.eer.threshold);
        if (r.tdcf)
          std::printf("min t-DCF %.6f (threshold %.6g)\n", r.tdcf->min_tdcf, r.tdcf->threshold);
        std::printf("trials bonafide=%zu spoof=%zu\n", r.bonafide, r.spoof);
      } else {
        report.Emit(rec);
      }
      return 0;
    }
    if (f0hist->parsed()) {
      auto hists = F0Histograms(Protocol(fh_protocol), fh_audio, f0cfg, fh_split, fh_jobs);
      fs::path out(fh_out);
      for (const auto &[name, h] : hists) {
        fs::path path = out;
        if (fh_split)
          path = out.parent_path() /
                 (out.stem().string() + "_" + name + out.extension().string());
        WriteHistogramCsv(path, h);
        HistogramSummary sum = SummarizeHistogram(h);
        report.Emit({{"event", "f0-hist"},
                     {"group", name},
                     {"utterances", h.n_utterances},
                     {"voiced_frames", h.Total()},
                     {"fraction_below_400", sum.fraction_below_400},
                     {"modal_bin_start_hz", sum.modal_bin_start_hz},
                     {"modal_bin_end_hz", sum.modal_bin_end_hz},
                     {"smoothness", sum.smoothness},
                     {"out", path.string()}});
      }
      return 0;
    }
    if (synth->parsed()) {
      auto records = WriteSynthCorpus(sy_out, sy);
      report.Emit({{"event", "synth-corpus"},
                   {"trials", records.size()},
                   {"split", sy.split},
                   {"protocol", (fs::path(sy_out) / ("protocol_" + sy.split + ".txt")).string()}});
      return 0;
    }
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
