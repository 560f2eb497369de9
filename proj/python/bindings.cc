// python/bindings.cc

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

// Python module subspoof._core: NumPy views of the feature, pitch, metric,
// fusion, corpus and scoring operations.

#include <pybind11/functional.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "subspoof/audio.h"
#include "subspoof/f0.h"
#include "subspoof/feature_io.h"
#include "subspoof/features.h"
#include "subspoof/fusion.h"
#include "subspoof/metrics.h"
#include "subspoof/net/checkpoint.h"
#include "subspoof/net/trainer.h"
#include "subspoof/pipeline.h"
#include "subspoof/protocol.h"
#include "subspoof/scores.h"
#include "subspoof/stft.h"
#include "subspoof/synth.h"

namespace py = pybind11;
using namespace subspoof;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

std::vector<double> ToVector(const Array &a) {
  if (a.ndim() != 1) throw py::value_error("expected a 1-D array");
  return {a.data(), a.data() + a.size()};
}

Array FromMatrix(const Matrix &m) {
  Array out({m.rows(), m.cols()});
  std::copy(m.data().begin(), m.data().end(), out.mutable_data());
  return out;
}

Matrix ToMatrix(const Array &a) {
  if (a.ndim() != 2) throw py::value_error("expected a 2-D array");
  Matrix m(a.shape(0), a.shape(1));
  std::copy(a.data(), a.data() + a.size(), m.data().begin());
  return m;
}

Waveform MakeWave(const Array &samples, int sample_rate_hz) {
  Waveform w;
  w.samples = ToVector(samples);
  w.sample_rate_hz = sample_rate_hz;
  return w;
}

StftConfig MakeStft(int window_len, int hop, int fft_len, int sample_rate_hz) {
  StftConfig c;
  c.window_len = window_len;
  c.hop = hop;
  c.fft_len = fft_len;
  c.sample_rate_hz = sample_rate_hz;
  return c;
}

ScoreSet ToScoreSet(const std::map<std::string, double> &scores) {
  ScoreSet s;
  for (const auto &[id, v] : scores) s.Add(id, v);
  return s;
}

std::map<std::string, double> FromScoreSet(const ScoreSet &s) {
  std::map<std::string, double> out;
  for (const auto &e : s.entries()) out[e.trial_id] = e.score;
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Subband spectral features, SENet scoring and evaluation for spoofing detection";
  py::register_exception<Error>(m, "SubspoofError", PyExc_RuntimeError);

  // -------------------------------------------------------------- spectral
  m.def(
      "stft",
      [](const Array &samples, int sample_rate_hz, int window_len, int hop, int fft_len) {
        ComplexSpectrogram s = Stft(MakeWave(samples, sample_rate_hz),
                                    MakeStft(window_len, hop, fft_len, sample_rate_hz));
        return py::make_tuple(FromMatrix(s.real), FromMatrix(s.imag));
      },
      py::arg("samples"), py::arg("sample_rate_hz") = 16000, py::arg("window_len") = 1728,
      py::arg("hop") = 130, py::arg("fft_len") = 1728,
      "Real and imaginary STFT parts, each bins x frames.");
  m.def("num_frames", [](std::size_t n) { return NumFrames(n, StftConfig{}); }, py::arg("num_samples"));
  m.def(
      "extract_feature",
      [](const Array &samples, const std::string &kind, const std::string &band, int frames,
         int sample_rate_hz) {
        ExtractOptions o;
        o.kind = ParseFeatureKind(kind);
        o.band = ParseBandName(band);
        o.frames = frames;
        o.stft.sample_rate_hz = sample_rate_hz;
        return FromMatrix(ExtractFeature(MakeWave(samples, sample_rate_hz), o).data);
      },
      py::arg("samples"), py::arg("kind") = "lps", py::arg("band") = "f0",
      py::arg("frames") = kDefaultFrames, py::arg("sample_rate_hz") = 16000,
      "Feature matrix (bins x frames) for kind lps/phase/real/imag/magnitude and band "
      "f0/rest/low/high/full.");
  m.def(
      "subband",
      [](const std::string &band, int num_bins) {
        SubbandSpec s = SubbandSpec::Named(ParseBandName(band), num_bins);
        return py::make_tuple(s.start_bin, s.end_bin);
      },
      py::arg("band"), py::arg("num_bins") = 865, "Half-open bin range [start, end) of a band.");

  // -------------------------------------------------------------- files
  m.def("read_wav", [](const std::filesystem::path &p) {
    Waveform w = DecodeAudio(p);
    return py::make_tuple(py::array_t<double>(w.samples.size(), w.samples.data()), w.sample_rate_hz);
  }, py::arg("path"));
  m.def(
      "write_wav",
      [](const std::filesystem::path &p, const Array &samples, int sample_rate_hz) {
        std::vector<double> v = ToVector(samples);
        WriteWav(p, v, sample_rate_hz);
      },
      py::arg("path"), py::arg("samples"), py::arg("sample_rate_hz") = 16000);
  m.def("read_feature_file", [](const std::filesystem::path &p) { return FromMatrix(ReadFeatureFile(p).data); },
        py::arg("path"));
  m.def(
      "write_feature_file",
      [](const std::filesystem::path &p, const Array &data, bool float64) {
        FeatureMatrix f;
        f.data = ToMatrix(data);
        f.band = SubbandSpec{BandName::kCustom, 0, static_cast<int>(f.data.rows())};
        WriteFeatureFile(f, p, float64 ? FeatureDtype::kFloat64 : FeatureDtype::kFloat32);
      },
      py::arg("path"), py::arg("data"), py::arg("float64") = false);
  m.def(
      "read_protocol",
      [](const std::filesystem::path &p) {
        std::vector<py::tuple> out;
        for (const auto &r : ParseProtocol(p))
          out.push_back(py::make_tuple(r.speaker_id, r.trial_id, r.attack_id,
                                       std::string(LabelName(r.label))));
        return out;
      },
      py::arg("path"), "List of (speaker, trial, attack, label) tuples.");
  m.def("read_scores", [](const std::filesystem::path &p) { return FromScoreSet(ReadScores(p)); },
        py::arg("path"));
  m.def(
      "write_scores",
      [](const std::filesystem::path &p, const std::map<std::string, double> &s) {
        WriteScores(p, ToScoreSet(s));
      },
      py::arg("path"), py::arg("scores"));

  // -------------------------------------------------------------- pitch
  m.def(
      "estimate_f0",
      [](const Array &samples, int sample_rate_hz, double voicing_threshold, double min_hz,
         double max_hz) {
        F0Config c;
        c.voicing_threshold = voicing_threshold;
        c.min_hz = min_hz;
        c.max_hz = max_hz;
        F0Contour f = EstimateF0(MakeWave(samples, sample_rate_hz), c);
        return py::array_t<double>(f.values.size(), f.values.data());
      },
      py::arg("samples"), py::arg("sample_rate_hz") = 16000, py::arg("voicing_threshold") = 0.3,
      py::arg("min_hz") = 50.0, py::arg("max_hz") = 500.0,
      "F0 per 10 ms frame in Hz; 0 marks unvoiced frames.");
  m.def(
      "f0_histogram",
      [](const std::vector<Array> &contours) {
        std::vector<F0Contour> cs;
        for (const auto &a : contours) {
          F0Contour c;
          c.values = ToVector(a);
          cs.push_back(std::move(c));
        }
        F0Histogram h = AccumulateHistogram(cs);
        HistogramSummary s = SummarizeHistogram(h);
        py::dict d;
        d["edges_hz"] = h.bin_edges_hz;
        d["counts"] = h.counts;
        d["fraction_below_400"] = s.fraction_below_400;
        d["modal_bin_hz"] = py::make_tuple(s.modal_bin_start_hz, s.modal_bin_end_hz);
        d["smoothness"] = s.smoothness;
        return d;
      },
      py::arg("contours"), "5 Hz histogram over 0-500 Hz of voiced frames plus its summary.");

  // -------------------------------------------------------------- scoring
  m.def(
      "compute_eer",
      [](const Array &bona, const Array &spoof) {
        EerResult r = ComputeEer(ToVector(bona), ToVector(spoof));
        return py::make_tuple(r.eer, r.threshold);
      },
      py::arg("bonafide"), py::arg("spoof"), "(EER in [0, 1], threshold).");
  m.def(
      "det_curve",
      [](const Array &bona, const Array &spoof) {
        DetCurve c = DetPoints(ToVector(bona), ToVector(spoof));
        return py::make_tuple(c.thresholds, c.far, c.frr);
      },
      py::arg("bonafide"), py::arg("spoof"));
  m.def(
      "compute_min_tdcf",
      [](const Array &bona, const Array &spoof, const std::map<std::string, std::string> &cost) {
        TdcfCostModel c = CostModelFromMap(cost);
        c.Validate();
        TdcfResult r = ComputeMinTdcf(ToVector(bona), ToVector(spoof), c);
        return py::make_tuple(r.min_tdcf, r.threshold);
      },
      py::arg("bonafide"), py::arg("spoof"), py::arg("cost"),
      "(min normalized t-DCF, threshold); cost holds the key=value cost-model entries.");
  m.def(
      "fuse",
      [](const std::map<std::string, double> &a, const std::map<std::string, double> &b,
         double weight) { return FromScoreSet(FuseScores(ToScoreSet(a), ToScoreSet(b), weight)); },
      py::arg("a"), py::arg("b"), py::arg("weight") = 0.5, "weight * a + (1 - weight) * b per trial.");
  m.def(
      "fuse_two_stage",
      [](const std::map<std::string, double> &imag_low,
         const std::map<std::string, double> &real_high, const std::map<std::string, double> &f0,
         double alpha, double beta) {
        return FromScoreSet(FuseTwoStage(ToScoreSet(imag_low), ToScoreSet(real_high),
                                         ToScoreSet(f0), {alpha, beta}));
      },
      py::arg("imag_low"), py::arg("real_high"), py::arg("f0"), py::arg("alpha") = 0.5,
      py::arg("beta") = 0.5);

  // -------------------------------------------------------------- corpus and model
  m.def(
      "synth_corpus",
      [](const std::filesystem::path &out_dir, int n_per_class, std::uint64_t seed,
         const std::string &split, double duration_s) {
        SynthConfig c;
        c.n_per_class = n_per_class;
        c.seed = seed;
        c.split = split;
        c.duration_s = duration_s;
        return WriteSynthCorpus(out_dir, c).size();
      },
      py::arg("out_dir"), py::arg("n_per_class") = 10, py::arg("seed") = 7,
      py::arg("split") = "train", py::arg("duration_s") = 2.0,
      "Writes <id>.wav files and protocol_<split>.txt; returns the trial count.");
  m.def("harmonic_tone", &HarmonicTone, py::arg("f0_hz"), py::arg("duration_s"),
        py::arg("sample_rate_hz") = 16000, py::arg("harmonics") = 6, py::arg("peak") = 0.5);
  m.def(
      "extract_corpus",
      [](const std::filesystem::path &protocol, const std::filesystem::path &audio_dir,
         const std::filesystem::path &out_dir, const std::string &kind, const std::string &band,
         int jobs) {
        ExtractOptions o;
        o.kind = ParseFeatureKind(kind);
        o.band = ParseBandName(band);
        o.jobs = jobs;
        ExtractReport r;
        {
          py::gil_scoped_release release;
          r = ExtractFeatures(ParseProtocol(protocol), audio_dir, out_dir, o);
        }
        std::vector<py::tuple> failures;
        for (const auto &f : r.failures) failures.push_back(py::make_tuple(f.trial_id, f.message));
        return py::make_tuple(r.written, failures);
      },
      py::arg("protocol"), py::arg("audio_dir"), py::arg("out_dir"), py::arg("kind") = "lps",
      py::arg("band") = "f0", py::arg("jobs") = 1, "(files written, [(trial, error), ...]).");
  m.def(
      "train",
      [](const std::filesystem::path &features_dir, const std::filesystem::path &protocol_train,
         const std::filesystem::path &protocol_dev, const std::filesystem::path &checkpoint,
         int epochs, double width_multiplier, std::uint64_t seed, double learning_rate,
         int batch_size) {
        net::SenetConfig s;
        s.width_multiplier = width_multiplier;
        net::TrainConfig tc;
        tc.epochs = epochs;
        tc.seed = seed;
        tc.adam.learning_rate = learning_rate;
        tc.batch_size = batch_size;
        auto train = LoadExamples(ParseProtocol(protocol_train), features_dir);
        auto dev = LoadExamples(ParseProtocol(protocol_dev), features_dir);
        net::TrainResult r;
        {
          py::gil_scoped_release release;
          r = TrainFromFeatures(train, dev, s, tc, checkpoint);
        }
        std::vector<py::tuple> log;
        for (const auto &e : r.log) log.push_back(py::make_tuple(e.epoch, e.train_loss, e.dev_eer));
        return py::make_tuple(log, r.best_epoch, r.best_dev_eer);
      },
      py::arg("features_dir"), py::arg("protocol_train"), py::arg("protocol_dev"),
      py::arg("checkpoint"), py::arg("epochs") = 32, py::arg("width_multiplier") = 1.0,
      py::arg("seed") = 1, py::arg("learning_rate") = 3e-4, py::arg("batch_size") = 8,
      "Trains a SENet on feature files; returns ([(epoch, loss, dev_eer)], best_epoch, best_eer).");
  m.def(
      "score_features",
      [](const std::filesystem::path &checkpoint, const std::filesystem::path &features_dir,
         const std::filesystem::path &protocol) {
        return FromScoreSet(ScoreFeatures(checkpoint, features_dir, ParseProtocol(protocol)));
      },
      py::arg("checkpoint"), py::arg("features_dir"), py::arg("protocol"));
  m.def(
      "score_matrices",
      [](const std::filesystem::path &checkpoint, const std::vector<Array> &features) {
        auto model = net::LoadModel(checkpoint);
        std::vector<Matrix> mats;
        for (const auto &a : features) mats.push_back(ToMatrix(a));
        std::vector<const Matrix *> ptrs;
        for (const auto &mm : mats) ptrs.push_back(&mm);
        return net::ScoreExamples(model.get(), std::span<const Matrix *const>(ptrs));
      },
      py::arg("checkpoint"), py::arg("features"), "Bona fide minus spoof logit per matrix.");
}
