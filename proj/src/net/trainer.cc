// src/net/trainer.cc

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

#include "subspoof/net/trainer.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "subspoof/metrics.h"
#include "subspoof/net/asoftmax.h"

namespace subspoof::net {

double LambdaSchedule::At(std::uint64_t iteration) const {
  double v = base * std::pow(1.0 + gamma * static_cast<double>(iteration), -power);
  return std::max(min, v);
}

void TrainConfig::Validate() const {
  if (epochs < 1) Fail("epochs must be ≥ 1");
  if (batch_size < 1) Fail("batch size must be ≥ 1");
  if (margin < 1) Fail("A-Softmax margin must be ≥ 1");
  if (lambda.min < 0.0 || lambda.base < 0.0 || lambda.gamma < 0.0)
    Fail("lambda schedule terms must be ≥ 0");
  adam.Validate();
}

double LogLikelihoodRatio(double logit_bonafide, double logit_spoof) {
  // log p_b - log p_s; the normalizer cancels.
  return logit_bonafide - logit_spoof;
}

template <typename T>
Tensor4<T> StackFeatures(std::span<const Matrix *const> features) {
  if (features.empty()) Fail("cannot stack an empty batch");
  const std::size_t rows = features[0]->rows(), cols = features[0]->cols();
  Tensor4<T> x(static_cast<int>(features.size()), 1, static_cast<int>(rows),
               static_cast<int>(cols));
  for (std::size_t n = 0; n < features.size(); ++n) {
    const Matrix &m = *features[n];
    if (m.rows() != rows || m.cols() != cols)
      Fail("feature shape ", m.rows(), "x", m.cols(), " differs from ", rows, "x", cols);
    T *dst = x.Sample(static_cast<int>(n));
    for (std::size_t i = 0; i < m.size(); ++i) dst[i] = static_cast<T>(m.data()[i]);
  }
  return x;
}

namespace {

void CheckShapes(std::span<const Example> set, std::size_t rows, std::size_t cols,
                 const char *what) {
  for (const auto &e : set)
    if (e.features.rows() != rows || e.features.cols() != cols)
      Fail(what, " trial ", e.trial_id, " has shape ", e.features.rows(), "x",
           e.features.cols(), ", expected ", rows, "x", cols);
}

template <typename T>
double DevEer(Senet<T> *model, std::span<const Example> dev) {
  std::vector<const Matrix *> feats;
  for (const auto &e : dev) feats.push_back(&e.features);
  std::vector<double> scores = ScoreExamples(model, feats);
  std::vector<double> bona, spoof;
  for (std::size_t i = 0; i < dev.size(); ++i)
    (dev[i].label == Label::kBonafide ? bona : spoof).push_back(scores[i]);
  return ComputeEer(bona, spoof).eer;
}

template <typename T>
struct OptimizerState {
  std::vector<Tensor4<T>> m, v;
  std::uint64_t step = 0;
};

}  // namespace

template <typename T>
std::vector<double> ScoreExamples(Senet<T> *model, std::span<const Matrix *const> features,
                                  int batch_size) {
  if (batch_size < 1) Fail("batch size must be ≥ 1");
  std::vector<double> scores;
  scores.reserve(features.size());
  const int k = model->config().num_classes;
  for (std::size_t start = 0; start < features.size(); start += batch_size) {
    std::size_t end = std::min(features.size(), start + batch_size);
    Tensor4<T> x = StackFeatures<T>(features.subspan(start, end - start));
    std::vector<double> logits = model->Forward(x, Mode::kEval);
    for (std::size_t n = 0; n < end - start; ++n)
      scores.push_back(LogLikelihoodRatio(logits[n * k], logits[n * k + 1]));
  }
  return scores;
}

template <typename T>
TrainResult Train(Senet<T> *model, Adam<T> *optimizer, std::span<const Example> train,
                  std::span<const Example> dev, const TrainConfig &tc,
                  const std::function<void(const EpochLog &)> &on_epoch) {
  tc.Validate();
  if (train.empty()) Fail("training set is empty");
  if (dev.empty()) Fail("development set is empty");
  const std::size_t rows = train[0].features.rows(), cols = train[0].features.cols();
  CheckShapes(train, rows, cols, "training");
  CheckShapes(dev, rows, cols, "development");
  bool dev_bona = false, dev_spoof = false;
  for (const auto &e : dev) (e.label == Label::kBonafide ? dev_bona : dev_spoof) = true;
  if (!dev_bona || !dev_spoof)
    Fail("development set needs both bonafide and spoof trials");

  std::mt19937_64 rng(tc.seed);
  std::vector<std::size_t> order(train.size());
  std::iota(order.begin(), order.end(), 0);

  TrainResult result;
  ModelSnapshot<T> best_model = TakeSnapshot(*model);
  OptimizerState<T> best_opt{optimizer->first_moments(), optimizer->second_moments(),
                             optimizer->step_count()};

  for (int epoch = 1; epoch <= tc.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    double loss_sum = 0.0;
    std::size_t seen = 0;
    for (std::size_t start = 0; start < order.size(); start += tc.batch_size) {
      std::size_t end = std::min(order.size(), start + tc.batch_size);
      std::vector<const Matrix *> feats;
      std::vector<int> labels;
      for (std::size_t i = start; i < end; ++i) {
        feats.push_back(&train[order[i]].features);
        labels.push_back(ClassIndex(train[order[i]].label));
      }
      Tensor4<T> x = StackFeatures<T>(feats);
      model->ZeroGrad();
      Tensor4<T> emb = model->Embed(x, Mode::kTrain);
      const double lambda = tc.lambda.At(optimizer->step_count());
      ASoftmaxResult<T> res =
          ASoftmaxLoss(emb, labels, model->head().value, tc.margin, lambda);
      if (!std::isfinite(res.loss)) {
        std::string ids;
        for (std::size_t i = start; i < end; ++i)
          ids += (ids.empty() ? "" : ",") + train[order[i]].trial_id;
        Fail("non-finite training loss at epoch ", epoch, ", step ",
             optimizer->step_count() + 1, " (lambda ", lambda, ", batch ", ids, ")");
      }
      model->head().grad = res.d_weight;
      model->BackwardEmbed(res.d_embedding);
      optimizer->Step();
      loss_sum += res.loss * static_cast<double>(end - start);
      seen += end - start;
    }

    EpochLog entry{epoch, loss_sum / static_cast<double>(seen), DevEer(model, dev)};
    result.log.push_back(entry);
    if (on_epoch) on_epoch(entry);
    if (result.best_epoch == 0 || entry.dev_eer < result.best_dev_eer) {
      result.best_epoch = epoch;
      result.best_dev_eer = entry.dev_eer;
      best_model = TakeSnapshot(*model);
      best_opt = {optimizer->first_moments(), optimizer->second_moments(),
                  optimizer->step_count()};
    }
  }

  RestoreSnapshot(best_model, model);
  optimizer->first_moments() = std::move(best_opt.m);
  optimizer->second_moments() = std::move(best_opt.v);
  optimizer->set_step_count(best_opt.step);
  return result;
}

#define SUBSPOOF_INSTANTIATE(T)                                                         \
  template Tensor4<T> StackFeatures<T>(std::span<const Matrix *const>);                \
  template TrainResult Train<T>(Senet<T> *, Adam<T> *, std::span<const Example>,       \
                                std::span<const Example>, const TrainConfig &,         \
                                const std::function<void(const EpochLog &)> &);        \
  template std::vector<double> ScoreExamples<T>(Senet<T> *,                            \
                                                std::span<const Matrix *const>, int);

SUBSPOOF_INSTANTIATE(float)
SUBSPOOF_INSTANTIATE(double)

}  // namespace subspoof::net
