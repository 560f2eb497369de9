// tests/test_net.cc

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

#include <cmath>
#include <fstream>
#include <random>
#include <set>

#include "doctest.h"
#include "oracles.h"
#include "subspoof/binary.h"
#include "subspoof/net/adam.h"
#include "subspoof/net/asoftmax.h"
#include "subspoof/net/checkpoint.h"
#include "subspoof/net/senet.h"
#include "subspoof/net/trainer.h"
#include "test_util.h"

using namespace subspoof;
using namespace subspoof::net;
using oracle::NumericGradient;
using oracle::RandomTensor;
using oracle::RelativeError;

namespace {

SenetConfig TinyConfig() {
  SenetConfig c;
  c.stages = {{1, 8, 1}, {2, 16, 2}};
  c.se_reduction = 4;
  return c;
}

// Bona fide examples carry a bright band in the low rows, spoofed ones in the
// high rows; the rest is noise.
std::vector<Example> ToySet(int per_class, std::uint64_t seed, int rows = 32, int cols = 32) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> noise(0.0, 0.3);
  std::vector<Example> out;
  for (int i = 0; i < 2 * per_class; ++i) {
    Example e;
    e.label = i % 2 == 0 ? Label::kBonafide : Label::kSpoof;
    e.trial_id = "T" + std::to_string(i);
    e.features = Matrix(rows, cols);
    for (int r = 0; r < rows; ++r)
      for (int c = 0; c < cols; ++c) {
        bool band = e.label == Label::kBonafide ? r < rows / 4 : r >= 3 * rows / 4;
        e.features(r, c) = noise(rng) + (band ? 2.0 : 0.0);
      }
    out.push_back(std::move(e));
  }
  return out;
}

std::vector<const Matrix *> Pointers(const std::vector<Example> &set) {
  std::vector<const Matrix *> p;
  for (const auto &e : set) p.push_back(&e.features);
  return p;
}

}  // namespace

TEST_CASE("default network maps 2x1x45x600 to 2x2 logits") {
  Senet<float> model{SenetConfig{}};
  model.Init(3);
  CHECK(model.config().EmbeddingDim() == 128);
  Tensor4<float> x(2, 1, 45, 600, 0.1f);
  std::vector<double> logits = model.Forward(x, Mode::kEval);
  CHECK(logits.size() == 4);
  for (double v : logits) CHECK(std::isfinite(v));
}

TEST_CASE("inputs too small for the stride schedule are rejected") {
  Senet<float> model{SenetConfig{}};
  try {
    model.Forward(Tensor4<float>(1, 1, 20, 600), Mode::kEval);
    FAIL("expected an error");
  } catch (const Error &e) {
    CHECK(std::string(e.what()).find("too small") != std::string::npos);
  }
  CHECK_THROWS_AS(model.Forward(Tensor4<float>(1, 2, 45, 600), Mode::kEval), Error);
}

TEST_CASE("config text round trip and width scaling") {
  SenetConfig c = TinyConfig();
  c.width_multiplier = 0.3;
  CHECK(SenetConfig::Deserialize(c.Serialize()) == c);
  CHECK(c.Scaled(16) == 5);
  CHECK(c.Scaled(1) == 1);
  CHECK_THROWS_AS(SenetConfig::Deserialize("in_channels=1\n"), Error);
  SenetConfig bad;
  bad.stages.clear();
  CHECK_THROWS_AS(bad.Validate(), Error);
}

TEST_CASE("initialization is deterministic in the seed") {
  Senet<float> a(TinyConfig()), b(TinyConfig()), c(TinyConfig());
  a.Init(5);
  b.Init(5);
  c.Init(6);
  CHECK(TakeSnapshot(a).tensors == TakeSnapshot(b).tensors);
  CHECK(TakeSnapshot(a).tensors != TakeSnapshot(c).tensors);
}

TEST_CASE("end-to-end network gradients match central differences") {
  std::mt19937_64 rng(13);
  Senet<double> model(TinyConfig());
  model.Init(2);
  Tensor4<double> x = RandomTensor(2, 1, 32, 32, rng);
  std::vector<int> labels{0, 1};
  auto loss = [&] {
    Tensor4<double> e = model.Embed(x, Mode::kTrain);
    return ASoftmaxLoss(e, labels, model.head().value, 4, 5.0).loss;
  };
  model.ZeroGrad();
  Tensor4<double> e = model.Embed(x, Mode::kTrain);
  auto res = ASoftmaxLoss(e, labels, model.head().value, 4, 5.0);
  model.head().grad = res.d_weight;
  Tensor4<double> dx = model.BackwardEmbed(res.d_embedding);
  CHECK(RelativeError(dx.vec(), NumericGradient(&x, loss)) <= 1e-4);
  for (auto *p : model.Params()) {
    if (p->name != "stem.conv.weight" && p->name != "head.weight" &&
        p->name != "layer2.1.fc2.weight" && p->name != "layer1.0.conv1.weight")
      continue;
    INFO("parameter " << p->name);
    std::vector<double> analytic = p->grad.vec();
    CHECK(RelativeError(analytic, NumericGradient(&p->value, loss)) <= 1e-4);
  }
}

TEST_CASE("parameter names are unique and buffers follow batchnorm naming") {
  Senet<float> model{SenetConfig{}};
  std::set<std::string> names;
  for (auto *p : model.Params()) CHECK(names.insert(p->name).second);
  for (auto *b : model.Buffers()) {
    CHECK(names.insert(b->name).second);
    CHECK((b->name.ends_with(".running_mean") || b->name.ends_with(".running_var")));
  }
}

TEST_CASE("batch scoring equals per-trial scoring") {
  Senet<float> model(TinyConfig());
  model.Init(4);
  auto set = ToySet(5, 9);
  auto ptrs = Pointers(set);
  std::vector<double> batched = ScoreExamples(&model, std::span<const Matrix *const>(ptrs), 4);
  REQUIRE(batched.size() == set.size());
  for (std::size_t i = 0; i < set.size(); ++i) {
    const Matrix *one = ptrs[i];
    auto single = ScoreExamples(&model, std::span<const Matrix *const>(&one, 1), 1);
    CHECK(single[0] == batched[i]);
  }
}

TEST_CASE("score is the bona fide minus spoof logit") {
  CHECK(LogLikelihoodRatio(1.0, 1.0) == 0.0);
  CHECK(LogLikelihoodRatio(2.0, 0.0) == 2.0);
  CHECK(ClassIndex(Label::kBonafide) == 0);
  CHECK(ClassIndex(Label::kSpoof) == 1);
}

TEST_CASE("lambda schedule anneals to its floor") {
  LambdaSchedule s;
  CHECK(s.At(0) == 1000.0);
  CHECK(s.At(100) == doctest::Approx(1000.0 / 13.0));
  CHECK(s.At(1000000) == 5.0);
  double prev = s.At(0);
  for (std::uint64_t i = 1; i < 5000; i += 7) {
    CHECK(s.At(i) <= prev);
    prev = s.At(i);
  }
}

TEST_CASE("Adam with zero learning rate leaves parameters unchanged") {
  Senet<float> model(TinyConfig());
  model.Init(1);
  auto before = TakeSnapshot(model).tensors;
  AdamConfig cfg;
  cfg.learning_rate = 0.0;
  Adam<float> adam(model.Params(), cfg);
  for (auto *p : model.Params()) p->grad.Fill(1.0f);
  adam.Step();
  CHECK(TakeSnapshot(model).tensors == before);
  CHECK(adam.step_count() == 1);
}

TEST_CASE("Adam matches a scalar reference with decoupled decay") {
  Param<double> p;
  p.Reset("w", Tensor4<double>(1, 1, 1, 2), true);
  p.value[0] = 1.0;
  p.value[1] = -2.0;
  Param<double> q;
  q.Reset("b", Tensor4<double>(1, 1, 1, 1), false);
  q.value[0] = 0.5;
  AdamConfig cfg;
  cfg.learning_rate = 0.01;
  cfg.weight_decay = 0.1;
  Adam<double> adam({&p, &q}, cfg);
  double w = 1.0, m = 0.0, v = 0.0, b = 0.5, mb = 0.0, vb = 0.0;
  for (int t = 1; t <= 5; ++t) {
    double g = 0.3 * t, gb = -0.2;
    p.grad[0] = g;
    p.grad[1] = 0.0;
    q.grad[0] = gb;
    adam.Step();
    m = 0.9 * m + 0.1 * g;
    v = 0.98 * v + 0.02 * g * g;
    double mh = m / (1 - std::pow(0.9, t)), vh = v / (1 - std::pow(0.98, t));
    w -= 0.01 * mh / (std::sqrt(vh) + 1e-9) + 0.01 * 0.1 * w;
    mb = 0.9 * mb + 0.1 * gb;
    vb = 0.98 * vb + 0.02 * gb * gb;
    mh = mb / (1 - std::pow(0.9, t));
    vh = vb / (1 - std::pow(0.98, t));
    b -= 0.01 * mh / (std::sqrt(vh) + 1e-9);
    CHECK(p.value[0] == doctest::Approx(w).epsilon(1e-12));
    CHECK(q.value[0] == doctest::Approx(b).epsilon(1e-12));
  }
  AdamConfig bad;
  bad.beta1 = 1.0;
  CHECK_THROWS_AS(bad.Validate(), Error);
}

TEST_CASE("one small Adam step decreases the training loss") {
  Senet<double> model(TinyConfig());
  model.Init(3);
  auto set = ToySet(4, 17);
  auto ptrs = Pointers(set);
  Tensor4<double> x = StackFeatures<double>(std::span<const Matrix *const>(ptrs));
  std::vector<int> labels;
  for (const auto &e : set) labels.push_back(ClassIndex(e.label));
  auto loss = [&] {
    return ASoftmaxLoss(model.Embed(x, Mode::kTrain), labels, model.head().value, 4, 5.0).loss;
  };
  // Drop the batchnorm running-stat effect by comparing train-mode losses.
  double before = loss();
  AdamConfig cfg;
  cfg.learning_rate = 1e-3;
  Adam<double> adam(model.Params(), cfg);
  model.ZeroGrad();
  auto res = ASoftmaxLoss(model.Embed(x, Mode::kTrain), labels, model.head().value, 4, 5.0);
  model.head().grad = res.d_weight;
  model.BackwardEmbed(res.d_embedding);
  adam.Step();
  CHECK(loss() < before);
}

TEST_CASE("training separates a toy set within five epochs and is reproducible") {
  auto train = ToySet(16, 21), dev = ToySet(8, 22);
  TrainConfig tc;
  tc.epochs = 5;
  tc.adam.learning_rate = 3e-3;
  auto run = [&] {
    Senet<float> model(TinyConfig());
    model.Init(tc.seed);
    Adam<float> adam(model.Params(), tc.adam);
    TrainResult r = Train(&model, &adam, std::span<const Example>(train),
                          std::span<const Example>(dev), tc);
    auto ptrs = Pointers(dev);
    return std::pair{r, ScoreExamples(&model, std::span<const Matrix *const>(ptrs))};
  };
  auto [r1, s1] = run();
  auto [r2, s2] = run();
  REQUIRE(r1.log.size() == 5);
  CHECK(r1.best_dev_eer == 0.0);
  CHECK(r1.log == r2.log);
  CHECK(s1 == s2);
  for (const auto &e : r1.log) CHECK(std::isfinite(e.train_loss));
  TrainConfig bad = tc;
  bad.epochs = 0;
  CHECK_THROWS_WITH_AS(bad.Validate(), "epochs must be ≥ 1", Error);
}

TEST_CASE("checkpoint round trip is exact") {
  testutil::TempDir dir("ckpt");
  Senet<float> model(TinyConfig());
  model.Init(8);
  for (auto *b : model.Buffers())
    for (auto &v : b->value.vec()) v += 0.25f;
  Adam<float> adam(model.Params(), AdamConfig{});
  for (auto *p : model.Params()) p->grad.Fill(0.5f);
  adam.Step();
  SaveCheckpoint(dir / "m.ckpt", model, &adam);

  Senet<float> loaded(ReadCheckpointConfig(dir / "m.ckpt"));
  Adam<float> adam2(loaded.Params(), AdamConfig{});
  LoadCheckpoint(dir / "m.ckpt", &loaded, &adam2);
  CHECK(TakeSnapshot(loaded).tensors == TakeSnapshot(model).tensors);
  CHECK(adam2.step_count() == adam.step_count());
  CHECK(adam2.first_moments() == adam.first_moments());
  CHECK(adam2.second_moments() == adam.second_moments());

  auto set = ToySet(3, 5);
  auto ptrs = Pointers(set);
  auto restored = LoadModel(dir / "m.ckpt");
  CHECK(ScoreExamples(restored.get(), std::span<const Matrix *const>(ptrs)) ==
        ScoreExamples(&model, std::span<const Matrix *const>(ptrs)));
}

TEST_CASE("checkpoint load failures name the problem and leave the model untouched") {
  testutil::TempDir dir("ckpt_bad");
  Senet<float> model(TinyConfig());
  model.Init(8);
  SaveCheckpoint(dir / "m.ckpt", model);

  SenetConfig other = TinyConfig();
  other.stages[1].channels = 24;
  Senet<float> wrong(other);
  wrong.Init(1);
  auto before = TakeSnapshot(wrong).tensors;
  try {
    LoadCheckpoint(dir / "m.ckpt", &wrong);
    FAIL("expected a shape error");
  } catch (const Error &e) {
    std::string msg = e.what();
    CHECK(msg.find("tensor param:layer2.0.") != std::string::npos);
    CHECK(msg.find("has shape") != std::string::npos);
  }
  CHECK(TakeSnapshot(wrong).tensors == before);

  std::vector<std::uint8_t> bytes = ReadFileBytes(dir / "m.ckpt");
  bytes.resize(bytes.size() - 10);
  WriteFileBytes(dir / "cut.ckpt", bytes);
  Senet<float> same(TinyConfig());
  same.Init(1);
  before = TakeSnapshot(same).tensors;
  CHECK_THROWS_WITH_AS(LoadCheckpoint(dir / "cut.ckpt", &same),
                       doctest::Contains("unexpected end of payload"), Error);
  CHECK(TakeSnapshot(same).tensors == before);

  bytes[0] = 'X';
  WriteFileBytes(dir / "magic.ckpt", bytes);
  CHECK_THROWS_AS(LoadCheckpoint(dir / "magic.ckpt", &same), Error);
}
