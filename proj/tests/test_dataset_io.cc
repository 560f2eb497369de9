// tests/test_dataset_io.cc

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
#include <functional>
#include <fstream>
#include <random>
#include <sstream>

#include "doctest.h"
#include "subspoof/audio.h"
#include "subspoof/binary.h"
#include "subspoof/feature_io.h"
#include "subspoof/kv_config.h"
#include "subspoof/protocol.h"
#include "subspoof/scores.h"
#include "test_util.h"

using namespace subspoof;

namespace {

std::vector<TrialRecord> ParseText(const std::string &text) {
  std::istringstream in(text);
  return ParseProtocol(in);
}

std::string ErrorOf(const std::function<void()> &fn) {
  try {
    fn();
  } catch (const Error &e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("16-bit WAV header round trip keeps length and rate") {
  testutil::TempDir dir("wav");
  std::vector<double> x(64600);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-0.9, 0.9);
  for (auto &v : x) v = u(rng);
  WriteWav(dir / "a.wav", x, 16000);
  Waveform w = DecodeAudio(dir / "a.wav");
  CHECK(w.samples.size() == 64600);
  CHECK(w.sample_rate_hz == 16000);
  double worst = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) worst = std::max(worst, std::abs(w.samples[i] - x[i]));
  CHECK(worst <= 1.0 / 32768.0);
}

TEST_CASE("decoded samples stay within one LSB for every PCM encoding") {
  testutil::TempDir dir("enc");
  std::vector<double> x(1000);
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (auto &v : x) v = u(rng);
  struct Case {
    PcmEncoding enc;
    double lsb;
  } cases[] = {{PcmEncoding::kInt16, 1.0 / 32768},
               {PcmEncoding::kInt24, 1.0 / 8388608},
               {PcmEncoding::kInt32, 1.0 / 2147483648.0},
               {PcmEncoding::kFloat32, 1e-7}};
  for (const auto &c : cases) {
    WriteWav(dir / "e.wav", x, 16000, 1, c.enc);
    Waveform w = DecodeAudio(dir / "e.wav");
    REQUIRE(w.samples.size() == x.size());
    for (std::size_t i = 0; i < x.size(); ++i) CHECK(std::abs(w.samples[i] - x[i]) <= c.lsb);
  }
}

TEST_CASE("all-zero one-second payload decodes to zeros") {
  testutil::TempDir dir("zero");
  WriteWav(dir / "z.wav", std::vector<double>(16000, 0.0), 16000);
  Waveform w = DecodeAudio(dir / "z.wav");
  CHECK(w.samples.size() == 16000);
  for (double v : w.samples) CHECK(v == 0.0);
}

TEST_CASE("stereo channels are averaged to mono") {
  testutil::TempDir dir("stereo");
  std::vector<double> inter;
  for (int i = 0; i < 800; ++i) {
    inter.push_back(0.5);
    inter.push_back(-0.5);
  }
  WriteWav(dir / "s.wav", inter, 16000, 2);
  Waveform w = DecodeAudio(dir / "s.wav");
  CHECK(w.samples.size() == 800);
  for (double v : w.samples) CHECK(v == 0.0);
}

TEST_CASE("unsupported and empty audio is rejected") {
  testutil::TempDir dir("bad");
  std::ofstream(dir / "x.wav") << "not a wave file at all";
  CHECK(ErrorOf([&] { DecodeAudio(dir / "x.wav"); }).find("unsupported encoding") !=
        std::string::npos);
  std::ofstream(dir / "f.flac") << "fLaC\0\0\0\0";
  if (!FlacSupported())
    CHECK(ErrorOf([&] { DecodeAudio(dir / "f.flac"); }).find("FLAC") != std::string::npos);
  WriteWav(dir / "e.wav", std::vector<double>{}, 16000);
  CHECK(ErrorOf([&] { DecodeAudio(dir / "e.wav"); }).find("zero-length") != std::string::npos);
  CHECK_THROWS_AS(DecodeAudio(dir / "missing.wav"), Error);
}

TEST_CASE("protocol lines parse into trial records") {
  auto recs = ParseText(
      "LA_0079 LA_T_1138215 - - bonafide\r\n\nLA_0001 LA_E_5916365 - A17 spoof\n");
  REQUIRE(recs.size() == 2);
  CHECK(recs[0].speaker_id == "LA_0079");
  CHECK(recs[0].trial_id == "LA_T_1138215");
  CHECK(recs[0].attack_id == "-");
  CHECK(recs[0].label == Label::kBonafide);
  CHECK(recs[1].attack_id == "A17");
  CHECK(recs[1].label == Label::kSpoof);
}

TEST_CASE("protocol errors name the line") {
  CHECK(ErrorOf([] { ParseText("a b - - bonafide\nx y - - genuine\n"); }) ==
        "unknown key at line 2: 'genuine'");
  CHECK(ErrorOf([] { ParseText("a b - bonafide\n"); }).find("line 1") != std::string::npos);
  CHECK(ErrorOf([] { ParseText("a b - A01 bonafide\n"); }).find("line 1") != std::string::npos);
  CHECK(ErrorOf([] { ParseText("a b - - spoof\n"); }).find("line 1") != std::string::npos);
  CHECK(ErrorOf([] { ParseText("a b - - bonafide\nc b - A01 spoof\n"); })
            .find("duplicate trial id at line 2") != std::string::npos);
}

TEST_CASE("protocol write/parse round trip") {
  testutil::TempDir dir("proto");
  std::vector<TrialRecord> recs = {{"S1", "T1", "-", Label::kBonafide},
                                   {"S2", "T2", "A19", Label::kSpoof}};
  WriteProtocol(dir / "p.txt", recs);
  auto back = ParseProtocol(dir / "p.txt");
  REQUIRE(back.size() == 2);
  for (std::size_t i = 0; i < 2; ++i) {
    CHECK(back[i].speaker_id == recs[i].speaker_id);
    CHECK(back[i].trial_id == recs[i].trial_id);
    CHECK(back[i].attack_id == recs[i].attack_id);
    CHECK(back[i].label == recs[i].label);
  }
}

TEST_CASE("feature file size and bit-exact round trip") {
  testutil::TempDir dir("feat");
  std::mt19937_64 rng(5);
  std::normal_distribution<double> g(0.0, 3.0);
  FeatureMatrix m;
  m.data = Matrix(45, 600);
  for (auto &v : m.data.data()) v = static_cast<float>(g(rng));
  WriteFeatureFile(m, dir / "a.sbsf");
  CHECK(std::filesystem::file_size(dir / "a.sbsf") == kFeatureHeaderBytes + 45 * 600 * 4);
  CHECK(ReadFeatureFile(dir / "a.sbsf").data == m.data);

  FeatureMatrix big;
  big.data = Matrix(865, 600);
  for (auto &v : big.data.data()) v = g(rng);
  WriteFeatureFile(big, dir / "b.sbsf", FeatureDtype::kFloat64);
  FeatureMatrix back = ReadFeatureFile(dir / "b.sbsf");
  CHECK(back.data == big.data);
  CHECK(back.trial_id == "b");
  CHECK(back.rows() == 865);
}

TEST_CASE("truncated and corrupt feature files are rejected") {
  Matrix m(4, 5, 1.5);
  auto bytes = EncodeFeatureFile(m);
  auto cut = std::vector<std::uint8_t>(bytes.begin(), bytes.end() - 3);
  CHECK(ErrorOf([&] { DecodeFeatureFile(cut); }) == "feature file: unexpected end of payload");
  auto bad = bytes;
  bad[0] = 'X';
  CHECK_THROWS_WITH(DecodeFeatureFile(bad), "feature file: bad magic");
  auto extra = bytes;
  extra.push_back(0);
  CHECK_THROWS_AS(DecodeFeatureFile(extra), Error);
  Matrix inf(1, 1, INFINITY);
  FeatureMatrix fm{inf, FeatureKind::kLps, {}, ""};
  testutil::TempDir dir("featbad");
  CHECK_THROWS_AS(WriteFeatureFile(fm, dir / "x.sbsf"), Error);
}

TEST_CASE("score text round trip and rejections") {
  std::istringstream in("LA_E_1027220\t-3.25\n");
  ScoreSet s = ReadScores(in);
  REQUIRE(s.size() == 1);
  CHECK(s.At("LA_E_1027220").score == -3.25);

  std::istringstream empty("");
  CHECK(ReadScores(empty).empty());

  std::istringstream dup("a\t1\na\t2\n");
  CHECK_THROWS_AS(ReadScores(dup), Error);
  std::istringstream nonnum("a\tabc\n");
  CHECK_THROWS_AS(ReadScores(nonnum), Error);

  ScoreSet r;
  std::mt19937_64 rng(6);
  std::normal_distribution<double> g(0.0, 10.0);
  for (int i = 0; i < 500; ++i) r.Add("t" + std::to_string(i), g(rng));
  std::stringstream io;
  WriteScores(io, r);
  ScoreSet back = ReadScores(io);
  REQUIRE(back.size() == r.size());
  for (std::size_t i = 0; i < r.size(); ++i) {
    CHECK(back.entries()[i].trial_id == r.entries()[i].trial_id);
    CHECK(back.entries()[i].score == r.entries()[i].score);
  }
}

TEST_CASE("key=value config parsing") {
  std::istringstream in("# costs\n p_target = 0.9405 \n\nc_fa_cm=10\n");
  auto kv = ParseKeyValue(in);
  CHECK(kv.at("p_target") == "0.9405");
  CHECK(kv.at("c_fa_cm") == "10");
  std::istringstream rep("a=1\na=2\n");
  CHECK_THROWS_AS(ParseKeyValue(rep), Error);
  std::istringstream noeq("a\n");
  CHECK_THROWS_AS(ParseKeyValue(noeq), Error);
}

TEST_CASE("byte reader reports running past the end") {
  std::vector<std::uint8_t> b = {1, 2, 3};
  ByteReader r(b);
  CHECK(r.U16() == 0x0201);
  CHECK_THROWS_WITH(r.U32(), "unexpected end of payload");
}
