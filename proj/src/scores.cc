// src/scores.cc

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

#include "subspoof/scores.h"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "subspoof/common.h"

namespace subspoof {

void ScoreSet::Add(const std::string &trial_id, double score,
                   std::optional<Label> label) {
  if (!std::isfinite(score)) Fail("non-finite score for trial ", trial_id);
  auto [it, inserted] = index_.emplace(trial_id, entries_.size());
  if (!inserted) Fail("duplicate trial id in score set: ", trial_id);
  entries_.push_back({trial_id, score, label});
}

bool ScoreSet::Contains(const std::string &trial_id) const {
  return index_.count(trial_id) != 0;
}

const ScoreEntry &ScoreSet::At(const std::string &trial_id) const {
  auto it = index_.find(trial_id);
  if (it == index_.end()) Fail("trial not in score set: ", trial_id);
  return entries_[it->second];
}

void ScoreSet::AttachLabels(const std::vector<TrialRecord> &protocol) {
  for (const auto &rec : protocol) {
    auto it = index_.find(rec.trial_id);
    if (it != index_.end()) entries_[it->second].label = rec.label;
  }
}

ScoreSet ReadScores(std::istream &in) {
  ScoreSet set;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::istringstream fields(line);
    std::string id, value, extra;
    if (!(fields >> id)) continue;
    if (!(fields >> value) || (fields >> extra))
      Fail("malformed score line ", line_no, ": expected 'trial_id<TAB>score'");
    double score = 0.0;
    const char *first = value.data();
    const char *last = first + value.size();
    auto [ptr, ec] = std::from_chars(first, last, score);
    if (ec != std::errc() || ptr != last)
      Fail("non-numeric score at line ", line_no, ": '", value, "'");
    try {
      set.Add(id, score);
    } catch (const Error &e) {
      Fail(e.what(), " (line ", line_no, ")");
    }
  }
  return set;
}

ScoreSet ReadScores(const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in) Fail("cannot open score file ", path.string());
  return ReadScores(in);
}

void WriteScores(std::ostream &os, const ScoreSet &set) {
  char buf[64];
  for (const auto &e : set.entries()) {
    std::snprintf(buf, sizeof buf, "%.17g", e.score);
    os << e.trial_id << '\t' << buf << '\n';
  }
}

void WriteScores(const std::filesystem::path &path, const ScoreSet &set) {
  std::ofstream os(path);
  if (!os) Fail("cannot open ", path.string(), " for writing");
  WriteScores(os, set);
  if (!os) Fail("error writing ", path.string());
}

}  // namespace subspoof
