// include/subspoof/scores.h

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

#ifndef SUBSPOOF_SCORES_H_
#define SUBSPOOF_SCORES_H_

#include <filesystem>
#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <unordered_map>
#include <vector>

#include "subspoof/protocol.h"

namespace subspoof {

struct ScoreEntry {
  std::string trial_id;
  double score = 0.0;
  std::optional<Label> label;
};

/// Per-trial detection scores; higher means more bonafide.  Insertion order
/// is kept so that files round-trip line for line.
class ScoreSet {
 public:
  /// Throws on a duplicate trial id or a non-finite score.
  void Add(const std::string &trial_id, double score,
           std::optional<Label> label = std::nullopt);

  bool Contains(const std::string &trial_id) const;
  const ScoreEntry &At(const std::string &trial_id) const;
  const std::vector<ScoreEntry> &entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }

  /// Sets labels from a protocol.  Trials absent from the protocol keep
  /// whatever label they had.
  void AttachLabels(const std::vector<TrialRecord> &protocol);

 private:
  std::vector<ScoreEntry> entries_;
  std::unordered_map<std::string, std::size_t> index_;
};

/// Score text: one "trial_id<TAB>score" per line, 17 significant digits.
ScoreSet ReadScores(std::istream &in);
ScoreSet ReadScores(const std::filesystem::path &path);
void WriteScores(std::ostream &os, const ScoreSet &set);
void WriteScores(const std::filesystem::path &path, const ScoreSet &set);

}  // namespace subspoof

#endif  // SUBSPOOF_SCORES_H_
