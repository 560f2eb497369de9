// include/subspoof/protocol.h

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

#ifndef SUBSPOOF_PROTOCOL_H_
#define SUBSPOOF_PROTOCOL_H_

#include <filesystem>
#include <istream>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace subspoof {

enum class Label { kBonafide, kSpoof };

std::string_view LabelName(Label label);

/// One line of an ASVspoof LA protocol:
///   speaker_id trial_id system_field attack_id key
/// e.g. "LA_0079 LA_T_1138215 - - bonafide".  The third column is ignored.
struct TrialRecord {
  std::string speaker_id;
  std::string trial_id;
  std::string attack_id;  // "-" for bonafide
  Label label = Label::kBonafide;
};

/// Parses protocol text.  Blank lines are skipped, CRLF is accepted, and order
/// is preserved.  Malformed lines throw an Error naming the 1-based line number.
std::vector<TrialRecord> ParseProtocol(std::istream &in);
std::vector<TrialRecord> ParseProtocol(const std::filesystem::path &path);

/// Writes records back in the same five-column layout.
void WriteProtocol(const std::filesystem::path &path,
                   const std::vector<TrialRecord> &records);

}  // namespace subspoof

#endif  // SUBSPOOF_PROTOCOL_H_
