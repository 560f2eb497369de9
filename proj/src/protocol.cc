// src/protocol.cc

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

#include "subspoof/protocol.h"

#include <fstream>
#include <sstream>
#include <unordered_set>

#include "subspoof/common.h"

namespace subspoof {

std::string_view LabelName(Label label) {
  return label == Label::kBonafide ? "bonafide" : "spoof";
}

std::vector<TrialRecord> ParseProtocol(std::istream &in) {
  std::vector<TrialRecord> records;
  std::unordered_set<std::string> seen;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::istringstream fields(line);
    std::vector<std::string> cols;
    for (std::string tok; fields >> tok;) cols.push_back(tok);
    if (cols.empty()) continue;
    if (cols.size() != 5)
      Fail("malformed protocol line ", line_no, ": expected 5 columns, got ",
           cols.size());

    TrialRecord rec;
    rec.speaker_id = cols[0];
    rec.trial_id = cols[1];
    rec.attack_id = cols[3];
    if (cols[4] == "bonafide") {
      rec.label = Label::kBonafide;
    } else if (cols[4] == "spoof") {
      rec.label = Label::kSpoof;
    } else {
      Fail("unknown key at line ", line_no, ": '", cols[4], "'");
    }
    if ((rec.label == Label::kBonafide) != (rec.attack_id == "-"))
      Fail("inconsistent attack id at line ", line_no, ": '", rec.attack_id,
           "' with key ", LabelName(rec.label));
    if (!seen.insert(rec.trial_id).second)
      Fail("duplicate trial id at line ", line_no, ": ", rec.trial_id);
    records.push_back(std::move(rec));
  }
  return records;
}

std::vector<TrialRecord> ParseProtocol(const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in) Fail("cannot open protocol file ", path.string());
  return ParseProtocol(in);
}

void WriteProtocol(const std::filesystem::path &path,
                   const std::vector<TrialRecord> &records) {
  std::ofstream os(path);
  if (!os) Fail("cannot open ", path.string(), " for writing");
  for (const auto &r : records)
    os << r.speaker_id << ' ' << r.trial_id << " - " << r.attack_id << ' '
       << LabelName(r.label) << '\n';
  if (!os) Fail("error writing ", path.string());
}

}  // namespace subspoof
