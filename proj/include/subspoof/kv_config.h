// include/subspoof/kv_config.h

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

#ifndef SUBSPOOF_KV_CONFIG_H_
#define SUBSPOOF_KV_CONFIG_H_

#include <filesystem>
#include <istream>
#include <map>
#include <string>

namespace subspoof {

/// Plain-text "key = value" lines.  Blank lines and lines starting with '#'
/// are ignored; surrounding whitespace is trimmed.  A repeated key or a line
/// without '=' throws with the line number.
std::map<std::string, std::string> ParseKeyValue(std::istream &in);
std::map<std::string, std::string> ReadKeyValueFile(const std::filesystem::path &path);

}  // namespace subspoof

#endif  // SUBSPOOF_KV_CONFIG_H_
