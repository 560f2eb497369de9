// src/kv_config.cc

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

#include "subspoof/kv_config.h"

#include <fstream>

#include "subspoof/common.h"

namespace subspoof {

namespace {
std::string Trim(const std::string &s) {
  const char *ws = " \t\r\n";
  auto b = s.find_first_not_of(ws);
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}
}  // namespace

std::map<std::string, std::string> ParseKeyValue(std::istream &in) {
  std::map<std::string, std::string> kv;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string t = Trim(line);
    if (t.empty() || t[0] == '#') continue;
    auto eq = t.find('=');
    if (eq == std::string::npos) Fail("config line ", line_no, ": expected key=value");
    std::string key = Trim(t.substr(0, eq));
    std::string value = Trim(t.substr(eq + 1));
    if (key.empty()) Fail("config line ", line_no, ": empty key");
    if (!kv.emplace(key, value).second)
      Fail("config line ", line_no, ": repeated key '", key, "'");
  }
  return kv;
}

std::map<std::string, std::string> ReadKeyValueFile(const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in) Fail("cannot open config file ", path.string());
  try {
    return ParseKeyValue(in);
  } catch (const Error &e) {
    Fail(path.string(), ": ", e.what());
  }
}

}  // namespace subspoof
