// Copyright 2026 The CaseGraph Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "casegraph/analyzer.h"

#include <fstream>

#include "casegraph/error.h"
#include "casegraph/text.h"

namespace casegraph {

const std::set<std::string> &DefaultStopWords() {
  static const std::set<std::string> kWords = {
      "a",    "an",    "and",   "are",  "as",    "at",   "be",
      "but",  "by",    "for",   "if",   "in",    "into", "is",
      "it",   "no",    "not",   "of",   "on",    "or",   "such",
      "that", "the",   "their", "then", "there", "these", "they",
      "this", "to",    "was",   "will", "with",
  };
  return kWords;
}

std::set<std::string> LoadStopWords(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::kIo, "cannot open stop-word file " + path);
  std::set<std::string> words;
  std::string line;
  while (std::getline(in, line)) {
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    std::string word = text::Trim(line);
    if (!word.empty()) words.insert(text::ToLower(word));
  }
  return words;
}

AnalyzerConfig AnalyzerConfig::Default() {
  AnalyzerConfig config;
  config.stop_words = DefaultStopWords();
  return config;
}

void AnalyzerConfig::Validate() const {
  if (min_gram < 1 || min_gram > max_gram) {
    throw Error(ErrorKind::kInvalidArgument,
                "analyzer requires 1 <= min_gram <= max_gram",
                {{"min_gram", min_gram}, {"max_gram", max_gram}});
  }
}

std::vector<std::string> Analyze(std::string_view input,
                                 const AnalyzerConfig &config) {
  config.Validate();
  std::vector<std::string> out;
  const std::u32string decoded = text::Decode(input);
  const std::size_t min_gram = static_cast<std::size_t>(config.min_gram);
  const std::size_t max_gram = static_cast<std::size_t>(config.max_gram);

  std::size_t i = 0;
  while (i < decoded.size()) {
    if (!text::IsAlnum(decoded[i])) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < decoded.size() && text::IsAlnum(decoded[j])) ++j;
    std::u32string token = decoded.substr(i, j - i);
    i = j;

    if (config.fold_ascii) token = text::FoldAscii(token);
    if (config.lowercase) token = text::ToLower(token);
    std::string word = text::Encode(token);
    if (config.stop_words.count(word)) continue;
    if (config.stemmer == Stemmer::kEnglishSnowball) {
      // The stemmer only understands ASCII letters; leave other words alone.
      bool ascii = true;
      for (char32_t c : token) ascii = ascii && c < 0x80;
      if (ascii) {
        word = SnowballStem(word);
        token = text::Decode(word);
      }
    }

    if (token.size() < min_gram) {
      if (!token.empty()) out.push_back(text::Encode(token));
      continue;
    }
    for (std::size_t start = 0; start + min_gram <= token.size(); ++start) {
      std::size_t longest = std::min(max_gram, token.size() - start);
      for (std::size_t len = min_gram; len <= longest; ++len) {
        out.push_back(text::Encode(
            std::u32string_view(token).substr(start, len)));
      }
    }
  }
  return out;
}

}  // namespace casegraph
