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

#ifndef CASEGRAPH_ANALYZER_H_
#define CASEGRAPH_ANALYZER_H_

#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace casegraph {

enum class Stemmer { kEnglishSnowball, kNone };

struct AnalyzerConfig {
  int min_gram = 3;
  int max_gram = 25;
  std::set<std::string> stop_words;
  Stemmer stemmer = Stemmer::kEnglishSnowball;
  bool fold_ascii = true;
  bool lowercase = true;

  // The 33-word English stop list, min_gram 3, max_gram 25.
  static AnalyzerConfig Default();
  // Throws Error(kInvalidArgument) unless 1 <= min_gram <= max_gram.
  void Validate() const;
};

// The 33 English stop words used by default.
const std::set<std::string> &DefaultStopWords();
// One word per line; '#' starts a comment.
std::set<std::string> LoadStopWords(const std::string &path);

// English (Porter2) Snowball stemmer. Expects a lowercase word.
std::string SnowballStem(std::string_view word);

// Analyzer chain: split on whitespace and punctuation, fold diacritics,
// lowercase, drop stop words, stem, then emit every contiguous character
// n-gram of each token with length in [min_gram, max_gram], ordered by start
// position and then length. Tokens shorter than min_gram are emitted whole.
std::vector<std::string> Analyze(std::string_view text,
                                 const AnalyzerConfig &config);

}  // namespace casegraph

#endif  // CASEGRAPH_ANALYZER_H_
