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

// English Snowball (Porter2) stemmer.

#include <initializer_list>
#include <string>
#include <string_view>
#include <utility>

#include "casegraph/analyzer.h"

namespace casegraph {

namespace {

bool IsVowel(char c) {
  return c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u' || c == 'y';
}

bool EndsWith(const std::string &w, std::string_view suffix) {
  return w.size() >= suffix.size() &&
         std::string_view(w).substr(w.size() - suffix.size()) == suffix;
}

bool IsDouble(const std::string &w) {
  if (w.size() < 2) return false;
  char c = w.back();
  if (c != w[w.size() - 2]) return false;
  switch (c) {
    case 'b': case 'd': case 'f': case 'g': case 'm':
    case 'n': case 'p': case 'r': case 't':
      return true;
    default:
      return false;
  }
}

bool IsLiEnding(char c) {
  switch (c) {
    case 'c': case 'd': case 'e': case 'g': case 'h':
    case 'k': case 'm': case 'n': case 'r': case 't':
      return true;
    default:
      return false;
  }
}

class Porter2 {
 public:
  explicit Porter2(std::string word) : w_(std::move(word)) {}

  std::string Run() {
    if (w_.size() < 3) return w_;
    if (const char *e = Exception1()) return e;
    if (w_[0] == '\'') w_.erase(0, 1);
    MarkY();
    ComputeRegions();
    Step0();
    Step1a();
    Step1b();
    Step1c();
    Step2();
    Step3();
    Step4();
    Step5();
    return Finish();
  }

 private:
  const char *Exception1() const {
    struct Entry {
      const char *word;
      const char *stem;
    };
    static constexpr Entry kEntries[] = {
        {"skis", "ski"},     {"skies", "sky"},    {"idly", "idl"},
        {"gently", "gentl"}, {"ugly", "ugli"},    {"early", "earli"},
        {"only", "onli"},    {"singly", "singl"}, {"sky", "sky"},
        {"news", "news"},    {"howe", "howe"},    {"atlas", "atlas"},
        {"cosmos", "cosmos"}, {"bias", "bias"},   {"andes", "andes"},
    };
    for (const Entry &e : kEntries) {
      if (w_ == e.word) return e.stem;
    }
    return nullptr;
  }

  // 'Y' marks a consonant y: initial, or following a vowel.
  void MarkY() {
    for (std::size_t i = 0; i < w_.size(); ++i) {
      if (w_[i] == 'y' && (i == 0 || IsVowel(w_[i - 1]))) w_[i] = 'Y';
    }
  }

  std::size_t RegionAfter(std::size_t from) const {
    for (std::size_t i = from + 1; i < w_.size(); ++i) {
      if (!IsVowel(w_[i]) && IsVowel(w_[i - 1])) return i + 1;
    }
    return w_.size();
  }

  void ComputeRegions() {
    r1_ = w_.size();
    for (std::string_view prefix : {"arsen", "commun", "emerg", "gener",
                                     "inter", "later", "organ", "past",
                                     "univers"}) {
      if (w_.compare(0, prefix.size(), prefix) == 0) {
        r1_ = prefix.size();
        break;
      }
    }
    if (r1_ == w_.size()) r1_ = RegionAfter(0);
    r2_ = r1_ < w_.size() ? RegionAfter(r1_) : w_.size();
  }

  bool InR1(std::size_t suffix_len) const {
    return w_.size() >= suffix_len && w_.size() - suffix_len >= r1_;
  }
  bool InR2(std::size_t suffix_len) const {
    return w_.size() >= suffix_len && w_.size() - suffix_len >= r2_;
  }

  void Replace(std::size_t suffix_len, std::string_view with) {
    w_.erase(w_.size() - suffix_len);
    w_ += with;
  }

  bool HasVowelBefore(std::size_t end) const {
    for (std::size_t i = 0; i < end; ++i) {
      if (IsVowel(w_[i])) return true;
    }
    return false;
  }

  // Short syllable ending at the end of the word. Words ending in "past"
  // count as well.
  bool EndsShortSyllable() const {
    const std::size_t n = w_.size();
    if (EndsWith(w_, "past")) return true;
    if (n == 2) return IsVowel(w_[0]) && !IsVowel(w_[1]);
    if (n < 3) return false;
    char c = w_[n - 1];
    return !IsVowel(w_[n - 3]) && IsVowel(w_[n - 2]) && !IsVowel(c) &&
           c != 'w' && c != 'x' && c != 'Y';
  }

  // Longest suffix from `suffixes` that the word ends with, or "".
  std::string_view Longest(std::initializer_list<std::string_view> suffixes) {
    std::string_view best;
    for (std::string_view s : suffixes) {
      if (s.size() > best.size() && EndsWith(w_, s)) best = s;
    }
    return best;
  }

  void Step0() {
    std::string_view s = Longest({"'s'", "'s", "'"});
    if (!s.empty()) Replace(s.size(), "");
  }

  void Step1a() {
    std::string_view s = Longest({"sses", "ied", "ies", "us", "ss", "s"});
    if (s == "sses") {
      Replace(4, "ss");
    } else if (s == "ied" || s == "ies") {
      Replace(3, w_.size() > 4 ? "i" : "ie");
    } else if (s == "s") {
      if (w_.size() >= 2 && HasVowelBefore(w_.size() - 2)) Replace(1, "");
    }
  }

  void Step1b() {
    std::string_view s =
        Longest({"eed", "eedly", "ed", "edly", "ing", "ingly"});
    if (s.empty()) return;
    const std::size_t stem_end = w_.size() - s.size();
    const std::string_view stem = std::string_view(w_).substr(0, stem_end);
    if (s == "eed" || s == "eedly") {
      if (!InR1(s.size())) return;
      if (stem == "succ" || stem == "proc" || stem == "exc") return;
      Replace(s.size(), "ee");
      return;
    }
    if (s == "ing") {
      // dying -> die, but keep evening, inning, outing and friends.
      if (stem_end == 2 && stem[1] == 'y' && !IsVowel(stem[0])) {
        Replace(4, "ie");
        return;
      }
      for (std::string_view keep :
           {"even", "cann", "inn", "earr", "herr", "out"}) {
        if (stem == keep) return;
      }
    }
    if (!HasVowelBefore(stem_end)) return;
    Replace(s.size(), "");
    if (EndsWith(w_, "at") || EndsWith(w_, "bl") || EndsWith(w_, "iz")) {
      w_ += 'e';
    } else if (IsDouble(w_)) {
      // "add", "egg" and "ebb" stay doubled.
      if (w_.size() == 3 && (w_[0] == 'a' || w_[0] == 'e' || w_[0] == 'o'))
        return;
      w_.pop_back();
    } else if (r1_ == w_.size() && EndsShortSyllable()) {
      w_ += 'e';
    }
  }

  void Step1c() {
    const std::size_t n = w_.size();
    if (n > 2 && (w_[n - 1] == 'y' || w_[n - 1] == 'Y') &&
        !IsVowel(w_[n - 2])) {
      w_[n - 1] = 'i';
    }
  }

  void Step2() {
    struct Rule {
      std::string_view suffix;
      std::string_view replacement;
    };
    static constexpr Rule kRules[] = {
        {"tional", "tion"}, {"enci", "ence"},   {"anci", "ance"},
        {"abli", "able"},   {"entli", "ent"},   {"izer", "ize"},
        {"ization", "ize"}, {"ational", "ate"}, {"ation", "ate"},
        {"ator", "ate"},    {"alism", "al"},    {"aliti", "al"},
        {"alli", "al"},     {"fulness", "ful"}, {"ousli", "ous"},
        {"ousness", "ous"}, {"iveness", "ive"}, {"iviti", "ive"},
        {"biliti", "ble"},  {"bli", "ble"},     {"ogi", "og"},
        {"fulli", "ful"},   {"lessli", "less"}, {"li", ""},
        {"ogist", "og"},
    };
    const Rule *best = nullptr;
    for (const Rule &r : kRules) {
      if (EndsWith(w_, r.suffix) &&
          (!best || r.suffix.size() > best->suffix.size())) {
        best = &r;
      }
    }
    if (!best || !InR1(best->suffix.size())) return;
    const std::size_t stem_end = w_.size() - best->suffix.size();
    if (best->suffix == "ogi") {
      if (stem_end == 0 || w_[stem_end - 1] != 'l') return;
    } else if (best->suffix == "li") {
      if (stem_end == 0 || !IsLiEnding(w_[stem_end - 1])) return;
    }
    Replace(best->suffix.size(), best->replacement);
  }

  void Step3() {
    std::string_view s = Longest({"tional", "ational", "alize", "icate",
                                  "iciti", "ical", "ful", "ness", "ative"});
    if (s.empty() || !InR1(s.size())) return;
    if (s == "tional") Replace(6, "tion");
    else if (s == "ational") Replace(7, "ate");
    else if (s == "alize") Replace(5, "al");
    else if (s == "icate" || s == "iciti" || s == "ical") Replace(s.size(), "ic");
    else if (s == "ful" || s == "ness") Replace(s.size(), "");
    else if (s == "ative" && InR2(5)) Replace(5, "");
  }

  void Step4() {
    std::string_view s = Longest({"al", "ance", "ence", "er", "ic", "able",
                                  "ible", "ant", "ement", "ment", "ent", "ism",
                                  "ate", "iti", "ous", "ive", "ize", "ion"});
    if (s.empty() || !InR2(s.size())) return;
    if (s == "ion") {
      std::size_t stem_end = w_.size() - 3;
      if (stem_end == 0 || (w_[stem_end - 1] != 's' && w_[stem_end - 1] != 't'))
        return;
    }
    Replace(s.size(), "");
  }

  void Step5() {
    if (w_.empty()) return;
    if (w_.back() == 'e') {
      if (InR2(1)) {
        w_.pop_back();
      } else if (InR1(1)) {
        w_.pop_back();
        if (EndsShortSyllable()) w_ += 'e';
      }
    } else if (w_.back() == 'l') {
      if (InR2(1) && w_.size() >= 2 && w_[w_.size() - 2] == 'l') w_.pop_back();
    }
  }

  std::string Finish() {
    for (char &c : w_) {
      if (c == 'Y') c = 'y';
    }
    return w_;
  }

  std::string w_;
  std::size_t r1_ = 0;
  std::size_t r2_ = 0;
};

}  // namespace

std::string SnowballStem(std::string_view word) {
  return Porter2(std::string(word)).Run();
}

}  // namespace casegraph
