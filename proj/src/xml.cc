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

// Minimal XML reader for the article schema.

#include <cctype>
#include <cstdint>
#include <tuple>

#include "casegraph/error.h"
#include "casegraph/ingest.h"
#include "casegraph/text.h"

namespace casegraph {

const std::string *XmlElement::Attribute(std::string_view key) const {
  for (const auto &[k, v] : attributes) {
    if (k == key) return &v;
  }
  return nullptr;
}

namespace {

bool IsNameChar(unsigned char c) {
  return std::isalnum(c) || c == '-' || c == '_' || c == '.' || c == ':' || c >= 0x80;
}

bool IsXmlSpace(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r'; }

class XmlParser {
 public:
  explicit XmlParser(std::string_view s) : s_(s) {}

  XmlElement ParseDocument() {
    if (s_.substr(0, 3) == "\xEF\xBB\xBF") p_ = 3;
    SkipMisc(true);
    if (Eof()) Fail("document has no root element");
    if (Peek() != '<') Fail("text outside the root element");
    XmlElement root = ParseElement();
    SkipMisc(false);
    if (!Eof()) Fail("content after the root element");
    return root;
  }

 private:
  bool Eof() const { return p_ >= s_.size(); }
  char Peek() const { return s_[p_]; }
  bool StartsWith(std::string_view t) const { return s_.substr(p_, t.size()) == t; }

  std::pair<std::size_t, std::size_t> Position(std::size_t at) const {
    std::size_t line = 1, column = 1;
    for (std::size_t i = 0; i < at && i < s_.size(); ++i) {
      unsigned char c = static_cast<unsigned char>(s_[i]);
      if (c == '\n') {
        ++line;
        column = 1;
      } else if ((c & 0xC0) != 0x80) {
        ++column;
      }
    }
    return {line, column};
  }

  [[noreturn]] void FailAt(std::size_t at, const std::string &message) const {
    auto [line, column] = Position(at);
    throw Error(ErrorKind::kInvalidArgument,
                "XML error at line " + std::to_string(line) + ", column " +
                    std::to_string(column) + ": " + message,
                {{"line", line}, {"column", column}});
  }
  [[noreturn]] void Fail(const std::string &message) const { FailAt(p_, message); }

  void SkipSpace() {
    while (!Eof() && IsXmlSpace(Peek())) ++p_;
  }

  void SkipPast(std::string_view terminator, const char *what) {
    std::size_t start = p_;
    std::size_t end = s_.find(terminator, p_);
    if (end == std::string_view::npos) FailAt(start, std::string("unterminated ") + what);
    p_ = end + terminator.size();
  }

  void SkipDoctype() {
    std::size_t start = p_;
    int depth = 0;
    while (!Eof()) {
      char c = Peek();
      ++p_;
      if (c == '[') ++depth;
      else if (c == ']') --depth;
      else if (c == '>' && depth <= 0) return;
    }
    FailAt(start, "unterminated DOCTYPE");
  }

  // Whitespace, comments and processing instructions around the root.
  void SkipMisc(bool allow_doctype) {
    while (true) {
      SkipSpace();
      if (StartsWith("<?")) {
        SkipPast("?>", "processing instruction");
      } else if (StartsWith("<!--")) {
        SkipPast("-->", "comment");
      } else if (allow_doctype && StartsWith("<!DOCTYPE")) {
        SkipDoctype();
      } else {
        return;
      }
    }
  }

  std::string ParseName() {
    std::size_t start = p_;
    while (!Eof() && IsNameChar(static_cast<unsigned char>(Peek()))) ++p_;
    if (p_ == start) Fail("expected a name");
    return std::string(s_.substr(start, p_ - start));
  }

  void AppendEntity(std::string *out) {
    std::size_t start = p_;
    std::size_t semi = s_.find(';', p_);
    if (semi == std::string_view::npos || semi - p_ > 12) FailAt(start, "unterminated entity");
    std::string_view name = s_.substr(p_ + 1, semi - p_ - 1);
    p_ = semi + 1;
    if (name == "amp") *out += '&';
    else if (name == "lt") *out += '<';
    else if (name == "gt") *out += '>';
    else if (name == "quot") *out += '"';
    else if (name == "apos") *out += '\'';
    else if (!name.empty() && name[0] == '#') {
      bool hex = name.size() > 1 && (name[1] == 'x' || name[1] == 'X');
      std::string_view digits = name.substr(hex ? 2 : 1);
      if (digits.empty()) FailAt(start, "empty character reference");
      std::uint32_t cp = 0;
      for (char c : digits) {
        int d = std::isdigit(static_cast<unsigned char>(c)) ? c - '0'
                : hex && std::isxdigit(static_cast<unsigned char>(c))
                    ? std::tolower(static_cast<unsigned char>(c)) - 'a' + 10
                    : -1;
        if (d < 0) FailAt(start, "invalid character reference");
        cp = cp * (hex ? 16 : 10) + static_cast<std::uint32_t>(d);
        if (cp > 0x10FFFF) FailAt(start, "character reference out of range");
      }
      *out += text::Encode(static_cast<char32_t>(cp));
    } else {
      FailAt(start, "unknown entity &" + std::string(name) + ";");
    }
  }

  std::string ParseAttributeValue() {
    if (Eof() || (Peek() != '"' && Peek() != '\'')) Fail("expected quoted attribute value");
    char quote = Peek();
    ++p_;
    std::string value;
    while (true) {
      if (Eof()) Fail("unterminated attribute value");
      char c = Peek();
      if (c == quote) {
        ++p_;
        return value;
      }
      if (c == '<') Fail("'<' in attribute value");
      if (c == '&') {
        AppendEntity(&value);
      } else {
        value += c;
        ++p_;
      }
    }
  }

  XmlElement ParseElement() {
    std::size_t open = p_;
    ++p_;  // '<'
    XmlElement element;
    std::tie(element.line, element.column) = Position(open);
    element.name = ParseName();
    while (true) {
      bool spaced = !Eof() && IsXmlSpace(Peek());
      SkipSpace();
      if (Eof()) FailAt(open, "unterminated start tag <" + element.name + ">");
      if (StartsWith("/>")) {
        p_ += 2;
        return element;
      }
      if (Peek() == '>') {
        ++p_;
        break;
      }
      if (!spaced) Fail("expected whitespace before attribute");
      std::string key = ParseName();
      SkipSpace();
      if (Eof() || Peek() != '=') Fail("expected '=' after attribute name");
      ++p_;
      SkipSpace();
      std::string value = ParseAttributeValue();
      if (element.Attribute(key)) Fail("duplicate attribute " + key);
      element.attributes.emplace_back(std::move(key), std::move(value));
    }

    std::string pending;
    auto flush = [&] {
      if (pending.empty()) return;
      element.children.push_back({std::nullopt, std::move(pending)});
      pending.clear();
    };
    while (true) {
      if (Eof()) {
        FailAt(open, "element <" + element.name + "> is never closed");
      }
      if (StartsWith("</")) {
        std::size_t close = p_;
        p_ += 2;
        std::string name = ParseName();
        SkipSpace();
        if (Eof() || Peek() != '>') Fail("expected '>'");
        ++p_;
        if (name != element.name) {
          auto [line, column] = Position(open);
          FailAt(close, "closing tag </" + name + "> does not match <" +
                            element.name + "> opened at line " +
                            std::to_string(line) + ", column " + std::to_string(column));
        }
        flush();
        return element;
      }
      if (StartsWith("<!--")) {
        SkipPast("-->", "comment");
      } else if (StartsWith("<![CDATA[")) {
        std::size_t start = p_ + 9;
        SkipPast("]]>", "CDATA section");
        pending += s_.substr(start, p_ - 3 - start);
      } else if (StartsWith("<?")) {
        SkipPast("?>", "processing instruction");
      } else if (Peek() == '<') {
        flush();
        element.children.push_back({ParseElement(), ""});
      } else if (Peek() == '&') {
        AppendEntity(&pending);
      } else {
        pending += Peek();
        ++p_;
      }
    }
  }

  std::string_view s_;
  std::size_t p_ = 0;
};

}  // namespace

XmlElement ParseXml(std::string_view xml) { return XmlParser(xml).ParseDocument(); }

}  // namespace casegraph
