// prosody/alignment.cc

// Copyright 2026  The prosody-eval Authors
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

#include "prosody/alignment.h"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <optional>
#include <limits>

#include "json.hpp"
#include "prosody/errors.h"

namespace prosody {

namespace {

using json = nlohmann::json;

std::string Lower(std::string_view s) {
  std::string out(s);
  for (char &c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

std::string_view Trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
    s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
    s.remove_suffix(1);
  return s;
}

// Praat text files are a flat stream of numbers, strings and <flags>; keys
// such as "xmin =" and bracketed indices are decoration.
struct TgToken {
  enum Kind { kNumber, kString, kFlag } kind = kNumber;
  double number = 0.0;
  std::string text;
  std::size_t line = 0, column = 0;
};

std::optional<double> ParseNumber(std::string_view word) {
  if (word.empty()) return std::nullopt;
  if (word.front() == '+') word.remove_prefix(1);
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(word.data(), word.data() + word.size(), v);
  if (ec != std::errc() || ptr != word.data() + word.size())
    return std::nullopt;
  return v;
}

std::vector<TgToken> TokenizeTextGrid(std::string_view text) {
  if (text.size() >= 2 &&
      ((static_cast<unsigned char>(text[0]) == 0xFE &&
        static_cast<unsigned char>(text[1]) == 0xFF) ||
       (static_cast<unsigned char>(text[0]) == 0xFF &&
        static_cast<unsigned char>(text[1]) == 0xFE)))
    throw ParseError("UTF-16 TextGrids are not supported; save as UTF-8", 1, 1);
  if (text.substr(0, 3) == "\xEF\xBB\xBF") text.remove_prefix(3);

  std::vector<TgToken> tokens;
  std::size_t i = 0, line = 1, line_start = 0;
  auto col = [&](std::size_t pos) { return pos - line_start + 1; };
  while (i < text.size()) {
    char c = text[i];
    if (c == '\n') {
      ++i;
      ++line;
      line_start = i;
    } else if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
    } else if (c == '!') {
      while (i < text.size() && text[i] != '\n') ++i;
    } else if (c == '"') {
      TgToken tok;
      tok.kind = TgToken::kString;
      tok.line = line;
      tok.column = col(i);
      ++i;
      bool closed = false;
      while (i < text.size()) {
        if (text[i] == '"') {
          if (i + 1 < text.size() && text[i + 1] == '"') {
            tok.text.push_back('"');
            i += 2;
            continue;
          }
          ++i;
          closed = true;
          break;
        }
        if (text[i] == '\n') {
          ++line;
          line_start = i + 1;
        }
        tok.text.push_back(text[i++]);
      }
      if (!closed) throw ParseError("unterminated string", tok.line, tok.column);
      tokens.push_back(std::move(tok));
    } else if (c == '[') {
      std::size_t open_line = line, open_col = col(i);
      while (i < text.size() && text[i] != ']' && text[i] != '\n') ++i;
      if (i >= text.size() || text[i] != ']')
        throw ParseError("unterminated '['", open_line, open_col);
      ++i;
    } else {
      std::size_t start = i;
      while (i < text.size() && !std::isspace(static_cast<unsigned char>(text[i])) &&
             text[i] != '"' && text[i] != '[')
        ++i;
      std::string_view word = text.substr(start, i - start);
      if (word == "<exists>" || word == "<absent>") {
        TgToken tok;
        tok.kind = TgToken::kFlag;
        tok.text = std::string(word);
        tok.line = line;
        tok.column = col(start);
        tokens.push_back(std::move(tok));
      } else if (auto v = ParseNumber(word)) {
        TgToken tok;
        tok.kind = TgToken::kNumber;
        tok.number = *v;
        tok.line = line;
        tok.column = col(start);
        tokens.push_back(std::move(tok));
      }
    }
  }
  return tokens;
}

class TokenCursor {
 public:
  explicit TokenCursor(std::vector<TgToken> tokens) : tokens_(std::move(tokens)) {}

  const TgToken &Next(TgToken::Kind kind, const char *what) {
    if (pos_ >= tokens_.size()) {
      std::size_t line = tokens_.empty() ? 1 : tokens_.back().line;
      throw ParseError(std::string("unexpected end of file, expected ") + what,
                       line, 0);
    }
    const TgToken &tok = tokens_[pos_++];
    if (tok.kind != kind)
      throw ParseError(std::string("expected ") + what, tok.line, tok.column);
    return tok;
  }

  double Number(const char *what) {
    const TgToken &tok = Next(TgToken::kNumber, what);
    if (!std::isfinite(tok.number))
      throw ParseError(std::string("non-finite ") + what, tok.line, tok.column);
    return tok.number;
  }

  std::size_t Count(const char *what, std::size_t per_item) {
    const TgToken &tok = Next(TgToken::kNumber, what);
    double v = tok.number;
    if (!(v >= 0) || v != std::floor(v) ||
        v * static_cast<double>(per_item) >
            static_cast<double>(tokens_.size() - pos_))
      throw ParseError(std::string("invalid ") + what, tok.line, tok.column);
    return static_cast<std::size_t>(v);
  }

  std::string String(const char *what) { return Next(TgToken::kString, what).text; }
  const TgToken &Peek() const { return tokens_.at(pos_); }
  bool AtEnd() const { return pos_ >= tokens_.size(); }

 private:
  std::vector<TgToken> tokens_;
  std::size_t pos_ = 0;
};

struct RawInterval {
  double start, end;
  std::string label;
  std::size_t line;
};

std::vector<RawInterval> ReadTextGridWords(std::string_view bytes) {
  TokenCursor cur(TokenizeTextGrid(bytes));
  if (cur.String("file type") != "ooTextFile")
    throw ParseError("not a Praat text file (expected \"ooTextFile\")", 1, 1);
  if (cur.String("object class") != "TextGrid")
    throw ParseError("object class must be \"TextGrid\"", 1, 0);
  cur.Number("xmin");
  cur.Number("xmax");
  const TgToken &flag = cur.Next(TgToken::kFlag, "tiers flag");
  if (flag.text != "<exists>")
    throw ParseError("TextGrid has no tiers", flag.line, flag.column);
  std::size_t n_tiers = cur.Count("tier count", 5);

  std::optional<std::vector<RawInterval>> words;
  for (std::size_t t = 0; t < n_tiers; ++t) {
    std::string tier_class = cur.String("tier class");
    std::string name = cur.String("tier name");
    cur.Number("tier xmin");
    cur.Number("tier xmax");
    if (tier_class == "IntervalTier") {
      std::size_t n = cur.Count("interval count", 3);
      std::vector<RawInterval> intervals;
      intervals.reserve(n);
      for (std::size_t k = 0; k < n; ++k) {
        RawInterval iv;
        iv.line = cur.AtEnd() ? 0 : cur.Peek().line;
        iv.start = cur.Number("interval xmin");
        iv.end = cur.Number("interval xmax");
        iv.label = cur.String("interval text");
        intervals.push_back(std::move(iv));
      }
      if (Lower(Trim(name)) == "words") {
        if (words) throw ValidationError("more than one tier named \"words\"");
        words = std::move(intervals);
      }
    } else if (tier_class == "TextTier") {
      std::size_t n = cur.Count("point count", 2);
      for (std::size_t k = 0; k < n; ++k) {
        cur.Number("point time");
        cur.String("point mark");
      }
    } else {
      throw ParseError("unknown tier class \"" + tier_class + "\"");
    }
  }
  if (!words) throw ValidationError("no interval tier named \"words\"");
  return *words;
}

std::pair<std::size_t, std::size_t> LineColumn(std::string_view text,
                                               std::size_t offset) {
  std::size_t line = 1, column = 1;
  for (std::size_t i = 0; i < offset && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return {line, column};
}

std::vector<RawInterval> ReadJsonWords(std::string_view bytes) {
  json doc;
  try {
    doc = json::parse(bytes);
  } catch (const json::parse_error &e) {
    auto [line, column] = LineColumn(bytes, e.byte > 0 ? e.byte - 1 : 0);
    throw ParseError("invalid JSON alignment", line, column);
  }
  if (!doc.is_object() || !doc.contains("words") || !doc["words"].is_array())
    throw ParseError("JSON alignment must be an object with a \"words\" array");
  std::vector<RawInterval> out;
  std::size_t index = 0;
  for (const json &w : doc["words"]) {
    ++index;
    if (!w.is_object() || !w.contains("t") || !w.contains("s") ||
        !w.contains("e") || !w["t"].is_string() || !w["s"].is_number() ||
        !w["e"].is_number())
      throw ParseError("word entry " + std::to_string(index) +
                       " needs string \"t\" and numeric \"s\", \"e\"");
    RawInterval iv{w["s"].get<double>(), w["e"].get<double>(),
                   w["t"].get<std::string>(), 0};
    if (!std::isfinite(iv.start) || !std::isfinite(iv.end))
      throw ParseError("word entry " + std::to_string(index) +
                       " has non-finite time");
    out.push_back(std::move(iv));
  }
  return out;
}

std::string Where(const RawInterval &iv) {
  return iv.line ? " (line " + std::to_string(iv.line) + ")" : "";
}

AlignedUtterance RouteIntervals(const std::vector<RawInterval> &intervals,
                                const AlignmentOptions &opts) {
  constexpr double kTimeTolerance = 1e-9;
  AlignedUtterance utt;
  double prev_end = -std::numeric_limits<double>::infinity();
  for (const RawInterval &iv : intervals) {
    if (iv.end < iv.start)
      throw ValidationError("interval \"" + iv.label + "\" ends before it starts" +
                            Where(iv));
    if (iv.start < prev_end - kTimeTolerance)
      throw ValidationError("overlapping or out-of-order interval \"" +
                            iv.label + "\" at " + std::to_string(iv.start) +
                            " s" + Where(iv));
    prev_end = std::max(prev_end, iv.end);
    if (IsSilenceToken(iv.label, opts)) {
      if (iv.end > iv.start &&
          (iv.end - iv.start) * 1000.0 >= opts.min_silence_ms)
        utt.silences.push_back({iv.start, iv.end});
      continue;
    }
    if (!(iv.end > iv.start))
      throw ValidationError("zero-length word interval \"" + iv.label +
                            "\" at " + std::to_string(iv.start) + " s" +
                            Where(iv));
    utt.words.push_back({iv.label, iv.start, iv.end});
  }
  if (utt.words.empty()) throw ValidationError("alignment has no words");
  return utt;
}

std::string FormatTime(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string QuotePraat(std::string_view s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

}  // namespace

AlignmentFormat ParseAlignmentFormat(std::string_view name) {
  std::string n = Lower(Trim(name));
  if (n == "textgrid") return AlignmentFormat::kTextGrid;
  if (n == "json") return AlignmentFormat::kJson;
  throw ValidationError("unknown alignment format \"" + std::string(name) + "\"");
}

AlignmentFormat AlignmentFormatForPath(const std::filesystem::path &path) {
  return Lower(path.extension().string()) == ".json" ? AlignmentFormat::kJson
                                                     : AlignmentFormat::kTextGrid;
}

bool IsSilenceToken(std::string_view label, const AlignmentOptions &opts) {
  std::string l = Lower(Trim(label));
  for (const std::string &s : opts.silence_tokens)
    if (Lower(Trim(s)) == l) return true;
  return false;
}

AlignedUtterance ParseAlignment(std::string_view bytes, AlignmentFormat format,
                                const AlignmentOptions &opts) {
  std::vector<RawInterval> intervals = format == AlignmentFormat::kTextGrid
                                           ? ReadTextGridWords(bytes)
                                           : ReadJsonWords(bytes);
  return RouteIntervals(intervals, opts);
}

std::string SerializeAlignment(const AlignedUtterance &utt,
                               AlignmentFormat format,
                               std::string_view silence_label) {
  struct Item {
    double start, end;
    std::string_view label;
  };
  std::vector<Item> items;
  items.reserve(utt.words.size() + utt.silences.size());
  for (const WordInterval &w : utt.words) items.push_back({w.start_s, w.end_s, w.token});
  for (const Interval &s : utt.silences) items.push_back({s.start_s, s.end_s, silence_label});
  std::stable_sort(items.begin(), items.end(),
                   [](const Item &a, const Item &b) { return a.start < b.start; });

  if (format == AlignmentFormat::kJson) {
    json words = json::array();
    for (const Item &it : items)
      words.push_back({{"t", std::string(it.label)}, {"s", it.start}, {"e", it.end}});
    return json{{"words", words}}.dump(1) + "\n";
  }

  double xmin = items.empty() ? 0.0 : std::min(0.0, items.front().start);
  double xmax = 0.0;
  for (const Item &it : items) xmax = std::max(xmax, it.end);
  std::string out;
  out += "File type = \"ooTextFile\"\nObject class = \"TextGrid\"\n\n";
  out += "xmin = " + FormatTime(xmin) + "\nxmax = " + FormatTime(xmax) + "\n";
  out += "tiers? <exists>\nsize = 1\nitem []:\n    item [1]:\n";
  out += "        class = \"IntervalTier\"\n        name = \"words\"\n";
  out += "        xmin = " + FormatTime(xmin) + "\n        xmax = " +
         FormatTime(xmax) + "\n";
  out += "        intervals: size = " + std::to_string(items.size()) + "\n";
  for (std::size_t k = 0; k < items.size(); ++k) {
    out += "        intervals [" + std::to_string(k + 1) + "]:\n";
    out += "            xmin = " + FormatTime(items[k].start) + "\n";
    out += "            xmax = " + FormatTime(items[k].end) + "\n";
    out += "            text = " + QuotePraat(items[k].label) + "\n";
  }
  return out;
}

std::string NormalizeToken(std::string_view token) {
  std::string out;
  for (char c : token) {
    auto u = static_cast<unsigned char>(c);
    if (u < 0x80 && (std::ispunct(u) || std::isspace(u))) continue;
    out.push_back(static_cast<char>(u < 0x80 ? std::tolower(u) : u));
  }
  return out;
}

}  // namespace prosody
