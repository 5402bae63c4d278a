// prosody/features.cc

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

#include "prosody/features.h"

#include <charconv>
#include <cmath>

#include "prosody/csv.h"
#include "prosody/errors.h"

namespace prosody {

namespace {

constexpr std::array<std::string_view, kNumColumns> kColumnNames = {
    "duration_ms", "pause_ms", "f0_hz", "intensity_db",
    "alpha_ratio_db", "l1_l0_db", "cpps_db"};

constexpr std::array<std::string_view, kNumFeatures> kFeatureNames = {
    "duration", "f0", "intensity", "alpha_ratio", "l1_l0", "cpps"};

}  // namespace

std::string_view ColumnName(Column c) {
  return kColumnNames[static_cast<std::size_t>(c)];
}

std::string_view FeatureName(Feature f) {
  return kFeatureNames[static_cast<std::size_t>(f)];
}

std::optional<Feature> FeatureFromName(std::string_view name) {
  for (Feature f : kAllFeatures)
    if (FeatureName(f) == name) return f;
  if (name == "pitch") return Feature::kF0;
  return std::nullopt;
}

Column FeatureColumn(Feature f) {
  switch (f) {
    case Feature::kDuration: return Column::kDurationMs;
    case Feature::kF0: return Column::kF0Hz;
    case Feature::kIntensity: return Column::kIntensityDb;
    case Feature::kAlphaRatio: return Column::kAlphaRatioDb;
    case Feature::kL1L0: return Column::kL1L0Db;
    case Feature::kCpps: return Column::kCppsDb;
  }
  return Column::kDurationMs;
}

WordFeatureMatrix WordFeatureMatrix::Zeros(std::string speaker_id,
                                           std::string sentence_id,
                                           std::vector<std::string> tokens) {
  WordFeatureMatrix m;
  m.speaker_id = std::move(speaker_id);
  m.sentence_id = std::move(sentence_id);
  m.tokens = std::move(tokens);
  for (std::size_t c = 0; c < kNumColumns; ++c) {
    m.values[c].assign(m.tokens.size(), 0.0);
    m.valid[c].assign(m.tokens.size(), true);
  }
  return m;
}

std::string FormatDouble(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

std::string WriteFeatureCsv(const WordFeatureMatrix &m) {
  std::string out = "word,token";
  for (std::string_view name : kColumnNames) {
    out += ',';
    out += name;
  }
  out += ",valid_flags\n";
  for (std::size_t i = 0; i < m.NumWords(); ++i) {
    std::vector<std::string> fields;
    fields.push_back(std::to_string(i + 1));
    fields.push_back(m.tokens[i]);
    std::string flags;
    for (std::size_t c = 0; c < kNumColumns; ++c) {
      bool ok = m.valid[c][i];
      fields.push_back(ok ? FormatDouble(m.values[c][i]) : std::string());
      flags.push_back(ok ? '1' : '0');
    }
    fields.push_back(flags);
    out += CsvLine(fields);
  }
  return out;
}

WordFeatureMatrix ParseFeatureCsv(std::string_view bytes, std::string speaker_id,
                                  std::string sentence_id) {
  std::vector<CsvRow> rows = ParseCsv(bytes);
  if (rows.empty()) throw ParseError("feature CSV is empty", 1, 1);
  const std::vector<std::string> &header = rows.front().fields;
  bool header_ok = header.size() == kNumColumns + 3 && header[0] == "word" &&
                   header[1] == "token" && header.back() == "valid_flags";
  for (std::size_t c = 0; header_ok && c < kNumColumns; ++c)
    header_ok = header[c + 2] == kColumnNames[c];
  if (!header_ok) throw ParseError("unexpected feature CSV header", 1, 1);

  std::vector<std::string> tokens;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    if (rows[r].fields.size() != header.size())
      throw ParseError("expected " + std::to_string(header.size()) + " fields",
                       rows[r].line, 1);
    tokens.push_back(rows[r].fields[1]);
  }
  if (tokens.empty()) throw ParseError("feature CSV has no words", 2, 1);

  WordFeatureMatrix m =
      WordFeatureMatrix::Zeros(std::move(speaker_id), std::move(sentence_id), tokens);
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const CsvRow &row = rows[r];
    std::size_t i = r - 1;
    if (row.fields[0] != std::to_string(i + 1))
      throw ParseError("word index out of sequence", row.line, 1);
    const std::string &flags = row.fields.back();
    if (flags.size() != kNumColumns || flags.find_first_not_of("01") != std::string::npos)
      throw ParseError("valid_flags must be 7 characters of 0/1", row.line, 0);
    for (std::size_t c = 0; c < kNumColumns; ++c) {
      const std::string &cell = row.fields[c + 2];
      bool ok = flags[c] == '1';
      m.valid[c][i] = ok;
      if (!ok) {
        m.values[c][i] = 0.0;
        continue;
      }
      double v = 0.0;
      auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
      if (cell.empty() || ec != std::errc() || ptr != cell.data() + cell.size() ||
          !std::isfinite(v))
        throw ParseError("bad number \"" + cell + "\" in column " +
                             std::string(kColumnNames[c]),
                         row.line, 0);
      m.values[c][i] = v;
    }
  }
  return m;
}

}  // namespace prosody
