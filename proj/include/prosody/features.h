// prosody/features.h

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

#ifndef PROSODY_FEATURES_H_
#define PROSODY_FEATURES_H_

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace prosody {

using Mask = std::vector<bool>;

// Columns of a word-level feature table, in CSV order.
enum class Column {
  kDurationMs = 0,
  kPauseMs,
  kF0Hz,
  kIntensityDb,
  kAlphaRatioDb,
  kL1L0Db,
  kCppsDb,
};
inline constexpr std::size_t kNumColumns = 7;
inline constexpr std::array<Column, kNumColumns> kAllColumns = {
    Column::kDurationMs,   Column::kPauseMs, Column::kF0Hz,  Column::kIntensityDb,
    Column::kAlphaRatioDb, Column::kL1L0Db,  Column::kCppsDb};

std::string_view ColumnName(Column c);

// The six evaluated acoustic dimensions. Duration's event tier also draws on
// the pause column.
enum class Feature { kDuration = 0, kF0, kIntensity, kAlphaRatio, kL1L0, kCpps };
inline constexpr std::size_t kNumFeatures = 6;
inline constexpr std::array<Feature, kNumFeatures> kAllFeatures = {
    Feature::kDuration,   Feature::kF0,   Feature::kIntensity,
    Feature::kAlphaRatio, Feature::kL1L0, Feature::kCpps};

std::string_view FeatureName(Feature f);
std::optional<Feature> FeatureFromName(std::string_view name);
Column FeatureColumn(Feature f);

// One utterance's word-level measurements. Every column has NumWords()
// entries; valid[c][i] is false where the measurement is undefined (e.g. an
// unvoiced word's F0) and the value must then be ignored.
struct WordFeatureMatrix {
  std::string speaker_id;
  std::string sentence_id;
  std::vector<std::string> tokens;
  std::array<std::vector<double>, kNumColumns> values;
  std::array<Mask, kNumColumns> valid;

  // n words, every value 0 and valid.
  static WordFeatureMatrix Zeros(std::string speaker_id, std::string sentence_id,
                                 std::vector<std::string> tokens);

  std::size_t NumWords() const { return tokens.size(); }
  std::vector<double> &Values(Column c) { return values[static_cast<std::size_t>(c)]; }
  const std::vector<double> &Values(Column c) const {
    return values[static_cast<std::size_t>(c)];
  }
  Mask &Valid(Column c) { return valid[static_cast<std::size_t>(c)]; }
  const Mask &Valid(Column c) const { return valid[static_cast<std::size_t>(c)]; }

  bool operator==(const WordFeatureMatrix &) const = default;
};

// CSV with header
//   word,token,duration_ms,pause_ms,f0_hz,intensity_db,alpha_ratio_db,
//   l1_l0_db,cpps_db,valid_flags
// `word` is the 1-based position, valid_flags a 7-character 0/1 string in
// column order. Invalid entries are written as empty cells. Numbers use the
// shortest representation that reads back exactly.
std::string WriteFeatureCsv(const WordFeatureMatrix &m);

// Inverse of WriteFeatureCsv. Throws ParseError on malformed input.
WordFeatureMatrix ParseFeatureCsv(std::string_view bytes, std::string speaker_id,
                                  std::string sentence_id);

// Shortest round-trip decimal form of v.
std::string FormatDouble(double v);

}  // namespace prosody

#endif  // PROSODY_FEATURES_H_
