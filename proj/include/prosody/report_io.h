// prosody/report_io.h

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

#ifndef PROSODY_REPORT_IO_H_
#define PROSODY_REPORT_IO_H_

#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "prosody/events.h"
#include "prosody/perception.h"
#include "prosody/pipeline.h"

namespace prosody {

using Json = nlohmann::ordered_json;

Json ConfigToJson(const EvalConfig &cfg);

Json ReportToJson(const TierReport &r);
// Throws ParseError on a missing or mistyped field.
TierReport ReportFromJson(const Json &j);

// {"config": ..., "reports": [...], "issues": [...]}
std::string EmitReportDocument(const EvalConfig &cfg,
                               const std::vector<TierReport> &reports,
                               const std::vector<LoadIssue> &issues);
// Reads the "reports" array of a document written by EmitReportDocument.
std::vector<TierReport> ParseReportDocument(std::string_view text);

// speaker,feature,zero_one_loss,smoothed_loss,recall,precision,f1,error
// Three decimals; nulls are empty cells.
std::string ReportCsv(const std::vector<TierReport> &reports);

// feature,speaker,f1_minmax,one_minus_error. F1 is min-max scaled across
// the speakers of each feature; 1 - error is clamped to [0, 1].
std::string RadarCsv(const std::vector<TierReport> &reports);

Json ComparisonToJson(const GroupComparison &g, std::string_view label_a,
                      std::string_view label_b);

// feature,metric,[a,b,]t,p,df,winner with t to three decimals and p in
// scientific notation.
std::string ComparisonCsv(const std::vector<GroupComparison> &rows, bool with_speakers);

// word,feature,event for every feature of one utterance.
std::string EventsCsv(const std::vector<EventSeries> &series);

Json MosToJson(const std::vector<MosSummary> &rows);
Json HumannessToJson(const std::vector<HumannessSummary> &rows);
Json WinMatrixToJson(const WinMatrix &w);
Json BtmToJson(const BtmResult &r);

// Optional double as JSON (null when empty).
Json OptionalJson(const std::optional<double> &v);

}  // namespace prosody

#endif  // PROSODY_REPORT_IO_H_
