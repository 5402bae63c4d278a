// prosody/csv.h

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

#ifndef PROSODY_CSV_H_
#define PROSODY_CSV_H_

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace prosody {

struct CsvRow {
  std::size_t line = 0;  // 1-based line where the record starts
  std::vector<std::string> fields;
};

// RFC 4180 reader: quoted fields may hold commas, doubled quotes and
// newlines. CRLF and LF line endings are accepted; blank lines are skipped.
// Throws ParseError on an unterminated quote or stray characters after a
// closing quote.
std::vector<CsvRow> ParseCsv(std::string_view text);

// Quotes the field only when it contains a comma, quote or line break.
std::string CsvEscape(std::string_view field);

// One CSV record: fields escaped as needed, joined by commas, ending in \n.
std::string CsvLine(const std::vector<std::string> &fields);

}  // namespace prosody

#endif  // PROSODY_CSV_H_
