// Copyright 2026 The Rankbreak Authors.
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

#ifndef RANKBREAK_IO_H_
#define RANKBREAK_IO_H_

// Dataset ingestion and result serialization.

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "rankbreak/experiments.h"
#include "rankbreak/graph_metrics.h"
#include "rankbreak/objective.h"
#include "rankbreak/pl_model.h"
#include "rankbreak/rank_breaking.h"

namespace rankbreak {

struct PartialOrderData {
  ItemIndex index;
  std::vector<PartialOrder> orders;
};

// One JSON object per line:
//   {"offering": [ids], "positions": [ints], "blocks": [[ids], ...]}
// Ids may be strings or integers. Blank lines are skipped. Malformed JSON or
// a missing field raises ParseError; a record that breaks the partial-order
// invariants raises InvalidInputError. Both carry the line number.
PartialOrderData ParsePartialOrdersJsonl(std::istream& in);
PartialOrderData ParsePartialOrdersJsonl(const std::filesystem::path& path);

void WritePartialOrdersJsonl(const PartialOrderData& data, std::ostream& out);

struct RankingData {
  ItemIndex index;
  std::vector<Ranking> rankings;
};

// First non-comment line: comma-separated item ids. Every later line reads
// "count: id,id,..." and must rank every item once. '#' starts a comment line.
RankingData ParseSoc(std::istream& in);
RankingData ParseSoc(const std::filesystem::path& path);

struct Rating {
  std::string user;
  std::string item;
  double value = 0.0;
};

struct RatingsTable {
  std::vector<Rating> ratings;  // one per (user, item), first-seen order
  int duplicates_replaced = 0;
};

// CSV with columns user,item,rating; a header row is recognized when its
// third field is not numeric. Repeated (user, item) keep the last rating.
RatingsTable ParseRatingsCsv(std::istream& in);
RatingsTable ParseRatingsCsv(const std::filesystem::path& path);

struct RatingsConversion {
  PartialOrderData data;
  std::vector<std::string> users;  // user of each order
  int dropped_users = 0;
};

// Per user, items grouped by exactly equal rating, best first. Singleton
// groups with something below them become separators; all other groups
// between two separators merge into one unordered block. Only the "block"
// tie policy exists.
RatingsConversion RatingsToPartialOrders(const RatingsTable& table,
                                         std::string_view tie_policy);

// printf("%.17g") without locale dependence. NaN and infinities print as
// nan, inf and -inf.
std::string FormatNumber(double value);

using CsvRow = std::vector<std::string>;

void WriteCsv(const CsvRow& header, const std::vector<CsvRow>& rows,
              std::ostream& out);
// Throws IoError naming the path.
void EmitCsv(const CsvRow& header, const std::vector<CsvRow>& rows,
             const std::filesystem::path& path);
// RFC 4180 reader; the first row is returned like any other.
std::vector<CsvRow> ParseCsv(std::istream& in);

std::vector<CsvRow> ScalingRowsToCsv(const std::vector<ScalingRow>& rows);

nlohmann::json FitResultToJson(const FitResult& fit, const ItemIndex& index);
nlohmann::json DiagnosticsToJson(const Diagnostics& diag);

// Reads a whole file; throws IoError naming the path.
std::string ReadFile(const std::filesystem::path& path);
void WriteFile(const std::filesystem::path& path, std::string_view text);

}  // namespace rankbreak

#endif  // RANKBREAK_IO_H_
