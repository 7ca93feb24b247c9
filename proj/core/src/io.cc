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

#include "rankbreak/io.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <system_error>
#include <utility>

#include "rankbreak/errors.h"

namespace rankbreak {
namespace {

std::string_view Trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> SplitComma(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = s.find(',', start);
    out.push_back(Trim(s.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

std::ifstream OpenForRead(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string() + " for reading");
  return in;
}

std::string IdOf(const nlohmann::json& v, std::size_t line) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_integer()) return std::to_string(v.get<long long>());
  throw ParseError("item ids must be strings or integers", line);
}

const nlohmann::json& Field(const nlohmann::json& record, const char* name,
                            std::size_t line) {
  const auto it = record.find(name);
  if (it == record.end() || !it->is_array()) {
    throw ParseError(std::string("missing array field \"") + name + "\"",
                     line);
  }
  return *it;
}

bool ParseDouble(std::string_view s, double& out) {
  s = Trim(s);
  if (s.empty()) return false;
  const auto result = std::from_chars(s.data(), s.data() + s.size(), out);
  return result.ec == std::errc() && result.ptr == s.data() + s.size();
}

std::string QuoteCsv(const std::string& field) {
  if (field.find_first_of(",\"\r\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

}  // namespace

PartialOrderData ParsePartialOrdersJsonl(std::istream& in) {
  PartialOrderData data;
  std::string text;
  std::size_t line = 0;
  while (std::getline(in, text)) {
    ++line;
    if (Trim(text).empty()) continue;
    nlohmann::json record;
    try {
      record = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
      throw ParseError(std::string("malformed JSON: ") + e.what(), line);
    }
    if (!record.is_object()) throw ParseError("expected a JSON object", line);
    const auto& offering_json = Field(record, "offering", line);
    const auto& positions_json = Field(record, "positions", line);
    const auto& blocks_json = Field(record, "blocks", line);

    std::vector<int> offering;
    for (const auto& v : offering_json) {
      offering.push_back(data.index.Intern(IdOf(v, line)));
    }
    std::vector<int> positions;
    for (const auto& v : positions_json) {
      if (!v.is_number_integer()) {
        throw ParseError("positions must be integers", line);
      }
      positions.push_back(v.get<int>());
    }
    std::vector<std::vector<int>> blocks;
    for (const auto& block : blocks_json) {
      if (!block.is_array()) throw ParseError("blocks must be arrays", line);
      std::vector<int> items;
      for (const auto& v : block) {
        const int idx = data.index.Find(IdOf(v, line));
        if (idx < 0) {
          throw InvalidInputError("line " + std::to_string(line) +
                                  ": block item " + IdOf(v, line) +
                                  " is not in the offering");
        }
        items.push_back(idx);
      }
      blocks.push_back(std::move(items));
    }
    try {
      data.orders.emplace_back(Offering(std::move(offering)),
                               std::move(positions), std::move(blocks));
    } catch (const InvalidInputError& e) {
      throw InvalidInputError("line " + std::to_string(line) + ": " +
                              e.what());
    }
  }
  return data;
}

PartialOrderData ParsePartialOrdersJsonl(const std::filesystem::path& path) {
  std::ifstream in = OpenForRead(path);
  return ParsePartialOrdersJsonl(in);
}

void WritePartialOrdersJsonl(const PartialOrderData& data, std::ostream& out) {
  for (const PartialOrder& order : data.orders) {
    nlohmann::json record;
    nlohmann::json offering = nlohmann::json::array();
    for (int item : order.offering().items()) {
      offering.push_back(data.index.Name(item));
    }
    nlohmann::json blocks = nlohmann::json::array();
    for (const auto& block : order.blocks()) {
      nlohmann::json ids = nlohmann::json::array();
      for (int item : block) ids.push_back(data.index.Name(item));
      blocks.push_back(std::move(ids));
    }
    record["offering"] = std::move(offering);
    record["positions"] = order.positions();
    record["blocks"] = std::move(blocks);
    out << record.dump() << '\n';
  }
}

RankingData ParseSoc(std::istream& in) {
  RankingData data;
  std::string text;
  std::size_t line = 0;
  bool have_header = false;
  while (std::getline(in, text)) {
    ++line;
    const std::string_view body = Trim(text);
    if (body.empty() || body.front() == '#') continue;
    if (!have_header) {
      for (std::string_view id : SplitComma(body)) {
        if (id.empty()) throw ParseError("empty item id in header", line);
        if (data.index.Find(id) >= 0) {
          throw ParseError("header repeats item " + std::string(id), line);
        }
        data.index.Intern(id);
      }
      if (data.index.size() < 2) {
        throw ParseError("header needs at least two items", line);
      }
      have_header = true;
      continue;
    }
    const auto colon = body.find(':');
    if (colon == std::string_view::npos) {
      throw ParseError("expected \"count: ranking\"", line);
    }
    const std::string_view count_text = Trim(body.substr(0, colon));
    long long count = 0;
    const auto parsed = std::from_chars(
        count_text.data(), count_text.data() + count_text.size(), count);
    if (parsed.ec != std::errc() ||
        parsed.ptr != count_text.data() + count_text.size() || count < 1) {
      throw ParseError("count must be a positive integer", line);
    }
    std::vector<int> order;
    std::vector<char> seen(data.index.size(), 0);
    for (std::string_view id : SplitComma(body.substr(colon + 1))) {
      const int idx = data.index.Find(id);
      if (idx < 0) throw ParseError("unknown item " + std::string(id), line);
      if (seen[idx]) throw ParseError("item repeated: " + std::string(id), line);
      seen[idx] = 1;
      order.push_back(idx);
    }
    if (static_cast<int>(order.size()) != data.index.size()) {
      throw ParseError("ranking lists " + std::to_string(order.size()) +
                           " of " + std::to_string(data.index.size()) +
                           " items",
                       line);
    }
    for (long long c = 0; c < count; ++c) data.rankings.emplace_back(order);
  }
  return data;
}

RankingData ParseSoc(const std::filesystem::path& path) {
  std::ifstream in = OpenForRead(path);
  return ParseSoc(in);
}

RatingsTable ParseRatingsCsv(std::istream& in) {
  RatingsTable table;
  std::map<std::pair<std::string, std::string>, std::size_t> slot;
  const std::vector<CsvRow> rows = ParseCsv(in);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const CsvRow& row = rows[r];
    const std::size_t line = r + 1;
    if (row.size() == 1 && Trim(row[0]).empty()) continue;
    if (row.size() != 3) {
      throw ParseError("expected user,item,rating", line);
    }
    double value = 0.0;
    if (!ParseDouble(row[2], value)) {
      if (r == 0) continue;  // header
      throw ParseError("rating is not a number: " + row[2], line);
    }
    if (!std::isfinite(value)) throw ParseError("rating must be finite", line);
    const std::string user(Trim(row[0]));
    const std::string item(Trim(row[1]));
    const auto key = std::make_pair(user, item);
    const auto it = slot.find(key);
    if (it != slot.end()) {
      table.ratings[it->second].value = value;
      ++table.duplicates_replaced;
    } else {
      slot.emplace(key, table.ratings.size());
      table.ratings.push_back({user, item, value});
    }
  }
  return table;
}

RatingsTable ParseRatingsCsv(const std::filesystem::path& path) {
  std::ifstream in = OpenForRead(path);
  return ParseRatingsCsv(in);
}

RatingsConversion RatingsToPartialOrders(const RatingsTable& table,
                                         std::string_view tie_policy) {
  if (tie_policy != "block") {
    throw InvalidInputError("unknown tie policy \"" + std::string(tie_policy) +
                            "\"; only \"block\" is supported");
  }
  RatingsConversion out;
  // Users in first-seen order.
  std::vector<std::string> users;
  std::map<std::string, std::vector<std::pair<double, int>>> by_user;
  for (const Rating& r : table.ratings) {
    auto [it, fresh] = by_user.try_emplace(r.user);
    if (fresh) users.push_back(r.user);
    it->second.emplace_back(r.value, out.data.index.Intern(r.item));
  }
  for (const std::string& user : users) {
    auto entries = by_user[user];
    std::sort(entries.begin(), entries.end(), [](const auto& x, const auto& y) {
      if (x.first != y.first) return x.first > y.first;
      return x.second < y.second;
    });
    std::vector<std::vector<int>> levels;
    for (std::size_t k = 0; k < entries.size(); ++k) {
      if (k == 0 || entries[k].first != entries[k - 1].first) {
        levels.emplace_back();
      }
      levels.back().push_back(entries[k].second);
    }
    std::vector<std::vector<int>> blocks(1);
    std::vector<int> positions;
    std::vector<int> offering;
    int placed = 0;
    for (std::size_t g = 0; g < levels.size(); ++g) {
      const bool separator = levels[g].size() == 1 && g + 1 < levels.size();
      if (separator) {
        positions.push_back(placed + 1);
        blocks.push_back(levels[g]);
        blocks.emplace_back();
      } else {
        blocks.back().insert(blocks.back().end(), levels[g].begin(),
                             levels[g].end());
      }
      placed += static_cast<int>(levels[g].size());
      offering.insert(offering.end(), levels[g].begin(), levels[g].end());
    }
    if (positions.empty() || offering.size() < 2) {
      ++out.dropped_users;
      continue;
    }
    out.data.orders.emplace_back(Offering(std::move(offering)),
                                 std::move(positions), std::move(blocks));
    out.users.push_back(user);
  }
  return out;
}

std::string FormatNumber(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  const auto result = std::to_chars(buf, buf + sizeof(buf), value,
                                    std::chars_format::general, 17);
  return std::string(buf, result.ptr);
}

void WriteCsv(const CsvRow& header, const std::vector<CsvRow>& rows,
              std::ostream& out) {
  auto write_row = [&](const CsvRow& row) {
    for (std::size_t k = 0; k < row.size(); ++k) {
      if (k) out << ',';
      out << QuoteCsv(row[k]);
    }
    out << "\r\n";
  };
  write_row(header);
  for (const CsvRow& row : rows) {
    if (row.size() != header.size()) {
      throw InvalidInputError("CSV row width differs from the header");
    }
    write_row(row);
  }
}

void EmitCsv(const CsvRow& header, const std::vector<CsvRow>& rows,
             const std::filesystem::path& path) {
  std::ostringstream buffer;
  WriteCsv(header, rows, buffer);
  WriteFile(path, buffer.str());
}

std::vector<CsvRow> ParseCsv(std::istream& in) {
  std::vector<CsvRow> rows;
  const std::string text((std::istreambuf_iterator<char>(in)),
                         std::istreambuf_iterator<char>());
  CsvRow row;
  std::string field;
  bool quoted = false;
  bool any = false;  // current row has content
  std::size_t line = 1;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        if (c == '\n') ++line;
        field += c;
      }
      continue;
    }
    switch (c) {
      case '"':
        if (!field.empty()) {
          throw ParseError("quote inside an unquoted field", line);
        }
        quoted = true;
        any = true;
        break;
      case ',':
        row.push_back(std::move(field));
        field.clear();
        any = true;
        break;
      case '\r':
        break;
      case '\n':
        if (any || !field.empty()) {
          row.push_back(std::move(field));
          rows.push_back(std::move(row));
        }
        row.clear();
        field.clear();
        any = false;
        ++line;
        break;
      default:
        field += c;
        any = true;
    }
  }
  if (quoted) throw ParseError("unterminated quoted field", line);
  if (any || !field.empty()) {
    row.push_back(std::move(field));
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<CsvRow> ScalingRowsToCsv(const std::vector<ScalingRow>& rows) {
  std::vector<CsvRow> out;
  for (const ScalingRow& r : rows) {
    out.push_back({r.scenario_id, r.axis, FormatNumber(r.axis_value),
                   r.estimator, r.scheme, std::to_string(r.trials),
                   FormatNumber(r.mean_mse), FormatNumber(r.ci_low),
                   FormatNumber(r.ci_high), FormatNumber(r.alpha),
                   FormatNumber(r.beta), FormatNumber(r.gamma),
                   FormatNumber(r.eta), FormatNumber(r.runtime_ms)});
  }
  return out;
}

nlohmann::json FitResultToJson(const FitResult& fit, const ItemIndex& index) {
  auto name = [&](int item) {
    return item < index.size() ? index.Name(item) : std::to_string(item);
  };
  nlohmann::json utilities = nlohmann::json::object();
  for (std::size_t k = 0; k < fit.items.size(); ++k) {
    utilities[name(fit.items[k])] = fit.theta[static_cast<int>(k)];
  }
  nlohmann::json members = nlohmann::json::array();
  for (const auto& group : fit.components.members) {
    nlohmann::json ids = nlohmann::json::array();
    for (int item : group) ids.push_back(name(item));
    members.push_back(std::move(ids));
  }
  nlohmann::json dropped = nlohmann::json::array();
  for (int item : fit.dropped_items) dropped.push_back(name(item));
  return {
      {"utilities", std::move(utilities)},
      {"b", fit.theta.b()},
      {"centering", "zero sum within each component over fitted items"},
      {"iterations", fit.iterations},
      {"gradient_norm", fit.gradient_norm},
      {"converged", fit.converged},
      {"objective_trace", fit.objective_trace},
      {"components",
       {{"count", fit.components.count},
        {"disconnected", fit.components.disconnected},
        {"members", std::move(members)}}},
      {"dropped_items", std::move(dropped)},
  };
}

nlohmann::json DiagnosticsToJson(const Diagnostics& diag) {
  auto num = [](double v) -> nlohmann::json {
    if (std::isfinite(v)) return v;
    return nullptr;
  };
  return {
      {"alpha", num(diag.alpha)},
      {"beta", num(diag.beta)},
      {"gamma", num(diag.gamma)},
      {"eta", num(diag.eta)},
      {"tau", num(diag.tau)},
      {"delta", num(diag.delta)},
      {"chi", num(diag.chi)},
      {"d_max", num(diag.d_max)},
      {"ell_max", diag.ell_max},
      {"kappa_max", diag.kappa_max},
      {"effective_sample_size", num(diag.effective_sample_size)},
      {"num_items", diag.num_items},
      {"num_samples", diag.num_samples},
      {"lambda2", num(diag.lambda2)},
      {"trace", num(diag.trace)},
  };
}

std::string ReadFile(const std::filesystem::path& path) {
  std::ifstream in = OpenForRead(path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) throw IoError("failed reading " + path.string());
  return buffer.str();
}

void WriteFile(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  out.flush();
  if (!out) throw IoError("failed writing " + path.string());
}

}  // namespace rankbreak
