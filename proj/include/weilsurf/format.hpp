#ifndef WEILSURF_FORMAT_HPP
#define WEILSURF_FORMAT_HPP

// Text renderings of classification records: line-delimited JSON, CSV with a
// fixed header, and an aligned table.

#include <cstdio>
#include <optional>
#include <sstream>
#include <string>
#include <type_traits>
#include <vector>

#include <nlohmann/json.hpp>

#include "weilsurf/classify.hpp"

namespace weilsurf {

enum class OutputFormat { table, json, csv };

inline OutputFormat parse_output_format(const std::string& s) {
  if (s == "table") return OutputFormat::table;
  if (s == "json") return OutputFormat::json;
  if (s == "csv") return OutputFormat::csv;
  throw std::invalid_argument("unknown output format '" + s + "'");
}

inline constexpr const char* kCsvHeader = "q,a,b,admissible,p_rank,simple,s,t,order,c,jacobian";

inline std::vector<std::string> condition_names(const ClassificationRecord& r) {
  std::vector<std::string> out;
  if (r.matched.contains(Condition::ordinary)) out.emplace_back("ordinary");
  if (r.matched.contains(Condition::p_rank_one)) out.emplace_back("p-rank-one");
  if (r.matched.contains(Condition::supersingular_split)) out.emplace_back("supersingular-split");
  if (r.matched.contains(Condition::supersingular_table) && r.table_row) {
    out.push_back("supersingular-table" + std::string(to_string(*r.table_row)));
  }
  return out;
}

inline nlohmann::ordered_json to_json(const ClassificationRecord& r) {
  nlohmann::ordered_json j;
  auto opt = [](const auto& o) -> nlohmann::ordered_json {
    if (o) return *o;
    return nullptr;
  };
  j["q"] = r.q.q();
  j["a"] = r.a;
  j["b"] = r.b;
  j["admissible"] = r.admissible;
  j["conditions"] = condition_names(r);
  j["p_rank"] = opt(r.p_rank);
  j["simple"] = opt(r.simple);
  j["s"] = r.split ? nlohmann::ordered_json(r.split->s) : nlohmann::ordered_json(nullptr);
  j["t"] = r.split ? nlohmann::ordered_json(r.split->t) : nlohmann::ordered_json(nullptr);
  j["order"] = r.order;
  j["c"] = opt(r.c);
  j["jacobian"] = opt(r.jacobian);
  return j;
}

inline std::string to_json_line(const ClassificationRecord& r) { return to_json(r).dump(); }

inline std::string to_csv_line(const ClassificationRecord& r) {
  std::ostringstream os;
  auto b = [](bool v) { return v ? "true" : "false"; };
  os << r.q.q() << ',' << r.a << ',' << r.b << ',' << b(r.admissible) << ',';
  if (r.p_rank) os << *r.p_rank;
  os << ',';
  if (r.simple) os << b(*r.simple);
  os << ',';
  if (r.split) os << r.split->s;
  os << ',';
  if (r.split) os << r.split->t;
  os << ',' << r.order << ',';
  if (r.c) os << *r.c;
  os << ',';
  if (r.jacobian) os << b(*r.jacobian);
  return os.str();
}

/// Inverse of to_csv_line for the columns the CSV carries; conditions are re-derived.
inline ClassificationRecord from_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream is(line);
  while (std::getline(is, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  if (cells.size() != 11) throw std::invalid_argument("expected 11 CSV cells, got " + std::to_string(cells.size()));
  auto to_bool = [](const std::string& s) {
    if (s == "true") return true;
    if (s == "false") return false;
    throw std::invalid_argument("bad boolean '" + s + "'");
  };
  ClassificationRecord r;
  r.q = parse_prime_power(std::stoll(cells[0]));
  r.a = std::stoll(cells[1]);
  r.b = std::stoll(cells[2]);
  r.admissible = to_bool(cells[3]);
  if (!cells[4].empty()) r.p_rank = std::stoi(cells[4]);
  if (!cells[5].empty()) r.simple = to_bool(cells[5]);
  if (!cells[6].empty() || !cells[7].empty()) r.split = SplitForm{std::stoll(cells[6]), std::stoll(cells[7])};
  r.order = std::stoll(cells[8]);
  if (!cells[9].empty()) r.c = std::stoll(cells[9]);
  if (!cells[10].empty()) r.jacobian = to_bool(cells[10]);
  if (r.admissible) {
    const auto v = admissibility(WeilCoeffs{r.q, r.a, r.b});
    r.matched = v.matched;
    r.table_row = v.table_row;
  }
  return r;
}

inline std::string table_header() {
  char buf[160];
  std::snprintf(buf, sizeof buf, "%6s %5s %7s %5s %4s %6s %5s %5s %9s %3s %8s", "q", "a", "b", "adm", "rank",
                "simple", "s", "t", "order", "c", "jacobian");
  return buf;
}

inline std::string to_table_line(const ClassificationRecord& r) {
  auto cell = [](const auto& o) -> std::string {
    if (!o) return "-";
    if constexpr (std::is_same_v<std::decay_t<decltype(*o)>, bool>) return *o ? "yes" : "no";
    else return std::to_string(*o);
  };
  const std::optional<Int> s = r.split ? std::optional<Int>(r.split->s) : std::nullopt;
  const std::optional<Int> t = r.split ? std::optional<Int>(r.split->t) : std::nullopt;
  char buf[200];
  std::snprintf(buf, sizeof buf, "%6lld %5lld %7lld %5s %4s %6s %5s %5s %9lld %3s %8s",
                static_cast<long long>(r.q.q()), static_cast<long long>(r.a), static_cast<long long>(r.b),
                r.admissible ? "yes" : "no", cell(r.p_rank).c_str(), cell(r.simple).c_str(), cell(s).c_str(),
                cell(t).c_str(), static_cast<long long>(r.order), cell(r.c).c_str(), cell(r.jacobian).c_str());
  return buf;
}

/// Renders records in the requested format, one line per record plus a header for csv/table.
inline std::string render(const std::vector<ClassificationRecord>& records, OutputFormat fmt) {
  std::string out;
  switch (fmt) {
    case OutputFormat::json:
      for (const auto& r : records) out += to_json_line(r) + "\n";
      break;
    case OutputFormat::csv:
      out += std::string(kCsvHeader) + "\n";
      for (const auto& r : records) out += to_csv_line(r) + "\n";
      break;
    case OutputFormat::table:
      out += table_header() + "\n";
      for (const auto& r : records) out += to_table_line(r) + "\n";
      break;
  }
  return out;
}

}  // namespace weilsurf

#endif  // WEILSURF_FORMAT_HPP
