// Copyright 2026 The fairalloc Authors
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

#include "fairalloc/data_ingest.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <map>
#include <numeric>
#include <sstream>

#include <fmt/format.h>

#include "fairalloc/errors.hpp"

namespace fairalloc {

namespace {

std::optional<long> days_from_civil(int y, unsigned m, unsigned d) {
  const std::chrono::year_month_day ymd{std::chrono::year{y}, std::chrono::month{m},
                                        std::chrono::day{d}};
  if (!ymd.ok()) return std::nullopt;
  return std::chrono::sys_days{ymd}.time_since_epoch().count();
}

template <class T>
bool parse_int(std::string_view s, T& out) {
  const auto* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, out);
  return ec == std::errc{} && ptr == end;
}

std::string trim(std::string s) {
  const auto not_space = [](unsigned char ch) { return !std::isspace(ch); };
  s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
  s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
  return s;
}

// "04" and "4" name the same district.
std::string normalize_id(std::string id) {
  id = trim(std::move(id));
  long numeric = 0;
  if (parse_int(id, numeric)) return std::to_string(numeric);
  return id;
}

bool district_less(const std::string& a, const std::string& b) {
  long x = 0;
  long y = 0;
  if (parse_int(a, x) && parse_int(b, y) && x != y) return x < y;
  return a < b;
}

}  // namespace

std::optional<long> parse_date(const std::string& raw, const std::string& format) {
  const std::string text = trim(raw);
  if (format.empty()) {
    if (text.size() < 10 || text[4] != '-' || text[7] != '-') return std::nullopt;
    if (text.size() > 10 && text[10] != 'T' && text[10] != ' ') return std::nullopt;
    int y = 0;
    unsigned m = 0;
    unsigned d = 0;
    if (!parse_int(std::string_view(text).substr(0, 4), y) ||
        !parse_int(std::string_view(text).substr(5, 2), m) ||
        !parse_int(std::string_view(text).substr(8, 2), d)) {
      return std::nullopt;
    }
    return days_from_civil(y, m, d);
  }
  std::tm tm{};
  std::istringstream in(text);
  in >> std::get_time(&tm, format.c_str());
  if (in.fail()) return std::nullopt;
  return days_from_civil(tm.tm_year + 1900, static_cast<unsigned>(tm.tm_mon + 1),
                         static_cast<unsigned>(tm.tm_mday));
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char ch = line[i];
    if (quoted) {
      if (ch == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur.push_back(ch);
      }
    } else if (ch == '"') {
      quoted = true;
    } else if (ch == ',') {
      fields.push_back(std::move(cur));
      cur.clear();
    } else if (ch != '\r') {
      cur.push_back(ch);
    }
  }
  fields.push_back(std::move(cur));
  return fields;
}

double DistrictSeries::mean() const {
  if (daily_counts.empty()) return 0.0;
  const double total = std::accumulate(daily_counts.begin(), daily_counts.end(), 0.0);
  return total / static_cast<double>(daily_counts.size());
}

double DistrictSeries::stddev() const {
  if (daily_counts.empty()) return 0.0;
  const double mu = mean();
  double s = 0.0;
  for (int c : daily_counts) s += (c - mu) * (c - mu);
  return std::sqrt(s / static_cast<double>(daily_counts.size()));
}

DistrictSeries make_series(std::string district, std::vector<int> daily_counts) {
  if (daily_counts.empty()) {
    throw InvalidArgument(fmt::format("district '{}' has no observed days", district));
  }
  const int top = *std::max_element(daily_counts.begin(), daily_counts.end());
  std::vector<double> pmf(static_cast<std::size_t>(top) + 1, 0.0);
  for (int c : daily_counts) pmf[static_cast<std::size_t>(c)] += 1.0;
  for (double& p : pmf) p /= static_cast<double>(daily_counts.size());

  const double total = std::accumulate(daily_counts.begin(), daily_counts.end(), 0.0);
  const double mean = total / static_cast<double>(daily_counts.size());
  if (!(mean > 0.0)) {
    throw InvalidArgument(fmt::format("district '{}' has zero mean; no Poisson fit", district));
  }
  return DistrictSeries{std::move(district), std::move(daily_counts),
                        CandidateDistribution(std::move(pmf)), PoissonSpec{mean, 1e-12}};
}

IngestReport ingest_csv(std::istream& in, const IngestOptions& options) {
  std::string line;
  if (!std::getline(in, line)) throw InputError("CSV input is empty");
  const auto header = split_csv_line(line);
  auto column = [&](const std::string& name) {
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (trim(header[i]) == name) return i;
    }
    throw InputError(fmt::format("CSV header has no column '{}'", name));
  };
  const std::size_t date_col = column(options.date_column);
  const std::size_t district_col = column(options.district_column);

  IngestReport report;
  std::map<std::string, std::map<long, int>> counts;
  while (std::getline(in, line)) {
    if (line.empty() || line == "\r") continue;
    ++report.rows;
    const auto fields = split_csv_line(line);
    if (fields.size() <= std::max(date_col, district_col)) {
      ++report.unparseable;
      continue;
    }
    const auto day = parse_date(fields[date_col], options.date_format);
    const std::string district = normalize_id(fields[district_col]);
    if (!day || district.empty()) {
      ++report.unparseable;
      continue;
    }
    ++counts[district][*day];
  }
  if (report.rows > 0 &&
      static_cast<double>(report.unparseable) >
          options.max_unparseable_fraction * static_cast<double>(report.rows)) {
    throw InputError(fmt::format("{} of {} rows could not be parsed (limit {:.2f}%)",
                                 report.unparseable, report.rows,
                                 100.0 * options.max_unparseable_fraction));
  }

  std::vector<std::string> excluded_ids;
  for (const auto& e : options.exclusions) excluded_ids.push_back(normalize_id(e));
  std::vector<std::string> ids;
  for (const auto& [id, days] : counts) {
    const bool excluded =
        std::find(excluded_ids.begin(), excluded_ids.end(), id) != excluded_ids.end();
    if (!excluded) ids.push_back(id);
  }
  std::sort(ids.begin(), ids.end(), district_less);

  for (const auto& id : ids) {
    const auto& days = counts.at(id);
    const long first = days.begin()->first;
    const long last = days.rbegin()->first;
    std::vector<int> daily(static_cast<std::size_t>(last - first + 1), 0);
    for (const auto& [d, n] : days) daily[static_cast<std::size_t>(d - first)] = n;
    report.series.push_back(make_series(id, std::move(daily)));
  }
  return report;
}

IngestReport ingest_csv(const std::filesystem::path& path, const IngestOptions& options) {
  std::ifstream in(path);
  if (!in) throw InputError(fmt::format("cannot open '{}'", path.string()));
  return ingest_csv(in, options);
}

FitDistances fit_distances(const DistrictSeries& series, bool drop_zero) {
  const double lambda = series.poisson_fit.lambda;
  const auto fit_support = poisson_truncate(series.poisson_fit).support_max();
  const int top = std::max(series.empirical.support_max(), fit_support);
  const int start = drop_zero ? 1 : 0;
  double mass = 1.0;
  if (drop_zero) mass = 1.0 - series.empirical.pmf(0);

  FitDistances out;
  for (int c = start; c <= top; ++c) {
    const double emp = mass > 0.0 ? series.empirical.pmf(c) / mass : 0.0;
    const double diff = std::abs(emp - poisson_pmf(c, lambda));
    out.l1 += diff;
    out.linf = std::max(out.linf, diff);
  }
  return out;
}

}  // namespace fairalloc
