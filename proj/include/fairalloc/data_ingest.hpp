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

#pragma once

#include <filesystem>
#include <istream>
#include <optional>
#include <string>
#include <vector>

#include "fairalloc/distributions.hpp"

namespace fairalloc {

struct IngestOptions {
  std::string date_column = "dispatch_date";
  std::string district_column = "dc_dist";
  std::vector<std::string> exclusions;
  // strftime-style pattern; empty means ISO-8601 (YYYY-MM-DD, optionally
  // followed by a time part which is ignored).
  std::string date_format;
  // Abort when more than this fraction of data rows fails to parse.
  double max_unparseable_fraction = 0.01;
};

/// Daily candidate counts for one district plus the distributions derived
/// from them.
struct DistrictSeries {
  std::string district;
  std::vector<int> daily_counts;
  CandidateDistribution empirical;
  PoissonSpec poisson_fit;

  double mean() const;
  double stddev() const;
};

struct IngestReport {
  std::vector<DistrictSeries> series;
  long rows = 0;
  long unparseable = 0;
};

/// Days since 1970-01-01, or nullopt when `text` does not match.
std::optional<long> parse_date(const std::string& text, const std::string& format = {});

/// Splits one CSV record (RFC 4180 quoting).
std::vector<std::string> split_csv_line(const std::string& line);

/// Groups incident rows into per-district daily counts. Days between a
/// district's first and last report that have no rows count as 0.
/// Districts are ordered numerically when every id is an integer, else
/// lexicographically.
IngestReport ingest_csv(std::istream& in, const IngestOptions& options);
IngestReport ingest_csv(const std::filesystem::path& path, const IngestOptions& options);

DistrictSeries make_series(std::string district, std::vector<int> daily_counts);

struct FitDistances {
  double l1 = 0.0;
  double linf = 0.0;
};

/// l1 and l-infinity distance between the empirical pmf and the untruncated
/// Poisson pmf at the fitted rate. With drop_zero the count-0 bin is removed
/// from both sides and the empirical remainder renormalized.
FitDistances fit_distances(const DistrictSeries& series, bool drop_zero);

}  // namespace fairalloc
