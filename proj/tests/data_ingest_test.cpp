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

#include <chrono>
#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include <doctest.h>
#include <fmt/format.h>

#include "fairalloc/errors.hpp"
#include "fairalloc/rng.hpp"

using namespace fairalloc;
using doctest::Approx;

namespace {

std::string iso(long days) {
  const std::chrono::year_month_day ymd{std::chrono::sys_days{std::chrono::days{days}}};
  return fmt::format("{:04}-{:02}-{:02}", static_cast<int>(ymd.year()),
                     static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()));
}

IngestReport ingest_text(const std::string& text, const IngestOptions& opts = {}) {
  std::istringstream in(text);
  return ingest_csv(in, opts);
}

}  // namespace

TEST_CASE("parse_date") {
  CHECK(parse_date("1970-01-01") == 0L);
  CHECK(parse_date("2006-01-02") == 13150L);
  CHECK(parse_date("2016-12-31 23:59:00") == 17166L);
  CHECK(parse_date("2016-12-31T00:00:00Z") == 17166L);
  CHECK_FALSE(parse_date("12/31/2016").has_value());
  CHECK_FALSE(parse_date("").has_value());
  CHECK(parse_date("12/31/2016", "%m/%d/%Y") == 17166L);
}

TEST_CASE("split_csv_line") {
  CHECK(split_csv_line("a,b,c") == std::vector<std::string>{"a", "b", "c"});
  CHECK(split_csv_line("\"x,y\",2") == std::vector<std::string>{"x,y", "2"});
  CHECK(split_csv_line("\"say \"\"hi\"\"\",") == std::vector<std::string>{"say \"hi\"", ""});
  CHECK(split_csv_line("a,b\r") == std::vector<std::string>{"a", "b"});
}

TEST_CASE("daily aggregation") {
  const std::string csv =
      "dc_dist,dispatch_date,text\n"
      "1,2010-05-01,a\n"
      "1,2010-05-01,b\n"
      "01,2010-05-01,c\n"
      "1,2010-05-03,d\n"
      "2,2010-05-02,e\n";
  const auto report = ingest_text(csv);
  CHECK(report.rows == 5);
  CHECK(report.unparseable == 0);
  REQUIRE(report.series.size() == 2);
  CHECK(report.series[0].district == "1");
  // Zero-count days inside the observed span are kept.
  CHECK(report.series[0].daily_counts == std::vector<int>{3, 0, 1});
  CHECK(report.series[1].daily_counts == std::vector<int>{1});
  CHECK(report.series[0].mean() == Approx(4.0 / 3.0));
  CHECK(report.series[0].poisson_fit.lambda == Approx(4.0 / 3.0));
}

TEST_CASE("exclusions and ordering") {
  const std::string csv =
      "dispatch_date,dc_dist\n"
      "2010-05-01,10\n"
      "2010-05-01,2\n"
      "2010-05-01,77\n"
      "2010-05-01,9\n";
  IngestOptions opts;
  opts.exclusions = {"077"};
  const auto report = ingest_text(csv, opts);
  REQUIRE(report.series.size() == 3);
  CHECK(report.series[0].district == "2");
  CHECK(report.series[1].district == "9");
  CHECK(report.series[2].district == "10");
}

TEST_CASE("malformed input") {
  CHECK_THROWS_AS(ingest_text(""), InputError);
  CHECK_THROWS_AS(ingest_text("foo,bar\n1,2\n"), InputError);
  const std::string bad =
      "dc_dist,dispatch_date\n"
      "1,2010-05-01\n"
      "1,not a date\n";
  CHECK_THROWS_AS(ingest_text(bad), InputError);
  IngestOptions lenient;
  lenient.max_unparseable_fraction = 0.6;
  const auto report = ingest_text(bad, lenient);
  CHECK(report.unparseable == 1);
  CHECK(report.series.size() == 1);
  CHECK_THROWS_AS(ingest_csv(std::filesystem::path("/nonexistent/file.csv"), IngestOptions{}),
                  InputError);
}

TEST_CASE("custom column names and date format") {
  const std::string csv =
      "when,where\n"
      "05/01/2010,A\n"
      "05/02/2010,A\n";
  IngestOptions opts;
  opts.date_column = "when";
  opts.district_column = "where";
  opts.date_format = "%m/%d/%Y";
  const auto report = ingest_text(csv, opts);
  REQUIRE(report.series.size() == 1);
  CHECK(report.series[0].district == "A");
  CHECK(report.series[0].daily_counts == std::vector<int>{1, 1});
}

TEST_CASE("synthetic Poisson stream recovers its rate") {
  constexpr double kRate = 11.35;
  constexpr int kDays = 4018;
  const auto d = poisson_truncate({kRate, 1e-12});
  Rng rng(1135);
  std::string csv = "dc_dist,dispatch_date\n";
  const long start = *parse_date("2006-01-01");
  for (int day = 0; day < kDays; ++day) {
    const int n = sample(d, rng);
    const std::string date = iso(start + day);
    for (int k = 0; k < n; ++k) csv += "1," + date + "\n";
  }
  const auto report = ingest_text(csv);
  REQUIRE(report.series.size() == 1);
  // Leading/trailing zero days would be trimmed; the span may shrink by a day or two.
  CHECK(report.series[0].daily_counts.size() >= kDays - 2);
  const double sigma = std::sqrt(kRate / kDays);
  CHECK(std::abs(report.series[0].poisson_fit.lambda - kRate) <= 3.0 * sigma);
}

TEST_CASE("make_series and fit_distances") {
  CHECK_THROWS_AS(make_series("x", {}), InvalidArgument);
  CHECK_THROWS_AS(make_series("x", {0, 0}), InvalidArgument);

  SUBCASE("empirical equal to its own fit") {
    const PoissonSpec spec{6.5, 1e-12};
    DistrictSeries s{"z", {6}, poisson_truncate(spec), spec};
    const auto dist = fit_distances(s, false);
    CHECK(dist.l1 <= 1e-10);
    CHECK(dist.linf <= 1e-10);
  }
  SUBCASE("hand-computed distances") {
    const auto s = make_series("y", {0, 1, 1, 2});
    const auto dist = fit_distances(s, false);
    const double lambda = 1.0;
    double l1 = 0.0;
    double linf = 0.0;
    const std::vector<double> emp{0.25, 0.5, 0.25};
    for (int c = 0; c < 40; ++c) {
      const double e = c < 3 ? emp[static_cast<std::size_t>(c)] : 0.0;
      const double p = std::exp(-lambda + c * std::log(lambda) - std::lgamma(c + 1.0));
      l1 += std::abs(e - p);
      linf = std::max(linf, std::abs(e - p));
    }
    CHECK(dist.l1 == Approx(l1).epsilon(1e-9));
    CHECK(dist.linf == Approx(linf).epsilon(1e-12));
  }
  SUBCASE("linf unchanged by drop_zero when the worst count is nonzero") {
    Rng rng(21);
    const auto d = poisson_truncate({8.0, 1e-12});
    for (int trial = 0; trial < 40; ++trial) {
      std::vector<int> counts(200);
      for (auto& c : counts) c = 1 + sample(d, rng);
      const auto s = make_series("w", counts);
      CHECK(s.empirical.pmf(0) == 0.0);
      CHECK(fit_distances(s, true).linf == fit_distances(s, false).linf);
    }
  }
}

TEST_CASE("stddev is the population deviation") {
  const auto s = make_series("q", {2, 4, 4, 4, 5, 5, 7, 9});
  CHECK(s.mean() == Approx(5.0));
  CHECK(s.stddev() == Approx(2.0));
}

TEST_CASE("ingestion is deterministic") {
  const std::string csv =
      "dc_dist,dispatch_date\n"
      "3,2011-01-01\n3,2011-01-04\n4,2011-01-02\n3,2011-01-04\n";
  const auto a = ingest_text(csv);
  const auto b = ingest_text(csv);
  REQUIRE(a.series.size() == b.series.size());
  for (std::size_t i = 0; i < a.series.size(); ++i) {
    CHECK(a.series[i].district == b.series[i].district);
    CHECK(a.series[i].daily_counts == b.series[i].daily_counts);
  }
}
