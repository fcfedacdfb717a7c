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
#include <string>
#include <vector>

#include <json.hpp>

#include "fairalloc/data_ingest.hpp"
#include "fairalloc/distributions.hpp"
#include "fairalloc/lp_relax.hpp"
#include "fairalloc/precision_solver.hpp"
#include "fairalloc/random_model.hpp"

namespace fairalloc {

// JSON documents exchanged by the command-line tool:
//
//   distribution set  {"groups":[{"id":str,"size":int,"pmf":[float,...]}]}
//   allocation        {"alpha":float,"budget":int,"units":[int,...],
//                      "utility":float,"violation":float}
//   random instance   {"sizes":[int,...],"mus":[float,...],"budget":int}
//   LP solution       {"objective":float,"p":[[float,...],...]}

struct DistributionSet {
  std::vector<Group> groups;
  std::vector<CandidateDistribution> dists;
};

// pmfs within 1e-9 of normalized are accepted, within 1e-6 renormalized,
// anything further off is rejected.
inline constexpr double kRenormalizeTolerance = 1e-6;

DistributionSet distribution_set_from_json(const nlohmann::json& j);
nlohmann::json to_json(const DistributionSet& set);
DistributionSet load_distribution_set(const std::filesystem::path& path);

RandomModelInstance random_instance_from_json(const nlohmann::json& j);
nlohmann::json to_json(const RandomModelInstance& inst);
RandomModelInstance load_random_instance(const std::filesystem::path& path);

nlohmann::json allocation_json(double alpha, const Allocation& alloc, double utility,
                               double violation);
nlohmann::json to_json(const LpSolution& sol);

/// Distribution set built from ingested districts; group size is the
/// district's largest observed daily count.
DistributionSet distribution_set_from_series(const std::vector<DistrictSeries>& series);

nlohmann::json read_json_file(const std::filesystem::path& path);

}  // namespace fairalloc
