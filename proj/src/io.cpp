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

#include "fairalloc/io.hpp"

#include <cmath>
#include <fstream>

#include <fmt/format.h>

#include "fairalloc/errors.hpp"

namespace fairalloc {

using nlohmann::json;

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError(fmt::format("cannot open '{}'", path.string()));
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw InputError(fmt::format("'{}' is not valid JSON: {}", path.string(), e.what()));
  }
}

DistributionSet distribution_set_from_json(const json& j) {
  DistributionSet set;
  try {
    const auto& groups = j.at("groups");
    if (!groups.is_array() || groups.empty()) {
      throw InputError("distribution set needs a non-empty \"groups\" array");
    }
    for (const auto& g : groups) {
      Group group;
      group.id = g.at("id").is_string() ? g.at("id").get<std::string>() : g.at("id").dump();
      group.size = g.contains("size") ? g.at("size").get<int>() : 1;
      if (group.size < 1) throw InputError(fmt::format("group '{}' has size < 1", group.id));
      auto pmf = g.at("pmf").get<std::vector<double>>();
      double total = 0.0;
      for (double p : pmf) total += p;
      if (!std::isfinite(total) || std::abs(total - 1.0) > kRenormalizeTolerance) {
        throw InputError(
            fmt::format("group '{}' pmf sums to {:.9g}; not a distribution", group.id, total));
      }
      if (std::abs(total - 1.0) > CandidateDistribution::kNormTolerance) {
        for (double& p : pmf) p /= total;
      }
      set.dists.emplace_back(std::move(pmf));
      set.groups.push_back(std::move(group));
    }
  } catch (const json::exception& e) {
    throw InputError(fmt::format("malformed distribution set: {}", e.what()));
  } catch (const InvalidArgument& e) {
    throw InputError(fmt::format("malformed distribution set: {}", e.what()));
  }
  return set;
}

json to_json(const DistributionSet& set) {
  json groups = json::array();
  for (std::size_t i = 0; i < set.groups.size(); ++i) {
    const auto pmf = set.dists[i].pmf();
    groups.push_back({{"id", set.groups[i].id},
                      {"size", set.groups[i].size},
                      {"pmf", std::vector<double>(pmf.begin(), pmf.end())}});
  }
  return json{{"groups", groups}};
}

DistributionSet load_distribution_set(const std::filesystem::path& path) {
  return distribution_set_from_json(read_json_file(path));
}

RandomModelInstance random_instance_from_json(const json& j) {
  RandomModelInstance inst;
  try {
    const auto sizes = j.at("sizes").get<std::vector<int>>();
    inst.mus = j.at("mus").get<std::vector<double>>();
    inst.budget = j.at("budget").get<int>();
    for (std::size_t i = 0; i < sizes.size(); ++i) {
      inst.groups.push_back(Group{std::to_string(i + 1), sizes[i]});
    }
    inst.validate();
  } catch (const json::exception& e) {
    throw InputError(fmt::format("malformed random-model instance: {}", e.what()));
  } catch (const InvalidArgument& e) {
    throw InputError(fmt::format("malformed random-model instance: {}", e.what()));
  }
  return inst;
}

json to_json(const RandomModelInstance& inst) {
  std::vector<int> sizes;
  for (const auto& g : inst.groups) sizes.push_back(g.size);
  return json{{"sizes", sizes}, {"mus", inst.mus}, {"budget", inst.budget}};
}

RandomModelInstance load_random_instance(const std::filesystem::path& path) {
  return random_instance_from_json(read_json_file(path));
}

json allocation_json(double alpha, const Allocation& alloc, double utility, double violation) {
  return json{{"alpha", alpha},
              {"budget", alloc.budget},
              {"units", alloc.units},
              {"utility", utility},
              {"violation", violation}};
}

json to_json(const LpSolution& sol) { return json{{"objective", sol.objective}, {"p", sol.p}}; }

DistributionSet distribution_set_from_series(const std::vector<DistrictSeries>& series) {
  DistributionSet set;
  for (const auto& s : series) {
    set.groups.push_back(Group{s.district, std::max(1, s.empirical.support_max())});
    set.dists.push_back(s.empirical);
  }
  return set;
}

}  // namespace fairalloc
