// Copyright 2026 The Authors.
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

#ifndef COALITION_MODEL_HPP
#define COALITION_MODEL_HPP

#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "coalition/agent_set.hpp"
#include "coalition/errors.hpp"
#include "coalition/valuation.hpp"

namespace coalition {

/// The game (N, P, (v_k)): agent count plus one valuation per project.
struct instance {
  int agents = 0;
  std::vector<valuation> projects;
  std::string name;

  int project_count() const { return static_cast<int>(projects.size()); }

  void validate() const {
    if (agents < 1 || agents > max_agents)
      throw validation_error("instance needs 1.." + std::to_string(max_agents) +
                             " agents, got " + std::to_string(agents));
    if (projects.empty()) throw validation_error("instance needs at least one project");
    for (std::size_t k = 0; k < projects.size(); ++k)
      if (projects[k].agent_count() != agents)
        throw validation_error("project " + std::to_string(k) +
                               " is defined over a different agent count");
  }
};

/// Disjoint assignment of agents to projects. Agents may be unassigned;
/// solver outputs assign everyone. Disjointness is enforced on every
/// construction path.
class allocation {
 public:
  allocation() = default;

  explicit allocation(std::vector<agent_set> sets) : sets_(std::move(sets)) {
    agent_set seen;
    for (std::size_t k = 0; k < sets_.size(); ++k) {
      if (!seen.disjoint_with(sets_[k]))
        throw validation_error("allocation assigns some agent to several projects");
      seen = seen | sets_[k];
    }
  }

  static allocation empty(int m) { return allocation(std::vector<agent_set>(m)); }

  /// From an agent -> project map; nullopt leaves the agent unassigned.
  static allocation from_assignment(const std::vector<std::optional<int>>& assign, int m) {
    std::vector<agent_set> sets(m);
    for (std::size_t i = 0; i < assign.size(); ++i) {
      if (!assign[i]) continue;
      int k = *assign[i];
      if (k < 0 || k >= m)
        throw validation_error("assignment of agent " + std::to_string(i) +
                               " references project " + std::to_string(k));
      sets[k] = sets[k].with(static_cast<int>(i));
    }
    return allocation(std::move(sets));
  }

  int project_count() const { return static_cast<int>(sets_.size()); }
  agent_set project(int k) const { return sets_[static_cast<std::size_t>(k)]; }
  const std::vector<agent_set>& projects() const { return sets_; }

  agent_set assigned_agents() const {
    agent_set all;
    for (agent_set s : sets_) all = all | s;
    return all;
  }

  std::optional<int> project_of(int agent) const {
    for (int k = 0; k < project_count(); ++k)
      if (sets_[k].contains(agent)) return k;
    return std::nullopt;
  }

  std::vector<std::optional<int>> to_assignment(int n) const {
    std::vector<std::optional<int>> out(n);
    for (int k = 0; k < project_count(); ++k)
      for_each_member(sets_[k], [&](int i) { out[i] = k; });
    return out;
  }

  /// Returns a copy with agent moved to project k (removing it elsewhere).
  allocation moved(int agent, int k) const {
    std::vector<agent_set> sets = sets_;
    for (auto& s : sets) s = s.without(agent);
    sets[k] = sets[k].with(agent);
    allocation out;
    out.sets_ = std::move(sets);  // moving one agent preserves disjointness
    return out;
  }

  friend bool operator==(const allocation& a, const allocation& b) {
    return a.sets_ == b.sets_;
  }

  void validate_for(const instance& inst) const {
    if (project_count() != inst.project_count())
      throw validation_error("allocation project count mismatch");
    agent_set universe = agent_set::full(inst.agents);
    for (agent_set s : sets_)
      if (!s.subset_of(universe))
        throw validation_error("allocation references agents outside the instance");
  }

 private:
  std::vector<agent_set> sets_;
};

/// Per-agent nonnegative payments.
using payment_vector = std::vector<double>;

inline double total_payment(const payment_vector& p) {
  return std::accumulate(p.begin(), p.end(), 0.0);
}

inline void validate_payments(const payment_vector& p, int n) {
  if (static_cast<int>(p.size()) != n)
    throw validation_error("payment vector length must equal the agent count");
  for (double x : p)
    if (x < -comparison_tolerance)
      throw validation_error("payments must be nonnegative");
}

/// Dual prices p* per agent and slack z* per project for the configuration
/// LP, plus the common objective value of both LPs.
struct dual_solution {
  std::vector<double> prices;
  std::vector<double> slacks;
  double objective = 0.0;
};

struct solution_metrics {
  double welfare = 0.0;
  double total_payment = 0.0;
  double beta_budget = 0.0;                          // total_payment / welfare
  std::optional<double> alpha_stability;             // achieved alpha* when scanned
  std::optional<double> welfare_ratio_vs_opt;        // welfare / OPT when known
};

/// Allocation + payments + certified quality metrics.
struct solution {
  allocation alloc;
  payment_vector payments;
  solution_metrics metrics;
  std::optional<dual_solution> dual;
};

inline double social_welfare(const instance& inst, const allocation& alloc) {
  alloc.validate_for(inst);
  double total = 0.0;
  for (int k = 0; k < inst.project_count(); ++k)
    total += inst.projects[k].value(alloc.project(k));
  return total;
}

inline std::vector<int> empty_projects(const allocation& alloc) {
  std::vector<int> out;
  for (int k = 0; k < alloc.project_count(); ++k)
    if (alloc.project(k).empty()) out.push_back(k);
  return out;
}

}  // namespace coalition

#endif  // COALITION_MODEL_HPP
