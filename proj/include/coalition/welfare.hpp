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
//
// Welfare maximization: exact brute force, the configuration LP solved
// through its dual prices, and the two greedy allocation algorithms
// (max-marginal for submodular projects, best-ratio for anonymous ones).

#ifndef COALITION_WELFARE_HPP
#define COALITION_WELFARE_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "coalition/agent_set.hpp"
#include "coalition/errors.hpp"
#include "coalition/model.hpp"
#include "coalition/simplex.hpp"
#include "coalition/valuation.hpp"

namespace coalition {

struct opt_result {
  allocation alloc;
  double welfare = 0.0;
};

/// Exact welfare maximum over all full assignments (monotonicity makes a
/// full assignment optimal without loss). Ties resolved toward the
/// lexicographically smallest assignment vector. Guarded at m^N <= 1e8.
inline opt_result brute_force_opt(const instance& inst) {
  inst.validate();
  int n = inst.agents;
  int m = inst.project_count();
  double combos = std::pow(static_cast<double>(m), n);
  if (combos > 1e8)
    throw scale_error("brute force over " + std::to_string(m) + "^" +
                      std::to_string(n) + " assignments");

  std::vector<agent_set> current(m);
  std::vector<agent_set> best(m);
  double best_welfare = -1.0;

  auto recurse = [&](auto&& self, int agent) -> void {
    if (agent == n) {
      double w = 0.0;
      for (int k = 0; k < m; ++k) w += inst.projects[k].value(current[k]);
      if (w > best_welfare) {  // strict: first (lex-smallest) maximizer wins
        best_welfare = w;
        best = current;
      }
      return;
    }
    for (int k = 0; k < m; ++k) {
      current[k] = current[k].with(agent);
      self(self, agent + 1);
      current[k] = current[k].without(agent);
    }
  };
  recurse(recurse, 0);
  return {allocation(std::move(best)), best_welfare};
}

struct config_lp_result {
  double primal_value = 0.0;  // equals dual.objective by strong duality
  dual_solution dual;
  bool exact_arithmetic = false;
};

/// max over (S, k) of v_k(S) - sum_{i in S} p_i - z_k; feasible duals keep
/// this at or below zero.
inline double dual_feasibility_residual(const instance& inst, const dual_solution& dual) {
  int n = inst.agents;
  double worst = 0.0;
  for (int k = 0; k < inst.project_count(); ++k) {
    for_each_subset(agent_set::full(n), [&](agent_set s) {
      double lhs = dual.slacks[k];
      for_each_member(s, [&](int i) { lhs += dual.prices[i]; });
      worst = std::max(worst, inst.projects[k].value(s) - lhs);
    });
  }
  return worst;
}

/// Solves the configuration LP. The dual (prices p per agent, slack z per
/// project, constraints sum_{i in S} p_i + z_k >= v_k(S) for every (S, k))
/// is obtained as the row prices of the packing primal, then re-verified
/// by an exhaustive constraint scan before returning.
inline config_lp_result solve_config_lp(const instance& inst) {
  inst.validate();
  int n = inst.agents;
  int m = inst.project_count();
  double work = std::ldexp(static_cast<double>(m), n);  // m * 2^n
  if (work > (1 << 22) || n + m > 64)
    throw scale_error("configuration LP constraint enumeration over m*2^N = " +
                      std::to_string(work));

  std::vector<packed_column> cols;
  cols.reserve(static_cast<std::size_t>(m) << n);
  std::uint32_t full = agent_set::full(n).mask();
  for (int k = 0; k < m; ++k) {
    for (std::uint32_t s = 1; s <= full; ++s) {
      double v = inst.projects[k].value(agent_set{s});
      if (v <= 0.0) continue;  // zero-value columns never bind
      cols.push_back({static_cast<std::uint64_t>(s) |
                          (std::uint64_t{1} << (n + k)),
                      v});
    }
  }

  packing_lp_result lp = solve_packing_lp(n + m, cols);

  config_lp_result out;
  out.primal_value = lp.objective;
  out.exact_arithmetic = lp.exact;
  out.dual.prices.assign(lp.duals.begin(), lp.duals.begin() + n);
  out.dual.slacks.assign(lp.duals.begin() + n, lp.duals.end());
  out.dual.objective = lp.objective;
  for (double& p : out.dual.prices) p = std::max(p, 0.0);
  for (double& z : out.dual.slacks) z = std::max(z, 0.0);

  // Exhaustive dual feasibility scan, all m * 2^N constraints.
  double residual = dual_feasibility_residual(inst, out.dual);
  if (residual > lp_tolerance)
    throw invariant_error("configuration LP duals infeasible, residual " +
                          std::to_string(residual));
  return out;
}

struct greedy_assign_result {
  allocation alloc;
  payment_vector marginals;
};

/// Max-marginal greedy: repeatedly assigns the (agent, project) pair with
/// the largest marginal value, recording that marginal as the agent's
/// payment. Ties break toward the lowest agent, then the lowest project.
/// No class precondition; the (1,2)-core wrapper enforces submodularity.
inline greedy_assign_result greedy_assign_by_marginal(const instance& inst) {
  inst.validate();
  int n = inst.agents;
  int m = inst.project_count();
  std::vector<agent_set> sets(m);
  payment_vector marginals(n, 0.0);
  agent_set unassigned = agent_set::full(n);
  while (!unassigned.empty()) {
    int best_agent = -1, best_project = -1;
    double best_gain = -1.0;
    for_each_member(unassigned, [&](int i) {
      for (int k = 0; k < m; ++k) {
        double gain = inst.projects[k].marginal(i, sets[k]);
        if (gain > best_gain + comparison_tolerance) {
          best_gain = gain;
          best_agent = i;
          best_project = k;
        }
      }
    });
    sets[best_project] = sets[best_project].with(best_agent);
    marginals[best_agent] = std::max(best_gain, 0.0);
    unassigned = unassigned.without(best_agent);
  }
  return {allocation(std::move(sets)), std::move(marginals)};
}

/// Claim-checked variant: every project must pass the submodularity test
/// (exhaustive for N <= 12, by kind beyond).
inline greedy_assign_result greedy_submodular(const instance& inst) {
  inst.validate();
  for (int k = 0; k < inst.project_count(); ++k) {
    const valuation& v = inst.projects[k];
    if (inst.agents <= 12) {
      auto check = check_class(v, valuation_class::submodular);
      if (!check.holds)
        throw class_error("project " + std::to_string(k) + " is not submodular: " +
                          check.detail);
    } else if (v.kind() != valuation_kind::additive &&
               v.kind() != valuation_kind::coverage) {
      throw class_error("project " + std::to_string(k) +
                        " cannot be certified submodular at this size");
    }
  }
  return greedy_assign_by_marginal(inst);
}

/// One ratio-greedy step: the assigned agents, their target project, the
/// shared marginal contribution, and the allocation before the step.
struct greedy_iteration {
  agent_set assigned;
  int project = 0;
  double ratio = 0.0;
  std::vector<agent_set> state_before;
};

struct anonymous_greedy_result {
  allocation alloc;
  payment_vector marginals;
  std::vector<greedy_iteration> trace;
};

/// Best-ratio greedy for anonymous projects. Each iteration scans all
/// projects k and batch sizes t, picks the (k, t) maximizing
/// (v_k(|S_k| + t) - v_k(|S_k|)) / t, and assigns the t lowest-indexed
/// unallocated agents there at that marginal. Ties: larger ratio, then
/// smaller t, then lower k. Zero-ratio iterations still assign agents.
inline anonymous_greedy_result greedy_anonymous(const instance& inst) {
  inst.validate();
  int n = inst.agents;
  int m = inst.project_count();
  for (int k = 0; k < m; ++k)
    if (inst.projects[k].kind() != valuation_kind::anonymous)
      throw class_error("project " + std::to_string(k) + " is not anonymous");

  std::vector<int> size_at(m, 0);
  std::vector<agent_set> sets(m);
  payment_vector marginals(n, 0.0);
  anonymous_greedy_result out;
  agent_set unassigned = agent_set::full(n);

  while (!unassigned.empty()) {
    int remaining = unassigned.size();
    int best_k = 0, best_t = 1;
    double best_ratio = -1.0;
    // Size-major scan so that equal ratios resolve to smaller t, then
    // lower k (first strict improvement wins).
    for (int t = 1; t <= remaining; ++t) {
      for (int k = 0; k < m; ++k) {
        if (size_at[k] + t > n) continue;
        const auto& values = inst.projects[k].anonymous_values();
        double ratio = (values[size_at[k] + t] - values[size_at[k]]) / t;
        if (ratio > best_ratio + comparison_tolerance) {
          best_ratio = ratio;
          best_k = k;
          best_t = t;
        }
      }
    }
    best_ratio = std::max(best_ratio, 0.0);

    greedy_iteration it;
    it.state_before = sets;
    it.project = best_k;
    it.ratio = best_ratio;
    for (int c = 0; c < best_t; ++c) {
      int agent = unassigned.first();
      unassigned = unassigned.without(agent);
      sets[best_k] = sets[best_k].with(agent);
      it.assigned = it.assigned.with(agent);
      marginals[agent] = best_ratio;
    }
    size_at[best_k] += best_t;
    out.trace.push_back(std::move(it));
  }

  out.alloc = allocation(std::move(sets));
  out.marginals = std::move(marginals);
  return out;
}

}  // namespace coalition

#endif  // COALITION_WELFARE_HPP
