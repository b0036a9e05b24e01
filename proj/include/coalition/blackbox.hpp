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
// The black-box stabilization mechanism for subadditive projects. Given
// any full input allocation A and the optimal configuration-LP duals, it
// produces a fully stable solution whose payments total at most the dual
// objective and whose welfare is at least half of A's:
//
//   1. seed payments p0 = dual price + equal share of the project slack;
//   2. greedy matching from (A, p0) reveals which agents have better
//      outside options (the leavers);
//   3. each non-empty project is classified good (at least half its value
//      survives the matching) or bad;
//   4. phase one keeps the matching layout on good projects but, on bad
//      ones, sends the leavers back and pushes stand-in "dummy" stayers
//      toward the vacated outside options;
//   5. phase two re-runs the matching so the dummies fill any empty
//      project still worth deviating to, with dual-based final payments.

#ifndef COALITION_BLACKBOX_HPP
#define COALITION_BLACKBOX_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "coalition/agent_set.hpp"
#include "coalition/errors.hpp"
#include "coalition/matching.hpp"
#include "coalition/model.hpp"
#include "coalition/verify.hpp"
#include "coalition/welfare.hpp"

namespace coalition {

/// p0_i = p*_i + z*_k / |A_k| for i in A_k. Requires A to assign everyone.
inline payment_vector make_initial_payments(const instance& inst, const allocation& a,
                                            const dual_solution& dual) {
  inst.validate();
  a.validate_for(inst);
  if (a.assigned_agents() != agent_set::full(inst.agents))
    throw validation_error("initial payments need a full assignment");
  payment_vector p(inst.agents, 0.0);
  for (int k = 0; k < inst.project_count(); ++k) {
    agent_set members = a.project(k);
    if (members.empty()) continue;
    double share = dual.slacks[k] / members.size();
    for_each_member(members, [&](int i) { p[i] = dual.prices[i] + share; });
  }
  return p;
}

/// Per non-empty input project: who stayed, who left, where the leavers
/// ended up, and the good/bad tag. A project is good when the welfare its
/// original agents generate after the matching is at least half their
/// original value.
struct project_classification {
  struct entry {
    bool classified = false;  // project was non-empty in A
    bool good = true;
    agent_set stayers;             // A_k^+
    agent_set leavers;             // A_k^-
    std::vector<int> filled;       // P_k, ascending
  };
  std::vector<entry> per_project;
};

inline project_classification classify_projects(const instance& inst, const allocation& a,
                                                const matching_result& match) {
  inst.validate();
  a.validate_for(inst);
  project_classification out;
  out.per_project.resize(inst.project_count());
  for (int k = 0; k < inst.project_count(); ++k) {
    agent_set original = a.project(k);
    if (original.empty()) continue;
    auto& e = out.per_project[k];
    e.classified = true;
    e.stayers = original & match.alloc.project(k);
    e.leavers = original - e.stayers;
    for_each_member(e.leavers, [&](int i) {
      auto dest = match.alloc.project_of(i);
      if (!dest)
        throw invariant_error("matching output left agent " + std::to_string(i) +
                              " unassigned");
      e.filled.push_back(*dest);
    });
    std::sort(e.filled.begin(), e.filled.end());

    double survived = inst.projects[k].value(e.stayers);
    for (int l : e.filled) survived += inst.projects[l].value(match.alloc.project(l));
    e.good = survived >= inst.projects[k].value(original) / 2.0 - comparison_tolerance;
    if (!e.good && e.stayers.size() <= e.leavers.size())
      throw invariant_error("bad project " + std::to_string(k) +
                            " kept at most half its agents; duals are not feasible");
  }
  return out;
}

struct phase_one_state {
  allocation alloc;                     // S'
  payment_vector payments;              // p'
  agent_set dummies;                    // union of all D_k
  std::vector<double> leftover_slack;   // z'_k, zero for good projects
};

/// Phase one. Good project k: keep the matching layout on k and P_k, pay
/// stayers p* + z*_k/|A_k^+| and each leaver p* + z*_l of her project l.
/// Bad project k: the leavers return to k paid their matching payment plus
/// an equal share of the leftover slack z'_k = z*_k - sum(pB - p*); the
/// |A_k^+| - |A_k^-| lowest-indexed stayers become dummies paid p*; the
/// remaining stayers are paired index-order with P_k and paid p* + z*_l.
inline phase_one_state phase_one(const instance& inst, const allocation& a,
                                 const dual_solution& dual, const matching_result& match,
                                 const project_classification& classes) {
  a.validate_for(inst);
  int n = inst.agents;
  int m = inst.project_count();
  std::vector<agent_set> sets(m);
  payment_vector pay(n, 0.0);
  phase_one_state state;
  state.leftover_slack.assign(m, 0.0);

  for (int k = 0; k < m; ++k) {
    const auto& e = classes.per_project[k];
    if (!e.classified) continue;

    if (e.good) {
      if (!e.stayers.empty()) {
        double share = dual.slacks[k] / e.stayers.size();
        for_each_member(e.stayers, [&](int i) {
          sets[k] = sets[k].with(i);
          pay[i] = dual.prices[i] + share;
        });
      }
      for_each_member(e.leavers, [&](int i) {
        int l = *match.alloc.project_of(i);
        sets[l] = sets[l].with(i);
        pay[i] = dual.prices[i] + dual.slacks[l];
      });
      continue;
    }

    // Bad project: leavers return to k.
    double increase = 0.0;
    for_each_member(e.leavers, [&](int i) {
      increase += match.payments[i] - dual.prices[i];
    });
    double leftover = dual.slacks[k] - increase;
    if (leftover < -lp_tolerance)
      throw invariant_error("negative leftover slack " + std::to_string(leftover) +
                            " on bad project " + std::to_string(k));
    leftover = std::max(leftover, 0.0);
    state.leftover_slack[k] = leftover;

    double share = leftover / e.leavers.size();
    for_each_member(e.leavers, [&](int i) {
      sets[k] = sets[k].with(i);
      pay[i] = match.payments[i] + share;
    });

    int dummy_count = e.stayers.size() - e.leavers.size();
    std::vector<int> stayers = e.stayers.members();
    for (int c = 0; c < dummy_count; ++c) {
      int i = stayers[c];
      sets[k] = sets[k].with(i);
      pay[i] = dual.prices[i];
      state.dummies = state.dummies.with(i);
    }
    // Remaining stayers paired index-order with the vacated projects.
    for (std::size_t c = dummy_count; c < stayers.size(); ++c) {
      int i = stayers[c];
      int l = e.filled[c - dummy_count];
      sets[l] = sets[l].with(i);
      pay[i] = dual.prices[i] + dual.slacks[l];
    }
  }

  state.alloc = allocation(std::move(sets));
  state.payments = std::move(pay);

  // Per-project payment totals must equal sum of duals plus the slack.
  for (int k = 0; k < m; ++k) {
    agent_set members = state.alloc.project(k);
    if (members.empty()) continue;
    double total = 0.0, expected = dual.slacks[k];
    for_each_member(members, [&](int i) {
      total += state.payments[i];
      expected += dual.prices[i];
    });
    if (std::abs(total - expected) > lp_tolerance)
      throw invariant_error("phase one payment total off on project " +
                            std::to_string(k));
  }
  return state;
}

/// Phase two: re-run the greedy matching from (S', p'). Only dummies may
/// move; a mover's final payment is p* + z* of her destination, everyone
/// else keeps the matching output.
inline solution phase_two(const instance& inst, const phase_one_state& state,
                          const dual_solution& dual) {
  matching_result match = greedy_matching(inst, state.alloc, state.payments);
  payment_vector pay = match.payments;
  for (const auto& mv : match.moves) {
    if (!state.dummies.contains(mv.agent))
      throw invariant_error("non-dummy agent " + std::to_string(mv.agent) +
                            " moved during phase two");
  }
  for (int i = 0; i < inst.agents; ++i) {
    auto before = state.alloc.project_of(i);
    auto after = match.alloc.project_of(i);
    if (before != after) pay[i] = dual.prices[i] + dual.slacks[*after];
    if (pay[i] < dual.prices[i] - comparison_tolerance)
      throw invariant_error("agent " + std::to_string(i) + " paid below her dual price");
  }

  solution sol;
  sol.alloc = match.alloc;
  sol.payments = std::move(pay);
  sol.dual = dual;
  sol.metrics.welfare = social_welfare(inst, sol.alloc);
  sol.metrics.total_payment = total_payment(sol.payments);
  sol.metrics.beta_budget =
      sol.metrics.welfare > 0.0 ? sol.metrics.total_payment / sol.metrics.welfare : 0.0;
  return sol;
}

struct stabilize_result {
  solution sol;
  matching_result phase_one_matching;
  project_classification classes;
  phase_one_state after_phase_one;
  double input_welfare = 0.0;
  double alpha_input = 0.0;  // dual objective / SW(A)
};

/// Full pipeline of the mechanism. The output is verified fully stable,
/// totals at most the dual objective, and keeps at least half the input
/// welfare; violations of any of these raise invariant errors.
inline stabilize_result stabilize(const instance& inst, const allocation& input) {
  inst.validate();
  input.validate_for(inst);
  if (input.assigned_agents() != agent_set::full(inst.agents))
    throw validation_error("stabilize requires a full input assignment");

  config_lp_result lp = solve_config_lp(inst);

  stabilize_result out;
  out.input_welfare = social_welfare(inst, input);
  out.alpha_input = out.input_welfare > 0.0 ? lp.dual.objective / out.input_welfare
                                            : std::numeric_limits<double>::infinity();

  payment_vector p0 = make_initial_payments(inst, input, lp.dual);
  out.phase_one_matching = greedy_matching(inst, input, p0);
  out.classes = classify_projects(inst, input, out.phase_one_matching);
  out.after_phase_one = phase_one(inst, input, lp.dual, out.phase_one_matching, out.classes);
  out.sol = phase_two(inst, out.after_phase_one, lp.dual);

  if (out.sol.metrics.total_payment > lp.dual.objective + lp_tolerance)
    throw invariant_error("payments exceed the dual objective");
  if (out.sol.metrics.welfare < out.input_welfare / 2.0 - lp_tolerance)
    throw invariant_error("output lost more than half the input welfare");

  stability_report report = check_stability(inst, out.sol, 1.0);
  if (!report.pass)
    throw invariant_error("stabilize output failed the full stability scan at project " +
                          std::to_string(report.worst.project) + ", deviation " +
                          report.worst.deviating_set.to_string());
  out.sol.metrics.alpha_stability = report.alpha_star;
  return out;
}

}  // namespace coalition

#endif  // COALITION_BLACKBOX_HPP
