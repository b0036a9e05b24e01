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
// Class-specific core constructions:
//   submodular_core    exact core at half the optimum (marginal payments)
//   anonymous_core     2-budget-balanced core from the ratio greedy, with
//                      an envy-free payment variant
//   xos_exact_core     exact core on the optimum via clause payments
//   best_response_core near-stable core through best-response dynamics
//                      with clause prices plus an epsilon markup
//   xos_no_oracle_core dual-guided core using only singleton moves and the
//                      high/low marginal payment split

#ifndef COALITION_CLASS_SOLVERS_HPP
#define COALITION_CLASS_SOLVERS_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "coalition/agent_set.hpp"
#include "coalition/errors.hpp"
#include "coalition/model.hpp"
#include "coalition/verify.hpp"
#include "coalition/welfare.hpp"

namespace coalition {

namespace detail {

inline void fill_stability_metric(const instance& inst, solution& sol) {
  stability_report report = check_stability(inst, sol, 1.0);
  sol.metrics.alpha_stability = report.alpha_star;
  if (!report.pass)
    throw invariant_error("solver output failed its own stability scan at project " +
                          std::to_string(report.worst.project));
}

inline solution make_solution(const instance& inst, allocation alloc, payment_vector pay) {
  solution sol;
  sol.alloc = std::move(alloc);
  sol.payments = std::move(pay);
  sol.metrics.welfare = social_welfare(inst, sol.alloc);
  sol.metrics.total_payment = total_payment(sol.payments);
  sol.metrics.beta_budget =
      sol.metrics.welfare > 0.0 ? sol.metrics.total_payment / sol.metrics.welfare : 0.0;
  return sol;
}

}  // namespace detail

/// Exact core for submodular projects: greedy allocation, each agent paid
/// her assignment-time marginal. Budget balanced per project, welfare at
/// least half the optimum.
inline solution submodular_core(const instance& inst) {
  greedy_assign_result greedy = greedy_submodular(inst);
  solution sol = detail::make_solution(inst, std::move(greedy.alloc),
                                       std::move(greedy.marginals));
  detail::fill_stability_metric(inst, sol);
  return sol;
}

/// Anonymous profiles must be subadditive: v(s) + v(t) >= v(s + t).
inline void require_anonymous_subadditive(const instance& inst) {
  for (int k = 0; k < inst.project_count(); ++k) {
    const valuation& v = inst.projects[k];
    if (v.kind() != valuation_kind::anonymous)
      throw class_error("project " + std::to_string(k) + " is not anonymous");
    const auto& vals = v.anonymous_values();
    int n = v.agent_count();
    for (int s = 1; s <= n; ++s)
      for (int t = s; s + t <= n; ++t)
        if (vals[s] + vals[t] < vals[s + t] - comparison_tolerance)
          throw class_error("project " + std::to_string(k) +
                            " is not subadditive at sizes " + std::to_string(s) + "+" +
                            std::to_string(t));
  }
}

struct anonymous_core_result {
  solution sol;
  anonymous_greedy_result greedy;
};

/// (2,2)-core for anonymous subadditive projects. Default payments double
/// each agent's greedy marginal; the envy-free variant pays every member
/// of project k the same 2 v_k(S_k)/|S_k| share.
inline anonymous_core_result anonymous_core(const instance& inst, bool envy_free = false) {
  require_anonymous_subadditive(inst);
  anonymous_core_result out;
  out.greedy = greedy_anonymous(inst);

  payment_vector pay(inst.agents, 0.0);
  if (envy_free) {
    for (int k = 0; k < inst.project_count(); ++k) {
      agent_set members = out.greedy.alloc.project(k);
      if (members.empty()) continue;
      double share = 2.0 * inst.projects[k].value(members) / members.size();
      for_each_member(members, [&](int i) { pay[i] = share; });
    }
  } else {
    for (int i = 0; i < inst.agents; ++i) pay[i] = 2.0 * out.greedy.marginals[i];
  }

  out.sol = detail::make_solution(inst, out.greedy.alloc, std::move(pay));
  detail::fill_stability_metric(inst, out.sol);
  return out;
}

/// Exact core for XoS-representable projects: brute-force optimum plus the
/// maximizing clause's weights as payments. Exactly budget balanced per
/// project and exactly stable.
inline solution xos_exact_core(const instance& inst) {
  inst.validate();
  for (int k = 0; k < inst.project_count(); ++k)
    if (!inst.projects[k].supports_xos_clause())
      throw class_error("project " + std::to_string(k) +
                        " has no clause structure (kind " +
                        to_string(inst.projects[k].kind()) + ")");

  opt_result opt = brute_force_opt(inst);
  payment_vector pay(inst.agents, 0.0);
  for (int k = 0; k < inst.project_count(); ++k) {
    agent_set members = opt.alloc.project(k);
    if (members.empty()) continue;
    xos_clause_result clause = inst.projects[k].xos_clause(members);
    for_each_member(members, [&](int i) { pay[i] = clause.weights[i]; });
  }
  solution sol = detail::make_solution(inst, std::move(opt.alloc), std::move(pay));
  sol.metrics.welfare_ratio_vs_opt = 1.0;
  detail::fill_stability_metric(inst, sol);
  return sol;
}

struct best_response_result {
  solution sol;
  int accepted_moves = 0;
  std::vector<double> welfare_history;  // welfare after each accepted move
};

namespace detail {

/// Clause price of every agent under allocation x, plus the epsilon markup.
inline payment_vector clause_prices_with_markup(const instance& inst, const allocation& x,
                                                double epsilon, double welfare) {
  payment_vector p(inst.agents, 0.0);
  double markup = epsilon / inst.agents * welfare;
  for (int k = 0; k < inst.project_count(); ++k) {
    agent_set members = x.project(k);
    if (members.empty()) continue;
    xos_clause_result clause = inst.projects[k].xos_clause(members);
    for_each_member(members, [&](int i) { p[i] = clause.weights[i] + markup; });
  }
  return p;
}

/// Best group deviation to project k under the reduced valuation
/// v_k(. | X_k) at the current prices, over agents outside X_k.
/// Exhaustive (demand-query semantics with smallest-mask ties).
inline std::optional<agent_set> find_group_deviation(const instance& inst,
                                                     const allocation& x, int k,
                                                     const payment_vector& prices) {
  const valuation& v = inst.projects[k];
  agent_set base = x.project(k);
  agent_set outside = agent_set::full(inst.agents) - base;
  double base_value = v.value(base);
  double best_surplus = 0.0;
  agent_set best;
  for_each_subset(outside, [&](agent_set t) {
    if (t.empty()) return;
    double surplus = v.value(base | t) - base_value;
    for_each_member(t, [&](int i) { surplus -= prices[i]; });
    if (surplus > best_surplus + comparison_tolerance) {
      best_surplus = surplus;
      best = t;
    }
  });
  if (best.empty()) return std::nullopt;
  return best;
}

/// Single-agent shortcut, sound for submodular projects.
inline std::optional<agent_set> find_single_deviation(const instance& inst,
                                                      const allocation& x, int k,
                                                      const payment_vector& prices) {
  const valuation& v = inst.projects[k];
  agent_set base = x.project(k);
  for (int i = 0; i < inst.agents; ++i) {
    if (base.contains(i)) continue;
    if (v.marginal(i, base) > prices[i] + comparison_tolerance)
      return agent_set::singleton(i);
  }
  return std::nullopt;
}

}  // namespace detail

/// Best-response dynamics over clause prices with an epsilon markup.
/// Accepts any group deviation (T, k) with v_k(T | X_k) above the summed
/// prices of T (single agents suffice on submodular kinds), recomputing
/// prices after every move. Payments total exactly (1 + epsilon) times the
/// final welfare, the output is fully stable at those payments, and the
/// accepted-move count respects the potential bound
/// N (OPT / SW(A) - 1) / epsilon.
inline best_response_result best_response_core(const instance& inst, const allocation& start,
                                               double epsilon) {
  inst.validate();
  start.validate_for(inst);
  if (epsilon <= 0.0) throw validation_error("epsilon must be positive");
  if (start.assigned_agents() != agent_set::full(inst.agents))
    throw validation_error("best response needs a full starting assignment");
  for (int k = 0; k < inst.project_count(); ++k)
    if (!inst.projects[k].supports_xos_clause())
      throw class_error("project " + std::to_string(k) +
                        " has no clause structure (kind " +
                        to_string(inst.projects[k].kind()) + ")");

  double start_welfare = social_welfare(inst, start);
  double opt_welfare = brute_force_opt(inst).welfare;
  // Potential bound: each accepted move gains at least eps/N of the
  // running welfare, so from a base welfare b at most N (OPT/b - 1) / eps
  // moves fit. A zero-welfare start re-bases after its first move.
  auto move_guard = [&](double base) {
    if (base <= comparison_tolerance) return std::numeric_limits<long>::max();
    double bound = std::ceil(inst.agents * (opt_welfare / base - 1.0) / epsilon);
    return 10 * (static_cast<long>(bound) + 1);
  };
  long guard = move_guard(start_welfare);

  best_response_result out;
  allocation x = start;
  double welfare = start_welfare;
  payment_vector prices = detail::clause_prices_with_markup(inst, x, epsilon, welfare);

  bool progress = true;
  while (progress) {
    progress = false;
    for (int k = 0; k < inst.project_count() && !progress; ++k) {
      bool submodular_kind = inst.projects[k].kind() == valuation_kind::additive ||
                             inst.projects[k].kind() == valuation_kind::coverage;
      auto dev = submodular_kind ? detail::find_single_deviation(inst, x, k, prices)
                                 : detail::find_group_deviation(inst, x, k, prices);
      if (!dev) continue;

      std::vector<agent_set> sets(x.projects());
      for (auto& s : sets) s = s - *dev;
      sets[k] = sets[k] | *dev;
      x = allocation(std::move(sets));

      double new_welfare = social_welfare(inst, x);
      if (new_welfare <= welfare)
        throw invariant_error("accepted best-response move failed to raise welfare");
      if (welfare <= comparison_tolerance) guard = move_guard(new_welfare) + 1;
      welfare = new_welfare;
      prices = detail::clause_prices_with_markup(inst, x, epsilon, welfare);
      out.welfare_history.push_back(welfare);
      ++out.accepted_moves;
      if (out.accepted_moves > guard)
        throw invariant_error("best response exceeded 10x its iteration bound");
      progress = true;
    }
  }

  out.sol = detail::make_solution(inst, std::move(x), std::move(prices));
  out.sol.metrics.welfare_ratio_vs_opt =
      opt_welfare > 0.0 ? out.sol.metrics.welfare / opt_welfare : 1.0;
  detail::fill_stability_metric(inst, out.sol);
  return out;
}

/// Dual-guided core for XoS-representable projects without clause/demand
/// use at solve time: singleton moves to empty projects while profitable,
/// then payments split agents into high (marginal above dual price, paid
/// marginal plus a share of the residual slack) and low (paid the dual
/// price). Per-project totals equal dual price sum plus slack.
inline solution xos_no_oracle_core(const instance& inst, const allocation& start) {
  inst.validate();
  start.validate_for(inst);
  if (start.assigned_agents() != agent_set::full(inst.agents))
    throw validation_error("xos dual solver needs a full starting assignment");
  for (int k = 0; k < inst.project_count(); ++k)
    if (!inst.projects[k].supports_xos_clause())
      throw class_error("project " + std::to_string(k) +
                        " has no clause structure (kind " +
                        to_string(inst.projects[k].kind()) + ")");

  dual_solution dual = solve_config_lp(inst).dual;

  auto marginal_in_place = [&](const allocation& x, int i) {
    int k = *x.project_of(i);
    return inst.projects[k].marginal(i, x.project(k).without(i));
  };

  // Local moves: send one agent to an empty project while that strictly
  // beats her current marginal. Welfare strictly rises each move, so the
  // loop ends; N*m*value-levels is a generous cap.
  allocation x = start;
  long cap = static_cast<long>(inst.agents) * inst.project_count() * 64 + 16;
  for (long steps = 0;; ++steps) {
    if (steps > cap) throw invariant_error("local move loop failed to terminate");
    int mover = -1, target = -1;
    for (int i = 0; i < inst.agents && mover < 0; ++i) {
      double best_value = marginal_in_place(x, i) + comparison_tolerance;
      for (int k = 0; k < inst.project_count(); ++k) {
        if (!x.project(k).empty()) continue;
        double v = inst.projects[k].value(agent_set::singleton(i));
        if (v > best_value) {
          best_value = v;
          mover = i;
          target = k;
        }
      }
    }
    if (mover < 0) break;
    x = x.moved(mover, target);
  }

  // High/low payment split per project.
  payment_vector pay(inst.agents, 0.0);
  for (int k = 0; k < inst.project_count(); ++k) {
    agent_set members = x.project(k);
    if (members.empty()) continue;
    agent_set high;
    double high_marginals = 0.0, high_prices = 0.0;
    for_each_member(members, [&](int i) {
      double marg = marginal_in_place(x, i);
      if (marg > dual.prices[i]) {
        high = high.with(i);
        high_marginals += marg;
        high_prices += dual.prices[i];
      }
    });
    double residual = high_prices + dual.slacks[k] - high_marginals;
    if (residual < -lp_tolerance)
      throw invariant_error("negative residual slack on project " + std::to_string(k));
    residual = std::max(residual, 0.0);

    for_each_member(members, [&](int i) { pay[i] = dual.prices[i]; });
    if (!high.empty()) {
      double share = residual / high.size();
      for_each_member(high, [&](int i) { pay[i] = marginal_in_place(x, i) + share; });
    } else if (dual.slacks[k] > 0.0) {
      // Degenerate split: the whole slack goes to the lowest-indexed member
      // so the per-project total still matches the dual payment.
      pay[members.first()] += dual.slacks[k];
    }
  }

  solution sol = detail::make_solution(inst, std::move(x), std::move(pay));
  sol.dual = dual;
  detail::fill_stability_metric(inst, sol);
  return sol;
}

}  // namespace coalition

#endif  // COALITION_CLASS_SOLVERS_HPP
