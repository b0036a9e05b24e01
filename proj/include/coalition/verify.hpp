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
// Ground-truth verification: exhaustive alpha-stability scans, the
// minimal-subsidy LP, and the full sweep certifying core non-existence.

#ifndef COALITION_VERIFY_HPP
#define COALITION_VERIFY_HPP

#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "coalition/agent_set.hpp"
#include "coalition/errors.hpp"
#include "coalition/model.hpp"
#include "coalition/simplex.hpp"

namespace coalition {

namespace detail {

inline void check_enumeration_budget(const instance& inst, const allocation& alloc) {
  double work = 0.0;
  for (int k = 0; k < inst.project_count(); ++k)
    work += std::ldexp(1.0, inst.agents - alloc.project(k).size());
  if (work > (1 << 22))
    throw scale_error("deviation scan over " + std::to_string(work) + " sets");
}

}  // namespace detail

/// Worst deviation found by a stability scan. slack is
/// v_k(S_k u T) - alpha * sum of payments over S_k u T; positive means the
/// deviation (T, k) beats the payments.
struct stability_violation {
  int project = -1;
  agent_set deviating_set;
  double slack = -std::numeric_limits<double>::infinity();
};

struct stability_report {
  bool pass = false;
  double alpha_requested = 1.0;
  /// Tight stability factor: max over projects k and W containing S_k of
  /// v_k(W) / payments(W). Zero when no deviation has positive value.
  double alpha_star = 0.0;
  double beta = 0.0;  // total payments / social welfare
  double welfare = 0.0;
  double total_payment = 0.0;
  stability_violation worst;
};

/// Exhaustive alpha-stability check: for every project k and every agent
/// set W containing S_k, requires v_k(W) <= alpha * payments(W) + tol.
/// Deviations enumerate supersets W = S_k u T directly; unassigned agents
/// may appear in T and their payments count.
inline stability_report check_stability(const instance& inst, const allocation& alloc,
                                        const payment_vector& payments, double alpha) {
  inst.validate();
  alloc.validate_for(inst);
  validate_payments(payments, inst.agents);
  detail::check_enumeration_budget(inst, alloc);

  stability_report report;
  report.alpha_requested = alpha;
  report.welfare = social_welfare(inst, alloc);
  report.total_payment = total_payment(payments);
  report.beta = report.welfare > 0.0
                    ? report.total_payment / report.welfare
                    : std::numeric_limits<double>::infinity();

  // Prefix sums of payments over masks would cost 2^N memory; the direct
  // member loop is cheap enough at scan scale.
  double alpha_star = 0.0;
  stability_violation worst;
  for (int k = 0; k < inst.project_count(); ++k) {
    const valuation& v = inst.projects[k];
    agent_set base = alloc.project(k);
    for_each_superset(base, inst.agents, [&](agent_set w) {
      double value = v.value(w);
      double pay = 0.0;
      for_each_member(w, [&](int i) { pay += payments[i]; });
      double slack = value - alpha * pay;
      if (slack > worst.slack) {
        worst.slack = slack;
        worst.project = k;
        worst.deviating_set = w - base;
      }
      if (value > comparison_tolerance) {
        double ratio = pay > comparison_tolerance
                           ? value / pay
                           : std::numeric_limits<double>::infinity();
        alpha_star = std::max(alpha_star, ratio);
      }
    });
  }
  report.alpha_star = alpha_star;
  report.worst = worst;
  report.pass = worst.slack <= comparison_tolerance;
  return report;
}

inline stability_report check_stability(const instance& inst, const solution& sol,
                                        double alpha) {
  return check_stability(inst, sol.alloc, sol.payments, alpha);
}

struct subsidy_result {
  double total = 0.0;
  payment_vector payments;
  double beta = 0.0;
};

/// Cost of stabilizing a fixed allocation: minimize total payments subject
/// to payments(W) >= v_k(W) for every project k and every W containing
/// S_k, payments >= 0. Solved through the dual packing LP; the returned
/// vector is re-verified exhaustively.
inline subsidy_result min_stable_subsidy(const instance& inst, const allocation& alloc) {
  inst.validate();
  alloc.validate_for(inst);
  detail::check_enumeration_budget(inst, alloc);
  double sw = social_welfare(inst, alloc);
  if (sw <= comparison_tolerance)
    throw validation_error("beta undefined: allocation has zero social welfare");

  std::vector<packed_column> cols;
  for (int k = 0; k < inst.project_count(); ++k) {
    const valuation& v = inst.projects[k];
    for_each_superset(alloc.project(k), inst.agents, [&](agent_set w) {
      double value = v.value(w);
      if (value > 0.0 && !w.empty()) cols.push_back({w.mask(), value});
    });
  }

  subsidy_result out;
  if (cols.empty()) {
    out.payments.assign(inst.agents, 0.0);
    out.beta = 0.0;
    return out;
  }

  packing_lp_result lp = solve_packing_lp(inst.agents, cols);
  out.total = lp.objective;
  out.payments = std::move(lp.duals);
  for (double& p : out.payments) p = std::max(p, 0.0);
  out.beta = out.total / sw;

  // Exhaustive feasibility: the vector must actually stabilize alloc.
  stability_report check = check_stability(inst, alloc, out.payments, 1.0);
  if (check.worst.slack > lp_tolerance)
    throw invariant_error("subsidy LP returned an unstable payment vector, slack " +
                          std::to_string(check.worst.slack));
  return out;
}

struct beta_scan_result {
  double beta = std::numeric_limits<double>::infinity();
  allocation witness;
  double witness_subsidy = 0.0;
};

/// Exact minimum of min_stable_subsidy beta over all full assignments.
/// A minimum above 1 certifies that no exact core exists. Guarded at
/// m^N <= 1e6; zero-welfare assignments are skipped.
inline beta_scan_result min_beta_over_allocations(const instance& inst) {
  inst.validate();
  int n = inst.agents;
  int m = inst.project_count();
  if (std::pow(static_cast<double>(m), n) > 1e6)
    throw scale_error("allocation sweep over " + std::to_string(m) + "^" +
                      std::to_string(n));

  beta_scan_result best;
  std::vector<agent_set> current(m);
  auto recurse = [&](auto&& self, int agent) -> void {
    if (agent == n) {
      allocation alloc(current);
      if (social_welfare(inst, alloc) <= comparison_tolerance) return;
      subsidy_result sub = min_stable_subsidy(inst, alloc);
      if (sub.beta < best.beta - comparison_tolerance) {
        best.beta = sub.beta;
        best.witness = alloc;
        best.witness_subsidy = sub.total;
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
  if (!std::isfinite(best.beta))
    throw validation_error("every full assignment has zero welfare");
  return best;
}

}  // namespace coalition

#endif  // COALITION_VERIFY_HPP
