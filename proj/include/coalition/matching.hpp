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

#ifndef COALITION_MATCHING_HPP
#define COALITION_MATCHING_HPP

#include <optional>
#include <string>
#include <vector>

#include "coalition/agent_set.hpp"
#include "coalition/errors.hpp"
#include "coalition/model.hpp"

namespace coalition {

struct matching_move {
  int agent = -1;
  std::optional<int> from;  // empty when the agent started unassigned
  int to = -1;
  double new_payment = 0.0;
};

struct matching_result {
  allocation alloc;
  payment_vector payments;
  std::vector<matching_move> moves;
};

/// Greedy matching with reserve prices. While some agent i and empty
/// project k satisfy p_i < v_k(i) - tol, move the lowest-indexed such
/// agent to the empty project maximizing v_l(i) (lowest l on ties) and
/// raise her payment to that value. Payments never decrease, every move
/// lands the mover alone on a previously empty project, and the loop ends
/// within N * m moves because each move lifts the mover's payment to one
/// of at most m distinct singleton values.
inline matching_result greedy_matching(const instance& inst, const allocation& alloc_in,
                                       const payment_vector& pay_in) {
  inst.validate();
  alloc_in.validate_for(inst);
  validate_payments(pay_in, inst.agents);

  int n = inst.agents;
  int m = inst.project_count();
  matching_result res;
  std::vector<agent_set> sets(alloc_in.projects());
  res.payments = pay_in;

  const long move_cap = static_cast<long>(n) * m + 1;
  for (long steps = 0;; ++steps) {
    if (steps > move_cap)
      throw invariant_error("greedy matching exceeded its N*m move bound");

    int mover = -1, target = -1;
    for (int i = 0; i < n && mover < 0; ++i) {
      double best_value = res.payments[i] + comparison_tolerance;
      for (int k = 0; k < m; ++k) {
        if (!sets[k].empty()) continue;
        double v = inst.projects[k].value(agent_set::singleton(i));
        if (v > best_value) {  // strictly better keeps the lowest l on ties
          best_value = v;
          mover = i;
          target = k;
        }
      }
    }
    if (mover < 0) break;

    std::optional<int> from;
    for (int k = 0; k < m; ++k)
      if (sets[k].contains(mover)) {
        from = k;
        sets[k] = sets[k].without(mover);
      }
    sets[target] = sets[target].with(mover);
    res.payments[mover] = inst.projects[target].value(agent_set::singleton(mover));
    res.moves.push_back({mover, from, target, res.payments[mover]});
  }

  res.alloc = allocation(std::move(sets));
  return res;
}

}  // namespace coalition

#endif  // COALITION_MATCHING_HPP
