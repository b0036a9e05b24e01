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
// The flipped simultaneous second-price auction: projects become buyers,
// agents become items. Core-stable solutions translate to pure Nash
// equilibria of the flipped auction and back, and the class solvers yield
// approximate equilibria with small conservative overbidding.

#ifndef COALITION_AUCTION_HPP
#define COALITION_AUCTION_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "coalition/agent_set.hpp"
#include "coalition/class_solvers.hpp"
#include "coalition/errors.hpp"
#include "coalition/model.hpp"
#include "coalition/welfare.hpp"

namespace coalition {

/// Per-buyer (= project) per-item (= agent) nonnegative bids.
struct bid_profile {
  std::vector<std::vector<double>> bids;  // m rows of length N

  int buyers() const { return static_cast<int>(bids.size()); }
  int items() const { return bids.empty() ? 0 : static_cast<int>(bids[0].size()); }

  void validate_for(const instance& inst) const {
    if (buyers() != inst.project_count())
      throw validation_error("bid profile must have one row per project");
    for (const auto& row : bids) {
      if (static_cast<int>(row.size()) != inst.agents)
        throw validation_error("bid row length must equal the agent count");
      for (double b : row)
        if (b < 0.0) throw validation_error("bids must be nonnegative");
    }
  }
};

/// N parallel single-item second-price auctions: the highest bidder wins
/// (lowest buyer index on ties) and pays the best opposing bid.
struct auction_outcome {
  std::vector<int> winner;          // per item
  std::vector<double> charge;       // per item, the second-highest bid
  std::vector<agent_set> won;       // per buyer
  std::vector<double> utility;      // v_k(won) - charges
};

inline auction_outcome evaluate(const instance& inst, const bid_profile& bids) {
  inst.validate();
  bids.validate_for(inst);
  int n = inst.agents;
  int m = inst.project_count();
  auction_outcome out;
  out.winner.assign(n, 0);
  out.charge.assign(n, 0.0);
  out.won.assign(m, agent_set{});
  out.utility.assign(m, 0.0);
  for (int i = 0; i < n; ++i) {
    int win = 0;
    for (int k = 1; k < m; ++k)
      if (bids.bids[k][i] > bids.bids[win][i]) win = k;  // ties keep the lowest k
    double second = 0.0;
    for (int k = 0; k < m; ++k)
      if (k != win) second = std::max(second, bids.bids[k][i]);
    out.winner[i] = win;
    out.charge[i] = second;
    out.won[win] = out.won[win].with(i);
  }
  for (int k = 0; k < m; ++k) {
    double paid = 0.0;
    for_each_member(out.won[k], [&](int i) { paid += out.charge[i]; });
    out.utility[k] = inst.projects[k].value(out.won[k]) - paid;
  }
  return out;
}

/// b_k(i) = payment of i if assigned to k, zero otherwise. Exactly one
/// positive bid per item, so the auction reproduces the solution's
/// allocation with zero charges.
inline bid_profile flip_core_to_bids(const instance& inst, const solution& sol) {
  inst.validate();
  sol.alloc.validate_for(inst);
  if (sol.alloc.assigned_agents() != agent_set::full(inst.agents))
    throw validation_error("flip requires a fully assigned solution");
  bid_profile out;
  out.bids.assign(inst.project_count(), std::vector<double>(inst.agents, 0.0));
  for (int k = 0; k < inst.project_count(); ++k)
    for_each_member(sol.alloc.project(k), [&](int i) { out.bids[k][i] = sol.payments[i]; });
  return out;
}

struct buyer_best_response {
  double utility = 0.0;
  agent_set witness;
};

/// Exact best deviation utility for one buyer: max over item sets W of
/// v_k(W) minus the best opposing bid on each item (the deviator wins
/// contested items at exactly that price). Exhaustive over 2^N sets.
inline buyer_best_response best_response_value(const instance& inst, const bid_profile& bids,
                                               int buyer) {
  inst.validate();
  bids.validate_for(inst);
  int n = inst.agents;
  if (std::ldexp(1.0, n) > (1 << 22)) throw scale_error("best response beyond the scan budget");
  std::vector<double> price(n, 0.0);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < inst.project_count(); ++k)
      if (k != buyer) price[i] = std::max(price[i], bids.bids[k][i]);

  buyer_best_response best;
  best.utility = -std::numeric_limits<double>::infinity();
  for_each_subset(agent_set::full(n), [&](agent_set w) {
    double u = inst.projects[buyer].value(w);
    for_each_member(w, [&](int i) { u -= price[i]; });
    if (u > best.utility + comparison_tolerance) {
      best.utility = u;
      best.witness = w;
    }
  });
  return best;
}

struct equilibrium_report {
  struct buyer_entry {
    double current_utility = 0.0;
    double best_utility = 0.0;
    double ratio = 1.0;  // best / current, 1 when both are nonpositive
  };
  std::vector<buyer_entry> buyers;
  bool approx_ne = false;        // best <= alpha * current + tol for all buyers
  double alpha_requested = 1.0;
  bool weak_no_overbidding = false;
  double gamma = 1.0;            // minimal conservativeness level of the profile
};

/// Conservativeness of one bid row: max over item sets T of the row's
/// total bid on T divided by v_k(T) (0/0 counts as 1, positive bids on a
/// zero-value set as infinity).
inline double bid_conservativeness(const instance& inst, const bid_profile& bids, int buyer) {
  double gamma = 1.0;
  for_each_subset(agent_set::full(inst.agents), [&](agent_set t) {
    if (t.empty()) return;
    double total = 0.0;
    for_each_member(t, [&](int i) { total += bids.bids[buyer][i]; });
    if (total <= comparison_tolerance) return;
    double v = inst.projects[buyer].value(t);
    gamma = std::max(gamma, v > comparison_tolerance
                                ? total / v
                                : std::numeric_limits<double>::infinity());
  });
  return gamma;
}

inline equilibrium_report verify_equilibrium(const instance& inst, const bid_profile& bids,
                                             double alpha) {
  inst.validate();
  bids.validate_for(inst);
  auction_outcome outcome = evaluate(inst, bids);

  equilibrium_report report;
  report.alpha_requested = alpha;
  report.approx_ne = true;
  report.weak_no_overbidding = true;
  for (int k = 0; k < inst.project_count(); ++k) {
    equilibrium_report::buyer_entry entry;
    entry.current_utility = outcome.utility[k];
    entry.best_utility = best_response_value(inst, bids, k).utility;
    entry.ratio = entry.current_utility > comparison_tolerance
                      ? entry.best_utility / entry.current_utility
                      : (entry.best_utility > comparison_tolerance
                             ? std::numeric_limits<double>::infinity()
                             : 1.0);
    if (entry.best_utility > alpha * entry.current_utility + comparison_tolerance)
      report.approx_ne = false;

    double own_total = 0.0;
    for_each_member(outcome.won[k], [&](int i) { own_total += bids.bids[k][i]; });
    if (own_total > inst.projects[k].value(outcome.won[k]) + comparison_tolerance)
      report.weak_no_overbidding = false;

    report.gamma = std::max(report.gamma, bid_conservativeness(inst, bids, k));
    report.buyers.push_back(entry);
  }
  return report;
}

/// Reverse direction of the equivalence: a verified exact equilibrium with
/// weak no-overbidding becomes a core-stable solution. Payments start at
/// the per-item top bid and are topped up uniformly within each winning
/// set to exact per-project budget balance.
inline solution bids_to_core(const instance& inst, const bid_profile& bids,
                             const auction_outcome& outcome) {
  inst.validate();
  bids.validate_for(inst);
  equilibrium_report report = verify_equilibrium(inst, bids, 1.0);
  if (!report.approx_ne || !report.weak_no_overbidding)
    throw validation_error(
        "bids_to_core requires an exact equilibrium with weak no-overbidding");

  payment_vector pay(inst.agents, 0.0);
  for (int i = 0; i < inst.agents; ++i)
    for (int k = 0; k < inst.project_count(); ++k)
      pay[i] = std::max(pay[i], bids.bids[k][i]);

  std::vector<agent_set> sets(outcome.won);
  for (int k = 0; k < inst.project_count(); ++k) {
    if (sets[k].empty()) continue;
    double have = 0.0;
    for_each_member(sets[k], [&](int i) { have += pay[i]; });
    double top_up = (inst.projects[k].value(sets[k]) - have) / sets[k].size();
    if (top_up < -comparison_tolerance)
      throw invariant_error("weak no-overbidding left nothing to top up");
    for_each_member(sets[k], [&](int i) { pay[i] += std::max(top_up, 0.0); });
  }

  solution sol = detail::make_solution(inst, allocation(std::move(sets)), std::move(pay));
  detail::fill_stability_metric(inst, sol);
  return sol;
}

struct approx_ne_result {
  bid_profile bids;
  equilibrium_report report;
  solution source;     // the core-side solution behind the bids
  int moves = 0;       // accepted item moves (submodular pipeline)
  std::vector<std::vector<double>> price_history;  // per accepted move, all item prices
};

/// Half-optimal 2-approximate equilibrium for anonymous subadditive
/// buyers: flip the envy-free ratio-greedy core. Bids are 4-conservative.
inline approx_ne_result approx_ne_anonymous(const instance& inst) {
  approx_ne_result out;
  out.source = anonymous_core(inst, /*envy_free=*/true).sol;
  out.bids = flip_core_to_bids(inst, out.source);
  out.report = verify_equilibrium(inst, out.bids, 2.0);
  return out;
}

/// (1+epsilon)-approximate equilibrium for submodular buyers with
/// (1+epsilon)-conservative bids. Items carry prices equal to (1+epsilon)
/// times their marginal along the owner's append ordering; an item moves
/// to a buyer whose marginal beats its price, which multiplies the price
/// by at least (1+epsilon). Move count is bounded by
/// N ceil(log_{1+eps}(v_max / delta)) + N. Starts from the welfare
/// optimum unless a start allocation is supplied.
inline approx_ne_result approx_ne_submodular(const instance& inst, double epsilon,
                                             std::optional<allocation> start = std::nullopt) {
  inst.validate();
  if (epsilon <= 0.0) throw validation_error("epsilon must be positive");
  for (int k = 0; k < inst.project_count(); ++k) {
    const valuation& v = inst.projects[k];
    if (v.kind() != valuation_kind::additive && v.kind() != valuation_kind::coverage)
      throw class_error("buyer " + std::to_string(k) + " is not submodular by kind");
  }

  int n = inst.agents;
  int m = inst.project_count();
  if (n > 16) throw scale_error("submodular pipeline beyond N = 16");

  // v_max and the smallest positive marginal, for the move bound.
  double v_max = 0.0;
  double delta = std::numeric_limits<double>::infinity();
  for (int k = 0; k < m; ++k) {
    for_each_subset(agent_set::full(n), [&](agent_set s) {
      for (int i = 0; i < n; ++i) {
        if (s.contains(i)) continue;
        double marg = inst.projects[k].marginal(i, s);
        v_max = std::max(v_max, marg);
        if (marg > comparison_tolerance) delta = std::min(delta, marg);
      }
    });
  }
  long log_term = 0;
  if (v_max > comparison_tolerance && std::isfinite(delta))
    log_term = static_cast<long>(std::ceil(std::log(v_max / delta) / std::log1p(epsilon)));
  long move_bound = static_cast<long>(n) * std::max(log_term, 0L) + n;

  allocation x = start ? *start : brute_force_opt(inst).alloc;
  x.validate_for(inst);
  if (x.assigned_agents() != agent_set::full(n))
    throw validation_error("submodular pipeline needs a full starting assignment");

  // Per-buyer item orderings; prices are (1+eps) marginals along them.
  std::vector<std::vector<int>> order(m);
  for (int k = 0; k < m; ++k) order[k] = x.project(k).members();
  std::vector<double> price(n, 0.0);
  auto reprice = [&]() {
    for (int k = 0; k < m; ++k) {
      agent_set prefix;
      for (int i : order[k]) {
        price[i] = (1.0 + epsilon) * inst.projects[k].marginal(i, prefix);
        prefix = prefix.with(i);
      }
    }
  };
  reprice();

  approx_ne_result out;
  out.price_history.push_back(price);
  bool progress = true;
  while (progress) {
    progress = false;
    for (int i = 0; i < n && !progress; ++i) {
      for (int k = 0; k < m && !progress; ++k) {
        if (x.project(k).contains(i)) continue;
        if (inst.projects[k].marginal(i, x.project(k)) <= price[i] + comparison_tolerance)
          continue;
        int from = *x.project_of(i);
        auto& src = order[from];
        src.erase(std::find(src.begin(), src.end(), i));
        order[k].push_back(i);
        x = x.moved(i, k);
        reprice();
        ++out.moves;
        if (out.moves > 10 * (move_bound + 1))
          throw invariant_error("item-move loop exceeded 10x its bound");
        out.price_history.push_back(price);
        progress = true;
      }
    }
  }

  payment_vector pay = price;
  out.source = detail::make_solution(inst, std::move(x), std::move(pay));
  out.bids = flip_core_to_bids(inst, out.source);
  out.report = verify_equilibrium(inst, out.bids, 1.0 + epsilon);
  return out;
}

}  // namespace coalition

#endif  // COALITION_AUCTION_HPP
