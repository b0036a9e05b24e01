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

#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "coalition/auction.hpp"
#include "coalition/blackbox.hpp"
#include "coalition/generators.hpp"
#include "coalition/json_io.hpp"

using namespace coalition;

namespace {

instance example1() { return load_instance(COALITION_TEST_DATA_DIR "/example1.json"); }

solution example1_stabilized() {
  instance inst = example1();
  std::vector<agent_set> sets{agent_set::full(4), agent_set::empty_set()};
  return stabilize(inst, allocation(sets)).sol;
}

}  // namespace

TEST_CASE("second-price mechanics") {
  instance inst;
  inst.agents = 1;
  inst.projects.push_back(valuation::additive({5}));
  inst.projects.push_back(valuation::additive({5}));

  bid_profile bids{{{3}, {1}}};
  auction_outcome out = evaluate(inst, bids);
  CHECK(out.winner[0] == 0);
  CHECK(out.charge[0] == 1.0);
  CHECK(out.utility[0] == Catch::Approx(4.0));

  bid_profile tie{{{2}, {2}}};
  auction_outcome tied = evaluate(inst, tie);
  CHECK(tied.winner[0] == 0);
  CHECK(tied.charge[0] == 2.0);
}

TEST_CASE("flipping the stabilized example 1") {
  instance inst = example1();
  solution sol = example1_stabilized();
  bid_profile bids = flip_core_to_bids(inst, sol);

  CHECK(bids.bids[0][0] == 0.0);
  for (int i : {1, 2, 3}) CHECK(bids.bids[0][i] == Catch::Approx(10.0 / 9).margin(1e-6));
  CHECK(bids.bids[1][0] == Catch::Approx(1.1).margin(1e-6));

  auction_outcome out = evaluate(inst, bids);
  CHECK(out.won[0] == sol.alloc.project(0));
  CHECK(out.won[1] == sol.alloc.project(1));
  for (double c : out.charge) CHECK(c == 0.0);
  for (int k = 0; k < 2; ++k)
    CHECK(out.utility[k] == Catch::Approx(inst.projects[k].value(out.won[k])));
}

TEST_CASE("best responses on the flipped example 1") {
  // Example 1 has no exact core, and the flip shows it: buyer 0 profits
  // from grabbing agent 0 back (4 - 1.1 = 2.9 against holding 2), while
  // buyer 1 cannot improve on 1.1.
  instance inst = example1();
  bid_profile bids = flip_core_to_bids(inst, example1_stabilized());

  buyer_best_response b0 = best_response_value(inst, bids, 0);
  CHECK(b0.utility == Catch::Approx(2.9).margin(1e-6));
  CHECK(b0.witness == agent_set::full(4));

  buyer_best_response b1 = best_response_value(inst, bids, 1);
  CHECK(b1.utility == Catch::Approx(1.1).margin(1e-6));

  equilibrium_report report = verify_equilibrium(inst, bids, 1.0);
  CHECK_FALSE(report.approx_ne);
  CHECK(report.buyers[0].ratio == Catch::Approx(2.9 / 2.0).margin(1e-6));
  CHECK(verify_equilibrium(inst, bids, 1.5).approx_ne);
}

TEST_CASE("all-zero bids are not an equilibrium on a nontrivial instance") {
  instance inst = example1();
  bid_profile zero{{std::vector<double>(4, 0.0), std::vector<double>(4, 0.0)}};
  equilibrium_report report = verify_equilibrium(inst, zero, 1.0);
  CHECK_FALSE(report.approx_ne);
}

TEST_CASE("exact cores flip to exact equilibria and round-trip back") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    instance inst = seed % 2 == 0
                        ? generate({"random-coverage", 4 + static_cast<int>(seed % 4),
                                    2 + static_cast<int>(seed % 2), seed})
                        : generate({"random-xos", 4 + static_cast<int>(seed % 4),
                                    2 + static_cast<int>(seed % 2), seed});
    solution core = seed % 2 == 0 ? submodular_core(inst) : xos_exact_core(inst);
    bid_profile bids = flip_core_to_bids(inst, core);

    equilibrium_report report = verify_equilibrium(inst, bids, 1.0);
    CHECK(report.approx_ne);
    CHECK(report.weak_no_overbidding);

    auction_outcome outcome = evaluate(inst, bids);
    solution back = bids_to_core(inst, bids, outcome);
    CHECK(social_welfare(inst, back.alloc) ==
          Catch::Approx(social_welfare(inst, core.alloc)).margin(1e-9));
    CHECK(check_stability(inst, back, 1.0).pass);
  }
}

TEST_CASE("bids_to_core rejects non-equilibrium input") {
  instance inst = example1();
  bid_profile bids = flip_core_to_bids(inst, example1_stabilized());
  auction_outcome outcome = evaluate(inst, bids);
  CHECK_THROWS_AS(bids_to_core(inst, bids, outcome), validation_error);
}

TEST_CASE("anonymous approximate equilibrium") {
  instance claim4;
  claim4.agents = 4;
  claim4.projects.push_back(valuation::anonymous({0, 2, 2, 2, 4}));
  claim4.projects.push_back(valuation::anonymous({0, 2, 2, 2, 2}));
  approx_ne_result res = approx_ne_anonymous(claim4);
  CHECK(res.report.approx_ne);
  CHECK(res.report.gamma <= 4.0 + 1e-6);

  // A symmetric linear-anonymous instance is an exact equilibrium.
  instance linear;
  linear.agents = 4;
  linear.projects.push_back(valuation::anonymous({0, 1, 2, 3, 4}));
  linear.projects.push_back(valuation::anonymous({0, 1, 2, 3, 4}));
  approx_ne_result lres = approx_ne_anonymous(linear);
  CHECK(verify_equilibrium(linear, lres.bids, 1.0).approx_ne);
}

TEST_CASE("anonymous approximate equilibrium property suite") {
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    instance inst = generate({"random-anonymous", 4 + static_cast<int>(seed % 7),
                              2 + static_cast<int>(seed % 3), seed});
    approx_ne_result res = approx_ne_anonymous(inst);
    CHECK(res.report.approx_ne);  // alpha = 2
    CHECK(res.report.gamma <= 4.0 + 1e-6);
    CHECK(res.source.metrics.welfare >= brute_force_opt(inst).welfare / 2 - 1e-9);
  }
}

TEST_CASE("submodular pipeline: optimal start needs no moves") {
  instance inst = generate({"random-coverage", 5, 2, 23});
  approx_ne_result res = approx_ne_submodular(inst, 0.1);
  CHECK(res.moves == 0);
  CHECK(res.report.approx_ne);
  CHECK(res.report.gamma <= 1.1 + 1e-6);
}

TEST_CASE("two buyers contest one item") {
  instance inst;
  inst.agents = 1;
  inst.projects.push_back(valuation::coverage(1, 2, {0b01}));   // worth 1
  inst.projects.push_back(valuation::coverage(1, 2, {0b11}));   // worth 2
  allocation misassigned({agent_set::singleton(0), agent_set::empty_set()});
  approx_ne_result res = approx_ne_submodular(inst, 0.1, misassigned);
  CHECK(res.moves == 1);
  auction_outcome out = evaluate(inst, res.bids);
  CHECK(out.winner[0] == 1);
  // The settled price covers the loser's marginal.
  CHECK(res.bids.bids[1][0] >= 1.0 - 1e-9);
  CHECK(res.report.approx_ne);
}

TEST_CASE("submodular approximate equilibrium property suite") {
  for (std::uint64_t seed = 1; seed <= 25; ++seed) {
    instance inst = generate({"random-coverage", 4 + static_cast<int>(seed % 5),
                              2 + static_cast<int>(seed % 2), seed});
    double eps = 0.1;
    // Non-optimal greedy starts keep the move loop honest.
    allocation start = greedy_assign_by_marginal(inst).alloc;
    approx_ne_result res = approx_ne_submodular(inst, eps, start);
    CHECK(res.report.approx_ne);
    CHECK(res.report.gamma <= 1.0 + eps + 1e-6);

    // Item prices never decrease across accepted moves.
    for (std::size_t step = 1; step < res.price_history.size(); ++step)
      for (int i = 0; i < inst.agents; ++i)
        CHECK(res.price_history[step][i] >= res.price_history[step - 1][i] - 1e-9);

    // Move-count bound from the price-doubling argument.
    double v_max = 0.0, delta = std::numeric_limits<double>::infinity();
    for (int k = 0; k < inst.project_count(); ++k)
      for_each_subset(agent_set::full(inst.agents), [&](agent_set s) {
        for (int i = 0; i < inst.agents; ++i) {
          if (s.contains(i)) continue;
          double marg = inst.projects[k].marginal(i, s);
          v_max = std::max(v_max, marg);
          if (marg > 1e-9) delta = std::min(delta, marg);
        }
      });
    long log_term = 0;
    if (v_max > 1e-9 && std::isfinite(delta))
      log_term = static_cast<long>(std::ceil(std::log(v_max / delta) / std::log1p(eps)));
    CHECK(res.moves <= inst.agents * std::max(log_term, 0L) + inst.agents);
  }
}

TEST_CASE("overbidding lower bound on the flipped claim-4 part-2 instance") {
  instance inst = generate({"claim4-part2", 16, 0, 0});
  REQUIRE(inst.projects[1].value(agent_set::singleton(0)) == Catch::Approx(4.0));

  auto uniform_buyer1 = [&](double c) {
    bid_profile bids;
    bids.bids.assign(2, std::vector<double>(16, 0.0));
    for (int i = 0; i < 16; ++i) bids.bids[0][i] = c;
    return bids;
  };

  // Bidding below sqrt(N) = 4 invites buyer 2 to grab an item.
  equilibrium_report low = verify_equilibrium(inst, uniform_buyer1(3.9), 1.0);
  CHECK_FALSE(low.approx_ne);

  for (double c : {4.0, 4.5}) {
    equilibrium_report report = verify_equilibrium(inst, uniform_buyer1(c), 1.0);
    CHECK(report.approx_ne);
    auction_outcome out = evaluate(inst, uniform_buyer1(c));
    CHECK(out.won[0] == agent_set::full(16));
    // Winning everything at an exact equilibrium forces per-item bids of
    // at least sqrt(N), hence gamma at least sqrt(N) on the full set.
    double total = 16 * c;
    CHECK(total >= std::sqrt(16.0) * inst.projects[0].value(agent_set::full(16)) - 1e-9);
    CHECK(report.gamma >= 4.0 - 1e-9);
  }
}
