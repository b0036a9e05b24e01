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

#include "coalition/class_solvers.hpp"
#include "coalition/generators.hpp"
#include "coalition/json_io.hpp"
#include "coalition/verify.hpp"

using namespace coalition;

namespace {

instance example1() { return load_instance(COALITION_TEST_DATA_DIR "/example1.json"); }

}  // namespace

TEST_CASE("uniform payments on example 1 fail at the empty project") {
  instance inst = example1();
  allocation all_on_p1({agent_set::full(4), agent_set::empty_set()});
  payment_vector ones(4, 1.0);
  stability_report report = check_stability(inst, all_on_p1, ones, 1.0);
  CHECK_FALSE(report.pass);
  CHECK(report.worst.project == 1);
  CHECK(report.worst.deviating_set == agent_set::singleton(0));
  CHECK(report.worst.slack == Catch::Approx(0.1));
  CHECK(report.beta == Catch::Approx(1.0));
}

TEST_CASE("stabilizing payments on example 1 pass") {
  instance inst = example1();
  allocation split({agent_set{0b1110}, agent_set{0b0001}});
  payment_vector pay{1.1, 10.0 / 9, 10.0 / 9, 10.0 / 9};
  stability_report report = check_stability(inst, split, pay, 1.0);
  CHECK(report.pass);
  CHECK(report.alpha_star == Catch::Approx(1.0));
  CHECK(report.total_payment == Catch::Approx(133.0 / 30));
}

TEST_CASE("zero instance passes trivially") {
  instance inst;
  inst.agents = 2;
  inst.projects.push_back(valuation::anonymous({0, 0, 0}));
  payment_vector zero(2, 0.0);
  stability_report report =
      check_stability(inst, allocation({agent_set::full(2)}), zero, 1.0);
  CHECK(report.pass);
  CHECK(report.alpha_star == 0.0);
}

TEST_CASE("min stable subsidy on example 1") {
  instance inst = example1();
  allocation all_on_p1({agent_set::full(4), agent_set::empty_set()});
  subsidy_result all = min_stable_subsidy(inst, all_on_p1);
  CHECK(all.total == Catch::Approx(4.4).margin(1e-6));
  CHECK(all.beta == Catch::Approx(1.1).margin(1e-6));

  allocation split({agent_set{0b0111}, agent_set{0b1000}});
  subsidy_result s = min_stable_subsidy(inst, split);
  CHECK(s.total == Catch::Approx(4.0).margin(1e-6));
  CHECK(s.beta == Catch::Approx(4.0 / 3.1).margin(1e-6));

  instance single;
  single.agents = 3;
  single.projects.push_back(valuation::additive({1, 2, 3}));
  subsidy_result ss = min_stable_subsidy(single, allocation({agent_set::full(3)}));
  CHECK(ss.total == Catch::Approx(6.0).margin(1e-6));
  CHECK(ss.beta == Catch::Approx(1.0).margin(1e-6));
}

TEST_CASE("subsidy vector itself passes the full stability scan") {
  for (std::uint64_t seed = 5; seed <= 20; ++seed) {
    instance inst = generate({"random-anonymous", 5, 2, seed});
    allocation opt = brute_force_opt(inst).alloc;
    subsidy_result sub = min_stable_subsidy(inst, opt);
    stability_report report = check_stability(inst, opt, sub.payments, 1.0);
    CHECK(report.worst.slack <= 1e-6);
  }
}

TEST_CASE("minimal beta over allocations certifies non-existence") {
  instance inst = example1();
  beta_scan_result res = min_beta_over_allocations(inst);
  CHECK(res.beta == Catch::Approx(1.1).margin(1e-6));
  CHECK(res.witness.project(0) == agent_set::full(4));

  // Exact-core instances scan down to 1.
  instance xos = generate({"random-xos", 4, 2, 3});
  CHECK(min_beta_over_allocations(xos).beta <= 1.0 + 1e-6);
}

TEST_CASE("alpha* is tight") {
  instance inst = example1();
  allocation all_on_p1({agent_set::full(4), agent_set::empty_set()});
  payment_vector ones(4, 1.0);
  stability_report report = check_stability(inst, all_on_p1, ones, 1.0);
  double alpha_star = report.alpha_star;
  CHECK(alpha_star == Catch::Approx(1.1));
  CHECK(check_stability(inst, all_on_p1, ones, alpha_star).pass);
  CHECK_FALSE(check_stability(inst, all_on_p1, ones, alpha_star - 1e-6).pass);
}

TEST_CASE("the two approximation notions are interchangeable") {
  // A fully stable beta-subsidized vector, scaled down by beta, becomes
  // budget balanced and passes at alpha = beta.
  instance inst = generate({"random-anonymous", 6, 3, 11});
  auto core = anonymous_core(inst, false);
  double beta = core.sol.metrics.beta_budget;
  CHECK(beta == Catch::Approx(2.0).margin(1e-9));

  payment_vector scaled = core.sol.payments;
  for (double& p : scaled) p /= beta;
  CHECK(total_payment(scaled) ==
        Catch::Approx(social_welfare(inst, core.sol.alloc)).margin(1e-9));
  CHECK(check_stability(inst, core.sol.alloc, scaled, beta).pass);
}

TEST_CASE("beta undefined on zero welfare") {
  instance inst;
  inst.agents = 2;
  inst.projects.push_back(valuation::anonymous({0, 0, 0}));
  CHECK_THROWS_AS(min_stable_subsidy(inst, allocation({agent_set::full(2)})),
                  validation_error);
}
