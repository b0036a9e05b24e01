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

#include "coalition/generators.hpp"
#include "coalition/valuation.hpp"

using namespace coalition;

namespace {

// Example-1 project 1: value 2 on proper nonempty subsets, 4 on all four.
valuation example1_project1() { return valuation::anonymous({0, 2, 2, 2, 4}); }

// A pool of small valuations of every kind for property checks.
std::vector<valuation> sample_valuations(int n, std::uint64_t seed) {
  splitmix64 rng(seed);
  std::vector<valuation> out;
  out.push_back(generate({"random-explicit-subadditive", n, 1, rng.next()}).projects[0]);
  out.push_back(generate({"random-anonymous", n, 1, rng.next()}).projects[0]);
  out.push_back(generate({"random-xos", n, 1, rng.next()}).projects[0]);
  out.push_back(generate({"random-coverage", n, 1, rng.next()}).projects[0]);
  std::vector<double> w(n);
  for (auto& x : w) x = rng.uniform(0.0, 2.0);
  out.push_back(valuation::additive(std::move(w)));
  return out;
}

}  // namespace

TEST_CASE("value dispatch per kind") {
  valuation v1 = example1_project1();
  CHECK(v1.value(agent_set::full(4)) == 4.0);
  CHECK(v1.value(agent_set{0b0111}) == 2.0);
  CHECK(v1.value(agent_set::empty_set()) == 0.0);

  valuation claim4 = valuation::anonymous({0, 2, 2, 2, 4});
  CHECK(claim4.value(agent_set{0b0011}) == 2.0);

  valuation cov = valuation::coverage(2, 3, {0b011, 0b110});
  CHECK(cov.value(agent_set::full(2)) == 3.0);
  CHECK(cov.value(agent_set::singleton(0)) == 2.0);

  valuation x = valuation::xos(2, {{2, 0}, {0, 2}});
  CHECK(x.value(agent_set::full(2)) == 2.0);
  CHECK(x.value(agent_set::singleton(1)) == 2.0);
}

TEST_CASE("marginal values") {
  valuation add = valuation::additive({3, 1});
  CHECK(add.marginal(0, agent_set::empty_set()) == 3.0);

  valuation v1 = example1_project1();
  CHECK(v1.marginal(3, agent_set{0b0111}) == 2.0);  // 4 - 2

  // Coverage saturation: covering already-covered elements adds nothing.
  valuation cov = valuation::coverage(2, 2, {0b11, 0b11});
  CHECK(cov.marginal(1, agent_set::singleton(0)) == 0.0);

  CHECK_THROWS_AS(add.marginal(0, agent_set::singleton(0)), validation_error);
}

TEST_CASE("demand query examples") {
  valuation add = valuation::additive({3, 1});
  std::vector<double> prices{2, 2};
  CHECK(add.demand(prices) == agent_set::singleton(0));

  // Flat value 1.1 on nonempty sets, prices 1.0: any singleton maximizes,
  // tie-break keeps agent 0.
  valuation flat = valuation::anonymous({0, 1.1, 1.1, 1.1, 1.1});
  std::vector<double> ones(4, 1.0);
  CHECK(flat.demand(ones) == agent_set::singleton(0));

  // Strictly monotone valuation at zero prices takes everyone.
  valuation pos = valuation::additive({1, 2, 3});
  std::vector<double> zeros(3, 0.0);
  CHECK(pos.demand(zeros) == agent_set::full(3));
}

TEST_CASE("demand query maximizes surplus on every kind") {
  for (int n : {3, 5}) {
    for (const valuation& v : sample_valuations(n, 91 + n)) {
      splitmix64 rng(7 * n);
      std::vector<double> prices(n);
      for (auto& p : prices) p = rng.uniform(0.0, 2.0);
      agent_set w = v.demand(prices);
      double got = v.value(w);
      for_each_member(w, [&](int i) { got -= prices[i]; });
      for_each_subset(agent_set::full(n), [&](agent_set t) {
        double other = v.value(t);
        for_each_member(t, [&](int i) { other -= prices[i]; });
        CHECK(got >= other - 1e-9);
      });
    }
  }
}

TEST_CASE("xos clause queries") {
  valuation x = valuation::xos(2, {{2, 0}, {0, 2}});
  auto r = x.xos_clause(agent_set::singleton(0));
  REQUIRE(r.clause_index.has_value());
  CHECK(*r.clause_index == 0);
  CHECK(r.weights == std::vector<double>{2, 0});

  valuation add = valuation::additive({3, 1});
  CHECK(add.xos_clause(agent_set::full(2)).weights == std::vector<double>{3, 1});

  // Coverage clause = marginals in index order: agent 0 covers {a,b},
  // agent 1 covers {b,c}; weights (2, 1).
  valuation cov = valuation::coverage(2, 3, {0b011, 0b110});
  auto cr = cov.xos_clause(agent_set::full(2));
  CHECK(cr.weights == std::vector<double>{2, 1});

  valuation flat = valuation::anonymous({0, 1, 1});
  CHECK_THROWS_AS(flat.xos_clause(agent_set::singleton(0)), validation_error);
  CHECK_THROWS_AS(cov.xos_clause(agent_set::empty_set()), validation_error);
}

TEST_CASE("xos clause dominance and tightness") {
  for (int n : {3, 5}) {
    for (const valuation& v : sample_valuations(n, 123 + n)) {
      if (!v.supports_xos_clause()) continue;
      for_each_subset(agent_set::full(n), [&](agent_set s) {
        if (s.empty()) return;
        auto clause = v.xos_clause(s);
        CHECK(clause.clause_value(s) == Catch::Approx(v.value(s)).margin(1e-9));
        for_each_subset(s, [&](agent_set t) {
          CHECK(clause.clause_value(t) <= v.value(t) + 1e-9);
        });
      });
    }
  }
}

TEST_CASE("class checks") {
  CHECK(check_class(example1_project1(), valuation_class::subadditive).holds);

  valuation superadd = valuation::from_table(2, {0, 2, 2, 5});
  auto sub = check_class(superadd, valuation_class::subadditive);
  CHECK_FALSE(sub.holds);
  CHECK((sub.witness_s | sub.witness_t) == agent_set::full(2));
  CHECK(sub.witness_s.disjoint_with(sub.witness_t));

  // The claim-4 profile jumps at the last agent: not submodular.
  valuation jump = valuation::anonymous({0, 2, 2, 2, 4});
  CHECK_FALSE(check_class(jump, valuation_class::submodular).holds);

  valuation asym = valuation::from_table(2, {0, 1, 2, 2});
  CHECK_FALSE(check_class(asym, valuation_class::anonymous).holds);
  CHECK(check_class(jump, valuation_class::anonymous).holds);
}

TEST_CASE("coverage is submodular, xos is subadditive") {
  for (std::uint64_t seed : {1ull, 2ull, 3ull, 4ull, 5ull}) {
    valuation cov = generate({"random-coverage", 6, 1, seed}).projects[0];
    CHECK(check_class(cov, valuation_class::submodular).holds);
    valuation x = generate({"random-xos", 6, 1, seed}).projects[0];
    CHECK(check_class(x, valuation_class::subadditive).holds);
  }
}

TEST_CASE("xos consistency check") {
  for (const valuation& v : sample_valuations(4, 55)) {
    auto r = check_class(v, valuation_class::xos_consistency);
    CHECK(r.holds == v.supports_xos_clause());
  }
}

TEST_CASE("monotonicity across kinds") {
  for (int n : {3, 6}) {
    for (const valuation& v : sample_valuations(n, 17 + n)) {
      CHECK(check_class(v, valuation_class::monotone).holds);
      for_each_subset(agent_set::full(n), [&](agent_set s) {
        for_each_superset(s, n, [&](agent_set t) {
          CHECK(v.value(s) <= v.value(t) + 1e-9);
        });
      });
    }
  }
}

TEST_CASE("anonymous halving property") {
  // For anonymous subadditive v and |T| >= |S|/2: v(|T|) >= v(|S|)/2.
  std::vector<std::vector<double>> profiles = {
      {0, 2, 2, 2, 4},
      {0, 4, 4, 4, 4, 4, 4, 4, 8},
      generate({"random-anonymous", 8, 1, 77}).projects[0].anonymous_values()};
  for (const auto& vals : profiles) {
    int n = static_cast<int>(vals.size()) - 1;
    for (int s = 1; s <= n; ++s)
      for (int t = (s + 1) / 2; t <= n; ++t)
        CHECK(vals[t] >= vals[s] / 2.0 - 1e-9);
  }
}

TEST_CASE("construction rejects malformed valuations") {
  CHECK_THROWS_AS(valuation::from_table(2, {1, 1, 1, 1}), validation_error);
  CHECK_THROWS_AS(valuation::from_table(2, {0, 2, 2, 1}), validation_error);
  CHECK_THROWS_AS(valuation::anonymous({0, 2, 1}), validation_error);
  CHECK_THROWS_AS(valuation::additive({-1.0}), validation_error);
  CHECK_THROWS_AS(valuation::xos(2, {}), validation_error);
  CHECK_THROWS_AS(valuation::coverage(2, 2, {0b100, 0}), validation_error);
}
