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

#include <filesystem>

#include "coalition/generators.hpp"
#include "coalition/json_io.hpp"
#include "coalition/model.hpp"

using namespace coalition;
using nlohmann::json;

namespace {

instance example1() { return load_instance(COALITION_TEST_DATA_DIR "/example1.json"); }

}  // namespace

TEST_CASE("bundled example1 fixture") {
  instance inst = example1();
  CHECK(inst.agents == 4);
  CHECK(inst.project_count() == 2);
  CHECK(inst.projects[0].value(agent_set::full(4)) == 4.0);
  CHECK(inst.projects[1].value(agent_set::singleton(2)) == 1.1);
}

TEST_CASE("social welfare") {
  instance inst = example1();
  allocation all_on_p1({agent_set::full(4), agent_set::empty_set()});
  CHECK(social_welfare(inst, all_on_p1) == 4.0);
  CHECK(social_welfare(inst, allocation::empty(2)) == 0.0);

  allocation split({agent_set{0b0111}, agent_set{0b1000}});
  CHECK(social_welfare(inst, split) == Catch::Approx(3.1));

  CHECK_THROWS_AS(allocation({agent_set{0b0011}, agent_set{0b0010}}), validation_error);
}

TEST_CASE("welfare invariant under project permutation") {
  instance inst = generate({"random-xos", 5, 3, 42});
  splitmix64 rng(5);
  std::vector<std::optional<int>> assign(5);
  for (auto& a : assign) a = rng.range(0, 2);
  allocation alloc = allocation::from_assignment(assign, 3);

  instance permuted;
  permuted.agents = inst.agents;
  permuted.projects = {inst.projects[2], inst.projects[0], inst.projects[1]};
  allocation palloc({alloc.project(2), alloc.project(0), alloc.project(1)});
  CHECK(social_welfare(inst, alloc) ==
        Catch::Approx(social_welfare(permuted, palloc)).margin(1e-12));
}

TEST_CASE("empty projects") {
  instance inst = example1();
  allocation all_on_p1({agent_set::full(4), agent_set::empty_set()});
  CHECK(empty_projects(all_on_p1) == std::vector<int>{1});
  allocation split({agent_set{0b1110}, agent_set{0b0001}});
  CHECK(empty_projects(split).empty());
}

TEST_CASE("instance round trip is bit exact") {
  for (const char* family : {"random-explicit-subadditive", "random-anonymous",
                             "random-xos", "random-coverage"}) {
    instance inst = generate({family, 5, 2, 99});
    json j = instance_to_json(inst);
    instance back = instance_from_json(j);
    CHECK(instance_to_json(back) == j);
    // Explicit tables reload with identical doubles.
    for (int k = 0; k < inst.project_count(); ++k)
      for_each_subset(agent_set::full(5), [&](agent_set s) {
        CHECK(inst.projects[k].value(s) == back.projects[k].value(s));
      });
  }
}

TEST_CASE("schema violations carry field paths") {
  CHECK_THROWS_WITH(instance_from_json(json{{"agents", 2}, {"projects", json::array()}}),
                    Catch::Matchers::ContainsSubstring(".projects"));
  CHECK_THROWS_WITH(
      instance_from_json(json{
          {"agents", 1},
          {"projects", {{{"kind", "additive"}, {"weights", {1.0, 2.0}}}}}}),
      Catch::Matchers::ContainsSubstring(".projects[0].weights"));
  CHECK_THROWS_WITH(
      instance_from_json(json{{"agents", 2}, {"bogus", 1},
                              {"projects", {{{"kind", "additive"}, {"weights", {1.0, 2.0}}}}}}),
      Catch::Matchers::ContainsSubstring(".bogus"));

  // v(empty) must be zero: explicit table with all-ones rejected.
  json bad{{"agents", 1},
           {"projects",
            {{{"kind", "explicit"}, {"values", {{"0", 1.0}, {"1", 2.0}}}}}}};
  CHECK_THROWS_WITH(instance_from_json(bad),
                    Catch::Matchers::ContainsSubstring("v(empty)"));

  // Non-monotone explicit table rejected with a witness in the message.
  json shrink{{"agents", 2},
              {"projects",
               {{{"kind", "explicit"},
                 {"values", {{"0", 0.0}, {"1", 2.0}, {"2", 1.0}, {"3", 1.5}}}}}}};
  CHECK_THROWS_WITH(instance_from_json(shrink),
                    Catch::Matchers::ContainsSubstring("not monotone"));

  // Missing bitmask key.
  json missing{{"agents", 2},
               {"projects",
                {{{"kind", "explicit"},
                  {"values", {{"0", 0.0}, {"1", 1.0}, {"3", 2.0}}}}}}};
  CHECK_THROWS_WITH(instance_from_json(missing),
                    Catch::Matchers::ContainsSubstring("missing bitmask 2"));
}

TEST_CASE("solution round trip") {
  instance inst = example1();
  solution sol;
  sol.alloc = allocation({agent_set{0b1110}, agent_set{0b0001}});
  sol.payments = {1.1, 10.0 / 9, 10.0 / 9, 10.0 / 9};
  sol.metrics.welfare = social_welfare(inst, sol.alloc);
  sol.metrics.total_payment = total_payment(sol.payments);
  sol.metrics.beta_budget = sol.metrics.total_payment / sol.metrics.welfare;

  json j = solution_to_json(inst, sol);
  solution back = solution_from_json(inst, j);
  CHECK(back.alloc == sol.alloc);
  CHECK(back.payments == sol.payments);
  CHECK(back.metrics.welfare == Catch::Approx(3.1));

  // Unassigned agents serialize as null.
  solution partial;
  partial.alloc = allocation({agent_set::singleton(0), agent_set::empty_set()});
  partial.payments = {1, 0, 0, 0};
  json pj = solution_to_json(inst, partial);
  CHECK(pj["assignment"][1].is_null());
  CHECK(solution_from_json(inst, pj).alloc.project_of(1) == std::nullopt);
}

TEST_CASE("file round trip through disk") {
  auto dir = std::filesystem::temp_directory_path() / "coalition_io_test";
  std::filesystem::create_directories(dir);
  instance inst = generate({"random-coverage", 4, 2, 7});
  std::string path = (dir / "inst.json").string();
  save_instance(path, inst);
  instance back = load_instance(path);
  CHECK(instance_to_json(back) == instance_to_json(inst));
  std::filesystem::remove_all(dir);
}
