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
#include "coalition/json_io.hpp"

using namespace coalition;

TEST_CASE("example1 matches the bundled fixture") {
  instance generated = generate({"example1", 0, 0, 0});
  instance bundled = load_instance(COALITION_TEST_DATA_DIR "/example1.json");
  CHECK(instance_to_json(generated) == instance_to_json(bundled));
}

TEST_CASE("claim4 families") {
  instance p1 = generate({"claim4-part1", 8, 0, 0});
  CHECK(p1.projects[0].value(agent_set{0b0111}) == 4.0);
  CHECK(p1.projects[0].value(agent_set::full(8)) == 8.0);
  CHECK(p1.projects[1].value(agent_set::singleton(3)) == 2.0);

  instance p2 = generate({"claim4-part2", 16, 0, 0});
  CHECK(p2.projects[1].value(agent_set::singleton(0)) == 4.0);
  CHECK(p2.projects[0].value(agent_set::full(16)) == 16.0);

  // overbid-sqrtN is the same construction.
  CHECK(instance_to_json(generate({"overbid-sqrtN", 16, 0, 0})).at("projects") ==
        instance_to_json(p2).at("projects"));
}

TEST_CASE("identical specs generate identical files") {
  for (const char* family : {"random-explicit-subadditive", "random-anonymous",
                             "random-xos", "random-coverage"}) {
    instance a = generate({family, 6, 3, 7});
    instance b = generate({family, 6, 3, 7});
    CHECK(instance_to_json(a).dump() == instance_to_json(b).dump());
    instance c = generate({family, 6, 3, 8});
    CHECK(instance_to_json(a).dump() != instance_to_json(c).dump());
  }
}

TEST_CASE("generated names record the rng algorithm") {
  instance inst = generate({"random-anonymous", 5, 2, 3});
  CHECK(inst.name.find("splitmix64") != std::string::npos);
  CHECK(inst.name.find("seed3") != std::string::npos);
}

TEST_CASE("random families satisfy their class contracts") {
  for (std::uint64_t seed = 1; seed <= 15; ++seed) {
    instance exp = generate({"random-explicit-subadditive", 5, 2, seed});
    for (const auto& v : exp.projects) {
      CHECK(check_class(v, valuation_class::subadditive).holds);
      CHECK(check_class(v, valuation_class::monotone).holds);
    }
    instance anon = generate({"random-anonymous", 7, 2, seed});
    for (const auto& v : anon.projects) {
      const auto& vals = v.anonymous_values();
      for (std::size_t s = 1; s < vals.size(); ++s)
        for (std::size_t t = s; s + t < vals.size(); ++t)
          CHECK(vals[s] + vals[t] >= vals[s + t] - 1e-9);
    }
    instance cov = generate({"random-coverage", 6, 2, seed});
    for (const auto& v : cov.projects)
      CHECK(check_class(v, valuation_class::submodular).holds);
  }
}

TEST_CASE("parameter validation") {
  CHECK_THROWS_AS(generate({"example1", 5, 0, 0}), validation_error);
  CHECK_THROWS_AS(generate({"claim4-part1", 1, 0, 0}), validation_error);
  CHECK_THROWS_AS(generate({"random-anonymous", 0, 2, 1}), validation_error);
  CHECK_THROWS_AS(generate({"random-xos", 4, 0, 1}), validation_error);
  CHECK_THROWS_AS(generate({"no-such-family", 4, 2, 1}), validation_error);
  generator_spec bad_eps{"example1", 4, 0, 0};
  bad_eps.epsilon = 1.5;
  CHECK_THROWS_AS(generate(bad_eps), validation_error);
}
