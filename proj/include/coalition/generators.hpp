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
// Instance generators: the fixed benchmark fixtures plus seeded random
// families. All randomness flows through splitmix64 so identical specs
// produce bit-identical instances on any platform; the algorithm
// identifier is recorded in the generated instance name.

#ifndef COALITION_GENERATORS_HPP
#define COALITION_GENERATORS_HPP

#include <cmath>
#include <cstdint>
#include <sstream>
#include <string>
#include <vector>

#include "coalition/errors.hpp"
#include "coalition/model.hpp"
#include "coalition/valuation.hpp"

namespace coalition {

/// splitmix64: next state = state + 0x9E3779B97F4A7C15, output mixed by
/// two xor-shift-multiply rounds. Doubles take the top 53 bits, bounded
/// ints reduce the 64-bit output modulo the range.
class splitmix64 {
 public:
  explicit splitmix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  /// Uniform in [0, 1).
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform in [0, n).
  std::uint64_t bounded(std::uint64_t n) { return next() % n; }

  int range(int lo, int hi) {  // inclusive bounds
    return lo + static_cast<int>(bounded(static_cast<std::uint64_t>(hi - lo + 1)));
  }

 private:
  std::uint64_t state_;
};

inline constexpr const char* rng_algorithm = "splitmix64";

struct generator_spec {
  std::string family;
  int n = 0;
  int m = 0;
  std::uint64_t seed = 0;
  double epsilon = 0.1;   // example1 only
  int clauses = 4;        // random-xos clause cap
};

namespace detail {

inline std::string family_name(const generator_spec& spec, bool seeded) {
  std::string name = spec.family + "-n" + std::to_string(spec.n) + "-m" +
                     std::to_string(spec.m);
  if (seeded)
    name += "-seed" + std::to_string(spec.seed) + "-" + rng_algorithm;
  return name;
}

/// Anonymous subadditive profile. Three flavors: a concave base (min of
/// affine caps), a two-level threshold profile, and a concave base with a
/// final-step jump; jumps stay inside the subadditive envelope.
inline std::vector<double> random_anonymous_profile(int n, splitmix64& rng) {
  std::vector<double> v(n + 1, 0.0);
  switch (rng.bounded(3)) {
    case 0: {
      double slope_a = rng.uniform(0.5, 2.0);
      double slope_b = rng.uniform(0.1, 1.0);
      double cap_b = rng.uniform(1.0, 2.5);
      double flat = rng.uniform(1.0, 2.0) * n / 2.0;
      for (int t = 1; t <= n; ++t)
        v[t] = std::min({slope_a * t, cap_b + slope_b * t, flat});
      break;
    }
    case 1: {
      // v = a below the threshold size, b in [a, 2a] from it onward.
      double a = rng.uniform(0.5, 2.0);
      double b = rng.uniform(a, 2.0 * a);
      int threshold = rng.range(1, n);
      for (int t = 1; t <= n; ++t) v[t] = t < threshold ? a : b;
      break;
    }
    default: {
      double slope = rng.uniform(0.3, 1.2);
      double cap = rng.uniform(1.0, 1.8) * n / 2.0;
      for (int t = 1; t <= n; ++t) v[t] = std::min(slope * t, cap);
      if (n >= 2) {
        double envelope = v[1] + v[n - 1];
        for (int s = 2; 2 * s <= n; ++s) envelope = std::min(envelope, v[s] + v[n - s]);
        v[n] = rng.uniform(v[n], envelope);
      }
      break;
    }
  }
  return v;
}

inline valuation random_explicit_subadditive(int n, splitmix64& rng) {
  // Five flavors, all monotone subadditive by construction: budget
  // additive, capped XoS, flat (constant on nonempty sets), a
  // heavy-agent table whose value collapses without its key agent, and a
  // full-set jump table (constant on proper sets, up to doubled on the
  // grand coalition). The flat, heavy, and jump flavors create
  // integrality gaps and empty-project dynamics, which is what drives
  // the matching phases. The exhaustive post-check guards the generator
  // either way.
  std::vector<double> table(std::size_t{1} << n, 0.0);
  switch (rng.bounded(5)) {
    case 0: {
      std::vector<double> w(n);
      for (double& x : w) x = rng.uniform(0.4, 1.6);
      double cap = rng.uniform(1.0, 0.8 * n);
      for (std::uint32_t s = 1; s < table.size(); ++s) {
        double sum = 0.0;
        for (int i = 0; i < n; ++i)
          if ((s >> i) & 1u) sum += w[i];
        table[s] = std::min(sum, cap);
      }
      break;
    }
    case 1: {
      int clauses = rng.range(2, 3);
      std::vector<std::vector<double>> a(clauses, std::vector<double>(n));
      for (auto& c : a)
        for (double& x : c) x = rng.uniform(0.0, 1.5);
      double cap = rng.uniform(1.5, 0.9 * n);
      for (std::uint32_t s = 1; s < table.size(); ++s) {
        double best = 0.0;
        for (const auto& c : a) {
          double sum = 0.0;
          for (int i = 0; i < n; ++i)
            if ((s >> i) & 1u) sum += c[i];
          best = std::max(best, sum);
        }
        table[s] = std::min(best, cap);
      }
      break;
    }
    case 2: {
      double c = rng.uniform(0.5, 2.5);
      for (std::uint32_t s = 1; s < table.size(); ++s) table[s] = c;
      break;
    }
    case 3: {
      int heavy = rng.range(0, n - 1);
      double low = rng.uniform(0.3, 1.2);
      double high = rng.uniform(2.0, 6.0);
      for (std::uint32_t s = 1; s < table.size(); ++s)
        table[s] = ((s >> heavy) & 1u) ? high : low;
      break;
    }
    default: {
      double base = rng.uniform(0.8, 2.0);
      double full = rng.uniform(1.2, 2.0) * base;
      for (std::uint32_t s = 1; s < table.size(); ++s) table[s] = base;
      table[table.size() - 1] = full;
      break;
    }
  }
  return valuation::from_table(n, std::move(table));
}

}  // namespace detail

/// Deterministic instance construction. Families:
///   example1                     the two-project impossibility fixture
///   claim4-part1                 v1 = N/2 on proper sets / N on all, v2 = 2
///   claim4-part2, overbid-sqrtN  v1 as above, v2 = sqrt(N)
///   random-explicit-subadditive  explicit tables, post-validated
///   random-anonymous             anonymous subadditive profiles
///   random-xos                   up to `clauses` random clauses
///   random-coverage              random covered subsets of a small universe
inline instance generate(const generator_spec& spec) {
  instance inst;

  if (spec.family == "example1") {
    if (spec.n != 0 && spec.n != 4)
      throw validation_error("example1 is fixed at 4 agents");
    if (spec.epsilon <= 0.0 || spec.epsilon >= 1.0)
      throw validation_error("example1 needs epsilon in (0, 1)");
    inst.agents = 4;
    inst.projects.push_back(valuation::anonymous({0.0, 2.0, 2.0, 2.0, 4.0}));
    double e = 1.0 + spec.epsilon;
    inst.projects.push_back(valuation::anonymous({0.0, e, e, e, e}));
    std::ostringstream name;
    name << "example1-eps" << spec.epsilon;
    inst.name = name.str();
    return inst;
  }

  if (spec.family == "claim4-part1" || spec.family == "claim4-part2" ||
      spec.family == "overbid-sqrtN") {
    int n = spec.n;
    if (n < 2 || n > max_agents)
      throw validation_error(spec.family + " needs 2.." + std::to_string(max_agents) +
                             " agents");
    std::vector<double> v1(n + 1, n / 2.0);
    v1[0] = 0.0;
    v1[n] = n;
    double second = spec.family == "claim4-part1" ? 2.0 : std::sqrt(static_cast<double>(n));
    std::vector<double> v2(n + 1, second);
    v2[0] = 0.0;
    inst.agents = n;
    inst.projects.push_back(valuation::anonymous(std::move(v1)));
    inst.projects.push_back(valuation::anonymous(std::move(v2)));
    inst.name = spec.family + "-n" + std::to_string(n);
    return inst;
  }

  int n = spec.n;
  int m = spec.m;
  if (n < 1 || n > max_agents || m < 1)
    throw validation_error("random families need n in 1.." + std::to_string(max_agents) +
                           " and m >= 1");
  splitmix64 rng(spec.seed);
  inst.agents = n;
  inst.name = detail::family_name(spec, true);

  if (spec.family == "random-explicit-subadditive") {
    if (n > 12) throw validation_error("explicit tables are generated up to N = 12");
    for (int k = 0; k < m; ++k) {
      for (int attempt = 0;; ++attempt) {
        valuation v = detail::random_explicit_subadditive(n, rng);
        if (check_class(v, valuation_class::subadditive).holds &&
            check_class(v, valuation_class::monotone).holds) {
          inst.projects.push_back(std::move(v));
          break;
        }
        if (attempt > 50)
          throw invariant_error("subadditive generator kept failing its post-check");
      }
    }
    return inst;
  }

  if (spec.family == "random-anonymous") {
    for (int k = 0; k < m; ++k)
      inst.projects.push_back(
          valuation::anonymous(detail::random_anonymous_profile(n, rng)));
    return inst;
  }

  if (spec.family == "random-xos") {
    if (spec.clauses < 1) throw validation_error("random-xos needs at least one clause");
    for (int k = 0; k < m; ++k) {
      int count = rng.range(1, spec.clauses);
      std::vector<std::vector<double>> clauses(count, std::vector<double>(n, 0.0));
      for (auto& c : clauses)
        for (double& x : c)
          if (rng.bounded(4) != 0) x = rng.uniform(0.2, 3.0);  // quarter of weights zero
      inst.projects.push_back(valuation::xos(n, std::move(clauses)));
    }
    return inst;
  }

  if (spec.family == "random-coverage") {
    int universe = std::min(64, std::max(n, rng.range(n, 3 * n)));
    for (int k = 0; k < m; ++k) {
      std::vector<std::uint64_t> sets(n, 0);
      for (auto& s : sets)
        for (int e = 0; e < universe; ++e)
          if (rng.uniform() < 0.35) s |= std::uint64_t{1} << e;
      inst.projects.push_back(valuation::coverage(n, universe, std::move(sets)));
    }
    return inst;
  }

  throw validation_error("unknown generator family: " + spec.family);
}

}  // namespace coalition

#endif  // COALITION_GENERATORS_HPP
