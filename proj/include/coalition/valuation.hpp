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

#ifndef COALITION_VALUATION_HPP
#define COALITION_VALUATION_HPP

#include <algorithm>
#include <bit>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "coalition/agent_set.hpp"
#include "coalition/errors.hpp"

namespace coalition {

enum class valuation_kind { explicit_table, anonymous, additive, xos, coverage };

inline const char* to_string(valuation_kind k) {
  switch (k) {
    case valuation_kind::explicit_table: return "explicit";
    case valuation_kind::anonymous: return "anonymous";
    case valuation_kind::additive: return "additive";
    case valuation_kind::xos: return "xos";
    case valuation_kind::coverage: return "coverage";
  }
  return "?";
}

/// Result of an XoS clause query: the additive clause that is tight at the
/// queried set and dominated by the valuation on all of its subsets.
/// clause_index is set only for stored-clause (xos kind) valuations;
/// synthesized clauses (additive/coverage) leave it empty.
struct xos_clause_result {
  std::optional<std::size_t> clause_index;
  std::vector<double> weights;  // length N; zero outside the queried set for coverage

  double clause_value(agent_set s) const {
    double total = 0.0;
    for_each_member(s, [&](int i) { total += weights[i]; });
    return total;
  }
};

/// One project's monotone set function over N agents. Immutable after
/// construction; all queries are pure. Construction validates monotonicity
/// and v(empty) = 0 (exhaustively for explicit tables, structurally for the
/// other kinds).
class valuation {
 public:
  static valuation from_table(int n, std::vector<double> values) {
    if (n < 1 || n > 20)
      throw validation_error("explicit table requires 1 <= agents <= 20, got " +
                             std::to_string(n));
    if (values.size() != (std::size_t{1} << n))
      throw validation_error("explicit table must have 2^" + std::to_string(n) +
                             " entries, got " + std::to_string(values.size()));
    if (values[0] != 0.0)
      throw validation_error("valuation must satisfy v(empty) = 0, table has v(empty) = " +
                             std::to_string(values[0]));
    // Monotonicity: adding one agent never decreases the value.
    for (std::uint32_t s = 0; s < values.size(); ++s) {
      for (int i = 0; i < n; ++i) {
        if ((s >> i) & 1u) continue;
        std::uint32_t t = s | (1u << i);
        if (values[t] < values[s] - comparison_tolerance)
          throw validation_error("explicit table not monotone: v(" +
                                 agent_set{t}.to_string() + ") = " + std::to_string(values[t]) +
                                 " < v(" + agent_set{s}.to_string() + ") = " +
                                 std::to_string(values[s]));
      }
    }
    for (double v : values)
      if (v < -comparison_tolerance)
        throw validation_error("explicit table has a negative value");
    return valuation(n, table_data{std::move(values)});
  }

  /// Anonymous: values[t] is the value of any coalition of size t.
  static valuation anonymous(std::vector<double> values) {
    if (values.size() < 2)
      throw validation_error("anonymous profile needs at least N+1 = 2 entries");
    int n = static_cast<int>(values.size()) - 1;
    if (n > max_agents)
      throw validation_error("anonymous profile exceeds " + std::to_string(max_agents) +
                             " agents");
    if (values[0] != 0.0)
      throw validation_error("anonymous profile must start with v(0) = 0");
    for (std::size_t t = 1; t < values.size(); ++t)
      if (values[t] < values[t - 1] - comparison_tolerance)
        throw validation_error("anonymous profile not non-decreasing at size " +
                               std::to_string(t));
    if (values[1] < -comparison_tolerance)
      throw validation_error("anonymous profile has a negative value");
    return valuation(n, anonymous_data{std::move(values)});
  }

  static valuation additive(std::vector<double> weights) {
    int n = static_cast<int>(weights.size());
    if (n < 1 || n > max_agents)
      throw validation_error("additive weights must cover 1.." +
                             std::to_string(max_agents) + " agents");
    for (double w : weights)
      if (w < 0.0)
        throw validation_error("additive weights must be nonnegative");
    return valuation(n, additive_data{std::move(weights)});
  }

  static valuation xos(int n, std::vector<std::vector<double>> clauses) {
    if (n < 1 || n > max_agents) throw validation_error("xos agent count out of range");
    if (clauses.empty()) throw validation_error("xos valuation needs at least one clause");
    for (const auto& c : clauses) {
      if (static_cast<int>(c.size()) != n)
        throw validation_error("xos clause length must equal the agent count");
      for (double w : c)
        if (w < 0.0) throw validation_error("xos clause weights must be nonnegative");
    }
    return valuation(n, xos_data{std::move(clauses)});
  }

  /// Coverage: agent i covers covered_sets[i], a subset of a universe of
  /// unit-weight elements; v(S) counts the elements covered by S.
  static valuation coverage(int n, int universe, std::vector<std::uint64_t> covered_sets) {
    if (n < 1 || n > max_agents) throw validation_error("coverage agent count out of range");
    if (universe < 0 || universe > 64)
      throw validation_error("coverage universe must have at most 64 elements");
    if (static_cast<int>(covered_sets.size()) != n)
      throw validation_error("coverage needs one covered set per agent");
    std::uint64_t allowed = universe == 64 ? ~0ull : ((1ull << universe) - 1ull);
    for (std::uint64_t s : covered_sets)
      if ((s & ~allowed) != 0)
        throw validation_error("coverage set references an element outside the universe");
    return valuation(n, coverage_data{universe, std::move(covered_sets)});
  }

  int agent_count() const { return n_; }

  valuation_kind kind() const {
    return static_cast<valuation_kind>(data_.index());
  }

  double value(agent_set s) const {
    check_set(s);
    switch (kind()) {
      case valuation_kind::explicit_table:
        return std::get<table_data>(data_).values[s.mask()];
      case valuation_kind::anonymous:
        return std::get<anonymous_data>(data_).values[s.size()];
      case valuation_kind::additive: {
        const auto& w = std::get<additive_data>(data_).weights;
        double total = 0.0;
        for_each_member(s, [&](int i) { total += w[i]; });
        return total;
      }
      case valuation_kind::xos: {
        const auto& clauses = std::get<xos_data>(data_).clauses;
        double best = 0.0;
        for (const auto& c : clauses) {
          double total = 0.0;
          for_each_member(s, [&](int i) { total += c[i]; });
          best = std::max(best, total);
        }
        return best;
      }
      case valuation_kind::coverage: {
        const auto& d = std::get<coverage_data>(data_);
        std::uint64_t covered = 0;
        for_each_member(s, [&](int i) { covered |= d.covered_sets[i]; });
        return static_cast<double>(std::popcount(covered));
      }
    }
    return 0.0;
  }

  /// v({i} | s) = v(s + i) - v(s). Requires i outside s.
  double marginal(int i, agent_set s) const {
    if (i < 0 || i >= n_) throw validation_error("agent index out of range");
    if (s.contains(i))
      throw validation_error("marginal requires agent " + std::to_string(i) +
                             " outside the base set " + s.to_string());
    return value(s.with(i)) - value(s);
  }

  /// Surplus-maximizing set under the given payment vector; ties broken
  /// toward the smallest bitmask. Exhaustive over 2^N subsets except for
  /// the additive per-agent shortcut and the xos per-clause shortcut.
  agent_set demand(std::span<const double> prices) const {
    if (static_cast<int>(prices.size()) != n_)
      throw validation_error("price vector length must equal the agent count");
    switch (kind()) {
      case valuation_kind::additive: {
        const auto& w = std::get<additive_data>(data_).weights;
        agent_set best;
        for (int i = 0; i < n_; ++i)
          if (w[i] - prices[i] > comparison_tolerance) best = best.with(i);
        return best;
      }
      case valuation_kind::xos: {
        // max_T v(T) - p(T) = max over clauses of the clause's own demand.
        const auto& clauses = std::get<xos_data>(data_).clauses;
        double best_surplus = 0.0;
        agent_set best;  // empty set: surplus 0
        for (const auto& c : clauses) {
          double surplus = 0.0;
          agent_set take;
          for (int i = 0; i < n_; ++i)
            if (c[i] - prices[i] > comparison_tolerance) {
              surplus += c[i] - prices[i];
              take = take.with(i);
            }
          if (surplus > best_surplus + comparison_tolerance ||
              (surplus > best_surplus - comparison_tolerance &&
               take.mask() < best.mask())) {
            best_surplus = surplus;
            best = take;
          }
        }
        return best;
      }
      default: {
        double best_surplus = -std::numeric_limits<double>::infinity();
        agent_set best;
        for_each_subset(agent_set::full(n_), [&](agent_set t) {
          double surplus = value(t);
          for_each_member(t, [&](int i) { surplus -= prices[i]; });
          if (surplus > best_surplus + comparison_tolerance) {
            best_surplus = surplus;
            best = t;  // ascending enumeration keeps the smallest mask on ties
          }
        });
        return best;
      }
    }
  }

  bool supports_xos_clause() const {
    valuation_kind k = kind();
    return k == valuation_kind::xos || k == valuation_kind::additive ||
           k == valuation_kind::coverage;
  }

  /// Returns a clause tight at s and dominated by v on every subset of s.
  /// Stored clauses: the maximizing clause (lowest index on ties).
  /// Additive: the weights themselves. Coverage: marginals over the
  /// lower-indexed members of s.
  xos_clause_result xos_clause(agent_set s) const {
    check_set(s);
    if (s.empty()) throw validation_error("xos clause query requires a nonempty set");
    switch (kind()) {
      case valuation_kind::additive:
        return {std::nullopt, std::get<additive_data>(data_).weights};
      case valuation_kind::xos: {
        const auto& clauses = std::get<xos_data>(data_).clauses;
        std::size_t best = 0;
        double best_value = -1.0;
        for (std::size_t j = 0; j < clauses.size(); ++j) {
          double total = 0.0;
          for_each_member(s, [&](int i) { total += clauses[j][i]; });
          if (total > best_value + comparison_tolerance) {
            best_value = total;
            best = j;
          }
        }
        return {best, clauses[best]};
      }
      case valuation_kind::coverage: {
        std::vector<double> weights(n_, 0.0);
        agent_set prefix;
        for_each_member(s, [&](int i) {
          weights[i] = marginal(i, prefix);
          prefix = prefix.with(i);
        });
        return {std::nullopt, std::move(weights)};
      }
      default:
        throw validation_error(std::string("xos clause query unsupported for kind ") +
                               to_string(kind()));
    }
  }

  // Raw accessors for serialization and kind-specific algorithms.
  const std::vector<double>& table_values() const {
    return std::get<table_data>(data_).values;
  }
  const std::vector<double>& anonymous_values() const {
    return std::get<anonymous_data>(data_).values;
  }
  const std::vector<double>& additive_weights() const {
    return std::get<additive_data>(data_).weights;
  }
  const std::vector<std::vector<double>>& xos_clauses() const {
    return std::get<xos_data>(data_).clauses;
  }
  int coverage_universe() const { return std::get<coverage_data>(data_).universe; }
  const std::vector<std::uint64_t>& coverage_sets() const {
    return std::get<coverage_data>(data_).covered_sets;
  }

 private:
  struct table_data { std::vector<double> values; };
  struct anonymous_data { std::vector<double> values; };
  struct additive_data { std::vector<double> weights; };
  struct xos_data { std::vector<std::vector<double>> clauses; };
  struct coverage_data { int universe; std::vector<std::uint64_t> covered_sets; };

  using storage = std::variant<table_data, anonymous_data, additive_data,
                               xos_data, coverage_data>;

  valuation(int n, storage data) : n_(n), data_(std::move(data)) {}

  void check_set(agent_set s) const {
    if (!s.subset_of(agent_set::full(n_)))
      throw validation_error("agent set " + s.to_string() +
                             " has members outside 0.." + std::to_string(n_ - 1));
  }

  int n_;
  storage data_;
};

/// Materializes all 2^N values. Shared by the exhaustive checkers and
/// deviation scans; guarded by the caller's enumeration budget.
inline std::vector<double> value_table(const valuation& v) {
  int n = v.agent_count();
  if (n > 20) throw scale_error("value table over 2^" + std::to_string(n) + " sets");
  std::vector<double> out(std::size_t{1} << n);
  for (std::uint32_t s = 0; s < out.size(); ++s) out[s] = v.value(agent_set{s});
  return out;
}

enum class valuation_class { monotone, subadditive, submodular, xos_consistency, anonymous };

inline const char* to_string(valuation_class c) {
  switch (c) {
    case valuation_class::monotone: return "monotone";
    case valuation_class::subadditive: return "subadditive";
    case valuation_class::submodular: return "submodular";
    case valuation_class::xos_consistency: return "xos-consistency";
    case valuation_class::anonymous: return "anonymous";
  }
  return "?";
}

/// Outcome of a class membership check. On failure the witness fields name
/// a violating configuration: (s, t) for pairwise properties, plus the
/// agent for submodularity.
struct class_check {
  bool holds = false;
  agent_set witness_s;
  agent_set witness_t;
  std::optional<int> witness_agent;
  std::string detail;
};

/// Exhaustive class membership test. Intended scale N <= 12; refuses to
/// enumerate beyond N = 16.
inline class_check check_class(const valuation& v, valuation_class cls) {
  int n = v.agent_count();
  if (n > 16) throw scale_error("class check beyond N = 16");
  const double tol = comparison_tolerance;

  switch (cls) {
    case valuation_class::monotone: {
      auto table = value_table(v);
      for (std::uint32_t s = 0; s < table.size(); ++s)
        for (int i = 0; i < n; ++i) {
          if ((s >> i) & 1u) continue;
          std::uint32_t t = s | (1u << i);
          if (table[t] < table[s] - tol)
            return {false, agent_set{s}, agent_set{t}, std::nullopt,
                    "v drops when adding agent " + std::to_string(i)};
        }
      return {true, {}, {}, std::nullopt, ""};
    }

    case valuation_class::subadditive: {
      // Disjoint pairs suffice for monotone valuations:
      // v(S u T) <= v(S) + v(T \ S) <= v(S) + v(T).
      auto table = value_table(v);
      std::uint32_t full = agent_set::full(n).mask();
      for (std::uint32_t s = 0; s <= full; ++s) {
        std::uint32_t comp = full & ~s;
        for (std::uint32_t t = comp; t != 0; t = (t - 1) & comp) {
          if (table[s | t] > table[s] + table[t] + tol)
            return {false, agent_set{s}, agent_set{t}, std::nullopt,
                    "v(S u T) exceeds v(S) + v(T)"};
        }
      }
      return {true, {}, {}, std::nullopt, ""};
    }

    case valuation_class::submodular: {
      // Local form: v(i | S u {j}) <= v(i | S). A violation at (S, j, i)
      // yields the definitional witness T = S inside S' = S u {j}.
      auto table = value_table(v);
      std::uint32_t full = agent_set::full(n).mask();
      for (std::uint32_t s = 0; s <= full; ++s) {
        for (int i = 0; i < n; ++i) {
          if ((s >> i) & 1u) continue;
          double base = table[s | (1u << i)] - table[s];
          for (int j = 0; j < n; ++j) {
            if (j == i || ((s >> j) & 1u)) continue;
            std::uint32_t sj = s | (1u << j);
            if (table[sj | (1u << i)] - table[sj] > base + tol)
              return {false, agent_set{sj}, agent_set{s}, i,
                      "marginal of agent " + std::to_string(i) + " grows"};
          }
        }
      }
      return {true, {}, {}, std::nullopt, ""};
    }

    case valuation_class::xos_consistency: {
      if (!v.supports_xos_clause())
        return {false, {}, {}, std::nullopt,
                std::string("kind ") + to_string(v.kind()) + " carries no clause structure"};
      auto table = value_table(v);
      std::uint32_t full = agent_set::full(n).mask();
      for (std::uint32_t s = 1; s <= full; ++s) {
        agent_set set{s};
        auto clause = v.xos_clause(set);
        if (std::abs(clause.clause_value(set) - table[s]) > lp_tolerance)
          return {false, set, set, std::nullopt, "clause not tight at the queried set"};
        bool ok = true;
        agent_set bad;
        for_each_subset(set, [&](agent_set t) {
          if (ok && clause.clause_value(t) > table[t.mask()] + lp_tolerance) {
            ok = false;
            bad = t;
          }
        });
        if (!ok) return {false, set, bad, std::nullopt, "clause exceeds v on a subset"};
      }
      return {true, {}, {}, std::nullopt, ""};
    }

    case valuation_class::anonymous: {
      auto table = value_table(v);
      std::vector<std::uint32_t> rep(n + 1, 0);  // first set seen of each size
      std::vector<bool> seen(n + 1, false);
      std::uint32_t full = agent_set::full(n).mask();
      for (std::uint32_t s = 0; s <= full; ++s) {
        int sz = std::popcount(s);
        if (!seen[sz]) {
          seen[sz] = true;
          rep[sz] = s;
        } else if (std::abs(table[s] - table[rep[sz]]) > tol) {
          return {false, agent_set{rep[sz]}, agent_set{s}, std::nullopt,
                  "equal-size sets with different values"};
        }
      }
      return {true, {}, {}, std::nullopt, ""};
    }
  }
  return {false, {}, {}, std::nullopt, "unknown class"};
}

}  // namespace coalition

#endif  // COALITION_VALUATION_HPP
