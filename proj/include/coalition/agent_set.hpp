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

#ifndef COALITION_AGENT_SET_HPP
#define COALITION_AGENT_SET_HPP

#include <bit>
#include <cstdint>
#include <string>
#include <vector>

namespace coalition {

/// Maximum number of agents representable by an agent_set bitmask.
/// Enumeration-heavy operations are intended for far smaller instances
/// (N <= 12) and carry their own work budgets.
inline constexpr int max_agents = 24;

/// A subset of agents {0, ..., N-1} as a bitmask. Equality is canonical
/// by mask value; only bits below the instance's agent count may be set.
class agent_set {
 public:
  constexpr agent_set() = default;
  constexpr explicit agent_set(std::uint32_t mask) : mask_(mask) {}

  static constexpr agent_set empty_set() { return agent_set{0}; }
  static constexpr agent_set full(int n) {
    return agent_set{n >= 32 ? ~0u : ((1u << n) - 1u)};
  }
  static constexpr agent_set singleton(int i) { return agent_set{1u << i}; }

  constexpr std::uint32_t mask() const { return mask_; }
  constexpr bool empty() const { return mask_ == 0; }
  constexpr int size() const { return std::popcount(mask_); }
  constexpr bool contains(int i) const { return (mask_ >> i) & 1u; }
  constexpr bool subset_of(agent_set other) const {
    return (mask_ & ~other.mask_) == 0;
  }
  constexpr bool disjoint_with(agent_set other) const {
    return (mask_ & other.mask_) == 0;
  }

  constexpr agent_set with(int i) const { return agent_set{mask_ | (1u << i)}; }
  constexpr agent_set without(int i) const {
    return agent_set{mask_ & ~(1u << i)};
  }

  /// Lowest-indexed member; undefined on the empty set.
  constexpr int first() const { return std::countr_zero(mask_); }

  friend constexpr agent_set operator|(agent_set a, agent_set b) {
    return agent_set{a.mask_ | b.mask_};
  }
  friend constexpr agent_set operator&(agent_set a, agent_set b) {
    return agent_set{a.mask_ & b.mask_};
  }
  /// Set difference.
  friend constexpr agent_set operator-(agent_set a, agent_set b) {
    return agent_set{a.mask_ & ~b.mask_};
  }
  friend constexpr bool operator==(agent_set a, agent_set b) {
    return a.mask_ == b.mask_;
  }
  friend constexpr bool operator!=(agent_set a, agent_set b) {
    return a.mask_ != b.mask_;
  }

  std::vector<int> members() const {
    std::vector<int> out;
    out.reserve(size());
    for (std::uint32_t m = mask_; m != 0; m &= m - 1)
      out.push_back(std::countr_zero(m));
    return out;
  }

  std::string to_string() const {
    std::string s = "{";
    bool first_member = true;
    for (int i : members()) {
      if (!first_member) s += ",";
      s += std::to_string(i);
      first_member = false;
    }
    return s + "}";
  }

 private:
  std::uint32_t mask_ = 0;
};

/// Invokes f(i) for each member in ascending index order.
template <typename F>
void for_each_member(agent_set s, F&& f) {
  for (std::uint32_t m = s.mask(); m != 0; m &= m - 1)
    f(std::countr_zero(m));
}

/// Invokes f(T) for every subset T of s, in ascending mask order
/// (starting with the empty set, ending with s itself).
template <typename F>
void for_each_subset(agent_set s, F&& f) {
  std::uint32_t full = s.mask();
  std::uint32_t sub = 0;
  while (true) {
    f(agent_set{sub});
    if (sub == full) break;
    sub = (sub - full) & full;  // next subset in ascending order
  }
}

/// Invokes f(W) for every superset W of s within the universe {0..n-1},
/// in ascending mask order.
template <typename F>
void for_each_superset(agent_set s, int n, F&& f) {
  agent_set comp = agent_set::full(n) - s;
  for_each_subset(comp, [&](agent_set t) { f(s | t); });
}

}  // namespace coalition

#endif  // COALITION_AGENT_SET_HPP
