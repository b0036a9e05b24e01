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

#ifndef COALITION_JSON_IO_HPP
#define COALITION_JSON_IO_HPP

#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "coalition/auction.hpp"
#include "coalition/errors.hpp"
#include "coalition/model.hpp"

namespace coalition {

using nlohmann::json;

namespace detail {

inline const json& require_field(const json& j, const char* key, const std::string& path) {
  if (!j.contains(key))
    throw validation_error("missing field " + path + "." + key);
  return j.at(key);
}

inline double number_at(const json& j, const std::string& path) {
  if (!j.is_number()) throw validation_error(path + " must be a number");
  return j.get<double>();
}

inline std::vector<double> number_array(const json& j, const std::string& path) {
  if (!j.is_array()) throw validation_error(path + " must be an array");
  std::vector<double> out;
  out.reserve(j.size());
  for (std::size_t i = 0; i < j.size(); ++i)
    out.push_back(number_at(j[i], path + "[" + std::to_string(i) + "]"));
  return out;
}

}  // namespace detail

inline valuation valuation_from_json(const json& j, int n, const std::string& path) {
  if (!j.is_object()) throw validation_error(path + " must be an object");
  std::string kind = detail::require_field(j, "kind", path).get<std::string>();
  try {
    if (kind == "explicit") {
      const json& values = detail::require_field(j, "values", path);
      if (!values.is_object())
        throw validation_error(path + ".values must map bitmask strings to numbers");
      std::vector<double> table(std::size_t{1} << n, 0.0);
      std::vector<bool> seen(table.size(), false);
      for (const auto& [key, val] : values.items()) {
        std::size_t pos = 0;
        unsigned long mask = 0;
        try {
          mask = std::stoul(key, &pos);
        } catch (const std::exception&) {
          pos = 0;
        }
        if (pos != key.size() || mask >= table.size())
          throw validation_error(path + ".values has invalid bitmask key \"" + key + "\"");
        table[mask] = detail::number_at(val, path + ".values[" + key + "]");
        seen[mask] = true;
      }
      for (std::size_t s = 0; s < seen.size(); ++s)
        if (!seen[s])
          throw validation_error(path + ".values is missing bitmask " + std::to_string(s));
      return valuation::from_table(n, std::move(table));
    }
    if (kind == "anonymous") {
      auto values = detail::number_array(detail::require_field(j, "values", path),
                                         path + ".values");
      if (static_cast<int>(values.size()) != n + 1)
        throw validation_error(path + ".values must have N+1 entries");
      return valuation::anonymous(std::move(values));
    }
    if (kind == "additive") {
      auto weights = detail::number_array(detail::require_field(j, "weights", path),
                                          path + ".weights");
      if (static_cast<int>(weights.size()) != n)
        throw validation_error(path + ".weights must have N entries");
      return valuation::additive(std::move(weights));
    }
    if (kind == "xos") {
      const json& cj = detail::require_field(j, "clauses", path);
      if (!cj.is_array() || cj.empty())
        throw validation_error(path + ".clauses must be a nonempty array");
      std::vector<std::vector<double>> clauses;
      for (std::size_t c = 0; c < cj.size(); ++c)
        clauses.push_back(detail::number_array(
            cj[c], path + ".clauses[" + std::to_string(c) + "]"));
      return valuation::xos(n, std::move(clauses));
    }
    if (kind == "coverage") {
      const json& uj = detail::require_field(j, "universe", path);
      if (!uj.is_number_integer())
        throw validation_error(path + ".universe must be an integer");
      int universe = uj.get<int>();
      const json& sj = detail::require_field(j, "sets", path);
      if (!sj.is_array() || static_cast<int>(sj.size()) != n)
        throw validation_error(path + ".sets must list one covered set per agent");
      std::vector<std::uint64_t> sets;
      for (std::size_t a = 0; a < sj.size(); ++a) {
        const json& row = sj[a];
        std::string rp = path + ".sets[" + std::to_string(a) + "]";
        if (!row.is_array()) throw validation_error(rp + " must be an array");
        std::uint64_t mask = 0;
        for (const auto& e : row) {
          if (!e.is_number_integer() || e.get<int>() < 0 || e.get<int>() >= universe)
            throw validation_error(rp + " references an element outside the universe");
          mask |= std::uint64_t{1} << e.get<int>();
        }
        sets.push_back(mask);
      }
      return valuation::coverage(n, universe, std::move(sets));
    }
  } catch (const validation_error& e) {
    throw validation_error(std::string(e.what()) + " (at " + path + ")");
  }
  throw validation_error(path + ".kind \"" + kind + "\" is not one of "
                         "explicit/anonymous/additive/xos/coverage");
}

inline json valuation_to_json(const valuation& v) {
  json j;
  switch (v.kind()) {
    case valuation_kind::explicit_table: {
      j["kind"] = "explicit";
      json values = json::object();
      const auto& table = v.table_values();
      for (std::size_t s = 0; s < table.size(); ++s)
        values[std::to_string(s)] = table[s];
      j["values"] = std::move(values);
      break;
    }
    case valuation_kind::anonymous:
      j["kind"] = "anonymous";
      j["values"] = v.anonymous_values();
      break;
    case valuation_kind::additive:
      j["kind"] = "additive";
      j["weights"] = v.additive_weights();
      break;
    case valuation_kind::xos:
      j["kind"] = "xos";
      j["clauses"] = v.xos_clauses();
      break;
    case valuation_kind::coverage: {
      j["kind"] = "coverage";
      j["universe"] = v.coverage_universe();
      json sets = json::array();
      for (std::uint64_t mask : v.coverage_sets()) {
        json row = json::array();
        for (int e = 0; e < 64; ++e)
          if ((mask >> e) & 1ull) row.push_back(e);
        sets.push_back(std::move(row));
      }
      j["sets"] = std::move(sets);
      break;
    }
  }
  return j;
}

inline instance instance_from_json(const json& j) {
  if (!j.is_object()) throw validation_error("instance must be a JSON object");
  for (const auto& [key, _] : j.items())
    if (key != "name" && key != "agents" && key != "projects")
      throw validation_error("unknown instance field ." + key);
  const json& agents = detail::require_field(j, "agents", "");
  if (!agents.is_number_integer() || agents.get<int>() < 1)
    throw validation_error(".agents must be a positive integer");
  instance inst;
  inst.agents = agents.get<int>();
  if (j.contains("name")) {
    if (!j.at("name").is_string()) throw validation_error(".name must be a string");
    inst.name = j.at("name").get<std::string>();
  }
  const json& projects = detail::require_field(j, "projects", "");
  if (!projects.is_array() || projects.empty())
    throw validation_error(".projects must be a nonempty array");
  for (std::size_t k = 0; k < projects.size(); ++k)
    inst.projects.push_back(valuation_from_json(
        projects[k], inst.agents, ".projects[" + std::to_string(k) + "]"));
  inst.validate();
  return inst;
}

inline json instance_to_json(const instance& inst) {
  json j;
  if (!inst.name.empty()) j["name"] = inst.name;
  j["agents"] = inst.agents;
  json projects = json::array();
  for (const auto& v : inst.projects) projects.push_back(valuation_to_json(v));
  j["projects"] = std::move(projects);
  return j;
}

inline json dual_to_json(const dual_solution& d) {
  return json{{"prices", d.prices}, {"slacks", d.slacks}, {"objective", d.objective}};
}

inline dual_solution dual_from_json(const json& j) {
  dual_solution d;
  d.prices = detail::number_array(detail::require_field(j, "prices", ".dual"),
                                  ".dual.prices");
  d.slacks = detail::number_array(detail::require_field(j, "slacks", ".dual"),
                                  ".dual.slacks");
  d.objective = detail::number_at(detail::require_field(j, "objective", ".dual"),
                                  ".dual.objective");
  return d;
}

inline json solution_to_json(const instance& inst, const solution& sol) {
  json j;
  json assignment = json::array();
  for (const auto& a : sol.alloc.to_assignment(inst.agents)) {
    if (a)
      assignment.push_back(*a);
    else
      assignment.push_back(nullptr);
  }
  j["assignment"] = std::move(assignment);
  j["payments"] = sol.payments;
  json metrics{{"welfare", sol.metrics.welfare},
               {"total_payment", sol.metrics.total_payment},
               {"beta_budget", sol.metrics.beta_budget}};
  if (sol.metrics.alpha_stability) metrics["alpha_stability"] = *sol.metrics.alpha_stability;
  if (sol.metrics.welfare_ratio_vs_opt)
    metrics["welfare_ratio_vs_opt"] = *sol.metrics.welfare_ratio_vs_opt;
  j["metrics"] = std::move(metrics);
  if (sol.dual) j["dual"] = dual_to_json(*sol.dual);
  return j;
}

inline solution solution_from_json(const instance& inst, const json& j) {
  if (!j.is_object()) throw validation_error("solution must be a JSON object");
  const json& aj = detail::require_field(j, "assignment", "");
  if (!aj.is_array() || static_cast<int>(aj.size()) != inst.agents)
    throw validation_error(".assignment must list one entry per agent");
  std::vector<std::optional<int>> assign(inst.agents);
  for (int i = 0; i < inst.agents; ++i) {
    if (aj[i].is_null()) continue;
    if (!aj[i].is_number_integer())
      throw validation_error(".assignment[" + std::to_string(i) +
                             "] must be a project index or null");
    assign[i] = aj[i].get<int>();
  }
  solution sol;
  sol.alloc = allocation::from_assignment(assign, inst.project_count());
  sol.payments = detail::number_array(detail::require_field(j, "payments", ""),
                                      ".payments");
  validate_payments(sol.payments, inst.agents);
  sol.metrics.welfare = social_welfare(inst, sol.alloc);
  sol.metrics.total_payment = total_payment(sol.payments);
  sol.metrics.beta_budget = sol.metrics.welfare > 0.0
                                ? sol.metrics.total_payment / sol.metrics.welfare
                                : 0.0;
  if (j.contains("dual")) sol.dual = dual_from_json(j.at("dual"));
  return sol;
}

inline json bids_to_json(const bid_profile& bids) { return json{{"bids", bids.bids}}; }

inline bid_profile bids_from_json(const instance& inst, const json& j) {
  const json& bj = detail::require_field(j, "bids", "");
  if (!bj.is_array()) throw validation_error(".bids must be an m x N array");
  bid_profile out;
  for (std::size_t k = 0; k < bj.size(); ++k)
    out.bids.push_back(
        detail::number_array(bj[k], ".bids[" + std::to_string(k) + "]"));
  out.validate_for(inst);
  return out;
}

inline json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw validation_error("cannot open " + path);
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw validation_error("parse error in " + path + ": " + e.what());
  }
  return j;
}

inline instance load_instance(const std::string& path) {
  return instance_from_json(load_json_file(path));
}

inline void save_json_file(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw validation_error("cannot write " + path);
  out << j.dump(2) << "\n";
}

inline void save_instance(const std::string& path, const instance& inst) {
  save_json_file(path, instance_to_json(inst));
}

inline void save_solution(const std::string& path, const instance& inst,
                          const solution& sol) {
  save_json_file(path, solution_to_json(inst, sol));
}

inline solution load_solution(const std::string& path, const instance& inst) {
  return solution_from_json(inst, load_json_file(path));
}

}  // namespace coalition

#endif  // COALITION_JSON_IO_HPP
