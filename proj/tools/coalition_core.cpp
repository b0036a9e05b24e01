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
// coalition-core: solvers and verifiers for coalition formation games.
// Machine-readable JSON goes to stdout (or --out); human summaries go to
// stderr. Exit codes: 0 success, 1 a verification or guarantee failure,
// 2 usage error.

#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "coalition/coalition.hpp"

namespace {

using namespace coalition;
using nlohmann::json;

constexpr int exit_ok = 0;
constexpr int exit_failed = 1;
constexpr int exit_usage = 2;

void emit(const json& j, const std::string& out_path) {
  if (out_path.empty())
    std::cout << j.dump(2) << "\n";
  else
    save_json_file(out_path, j);
}

allocation resolve_input_alloc(const instance& inst, const std::string& source) {
  if (source == "opt") return brute_force_opt(inst).alloc;
  if (source == "greedy") {
    bool all_anonymous = true;
    for (const auto& v : inst.projects)
      all_anonymous = all_anonymous && v.kind() == valuation_kind::anonymous;
    if (all_anonymous) return greedy_anonymous(inst).alloc;
    return greedy_assign_by_marginal(inst).alloc;
  }
  if (source.rfind("file:", 0) == 0)
    return load_solution(source.substr(5), inst).alloc;
  throw validation_error("--input-alloc must be opt, greedy, or file:PATH");
}

json matching_moves_json(const matching_result& match) {
  json moves = json::array();
  for (const auto& mv : match.moves) {
    json m{{"agent", mv.agent}, {"to", mv.to}, {"payment", mv.new_payment}};
    if (mv.from)
      m["from"] = *mv.from;
    else
      m["from"] = nullptr;
    moves.push_back(std::move(m));
  }
  return moves;
}

json stability_json(const stability_report& report) {
  return json{{"pass", report.pass},
              {"alpha_requested", report.alpha_requested},
              {"alpha_star", report.alpha_star},
              {"beta", report.beta},
              {"welfare", report.welfare},
              {"total_payment", report.total_payment},
              {"worst",
               {{"project", report.worst.project},
                {"deviating_set", report.worst.deviating_set.members()},
                {"slack", report.worst.slack}}}};
}

json equilibrium_json(const equilibrium_report& report) {
  json buyers = json::array();
  for (const auto& b : report.buyers)
    buyers.push_back({{"current_utility", b.current_utility},
                      {"best_response_utility", b.best_utility},
                      {"ratio", b.ratio}});
  return json{{"approx_ne", report.approx_ne},
              {"alpha_requested", report.alpha_requested},
              {"weak_no_overbidding", report.weak_no_overbidding},
              {"gamma", report.gamma},
              {"buyers", std::move(buyers)}};
}

int cmd_gen(const generator_spec& spec, const std::string& out_path) {
  instance inst = generate(spec);
  emit(instance_to_json(inst), out_path);
  std::cerr << "generated " << inst.name << " (" << inst.agents << " agents, "
            << inst.project_count() << " projects)\n";
  return exit_ok;
}

int cmd_opt(const std::string& instance_path, const std::string& out_path) {
  instance inst = load_instance(instance_path);
  opt_result opt = brute_force_opt(inst);
  json j;
  j["welfare"] = opt.welfare;
  json assignment = json::array();
  for (const auto& a : opt.alloc.to_assignment(inst.agents)) assignment.push_back(*a);
  j["assignment"] = std::move(assignment);
  emit(j, out_path);
  std::cerr << "optimum welfare " << opt.welfare << "\n";
  return exit_ok;
}

int cmd_lp(const std::string& instance_path, const std::string& out_path) {
  instance inst = load_instance(instance_path);
  config_lp_result lp = solve_config_lp(inst);
  json j = dual_to_json(lp.dual);
  j["exact_arithmetic"] = lp.exact_arithmetic;
  emit(j, out_path);
  std::cerr << "LP objective " << lp.dual.objective << "\n";
  return exit_ok;
}

int self_verify(const instance& inst, const solution& sol, double alpha,
                const char* label) {
  stability_report report = check_stability(inst, sol, alpha);
  if (!report.pass) {
    std::cerr << label << ": output failed its stability guarantee (worst slack "
              << report.worst.slack << " at project " << report.worst.project << ")\n";
    return exit_failed;
  }
  std::cerr << label << ": welfare " << sol.metrics.welfare << ", payments "
            << sol.metrics.total_payment << ", beta " << sol.metrics.beta_budget
            << ", alpha* " << report.alpha_star << "\n";
  return exit_ok;
}

int cmd_solve(const std::string& instance_path, const std::string& method,
              double epsilon, const std::string& input_alloc,
              const std::string& out_path) {
  instance inst = load_instance(instance_path);
  solution sol;
  if (method == "submodular") {
    sol = submodular_core(inst);
  } else if (method == "anonymous") {
    sol = anonymous_core(inst, false).sol;
  } else if (method == "anonymous-ef") {
    sol = anonymous_core(inst, true).sol;
  } else if (method == "xos-exact") {
    sol = xos_exact_core(inst);
  } else if (method == "best-response") {
    sol = best_response_core(inst, resolve_input_alloc(inst, input_alloc), epsilon).sol;
  } else if (method == "xos-dual") {
    sol = xos_no_oracle_core(inst, resolve_input_alloc(inst, input_alloc));
  } else {
    throw CLI::ValidationError("--method", "unknown method " + method);
  }
  emit(solution_to_json(inst, sol), out_path);
  return self_verify(inst, sol, 1.0, method.c_str());
}

int cmd_stabilize(const std::string& instance_path, const std::string& input_alloc,
                  bool trace, const std::string& out_path) {
  instance inst = load_instance(instance_path);
  allocation input = resolve_input_alloc(inst, input_alloc);
  stabilize_result res = stabilize(inst, input);
  json j = solution_to_json(inst, res.sol);
  j["input_welfare"] = res.input_welfare;
  j["alpha_input"] = res.alpha_input;
  if (trace) {
    json classes = json::array();
    for (int k = 0; k < inst.project_count(); ++k) {
      const auto& e = res.classes.per_project[k];
      if (!e.classified) continue;
      classes.push_back({{"project", k},
                         {"good", e.good},
                         {"stayers", e.stayers.members()},
                         {"leavers", e.leavers.members()},
                         {"filled", e.filled}});
    }
    j["trace"] = {{"phase1_moves", matching_moves_json(res.phase_one_matching)},
                  {"classification", std::move(classes)}};
  }
  emit(j, out_path);
  return self_verify(inst, res.sol, 1.0, "stabilize");
}

int cmd_verify(const std::string& instance_path, const std::string& solution_path,
               double alpha, const std::string& out_path) {
  instance inst = load_instance(instance_path);
  solution sol = load_solution(solution_path, inst);
  stability_report report = check_stability(inst, sol, alpha);
  emit(stability_json(report), out_path);
  std::cerr << (report.pass ? "stable" : "NOT stable") << " at alpha " << alpha
            << " (alpha* " << report.alpha_star << ", beta " << report.beta << ")\n";
  return report.pass ? exit_ok : exit_failed;
}

int cmd_lower_bound(const std::string& instance_path, const std::string& out_path) {
  instance inst = load_instance(instance_path);
  beta_scan_result res = min_beta_over_allocations(inst);
  json assignment = json::array();
  for (const auto& a : res.witness.to_assignment(inst.agents)) assignment.push_back(*a);
  bool no_exact_core = res.beta > 1.0 + comparison_tolerance;
  emit(json{{"min_beta", res.beta},
            {"witness_assignment", std::move(assignment)},
            {"witness_subsidy", res.witness_subsidy},
            {"no_exact_core", no_exact_core}},
       out_path);
  std::cerr << "minimal beta " << res.beta
            << (no_exact_core ? " > 1: no exact core exists\n" : "\n");
  return exit_ok;
}

int cmd_auction_flip(const std::string& instance_path, const std::string& solution_path,
                     const std::string& out_path) {
  instance inst = load_instance(instance_path);
  solution sol = load_solution(solution_path, inst);
  bid_profile bids = flip_core_to_bids(inst, sol);
  emit(bids_to_json(bids), out_path);
  std::cerr << "flipped solution into " << bids.buyers() << " bid vectors\n";
  return exit_ok;
}

int cmd_auction_verify(const std::string& instance_path, const std::string& bids_path,
                       double alpha, const std::string& out_path) {
  instance inst = load_instance(instance_path);
  bid_profile bids = bids_from_json(inst, load_json_file(bids_path));
  equilibrium_report report = verify_equilibrium(inst, bids, alpha);
  emit(equilibrium_json(report), out_path);
  std::cerr << (report.approx_ne ? "equilibrium" : "NOT an equilibrium") << " at alpha "
            << alpha << ", gamma " << report.gamma << "\n";
  return report.approx_ne ? exit_ok : exit_failed;
}

int cmd_auction_approx_ne(const std::string& instance_path, const std::string& method,
                          double epsilon, const std::string& out_path) {
  instance inst = load_instance(instance_path);
  approx_ne_result res;
  if (method == "anonymous")
    res = approx_ne_anonymous(inst);
  else if (method == "submodular")
    res = approx_ne_submodular(inst, epsilon);
  else
    throw CLI::ValidationError("--method", "unknown method " + method);
  json j = bids_to_json(res.bids);
  j["report"] = equilibrium_json(res.report);
  j["moves"] = res.moves;
  emit(j, out_path);
  std::cerr << "approx NE with alpha " << res.report.alpha_requested << ", gamma "
            << res.report.gamma << "\n";
  return res.report.approx_ne ? exit_ok : exit_failed;
}

int cmd_bench(const std::string& family, const std::string& method, int seeds, int n,
              int m, double epsilon, const std::string& out_path) {
  std::ostringstream csv;
  csv << "family,seed,n,m,method,welfare,opt_welfare,welfare_ratio,alpha_star,beta,"
         "iterations\n";
  bool all_ok = true;
  for (int seed = 1; seed <= seeds; ++seed) {
    instance inst = generate({family, n, m, static_cast<std::uint64_t>(seed)});
    double opt = brute_force_opt(inst).welfare;
    solution sol;
    long iterations = 0;
    if (method == "stabilize") {
      stabilize_result res = stabilize(inst, brute_force_opt(inst).alloc);
      sol = res.sol;
      iterations = static_cast<long>(res.phase_one_matching.moves.size());
    } else if (method == "submodular") {
      sol = submodular_core(inst);
    } else if (method == "anonymous" || method == "anonymous-ef") {
      auto res = anonymous_core(inst, method == "anonymous-ef");
      sol = res.sol;
      iterations = static_cast<long>(res.greedy.trace.size());
    } else if (method == "xos-exact") {
      sol = xos_exact_core(inst);
    } else if (method == "best-response") {
      auto res = best_response_core(inst, greedy_assign_by_marginal(inst).alloc, epsilon);
      sol = res.sol;
      iterations = res.accepted_moves;
    } else if (method == "xos-dual") {
      sol = xos_no_oracle_core(inst, brute_force_opt(inst).alloc);
    } else {
      throw CLI::ValidationError("--method", "unknown method " + method);
    }
    stability_report report = check_stability(inst, sol, 1.0);
    all_ok = all_ok && report.pass;
    csv << family << ',' << seed << ',' << inst.agents << ',' << inst.project_count()
        << ',' << method << ',' << sol.metrics.welfare << ',' << opt << ','
        << (opt > 0 ? sol.metrics.welfare / opt : 1.0) << ',' << report.alpha_star << ','
        << report.beta << ',' << iterations << "\n";
  }
  if (out_path.empty())
    std::cout << csv.str();
  else {
    std::ofstream out(out_path);
    out << csv.str();
  }
  std::cerr << "bench finished, " << seeds << " seeds\n";
  return all_ok ? exit_ok : exit_failed;
}

}  // namespace

int main(int argc, char** argv) {
  if (const char* tol = std::getenv("COALITION_CORE_TOL")) {
    try {
      comparison_tolerance = std::stod(tol);
    } catch (const std::exception&) {
      std::cerr << "ignoring malformed COALITION_CORE_TOL\n";
    }
  }

  CLI::App app{"coalition-core: core-stable solutions for coalition formation games"};
  app.require_subcommand(1);

  std::string out_path, instance_path, solution_path, bids_path;
  std::string method = "submodular", input_alloc = "opt", family = "random-anonymous";
  double alpha = 1.0, epsilon = 0.1;
  bool trace = false;
  int seeds = 10;

  generator_spec spec;

  auto* gen = app.add_subcommand("gen", "generate an instance");
  gen->add_option("--family", spec.family,
                  "example1 | claim4-part1 | claim4-part2 | overbid-sqrtN | "
                  "random-explicit-subadditive | random-anonymous | random-xos | "
                  "random-coverage")
      ->required();
  gen->add_option("--n", spec.n, "agent count");
  gen->add_option("--m", spec.m, "project count (random families)");
  gen->add_option("--seed", spec.seed, "random seed");
  gen->add_option("--epsilon", spec.epsilon, "example1 epsilon");
  gen->add_option("--clauses", spec.clauses, "random-xos clause cap");
  gen->add_option("--out", out_path, "write JSON here instead of stdout");

  auto* opt_cmd = app.add_subcommand("opt", "brute-force welfare optimum");
  opt_cmd->add_option("--instance", instance_path)->required();
  opt_cmd->add_option("--out", out_path);

  auto* lp_cmd = app.add_subcommand("lp", "configuration LP dual solve");
  lp_cmd->add_option("--instance", instance_path)->required();
  lp_cmd->add_option("--out", out_path);

  auto* solve = app.add_subcommand("solve", "class-specific core constructions");
  solve->add_option("--instance", instance_path)->required();
  solve->add_option("--method", method,
                    "submodular | anonymous | anonymous-ef | xos-exact | "
                    "best-response | xos-dual")
      ->required();
  solve->add_option("--epsilon", epsilon, "best-response epsilon");
  solve->add_option("--input-alloc", input_alloc, "opt | greedy | file:PATH");
  solve->add_option("--out", out_path);

  auto* stab = app.add_subcommand("stabilize", "black-box stabilization");
  stab->add_option("--instance", instance_path)->required();
  stab->add_option("--input-alloc", input_alloc, "opt | greedy | file:PATH");
  stab->add_flag("--trace", trace, "include matching and classification trace");
  stab->add_option("--out", out_path);

  auto* verify = app.add_subcommand("verify", "exhaustive stability check");
  verify->add_option("--instance", instance_path)->required();
  verify->add_option("--solution", solution_path)->required();
  verify->add_option("--alpha", alpha);
  verify->add_option("--out", out_path);

  auto* lower = app.add_subcommand("lower-bound", "minimal beta over all allocations");
  lower->add_option("--instance", instance_path)->required();
  lower->add_option("--out", out_path);

  auto* auction = app.add_subcommand("auction", "flipped second-price auction tools");
  auction->require_subcommand(1);
  auto* flip = auction->add_subcommand("flip", "core solution to bid profile");
  flip->add_option("--instance", instance_path)->required();
  flip->add_option("--solution", solution_path)->required();
  flip->add_option("--out", out_path);
  auto* averify = auction->add_subcommand("verify", "approximate equilibrium check");
  averify->add_option("--instance", instance_path)->required();
  averify->add_option("--bids", bids_path)->required();
  averify->add_option("--alpha", alpha);
  averify->add_option("--out", out_path);
  auto* ane = auction->add_subcommand("approx-ne", "approximate equilibrium construction");
  ane->add_option("--instance", instance_path)->required();
  ane->add_option("--method", method, "anonymous | submodular")->required();
  ane->add_option("--epsilon", epsilon);
  ane->add_option("--out", out_path);

  auto* bench = app.add_subcommand("bench", "seeded benchmark sweep, CSV output");
  bench->add_option("--family", family)->required();
  bench->add_option("--method", method)->required();
  bench->add_option("--seeds", seeds);
  bench->add_option("--n", spec.n)->required();
  bench->add_option("--m", spec.m);
  bench->add_option("--epsilon", epsilon);
  bench->add_option("--out", out_path);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? exit_ok : exit_usage;
  }

  try {
    if (gen->parsed()) return cmd_gen(spec, out_path);
    if (opt_cmd->parsed()) return cmd_opt(instance_path, out_path);
    if (lp_cmd->parsed()) return cmd_lp(instance_path, out_path);
    if (solve->parsed())
      return cmd_solve(instance_path, method, epsilon, input_alloc, out_path);
    if (stab->parsed()) return cmd_stabilize(instance_path, input_alloc, trace, out_path);
    if (verify->parsed())
      return cmd_verify(instance_path, solution_path, alpha, out_path);
    if (lower->parsed()) return cmd_lower_bound(instance_path, out_path);
    if (auction->parsed()) {
      if (flip->parsed()) return cmd_auction_flip(instance_path, solution_path, out_path);
      if (averify->parsed())
        return cmd_auction_verify(instance_path, bids_path, alpha, out_path);
      if (ane->parsed())
        return cmd_auction_approx_ne(instance_path, method, epsilon, out_path);
    }
    if (bench->parsed())
      return cmd_bench(family, method, seeds, spec.n, spec.m, epsilon, out_path);
  } catch (const CLI::ValidationError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return exit_usage;
  } catch (const validation_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_usage;
  } catch (const scale_error& e) {
    std::cerr << "scale guard: " << e.what() << "\n";
    return exit_usage;
  } catch (const class_error& e) {
    std::cerr << "class error: " << e.what() << "\n";
    return exit_usage;
  } catch (const std::exception& e) {
    std::cerr << "failure: " << e.what() << "\n";
    return exit_failed;
  }
  return exit_usage;
}
