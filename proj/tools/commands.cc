/*
 * Copyright 2026 The gamecf Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "commands.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <filesystem>
#include <iostream>
#include <nlohmann/json.hpp>

#include "gamecf/bootstrap.hpp"
#include "gamecf/counterfactual.hpp"
#include "gamecf/dataset.hpp"
#include "gamecf/error.hpp"
#include "gamecf/estimators.hpp"
#include "gamecf/game_json.hpp"
#include "gamecf/io.hpp"
#include "gamecf/multi_index.hpp"
#include "gamecf/report.hpp"
#include "gamecf/simulate.hpp"
#include "gamecf/verify.hpp"

namespace gamecf::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct Loaded {
  json config = json::object();
  fs::path base = ".";
};

Loaded load(const CommandOptions& opt, bool required) {
  Loaded l;
  if (opt.config.empty()) {
    if (required) throw Error("config_error", "--config is required");
    return l;
  }
  l.config = read_config(opt.config);
  if (!l.config.is_object()) throw Error("config_error", opt.config + ": expected a JSON object");
  l.base = fs::path(opt.config).parent_path();
  return l;
}

std::optional<std::uint64_t> seed_of(const CommandOptions& opt, const json& cfg) {
  if (opt.seed) return opt.seed;
  if (!cfg.contains("seed")) return std::nullopt;
  if (!cfg["seed"].is_number_unsigned()) throw Error("config_error", "seed: expected a non-negative integer");
  return cfg["seed"].get<std::uint64_t>();
}

std::uint64_t require_seed(const CommandOptions& opt, const json& cfg) {
  auto s = seed_of(opt, cfg);
  if (!s) throw Error("config_error", "seed: required for this command (config or --seed)");
  return *s;
}

const json& need(const json& cfg, const std::string& key) {
  auto it = cfg.find(key);
  if (it == cfg.end()) throw Error("config_error", key + ": missing required field");
  return *it;
}

std::string out_path(const CommandOptions& opt, const std::string& name) {
  fs::create_directories(opt.out);
  return (fs::path(opt.out) / name).string();
}

EqSolver solver_of(const json& cfg) {
  return cfg.contains("solver") ? solver_from_json(cfg["solver"]) : EqSolver::kPureNe;
}

std::string fnv_hex(const std::string& text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

json run_provenance(const std::string& command, const CommandOptions& opt, const Loaded& l,
                    std::optional<std::uint64_t> seed) {
  json p = {{"command", command}, {"config_hash", fnv_hex(l.config.dump())}};
  p["seed"] = seed ? json(*seed) : json(nullptr);
  (void)opt;
  return p;
}

// ---------------------------------------------------------------------------
// bounds

Policy sweep_policy(const json& sweep, double v) {
  const std::string type = sweep.value("type", "set_constant");
  const std::string coord = need(sweep, "coordinate").get<std::string>();
  if (type == "set_constant") return Policy::set_constant(coord, v);
  if (type == "shift") return Policy::additive_shift(coord, v);
  throw Error("config_error", "sweep.type: expected set_constant or shift");
}

// ---------------------------------------------------------------------------
// estimate

struct EstimateSetup {
  Dataset data;
  Policy policy;
  KernelConfig kernel;
  ConditioningSet C;
  bool affected_only = false;
  std::vector<std::string> controls;
  std::vector<IndexSpec> index;
  std::vector<std::string> x1;
  MultiIndexConfig mi;
};

std::vector<int> affected_markets(const Dataset& d, const Policy& policy) {
  const auto post = apply_policy_to_rows(d, policy);
  const int K = d.num_covariates();
  std::vector<int> out;
  for (int m = 0; m < d.num_markets(); ++m) {
    for (int k = 0; k < K; ++k) {
      if (post[static_cast<std::size_t>(m) * K + k] != d.x(m, k)) {
        out.push_back(m);
        break;
      }
    }
  }
  return out;
}

std::vector<int> markets_of(const EstimateSetup& s, const Dataset& d) {
  if (!s.affected_only) return {};
  auto m = affected_markets(d, s.policy);
  if (m.empty()) throw Error("empty_group", "the policy changes no market");
  return m;
}

// Binary covariates are matched exactly unless the config lists them.
std::vector<std::string> binary_columns(const Dataset& d) {
  std::vector<std::string> out;
  for (int k = 0; k < d.num_covariates(); ++k) {
    bool binary = true;
    for (int m = 0; m < d.num_markets() && binary; ++m) binary = d.x(m, k) == 0.0 || d.x(m, k) == 1.0;
    if (binary) out.push_back(d.x_names()[k]);
  }
  return out;
}

std::vector<double> concat(std::initializer_list<const std::vector<double>*> parts) {
  std::vector<double> out;
  for (const auto* p : parts) out.insert(out.end(), p->begin(), p->end());
  return out;
}

using EngineFn = std::function<std::vector<double>(const Dataset&, const KernelConfig&)>;

}  // namespace

std::string error_line(const std::string& code, const std::string& message) {
  return json{{"error", code}, {"message", message}}.dump();
}

int cmd_simulate(const CommandOptions& opt) {
  const Loaded l = load(opt, true);
  const auto& cfg = l.config;
  const std::uint64_t seed = require_seed(opt, cfg);
  const FiniteGame game = game_from_json(need(cfg, "game"));
  const SelectionRule rule = selection_from_json(need(cfg, "selection"), game.num_players());
  const EqSolver solver = solver_of(cfg);
  const json& mj = need(cfg, "markets");
  if (!mj.is_number_integer() || mj.get<long long>() < 1) {
    throw Error("config_error", "markets: expected a positive integer");
  }
  const Dataset data = simulate(game, rule, solver, mj.get<int>(), seed);
  const std::string path = out_path(opt, "data.csv");
  write_dataset(data, path);
  json prov = provenance_to_json(*data.provenance);
  prov["markets"] = data.num_markets();
  prov["command"] = "simulate";
  write_file_atomic(out_path(opt, "data.provenance.json"), dump_json(prov));
  std::cout << "wrote " << data.num_markets() << " markets to " << path << "\n";
  return 0;
}

int cmd_bounds(const CommandOptions& opt) {
  const Loaded l = load(opt, true);
  const auto& cfg = l.config;
  const FiniteGame game = game_from_json(need(cfg, "game"));
  const Policy policy = cfg.contains("policy") ? policy_from_json(cfg["policy"]) : Policy::identity();
  const SelectionRule rule = selection_from_json(need(cfg, "selection"), game.num_players());
  const EqSolver solver = solver_of(cfg);
  const ConditioningSet C =
      cfg.contains("conditioning") ? conditioning_from_json(cfg["conditioning"]) : ConditioningSet::all();
  std::vector<OutcomeFunctional> hs;
  if (cfg.contains("functionals")) {
    const json& fj = cfg["functionals"];
    if (!fj.is_array() || fj.empty()) throw Error("config_error", "functionals: expected a non-empty array");
    for (std::size_t k = 0; k < fj.size(); ++k) {
      hs.push_back(functional_from_json(fj[k], game, "functionals[" + std::to_string(k) + "]"));
    }
  } else {
    hs.push_back(functional_from_json(need(cfg, "functional"), game));
  }
  const bool want_ep = cfg.value("ep", true);

  const auto admiss = check_policy_admissible(game, policy);
  if (!admiss.holds) {
    std::string why;
    for (const auto& r : admiss.reasons) why += (why.empty() ? "" : "; ") + r;
    throw Error("policy_not_admissible", why);
  }
  const auto post = apply_policy(game, policy);
  const auto inv = check_invariance(rule, game, post, solver);
  const auto rf = reduced_form(game, rule, solver);

  json records = json::array();
  std::vector<PredictionBound> all;
  std::vector<std::optional<double>> eps;
  for (const auto& h : hs) {
    const auto b = bounds(rf, game, policy, h, C, inv.holds);
    std::optional<double> e;
    if (want_ep) e = ep(game, policy, rule, solver, h, C);
    json r = bound_to_json(b, e);
    if (e) {
      const double v = std::max({0.0, b.lower - *e, *e - b.upper});
      r["sandwich_violation"] = v;
      r["negative_control"] = !inv.holds && v > 0.0;
    }
    records.push_back(r);
    all.push_back(b);
    eps.push_back(e);
  }
  json report = {{"bounds", records},
                 {"selection", rule.describe()},
                 {"solver", to_string(solver)},
                 {"invariance", {{"holds", inv.holds}, {"states_compared", inv.states_compared},
                                 {"detail", inv.detail}}},
                 {"policy", policy_to_json(policy)}};
  write_file_atomic(out_path(opt, "bounds.json"), dump_json(report));
  write_file_atomic(out_path(opt, "bounds.csv"), bounds_to_csv(all, eps));

  if (cfg.contains("sweep")) {
    const json& sw = cfg["sweep"];
    const std::size_t which = sw.value("functional", 0);
    if (which >= hs.size()) throw Error("config_error", "sweep.functional: out of range");
    std::vector<PlotPoint> pts;
    const json& vals = need(sw, "values");
    if (!vals.is_array()) throw Error("config_error", "sweep.values: expected an array");
    for (const auto& vj : vals) {
      const double v = vj.get<double>();
      const auto b = bounds(rf, game, sweep_policy(sw, v), hs[which], C, inv.holds);
      pts.push_back({v, b.lower, b.dp, b.upper});
    }
    write_file_atomic(out_path(opt, "plot.csv"), plot_to_csv(pts));
  }
  json prov = run_provenance("bounds", opt, l, std::nullopt);
  char hash[17];
  std::snprintf(hash, sizeof hash, "%016llx", static_cast<unsigned long long>(game_hash(game)));
  prov["game_hash"] = hash;
  write_file_atomic(out_path(opt, "bounds.provenance.json"), dump_json(prov));
  for (const auto& r : records) {
    std::cout << r["target"].get<std::string>() << ": [" << r["lower"].dump() << ", "
              << r["upper"].dump() << "] dp=" << r["dp"].dump() << " eb=" << r["eb"].dump();
    if (r.contains("ep")) std::cout << " ep=" << r["ep"].dump();
    std::cout << "\n";
  }
  return 0;
}

int cmd_estimate(const CommandOptions& opt) {
  const Loaded l = load(opt, true);
  const auto& cfg = l.config;
  EstimateSetup s;
  const fs::path data_path = l.base / need(cfg, "data").get<std::string>();
  s.data = read_dataset(data_path.string());
  s.policy = cfg.contains("policy") ? policy_from_json(cfg["policy"]) : Policy::identity();
  s.kernel = cfg.contains("kernel") ? kernel_config_from_json(cfg["kernel"]) : KernelConfig{};
  if (!cfg.contains("kernel") || !cfg["kernel"].contains("discrete")) {
    s.kernel.discrete = binary_columns(s.data);
  }
  s.C = cfg.contains("conditioning") ? conditioning_from_json(cfg["conditioning"]) : ConditioningSet::all();
  const std::string mk = cfg.value("markets", "all");
  if (mk != "all" && mk != "affected") throw Error("config_error", "markets: expected all or affected");
  s.affected_only = mk == "affected";
  if (cfg.contains("controls")) s.controls = cfg["controls"].get<std::vector<std::string>>();
  if (cfg.contains("index")) {
    for (const auto& ij : cfg["index"]) {
      s.index.push_back({need(ij, "lead").get<std::string>(), need(ij, "rest").get<std::vector<std::string>>()});
    }
  }
  if (cfg.contains("x1")) s.x1 = cfg["x1"].get<std::vector<std::string>>();
  if (cfg.contains("multi_index")) {
    const json& mj = cfg["multi_index"];
    s.mi.first_stage_bandwidth = mj.value("first_stage_bandwidth", 0.0);
    s.mi.pair_bandwidth = mj.value("pair_bandwidth", 0.0);
  }
  s.mi.family = s.kernel.family;
  std::vector<std::string> engines = {"ols", "kernel"};
  if (cfg.contains("engines")) engines = cfg["engines"].get<std::vector<std::string>>();
  int B = 0;
  if (cfg.contains("bootstrap")) B = cfg["bootstrap"].value("replications", 0);
  const auto seed = seed_of(opt, cfg);
  if (B > 0 && !seed) throw Error("config_error", "seed: required when bootstrap replications > 0");

  const auto& players = s.data.y_names();
  const int n = s.data.num_players();
  std::vector<EngineReport> reports;
  json engines_json = json::array();

  auto run_engine = [&](const std::string& name, const std::vector<std::string>& targets,
                        const EngineFn& fn, KernelConfig kc, const std::vector<double>& bandwidths,
                        int dropped, const std::string& support_rule) {
    BootstrapResult br;
    if (B > 0) {
      br = bootstrap_se(s.data, [&](const Dataset& d) { return fn(d, kc); },
                        {B, *seed, 0.10});
    } else {
      br.estimate = fn(s.data, kc);
    }
    for (std::size_t t = 0; t < targets.size(); ++t) {
      EngineReport r;
      r.engine = name;
      r.target = targets[t];
      r.estimate.assign(br.estimate.begin() + static_cast<std::ptrdiff_t>(t * n),
                        br.estimate.begin() + static_cast<std::ptrdiff_t>((t + 1) * n));
      if (!br.se.empty()) {
        r.se.assign(br.se.begin() + static_cast<std::ptrdiff_t>(t * n),
                    br.se.begin() + static_cast<std::ptrdiff_t>((t + 1) * n));
      }
      r.replications = B;
      r.bandwidths = bandwidths;
      r.dropped_markets = dropped;
      r.support_rule = support_rule;
      engines_json.push_back(engine_to_json(r, players));
      reports.push_back(std::move(r));
    }
    std::cout << name << " done\n";
  };

  const std::string knn = "discrete cells observed; nearest neighbour within one bandwidth";
  for (const auto& e : engines) {
    if (e == "ols") {
      const auto cols = s.kernel.columns;
      run_engine("ols", {"delta"}, [&, cols](const Dataset& d, const KernelConfig&) {
        const auto m = markets_of(s, d);
        return ols_effect(d, s.policy, m, cols).delta;
      }, s.kernel, {}, 0, "none");
    } else if (e == "kernel" || e == "control_function") {
      const auto controls = e == "kernel" ? std::vector<std::string>{} : s.controls;
      if (e == "control_function" && controls.empty()) {
        throw Error("config_error", "controls: required by the control_function engine");
      }
      const auto m0 = markets_of(s, s.data);
      const auto full = control_function_adp(s.data, s.policy, s.kernel, controls, s.C, m0);
      KernelConfig fixed = s.kernel;
      fixed.player_bandwidths = full.bandwidth;
      int dropped = 0;
      for (int v : full.dropped) dropped += v;
      run_engine(e, {"delta", "adp", "eb"}, [&, controls](const Dataset& d, const KernelConfig& kc) {
        const auto m = markets_of(s, d);
        const auto est = control_function_adp(d, s.policy, kc, controls, s.C, m);
        return concat({&est.delta, &est.adp, &est.eb});
      }, fixed, full.bandwidth, dropped, knn);
    } else if (e == "multi_index") {
      if (s.index.empty()) throw Error("config_error", "index: required by the multi_index engine");
      const auto fit_and_estimate = [&](const Dataset& d, const KernelConfig& kc) {
        const auto model = multi_index_fit(d, s.index, s.x1, kc.discrete, s.mi);
        const auto m = markets_of(s, d);
        return multi_index_adp(d, model, s.policy, kc, s.C, m);
      };
      const auto full = fit_and_estimate(s.data, s.kernel);
      KernelConfig fixed = s.kernel;
      fixed.player_bandwidths = full.bandwidth;
      int dropped = 0;
      for (int v : full.dropped) dropped += v;
      run_engine("multi_index", {"delta", "adp", "eb"}, [&](const Dataset& d, const KernelConfig& kc) {
        const auto est = fit_and_estimate(d, kc);
        return concat({&est.delta, &est.adp, &est.eb});
      }, fixed, full.bandwidth, dropped, knn + " on x1");
    } else {
      throw Error("config_error", "engines: unknown engine '" + e + "'");
    }
  }
  if (cfg.contains("decomposition")) {
    const json& dj = cfg["decomposition"];
    const std::string dummy = need(dj, "dummy").get<std::string>();
    const std::string eng = dj.value("engine", "ols");
    if (eng != "ols" && eng != "kernel") throw Error("config_error", "decomposition.engine: expected ols or kernel");
    const Engine engine = eng == "ols" ? Engine::kOls : Engine::kKernel;
    run_engine("decomposition_" + eng, {"observable_effect", "policy_effect"},
               [&, dummy, engine](const Dataset& d, const KernelConfig& kc) {
                 const auto dec = aggregate_decomposition(d, dummy, engine, kc);
                 return concat({&dec.observable_effect, &dec.policy_effect});
               }, s.kernel, {}, 0, "none");
  }

  json report = {{"engines", engines_json},
                 {"markets", s.data.num_markets()},
                 {"players", players},
                 {"policy", policy_to_json(s.policy)}};
  write_file_atomic(out_path(opt, "estimates.json"), dump_json(report));
  write_file_atomic(out_path(opt, "estimates.csv"), engines_to_csv(reports, players));
  json prov = run_provenance("estimate", opt, l, seed);
  prov["data"] = data_path.filename().string();
  prov["data_hash"] = fnv_hex(dataset_to_csv(s.data));
  write_file_atomic(out_path(opt, "estimates.provenance.json"), dump_json(prov));
  return 0;
}

int cmd_verify(const CommandOptions& opt) {
  const Loaded l = load(opt, false);
  const auto& cfg = l.config;
  VerifyOptions v;
  v.seed = seed_of(opt, cfg).value_or(1);
  v.instances = cfg.value("instances", v.instances);
  v.eps = cfg.value("eps", v.eps);
  v.negative_control = cfg.value("negative_control", v.negative_control);
  if (v.instances < 1) throw Error("config_error", "instances: expected a positive integer");
  const auto results = run_all(v);
  json out = json::array();
  json failed = json::array();
  for (const auto& r : results) {
    out.push_back(r.to_json());
    std::cout << (r.passed ? "PASS " : "FAIL ") << r.name << (r.negative_control ? " (negative control)" : "")
              << " checked=" << r.checked << " worst=" << json(r.worst).dump() << "\n";
    if (!r.passed) failed.push_back(r.to_json());
  }
  write_file_atomic(out_path(opt, "verify.json"),
                    dump_json({{"seed", v.seed}, {"instances", v.instances}, {"suites", out}}));
  if (!failed.empty()) {
    std::cerr << json{{"error", "verify_failed"}, {"failed", failed}}.dump() << "\n";
    return 1;
  }
  return 0;
}

int run(int argc, char** argv) {
  CLI::App app{"gamecf: decomposition-based counterfactuals for games"};
  app.require_subcommand(1);
  CommandOptions opt;
  std::uint64_t seed = 0;
  auto add = [&](const std::string& name, const std::string& help) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("--config", opt.config, "JSON configuration file");
    sub->add_option("--seed", seed, "RNG seed (overrides the config)");
    sub->add_option("--out", opt.out, "output directory")->capture_default_str();
    return sub;
  };
  auto* sim = add("simulate", "simulate a market dataset");
  auto* bnd = add("bounds", "decomposition bounds for a policy");
  auto* est = add("estimate", "estimate policy effects from a dataset");
  auto* ver = add("verify", "run the randomized property suites");
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << error_line("usage", e.what()) << "\n";
    return 2;
  }
  for (auto* sub : {sim, bnd, est, ver}) {
    if (sub->parsed() && sub->count("--seed") > 0) opt.seed = seed;
  }
  try {
    if (sim->parsed()) return cmd_simulate(opt);
    if (bnd->parsed()) return cmd_bounds(opt);
    if (est->parsed()) return cmd_estimate(opt);
    return cmd_verify(opt);
  } catch (const Error& e) {
    std::cerr << error_line(e.code(), e.what()) << "\n";
  } catch (const json::exception& e) {
    std::cerr << error_line("config_error", e.what()) << "\n";
  } catch (const std::exception& e) {
    std::cerr << error_line("internal", e.what()) << "\n";
  }
  return 2;
}

}  // namespace gamecf::cli
