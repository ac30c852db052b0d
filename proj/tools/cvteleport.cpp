// Copyright 2026 The cvteleport Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "cvtele/errors.hpp"
#include "cvtele/sweep.hpp"
#include "cvtele/teleport.hpp"

namespace {

enum Exit { kOk = 0, kInternal = 1, kDomain = 2, kBracket = 3, kConfig = 4 };

struct InputFlags {
  std::string kind = "coherent";
  double alpha_re = 0.0;
  double alpha_im = 0.0;
  double sigma = 0.6;

  void attach(CLI::App* app) {
    app->add_option("--input", kind, "coherent or squeezed_vacuum")
        ->check(CLI::IsMember({"coherent", "squeezed_vacuum"}));
    app->add_option("--alpha-re", alpha_re, "coherent amplitude, real part");
    app->add_option("--alpha-im", alpha_im, "coherent amplitude, imaginary part");
    app->add_option("--sigma", sigma, "input squeezing (squeezed_vacuum)");
  }
  cvtele::InputState state() const {
    if (kind == "coherent") {
      return cvtele::InputState::coherent_state({alpha_re, alpha_im});
    }
    return cvtele::InputState::squeezed_vacuum_state(sigma);
  }
};

void print_kv(const char* key, double v) {
  std::printf("%s=%s\n", key, cvtele::format_number(v).c_str());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Teleportation fidelity with non-Gaussian resources"};
  app.require_subcommand(1);

  InputFlags input;
  double r = 0.0, eta = 1.0, nth = 0.0, t = 1.0, tol = 1e-6;
  int order = 1, grid_points = 201;
  std::string op = "none", strategy = "ng-nc";
  bool optimize = false;

  auto* fid = app.add_subcommand("fidelity", "single fidelity evaluation");
  input.attach(fid);
  fid->add_option("--r", r, "TMSV squeezing")->required()->check(CLI::NonNegativeNumber);
  fid->add_option("--eta", eta, "channel transmissivity")->check(CLI::Range(0.0, 1.0));
  fid->add_option("--nth", nth, "thermal photon number")->check(CLI::NonNegativeNumber);
  fid->add_option("--op", op, "none, ps, pa, pc")->check(CLI::IsMember({"none", "ps", "pa", "pc"}));
  fid->add_option("--order", order, "operation order")->check(CLI::Range(1, cvtele::kDefaultFockCap));
  fid->add_option("--T", t, "NG beam-splitter transmissivity")->check(CLI::Range(0.0, 1.0));
  fid->add_option("--strategy", strategy, "ng-nc or nc-ng")->check(CLI::IsMember({"ng-nc", "nc-ng"}));
  fid->add_flag("--optimize", optimize, "maximize over T");
  fid->add_option("--grid-points", grid_points)->check(CLI::Range(2, 100000));
  fid->add_option("--tolerance", tol)->check(CLI::PositiveNumber);

  std::string config_path, out_path;
  auto* sweep = app.add_subcommand("sweep", "parameter sweep to CSV");
  sweep->add_option("--config", config_path, "JSON experiment config")->required();
  sweep->add_option("--out", out_path, "CSV output path (default stdout)");

  double eta_lo = 0.05, eta_hi = 0.95, cross_tol = 1e-4;
  auto* cross = app.add_subcommand("crossover", "eta where ng-nc and nc-ng optimal curves cross");
  InputFlags cinput;
  cinput.attach(cross);
  cross->add_option("--r", r, "TMSV squeezing")->required()->check(CLI::NonNegativeNumber);
  cross->add_option("--nth", nth, "thermal photon number")->required()->check(CLI::NonNegativeNumber);
  cross->add_option("--op", op, "ps, pa, pc")->check(CLI::IsMember({"ps", "pa", "pc"}));
  cross->add_option("--order", order)->check(CLI::Range(1, cvtele::kDefaultFockCap));
  cross->add_option("--eta-lo", eta_lo)->check(CLI::Range(0.0, 1.0));
  cross->add_option("--eta-hi", eta_hi)->check(CLI::Range(0.0, 1.0));
  cross->add_option("--tolerance", cross_tol)->check(CLI::PositiveNumber);
  cross->add_option("--grid-points", grid_points)->check(CLI::Range(2, 100000));

  std::string preset;
  auto* val = app.add_subcommand("validate", "engine vs truncated-Fock oracle");
  val->add_option("preset", preset, "quick or standard")->required()
      ->check(CLI::IsMember({"quick", "standard"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kDomain;
  }

  try {
    if (*fid) {
      cvtele::FidelityQuery q;
      q.input = input.state();
      q.r = r;
      q.channel = {eta, nth};
      q.spec = {cvtele::parse_ng_kind(op), order, t};
      q.order = op == "none" ? cvtele::StrategyOrder::kNcOnly
                             : cvtele::parse_strategy(strategy);
      if (optimize) {
        const auto res = cvtele::optimal_fidelity(q, {grid_points, tol});
        print_kv("fidelity", res.f_star);
        print_kv("t_star", res.t_star);
        print_kv("probability", res.probability_at_opt);
        std::printf("evaluations=%d\n", res.evaluations);
      } else {
        const auto e = cvtele::evaluate_query(q);
        print_kv("fidelity", e.fidelity);
        print_kv("t", t);
        print_kv("probability", e.probability);
      }
      return kOk;
    }
    if (*sweep) {
      const auto cfg = cvtele::load_config(config_path);
      const int threads = cvtele::worker_threads_from_env();
      const auto rows = cvtele::run_sweep(cfg, threads);
      if (out_path.empty()) {
        cvtele::write_csv(std::cout, rows);
      } else {
        std::ofstream f(out_path, std::ios::binary);
        if (!f) throw cvtele::ConfigError(out_path + ": cannot open for writing");
        cvtele::write_csv(f, rows);
      }
      if (cfg.oracle_validation) {
        const auto v = cvtele::validate_rows(rows, threads);
        cvtele::print_validation(std::cerr, v);
        for (const auto& p : v) {
          if (!p.pass) return kInternal;
        }
      }
      return kOk;
    }
    if (*cross) {
      cvtele::FidelityQuery a;
      a.input = cinput.state();
      a.r = r;
      a.channel = {eta_lo, nth};
      a.spec = {cvtele::parse_ng_kind(op == "none" ? "ps" : op), order, 1.0};
      a.order = cvtele::StrategyOrder::kNgThenNc;
      cvtele::FidelityQuery b = a;
      b.order = cvtele::StrategyOrder::kNcThenNg;
      const auto res = cvtele::find_crossover(a, b, eta_lo, eta_hi, cross_tol,
                                              {grid_points, 1e-6});
      print_kv("eta_star", res.eta_star);
      print_kv("bracket_lo", res.bracket_lo);
      print_kv("bracket_hi", res.bracket_hi);
      std::printf("iterations=%d\n", res.iterations);
      return kOk;
    }
    if (*val) {
      const auto points = cvtele::validation_preset(preset);
      const auto v = cvtele::run_validation(points, cvtele::worker_threads_from_env());
      cvtele::print_validation(std::cout, v);
      for (const auto& p : v) {
        if (!p.pass) return kInternal;
      }
      return kOk;
    }
  } catch (const cvtele::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfig;
  } catch (const cvtele::BracketError& e) {
    std::cerr << "bracket error: " << e.what() << '\n';
    return kBracket;
  } catch (const cvtele::ZeroProbabilityError& e) {
    std::cerr << "zero probability: " << e.what() << '\n';
    return kDomain;
  } catch (const cvtele::DomainError& e) {
    std::cerr << "domain error: " << e.what() << '\n';
    return kDomain;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kInternal;
  }
  return kInternal;
}
