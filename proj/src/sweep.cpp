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


#include "cvtele/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <thread>

#include "cvtele/errors.hpp"

namespace cvtele {

using nlohmann::json;

namespace {

[[noreturn]] void config_fail(const std::string& path, const std::string& msg) {
  throw ConfigError(path + ": " + msg);
}

void check_keys(const json& obj, const std::string& path,
                std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) config_fail(path, "expected an object");
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool ok = false;
    for (const char* k : allowed) ok = ok || it.key() == k;
    if (!ok) config_fail(path + "." + it.key(), "unknown field");
  }
}

const json& require(const json& obj, const std::string& path, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end()) config_fail(path + "." + key, "missing required field");
  return *it;
}

double number(const json& v, const std::string& path) {
  if (!v.is_number()) config_fail(path, "expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) config_fail(path, "must be finite");
  return x;
}

std::string text(const json& v, const std::string& path) {
  if (!v.is_string()) config_fail(path, "expected a string");
  return v.get<std::string>();
}

std::vector<double> number_list(const json& v, const std::string& path) {
  std::vector<double> out;
  if (v.is_array()) {
    if (v.empty()) config_fail(path, "list must be nonempty");
    for (std::size_t i = 0; i < v.size(); ++i) {
      out.push_back(number(v[i], path + "[" + std::to_string(i) + "]"));
    }
  } else {
    out.push_back(number(v, path));
  }
  return out;
}

void check_domain(const std::vector<double>& xs, const std::string& path,
                  double lo, double hi) {
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (xs[i] < lo || xs[i] > hi) {
      std::ostringstream os;
      os << "value " << xs[i] << " outside [" << lo << ", " << hi << "]";
      config_fail(xs.size() > 1 ? path + "[" + std::to_string(i) + "]" : path,
                  os.str());
    }
  }
}

double snap(double v) { return std::stod(format_number(v)); }

std::string_view input_kind_name(const InputState& in) {
  return in.kind == InputState::Kind::kCoherent ? "coherent"
                                                : "squeezed_vacuum";
}

}  // namespace

std::vector<double> AxisGrid::values() const {
  if (!(step > 0.0)) throw ConfigError("axis_grid.step: must be > 0");
  if (stop < start) throw ConfigError("axis_grid.stop: must be >= start");
  const auto n = static_cast<long>(std::floor((stop - start) / step + 1e-9)) + 1;
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(n));
  for (long i = 0; i < n; ++i) {
    out.push_back(snap(start + static_cast<double>(i) * step));
  }
  return out;
}

ExperimentConfig parse_config(const json& doc) {
  check_keys(doc, "$",
             {"input", "sweep_axis", "fixed", "axis_grid", "operations",
              "baseline", "optimizer", "oracle_validation"});
  ExperimentConfig cfg;

  const json& in = require(doc, "$", "input");
  check_keys(in, "$.input", {"kind", "alpha", "sigma"});
  const std::string kind = text(require(in, "$.input", "kind"), "$.input.kind");
  if (kind == "coherent") {
    Complex alpha = 0.0;
    if (in.contains("alpha")) {
      const json& a = in["alpha"];
      if (!a.is_array() || a.size() != 2) {
        config_fail("$.input.alpha", "expected [re, im]");
      }
      alpha = {number(a[0], "$.input.alpha[0]"),
               number(a[1], "$.input.alpha[1]")};
    }
    if (in.contains("sigma")) {
      config_fail("$.input.sigma", "only valid for squeezed_vacuum");
    }
    cfg.input = InputState::coherent_state(alpha);
  } else if (kind == "squeezed_vacuum") {
    const double s = number(require(in, "$.input", "sigma"), "$.input.sigma");
    if (in.contains("alpha")) {
      config_fail("$.input.alpha", "only valid for coherent");
    }
    cfg.input = InputState::squeezed_vacuum_state(s);
  } else {
    config_fail("$.input.kind",
                "unknown input '" + kind + "' (coherent, squeezed_vacuum)");
  }

  const std::string axis =
      text(require(doc, "$", "sweep_axis"), "$.sweep_axis");
  if (axis == "eta") {
    cfg.axis = SweepAxis::kEta;
  } else if (axis == "r") {
    cfg.axis = SweepAxis::kR;
  } else {
    config_fail("$.sweep_axis", "expected 'eta' or 'r'");
  }

  const json& fixed = require(doc, "$", "fixed");
  check_keys(fixed, "$.fixed", {"r", "eta", "nth"});
  const char* other = cfg.axis == SweepAxis::kEta ? "r" : "eta";
  const char* swept = cfg.axis == SweepAxis::kEta ? "eta" : "r";
  if (fixed.contains(swept)) {
    config_fail(std::string("$.fixed.") + swept, "is the swept axis");
  }
  auto fixed_other =
      number_list(require(fixed, "$.fixed", other), std::string("$.fixed.") + other);
  cfg.nth = number_list(require(fixed, "$.fixed", "nth"), "$.fixed.nth");
  check_domain(cfg.nth, "$.fixed.nth", 0.0, 1e6);
  if (cfg.axis == SweepAxis::kEta) {
    check_domain(fixed_other, "$.fixed.r", 0.0, 20.0);
    cfg.r = fixed_other;
  } else {
    check_domain(fixed_other, "$.fixed.eta", 0.0, 1.0);
    cfg.eta = fixed_other;
  }

  const json& grid = require(doc, "$", "axis_grid");
  check_keys(grid, "$.axis_grid", {"start", "stop", "step"});
  cfg.grid.start = number(require(grid, "$.axis_grid", "start"), "$.axis_grid.start");
  cfg.grid.stop = number(require(grid, "$.axis_grid", "stop"), "$.axis_grid.stop");
  cfg.grid.step = number(require(grid, "$.axis_grid", "step"), "$.axis_grid.step");
  if (!(cfg.grid.step > 0.0)) config_fail("$.axis_grid.step", "must be > 0");
  if (cfg.grid.stop < cfg.grid.start) {
    config_fail("$.axis_grid.stop", "must be >= start");
  }
  const double hi = cfg.axis == SweepAxis::kEta ? 1.0 : 20.0;
  check_domain({cfg.grid.start}, "$.axis_grid.start", 0.0, hi);
  check_domain({cfg.grid.stop}, "$.axis_grid.stop", 0.0, hi);

  const json& ops = require(doc, "$", "operations");
  if (!ops.is_array()) config_fail("$.operations", "expected a list");
  if (ops.empty()) config_fail("$.operations", "list must be nonempty");
  for (std::size_t i = 0; i < ops.size(); ++i) {
    const std::string p = "$.operations[" + std::to_string(i) + "]";
    check_keys(ops[i], p, {"kind", "order", "strategy"});
    Operation op;
    const std::string k = text(require(ops[i], p, "kind"), p + ".kind");
    try {
      op.kind = parse_ng_kind(k);
    } catch (const DomainError& e) {
      config_fail(p + ".kind", e.what());
    }
    if (op.kind == NgKind::kNone) {
      config_fail(p + ".kind", "use \"baseline\" for the no-operation curve");
    }
    const json& o = require(ops[i], p, "order");
    if (!o.is_number_integer()) config_fail(p + ".order", "expected an integer");
    op.order = o.get<int>();
    if (op.order < 1 || op.order > kDefaultFockCap) {
      config_fail(p + ".order", "must be in [1, " +
                                    std::to_string(kDefaultFockCap) + "]");
    }
    const std::string s = text(require(ops[i], p, "strategy"), p + ".strategy");
    if (s != "ng-nc" && s != "nc-ng") {
      config_fail(p + ".strategy", "expected 'ng-nc' or 'nc-ng'");
    }
    op.strategy = parse_strategy(s);
    cfg.operations.push_back(op);
  }

  if (doc.contains("baseline")) {
    if (!doc["baseline"].is_boolean()) config_fail("$.baseline", "expected a boolean");
    cfg.baseline = doc["baseline"].get<bool>();
  }
  if (doc.contains("optimizer")) {
    const json& opt = doc["optimizer"];
    check_keys(opt, "$.optimizer", {"grid_points", "tolerance"});
    if (opt.contains("grid_points")) {
      if (!opt["grid_points"].is_number_integer() ||
          opt["grid_points"].get<long>() < 2 ||
          opt["grid_points"].get<long>() > 100000) {
        config_fail("$.optimizer.grid_points", "expected an integer in [2, 100000]");
      }
      cfg.optimizer.grid_points = opt["grid_points"].get<int>();
    }
    if (opt.contains("tolerance")) {
      cfg.optimizer.tolerance =
          number(opt["tolerance"], "$.optimizer.tolerance");
      if (!(cfg.optimizer.tolerance > 0.0)) {
        config_fail("$.optimizer.tolerance", "must be > 0");
      }
    }
  }
  if (doc.contains("oracle_validation")) {
    if (!doc["oracle_validation"].is_boolean()) {
      config_fail("$.oracle_validation", "expected a boolean");
    }
    cfg.oracle_validation = doc["oracle_validation"].get<bool>();
  }
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError(path + ": cannot open config file");
  json doc;
  try {
    doc = json::parse(f);
  } catch (const json::parse_error& e) {
    throw ConfigError(path + ": " + e.what());
  }
  return parse_config(doc);
}

int worker_threads_from_env() {
  if (const char* env = std::getenv("CVTELEPORT_THREADS")) {
    char* end = nullptr;
    const long n = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && n >= 1) return static_cast<int>(std::min(n, 256L));
    throw ConfigError("CVTELEPORT_THREADS: expected a positive integer");
  }
  const unsigned hc = std::thread::hardware_concurrency();
  return hc == 0 ? 1 : static_cast<int>(hc);
}

void parallel_for(std::size_t n, int threads,
                  const std::function<void(std::size_t)>& f) {
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        f(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const std::size_t nt =
      std::min<std::size_t>(n, static_cast<std::size_t>(std::max(1, threads)));
  if (nt <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < nt; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

std::vector<SweepRow> run_sweep(const ExperimentConfig& cfg, int threads) {
  std::vector<Operation> ops = cfg.operations;
  if (cfg.baseline) ops.push_back(Operation{NgKind::kNone, 0, StrategyOrder::kNcOnly});
  if (ops.empty()) throw ConfigError("$.operations: list must be nonempty");
  const std::vector<double> axis = cfg.grid.values();
  const std::vector<double>& panel =
      cfg.axis == SweepAxis::kEta ? cfg.r : cfg.eta;

  std::vector<SweepRow> rows;
  for (const Operation& op : ops) {
    for (double pv : panel) {
      for (double nth : cfg.nth) {
        for (double a : axis) {
          SweepRow row;
          row.input = cfg.input;
          row.axis = cfg.axis;
          row.axis_value = a;
          row.r = cfg.axis == SweepAxis::kEta ? pv : a;
          row.eta = cfg.axis == SweepAxis::kEta ? a : pv;
          row.nth = nth;
          row.op = op;
          rows.push_back(row);
        }
      }
    }
  }

  parallel_for(rows.size(), threads, [&](std::size_t i) {
    SweepRow& row = rows[i];
    FidelityQuery q;
    q.input = row.input;
    q.r = row.r;
    q.channel = {row.eta, row.nth};
    q.spec = {row.op.kind, std::max(1, row.op.order), 1.0};
    q.order = row.op.strategy;
    try {
      const OptResult res = optimal_fidelity(q, cfg.optimizer);
      if (row.op.kind != NgKind::kNone) row.t_star = res.t_star;
      row.fidelity = res.f_star;
      row.probability = res.probability_at_opt;
      row.evaluations = res.evaluations;
    } catch (const ZeroProbabilityError&) {
      row.evaluations = cfg.optimizer.grid_points;
    }
  });
  return rows;
}

std::string csv_header() {
  return "input_kind,sigma,sweep_axis,axis_value,r,eta,nth,op_kind,op_order,"
         "strategy,t_star,fidelity,success_probability,evaluations";
}

std::string format_number(double v) {
  if (v == 0.0) return "0";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string format_row(const SweepRow& row) {
  auto opt = [](const std::optional<double>& v) {
    return v ? format_number(*v) : std::string();
  };
  std::ostringstream os;
  const bool squeezed = row.input.kind == InputState::Kind::kSqueezedVacuum;
  os << input_kind_name(row.input) << ','
     << (squeezed ? format_number(row.input.sigma) : std::string()) << ','
     << (row.axis == SweepAxis::kEta ? "eta" : "r") << ','
     << format_number(row.axis_value) << ',' << format_number(row.r) << ','
     << format_number(row.eta) << ',' << format_number(row.nth) << ','
     << to_string(row.op.kind) << ','
     << (row.op.kind == NgKind::kNone ? std::string()
                                      : std::to_string(row.op.order))
     << ',' << to_string(row.op.strategy) << ',' << opt(row.t_star) << ','
     << opt(row.fidelity) << ',' << opt(row.probability) << ','
     << row.evaluations;
  return os.str();
}

void write_csv(std::ostream& os, const std::vector<SweepRow>& rows) {
  os << csv_header() << '\n';
  for (const auto& row : rows) os << format_row(row) << '\n';
}

std::vector<FidelityQuery> validation_preset(const std::string& name) {
  struct Triple {
    double r, eta, t;
  };
  const Triple triples[3] = {{0.1, 0.3, 0.5}, {0.5, 0.7, 0.9}, {0.9, 1.0, 0.9}};
  auto make = [](InputState in, double r, double eta, double nth, NgKind k,
                 int order, double t, StrategyOrder s) {
    FidelityQuery q;
    q.input = in;
    q.r = r;
    q.channel = {eta, nth};
    q.spec = {k, order, t};
    q.order = s;
    return q;
  };
  const InputState coh = InputState::coherent_state(0.0);
  const InputState sq = InputState::squeezed_vacuum_state(0.6);
  std::vector<FidelityQuery> out;
  if (name == "standard") {
    for (NgKind k : {NgKind::kPS, NgKind::kPA, NgKind::kPC})
      for (int order : {1, 2})
        for (StrategyOrder s : {StrategyOrder::kNgThenNc, StrategyOrder::kNcThenNg})
          for (double nth : {1e-1, 1e-5})
            for (int i = 0; i < 3; ++i) {
              const Triple& tr = triples[i];
              out.push_back(make(i == 2 ? sq : coh, tr.r, tr.eta, nth, k, order,
                                 tr.t, s));
            }
    return out;
  }
  if (name == "quick") {
    const auto ng = StrategyOrder::kNgThenNc, nc = StrategyOrder::kNcThenNg;
    out.push_back(make(coh, 0.5, 0.7, 0.1, NgKind::kNone, 1, 1.0, StrategyOrder::kNcOnly));
    out.push_back(make(coh, 0.5, 0.7, 0.1, NgKind::kPS, 1, 0.9, ng));
    out.push_back(make(coh, 0.5, 0.7, 0.1, NgKind::kPS, 1, 0.9, nc));
    out.push_back(make(coh, 0.1, 0.3, 1e-5, NgKind::kPA, 1, 0.5, ng));
    out.push_back(make(coh, 0.5, 0.7, 1e-5, NgKind::kPC, 1, 0.9, nc));
    out.push_back(make(coh, 0.5, 0.3, 0.1, NgKind::kPS, 2, 0.5, nc));
    out.push_back(make(sq, 0.5, 1.0, 1e-5, NgKind::kPA, 2, 0.9, ng));
    out.push_back(make(sq, 0.1, 0.7, 0.1, NgKind::kPC, 2, 0.5, ng));
    return out;
  }
  throw DomainError("unknown validation preset '" + name +
                    "' (expected quick, standard)");
}

namespace {

void oracle_compare(ValidationPoint& v, double tolerance) {
  try {
    const auto o = oracle::oracle_pipeline(v.query);
    v.f_oracle = o.fidelity;
    v.p_oracle = o.probability;
    v.cutoff = o.cutoff;
    v.pass = std::abs(v.f_engine - v.f_oracle) <= tolerance &&
             std::abs(v.p_engine - v.p_oracle) <= tolerance;
  } catch (const std::exception& e) {
    v.error = e.what();
    v.pass = false;
  }
}

}  // namespace

std::vector<ValidationPoint> run_validation(
    const std::vector<FidelityQuery>& points, int threads, double tolerance) {
  std::vector<ValidationPoint> out(points.size());
  parallel_for(points.size(), threads, [&](std::size_t i) {
    ValidationPoint& v = out[i];
    v.query = points[i];
    try {
      const Evaluation e = evaluate_query(v.query);
      v.f_engine = e.fidelity;
      v.p_engine = e.probability;
    } catch (const std::exception& e) {
      v.error = std::string("engine: ") + e.what();
      return;
    }
    oracle_compare(v, tolerance);
  });
  return out;
}

std::vector<ValidationPoint> validate_rows(const std::vector<SweepRow>& rows,
                                           int threads, double tolerance) {
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].fidelity) idx.push_back(i);
  }
  std::vector<ValidationPoint> out(idx.size());
  parallel_for(idx.size(), threads, [&](std::size_t k) {
    const SweepRow& row = rows[idx[k]];
    ValidationPoint& v = out[k];
    v.query.input = row.input;
    v.query.r = row.r;
    v.query.channel = {row.eta, row.nth};
    v.query.spec = {row.op.kind, std::max(1, row.op.order),
                    row.t_star.value_or(1.0)};
    v.query.order = row.op.strategy;
    v.f_engine = *row.fidelity;
    v.p_engine = row.probability.value_or(1.0);
    oracle_compare(v, tolerance);
  });
  return out;
}

void print_validation(std::ostream& os, const std::vector<ValidationPoint>& v) {
  std::size_t passed = 0;
  double max_df = 0.0, max_dp = 0.0;
  os << "# idx input r eta nth op order strategy T cutoff F_engine F_oracle "
        "|dF| |dp| status\n";
  for (std::size_t i = 0; i < v.size(); ++i) {
    const ValidationPoint& p = v[i];
    const double df = std::abs(p.f_engine - p.f_oracle);
    const double dp = std::abs(p.p_engine - p.p_oracle);
    if (p.error.empty()) {
      max_df = std::max(max_df, df);
      max_dp = std::max(max_dp, dp);
    }
    passed += p.pass ? 1 : 0;
    os << i << ' ' << input_kind_name(p.query.input) << ' '
       << format_number(p.query.r) << ' ' << format_number(p.query.channel.eta)
       << ' ' << format_number(p.query.channel.nth) << ' '
       << to_string(p.query.spec.kind) << ' ' << p.query.spec.order << ' '
       << to_string(p.query.order) << ' '
       << format_number(p.query.spec.transmissivity) << ' ' << p.cutoff << ' '
       << std::setprecision(12) << p.f_engine << ' ' << p.f_oracle << ' '
       << std::setprecision(3) << df << ' ' << dp << ' '
       << (p.pass ? "PASS" : "FAIL");
    if (!p.error.empty()) os << " error=\"" << p.error << '"';
    os << '\n';
  }
  os << "summary points=" << v.size() << " passed=" << passed
     << " failed=" << v.size() - passed << std::setprecision(3)
     << " max_abs_dF=" << max_df << " max_abs_dp=" << max_dp
     << " result=" << (passed == v.size() ? "PASS" : "FAIL") << '\n';
}

}  // namespace cvtele
